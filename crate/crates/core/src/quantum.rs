//! Dense operator algebra on truncated tensor-product Hilbert spaces.
//!
//! Factor order is fixed across the crate: spin 1, spin 2 (if present),
//! then the bosonic modes. Qubit bases are ordered (excited, ground), so
//! `σ_z = diag(1, -1)` and `σ_+ = |e⟩⟨g|` has its single entry at (0, 1).

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Ordered list of factor dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Space {
    factors: Vec<usize>,
}

impl Space {
    pub fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(bad));
        }
        Ok(Self { factors: factors.to_vec() })
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(&[dim])
    }

    pub fn qubit() -> Self {
        Self { factors: vec![2] }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().product()
    }

    /// Flat index of a product basis state `|i_0, i_1, ...⟩`.
    pub fn index_of(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.factors.len() {
            return Err(Error::DimensionMismatch { expected: self.factors.len(), found: levels.len() });
        }
        let mut idx = 0;
        for (&l, &d) in levels.iter().zip(&self.factors) {
            if l >= d {
                return Err(Error::DimensionMismatch { expected: d, found: l });
            }
            idx = idx * d + l;
        }
        Ok(idx)
    }

    /// Inverse of [`Space::index_of`].
    pub fn levels_of(&self, mut index: usize) -> Vec<usize> {
        let mut levels = vec![0; self.factors.len()];
        for (slot, &d) in self.factors.iter().enumerate().rev() {
            levels[slot] = index % d;
            index /= d;
        }
        levels
    }

    fn check_same(&self, other: &Space) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch { left: self.factors.clone(), right: other.factors.clone() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: Space,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: Space, matrix: CMatrix) -> Result<Self> {
        let n = space.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: &Space) -> Self {
        let n = space.dim();
        Self { space: space.clone(), matrix: CMatrix::zeros(n, n) }
    }

    pub fn identity(space: &Space) -> Self {
        let n = space.dim();
        Self { space: space.clone(), matrix: CMatrix::identity(n, n) }
    }

    /// Projector `|i⟩⟨i|` onto a product basis state.
    pub fn projector(space: &Space, levels: &[usize]) -> Result<Self> {
        let idx = space.index_of(levels)?;
        let mut op = Self::zeros(space);
        op.matrix[(idx, idx)] = ONE;
        Ok(op)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix - &other.matrix })
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Self { space: self.space.clone(), matrix: &self.matrix * factor }
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        self.scale(C64::new(factor, 0.0))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix * &other.matrix })
    }

    pub fn adjoint(&self) -> Operator {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(Self { space: self.space.clone(), matrix: m })
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Hermitian within `tol` relative to the largest entry (absolute for
    /// the zero operator).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = max_abs(&self.matrix).max(1.0);
        self.hermiticity_defect() <= tol * scale
    }

    /// Ascending eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(1e-10) {
            return Err(Error::NotHermitian(self.hermiticity_defect()));
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// `⟨ψ|O|ψ⟩` or `tr(O ρ)`.
    pub fn expectation(&self, state: &QuantumState) -> Result<C64> {
        self.space.check_same(state.space())?;
        Ok(match state {
            QuantumState::Pure { vector, .. } => vector.dotc(&(&self.matrix * vector)),
            QuantumState::Mixed { rho, .. } => trace_of_product(&self.matrix, rho),
        })
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }
}

/// Sums a list of operators on a common space.
pub fn sum(space: &Space, terms: &[Operator]) -> Result<Operator> {
    let mut total = Operator::zeros(space);
    for t in terms {
        total = total.add(t)?;
    }
    Ok(total)
}

/// Truncated annihilation operator, `⟨n-1|a|n⟩ = √n`.
pub fn annihilation(dim: usize) -> Result<Operator> {
    let space = Space::single(dim)?;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::new(space, m)
}

pub fn creation(dim: usize) -> Result<Operator> {
    Ok(annihilation(dim)?.adjoint())
}

pub fn number(dim: usize) -> Result<Operator> {
    let space = Space::single(dim)?;
    let m = CMatrix::from_diagonal(&CVector::from_fn(dim, |n, _| C64::new(n as f64, 0.0)));
    Operator::new(space, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    Z,
    Plus,
    Minus,
}

pub fn pauli(kind: Pauli) -> Operator {
    let mut m = CMatrix::zeros(2, 2);
    match kind {
        Pauli::Z => {
            m[(0, 0)] = ONE;
            m[(1, 1)] = -ONE;
        }
        // |e⟩⟨g| with e = index 0
        Pauli::Plus => m[(0, 1)] = ONE,
        Pauli::Minus => m[(1, 0)] = ONE,
    }
    Operator { space: Space::qubit(), matrix: m }
}

/// Places a single-factor operator on `slot` of `space`.
pub fn embed(op: &Operator, slot: usize, space: &Space) -> Result<Operator> {
    let factors = space.factors();
    if slot >= factors.len() {
        return Err(Error::SlotOutOfRange { slot, factors: factors.len() });
    }
    if op.dim() != factors[slot] {
        return Err(Error::DimensionMismatch { expected: factors[slot], found: op.dim() });
    }
    let before: usize = factors[..slot].iter().product();
    let after: usize = factors[slot + 1..].iter().product();
    let left = CMatrix::identity(before, before).kronecker(&op.matrix);
    let m = left.kronecker(&CMatrix::identity(after, after));
    Operator::new(space.clone(), m)
}

/// A pure or mixed state on a [`Space`].
#[derive(Clone, Debug)]
pub enum QuantumState {
    Pure { space: Space, vector: CVector },
    Mixed { space: Space, rho: CMatrix },
}

const NORM_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;

impl QuantumState {
    pub fn pure(space: Space, vector: CVector) -> Result<Self> {
        if vector.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: vector.len() });
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state vector norm {norm} != 1")));
        }
        Ok(Self::Pure { space, vector })
    }

    pub fn mixed(space: Space, rho: CMatrix) -> Result<Self> {
        let n = space.dim();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rho.nrows() });
        }
        let state = Self::Mixed { space, rho };
        state.validate()?;
        Ok(state)
    }

    /// Product basis state `|levels⟩`.
    pub fn basis(space: &Space, levels: &[usize]) -> Result<Self> {
        let idx = space.index_of(levels)?;
        let mut v = CVector::zeros(space.dim());
        v[idx] = ONE;
        Ok(Self::Pure { space: space.clone(), vector: v })
    }

    pub fn space(&self) -> &Space {
        match self {
            Self::Pure { space, .. } | Self::Mixed { space, .. } => space,
        }
    }

    pub fn density_matrix(&self) -> CMatrix {
        match self {
            Self::Pure { vector, .. } => vector * vector.adjoint(),
            Self::Mixed { rho, .. } => rho.clone(),
        }
    }

    pub fn to_mixed(&self) -> Self {
        Self::Mixed { space: self.space().clone(), rho: self.density_matrix() }
    }

    /// Checks the unit-norm / unit-trace, Hermiticity and positivity
    /// invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Pure { vector, .. } => {
                let norm = vector.norm();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(Error::InvalidState(format!("state vector norm {norm} != 1")));
                }
            }
            Self::Mixed { rho, .. } => {
                let tr = rho.trace();
                if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
                    return Err(Error::InvalidState(format!("trace {tr} != 1")));
                }
                let herm = max_abs(&(rho - rho.adjoint()));
                if herm > NORM_TOL {
                    return Err(Error::InvalidState(format!("density matrix not Hermitian ({herm:e})")));
                }
                let min_ev = min_eigenvalue(rho);
                if min_ev < -POSITIVITY_TOL {
                    return Err(Error::InvalidState(format!("negative eigenvalue {min_ev:e}")));
                }
            }
        }
        Ok(())
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Smallest eigenvalue of the Hermitian part of `m`.
///
/// Rows and columns that vanish identically are dropped first (each
/// contributes an exact zero eigenvalue). The QL iteration can break down
/// on matrices with long chains of near-underflow couplings and return
/// non-finite values; those are retried with a unit shift.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let n = herm.nrows();
    let support: Vec<usize> = (0..n).filter(|&i| herm.row(i).iter().any(|z| *z != ZERO)).collect();
    if support.is_empty() {
        return 0.0;
    }
    let block = CMatrix::from_fn(support.len(), support.len(), |i, j| herm[(support[i], support[j])]);
    let floor = if support.len() < n { 0.0 } else { f64::INFINITY };
    let smallest = |e: &CMatrix| {
        let ev = SymmetricEigen::new(e.clone()).eigenvalues;
        if ev.iter().all(|v| v.is_finite()) {
            Some(ev.iter().copied().fold(f64::INFINITY, f64::min))
        } else {
            None
        }
    };
    let value = smallest(&block).unwrap_or_else(|| {
        let shift = 1.0 + max_abs(&block);
        let shifted = &block + CMatrix::identity(block.nrows(), block.ncols()) * C64::new(shift, 0.0);
        smallest(&shifted).map_or(f64::NAN, |v| v - shift)
    });
    if value.is_nan() {
        value
    } else {
        value.min(floor)
    }
}

/// Single-mode squeeze unitary `exp[½ r (a² − a†²)]` on a truncated mode.
pub fn squeeze_operator(r: f64, dim: usize) -> Result<Operator> {
    let a = annihilation(dim)?;
    let a2 = a.mul(&a)?;
    // generator G = i·½r(a² − a†²) is Hermitian; S = exp(−i G)
    let gen = a2.sub(&a2.adjoint())?.scale(C64::new(0.0, 0.5 * r));
    unitary_exp(&gen, 1.0)
}

/// `exp(−i H t)` for Hermitian `H`, via eigendecomposition.
pub fn unitary_exp(h: &Operator, t: f64) -> Result<Operator> {
    if !h.is_hermitian(1e-10) {
        return Err(Error::NotHermitian(h.hermiticity_defect()));
    }
    let eig = SymmetricEigen::new(h.matrix.clone());
    let phases = CVector::from_iterator(
        h.dim(),
        eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    );
    let v = &eig.eigenvectors;
    let m = v * CMatrix::from_diagonal(&phases) * v.adjoint();
    Operator::new(h.space.clone(), m)
}
