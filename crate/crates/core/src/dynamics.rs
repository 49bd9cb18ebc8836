//! Unitary and Lindblad time evolution with observable extraction.
//!
//! Three propagators share one result type:
//! - [`evolve`]: adaptive Dormand–Prince 5(4) integration of the master
//!   equation in matrix form.
//! - [`evolve_unitary`]: exact closed-system evolution from the spectrum of
//!   `H`.
//! - [`evolve_krylov`]: the exact Lindblad propagator applied through an
//!   Arnoldi projection. Used where the Hamiltonian oscillates far faster
//!   than the dynamics of interest and an explicit integrator would need
//!   millions of steps.
//!
//! Internally all three work in a dimensionless time `τ = Ω t`, with `Ω` the
//! largest frequency scale of the model. Reported times are in seconds.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{
    embed, max_abs, min_eigenvalue, number, pauli, trace_of_product, CMatrix, CVector, Operator, Pauli,
    QuantumState, Space, C64, I, ONE,
};

#[derive(Clone, Debug)]
pub struct Collapse {
    pub operator: Operator,
    /// Prefactor of the dissipator, rad/s.
    pub rate: f64,
}

/// A Hamiltonian plus collapse channels `rate · 𝒟[operator]`.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: Operator,
    collapses: Vec<Collapse>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator, collapses: Vec<(Operator, f64)>) -> Result<Self> {
        if !hamiltonian.is_hermitian(1e-10) {
            return Err(Error::NotHermitian(hamiltonian.hermiticity_defect()));
        }
        let mut out = Vec::with_capacity(collapses.len());
        for (operator, rate) in collapses {
            if operator.space() != hamiltonian.space() {
                return Err(Error::SpaceMismatch {
                    left: hamiltonian.space().factors().to_vec(),
                    right: operator.space().factors().to_vec(),
                });
            }
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(Error::InvalidParameter(format!("collapse rate must be nonnegative, got {rate}")));
            }
            out.push(Collapse { operator, rate });
        }
        Ok(Self { hamiltonian, collapses: out })
    }

    pub fn closed(hamiltonian: Operator) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    pub fn space(&self) -> &Space {
        self.hamiltonian.space()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn collapses(&self) -> &[Collapse] {
        &self.collapses
    }

    /// Largest frequency scale (rad/s): the Hamiltonian's spectral radius
    /// bound and each channel's `rate · ‖L‖²`.
    pub fn frequency_scale(&self) -> f64 {
        let h = self.hamiltonian.matrix();
        // max row sum bounds the spectral radius
        let mut scale = (0..h.nrows()).map(|i| h.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        for c in &self.collapses {
            let l = c.operator.max_abs();
            scale = scale.max(c.rate * l * l * c.operator.dim() as f64);
        }
        if scale > 0.0 {
            scale
        } else {
            1.0
        }
    }
}

/// Precomputed generator `ρ ↦ −i(H̃ρ − ρH̃†) + Σ γ LρL†` with the
/// non-Hermitian `H̃ = H − ½i Σ γ L†L`, all in units of `scale`.
struct Generator {
    h_eff: CMatrix,
    h_eff_adj: CMatrix,
    jumps: Vec<(CMatrix, CMatrix, f64)>,
}

impl Generator {
    fn new(model: &LindbladModel, scale: f64) -> Self {
        let mut h_eff = model.hamiltonian.matrix() / C64::new(scale, 0.0);
        let mut jumps = Vec::new();
        for c in &model.collapses {
            if c.rate == 0.0 {
                continue;
            }
            let l = c.operator.matrix().clone();
            let ld = l.adjoint();
            let rate = c.rate / scale;
            h_eff -= (&ld * &l) * C64::new(0.0, 0.5 * rate);
            jumps.push((l, ld, rate));
        }
        let h_eff_adj = h_eff.adjoint();
        Self { h_eff, h_eff_adj, jumps }
    }

    fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = (&self.h_eff * rho - rho * &self.h_eff_adj) * (-I);
        for (l, ld, rate) in &self.jumps {
            out += (l * rho * ld) * C64::new(*rate, 0.0);
        }
        out
    }
}

/// `dρ/dt` under the master equation, in rad/s units of the model.
pub fn liouvillian_apply(model: &LindbladModel, rho: &QuantumState) -> Result<CMatrix> {
    if rho.space() != model.space() {
        return Err(Error::SpaceMismatch { left: model.space().factors().to_vec(), right: rho.space().factors().to_vec() });
    }
    rho.validate()?;
    Ok(Generator::new(model, 1.0).apply(&rho.density_matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative local error per step (Runge–Kutta) or per interval (Krylov).
    pub rtol: f64,
    pub atol: f64,
    /// Consecutive step rejections tolerated before giving up.
    pub max_rejections: u32,
    pub max_steps: usize,
    /// Largest accepted `|tr ρ − 1|`.
    pub trace_tol: f64,
    /// Evolution aborts once the smallest eigenvalue of ρ drops below
    /// `-positivity_abort`.
    pub positivity_abort: f64,
    /// Arnoldi basis size.
    pub krylov_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_rejections: 60,
            max_steps: 5_000_000,
            trace_tol: 1e-8,
            positivity_abort: 1e-6,
            krylov_dim: 40,
        }
    }
}

impl Tolerances {
    pub fn with_rtol(rtol: f64) -> Self {
        Self { rtol, atol: 1e-2 * rtol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.rtol > 0.0 && self.atol >= 0.0 && self.trace_tol > 0.0 && self.krylov_dim >= 2;
        if !ok {
            return Err(Error::InvalidParameter(format!("invalid tolerances {self:?}")));
        }
        Ok(())
    }
}

/// Per-step health record of an evolution.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub method: String,
    /// Times (s) at which the records below were taken: accepted steps for
    /// the integrator, output points for the propagators.
    pub step_times: Vec<f64>,
    pub trace_deviation: Vec<f64>,
    pub min_eigenvalue: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Accumulated local error bound (max-abs on ρ).
    pub error_estimate: f64,
}

impl Diagnostics {
    pub fn max_trace_deviation(&self) -> f64 {
        self.trace_deviation.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolutionResult {
    /// Seconds.
    pub times: Vec<f64>,
    pub observables: BTreeMap<String, Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl EvolutionResult {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.observables.get(name).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn check_observables(space: &Space, observables: &[(String, Operator)]) -> Result<()> {
    for (name, op) in observables {
        if op.space() != space {
            return Err(Error::SpaceMismatch { left: space.factors().to_vec(), right: op.space().factors().to_vec() });
        }
        if !op.is_hermitian(1e-10) {
            return Err(Error::InvalidParameter(format!("observable {name} is not Hermitian")));
        }
    }
    Ok(())
}

struct Recorder<'a> {
    observables: &'a [(String, Operator)],
    series: Vec<Vec<f64>>,
}

impl<'a> Recorder<'a> {
    fn new(observables: &'a [(String, Operator)], n: usize) -> Self {
        Self { observables, series: vec![Vec::with_capacity(n); observables.len()] }
    }

    fn record_rho(&mut self, rho: &CMatrix) {
        for ((_, op), s) in self.observables.iter().zip(&mut self.series) {
            s.push(trace_of_product(op.matrix(), rho).re);
        }
    }

    fn record_psi(&mut self, psi: &CVector) {
        for ((_, op), s) in self.observables.iter().zip(&mut self.series) {
            s.push(psi.dotc(&(op.matrix() * psi)).re);
        }
    }

    fn finish(self) -> BTreeMap<String, Vec<f64>> {
        self.observables.iter().map(|(n, _)| n.clone()).zip(self.series).collect()
    }
}

fn hermitize(rho: &mut CMatrix) {
    let adj = rho.adjoint();
    *rho += adj;
    *rho *= C64::new(0.5, 0.0);
}

fn trace_deviation(rho: &CMatrix) -> f64 {
    (rho.trace() - ONE).norm()
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(terms: &[(f64, &CMatrix)], base: &CMatrix, h: f64) -> CMatrix {
    let mut out = base.clone();
    for (c, m) in terms {
        if *c != 0.0 {
            out += *m * C64::new(h * c, 0.0);
        }
    }
    out
}

/// Master-equation evolution by adaptive Dormand–Prince 5(4) with PI step
/// control. `rho0` is the state at `t_grid[0]`; observables are evaluated
/// at every grid time. ρ is re-Hermitized after each accepted step and its
/// trace and smallest eigenvalue are logged.
pub fn evolve(
    model: &LindbladModel,
    rho0: &QuantumState,
    t_grid: &[f64],
    observables: &[(String, Operator)],
    tol: &Tolerances,
) -> Result<EvolutionResult> {
    tol.validate()?;
    check_grid(t_grid)?;
    check_observables(model.space(), observables)?;
    if rho0.space() != model.space() {
        return Err(Error::SpaceMismatch { left: model.space().factors().to_vec(), right: rho0.space().factors().to_vec() });
    }
    rho0.validate()?;

    let scale = model.frequency_scale();
    let gen = Generator::new(model, scale);
    let mut rho = rho0.density_matrix();
    let mut rec = Recorder::new(observables, t_grid.len());
    rec.record_rho(&rho);
    let mut diag = Diagnostics { method: "dormand-prince-5(4)".into(), ..Default::default() };

    let t0 = t_grid[0];
    let mut tau = 0.0;
    let mut h = 1e-2;
    let mut err_prev: f64 = 1e-4;
    let mut k1 = gen.apply(&rho);
    let mut steps = 0usize;

    for &t_out in &t_grid[1..] {
        let tau_out = (t_out - t0) * scale;
        let mut rejections = 0u32;
        while tau < tau_out {
            let last = tau + h >= tau_out * (1.0 - 1e-14);
            let step = if last { tau_out - tau } else { h };
            let k2 = gen.apply(&lin(&[(A21, &k1)], &rho, step));
            let k3 = gen.apply(&lin(&[(A31, &k1), (A32, &k2)], &rho, step));
            let k4 = gen.apply(&lin(&[(A41, &k1), (A42, &k2), (A43, &k3)], &rho, step));
            let k5 = gen.apply(&lin(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], &rho, step));
            let k6 = gen.apply(&lin(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], &rho, step));
            let next = lin(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], &rho, step);
            let k7 = gen.apply(&next);
            let err_m = lin(&[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)], &CMatrix::zeros(rho.nrows(), rho.ncols()), step);

            let mut err: f64 = 0.0;
            for ((e, y0), y1) in err_m.iter().zip(rho.iter()).zip(next.iter()) {
                let sc = tol.atol + tol.rtol * y0.norm().max(y1.norm());
                err = err.max(e.norm() / sc);
            }
            if !err.is_finite() {
                return Err(Error::ToleranceFailure(format!("non-finite error estimate at t = {:e} s", t0 + tau / scale)));
            }

            if err <= 1.0 {
                tau = if last { tau_out } else { tau + step };
                rho = next;
                hermitize(&mut rho);
                k1 = if last { gen.apply(&rho) } else { k7 };
                diag.accepted_steps += 1;
                diag.error_estimate += max_abs(&err_m);
                let t_now = t0 + tau / scale;
                let dev = trace_deviation(&rho);
                let min_ev = min_eigenvalue(&rho);
                diag.step_times.push(t_now);
                diag.trace_deviation.push(dev);
                diag.min_eigenvalue.push(min_ev);
                if !(min_ev >= -tol.positivity_abort) {
                    return Err(Error::PositivityViolation { time: t_now, min_eigenvalue: min_ev });
                }
                if dev > tol.trace_tol {
                    return Err(Error::ToleranceFailure(format!("trace deviation {dev:e} at t = {t_now:e} s")));
                }
                let e = err.max(1e-10);
                let fac = (0.9 * e.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)).clamp(0.2, 5.0);
                err_prev = e;
                if !last || fac < 1.0 {
                    h = step * fac;
                }
                rejections = 0;
            } else {
                diag.rejected_steps += 1;
                rejections += 1;
                if rejections > tol.max_rejections {
                    return Err(Error::ToleranceFailure(format!(
                        "step size underflow after {rejections} rejections at t = {:e} s",
                        t0 + tau / scale
                    )));
                }
                h = step * (0.9 * err.powf(-0.2)).max(0.1);
            }
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::ToleranceFailure(format!("exceeded {} integration steps", tol.max_steps)));
            }
        }
        rec.record_rho(&rho);
    }
    Ok(EvolutionResult { times: t_grid.to_vec(), observables: rec.finish(), diagnostics: diag })
}

/// Closed-system evolution `|ψ(t)⟩ = V e^{−iE(t−t₀)} V†|ψ₀⟩` from the
/// eigendecomposition of `h`.
pub fn evolve_unitary(
    h: &Operator,
    psi0: &QuantumState,
    t_grid: &[f64],
    observables: &[(String, Operator)],
) -> Result<EvolutionResult> {
    if !h.is_hermitian(1e-10) {
        return Err(Error::NotHermitian(h.hermiticity_defect()));
    }
    check_grid(t_grid)?;
    check_observables(h.space(), observables)?;
    let QuantumState::Pure { space, vector } = psi0 else {
        return Err(Error::InvalidState("unitary evolution needs a pure initial state".into()));
    };
    if space != h.space() {
        return Err(Error::SpaceMismatch { left: h.space().factors().to_vec(), right: space.factors().to_vec() });
    }
    psi0.validate()?;

    let eig = SymmetricEigen::new(h.matrix().clone());
    let v = &eig.eigenvectors;
    let coeffs = v.adjoint() * vector;
    let mut rec = Recorder::new(observables, t_grid.len());
    let mut diag = Diagnostics { method: "eigendecomposition".into(), ..Default::default() };
    for &t in t_grid {
        let dt = t - t_grid[0];
        let phased = CVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(eig.eigenvalues.iter()).map(|(c, &e)| c * C64::from_polar(1.0, -e * dt)),
        );
        let psi = v * phased;
        let dev = (psi.norm_squared() - 1.0).abs();
        if dev > 1e-10 {
            return Err(Error::ToleranceFailure(format!("norm drift {dev:e} at t = {t:e} s")));
        }
        diag.step_times.push(t);
        diag.trace_deviation.push(dev);
        diag.min_eigenvalue.push(0.0);
        rec.record_psi(&psi);
    }
    diag.accepted_steps = t_grid.len().saturating_sub(1);
    Ok(EvolutionResult { times: t_grid.to_vec(), observables: rec.finish(), diagnostics: diag })
}

/// Arnoldi basis of the Krylov space of `start` under the generator.
struct Arnoldi {
    basis: Vec<CMatrix>,
    hess: CMatrix,
    m: usize,
    beta: f64,
    residual: f64,
    /// The space closed: `𝓛` maps its span into itself.
    invariant: bool,
}

fn arnoldi(gen: &Generator, start: &CMatrix, m_max: usize) -> Arnoldi {
    let beta = start.norm();
    let mut basis: Vec<CMatrix> = vec![start / C64::new(beta, 0.0)];
    let mut hess = CMatrix::zeros(m_max + 1, m_max);
    let mut m = m_max;
    let mut residual = 0.0;
    let mut invariant = false;
    for j in 0..m_max {
        let mut w = gen.apply(&basis[j]);
        let w_norm = w.norm();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let hij = v.dotc(&w);
                hess[(i, j)] += hij;
                w -= v * hij;
            }
        }
        let hn = w.norm();
        if hn <= 1e-14 * w_norm.max(f64::MIN_POSITIVE) {
            m = j + 1;
            invariant = true;
            break;
        }
        hess[(j + 1, j)] = C64::new(hn, 0.0);
        residual = hn;
        basis.push(w / C64::new(hn, 0.0));
    }
    Arnoldi { basis, hess, m, beta, residual, invariant }
}

impl Arnoldi {
    fn combine(&self, coeffs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.basis[0].nrows(), self.basis[0].ncols());
        for i in 0..coeffs.nrows() {
            out += &self.basis[i] * (coeffs[(i, 0)] * self.beta);
        }
        out
    }
}

/// `exp(τ𝓛)ρ` for one interval, by Arnoldi projection with adaptive
/// sub-stepping. Returns the propagated state, the accumulated error
/// estimate and the number of sub-steps.
fn krylov_propagate(gen: &Generator, rho: &CMatrix, dt: f64, tol: &Tolerances) -> Result<(CMatrix, f64, usize)> {
    let mut state = rho.clone();
    let mut done = 0.0;
    let mut err_total = 0.0;
    let mut substeps = 0usize;
    while done < dt {
        if state.norm() == 0.0 {
            break;
        }
        let k = arnoldi(gen, &state, tol.krylov_dim);
        let m = k.m;
        let remaining = dt - done;
        let mut tau = remaining;
        let mut halvings = 0u32;
        loop {
            // augmented matrix carries the first correction term
            let size = if k.invariant { m } else { m + 1 };
            let mut aug = CMatrix::zeros(size, size);
            aug.view_mut((0, 0), (m, m)).copy_from(&k.hess.view((0, 0), (m, m)));
            if !k.invariant {
                aug[(m, m - 1)] = C64::new(k.residual, 0.0);
            }
            aug *= C64::new(tau, 0.0);
            let e = aug.exp();
            let err = if k.invariant { 0.0 } else { k.beta * e[(m, 0)].norm() };
            let budget = tol.rtol.max(1e-15) * k.beta * (tau / dt);
            if err <= budget || halvings > tol.max_rejections {
                if halvings > tol.max_rejections {
                    return Err(Error::ToleranceFailure("Krylov sub-step underflow".into()));
                }
                state = k.combine(&e.columns(0, 1).into_owned());
                done = if tau == remaining { dt } else { done + tau };
                err_total += err;
                substeps += 1;
                break;
            }
            tau *= 0.5;
            halvings += 1;
        }
    }
    Ok((state, err_total, substeps))
}

/// Lindblad evolution through the exact propagator `exp(𝓛Δt)` between
/// consecutive grid times, evaluated by Arnoldi projection. Exact (up to
/// rounding) whenever the state's Krylov space closes, as it does for
/// few-excitation initial states under number-conserving Hamiltonians.
pub fn evolve_krylov(
    model: &LindbladModel,
    rho0: &QuantumState,
    t_grid: &[f64],
    observables: &[(String, Operator)],
    tol: &Tolerances,
) -> Result<EvolutionResult> {
    tol.validate()?;
    check_grid(t_grid)?;
    check_observables(model.space(), observables)?;
    if rho0.space() != model.space() {
        return Err(Error::SpaceMismatch { left: model.space().factors().to_vec(), right: rho0.space().factors().to_vec() });
    }
    rho0.validate()?;

    let scale = model.frequency_scale();
    let gen = Generator::new(model, scale);
    let mut rho = rho0.density_matrix();
    let mut rec = Recorder::new(observables, t_grid.len());
    rec.record_rho(&rho);
    let mut diag = Diagnostics { method: "krylov-propagator".into(), ..Default::default() };
    // a closed Krylov space of ρ(0) carries the whole trajectory
    let global = arnoldi(&gen, &rho, tol.krylov_dim);
    let hm = global.hess.view((0, 0), (global.m, global.m)).into_owned();
    for w in t_grid.windows(2) {
        if global.invariant {
            let e = (&hm * C64::new((w[1] - t_grid[0]) * scale, 0.0)).exp();
            rho = global.combine(&e.columns(0, 1).into_owned());
            diag.accepted_steps += 1;
        } else {
            let (next, err, substeps) = krylov_propagate(&gen, &rho, (w[1] - w[0]) * scale, tol)?;
            rho = next;
            diag.accepted_steps += substeps;
            diag.error_estimate += err;
        }
        hermitize(&mut rho);
        let dev = trace_deviation(&rho);
        let min_ev = min_eigenvalue(&rho);
        diag.step_times.push(w[1]);
        diag.trace_deviation.push(dev);
        diag.min_eigenvalue.push(min_ev);
        if !(min_ev >= -tol.positivity_abort) {
            return Err(Error::PositivityViolation { time: w[1], min_eigenvalue: min_ev });
        }
        if dev > tol.trace_tol {
            return Err(Error::ToleranceFailure(format!("trace deviation {dev:e} at t = {:e} s", w[1])));
        }
        rec.record_rho(&rho);
    }
    Ok(EvolutionResult { times: t_grid.to_vec(), observables: rec.finish(), diagnostics: diag })
}

/// Factor layouts produced by the Hamiltonian builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Layout {
    /// `[spin, LP]`
    Jc,
    /// `[spin1, spin2, LP]`
    Tc,
    /// `[spin1, spin2]`
    Eff,
    /// `[spin, LP, HP]`
    Cmp,
}

/// Named occupation observables for a builder layout: `spin1_occupation`,
/// `spin2_occupation`, `lp_occupation`, `hp_occupation` where the factor
/// exists, and `top_fock_population` (summed over bosonic factors).
pub fn standard_observables(space: &Space, layout: Layout) -> Result<Vec<(String, Operator)>> {
    let f = space.factors();
    let ok = match layout {
        Layout::Jc => f.len() == 2 && f[0] == 2 && f[1] >= 2,
        Layout::Tc => f.len() == 3 && f[0] == 2 && f[1] == 2 && f[2] >= 2,
        Layout::Eff => f == [2, 2],
        Layout::Cmp => f.len() == 3 && f[0] == 2 && f[1] >= 2 && f[2] >= 2,
    };
    if !ok {
        return Err(Error::LayoutMismatch(format!("{layout:?} does not fit factors {f:?}")));
    }
    let excited = Operator::projector(&Space::qubit(), &[0])?;
    let spin = |slot| embed(&excited, slot, space);
    let boson = |slot: usize| embed(&number(f[slot])?, slot, space);
    let top = |slot: usize| {
        let q = Operator::projector(&Space::single(f[slot])?, &[f[slot] - 1])?;
        embed(&q, slot, space)
    };
    let mut out = vec![("spin1_occupation".to_string(), spin(0)?)];
    match layout {
        Layout::Jc => {
            out.push(("lp_occupation".into(), boson(1)?));
            out.push(("top_fock_population".into(), top(1)?));
        }
        Layout::Tc => {
            out.push(("spin2_occupation".into(), spin(1)?));
            out.push(("lp_occupation".into(), boson(2)?));
            out.push(("top_fock_population".into(), top(2)?));
        }
        Layout::Eff => out.push(("spin2_occupation".into(), spin(1)?)),
        Layout::Cmp => {
            out.push(("lp_occupation".into(), boson(1)?));
            out.push(("hp_occupation".into(), boson(2)?));
            out.push(("top_fock_population".into(), top(1)?.add(&top(2)?)?));
        }
    }
    Ok(out)
}

/// `σ_−` on a spin slot.
pub fn spin_lowering(space: &Space, slot: usize) -> Result<Operator> {
    embed(&pauli(Pauli::Minus), slot, space)
}

/// Uniform grid of `n` points on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && t_end.is_finite()) || n < 2 {
        return Err(Error::InvalidParameter(format!("grid needs t_end > 0 and n ≥ 2, got {t_end}, {n}")));
    }
    Ok((0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect())
}
