//! Hamiltonian builders for every stage of the reduction chain.
//!
//! Each builder documents its factor layout; spins always come first
//! (basis order excited, ground), bosonic modes after. All energies are
//! angular frequencies with ħ = 1.

use serde::Serialize;

use super::derive::DerivedScales;
use super::formulas::SpinPolaritonCouplings;
use crate::error::{Error, Result};
use crate::quantum::{annihilation, embed, number, pauli, sum, Operator, Pauli, Space};

const HERMITICITY_TOL: f64 = 1e-12;

fn require_layout(space: &Space, spins: usize, bosons: usize, name: &str) -> Result<()> {
    let f = space.factors();
    if f.len() != spins + bosons || f[..spins].iter().any(|&d| d != 2) {
        return Err(Error::LayoutMismatch(format!(
            "{name} expects {spins} qubit factor(s) followed by {bosons} bosonic factor(s), got {f:?}"
        )));
    }
    Ok(())
}

fn finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} is not finite")));
        }
    }
    Ok(())
}

fn checked(h: Operator) -> Result<Operator> {
    if !h.is_hermitian(HERMITICITY_TOL) {
        return Err(Error::NotHermitian(h.hermiticity_defect()));
    }
    Ok(h)
}

fn required(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParameter(format!("{name} is not available in the derived scales")))
}

/// Local operators on one slot of a space.
struct Ops<'a> {
    space: &'a Space,
}

impl<'a> Ops<'a> {
    fn sz(&self, slot: usize) -> Result<Operator> {
        embed(&pauli(Pauli::Z), slot, self.space)
    }
    fn sp(&self, slot: usize) -> Result<Operator> {
        embed(&pauli(Pauli::Plus), slot, self.space)
    }
    fn sm(&self, slot: usize) -> Result<Operator> {
        embed(&pauli(Pauli::Minus), slot, self.space)
    }
    fn a(&self, slot: usize) -> Result<Operator> {
        embed(&annihilation(self.space.factors()[slot])?, slot, self.space)
    }
    fn n(&self, slot: usize) -> Result<Operator> {
        embed(&number(self.space.factors()[slot])?, slot, self.space)
    }
}

/// `g (A B + A† B†)` for the common "operator plus Hermitian conjugate" term.
fn plus_hc(g: f64, a: &Operator, b: &Operator) -> Result<Operator> {
    let t = a.mul(b)?;
    Ok(t.add(&t.adjoint())?.scale_real(g))
}

/// Terms of the rotating-frame system Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SystemTerms {
    pub delta_nv: f64,
    pub delta_c: f64,
    pub delta_m: f64,
    pub kerr: f64,
    pub rabi_d: f64,
    pub lambda: f64,
    pub g_m: f64,
}

/// Rotating-frame Hamiltonian on `[spin, cavity, magnon]`:
/// `½Δ_NV σ_z + Δ_c a†a + δ_m m†m + K m†m†mm + Ω_d(m† + m)
///  + λ(σ_+a + a†σ_−) + g_m(a†m + a m†)`.
pub fn build_h_sys(t: &SystemTerms, space: &Space) -> Result<Operator> {
    require_layout(space, 1, 2, "H_sys")?;
    finite(&[
        ("delta_nv", t.delta_nv),
        ("delta_c", t.delta_c),
        ("delta_m", t.delta_m),
        ("K", t.kerr),
        ("Omega_d", t.rabi_d),
        ("lambda", t.lambda),
        ("g_m", t.g_m),
    ])?;
    let o = Ops { space };
    let (a, m) = (o.a(1)?, o.a(2)?);
    let md = m.adjoint();
    let kerr_term = md.mul(&md)?.mul(&m)?.mul(&m)?.scale_real(t.kerr);
    checked(sum(
        space,
        &[
            o.sz(0)?.scale_real(0.5 * t.delta_nv),
            o.n(1)?.scale_real(t.delta_c),
            o.n(2)?.scale_real(t.delta_m),
            kerr_term,
            m.add(&md)?.scale_real(t.rabi_d),
            plus_hc(t.lambda, &o.sp(0)?, &a)?,
            plus_hc(t.g_m, &a.adjoint(), &m)?,
        ],
    )?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearizedTerms {
    pub delta_nv: f64,
    pub delta_c: f64,
    /// Kerr-shifted magnon detuning Δ_m.
    pub delta_m_eff: f64,
    pub k_s: f64,
    pub lambda: f64,
    pub g_m: f64,
}

/// Linearized Hamiltonian on `[spin, cavity, magnon]`:
/// `½Δ_NV σ_z + Δ_c a†a + Δ_m m†m + K_s(m² + m†²) + λ(σ_+a + a†σ_−)
///  + g_m(a†m + a m†)`.
pub fn build_h_lin(t: &LinearizedTerms, space: &Space) -> Result<Operator> {
    require_layout(space, 1, 2, "H_lin")?;
    finite(&[
        ("delta_nv", t.delta_nv),
        ("delta_c", t.delta_c),
        ("Delta_m", t.delta_m_eff),
        ("K_s", t.k_s),
        ("lambda", t.lambda),
        ("g_m", t.g_m),
    ])?;
    let o = Ops { space };
    let (a, m) = (o.a(1)?, o.a(2)?);
    checked(sum(
        space,
        &[
            o.sz(0)?.scale_real(0.5 * t.delta_nv),
            o.n(1)?.scale_real(t.delta_c),
            o.n(2)?.scale_real(t.delta_m_eff),
            plus_hc(t.k_s, &m, &m)?,
            plus_hc(t.lambda, &o.sp(0)?, &a)?,
            plus_hc(t.g_m, &a.adjoint(), &m)?,
        ],
    )?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezedTerms {
    pub delta_nv: f64,
    pub delta_c: f64,
    pub delta_s: f64,
    pub g: f64,
    pub lambda: f64,
}

/// Cavity coupled to the squeezed magnon,
/// `Δ_c a†a + Δ_s m_s†m_s + G(a† + a)(m_s† + m_s)`, on `[cavity, magnon]`;
/// on `[spin, cavity, magnon]` the spin terms `½Δ_NV σ_z + λ(σ_+a + a†σ_−)`
/// are added.
pub fn build_h_cms(t: &SqueezedTerms, space: &Space) -> Result<Operator> {
    let spins = match space.num_factors() {
        2 => 0,
        _ => {
            require_layout(space, 1, 2, "H_CMS")?;
            1
        }
    };
    finite(&[("delta_nv", t.delta_nv), ("delta_c", t.delta_c), ("delta_s", t.delta_s), ("G", t.g), ("lambda", t.lambda)])?;
    let o = Ops { space };
    let (a, ms) = (o.a(spins)?, o.a(spins + 1)?);
    let xa = a.add(&a.adjoint())?;
    let xm = ms.add(&ms.adjoint())?;
    let mut terms = vec![
        o.n(spins)?.scale_real(t.delta_c),
        o.n(spins + 1)?.scale_real(t.delta_s),
        xa.mul(&xm)?.scale_real(t.g),
    ];
    if spins == 1 {
        terms.push(o.sz(0)?.scale_real(0.5 * t.delta_nv));
        terms.push(plus_hc(t.lambda, &o.sp(0)?, &a)?);
    }
    checked(sum(space, &terms)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinPolaritonTerms {
    pub delta_nv: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub couplings: SpinPolaritonCouplings,
}

/// Spin–polariton Hamiltonian on `[spin, LP, HP]`:
/// `½Δ_NV σ_z + ω_+ a_+†a_+ + ω_− a_−†a_−
///  + g_r(σ_+a_− + σ_−a_−†) + g_cr(σ_+a_−† + σ_−a_−)
///  + g'_r(σ_+a_+ + σ_−a_+†) + g'_cr(σ_+a_+† + σ_−a_+)`.
pub fn build_h_cmp(t: &SpinPolaritonTerms, space: &Space) -> Result<Operator> {
    require_layout(space, 1, 2, "H_CMP")?;
    if !(t.omega_minus > 0.0) {
        return Err(Error::UnstablePolariton(t.omega_minus));
    }
    let c = &t.couplings;
    finite(&[
        ("delta_nv", t.delta_nv),
        ("omega_plus", t.omega_plus),
        ("g_r", c.g_r),
        ("g_cr", c.g_cr),
        ("g_r_prime", c.g_r_prime),
        ("g_cr_prime", c.g_cr_prime),
    ])?;
    let o = Ops { space };
    let sp = o.sp(0)?;
    let (lp, hp) = (o.a(1)?, o.a(2)?);
    checked(sum(
        space,
        &[
            o.sz(0)?.scale_real(0.5 * t.delta_nv),
            o.n(1)?.scale_real(t.omega_minus),
            o.n(2)?.scale_real(t.omega_plus),
            plus_hc(c.g_r, &sp, &lp)?,
            plus_hc(c.g_cr, &sp, &lp.adjoint())?,
            plus_hc(c.g_r_prime, &sp, &hp)?,
            plus_hc(c.g_cr_prime, &sp, &hp.adjoint())?,
        ],
    )?)
}

/// Parameters shared by the Jaynes–Cummings and Tavis–Cummings models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JcTerms {
    pub delta_nv: f64,
    pub omega_minus: f64,
    pub g_r: f64,
}

/// Jaynes–Cummings model on `[spin, LP]`:
/// `½Δ_NV σ_z + ω_− a_−†a_− + g_r(σ_+a_− + σ_−a_−†)`.
pub fn build_h_jc(t: &JcTerms, space: &Space) -> Result<Operator> {
    require_layout(space, 1, 1, "H_JC")?;
    finite(&[("delta_nv", t.delta_nv), ("omega_minus", t.omega_minus), ("g_r", t.g_r)])?;
    let o = Ops { space };
    checked(sum(
        space,
        &[
            o.sz(0)?.scale_real(0.5 * t.delta_nv),
            o.n(1)?.scale_real(t.omega_minus),
            plus_hc(t.g_r, &o.sp(0)?, &o.a(1)?)?,
        ],
    )?)
}

/// Two-spin Tavis–Cummings model on `[spin1, spin2, LP]`:
/// `ω_− a_−†a_− + ½Δ_NV(σ_z¹ + σ_z²) + g_r[(σ_+¹ + σ_+²)a_− + h.c.]`.
pub fn build_h_tc(t: &JcTerms, space: &Space) -> Result<Operator> {
    require_layout(space, 2, 1, "H_TC")?;
    finite(&[("delta_nv", t.delta_nv), ("omega_minus", t.omega_minus), ("g_r", t.g_r)])?;
    let o = Ops { space };
    let lp = o.a(2)?;
    let collective = o.sp(0)?.add(&o.sp(1)?)?;
    checked(sum(
        space,
        &[
            o.n(2)?.scale_real(t.omega_minus),
            o.sz(0)?.add(&o.sz(1)?)?.scale_real(0.5 * t.delta_nv),
            plus_hc(t.g_r, &collective, &lp)?,
        ],
    )?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExchangeTerms {
    pub omega_eff: f64,
    pub g_eff: f64,
}

/// Effective spin–spin Hamiltonian on `[spin1, spin2]`:
/// `½ω_eff(σ_z¹ + σ_z²) + g_eff(σ_+¹σ_−² + σ_−¹σ_+²)`.
pub fn build_h_eff(t: &ExchangeTerms, space: &Space) -> Result<Operator> {
    require_layout(space, 2, 0, "H_eff")?;
    finite(&[("omega_eff", t.omega_eff), ("g_eff", t.g_eff)])?;
    let o = Ops { space };
    checked(sum(
        space,
        &[
            o.sz(0)?.add(&o.sz(1)?)?.scale_real(0.5 * t.omega_eff),
            plus_hc(t.g_eff, &o.sp(0)?, &o.sm(1)?)?,
        ],
    )?)
}

impl JcTerms {
    pub fn from_scales(s: &DerivedScales) -> Result<Self> {
        Ok(Self {
            delta_nv: s.delta_nv,
            omega_minus: required("omega_minus", s.omega_minus)?,
            g_r: required("g_r", s.g_r)?,
        })
    }
}

impl SpinPolaritonTerms {
    pub fn from_scales(s: &DerivedScales) -> Result<Self> {
        Ok(Self {
            delta_nv: s.delta_nv,
            omega_plus: s.omega_plus,
            omega_minus: required("omega_minus", s.omega_minus)?,
            couplings: SpinPolaritonCouplings {
                g_r: required("g_r", s.g_r)?,
                g_cr: required("g_cr", s.g_cr)?,
                g_r_prime: required("g_r_prime", s.g_r_prime)?,
                g_cr_prime: required("g_cr_prime", s.g_cr_prime)?,
            },
        })
    }
}

impl ExchangeTerms {
    pub fn from_scales(s: &DerivedScales) -> Result<Self> {
        Ok(Self { omega_eff: required("omega_eff", s.omega_eff)?, g_eff: required("g_eff", s.g_eff)? })
    }
}

impl SqueezedTerms {
    pub fn from_scales(s: &DerivedScales) -> Self {
        Self { delta_nv: s.delta_nv, delta_c: s.delta_c, delta_s: s.delta_s, g: s.g, lambda: s.lambda }
    }
}

impl LinearizedTerms {
    pub fn from_scales(s: &DerivedScales) -> Result<Self> {
        Ok(Self {
            delta_nv: s.delta_nv,
            delta_c: s.delta_c,
            delta_m_eff: required("Delta_m", s.delta_m_eff)?,
            k_s: required("K_s", s.k_s)?,
            lambda: s.lambda,
            g_m: s.g_m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::formulas::squeezing_parameter;
    use crate::model::formulas::squeezed_frequency;
    use approx::assert_relative_eq;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn jc_decoupled_spectrum() {
        let (dnv, wm, d) = (1.3, 0.7, 6);
        let space = Space::new(&[2, d]).unwrap();
        let h = build_h_jc(&JcTerms { delta_nv: dnv, omega_minus: wm, g_r: 0.0 }, &space).unwrap();
        let mut expected = Vec::new();
        for n in 0..d {
            expected.push(0.5 * dnv + n as f64 * wm);
            expected.push(-0.5 * dnv + n as f64 * wm);
        }
        let got = h.eigenvalues().unwrap();
        for (g, e) in got.iter().zip(sorted(expected)) {
            assert_relative_eq!(*g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn jc_vacuum_rabi_doublet() {
        let (w, g) = (2.0, 0.05);
        let space = Space::new(&[2, 5]).unwrap();
        let h = build_h_jc(&JcTerms { delta_nv: w, omega_minus: w, g_r: g }, &space).unwrap();
        // one-excitation block {|e,0⟩, |g,1⟩} has energies w/2 ± g
        let ev = h.eigenvalues().unwrap();
        let doublet: Vec<f64> = ev.iter().copied().filter(|&e| (e - 0.5 * w).abs() < 0.5).collect();
        assert_eq!(doublet.len(), 2);
        assert_relative_eq!(doublet[1] - doublet[0], 2.0 * g, max_relative = 1e-12);
    }

    #[test]
    fn exchange_singlet_triplet_split() {
        let space = Space::new(&[2, 2]).unwrap();
        let g_eff = -0.013;
        let h = build_h_eff(&ExchangeTerms { omega_eff: 1.0, g_eff }, &space).unwrap();
        let ev = h.eigenvalues().unwrap();
        // spectrum: -ω, ±g_eff (one-excitation), +ω
        assert_relative_eq!(ev[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(ev[2] - ev[1], 2.0 * g_eff.abs(), max_relative = 1e-12);
        assert_relative_eq!(ev[3], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn layout_mismatch_rejected() {
        let jc = JcTerms { delta_nv: 1.0, omega_minus: 1.0, g_r: 0.1 };
        assert!(matches!(build_h_jc(&jc, &Space::new(&[2, 2, 4]).unwrap()), Err(Error::LayoutMismatch(_))));
        assert!(matches!(build_h_tc(&jc, &Space::new(&[2, 4]).unwrap()), Err(Error::LayoutMismatch(_))));
        assert!(matches!(build_h_tc(&jc, &Space::new(&[3, 2, 4]).unwrap()), Err(Error::LayoutMismatch(_))));
        let nan = JcTerms { g_r: f64::NAN, ..jc };
        assert!(build_h_jc(&nan, &Space::new(&[2, 4]).unwrap()).is_err());
    }

    #[test]
    fn builders_hermitian() {
        let sys = SystemTerms { delta_nv: 1.0, delta_c: 2.0, delta_m: 0.5, kerr: -0.01, rabi_d: 0.3, lambda: 0.02, g_m: 0.1 };
        let s3 = Space::new(&[2, 4, 5]).unwrap();
        assert!(build_h_sys(&sys, &s3).unwrap().is_hermitian(1e-12));
        let lin = LinearizedTerms { delta_nv: 1.0, delta_c: 2.0, delta_m_eff: 5.0, k_s: -2.0, lambda: 0.02, g_m: 0.1 };
        assert!(build_h_lin(&lin, &s3).unwrap().is_hermitian(1e-12));
        let cms = SqueezedTerms { delta_nv: 1.0, delta_c: 2.0, delta_s: 3.0, g: 0.2, lambda: 0.02 };
        assert!(build_h_cms(&cms, &s3).unwrap().is_hermitian(1e-12));
        assert!(build_h_cms(&cms, &Space::new(&[4, 5]).unwrap()).unwrap().is_hermitian(1e-12));
        let cmp = SpinPolaritonTerms {
            delta_nv: 1.0,
            omega_plus: 5.0,
            omega_minus: 1.0,
            couplings: SpinPolaritonCouplings { g_r: 0.1, g_cr: 0.09, g_r_prime: 0.01, g_cr_prime: -0.002 },
        };
        assert!(build_h_cmp(&cmp, &s3).unwrap().is_hermitian(1e-12));
        let unstable = SpinPolaritonTerms { omega_minus: 0.0, ..cmp };
        assert!(matches!(build_h_cmp(&unstable, &s3), Err(Error::UnstablePolariton(_))));
    }

    #[test]
    fn kerr_term_acts_on_fock_states() {
        // K m†m†mm |n⟩ = K n(n−1) |n⟩
        let t = SystemTerms { delta_nv: 0.0, delta_c: 0.0, delta_m: 0.0, kerr: 0.5, rabi_d: 0.0, lambda: 0.0, g_m: 0.0 };
        let space = Space::new(&[2, 2, 6]).unwrap();
        let h = build_h_sys(&t, &space).unwrap();
        for n in 0..6 {
            let idx = space.index_of(&[1, 0, n]).unwrap();
            assert_relative_eq!(h.matrix()[(idx, idx)].re, 0.5 * (n * n.saturating_sub(1)) as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn linearized_matches_squeezed_spectrum() {
        // Bogoliubov-diagonalizable magnon (Δ_m = 5, K_s = −2 → r_m = ln 9/4,
        // Δ_s = 3) weakly coupled to the cavity. Level spacings of H_lin and
        // of the squeezed-frame H_S must agree on the lowest six levels.
        let (dm, ks) = (5.0, -2.0);
        let r = squeezing_parameter(dm, ks).unwrap();
        let ds = squeezed_frequency(dm, ks).unwrap();
        let g_m = 0.002;
        let lin = LinearizedTerms { delta_nv: 1.1, delta_c: 2.3, delta_m_eff: dm, k_s: ks, lambda: 0.01, g_m };
        let cms = SqueezedTerms { delta_nv: 1.1, delta_c: 2.3, delta_s: ds, g: 0.5 * g_m * r.exp(), lambda: 0.01 };
        let space = Space::new(&[2, 6, 20]).unwrap();
        let e_lin = build_h_lin(&lin, &space).unwrap().eigenvalues().unwrap();
        let e_cms = build_h_cms(&cms, &space).unwrap().eigenvalues().unwrap();
        let worst = (0..6)
            .map(|k| ((e_lin[k] - e_lin[0]) - (e_cms[k] - e_cms[0])).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3 * ds, "mismatch {worst}");
        // vacuum energy of the Bogoliubov mode is shifted by (Δ_s − Δ_m)/2
        assert!(((e_lin[0] - e_cms[0]) - 0.5 * (ds - dm)).abs() < 1e-3 * ds);
    }
}
