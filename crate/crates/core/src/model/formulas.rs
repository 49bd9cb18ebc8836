//! Closed-form scales of the reduction chain. All frequencies in rad/s.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::params::CouplingCalibration;
use crate::error::{Error, Result};
use crate::units::{HBAR, MU_0, MU_B};

/// Default minimum of |Δ_NV − ω_−| / g_r for the dispersive reduction.
pub const DEFAULT_DISPERSIVE_RATIO: f64 = 10.0;

fn gyromagnetic_ratio(g_e: f64) -> f64 {
    g_e * MU_B / HBAR
}

fn sphere_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

/// NV transition frequency `ω_NV = D − g_e μ_B B_ex / ħ`.
pub fn spin_frequency(zero_field_splitting: f64, g_e: f64, b_ex: f64) -> Result<f64> {
    let omega = zero_field_splitting - gyromagnetic_ratio(g_e) * b_ex;
    if omega <= 0.0 {
        return Err(Error::UnphysicalRegime(format!(
            "omega_NV = {omega:e} rad/s: B_ex is past the level crossing"
        )));
    }
    Ok(omega)
}

/// Kerr coefficient `K = μ_0 K_an γ² / (M² V_m)`, signed like `K_an`.
pub fn kerr_coefficient(k_an: f64, g_e: f64, magnetization: f64, radius: f64) -> Result<f64> {
    let volume = sphere_volume(radius);
    if !(volume > 0.0) || magnetization == 0.0 {
        return Err(Error::UnphysicalRegime("zero sphere volume or magnetization".into()));
    }
    let gamma = gyromagnetic_ratio(g_e);
    Ok(MU_0 * k_an * gamma * gamma / (magnetization * magnetization * volume))
}

/// Kittel-mode frequency `ω_m = γB_0 − (2s − 1)·K`.
pub fn magnon_frequency(
    b_0: f64,
    k_an: f64,
    magnetization: f64,
    radius: f64,
    s_total: f64,
    g_e: f64,
) -> Result<f64> {
    let kerr = kerr_coefficient(k_an, g_e, magnetization, radius)?;
    let omega = gyromagnetic_ratio(g_e) * b_0 - (2.0 * s_total - 1.0) * kerr;
    if omega <= 0.0 {
        return Err(Error::UnphysicalRegime(format!("omega_m = {omega:e} rad/s is not positive")));
    }
    Ok(omega)
}

/// Spin–cavity coupling `λ = 2 g_e μ_B B_rms(d) / ħ` with
/// `B_rms = μ_0 I_rms / (2π d)` and `I_rms = √(ħ ω_c / 2 L_a)`.
pub fn spin_cavity_coupling(omega_c: f64, inductance: f64, distance: f64, g_e: f64) -> Result<f64> {
    if distance <= 0.0 {
        return Err(Error::SingularGeometry(format!("spin distance d = {distance} m")));
    }
    if inductance <= 0.0 || omega_c <= 0.0 {
        return Err(Error::InvalidParameter("omega_c and L_a must be positive".into()));
    }
    let i_rms = (HBAR * omega_c / (2.0 * inductance)).sqrt();
    let b_rms = MU_0 * i_rms / (2.0 * PI * distance);
    Ok(2.0 * g_e * MU_B * b_rms / HBAR)
}

/// Cavity–magnon coupling from the power-law calibration.
pub fn cavity_magnon_coupling(radius: f64, calibration: &CouplingCalibration) -> Result<f64> {
    if radius <= 0.0 {
        return Err(Error::SingularGeometry(format!("sphere radius R = {radius} m")));
    }
    calibration.validate()?;
    Ok(calibration.g_ref * (radius / calibration.r_ref).powf(calibration.exponent))
}

/// `Δ_m = δ_m + 4K|⟨m⟩|²` and `K_s = K·⟨m⟩²`. The drive phase reference is
/// chosen so that ⟨m⟩² is real and positive, hence `K_s = K|⟨m⟩|²`.
pub fn two_magnon_params(delta_m: f64, kerr: f64, mean_m: Complex64) -> (f64, f64) {
    let n = mean_m.norm_sqr();
    (delta_m + 4.0 * kerr * n, kerr * n)
}

/// `r_m = ¼ ln[(Δ_m − 2K_s)/(Δ_m + 2K_s)]`.
pub fn squeezing_parameter(delta_m: f64, k_s: f64) -> Result<f64> {
    let arg = (delta_m - 2.0 * k_s) / (delta_m + 2.0 * k_s);
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::SqueezingUndefined(arg));
    }
    Ok(0.25 * arg.ln())
}

/// `Δ_s = √(Δ_m² − 4K_s²)`.
pub fn squeezed_frequency(delta_m: f64, k_s: f64) -> Result<f64> {
    let disc = delta_m * delta_m - 4.0 * k_s * k_s;
    if !(delta_m.abs() > 2.0 * k_s.abs()) || disc <= 0.0 {
        return Err(Error::SqueezingUndefined((delta_m - 2.0 * k_s) / (delta_m + 2.0 * k_s)));
    }
    Ok(disc.sqrt())
}

/// `G = ½ g_m e^{r_m}`.
pub fn enhanced_coupling(g_m: f64, r_m: f64) -> Result<f64> {
    if !(g_m > 0.0) {
        return Err(Error::InvalidParameter(format!("g_m must be positive, got {g_m}")));
    }
    Ok(0.5 * g_m * r_m.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolaritonFrequencies {
    pub omega_plus: f64,
    /// Signed; negative means the lower polariton is unstable.
    pub omega_minus_squared: f64,
}

impl PolaritonFrequencies {
    pub fn omega_plus_squared(&self) -> f64 {
        self.omega_plus * self.omega_plus
    }

    pub fn is_stable(&self) -> bool {
        self.omega_minus_squared > 0.0
    }

    pub fn omega_minus(&self) -> Result<f64> {
        if self.omega_minus_squared <= 0.0 {
            return Err(Error::UnstablePolariton(self.omega_minus_squared));
        }
        Ok(self.omega_minus_squared.sqrt())
    }
}

fn check_positive_detunings(delta_c: f64, delta_s: f64) -> Result<()> {
    if !(delta_c > 0.0 && delta_s > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Delta_c and Delta_s must be positive, got {delta_c:e}, {delta_s:e}"
        )));
    }
    Ok(())
}

/// `ω_±² = ½[Δ_c² + Δ_s² ± √((Δ_c² − Δ_s²)² + 16G²Δ_cΔ_s)]`.
pub fn polariton_frequencies(delta_c: f64, delta_s: f64, g: f64) -> Result<PolaritonFrequencies> {
    check_positive_detunings(delta_c, delta_s)?;
    let (c2, s2) = (delta_c * delta_c, delta_s * delta_s);
    let root = ((c2 - s2).powi(2) + 16.0 * g * g * delta_c * delta_s).sqrt();
    let plus_sq = 0.5 * (c2 + s2 + root);
    // ω_+²ω_−² = Δ_c²Δ_s² − 4G²Δ_cΔ_s; dividing avoids cancellation near G_c
    let product = delta_c * delta_s * (delta_c * delta_s - 4.0 * g * g);
    Ok(PolaritonFrequencies { omega_plus: plus_sq.sqrt(), omega_minus_squared: product / plus_sq })
}

/// `G_c = ½√(Δ_c Δ_s)`.
pub fn critical_coupling(delta_c: f64, delta_s: f64) -> Result<f64> {
    let product = delta_c * delta_s;
    if product < 0.0 {
        return Err(Error::UndefinedCriticality(product));
    }
    Ok(0.5 * product.sqrt())
}

/// Coupling `G` that places the lower polariton at `omega_minus`.
pub fn coupling_for_lower_polariton(delta_c: f64, delta_s: f64, omega_minus: f64) -> Result<f64> {
    check_positive_detunings(delta_c, delta_s)?;
    let x = omega_minus * omega_minus;
    let four_g2 = (delta_c * delta_c - x) * (delta_s * delta_s - x) / (delta_c * delta_s);
    if four_g2 < 0.0 || omega_minus > delta_c.min(delta_s) {
        return Err(Error::InvalidParameter(format!(
            "omega_minus = {omega_minus:e} exceeds min(Delta_c, Delta_s)"
        )));
    }
    Ok(0.5 * four_g2.sqrt())
}

/// Squeezed-magnon detuning `Δ_s` that, at coupling `g`, places the lower
/// polariton at `omega_minus`. Positive root of
/// `Δ_s²(Δ_c² − x) − 4G²Δ_cΔ_s − x(Δ_c² − x) = 0` with `x = ω_−²`.
pub fn squeezed_detuning_for_lower_polariton(delta_c: f64, g: f64, omega_minus: f64) -> Result<f64> {
    let x = omega_minus * omega_minus;
    let a = delta_c * delta_c - x;
    if !(delta_c > 0.0) || a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < omega_minus < Delta_c, got {omega_minus:e} and {delta_c:e}"
        )));
    }
    let b = 4.0 * g * g * delta_c;
    let disc = b * b + 4.0 * a * a * x;
    Ok((b + disc.sqrt()) / (2.0 * a))
}

/// Mixing angle, `tan 2θ = 4G√(Δ_cΔ_s)/(Δ_c² − Δ_s²)`, principal branch
/// θ ∈ (−π/4, π/4).
pub fn mixing_angle(delta_c: f64, delta_s: f64, g: f64) -> Result<f64> {
    check_positive_detunings(delta_c, delta_s)?;
    let denom = delta_c * delta_c - delta_s * delta_s;
    if denom == 0.0 {
        return Err(Error::DegenerateDetuning);
    }
    Ok(0.5 * (4.0 * g * (delta_c * delta_s).sqrt() / denom).atan())
}

/// Expansion of the cavity mode in polariton operators,
/// `a = u_− a_− + v_− a_−† + u_+ a_+ + v_+ a_+†`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CavityExpansion {
    pub u_minus: f64,
    pub v_minus: f64,
    pub u_plus: f64,
    pub v_plus: f64,
}

impl CavityExpansion {
    /// `(u_−² − v_−²) + (u_+² − v_+²)`; equals 1 when `[a, a†] = 1` holds.
    pub fn symplectic_norm(&self) -> f64 {
        (self.u_minus.powi(2) - self.v_minus.powi(2)) + (self.u_plus.powi(2) - self.v_plus.powi(2))
    }
}

fn check_polariton_inputs(delta_c: f64, omega_plus: f64, omega_minus: f64) -> Result<()> {
    if !(omega_minus > 0.0) {
        return Err(Error::UnstablePolariton(omega_minus * omega_minus.abs()));
    }
    if !(omega_plus > 0.0 && delta_c > 0.0) {
        return Err(Error::InvalidParameter("omega_plus and Delta_c must be positive".into()));
    }
    Ok(())
}

pub fn cavity_in_polariton_basis(
    theta: f64,
    delta_c: f64,
    omega_plus: f64,
    omega_minus: f64,
) -> Result<CavityExpansion> {
    check_polariton_inputs(delta_c, omega_plus, omega_minus)?;
    let lower = theta.cos() / (2.0 * (delta_c * omega_minus).sqrt());
    let upper = theta.sin() / (2.0 * (delta_c * omega_plus).sqrt());
    Ok(CavityExpansion {
        u_minus: lower * (delta_c + omega_minus),
        v_minus: lower * (delta_c - omega_minus),
        u_plus: upper * (delta_c + omega_plus),
        v_plus: upper * (delta_c - omega_plus),
    })
}

/// Spin–polariton couplings of the spin-CMP Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinPolaritonCouplings {
    /// Rotating spin–LP coupling.
    pub g_r: f64,
    /// Counterrotating spin–LP coupling.
    pub g_cr: f64,
    pub g_r_prime: f64,
    pub g_cr_prime: f64,
}

/// `g_{r,cr} = λ cosθ (Δ_c ± ω_−) / 2√(Δ_c ω_−)` and
/// `g'_{r,cr} = λ sinθ (Δ_c ± ω_+) / 2√(Δ_c ω_+)`.
pub fn polariton_spin_couplings(
    lambda: f64,
    theta: f64,
    delta_c: f64,
    omega_plus: f64,
    omega_minus: f64,
) -> Result<SpinPolaritonCouplings> {
    let e = cavity_in_polariton_basis(theta, delta_c, omega_plus, omega_minus)?;
    Ok(SpinPolaritonCouplings {
        g_r: lambda * e.u_minus,
        g_cr: lambda * e.v_minus,
        g_r_prime: lambda * e.u_plus,
        g_cr_prime: lambda * e.v_plus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffectiveExchange {
    pub g_eff: f64,
    pub omega_eff: f64,
}

/// `g_eff = −g_r²/Δ_NV`, `ω_eff = Δ_NV + 2 g_eff n_− + g_eff`.
pub fn effective_spin_spin(g_r: f64, delta_nv: f64, n_minus: f64) -> Result<EffectiveExchange> {
    if delta_nv == 0.0 {
        return Err(Error::DivisionByZero("Delta_NV = 0 in g_eff = -g_r^2/Delta_NV"));
    }
    let g_eff = -g_r * g_r / delta_nv;
    Ok(EffectiveExchange { g_eff, omega_eff: delta_nv + 2.0 * g_eff * n_minus + g_eff })
}

/// `|Δ_NV − ω_−| / g_r`, checked against `min_ratio`.
pub fn dispersive_check(delta_nv: f64, omega_minus: f64, g_r: f64, min_ratio: f64) -> Result<f64> {
    let ratio = (delta_nv - omega_minus).abs() / g_r.abs();
    if ratio < min_ratio {
        return Err(Error::NotDispersive { ratio, required: min_ratio });
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::calibrate_anisotropy;
    use crate::units::{angular, ordinary};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn spin_frequency_examples() {
        let d = angular(2.87e9);
        assert_eq!(spin_frequency(d, 2.0, 0.0).unwrap(), d);
        assert_eq!(spin_frequency(d, 0.0, 1.0).unwrap(), d);
        // g_e μ_B B_ex / ħ = 2π×1.91 GHz
        let b_ex = angular(1.91e9) * HBAR / (2.0 * MU_B);
        assert_relative_eq!(spin_frequency(d, 2.0, b_ex).unwrap(), angular(0.96e9), max_relative = 1e-12);
        assert!(matches!(spin_frequency(d, 2.0, 1.0), Err(Error::UnphysicalRegime(_))));
    }

    #[test]
    fn kerr_scaling() {
        let m = 1.4e5;
        let k_an = calibrate_anisotropy(TWO_PI * 128.0, 2.0, m, 50e-9);
        let k50 = kerr_coefficient(k_an, 2.0, m, 50e-9).unwrap();
        assert_relative_eq!(k50, TWO_PI * 128.0, max_relative = 1e-12);
        let k_big = kerr_coefficient(k_an, 2.0, m, 0.5e-3).unwrap();
        assert_relative_eq!(ordinary(k_big), 1.28e-10, max_relative = 1e-9);
        let k100 = kerr_coefficient(k_an, 2.0, m, 100e-9).unwrap();
        assert_relative_eq!(k50 / k100, 8.0, max_relative = 1e-12);
        assert!(kerr_coefficient(-k_an, 2.0, m, 50e-9).unwrap() < 0.0);
        assert!(kerr_coefficient(k_an, 2.0, m, 0.0).is_err());
    }

    #[test]
    fn magnon_frequency_examples() {
        let (m, r, g_e) = (1.4e5, 50e-9, 2.0);
        let gamma = g_e * MU_B / HBAR;
        let b_0 = angular(2e9) / gamma;
        assert_relative_eq!(magnon_frequency(b_0, 0.0, m, r, 1e6, g_e).unwrap(), angular(2e9), max_relative = 1e-14);
        let k_an = calibrate_anisotropy(TWO_PI * 128.0, g_e, m, r);
        assert_relative_eq!(magnon_frequency(b_0, k_an, m, r, 0.5, g_e).unwrap(), angular(2e9), max_relative = 1e-14);

        // independently coded expression: γB_0 − 2μ_0K_anγ²s/(M²V) + μ_0K_anγ²/(M²V)
        let s = 1e6;
        let v = 4.0 / 3.0 * PI * r * r * r;
        let direct = gamma * b_0 - 2.0 * MU_0 * k_an * gamma * gamma * s / (m * m * v)
            + MU_0 * k_an * gamma * gamma / (m * m * v);
        let got = magnon_frequency(b_0, k_an, m, r, s, g_e).unwrap();
        assert_relative_eq!(got, direct, max_relative = 1e-12);
        // 2 GHz − (2·10⁶ − 1)·128 Hz
        assert_relative_eq!(ordinary(got), 2e9 - (2e6 - 1.0) * 128.0, max_relative = 1e-12);
    }

    #[test]
    fn lambda_examples() {
        let (wc, la) = (angular(2e9), 2e-9);
        let near = spin_cavity_coupling(wc, la, 50e-9, 2.0).unwrap();
        let far = spin_cavity_coupling(wc, la, 5e-6, 2.0).unwrap();
        assert_relative_eq!(near * 50e-9, far * 5e-6, max_relative = 1e-12);
        // direct evaluation of the closed form with CODATA constants
        assert_relative_eq!(ordinary(near), 4076.097, max_relative = 1e-6);
        assert!(matches!(spin_cavity_coupling(wc, la, 0.0, 2.0), Err(Error::SingularGeometry(_))));
    }

    #[test]
    fn cavity_magnon_coupling_examples() {
        let cal = CouplingCalibration::default();
        assert_relative_eq!(cavity_magnon_coupling(50e-9, &cal).unwrap(), angular(0.2e6), max_relative = 1e-14);
        assert_relative_eq!(cavity_magnon_coupling(100e-9, &cal).unwrap(), angular(0.4e6), max_relative = 1e-14);
        let cal15 = CouplingCalibration { exponent: 1.5, ..cal };
        assert_relative_eq!(cavity_magnon_coupling(200e-9, &cal15).unwrap(), angular(1.6e6), max_relative = 1e-14);
        assert!(cavity_magnon_coupling(0.0, &cal).is_err());
    }

    #[test]
    fn two_magnon_examples() {
        assert_eq!(two_magnon_params(1.3, 0.7, Complex64::new(0.0, 0.0)), (1.3, 0.0));
        let (dm, ks) = two_magnon_params(1.0, -0.5, Complex64::new(2.0, 0.0));
        assert_eq!((dm, ks), (-7.0, -2.0));
        let (_, ks) = two_magnon_params(1.0, -0.5, Complex64::new(0.3, 0.0));
        assert!(ks < 0.0);
        // phase of ⟨m⟩ is absorbed into the drive reference
        let (dm2, ks2) = two_magnon_params(1.0, -0.5, Complex64::from_polar(2.0, 0.7));
        assert_relative_eq!(dm2, -7.0, max_relative = 1e-14);
        assert_relative_eq!(ks2, -2.0, max_relative = 1e-14);
    }

    #[test]
    fn squeezing_examples() {
        assert_eq!(squeezing_parameter(3.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(squeezing_parameter(5.0, -2.0).unwrap(), 0.25 * 9f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(squeezing_parameter(5.0, -2.0).unwrap(), 0.549306, max_relative = 1e-6);
        // approaching Δ_m = −2K_s from the stable side
        let r_close = squeezing_parameter(1.0, -0.5 + 1e-9).unwrap();
        assert!(r_close > 5.0);
        assert!(matches!(squeezing_parameter(1.0, -0.5), Err(Error::SqueezingUndefined(_))));
        assert!(matches!(squeezing_parameter(1.0, -0.6), Err(Error::SqueezingUndefined(_))));
    }

    #[test]
    fn squeezing_matches_symplectic_diagonalization() {
        // dynamical matrix of Δ m†m + K_s(m² + m†²) in (m, m†):
        // [[Δ, 2K_s], [−2K_s, −Δ]]; its positive eigenvector (u, v) has
        // v/u = (Δ_s − Δ)/(2K_s) = tanh r.
        let (dm, ks) = (5.0, -2.0);
        let m = nalgebra::Matrix2::new(dm, 2.0 * ks, -2.0 * ks, -dm);
        let eig = m.complex_eigenvalues();
        let pos = eig.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        assert_relative_eq!(pos, squeezed_frequency(dm, ks).unwrap(), max_relative = 1e-12);
        let ratio = (pos - dm) / (2.0 * ks);
        assert_relative_eq!(ratio.atanh(), squeezing_parameter(dm, ks).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn squeezed_frequency_examples() {
        assert_eq!(squeezed_frequency(-4.0, 0.0).unwrap(), 4.0);
        assert_relative_eq!(squeezed_frequency(5.0, -2.0).unwrap(), 3.0, max_relative = 1e-15);
        assert!(squeezed_frequency(1.0, 0.5).is_err());
    }

    #[test]
    fn enhanced_coupling_examples() {
        let gm = angular(0.2e6);
        assert_relative_eq!(ordinary(enhanced_coupling(gm, 3.0).unwrap()), 2.0086e6, max_relative = 1e-4);
        assert_relative_eq!(enhanced_coupling(gm, 0.0).unwrap(), gm / 2.0, max_relative = 1e-15);
        assert_relative_eq!(ordinary(enhanced_coupling(gm, 5.0).unwrap()), 14.8413e6, max_relative = 1e-5);
        assert!(enhanced_coupling(0.0, 1.0).is_err());
    }

    #[test]
    fn polariton_examples() {
        let p = polariton_frequencies(2.0, 1.0, 0.0).unwrap();
        assert_eq!(p.omega_plus, 2.0);
        assert_relative_eq!(p.omega_minus_squared, 1.0, max_relative = 1e-15);
        let p = polariton_frequencies(1.0, 3.0, 0.0).unwrap();
        assert_eq!(p.omega_plus, 3.0);
        assert_relative_eq!(p.omega_minus_squared, 1.0, max_relative = 1e-15);

        let gc = critical_coupling(2.0, 1.0).unwrap();
        assert_eq!(polariton_frequencies(2.0, 1.0, gc).unwrap().omega_minus_squared.abs() < 1e-15, true);

        let p = polariton_frequencies(2.0, 1.0, 0.5).unwrap();
        let s17 = 17f64.sqrt();
        assert_relative_eq!(p.omega_plus_squared(), (5.0 + s17) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(p.omega_minus_squared, (5.0 - s17) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(p.omega_plus_squared(), 4.56155, max_relative = 1e-5);
        assert_relative_eq!(p.omega_minus_squared, 0.43845, max_relative = 1e-4);

        assert!(polariton_frequencies(-1.0, 1.0, 0.1).is_err());
        let unstable = polariton_frequencies(2.0, 1.0, 1.01 * gc).unwrap();
        assert!(!unstable.is_stable());
        assert!(matches!(unstable.omega_minus(), Err(Error::UnstablePolariton(_))));
    }

    #[test]
    fn critical_coupling_examples() {
        assert_eq!(critical_coupling(1.0, 1.0).unwrap(), 0.5);
        assert_relative_eq!(critical_coupling(2.0, 1.0).unwrap(), 0.70711, max_relative = 1e-5);
        assert!(matches!(critical_coupling(-2.0, 1.0), Err(Error::UndefinedCriticality(_))));
    }

    #[test]
    fn mixing_angle_examples() {
        assert_eq!(mixing_angle(2.0, 1.0, 0.0).unwrap(), 0.0);
        let theta = mixing_angle(2.0, 1.0, 0.5).unwrap();
        assert_relative_eq!((2.0 * theta).tan(), 2.0 * 2f64.sqrt() / 3.0, max_relative = 1e-14);
        assert_relative_eq!(theta, 0.377985, max_relative = 1e-5);
        let far = mixing_angle(1e6, 1.0, 0.5).unwrap();
        assert!(far.abs() < 1e-8);
        assert_eq!(mixing_angle(1.0, 1.0, 0.5).unwrap_err(), Error::DegenerateDetuning);
        // Δ_c < Δ_s stays on the principal branch
        let neg = mixing_angle(1.0, 2.0, 0.5).unwrap();
        assert!(neg < 0.0 && neg > -PI / 4.0);
    }

    #[test]
    fn spin_polariton_coupling_examples() {
        // Δ_c = 10⁶ ω_−, θ ≈ 0, λ = 2π×7 kHz → g_r ≈ ½λ·10³
        let lambda = angular(7e3);
        let omega_minus = angular(1e3);
        let delta_c = 1e6 * omega_minus;
        let c = polariton_spin_couplings(lambda, 0.0, delta_c, delta_c, omega_minus).unwrap();
        assert_relative_eq!(ordinary(c.g_r), 3.5e6, max_relative = 1e-5);
        assert_relative_eq!(c.g_r, c.g_cr, max_relative = 3e-6);
        assert_eq!((c.g_r_prime, c.g_cr_prime), (0.0, 0.0));

        let c = polariton_spin_couplings(lambda, 0.2, 3.0, 5.0, 3.0).unwrap();
        assert_relative_eq!(c.g_r, lambda * 0.2f64.cos(), max_relative = 1e-14);
        assert_eq!(c.g_cr, 0.0);

        assert!(matches!(
            polariton_spin_couplings(lambda, 0.0, 3.0, 5.0, 0.0),
            Err(Error::UnstablePolariton(_))
        ));
    }

    #[test]
    fn effective_exchange_examples() {
        let e = effective_spin_spin(angular(3.5e6), angular(960e6), 0.0).unwrap();
        assert_relative_eq!(ordinary(e.g_eff.abs()), 12.7604e3, max_relative = 1e-5);
        assert!(e.g_eff < 0.0);
        assert_relative_eq!(e.omega_eff, angular(960e6) + e.g_eff, max_relative = 1e-15);
        let zero = effective_spin_spin(0.0, 5.0, 3.0).unwrap();
        assert_eq!((zero.g_eff, zero.omega_eff), (0.0, 5.0));
        let e2 = effective_spin_spin(1.0, 10.0, 2.0).unwrap();
        assert_relative_eq!(e2.omega_eff, 10.0 + 2.0 * (-0.1) * 2.0 - 0.1, max_relative = 1e-15);
        assert!(matches!(effective_spin_spin(1.0, 0.0, 0.0), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn dispersive_guard() {
        assert!(dispersive_check(100.0, 0.0, 1.0, DEFAULT_DISPERSIVE_RATIO).is_ok());
        assert!(matches!(dispersive_check(5.0, 0.0, 1.0, 10.0), Err(Error::NotDispersive { .. })));
    }

    #[test]
    fn cavity_expansion_examples() {
        let e = cavity_in_polariton_basis(0.0, 2.0, 3.0, 2.0).unwrap();
        assert_eq!((e.u_minus, e.v_minus, e.u_plus, e.v_plus), (1.0, 0.0, 0.0, 0.0));

        let (dc, ds, g) = (2.0, 1.0, 0.5);
        let p = polariton_frequencies(dc, ds, g).unwrap();
        let theta = mixing_angle(dc, ds, g).unwrap();
        let e = cavity_in_polariton_basis(theta, dc, p.omega_plus, p.omega_minus().unwrap()).unwrap();
        let wm = p.omega_minus().unwrap();
        assert_relative_eq!(e.u_minus, theta.cos() * (dc + wm) / (2.0 * (dc * wm).sqrt()), max_relative = 1e-15);
        assert!((e.symplectic_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lower_polariton_inversions() {
        let (dc, ds) = (3.0, 1.2);
        let g = coupling_for_lower_polariton(dc, ds, 0.4).unwrap();
        let p = polariton_frequencies(dc, ds, g).unwrap();
        assert_relative_eq!(p.omega_minus().unwrap(), 0.4, max_relative = 1e-12);

        let ds2 = squeezed_detuning_for_lower_polariton(dc, 0.5, 0.3).unwrap();
        let p = polariton_frequencies(dc, ds2, 0.5).unwrap();
        assert_relative_eq!(p.omega_minus().unwrap(), 0.3, max_relative = 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn cosh_sinh_consistency(dm in 0.1f64..10.0, frac in 0.0f64..0.99) {
            let ks = -0.5 * dm * frac;
            let r = squeezing_parameter(dm, ks).unwrap();
            let ds = squeezed_frequency(dm, ks).unwrap();
            prop_assert!((ds * (2.0 * r).cosh() - dm).abs() <= 1e-9 * dm);
            prop_assert!((ds * (2.0 * r).sinh() + 2.0 * ks).abs() <= 1e-9 * dm);
            prop_assert!((ds * ds + 4.0 * ks * ks - dm * dm).abs() <= 1e-12 * dm * dm);
        }

        #[test]
        fn critical_point_is_zero_crossing(dc in 0.1f64..10.0, ds in 0.1f64..10.0) {
            let gc = critical_coupling(dc, ds).unwrap();
            let p = polariton_frequencies(dc, ds, gc).unwrap();
            prop_assert!(p.omega_minus_squared.abs() <= 1e-10 * p.omega_plus_squared());
        }

        #[test]
        fn symplectic_identity(dc in 0.1f64..10.0, ds in 0.1f64..10.0, frac in 0.0f64..0.99) {
            prop_assume!((dc - ds).abs() > 1e-6);
            let g = frac * critical_coupling(dc, ds).unwrap();
            let p = polariton_frequencies(dc, ds, g).unwrap();
            let theta = mixing_angle(dc, ds, g).unwrap();
            let e = cavity_in_polariton_basis(theta, dc, p.omega_plus, p.omega_minus().unwrap()).unwrap();
            prop_assert!((e.symplectic_norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn polariton_branches_monotone(dc in 0.1f64..10.0, ds in 0.1f64..10.0) {
            let gc = critical_coupling(dc, ds).unwrap();
            let mut prev = polariton_frequencies(dc, ds, 0.0).unwrap();
            for k in 1..=50 {
                let g = gc * k as f64 / 50.0;
                let p = polariton_frequencies(dc, ds, g).unwrap();
                prop_assert!(p.omega_plus >= prev.omega_plus);
                prop_assert!(p.omega_minus_squared <= prev.omega_minus_squared);
                prev = p;
            }
        }

        #[test]
        fn lambda_inverse_distance(d in 1e-8f64..1e-4) {
            let l = spin_cavity_coupling(angular(2e9), 2e-9, d, 2.0).unwrap();
            let l0 = spin_cavity_coupling(angular(2e9), 2e-9, 1e-6, 2.0).unwrap();
            prop_assert!((l * d - l0 * 1e-6).abs() <= 1e-12 * l0 * 1e-6);
        }
    }
}
