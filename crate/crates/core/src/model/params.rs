use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::{angular, HBAR, MU_0, MU_B};

/// Power-law calibration `g_m(R) = g_ref · (R / R_ref)^p` for the
/// cavity–magnon coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingCalibration {
    /// rad/s
    pub g_ref: f64,
    /// m
    pub r_ref: f64,
    pub exponent: f64,
}

impl Default for CouplingCalibration {
    fn default() -> Self {
        Self { g_ref: angular(0.2e6), r_ref: 50e-9, exponent: 1.0 }
    }
}

impl CouplingCalibration {
    pub fn validate(&self) -> Result<()> {
        if !(self.g_ref > 0.0 && self.r_ref > 0.0 && self.exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid coupling calibration {self:?}")));
        }
        Ok(())
    }
}

/// Laboratory inputs. Frequencies and rates are angular (rad/s); fields in
/// tesla, lengths in meters, anisotropy in J/m³, magnetization in A/m.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhysicalParams {
    /// Zero-field splitting.
    pub zero_field_splitting: f64,
    pub g_e: f64,
    pub b_ex: f64,
    pub omega_c: f64,
    pub inductance: f64,
    /// Spin to center-line distance.
    pub distance: f64,
    /// YIG sphere radius.
    pub radius: f64,
    pub k_an: f64,
    pub magnetization: f64,
    pub b_0: f64,
    /// Total spin number of the sphere. No nominal value exists.
    pub s_total: Option<f64>,
    pub omega_d: f64,
    /// Drive Rabi frequency.
    pub rabi_d: f64,
    pub kappa_c: f64,
    pub kappa_m: f64,
    pub kappa_minus: f64,
    pub gamma_perp: f64,
    /// Steady-state magnon amplitude ⟨m⟩; solved from the drive when absent.
    #[serde(serialize_with = "serialize_complex_opt")]
    pub mean_m: Option<Complex64>,
    pub calibration: CouplingCalibration,
}

fn serialize_complex_opt<S: serde::Serializer>(
    v: &Option<Complex64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(z) => [z.re, z.im].serialize(s),
        None => s.serialize_none(),
    }
}

/// Nominal YIG saturation magnetization, A/m.
pub const NOMINAL_MAGNETIZATION: f64 = 1.4e5;
/// Nominal Kerr coefficient at R = 50 nm (negative: bias along the axis
/// that gives K < 0 and hence K_s < 0).
pub const NOMINAL_KERR: f64 = -2.0 * PI * 128.0;

impl Default for PhysicalParams {
    /// Nominal set: D = 2π×2.87 GHz, g_e = 2, ω_c = 2π×2 GHz, L_a = 2 nH,
    /// d = R = 50 nm, ω_d = 2π×1 GHz and B_ex chosen so that
    /// Δ_NV = ω_NV − ω_d = 2π×960 MHz. K_an is calibrated so that
    /// K = −2π×128 Hz at R = 50 nm with M = 1.4×10⁵ A/m; B_0 puts γB_0 at
    /// 2π×1 GHz. Decay rates: κ_c = κ_m = κ_− = 2π×1 MHz, γ_⊥ = 2π×1 kHz.
    fn default() -> Self {
        let g_e = 2.0;
        let gamma = g_e * MU_B / HBAR;
        let radius = 50e-9;
        let omega_d = angular(1.0e9);
        let zero_field_splitting = angular(2.87e9);
        let omega_nv_target = omega_d + angular(960e6);
        Self {
            zero_field_splitting,
            g_e,
            b_ex: (zero_field_splitting - omega_nv_target) / gamma,
            omega_c: angular(2.0e9),
            inductance: 2e-9,
            distance: 50e-9,
            radius,
            k_an: calibrate_anisotropy(NOMINAL_KERR, g_e, NOMINAL_MAGNETIZATION, radius),
            magnetization: NOMINAL_MAGNETIZATION,
            b_0: angular(1.0e9) / gamma,
            s_total: None,
            omega_d,
            rabi_d: 0.0,
            kappa_c: angular(1e6),
            kappa_m: angular(1e6),
            kappa_minus: angular(1e6),
            gamma_perp: angular(1e3),
            mean_m: None,
            calibration: CouplingCalibration::default(),
        }
    }
}

/// Anisotropy constant K_an that yields Kerr coefficient `kerr` (rad/s).
pub fn calibrate_anisotropy(kerr: f64, g_e: f64, magnetization: f64, radius: f64) -> f64 {
    let gamma = g_e * MU_B / HBAR;
    let volume = 4.0 / 3.0 * PI * radius.powi(3);
    kerr * magnetization.powi(2) * volume / (MU_0 * gamma * gamma)
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("zero_field_splitting", self.zero_field_splitting),
            ("omega_c", self.omega_c),
            ("inductance", self.inductance),
            ("distance", self.distance),
            ("radius", self.radius),
            ("magnetization", self.magnetization),
            ("omega_d", self.omega_d),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let nonneg = [
            ("g_e", self.g_e),
            ("b_ex", self.b_ex),
            ("b_0", self.b_0),
            ("rabi_d", self.rabi_d),
            ("kappa_c", self.kappa_c),
            ("kappa_m", self.kappa_m),
            ("kappa_minus", self.kappa_minus),
            ("gamma_perp", self.gamma_perp),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be nonnegative and finite, got {v}")));
            }
        }
        if !self.k_an.is_finite() {
            return Err(Error::InvalidParameter("k_an must be finite".into()));
        }
        if let Some(s) = self.s_total {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter(format!("s_total must be positive, got {s}")));
            }
        }
        self.calibration.validate()
    }
}
