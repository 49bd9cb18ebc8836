//! One-shot evaluation of the full reduction chain.

use num_complex::Complex64;
use serde::Serialize;

use super::formulas::*;
use super::params::PhysicalParams;
use super::steady_state::steady_state_magnon;
use crate::error::{Error, Result};
use crate::units::ordinary;

/// Every derived symbol of the chain, angular frequencies in rad/s.
/// Quantities that cannot be resolved (missing `s_total`, unstable lower
/// polariton) are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedScales {
    pub omega_nv: f64,
    pub omega_m: Option<f64>,
    #[serde(rename = "K")]
    pub kerr: f64,
    pub g_m: f64,
    pub lambda: f64,
    pub delta_m: Option<f64>,
    #[serde(rename = "Delta_m")]
    pub delta_m_eff: Option<f64>,
    #[serde(rename = "Delta_c")]
    pub delta_c: f64,
    #[serde(rename = "Delta_nv")]
    pub delta_nv: f64,
    #[serde(rename = "K_s")]
    pub k_s: Option<f64>,
    pub r_m: f64,
    #[serde(rename = "Delta_s")]
    pub delta_s: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "G_c")]
    pub g_c: f64,
    pub omega_plus: f64,
    pub omega_minus: Option<f64>,
    pub theta: Option<f64>,
    pub g_r: Option<f64>,
    pub g_cr: Option<f64>,
    pub g_r_prime: Option<f64>,
    pub g_cr_prime: Option<f64>,
    pub g_eff: Option<f64>,
    pub omega_eff: Option<f64>,
}

/// Replacements for individual links of the chain. Frequencies in rad/s.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub delta_c: Option<f64>,
    pub delta_nv: Option<f64>,
    pub r_m: Option<f64>,
    pub delta_s: Option<f64>,
    pub g: Option<f64>,
    /// Target `Δ_c / ω_−`; the squeezed detuning `Δ_s` is solved so the
    /// lower polariton sits at `Δ_c / ratio` for the resolved `G`.
    pub lp_ratio: Option<f64>,
    /// Mean LP occupation entering `ω_eff`.
    pub n_minus: Option<f64>,
    /// Minimum `|Δ_NV − ω_−| / g_r` accepted as dispersive.
    pub dispersive_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedReport {
    pub scales: DerivedScales,
    /// Signed `ω_−²`.
    pub omega_minus_squared: f64,
    /// `ω_−` real (G < G_c).
    pub lp_stable: bool,
    pub g_over_g_c: f64,
    /// Steady-state magnon population used for K_s, when solved or given.
    pub magnon_population: Option<f64>,
    /// `|Δ_NV − ω_−| / g_r`.
    pub dispersive_ratio: Option<f64>,
    pub dispersive: bool,
    pub dispersive_threshold: f64,
}

impl DerivedReport {
    /// Flat map of every resolved scale as an ordinary frequency in Hz
    /// (`<name>_over_2pi_hz`, `None` when unresolved); dimensionless
    /// quantities keep their name.
    pub fn ordinary_frequencies(&self) -> Vec<(String, Option<f64>)> {
        let s = &self.scales;
        let mut out = Vec::new();
        let mut put = |name: &str, v: Option<f64>| {
            out.push((format!("{name}_over_2pi_hz"), v.map(ordinary)));
        };
        put("omega_nv", Some(s.omega_nv));
        put("omega_m", s.omega_m);
        put("K", Some(s.kerr));
        put("g_m", Some(s.g_m));
        put("lambda", Some(s.lambda));
        put("delta_m", s.delta_m);
        put("Delta_m", s.delta_m_eff);
        put("Delta_c", Some(s.delta_c));
        put("Delta_nv", Some(s.delta_nv));
        put("K_s", s.k_s);
        put("Delta_s", Some(s.delta_s));
        put("G", Some(s.g));
        put("G_c", Some(s.g_c));
        put("omega_plus", Some(s.omega_plus));
        put("omega_minus", s.omega_minus);
        put("g_r", s.g_r);
        put("g_cr", s.g_cr);
        put("g_r_prime", s.g_r_prime);
        put("g_cr_prime", s.g_cr_prime);
        put("g_eff", s.g_eff);
        put("omega_eff", s.omega_eff);
        out.push(("r_m".into(), Some(s.r_m)));
        out.push(("theta".into(), s.theta));
        out
    }
}

/// Evaluates the chain from laboratory parameters, applying `overrides` at
/// the link they name. The magnon amplitude is taken from
/// `params.mean_m` or, when absent, from the smallest stable steady-state
/// root of the driven Kerr oscillator (the branch reached by ramping the
/// drive up from zero).
pub fn derive(params: &PhysicalParams, overrides: &Overrides) -> Result<DerivedReport> {
    params.validate()?;
    let omega_nv = spin_frequency(params.zero_field_splitting, params.g_e, params.b_ex)?;
    let kerr = kerr_coefficient(params.k_an, params.g_e, params.magnetization, params.radius)?;
    let g_m = cavity_magnon_coupling(params.radius, &params.calibration)?;
    let lambda = match overrides.lambda {
        Some(l) => l,
        None => spin_cavity_coupling(params.omega_c, params.inductance, params.distance, params.g_e)?,
    };
    let delta_c = overrides.delta_c.unwrap_or(params.omega_c - params.omega_d);
    let delta_nv = overrides.delta_nv.unwrap_or(omega_nv - params.omega_d);

    let omega_m = params
        .s_total
        .map(|s| magnon_frequency(params.b_0, params.k_an, params.magnetization, params.radius, s, params.g_e))
        .transpose()?;
    let delta_m = omega_m.map(|w| w - params.omega_d);

    let mut magnon_population = params.mean_m.map(|m| m.norm_sqr());
    if magnon_population.is_none() {
        if let Some(dm) = delta_m {
            let roots = steady_state_magnon(dm, kerr, params.kappa_m, params.rabi_d);
            magnon_population = roots.iter().find(|r| r.stable).or(roots.first()).map(|r| r.population);
        }
    }
    let (delta_m_eff, k_s) = match (delta_m, magnon_population) {
        (Some(dm), Some(n)) => {
            let (a, b) = two_magnon_params(dm, kerr, Complex64::new(n.sqrt(), 0.0));
            (Some(a), Some(b))
        }
        _ => (None, None),
    };

    let r_m = match (overrides.r_m, delta_m_eff, k_s) {
        (Some(r), _, _) => r,
        (None, Some(dm), Some(ks)) => squeezing_parameter(dm, ks)?,
        _ => {
            return Err(Error::InvalidParameter(
                "r_m cannot be resolved: give s_total (with a drive or mean_m) or an r_m override".into(),
            ))
        }
    };
    let g = match overrides.g {
        Some(g) => g,
        None => enhanced_coupling(g_m, r_m)?,
    };

    let delta_s = match (overrides.lp_ratio, overrides.delta_s) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameter("lp_ratio and delta_s overrides are mutually exclusive".into()))
        }
        (Some(ratio), None) => {
            if !(ratio > 1.0) {
                return Err(Error::InvalidParameter(format!("lp_ratio must exceed 1, got {ratio}")));
            }
            squeezed_detuning_for_lower_polariton(delta_c, g, delta_c / ratio)?
        }
        (None, Some(ds)) => ds,
        (None, None) => match (delta_m_eff, k_s) {
            (Some(dm), Some(ks)) => squeezed_frequency(dm, ks)?,
            _ => {
                return Err(Error::InvalidParameter(
                    "Delta_s cannot be resolved: give s_total, a delta_s override or an lp_ratio".into(),
                ))
            }
        },
    };

    let g_c = critical_coupling(delta_c, delta_s)?;
    let pol = polariton_frequencies(delta_c, delta_s, g)?;
    let lp_stable = pol.is_stable();
    let omega_minus = pol.omega_minus().ok();
    let theta = mixing_angle(delta_c, delta_s, g).ok();

    let couplings = match (omega_minus, theta) {
        (Some(wm), Some(th)) => Some(polariton_spin_couplings(lambda, th, delta_c, pol.omega_plus, wm)?),
        _ => None,
    };
    let exchange = couplings
        .map(|c| effective_spin_spin(c.g_r, delta_nv, overrides.n_minus.unwrap_or(0.0)))
        .transpose()?;

    let threshold = overrides.dispersive_ratio.unwrap_or(DEFAULT_DISPERSIVE_RATIO);
    let dispersive_ratio = match (omega_minus, couplings) {
        (Some(wm), Some(c)) if c.g_r != 0.0 => Some((delta_nv - wm).abs() / c.g_r.abs()),
        _ => None,
    };

    let scales = DerivedScales {
        omega_nv,
        omega_m,
        kerr,
        g_m,
        lambda,
        delta_m,
        delta_m_eff,
        delta_c,
        delta_nv,
        k_s,
        r_m,
        delta_s,
        g,
        g_c,
        omega_plus: pol.omega_plus,
        omega_minus,
        theta,
        g_r: couplings.map(|c| c.g_r),
        g_cr: couplings.map(|c| c.g_cr),
        g_r_prime: couplings.map(|c| c.g_r_prime),
        g_cr_prime: couplings.map(|c| c.g_cr_prime),
        g_eff: exchange.map(|e| e.g_eff),
        omega_eff: exchange.map(|e| e.omega_eff),
    };
    Ok(DerivedReport {
        scales,
        omega_minus_squared: pol.omega_minus_squared,
        lp_stable,
        g_over_g_c: if g_c > 0.0 { g / g_c } else { f64::INFINITY },
        magnon_population,
        dispersive_ratio,
        dispersive: dispersive_ratio.is_some_and(|r| r >= threshold),
        dispersive_threshold: threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::angular;
    use approx::assert_relative_eq;

    fn nominal_overrides() -> Overrides {
        Overrides { r_m: Some(3.0), lp_ratio: Some(1e6), ..Default::default() }
    }

    #[test]
    fn nominal_chain() {
        let rep = derive(&PhysicalParams::default(), &nominal_overrides()).unwrap();
        let s = &rep.scales;
        assert_relative_eq!(ordinary(s.g_m), 0.2e6, max_relative = 1e-12);
        assert_relative_eq!(ordinary(s.g), 2.0086e6, max_relative = 1e-4);
        assert_relative_eq!(ordinary(s.delta_nv), 960e6, max_relative = 1e-9);
        assert_relative_eq!(ordinary(s.delta_c), 1e9, max_relative = 1e-12);
        assert_relative_eq!(ordinary(s.kerr), -128.0, max_relative = 1e-12);
        assert!(rep.lp_stable);
        assert_relative_eq!(s.omega_minus.unwrap(), s.delta_c / 1e6, max_relative = 1e-6);
        // g_r ≈ ½ λ √(Δ_c/ω_−) at θ → 0
        assert_relative_eq!(s.g_r.unwrap(), 0.5 * s.lambda * 1e3, max_relative = 1e-3);
        assert!(s.g_r_prime.unwrap().abs() < 1e-3 * s.g_r.unwrap());
        assert!(rep.dispersive);
        assert!(s.omega_m.is_none());
    }

    #[test]
    fn lambda_override_reaches_quoted_g_r() {
        let o = Overrides { lambda: Some(angular(7e3)), ..nominal_overrides() };
        let rep = derive(&PhysicalParams::default(), &o).unwrap();
        assert_relative_eq!(ordinary(rep.scales.g_r.unwrap()), 3.5e6, max_relative = 1e-3);
        assert_relative_eq!(ordinary(rep.scales.g_eff.unwrap().abs()), 12.76e3, max_relative = 2e-3);
    }

    #[test]
    fn zero_drive_means_no_squeezing() {
        let mut p = PhysicalParams::default();
        p.s_total = Some(1.0);
        p.rabi_d = 0.0;
        p.b_0 *= 1.2;
        let rep = derive(&p, &Overrides::default()).unwrap();
        assert_eq!(rep.scales.r_m, 0.0);
        assert_relative_eq!(rep.scales.g, rep.scales.g_m / 2.0, max_relative = 1e-15);
        assert_eq!(rep.scales.k_s, Some(0.0));
        assert_relative_eq!(rep.scales.delta_s, rep.scales.delta_m.unwrap().abs(), max_relative = 1e-15);
    }

    #[test]
    fn near_critical_enhancement_at_ratio_1e3() {
        // G = 0.999 G_c with Δ_c = 10³ ω_−: g_r / λ ≈ ½√10³ ≈ 15.8
        let lambda = angular(7e3);
        let delta_c = angular(1e9);
        let omega_minus = delta_c / 1e3;
        // pick Δ_s so that G = 0.999 G_c lands on this ω_−
        let x = omega_minus * omega_minus;
        let eta2 = 0.999f64.powi(2);
        // (Δ_c² − x)(Δ_s² − x) = η² Δ_c² Δ_s²  → Δ_s² = x(Δ_c² − x)/(Δ_c² − x − η²Δ_c²)
        let ds = (x * (delta_c * delta_c - x) / (delta_c * delta_c - x - eta2 * delta_c * delta_c)).sqrt();
        let g = 0.999 * critical_coupling(delta_c, ds).unwrap();
        let o = Overrides { lambda: Some(lambda), delta_c: Some(delta_c), delta_s: Some(ds), g: Some(g), r_m: Some(0.0), ..Default::default() };
        let rep = derive(&PhysicalParams::default(), &o).unwrap();
        assert_relative_eq!(rep.scales.omega_minus.unwrap(), omega_minus, max_relative = 1e-6);
        assert_relative_eq!(rep.scales.g_r.unwrap() / lambda, 0.5 * 1e3f64.sqrt(), max_relative = 2e-3);
    }

    #[test]
    fn unstable_lp_reported() {
        let o = Overrides { r_m: Some(3.0), delta_s: Some(angular(1e3)), ..Default::default() };
        let rep = derive(&PhysicalParams::default(), &o).unwrap();
        assert!(!rep.lp_stable);
        assert!(rep.omega_minus_squared < 0.0);
        assert!(rep.scales.g_r.is_none());
        assert!(rep.g_over_g_c > 1.0);
    }

    #[test]
    fn unresolved_squeezing_is_an_error() {
        assert!(matches!(derive(&PhysicalParams::default(), &Overrides::default()), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn json_field_names() {
        let rep = derive(&PhysicalParams::default(), &nominal_overrides()).unwrap();
        let v = serde_json::to_value(&rep.scales).unwrap();
        for key in [
            "omega_nv", "omega_m", "K", "g_m", "lambda", "delta_m", "Delta_m", "Delta_c", "Delta_nv", "K_s", "r_m",
            "Delta_s", "G", "G_c", "omega_plus", "omega_minus", "theta", "g_r", "g_cr", "g_r_prime", "g_cr_prime",
            "g_eff", "omega_eff",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v.as_object().unwrap().len(), 23);
    }
}
