//! Normal modes of the cavity / squeezed-magnon quadratic Hamiltonian from
//! its Hopfield (dynamical) matrix. Serves as an independent check on the
//! closed-form polariton frequencies.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BogoliubovSpectrum {
    /// Positive normal-mode frequencies, descending (ω_+, ω_−). Empty
    /// entries are never produced; an unstable mode is reported through
    /// `unstable` and omitted here.
    pub frequencies: Vec<f64>,
    /// All four eigenvalues of the dynamical matrix.
    pub eigenvalues: Vec<Complex64>,
    /// Set when any eigenvalue has a non-negligible imaginary part.
    pub unstable: bool,
}

/// Dynamical matrix of `Δ_c a†a + Δ_s b†b + G(a + a†)(b + b†)` acting on
/// `(a, b, a†, b†)` through `i d/dt x = M x`.
pub fn hopfield_matrix(delta_c: f64, delta_s: f64, g: f64) -> Matrix4<f64> {
    Matrix4::new(
        delta_c, g, 0.0, g, //
        g, delta_s, g, 0.0, //
        0.0, -g, -delta_c, -g, //
        -g, 0.0, -g, -delta_s,
    )
}

pub fn bogoliubov_spectrum(delta_c: f64, delta_s: f64, g: f64) -> Result<BogoliubovSpectrum> {
    if !(delta_c > 0.0 && delta_s > 0.0) {
        return Err(Error::InvalidParameter("Delta_c and Delta_s must be positive".into()));
    }
    let m = hopfield_matrix(delta_c, delta_s, g);
    let eig = m.complex_eigenvalues();
    let scale = delta_c.max(delta_s).max(g.abs());
    let eigenvalues: Vec<Complex64> = eig.iter().copied().collect();
    let unstable = eigenvalues.iter().any(|z| z.im.abs() > 1e-9 * scale);
    let mut frequencies: Vec<f64> = eigenvalues
        .iter()
        .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-9 * scale)
        .map(|z| z.re)
        .collect();
    frequencies.sort_by(|a, b| b.total_cmp(a));
    Ok(BogoliubovSpectrum { frequencies, eigenvalues, unstable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::formulas::{critical_coupling, polariton_frequencies};
    use approx::assert_relative_eq;

    #[test]
    fn decoupled_spectrum() {
        let s = bogoliubov_spectrum(2.0, 1.0, 0.0).unwrap();
        assert!(!s.unstable);
        assert_relative_eq!(s.frequencies[0], 2.0, max_relative = 1e-14);
        assert_relative_eq!(s.frequencies[1], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn reference_point() {
        let s = bogoliubov_spectrum(2.0, 1.0, 0.5).unwrap();
        assert_eq!(s.frequencies.len(), 2);
        assert_relative_eq!(s.frequencies[0], 2.13578, max_relative = 1e-5);
        assert_relative_eq!(s.frequencies[1], 0.66215, max_relative = 1e-5);
        let p = polariton_frequencies(2.0, 1.0, 0.5).unwrap();
        assert_relative_eq!(s.frequencies[0], p.omega_plus, max_relative = 1e-12);
        assert_relative_eq!(s.frequencies[1], p.omega_minus().unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn instability_above_critical() {
        let gc = critical_coupling(2.0, 1.0).unwrap();
        let s = bogoliubov_spectrum(2.0, 1.0, 1.001 * gc).unwrap();
        assert!(s.unstable);
        assert_eq!(s.frequencies.len(), 1);
        let below = bogoliubov_spectrum(2.0, 1.0, 0.999 * gc).unwrap();
        assert!(!below.unstable);
    }
}
