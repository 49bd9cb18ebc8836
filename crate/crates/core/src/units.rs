//! Physical constants (CODATA 2018) and unit handling.
//!
//! Internally every frequency and rate is angular (rad/s). User-facing
//! inputs and serialized outputs use ordinary frequencies ν = ω/2π.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Vacuum permeability, N/A².
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Ordinary frequency (Hz) to angular (rad/s).
pub fn angular(hz: f64) -> f64 {
    TAU * hz
}

/// Angular (rad/s) to ordinary frequency (Hz).
pub fn ordinary(rad_per_s: f64) -> f64 {
    rad_per_s / TAU
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Frequency,
    Length,
    Time,
    Inductance,
    Dimensionless,
}

/// Parses `"2 ghz"`, `"50nm"`, `"2 us"`, `"2 nH"` and similar. Frequencies
/// are returned in Hz (not angular), everything else in SI. A bare number
/// is accepted for every quantity and taken in SI base units.
pub fn parse_quantity(text: &str, quantity: Quantity) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase();
    // no unit starts with 'e', so an 'e' always belongs to the exponent
    let split = s.find(|c: char| (c.is_ascii_alphabetic() && c != 'e') || c == ' ');
    let (num, suffix) = match split {
        Some(i) => (s[..i].trim(), s[i..].trim()),
        None => (s.as_str(), ""),
    };
    let value: f64 = num
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse number in '{text}'")))?;
    let factor = match (quantity, suffix) {
        (_, "") => 1.0,
        (Quantity::Frequency, "hz") => 1.0,
        (Quantity::Frequency, "khz") => 1e3,
        (Quantity::Frequency, "mhz") => 1e6,
        (Quantity::Frequency, "ghz") => 1e9,
        (Quantity::Length, "m") => 1.0,
        (Quantity::Length, "mm") => 1e-3,
        (Quantity::Length, "um") => 1e-6,
        (Quantity::Length, "nm") => 1e-9,
        (Quantity::Time, "s") => 1.0,
        (Quantity::Time, "ms") => 1e-3,
        (Quantity::Time, "us") => 1e-6,
        (Quantity::Time, "ns") => 1e-9,
        (Quantity::Inductance, "h") => 1.0,
        (Quantity::Inductance, "uh") => 1e-6,
        (Quantity::Inductance, "nh") => 1e-9,
        (Quantity::Inductance, "ph") => 1e-12,
        _ => {
            return Err(Error::InvalidParameter(format!("unknown unit '{suffix}' in '{text}' for {quantity:?}")));
        }
    };
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite value '{text}'")));
    }
    Ok(value * factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12 * b.abs(), "{a} != {b}");
    }

    #[test]
    fn parses_units() {
        assert_close(parse_quantity("2 ghz", Quantity::Frequency).unwrap(), 2e9);
        assert_close(parse_quantity("2GHz", Quantity::Frequency).unwrap(), 2e9);
        assert_close(parse_quantity("960 MHz", Quantity::Frequency).unwrap(), 960e6);
        assert_close(parse_quantity("1e3hz", Quantity::Frequency).unwrap(), 1e3);
        assert_close(parse_quantity("50nm", Quantity::Length).unwrap(), 50e-9);
        assert_close(parse_quantity("5 um", Quantity::Length).unwrap(), 5e-6);
        assert_close(parse_quantity("1e-3mm", Quantity::Length).unwrap(), 1e-6);
        assert_close(parse_quantity("0.5", Quantity::Dimensionless).unwrap(), 0.5);
        assert_close(parse_quantity("2 us", Quantity::Time).unwrap(), 2e-6);
        assert_close(parse_quantity("2nH", Quantity::Inductance).unwrap(), 2e-9);
        assert!(parse_quantity("2 us", Quantity::Length).is_err());
        assert!(parse_quantity("2 parsec", Quantity::Length).is_err());
        assert!(parse_quantity("2 nm", Quantity::Frequency).is_err());
        assert!(parse_quantity("fast", Quantity::Frequency).is_err());
    }

    #[test]
    fn angular_roundtrip() {
        assert!((ordinary(angular(2.87e9)) - 2.87e9).abs() < 1e-3);
    }
}
