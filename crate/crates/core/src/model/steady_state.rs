//! Semiclassical steady state of the driven Kerr magnon.
//!
//! With `n = |⟨m⟩|²` the stationary condition is
//! `n[(δ_m + 2Kn)² + (κ_m/2)²] = Ω_d²`, a cubic in `n`.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SteadyStateRoot {
    /// `|⟨m⟩|²`
    pub population: f64,
    /// Positive slope of the response cubic at the root.
    pub stable: bool,
}

struct Cubic {
    // c[0] + c[1] n + c[2] n² + c[3] n³
    c: [f64; 4],
}

impl Cubic {
    fn eval(&self, n: f64) -> f64 {
        ((self.c[3] * n + self.c[2]) * n + self.c[1]) * n + self.c[0]
    }

    fn slope(&self, n: f64) -> f64 {
        (3.0 * self.c[3] * n + 2.0 * self.c[2]) * n + self.c[1]
    }

    /// Real roots of the derivative, ascending.
    fn turning_points(&self) -> Vec<f64> {
        let (a, b, c) = (3.0 * self.c[3], 2.0 * self.c[2], self.c[1]);
        if a == 0.0 {
            if b == 0.0 {
                return vec![];
            }
            return vec![-c / b];
        }
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return vec![];
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let mut r = vec![q / a];
        if q != 0.0 {
            r.push(c / q);
        }
        r.sort_by(f64::total_cmp);
        r
    }

    /// Root in `[lo, hi]` where the cubic is monotone and changes sign.
    fn bracketed_root(&self, mut lo: f64, mut hi: f64) -> f64 {
        let mut f_lo = self.eval(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = self.eval(mid);
            if f_mid == 0.0 {
                return mid;
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// All nonnegative real roots `n` of the steady-state cubic, ascending, each
/// tagged stable when the cubic's slope there is positive (the middle
/// branch of a bistable response has negative slope).
pub fn steady_state_magnon(delta_m: f64, kerr: f64, kappa_m: f64, rabi_d: f64) -> Vec<SteadyStateRoot> {
    let cubic = Cubic {
        c: [
            -rabi_d * rabi_d,
            delta_m * delta_m + 0.25 * kappa_m * kappa_m,
            4.0 * delta_m * kerr,
            4.0 * kerr * kerr,
        ],
    };
    if rabi_d == 0.0 {
        let mut roots = vec![SteadyStateRoot { population: 0.0, stable: cubic.slope(0.0) > 0.0 }];
        // undamped Kerr resonance: (δ + 2Kn)² = 0
        if kappa_m == 0.0 && kerr != 0.0 && -delta_m / (2.0 * kerr) > 0.0 {
            roots.push(SteadyStateRoot { population: -delta_m / (2.0 * kerr), stable: false });
        }
        return roots;
    }
    if cubic.c[3] == 0.0 && cubic.c[2] == 0.0 {
        if cubic.c[1] == 0.0 {
            return vec![];
        }
        let n = -cubic.c[0] / cubic.c[1];
        return vec![SteadyStateRoot { population: n, stable: cubic.slope(n) > 0.0 }];
    }
    // Cauchy bound on root magnitude
    let lead = if cubic.c[3] != 0.0 { cubic.c[3] } else { cubic.c[2] };
    let bound = 1.0 + cubic.c.iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut knots = vec![0.0];
    knots.extend(cubic.turning_points().into_iter().filter(|&t| t > 0.0 && t < bound));
    knots.push(bound);

    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (f_lo, f_hi) = (cubic.eval(lo), cubic.eval(hi));
        if f_lo == 0.0 && lo > 0.0 {
            continue; // counted as the previous interval's upper end
        }
        if f_hi == 0.0 || (f_lo < 0.0) != (f_hi < 0.0) {
            let n = if f_hi == 0.0 { hi } else { cubic.bracketed_root(lo, hi) };
            roots.push(SteadyStateRoot { population: n, stable: cubic.slope(n) > 0.0 });
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn residual(n: f64, d: f64, k: f64, kappa: f64, om: f64) -> f64 {
        n * ((d + 2.0 * k * n).powi(2) + 0.25 * kappa * kappa) - om * om
    }

    /// Sign-change scan of the response function on a dense grid.
    fn scan_roots(d: f64, k: f64, kappa: f64, om: f64, max_n: f64, steps: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let h = max_n / steps as f64;
        let mut prev = residual(0.0, d, k, kappa, om);
        for i in 1..=steps {
            let n = i as f64 * h;
            let cur = residual(n, d, k, kappa, om);
            if (prev < 0.0) != (cur < 0.0) {
                out.push(n - 0.5 * h);
            }
            prev = cur;
        }
        out
    }

    #[test]
    fn undriven_single_root() {
        let r = steady_state_magnon(1.0, 0.3, 0.2, 0.0);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].population, 0.0);
        assert!(r[0].stable);
    }

    #[test]
    fn linear_response_without_kerr() {
        let (d, kappa, om) = (0.7, 0.3, 0.4);
        let r = steady_state_magnon(d, 0.0, kappa, om);
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0].population, om * om / (d * d + kappa * kappa / 4.0), max_relative = 1e-14);
        assert!(r[0].stable);
    }

    #[test]
    fn bistable_roots_match_scan() {
        let (d, k, kappa, om) = (-3.0, 1.0, 0.2, 1.0);
        let roots = steady_state_magnon(d, k, kappa, om);
        let scanned = scan_roots(d, k, kappa, om, 5.0, 500_000);
        assert_eq!(roots.len(), 3);
        assert_eq!(scanned.len(), 3);
        for (r, s) in roots.iter().zip(&scanned) {
            assert!((r.population - s).abs() < 1e-5, "{} vs {}", r.population, s);
            assert!(residual(r.population, d, k, kappa, om).abs() < 1e-10);
        }
        let tags: Vec<bool> = roots.iter().map(|r| r.stable).collect();
        assert_eq!(tags, vec![true, false, true]);
    }

    #[test]
    fn negative_kerr_single_branch() {
        let roots = steady_state_magnon(2.0, -0.01, 0.5, 0.3);
        assert!(!roots.is_empty());
        for r in &roots {
            assert!(r.population >= 0.0);
            assert!(residual(r.population, 2.0, -0.01, 0.5, 0.3).abs() < 1e-10);
        }
    }
}
