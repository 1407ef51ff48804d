//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients).
//!
//! Relative accuracy is ~1e-13 over the positive axis, which is ample for
//! every bound this crate measures. `ln_gamma` works in log space so large
//! orders never overflow.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma function for positive (and, via reflection, non-pole negative)
/// arguments.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        PI / (sin_pi(x) * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut a = LANCZOS_COEF[0];
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            a += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
    }
}

/// Natural log of Γ(x) for x > 0. Stays finite where `gamma` would overflow.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    if x < 0.5 {
        // ln Γ(x) = ln π - ln sin(πx) - ln Γ(1-x), safe since 0 < x < 1/2
        PI.ln() - sin_pi(x).ln() - ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut a = LANCZOS_COEF[0];
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            a += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
    }
}

/// sin(πx) computed through the fractional part, so integer arguments give
/// an exact zero.
pub fn sin_pi(x: f64) -> f64 {
    let k = x.floor();
    let f = x - k;
    if f == 0.0 {
        return 0.0;
    }
    // reduce to [0, 1/2] for best accuracy
    let s = if f <= 0.5 {
        (PI * f).sin()
    } else {
        (PI * (1.0 - f)).sin()
    };
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_integers() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 24.0 * 1e-13);
    }

    #[test]
    fn gamma_recurrence_property() {
        for &x in &[0.7, 1.3, 2.9, 7.5, 24.25] {
            let lhs = gamma(x + 1.0);
            let rhs = x * gamma(x);
            assert!(
                (lhs - rhs).abs() < 1e-12 * rhs.abs(),
                "Γ(x+1) = xΓ(x) failed at {x}"
            );
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.5, 1.0, 3.25, 10.0, 50.5] {
            assert!((ln_gamma(x) - gamma(x).ln()).abs() < 1e-11);
        }
        // beyond the overflow point of Γ itself
        let l = ln_gamma(200.0);
        // Stirling sanity: ln Γ(200) ≈ 857.9336698
        assert!((l - 857.9336698258574).abs() < 1e-6);
    }

    #[test]
    fn sin_pi_exact_integers() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(10.0), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-15);
        assert!((sin_pi(2.5) - 1.0).abs() < 1e-15);
        assert!((sin_pi(1.5) + 1.0).abs() < 1e-15);
    }
}
