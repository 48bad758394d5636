//! Hyperbolic helpers, generalized harmonic numbers and the log-gamma function.

/// Hyperbolic cotangent.
pub fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// Hyperbolic cosecant, `2 e^{-x} / (1 - e^{-2x})` for x > 0 to stay finite at large x.
pub fn csch(x: f64) -> f64 {
    if x > 0.0 {
        2.0 * (-x).exp() / -(-2.0 * x).exp_m1()
    } else if x < 0.0 {
        -csch(-x)
    } else {
        f64::INFINITY
    }
}

/// `x / (e^x - 1)` style helper: returns `1 / (e^x - 1)` without overflow for large x.
pub fn inv_expm1(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp() / -(-x).exp_m1()
    } else {
        1.0 / x.exp_m1()
    }
}

/// Generalized harmonic number `H(k, s) = sum_{i=1}^{k} i^{-s}`.
///
/// Summed from the smallest term upwards.
pub fn harmonic(k: usize, s: f64) -> f64 {
    (1..=k).rev().map(|i| (i as f64).powf(-s)).sum()
}

/// `sum_{i=1}^{k} ln(i) i^{-s}`, i.e. `-dH(k, s)/ds`.
pub fn harmonic_log_weighted(k: usize, s: f64) -> f64 {
    (2..=k)
        .rev()
        .map(|i| {
            let x = i as f64;
            x.ln() * x.powf(-s)
        })
        .sum()
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csch_matches_definition() {
        for &x in &[0.01, 0.5, 1.0, 3.0, 20.0] {
            let direct = 1.0 / f64::sinh(x);
            assert!((csch(x) - direct).abs() <= 1e-14 * direct.abs());
        }
        assert!((csch(1.0) - 0.850_918_128_239_321_5).abs() < 1e-15);
        assert!(csch(800.0) >= 0.0 && csch(800.0).is_finite());
    }

    #[test]
    fn coth_small_argument() {
        // coth(x) ~ 1/x + x/3
        let x = 1e-4;
        assert!((coth(x) - (1.0 / x + x / 3.0)).abs() < 1e-8);
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0, 2.0), 0.0);
        assert!((harmonic(3, 1.0) - (1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-15);
        assert!((harmonic(4, -0.5) - (1.0 + 2f64.sqrt() + 3f64.sqrt() + 2.0)).abs() < 1e-14);
        assert!((harmonic(100_000, 2.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-4);
    }

    #[test]
    fn harmonic_log_weighted_is_minus_derivative() {
        let (k, s, h) = (7, 1.3, 1e-6);
        let fd = -(harmonic(k, s + h) - harmonic(k, s - h)) / (2.0 * h);
        assert!((harmonic_log_weighted(k, s) - fd).abs() < 1e-8);
    }

    #[test]
    fn ln_gamma_factorials() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn inv_expm1_large_argument() {
        assert_eq!(inv_expm1(1e4), 0.0);
        assert!((inv_expm1(1.0) - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn log_add_exp_stable() {
        assert!((log_add_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
    }
}
