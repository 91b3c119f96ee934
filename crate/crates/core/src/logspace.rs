//! Log-domain arithmetic helpers.
//!
//! Probabilities in this crate routinely sit at `e^{-n^2}` for `n` in the
//! thousands, so every quantity is carried as a natural logarithm and the
//! helpers below never leave that representation.

use std::f64::consts::LN_2;

/// `log(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log Σ e^{x_i}`, reduced in the given order.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}

/// `log(1 - e^a)` for `a <= 0`.
///
/// Switches between `ln(-expm1(a))` and `ln_1p(-exp(a))` at `a = -ln 2`
/// (Mächler's rule), which keeps full relative precision on both sides.
pub fn log1m_exp(a: f64) -> f64 {
    if a > 0.0 {
        return f64::NAN;
    }
    if a == 0.0 {
        return f64::NEG_INFINITY;
    }
    if a > -LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// `log(1 - exp(-e^l))`: the log-probability of the complement of an event
/// whose log-probability is `-e^l`.
///
/// For `l` very negative, `1 - exp(-y) = y(1 - y/2 + y²/6 - …)`, so the
/// answer is `l + log1p(-y/2 + y²/6)` and stays finite even when `e^l`
/// underflows.
pub fn log1m_exp_neg_exp(l: f64) -> f64 {
    if l == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if l < -20.0 {
        let y = l.exp();
        return l + (-0.5 * y + y * y / 6.0).ln_1p();
    }
    log1m_exp(-l.exp())
}

/// `log(-log(1 - e^a))` for `a <= 0`: turns the log-probability of an event
/// into the log of minus the log-probability of its complement.
pub fn log_neg_log1m_exp(a: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if a < -20.0 {
        // -log(1-p) = p + p²/2 + …
        let p = a.exp();
        return a + (0.5 * p).ln_1p();
    }
    (-log1m_exp(a)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log1m_exp_matches_direct_form_in_safe_range() {
        for &a in &[-0.01, -0.3, -0.7, -2.0, -10.0] {
            let direct = (1.0 - f64::exp(a)).ln();
            assert!((log1m_exp(a) - direct).abs() < 1e-12, "{a}");
        }
        assert_eq!(log1m_exp(0.0), f64::NEG_INFINITY);
        assert!((log1m_exp(-1e-20) - (1e-20f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn complement_of_tiny_log_probability() {
        // event with log-probability -1e-30: complement has probability 1e-30
        let l = (1e-30f64).ln();
        assert!((log1m_exp_neg_exp(l) - l).abs() < 1e-12);
        // e^l underflows in linear scale but the result stays finite
        let l = -800.0;
        assert_eq!(log1m_exp_neg_exp(l), -800.0);
        let l = 0.5f64;
        let direct = (1.0 - (-l.exp()).exp()).ln();
        assert!((log1m_exp_neg_exp(l) - direct).abs() < 1e-13);
    }

    #[test]
    fn neg_log_round_trip() {
        for &a in &[-1e-8, -0.1, -1.0, -5.0, -25.0, -700.0] {
            let l = log_neg_log1m_exp(a);
            // the complement has log-probability -e^l; complementing again gives a
            assert!(
                (log1m_exp_neg_exp(l) - a).abs() < 1e-9 * (1.0 + a.abs()),
                "{a}"
            );
        }
    }

    #[test]
    fn log_sum_exp_handles_sentinels() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(
            log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]),
            f64::NEG_INFINITY
        );
        let v = log_sum_exp(&[-1000.0, -1000.0]);
        assert!((v - (-1000.0 + LN_2)).abs() < 1e-12);
        assert!((log_add_exp(0.0, f64::NEG_INFINITY)).abs() < 1e-15);
    }
}
