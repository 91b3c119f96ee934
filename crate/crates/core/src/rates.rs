//! Rate functions and moderate-deviation constants for the extreme moduli.
//!
//! Every function takes the limiting ratio `α` as an [`AlphaRegime`]. The
//! `Zero` and `Infinity` branches are closed-form limits, not evaluations of
//! the finite formula at an extreme `α`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::AlphaRegime;
use crate::tau::kappa_raw;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEval {
    pub value: f64,
    pub branch: AlphaRegime,
    pub kappa_used: Option<f64>,
    pub diagnostic: Option<String>,
}

impl RateEval {
    fn new(value: f64, branch: AlphaRegime, kappa_used: Option<f64>) -> Self {
        RateEval {
            value,
            branch,
            kappa_used,
            diagnostic: None,
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("x", x, "(0, ∞)"));
    }
    Ok(())
}

/// `log(1+z) - z`, accurate for small `z`.
fn log1p_minus(z: f64) -> f64 {
    if z.abs() < 0.01 {
        let mut term = -z;
        let mut sum = 0.0;
        for k in 2..30 {
            term *= -z;
            sum += term / k as f64;
        }
        -sum
    } else {
        z.ln_1p() - z
    }
}

/// Rate of `{max ≥ x}` for `x > 1`:
/// `α log((1+α)/(α+κ)) + 2(κ - log x - 1)`; zero for `x ≤ 1`.
pub fn rate_max_right(alpha: AlphaRegime, x: f64) -> Result<RateEval> {
    check_x(x)?;
    let k = kappa_raw(alpha, x);
    if x <= 1.0 {
        return Ok(RateEval::new(0.0, alpha, Some(k)));
    }
    let value = match alpha {
        AlphaRegime::Zero => 2.0 * (x - x.ln() - 1.0),
        AlphaRegime::Infinity => x * x - 2.0 * x.ln() - 1.0,
        AlphaRegime::Finite(a) => a * ((1.0 - k) / (a + k)).ln_1p() + 2.0 * (k - x.ln() - 1.0),
    };
    Ok(RateEval::new(value.max(0.0), alpha, Some(k)))
}

/// Rate of `{max ≤ x}` for `0 < x < 1`:
/// `(α+α²/2) log((1+α)/(κ+α)) - log x - (α+3-κ)(1-κ)/2`; zero for `x ≥ 1`.
///
/// The `Infinity` branch is the limit `-log x - (x⁴-4x²+3)/4`.
pub fn rate_max_left(alpha: AlphaRegime, x: f64) -> Result<RateEval> {
    check_x(x)?;
    let k = kappa_raw(alpha, x);
    if x >= 1.0 {
        return Ok(RateEval::new(0.0, alpha, Some(k)));
    }
    let value = match alpha {
        AlphaRegime::Zero => -x.ln() - (x * x - 4.0 * x + 3.0) / 2.0,
        AlphaRegime::Infinity => {
            let x2 = x * x;
            -x.ln() - (x2 * x2 - 4.0 * x2 + 3.0) / 4.0
        }
        AlphaRegime::Finite(a) => {
            // the O(α) pieces of the two outer terms cancel; regroup them
            let d = 1.0 - k;
            let w = d / (k + a);
            a * w.ln_1p() + 0.5 * a * a * log1p_minus(w)
                - d * a * k / (2.0 * (k + a))
                - x.ln()
                - (3.0 - k) * d / 2.0
        }
    };
    Ok(RateEval::new(value.max(0.0), alpha, Some(k)))
}

/// `-log x - (x⁴-4x²+3)/2`, an alternative `α = ∞` left-tail expression.
/// It is negative for small `x` (about `-0.338` at `x = 0.5`), so it cannot
/// be a rate there; the result carries a diagnostic whenever that happens.
pub fn rate_max_left_infinity_alt(x: f64) -> Result<RateEval> {
    check_x(x)?;
    if x >= 1.0 {
        return Ok(RateEval::new(0.0, AlphaRegime::Infinity, Some(x * x)));
    }
    let x2 = x * x;
    let value = -x.ln() - (x2 * x2 - 4.0 * x2 + 3.0) / 2.0;
    let mut r = RateEval::new(value, AlphaRegime::Infinity, Some(x2));
    if value < 0.0 {
        r.diagnostic = Some(format!(
            "negative value {value:.6} at x = {x}: not a valid rate"
        ));
    }
    Ok(r)
}

/// Rate `Ĵ_α(x)` of `{min ≥ x}`.
///
/// For `x ≥ 1`: `α((α+2)/2 log(1+1/α) - log(1+κ/α)) + 2κ - (3+α)/2 - log x`;
/// for `x < 1`: `(α²/2) log(1+κ/α) - (ακ-κ²)/2`.
///
/// Limits: `α = 0` gives `2x - 3/2 - log x` and `x²/2`; `α = ∞` gives
/// `x² - log x - 3/4` and `x⁴/4`, from `κ → x²` and
/// `(α²/2) log(1+z/α) = αz/2 - z²/4 + O(1/α)`.
pub fn rate_min_right(alpha: AlphaRegime, x: f64) -> Result<RateEval> {
    check_x(x)?;
    let k = kappa_raw(alpha, x);
    let value = match (alpha, x >= 1.0) {
        (AlphaRegime::Zero, true) => 2.0 * x - 1.5 - x.ln(),
        (AlphaRegime::Zero, false) => 0.5 * x * x,
        (AlphaRegime::Infinity, true) => x * x - x.ln() - 0.75,
        (AlphaRegime::Infinity, false) => 0.25 * x.powi(4),
        (AlphaRegime::Finite(a), true) => {
            // α(α+2)/2·log(1+1/α) - α/2 regrouped so the α/2 pieces cancel
            0.5 * a * a * log1p_minus(1.0 / a) + a * (1.0 / a).ln_1p() - a * (k / a).ln_1p()
                + 2.0 * k
                - 1.5
                - x.ln()
        }
        (AlphaRegime::Finite(a), false) => 0.5 * a * a * log1p_minus(k / a) + 0.5 * k * k,
    };
    Ok(RateEval::new(value.max(0.0), alpha, Some(k)))
}

/// `2(1+α)/(2+α)`: the right-tail moderate-deviation rate of the maximum is
/// this constant times `x²`.
pub fn mdp_max_right_const(alpha: AlphaRegime) -> f64 {
    match alpha {
        AlphaRegime::Zero => 1.0,
        AlphaRegime::Infinity => 2.0,
        AlphaRegime::Finite(a) => 2.0 * (1.0 + a) / (2.0 + a),
    }
}

/// `4(1+α)²/(3(2+α)²)`: the left-tail moderate-deviation rate of the maximum
/// is this constant times `x³`.
pub fn mdp_max_left_const(alpha: AlphaRegime) -> f64 {
    match alpha {
        AlphaRegime::Zero => 1.0 / 3.0,
        AlphaRegime::Infinity => 4.0 / 3.0,
        AlphaRegime::Finite(a) => {
            let r = (1.0 + a) / (2.0 + a);
            4.0 * r * r / 3.0
        }
    }
}

/// Scale regimes for moderate deviations of the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MinMdpRegime {
    /// `v = O(√(n log n))`, sequence `l_n` with `log n / n ≪ l_n² ≪ 1`.
    SmallV,
    /// `√(n log n) ≪ v ≪ n`, deviations on the scale `l = v/n`.
    VScale,
    /// `√(n log n) ≪ v ≪ n`, with `v/n ≪ l ≪ 1`.
    Intermediate,
    /// `v/n → α > 0`.
    AlphaPositive,
}

/// Rate for `{min ≥ l x}` normalised by `n² l²` (or `v²` on the `v`-scale,
/// `n² l⁴` when `α > 0`).
pub fn mdp_min_rate(regime: MinMdpRegime, alpha: Option<AlphaRegime>, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("x", x, "[0, ∞)"));
    }
    match regime {
        MinMdpRegime::SmallV | MinMdpRegime::Intermediate => Ok(0.5 * x * x),
        MinMdpRegime::VScale => Ok(phi_vscale(x)),
        MinMdpRegime::AlphaPositive => match alpha {
            Some(AlphaRegime::Finite(a)) => {
                let r = (1.0 + a) / a;
                Ok(0.25 * r * r * x.powi(4))
            }
            Some(AlphaRegime::Infinity) => Ok(0.25 * x.powi(4)),
            Some(AlphaRegime::Zero) | None => Err(Error::Regime(
                "the α > 0 minimum rate needs a positive α".into(),
            )),
        },
    }
}

/// `Φ(x) = ½ log((1+√(1+4x²))/2) + (1+x²)/2 - √(1+4x²)/2`.
pub fn phi_vscale(x: f64) -> f64 {
    let x2 = x * x;
    let r = (1.0 + 4.0 * x2).sqrt();
    // with q = (r-1)/2 = 2x²/(1+r): Φ = ½(log(1+q) - q) + ½(x² - q),
    // and x² - q = x²(r-1)/(r+1) keeps the x² terms from cancelling
    let rm1 = 4.0 * x2 / (1.0 + r);
    let q = 0.5 * rm1;
    0.5 * log1p_minus(q) + 0.5 * x2 * rm1 / (1.0 + r)
}

/// `½ log((1+√(1+4x²))/2 + 1 + x² - √(1+4x²))`, an alternative closed form
/// for the `v`-scale rate. It differs from [`phi_vscale`] (at `x = 1`:
/// 0.1618 against 0.1226).
pub fn phi_vscale_alt(x: f64) -> f64 {
    let x2 = x * x;
    let r = (1.0 + 4.0 * x2).sqrt();
    // the argument minus one is x² - (r-1)/2 = x²(r-1)/(r+1)
    let rm1 = 4.0 * x2 / (1.0 + r);
    0.5 * (x2 * rm1 / (1.0 + r)).ln_1p()
}
