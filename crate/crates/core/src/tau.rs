//! Large-`v` geometry of the index densities.
//!
//! For large `v`, `y^{2j+v-1} K_v(vy) ≈ √(π/2v) e^{-v τ_j(y)}`, with
//! `τ_j(y) = u(y) + log(1+y²)/(4v) - (2j-1) log(y)/v` and
//! `u(y) = √(1+y²) - log(1+√(1+y²))`. `τ_j` is strictly convex with a unique
//! minimizer `x_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::AlphaRegime;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauParams {
    j: usize,
    v: f64,
}

impl TauParams {
    pub fn new(j: usize, v: f64) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidParameter("j must be at least 1".into()));
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain("v", v, "(0, ∞)"));
        }
        Ok(TauParams { j, v })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    fn slope_coeff(&self) -> f64 {
        (2 * self.j - 1) as f64 / self.v
    }

    /// The open interval that contains `x_j`.
    pub fn bracket(&self) -> (f64, f64) {
        let j = self.j as f64;
        let v = self.v;
        let lo = 2.0 * ((j - 0.75) * (j + v - 0.75)).sqrt() / v;
        let hi = 2.0 * ((j - 0.5) * (j + v - 0.5)).sqrt() / v;
        (lo, hi)
    }
}

pub fn u(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", x, "[0, ∞)"));
    }
    Ok(u_raw(x))
}

pub(crate) fn u_raw(x: f64) -> f64 {
    let r = x.hypot(1.0);
    r - r.ln_1p()
}

fn check_y(y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain("y", y, "(0, ∞)"));
    }
    Ok(())
}

pub fn tau(p: &TauParams, y: f64) -> Result<f64> {
    check_y(y)?;
    Ok(tau_raw(p, y))
}

pub(crate) fn tau_raw(p: &TauParams, y: f64) -> f64 {
    u_raw(y) + (y * y).ln_1p() / (4.0 * p.v) - p.slope_coeff() * y.ln()
}

pub fn tau_prime(p: &TauParams, y: f64) -> Result<f64> {
    check_y(y)?;
    Ok(tau_prime_raw(p, y))
}

pub(crate) fn tau_prime_raw(p: &TauParams, y: f64) -> f64 {
    let y2 = y * y;
    let r = y.hypot(1.0);
    y / (1.0 + r) + y / (2.0 * p.v * (1.0 + y2)) - p.slope_coeff() / y
}

pub fn tau_second(p: &TauParams, y: f64) -> Result<f64> {
    check_y(y)?;
    Ok(tau_second_raw(p, y))
}

pub(crate) fn tau_second_raw(p: &TauParams, y: f64) -> f64 {
    let y2 = y * y;
    let r = y.hypot(1.0);
    let q = 1.0 + y2;
    1.0 / (r * (1.0 + r)) + (1.0 - y2) / (2.0 * p.v * q * q) + p.slope_coeff() / y2
}

/// The unique minimizer `x_j` of `τ_j`.
///
/// Newton from the bracket midpoint; any step that leaves the current
/// bracket is replaced by bisection.
pub fn minimizer_xj(p: &TauParams) -> f64 {
    let (lo, hi) = p.bracket();
    solve_in_bracket(p, lo, hi, 0.5 * (lo + hi))
}

fn solve_in_bracket(p: &TauParams, mut lo: f64, mut hi: f64, start: f64) -> f64 {
    let mut x = start;
    for _ in 0..200 {
        let g = tau_prime_raw(p, x);
        if g == 0.0 {
            return x;
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = g / tau_second_raw(p, x);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() || hi - lo <= 4.0 * f64::EPSILON * hi {
            return next;
        }
        x = next;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaValue {
    pub kappa: f64,
    pub alpha: AlphaRegime,
    pub x: f64,
}

/// `κ_α(x) = 2(1+α)x² / (α + √(α² + 4(1+α)x²))`, the positive root of
/// `κ(κ+α) = (1+α)x²`; `κ_0(x) = x` and `κ_∞(x) = x²`.
pub fn kappa(alpha: AlphaRegime, x: f64) -> KappaValue {
    KappaValue {
        kappa: kappa_raw(alpha, x),
        alpha,
        x,
    }
}

pub(crate) fn kappa_raw(alpha: AlphaRegime, x: f64) -> f64 {
    match alpha {
        AlphaRegime::Zero => x,
        AlphaRegime::Infinity => x * x,
        AlphaRegime::Finite(a) => {
            let x2 = x * x;
            // for huge α the discriminant overflows in squared form
            let root = if a > 1e150 {
                a * (4.0 * (1.0 + a) * x2 / (a * a)).sqrt().hypot(1.0)
            } else {
                (a * a + 4.0 * (1.0 + a) * x2).sqrt()
            };
            2.0 * (1.0 + a) * x2 / (a + root)
        }
    }
}
