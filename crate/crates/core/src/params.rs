//! Ensemble parameters, derived scalings and the shared value types.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace;

/// Size `n` (number of paired eigenvalues) and chirality index `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleParams {
    n: usize,
    v: usize,
}

impl EnsembleParams {
    pub fn new(n: usize, v: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(EnsembleParams { n, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn scales(&self) -> Scales {
        derived_scales(*self)
    }
}

impl fmt::Display for EnsembleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, v={})", self.n, self.v)
    }
}

/// Scalings that recur throughout: `c = 2√(n(n+v))`, `s_n = n(n+v)/(2n+v)`,
/// the modulus scale `√(n/(n+v))`, and the Gumbel centring `a(s_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scales {
    pub c_nv: f64,
    pub s_n: f64,
    pub modulus_scale: f64,
    /// `None` when `s_n <= 1`, where `log s_n` is not positive.
    pub a_sn: Option<f64>,
}

pub fn derived_scales(params: EnsembleParams) -> Scales {
    let n = params.n as f64;
    let v = params.v as f64;
    let s_n = n * (n + v) / (2.0 * n + v);
    Scales {
        c_nv: 2.0 * (n * (n + v)).sqrt(),
        s_n,
        modulus_scale: (n / (n + v)).sqrt(),
        a_sn: gumbel_centering(s_n),
    }
}

/// `a(y) = (log y)^{1/2} - (log y)^{-1/2} log(2π log y)`, defined for `y > 1`.
pub fn gumbel_centering(y: f64) -> Option<f64> {
    let ly = y.ln();
    if !(ly > 0.0) {
        return None;
    }
    let r = ly.sqrt();
    Some(r - (2.0 * std::f64::consts::PI * ly).ln() / r)
}

/// Gumbel distribution function `G(y) = exp(-exp(-y))`.
pub fn gumbel_cdf(y: f64) -> f64 {
    (-(-y).exp()).exp()
}

/// The limiting ratio `α = lim v/n`, with explicit tags for the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", content = "value")]
pub enum AlphaRegime {
    Zero,
    Finite(f64),
    Infinity,
}

impl AlphaRegime {
    /// Builds a regime from a numeric value: `0` maps to `Zero`, `+∞` to
    /// `Infinity`, anything else in `(0, ∞)` to `Finite`.
    pub fn from_value(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::domain("alpha", alpha, "[0, ∞]"));
        }
        Ok(if alpha == 0.0 {
            AlphaRegime::Zero
        } else if alpha.is_infinite() {
            AlphaRegime::Infinity
        } else {
            AlphaRegime::Finite(alpha)
        })
    }

    /// The pre-limit ratio `v/n` of a finite ensemble. Never yields
    /// `Infinity`; limit branches are only selected by explicit tag.
    pub fn classify(params: EnsembleParams) -> Self {
        if params.v == 0 {
            AlphaRegime::Zero
        } else {
            AlphaRegime::Finite(params.v as f64 / params.n as f64)
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            AlphaRegime::Zero => 0.0,
            AlphaRegime::Finite(a) => a,
            AlphaRegime::Infinity => f64::INFINITY,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlphaRegime::Zero => "zero",
            AlphaRegime::Finite(_) => "finite",
            AlphaRegime::Infinity => "infinity",
        }
    }
}

impl std::str::FromStr for AlphaRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(AlphaRegime::Infinity),
            t => {
                let a: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse alpha {s:?}")))?;
                AlphaRegime::from_value(a)
            }
        }
    }
}

/// A probability held as its natural logarithm. `log 0` is `-∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogProbability(f64);

impl LogProbability {
    pub const ZERO: LogProbability = LogProbability(f64::NEG_INFINITY);
    pub const ONE: LogProbability = LogProbability(0.0);

    /// Clamps tiny positive rounding excursions to `0`; rejects NaN and
    /// anything clearly above `0`.
    pub fn new(log_p: f64) -> Result<Self> {
        if log_p.is_nan() || log_p > 1e-9 {
            return Err(Error::domain("log_p", log_p, "[-∞, 0]"));
        }
        Ok(LogProbability(log_p.min(0.0)))
    }

    pub(crate) fn clamped(log_p: f64) -> Self {
        debug_assert!(!log_p.is_nan());
        LogProbability(log_p.min(0.0))
    }

    pub fn ln(&self) -> f64 {
        self.0
    }

    pub fn prob(&self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Log-probability of the complementary event.
    pub fn complement(&self) -> Self {
        LogProbability(logspace::log1m_exp(self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistic {
    /// `X_(n)`: the scaled largest squared modulus.
    MaxSq,
    /// `X_(1)`: the scaled smallest squared modulus.
    MinSq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    GE,
    LE,
}

/// An event `{stat ≥ x}` or `{stat ≤ x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailQuery {
    pub statistic: Statistic,
    pub direction: Direction,
    threshold: f64,
}

impl TailQuery {
    pub fn new(statistic: Statistic, direction: Direction, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(Error::domain("x", threshold, "(0, ∞)"));
        }
        Ok(TailQuery {
            statistic,
            direction,
            threshold,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_examples() {
        let s = derived_scales(EnsembleParams::new(4, 0).unwrap());
        assert_eq!(s.c_nv, 8.0);
        assert_eq!(s.s_n, 2.0);
        assert_eq!(s.modulus_scale, 1.0);

        let s = derived_scales(EnsembleParams::new(3, 1).unwrap());
        assert!((s.c_nv - 6.928_203_230_275_509).abs() < 1e-12);
        assert!((s.s_n - 12.0 / 7.0).abs() < 1e-15);
        assert!((s.modulus_scale - 0.866_025_403_784_438_6).abs() < 1e-15);

        let s = derived_scales(EnsembleParams::new(1, 0).unwrap());
        assert_eq!(s.s_n, 0.5);
        assert!(s.a_sn.is_none());
    }

    #[test]
    fn scales_consistency() {
        for n in 1..60 {
            for v in [0usize, 1, 7, 100, 5000] {
                let p = EnsembleParams::new(n, v).unwrap();
                let s = p.scales();
                let nf = n as f64;
                let vf = v as f64;
                assert!((s.c_nv * s.c_nv - 4.0 * nf * (nf + vf)).abs() <= 1e-12 * s.c_nv * s.c_nv);
                let back = s.modulus_scale * s.modulus_scale * (nf + vf);
                assert!((back - nf).abs() <= 2.0 * f64::EPSILON * nf);
                assert!(s.modulus_scale > 0.0 && s.modulus_scale <= 1.0);
                assert_eq!(s.a_sn.is_some(), s.s_n.ln() > 0.0);
            }
        }
    }

    #[test]
    fn zero_n_rejected() {
        assert!(EnsembleParams::new(0, 3).is_err());
    }

    #[test]
    fn alpha_classification() {
        let p = EnsembleParams::new(100, 0).unwrap();
        assert_eq!(AlphaRegime::classify(p), AlphaRegime::Zero);
        let p = EnsembleParams::new(100, 100).unwrap();
        assert_eq!(AlphaRegime::classify(p), AlphaRegime::Finite(1.0));
        assert_eq!("inf".parse::<AlphaRegime>().unwrap(), AlphaRegime::Infinity);
        assert_eq!("0".parse::<AlphaRegime>().unwrap(), AlphaRegime::Zero);
        assert_eq!(
            AlphaRegime::from_value(f64::INFINITY).unwrap(),
            AlphaRegime::Infinity
        );
        assert!(AlphaRegime::from_value(-1.0).is_err());
        assert!("-2".parse::<AlphaRegime>().is_err());
    }

    #[test]
    fn gumbel_values() {
        assert!((gumbel_cdf(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((gumbel_cdf(-(2f64.ln()).ln()) - 0.5).abs() < 1e-15);
        assert_eq!(gumbel_cdf(1e3), 1.0);
        assert_eq!(gumbel_cdf(-1e3), 0.0);
        let mut prev = 0.0;
        for k in -200..200 {
            let g = gumbel_cdf(k as f64 * 0.05);
            assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn log_probability_guards() {
        assert!(LogProbability::new(0.5).is_err());
        assert!(LogProbability::new(f64::NAN).is_err());
        assert!(LogProbability::ZERO.is_zero());
        assert_eq!(LogProbability::new(1e-12).unwrap().ln(), 0.0);
        let half = LogProbability::new(0.5f64.ln()).unwrap();
        assert!((half.complement().prob() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tail_query_requires_positive_threshold() {
        assert!(TailQuery::new(Statistic::MaxSq, Direction::GE, 0.0).is_err());
        assert!(TailQuery::new(Statistic::MinSq, Direction::LE, 1.5).is_ok());
    }
}
