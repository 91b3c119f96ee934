//! Exact finite-`(n, v)` distributions of the scaled moduli.
//!
//! The squared moduli are distributed as independent `Y_1, …, Y_n` where
//! `t = 2nY_j` has density `t^{2j+v-1} K_v(t) / Z_j` on `t > 0`, and the
//! scaled variables are `X_j = √(n/(n+v)) Y_j`, so `{X_j ≥ x}` is
//! `{t ≥ c x}` with `c = 2√(n(n+v))`. Every tail is a one-dimensional
//! integral, evaluated in `s = log t` with log-space quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{log1m_exp, log1m_exp_neg_exp, log_neg_log1m_exp, log_sum_exp};
use crate::params::{Direction, EnsembleParams, LogProbability, Statistic, TailQuery};
use crate::quadrature::{integrate_log, QuadratureSpec};
use crate::special::{ln_kv, ln_zj};

/// The law of the `j`-th independent modulus of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexDistribution {
    params: EnsembleParams,
    j: usize,
    #[serde(skip)]
    ln_z: f64,
}

/// `log P(X_j ≤ x)` and `log P(X_j ≥ x)` from a single quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexTails {
    pub log_cdf: f64,
    pub log_sf: f64,
    /// Which side was integrated; the other is its complement.
    pub direct: TailSide,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailSide {
    Lower,
    Upper,
}

impl IndexDistribution {
    pub fn new(params: EnsembleParams, j: usize) -> Result<Self> {
        if j == 0 || j > params.n() {
            return Err(Error::InvalidParameter(format!(
                "index j = {j} outside 1..={}",
                params.n()
            )));
        }
        Ok(IndexDistribution {
            params,
            j,
            ln_z: ln_zj(j as f64, params.v() as f64),
        })
    }

    pub fn params(&self) -> EnsembleParams {
        self.params
    }

    pub fn j(&self) -> usize {
        self.j
    }

    fn order(&self) -> f64 {
        self.params.v() as f64
    }

    /// Log-density of `s = log t`.
    pub fn log_density_s(&self, s: f64) -> f64 {
        let t = s.exp();
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        if t.is_infinite() {
            return f64::NEG_INFINITY;
        }
        (2 * self.j) as f64 * s + self.order() * s + ln_kv(self.order(), t) - self.ln_z
    }

    /// Log-density of `t = 2nY_j`.
    pub fn log_density_t(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return f64::NEG_INFINITY;
        }
        self.log_density_s(t.ln()) - t.ln()
    }

    /// Approximate mode of `log t`: `log(2√(j(j+v)))`, from `t = 2√(G_j G_{j+v})`.
    pub fn mode_s(&self) -> f64 {
        let j = self.j as f64;
        std::f64::consts::LN_2 + 0.5 * (j.ln() + (j + self.order()).ln())
    }

    /// Spread of `log t`.
    pub fn width_s(&self) -> f64 {
        let j = self.j as f64;
        let jv = j + self.order();
        0.5 * (1.0 / j + 0.5 / (j * j) + 1.0 / jv + 0.5 / (jv * jv)).sqrt()
    }

    /// `t`-scale threshold corresponding to `X_j = x`.
    pub fn t_threshold(&self, x: f64) -> f64 {
        self.params.scales().c_nv * x
    }

    fn integrate(&self, lo: f64, hi: f64, q: &QuadratureSpec) -> Result<(f64, f64)> {
        let r = integrate_log(
            |s| self.log_density_s(s),
            lo,
            hi,
            self.mode_s(),
            self.width_s(),
            q,
        )?;
        Ok((r.log_value, r.rel_err))
    }

    /// `log ∫ density`: zero up to quadrature error.
    pub fn log_total_mass(&self, q: &QuadratureSpec) -> Result<f64> {
        self.integrate(f64::NEG_INFINITY, f64::INFINITY, q)
            .map(|r| r.0)
    }

    /// Both tails at `X_j = x`. The tail not containing the mode is
    /// integrated; the other is its complement.
    pub fn tails(&self, x: f64, q: &QuadratureSpec) -> Result<IndexTails> {
        if !(x > 0.0) || x.is_nan() {
            return Err(Error::domain("x", x, "(0, ∞)"));
        }
        if x.is_infinite() {
            return Ok(IndexTails {
                log_cdf: 0.0,
                log_sf: f64::NEG_INFINITY,
                direct: TailSide::Upper,
                rel_err: 0.0,
            });
        }
        let st = self.t_threshold(x).ln();
        if st >= self.mode_s() {
            let (ls, err) = self.integrate(st, f64::INFINITY, q)?;
            let ls = ls.min(0.0);
            Ok(IndexTails {
                log_cdf: log1m_exp(ls),
                log_sf: ls,
                direct: TailSide::Upper,
                rel_err: err,
            })
        } else {
            let (lc, err) = self.integrate(f64::NEG_INFINITY, st, q)?;
            let lc = lc.min(0.0);
            Ok(IndexTails {
                log_cdf: lc,
                log_sf: log1m_exp(lc),
                direct: TailSide::Lower,
                rel_err: err,
            })
        }
    }

    /// `log(-log P(X_j ≤ x))`, kept accurate when `P(X_j ≤ x)` is near one.
    fn log_neg_log_cdf(t: &IndexTails) -> f64 {
        match t.direct {
            TailSide::Upper => log_neg_log1m_exp(t.log_sf),
            TailSide::Lower => (-t.log_cdf).ln(),
        }
    }

    /// `log(-log P(X_j ≥ x))`.
    fn log_neg_log_sf(t: &IndexTails) -> f64 {
        match t.direct {
            TailSide::Lower => log_neg_log1m_exp(t.log_cdf),
            TailSide::Upper => (-t.log_sf).ln(),
        }
    }
}

pub fn log_sf_index(
    params: EnsembleParams,
    j: usize,
    x: f64,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    let d = IndexDistribution::new(params, j)?;
    Ok(LogProbability::clamped(d.tails(x, q)?.log_sf))
}

pub fn log_cdf_index(
    params: EnsembleParams,
    j: usize,
    x: f64,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    let d = IndexDistribution::new(params, j)?;
    Ok(LogProbability::clamped(d.tails(x, q)?.log_cdf))
}

/// Tails of every index at `x`, in index order. Evaluated in parallel;
/// each entry depends only on `(params, j, x, q)`.
pub fn all_tails(params: EnsembleParams, x: f64, q: &QuadratureSpec) -> Result<Vec<IndexTails>> {
    q.validate()?;
    (1..=params.n())
        .into_par_iter()
        .map(|j| {
            IndexDistribution::new(params, j)
                .and_then(|d| d.tails(x, q))
                .map_err(|e| e.at_index(j))
        })
        .collect()
}

fn ordered_sum(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |acc, v| acc + v)
}

fn combine(tails: &[IndexTails], statistic: Statistic, direction: Direction) -> LogProbability {
    LogProbability::clamped(match (statistic, direction) {
        (Statistic::MaxSq, Direction::LE) => ordered_sum(tails.iter().map(|t| t.log_cdf)),
        (Statistic::MinSq, Direction::GE) => ordered_sum(tails.iter().map(|t| t.log_sf)),
        (Statistic::MaxSq, Direction::GE) => {
            complement_of_product(tails.iter().map(IndexDistribution::log_neg_log_cdf))
        }
        (Statistic::MinSq, Direction::LE) => {
            complement_of_product(tails.iter().map(IndexDistribution::log_neg_log_sf))
        }
    })
}

fn tail_event(
    params: EnsembleParams,
    x: f64,
    statistic: Statistic,
    direction: Direction,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    Ok(combine(&all_tails(params, x, q)?, statistic, direction))
}

/// `log P(X_(n) ≤ x) = Σ_j log P(X_j ≤ x)`.
pub fn log_prob_max_le(
    params: EnsembleParams,
    x: f64,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    tail_event(params, x, Statistic::MaxSq, Direction::LE, q)
}

/// `log P(X_(1) ≥ x) = Σ_j log P(X_j ≥ x)`.
pub fn log_prob_min_ge(
    params: EnsembleParams,
    x: f64,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    tail_event(params, x, Statistic::MinSq, Direction::GE, q)
}

/// `log P(X_(n) ≥ x) = log(1 - Π_j P(X_j ≤ x))`.
pub fn log_prob_max_ge(
    params: EnsembleParams,
    x: f64,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    tail_event(params, x, Statistic::MaxSq, Direction::GE, q)
}

/// `log P(X_(1) ≤ x) = log(1 - Π_j P(X_j ≥ x))`.
pub fn log_prob_min_le(
    params: EnsembleParams,
    x: f64,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    tail_event(params, x, Statistic::MinSq, Direction::LE, q)
}

/// Log-probability of a tail event of either extreme.
pub fn log_prob(
    params: EnsembleParams,
    query: TailQuery,
    q: &QuadratureSpec,
) -> Result<LogProbability> {
    tail_event(
        params,
        query.threshold(),
        query.statistic,
        query.direction,
        q,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbReport {
    pub log_p: LogProbability,
    /// Largest estimated relative quadrature error over the indices.
    pub max_rel_err: f64,
    /// Index attaining `max_rel_err`.
    pub worst_index: usize,
}

/// [`log_prob`] together with quadrature diagnostics.
pub fn log_prob_report(
    params: EnsembleParams,
    query: TailQuery,
    q: &QuadratureSpec,
) -> Result<ProbReport> {
    let tails = all_tails(params, query.threshold(), q)?;
    let (worst_index, max_rel_err) = tails
        .iter()
        .enumerate()
        .map(|(i, t)| (i + 1, t.rel_err))
        .fold((1, 0.0f64), |a, b| if b.1 > a.1 { b } else { a });
    Ok(ProbReport {
        log_p: combine(&tails, query.statistic, query.direction),
        max_rel_err,
        worst_index,
    })
}

/// Given `l_j = log(-log p_j)`, returns `log(1 - Π p_j)`.
fn complement_of_product(l: impl Iterator<Item = f64>) -> f64 {
    let l: Vec<f64> = l.collect();
    log1m_exp_neg_exp(log_sum_exp(&l))
}
