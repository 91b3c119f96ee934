//! Asymptotic predictors for single-index tails and the convergence harness
//! that compares exact probabilities with the limiting rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{log_prob_max_ge, log_prob_max_le, log_prob_min_ge};
use crate::params::{gumbel_cdf, AlphaRegime, EnsembleParams};
use crate::quadrature::QuadratureSpec;
use crate::rates::{
    mdp_max_left_const, mdp_max_right_const, mdp_min_rate, phi_vscale, phi_vscale_alt,
    rate_max_left, rate_max_right, rate_min_right, MinMdpRegime,
};
use crate::special::log_gamma_p;
use crate::tau::{minimizer_xj, u_raw, TauParams};

/// Size of the neglected remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrectionClass {
    /// Bounded.
    O1,
    /// `Õ(log n)`: at most a constant times `log n`.
    LogN,
    /// `o(n)`.
    SmallON,
    /// `o(n²)`.
    SmallON2,
}

impl CorrectionClass {
    pub fn label(&self) -> &'static str {
        match self {
            CorrectionClass::O1 => "O(1)",
            CorrectionClass::LogN => "Õ(log n)",
            CorrectionClass::SmallON => "o(n)",
            CorrectionClass::SmallON2 => "o(n²)",
        }
    }
}

/// A predicted log-probability with the size of what it neglects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub value: f64,
    pub correction_class: CorrectionClass,
    /// 1 or 2: which of the two regimes of the prediction applies.
    pub branch: u8,
}

/// Largest `c·a` accepted relative to `n` in the bounded-`v` predictors.
pub const BOUNDED_V_MAX_A: f64 = 10.0;
/// Smallest `c·a` accepted in the bounded-`v` predictors.
pub const BOUNDED_V_MIN_CA: f64 = 30.0;
/// Smallest order accepted by the large-`v` predictors.
pub const LARGE_V_MIN: usize = 30;

fn bounded_v_guard(params: EnsembleParams, j: usize, a: f64) -> Result<f64> {
    if j == 0 || j > params.n() {
        return Err(Error::InvalidParameter(format!(
            "index j = {j} outside 1..={}",
            params.n()
        )));
    }
    if !(a > 0.0 && a <= BOUNDED_V_MAX_A) {
        return Err(Error::Regime(format!(
            "a = {a} outside (0, {BOUNDED_V_MAX_A}]"
        )));
    }
    let ca = params.scales().c_nv * a;
    if ca < BOUNDED_V_MIN_CA {
        return Err(Error::Regime(format!(
            "c·a = {ca} below {BOUNDED_V_MIN_CA}"
        )));
    }
    Ok(ca)
}

/// `-2j log(j/(na)) + 2j - 2na`.
fn bounded_v_tail(n: f64, j: f64, a: f64) -> f64 {
    -2.0 * j * (j / (n * a)).ln() + 2.0 * j - 2.0 * n * a
}

/// `log P(X_j ≥ a)` for bounded `v`: negligible when `2j+v-½ > c·a`,
/// otherwise `-2j log(j/(na)) + 2j - 2na`, both up to `Õ(log n)`.
pub fn predict_log_sf_bounded_v(
    params: EnsembleParams,
    j: usize,
    a: f64,
) -> Result<AsymptoticPrediction> {
    let ca = bounded_v_guard(params, j, a)?;
    let lead = (2 * j + params.v()) as f64 - 0.5;
    Ok(if lead > ca {
        AsymptoticPrediction {
            value: 0.0,
            correction_class: CorrectionClass::LogN,
            branch: 1,
        }
    } else {
        AsymptoticPrediction {
            value: bounded_v_tail(params.n() as f64, j as f64, a),
            correction_class: CorrectionClass::LogN,
            branch: 2,
        }
    })
}

/// `log P(X_j ≤ a)` for bounded `v`: `-2j log(j/(na)) + 2j - 2na` when
/// `2j+v-5/2 > c·a`, otherwise negligible, both up to `Õ(log n)`.
pub fn predict_log_cdf_bounded_v(
    params: EnsembleParams,
    j: usize,
    a: f64,
) -> Result<AsymptoticPrediction> {
    let ca = bounded_v_guard(params, j, a)?;
    let lead = (2 * j + params.v()) as f64 - 2.5;
    Ok(if lead > ca {
        AsymptoticPrediction {
            value: bounded_v_tail(params.n() as f64, j as f64, a),
            correction_class: CorrectionClass::LogN,
            branch: 1,
        }
    } else {
        AsymptoticPrediction {
            value: 0.0,
            correction_class: CorrectionClass::LogN,
            branch: 2,
        }
    })
}

/// `log P(X_j ≤ a) ≈ log P(2j+v-½, c·a)`, the regularized lower incomplete
/// gamma function, with a `(1+o(1))` factor.
pub fn predict_log_cdf_gamma(
    params: EnsembleParams,
    j: usize,
    a: f64,
) -> Result<AsymptoticPrediction> {
    let ca = bounded_v_guard(params, j, a)?;
    Ok(AsymptoticPrediction {
        value: log_gamma_p((2 * j + params.v()) as f64 - 0.5, ca)?,
        correction_class: CorrectionClass::O1,
        branch: 1,
    })
}

fn large_v_setup(params: EnsembleParams, j: usize, a: f64) -> Result<(TauParams, f64, f64)> {
    if params.v() < LARGE_V_MIN {
        return Err(Error::Regime(format!(
            "v = {} below {LARGE_V_MIN}",
            params.v()
        )));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("a", a, "(0, ∞)"));
    }
    let v = params.v() as f64;
    let p = TauParams::new(j, v)?;
    if j > params.n() {
        return Err(Error::InvalidParameter(format!(
            "index j = {j} outside 1..={}",
            params.n()
        )));
    }
    let y = params.scales().c_nv * a / v;
    Ok((p, y, minimizer_xj(&p)))
}

/// `(2j+v-1) log v + (2j+v)(1-log 2) - (j+v-½) log(j+v) - (j-½) log j
///  - v u(y) + (2j-1) log y`.
fn large_v_tail(j: f64, v: f64, y: f64) -> f64 {
    (2.0 * j + v - 1.0) * v.ln() + (2.0 * j + v) * (1.0 - std::f64::consts::LN_2)
        - (j + v - 0.5) * (j + v).ln()
        - (j - 0.5) * j.ln()
        - v * u_raw(y)
        + (2.0 * j - 1.0) * y.ln()
}

/// `log P(X_j ≥ a)` for large `v`, split at `c·a/v = x_j`.
pub fn predict_log_sf_large_v(
    params: EnsembleParams,
    j: usize,
    a: f64,
) -> Result<AsymptoticPrediction> {
    let (_, y, xj) = large_v_setup(params, j, a)?;
    Ok(if y > xj {
        AsymptoticPrediction {
            value: large_v_tail(j as f64, params.v() as f64, y),
            correction_class: CorrectionClass::LogN,
            branch: 1,
        }
    } else {
        AsymptoticPrediction {
            value: 0.0,
            correction_class: CorrectionClass::LogN,
            branch: 2,
        }
    })
}

/// `log P(X_j ≤ a)` for large `v`, split at `c·a/v = x_j`.
pub fn predict_log_cdf_large_v(
    params: EnsembleParams,
    j: usize,
    a: f64,
) -> Result<AsymptoticPrediction> {
    let (_, y, xj) = large_v_setup(params, j, a)?;
    Ok(if y > xj {
        AsymptoticPrediction {
            value: 0.0,
            correction_class: CorrectionClass::LogN,
            branch: 1,
        }
    } else {
        AsymptoticPrediction {
            value: large_v_tail(j as f64, params.v() as f64, y),
            correction_class: CorrectionClass::LogN,
            branch: 2,
        }
    })
}

/// The two sums `Σ i log i` and `Σ (i+v-½) log(i+v)` over `1 ≤ i ≤ n`,
/// exact and asymptotic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaSums {
    pub exact_1: f64,
    pub asym_1: f64,
    pub exact_2: f64,
    pub asym_2: f64,
}

impl MaSums {
    pub fn residual_1(&self) -> f64 {
        self.exact_1 - self.asym_1
    }

    pub fn residual_2(&self) -> f64 {
        self.exact_2 - self.asym_2
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// For `v = 0` the second expansion is read with `-(1/6) log n` in place of
/// `-(1/6) log(1+n/v)` and without the `v² log v` term, which is the
/// expansion of `Σ (i-½) log i`.
pub fn lemma_ma_sums(n: usize, v: usize) -> Result<MaSums> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let nf = n as f64;
    let vf = v as f64;
    let exact_1 = compensated_sum((1..=n).map(|i| i as f64 * (i as f64).ln()));
    let exact_2 = compensated_sum((1..=n).map(|i| {
        let iv = (i + v) as f64;
        (iv - 0.5) * iv.ln()
    }));
    let ln_n = nf.ln();
    let asym_1 = -nf * nf / 4.0 + nf * (nf + 1.0) / 2.0 * ln_n + ln_n / 12.0;
    let nv = nf + vf;
    let mut asym_2 = -(nf * nf + 2.0 * nf * vf - 2.0 * nf) / 4.0 + nv * nv / 2.0 * nv.ln();
    if v == 0 {
        asym_2 -= ln_n / 6.0;
    } else {
        asym_2 -= vf * vf / 2.0 * vf.ln() + (nf / vf).ln_1p() / 6.0;
    }
    Ok(MaSums {
        exact_1,
        asym_1,
        exact_2,
        asym_2,
    })
}

/// The limit theorems checked by [`converge_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// `(1/n) log P(X_(n) ≥ x) → -I^(r)(x)`, `x > 1`.
    T1Right,
    /// `(1/n²) log P(X_(n) ≤ x) → -I^(l)(x)`, `x < 1`.
    T1Left,
    /// `(1/n²) log P(X_(1) ≥ x) → -Ĵ(x)`.
    T2,
    /// `(1/(n l²)) log P(X_(n) ≥ 1 + l x) → -c_r x²`, `l = n^{-1/3}`.
    T3Right,
    /// `(1/(n² l³)) log P(X_(n) ≤ 1 - l x) → -c_l x³`, `l = n^{-1/4}`.
    T3Left,
    /// Moderate deviations of the minimum: item 1 (`l = n^{-1/3}`), item 2
    /// (`l = v/n`, normalised by `v²`), item 3 (`l = n^{-1/5}`).
    T4Item(u8),
}

impl Theorem {
    pub fn name(&self) -> String {
        match self {
            Theorem::T1Right => "t1-right".into(),
            Theorem::T1Left => "t1-left".into(),
            Theorem::T2 => "t2".into(),
            Theorem::T3Right => "t3-right".into(),
            Theorem::T3Left => "t3-left".into(),
            Theorem::T4Item(k) => format!("t4-item{k}"),
        }
    }

    /// Default scale `l_n` where the theorem uses one.
    pub fn default_l(&self, params: EnsembleParams) -> Option<f64> {
        let n = params.n() as f64;
        match self {
            Theorem::T3Right | Theorem::T4Item(1) => Some(n.powf(-1.0 / 3.0)),
            Theorem::T3Left => Some(n.powf(-0.25)),
            Theorem::T4Item(2) => Some(params.v() as f64 / n),
            Theorem::T4Item(3) => Some(n.powf(-0.2)),
            _ => None,
        }
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "t1-right" => Ok(Theorem::T1Right),
            "t1-left" => Ok(Theorem::T1Left),
            "t2" => Ok(Theorem::T2),
            "t3-right" => Ok(Theorem::T3Right),
            "t3-left" => Ok(Theorem::T3Left),
            "t4-item1" => Ok(Theorem::T4Item(1)),
            "t4-item2" => Ok(Theorem::T4Item(2)),
            "t4-item3" => Ok(Theorem::T4Item(3)),
            other => Err(Error::InvalidParameter(format!(
                "unknown theorem {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub v: usize,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub theorem: String,
    pub n: usize,
    pub v: usize,
    pub x: f64,
    pub l: Option<f64>,
    /// Exact log-probability of the event.
    pub exact: f64,
    /// `-scaling · rate_target`.
    pub predicted: f64,
    pub scaling: f64,
    pub rate_target: f64,
    /// `|-exact/scaling - rate_target|`.
    pub scaled_gap: f64,
    /// Second rate candidate where two closed forms compete.
    pub alt_target: Option<f64>,
    pub alt_gap: Option<f64>,
    pub regime_note: Option<String>,
}

impl ConvergenceRow {
    pub fn relative_gap(&self) -> f64 {
        self.scaled_gap / self.rate_target.abs()
    }
}

struct Scenario {
    log_p: f64,
    l: Option<f64>,
    scaling: f64,
    target: f64,
    alt: Option<f64>,
    note: Option<String>,
}

fn scenario(theorem: Theorem, g: GridPoint, q: &QuadratureSpec) -> Result<Scenario> {
    let params = EnsembleParams::new(g.n, g.v)?;
    let n = g.n as f64;
    let v = g.v as f64;
    let alpha = AlphaRegime::classify(params);
    let l = theorem.default_l(params);
    let mut note = None;
    let x = g.x;
    let s = match theorem {
        Theorem::T1Right => {
            if x <= 1.0 {
                note = Some("x <= 1 is not a deviation".into());
            }
            Scenario {
                log_p: log_prob_max_ge(params, x, q)?.ln(),
                l,
                scaling: n,
                target: rate_max_right(alpha, x)?.value,
                alt: None,
                note,
            }
        }
        Theorem::T1Left => {
            if x >= 1.0 {
                note = Some("x >= 1 is not a deviation".into());
            }
            Scenario {
                log_p: log_prob_max_le(params, x, q)?.ln(),
                l,
                scaling: n * n,
                target: rate_max_left(alpha, x)?.value,
                alt: None,
                note,
            }
        }
        Theorem::T2 => Scenario {
            log_p: log_prob_min_ge(params, x, q)?.ln(),
            l,
            scaling: n * n,
            target: rate_min_right(alpha, x)?.value,
            alt: None,
            note,
        },
        Theorem::T3Right => {
            let ln = l.unwrap_or(1.0);
            if !(n.ln() / n < ln * ln && ln < 1.0) {
                note = Some("l outside log n / n << l² << 1".into());
            }
            Scenario {
                log_p: log_prob_max_ge(params, 1.0 + ln * x, q)?.ln(),
                l,
                scaling: n * ln * ln,
                target: mdp_max_right_const(alpha) * x * x,
                alt: None,
                note,
            }
        }
        Theorem::T3Left => {
            let ln = l.unwrap_or(1.0);
            if !(n.ln() / n < ln.powi(3) && ln < 1.0) {
                note = Some("l outside log n / n << l³, l << 1".into());
            }
            if ln * x >= 1.0 {
                return Err(Error::Regime(format!(
                    "1 - l·x = {} is not positive",
                    1.0 - ln * x
                )));
            }
            Scenario {
                log_p: log_prob_max_le(params, 1.0 - ln * x, q)?.ln(),
                l,
                scaling: n * n * ln.powi(3),
                target: mdp_max_left_const(alpha) * x.powi(3),
                alt: None,
                note,
            }
        }
        Theorem::T4Item(1) => {
            let ln = l.unwrap_or(1.0);
            if v > (n * n.ln()).sqrt() {
                note = Some("v exceeds √(n log n)".into());
            }
            Scenario {
                log_p: log_prob_min_ge(params, ln * x, q)?.ln(),
                l,
                scaling: n * n * ln * ln,
                target: mdp_min_rate(MinMdpRegime::SmallV, None, x)?,
                alt: None,
                note,
            }
        }
        Theorem::T4Item(2) => {
            if g.v == 0 {
                return Err(Error::Regime("the v-scale needs v > 0".into()));
            }
            if !(v > (n * n.ln()).sqrt() && v < n) {
                note = Some("v outside √(n log n) << v << n".into());
            }
            let ln = v / n;
            Scenario {
                log_p: log_prob_min_ge(params, ln * x, q)?.ln(),
                l: Some(ln),
                scaling: v * v,
                target: phi_vscale(x),
                alt: Some(phi_vscale_alt(x)),
                note,
            }
        }
        Theorem::T4Item(3) => {
            if g.v == 0 {
                return Err(Error::Regime("item 3 needs α > 0, so v > 0".into()));
            }
            let ln = l.unwrap_or(1.0);
            Scenario {
                log_p: log_prob_min_ge(params, ln * x, q)?.ln(),
                l,
                scaling: n * n * ln.powi(4),
                target: mdp_min_rate(MinMdpRegime::AlphaPositive, Some(alpha), x)?,
                alt: None,
                note,
            }
        }
        Theorem::T4Item(k) => {
            return Err(Error::InvalidParameter(format!("no item {k}")));
        }
    };
    Ok(s)
}

/// One row per grid point, in grid order.
pub fn converge_table(
    theorem: Theorem,
    grid: &[GridPoint],
    q: &QuadratureSpec,
) -> Result<Vec<ConvergenceRow>> {
    grid.iter()
        .map(|&g| {
            let s = scenario(theorem, g, q)?;
            let scaled = -s.log_p / s.scaling;
            Ok(ConvergenceRow {
                theorem: theorem.name(),
                n: g.n,
                v: g.v,
                x: g.x,
                l: s.l,
                exact: s.log_p,
                predicted: -s.scaling * s.target,
                scaling: s.scaling,
                rate_target: s.target,
                scaled_gap: (scaled - s.target).abs(),
                alt_target: s.alt,
                alt_gap: s.alt.map(|a| (scaled - a).abs()),
                regime_note: s.note,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltRow {
    pub y: f64,
    /// `√(log s_n)(2√(s_n) y - a(s_n))`.
    pub gumbel_arg: f64,
    /// Exact `P(X_(n) ≥ 1 + y)`.
    pub exact: f64,
    /// `1 - G(gumbel_arg)`.
    pub target: f64,
    pub gap: f64,
}

/// The `y` at which the Gumbel argument equals `g`.
pub fn clt_y_for_argument(params: EnsembleParams, g: f64) -> Result<f64> {
    let s = params.scales();
    let a = s
        .a_sn
        .ok_or_else(|| Error::Regime(format!("s_n = {} too small", s.s_n)))?;
    Ok((g / s.s_n.ln().sqrt() + a) / (2.0 * s.s_n.sqrt()))
}

/// Exact `P(X_(n) ≥ 1+y)` against `1 - G(√(log s_n)(2√(s_n) y - a(s_n)))`.
pub fn clt_check(
    params: EnsembleParams,
    y_grid: &[f64],
    q: &QuadratureSpec,
) -> Result<Vec<CltRow>> {
    let s = params.scales();
    if s.s_n <= std::f64::consts::E {
        return Err(Error::Regime(format!("s_n = {} must exceed e", s.s_n)));
    }
    let a = s.a_sn.unwrap_or(0.0);
    y_grid
        .par_iter()
        .map(|&y| {
            if !(1.0 + y > 0.0) {
                return Err(Error::domain("y", y, "(-1, ∞)"));
            }
            let g = s.s_n.ln().sqrt() * (2.0 * s.s_n.sqrt() * y - a);
            let exact = log_prob_max_ge(params, 1.0 + y, q)?.prob();
            let target = 1.0 - gumbel_cdf(g);
            Ok(CltRow {
                y,
                gumbel_arg: g,
                exact,
                target,
                gap: (exact - target).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{log_cdf_index, log_sf_index};

    fn ens(n: usize, v: usize) -> EnsembleParams {
        EnsembleParams::new(n, v).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn bounded_v_sf_examples() {
        let p = ens(100, 0);
        let r = predict_log_sf_bounded_v(p, 100, 1.5).unwrap();
        assert_eq!(r.branch, 2);
        assert!((r.value - (-200.0 * (100.0f64 / 150.0).ln() + 200.0 - 300.0)).abs() < 1e-12);
        assert!((r.value + 18.907).abs() < 1e-3);
        let exact = log_sf_index(p, 100, 1.5, &q()).unwrap().ln();
        assert!(
            (exact - r.value).abs() <= 5.0 * 100f64.ln(),
            "{exact} vs {}",
            r.value
        );

        let r = predict_log_sf_bounded_v(p, 100, 0.5).unwrap();
        assert_eq!(
            (r.branch, r.value, r.correction_class),
            (1, 0.0, CorrectionClass::LogN)
        );

        // branch boundary: 2j - ½ = 2n a
        let a = (2.0 * 60.0 - 0.5) / 200.0;
        let at = predict_log_sf_bounded_v(p, 60, a).unwrap();
        assert_eq!(at.branch, 2);
        let formula = bounded_v_tail(100.0, 60.0, a);
        assert!(formula.abs() <= 5.0 * 100f64.ln());
        let exact = log_sf_index(p, 60, a, &q()).unwrap().ln();
        assert!((exact - at.value).abs() <= 5.0 * 100f64.ln());
    }

    #[test]
    fn exact_index_tail_near_prediction() {
        let p = ens(50, 0);
        let pred = predict_log_sf_bounded_v(p, 50, 1.5).unwrap();
        let exact = log_sf_index(p, 50, 1.5, &q()).unwrap().ln();
        assert!((exact - pred.value).abs() <= 5.0 * 50f64.ln());
    }

    #[test]
    fn bounded_v_cdf_examples() {
        let p = ens(100, 0);
        // 2j - 5/2 > 2na: left tail is a deviation
        let r = predict_log_cdf_bounded_v(p, 100, 0.5).unwrap();
        assert_eq!(r.branch, 1);
        let exact = log_cdf_index(p, 100, 0.5, &q()).unwrap().ln();
        assert!(
            (exact - r.value).abs() <= 5.0 * 100f64.ln(),
            "{exact} vs {}",
            r.value
        );
        let r = predict_log_cdf_bounded_v(p, 100, 1.5).unwrap();
        assert_eq!((r.branch, r.value), (2, 0.0));
        let exact = log_cdf_index(p, 100, 1.5, &q()).unwrap().ln();
        assert!(exact >= -5.0 * 100f64.ln());
        let a = (2.0 * 60.0 - 2.5) / 200.0;
        let at = predict_log_cdf_bounded_v(p, 60, a).unwrap();
        assert_eq!(at.branch, 2);
        let formula = bounded_v_tail(100.0, 60.0, a);
        assert!(formula.abs() <= 5.0 * 100f64.ln());
    }

    #[test]
    fn gamma_predictor_tracks_exact_cdf() {
        let p = ens(200, 2);
        for &(j, a) in &[(150usize, 0.6), (180, 0.9), (40, 0.2)] {
            let pred = predict_log_cdf_gamma(p, j, a).unwrap().value;
            let exact = log_cdf_index(p, j, a, &q()).unwrap().ln();
            assert!(
                (pred - exact).abs() <= 0.05 * (1.0 + exact.abs()),
                "j={j}: {pred} vs {exact}"
            );
        }
    }

    #[test]
    fn guards() {
        let p = ens(10, 0);
        assert!(matches!(
            predict_log_sf_bounded_v(p, 3, 1.0),
            Err(Error::Regime(_))
        ));
        assert!(matches!(
            predict_log_sf_bounded_v(ens(100, 0), 3, 11.0),
            Err(Error::Regime(_))
        ));
        assert!(matches!(
            predict_log_sf_large_v(ens(10, 5), 3, 1.0),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn branches_are_exclusive_and_flip_at_minimizer() {
        let p = ens(100, 200);
        let c = p.scales().c_nv;
        for j in [1usize, 20, 60, 100] {
            let xj = minimizer_xj(&TauParams::new(j, 200.0).unwrap());
            let a_star = xj * 200.0 / c;
            let below = predict_log_sf_large_v(p, j, a_star * (1.0 - 1e-9)).unwrap();
            let above = predict_log_sf_large_v(p, j, a_star * (1.0 + 1e-9)).unwrap();
            assert_eq!((below.branch, above.branch), (2, 1));
            let below = predict_log_cdf_large_v(p, j, a_star * (1.0 - 1e-9)).unwrap();
            let above = predict_log_cdf_large_v(p, j, a_star * (1.0 + 1e-9)).unwrap();
            assert_eq!((below.branch, above.branch), (2, 1));
        }
        let a = 1.0;
        for j in 1..=100 {
            let s = predict_log_sf_large_v(p, j, a).unwrap();
            let c = predict_log_cdf_large_v(p, j, a).unwrap();
            assert_eq!(s.branch, c.branch);
            assert!(s.value == 0.0 || c.value == 0.0);
        }
    }

    #[test]
    fn large_v_predictions_near_exact() {
        let p = ens(50, 500);
        let pred = predict_log_sf_large_v(p, 50, 1.5).unwrap();
        assert_eq!(pred.branch, 1);
        let exact = log_sf_index(p, 50, 1.5, &q()).unwrap().ln();
        assert!(
            (exact - pred.value).abs() <= 5.0 * 50f64.ln(),
            "{exact} vs {}",
            pred.value
        );

        let pred = predict_log_sf_large_v(p, 10, 0.2).unwrap();
        assert_eq!((pred.branch, pred.value), (2, 0.0));
        let exact = log_sf_index(p, 10, 0.2, &q()).unwrap().ln();
        assert!(exact >= -5.0 * 50f64.ln());

        let pred = predict_log_cdf_large_v(p, 10, 0.2).unwrap();
        let exact = log_cdf_index(p, 10, 0.2, &q()).unwrap().ln();
        assert!(
            (exact - pred.value).abs() <= 5.0 * 50f64.ln(),
            "{exact} vs {}",
            pred.value
        );
    }

    #[test]
    fn ma_sums() {
        let s = lemma_ma_sums(10, 0).unwrap();
        assert!((s.exact_1 - 102.082_830_551_934_9).abs() < 1e-10);
        for k in [100usize, 1000, 10_000, 100_000] {
            let s = lemma_ma_sums(k, 0).unwrap();
            assert!(s.residual_1().abs() <= 1.0, "n={k}: {}", s.residual_1());
            for v in [0usize, 1, 7, 50] {
                let s = lemma_ma_sums(k, v).unwrap();
                assert!(
                    s.residual_2().abs() <= 1.0,
                    "n={k} v={v}: {}",
                    s.residual_2()
                );
            }
        }
        // v = 0: Σ(i-½)log i = Σ i log i - ½ log n!
        let n = 100usize;
        let s = lemma_ma_sums(n, 0).unwrap();
        let nf = n as f64;
        let stirling = nf * nf.ln() - nf + 0.5 * nf.ln();
        assert!((s.asym_2 - s.asym_1 + 0.5 * stirling).abs() < 1e-9);
        let ln_fact = crate::special::ln_gamma(nf + 1.0);
        assert!((s.exact_2 - s.exact_1 + 0.5 * ln_fact).abs() < 1e-9);
        assert!(lemma_ma_sums(1, 0).is_err());
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in [
            Theorem::T1Right,
            Theorem::T1Left,
            Theorem::T2,
            Theorem::T3Right,
            Theorem::T3Left,
            Theorem::T4Item(1),
            Theorem::T4Item(2),
            Theorem::T4Item(3),
        ] {
            assert_eq!(t.name().parse::<Theorem>().unwrap(), t);
        }
        assert!("t5".parse::<Theorem>().is_err());
    }

    #[test]
    fn convergence_trends() {
        let grid = |ns: &[usize], v: usize, x: f64| -> Vec<GridPoint> {
            ns.iter().map(|&n| GridPoint { n, v, x }).collect()
        };
        let rows = converge_table(Theorem::T1Right, &grid(&[25, 50, 100], 0, 1.5), &q()).unwrap();
        assert!(rows[2].scaled_gap < rows[0].scaled_gap);
        let rows = converge_table(Theorem::T2, &grid(&[25, 50, 100], 0, 0.5), &q()).unwrap();
        assert!(rows[2].scaled_gap < rows[0].scaled_gap);
        assert!((rows[0].rate_target - 0.125).abs() < 1e-15);
        let rows = converge_table(Theorem::T3Left, &grid(&[100, 400], 0, 1.0), &q()).unwrap();
        assert!(rows[1].scaled_gap < rows[0].scaled_gap, "{rows:?}");
        let rows = converge_table(Theorem::T4Item(1), &grid(&[50, 200], 0, 1.0), &q()).unwrap();
        assert!(rows[1].scaled_gap < rows[0].scaled_gap, "{rows:?}");
        let rows = converge_table(
            Theorem::T4Item(3),
            &[GridPoint {
                n: 200,
                v: 200,
                x: 1.0,
            }],
            &q(),
        )
        .unwrap();
        assert!(rows[0].relative_gap() < 0.1, "{rows:?}");
        assert!(converge_table(Theorem::T4Item(2), &grid(&[10], 0, 1.0), &q()).is_err());
        let rows = converge_table(Theorem::T1Right, &grid(&[10], 0, 0.5), &q()).unwrap();
        assert!(rows[0].regime_note.is_some());
    }

    #[test]
    fn clt_harness() {
        let p = ens(300, 0);
        let y0 = clt_y_for_argument(p, 0.0).unwrap();
        let rows = clt_check(p, &[y0, 0.5], &q()).unwrap();
        assert!(rows[0].gumbel_arg.abs() < 1e-12);
        assert!((rows[0].target - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!(rows[0].gap < 0.3, "{rows:?}");
        assert!(rows[1].exact < 1e-6 && rows[1].target < 1e-6);
        let big = clt_check(
            ens(1200, 0),
            &[clt_y_for_argument(ens(1200, 0), 0.0).unwrap()],
            &q(),
        )
        .unwrap();
        assert!(big[0].gap < rows[0].gap, "{big:?}");
        assert!(clt_check(ens(2, 0), &[0.1], &q()).is_err());
    }
}
