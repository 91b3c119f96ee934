use clap::{Args, ValueEnum};

use chiral_ldp::asymptotics::{
    clt_check, clt_y_for_argument, converge_table, predict_log_cdf_bounded_v,
    predict_log_cdf_gamma, predict_log_cdf_large_v, predict_log_sf_bounded_v,
    predict_log_sf_large_v, AsymptoticPrediction, GridPoint, Theorem, LARGE_V_MIN,
};
use chiral_ldp::exact::{
    log_cdf_index, log_prob_max_le, log_prob_min_ge, log_prob_report, log_sf_index,
    IndexDistribution,
};
use chiral_ldp::rates::{
    mdp_max_left_const, mdp_max_right_const, mdp_min_rate, phi_vscale_alt, rate_max_left,
    rate_max_left_infinity_alt, rate_max_right, rate_min_right, MinMdpRegime, RateEval,
};
use chiral_ldp::sampler::{
    index_cdf_at_sorted, ks_sorted, matrix_probe_extremes, sample_extremes_independent, sample_yj,
    ComplexVariance, Extremes, MatrixProbeConfig,
};
use chiral_ldp::{
    verify as suites, AlphaRegime, Direction, EnsembleParams, QuadratureSpec, Statistic, TailQuery,
};

use crate::output::{Cell, Record, Row};
use crate::{EXIT_NUMERIC, EXIT_USAGE, EXIT_VERIFY};

pub struct Outcome {
    pub record: Record,
    pub exit: u8,
}

impl From<Record> for Outcome {
    fn from(record: Record) -> Self {
        Outcome { record, exit: 0 }
    }
}

pub struct CliError {
    pub message: String,
    pub exit: u8,
}

impl From<chiral_ldp::Error> for CliError {
    fn from(e: chiral_ldp::Error) -> Self {
        let mut message = e.to_string();
        let exit = if e.is_numeric() {
            EXIT_NUMERIC
        } else {
            EXIT_USAGE
        };
        if let Some(p) = e.partial_log() {
            message.push_str(&format!("; partial log estimate {p}"));
        }
        CliError { message, exit }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        exit: EXIT_USAGE,
    }
}

type Res = Result<Outcome, CliError>;

fn quad(tol: f64, max_panels: Option<usize>) -> Result<QuadratureSpec, CliError> {
    let mut q = QuadratureSpec::with_rel_tol(tol)?;
    if let Some(m) = max_panels {
        q.max_panels = m;
    }
    q.validate()?;
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    MaxRight,
    MaxLeft,
    /// Alternative closed form of the left rate at `α = ∞`.
    MaxLeftAlt,
    MinRight,
    MdpMaxRight,
    MdpMaxLeft,
    MdpMinSmallV,
    MdpMinVscale,
    MdpMinVscaleAlt,
    MdpMinIntermediate,
    MdpMinAlpha,
}

#[derive(Args, Debug)]
pub struct RateArgs {
    /// Limit of v/n: a number, 0 or inf.
    #[arg(long, default_value = "0")]
    alpha: String,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, value_enum)]
    which: Which,
}

pub fn rate(a: RateArgs) -> Res {
    let alpha: AlphaRegime = a.alpha.parse()?;
    let name = a.which.to_possible_value().unwrap().get_name().to_string();
    let mut rec = Record::new(
        "rate",
        Row::new()
            .with("alpha", a.alpha.as_str())
            .with("x", a.x)
            .with("which", name.as_str()),
    );
    let plain = |value: f64| RateEval {
        value,
        branch: alpha,
        kappa_used: None,
        diagnostic: None,
    };
    let eval = match a.which {
        Which::MaxRight => rate_max_right(alpha, a.x)?,
        Which::MaxLeft => rate_max_left(alpha, a.x)?,
        Which::MaxLeftAlt => rate_max_left_infinity_alt(a.x)?,
        Which::MinRight => rate_min_right(alpha, a.x)?,
        Which::MdpMaxRight => plain(mdp_max_right_const(alpha) * a.x * a.x),
        Which::MdpMaxLeft => plain(mdp_max_left_const(alpha) * a.x.powi(3)),
        Which::MdpMinSmallV => plain(mdp_min_rate(MinMdpRegime::SmallV, None, a.x)?),
        Which::MdpMinVscale => plain(mdp_min_rate(MinMdpRegime::VScale, None, a.x)?),
        Which::MdpMinVscaleAlt => {
            if !(a.x >= 0.0) {
                return Err(usage(format!("x = {} must be non-negative", a.x)));
            }
            plain(phi_vscale_alt(a.x))
        }
        Which::MdpMinIntermediate => plain(mdp_min_rate(MinMdpRegime::Intermediate, None, a.x)?),
        Which::MdpMinAlpha => plain(mdp_min_rate(MinMdpRegime::AlphaPositive, Some(alpha), a.x)?),
    };
    if let Some(d) = &eval.diagnostic {
        rec.warn(d.clone());
    }
    rec.push(
        Row::new()
            .with("which", name.as_str())
            .with("alpha", alpha.value())
            .with("x", a.x)
            .with("value", eval.value)
            .with("branch", eval.branch.name())
            .with("kappa", eval.kappa_used)
            .with("warning", eval.diagnostic),
    );
    Ok(rec.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stat {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Ge,
    Le,
}

impl Stat {
    fn core(self) -> Statistic {
        match self {
            Stat::Max => Statistic::MaxSq,
            Stat::Min => Statistic::MinSq,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Stat::Max => "max",
            Stat::Min => "min",
        }
    }
}

impl Side {
    fn core(self) -> Direction {
        match self {
            Side::Ge => Direction::GE,
            Side::Le => Direction::LE,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Side::Ge => "ge",
            Side::Le => "le",
        }
    }
}

#[derive(Args, Debug)]
pub struct ProbArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    v: usize,
    /// Threshold for the scaled squared modulus.
    #[arg(
        long,
        required_unless_present = "t",
        conflicts_with = "t",
        allow_negative_numbers = true
    )]
    x: Option<f64>,
    /// Threshold on the `t = c·x` scale, `c = 2√(n(n+v))`.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, value_enum)]
    stat: Stat,
    #[arg(long, value_enum)]
    side: Side,
    /// Relative tolerance of each quadrature.
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Panel budget of each quadrature.
    #[arg(long)]
    max_panels: Option<usize>,
}

/// `log` of the smallest positive normal double.
const LOG_MIN_POSITIVE: f64 = -708.396_418_532_264_1;

pub fn prob(a: ProbArgs) -> Res {
    let params = EnsembleParams::new(a.n, a.v)?;
    let c = params.scales().c_nv;
    let x = match (a.x, a.t) {
        (Some(x), _) => x,
        (None, Some(t)) => t / c,
        (None, None) => return Err(usage("one of --x or --t is required")),
    };
    let q = quad(a.quad_tol, a.max_panels)?;
    let query = TailQuery::new(a.stat.core(), a.side.core(), x)?;
    let report = log_prob_report(params, query, &q)?;
    let log_p = report.log_p.ln();
    let mut rec = Record::new(
        "prob",
        Row::new()
            .with("n", a.n)
            .with("v", a.v)
            .with("x", x)
            .with("stat", a.stat.name())
            .with("side", a.side.name())
            .with("quad_tol", a.quad_tol),
    );
    let p = if log_p < LOG_MIN_POSITIVE {
        rec.warn(format!(
            "probability e^{log_p} is below double precision; read log_p"
        ));
        None
    } else {
        Some(log_p.exp())
    };
    if report.max_rel_err > 10.0 * a.quad_tol {
        rec.warn(format!(
            "index {} has estimated relative error {:e}",
            report.worst_index, report.max_rel_err
        ));
    }
    rec.push(
        Row::new()
            .with("n", a.n)
            .with("v", a.v)
            .with("stat", a.stat.name())
            .with("side", a.side.name())
            .with("x", x)
            .with("t", c * x)
            .with("log_p", log_p)
            .with("p", p)
            .with("max_rel_err", report.max_rel_err)
            .with("worst_index", report.worst_index),
    );
    Ok(rec.into())
}

fn moments(xs: &[f64]) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt(), (var / m).sqrt())
}

fn sorted(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs
}

/// KS distance of sorted maxima and minima against the exact laws.
fn extremes_ks(
    params: EnsembleParams,
    samples: &[Extremes],
    q: &QuadratureSpec,
) -> Result<(f64, f64), CliError> {
    let max = sorted(samples.iter().map(|e| e.max).collect());
    let min = sorted(samples.iter().map(|e| e.min).collect());
    let fmax: Result<Vec<f64>, _> = max
        .iter()
        .map(|&x| log_prob_max_le(params, x, q).map(|l| l.prob()))
        .collect();
    let fmin: Result<Vec<f64>, _> = min
        .iter()
        .map(|&x| log_prob_min_ge(params, x, q).map(|l| 1.0 - l.prob()))
        .collect();
    Ok((ks_sorted(&fmax?), ks_sorted(&fmin?)))
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    v: usize,
    /// Index to sample; without it, draws the extremes of all indices.
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Print summary statistics instead of the draws.
    #[arg(long)]
    summary: bool,
    /// Add the KS distance to the exact law; implies --summary.
    #[arg(long)]
    ks: bool,
}

pub fn sample(a: SampleArgs) -> Res {
    let params = EnsembleParams::new(a.n, a.v)?;
    if a.count == 0 {
        return Err(usage("--count must be positive"));
    }
    let q = QuadratureSpec::default();
    let mut rec = Record::new(
        "sample",
        Row::new()
            .with("n", a.n)
            .with("v", a.v)
            .with("j", a.j)
            .with("seed", a.seed)
            .with("count", a.count),
    );
    let summary = a.summary || a.ks;
    match a.j {
        Some(j) => {
            let batch = sample_yj(params, j, a.seed, a.count)?;
            let scale = 2.0 * a.n as f64;
            if summary {
                let t: Vec<f64> = batch.values.iter().map(|y| scale * y).collect();
                let (mean, sd, se) = moments(&t);
                let ks = if a.ks {
                    let dist = IndexDistribution::new(params, j)?;
                    let t = sorted(t);
                    Some(ks_sorted(&index_cdf_at_sorted(&dist, &t, &q)?))
                } else {
                    None
                };
                rec.push(
                    Row::new()
                        .with("j", j)
                        .with("count", a.count)
                        .with("mean_t", mean)
                        .with("sd_t", sd)
                        .with("se_t", se)
                        .with("mean_y", mean / scale)
                        .with("ks", ks),
                );
            } else {
                for (i, y) in batch.values.iter().enumerate() {
                    rec.push(
                        Row::new()
                            .with("index", i)
                            .with("y", *y)
                            .with("t", scale * y),
                    );
                }
            }
        }
        None => {
            let samples = sample_extremes_independent(params, a.seed, a.count);
            extremes_output(&mut rec, params, &samples, summary, a.ks, None, &q)?;
        }
    }
    Ok(rec.into())
}

fn extremes_output(
    rec: &mut Record,
    params: EnsembleParams,
    samples: &[Extremes],
    summary: bool,
    ks: bool,
    resamples: Option<usize>,
    q: &QuadratureSpec,
) -> Result<(), CliError> {
    if summary {
        let (mean_max, _, se_max) = moments(&samples.iter().map(|e| e.max).collect::<Vec<_>>());
        let (mean_min, _, se_min) = moments(&samples.iter().map(|e| e.min).collect::<Vec<_>>());
        let (ks_max, ks_min) = if ks {
            let (a, b) = extremes_ks(params, samples, q)?;
            (Some(a), Some(b))
        } else {
            (None, None)
        };
        let mut row = Row::new().with("count", samples.len());
        if let Some(r) = resamples {
            row = row.with("resamples", r);
        }
        rec.push(
            row.with("mean_max", mean_max)
                .with("se_max", se_max)
                .with("mean_min", mean_min)
                .with("se_min", se_min)
                .with("ks_max", ks_max)
                .with("ks_min", ks_min),
        );
    } else {
        for (i, e) in samples.iter().enumerate() {
            rec.push(
                Row::new()
                    .with("index", i)
                    .with("max", e.max)
                    .with("min", e.min),
            );
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variance {
    /// Real and imaginary parts each of variance 1/(4n).
    PerComponent,
    /// E|z|² = 1/(4n).
    Total,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    v: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long)]
    summary: bool,
    /// Add KS distances to the independent-moduli law; implies --summary.
    #[arg(long)]
    ks: bool,
    #[arg(long, value_enum, default_value = "per-component")]
    variance: Variance,
    /// Iteration cap of the eigenvalue solver.
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

pub fn matrix(a: MatrixArgs) -> Res {
    let params = EnsembleParams::new(a.n, a.v)?;
    if a.count == 0 {
        return Err(usage("--count must be positive"));
    }
    let mut config = MatrixProbeConfig::new(params)?;
    config.power_iters = a.iters;
    config.tol = a.tol;
    config.variance = match a.variance {
        Variance::PerComponent => ComplexVariance::PerComponent,
        Variance::Total => ComplexVariance::Total,
    };
    config.validate()?;
    let batch = matrix_probe_extremes(&config, a.seed, a.count)?;
    let mut rec = Record::new(
        "matrix",
        Row::new()
            .with("n", a.n)
            .with("v", a.v)
            .with("seed", a.seed)
            .with("count", a.count)
            .with("variance", format!("{:?}", a.variance).to_lowercase()),
    );
    if batch.resamples > 0 {
        rec.warn(format!(
            "{} replicates were redrawn after solver non-convergence",
            batch.resamples
        ));
    }
    extremes_output(
        &mut rec,
        params,
        &batch.samples,
        a.summary || a.ks,
        a.ks,
        Some(batch.resamples),
        &QuadratureSpec::default(),
    )?;
    Ok(rec.into())
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// t1-right, t1-left, t2, t3-right, t3-left, t4-item1, t4-item2 or t4-item3.
    #[arg(long)]
    theorem: String,
    /// Deviation point(s); defaults depend on the theorem.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Vec<f64>,
    /// Matrix sizes.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// One v for all sizes, or one per size.
    #[arg(long, value_delimiter = ',', conflicts_with = "v_ratio")]
    v: Vec<usize>,
    /// Sets v = round(ratio·n).
    #[arg(long)]
    v_ratio: Option<f64>,
    /// Explicit pairs `n:v,n:v,...`; overrides --n and --v.
    #[arg(long, conflicts_with_all = ["n", "v", "v_ratio"])]
    grid: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
}

fn default_x(t: Theorem) -> f64 {
    match t {
        Theorem::T1Right => 1.5,
        Theorem::T1Left | Theorem::T2 => 0.5,
        _ => 1.0,
    }
}

fn default_pairs(t: Theorem) -> Vec<(usize, usize)> {
    let fixed = |ns: &[usize], v: usize| ns.iter().map(|&n| (n, v)).collect();
    match t {
        Theorem::T1Right => fixed(&[25, 50, 100, 200], 0),
        Theorem::T1Left | Theorem::T2 => fixed(&[25, 50, 100], 0),
        Theorem::T3Right => fixed(&[100, 1000, 10_000], 0),
        Theorem::T3Left => fixed(&[100, 400, 1600], 0),
        Theorem::T4Item(1) => fixed(&[50, 200, 800], 0),
        // v ≈ n^0.7 sits between √(n log n) and n
        Theorem::T4Item(2) => [1000usize, 2000, 4000, 8000, 16_000]
            .iter()
            .map(|&n| (n, (n as f64).powf(0.7).round() as usize))
            .collect(),
        _ => [50usize, 100, 200, 400].iter().map(|&n| (n, n)).collect(),
    }
}

fn parse_grid(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|pair| {
            let (n, v) = pair
                .split_once(':')
                .ok_or_else(|| usage(format!("grid entry {pair:?} is not n:v")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad n in {pair:?}")))?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad v in {pair:?}")))?;
            Ok((n, v))
        })
        .collect()
}

pub fn converge(a: ConvergeArgs) -> Res {
    let theorem: Theorem = a.theorem.parse()?;
    let pairs = if let Some(g) = &a.grid {
        parse_grid(g)?
    } else if a.n.is_empty() {
        default_pairs(theorem)
    } else if let Some(r) = a.v_ratio {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(usage("--v-ratio must be a non-negative number"));
        }
        a.n.iter()
            .map(|&n| (n, (r * n as f64).round() as usize))
            .collect()
    } else {
        match a.v.len() {
            0 => a.n.iter().map(|&n| (n, 0)).collect(),
            1 => a.n.iter().map(|&n| (n, a.v[0])).collect(),
            k if k == a.n.len() => a.n.iter().copied().zip(a.v.iter().copied()).collect(),
            _ => return Err(usage("--v takes one value or one per --n entry")),
        }
    };
    let xs = if a.x.is_empty() {
        vec![default_x(theorem)]
    } else {
        a.x.clone()
    };
    let grid: Vec<GridPoint> = xs
        .iter()
        .flat_map(|&x| pairs.iter().map(move |&(n, v)| GridPoint { n, v, x }))
        .collect();
    let q = quad(a.quad_tol, None)?;
    let rows = converge_table(theorem, &grid, &q)?;
    let mut rec = Record::new("converge", Row::new().with("theorem", theorem.name()));
    for r in rows {
        if let Some(note) = &r.regime_note {
            rec.warn(format!("n={} v={} x={}: {note}", r.n, r.v, r.x));
        }
        rec.push(
            Row::new()
                .with("theorem", r.theorem.as_str())
                .with("n", r.n)
                .with("v", r.v)
                .with("x", r.x)
                .with("l", r.l)
                .with("log_p", r.exact)
                .with("predicted", r.predicted)
                .with("scaling", r.scaling)
                .with("scaled", -r.exact / r.scaling)
                .with("rate_target", r.rate_target)
                .with("scaled_gap", r.scaled_gap)
                .with("relative_gap", r.relative_gap())
                .with("alt_target", r.alt_target)
                .with("alt_gap", r.alt_gap)
                .with("note", r.regime_note.clone()),
        );
    }
    Ok(rec.into())
}

#[derive(Args, Debug)]
pub struct CltArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    v: usize,
    /// Gumbel arguments at which to compare.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        conflicts_with = "y"
    )]
    g: Vec<f64>,
    /// Offsets y in P(X_(n) ≥ 1+y).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    y: Vec<f64>,
}

pub fn clt(a: CltArgs) -> Res {
    let params = EnsembleParams::new(a.n, a.v)?;
    let ys: Vec<f64> = if !a.y.is_empty() {
        a.y.clone()
    } else {
        let gs = if a.g.is_empty() {
            vec![0.0, 2.0]
        } else {
            a.g.clone()
        };
        gs.iter()
            .map(|&g| clt_y_for_argument(params, g))
            .collect::<Result<_, _>>()?
    };
    let rows = clt_check(params, &ys, &QuadratureSpec::default())?;
    let mut rec = Record::new("clt", Row::new().with("n", a.n).with("v", a.v));
    for r in rows {
        rec.push(
            Row::new()
                .with("y", r.y)
                .with("gumbel_arg", r.gumbel_arg)
                .with("exact", r.exact)
                .with("target", r.target)
                .with("gap", r.gap),
        );
    }
    Ok(rec.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Large-v predictor when v ≥ 30, bounded-v otherwise.
    Auto,
    BoundedV,
    /// Incomplete-gamma form of the lower tail.
    Gamma,
    LargeV,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    v: usize,
    #[arg(long)]
    j: usize,
    /// Threshold for X_j.
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, value_enum)]
    side: Side,
    #[arg(long, value_enum, default_value = "auto")]
    model: Model,
}

pub fn predict(a: PredictArgs) -> Res {
    let params = EnsembleParams::new(a.n, a.v)?;
    let model = match a.model {
        Model::Auto if a.v >= LARGE_V_MIN => Model::LargeV,
        Model::Auto => Model::BoundedV,
        m => m,
    };
    let pred: AsymptoticPrediction = match (model, a.side) {
        (Model::BoundedV, Side::Ge) => predict_log_sf_bounded_v(params, a.j, a.a)?,
        (Model::BoundedV, Side::Le) => predict_log_cdf_bounded_v(params, a.j, a.a)?,
        (Model::Gamma, Side::Le) => predict_log_cdf_gamma(params, a.j, a.a)?,
        (Model::Gamma, Side::Ge) => {
            return Err(usage("the gamma model predicts the lower tail only"))
        }
        (Model::LargeV, Side::Ge) => predict_log_sf_large_v(params, a.j, a.a)?,
        (Model::LargeV, Side::Le) => predict_log_cdf_large_v(params, a.j, a.a)?,
        (Model::Auto, _) => unreachable!("auto resolved above"),
    };
    let q = QuadratureSpec::default();
    let exact = match a.side {
        Side::Ge => log_sf_index(params, a.j, a.a, &q)?,
        Side::Le => log_cdf_index(params, a.j, a.a, &q)?,
    }
    .ln();
    let model_name = model.to_possible_value().unwrap().get_name().to_string();
    let mut rec = Record::new(
        "predict",
        Row::new()
            .with("n", a.n)
            .with("v", a.v)
            .with("j", a.j)
            .with("a", a.a)
            .with("side", a.side.name())
            .with("model", model_name.as_str()),
    );
    rec.push(
        Row::new()
            .with("model", model_name.as_str())
            .with("n", a.n)
            .with("v", a.v)
            .with("j", a.j)
            .with("a", a.a)
            .with("side", a.side.name())
            .with("predicted", pred.value)
            .with("branch", pred.branch as usize)
            .with("correction", pred.correction_class.label())
            .with("exact", exact)
            .with("difference", exact - pred.value)
            .with("log_n", (a.n as f64).ln()),
    );
    Ok(rec.into())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Smaller sample counts and sizes.
    #[arg(long)]
    quick: bool,
}

pub fn verify(a: VerifyArgs) -> Res {
    let checks = suites::run_all(a.quick);
    let mut rec = Record::new("verify", Row::new().with("quick", a.quick));
    let mut failed = false;
    for c in checks {
        if !c.passed {
            failed = true;
            rec.warn(format!("{} failed: {}", c.name, c.detail));
        }
        rec.push(
            Row::new()
                .with("name", c.name.as_str())
                .with("passed", c.passed)
                .with("cases", c.cases)
                .with("failures", c.failures)
                .with("detail", Cell::S(c.detail)),
        );
    }
    Ok(Outcome {
        record: rec,
        exit: if failed { EXIT_VERIFY } else { 0 },
    })
}
