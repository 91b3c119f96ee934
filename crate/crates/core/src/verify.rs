//! Invariant suites shared by the test targets and the `verify` command.
//!
//! Every suite is deterministic and returns a [`Check`] rather than
//! panicking, so callers decide how to report failures.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::lemma_ma_sums;
use crate::error::Result;
use crate::exact::{log_prob_max_ge, log_prob_max_le, log_sf_index, IndexDistribution};
use crate::params::{AlphaRegime, EnsembleParams};
use crate::quadrature::{integrate_log, QuadratureSpec};
use crate::rates::{rate_max_left, rate_max_right, rate_min_right};
use crate::sampler::{sample_yj, stream_rng};
use crate::special::{ln_gamma, ln_kv, log_gamma_q, log_kv_integral};
use crate::tau::{kappa_raw, minimizer_xj, tau_prime_raw, tau_raw, TauParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, or a summary when everything passed.
    pub detail: String,
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first: Option<String>,
    summary: String,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            first: None,
            summary: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn error(&mut self, e: crate::Error) {
        self.check(false, || e.to_string());
    }

    fn finish(self) -> Check {
        let passed = self.failures == 0 && self.cases > 0;
        Check {
            name: self.name.to_string(),
            passed,
            cases: self.cases,
            failures: self.failures,
            detail: self.first.unwrap_or(self.summary),
        }
    }
}

const SLACK: f64 = 1e-9;

fn alphas() -> [AlphaRegime; 5] {
    [
        AlphaRegime::Zero,
        AlphaRegime::Finite(0.1),
        AlphaRegime::Finite(1.0),
        AlphaRegime::Finite(10.0),
        AlphaRegime::Infinity,
    ]
}

/// Both rates of the maximum vanish at `x = 1`; `Ĵ_α` is continuous there.
pub fn rate_boundary_suite() -> Check {
    let mut t = Tally::new("rate-boundary-zeros");
    for a in alphas() {
        match (rate_max_right(a, 1.0), rate_max_left(a, 1.0)) {
            (Ok(r), Ok(l)) => {
                t.check(r.value.abs() <= 1e-12 && l.value.abs() <= 1e-12, || {
                    format!("α={}: right {} left {}", a.value(), r.value, l.value)
                });
            }
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
        let below = rate_min_right(a, 1.0 - 1e-12);
        let above = rate_min_right(a, 1.0 + 1e-12);
        match (below, above) {
            (Ok(b), Ok(c)) => t.check((b.value - c.value).abs() <= 1e-10, || {
                format!("α={}: Ĵ jumps {} -> {}", a.value(), b.value, c.value)
            }),
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
    t.summary = "rates vanish at x = 1 for five α".into();
    t.finish()
}

/// `κ(κ+α) = (1+α)x²` on random `(α, x)`.
pub fn kappa_quadratic_suite(count: usize, seed: u64) -> Check {
    let mut t = Tally::new("kappa-quadratic");
    let mut rng = stream_rng(seed, 0x6b61_7070, 0);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let a = 10f64.powf(rng.gen_range(-6.0..3.0));
        let x = 10f64.powf(rng.gen_range(-3.0..1.5));
        let k = kappa_raw(AlphaRegime::Finite(a), x);
        let resid = (k * (k + a) - (1.0 + a) * x * x).abs() / (1.0 + a) / (1.0 + x * x);
        worst = worst.max(resid);
        t.check(k > 0.0 && resid <= 1e-10, || {
            format!("α={a} x={x}: residual {resid}")
        });
    }
    t.summary = format!("worst scaled residual {worst:.3e}");
    t.finish()
}

/// `P(2Y_1 ≥ t) = t K_1(t)` for `n = 1, v = 0`.
pub fn closed_form_suite(q: &QuadratureSpec) -> Check {
    let mut t = Tally::new("closed-form-single-index");
    let p = EnsembleParams::new(1, 0).expect("valid parameters");
    for &tt in &[0.5f64, 1.0, 2.0, 5.0, 20.0] {
        let expected = tt.ln() + ln_kv(1.0, tt);
        match log_sf_index(p, 1, tt / 2.0, q) {
            Ok(got) => {
                let rel = (got.prob() - expected.exp()).abs() / expected.exp();
                t.check(rel <= 1e-6, || format!("t={tt}: relative error {rel}"));
            }
            Err(e) => t.error(e),
        }
    }
    t.summary = "survival matches t K_1(t)".into();
    t.finish()
}

/// Total mass of several index densities is one.
pub fn index_mass_suite(q: &QuadratureSpec) -> Check {
    let mut t = Tally::new("index-mass");
    for &(n, v, j) in &[
        (1usize, 0usize, 1usize),
        (5, 2, 3),
        (40, 0, 40),
        (30, 400, 7),
        (200, 9, 150),
    ] {
        let d =
            IndexDistribution::new(EnsembleParams::new(n, v).expect("valid"), j).expect("valid");
        match d.log_total_mass(q) {
            Ok(m) => t.check(m.abs() <= 1e-9, || {
                format!("n={n} v={v} j={j}: log mass {m}")
            }),
            Err(e) => t.error(e),
        }
    }
    t.summary = "densities normalised".into();
    t.finish()
}

/// `P(X_(n) ≥ x) + P(X_(n) ≤ x) = 1` and monotone in `x`.
pub fn complement_suite(q: &QuadratureSpec) -> Check {
    let mut t = Tally::new("max-complement");
    for &(n, v) in &[(8usize, 0usize), (20, 5), (12, 60)] {
        let p = EnsembleParams::new(n, v).expect("valid");
        let mut prev = 1.0f64;
        for &x in &[0.6, 0.9, 1.0, 1.1, 1.4] {
            match (log_prob_max_ge(p, x, q), log_prob_max_le(p, x, q)) {
                (Ok(ge), Ok(le)) => {
                    let s = ge.prob() + le.prob();
                    t.check((s - 1.0).abs() <= 1e-9, || {
                        format!("n={n} v={v} x={x}: sum {s}")
                    });
                    t.check(ge.prob() <= prev + 1e-12, || {
                        format!("n={n} v={v} x={x}: not monotone")
                    });
                    prev = ge.prob();
                }
                (Err(e), _) | (_, Err(e)) => t.error(e),
            }
        }
    }
    t.summary = "complementary tails sum to one".into();
    t.finish()
}

/// `log K_v` by series and asymptotic expansions against its integral
/// representation.
pub fn bessel_suite(q: &QuadratureSpec) -> Check {
    let mut t = Tally::new("bessel-dispatch");
    for &v in &[0.0, 0.5, 2.0, 31.0, 250.0] {
        for &x in &[1e-2, 1.0, 7.0, 60.0, 900.0] {
            match log_kv_integral(v, x, q) {
                Ok(r) => {
                    let got = ln_kv(v, x);
                    let err = (got - r).abs() / (1.0 + r.abs());
                    t.check(err <= 1e-9, || format!("v={v} x={x}: {got} vs {r}"));
                }
                Err(e) => t.error(e),
            }
        }
    }
    t.summary = "dispatch agrees with integral".into();
    t.finish()
}

/// The minimizer `x_j` of `τ_j` lies in its bracket and is stationary.
pub fn minimizer_suite() -> Check {
    let mut t = Tally::new("tau-minimizer");
    for &v in &[0.5, 10.0, 1000.0] {
        for j in [1usize, 2, 10, 100, 1000] {
            let p = TauParams::new(j, v).expect("valid");
            let (lo, hi) = p.bracket();
            let x = minimizer_xj(&p);
            t.check(
                x > lo && x < hi && tau_prime_raw(&p, x).abs() <= 1e-12 * (1.0 + x),
                || format!("j={j} v={v}: {lo} < {x} < {hi}"),
            );
        }
    }
    t.summary = "minimizer bracketed and stationary".into();
    t.finish()
}

/// Mean of `2nY_1` for `n = 1, v = 0` is `π/2`.
pub fn sampler_mean_suite(count: usize, seed: u64) -> Check {
    let mut t = Tally::new("sampler-mean");
    let p = EnsembleParams::new(1, 0).expect("valid");
    match sample_yj(p, 1, seed, count) {
        Ok(b) => {
            let m = count as f64;
            let ts: Vec<f64> = b.values.iter().map(|y| 2.0 * y).collect();
            let mean = ts.iter().sum::<f64>() / m;
            let var = ts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
            let se = (var / m).sqrt();
            let target = std::f64::consts::FRAC_PI_2;
            t.check((mean - target).abs() <= 4.0 * se, || {
                format!("mean {mean} vs π/2, s.e. {se}")
            });
            t.summary = format!("mean {mean:.5} ± {se:.5}");
        }
        Err(e) => t.error(e),
    }
    t.finish()
}

/// `log ∫_a^∞ y^b e^{-y} dy`.
fn log_upper_gamma(a: f64, b: f64) -> f64 {
    log_gamma_q(b + 1.0, a).unwrap_or(f64::NAN) + ln_gamma(b + 1.0)
}

fn quad(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    peak: f64,
    width: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    Ok(integrate_log(f, lo, hi, peak, width, q)?.log_value)
}

/// Bounds on `∫_a^∞ y^b e^{-y} dy` and `∫_0^a y^b e^{-y} dy`.
pub fn gamma_sandwich_suite(q: &QuadratureSpec) -> Check {
    let mut t = Tally::new("gamma-integral-sandwiches");
    for &b in &[0.3, 1.0, 4.0, 25.0, 150.0, 1000.0] {
        for &o in &[-20.0, -5.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 5.0, 30.0] {
            let a: f64 = b + o;
            if a <= 0.0 {
                continue;
            }
            let f = |s: f64| (b + 1.0) * s - s.exp();
            let (up, low) = match (
                quad(f, a.ln(), f64::INFINITY, b.ln(), 0.5, q),
                quad(f, f64::NEG_INFINITY, a.ln(), b.ln(), 0.5, q),
            ) {
                (Ok(u), Ok(l)) => (u, l),
                (Err(e), _) | (_, Err(e)) => {
                    t.error(e);
                    continue;
                }
            };
            let oracle = log_upper_gamma(a, b);
            t.check((up - oracle).abs() < 1e-9 * (1.0 + up.abs()), || {
                format!("b={b} a={a}: quadrature {up} vs incomplete gamma {oracle}")
            });
            let ctx = || format!("b={b} a={a}");
            if a >= b + 1.0 {
                t.check(b * a.ln() - a <= up + SLACK, ctx);
                t.check(up <= (b + 1.0) * a.ln() - a + SLACK, ctx);
            } else {
                t.check(b * b.ln() - (b + 1.0) <= up + SLACK, ctx);
                t.check(up <= (2.0 * (b + 1.0)).ln() + b * b.ln() - b + SLACK, ctx);
            }
            if a > b {
                t.check((b + 1.0) * b.ln() - b - (b + 1.0).ln() <= low + SLACK, ctx);
                t.check(low <= a.ln() + b * b.ln() - b + SLACK, ctx);
            }
            if a < b - 1.0 {
                t.check((b + 1.0) * a.ln() - a - (b + 1.0).ln() <= low + SLACK, ctx);
                t.check(low <= (b + 1.0) * a.ln() - a + SLACK, ctx);
            }
        }
    }
    t.summary = "all incomplete-gamma bounds hold".into();
    t.finish()
}

/// `log ∫_lo^hi e^{-v τ_j(y)} dy`.
fn tau_integral(p: &TauParams, lo: f64, hi: f64, q: &QuadratureSpec) -> Result<f64> {
    let v = p.v();
    let xj = minimizer_xj(p);
    let w = 1.0 / (v.sqrt() * xj.max(0.1));
    quad(
        |s| -v * tau_raw(p, s.exp()) + s,
        if lo > 0.0 { lo.ln() } else { f64::NEG_INFINITY },
        if hi.is_finite() {
            hi.ln()
        } else {
            f64::INFINITY
        },
        xj.ln(),
        w.min(1.0),
        q,
    )
}

/// Laplace-type bounds on integrals of `e^{-v τ_j}` on either side of the
/// minimizer.
pub fn tau_sandwich_suite(q: &QuadratureSpec) -> Check {
    let mut t = Tally::new("tau-integral-sandwiches");
    for &v in &[10.0, 40.0, 300.0, 2000.0] {
        for &j in &[1usize, 3, 12, 60, 400] {
            let p = TauParams::new(j, v).expect("valid");
            let xj = minimizer_xj(&p);
            let e = |y: f64| -v * tau_raw(&p, y);
            let d = |y: f64| v * tau_prime_raw(&p, y);
            let run = |t: &mut Tally, lo: f64, hi: f64, (l, u): (f64, f64), ctx: String| {
                match tau_integral(&p, lo, hi, q) {
                    Ok(val) => {
                        t.check(l <= val + SLACK && val <= u + SLACK, || {
                            format!("{ctx}: {l} <= {val} <= {u}")
                        });
                    }
                    Err(err) => t.error(err),
                }
            };
            for &f in &[1.05, 1.3, 2.0] {
                let a = xj * f;
                let m = a * 1.5;
                let lower = e(a) - d(m).ln() + (-(e(m) - e(a)).exp()).ln_1p();
                let upper = e(a) - d(a).ln();
                run(
                    &mut t,
                    a,
                    f64::INFINITY,
                    (lower, upper),
                    format!("v={v} j={j} right tail f={f}"),
                );
            }
            for &f in &[0.3, 0.7, 0.95] {
                let a = xj * f;
                let m = xj * 1.5;
                let lower = e(xj) - d(m).ln() + (-(e(m) - e(xj)).exp()).ln_1p();
                let upper = (4.0 * j as f64).ln() + e(xj);
                run(
                    &mut t,
                    a,
                    f64::INFINITY,
                    (lower, upper),
                    format!("v={v} j={j} bulk f={f}"),
                );
                let a1 = 0.5 * a;
                let lower = e(a) - (-d(a1)).ln() + (-(e(a1) - e(a)).exp()).ln_1p();
                let upper = e(a) - (-d(a)).ln();
                run(
                    &mut t,
                    0.0,
                    a,
                    (lower, upper),
                    format!("v={v} j={j} left tail f={f}"),
                );
            }
            for &f in &[1.2, 2.0] {
                let a = xj * f;
                let m = xj * 0.6;
                let lower = e(xj) - (-d(m)).ln() + (-(e(m) - e(xj)).exp()).ln_1p();
                let upper = a.ln() + e(xj);
                run(
                    &mut t,
                    0.0,
                    a,
                    (lower, upper),
                    format!("v={v} j={j} left bulk f={f}"),
                );
            }
        }
    }
    t.summary = "all τ-integral bounds hold".into();
    t.finish()
}

/// Residuals of the `Σ i log i` and `Σ (i+v-½) log(i+v)` expansions stay
/// below one.
pub fn ma_residual_suite(ns: &[usize]) -> Check {
    let mut t = Tally::new("log-sum-residuals");
    let mut worst = 0.0f64;
    for &n in ns {
        for v in [0usize, 1, 7, 50, 1000] {
            match lemma_ma_sums(n, v) {
                Ok(s) => {
                    let r = s.residual_1().abs().max(s.residual_2().abs());
                    worst = worst.max(r);
                    t.check(r <= 1.0, || {
                        format!(
                            "n={n} v={v}: residuals {} {}",
                            s.residual_1(),
                            s.residual_2()
                        )
                    });
                }
                Err(e) => t.error(e),
            }
        }
    }
    t.summary = format!("worst residual {worst:.4}");
    t.finish()
}

/// The full invariant suite. `quick` shrinks random sample counts and the
/// largest sizes.
pub fn run_all(quick: bool) -> Vec<Check> {
    let q = QuadratureSpec::default();
    let ma_ns: &[usize] = if quick {
        &[100, 1000, 10_000]
    } else {
        &[100, 316, 1000, 3162, 10_000, 31_623, 100_000]
    };
    vec![
        rate_boundary_suite(),
        kappa_quadratic_suite(if quick { 1000 } else { 10_000 }, 1),
        minimizer_suite(),
        bessel_suite(&q),
        closed_form_suite(&q),
        index_mass_suite(&q),
        complement_suite(&q),
        sampler_mean_suite(if quick { 20_000 } else { 200_000 }, 7),
        gamma_sandwich_suite(&q),
        tau_sandwich_suite(&q),
        ma_residual_suite(ma_ns),
    ]
}
