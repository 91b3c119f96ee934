//! Log-space Gauss–Legendre panel quadrature for sharply peaked,
//! unimodal integrands.
//!
//! The integrand is supplied as `log f`. Panels are laid out from the mode
//! outward, sized by the local decay rate, and summed with log-sum-exp, so
//! integrals of size `e^{-10^5}` are as routine as integrals of size one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::log_sum_exp;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub panel_order: usize,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            panel_order: 64,
            max_panels: 256,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let q = QuadratureSpec {
            rel_tol,
            ..Default::default()
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(Error::domain("rel_tol", self.rel_tol, "(0, 1e-4]"));
        }
        if self.panel_order < 8 {
            return Err(Error::InvalidParameter(format!(
                "panel_order must be at least 8, got {}",
                self.panel_order
            )));
        }
        if self.max_panels == 0 {
            return Err(Error::InvalidParameter(
                "max_panels must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A quadrature result: `log ∫ f` and an estimate of its relative error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogIntegral {
    pub log_value: f64,
    pub rel_err: f64,
    pub panels: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(order: usize) -> Self {
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let mut p0 = 1.0;
                let mut p1 = 0.0;
                for k in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
                }
                dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
                let dz = p0 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Cached rule of the given order.
    pub fn of_order(order: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(order)
            .or_insert_with(|| Arc::new(GaussLegendre::compute(order)))
            .clone()
    }

    /// `log ∫_a^b e^{f}` on a single panel.
    fn log_panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, scratch: &mut Vec<f64>) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        scratch.clear();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            scratch.push(f(mid + half * x) + w.ln());
        }
        log_sum_exp(scratch) + half.abs().ln()
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    log_value: f64,
    log_err: f64,
}

struct Integrator<'r, F> {
    f: F,
    fine: &'r GaussLegendre,
    coarse: &'r GaussLegendre,
    scratch: Vec<f64>,
}

impl<F: Fn(f64) -> f64> Integrator<'_, F> {
    fn panel(&mut self, a: f64, b: f64) -> Panel {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let fine = self.fine.log_panel(&self.f, lo, hi, &mut self.scratch);
        let coarse = self.coarse.log_panel(&self.f, lo, hi, &mut self.scratch);
        let log_err = if fine == f64::NEG_INFINITY && coarse == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            let hi_v = fine.max(coarse);
            // |e^fine - e^coarse| in log space
            hi_v + (-(-(fine - coarse).abs()).exp_m1()).ln()
        };
        Panel {
            a: lo,
            b: hi,
            log_value: fine,
            log_err,
        }
    }

    fn slope(&self, s: f64, h: f64) -> f64 {
        let fp = (self.f)(s + h);
        let fm = (self.f)(s - h);
        if fp.is_finite() && fm.is_finite() {
            (fp - fm) / (2.0 * h)
        } else {
            let f0 = (self.f)(s);
            if fp.is_finite() && f0.is_finite() {
                (fp - f0) / h
            } else if fm.is_finite() && f0.is_finite() {
                (f0 - fm) / h
            } else {
                0.0
            }
        }
    }
}

/// `log ∫_lo^hi e^{f(s)} ds` for a unimodal `f`.
///
/// `peak` is an estimate of the maximizer of `f` and `width` the scale of
/// the peak; both only steer panel placement. Infinite limits are truncated
/// once the remaining tail falls below the requested tolerance.
pub fn integrate_log<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    peak: f64,
    width: f64,
    q: &QuadratureSpec,
) -> Result<LogIntegral> {
    q.validate()?;
    if !(lo < hi) {
        return Ok(LogIntegral {
            log_value: f64::NEG_INFINITY,
            rel_err: 0.0,
            panels: 0,
        });
    }
    let fine = GaussLegendre::of_order(q.panel_order);
    let coarse = GaussLegendre::of_order(q.panel_order / 2);
    let mut it = Integrator {
        f,
        fine: &fine,
        coarse: &coarse,
        scratch: Vec::with_capacity(q.panel_order),
    };
    let width = if width.is_finite() && width > 0.0 {
        width
    } else {
        1.0
    };
    let start = peak.clamp(lo, hi);
    let log_tol = q.rel_tol.ln();

    let mut panels: Vec<Panel> = Vec::new();
    for dir in [1.0f64, -1.0] {
        let bound = if dir > 0.0 { hi } else { lo };
        let mut s = start;
        while (bound - s) * dir > 0.0 {
            if panels.len() >= q.max_panels {
                return Err(non_convergence(&panels));
            }
            let h = 1e-6 * width.max(s.abs() * 1e-3);
            let k = it.slope(s, h).abs();
            let mut w = (2.0 * width).min(if k > 0.0 { 25.0 / k } else { f64::INFINITY });
            w = w.max(1e-12 * (1.0 + s.abs()));
            let mut next = s + dir * w;
            if (next - bound) * dir >= 0.0 {
                next = bound;
            }
            let p = it.panel(s, next);
            panels.push(p);
            s = next;
            if (bound - s) * dir <= 0.0 {
                break;
            }
            // stop once the remaining tail is negligible: the integrand is
            // decreasing here, and its tail mass is at most e^{f(s)}/|f'(s)|
            // when the decay is at least exponential
            let total = log_sum_exp(&panels.iter().map(|p| p.log_value).collect::<Vec<_>>());
            let fs = (it.f)(s);
            let ks = it.slope(s, 1e-6 * width.max(s.abs() * 1e-3));
            let decreasing = ks * dir < 0.0 || fs == f64::NEG_INFINITY;
            if decreasing && total > f64::NEG_INFINITY {
                let tail = if bound.is_finite() {
                    fs + (ks.abs().recip().min((bound - s).abs())).ln()
                } else {
                    fs - ks.abs().ln()
                };
                if tail < total + log_tol - 8.0 && p.log_value < total + log_tol - 4.0 {
                    break;
                }
            } else if fs == f64::NEG_INFINITY && total == f64::NEG_INFINITY && !bound.is_finite() {
                break;
            }
        }
    }

    // refine panels whose coarse/fine disagreement dominates the error budget
    loop {
        let values: Vec<f64> = panels.iter().map(|p| p.log_value).collect();
        let total = log_sum_exp(&values);
        let errs: Vec<f64> = panels.iter().map(|p| p.log_err).collect();
        let total_err = log_sum_exp(&errs);
        let rel_err = if total == f64::NEG_INFINITY {
            0.0
        } else {
            (total_err - total).exp()
        };
        if rel_err <= q.rel_tol || total == f64::NEG_INFINITY {
            return Ok(LogIntegral {
                log_value: total,
                rel_err,
                panels: panels.len(),
            });
        }
        if panels.len() >= q.max_panels {
            return Err(Error::QuadratureNonConvergence {
                panels: panels.len(),
                partial_log: total,
                rel_err,
            });
        }
        let worst = errs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        let left = it.panel(p.a, mid);
        let right = it.panel(mid, p.b);
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

fn non_convergence(panels: &[Panel]) -> Error {
    let values: Vec<f64> = panels.iter().map(|p| p.log_value).collect();
    Error::QuadratureNonConvergence {
        panels: panels.len(),
        partial_log: log_sum_exp(&values),
        rel_err: f64::NAN,
    }
}
