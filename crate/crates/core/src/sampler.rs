//! Monte Carlo for the independent moduli and a direct matrix probe.
//!
//! `2nY_j` has the law of `2√(G_a G_b)` with `G_a ~ Gamma(j)` and
//! `G_b ~ Gamma(j+v)` independent, so draws need no rejection against the
//! Bessel density. Every replicate draws from its own ChaCha stream keyed by
//! `(seed, domain, replicate)`, so output does not depend on scheduling.
//!
//! Plain Monte Carlo cannot resolve the `e^{-n}` or `e^{-n²}` tails; it is
//! meant for validating the sampler and for CLT-scale checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IndexDistribution;
use crate::params::EnsembleParams;
use crate::quadrature::{integrate_log, GaussLegendre, QuadratureSpec};

const DOMAIN_INDEX: u64 = 0x59_4a;
const DOMAIN_EXTREMES: u64 = 0x58_4e;
const DOMAIN_MATRIX: u64 = 0x4d_41;

/// A generator for replicate `index` of stream `domain` under `seed`.
pub fn stream_rng(seed: u64, domain: u64, index: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform on `(0, 1]`.
fn open_uniform<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Standard normal by the polar method; the second variate is discarded.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// `Gamma(shape, 1)` by Marsaglia and Tsang; shapes below one use
/// `G(a) = G(a+1) U^{1/a}`.
pub fn gamma<R: Rng>(rng: &mut R, shape: f64) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        let g = gamma(rng, shape + 1.0);
        return g * open_uniform(rng).powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z = standard_normal(rng);
        let t = 1.0 + c * z;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = open_uniform(rng);
        if u < 1.0 - 0.0331 * z.powi(4) || u.ln() < 0.5 * z * z + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

fn draw_t<R: Rng>(rng: &mut R, j: usize, v: usize) -> f64 {
    let ga = gamma(rng, j as f64);
    let gb = gamma(rng, (j + v) as f64);
    2.0 * (ga * gb).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: usize,
    pub values: Vec<f64>,
}

/// `count` draws of `Y_j = √(G_j G_{j+v}) / n`.
pub fn sample_yj(params: EnsembleParams, j: usize, seed: u64, count: usize) -> Result<SampleBatch> {
    if j == 0 || j > params.n() {
        return Err(Error::InvalidParameter(format!(
            "index j = {j} outside 1..={}",
            params.n()
        )));
    }
    let n = params.n() as f64;
    let domain = DOMAIN_INDEX ^ ((j as u64) << 16);
    let values = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, domain, i as u64);
            draw_t(&mut rng, j, params.v()) / (2.0 * n)
        })
        .collect();
    Ok(SampleBatch {
        seed,
        count,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    pub max: f64,
    pub min: f64,
}

/// Samples of `(X_(n), X_(1))` from the independent model.
pub fn sample_extremes_independent(
    params: EnsembleParams,
    seed: u64,
    count: usize,
) -> Vec<Extremes> {
    let scale = params.scales().modulus_scale / (2.0 * params.n() as f64);
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, DOMAIN_EXTREMES, i as u64);
            let mut max = f64::NEG_INFINITY;
            let mut min = f64::INFINITY;
            for j in 1..=params.n() {
                let t = draw_t(&mut rng, j, params.v());
                max = max.max(t);
                min = min.min(t);
            }
            Extremes {
                max: scale * max,
                min: scale * min,
            }
        })
        .collect()
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let values: Vec<f64> = xs.iter().map(|&x| cdf(x)).collect();
    ks_sorted(&values)
}

/// KS distance given the CDF at the sorted sample points.
pub fn ks_sorted(cdf_at_sorted: &[f64]) -> f64 {
    let m = cdf_at_sorted.len() as f64;
    cdf_at_sorted
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / m).max((i + 1) as f64 / m - f))
        .fold(0.0, f64::max)
}

/// CDF of `t = 2nY_j` at sorted points, by integrating the density between
/// consecutive points. Linear in the number of points.
pub fn index_cdf_at_sorted(
    dist: &IndexDistribution,
    sorted_t: &[f64],
    q: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(sorted_t.len());
    if sorted_t.is_empty() {
        return Ok(out);
    }
    let c = dist.params().scales().c_nv;
    let rule = GaussLegendre::of_order(16);
    let width = dist.width_s();
    let mut f = dist.tails(sorted_t[0] / c, q)?.log_cdf.exp();
    out.push(f);
    for w in sorted_t.windows(2) {
        let (a, b) = (w[0].ln(), w[1].ln());
        if b > a {
            let inc = if b - a < 0.25 * width {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * dist.log_density_s(mid + half * x).exp())
                    .sum::<f64>()
                    * half
            } else {
                let f = |s: f64| dist.log_density_s(s);
                integrate_log(f, a, b, dist.mode_s(), width, q)?
                    .log_value
                    .exp()
            };
            f += inc;
        }
        out.push(f.min(1.0));
    }
    Ok(out)
}

/// How "complex variance `σ²`" is split between real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexVariance {
    /// Real and imaginary parts each have variance `1/(4n)`, so
    /// `E|z|² = 1/(2n)`. This reproduces the independent-moduli law.
    PerComponent,
    /// `E|z|² = 1/(4n)`; every modulus comes out halved.
    Total,
}

impl ComplexVariance {
    fn component_sd(&self, n: usize) -> f64 {
        match self {
            ComplexVariance::PerComponent => (1.0 / (4.0 * n as f64)).sqrt(),
            ComplexVariance::Total => (1.0 / (8.0 * n as f64)).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixProbeConfig {
    pub params: EnsembleParams,
    pub power_iters: usize,
    pub tol: f64,
    pub variance: ComplexVariance,
}

impl MatrixProbeConfig {
    pub const MAX_N: usize = 64;

    pub fn new(params: EnsembleParams) -> Result<Self> {
        let c = MatrixProbeConfig {
            params,
            power_iters: 500,
            tol: 1e-10,
            variance: ComplexVariance::PerComponent,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.n() > Self::MAX_N {
            return Err(Error::InvalidParameter(format!(
                "matrix probe supports n <= {}, got {}",
                Self::MAX_N,
                self.params.n()
            )));
        }
        if self.power_iters == 0 || !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(
                "power_iters and tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeBatch {
    pub seed: u64,
    pub samples: Vec<Extremes>,
    /// Replicates redrawn after an iteration failed to converge.
    pub resamples: usize,
}

const MAX_ATTEMPTS: u64 = 16;

/// Samples of `modulus_scale · (max|λ|, min|λ|)` over the eigenvalues `λ = ζ²`
/// of `Ψ*Φ`, where `Φ = P + Q`, `Ψ = P - Q` and `P`, `Q` are
/// `(n+v) × n` complex Gaussian matrices.
pub fn matrix_probe_extremes(
    config: &MatrixProbeConfig,
    seed: u64,
    count: usize,
) -> Result<ProbeBatch> {
    config.validate()?;
    let rows: Vec<Result<(Extremes, usize)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            for attempt in 0..MAX_ATTEMPTS {
                let mut rng = stream_rng(seed, DOMAIN_MATRIX ^ (attempt << 32), i as u64);
                let (p, q) = draw_blocks(&mut rng, config);
                let m = product_matrix(&p, &q);
                if let Some(e) = extreme_moduli(&m, &mut rng, config) {
                    let s = config.params.scales().modulus_scale;
                    return Ok((
                        Extremes {
                            max: s * e.max,
                            min: s * e.min,
                        },
                        attempt as usize,
                    ));
                }
            }
            Err(Error::Probe(format!(
                "replicate {i}: no convergence after {MAX_ATTEMPTS} draws"
            )))
        })
        .collect();
    let mut samples = Vec::with_capacity(count);
    let mut resamples = 0;
    for r in rows {
        let (e, a) = r?;
        samples.push(e);
        resamples += a;
    }
    Ok(ProbeBatch {
        seed,
        samples,
        resamples,
    })
}

fn draw_blocks<R: Rng>(
    rng: &mut R,
    c: &MatrixProbeConfig,
) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = c.params.n();
    let rows = n + c.params.v();
    let sd = c.variance.component_sd(n);
    let mut gen = |_, _| Complex64::new(sd * standard_normal(rng), sd * standard_normal(rng));
    let p = DMatrix::from_fn(rows, n, &mut gen);
    let q = DMatrix::from_fn(rows, n, &mut gen);
    (p, q)
}

/// `Ψ*Φ` with `Φ = P + Q`, `Ψ = P - Q`.
pub fn product_matrix(p: &DMatrix<Complex64>, q: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let phi = p + q;
    let psi = p - q;
    psi.adjoint() * phi
}

fn random_block<R: Rng>(rng: &mut R, n: usize, k: usize) -> DMatrix<Complex64> {
    let x = DMatrix::from_fn(n, k, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    });
    x.qr().q()
}

/// Eigenvalues and eigenvectors of a 2×2 matrix.
fn eig2(h: &DMatrix<Complex64>) -> [(Complex64, [Complex64; 2]); 2] {
    let (a, b, c, d) = (h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    let vec_for = |mu: Complex64| {
        let v1 = [b, mu - a];
        let v2 = [mu - d, c];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        if n1 >= n2 && n1 > 0.0 {
            v1
        } else if n2 > 0.0 {
            v2
        } else if (mu - a).norm() <= (mu - d).norm() {
            [Complex64::from(1.0), Complex64::from(0.0)]
        } else {
            [Complex64::from(0.0), Complex64::from(1.0)]
        }
    };
    let m1 = half_tr + disc;
    let m2 = half_tr - disc;
    [(m1, vec_for(m1)), (m2, vec_for(m2))]
}

/// Dominant eigenvalue of a linear operator by two-vector orthogonal
/// iteration with Rayleigh–Ritz. Convergence is governed by `|λ₃/λ₁|`, so
/// a near-tie between the two largest moduli does not stall it. Accepts only
/// a Ritz pair whose eigen-residual is below `tol`.
fn dominant_eigenvalue<F>(
    apply: F,
    n: usize,
    start: DMatrix<Complex64>,
    iters: usize,
    tol: f64,
) -> Option<Complex64>
where
    F: Fn(&DMatrix<Complex64>) -> Option<DMatrix<Complex64>>,
{
    let mut x = start;
    for _ in 0..iters {
        let y = apply(&x)?;
        if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        let h = x.adjoint() * &y;
        let pairs = eig2(&h);
        let (mu, w) = if pairs[0].0.norm() >= pairs[1].0.norm() {
            pairs[0]
        } else {
            pairs[1]
        };
        let wv = DVector::from_column_slice(&w);
        let z = &x * &wv;
        let az = &y * &wv;
        let zn = z.norm();
        if zn > 0.0 && (&az - &z * mu).norm() <= tol * mu.norm() * zn {
            return Some(mu);
        }
        x = y.qr().q();
        debug_assert_eq!(x.nrows(), n);
    }
    None
}

/// `(max|λ|, min|λ|)` over the eigenvalues of `m`, or `None` when an
/// iteration fails or `m` is numerically singular.
fn extreme_moduli<R: Rng>(
    m: &DMatrix<Complex64>,
    rng: &mut R,
    c: &MatrixProbeConfig,
) -> Option<Extremes> {
    let n = m.nrows();
    if n == 1 {
        let l = m[(0, 0)].norm();
        return Some(Extremes { max: l, min: l });
    }
    let start = random_block(rng, n, 2);
    let max = dominant_eigenvalue(|x| Some(m * x), n, start, c.power_iters, c.tol)?.norm();

    let lu = m.clone().lu();
    if !lu.is_invertible() {
        return None;
    }
    let start = random_block(rng, n, 2);
    let inv = dominant_eigenvalue(|x| lu.solve(x), n, start, c.power_iters, c.tol)?.norm();
    let min = 1.0 / inv;
    if !(min > 0.0 && max.is_finite() && min <= max * (1.0 + 1e-9)) {
        return None;
    }
    Some(Extremes { max, min })
}

/// Extreme eigenvalue moduli of an arbitrary square matrix by the probe's
/// iterations.
pub fn extreme_moduli_of(
    m: &DMatrix<Complex64>,
    power_iters: usize,
    tol: f64,
    seed: u64,
) -> Option<(f64, f64)> {
    let c = MatrixProbeConfig {
        params: EnsembleParams::new(m.nrows().max(1), 0).ok()?,
        power_iters,
        tol,
        variance: ComplexVariance::PerComponent,
    };
    let mut rng = stream_rng(seed, DOMAIN_MATRIX, 0);
    extreme_moduli(m, &mut rng, &c).map(|e| (e.max, e.min))
}
