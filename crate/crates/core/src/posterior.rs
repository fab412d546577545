//! Matrix-Normal likelihood, the marginalized correlation posterior, its
//! Monte-Carlo normalization estimate, and the graph likelihood.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::StandardizedDataset;
use crate::linalg::{cholesky_with_ridge, log_det_spd, CholeskyFactor, LinalgError, Matrix, RidgeConfig, SpdMatrix};
use crate::scalar::Scalar;
use crate::srgg::PartialCorrelationMatrix;

/// Exponent of the inverse-Wishart-type prior `|Σ_R|^α` integrated out of
/// the row covariance, `α = -n/2 - 1`.
pub fn row_prior_exponent(n: usize) -> f64 {
    -(n as f64) / 2.0 - 1.0
}

pub const MAX_REPLICATE_REDRAWS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PosteriorError {
    #[error("singular correlation: {0}")]
    Singular(#[from] LinalgError),
    #[error("variance ({i},{j}) = {value} is not positive")]
    NonpositiveVariance { i: usize, j: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("replicate {k} stayed degenerate after {MAX_REPLICATE_REDRAWS} redraws")]
    ReplicateExhausted { k: usize },
}

/// Which determinant exponents the matrix-Normal density carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExponentConvention {
    /// `|Σ_C|^{p/2} |Σ_R|^{n/2}`.
    #[default]
    AsPrinted,
    /// `|Σ_C|^{n/2} |Σ_R|^{p/2}`.
    Textbook,
}

/// Log density of a zero-mean matrix-Normal `n×p` observation with row
/// covariance `Σ_R` and column covariance `Σ_C`.
pub fn matrix_normal_loglik<T: Scalar>(
    x: &Matrix<T>,
    sigma_r: &SpdMatrix<T>,
    sigma_c: &SpdMatrix<T>,
    convention: ExponentConvention,
    ridge: &RidgeConfig,
) -> Result<T, PosteriorError> {
    let (n, p) = (x.rows(), x.cols());
    if sigma_r.dim() != n {
        return Err(PosteriorError::DimensionMismatch { expected: n, got: sigma_r.dim() });
    }
    if sigma_c.dim() != p {
        return Err(PosteriorError::DimensionMismatch { expected: p, got: sigma_c.dim() });
    }
    let lr = cholesky_with_ridge(sigma_r, ridge)?;
    let lc = cholesky_with_ridge(sigma_c, ridge)?;
    // Y = L_R⁻¹ X, then tr(Σ_C⁻¹ Yᵀ Y) = Σ_rows y Σ_C⁻¹ yᵀ.
    let mut y = x.clone();
    let mut col = vec![T::zero(); n];
    for j in 0..p {
        for i in 0..n {
            col[i] = x[(i, j)];
        }
        lr.forward_solve(&mut col);
        for i in 0..n {
            y[(i, j)] = col[i];
        }
    }
    let quad: T = (0..n).map(|i| lc.inv_quad(y.row(i))).sum();
    let (ec, er) = match convention {
        ExponentConvention::AsPrinted => (p, n),
        ExponentConvention::Textbook => (n, p),
    };
    let half = T::of(0.5);
    Ok(-T::of((n * p) as f64) * half * T::TAU().ln()
        - T::of(ec as f64) * half * log_det_spd(&lc)?
        - T::of(er as f64) * half * log_det_spd(&lr)?
        - half * quad)
}

/// Likelihood used for the correlation block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CorrelationLikelihood {
    /// Row covariance integrated out in closed form.
    Marginalized,
    /// Matrix-Normal with `Σ_R = I`.
    IndependentRows,
    /// `Marginalized` when `n ≤ p`, `IndependentRows` otherwise.
    #[default]
    Auto,
}

impl CorrelationLikelihood {
    pub fn resolve(self, n: usize, p: usize) -> Self {
        match self {
            Self::Auto if n <= p => Self::Marginalized,
            Self::Auto => Self::IndependentRows,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalPosteriorConfig {
    pub use_normalization: bool,
    pub replicates: usize,
    pub replicate_rows: usize,
    pub seed: u64,
    /// Per-column measurement-noise sd; `None` disables the noise hook.
    pub measurement_noise: Option<Vec<f64>>,
}

impl Default for MarginalPosteriorConfig {
    fn default() -> Self {
        Self { use_normalization: false, replicates: 200, replicate_rows: 10, seed: 0, measurement_noise: None }
    }
}

impl MarginalPosteriorConfig {
    pub fn validate(&self, p: usize) -> Result<(), PosteriorError> {
        if self.use_normalization && self.replicates == 0 {
            return Err(PosteriorError::InvalidConfig("replicates must be at least 1".into()));
        }
        if self.replicate_rows < 2 {
            return Err(PosteriorError::InvalidConfig("replicate_rows must be at least 2".into()));
        }
        if let Some(noise) = &self.measurement_noise {
            if noise.len() != p {
                return Err(PosteriorError::DimensionMismatch { expected: p, got: noise.len() });
            }
            if noise.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
                return Err(PosteriorError::InvalidConfig("noise sd must be finite and non-negative".into()));
            }
        }
        Ok(())
    }
}

/// `ln |D Σ⁻¹ Dᵀ|` over the non-zero spectrum of the `n×n` quadratic form.
///
/// For `n ≤ p` the `n×n` matrix is factorized directly. For `n > p` it has
/// rank `p` and its non-zero eigenvalues are those of `Σ⁻¹ DᵀD`, giving
/// `ln|DᵀD| - ln|Σ|`. `noise` inflates the appropriate diagonal.
fn log_det_quadratic<T: Scalar>(
    d: &Matrix<T>,
    gram: Option<&Matrix<T>>,
    chol: &CholeskyFactor<T>,
    noise: Option<&[f64]>,
    ridge: &RidgeConfig,
) -> Result<(T, f64), PosteriorError> {
    let (n, p) = (d.rows(), d.cols());
    if n <= p {
        let mut w = Matrix::zeros(n, p);
        for a in 0..n {
            let mut row = d.row(a).to_vec();
            chol.forward_solve(&mut row);
            w.row_mut(a).copy_from_slice(&row);
        }
        let mut m = w.transpose().gram();
        if let Some(noise) = noise {
            // E[ε Σ⁻¹ εᵀ] = Σ_j σ_j² ψ_jj on the diagonal
            let mut bump = T::zero();
            for (j, &s) in noise.iter().enumerate() {
                let mut e = vec![T::zero(); p];
                e[j] = T::one();
                bump += T::of(s * s) * chol.inv_quad(&e);
            }
            for a in 0..n {
                m[(a, a)] += bump;
            }
        }
        let f = cholesky_with_ridge(&SpdMatrix::new(m)?, ridge)?;
        Ok((log_det_spd(&f)?, f.ridge()))
    } else {
        let mut g = match gram {
            Some(g) => g.clone(),
            None => d.gram(),
        };
        if let Some(noise) = noise {
            for (j, &s) in noise.iter().enumerate() {
                g[(j, j)] += T::of(n as f64 * s * s);
            }
        }
        let f = cholesky_with_ridge(&SpdMatrix::new(g)?, ridge)?;
        Ok((log_det_spd(&f)? - log_det_spd(chol)?, f.ridge()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorEval<T> {
    pub value: T,
    /// Largest ridge applied in any factorization of this evaluation.
    pub ridge: f64,
}

/// Log posterior of the column correlation given standardized data, with the
/// data-side products precomputed once.
#[derive(Debug, Clone)]
pub struct CorrelationPosterior<T> {
    data: Matrix<T>,
    gram: Matrix<T>,
    likelihood: CorrelationLikelihood,
    cfg: MarginalPosteriorConfig,
    ridge: RidgeConfig,
}

impl<T: Scalar> CorrelationPosterior<T> {
    pub fn new(
        data: &StandardizedDataset<T>,
        likelihood: CorrelationLikelihood,
        cfg: MarginalPosteriorConfig,
        ridge: RidgeConfig,
    ) -> Result<Self, PosteriorError> {
        cfg.validate(data.p())?;
        let likelihood = likelihood.resolve(data.n(), data.p());
        let gram = data.values.gram();
        Ok(Self { data: data.values.clone(), gram, likelihood, cfg, ridge })
    }

    pub fn likelihood(&self) -> CorrelationLikelihood {
        self.likelihood
    }

    pub fn config(&self) -> &MarginalPosteriorConfig {
        &self.cfg
    }

    pub fn evaluate(&self, sigma_c: &SpdMatrix<T>) -> Result<PosteriorEval<T>, PosteriorError> {
        let (n, p) = (self.data.rows(), self.data.cols());
        if sigma_c.dim() != p {
            return Err(PosteriorError::DimensionMismatch { expected: p, got: sigma_c.dim() });
        }
        let half = T::of(0.5);
        let noise = self.cfg.measurement_noise.as_deref();
        let mut out = match self.likelihood {
            CorrelationLikelihood::IndependentRows => {
                let mut s = sigma_c.matrix().clone();
                if let Some(noise) = noise {
                    for (j, &sd) in noise.iter().enumerate() {
                        s[(j, j)] += T::of(sd * sd);
                    }
                }
                let chol = cholesky_with_ridge(&SpdMatrix::new(s)?, &self.ridge)?;
                let inv = crate::linalg::invert_spd(&chol)?;
                let mut tr = T::zero();
                for i in 0..p {
                    for j in 0..p {
                        tr += inv[(i, j)] * self.gram[(j, i)];
                    }
                }
                let np = T::of((n * p) as f64);
                let value = -np * half * T::TAU().ln() - T::of(n as f64) * half * log_det_spd(&chol)? - half * tr;
                PosteriorEval { value, ridge: chol.ridge() }
            }
            _ => {
                let chol = cholesky_with_ridge(sigma_c, &self.ridge)?;
                let (ld_q, r2) = log_det_quadratic(&self.data, Some(&self.gram), &chol, noise, &self.ridge)?;
                let value = -T::of(p as f64) * half * log_det_spd(&chol)? - T::of((n + 1) as f64) * half * ld_q;
                PosteriorEval { value, ridge: chol.ridge().max(r2) }
            }
        };
        if self.cfg.use_normalization {
            let est = estimate_log_normalization(sigma_c, &self.cfg, &self.ridge)?;
            out.value -= T::of(est.log_c_hat);
        }
        Ok(out)
    }

    pub fn log_posterior(&self, sigma_c: &SpdMatrix<T>) -> Result<T, PosteriorError> {
        Ok(self.evaluate(sigma_c)?.value)
    }
}

/// `-(p/2) ln|Σ_C| - ((n+1)/2) ln|D Σ_C⁻¹ Dᵀ|` (minus `ln ĉ` when enabled).
pub fn marginalized_log_posterior<T: Scalar>(
    data: &StandardizedDataset<T>,
    sigma_c: &SpdMatrix<T>,
    cfg: &MarginalPosteriorConfig,
) -> Result<T, PosteriorError> {
    CorrelationPosterior::new(data, CorrelationLikelihood::Marginalized, cfg.clone(), RidgeConfig::default())?
        .log_posterior(sigma_c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationEstimate {
    /// `ln ĉ`, computed as a log-mean-exp.
    pub log_c_hat: f64,
    /// `ln |D′_k Σ⁻¹ D′_kᵀ|` per replicate, in replicate order.
    pub replicate_log_dets: Vec<f64>,
    pub redraws: usize,
}

impl NormalizationEstimate {
    pub fn c_hat(&self) -> f64 {
        self.log_c_hat.exp()
    }
}

fn replicate_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

/// `ĉ = (1/K) Σ_k |D′_k Σ⁻¹ D′_kᵀ|^{-(n′+1)/2}` over replicates whose rows are
/// `N(0, Σ)` draws colored by the Cholesky factor. Replicate `k` uses its own
/// RNG stream, so the estimate is independent of thread scheduling.
pub fn estimate_log_normalization<T: Scalar>(
    sigma_c: &SpdMatrix<T>,
    cfg: &MarginalPosteriorConfig,
    ridge: &RidgeConfig,
) -> Result<NormalizationEstimate, PosteriorError> {
    cfg.validate(sigma_c.dim())?;
    if cfg.replicates == 0 {
        return Err(PosteriorError::InvalidConfig("replicates must be at least 1".into()));
    }
    let p = sigma_c.dim();
    let nr = cfg.replicate_rows;
    let chol = cholesky_with_ridge(sigma_c, ridge)?;
    let results: Vec<Result<(f64, usize), PosteriorError>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|k| {
            let mut rng = replicate_rng(cfg.seed, k);
            for attempt in 0..=MAX_REPLICATE_REDRAWS {
                let mut d = Matrix::zeros(nr, p);
                for a in 0..nr {
                    let z: Vec<T> = (0..p).map(|_| T::of(StandardNormal.sample(&mut rng))).collect();
                    let l = chol.l();
                    for i in 0..p {
                        let mut s = T::zero();
                        for j in 0..=i {
                            s += l[(i, j)] * z[j];
                        }
                        d[(a, i)] = s;
                    }
                }
                match log_det_quadratic(&d, None, &chol, None, ridge) {
                    Ok((ld, _)) => return Ok((ld.to_f64_lossy(), attempt)),
                    Err(PosteriorError::Singular(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(PosteriorError::ReplicateExhausted { k })
        })
        .collect();
    let mut log_dets = Vec::with_capacity(cfg.replicates);
    let mut redraws = 0;
    for r in results {
        let (ld, extra) = r?;
        log_dets.push(ld);
        redraws += extra;
    }
    if redraws > 0 {
        log::warn!("normalization: {redraws} degenerate replicates redrawn");
    }
    let expo = -((nr + 1) as f64) / 2.0;
    let terms: Vec<f64> = log_dets.iter().map(|&ld| expo * ld).collect();
    let mx = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|&t| (t - mx).exp()).sum();
    let log_c_hat = mx + (sum / terms.len() as f64).ln();
    Ok(NormalizationEstimate { log_c_hat, replicate_log_dets: log_dets, redraws })
}

pub fn estimate_normalization<T: Scalar>(
    sigma_c: &SpdMatrix<T>,
    cfg: &MarginalPosteriorConfig,
) -> Result<f64, PosteriorError> {
    Ok(estimate_log_normalization(sigma_c, cfg, &RidgeConfig::default())?.c_hat())
}

/// Edge indicators and variances for `i < j`, stored as a packed upper triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphParams<T> {
    p: usize,
    edges: Vec<bool>,
    variances: Vec<T>,
}

#[inline]
pub fn pair_index(p: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < p);
    i * (2 * p - i - 1) / 2 + (j - i - 1)
}

#[inline]
pub fn pair_count(p: usize) -> usize {
    p * p.saturating_sub(1) / 2
}

/// Iterates `(i, j)` with `i < j` in the packed order.
pub fn pairs(p: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..p).flat_map(move |i| ((i + 1)..p).map(move |j| (i, j)))
}

impl<T: Scalar> GraphParams<T> {
    pub fn new(p: usize, edges: Vec<bool>, variances: Vec<T>) -> Result<Self, PosteriorError> {
        let m = pair_count(p);
        if edges.len() != m {
            return Err(PosteriorError::DimensionMismatch { expected: m, got: edges.len() });
        }
        if variances.len() != m {
            return Err(PosteriorError::DimensionMismatch { expected: m, got: variances.len() });
        }
        Ok(Self { p, edges, variances })
    }

    pub fn uniform(p: usize, edge: bool, variance: T) -> Self {
        let m = pair_count(p);
        Self { p, edges: vec![edge; m], variances: vec![variance; m] }
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges[pair_index(self.p, a, b)]
    }

    #[inline]
    pub fn variance(&self, i: usize, j: usize) -> T {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.variances[pair_index(self.p, a, b)]
    }

    #[inline]
    pub fn edges(&self) -> &[bool] {
        &self.edges
    }

    #[inline]
    pub fn variances(&self) -> &[T] {
        &self.variances
    }

    pub fn edges_mut(&mut self) -> &mut [bool] {
        &mut self.edges
    }

    pub fn variances_mut(&mut self) -> &mut [T] {
        &mut self.variances
    }
}

/// `Σ_{i<j} [-½ ln(2πυ_ij) - (g_ij - |ρ_ij|)² / (2υ_ij)]`.
pub fn graph_log_likelihood<T: Scalar>(
    g: &GraphParams<T>,
    r: &PartialCorrelationMatrix<T>,
) -> Result<T, PosteriorError> {
    if r.dim() != g.p {
        return Err(PosteriorError::DimensionMismatch { expected: g.p, got: r.dim() });
    }
    let half = T::of(0.5);
    let mut s = T::zero();
    for (k, (i, j)) in pairs(g.p).enumerate() {
        let v = g.variances[k];
        if !(v > T::zero()) {
            return Err(PosteriorError::NonpositiveVariance { i, j, value: v.to_f64_lossy() });
        }
        let gij = if g.edges[k] { T::one() } else { T::zero() };
        let d = gij - r.get(i, j).abs();
        s += -half * (T::TAU() * v).ln() - d * d / (v + v);
    }
    Ok(s)
}
