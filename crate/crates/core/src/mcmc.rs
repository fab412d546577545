//! Two-block Metropolis sampler over the column correlation and the SRGG.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::StandardizedDataset;
use crate::linalg::{cholesky_with_ridge, LinalgError, Matrix, RidgeConfig, SpdMatrix};
use crate::posterior::{
    graph_log_likelihood, pair_count, pairs, CorrelationLikelihood, CorrelationPosterior, GraphParams,
    MarginalPosteriorConfig, PosteriorError,
};
use crate::scalar::{norm_quantile, Scalar};
use crate::srgg::{marginal_at_separation, partial_correlation, PartialCorrelationMatrix, SrggError};

/// Dimension above which the sampler warns that mixing will be poor.
pub const SOFT_MAX_P: usize = 20;

#[derive(Debug, Error)]
pub enum McmcError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numeric failure at iteration {iteration}: {source}")]
    Numeric { iteration: usize, source: Box<dyn std::error::Error + Send + Sync> },
    #[error("no post-burn-in samples (trace length {len}, burn-in {n_burnin})")]
    EmptyPostBurnin { len: usize, n_burnin: usize },
    #[error(transparent)]
    Posterior(#[from] PosteriorError),
    #[error(transparent)]
    Srgg(#[from] SrggError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub n_iter: usize,
    pub n_burnin: usize,
    /// Proposal sd for each off-diagonal correlation entry.
    pub sigma0: f64,
    /// Proposal sd for each edge variance.
    pub w: f64,
    pub tau: f64,
    pub seed: u64,
    pub normalization: MarginalPosteriorConfig,
    pub likelihood: CorrelationLikelihood,
    /// Truncation correction on the correlation-block proposal.
    pub corr_hastings: bool,
    /// Bernoulli and variance-truncation correction on the graph-block proposal.
    pub graph_hastings: bool,
    pub initial_variance: f64,
    pub ridge: RidgeConfig,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            n_iter: 10_000,
            n_burnin: 5_000,
            sigma0: 0.05,
            w: 0.05,
            tau: 0.05,
            seed: 0,
            normalization: MarginalPosteriorConfig::default(),
            likelihood: CorrelationLikelihood::Auto,
            corr_hastings: true,
            graph_hastings: false,
            initial_variance: 0.5,
            ridge: RidgeConfig::default(),
        }
    }
}

impl McmcConfig {
    /// Plain Metropolis acceptance in both blocks, no proposal corrections.
    pub fn plain_metropolis(mut self) -> Self {
        self.corr_hastings = false;
        self.graph_hastings = false;
        self
    }

    pub fn validate(&self) -> Result<(), McmcError> {
        if self.n_burnin >= self.n_iter {
            return Err(McmcError::Config(format!(
                "burn-in {} must be less than iterations {}",
                self.n_burnin, self.n_iter
            )));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) || !(self.w > 0.0 && self.w.is_finite()) {
            return Err(McmcError::Config("proposal sds must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(McmcError::Config(format!("tau {} outside [0, 1]", self.tau)));
        }
        if !(self.initial_variance > 0.0 && self.initial_variance <= 1.0) {
            return Err(McmcError::Config("initial variance must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn n_post(&self) -> usize {
        self.n_iter - self.n_burnin
    }
}

/// Normal(μ, sd²) truncated to `(lo, hi)`, sampled by inverse CDF from `u ∈ (0,1)`.
pub fn truncated_normal_inverse<T: Scalar>(mu: T, sd: T, lo: T, hi: T, u: T) -> T {
    let a = (lo - mu) / sd;
    let b = (hi - mu) / sd;
    let x = if a >= T::zero() {
        // interval entirely in the upper tail: survival functions keep precision
        let (sa, sb) = (a.norm_sf(), b.norm_sf());
        mu - sd * norm_quantile(sa - u * (sa - sb))
    } else {
        let (fa, fb) = (a.norm_cdf(), b.norm_cdf());
        mu + sd * norm_quantile(fa + u * (fb - fa))
    };
    x.max(lo).min(hi)
}

/// `ln[Φ((hi-μ)/sd) - Φ((lo-μ)/sd)]`.
pub fn truncated_normal_log_mass<T: Scalar>(mu: T, sd: T, lo: T, hi: T) -> T {
    let a = (lo - mu) / sd;
    let b = (hi - mu) / sd;
    let mass = if a < T::zero() { T::one() - (-a).norm_sf() - b.norm_sf() } else { a.norm_sf() - b.norm_sf() };
    mass.ln()
}

/// Proposes every off-diagonal entry from `TruncNormal(current, σ₀², (-1, 1))`.
///
/// Returns the proposal and `Σ ln q(cur|prop) - ln q(prop|cur)`, which is
/// `Σ ln Z(cur) - ln Z(prop)` because the Normal kernel is symmetric.
pub fn propose_correlation_block<T: Scalar, R: Rng>(
    current: &SpdMatrix<T>,
    sigma0: f64,
    rng: &mut R,
) -> (SpdMatrix<T>, T) {
    let p = current.dim();
    let sd = T::of(sigma0);
    let (lo, hi) = (-T::one(), T::one());
    let mut next = current.clone();
    let mut log_ratio = T::zero();
    for i in 0..p {
        for j in (i + 1)..p {
            let mu = current[(i, j)];
            let u = T::of(rng.gen::<f64>());
            let x = truncated_normal_inverse(mu, sd, lo, hi, u);
            log_ratio += truncated_normal_log_mass(mu, sd, lo, hi) - truncated_normal_log_mass(x, sd, lo, hi);
            next.set_sym(i, j, x);
        }
    }
    (next, log_ratio)
}

/// Independence proposal `g_ij ~ Bernoulli(|ρ_ij|)` plus a random-walk
/// `υ_ij ~ TruncNormal(current, w², (0, 1])`.
///
/// Returns the proposal and its log Hastings ratio.
pub fn propose_graph_block<T: Scalar, R: Rng>(
    rho: &PartialCorrelationMatrix<T>,
    current: &GraphParams<T>,
    w: f64,
    rng: &mut R,
) -> (GraphParams<T>, T) {
    let p = current.p();
    let sd = T::of(w);
    let mut next = current.clone();
    let mut log_ratio = T::zero();
    for (k, (i, j)) in pairs(p).enumerate() {
        let prob = rho.get(i, j).abs().min(T::one());
        let ug: f64 = rng.gen();
        let g_new = T::of(ug) < prob;
        let ln_q = |g: bool| if g { prob.ln() } else { (T::one() - prob).ln() };
        let g_cur = current.edges()[k];
        if g_cur != g_new {
            log_ratio += ln_q(g_cur) - ln_q(g_new);
        }

        let v = current.variances()[k];
        let uv = T::of(rng.gen::<f64>());
        let v_new = truncated_normal_inverse(v, sd, T::zero(), T::one(), uv).max(T::min_positive_value());
        log_ratio += truncated_normal_log_mass(v, sd, T::zero(), T::one())
            - truncated_normal_log_mass(v_new, sd, T::zero(), T::one());

        next.edges_mut()[k] = g_new;
        next.variances_mut()[k] = v_new;
    }
    (next, log_ratio)
}

/// Log targets for the two blocks.
pub trait ChainTarget<T: Scalar>: Sync {
    /// Returns the log target and the ridge applied; `Ok(None)` rejects.
    fn correlation_log_target(&self, sigma_c: &SpdMatrix<T>) -> Result<Option<(T, f64)>, PosteriorError>;

    fn graph_log_target(&self, g: &GraphParams<T>, rho: &PartialCorrelationMatrix<T>) -> Result<T, PosteriorError> {
        graph_log_likelihood(g, rho)
    }
}

impl<T: Scalar> ChainTarget<T> for CorrelationPosterior<T> {
    fn correlation_log_target(&self, sigma_c: &SpdMatrix<T>) -> Result<Option<(T, f64)>, PosteriorError> {
        match self.evaluate(sigma_c) {
            Ok(e) => Ok(Some((e.value, e.ridge))),
            Err(PosteriorError::Singular(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Trace entry for one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub log_u: f64,
    pub accept_corr: bool,
    pub accept_graph: bool,
    pub sigma_hash: u64,
}

/// Per-iteration states, `t = 0..=n_iter`. Pair-indexed arrays are packed
/// row-major over `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub p: usize,
    pub rows: Vec<TraceRow>,
    pub edges: Vec<bool>,
    pub variances: Vec<f64>,
    pub abs_rho: Vec<f64>,
}

impl ChainTrace {
    fn with_capacity(p: usize, len: usize) -> Self {
        let m = pair_count(p);
        Self {
            p,
            rows: Vec::with_capacity(len),
            edges: Vec::with_capacity(len * m),
            variances: Vec::with_capacity(len * m),
            abs_rho: Vec::with_capacity(len * m),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pairs_per_row(&self) -> usize {
        pair_count(self.p)
    }

    pub fn log_u(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.log_u).collect()
    }

    pub fn edges_at(&self, t: usize) -> &[bool] {
        let m = self.pairs_per_row();
        &self.edges[t * m..(t + 1) * m]
    }

    pub fn abs_rho_at(&self, t: usize) -> &[f64] {
        let m = self.pairs_per_row();
        &self.abs_rho[t * m..(t + 1) * m]
    }

    pub fn variances_at(&self, t: usize) -> &[f64] {
        let m = self.pairs_per_row();
        &self.variances[t * m..(t + 1) * m]
    }

    fn push<T: Scalar>(&mut self, row: TraceRow, g: &GraphParams<T>, rho: &PartialCorrelationMatrix<T>) {
        self.rows.push(row);
        self.edges.extend_from_slice(g.edges());
        self.variances.extend(g.variances().iter().map(|v| v.to_f64_lossy()));
        self.abs_rho.extend(pairs(self.p).map(|(i, j)| rho.get(i, j).abs().to_f64_lossy()));
    }
}

/// `ln u = Σ_{i<j} ln m(g_ij | ρ_ij)`.
pub fn log_joint_edge_marginal<T: Scalar>(g: &GraphParams<T>, rho: &PartialCorrelationMatrix<T>) -> T {
    pairs(g.p())
        .zip(g.edges())
        .map(|((i, j), &e)| {
            let gv = if e { T::one() } else { T::zero() };
            marginal_at_separation(gv - rho.get(i, j).abs().min(T::one())).ln()
        })
        .sum()
}

/// FNV-1a over the bit patterns of the upper triangle.
pub fn hash_correlation<T: Scalar>(s: &SpdMatrix<T>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            for b in s[(i, j)].to_f64_lossy().to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}

/// Symmetric `p×p` post-burn-in edge frequencies with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeMarginalMatrix {
    pub p: usize,
    pub n_post: usize,
    pub values: Matrix<f64>,
}

impl EdgeMarginalMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }
}

/// `n_ij = #{t > n_burnin : g_ij^(t) = 1} / N_post`.
pub fn edge_marginal_matrix(trace: &ChainTrace, n_burnin: usize) -> Result<EdgeMarginalMatrix, McmcError> {
    let len = trace.len();
    if n_burnin + 1 >= len {
        return Err(McmcError::EmptyPostBurnin { len, n_burnin });
    }
    let m = trace.pairs_per_row();
    let mut counts = vec![0usize; m];
    for t in (n_burnin + 1)..len {
        for (c, &e) in counts.iter_mut().zip(trace.edges_at(t)) {
            *c += usize::from(e);
        }
    }
    let n_post = len - 1 - n_burnin;
    let p = trace.p;
    let mut values = Matrix::zeros(p, p);
    for (k, (i, j)) in pairs(p).enumerate() {
        let v = counts[k] as f64 / n_post as f64;
        values[(i, j)] = v;
        values[(j, i)] = v;
    }
    Ok(EdgeMarginalMatrix { p, n_post, values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Edges with posterior frequency at least `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphicalModel {
    pub labels: Vec<String>,
    pub edges: Vec<WeightedEdge>,
    pub tau: f64,
}

impl GraphicalModel {
    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        let pos = |s: &str| self.labels.iter().position(|l| l == s);
        match (pos(a), pos(b)) {
            (Some(x), Some(y)) => {
                let (i, j) = if x < y { (x, y) } else { (y, x) };
                self.edges.iter().any(|e| e.i == i && e.j == j)
            }
            _ => false,
        }
    }
}

pub fn build_graphical_model(nm: &EdgeMarginalMatrix, labels: &[String], tau: f64) -> GraphicalModel {
    let edges = pairs(nm.p)
        .filter_map(|(i, j)| {
            let w = nm.get(i, j);
            (w >= tau).then_some(WeightedEdge { i, j, weight: w })
        })
        .collect();
    GraphicalModel { labels: labels.to_vec(), edges, tau }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub accept_rate_corr: f64,
    pub accept_rate_graph: f64,
    /// Iterations whose accepted or proposed evaluation needed a ridge.
    pub ridge_events: usize,
    /// Correlation proposals rejected for not being positive definite.
    pub non_pd_rejections: usize,
    pub likelihood: CorrelationLikelihood,
    pub n_post: usize,
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub trace: ChainTrace,
    pub marginals: EdgeMarginalMatrix,
    pub stats: ChainStats,
}

/// Empirical correlation `DᵀD / n`, shrunk toward `I` until strictly positive definite.
pub fn initial_correlation<T: Scalar>(data: &StandardizedDataset<T>) -> SpdMatrix<T> {
    let p = data.p();
    let n = T::of(data.n() as f64);
    let g = data.values.gram();
    let strict = RidgeConfig { schedule: vec![0.0], ..RidgeConfig::default() };
    for &lambda in &[0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0] {
        let lam = T::of(lambda);
        let m = Matrix::from_fn(p, p, |i, j| {
            if i == j {
                T::one()
            } else {
                let r = (g[(i, j)] / n).max(-T::one()).min(T::one());
                (T::one() - lam) * r
            }
        });
        let s = SpdMatrix::new(m).expect("gram is symmetric");
        if cholesky_with_ridge(&s, &strict).is_ok() {
            if lambda > 0.0 {
                log::info!("initial correlation shrunk toward identity by {lambda}");
            }
            return s;
        }
    }
    SpdMatrix::identity(p)
}

fn numeric(iteration: usize, e: impl std::error::Error + Send + Sync + 'static) -> McmcError {
    McmcError::Numeric { iteration, source: Box::new(e) }
}

#[inline]
fn accept<R: Rng>(log_alpha: f64, rng: &mut R) -> bool {
    let u: f64 = rng.gen();
    log_alpha >= 0.0 || u.ln() < log_alpha
}

/// Runs the sampler from `init` against an arbitrary target.
pub fn run_chain_with_target<T: Scalar, G: ChainTarget<T>>(
    target: &G,
    init: SpdMatrix<T>,
    cfg: &McmcConfig,
) -> Result<(ChainTrace, ChainStats), McmcError> {
    cfg.validate()?;
    let p = init.dim();
    if p < 2 {
        return Err(McmcError::Config("need at least two columns".into()));
    }
    if p > SOFT_MAX_P {
        log::warn!("p = {p} exceeds {SOFT_MAX_P}; MCMC mixing over {} pairs will be slow", pair_count(p));
    }
    let strict = RidgeConfig { schedule: vec![0.0], ..cfg.ridge.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut sigma = init;
    cholesky_with_ridge(&sigma, &strict).map_err(|e| numeric(0, e))?;
    let (mut lp_sigma, r0) = target
        .correlation_log_target(&sigma)
        .map_err(|e| numeric(0, e))?
        .ok_or_else(|| McmcError::Config("initial correlation has zero target density".into()))?;
    let mut rho = partial_correlation(&sigma, &cfg.ridge).map_err(|e| numeric(0, e))?;

    let mut graph = {
        let edges = pairs(p).map(|(i, j)| rho.get(i, j).abs() >= T::of(0.5)).collect();
        GraphParams::new(p, edges, vec![T::of(cfg.initial_variance); pair_count(p)])?
    };
    let mut lp_graph = target.graph_log_target(&graph, &rho).map_err(|e| numeric(0, e))?;

    let mut trace = ChainTrace::with_capacity(p, cfg.n_iter + 1);
    trace.push(
        TraceRow {
            t: 0,
            log_u: log_joint_edge_marginal(&graph, &rho).to_f64_lossy(),
            accept_corr: false,
            accept_graph: false,
            sigma_hash: hash_correlation(&sigma),
        },
        &graph,
        &rho,
    );

    let mut acc_c = 0usize;
    let mut acc_g = 0usize;
    let mut ridge_events = usize::from(r0 > 0.0);
    let mut non_pd = 0usize;

    for t in 1..=cfg.n_iter {
        // block 1: correlation matrix
        let (prop, hastings) = propose_correlation_block(&sigma, cfg.sigma0, &mut rng);
        let mut accepted_c = false;
        let eval = if cholesky_with_ridge(&prop, &strict).is_ok() {
            target.correlation_log_target(&prop).map_err(|e| numeric(t, e))?
        } else {
            None
        };
        match eval {
            Some((lp, ridge)) => {
                if ridge > 0.0 {
                    ridge_events += 1;
                }
                let h = if cfg.corr_hastings { hastings } else { T::zero() };
                let log_alpha = (lp - lp_sigma + h).to_f64_lossy();
                if accept(if log_alpha.is_nan() { f64::NEG_INFINITY } else { log_alpha }, &mut rng) {
                    sigma = prop;
                    lp_sigma = lp;
                    rho = partial_correlation(&sigma, &cfg.ridge).map_err(|e| numeric(t, e))?;
                    lp_graph = target.graph_log_target(&graph, &rho).map_err(|e| numeric(t, e))?;
                    accepted_c = true;
                    acc_c += 1;
                }
            }
            None => {
                non_pd += 1;
                let _: f64 = rng.gen();
            }
        }

        // block 2: graph and variances given the current partials
        let (gprop, ghast) = propose_graph_block(&rho, &graph, cfg.w, &mut rng);
        let lp_new = target.graph_log_target(&gprop, &rho).map_err(|e| numeric(t, e))?;
        let h = if cfg.graph_hastings { ghast } else { T::zero() };
        let log_alpha = (lp_new - lp_graph + h).to_f64_lossy();
        let accepted_g = accept(if log_alpha.is_nan() { f64::NEG_INFINITY } else { log_alpha }, &mut rng);
        if accepted_g {
            graph = gprop;
            lp_graph = lp_new;
            acc_g += 1;
        }

        let log_u = log_joint_edge_marginal(&graph, &rho).to_f64_lossy();
        if !log_u.is_finite() {
            return Err(McmcError::Numeric { iteration: t, source: "non-finite log edge marginal".into() });
        }
        trace.push(
            TraceRow {
                t,
                log_u,
                accept_corr: accepted_c,
                accept_graph: accepted_g,
                sigma_hash: hash_correlation(&sigma),
            },
            &graph,
            &rho,
        );
    }

    let stats = ChainStats {
        accept_rate_corr: acc_c as f64 / cfg.n_iter as f64,
        accept_rate_graph: acc_g as f64 / cfg.n_iter as f64,
        ridge_events,
        non_pd_rejections: non_pd,
        likelihood: cfg.likelihood,
        n_post: cfg.n_post(),
    };
    Ok((trace, stats))
}

pub fn run_two_block_chain<T: Scalar>(data: &StandardizedDataset<T>, cfg: &McmcConfig) -> Result<ChainRun, McmcError> {
    cfg.validate()?;
    let posterior = CorrelationPosterior::new(data, cfg.likelihood, cfg.normalization.clone(), cfg.ridge.clone())?;
    log::info!(
        "chain: n={} p={} iters={} burn-in={} likelihood={:?} seed={}",
        data.n(),
        data.p(),
        cfg.n_iter,
        cfg.n_burnin,
        posterior.likelihood(),
        cfg.seed
    );
    let init = initial_correlation(data);
    let (trace, mut stats) = run_chain_with_target(&posterior, init, cfg)?;
    stats.likelihood = posterior.likelihood();
    let marginals = edge_marginal_matrix(&trace, cfg.n_burnin)?;
    Ok(ChainRun { trace, marginals, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn truncated_sampler_stays_in_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &mu in &[-0.99, -0.5, 0.0, 0.9, 0.999] {
            for _ in 0..1000 {
                let x = truncated_normal_inverse(mu, 0.3, -1.0, 1.0, rng.gen::<f64>());
                assert!((-1.0..=1.0).contains(&x));
            }
        }
        let x: f64 = truncated_normal_inverse(0.5, 0.05, 0.0, 1.0, 0.5);
        assert!((x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tiny_sd_keeps_current() {
        let s = SpdMatrix::new(Matrix::from_rows(&[vec![1.0f64, 0.3], vec![0.3, 1.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (prop, lr) = propose_correlation_block(&s, 1e-12, &mut rng);
        assert!((prop[(0, 1)] - 0.3).abs() < 1e-10);
        assert_eq!(lr, 0.0);
        assert_eq!(prop[(0, 0)], 1.0);
    }

    #[test]
    fn hastings_zero_at_origin() {
        let m0 = truncated_normal_log_mass(0.0, 0.2, -1.0, 1.0);
        let m1 = truncated_normal_log_mass(-0.0, 0.2, -1.0, 1.0);
        assert_eq!(m0, m1);
    }

    #[test]
    fn hastings_at_point_nine() {
        let sd = 0.3;
        let lz = |mu: f64| truncated_normal_log_mass(mu, sd, -1.0, 1.0);
        let cdf = |x: f64| 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2);
        let direct = |mu: f64| (cdf((1.0 - mu) / sd) - cdf((-1.0 - mu) / sd)).ln();
        for &x in &[0.5, 0.95, -0.2] {
            let h = lz(0.9) - lz(x);
            assert!(h != 0.0);
            assert!((h - (direct(0.9) - direct(x))).abs() < 1e-10);
        }
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let one =
            PartialCorrelationMatrix::from_matrix(Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]])).unwrap();
        let zero = PartialCorrelationMatrix::from_matrix(Matrix::<f64>::identity(2)).unwrap();
        let g = GraphParams::uniform(2, false, 0.5);
        for _ in 0..200 {
            assert!(propose_graph_block(&one, &g, 0.05, &mut rng).0.edges()[0]);
            assert!(!propose_graph_block(&zero, &g, 0.05, &mut rng).0.edges()[0]);
        }
    }

    #[test]
    fn bernoulli_half_is_symmetric() {
        let half =
            PartialCorrelationMatrix::from_matrix(Matrix::from_rows(&[vec![1.0f64, 0.5], vec![0.5, 1.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &start in &[false, true] {
            let g = GraphParams::uniform(2, start, 0.5);
            for _ in 0..50 {
                let (_, lr) = propose_graph_block(&half, &g, 1e-9, &mut rng);
                assert!(lr.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn edge_counts() {
        let mut trace = ChainTrace::with_capacity(2, 5);
        let r = PartialCorrelationMatrix::from_matrix(Matrix::<f64>::identity(2)).unwrap();
        for t in 0..5 {
            let g = GraphParams::uniform(2, t % 2 == 1, 0.5);
            trace.push(TraceRow { t, log_u: 0.0, accept_corr: false, accept_graph: false, sigma_hash: 0 }, &g, &r);
        }
        let nm = edge_marginal_matrix(&trace, 0).unwrap();
        assert_eq!(nm.get(0, 1), 0.5);
        assert_eq!(nm.get(1, 0), 0.5);
        assert_eq!(nm.get(0, 0), 0.0);
        assert!(matches!(edge_marginal_matrix(&trace, 4), Err(McmcError::EmptyPostBurnin { .. })));
    }

    #[test]
    fn graphical_model_threshold() {
        let mut values = Matrix::zeros(3, 3);
        values[(0, 1)] = 0.05;
        values[(1, 0)] = 0.05;
        let nm = EdgeMarginalMatrix { p: 3, n_post: 20, values };
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let gm = build_graphical_model(&nm, &labels, 0.05);
        assert_eq!(gm.edges.len(), 1);
        assert!(gm.has_edge("b", "a"));
        assert!(build_graphical_model(&nm, &labels, 1.01).edges.is_empty());
    }

    #[test]
    fn config_validation() {
        let bad = McmcConfig { n_iter: 10, n_burnin: 10, ..McmcConfig::default() };
        assert!(bad.validate().is_err());
        let strict = McmcConfig::default().plain_metropolis();
        assert!(!strict.corr_hastings && !strict.graph_hastings);
    }
}
