//! Connection function, node distance and point-process view of the SRGG.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{cholesky_with_ridge, invert_spd, LinalgError, Matrix, RidgeConfig, SpdMatrix};
use crate::scalar::Scalar;

/// Global constant of the connection function.
pub const K: f64 = 1.0;

/// Slack allowed on `|ρ| ≤ 1` before it is treated as an error.
pub const RHO_CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SrggError {
    #[error("|rho| = {0} lies outside [0, 1]")]
    AbsRhoOutOfRange(f64),
    #[error("correlation matrix is singular: {0}")]
    SingularCorrelation(#[from] LinalgError),
    #[error("partial correlation ({i},{j}) = {value} outside [-1, 1]")]
    PartialOutOfRange { i: usize, j: usize, value: f64 },
    #[error("sigma must be positive, got {0}")]
    NonpositiveSigma(f64),
    #[error("tau must lie in [0, 1], got {0}")]
    TauOutOfRange(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeInput<T> {
    g: bool,
    abs_rho: T,
}

impl<T: Scalar> EdgeInput<T> {
    /// Accepts a signed or absolute correlation; magnitudes within
    /// `RHO_CLAMP_TOL` of 1 are clamped.
    pub fn new(g: bool, rho: T) -> Result<Self, SrggError> {
        Ok(Self { g, abs_rho: clamp_abs_rho(rho)? })
    }

    #[inline]
    pub fn g(&self) -> bool {
        self.g
    }

    #[inline]
    pub fn abs_rho(&self) -> T {
        self.abs_rho
    }

    /// `|g - |ρ||`.
    #[inline]
    pub fn separation(&self) -> T {
        let g = if self.g { T::one() } else { T::zero() };
        (g - self.abs_rho).abs()
    }
}

pub fn clamp_abs_rho<T: Scalar>(rho: T) -> Result<T, SrggError> {
    let a = rho.abs();
    if !(a <= T::one() + T::of(RHO_CLAMP_TOL)) {
        return Err(SrggError::AbsRhoOutOfRange(a.to_f64_lossy()));
    }
    Ok(a.min(T::one()))
}

/// `m(d) = K [√(2/π) e^{-d²/2} - |d| erfc(|d|/√2)]`.
#[inline]
pub fn marginal_at_separation<T: Scalar>(d: T) -> T {
    let d = d.abs();
    let c = T::FRAC_2_SQRT_PI() * T::FRAC_1_SQRT_2();
    T::of(K) * (c * (-d * d * T::of(0.5)).exp() - d * (d * T::FRAC_1_SQRT_2()).erfc())
}

#[inline]
pub fn edge_marginal<T: Scalar>(e: &EdgeInput<T>) -> T {
    marginal_at_separation(e.separation())
}

/// `√(2/π) e^{-d²/2} + |d| erf(|d|/√2)`, which is `m(d) + |d|`.
#[inline]
pub fn distance_at_separation<T: Scalar>(d: T) -> T {
    let d = d.abs();
    let c = T::FRAC_2_SQRT_PI() * T::FRAC_1_SQRT_2();
    c * (-d * d * T::of(0.5)).exp() + d * (d * T::FRAC_1_SQRT_2()).erf()
}

#[inline]
pub fn node_distance<T: Scalar>(e: &EdgeInput<T>) -> T {
    distance_at_separation(e.separation())
}

/// Expected `|X_i - X_j|` for independent `N(μ_i, σ²)`, `N(μ_j, σ²)`.
pub fn normal_pair_distance<T: Scalar>(mu_i: T, mu_j: T, sigma: T) -> Result<T, SrggError> {
    if !(sigma > T::zero()) {
        return Err(SrggError::NonpositiveSigma(sigma.to_f64_lossy()));
    }
    let dm = (mu_i - mu_j).abs();
    let two_s = sigma + sigma;
    Ok(two_s * T::FRAC_2_SQRT_PI() * T::of(0.5) * (-(dm * dm) / (two_s * two_s)).exp() + dm * (dm / two_s).erf())
}

/// Partial correlations `ρ_ij = -ψ_ij / √(ψ_ii ψ_jj)` with unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialCorrelationMatrix<T> {
    m: Matrix<T>,
}

impl<T: Scalar> PartialCorrelationMatrix<T> {
    pub fn from_matrix(m: Matrix<T>) -> Result<Self, SrggError> {
        if m.rows() != m.cols() {
            return Err(SrggError::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        Ok(Self { m })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[(i, j)]
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }
}

pub fn partial_correlation<T: Scalar>(
    sigma_c: &SpdMatrix<T>,
    ridge: &RidgeConfig,
) -> Result<PartialCorrelationMatrix<T>, SrggError> {
    let chol = cholesky_with_ridge(sigma_c, ridge)?;
    let psi = invert_spd(&chol)?;
    precision_to_partial(psi.matrix())
}

pub fn precision_to_partial<T: Scalar>(psi: &Matrix<T>) -> Result<PartialCorrelationMatrix<T>, SrggError> {
    let p = psi.rows();
    let mut r = Matrix::identity(p);
    let tol = T::of(RHO_CLAMP_TOL);
    for i in 0..p {
        for j in (i + 1)..p {
            let v = -psi[(i, j)] / (psi[(i, i)] * psi[(j, j)]).sqrt();
            if !(v.abs() <= T::one() + tol) {
                return Err(SrggError::PartialOutOfRange { i, j, value: v.to_f64_lossy() });
            }
            let v = v.max(-T::one()).min(T::one());
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    Ok(PartialCorrelationMatrix { m: r })
}

/// Undirected edges `(i, j)`, `i < j`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    pub p: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Edge `(i, j)` kept iff `marginals[i][j] ≥ τ`.
pub fn threshold_edge_set<T: Scalar>(marginals: &Matrix<T>, tau: T) -> EdgeSet {
    let p = marginals.rows();
    let mut edges = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            if marginals[(i, j)] >= tau {
                edges.push((i, j));
            }
        }
    }
    EdgeSet { p, edges }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointProcessParams<T> {
    pub means: Vec<T>,
    pub sigma: T,
    pub tau: T,
}

impl<T: Scalar> PointProcessParams<T> {
    pub fn new(means: Vec<T>, sigma: T, tau: T) -> Result<Self, SrggError> {
        if !(sigma > T::zero()) {
            return Err(SrggError::NonpositiveSigma(sigma.to_f64_lossy()));
        }
        if !(tau >= T::zero() && tau <= T::one()) {
            return Err(SrggError::TauOutOfRange(tau.to_f64_lossy()));
        }
        Ok(Self { means, sigma, tau })
    }

    /// SRGG correspondence: `σ = 1/√2`.
    pub fn srgg(means: Vec<T>, tau: T) -> Result<Self, SrggError> {
        Self::new(means, T::FRAC_1_SQRT_2(), tau)
    }

    fn density(&self, i: usize, x: T) -> T {
        let z = (x - self.means[i]) / self.sigma;
        (-z * z * T::of(0.5)).exp() / (self.sigma * (T::TAU()).sqrt())
    }
}

/// `Q = Σ_j H(m_ij - τ)` with `H(0) = 1`.
pub fn heaviside_count<T: Scalar>(row: &[T], tau: T) -> usize {
    row.iter().filter(|&&m| m >= tau).count()
}

/// `λ_i(x) = f(x; μ_i, σ) · Q`.
pub fn poisson_intensity<T: Scalar>(params: &PointProcessParams<T>, i: usize, row: &[T], x: T) -> T {
    params.density(i, x) * T::of(heaviside_count(row, params.tau) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub node: usize,
    pub trials: usize,
    pub q: usize,
    pub radius: f64,
    pub empirical_mean: f64,
    pub predicted_mean: f64,
    pub std_error: f64,
    pub z: f64,
}

/// Monte-Carlo check of `E[N(a)] = f πa² Q` for node `i`.
///
/// Each trial places node `i` at `x ~ N(μ_i, σ²)`. Every neighbour passing
/// the threshold contributes a planar Poisson process of intensity `f(x)`,
/// drawn on the square `[-a, a]²` and counted inside the disc of radius `a`.
/// `f` in the prediction is its expectation under placement, `1/(2σ√π)`.
pub fn validate_point_process(
    params: &PointProcessParams<f64>,
    i: usize,
    marginals: &Matrix<f64>,
    a: f64,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport, SrggError> {
    let p = marginals.rows();
    if params.means.len() != p || i >= p {
        return Err(SrggError::DimensionMismatch { expected: p, got: params.means.len() });
    }
    let q = heaviside_count(marginals.row(i), params.tau);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let place = Normal::new(params.means[i], params.sigma).expect("sigma validated");
    let (mut sum, mut sumsq) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let x = place.sample(&mut rng);
        let f = params.density(i, x);
        let square_mean = f * 4.0 * a * a;
        let mut count = 0u64;
        if q > 0 && square_mean > 0.0 {
            let pois = Poisson::new(square_mean).expect("positive mean");
            for _ in 0..q {
                let k = pois.sample(&mut rng) as u64;
                for _ in 0..k {
                    let (u, v): (f64, f64) = (rng.gen_range(-a..a), rng.gen_range(-a..a));
                    if u * u + v * v <= a * a {
                        count += 1;
                    }
                }
            }
        }
        let c = count as f64;
        sum += c;
        sumsq += c * c;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = if trials > 1 { (sumsq - t * mean * mean).max(0.0) / (t - 1.0) } else { 0.0 };
    let se = (var / t).sqrt();
    let f_bar = 1.0 / (2.0 * params.sigma * std::f64::consts::PI.sqrt());
    let predicted = f_bar * std::f64::consts::PI * a * a * q as f64;
    let z = if se > 0.0 {
        (mean - predicted) / se
    } else if mean == predicted {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(SimulationReport {
        node: i,
        trials,
        q,
        radius: a,
        empirical_mean: mean,
        predicted_mean: predicted,
        std_error: se,
        z,
    })
}
