//! Single-shot SRGG over many nodes, built straight from a correlation matrix.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::PreRanked;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::srgg::{marginal_at_separation, RHO_CLAMP_TOL};

/// Above this many nodes the builder streams pairs instead of materializing marginals.
pub const DENSE_LIMIT: usize = 2000;

const ROW_BLOCK: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BignetError {
    #[error("correlation entry ({i},{j}) = {value} is invalid")]
    InvalidCorrelationEntry { i: usize, j: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate class structure: {0}")]
    DegenerateClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetEdge {
    pub i: usize,
    pub j: usize,
    pub marginal: f64,
}

/// Nodes keep their original ids; edges are `i < j`, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeNetwork {
    pub labels: Vec<String>,
    pub nodes: Vec<usize>,
    pub edges: Vec<NetEdge>,
    pub tau: f64,
}

impl LargeNetwork {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.labels.len()];
        for e in &self.edges {
            d[e.i] += 1;
            d[e.j] += 1;
        }
        d
    }

    pub fn average_degree(&self) -> f64 {
        if self.nodes.is_empty() {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.nodes.len() as f64
        }
    }

    /// `degree -> node count` over the retained nodes.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let d = self.degrees();
        let mut h = BTreeMap::new();
        for &v in &self.nodes {
            *h.entry(d[v]).or_insert(0) += 1;
        }
        h
    }
}

/// `m(g = 1 | s)`, the inclusion score of a pair.
#[inline]
pub fn pair_marginal<T: Scalar>(s: T) -> f64 {
    let a = s.abs().min(T::one());
    marginal_at_separation(T::one() - a).to_f64_lossy()
}

fn validate<T: Scalar>(corr: &Matrix<T>, labels: &[String]) -> Result<(), BignetError> {
    let p = corr.rows();
    if corr.cols() != p {
        return Err(BignetError::DimensionMismatch { expected: p, got: corr.cols() });
    }
    if labels.len() != p {
        return Err(BignetError::DimensionMismatch { expected: p, got: labels.len() });
    }
    let tol = T::of(RHO_CLAMP_TOL);
    for i in 0..p {
        let d = corr[(i, i)];
        if !((d - T::one()).abs() <= tol) {
            return Err(BignetError::InvalidCorrelationEntry { i, j: i, value: d.to_f64_lossy() });
        }
        for j in (i + 1)..p {
            let v = corr[(i, j)];
            if !(v.abs() <= T::one() + tol) || !((v - corr[(j, i)]).abs() <= tol) {
                return Err(BignetError::InvalidCorrelationEntry { i, j, value: v.to_f64_lossy() });
            }
        }
    }
    Ok(())
}

fn network(labels: &[String], edges: Vec<NetEdge>, tau: f64) -> LargeNetwork {
    LargeNetwork { labels: labels.to_vec(), nodes: (0..labels.len()).collect(), edges, tau }
}

/// Materializes the `p×p` marginal matrix, then thresholds it.
pub fn build_dense<T: Scalar>(corr: &Matrix<T>, tau: f64, labels: &[String]) -> Result<LargeNetwork, BignetError> {
    validate(corr, labels)?;
    let p = corr.rows();
    let mut marg = Matrix::<f64>::zeros(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            let m = pair_marginal(corr[(i, j)]);
            marg[(i, j)] = m;
            marg[(j, i)] = m;
        }
    }
    let mut edges = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            if marg[(i, j)] >= tau {
                edges.push(NetEdge { i, j, marginal: marg[(i, j)] });
            }
        }
    }
    Ok(network(labels, edges, tau))
}

/// Evaluates pairs in parallel row blocks without storing marginals.
pub fn build_streaming<T: Scalar>(corr: &Matrix<T>, tau: f64, labels: &[String]) -> Result<LargeNetwork, BignetError> {
    validate(corr, labels)?;
    let p = corr.rows();
    let starts: Vec<usize> = (0..p).step_by(ROW_BLOCK).collect();
    let blocks: Vec<Vec<NetEdge>> = starts
        .par_iter()
        .map(|&b| {
            let mut out = Vec::new();
            for i in b..(b + ROW_BLOCK).min(p) {
                for j in (i + 1)..p {
                    let m = pair_marginal(corr[(i, j)]);
                    if m >= tau {
                        out.push(NetEdge { i, j, marginal: m });
                    }
                }
            }
            out
        })
        .collect();
    Ok(network(labels, blocks.into_iter().flatten().collect(), tau))
}

pub fn build_large_network<T: Scalar>(
    corr: &Matrix<T>,
    tau: f64,
    labels: &[String],
) -> Result<LargeNetwork, BignetError> {
    if corr.rows() > DENSE_LIMIT {
        build_streaming(corr, tau, labels)
    } else {
        build_dense(corr, tau, labels)
    }
}

/// Streams Spearman correlations straight from pre-ranked rows.
pub fn build_from_ranked<T: Scalar>(
    ranked: &PreRanked<T>,
    tau: f64,
    labels: &[String],
) -> Result<LargeNetwork, BignetError> {
    if labels.len() != ranked.count() {
        return Err(BignetError::DimensionMismatch { expected: ranked.count(), got: labels.len() });
    }
    let edges = ranked
        .pairs_filter_map(|_, _, s| {
            let m = pair_marginal(s);
            (m >= tau).then_some(m)
        })
        .into_iter()
        .map(|(i, j, marginal)| NetEdge { i, j, marginal })
        .collect();
    Ok(network(labels, edges, tau))
}

pub fn prune_zero_degree(net: &LargeNetwork) -> LargeNetwork {
    let d = net.degrees();
    LargeNetwork {
        labels: net.labels.clone(),
        nodes: net.nodes.iter().copied().filter(|&v| d[v] > 0).collect(),
        edges: net.edges.clone(),
        tau: net.tau,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class: String,
    pub members: usize,
    pub intra_variance: f64,
    pub inter_variance: f64,
    /// `intra / inter`, or 0 when the intra-class variance is 0.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub classes: Vec<ClassSummary>,
    pub classified_nodes: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sumsq: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sumsq += v * v;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sumsq += o.sumsq;
    }

    fn variance(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        (self.sumsq / n - mean * mean).max(0.0)
    }
}

/// Per-class variance of pairwise similarities within the class, over the
/// variance of similarities between the class and every other classified node.
///
/// `classes[v]` is `None` for unclassified nodes, which are ignored.
pub fn class_variance_ratio<F>(
    n_nodes: usize,
    similarity: F,
    classes: &[Option<String>],
) -> Result<ClassStats, BignetError>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if classes.len() != n_nodes {
        return Err(BignetError::DimensionMismatch { expected: n_nodes, got: classes.len() });
    }
    let mut names: Vec<String> = classes.iter().flatten().cloned().collect();
    names.sort();
    names.dedup();
    if names.len() < 2 {
        return Err(BignetError::DegenerateClass(format!("need at least 2 classes, found {}", names.len())));
    }
    let idx: Vec<Option<usize>> =
        classes.iter().map(|c| c.as_ref().map(|s| names.binary_search(s).expect("collected above"))).collect();
    let k = names.len();
    let mut members = vec![0usize; k];
    for c in idx.iter().flatten() {
        members[*c] += 1;
    }
    if let Some(c) = (0..k).find(|&c| members[c] < 2) {
        return Err(BignetError::DegenerateClass(format!("class {} has {} member(s)", names[c], members[c])));
    }

    let starts: Vec<usize> = (0..n_nodes).step_by(ROW_BLOCK).collect();
    let partials: Vec<(Vec<Moments>, Vec<Moments>)> = starts
        .par_iter()
        .map(|&b| {
            let mut intra = vec![Moments::default(); k];
            let mut inter = vec![Moments::default(); k];
            for i in b..(b + ROW_BLOCK).min(n_nodes) {
                let Some(ci) = idx[i] else { continue };
                for j in (i + 1)..n_nodes {
                    let Some(cj) = idx[j] else { continue };
                    let s = similarity(i, j);
                    if ci == cj {
                        intra[ci].push(s);
                    } else {
                        inter[ci].push(s);
                        inter[cj].push(s);
                    }
                }
            }
            (intra, inter)
        })
        .collect();
    let mut intra = vec![Moments::default(); k];
    let mut inter = vec![Moments::default(); k];
    for (a, b) in &partials {
        for c in 0..k {
            intra[c].merge(&a[c]);
            inter[c].merge(&b[c]);
        }
    }
    let mut out = Vec::with_capacity(k);
    for c in 0..k {
        let (vi, vo) = (intra[c].variance(), inter[c].variance());
        let ratio = if vi == 0.0 {
            0.0
        } else if vo > 0.0 {
            vi / vo
        } else {
            return Err(BignetError::DegenerateClass(format!("class {} has zero inter-class variance", names[c])));
        };
        out.push(ClassSummary {
            class: names[c].clone(),
            members: members[c],
            intra_variance: vi,
            inter_variance: vo,
            ratio,
        });
    }
    Ok(ClassStats { classes: out, classified_nodes: members.iter().sum() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(p: usize) -> Vec<String> {
        (0..p).map(|i| format!("n{i}")).collect()
    }

    #[test]
    fn complete_and_empty() {
        let ones = Matrix::from_fn(5, 5, |_, _| 1.0f64);
        let net = build_large_network(&ones, 0.79, &labels(5)).unwrap();
        assert_eq!(net.edges.len(), 10);
        let zeros = Matrix::<f64>::identity(5);
        assert!(build_large_network(&zeros, 0.2, &labels(5)).unwrap().edges.is_empty());
        assert_eq!(build_large_network(&zeros, 0.0, &labels(5)).unwrap().edges.len(), 10);
    }

    #[test]
    fn invalid_entries() {
        let mut m = Matrix::<f64>::identity(3);
        m[(0, 1)] = 1.5;
        m[(1, 0)] = 1.5;
        assert!(matches!(
            build_dense(&m, 0.1, &labels(3)),
            Err(BignetError::InvalidCorrelationEntry { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn prune_star() {
        let mut m = Matrix::<f64>::identity(8);
        for j in 1..5 {
            m[(0, j)] = 1.0;
            m[(j, 0)] = 1.0;
        }
        let net = build_dense(&m, 0.5, &labels(8)).unwrap();
        let pr = prune_zero_degree(&net);
        assert_eq!(pr.nodes.len(), 5);
        assert_eq!(pr.edges, net.edges);
        assert!((pr.average_degree() - 2.0 * 4.0 / 5.0).abs() < 1e-15);
        let empty = build_dense(&Matrix::<f64>::identity(4), 0.5, &labels(4)).unwrap();
        assert!(prune_zero_degree(&empty).nodes.is_empty());
        assert_eq!(pr.degree_histogram().get(&1), Some(&4));
    }

    #[test]
    fn separated_blocks_ratio_zero() {
        let cls: Vec<Option<String>> = (0..6).map(|i| Some(if i < 3 { "a" } else { "b" }.to_string())).collect();
        let sim = |i: usize, j: usize| if (i < 3) == (j < 3) { 1.0 } else { 0.0 };
        let st = class_variance_ratio(6, sim, &cls).unwrap();
        assert!(st.classes.iter().all(|c| c.ratio == 0.0 && c.intra_variance == 0.0));
        assert_eq!(st.classified_nodes, 6);
        let one: Vec<Option<String>> = vec![Some("a".into()); 6];
        assert!(matches!(class_variance_ratio(6, sim, &one), Err(BignetError::DegenerateClass(_))));
    }
}
