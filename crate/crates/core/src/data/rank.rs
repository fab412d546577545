use rayon::prelude::*;

use super::DataError;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Ranks 1..=n with ties sharing their average rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector<T> {
    ranks: Vec<T>,
}

impl<T: Scalar> RankVector<T> {
    pub fn from_values(values: &[T]) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let mut ranks = vec![T::zero(); n];
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && values[order[end]] == values[order[start]] {
                end += 1;
            }
            // positions start..end hold ranks start+1..=end
            let avg = T::of((start + end + 1) as f64 * 0.5);
            for &k in &order[start..end] {
                ranks[k] = avg;
            }
            start = end;
        }
        Self { ranks }
    }

    #[inline]
    pub fn ranks(&self) -> &[T] {
        &self.ranks
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Centered and scaled to unit Euclidean norm; `None` when all ranks tie.
    fn normalized(&self) -> Option<Vec<T>> {
        let mean = T::of((self.len() + 1) as f64 * 0.5);
        let mut v: Vec<T> = self.ranks.iter().map(|&r| r - mean).collect();
        let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        Some(v)
    }
}

pub fn spearman_rank_correlation<T: Scalar>(a: &[T], b: &[T]) -> Result<T, DataError> {
    if a.len() != b.len() {
        return Err(DataError::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.len() < 2 {
        return Err(DataError::TooSmall { what: "observations", min: 2, found: a.len() });
    }
    let ra = RankVector::from_values(a).normalized().ok_or(DataError::DegenerateRanks)?;
    let rb = RankVector::from_values(b).normalized().ok_or(DataError::DegenerateRanks)?;
    Ok(clamp_unit(dot(&ra, &rb)))
}

#[inline]
fn clamp_unit<T: Scalar>(r: T) -> T {
    r.max(-T::one()).min(T::one())
}

const LANES: usize = 8;

#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); LANES];
    let ca = a.chunks_exact(LANES);
    let cb = b.chunks_exact(LANES);
    let (ta, tb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..LANES {
            acc[l] += x[l] * y[l];
        }
    }
    let mut s = T::zero();
    for (x, y) in ta.iter().zip(tb) {
        s += *x * *y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + s
}

/// Two rows of `a` against one `b`, each result bit-identical to [`dot`].
#[inline]
fn dot2<T: Scalar>(a0: &[T], a1: &[T], b: &[T]) -> (T, T) {
    let mut u = [T::zero(); LANES];
    let mut v = [T::zero(); LANES];
    let full = b.len() / LANES * LANES;
    let mut k = 0;
    while k < full {
        let (x0, x1, y) = (&a0[k..k + LANES], &a1[k..k + LANES], &b[k..k + LANES]);
        for l in 0..LANES {
            u[l] += x0[l] * y[l];
            v[l] += x1[l] * y[l];
        }
        k += LANES;
    }
    let (mut su, mut sv) = (T::zero(), T::zero());
    for k in full..b.len() {
        su += a0[k] * b[k];
        sv += a1[k] * b[k];
    }
    (
        ((u[0] + u[4]) + (u[1] + u[5])) + ((u[2] + u[6]) + (u[3] + u[7])) + su,
        ((v[0] + v[4]) + (v[1] + v[5])) + ((v[2] + v[6]) + (v[3] + v[7])) + sv,
    )
}

/// Rows of a score matrix, each ranked once and normalized so a dot product
/// of two rows is their Spearman correlation.
#[derive(Debug, Clone)]
pub struct PreRanked<T> {
    len: usize,
    rows: Vec<T>,
    count: usize,
}

pub const PAIR_TILE: usize = 64;

impl<T: Scalar> PreRanked<T> {
    /// Ranks each row of `m` (entities × observations).
    pub fn from_rows(m: &Matrix<T>) -> Result<Self, DataError> {
        let len = m.cols();
        if len < 2 {
            return Err(DataError::TooSmall { what: "observations", min: 2, found: len });
        }
        let ranked: Result<Vec<Vec<T>>, DataError> = (0..m.rows())
            .into_par_iter()
            .map(|i| RankVector::from_values(m.row(i)).normalized().ok_or(DataError::DegenerateRanks))
            .collect();
        let ranked = ranked?;
        let mut rows = Vec::with_capacity(m.rows() * len);
        for r in &ranked {
            rows.extend_from_slice(r);
        }
        Ok(Self { len, rows, count: m.rows() })
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    fn row(&self, i: usize) -> &[T] {
        &self.rows[i * self.len..(i + 1) * self.len]
    }

    pub fn correlation(&self, i: usize, j: usize) -> T {
        if i == j {
            T::one()
        } else {
            clamp_unit(dot(self.row(i), self.row(j)))
        }
    }

    /// Visits every unordered pair `i < j` in cache tiles, keeping `f`'s
    /// `Some` results sorted by `(i, j)`. Values do not depend on tiling or
    /// thread count.
    pub fn pairs_filter_map<R, F>(&self, f: F) -> Vec<(usize, usize, R)>
    where
        R: Send,
        F: Fn(usize, usize, T) -> Option<R> + Sync,
    {
        let p = self.count;
        let blocks: Vec<usize> = (0..p).step_by(PAIR_TILE).collect();
        let per_block: Vec<Vec<(usize, usize, R)>> = blocks
            .par_iter()
            .map(|&bi| {
                let iend = (bi + PAIR_TILE).min(p);
                let mut out = Vec::new();
                let mut bj = bi;
                while bj < p {
                    let jend = (bj + PAIR_TILE).min(p);
                    let mut i = bi;
                    while i < iend {
                        if i + 1 < iend {
                            let (a0, a1) = (self.row(i), self.row(i + 1));
                            for j in bj.max(i + 1)..jend {
                                let (r0, r1) = dot2(a0, a1, self.row(j));
                                if j > i {
                                    if let Some(v) = f(i, j, clamp_unit(r0)) {
                                        out.push((i, j, v));
                                    }
                                }
                                if j > i + 1 {
                                    if let Some(v) = f(i + 1, j, clamp_unit(r1)) {
                                        out.push((i + 1, j, v));
                                    }
                                }
                            }
                            i += 2;
                        } else {
                            let a0 = self.row(i);
                            for j in bj.max(i + 1)..jend {
                                if let Some(v) = f(i, j, clamp_unit(dot(a0, self.row(j)))) {
                                    out.push((i, j, v));
                                }
                            }
                            i += 1;
                        }
                    }
                    bj = jend;
                }
                out.sort_by_key(|&(i, j, _)| (i, j));
                out
            })
            .collect();
        per_block.into_iter().flatten().collect()
    }

    pub fn correlation_matrix(&self) -> Matrix<T> {
        let p = self.count;
        let mut m = Matrix::identity(p);
        for (i, j, r) in self.pairs_filter_map(|_, _, r| Some(r)) {
            m[(i, j)] = r;
            m[(j, i)] = r;
        }
        m
    }
}
