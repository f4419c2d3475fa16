//! The Double Description method.
//!
//! A [`DdState`] is one double-description pair: the processed rows `M_i`,
//! the complete extremal ray list `R_i` of `{x : M_i x ≥ 0}`, and the ray–row
//! incidence matrix stored twice, once per ray (`r̂`, bits over processed
//! rows) and once per row (`â`, bits over rays). Both are flat word arrays.

mod adjacency;
mod harvest;
mod run;

pub use adjacency::{
    algebraic_adjacent, combinatorial_adjacent, halfgraph_adjacent, AdjacencyAudit, AdjacencyTest, HalfGraphCache,
};
pub use harvest::{harvest_step, HarvestOptions, HarvestReport};
pub use run::{run_dd, run_dd_with, DdOptions, DdRun, RunStatus, TrajectoryPoint};

use rayon::prelude::*;

use crate::bits::{BitString, WORD_BITS};
use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::linalg::{self, RowEchelon};
use crate::model::Cone;
use crate::ray::Ray;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[derive(Clone, Debug)]
pub struct DdState<N> {
    dim: usize,
    rows: Vec<Vec<N>>,
    rays: Vec<Ray<N>>,
    /// `r̂` for ray `k` lives at `ray_inc[k*ray_stride..]`.
    ray_inc: Vec<u64>,
    ray_stride: usize,
    /// `â` for row `i` lives at `row_inc[i*row_stride..]`.
    row_inc: Vec<u64>,
    row_stride: usize,
}

/// Rays partitioned by the sign of `a·r`.
#[derive(Clone, Debug)]
pub struct Split<N> {
    pub values: Vec<N>,
    pub positive: Vec<usize>,
    pub zero: Vec<usize>,
    pub negative: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    /// Pairs surviving the `|r̂₁ ∩ r̂₂| ≥ d-2` precheck.
    pub candidates: usize,
    pub adjacent: usize,
    pub new_rays: usize,
}

impl<N: Int> DdState<N> {
    /// Assembles a state from rows and rays, computing the incidence by exact
    /// dot products. Every ray must satisfy every row.
    pub fn from_pair(dim: usize, rows: Vec<Vec<N>>, rays: Vec<Ray<N>>) -> Result<Self> {
        for r in &rows {
            if r.len() != dim {
                return Err(Error::Dimension { expected: dim, found: r.len() });
            }
        }
        let mut entries = Vec::with_capacity(rays.len());
        for ray in rays {
            if ray.dim() != dim {
                return Err(Error::Dimension { expected: dim, found: ray.dim() });
            }
            let mut inc = BitString::zeros(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let v = int::dot(row, ray.coords())?;
                if v.is_negative() {
                    return Err(Error::Infeasible { row: i });
                }
                if v.is_zero() {
                    inc.set(i);
                }
            }
            entries.push((ray, inc.words().to_vec()));
        }
        Ok(Self::assemble(dim, rows, entries))
    }

    /// The initial pair: the first `dim` linearly independent rows met while
    /// scanning `scan` (dependent rows are skipped) and the simplicial cone's
    /// rays. Returns the state and the chosen row indices into `cone`.
    pub fn initial(cone: &Cone<N>, scan: impl IntoIterator<Item = usize>) -> Result<(Self, Vec<usize>)> {
        let d = cone.dim();
        let mut ech = RowEchelon::new(d);
        let mut chosen = Vec::with_capacity(d);
        for i in scan {
            if ech.insert(cone.row(i))? {
                chosen.push(i);
                if chosen.len() == d {
                    break;
                }
            }
        }
        if chosen.len() < d {
            return Err(Error::Rank { expected: d, found: chosen.len() });
        }
        let rows: Vec<Vec<N>> = chosen.iter().map(|&i| cone.row(i).to_vec()).collect();
        let generators = linalg::simplicial_rays(&rows)?;
        let entries = generators
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                let mut inc = BitString::ones(d);
                inc.clear(k);
                (Ray::from_primitive(g), inc.words().to_vec())
            })
            .collect();
        Ok((Self::assemble(d, rows, entries), chosen))
    }

    /// Sorts rays, drops duplicates and rebuilds both incidence layouts.
    fn assemble(dim: usize, rows: Vec<Vec<N>>, mut entries: Vec<(Ray<N>, Vec<u64>)>) -> Self {
        entries.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        let ray_stride = words_for(rows.len());
        let row_stride = words_for(entries.len());
        let mut ray_inc = Vec::with_capacity(entries.len() * ray_stride);
        let mut row_inc = vec![0u64; rows.len() * row_stride];
        let mut rays = Vec::with_capacity(entries.len());
        for (k, (ray, inc)) in entries.into_iter().enumerate() {
            debug_assert_eq!(inc.len(), ray_stride);
            for (w, &word) in inc.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let i = w * WORD_BITS + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    row_inc[i * row_stride + k / WORD_BITS] |= 1 << (k % WORD_BITS);
                }
            }
            ray_inc.extend_from_slice(&inc);
            rays.push(ray);
        }
        DdState {
            dim,
            rows,
            rays,
            ray_inc,
            ray_stride,
            row_inc,
            row_stride,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rows(&self) -> &[Vec<N>] {
        &self.rows
    }

    #[inline]
    pub fn rays(&self) -> &[Ray<N>] {
        &self.rays
    }

    pub fn into_rays(self) -> Vec<Ray<N>> {
        self.rays
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    #[inline]
    pub(crate) fn ray_words(&self, k: usize) -> &[u64] {
        &self.ray_inc[k * self.ray_stride..(k + 1) * self.ray_stride]
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.row_inc[i * self.row_stride..(i + 1) * self.row_stride]
    }

    /// `r̂` of ray `k`: bit `i` set iff processed row `i` is tight.
    pub fn ray_incidence(&self, k: usize) -> BitString {
        BitString::from_bools((0..self.rows.len()).map(|i| self.ray_words(k)[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1))
    }

    /// `â` of processed row `i`: bit `k` set iff ray `k` is on the row.
    pub fn row_incidence(&self, i: usize) -> BitString {
        BitString::from_bools((0..self.rays.len()).map(|k| self.row_words(i)[k / WORD_BITS] >> (k % WORD_BITS) & 1 == 1))
    }

    pub fn weight(&self, k: usize) -> usize {
        self.ray_words(k).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|r̂_p ∩ r̂_q|`.
    #[inline]
    pub fn common_weight(&self, p: usize, q: usize) -> usize {
        and_count(self.ray_words(p), self.ray_words(q))
    }

    /// Indices of processed rows tight at both rays.
    pub fn common_rows(&self, p: usize, q: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (a, b)) in self.ray_words(p).iter().zip(self.ray_words(q)).enumerate() {
            let mut bits = a & b;
            while bits != 0 {
                out.push(w * WORD_BITS + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn split(&self, a: &[N]) -> Result<Split<N>> {
        if a.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: a.len() });
        }
        let values: Vec<N> = self.rays.par_iter().map(|r| int::dot(a, r.coords())).collect::<Result<_>>()?;
        let mut split = Split {
            values: Vec::new(),
            positive: Vec::new(),
            zero: Vec::new(),
            negative: Vec::new(),
        };
        for (k, v) in values.iter().enumerate() {
            if v.is_positive() {
                split.positive.push(k);
            } else if v.is_negative() {
                split.negative.push(k);
            } else {
                split.zero.push(k);
            }
        }
        split.values = values;
        Ok(split)
    }

    /// Adds row `a`: keeps positive and zero rays and intersects the row's
    /// hyperplane with the 2-face spanned by every adjacent positive/negative
    /// pair.
    pub fn step(&self, a: &[N], test: AdjacencyTest) -> Result<(DdState<N>, StepStats)> {
        let split = self.split(a)?;
        let mut stats = StepStats {
            positive: split.positive.len(),
            zero: split.zero.len(),
            negative: split.negative.len(),
            ..StepStats::default()
        };
        let new_stride = words_for(self.rows.len() + 1);
        let new_bit = self.rows.len();
        let extend = |words: &[u64], bit: bool| -> Vec<u64> {
            let mut v = words.to_vec();
            v.resize(new_stride, 0);
            if bit {
                v[new_bit / WORD_BITS] |= 1 << (new_bit % WORD_BITS);
            }
            v
        };

        let produced: Vec<(Vec<(Ray<N>, Vec<u64>)>, usize, usize)> = split
            .positive
            .par_iter()
            .map(|&p| -> Result<_> {
                let mut cache = HalfGraphCache::default();
                let mut out = Vec::new();
                let mut candidates = 0;
                for &q in &split.negative {
                    let adjacent = match test {
                        AdjacencyTest::HalfGraph => {
                            // ĝ(p)[q] is exactly this precheck; building ĝ(p)
                            // is deferred until some pair needs it.
                            if self.common_weight(p, q) + 2 < self.dim {
                                continue;
                            }
                            candidates += 1;
                            cache.prepare(self, p);
                            cache.test(self, p, q)
                        }
                        AdjacencyTest::Combinatorial => {
                            if self.common_weight(p, q) + 2 < self.dim {
                                continue;
                            }
                            candidates += 1;
                            combinatorial_adjacent(self, p, q)
                        }
                        AdjacencyTest::Algebraic => {
                            if self.common_weight(p, q) + 2 < self.dim {
                                continue;
                            }
                            candidates += 1;
                            algebraic_adjacent(self, p, q)?
                        }
                    };
                    if adjacent {
                        let coords = combine(&split.values[p], self.rays[p].coords(), &split.values[q], self.rays[q].coords())?;
                        let inc: Vec<u64> = self.ray_words(p).iter().zip(self.ray_words(q)).map(|(x, y)| x & y).collect();
                        out.push((Ray::from_primitive(coords), extend(&inc, true)));
                    }
                }
                let n_adj = out.len();
                Ok((out, candidates, n_adj))
            })
            .collect::<Result<_>>()?;

        let mut entries = Vec::with_capacity(split.positive.len() + split.zero.len());
        for &k in &split.positive {
            entries.push((self.rays[k].clone(), extend(self.ray_words(k), false)));
        }
        for &k in &split.zero {
            entries.push((self.rays[k].clone(), extend(self.ray_words(k), true)));
        }
        for (out, candidates, adjacent) in produced {
            stats.candidates += candidates;
            stats.adjacent += adjacent;
            stats.new_rays += out.len();
            entries.extend(out);
        }
        let mut rows = self.rows.clone();
        rows.push(a.to_vec());
        Ok((Self::assemble(self.dim, rows, entries), stats))
    }
}

/// `(a·r₁)·r₂ − (a·r₂)·r₁` reduced to a primitive vector, given
/// `v1 = a·r₁ > 0 > v2 = a·r₂`.
fn combine<N: Int>(v1: &N, r1: &[N], v2: &N, r2: &[N]) -> Result<Vec<N>> {
    let mut out = Vec::with_capacity(r1.len());
    for (x1, x2) in r1.iter().zip(r2) {
        out.push(int::cross(v1, x2, v2, x1)?);
    }
    int::reduce_by_gcd(&mut out)?;
    Ok(out)
}

/// The ray where the conic hull of `r1` (positive side of `a`) and `r2`
/// (negative side) meets the hyperplane `a·x = 0`.
pub fn conic_intersection<N: Int>(r1: &Ray<N>, r2: &Ray<N>, a: &[N]) -> Result<Ray<N>> {
    let v1 = int::dot(a, r1.coords())?;
    let v2 = int::dot(a, r2.coords())?;
    if !v1.is_positive() || !v2.is_negative() {
        return Err(Error::Infeasible { row: 0 });
    }
    Ok(Ray::from_primitive(combine(&v1, r1.coords(), &v2, r2.coords())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_intersection_2d() {
        let r1 = Ray::<i128>::new(vec![1, 0]).unwrap();
        let r2 = Ray::<i128>::new(vec![0, 1]).unwrap();
        let r = conic_intersection(&r1, &r2, &[1, -1]).unwrap();
        assert_eq!(r.coords(), &[1, 1]);
        assert!(conic_intersection(&r2, &r1, &[1, -1]).is_err());
    }

    #[test]
    fn square_cone_from_simplex() {
        // Cone over a square: x±y ≥ 0 style, 3-d.
        let rows: Vec<Vec<i128>> = vec![vec![1, 1, 0], vec![1, -1, 0], vec![1, 0, 1], vec![1, 0, -1]];
        let cone = Cone::new(3, rows.clone()).unwrap();
        let (state, chosen) = DdState::initial(&cone, 0..4).unwrap();
        assert_eq!(chosen, vec![0, 1, 2]);
        assert_eq!(state.len(), 3);
        for k in 0..3 {
            assert_eq!(state.weight(k), 2);
        }
        let (next, stats) = state.step(&rows[3], AdjacencyTest::HalfGraph).unwrap();
        assert_eq!(next.len(), 4);
        assert_eq!((stats.positive, stats.negative), (2, 1));
        for k in 0..next.len() {
            assert!(cone.verify_extremal(next.rays()[k].coords()).unwrap());
            assert_eq!(next.weight(k), 2);
        }
    }

    #[test]
    fn satisfied_row_keeps_rays() {
        let rows: Vec<Vec<i128>> = vec![vec![1, 0], vec![0, 1]];
        let cone = Cone::new(2, rows).unwrap();
        let (state, _) = DdState::initial(&cone, 0..2).unwrap();
        let (next, stats) = state.step(&[1, 1], AdjacencyTest::Combinatorial).unwrap();
        assert_eq!(stats.negative, 0);
        assert_eq!(next.rays(), state.rays());
    }

    #[test]
    fn from_pair_rejects_violating_ray() {
        let rays = vec![Ray::<i128>::new(vec![1, -1]).unwrap()];
        let err = DdState::from_pair(2, vec![vec![0, 1]], rays).unwrap_err();
        assert!(matches!(err, Error::Infeasible { row: 0 }));
    }
}
