//! The three adjacency tests for a pair of rays of the current cone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{and_count, DdState};
use crate::bits::WORD_BITS;
use crate::error::Result;
use crate::int::Int;
use crate::linalg;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjacencyTest {
    /// Rank of the common support equals `d-2`.
    Algebraic,
    /// No third ray's support contains the common support.
    Combinatorial,
    /// The combinatorial test with a precomputed candidate string per
    /// positive ray.
    #[default]
    HalfGraph,
}

impl std::fmt::Display for AdjacencyTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Algebraic => "algebraic",
            Self::Combinatorial => "combinatorial",
            Self::HalfGraph => "halfgraph",
        })
    }
}

impl std::str::FromStr for AdjacencyTest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "algebraic" => Ok(Self::Algebraic),
            "combinatorial" => Ok(Self::Combinatorial),
            "halfgraph" | "half-graph" => Ok(Self::HalfGraph),
            _ => Err(format!("unknown adjacency test `{s}`")),
        }
    }
}

pub fn algebraic_adjacent<N: Int>(state: &DdState<N>, p: usize, q: usize) -> Result<bool> {
    let d = state.dim();
    if state.common_weight(p, q) + 2 < d {
        return Ok(false);
    }
    let common = state.common_rows(p, q);
    let rank = linalg::rank_capped(d, common.iter().map(|&i| &state.rows()[i]), d - 2)?;
    Ok(rank + 2 == d)
}

pub fn combinatorial_adjacent<N: Int>(state: &DdState<N>, p: usize, q: usize) -> bool {
    if state.common_weight(p, q) + 2 < state.dim() {
        return false;
    }
    let len = state.len();
    let mut b = vec![!0u64; state.row_stride];
    let rem = len % WORD_BITS;
    if rem != 0 {
        if let Some(last) = b.last_mut() {
            *last = (1 << rem) - 1;
        }
    }
    b[p / WORD_BITS] &= !(1 << (p % WORD_BITS));
    b[q / WORD_BITS] &= !(1 << (q % WORD_BITS));
    if b.iter().all(|&w| w == 0) {
        return true;
    }
    for i in state.common_rows(p, q) {
        let mut any = 0;
        for (x, y) in b.iter_mut().zip(state.row_words(i)) {
            *x &= y;
            any |= *x;
        }
        if any == 0 {
            return true;
        }
    }
    false
}

/// Holds `ĝ(r₁)` for one positive ray `r₁`: bit `r` is set iff `r ≠ r₁` and
/// `|r̂ ∩ r̂₁| ≥ d-2`.
#[derive(Clone, Debug, Default)]
pub struct HalfGraphCache {
    owner: Option<usize>,
    g: Vec<u64>,
    /// Indices of the nonzero words of `g`.
    chunks: Vec<usize>,
    common: Vec<usize>,
    rebuilds: usize,
}

impl HalfGraphCache {
    pub fn owner(&self) -> Option<usize> {
        self.owner
    }

    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    /// Builds `ĝ(p)` unless it is already cached.
    pub fn prepare<N: Int>(&mut self, state: &DdState<N>, p: usize) {
        if self.owner == Some(p) {
            return;
        }
        self.rebuilds += 1;
        self.owner = Some(p);
        self.g.clear();
        self.g.resize(state.row_stride, 0);
        self.chunks.clear();
        let need = state.dim().saturating_sub(2);
        let rp = state.ray_words(p);
        for (r, rw) in state.ray_inc.chunks_exact(state.ray_stride).enumerate() {
            if and_count(rp, rw) >= need {
                self.g[r / WORD_BITS] |= 1 << (r % WORD_BITS);
            }
        }
        self.g[p / WORD_BITS] &= !(1 << (p % WORD_BITS));
        self.chunks.extend(self.g.iter().enumerate().filter(|(_, &w)| w != 0).map(|(i, _)| i));
    }

    /// The precheck bit `ĝ[q]`.
    #[inline]
    pub fn contains(&self, q: usize) -> bool {
        self.g[q / WORD_BITS] >> (q % WORD_BITS) & 1 == 1
    }

    /// Runs the test for `(owner, q)`; `prepare(state, p)` must have been
    /// called.
    pub fn test<N: Int>(&mut self, state: &DdState<N>, p: usize, q: usize) -> bool {
        debug_assert_eq!(self.owner, Some(p));
        if !self.contains(q) {
            return false;
        }
        self.common.clear();
        for (w, (a, b)) in state.ray_words(p).iter().zip(state.ray_words(q)).enumerate() {
            let mut bits = a & b;
            while bits != 0 {
                self.common.push(w * WORD_BITS + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        let qw = q / WORD_BITS;
        for &w in &self.chunks {
            let mut x = self.g[w];
            if w == qw {
                x &= !(1 << (q % WORD_BITS));
            }
            if x == 0 {
                continue;
            }
            for &i in &self.common {
                x &= state.row_words(i)[w];
                if x == 0 {
                    break;
                }
            }
            if x != 0 {
                return false;
            }
        }
        true
    }
}

pub fn halfgraph_adjacent<N: Int>(state: &DdState<N>, p: usize, q: usize, cache: &mut HalfGraphCache) -> bool {
    cache.prepare(state, p);
    cache.test(state, p, q)
}

/// Outcome of running all three tests side by side on positive/negative
/// pairs for one row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyAudit {
    pub pairs: usize,
    pub adjacent: usize,
    pub disagreements: usize,
}

impl AdjacencyAudit {
    pub fn merge(&mut self, other: &AdjacencyAudit) {
        self.pairs += other.pairs;
        self.adjacent += other.adjacent;
        self.disagreements += other.disagreements;
    }
}

impl<N: Int> DdState<N> {
    /// Compares the three tests on the positive/negative pairs of row `a`:
    /// all pairs, or `samples` pairs drawn uniformly with the given seed.
    pub fn audit_adjacency(&self, a: &[N], samples: Option<(usize, u64)>) -> Result<AdjacencyAudit> {
        let split = self.split(a)?;
        let mut audit = AdjacencyAudit::default();
        let (pos, neg) = (&split.positive, &split.negative);
        if pos.is_empty() || neg.is_empty() {
            return Ok(audit);
        }
        let mut check = |p: usize, q: usize, cache: &mut HalfGraphCache| -> Result<()> {
            let alg = algebraic_adjacent(self, p, q)?;
            let comb = combinatorial_adjacent(self, p, q);
            let half = halfgraph_adjacent(self, p, q, cache);
            audit.pairs += 1;
            audit.adjacent += usize::from(alg);
            audit.disagreements += usize::from(alg != comb || comb != half);
            Ok(())
        };
        let mut cache = HalfGraphCache::default();
        match samples {
            None => {
                for &p in pos {
                    for &q in neg {
                        check(p, q, &mut cache)?;
                    }
                }
            }
            Some((count, seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut picks: Vec<(usize, usize)> = (0..count)
                    .map(|_| (pos[rng.gen_range(0..pos.len())], neg[rng.gen_range(0..neg.len())]))
                    .collect();
                // Grouping by positive ray keeps cache rebuilds to one per ray.
                picks.sort_unstable();
                for (p, q) in picks {
                    check(p, q, &mut cache)?;
                }
            }
        }
        Ok(audit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Cone;

    fn simplex(d: usize) -> DdState<i128> {
        let rows: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| i128::from(i == j)).collect()).collect();
        let cone = Cone::new(d, rows).unwrap();
        DdState::initial(&cone, 0..d).unwrap().0
    }

    #[test]
    fn simplicial_rays_pairwise_adjacent() {
        let s = simplex(5);
        let mut cache = HalfGraphCache::default();
        for p in 0..5 {
            for q in 0..5 {
                if p != q {
                    assert!(algebraic_adjacent(&s, p, q).unwrap());
                    assert!(combinatorial_adjacent(&s, p, q));
                    assert!(halfgraph_adjacent(&s, p, q, &mut cache));
                }
            }
        }
    }

    #[test]
    fn cache_is_keyed_on_positive_ray() {
        let s = simplex(4);
        let mut cache = HalfGraphCache::default();
        halfgraph_adjacent(&s, 0, 1, &mut cache);
        halfgraph_adjacent(&s, 0, 2, &mut cache);
        assert_eq!(cache.rebuilds(), 1);
        halfgraph_adjacent(&s, 1, 2, &mut cache);
        assert_eq!(cache.rebuilds(), 2);
    }

    #[test]
    fn parse_names() {
        assert_eq!("halfgraph".parse::<AdjacencyTest>().unwrap(), AdjacencyTest::HalfGraph);
        assert!("nope".parse::<AdjacencyTest>().is_err());
    }
}
