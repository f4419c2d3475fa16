//! Row insertion orders for the Double Description method.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dd::DdState;
use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::model::{elements, popcount, subset_from_elements, ConeSpec, Subset, Triplet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    LexMin,
    TOpt,
    Recursive,
    MaxCut,
    MinCut,
}

impl OrderKind {
    pub fn is_dynamic(self) -> bool {
        matches!(self, OrderKind::MaxCut | OrderKind::MinCut)
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::LexMin => "lexmin",
            OrderKind::TOpt => "topt",
            OrderKind::Recursive => "recursive",
            OrderKind::MaxCut => "maxcut",
            OrderKind::MinCut => "mincut",
        })
    }
}

impl FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lexmin" | "lex-min" => Ok(OrderKind::LexMin),
            "topt" | "t-opt" => Ok(OrderKind::TOpt),
            "recursive" | "rec" => Ok(OrderKind::Recursive),
            "maxcut" | "max-cut" => Ok(OrderKind::MaxCut),
            "mincut" | "min-cut" => Ok(OrderKind::MinCut),
            _ => Err(format!("unknown order `{s}`")),
        }
    }
}

/// A static row permutation, or a dynamic selection rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionOrder {
    kind: OrderKind,
    seed: Option<u64>,
    rows: Option<Vec<usize>>,
}

impl InsertionOrder {
    pub fn new(kind: OrderKind, spec: &ConeSpec, seed: Option<u64>) -> Self {
        match kind {
            OrderKind::TOpt => Self::fixed(kind, topt_order(spec)),
            OrderKind::Recursive => Self::fixed(kind, recursive_order(spec)),
            OrderKind::LexMin => InsertionOrder {
                kind,
                seed,
                rows: Some(lexmin_order(spec.matrix_rows(), seed)),
            },
            OrderKind::MaxCut | OrderKind::MinCut => Self::dynamic(kind),
        }
    }

    fn fixed(kind: OrderKind, rows: Vec<usize>) -> Self {
        InsertionOrder { kind, seed: None, rows: Some(rows) }
    }

    pub fn dynamic(kind: OrderKind) -> Self {
        assert!(kind.is_dynamic(), "{kind} is a static order");
        InsertionOrder { kind, seed: None, rows: None }
    }

    /// A static order from an explicit row sequence (no repeats, all `< m`).
    /// The sequence may omit rows.
    pub fn from_rows(kind: OrderKind, rows: Vec<usize>, m: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        if rows.iter().any(|&r| r >= m || !seen.insert(r)) {
            return Err(Error::BadOrder(m));
        }
        Ok(InsertionOrder { kind, seed: None, rows: Some(rows) })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The realized permutation of a static order.
    pub fn rows(&self) -> Option<&[usize]> {
        self.rows.as_deref()
    }

    pub fn is_dynamic(&self) -> bool {
        self.rows.is_none()
    }

    /// Checks the order is a full permutation of `0..m`.
    pub fn is_permutation(&self, m: usize) -> bool {
        match &self.rows {
            None => true,
            Some(rows) => {
                let mut seen = vec![false; m];
                rows.len() == m && rows.iter().all(|&r| r < m && !std::mem::replace(&mut seen[r], true))
            }
        }
    }

    /// Keeps only the rows in `subset` and renumbers them by their position
    /// in `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Self {
        let rows = self.rows.as_ref().map(|rows| {
            let mut local = std::collections::HashMap::new();
            for (k, &r) in subset.iter().enumerate() {
                local.insert(r, k);
            }
            rows.iter().filter_map(|r| local.get(r).copied()).collect()
        });
        InsertionOrder {
            kind: self.kind,
            seed: self.seed,
            rows,
        }
    }

    /// Drops the given rows from a static order.
    pub fn without(&self, excluded: &[usize]) -> Self {
        let rows = self
            .rows
            .as_ref()
            .map(|rows| rows.iter().copied().filter(|r| !excluded.contains(r)).collect());
        InsertionOrder { rows, ..self.clone() }
    }
}

/// Position of `|K|` in the priority list `0, n-2, 1, n-3, …`.
fn size_priority(n: usize) -> Vec<usize> {
    let mut pos = vec![0; n - 1];
    let (mut lo, mut hi) = (0usize, n - 2);
    let mut k = 0;
    while lo <= hi {
        pos[lo] = k;
        k += 1;
        if hi != lo {
            pos[hi] = k;
            k += 1;
        }
        lo += 1;
        if hi == 0 {
            break;
        }
        hi -= 1;
    }
    pos
}

/// Sort key of `≺`: `|K|` priority, then the tuple `(i, j, K…)`.
pub fn topt_key(t: &Triplet, n: usize) -> (usize, Vec<usize>) {
    let prio = size_priority(n);
    let mut tuple = vec![t.i, t.j];
    tuple.extend(elements(t.k));
    (prio[popcount(t.k)], tuple)
}

/// Rows sorted by `≺`, then reversed: the `≺`-largest row is inserted first.
pub fn topt_order(spec: &ConeSpec) -> Vec<usize> {
    let n = spec.n();
    let mut rows: Vec<usize> = (0..spec.num_rows()).collect();
    rows.sort_by_cached_key(|&r| topt_key(&spec.triplet(r), n));
    rows.reverse();
    rows
}

/// `REC(K)`: `K`, then `REC(K∖i)` for `i ∈ K` in decreasing order, keeping
/// first occurrences.
pub fn rec_enumerate(k: &[usize]) -> Vec<Subset> {
    fn go(k: Subset, seen: &mut HashSet<Subset>, out: &mut Vec<Subset>) {
        if seen.insert(k) {
            out.push(k);
        }
        for i in elements(k).into_iter().rev() {
            go(k & !(1 << i), seen, out);
        }
    }
    let mut out = Vec::new();
    go(subset_from_elements(k), &mut HashSet::new(), &mut out);
    out
}

/// The reverse of: for each pair `ij` in lexicographic order, `(i,j|K)` for
/// `K` in `REC(X∖ij)`.
pub fn recursive_order(spec: &ConeSpec) -> Vec<usize> {
    let n = spec.n();
    let full = spec.base().full();
    let mut rows = Vec::with_capacity(spec.num_rows());
    for i in 0..n {
        for j in i + 1..n {
            let rest = elements(full & !(1 << i | 1 << j));
            for k in rec_enumerate(&rest) {
                let t = Triplet { i, j, k };
                rows.push(spec.row_of(&t).expect("valid triplet"));
            }
        }
    }
    rows.reverse();
    rows
}

/// The recursive order split at the intermediate cone `C*_n`.
///
/// The rows outside the `(0,j|K)` block do not have full rank: they leave the
/// modular functions on `X∖0` free. The `n-1` rows `(0,j|X∖0j)` are exactly
/// enough to make the cone pointed, and are moved up to follow that block.
/// Returns the reordered rows and the number of rows that define `C*_n`.
pub fn cstar_order(spec: &ConeSpec) -> (Vec<usize>, usize) {
    let n = spec.n();
    let full = spec.base().full();
    let rec = recursive_order(spec);
    let top: Vec<usize> = (1..n)
        .map(|j| {
            let t = Triplet { i: 0, j, k: full & !(1 | 1 << j) };
            spec.row_of(&t).expect("valid triplet")
        })
        .collect();
    let mut rows: Vec<usize> = rec.iter().copied().filter(|&r| spec.triplet(r).i != 0).collect();
    rows.extend(&top);
    let prefix = rows.len();
    rows.extend(rec.iter().copied().filter(|&r| spec.triplet(r).i == 0 && !top.contains(&r)));
    (rows, prefix)
}

/// Rows sorted ascending as coefficient vectors, with the coordinates
/// optionally shuffled first. Ties keep row-index order.
pub fn lexmin_order<N: Int>(rows: &[Vec<N>], seed: Option<u64>) -> Vec<usize> {
    let d = rows.first().map_or(0, Vec::len);
    let mut cols: Vec<usize> = (0..d).collect();
    if let Some(seed) = seed {
        cols.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by(|&a, &b| {
        cols.iter()
            .map(|&c| rows[a][c].cmp(&rows[b][c]))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    idx
}

/// Number of rays strictly on the negative side of `a`.
pub fn negative_count<N: Int>(state: &DdState<N>, a: &[N]) -> Result<usize> {
    let mut count = 0;
    for r in state.rays() {
        if int::dot(a, r.coords())?.is_negative() {
            count += 1;
        }
    }
    Ok(count)
}

/// The remaining row cutting off the most (`MaxCut`) or fewest (`MinCut`)
/// rays; ties go to the smallest row index.
pub fn dynamic_next<N: Int>(state: &DdState<N>, rows: &[Vec<N>], remaining: &[usize], kind: OrderKind) -> Result<usize> {
    let counts: Vec<(usize, usize)> = remaining
        .par_iter()
        .map(|&r| Ok((negative_count(state, &rows[r])?, r)))
        .collect::<Result<_>>()?;
    let best = match kind {
        OrderKind::MaxCut => counts.iter().min_by_key(|&&(c, r)| (std::cmp::Reverse(c), r)),
        OrderKind::MinCut => counts.iter().min_by_key(|&&(c, r)| (c, r)),
        _ => return Err(Error::BadOrder(rows.len())),
    };
    best.map(|&(_, r)| r).ok_or(Error::BadOrder(rows.len()))
}
