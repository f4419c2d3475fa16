//! Collecting extremal rays of the full cone from an intermediate cone's
//! positive/negative pairs.

use rayon::prelude::*;

use super::{combine, AdjacencyTest, DdState, HalfGraphCache};
use crate::error::Result;
use crate::int::Int;
use crate::model::Cone;
use crate::ray::Ray;

#[derive(Clone, Copy, Debug, Default)]
pub struct HarvestOptions {
    /// Skip the precheck and the adjacency test; valid when every
    /// positive/negative pair is known to be adjacent.
    pub assume_all_adjacent: bool,
    pub adjacency: AdjacencyTest,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HarvestReport<N> {
    /// Sorted, without duplicates.
    pub rays: Vec<Ray<N>>,
    pub pairs: usize,
    pub prechecked: usize,
    pub nonnegative: usize,
    pub feasible: usize,
}

#[derive(Default)]
struct Counts {
    pairs: usize,
    prechecked: usize,
    nonnegative: usize,
    feasible: usize,
}

/// For each positive/negative pair of row `a` against `state`: build the
/// intersection ray, keep it if it is nonnegative and satisfies every row of
/// `full`, then confirm adjacency in `state`. Every kept ray is extremal in
/// `full`.
pub fn harvest_step<N: Int>(state: &DdState<N>, a: &[N], full: &Cone<N>, opts: &HarvestOptions) -> Result<HarvestReport<N>> {
    let split = state.split(a)?;
    let d = state.dim();
    let per_ray: Vec<(Vec<Ray<N>>, Counts)> = split
        .positive
        .par_iter()
        .map(|&p| -> Result<_> {
            let mut cache = HalfGraphCache::default();
            let mut found = Vec::new();
            let mut c = Counts::default();
            for &q in &split.negative {
                c.pairs += 1;
                if !opts.assume_all_adjacent && state.common_weight(p, q) + 2 < d {
                    continue;
                }
                c.prechecked += 1;
                let coords = combine(&split.values[p], state.rays()[p].coords(), &split.values[q], state.rays()[q].coords())?;
                if coords.iter().any(|x| x.is_negative()) {
                    continue;
                }
                c.nonnegative += 1;
                if !full.contains(&coords)? {
                    continue;
                }
                c.feasible += 1;
                if !opts.assume_all_adjacent {
                    let adjacent = match opts.adjacency {
                        AdjacencyTest::Algebraic => super::algebraic_adjacent(state, p, q)?,
                        AdjacencyTest::Combinatorial => super::combinatorial_adjacent(state, p, q),
                        AdjacencyTest::HalfGraph => super::halfgraph_adjacent(state, p, q, &mut cache),
                    };
                    if !adjacent {
                        continue;
                    }
                }
                found.push(Ray::from_primitive(coords));
            }
            Ok((found, c))
        })
        .collect::<Result<_>>()?;
    let mut report = HarvestReport {
        rays: Vec::new(),
        pairs: 0,
        prechecked: 0,
        nonnegative: 0,
        feasible: 0,
    };
    for (rays, c) in per_ray {
        report.rays.extend(rays);
        report.pairs += c.pairs;
        report.prechecked += c.prechecked;
        report.nonnegative += c.nonnegative;
        report.feasible += c.feasible;
    }
    report.rays.sort_unstable();
    report.rays.dedup();
    Ok(report)
}
