//! Adjacency decomposition: neighbors of an extremal ray through a
//! `(d-1)`-dimensional subproblem, orbit-level frontier search, and random
//! extremal sampling.
//!
//! For an extremal ray `r` with tight rows `M'` and a non-tight row `z`, the
//! cone `C' = {x : M'x ≥ 0, z·x = 0}` is pointed and its extremal rays are in
//! bijection with the neighbors of `r`. `C'` is parametrized as `x = P·y`
//! where the columns of `P` span the nullspace of `z`, giving the
//! full-dimensional cone `{y : (M'P)·y ≥ 0}`.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dd::{run_dd, AdjacencyTest, DdOptions, RunStatus};
use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::ledger::{JournalEntry, OrbitLedger};
use crate::linalg::{self, IntMatrix, RowEchelon};
use crate::model::{Cone, ConeSpec};
use crate::order::{InsertionOrder, OrderKind};
use crate::ray::Ray;
use crate::symmetry::SymmetryGroup;

/// Checks `M·r ≥ 0` and `rank(M(r)) = d-1`.
pub fn verify_extremal<N: Int>(cone: &Cone<N>, ray: &Ray<N>) -> Result<bool> {
    cone.verify_extremal(ray.coords())
}

/// Two extremal rays are adjacent iff their common tight rows have rank
/// `d-2`.
pub fn rays_adjacent<N: Int>(cone: &Cone<N>, a: &Ray<N>, b: &Ray<N>) -> Result<bool> {
    if a == b {
        return Ok(false);
    }
    let pa = cone.products(a.coords())?;
    let pb = cone.products(b.coords())?;
    let common = (0..cone.num_rows()).filter(|&i| pa[i].is_zero() && pb[i].is_zero()).map(|i| cone.row(i));
    let d = cone.dim();
    Ok(linalg::rank_capped(d, common, d - 2)? == d - 2)
}

/// `a < b` for fractions with positive denominators.
fn frac_lt<N: Int>(a: &(N, N), b: &(N, N)) -> Result<bool> {
    Ok(int::mul(&a.0, &b.1)? < int::mul(&b.0, &a.1)?)
}

#[derive(Clone, Debug)]
pub struct NeighborCone<N> {
    source: Ray<N>,
    support: Vec<usize>,
    excluded: usize,
    /// `d × (d-1)`, columns span `{x : z·x = 0}`.
    basis: IntMatrix<N>,
    projected: Cone<N>,
}

impl<N: Int> NeighborCone<N> {
    /// `z` defaults to the first row (in row order) not tight at `ray`.
    pub fn new(cone: &Cone<N>, ray: &Ray<N>, z: Option<usize>) -> Result<Self> {
        let products = cone.products(ray.coords())?;
        if let Some(row) = products.iter().position(|v| v.is_negative()) {
            return Err(Error::Infeasible { row });
        }
        let support: Vec<usize> = (0..products.len()).filter(|&i| products[i].is_zero()).collect();
        let d = cone.dim();
        if linalg::rank_capped(d, support.iter().map(|&i| cone.row(i)), d - 1)? != d - 1 {
            return Err(Error::NotExtremal);
        }
        let excluded = match z {
            Some(z) if products[z].is_zero() => return Err(Error::SupportRow { row: z }),
            Some(z) => z,
            None => products.iter().position(|v| v.is_positive()).ok_or(Error::NotExtremal)?,
        };
        let zm = IntMatrix::from_rows(d, &[cone.row(excluded)])?;
        let basis = linalg::nullspace_basis(&zm)?;
        let bt = basis.transpose();
        let rows = support
            .iter()
            .map(|&i| {
                let mut v = bt.mul_vec(cone.row(i))?;
                if v.iter().any(|x| !x.is_zero()) {
                    int::reduce_by_gcd(&mut v)?;
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NeighborCone {
            source: ray.clone(),
            support,
            excluded,
            projected: Cone::new(d - 1, rows)?,
            basis,
        })
    }

    pub fn source(&self) -> &Ray<N> {
        &self.source
    }

    /// Rows of the ambient cone tight at the source; row `k` of the
    /// projected cone comes from `support()[k]`.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn excluded(&self) -> usize {
        self.excluded
    }

    pub fn basis(&self) -> &IntMatrix<N> {
        &self.basis
    }

    pub fn projected(&self) -> &Cone<N> {
        &self.projected
    }

    /// `P·y`.
    pub fn embed(&self, y: &[N]) -> Result<Vec<N>> {
        self.basis.mul_vec(y)
    }

    /// Coordinates `y` of `(z·r)x − (z·x)r`, the projection of `x` along `r`
    /// onto `z·x = 0`.
    pub fn project(&self, cone: &Cone<N>, x: &[N]) -> Result<Ray<N>> {
        let z = cone.row(self.excluded);
        let zr = int::dot(z, self.source.coords())?;
        let zx = int::dot(z, x)?;
        let s = x
            .iter()
            .zip(self.source.coords())
            .map(|(xi, ri)| int::cross(&zr, xi, &zx, ri))
            .collect::<Result<Vec<N>>>()?;
        let (_, y) = linalg::coordinates_in_basis(&self.basis, &s)?;
        Ray::new(y)
    }

    /// `r' = s + μ·r` for `s = P·y` with the smallest `μ` keeping every row
    /// of the ambient cone nonnegative. For `y` extremal in the projected
    /// cone this is the neighbor of the source along that 2-face.
    pub fn lift(&self, cone: &Cone<N>, y: &[N]) -> Result<Ray<N>> {
        let s = self.embed(y)?;
        let r = self.source.coords();
        // μ = max over non-tight rows of −(a·s)/(a·r); z gives μ ≥ 0.
        let mut mu = (N::zero(), N::one());
        for (i, row) in cone.rows().iter().enumerate() {
            let ar = int::dot(row, r)?;
            if !ar.is_positive() {
                if ar.is_zero() && int::dot(row, &s)?.is_negative() {
                    return Err(Error::Infeasible { row: i });
                }
                continue;
            }
            let cand = (-int::dot(row, &s)?, ar);
            if frac_lt(&mu, &cand)? {
                mu = cand;
            }
        }
        let (num, den) = mu;
        let coords = s
            .iter()
            .zip(r)
            .map(|(si, ri)| int::add(&int::mul(&den, si)?, &int::mul(&num, ri)?))
            .collect::<Result<Vec<N>>>()?;
        Ray::new(coords)
    }
}

/// Walks from `x` in the cone to an extremal ray: while the tight rows have
/// rank below `d-1`, moves inside the current face until another row becomes
/// tight.
pub fn descend_to_extremal<N: Int>(cone: &Cone<N>, x: &[N]) -> Result<Ray<N>> {
    if !cone.contains(x)? {
        return Err(Error::Infeasible {
            row: cone.products(x)?.iter().position(|v| v.is_negative()).unwrap_or(0),
        });
    }
    let d = cone.dim();
    let mut x = Ray::new(x.to_vec())?.into_coords();
    loop {
        let support = cone.support(&x)?;
        let t = IntMatrix::from_rows(d, &support.iter().map(|&i| cone.row(i).to_vec()).collect::<Vec<_>>())?;
        let ns = linalg::nullspace_basis(&t)?;
        if ns.cols() <= 1 {
            return Ray::new(x);
        }
        let mut ech = RowEchelon::new(d);
        ech.insert(&x)?;
        let v = (0..ns.cols())
            .map(|k| ns.column(k))
            .find(|v| !ech.spans(v).unwrap_or(true))
            .ok_or(Error::NotPointed)?;
        let mut moved = false;
        for dir in [v.clone(), v.iter().map(|c| -c.clone()).collect()] {
            // Smallest step t = (a·x)/(−a·dir) over rows decreasing along dir.
            let mut best: Option<(N, N)> = None;
            for row in cone.rows() {
                let ad = int::dot(row, &dir)?;
                if !ad.is_negative() {
                    continue;
                }
                let cand = (int::dot(row, &x)?, -ad);
                if best.as_ref().map_or(Ok(true), |b| frac_lt(&cand, b))? {
                    best = Some(cand);
                }
            }
            if let Some((ax, den)) = best {
                let mut next = x
                    .iter()
                    .zip(&dir)
                    .map(|(xi, di)| int::add(&int::mul(&den, xi)?, &int::mul(&ax, di)?))
                    .collect::<Result<Vec<N>>>()?;
                int::reduce_by_gcd(&mut next)?;
                x = next;
                moved = true;
                break;
            }
        }
        if !moved {
            return Err(Error::NotPointed);
        }
    }
}

#[derive(Clone, Debug)]
pub struct NeighborOptions {
    /// 1: plain DD on the neighbor cone. `k > 1`: enumerate the neighbor
    /// cone by adjacency decomposition with depth `k-1`.
    pub depth: usize,
    pub max_rays: Option<usize>,
    pub adjacency: AdjacencyTest,
    pub order: OrderKind,
    pub seed: Option<u64>,
}

impl Default for NeighborOptions {
    fn default() -> Self {
        NeighborOptions {
            depth: 1,
            max_rays: None,
            adjacency: AdjacencyTest::HalfGraph,
            order: OrderKind::TOpt,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbors<N> {
    /// Sorted, distinct.
    pub rays: Vec<Ray<N>>,
    /// False when a budget cut the enumeration short.
    pub complete: bool,
}

/// Neighbors of `ray` in `cone`. `order` ranks the rows of `cone`;
/// `interior` is any point with every row strictly positive.
pub fn neighbors_in<N: Int>(
    cone: &Cone<N>,
    interior: &[N],
    ray: &Ray<N>,
    order: &InsertionOrder,
    opts: &NeighborOptions,
) -> Result<Neighbors<N>> {
    let nc = NeighborCone::new(cone, ray, None)?;
    let sub_order = order.restrict(nc.support());
    let (rays, complete) = if opts.depth <= 1 {
        let dd_opts = DdOptions {
            max_rays: opts.max_rays,
            adjacency: opts.adjacency,
            ..DdOptions::default()
        };
        let run = run_dd(nc.projected(), &sub_order, &dd_opts)?;
        let complete = run.status == RunStatus::Complete;
        (run.state.into_rays(), complete)
    } else {
        let inner = nc.project(cone, interior)?;
        let sub = NeighborOptions {
            depth: opts.depth - 1,
            ..opts.clone()
        };
        decompose(nc.projected(), inner.coords(), &sub_order, &sub)?
    };
    let mut lifted = rays.iter().map(|y| nc.lift(cone, y.coords())).collect::<Result<Vec<_>>>()?;
    lifted.sort_unstable();
    lifted.dedup();
    Ok(Neighbors {
        rays: lifted,
        complete,
    })
}

/// All extremal rays of `cone` by breadth-first search over the adjacency
/// graph, starting from the ray reached by descending from `interior`.
pub fn decompose<N: Int>(
    cone: &Cone<N>,
    interior: &[N],
    order: &InsertionOrder,
    opts: &NeighborOptions,
) -> Result<(Vec<Ray<N>>, bool)> {
    let start = descend_to_extremal(cone, interior)?;
    let mut seen: BTreeSet<Ray<N>> = BTreeSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut complete = true;
    while let Some(u) = queue.pop_front() {
        let nb = neighbors_in(cone, interior, &u, order, opts)?;
        complete &= nb.complete;
        for v in nb.rays {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        if opts.max_rays.is_some_and(|b| seen.len() > b) {
            complete = false;
            break;
        }
    }
    Ok((seen.into_iter().collect(), complete))
}

/// Neighbors of an extremal ray of the submodular cone.
pub fn neighbors<N: Int>(spec: &ConeSpec, ray: &Ray<N>, opts: &NeighborOptions) -> Result<Neighbors<N>> {
    let cone = spec.cone::<N>();
    let order = InsertionOrder::new(opts.order, spec, opts.seed);
    neighbors_in(&cone, &spec.interior_point::<N>()?, ray, &order, opts)
}

#[derive(Clone, Debug)]
pub struct BfsOptions {
    pub max_probes: Option<usize>,
    /// Orbits heavier than this are recorded but never probed.
    pub max_weight: Option<usize>,
    /// Probes run in parallel in batches of this size; results are merged in
    /// batch order, so the outcome does not depend on the thread count.
    pub batch: usize,
    pub neighbor: NeighborOptions,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions {
            max_probes: None,
            max_weight: None,
            batch: 64,
            neighbor: NeighborOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsReport<N> {
    pub probes: usize,
    /// Every known orbit was probed and every probe was complete.
    pub closed: bool,
    /// Orbits known but not probed, lowest weight first.
    pub pending: Vec<(usize, Ray<N>)>,
}

/// Frontier search over orbits. `frontier` rays are canonicalized, added to
/// the ledger if new, and queued; the lowest-weight unprobed orbit is probed
/// next. Every neighbor's canonical form goes into the ledger.
pub fn orbit_bfs<N: Int, F>(
    spec: &ConeSpec,
    group: &SymmetryGroup,
    ledger: &mut OrbitLedger<N>,
    frontier: impl IntoIterator<Item = Ray<N>>,
    opts: &BfsOptions,
    mut on_probe: F,
) -> Result<BfsReport<N>>
where
    F: FnMut(&JournalEntry<N>) -> Result<()>,
{
    let cone = spec.cone::<N>();
    let interior = spec.interior_point::<N>()?;
    let order = InsertionOrder::new(opts.neighbor.order, spec, opts.neighbor.seed);
    let mut queue: BTreeSet<(usize, Ray<N>)> = BTreeSet::new();
    for r in frontier {
        let c = group.canonical(&r)?;
        let w = cone.weight(c.coords())?;
        ledger.insert(c.clone())?;
        queue.insert((w, c));
    }
    let mut held: Vec<(usize, Ray<N>)> = Vec::new();
    let mut probes = 0;
    let mut complete = true;
    loop {
        let room = opts.max_probes.map_or(usize::MAX, |m| m.saturating_sub(probes));
        let mut batch = Vec::new();
        while batch.len() < opts.batch.max(1).min(room) {
            let Some(item) = queue.pop_first() else { break };
            if opts.max_weight.is_some_and(|m| item.0 > m) {
                held.push(item);
            } else {
                batch.push(item);
            }
        }
        if batch.is_empty() {
            break;
        }
        let results: Vec<(Neighbors<N>, Vec<Ray<N>>)> = batch
            .par_iter()
            .map(|(_, r)| {
                let nb = neighbors_in(&cone, &interior, r, &order, &opts.neighbor)?;
                let mut canon = nb.rays.iter().map(|x| group.canonical(x)).collect::<Result<Vec<_>>>()?;
                canon.sort_unstable();
                canon.dedup();
                Ok((nb, canon))
            })
            .collect::<Result<_>>()?;
        for ((w, r), (nb, canon)) in batch.into_iter().zip(results) {
            complete &= nb.complete;
            let mut new_orbits = 0;
            for c in canon {
                if ledger.insert(c.clone())? {
                    new_orbits += 1;
                    queue.insert((cone.weight(c.coords())?, c));
                }
            }
            probes += 1;
            on_probe(&JournalEntry {
                canonical: r,
                weight: w,
                neighbors: nb.rays.len(),
                new_orbits,
            })?;
        }
    }
    held.extend(queue);
    held.sort_unstable();
    Ok(BfsReport {
        probes,
        closed: complete && held.is_empty(),
        pending: held,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport<N> {
    /// Distinct extremal rays found, in order of discovery.
    pub rays: Vec<Ray<N>>,
    pub attempts: usize,
    /// Attempts whose kernel ray (or its negative) was in the cone.
    pub hits: usize,
}

/// Random rank-`(d-1)` row subsets: rows are drawn in random order until the
/// rank reaches `d-1`; the kernel direction is kept if it (or its negative)
/// lies in the cone. With `around`, the first `d-2` independent rows come
/// from that ray's tight rows.
pub fn random_extremal_sample<N: Int>(
    cone: &Cone<N>,
    seed: u64,
    attempts: usize,
    around: Option<&Ray<N>>,
) -> Result<SampleReport<N>> {
    let d = cone.dim();
    let m = cone.num_rows();
    let near: Option<Vec<usize>> = around.map(|r| cone.support(r.coords())).transpose()?;
    let found: Vec<Option<Ray<N>>> = (0..attempts)
        .into_par_iter()
        .map(|k| -> Result<Option<Ray<N>>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut ech = RowEchelon::new(d);
            let mut chosen: Vec<usize> = Vec::with_capacity(d - 1);
            if let Some(near) = &near {
                let mut pool = near.clone();
                pool.shuffle(&mut rng);
                for i in pool {
                    if chosen.len() == d.saturating_sub(2) {
                        break;
                    }
                    if ech.insert(cone.row(i))? {
                        chosen.push(i);
                    }
                }
            }
            let mut all: Vec<usize> = (0..m).collect();
            all.shuffle(&mut rng);
            for i in all {
                if chosen.len() == d - 1 {
                    break;
                }
                if ech.insert(cone.row(i))? {
                    chosen.push(i);
                }
            }
            if chosen.len() < d - 1 {
                return Ok(None);
            }
            let rows: Vec<Vec<N>> = chosen.iter().map(|&i| cone.row(i).to_vec()).collect();
            let x = linalg::kernel_vector(&IntMatrix::from_rows(d, &rows)?)?;
            if cone.contains(&x)? {
                return Ok(Some(Ray::new(x)?));
            }
            let neg: Vec<N> = x.iter().map(|v| -v.clone()).collect();
            if cone.contains(&neg)? {
                return Ok(Some(Ray::new(neg)?));
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut rays = Vec::new();
    let mut hits = 0;
    for r in found.into_iter().flatten() {
        hits += 1;
        if seen.insert(r.clone()) {
            rays.push(r);
        }
    }
    Ok(SampleReport { rays, attempts, hits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descend_reaches_a_ray() {
        let spec = ConeSpec::new(4).unwrap();
        let cone = spec.cone::<i128>();
        let x = spec.interior_point::<i128>().unwrap();
        let r = descend_to_extremal(&cone, &x).unwrap();
        assert!(cone.verify_extremal(r.coords()).unwrap());
    }

    #[test]
    fn neighbor_cone_ranks() {
        let spec = ConeSpec::new(4).unwrap();
        let cone = spec.cone::<i128>();
        let f = spec.f_j::<i128>(0b0011).unwrap();
        let nc = NeighborCone::new(&cone, &f, None).unwrap();
        assert_eq!(nc.projected().dim(), spec.dim() - 1);
        assert_eq!(linalg::rank(&nc.projected().matrix().unwrap()).unwrap(), spec.dim() - 1);
        let z = nc.excluded();
        assert!(matches!(
            NeighborCone::new(&cone, &f, Some(nc.support()[0])),
            Err(Error::SupportRow { .. })
        ));
        assert!(!nc.support().contains(&z));
    }

    #[test]
    fn lifted_neighbors_are_adjacent() {
        let spec = ConeSpec::new(4).unwrap();
        let cone = spec.cone::<i128>();
        let f = spec.f_j::<i128>(0b1111).unwrap();
        let nb = neighbors(&spec, &f, &NeighborOptions::default()).unwrap();
        assert!(nb.complete && !nb.rays.is_empty());
        for r in &nb.rays {
            assert!(cone.verify_extremal(r.coords()).unwrap());
            assert!(rays_adjacent(&cone, &f, r).unwrap());
        }
    }
}
