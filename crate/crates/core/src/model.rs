//! The cone of p-standardized submodular functions.
//!
//! Subsets of the base set `{0,…,n-1}` are bitmasks (element `i` is bit `i`).
//! A p-standardized function `g` vanishes on the empty set and takes the value
//! `g(X)` on every `(n-1)`-subset, so it is determined by its values on the
//! coordinate set `R = {A : A ≠ ∅, |A| ≠ n-1}`, listed in ascending mask
//! order. The merged top column sits at the position of the full mask.

use std::collections::HashMap;
use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::linalg::{self, IntMatrix};
use crate::ray::Ray;

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 8;

pub type Subset = u32;

#[inline]
pub fn popcount(s: Subset) -> usize {
    s.count_ones() as usize
}

/// Elements of a subset in increasing order.
pub fn elements(s: Subset) -> Vec<usize> {
    (0..32).filter(|&i| s >> i & 1 == 1).collect()
}

pub fn subset_from_elements(elems: &[usize]) -> Subset {
    elems.iter().fold(0, |acc, &e| acc | 1 << e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseSet {
    n: usize,
}

impl BaseSet {
    pub fn new(n: usize) -> Result<Self> {
        if (MIN_N..=MAX_N).contains(&n) {
            Ok(BaseSet { n })
        } else {
            Err(Error::BaseSetSize(n))
        }
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    #[inline]
    pub fn full(self) -> Subset {
        (1 << self.n) - 1
    }

    pub fn subsets(self) -> std::ops::Range<Subset> {
        0..1 << self.n
    }
}

/// The elementary inequality `(i,j|K)`: `f(iK) + f(jK) ≥ f(K) + f(ijK)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub i: usize,
    pub j: usize,
    pub k: Subset,
}

impl Triplet {
    pub fn new(i: usize, j: usize, k: Subset, n: usize) -> Result<Self> {
        let ok = i < j && j < n && k >> n == 0 && k & (1 << i | 1 << j) == 0;
        if ok {
            Ok(Triplet { i, j, k })
        } else {
            Err(Error::InvalidTriplet { i, j, k, n })
        }
    }

    /// The four subsets `(iK, jK, K, ijK)`.
    #[inline]
    pub fn corners(self) -> [Subset; 4] {
        let (bi, bj) = (1 << self.i, 1 << self.j);
        [bi | self.k, bj | self.k, self.k, bi | bj | self.k]
    }

    /// `δ(i,j|K)·f` over full functions.
    pub fn eval<N: Int>(self, f: &FullFunction<N>) -> Result<N> {
        let [a, b, k, ab] = self.corners();
        let s = int::add(&f.values[a as usize], &f.values[b as usize])?;
        int::sub(&int::sub(&s, &f.values[k as usize])?, &f.values[ab as usize])
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}|", self.i, self.j)?;
        if self.k == 0 {
            f.write_str("∅")?;
        }
        for e in elements(self.k) {
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All elementary triplets: `(i,j)` lexicographic, then `K` by ascending mask.
pub fn elementary_triplets(n: usize) -> Result<Vec<Triplet>> {
    let base = BaseSet::new(n)?;
    let mut out = Vec::with_capacity((n * (n - 1) / 2) << (n - 2));
    for i in 0..n {
        for j in i + 1..n {
            let ij = 1 << i | 1 << j;
            for k in base.subsets() {
                if k & ij == 0 {
                    out.push(Triplet { i, j, k });
                }
            }
        }
    }
    Ok(out)
}

/// Ordered coordinate set `R` with a reverse lookup by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSet {
    masks: Vec<Subset>,
    position: Vec<Option<usize>>,
}

impl CoordinateSet {
    #[inline]
    pub fn masks(&self) -> &[Subset] {
        &self.masks
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    #[inline]
    pub fn position(&self, mask: Subset) -> Option<usize> {
        self.position.get(mask as usize).copied().flatten()
    }
}

pub fn enumerate_coordinates(n: usize) -> Result<CoordinateSet> {
    let base = BaseSet::new(n)?;
    let masks: Vec<Subset> = base
        .subsets()
        .filter(|&a| a != 0 && popcount(a) != n - 1)
        .collect();
    let mut position = vec![None; 1 << n];
    for (p, &a) in masks.iter().enumerate() {
        position[a as usize] = Some(p);
    }
    Ok(CoordinateSet { masks, position })
}

/// A function on all `2^n` subsets, indexed by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullFunction<N> {
    pub n: usize,
    pub values: Vec<N>,
}

impl<N: Int> FullFunction<N> {
    pub fn zeros(n: usize) -> Self {
        FullFunction {
            n,
            values: vec![N::zero(); 1 << n],
        }
    }

    #[inline]
    pub fn at(&self, s: Subset) -> &N {
        &self.values[s as usize]
    }
}

/// A pointed polyhedral cone `{x : rows·x ≥ 0}` in H-representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<N> {
    dim: usize,
    rows: Vec<Vec<N>>,
}

impl<N: Int> Cone<N> {
    pub fn new(dim: usize, rows: Vec<Vec<N>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: r.len(),
            });
        }
        Ok(Cone { dim, rows })
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
    pub fn row(&self, i: usize) -> &[N] {
        &self.rows[i]
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn products(&self, x: &[N]) -> Result<Vec<N>> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: x.len(),
            });
        }
        self.rows.iter().map(|r| int::dot(r, x)).collect()
    }

    pub fn contains(&self, x: &[N]) -> Result<bool> {
        Ok(self.products(x)?.iter().all(|v| !v.is_negative()))
    }

    /// Incidence string over rows: bit set where the row is tight.
    pub fn incidence(&self, x: &[N]) -> Result<BitString> {
        Ok(BitString::from_bools(self.products(x)?.iter().map(|v| v.is_zero())))
    }

    pub fn support(&self, x: &[N]) -> Result<Vec<usize>> {
        Ok(self.incidence(x)?.iter_ones().collect())
    }

    pub fn weight(&self, x: &[N]) -> Result<usize> {
        Ok(self.incidence(x)?.count_ones())
    }

    /// Extremality by the rank criterion: in the cone and the tight rows
    /// have rank `dim - 1`.
    pub fn verify_extremal(&self, x: &[N]) -> Result<bool> {
        if x.iter().all(|v| v.is_zero()) {
            return Ok(false);
        }
        let prods = self.products(x)?;
        if prods.iter().any(|v| v.is_negative()) {
            return Ok(false);
        }
        let tight = prods.iter().zip(&self.rows).filter(|(v, _)| v.is_zero()).map(|(_, r)| r);
        let target = self.dim - 1;
        Ok(linalg::rank_capped(self.dim, tight, target)? == target)
    }

    pub fn matrix(&self) -> Result<IntMatrix<N>> {
        IntMatrix::from_rows(self.dim, &self.rows)
    }
}

/// Reduced matrix of the p-standardized submodular cone for a given `n`.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    base: BaseSet,
    coords: CoordinateSet,
    triplets: Vec<Triplet>,
    rows: Vec<Vec<i64>>,
    index: HashMap<Triplet, usize>,
}

impl PartialEq for ConeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.triplets == other.triplets && self.rows == other.rows
    }
}

impl ConeSpec {
    /// Builds `M = M♯·S_p`.
    pub fn new(n: usize) -> Result<Self> {
        let base = BaseSet::new(n)?;
        let coords = enumerate_coordinates(n)?;
        let triplets = elementary_triplets(n)?;
        let x_col = coords.position(base.full()).expect("full set is a coordinate");
        let rows: Vec<Vec<i64>> = triplets
            .iter()
            .map(|t| {
                let mut row = vec![0i64; coords.len()];
                let [a, b, k, ab] = t.corners();
                for (mask, sign) in [(a, 1), (b, 1), (k, -1), (ab, -1)] {
                    if mask == 0 {
                        continue;
                    }
                    let col = if popcount(mask) >= n - 1 {
                        x_col
                    } else {
                        coords.position(mask).expect("coordinate")
                    };
                    row[col] += sign;
                }
                row
            })
            .collect();
        let index = triplets.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        Ok(ConeSpec {
            base,
            coords,
            triplets,
            rows,
            index,
        })
    }

    /// Rebuilds a spec from a matrix file's contents, checking it against
    /// the canonical construction.
    pub fn from_parts(n: usize, rows: Vec<Vec<i64>>, triplets: Vec<Triplet>) -> Result<Self> {
        let spec = ConeSpec::new(n)?;
        if spec.rows != rows || spec.triplets != triplets {
            return Err(Error::malformed(0, format!("matrix does not match the n={n} cone")));
        }
        Ok(spec)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.base.n()
    }

    #[inline]
    pub fn base(&self) -> BaseSet {
        self.base
    }

    /// Number of coordinates, `2^n - (n+1)`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Number of elementary inequalities, `C(n,2)·2^(n-2)`.
    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn coords(&self) -> &CoordinateSet {
        &self.coords
    }

    #[inline]
    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets
    }

    #[inline]
    pub fn triplet(&self, row: usize) -> Triplet {
        self.triplets[row]
    }

    pub fn row_of(&self, t: &Triplet) -> Option<usize> {
        self.index.get(t).copied()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i]
    }

    pub fn matrix_rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn cone<N: Int>(&self) -> Cone<N> {
        Cone {
            dim: self.dim(),
            rows: self.rows.iter().map(|r| int::from_i64_slice(r)).collect(),
        }
    }

    /// Position of the merged top column.
    pub fn x_column(&self) -> usize {
        self.coords.position(self.base.full()).expect("full set")
    }

    /// Row of the unreduced matrix `M♯` for a triplet (length `2^n`).
    pub fn full_row(&self, t: Triplet) -> Vec<i64> {
        let mut row = vec![0i64; 1 << self.n()];
        let [a, b, k, ab] = t.corners();
        row[a as usize] += 1;
        row[b as usize] += 1;
        row[k as usize] -= 1;
        row[ab as usize] -= 1;
        row
    }

    /// The rank-function witness showing row `t` cannot be dropped.
    pub fn necessity_witness(&self, t: Triplet) -> FullFunction<i64> {
        let k = popcount(t.k) as i64;
        let [a, b, ..] = t.corners();
        let values = self
            .base
            .subsets()
            .map(|s| {
                if s == a || s == b {
                    k
                } else {
                    (popcount(s) as i64).min(k + 1)
                }
            })
            .collect();
        FullFunction { n: self.n(), values }
    }

    /// `f_J(A) = 1` iff `A ∩ J ≠ ∅`, in reduced coordinates.
    pub fn f_j<N: Int>(&self, j: Subset) -> Result<Ray<N>> {
        if popcount(j) < 2 || j >> self.n() != 0 {
            return Err(Error::SubsetTooSmall { mask: j });
        }
        let coords = self
            .coords
            .masks()
            .iter()
            .map(|&a| if a & j != 0 { N::one() } else { N::zero() })
            .collect();
        Ray::new(coords)
    }

    /// Closed-form weight of `f_J` for `|J| = k`.
    pub fn f_j_weight(&self, k: usize) -> usize {
        let n = self.n();
        n * (n - 1) / 2 * (1 << (n - 2)) - k * (k - 1) / 2 * (1 << (n - k))
    }

    /// Expands reduced coordinates to a full function: zero at `∅`, `g(X)` on
    /// the `(n-1)`-subsets.
    pub fn expand<N: Int>(&self, coords: &[N]) -> Result<FullFunction<N>> {
        if coords.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        let n = self.n();
        let top = coords[self.x_column()].clone();
        let values = self
            .base
            .subsets()
            .map(|s| {
                if s == 0 {
                    N::zero()
                } else if popcount(s) == n - 1 {
                    top.clone()
                } else {
                    coords[self.coords.position(s).expect("coordinate")].clone()
                }
            })
            .collect();
        Ok(FullFunction { n, values })
    }

    /// Restriction of a full function to the coordinate set.
    pub fn reduce<N: Int>(&self, f: &FullFunction<N>) -> Vec<N> {
        self.coords.masks().iter().map(|&a| f.values[a as usize].clone()).collect()
    }

    /// Extension `f★(A) = f★(A ∪ y) = f(A)` to the base set with a new
    /// element `y = n`, in the reduced coordinates of `n + 1`.
    pub fn embed<N: Int>(&self, ray: &Ray<N>) -> Result<Ray<N>> {
        let full = self.expand(ray.coords())?;
        let up = enumerate_coordinates(self.n() + 1)?;
        let x = self.base.full();
        let coords = up.masks().iter().map(|&b| full.values[(b & x) as usize].clone()).collect();
        Ok(Ray::from_primitive(coords))
    }

    /// Splits `coords` into `(on sets containing 0, on sets avoiding 0)`.
    pub fn split_by_zero_element<N: Int>(&self, coords: &[N]) -> (Vec<N>, Vec<N>) {
        let mut with = Vec::new();
        let mut without = Vec::new();
        for (&a, x) in self.coords.masks().iter().zip(coords) {
            if a & 1 == 1 {
                with.push(x.clone());
            } else {
                without.push(x.clone());
            }
        }
        (with, without)
    }

    /// Rank of the reduced matrix (equals `dim` for every valid `n`).
    pub fn rank(&self) -> Result<usize> {
        linalg::rank(&self.cone::<i128>().matrix()?)
    }

    /// Sum of all `f_J`, a point in the interior of the cone.
    pub fn interior_point<N: Int>(&self) -> Result<Vec<N>> {
        let mut acc = vec![N::zero(); self.dim()];
        for j in self.base.subsets().filter(|&j| popcount(j) >= 2) {
            let f = self.f_j::<N>(j)?;
            for (a, b) in acc.iter_mut().zip(f.coords()) {
                *a = int::add(a, b)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_counts() {
        assert_eq!(enumerate_coordinates(3).unwrap().masks(), &[1, 2, 4, 7]);
        assert_eq!(enumerate_coordinates(5).unwrap().len(), 26);
        assert!(matches!(enumerate_coordinates(2), Err(Error::BaseSetSize(2))));
        assert!(matches!(enumerate_coordinates(9), Err(Error::BaseSetSize(9))));
    }

    #[test]
    fn triplet_counts() {
        assert_eq!(elementary_triplets(3).unwrap().len(), 6);
        assert_eq!(elementary_triplets(4).unwrap().len(), 24);
        assert_eq!(elementary_triplets(6).unwrap().len(), 240);
    }

    #[test]
    fn triplet_validation() {
        assert!(Triplet::new(0, 1, 0b100, 3).is_ok());
        assert!(Triplet::new(1, 0, 0, 3).is_err());
        assert!(Triplet::new(0, 1, 0b010, 3).is_err());
        assert!(Triplet::new(0, 1, 0b1000, 3).is_err());
    }

    #[test]
    fn n3_row_for_01_given_2() {
        let spec = ConeSpec::new(3).unwrap();
        let t = Triplet::new(0, 1, 0b100, 3).unwrap();
        let row = spec.row(spec.row_of(&t).unwrap());
        // coordinates {0},{1},{2},X
        assert_eq!(row, &[0, 0, -1, 1]);
    }

    #[test]
    fn rows_have_two_to_four_nonzeros() {
        for n in 3..=6 {
            let spec = ConeSpec::new(n).unwrap();
            for r in spec.matrix_rows() {
                let nz = r.iter().filter(|&&x| x != 0).count();
                assert!((2..=4).contains(&nz), "n={n} row {r:?}");
                assert!(r.iter().all(|x| x.abs() <= 1));
            }
        }
    }

    #[test]
    fn witness_definition() {
        let spec = ConeSpec::new(3).unwrap();
        let t = Triplet::new(0, 1, 0b100, 3).unwrap();
        let g = spec.necessity_witness(t);
        assert_eq!(*g.at(0b101), 1);
        assert_eq!(*g.at(0b110), 1);
        assert_eq!(*g.at(0b111), 2);
        assert_eq!(t.eval(&g).unwrap(), -1);
    }

    #[test]
    fn expand_f01_at_n3() {
        let spec = ConeSpec::new(3).unwrap();
        let f = spec.f_j::<i64>(0b011).unwrap();
        let full = spec.expand(f.coords()).unwrap();
        assert_eq!(*full.at(0b011), 1);
        assert_eq!(*full.at(0b101), 1);
        assert_eq!(*full.at(0b110), 1);
        assert_eq!(*full.at(0), 0);
        assert_eq!(spec.reduce(&full), f.coords());
        let zero = spec.expand(&[0i64; 4]).unwrap();
        assert!(zero.values.iter().all(|&v| v == 0));
    }

    #[test]
    fn f_j_rejects_small_sets() {
        let spec = ConeSpec::new(4).unwrap();
        assert!(spec.f_j::<i64>(0b0100).is_err());
        assert!(spec.f_j::<i64>(0).is_err());
    }

    #[test]
    fn embed_lands_in_bigger_cone() {
        let spec = ConeSpec::new(3).unwrap();
        let up = ConeSpec::new(4).unwrap();
        let f = spec.f_j::<i64>(0b011).unwrap();
        let e = spec.embed(&f).unwrap();
        assert_eq!(e.dim(), 11);
        assert!(up.cone::<i64>().verify_extremal(e.coords()).unwrap());
        // vanishes on the new singleton {3}
        assert_eq!(e.coords()[up.coords().position(0b1000).unwrap()], 0);
    }
}
