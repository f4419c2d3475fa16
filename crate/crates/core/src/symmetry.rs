//! Symmetries of the cone: permutations of the base set and the reflection
//! `(σf)(A) = f(X∖A) − f(X) + Σ_{i∈A} f(i)`.
//!
//! Permutations act by `(πf)(A) = f(πA)`, a right action:
//! `π₂·(π₁·f) = (π₁∘π₂)·f`. The reflection commutes with every permutation,
//! so the group has `2·n!` elements `(π, reflect)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::model::{ConeSpec, Subset, Triplet};
use crate::ray::Ray;

/// `perm[i]` is the image of element `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub perm: Vec<usize>,
    pub reflect: bool,
}

impl SymmetryElement {
    pub fn identity(n: usize) -> Self {
        SymmetryElement {
            perm: (0..n).collect(),
            reflect: false,
        }
    }

    /// The element acting as `self` first, then `other`:
    /// `other·(self·f) = self.then(other)·f`.
    pub fn then(&self, other: &SymmetryElement) -> SymmetryElement {
        // π₂·(π₁·f) = (π₁∘π₂)·f
        SymmetryElement {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn map_subset(&self, s: Subset) -> Subset {
        self.perm
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .fold(0, |acc, (_, &p)| acc | 1 << p)
    }
}

/// A canonical orbit representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitRecord<N> {
    pub canonical: Ray<N>,
    pub size: usize,
    pub weight: usize,
}

impl<N> OrbitRecord<N> {
    /// Order of the stabilizer of any orbit member.
    pub fn stabilizer(&self, group_order: usize) -> usize {
        group_order / self.size
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    n: usize,
    masks: Vec<Subset>,
    perms: Vec<Vec<usize>>,
    /// `coord_maps[k][c]`: the coordinate of `x` read into coordinate `c` of
    /// `π_k·x`.
    coord_maps: Vec<Vec<usize>>,
    /// Output coordinate `c` of `σx` is `Σ coef·x[idx]` over `reflection[c]`.
    reflection: Vec<Vec<(usize, i64)>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

impl SymmetryGroup {
    pub fn new(spec: &ConeSpec) -> Self {
        let n = spec.n();
        let full = spec.base().full();
        let coords = spec.coords();
        let masks = coords.masks().to_vec();
        let x = spec.x_column();
        // Column of a (p-standardized) full-function value in reduced coordinates.
        let col = |a: Subset| -> Option<usize> {
            match a.count_ones() as usize {
                0 => None,
                k if k + 1 >= n => Some(x),
                _ => coords.position(a),
            }
        };
        let perms = permutations(n);
        let coord_maps = perms
            .iter()
            .map(|p| {
                let g = SymmetryElement {
                    perm: p.clone(),
                    reflect: false,
                };
                masks.iter().map(|&a| coords.position(g.map_subset(a)).expect("size preserved")).collect()
            })
            .collect();
        let reflection = masks
            .iter()
            .map(|&a| {
                let mut terms: Vec<(usize, i64)> = Vec::new();
                let mut add = |c: Option<usize>, v: i64| {
                    if let Some(c) = c {
                        match terms.iter_mut().find(|(k, _)| *k == c) {
                            Some(t) => t.1 += v,
                            None => terms.push((c, v)),
                        }
                    }
                };
                add(col(full & !a), 1);
                add(Some(x), -1);
                for i in 0..n {
                    if a >> i & 1 == 1 {
                        add(col(1 << i), 1);
                    }
                }
                terms.retain(|t| t.1 != 0);
                terms.sort_unstable();
                terms
            })
            .collect();
        SymmetryGroup {
            n,
            masks,
            perms,
            coord_maps,
            reflection,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2·n!`.
    pub fn order(&self) -> usize {
        2 * self.perms.len()
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = SymmetryElement> + '_ {
        [false, true].into_iter().flat_map(move |reflect| {
            self.perms.iter().map(move |p| SymmetryElement {
                perm: p.clone(),
                reflect,
            })
        })
    }

    fn check<N>(&self, x: &[N]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn perm_index(&self, perm: &[usize]) -> Result<usize> {
        self.perms
            .binary_search_by(|p| p.as_slice().cmp(perm))
            .map_err(|_| Error::Dimension {
                expected: self.n,
                found: perm.len(),
            })
    }

    fn permute_by<N: Int>(&self, k: usize, x: &[N]) -> Vec<N> {
        self.coord_maps[k].iter().map(|&c| x[c].clone()).collect()
    }

    pub fn apply_permutation<N: Int>(&self, perm: &[usize], x: &[N]) -> Result<Vec<N>> {
        self.check(x)?;
        Ok(self.permute_by(self.perm_index(perm)?, x))
    }

    pub fn apply_reflection<N: Int>(&self, x: &[N]) -> Result<Vec<N>> {
        self.check(x)?;
        self.reflection
            .iter()
            .map(|terms| {
                let mut acc = N::zero();
                for &(c, v) in terms {
                    acc = match v {
                        1 => int::add(&acc, &x[c])?,
                        -1 => int::sub(&acc, &x[c])?,
                        _ => int::add(&acc, &int::mul(&N::from(v), &x[c])?)?,
                    };
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn apply<N: Int>(&self, g: &SymmetryElement, x: &[N]) -> Result<Vec<N>> {
        let k = self.perm_index(&g.perm)?;
        self.check(x)?;
        if g.reflect {
            Ok(self.permute_by(k, &self.apply_reflection(x)?))
        } else {
            Ok(self.permute_by(k, x))
        }
    }

    /// The triplet `g(t)` with `M_t·(g·f) = M_{g(t)}·f`.
    pub fn triplet_image(&self, t: Triplet, g: &SymmetryElement) -> Triplet {
        let full = (1 << self.n) - 1;
        let k = if g.reflect { full & !(t.k | 1 << t.i | 1 << t.j) } else { t.k };
        let (a, b) = (g.perm[t.i], g.perm[t.j]);
        let k = g.map_subset(k);
        Triplet {
            i: a.min(b),
            j: a.max(b),
            k,
        }
    }

    /// All `2·n!` images, with repetitions, identity-class first.
    pub fn images<N: Int>(&self, ray: &Ray<N>) -> Result<Vec<Ray<N>>> {
        self.check(ray.coords())?;
        let reflected = self.apply_reflection(ray.coords())?;
        let mut out = Vec::with_capacity(self.order());
        for base in [ray.coords(), reflected.as_slice()] {
            for k in 0..self.perms.len() {
                out.push(Ray::from_primitive(self.permute_by(k, base)));
            }
        }
        Ok(out)
    }

    /// Distinct images, sorted.
    pub fn orbit<N: Int>(&self, ray: &Ray<N>) -> Result<Vec<Ray<N>>> {
        let mut imgs = self.images(ray)?;
        imgs.sort_unstable();
        imgs.dedup();
        Ok(imgs)
    }

    /// The lexicographically smallest image.
    pub fn canonical<N: Int>(&self, ray: &Ray<N>) -> Result<Ray<N>> {
        self.check(ray.coords())?;
        let reflected = self.apply_reflection(ray.coords())?;
        let mut best: Option<Vec<N>> = None;
        for base in [ray.coords(), reflected.as_slice()] {
            for map in &self.coord_maps {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let mut ord = std::cmp::Ordering::Equal;
                        for (&c, bv) in map.iter().zip(b) {
                            ord = base[c].cmp(bv);
                            if ord.is_ne() {
                                break;
                            }
                        }
                        ord.is_lt()
                    }
                };
                if better {
                    best = Some(map.iter().map(|&c| base[c].clone()).collect());
                }
            }
        }
        Ok(Ray::from_primitive(best.expect("nonempty group")))
    }

    pub fn canonical_form<N: Int>(&self, ray: &Ray<N>, spec: &ConeSpec) -> Result<OrbitRecord<N>> {
        let orbit = self.orbit(ray)?;
        let canonical = orbit[0].clone();
        let weight = spec.cone::<N>().weight(canonical.coords())?;
        Ok(OrbitRecord {
            canonical,
            size: orbit.len(),
            weight,
        })
    }

    /// Orbit records for a ray list, sorted by canonical ray; rays in the
    /// same orbit collapse to one record.
    pub fn orbits_of<N: Int>(&self, rays: &[Ray<N>], spec: &ConeSpec) -> Result<Vec<OrbitRecord<N>>> {
        let mut canon: Vec<Ray<N>> = rays.par_iter().map(|r| self.canonical(r)).collect::<Result<_>>()?;
        canon.par_sort_unstable();
        canon.dedup();
        let cone = spec.cone::<N>();
        canon
            .into_par_iter()
            .map(|c| {
                let size = self.orbit(&c)?.len();
                let weight = cone.weight(c.coords())?;
                Ok(OrbitRecord {
                    canonical: c,
                    size,
                    weight,
                })
            })
            .collect()
    }
}
