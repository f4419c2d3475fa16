//! Weight and orbit-size distributions, and the capture–recapture estimate
//! of a population of orbits.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;
use crate::model::Cone;
use crate::ray::Ray;
use crate::symmetry::OrbitRecord;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: usize, count: u64) {
        *self.counts.entry(key).or_default() += count;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&k, &c) in &other.counts {
            self.add(k, c);
        }
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn get(&self, key: usize) -> u64 {
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ key·count`.
    pub fn weighted_total(&self) -> u128 {
        self.counts.iter().map(|(&k, &c)| k as u128 * c as u128).sum()
    }

    pub fn min(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    pub fn mean(&self) -> Option<f64> {
        let t = self.total();
        (t > 0).then(|| self.weighted_total() as f64 / t as f64)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "bucket,count")?;
        for (k, c) in &self.counts {
            writeln!(w, "{k},{c}")?;
        }
        Ok(())
    }
}

impl FromIterator<usize> for Histogram {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for k in iter {
            h.add(k, 1);
        }
        h
    }
}

/// Number of tight rows per ray.
pub fn weight_histogram<N: Int>(cone: &Cone<N>, rays: &[Ray<N>]) -> Result<Histogram> {
    let weights: Vec<usize> = rays.par_iter().map(|r| cone.weight(r.coords())).collect::<Result<_>>()?;
    Ok(weights.into_iter().collect())
}

/// The weight histogram of all rays, reconstructed from orbit records.
pub fn weight_histogram_of_orbits<N>(orbits: &[OrbitRecord<N>]) -> Histogram {
    let mut h = Histogram::new();
    for o in orbits {
        h.add(o.weight, o.size as u64);
    }
    h
}

pub fn orbit_size_histogram<N>(orbits: &[OrbitRecord<N>]) -> Histogram {
    orbits.iter().map(|o| o.size).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaptureEstimate {
    pub pool: u64,
    pub probe: u64,
    pub overlap: u64,
    /// `overlap / probe`.
    pub fraction: f64,
    /// `pool / fraction`.
    pub orbits: f64,
    pub mean_orbit_size: Option<f64>,
    /// `orbits · mean_orbit_size`.
    pub rays: Option<f64>,
}

impl CaptureEstimate {
    pub fn from_counts(pool: u64, probe: u64, overlap: u64, mean_orbit_size: Option<f64>) -> Result<Self> {
        if overlap > pool.min(probe) {
            return Err(Error::malformed(
                0,
                format!("overlap {overlap} exceeds min(pool {pool}, probe {probe})"),
            ));
        }
        if overlap == 0 {
            return Err(Error::NoOverlap);
        }
        let fraction = overlap as f64 / probe as f64;
        let orbits = pool as f64 / fraction;
        Ok(CaptureEstimate {
            pool,
            probe,
            overlap,
            fraction,
            orbits,
            mean_orbit_size,
            rays: mean_orbit_size.map(|m| orbits * m),
        })
    }

    /// Counts the probe orbits already present in the pool.
    pub fn from_sets<N: Int>(pool: &HashSet<Ray<N>>, probe: &[Ray<N>], mean_orbit_size: Option<f64>) -> Result<Self> {
        let distinct: HashSet<&Ray<N>> = probe.iter().collect();
        let overlap = distinct.iter().filter(|r| pool.contains(**r)).count() as u64;
        Self::from_counts(pool.len() as u64, distinct.len() as u64, overlap, mean_orbit_size)
    }
}

impl fmt::Display for CaptureEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pool: {}", self.pool)?;
        writeln!(f, "probe: {}", self.probe)?;
        writeln!(f, "overlap: {}", self.overlap)?;
        writeln!(f, "fraction: {:.6}", self.fraction)?;
        writeln!(f, "orbits: {:.6e}", self.orbits)?;
        if let (Some(m), Some(r)) = (self.mean_orbit_size, self.rays) {
            writeln!(f, "mean_orbit_size: {m:.3}")?;
            writeln!(f, "rays: {r:.6e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_basics() {
        let h: Histogram = [3, 4, 4, 3, 4].into_iter().collect();
        assert_eq!(h.total(), 5);
        assert_eq!((h.min(), h.max()), (Some(3), Some(4)));
        assert_eq!(h.weighted_total(), 18);
        let mut csv = Vec::new();
        h.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "bucket,count\n3,2\n4,3\n");
    }

    #[test]
    fn full_overlap_returns_pool() {
        let e = CaptureEstimate::from_counts(500, 500, 500, Some(2.0)).unwrap();
        assert_eq!(e.orbits, 500.0);
        assert_eq!(e.rays, Some(1000.0));
    }

    #[test]
    fn degenerate_counts() {
        assert!(matches!(CaptureEstimate::from_counts(10, 5, 0, None), Err(Error::NoOverlap)));
        assert!(CaptureEstimate::from_counts(10, 5, 6, None).is_err());
    }
}
