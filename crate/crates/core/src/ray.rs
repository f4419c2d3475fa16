use std::fmt;

use crate::error::Result;
use crate::int::{self, Int};

/// A ray of a pointed cone, stored as its primitive integer generator.
///
/// Ordering is lexicographic on the coordinate tuple, which is the order
/// used for every sorted ray list and for orbit representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray<N> {
    coords: Vec<N>,
}

impl<N: Int> Ray<N> {
    /// Divides out the gcd; the direction is kept.
    pub fn new(mut coords: Vec<N>) -> Result<Self> {
        int::reduce_by_gcd(&mut coords)?;
        Ok(Ray { coords })
    }

    /// Caller guarantees `coords` is nonzero with gcd 1.
    pub(crate) fn from_primitive(coords: Vec<N>) -> Self {
        debug_assert!(int::gcd_all(&coords).is_one());
        Ray { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(int::from_i64_slice(coords))
    }

    #[inline]
    pub fn coords(&self) -> &[N] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<N> {
        self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|x| !x.is_negative())
    }

    pub fn convert<M: Int>(&self) -> Result<Ray<M>> {
        Ok(Ray {
            coords: int::convert(&self.coords)?,
        })
    }
}

impl<N: fmt::Display> fmt::Display for Ray<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl<N: fmt::Debug> fmt::Debug for Ray<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x:?}")?;
        }
        f.write_str(">")
    }
}
