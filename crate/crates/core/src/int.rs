//! Exact integer backends.
//!
//! Everything downstream is generic over [`Int`]. Two backends are provided:
//! [`BigInt`] (arbitrary precision, never overflows) and `i128`, whose
//! operations are checked and surface [`Error::Overflow`] instead of wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

pub use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait Int:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + ToPrimitive
    + From<i64>
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + ToPrimitive
        + From<i64>
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub fn add<N: Int>(a: &N, b: &N) -> Result<N> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub fn sub<N: Int>(a: &N, b: &N) -> Result<N> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

#[inline]
pub fn mul<N: Int>(a: &N, b: &N) -> Result<N> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `a*b - c*d`, checked.
#[inline]
pub fn cross<N: Int>(a: &N, b: &N, c: &N, d: &N) -> Result<N> {
    sub(&mul(a, b)?, &mul(c, d)?)
}

/// Dot product that skips zero coefficients of `row`.
#[inline]
pub fn dot<N: Int>(row: &[N], x: &[N]) -> Result<N> {
    debug_assert_eq!(row.len(), x.len());
    let mut acc = N::zero();
    for (a, b) in row.iter().zip(x) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = add(&acc, &mul(a, b)?)?;
    }
    Ok(acc)
}

/// Non-negative gcd of all entries; zero for the zero vector.
pub fn gcd_all<N: Int>(v: &[N]) -> N {
    let mut g = N::zero();
    for x in v {
        if x.is_zero() {
            continue;
        }
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides by the positive gcd, keeping the direction of the vector.
pub fn reduce_by_gcd<N: Int>(v: &mut [N]) -> Result<()> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
    Ok(())
}

/// Primitive representative of the line through `v`: gcd removed, first
/// nonzero coordinate positive.
pub fn normalize_primitive<N: Int>(v: &[N]) -> Result<Vec<N>> {
    let mut out = v.to_vec();
    reduce_by_gcd(&mut out)?;
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -x.clone();
        }
    }
    Ok(out)
}

pub fn from_i64_slice<N: Int>(v: &[i64]) -> Vec<N> {
    v.iter().map(|&x| N::from(x)).collect()
}

/// Converts between backends through the decimal representation, which both
/// backends share exactly.
pub fn convert<A: Int, B: Int>(v: &[A]) -> Result<Vec<B>> {
    v.iter()
        .map(|x| {
            if let Some(small) = x.to_i64() {
                Ok(B::from(small))
            } else {
                x.to_string().parse::<B>().map_err(|_| Error::Overflow)
            }
        })
        .collect()
}

pub fn to_i64_vec<N: Int>(v: &[N]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_primitive(&[2i128, 4, 6]).unwrap(), vec![1, 2, 3]);
        assert_eq!(normalize_primitive(&[-1i128, 0, 2]).unwrap(), vec![1, 0, -2]);
        let once = normalize_primitive(&[0i128, -6, 9, 3]).unwrap();
        assert_eq!(normalize_primitive(&once).unwrap(), once);
        assert!(matches!(normalize_primitive(&[0i128, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn reduce_keeps_direction() {
        let mut v = vec![BigInt::from(-4), BigInt::from(6)];
        reduce_by_gcd(&mut v).unwrap();
        assert_eq!(v, vec![BigInt::from(-2), BigInt::from(3)]);
    }

    #[test]
    fn i128_overflow_is_reported() {
        assert!(matches!(mul(&i128::MAX, &2), Err(Error::Overflow)));
        assert!(matches!(add(&i128::MAX, &1), Err(Error::Overflow)));
        assert_eq!(mul(&BigInt::from(i64::MAX), &BigInt::from(4)).unwrap().to_string(), "36893488147419103228");
    }

    #[test]
    fn conversion_between_backends() {
        let big = vec![BigInt::from(7), "170141183460469231731687303715884105727".parse().unwrap()];
        let small: Vec<i128> = convert(&big).unwrap();
        assert_eq!(small[1], i128::MAX);
        let too_big: Vec<BigInt> = vec!["170141183460469231731687303715884105728".parse().unwrap()];
        assert!(convert::<BigInt, i128>(&too_big).is_err());
    }
}
