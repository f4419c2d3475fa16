#![allow(dead_code)]

use subcone::{run_dd, ConeSpec, DdOptions, DdRun, InsertionOrder, OrderKind, Ray};

pub fn spec(n: usize) -> ConeSpec {
    ConeSpec::new(n).unwrap()
}

pub fn run(n: usize, kind: OrderKind) -> DdRun<i128> {
    let s = spec(n);
    run_dd(&s.cone(), &InsertionOrder::new(kind, &s, Some(7)), &DdOptions::default()).unwrap()
}

pub fn rays(n: usize, kind: OrderKind) -> Vec<Ray<i128>> {
    run(n, kind).state.into_rays()
}

pub fn ray(v: &[i64]) -> Ray<i128> {
    Ray::from_i64(v).unwrap()
}
