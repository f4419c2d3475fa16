mod common;

use std::collections::HashSet;

use common::spec;
use subcone::stats::{orbit_size_histogram, weight_histogram, weight_histogram_of_orbits, CaptureEstimate, Histogram};
use subcone::symmetry::SymmetryGroup;
use subcone::{Error, OrderKind};

#[test]
fn estimate_fixture() {
    let e = CaptureEstimate::from_counts(260_000_000, 2_797_684, 154_170, Some(1440.0)).unwrap();
    assert!((e.fraction - 0.055106).abs() < 1e-5);
    assert!((e.orbits / 4.718e9 - 1.0).abs() < 1e-3, "{}", e.orbits);
    assert!((e.rays.unwrap() / 6.794e12 - 1.0).abs() < 1e-3);
}

#[test]
fn estimate_rejects_bad_counts() {
    assert!(matches!(CaptureEstimate::from_counts(10, 10, 0, None), Err(Error::NoOverlap)));
    assert!(CaptureEstimate::from_counts(10, 5, 6, None).is_err());
}

#[test]
fn estimate_from_sets_counts_distinct_overlap() {
    let rays = common::rays(4, OrderKind::TOpt);
    let pool: HashSet<_> = rays[..20].iter().cloned().collect();
    let mut probe = rays[10..30].to_vec();
    probe.extend_from_slice(&rays[10..15]);
    let e = CaptureEstimate::from_sets(&pool, &probe, None).unwrap();
    assert_eq!((e.pool, e.probe, e.overlap), (20, 20, 10));
    assert_eq!(e.orbits, 40.0);
}

#[test]
fn histograms_n4() {
    let s = spec(4);
    let cone = s.cone::<i128>();
    let rays = common::rays(4, OrderKind::TOpt);
    let h = weight_histogram(&cone, &rays).unwrap();
    assert_eq!(h.total(), 37);
    assert_eq!((h.min(), h.max()), (Some(10), Some(20)));
    let recs = SymmetryGroup::new(&s).orbits_of(&rays, &s).unwrap();
    let ho = weight_histogram_of_orbits(&recs);
    assert_eq!(ho, h);
    assert_eq!(recs.len(), 7);
    let hs = orbit_size_histogram(&recs);
    assert_eq!(hs.weighted_total(), 37);
}

#[test]
fn histogram_csv() {
    let mut h = Histogram::new();
    h.add(3, 2);
    h.add(1, 5);
    let mut out = Vec::new();
    h.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().any(|l| l == "1,5"));
    assert!(text.lines().any(|l| l == "3,2"));
}
