mod common;

use common::spec;
use subcone::symmetry::SymmetryGroup;
use subcone::OrderKind;

#[test]
fn group_order() {
    for (n, order) in [(3, 12), (4, 48), (5, 240)] {
        assert_eq!(SymmetryGroup::new(&spec(n)).order(), order);
    }
}

#[test]
fn orbit_counts_and_sizes() {
    for (n, orbits) in [(3, 2), (4, 7)] {
        let s = spec(n);
        let g = SymmetryGroup::new(&s);
        let rays = common::rays(n, OrderKind::TOpt);
        let recs = g.orbits_of(&rays, &s).unwrap();
        assert_eq!(recs.len(), orbits);
        assert_eq!(recs.iter().map(|r| r.size).sum::<usize>(), rays.len());
        for r in &recs {
            assert_eq!(g.order() % r.size, 0);
            assert_eq!(g.orbit(&r.canonical).unwrap().len(), r.size);
        }
    }
}

#[test]
fn reflection_is_an_involution() {
    let s = spec(5);
    let g = SymmetryGroup::new(&s);
    let x = s.interior_point::<i128>().unwrap();
    let y = g.apply_reflection(&x).unwrap();
    assert_eq!(g.apply_reflection(&y).unwrap(), x);
}

#[test]
fn group_permutes_rows() {
    let s = spec(4);
    let g = SymmetryGroup::new(&s);
    let mut all: Vec<_> = s.triplets().to_vec();
    all.sort();
    for e in g.elements() {
        let mut img: Vec<_> = s.triplets().iter().map(|&t| g.triplet_image(t, &e)).collect();
        img.sort();
        assert_eq!(img, all);
    }
}

#[test]
fn group_maps_rays_to_rays() {
    let s = spec(4);
    let g = SymmetryGroup::new(&s);
    let rays = common::rays(4, OrderKind::TOpt);
    let set: std::collections::HashSet<_> = rays.iter().cloned().collect();
    for r in &rays {
        for img in g.images(r).unwrap() {
            assert!(set.contains(&img));
        }
    }
}

#[test]
fn canonical_is_orbit_invariant() {
    let s = spec(4);
    let g = SymmetryGroup::new(&s);
    for r in common::rays(4, OrderKind::Recursive) {
        let c = g.canonical(&r).unwrap();
        for img in g.images(&r).unwrap() {
            assert_eq!(g.canonical(&img).unwrap(), c);
        }
    }
}
