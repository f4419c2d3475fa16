mod common;

use proptest::prelude::*;
use subcone::bits::BitString;
use subcone::io;
use subcone::symmetry::SymmetryGroup;
use subcone::{ConeSpec, Ray};

fn vec_for(n: usize) -> impl Strategy<Value = Vec<i64>> {
    let d = (1usize << n) - n - 1;
    prop::collection::vec(-4i64..6, d)
}

fn nonzero(v: &[i64]) -> bool {
    v.iter().any(|&x| x != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_bits_are_the_tight_rows(v in vec_for(4)) {
        let s = ConeSpec::new(4).unwrap();
        let cone = s.cone::<i128>();
        let x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        let p = cone.products(&x).unwrap();
        let inc = cone.incidence(&x).unwrap();
        for (i, v) in p.iter().enumerate() {
            prop_assert_eq!(inc.get(i), *v == 0);
        }
        prop_assert_eq!(cone.weight(&x).unwrap(), inc.count_ones());
    }

    #[test]
    fn symmetry_preserves_membership_and_weight(v in vec_for(4), g in 0usize..48) {
        let s = ConeSpec::new(4).unwrap();
        let cone = s.cone::<i128>();
        let grp = SymmetryGroup::new(&s);
        let x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        let e = grp.elements().nth(g).unwrap();
        let y = grp.apply(&e, &x).unwrap();
        prop_assert_eq!(cone.contains(&x).unwrap(), cone.contains(&y).unwrap());
        prop_assert_eq!(cone.weight(&x).unwrap(), cone.weight(&y).unwrap());
    }

    #[test]
    fn reflection_is_an_involution(v in vec_for(5)) {
        let s = ConeSpec::new(5).unwrap();
        let grp = SymmetryGroup::new(&s);
        let x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        prop_assert_eq!(grp.apply_reflection(&grp.apply_reflection(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn expand_reduce_round_trip(v in vec_for(5)) {
        let s = ConeSpec::new(5).unwrap();
        let x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        prop_assert_eq!(s.reduce(&s.expand(&x).unwrap()), x);
    }

    #[test]
    fn text_and_binary_ray_files_round_trip(vs in prop::collection::vec(vec_for(4), 1..12)) {
        let rays: Vec<Ray<i128>> = vs.iter().filter(|v| nonzero(v)).map(|v| Ray::from_i64(v).unwrap()).collect();
        let mut text = Vec::new();
        io::write_rays(&rays, &mut text).unwrap();
        prop_assert_eq!(&io::read_rays::<_, i128>(&text[..], Some(11)).unwrap(), &rays);
        let mut bin = Vec::new();
        io::write_binary_rays(&rays, 11, &mut bin).unwrap();
        prop_assert_eq!(&io::read_binary_rays::<_, i128>(&bin[..]).unwrap(), &rays);
    }

    #[test]
    fn pair_file_round_trip(vs in prop::collection::vec(vec_for(3), 1..8), next in prop::option::of(vec_for(3))) {
        let rays: Vec<Ray<i128>> = vs.iter().filter(|v| nonzero(v)).map(|v| Ray::from_i64(v).unwrap()).collect();
        let s = ConeSpec::new(3).unwrap();
        let pair = io::PairFile {
            dim: 4,
            rows: s.cone::<i128>().rows().to_vec(),
            rays,
            next_row: next.map(|v| v.iter().map(|&a| a as i128).collect()),
        };
        let mut buf = Vec::new();
        io::write_pair(&pair, &mut buf).unwrap();
        prop_assert_eq!(io::read_pair::<_, i128>(&buf[..]).unwrap(), pair);
    }

    #[test]
    fn bitstring_ops(a in prop::collection::vec(any::<bool>(), 0..200), b in prop::collection::vec(any::<bool>(), 0..200)) {
        let n = a.len().min(b.len());
        let x = BitString::from_bools(a[..n].iter().copied());
        let y = BitString::from_bools(b[..n].iter().copied());
        let both = (0..n).filter(|&i| a[i] && b[i]).count();
        prop_assert_eq!(x.and_count(&y), both);
        prop_assert_eq!(x.and(&y).count_ones(), both);
        prop_assert_eq!(x.and(&y).is_subset(&x), true);
        prop_assert_eq!(x.iter_ones().count(), x.count_ones());
    }
}

#[test]
fn pool_file_round_trip() {
    let s = ConeSpec::new(4).unwrap();
    let g = SymmetryGroup::new(&s);
    let recs = g.orbits_of(&common::rays(4, subcone::OrderKind::TOpt), &s).unwrap();
    let mut buf = Vec::new();
    io::write_pool(&recs, &mut buf).unwrap();
    let back = io::read_pool::<_, i128>(&buf[..]).unwrap();
    assert_eq!(back.len(), recs.len());
    for ((ray, ann), rec) in back.iter().zip(&recs) {
        assert_eq!(ray, &rec.canonical);
        assert_eq!(*ann, Some((rec.size, rec.weight)));
    }
}
