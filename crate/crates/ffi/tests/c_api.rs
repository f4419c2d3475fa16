use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use subcone_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(subcone_last_error()) }.to_string_lossy().into_owned()
}

fn spec(n: usize) -> *mut SubconeSpec {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { subcone_spec_new(n, &mut s) }, SubconeStatus::Ok);
    s
}

fn ray(rays: *const SubconeRays, k: usize) -> Vec<i64> {
    let d = unsafe { subcone_rays_dim(rays) };
    let mut v = vec![0i64; d];
    assert_eq!(unsafe { subcone_rays_get(rays, k, v.as_mut_ptr(), d) }, SubconeStatus::Ok);
    v
}

#[test]
fn spec_shape() {
    let s = spec(4);
    unsafe {
        assert_eq!(subcone_spec_dim(s), 11);
        assert_eq!(subcone_spec_rows(s), 24);
        let mut row = vec![0i64; 11];
        assert_eq!(subcone_spec_matrix_row(s, 0, row.as_mut_ptr(), 11), SubconeStatus::Ok);
        assert_eq!(row, subcone::ConeSpec::new(4).unwrap().row(0));
        assert_eq!(subcone_spec_matrix_row(s, 24, row.as_mut_ptr(), 11), SubconeStatus::Malformed);
        subcone_spec_free(s);
    }
}

#[test]
fn bad_base_set_size() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { subcone_spec_new(1, &mut s) }, SubconeStatus::Malformed);
    assert!(s.is_null());
    assert!(last_error().contains("base-set size"));
}

#[test]
fn enumerate_and_reduce() {
    let s = spec(4);
    unsafe {
        let mut rays = ptr::null_mut();
        assert_eq!(subcone_enumerate(s, SubconeOrder::TOpt, 0, 0, &mut rays), SubconeStatus::Ok);
        assert_eq!(subcone_rays_len(rays), 37);
        for k in 0..37 {
            let v = ray(rays, k);
            let mut ok = false;
            assert_eq!(subcone_verify_extremal(s, v.as_ptr(), v.len(), &mut ok), SubconeStatus::Ok);
            assert!(ok);
            let mut w = 0;
            assert_eq!(subcone_weight(s, v.as_ptr(), v.len(), &mut w), SubconeStatus::Ok);
            assert!((10..=20).contains(&w));
        }

        let mut orbits = ptr::null_mut();
        assert_eq!(subcone_rays_orbits(s, rays, &mut orbits), SubconeStatus::Ok);
        assert_eq!(subcone_rays_len(orbits), 7);
        let mut total = 0;
        for k in 0..7 {
            let v = ray(orbits, k);
            let mut c = vec![0i64; v.len()];
            let mut size = 0;
            assert_eq!(subcone_canonical_form(s, v.as_ptr(), v.len(), c.as_mut_ptr(), &mut size), SubconeStatus::Ok);
            assert_eq!(c, v);
            total += size;
        }
        assert_eq!(total, 37);
        subcone_rays_free(orbits);
        subcone_rays_free(rays);
        subcone_spec_free(s);
    }
}

#[test]
fn budget_keeps_partial_rays() {
    let s = spec(4);
    unsafe {
        let mut rays = ptr::null_mut();
        assert_eq!(subcone_enumerate(s, SubconeOrder::Recursive, 0, 12, &mut rays), SubconeStatus::BudgetExhausted);
        assert!(subcone_rays_len(rays) > 12);
        subcone_rays_free(rays);
        subcone_spec_free(s);
    }
}

#[test]
fn argument_errors() {
    let s = spec(3);
    unsafe {
        let v = [1i64, 1, 1];
        let mut ok = false;
        assert_eq!(subcone_verify_extremal(s, v.as_ptr(), 3, &mut ok), SubconeStatus::Malformed);
        assert!(last_error().contains("dimension"));
        assert_eq!(subcone_verify_extremal(ptr::null(), v.as_ptr(), 3, &mut ok), SubconeStatus::Malformed);
        assert_eq!(subcone_rays_len(ptr::null()), 0);
        subcone_spec_free(ptr::null_mut());
        subcone_rays_free(ptr::null_mut());
        subcone_spec_free(s);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(subcone_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/subcone.h")).unwrap();
    for f in [
        "subcone_spec_new",
        "subcone_spec_free",
        "subcone_spec_dim",
        "subcone_spec_rows",
        "subcone_spec_matrix_row",
        "subcone_enumerate",
        "subcone_rays_orbits",
        "subcone_rays_len",
        "subcone_rays_dim",
        "subcone_rays_get",
        "subcone_rays_free",
        "subcone_verify_extremal",
        "subcone_weight",
        "subcone_canonical_form",
        "subcone_last_error",
        "subcone_version",
        "SUBCONE_STATUS_BUDGET_EXHAUSTED = 2",
        "SUBCONE_STATUS_OVERFLOW = 4",
    ] {
        assert!(header.contains(f), "header lacks {f}");
    }
}

/// The header must compile as C when a C compiler is around.
#[test]
fn header_is_valid_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"subcone.h\"\nint main(void) { SubconeSpec *s = 0; return subcone_spec_new(4, &s) == SUBCONE_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "cc rejected the header"),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
}
