use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use nnvc_ffi::*;

fn last_error() -> String {
    let p = nnvc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn bounds_and_lambert() {
    let mut b = NnvcBounds::default();
    unsafe {
        assert_eq!(nnvc_bounds(2, 3, &mut b), NnvcStatus::Ok);
        assert_eq!(b.lower, 6);
        assert_eq!(b.upper_tight, 55);
        assert!(b.upper_loose >= b.upper_tight_real);
        assert_eq!(nnvc_bounds(2, 2, &mut b), NnvcStatus::Unsupported);
        assert!(!last_error().is_empty());
        let mut w = 0.0;
        assert_eq!(nnvc_lambert_wm1(-0.1, &mut w), NnvcStatus::Ok);
        assert!((w - -3.577152063957297).abs() < 1e-12);
        assert_eq!(nnvc_lambert_wm1(0.5, &mut w), NnvcStatus::InvalidArgument);
        assert_eq!(nnvc_bounds(2, 3, ptr::null_mut()), NnvcStatus::NullPointer);
    }
}

#[test]
fn odd_polygon_certificate_round_trip() {
    unsafe {
        let mut arr = ptr::null_mut();
        assert_eq!(nnvc_odd_polygon_arrangement(4, 1.0, &mut arr), NnvcStatus::Ok);
        assert_eq!(nnvc_arrangement_len(arr), 9);
        assert_eq!(nnvc_arrangement_dim(arr), 2);
        let mut xy = [0.0; 2];
        assert_eq!(nnvc_arrangement_point(arr, 0, xy.as_mut_ptr(), 2), NnvcStatus::Ok);
        assert!(xy[0].abs() < 1e-15 && (xy[1] - 1.0).abs() < 1e-15);
        assert_eq!(nnvc_arrangement_point(arr, 0, xy.as_mut_ptr(), 1), NnvcStatus::BufferTooSmall);

        let mut cert = ptr::null_mut();
        assert_eq!(nnvc_certify(arr, 1e-6, &mut cert), NnvcStatus::Ok);
        assert!(nnvc_certificate_verified(cert));
        assert_eq!(nnvc_certificate_witness_count(cert), 512);
        assert!(nnvc_certificate_min_margin(cert) >= 1e-6);

        let mut len = 0;
        assert_eq!(nnvc_certificate_to_json(cert, ptr::null_mut(), 0, &mut len), NnvcStatus::Ok);
        let mut small = vec![0 as std::ffi::c_char; 4];
        assert_eq!(nnvc_certificate_to_json(cert, small.as_mut_ptr(), 4, &mut len), NnvcStatus::BufferTooSmall);
        let mut buf = vec![0 as std::ffi::c_char; len];
        assert_eq!(nnvc_certificate_to_json(cert, buf.as_mut_ptr(), len, &mut len), NnvcStatus::Ok);

        let mut back = ptr::null_mut();
        assert_eq!(nnvc_certificate_from_json(buf.as_ptr(), &mut back), NnvcStatus::Ok);
        let (mut ok, mut first) = (false, 0u64);
        assert_eq!(nnvc_certificate_reverify(back, 0.0, &mut ok, &mut first), NnvcStatus::Ok);
        assert!(ok);
        assert_eq!(nnvc_certificate_reverify(back, 10.0, &mut ok, &mut first), NnvcStatus::Ok);
        assert!(!ok);

        let mut w = ptr::null_mut();
        assert_eq!(nnvc_certificate_witness(back, 0x0a5, &mut w), NnvcStatus::Ok);
        assert!(nnvc_prototype_set_len(w) <= 4);
        let mut margin = 0.0;
        assert_eq!(nnvc_labeling_margin(w, arr, 0x0a5, &mut margin), NnvcStatus::Ok);
        assert!(margin >= 1e-6);
        assert_eq!(nnvc_labeling_margin(w, arr, 0x0a5 ^ 1, &mut margin), NnvcStatus::Ok);
        assert!(margin < 0.0);

        nnvc_prototype_set_free(w);
        nnvc_certificate_free(back);
        nnvc_certificate_free(cert);
        nnvc_arrangement_free(arr);
    }
}

#[test]
fn prototype_sets_and_classify() {
    unsafe {
        let coords = [0.0, 0.0, 2.0, 0.0];
        let labels = [1i8, -1];
        let mut set = ptr::null_mut();
        assert_eq!(nnvc_prototype_set_new(coords.as_ptr(), labels.as_ptr(), 2, 2, &mut set), NnvcStatus::Ok);
        let (mut l, mut mg) = (0i8, 0.0);
        assert_eq!(nnvc_classify(set, [0.5, 0.0].as_ptr(), 2, &mut l, &mut mg), NnvcStatus::Ok);
        assert_eq!(l, 1);
        assert!((mg - 1.0).abs() < 1e-15);
        assert_eq!(nnvc_classify(set, [0.5].as_ptr(), 1, &mut l, &mut mg), NnvcStatus::InvalidArgument);
        let mut xy = [0.0; 2];
        assert_eq!(nnvc_prototype_set_get(set, 1, xy.as_mut_ptr(), 2, &mut l), NnvcStatus::Ok);
        assert_eq!((xy, l), ([2.0, 0.0], -1));
        nnvc_prototype_set_free(set);

        let bad = [1i8, 0];
        assert_eq!(nnvc_prototype_set_new(coords.as_ptr(), bad.as_ptr(), 2, 2, &mut set), NnvcStatus::InvalidArgument);
        assert_eq!(nnvc_prototype_set_new(ptr::null(), labels.as_ptr(), 2, 2, &mut set), NnvcStatus::NullPointer);
    }
}

#[test]
fn unsupported_and_corrupt_inputs() {
    unsafe {
        let mut arr = ptr::null_mut();
        assert_eq!(nnvc_odd_polygon_arrangement(3, 1.0, &mut arr), NnvcStatus::Unsupported);
        let pts = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        assert_eq!(nnvc_arrangement_from_points(pts.as_ptr(), 3, 2, &mut arr), NnvcStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(nnvc_certify(arr, 1e-6, &mut cert), NnvcStatus::Unsupported);
        nnvc_arrangement_free(arr);

        let junk = CString::new("{\"schema_version\": 1}").unwrap();
        assert_eq!(nnvc_certificate_from_json(junk.as_ptr(), &mut cert), NnvcStatus::Serialization);
        nnvc_certificate_free(ptr::null_mut());
        assert_eq!(nnvc_certificate_witness_count(ptr::null()), 0);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nnvc.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src.split("extern \"C\" fn ").skip(1).map(|s| s.split('(').next().unwrap()).collect();
    assert!(exports.len() > 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libnnvc_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler not available");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
