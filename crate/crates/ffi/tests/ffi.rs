use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ultrapic_ffi::*;

const THREE_SLOPES: &str = "# 2 + z + 4z^3\nprime: 2\nterm: 0 2\nterm: 1 1\nterm: 3 4\n";
const QUADRATIC: &str = "prime: 3\nterm: 0 1\nterm: 1 3\nterm: 2 1\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

struct Handle(*mut UpSeries);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { up_series_free(self.0) }
    }
}

fn parse(text: &str) -> Handle {
    let mut out = ptr::null_mut();
    let src = c(text);
    assert_eq!(unsafe { up_series_parse(src.as_ptr(), &mut out) }, UpStatus::Ok);
    assert!(!out.is_null());
    Handle(out)
}

/// Take ownership of a library string.
unsafe fn take(s: *mut libc::c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    up_string_free(s);
    owned
}

fn last_error() -> Option<String> {
    let p = up_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn envelope_and_zero_count() {
    let f = parse(THREE_SLOPES);
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(up_envelope_value(f.0, c("0").as_ptr(), &mut v), UpStatus::Ok);
        assert_eq!(take(v), "0");
        assert_eq!(up_envelope_value(f.0, c("2").as_ptr(), &mut v), UpStatus::Ok);
        assert_eq!(take(v), "1");

        let mut n = 0u64;
        assert_eq!(up_zero_count(f.0, c("1/2").as_ptr(), c("3/2").as_ptr(), &mut n), UpStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(up_zero_count(f.0, ptr::null(), ptr::null(), &mut n), UpStatus::Ok);
        assert_eq!(n, 3);
        assert_eq!(
            up_zero_count(f.0, c("1").as_ptr(), c("0").as_ptr(), &mut n),
            UpStatus::InvalidArgument
        );
        assert!(last_error().is_some());
    }
}

#[test]
fn image_and_membership() {
    let f = parse(QUADRATIC);
    unsafe {
        let (mut m, mut delta) = (0i64, ptr::null_mut());
        assert_eq!(up_image_disc(f.0, c("1").as_ptr(), &mut m, &mut delta), UpStatus::Ok);
        assert_eq!((m, take(delta).as_str()), (1, "2"));

        let mut inside = false;
        assert_eq!(up_contains_value(f.0, c("1").as_ptr(), c("10").as_ptr(), &mut inside), UpStatus::Ok);
        assert!(inside);
        assert_eq!(up_contains_value(f.0, c("1").as_ptr(), c("4").as_ptr(), &mut inside), UpStatus::Ok);
        assert!(!inside);
    }
}

#[test]
fn classification_and_extension() {
    let pole = parse("prime: 3\nterm: -1 1\nterm: 0 3\n");
    let essential = parse("prime: 2\nterm: 0 1\ntail-: essential 1 1\n");
    unsafe {
        let mut out = UpSingularity {
            kind: UpSingularityKind::Removable,
            order: 0,
        };
        assert_eq!(up_classify(pole.0, &mut out), UpStatus::Ok);
        assert_eq!((out.kind, out.order), (UpSingularityKind::Pole, 1));
        assert_eq!(up_extend(pole.0, c("0").as_ptr(), &mut out), UpStatus::Ok);
        assert_eq!((out.kind, out.order), (UpSingularityKind::Pole, 1));

        assert_eq!(up_classify(essential.0, &mut out), UpStatus::Ok);
        assert_eq!(out.kind, UpSingularityKind::Essential);
        let status = up_extend(essential.0, c("0").as_ptr(), &mut out);
        assert_ne!(status, UpStatus::Ok);
        assert!(last_error().is_some());

        let mut m = 0i64;
        let mut delta = ptr::null_mut();
        assert_eq!(
            up_image_disc(pole.0, c("0").as_ptr(), &mut m, &mut delta),
            UpStatus::PoleAtOrigin
        );
        assert!(delta.is_null());
    }
}

#[test]
fn text_round_trip() {
    let f = parse(THREE_SLOPES);
    let text = unsafe { take(up_series_to_text(f.0)) };
    let g = parse(&text);
    let again = unsafe { take(up_series_to_text(g.0)) };
    assert_eq!(text, again);
    assert!(text.starts_with("prime: 2\n"));
}

#[test]
fn argument_errors() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(up_series_parse(ptr::null(), &mut out), UpStatus::NullPointer);
        assert_eq!(up_series_parse(c("prime: 4\n").as_ptr(), &mut out), UpStatus::ParseError);
        assert!(last_error().unwrap().contains('4'));
        assert!(out.is_null());

        let bad = [0xffu8, 0];
        assert_eq!(up_series_parse(bad.as_ptr().cast(), &mut out), UpStatus::InvalidUtf8);

        let f = parse(QUADRATIC);
        let mut v = ptr::null_mut();
        assert_eq!(up_envelope_value(f.0, c("1/0").as_ptr(), &mut v), UpStatus::InvalidArgument);
        assert_eq!(up_envelope_value(ptr::null(), c("1").as_ptr(), &mut v), UpStatus::NullPointer);
        assert_eq!(up_envelope_value(f.0, c("1").as_ptr(), ptr::null_mut()), UpStatus::NullPointer);

        // a successful call clears the message
        assert_eq!(up_envelope_value(f.0, c("1").as_ptr(), &mut v), UpStatus::Ok);
        take(v);
        assert!(last_error().is_none());

        up_series_free(ptr::null_mut());
        up_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ultrapic.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "up_series_parse",
        "up_series_free",
        "up_series_to_text",
        "up_envelope_value",
        "up_zero_count",
        "up_classify",
        "up_extend",
        "up_image_disc",
        "up_contains_value",
        "up_last_error",
        "up_string_free",
        "typedef struct UpSeries UpSeries;",
        "UP_STATUS_WINDOW_INSUFFICIENT = 5",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }

    // Compile the header when a C compiler is around.
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        return;
    };
    if !cc.status.success() {
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let probe = dir.path().join("probe.c");
    std::fs::write(
        &probe,
        "#include \"ultrapic.h\"\nint main(void) { return up_last_error() == 0 ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&probe)
        .status()
        .unwrap();
    assert!(status.success());
}
