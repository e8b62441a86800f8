use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fgcode::eval::splitmix64;

fn fgcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgcode"))
        .args(args)
        .output()
        .expect("spawn fgcode")
}

fn stdout_of(args: &[&str]) -> String {
    let out = fgcode(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn params_reports_layout() {
    let text = stdout_of(&["params", "--p", "0.9", "--n", "12"]);
    for line in ["m=7", "m2=10", "n=12", "m1=12", "d_t=0", "e_n=2"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in\n{text}");
    }
}

#[test]
fn params_from_explicit_m() {
    let text = stdout_of(&["params", "--m", "1", "--m2", "2", "--n", "2"]);
    assert!(text.contains("m=1\n") && text.contains("e_n=1\n"), "{text}");
}

#[test]
fn table_lists_every_value() {
    let text = stdout_of(&["table", "--p", "0.5", "--n", "2"]);
    assert_eq!(text, "value\tcodeword\tlength\n0\t0\t1\n1\t10\t2\n2\t11\t2\nkraft=1\n");
}

#[test]
fn table_compare_adds_columns() {
    let text = stdout_of(&["table", "--p", "0.88", "--n", "6", "--compare"]);
    assert!(text.starts_with("value\tcodeword\tlength\thuffman\tgolomb\n"));
    assert!(text.contains("L_H(p,n)=2.381"), "{text}");
    assert!(text.ends_with("kraft=1\n"));
}

#[test]
fn table_for_empty_universe() {
    let text = stdout_of(&["table", "--p", "0.9", "--n", "0"]);
    assert_eq!(text, "value\tcodeword\tlength\n0\t-\t0\nkraft=1\n");
}

#[test]
fn sidecar_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let (mut values, mut bounds) = (String::new(), String::new());
    let mut state = 7u64;
    for _ in 0..10_000 {
        state = splitmix64(state);
        let bound = state % 5000;
        state = splitmix64(state);
        let value = ((u128::from(state) * u128::from(bound + 1)) >> 64) as u64;
        values.push_str(&format!("{value}\n"));
        bounds.push_str(&format!("{bound}\n"));
    }
    let (vin, bin) = (dir.path().join("v.txt"), dir.path().join("b.txt"));
    let (packed, back) = (dir.path().join("v.fgc"), dir.path().join("back.txt"));
    fs::write(&vin, &values).unwrap();
    fs::write(&bin, &bounds).unwrap();

    stdout_of(&["encode", "--p", "0.97", "--bounds", path(&bin), "-i", path(&vin), "-o", path(&packed)]);
    stdout_of(&["decode", "--bounds", path(&bin), "-i", path(&packed), "-o", path(&back)]);
    assert_eq!(fs::read_to_string(&back).unwrap(), values);

    // Without the sidecar the container cannot be decoded.
    let out = fgcode(&["decode", "-i", path(&packed)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn truncated_container_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let (vin, packed) = (dir.path().join("v.txt"), dir.path().join("v.fgc"));
    fs::write(&vin, "5\n0\n9\n").unwrap();
    stdout_of(&["encode", "--p", "0.9", "--n", "9", "-i", path(&vin), "-o", path(&packed)]);
    let mut bytes = fs::read(&packed).unwrap();
    bytes.truncate(20);
    fs::write(&packed, bytes).unwrap();
    let out = fgcode(&["decode", "-i", path(&packed)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("fgcode: "));
}

#[test]
fn bound_violation_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let vin = dir.path().join("v.txt");
    fs::write(&vin, "1\n\n12\n").unwrap();
    let out = fgcode(&["encode", "--p", "0.9", "--n", "10", "-i", path(&vin)]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("input line 3: value 12 exceeds bound 10"), "{err}");
}

#[test]
fn eval_is_deterministic() {
    let args = ["eval", "--comparison", "entropy", "--num-p", "200", "--format", "csv"];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    assert!(a.starts_with("bin_high,percent,sample_p,sample_n\n"));

    let other_seed = stdout_of(&["eval", "--comparison", "entropy", "--num-p", "200", "--format", "csv", "--seed", "1"]);
    assert_ne!(a, other_seed);
}

#[test]
fn eval_single_p() {
    let text = stdout_of(&["eval", "--num-p", "1"]);
    assert!(text.contains("aggregate ratio:"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["params"][..],
        &["params", "--p", "1.5"],
        &["params", "--m", "7", "--m2", "20"],
        &["eval", "--num-p", "0"],
        &["eval", "--comparison", "arithmetic"],
        &["encode", "--p", "0.9"],
        &["frobnicate"],
    ] {
        let out = fgcode(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
