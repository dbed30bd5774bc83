use std::process::{Command, Output};

use sdf_core::reference_levels;

fn sdf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdf"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and rows of CSV output, metadata lines dropped.
fn csv(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn h2_block_matches_reference() {
    let o = sdf(&[
        "levels",
        "--molecule",
        "H2",
        "--n",
        "0,5,7",
        "--l",
        "0,5,10",
        "--methods",
        "nu,oracle",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert_eq!(rows.len(), 9);
    let reference = reference_levels();
    for r in &rows {
        let (n, l): (u32, u32) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let t = reference
            .iter()
            .find(|t| t.molecule == "H2" && t.n == n && t.l == l)
            .unwrap();
        let nu: f64 = r[column(&h, "e_nu")].parse().unwrap();
        let oracle: f64 = r[column(&h, "e_oracle")].parse().unwrap();
        assert!((nu - t.energy_nu()).abs() < 1e-3, "{r:?}");
        assert!((oracle - t.energy_ap()).abs() < 1e-3, "{r:?}");
        let diff: f64 = r[column(&h, "nu_minus_oracle")].parse().unwrap();
        assert!((diff - (nu - oracle)).abs() < 1e-10);
    }
}

#[test]
fn unknown_molecule_exits_2() {
    let o = sdf(&["levels", "--molecule", "XX", "--n", "0", "--l", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("LiH") && err.contains("CO"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sdf(&["levels"]).status.code(), Some(2));
    assert_eq!(
        sdf(&["curves", "--molecule", "H2", "--r-min", "3", "--r-max", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sdf(&["validate", "--scope", "quick"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sdf(&["levels", "--molecule", "H2", "--d0", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn lih_corner_state() {
    let o = sdf(&[
        "levels",
        "--molecule",
        "LiH",
        "--n",
        "7",
        "--l",
        "10",
        "--methods",
        "nu",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    let e: f64 = rows[0][column(&h, "e_nu")].parse().unwrap();
    assert!((e + 1.14444).abs() < 1e-4, "{e}");
}

#[test]
fn table3_is_deterministic_and_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = sdf(&["table3", "--format", "csv", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8(o.stderr)
            .unwrap()
            .contains("max |oracle - ap_ref|"));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let h: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 36);
    for r in &rows {
        for name in ["nu_dev", "oracle_dev"] {
            let d: f64 = r[column(&h, name)].parse().unwrap();
            assert!(d.abs() < 1e-3, "{name} {r:?}");
        }
        let nu: f64 = r[column(&h, "nu")].parse().unwrap();
        assert!(nu > 0.0, "table3 prints -E");
    }
}

#[test]
fn curves_shape() {
    // r_e = 0.7416 falls exactly on this grid
    let o = sdf(&[
        "curves",
        "--molecule",
        "H2",
        "--r-min",
        "0.2416",
        "--r-max",
        "5.2416",
        "--points",
        "501",
        "--l",
        "0,5,10",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert_eq!(
        h,
        ["r", "v_sdf", "v_morse", "v_eff_l0", "v_eff_l5", "v_eff_l10"]
    );
    let num = |r: &Vec<String>, i: usize| -> f64 { r[i].parse().unwrap() };
    let depth = 4.74441001;
    let at_re = rows
        .iter()
        .find(|r| (num(r, 0) - 0.7416).abs() < 1e-9)
        .unwrap();
    assert!((num(at_re, 1) + depth).abs() < 1e-10);
    assert!(num(at_re, 2).abs() < 1e-10);
    let mut prev = 0.0;
    for r in &rows {
        assert!(num(r, 0) > prev);
        prev = num(r, 0);
        assert_eq!(num(r, 3), num(r, 1));
        assert!(num(r, 5) > num(r, 4) && num(r, 4) > num(r, 1));
    }
    let o = sdf(&[
        "curves",
        "--molecule",
        "H2",
        "--r-min",
        "0.2",
        "--r-max",
        "5",
        "--points",
        "500",
        "--format",
        "csv",
    ]);
    let (_, rows) = csv(&o);
    let first = &rows[0];
    assert!(num(first, 1) > 10.0 && num(first, 2) < 11.0 * depth);
}

#[test]
fn wavefunction_dump() {
    let o = sdf(&[
        "wavefunction",
        "--molecule",
        "CO",
        "--n",
        "5",
        "--l",
        "10",
        "--r-min",
        "0.8",
        "--r-max",
        "1.6",
        "--points",
        "200",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv(&o);
    assert_eq!(h, ["r", "r_nu", "r_nu_hypergeometric"]);
    assert_eq!(rows.len(), 200);
    let o = sdf(&["wavefunction", "--molecule", "H2", "--n", "60"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_fast_and_injected_fault() {
    let o = sdf(&["validate", "--scope", "fast", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = sdf(&[
        "validate", "--scope", "fast", "--d0", "0.5", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let (h, rows) = csv(&o);
    let status =
        |name: &str| rows.iter().find(|r| r[0] == name).unwrap()[column(&h, "status")].clone();
    assert_eq!(status("table_nu_l_positive"), "fail");
    assert_eq!(status("table_nu_l0"), "pass");
    assert_eq!(status("table_ap_l0"), "pass");
}

#[test]
fn config_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("db.toml");
    std::fs::write(
        &path,
        "[[molecule]]\nname = \"X2\"\nmu_amu = 1.0\nalpha_per_angstrom = 2.0\nre_angstrom = 0.8\nD_cm1 = 30000.0\n",
    )
    .unwrap();
    let o = sdf(&[
        "levels",
        "--config",
        path.to_str().unwrap(),
        "--molecule",
        "X2",
        "--n",
        "0",
        "--l",
        "0",
        "--methods",
        "nu,oracle",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        sdf(&[
            "levels",
            "--config",
            path.to_str().unwrap(),
            "--molecule",
            "H2"
        ])
        .status
        .code(),
        Some(2)
    );
    std::fs::write(&path, "not toml [").unwrap();
    assert_eq!(
        sdf(&[
            "levels",
            "--config",
            path.to_str().unwrap(),
            "--molecule",
            "X2"
        ])
        .status
        .code(),
        Some(2)
    );
}
