use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wenodec_core::bench::case;
use wenodec_core::riemann::exact_state;
use wenodec_core::GasModel;

fn wenodec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wenodec"))
        .args(args)
        .env_remove("WENODEC_THREADS")
        .output()
        .expect("binary runs")
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn bogus_flux_is_a_usage_error() {
    let out = wenodec(&["run", "--case", "rp1", "--flux", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["lxf", "force", "rus", "hll", "cu", "ldcu", "hllc", "exact"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn unknown_flags_and_cases_are_usage_errors() {
    assert_eq!(
        wenodec(&["run", "--case", "rp1", "--frobnicate"]).status.code(),
        Some(2)
    );
    assert_eq!(wenodec(&["run", "--case", "rp99"]).status.code(), Some(2));
    assert_eq!(wenodec(&["converge", "--case", "advection"]).status.code(), Some(2));
    assert_eq!(wenodec(&["--help"]).status.code(), Some(0));
}

#[test]
fn stationary_contact_profile_matches_initial_profile() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let common = ["run", "--case", "rp6", "--order", "3", "--flux", "hllc", "--N", "100"];
    let out = wenodec(&[&common[..], &["--out", a.to_str().unwrap()]].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = wenodec(&[&common[..], &["--t-final", "0", "--out", b.to_str().unwrap()]].concat());
    assert!(out.status.success());
    let name = "rp6_o3_hllc_N100.csv";
    let header = fs::read_to_string(a.join(name)).unwrap();
    assert!(header.starts_with("x,rho,u,p,rho_exact,u_exact,p_exact\n"));
    let (fa, fb) = (rows(&a.join(name)), rows(&b.join(name)));
    assert_eq!(fa.len(), 100);
    for (ra, rb) in fa.iter().zip(&fb) {
        for k in 0..4 {
            assert!((ra[k] - rb[k]).abs() < 1e-12, "{d}: {ra:?} vs {rb:?}");
        }
    }
}

#[test]
fn two_dimensional_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = wenodec(&[
        "run", "--case", "vortex", "--order", "3", "--flux", "hll", "--N", "12", "--out", d,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let slice = rows(&dir.path().join("vortex_o3_hll_N12_slice.csv"));
    assert_eq!(slice.len(), 2 * 12 - 1);
    assert!(slice.iter().all(|r| (r[0] - r[1]).abs() < 1e-12));
    assert_eq!(rows(&dir.path().join("vortex_o3_hll_N12_field.csv")).len(), 144);

    let out = wenodec(&[
        "run",
        "--case",
        "explosion",
        "--order",
        "5",
        "--flux",
        "force",
        "--N",
        "10",
        "--out",
        d,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let field = rows(&dir.path().join("explosion_o5_force_N10_field.csv"));
    assert_eq!(field.len(), 100);
    assert!(field.iter().all(|r| r.len() == 6 && r[2] > 0.0 && r[5] > 0.0));
}

#[test]
fn convergence_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        wenodec(&[
            "converge",
            "--case",
            "advection",
            "--orders",
            "3",
            "--fluxes",
            "hll,rus",
            "--N",
            "20,40",
            "--out",
            out,
        ])
    };
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(args(a.to_str().unwrap()).status.success());
    assert!(args(b.to_str().unwrap()).status.success());
    for flux in ["hll", "rus"] {
        let name = format!("advection_o3_{flux}_convergence.csv");
        let ta = fs::read(a.join(&name)).unwrap();
        assert_eq!(ta, fs::read(b.join(&name)).unwrap());
        let text = String::from_utf8(ta).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "N,L1,order1,L2,order2,Linf,orderInf,runtime,crashed");
        assert_eq!(lines.len(), 3);
        let first: Vec<&str> = lines[1].split(',').collect();
        let second: Vec<&str> = lines[2].split(',').collect();
        assert_eq!((first[0], second[0]), ("20", "40"));
        assert!(first[2].is_empty() && first[4].is_empty() && first[6].is_empty());
        for k in [2, 4, 6] {
            let o: f64 = second[k].parse().unwrap();
            assert!(o.is_finite(), "{o}");
        }
        assert_eq!((second[7], second[8]), ("", "false"));
    }
}

#[test]
fn threads_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_wenodec"))
            .args([
                "compare",
                "--case",
                "rp1",
                "--orders",
                "3",
                "--fluxes",
                "hll,force",
                "--N",
                "40",
                "--out",
                d,
            ])
            .env("WENODEC_THREADS", threads)
            .output()
            .unwrap()
    };
    assert!(run("2").status.success());
    let summary = fs::read_to_string(dir.path().join("rp1_compare_N40.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(summary.lines().nth(1).unwrap().starts_with("3,hll,40,"));
    assert_eq!(run("lots").status.code(), Some(1));
}

#[test]
fn riemann_exact_matches_sampler() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rp1.csv");
    let out = wenodec(&[
        "riemann-exact",
        "--case",
        "rp1",
        "--samples",
        "50",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let spec = case("rp1").unwrap();
    let (states, x_d) = spec.riemann_data().unwrap();
    let data = rows(&path);
    assert_eq!(data.len(), 50);
    for r in &data {
        let e = exact_state(&states, (r[0] - x_d) / 0.2, &GasModel::default()).unwrap();
        assert_eq!((r[1], r[2], r[3]), (e.rho, e.u, e.p));
    }
    let path = dir.path().join("custom.csv");
    let out = wenodec(&[
        "riemann-exact",
        "--left",
        "1,0,1",
        "--right",
        "0.125,0,0.1",
        "--t",
        "0.25",
        "--samples",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(rows(&path).len(), 10);
}

#[test]
fn runtime_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let sub = blocker.join("sub");
    let out = wenodec(&[
        "run",
        "--case",
        "rp1",
        "--order",
        "3",
        "--N",
        "20",
        "--out",
        sub.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let d = dir.path().to_str().unwrap();
    let out = wenodec(&[
        "run", "--case", "rp1", "--order", "3", "--flux", "hll", "--cfl", "4", "--out", d,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("crashed"));

    let out = wenodec(&["run", "--case", "rp1", "--order", "4", "--out", d]);
    assert_eq!(out.status.code(), Some(1));
}
