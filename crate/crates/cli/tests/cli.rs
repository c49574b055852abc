use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thermdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermdec")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = thermdec(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn f(cell: &str) -> f64 {
    cell.parse().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn total_rate(doc: &Value) -> f64 {
    doc["results"]["total_emission_rate_1_s"].as_f64().unwrap()
}

#[test]
fn emission_rate_benchmark_with_provenance() {
    let doc = json(&["emission-rate", "--mass-amu", "1e9", "--temp", "1000"]);
    let rate = total_rate(&doc);
    assert!((rate / 8.89e8 - 1.0).abs() < 0.3, "{rate}");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["mass-amu"], "1e9");
    assert_eq!(doc["material_sha256"].as_str().unwrap().len(), 64);
    assert!(doc["results"]["spectrum"].as_array().unwrap().len() > 10);
}

#[test]
fn vacuum_emits_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let vacuum = write(dir.path(), "vacuum.csv", "# material: vacuum\nomega_rad_s,eps_re,eps_im\n1e12,1,0\n1e17,1,0\n");
    let doc = json(&["emission-rate", "--material", &vacuum, "--diameter", "1e-7", "--temp", "1000"]);
    assert_eq!(total_rate(&doc), 0.0);
    assert_ne!(
        doc["material_sha256"],
        json(&["emission-rate", "--diameter", "1e-7", "--temp", "1000"])["material_sha256"]
    );
}

#[test]
fn emission_rate_is_linear_in_volume() {
    let d = 80e-9;
    let d2 = format!("{}", d * 2f64.cbrt());
    let one = total_rate(&json(&["emission-rate", "--diameter", "8e-8", "--temp", "1000"]));
    let two = total_rate(&json(&["emission-rate", "--diameter", &d2, "--temp", "1000"]));
    assert!((two / one - 2.0).abs() < 2e-6, "{}", two / one);
}

#[test]
fn spectrum_csv_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum.csv");
    let status = thermdec(&["emission-rate", "--mass-amu", "1e9", "--temp", "1000", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("omega_rad_s,gamma_ph_s_per_rad_s\n"));
    assert!(String::from_utf8_lossy(&status.stderr).contains("total photon emission rate"));
}

#[test]
fn decoherence_map_limits() {
    let gamma = total_rate(&json(&["emission-rate", "--mass-amu", "1e9", "--temp", "1000"]));
    let rows = csv_rows(&thermdec(&[
        "decoherence-map", "--mass-amu", "1e9", "--temp", "1000", "--thetas", "0,pi", "--dx", "0,1e-6,1e-5,1e-3",
    ]));
    assert_eq!(rows.len(), 8);
    assert_eq!(f(&rows[0][2]), 0.0);
    let at_pi = &rows[4];
    assert_eq!((f(&at_pi[0]), f(&at_pi[1])), (std::f64::consts::PI, 0.0));
    assert!((f(&at_pi[2]) / (4.0 / 3.0 * gamma) - 1.0).abs() < 1e-6);
    // θ = 0 rows grow toward the emission rate
    let theta0: Vec<f64> = rows[..4].iter().map(|r| f(&r[2])).collect();
    assert!(theta0.windows(2).all(|w| w[1] > w[0]), "{theta0:?}");
    assert!((theta0[3] / gamma - 1.0).abs() < 0.02);
}

#[test]
fn decoherence_map_rejects_bad_grids() {
    let base = ["decoherence-map", "--diameter", "1e-7", "--temp", "1000"];
    for extra in [["--thetas", "7"], ["--dx", "-1e-6"], ["--axis", "0,0,0"], ["--thetas", "0:1"]] {
        let args: Vec<&str> = base.iter().chain(&extra).copied().collect();
        assert_eq!(thermdec(&args).status.code(), Some(1), "{extra:?}");
    }
}

#[test]
fn heating_curves_sphere_and_size_independence() {
    let rows = csv_rows(&thermdec(&["heating-curves", "--diameter", "1e-7", "--temps", "300,1000"]));
    assert_eq!(rows.len(), 4);
    for pair in rows.chunks(2) {
        assert_eq!((&pair[0][1][..], &pair[1][1][..]), ("parallel", "perpendicular"));
        assert_eq!(pair[0][2..], pair[1][2..]);
    }

    let curve = |l_par: &str, l_perp: &str| {
        csv_rows(&thermdec(&[
            "heating-curves", "--shape", "spheroid", "--l-par", l_par, "--l-perp", l_perp, "--temp", "1000",
        ]))
    };
    let (small, large) = (curve("6e-8", "3e-8"), curve("1.5e-7", "7.5e-8"));
    for (a, b) in small.iter().zip(&large) {
        for col in [2, 3] {
            assert!((f(&a[col]) / f(&b[col]) - 1.0).abs() < 1e-6, "{a:?} {b:?}");
        }
    }
}

#[test]
fn heating_curves_aspect_sweep_and_phonons() {
    let rows = csv_rows(&thermdec(&[
        "heating-curves", "--diameter", "1e-7", "--temp", "1000", "--aspects", "0.5,1,2", "--trap-freq-hz", "1e5",
    ]));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2][2..], rows[3][2..]);
    let quantum = 1.054_571_817e-34 * 2.0 * std::f64::consts::PI * 1e5;
    assert!((f(&rows[0][4]) * quantum / f(&rows[0][2]) - 1.0).abs() < 1e-9);
    let out = thermdec(&["heating-curves", "--diameter", "1e-7", "--temps", "300", "--aspects", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn large_black_body_sphere_matches_closed_form() {
    let radius = 20e-6;
    let t = 500.0;
    let doc = json(&[
        "large-particle", "--diameter", "4e-5", "--temp", "500", "--emissivity", "black-body", "--surface-polar", "8",
        "--surface-azimuth", "16",
    ]);
    let (hbar, kb, c): (f64, f64, f64) = (1.054_571_817e-34, 1.380_649e-23, 299_792_458.0);
    let zeta3 = 1.202_056_903_159_594_3;
    let pi = std::f64::consts::PI;
    let want = 4.0 * pi * radius * radius * zeta3 * (kb * t / hbar).powi(3) / (2.0 * pi * pi * c * c);
    let r = &doc["results"];
    assert!((r["total_emission_rate"].as_f64().unwrap() / want - 1.0).abs() < 1e-4);
    for key in ["h_cm", "h_rot"] {
        let h: Vec<f64> = (1..=3).map(|i| r[format!("{key}_{i}")].as_f64().unwrap()).collect();
        assert!(h.iter().all(|v| (v / h[0] - 1.0).abs() < 1e-9 && *v > 0.0), "{key} {h:?}");
    }
    assert!(doc.get("material_sha256").is_none());
}

#[test]
fn unit_permittivity_has_no_reflection() {
    let dir = tempfile::tempdir().unwrap();
    let vacuum = write(dir.path(), "eps1.csv", "omega_rad_s,eps_re,eps_im\n1e12,1,0\n1e17,1,0\n");
    let out = thermdec(&[
        "large-particle", "--material", &vacuum, "--diameter", "1e-4", "--temp", "300", "--surface-polar", "6",
        "--surface-azimuth", "8",
    ]);
    let rows = csv_rows(&out);
    let reflectance = rows.iter().find(|r| r[0] == "normal_reflectance_at_peak").unwrap();
    assert_eq!(f(&reflectance[1]), 0.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("normal reflectance at peak 0.000000"));
}

#[test]
fn large_particle_needs_a_spheroid() {
    let out = thermdec(&["large-particle", "--shape", "ellipsoid", "--axes", "1e-5,2e-5,3e-5", "--temp", "300"]);
    assert_eq!(out.status.code(), Some(1));
}

fn rotor(extra: &[&str]) -> Value {
    let mut args = vec!["rotor-sim", "--gamma-or", "2e6", "--lmax", "20", "--kappa", "40", "--m", "0,0,1"];
    args.extend(extra);
    json(&args)
}

#[test]
fn rotor_sim_orthogonal_and_parallel_axes() {
    let doc = rotor(&["--m-prime", "1,0,0"]);
    let r = &doc["results"];
    let ratio = r["fitted_rate_1_s"].as_f64().unwrap() / r["analytic_rate_1_s"].as_f64().unwrap();
    assert!((0.95..=1.05).contains(&ratio), "{ratio}");
    assert!((r["relative_error"].as_f64().unwrap() - (ratio - 1.0)).abs() < 1e-12);

    let doc = rotor(&["--m-prime", "0,0,1"]);
    let r = &doc["results"];
    assert!(r["fitted_rate_1_s"].as_f64().unwrap().abs() <= 0.02 * 2e6);
    assert!(r["relative_error"].is_null());
}

#[test]
fn rotor_sim_angular_momentum_diffusion() {
    let doc = rotor(&["--m-prime", "0,1,0", "--t-final", "1e-6"]);
    let slope = doc["results"]["jsq_slope_over_2gamma"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.03, "{slope}");
}

#[test]
fn rotor_sim_from_particle_uses_linear_rotor_rate() {
    let doc = json(&[
        "rotor-sim", "--shape", "spheroid", "--l-par", "1e-7", "--l-perp", "2.5e-8", "--temp", "1000", "--lmax", "20",
        "--m", "0,0,1", "--m-prime", "1,0,0",
    ]);
    let r = &doc["results"];
    assert!(r["relative_error"].as_f64().unwrap().abs() < 0.05);
    assert!(doc["material_sha256"].is_string());
}

#[test]
fn rotor_sim_trajectory_csv() {
    let out = thermdec(&["rotor-sim", "--gamma-or", "1", "--lmax", "12", "--entries", "0:0,1:2", "--t-final", "0.4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("t_s,re_rho_0_0,im_rho_0_0,re_rho_1_2,im_rho_1_2,Jx,Jy,Jz,Jsq,leakage\n"));
    assert_eq!(thermdec(&["rotor-sim", "--gamma-or", "1", "--lmax", "3", "--entries", "0:99"]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(thermdec(&["emission-rate", "--bogus"]).status.code(), Some(1));
    assert_eq!(thermdec(&["emission-rate", "--diameter", "1e-7"]).status.code(), Some(1));
    assert_eq!(thermdec(&["emission-rate", "--diameter", "-1e-7", "--temp", "300"]).status.code(), Some(1));
    assert_eq!(thermdec(&["emission-rate", "--material", "/nonexistent.csv", "--diameter", "1e-7", "--temp", "300"]).status.code(), Some(1));
    assert_eq!(
        thermdec(&["emission-rate", "--diameter", "1e-7", "--mass-amu", "1e9", "--density", "2200", "--temp", "300"]).status.code(),
        Some(1)
    );
    // a too-coarse basis makes the coherence fit fail
    assert_eq!(thermdec(&["rotor-sim", "--gamma-or", "1", "--lmax", "2"]).status.code(), Some(2));
    // 20 µm is not small compared with the thermal wavelength
    let args = ["emission-rate", "--diameter", "2e-5", "--temp", "1000"];
    assert_eq!(thermdec(&args).status.code(), Some(0));
    let strict: Vec<&str> = args.iter().copied().chain(["--strict"]).collect();
    let out = thermdec(&strict);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("small-particle limit questionable"));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# benchmark\nmass_amu = 1e9\ntemp = 300\nformat = json\n");
    let doc = {
        let out = thermdec(&["emission-rate", "--config", &cfg, "--temp", "1000"]);
        assert!(out.status.success());
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    assert_eq!(doc["config"]["temp"], "1000");
    assert!((total_rate(&doc) / 8.89e8 - 1.0).abs() < 0.3);

    let bad = write(dir.path(), "bad.cfg", "temp = 300\ncolour = blue\n");
    assert_eq!(thermdec(&["emission-rate", "--config", &bad, "--diameter", "1e-7"]).status.code(), Some(1));
    let strict = write(dir.path(), "strict.cfg", "strict = true\ndiameter = 2e-5\ntemp = 1000\n");
    assert_eq!(thermdec(&["emission-rate", "--config", &strict]).status.code(), Some(3));
}
