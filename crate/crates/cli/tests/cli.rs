use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use enzpair_core::io::read_spectrum_csv;
use enzpair_core::units::C;
use enzpair_core::{sech2_spectrum, NondispersiveSetup};
use tempfile::TempDir;

fn enzpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enzpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = enzpair(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn error_json(out: &Output) -> serde_json::Value {
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr has an error line");
    serde_json::from_str(line).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn table(path: &Path) -> enzpair_core::io::SpectrumTable {
    read_spectrum_csv(std::io::BufReader::new(fs::File::open(path).unwrap())).unwrap()
}

#[test]
fn dispersion_crosses_zero_near_1377nm() {
    let out = ok(&[
        "dispersion",
        "--preset",
        "ito-luk2015",
        "--n-points",
        "1601",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect();
    let crossing = rows
        .windows(2)
        .find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)
        .map(|w| w[0].0)
        .expect("ε′ changes sign");
    assert!((crossing / 1377.0 - 1.0).abs() < 0.01, "{crossing}");
}

#[test]
fn oracle_is_a_passthrough() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("oracle.csv");
    ok(&[
        "oracle",
        "--n0",
        "1",
        "--delta",
        "1e-3",
        "--tau-fs",
        "5",
        "--n-points",
        "40",
        "--out",
        path.to_str().unwrap(),
    ]);
    let t = table(&path);
    assert_eq!(t.rows.len(), 40);
    for row in &t.rows {
        let exact = sech2_spectrum(&NondispersiveSetup {
            n0: 1.0,
            delta: 1e-3,
            tau: 5e-15,
            k: row.k,
        });
        assert!(
            (row.beta_sq - exact).abs() <= 1e-15 * exact,
            "{} vs {exact}",
            row.beta_sq
        );
    }
    assert!((t.rows[0].k * C * 5e-15 - 0.1).abs() < 1e-12);
}

#[test]
fn fig4_spectrum_with_sidecar_and_reproduction() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("fig4.csv");
    let p = path.to_str().unwrap();
    ok(&[
        "--preset",
        "fig4",
        "spectrum",
        "--n-points",
        "60",
        "--out",
        p,
    ]);
    let t = table(&path);
    let peak = t
        .rows
        .iter()
        .max_by(|a, b| a.beta_sq.total_cmp(&b.beta_sq))
        .unwrap();
    assert!(peak.lambda > 1199.87e-9 && peak.lambda < 1543.88e-9);

    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig4.csv.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["config_sha256"].as_str(), t.config_hash.as_deref());
    assert_eq!(sidecar["runs"][0]["metadata"]["scenario"], "enz_real_only");

    // the embedded document reproduces the run
    let config = dir.path().join("embedded.toml");
    fs::write(&config, sidecar["config"].as_str().unwrap()).unwrap();
    let out = ok(&[
        "validate",
        "--config",
        config.to_str().unwrap(),
        "--against",
        p,
        "--all-rows",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["failed"], 0);
    assert!(report["checks"].as_array().unwrap().len() > 60);
}

#[test]
fn validate_flags_a_tampered_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    ok(&[
        "--preset",
        "fig2",
        "spectrum",
        "--n-points",
        "8",
        "--out",
        p,
    ]);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut cells: Vec<String> = lines[2].split(',').map(String::from).collect();
    let beta: f64 = cells[3].parse().unwrap();
    cells[3] = format!("{:.16e}", beta * (1.0 + 1e-9));
    lines[2] = cells.join(",");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = enzpair(&["--preset", "fig2", "validate", "--against", p, "--all-rows"]);
    assert_eq!(error_json(&out)["error"], "cli");
}

#[test]
fn json_format_and_sweep() {
    let dir = TempDir::new().unwrap();
    let out = ok(&[
        "--preset",
        "fig5",
        "--format",
        "json",
        "spectrum",
        "--n-points",
        "6",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["runs"][0]["rows"].as_array().unwrap().len(), 6);

    let sweep_dir = dir.path().join("sweep");
    ok(&[
        "--preset",
        "fig2",
        "sweep",
        "--tau-fs",
        "2,5",
        "--n-points",
        "10",
        "--out",
        sweep_dir.to_str().unwrap(),
    ]);
    for tau in ["2", "5"] {
        let csv = sweep_dir.join(format!("spectrum_tau{tau}fs.csv"));
        assert_eq!(table(&csv).rows.len(), 10);
        let side: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(sweep_dir.join(format!("spectrum_tau{tau}fs.csv.json"))).unwrap(),
        )
        .unwrap();
        let config = dir.path().join(format!("tau{tau}.toml"));
        fs::write(&config, side["config"].as_str().unwrap()).unwrap();
        ok(&[
            "validate",
            "--config",
            config.to_str().unwrap(),
            "--against",
            csv.to_str().unwrap(),
        ]);
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(sweep_dir.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(summary["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn photons_rescales_geometry() {
    let dir = TempDir::new().unwrap();
    let src = dir.path().join("o.csv");
    let dst = dir.path().join("p.csv");
    ok(&["oracle", "--n-points", "12", "--out", src.to_str().unwrap()]);
    ok(&[
        "photons",
        "--input",
        src.to_str().unwrap(),
        "--damping-factor",
        "0.1",
        "--l-um",
        "2",
        "--out",
        dst.to_str().unwrap(),
    ]);
    for (a, b) in table(&src).rows.iter().zip(&table(&dst).rows) {
        assert_eq!(a.beta_sq, b.beta_sq);
        let expected = 2.0 * std::f64::consts::PI.powi(2) * a.k * 4e-12 * 0.1 * a.beta_sq;
        assert!((b.n_photons / expected - 1.0).abs() < 1e-14);
    }
}

#[test]
fn errors_are_machine_readable() {
    let dir = TempDir::new().unwrap();
    assert_eq!(error_json(&enzpair(&["spectrum"]))["error"], "cli");

    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        "[scenario]\nkind = \"enz_full\"\n[pulse]\ntau_fs = -5\n",
    )
    .unwrap();
    let e = error_json(&enzpair(&["--config", bad.to_str().unwrap(), "spectrum"]));
    assert_eq!(e["error"], "validation");
    assert!(e["message"].as_str().unwrap().contains("pulse.tau_fs"));

    fs::write(&bad, "[scenario]\nkind = \"enz_full\"\nflavour = 1\n").unwrap();
    let e = error_json(&enzpair(&["--config", bad.to_str().unwrap(), "spectrum"]));
    assert_eq!(e["error"], "parse");
    assert!(e["message"].as_str().unwrap().contains("line 3"));

    fs::write(&bad, "").unwrap();
    let e = error_json(&enzpair(&["--config", bad.to_str().unwrap(), "validate"]));
    assert!(e["message"].as_str().unwrap().contains("scenario.kind"));

    assert_eq!(
        error_json(&enzpair(&["--preset", "fig9", "spectrum"]))["error"],
        "validation"
    );
}
