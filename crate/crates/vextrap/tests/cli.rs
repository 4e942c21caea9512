//! End-to-end tests of the command layer and the binary's exit-code
//! contract: 0 success, 1 input/validation error, 2 verification failure.

use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

use vextrap::cli::{cmd_diagnose, cmd_extrapolate, cmd_generate, cmd_verify, RunConfig};
use vextrap::io::{load_sequence, load_truth, FileFormat};
use vextrap::scalar::Field;
use vextrap::Sequence as _;

fn config() -> RunConfig {
    RunConfig::default()
}

fn generate_preset(dir: &Path, preset: &str) -> (PathBuf, PathBuf, PathBuf) {
    let prefix = dir.join(preset);
    let cfg = RunConfig {
        preset: Some(preset.into()),
        out: Some(prefix.clone()),
        n1: 59,
        ..config()
    };
    let summary = cmd_generate(&cfg).unwrap();
    assert_eq!(summary.files.len(), 3);
    (
        summary.files[0].clone(),
        summary.files[1].clone(),
        summary.files[2].clone(),
    )
}

#[test]
fn generate_writes_three_loadable_files() {
    let dir = TempDir::new().unwrap();
    let (seq, scale, truth) = generate_preset(dir.path(), "g3");
    let sequence = load_sequence::<f64>(&seq, FileFormat::Json).unwrap();
    assert_eq!(sequence.len(), 60);
    assert_eq!(sequence.dim(), 4);
    let family = vextrap::io::load_scale::<f64>(&scale).unwrap();
    assert_eq!(family.count(), 3);
    let record = load_truth::<f64>(&truth).unwrap();
    assert_eq!(record.alpha.as_deref(), Some(&[1.0, 1.0, 1.0][..]));
}

#[test]
fn generate_records_zero_coefficients() {
    let dir = TempDir::new().unwrap();
    let (_, _, truth) = generate_preset(dir.path(), "plateau");
    let record = load_truth::<f64>(&truth).unwrap();
    assert_eq!(record.alpha.as_deref(), Some(&[1.0, 1.0, 0.0, 1.0][..]));
}

#[test]
fn generate_is_byte_identical_on_rerun() {
    let dir = TempDir::new().unwrap();
    let first = generate_preset(dir.path(), "g4");
    let snapshot: Vec<Vec<u8>> = [&first.0, &first.1, &first.2]
        .iter()
        .map(|p| std::fs::read(p).unwrap())
        .collect();
    let second = generate_preset(dir.path(), "g4");
    for (path, bytes) in [&second.0, &second.1, &second.2].iter().zip(&snapshot) {
        assert_eq!(&std::fs::read(path).unwrap(), bytes);
    }
}

#[test]
fn generate_from_files_rejects_duplicate_nodes() {
    let dir = TempDir::new().unwrap();
    let scale_path = dir.path().join("bad.scale.json");
    std::fs::write(
        &scale_path,
        r#"{"field":"real","dimension":1,"kind":"analytic-geometric","b":[0.5,0.5],"w":[[1.0],[1.0]]}"#,
    )
    .unwrap();
    let truth_path = dir.path().join("bad.truth.json");
    std::fs::write(
        &truth_path,
        r#"{"field":"real","dimension":1,"limit":[0.0],"alpha":[1.0,1.0]}"#,
    )
    .unwrap();
    let cfg = RunConfig {
        scales: Some(scale_path),
        truth: Some(truth_path),
        out: Some(dir.path().join("bad")),
        ..config()
    };
    let err = cmd_generate(&cfg).unwrap_err().to_string();
    assert!(err.contains("index 1"), "error was: {err}");
}

#[test]
fn extrapolate_kmax_zero_echoes_input() {
    let dir = TempDir::new().unwrap();
    let (seq, scale, _) = generate_preset(dir.path(), "g3");
    let out = dir.path().join("table.json");
    let cfg = RunConfig {
        input: Some(seq.clone()),
        scales: Some(scale),
        out: Some(out.clone()),
        n0: 0,
        n1: 10,
        kmax: 0,
        ..config()
    };
    let summary = cmd_extrapolate(&cfg).unwrap();
    assert_eq!(summary.counts.ok, 11);
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let input = load_sequence::<f64>(&seq, FileFormat::Json).unwrap();
    for cell in table["cells"].as_array().unwrap() {
        let n = cell["n"].as_u64().unwrap() as usize;
        let value: Vec<f64> = cell["value"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        assert_eq!(value, input.rows()[n].components());
    }
}

#[test]
fn extrapolate_exact_model_gives_constant_last_column() {
    let dir = TempDir::new().unwrap();
    let (seq, scale, truth) = generate_preset(dir.path(), "g3");
    let out = dir.path().join("table.csv");
    let cfg = RunConfig {
        input: Some(seq),
        scales: Some(scale),
        out: Some(out.clone()),
        n0: 0,
        n1: 8,
        kmax: 3,
        format: FileFormat::Csv,
        ..config()
    };
    cmd_extrapolate(&cfg).unwrap();
    let limit = load_truth::<f64>(&truth).unwrap().limit;
    let text = std::fs::read_to_string(&out).unwrap();
    let mut checked = 0;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[1] == "3" {
            assert_eq!(fields[2], "ok");
            let value: Vec<f64> = fields[5..].iter().map(|f| f.parse().unwrap()).collect();
            let err: f64 = value
                .iter()
                .zip(limit.components())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10 * (1.0 + limit.norm()), "err {err}");
            checked += 1;
        }
    }
    assert_eq!(checked, 9);
}

#[test]
fn extrapolate_marks_cells_beyond_the_data() {
    let dir = TempDir::new().unwrap();
    let (_, scale, _) = generate_preset(dir.path(), "g3");
    // Only 12 stored values: cells needing x beyond index 11 are flagged.
    let short = dir.path().join("short.csv");
    let full = load_sequence::<f64>(&dir.path().join("g3.sequence.json"), FileFormat::Json).unwrap();
    let rows: Vec<String> = full.rows()[..12]
        .iter()
        .map(|r| {
            r.components()
                .iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    std::fs::write(&short, rows.join("\n")).unwrap();

    let out = dir.path().join("short.table.json");
    let cfg = RunConfig {
        input: Some(short),
        scales: Some(scale),
        out: Some(out.clone()),
        n0: 8,
        n1: 11,
        kmax: 2,
        ..config()
    };
    let summary = cmd_extrapolate(&cfg).unwrap();
    assert!(summary.counts.out_of_data > 0);
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let statuses: Vec<(u64, u64, String)> = table["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["n"].as_u64().unwrap(),
                c["k"].as_u64().unwrap(),
                c["status"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert!(statuses.contains(&(11, 1, "out-of-data".into())));
    assert!(statuses.contains(&(10, 2, "out-of-data".into())));
    assert!(statuses.contains(&(11, 0, "ok".into())));
    assert!(statuses.contains(&(9, 2, "ok".into())));
}

#[test]
fn diagnose_reports_exact_family_with_zero_gap() {
    let dir = TempDir::new().unwrap();
    let (_, scale, _) = generate_preset(dir.path(), "g3");
    let out = dir.path().join("diag.json");
    let cfg = RunConfig {
        scales: Some(scale),
        out: Some(out.clone()),
        n0: 10,
        n1: 20,
        kmax: 3,
        ..config()
    };
    cmd_diagnose(&cfg).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for cell in report["psi"].as_array().unwrap() {
        let gap = cell["gap_rel"].as_f64().unwrap();
        assert!(gap <= 1e-12, "psi gap {gap}");
    }
    assert_eq!(report["profile"]["source"], "exact-from-family");
}

#[test]
fn diagnose_shows_shrinking_gap_for_perturbed_family() {
    let dir = TempDir::new().unwrap();
    let (_, scale, _) = generate_preset(dir.path(), "perturbed3");
    let out = dir.path().join("diag.json");
    let cfg = RunConfig {
        scales: Some(scale),
        out: Some(out.clone()),
        n0: 10,
        n1: 40,
        kmax: 3,
        ..config()
    };
    cmd_diagnose(&cfg).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let gaps: Vec<(u64, f64)> = report["psi"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["k"] == 3)
        .map(|c| (c["n"].as_u64().unwrap(), c["gap_rel"].as_f64().unwrap()))
        .collect();
    assert!(gaps.len() > 20);
    let first = gaps.first().unwrap().1;
    let last = gaps.last().unwrap().1;
    assert!(last < first, "gap did not shrink: {first} -> {last}");
    assert!(gaps.windows(2).all(|p| p[1].1 <= p[0].1 * 1.001), "gap not monotone");
}

#[test]
fn diagnose_marks_degenerate_normalization() {
    let dir = TempDir::new().unwrap();
    let scale_path = dir.path().join("ortho.scale.json");
    // The second direction is orthogonal to the all-ones weighting.
    std::fs::write(
        &scale_path,
        r#"{"field":"real","dimension":2,"kind":"analytic-geometric","b":[0.5,0.25],"w":[[1.0,0.5],[1.0,-1.0]]}"#,
    )
    .unwrap();
    let out = dir.path().join("diag.json");
    let cfg = RunConfig {
        scales: Some(scale_path),
        out: Some(out.clone()),
        n0: 2,
        n1: 6,
        kmax: 2,
        ..config()
    };
    cmd_diagnose(&cfg).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let degenerate = report["psi"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "degenerate")
        .count();
    assert!(degenerate > 0);
}

#[test]
fn verify_full_run_passes() {
    let dir = TempDir::new().unwrap();
    let (_, scale, truth) = generate_preset(dir.path(), "g3");
    let out = dir.path().join("verify.json");
    let cfg = RunConfig {
        scales: Some(scale),
        truth: Some(truth),
        out: Some(out.clone()),
        n0: 15,
        n1: 25,
        kmax: 1,
        ..config()
    };
    let summary = cmd_verify(&cfg).unwrap();
    assert!(summary.pass, "lines: {:?}", summary.lines);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["claims"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_plateau_preset_at_column_two() {
    let dir = TempDir::new().unwrap();
    let (_, scale, truth) = generate_preset(dir.path(), "plateau");
    let out = dir.path().join("verify.json");
    let cfg = RunConfig {
        scales: Some(scale),
        truth: Some(truth),
        out: Some(out.clone()),
        n0: 15,
        n1: 25,
        kmax: 2,
        ..config()
    };
    let summary = cmd_verify(&cfg).unwrap();
    assert!(summary.pass, "lines: {:?}", summary.lines);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["detected_mu"], 2);
}

#[test]
fn verify_zero_tolerance_fails() {
    let dir = TempDir::new().unwrap();
    let (_, scale, truth) = generate_preset(dir.path(), "g3");
    let out = dir.path().join("verify.json");
    let cfg = RunConfig {
        scales: Some(scale),
        truth: Some(truth),
        out: Some(out.clone()),
        n0: 15,
        n1: 25,
        kmax: 1,
        claim_tol: 0.0,
        ..config()
    };
    let summary = cmd_verify(&cfg).unwrap();
    assert!(!summary.pass);
    assert!(summary.lines.iter().any(|l| l.contains("FAIL")));
}

#[test]
fn verify_without_truth_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let (_, scale, _) = generate_preset(dir.path(), "g3");
    let cfg = RunConfig {
        scales: Some(scale),
        out: Some(dir.path().join("verify.json")),
        ..config()
    };
    let err = cmd_verify(&cfg).unwrap_err().to_string();
    assert!(err.contains("--truth"), "error was {err}");
}

#[test]
fn verify_tabulated_data_with_limit_only() {
    let dir = TempDir::new().unwrap();
    let (seq, scale, truth) = generate_preset(dir.path(), "g3");
    // Strip the coefficients from the truth record.
    let mut record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&truth).unwrap()).unwrap();
    record.as_object_mut().unwrap().remove("alpha");
    let limit_only = dir.path().join("limit-only.truth.json");
    std::fs::write(&limit_only, serde_json::to_string(&record).unwrap()).unwrap();

    let out = dir.path().join("verify.json");
    let cfg = RunConfig {
        input: Some(seq),
        scales: Some(scale),
        truth: Some(limit_only),
        out: Some(out.clone()),
        n0: 10,
        n1: 20,
        kmax: 1,
        ..config()
    };
    let summary = cmd_verify(&cfg).unwrap();
    assert!(summary.pass);
    assert!(summary.lines.iter().any(|l| l.contains("SKIP")));
}

#[test]
fn outputs_are_idempotent() {
    let dir = TempDir::new().unwrap();
    let (seq, scale, truth) = generate_preset(dir.path(), "g3");
    let table = dir.path().join("table.json");
    let cfg = RunConfig {
        input: Some(seq),
        scales: Some(scale.clone()),
        out: Some(table.clone()),
        n0: 0,
        n1: 12,
        kmax: 3,
        ..config()
    };
    cmd_extrapolate(&cfg).unwrap();
    let first = std::fs::read(&table).unwrap();
    cmd_extrapolate(&cfg).unwrap();
    assert_eq!(std::fs::read(&table).unwrap(), first);

    let verify_out = dir.path().join("verify.json");
    let vcfg = RunConfig {
        scales: Some(scale),
        truth: Some(truth),
        out: Some(verify_out.clone()),
        n0: 15,
        n1: 25,
        kmax: 1,
        ..config()
    };
    cmd_verify(&vcfg).unwrap();
    let first = std::fs::read(&verify_out).unwrap();
    cmd_verify(&vcfg).unwrap();
    assert_eq!(std::fs::read(&verify_out).unwrap(), first);
}

// ---------------------------------------------------------------------------
// Binary exit codes
// ---------------------------------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vextrap"))
}

#[test]
fn binary_help_exits_zero() {
    let status = bin().arg("--help").status().unwrap();
    assert_eq!(status.code(), Some(0));
    for sub in ["generate", "extrapolate", "diagnose", "verify"] {
        let status = bin().args([sub, "--help"]).status().unwrap();
        assert_eq!(status.code(), Some(0), "{sub} --help");
    }
}

#[test]
fn binary_rejects_bad_arguments_with_code_one() {
    let status = bin().arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(1));
    let status = bin().args(["generate", "--no-such-flag"]).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn binary_reports_missing_files_with_code_one() {
    let dir = TempDir::new().unwrap();
    let output = bin()
        .args([
            "extrapolate",
            "--input",
            dir.path().join("missing.json").to_str().unwrap(),
            "--scales",
            dir.path().join("missing.scale.json").to_str().unwrap(),
            "--out",
            dir.path().join("t.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("error"));
}

#[test]
fn binary_full_pipeline_and_verification_exit_codes() {
    let dir = TempDir::new().unwrap();
    let prefix = dir.path().join("run");
    let status = bin()
        .args([
            "generate",
            "--preset",
            "g3",
            "--out",
            prefix.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let status = bin()
        .args([
            "verify",
            "--scales",
            prefix.with_extension("scale.json").to_str().unwrap(),
            "--truth",
            prefix.with_extension("truth.json").to_str().unwrap(),
            "--out",
            dir.path().join("verify.json").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // Impossible tolerance: verification failure surfaces as exit code 2.
    let status = bin()
        .args([
            "verify",
            "--scales",
            prefix.with_extension("scale.json").to_str().unwrap(),
            "--truth",
            prefix.with_extension("truth.json").to_str().unwrap(),
            "--out",
            dir.path().join("verify-fail.json").to_str().unwrap(),
            "--tol-claim",
            "0",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn binary_detects_complex_field_from_files() {
    let dir = TempDir::new().unwrap();
    let prefix = dir.path().join("cplx");
    // Generate complex-field data, then extrapolate without --field.
    let status = bin()
        .args([
            "generate",
            "--preset",
            "scalar2",
            "--field",
            "complex",
            "--out",
            prefix.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let field = vextrap::io::detect_field(
        &prefix.with_extension("sequence.json"),
        FileFormat::Json,
    )
    .unwrap();
    assert_eq!(field, Field::Complex);
    let status = bin()
        .args([
            "extrapolate",
            "--input",
            prefix.with_extension("sequence.json").to_str().unwrap(),
            "--scales",
            prefix.with_extension("scale.json").to_str().unwrap(),
            "--out",
            dir.path().join("cplx.table.json").to_str().unwrap(),
            "--n1",
            "12",
            "--kmax",
            "2",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}
