//! Batch commands behind the `vextrap` binary: generate synthetic data,
//! extrapolate sequences from files, emit diagnostics, and run the claim
//! verification registry. Everything here works on files so the binary
//! itself stays a thin argument parser.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::engine::{psi, EngineOptions, Extrapolator, TableCounts};
use crate::error::{Error, Result};
use crate::io::{
    self, detect_field, load_scale, load_sequence, load_truth, load_weighting, save_scale,
    save_sequence, save_truth, FileFormat, GroundTruth,
};
use crate::linalg::vandermonde;
use crate::presets;
use crate::scalar::{Field, Scalar};
use crate::sequences::{scale_decay_report, ModelSequence, TabulatedSequence};
use crate::space::{Sequence, Weighting};
use crate::theory::{
    estimate_b, estimate_ghat, eta, verify_claims, verify_claims_tabulated, VerifyConfig,
};

/// Resolved invocation parameters shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub scales: Option<PathBuf>,
    pub weighting: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub preset: Option<String>,
    pub field: Option<Field>,
    pub n0: usize,
    pub n1: usize,
    pub kmax: usize,
    pub singular_tol: f64,
    pub claim_tol: f64,
    pub out: Option<PathBuf>,
    pub format: FileFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            scales: None,
            weighting: None,
            truth: None,
            preset: None,
            field: None,
            n0: 0,
            n1: 25,
            kmax: 3,
            singular_tol: crate::linalg::DEFAULT_SINGULAR_TOL,
            claim_tol: 0.05,
            out: None,
            format: FileFormat::Json,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.n0 > self.n1 {
            return Err(Error::InvalidInput(format!(
                "index range [{}, {}] is empty",
                self.n0, self.n1
            )));
        }
        if !(self.singular_tol > 0.0) {
            return Err(Error::InvalidInput(
                "--tol-singular must be positive".into(),
            ));
        }
        if self.claim_tol < 0.0 {
            return Err(Error::InvalidInput("--tol-claim must be nonnegative".into()));
        }
        Ok(())
    }

    fn require(&self, value: &Option<PathBuf>, flag: &str) -> Result<PathBuf> {
        value
            .clone()
            .ok_or_else(|| Error::InvalidInput(format!("{flag} is required for this command")))
    }

    fn out(&self) -> Result<PathBuf> {
        self.require(&self.out, "--out")
    }

    /// Pick the scalar field: the explicit flag wins, otherwise the field
    /// declared by (or inferred from) the given file.
    fn resolve_field(&self, probe: &Path) -> Result<Field> {
        match self.field {
            Some(field) => Ok(field),
            None => detect_field(probe, FileFormat::infer(probe)),
        }
    }

    fn load_weighting_or_ones<S: Scalar>(&self, dim: usize) -> Result<Weighting<S>> {
        match &self.weighting {
            Some(path) => load_weighting(path, FileFormat::infer(path)),
            None => Ok(Weighting::ones(dim)),
        }
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

/// Files written by `generate`.
#[derive(Debug)]
pub struct GenerateSummary {
    pub files: Vec<PathBuf>,
}

/// Generate a synthetic sequence plus its scale-family and ground-truth
/// sidecars, from either a named preset or user-supplied family/truth files.
pub fn cmd_generate(cfg: &RunConfig) -> Result<GenerateSummary> {
    cfg.validate()?;
    let field = cfg.field.unwrap_or(Field::Real);
    match field {
        Field::Real => generate_typed::<f64>(cfg),
        Field::Complex => generate_typed::<Complex64>(cfg),
    }
}

fn generate_typed<S: Scalar>(cfg: &RunConfig) -> Result<GenerateSummary> {
    let out = cfg.out()?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let length = cfg.n1 + 1;
    let seq_ext = match cfg.format {
        FileFormat::Csv => "sequence.csv",
        FileFormat::Json => "sequence.json",
    };
    let seq_path = out.with_extension(seq_ext);
    let scale_path = out.with_extension("scale.json");
    let truth_path = out.with_extension("truth.json");

    match (&cfg.preset, &cfg.scales, &cfg.truth) {
        (Some(name), _, _) => {
            let spec = presets::named(name).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown preset {name:?}; available: {}",
                    presets::ALL
                        .iter()
                        .map(|p| p.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
            let parts = spec.materialize::<S>()?;
            let model = ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale)?;
            let table = TabulatedSequence::from_sequence(&model, length)?;
            save_sequence(&table, &seq_path, cfg.format)?;
            save_scale(&parts.scale, &scale_path)?;
            save_truth(
                &GroundTruth {
                    limit: parts.limit,
                    alpha: Some(parts.alpha),
                },
                &truth_path,
            )?;
        }
        (None, Some(scales), Some(truth)) => {
            let family = load_scale::<S>(scales)?;
            let record = load_truth::<S>(truth)?;
            let alpha = record.alpha.clone().ok_or_else(|| {
                Error::InvalidInput(
                    "generation from files needs expansion coefficients in the truth record"
                        .into(),
                )
            })?;
            let model = ModelSequence::new(record.limit.clone(), alpha, family.as_ref())?;
            let table = TabulatedSequence::from_sequence(&model, length)?;
            save_sequence(&table, &seq_path, cfg.format)?;
            // Re-emit the inputs next to the sequence, normalized.
            io::write_json(&scale_path, &io::parse_json_value(scales)?)?;
            save_truth(&record, &truth_path)?;
        }
        _ => {
            return Err(Error::InvalidInput(
                "generate needs --preset, or both --scales and --truth".into(),
            ));
        }
    }

    Ok(GenerateSummary {
        files: vec![seq_path, scale_path, truth_path],
    })
}

// ---------------------------------------------------------------------------
// extrapolate
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct ExtrapolateSummary {
    pub counts: TableCounts,
    pub out: PathBuf,
}

impl ExtrapolateSummary {
    pub fn render(&self) -> String {
        format!(
            "cells: {} ok, {} singular, {} out-of-data ({} untrusted); table written to {}",
            self.counts.ok,
            self.counts.singular,
            self.counts.out_of_data,
            self.counts.untrusted,
            self.out.display()
        )
    }
}

/// Fill the extrapolation table for a sequence file and export it.
pub fn cmd_extrapolate(cfg: &RunConfig) -> Result<ExtrapolateSummary> {
    cfg.validate()?;
    let input = cfg.require(&cfg.input, "--input")?;
    match cfg.resolve_field(&input)? {
        Field::Real => extrapolate_typed::<f64>(cfg, &input),
        Field::Complex => extrapolate_typed::<Complex64>(cfg, &input),
    }
}

fn extrapolate_typed<S: Scalar>(cfg: &RunConfig, input: &Path) -> Result<ExtrapolateSummary> {
    let scales = cfg.require(&cfg.scales, "--scales")?;
    let out = cfg.out()?;
    let x = load_sequence::<S>(input, FileFormat::infer(input))?;
    let family = load_scale::<S>(&scales)?;
    let weighting = cfg.load_weighting_or_ones::<S>(x.dim())?;
    let opts = EngineOptions {
        singular_tol: cfg.singular_tol,
        ..EngineOptions::default()
    };
    let ext = Extrapolator::with_options(&x, family.as_ref(), &weighting, opts)?;
    let table = ext.fill_table(cfg.n0, cfg.n1, cfg.kmax)?;
    let counts = table.counts();
    if counts.ok == 0 {
        return Err(Error::InvalidInput(
            "empty computable region: no table cell could be computed".into(),
        ));
    }
    match cfg.format {
        FileFormat::Csv => {
            let mut buffer = Vec::new();
            table
                .write_csv(&mut buffer)
                .map_err(|e| Error::io(&out, e))?;
            io::atomic_write(&out, &buffer)?;
        }
        FileFormat::Json => io::write_json(&out, &table.to_json())?,
    }
    Ok(ExtrapolateSummary { counts, out })
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct DiagnoseSummary {
    pub out: PathBuf,
    pub advisories: Vec<String>,
}

/// Estimate the asymptotic profile of a scale family and report the
/// normalized-denominator gaps and difference ratios.
pub fn cmd_diagnose(cfg: &RunConfig) -> Result<DiagnoseSummary> {
    cfg.validate()?;
    let scales = cfg.require(&cfg.scales, "--scales")?;
    match cfg.resolve_field(&scales)? {
        Field::Real => diagnose_typed::<f64>(cfg, &scales),
        Field::Complex => diagnose_typed::<Complex64>(cfg, &scales),
    }
}

fn diagnose_typed<S: Scalar>(cfg: &RunConfig, scales: &Path) -> Result<DiagnoseSummary> {
    let out = cfg.out()?;
    let family = load_scale::<S>(scales)?;
    let weighting = cfg.load_weighting_or_ones::<S>(family.dim())?;
    let window = (cfg.n0, cfg.n1);
    let mut advisories = Vec::new();

    // Reference ratio targets: closed form when available, per-index
    // estimates otherwise. A degenerate scale leaves a hole instead of
    // aborting the report.
    let exact_profile = match family.limit_profile(&weighting) {
        Ok(profile) => profile,
        Err(err) => {
            advisories.push(format!("closed-form profile unavailable: {err}"));
            None
        }
    };
    let source = if exact_profile.is_some() {
        "exact-from-family"
    } else {
        "estimated-from-data"
    };
    if let Some(profile) = &exact_profile {
        advisories.extend(profile.validate());
    }

    // Measured profile entries with their window spreads.
    let mut entries = Vec::new();
    let mut b_ref: Vec<Option<S>> = Vec::with_capacity(family.count());
    for i in 0..family.count() {
        let b_estimate = estimate_b(family.as_ref(), &weighting, i, window);
        b_ref.push(match &exact_profile {
            Some(profile) => Some(profile.b()[i]),
            None => b_estimate.as_ref().ok().map(|e| e.value),
        });
        let entry = match (b_estimate, estimate_ghat(family.as_ref(), &weighting, i, window)) {
            (Ok(b), Ok(ghat)) => json!({
                "index": i,
                "b": b.value.to_json(),
                "b_spread": b.spread,
                "ghat": Value::Array(ghat.value.iter().map(|c| c.to_json()).collect()),
                "ghat_spread": ghat.spread,
            }),
            (b_result, ghat_result) => {
                let message = b_result
                    .err()
                    .or(ghat_result.err())
                    .map(|e| e.to_string())
                    .unwrap_or_default();
                json!({ "index": i, "status": "degenerate", "message": message })
            }
        };
        entries.push(entry);
    }

    advisories.extend(scale_decay_report(family.as_ref(), window, 0.5)?);

    // Normalized denominator against its limiting Vandermonde product.
    let mut psi_cells = Vec::new();
    for n in cfg.n0..=cfg.n1 {
        for k in 1..=cfg.kmax.min(family.count()) {
            let limit: Option<S> = b_ref[..k]
                .iter()
                .copied()
                .collect::<Option<Vec<S>>>()
                .map(|nodes| vandermonde(&nodes));
            let cell = match (psi(family.as_ref(), &weighting, n, k), limit) {
                (Ok(value), Some(limit)) => {
                    let gap = (value - limit).modulus() / limit.modulus().max(f64::MIN_POSITIVE);
                    json!({
                        "n": n,
                        "k": k,
                        "value": value.to_json(),
                        "limit": limit.to_json(),
                        "gap_rel": gap,
                    })
                }
                (Ok(value), None) => json!({
                    "n": n,
                    "k": k,
                    "value": value.to_json(),
                    "limit": Value::Null,
                }),
                (Err(err), _) => json!({
                    "n": n,
                    "k": k,
                    "status": "degenerate",
                    "message": err.to_string(),
                }),
            };
            psi_cells.push(cell);
        }
    }

    // Difference ratios at the far end of the window.
    let mut eta_cells = Vec::new();
    for i in 0..family.count() {
        for j in 1..=2usize {
            let target = b_ref[i].map(|b| b.powi(j as i32));
            let cell = match eta(family.as_ref(), &weighting, i, j, cfg.n1) {
                Ok(value) => json!({
                    "index": i,
                    "j": j,
                    "m": cfg.n1,
                    "value": value.to_json(),
                    "target": target.map_or(Value::Null, |t| t.to_json()),
                }),
                Err(err) => json!({
                    "index": i,
                    "j": j,
                    "m": cfg.n1,
                    "status": "degenerate",
                    "message": err.to_string(),
                }),
            };
            eta_cells.push(cell);
        }
    }

    let report = json!({
        "field": S::FIELD,
        "dimension": family.dim(),
        "kind": family.kind().as_str(),
        "window": [cfg.n0, cfg.n1],
        "kmax": cfg.kmax,
        "profile": {
            "source": source,
            "entries": entries,
        },
        "psi": psi_cells,
        "eta": eta_cells,
        "advisories": advisories,
    });
    io::write_json(&out, &report)?;
    Ok(DiagnoseSummary { out, advisories })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct VerifySummary {
    pub pass: bool,
    pub out: PathBuf,
    pub lines: Vec<String>,
}

/// Run the claim registry against generated (or user) data and write the
/// verification report. `kmax` selects the column at which claims are
/// evaluated.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifySummary> {
    cfg.validate()?;
    let scales = cfg.require(&cfg.scales, "--scales")?;
    match cfg.resolve_field(&scales)? {
        Field::Real => verify_typed::<f64>(cfg, &scales),
        Field::Complex => verify_typed::<Complex64>(cfg, &scales),
    }
}

fn verify_typed<S: Scalar>(cfg: &RunConfig, scales: &Path) -> Result<VerifySummary> {
    let out = cfg.out()?;
    let truth_path = cfg.truth.clone().ok_or_else(|| {
        Error::InvalidInput(
            "--truth is required: verification needs the known limit (and, for synthetic data, the coefficients)"
                .into(),
        )
    })?;
    let family = load_scale::<S>(scales)?;
    let truth = load_truth::<S>(&truth_path)?;
    let weighting = cfg.load_weighting_or_ones::<S>(family.dim())?;
    let verify_cfg = VerifyConfig {
        k: cfg.kmax.max(1),
        window: (cfg.n0, cfg.n1),
        tol_asymptotic: cfg.claim_tol,
        ..VerifyConfig::default()
    };

    let report = match &truth.alpha {
        Some(alpha) => {
            let model = ModelSequence::new(truth.limit.clone(), alpha.clone(), family.as_ref())?;
            verify_claims(&model, &weighting, verify_cfg)?
        }
        None => {
            let input = cfg.require(&cfg.input, "--input")?;
            let x = load_sequence::<S>(&input, FileFormat::infer(&input))?;
            verify_claims_tabulated(&x, &truth.limit, family.as_ref(), &weighting, verify_cfg)?
        }
    };

    io::write_json(&out, &report.to_json())?;
    let lines = report
        .claims
        .iter()
        .map(|c| {
            let status = if !c.asserted {
                "SKIP"
            } else if c.pass {
                "PASS"
            } else {
                "FAIL"
            };
            format!("claim {:<2} [{}] {}", c.claim.id(), c.claim.label(), status)
        })
        .collect();
    Ok(VerifySummary {
        pass: report.pass,
        out,
        lines,
    })
}
