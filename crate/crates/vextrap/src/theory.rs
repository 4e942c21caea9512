//! Measurement and verification of the asymptotic behavior the engine
//! relies on.
//!
//! The quantities here are the node ratios `b_i`, the limiting directions
//! `ghat_i = lim g_i(m) / <y, dg_i(m)>`, the bordered limit determinants
//! `hhat_{k,i}`, and the acceleration constants `C_{k,i}`. A fixed registry
//! of claims compares measured table behavior against the values these
//! quantities predict and assembles the outcome into a serializable report.

use crate::engine::Extrapolator;
use crate::error::{Error, Result};
use crate::linalg::{vandermonde, BorderedVectorDeterminant};
use crate::scalar::Scalar;
use crate::sequences::{ModelSequence, ScaleFamily, ScaleMember};
use crate::space::{Sequence, Vector, Weighting};
use serde_json::{json, Value};

/// Where a profile's entries came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    ExactFromFamily,
    EstimatedFromData,
}

impl ProfileSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileSource::ExactFromFamily => "exact-from-family",
            ProfileSource::EstimatedFromData => "estimated-from-data",
        }
    }
}

/// Node ratios and limiting directions of a scale family, either exact
/// (closed form) or estimated over an index window.
#[derive(Debug, Clone)]
pub struct AsymptoticProfile<S> {
    b: Vec<S>,
    ghat: Vec<Vector<S>>,
    source: ProfileSource,
    window: Option<(usize, usize)>,
}

impl<S: Scalar> AsymptoticProfile<S> {
    pub fn new(
        b: Vec<S>,
        ghat: Vec<Vector<S>>,
        source: ProfileSource,
        window: Option<(usize, usize)>,
    ) -> Self {
        AsymptoticProfile {
            b,
            ghat,
            source,
            window,
        }
    }

    /// Estimate all entries from family data over the window.
    pub fn estimated(
        scale: &dyn ScaleFamily<S>,
        weighting: &Weighting<S>,
        window: (usize, usize),
    ) -> Result<Self> {
        let mut b = Vec::with_capacity(scale.count());
        let mut ghat = Vec::with_capacity(scale.count());
        for i in 0..scale.count() {
            b.push(estimate_b(scale, weighting, i, window)?.value);
            ghat.push(estimate_ghat(scale, weighting, i, window)?.value);
        }
        Ok(AsymptoticProfile {
            b,
            ghat,
            source: ProfileSource::EstimatedFromData,
            window: Some(window),
        })
    }

    /// Exact profile when the family has one, estimated otherwise.
    pub fn for_family(
        scale: &dyn ScaleFamily<S>,
        weighting: &Weighting<S>,
        window: (usize, usize),
    ) -> Result<Self> {
        match scale.limit_profile(weighting)? {
            Some(profile) => Ok(profile),
            None => Self::estimated(scale, weighting, window),
        }
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    pub fn ghat(&self) -> &[Vector<S>] {
        &self.ghat
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }

    pub fn window(&self) -> Option<(usize, usize)> {
        self.window
    }

    /// Advisory conformance findings; empty when nothing looks off. For
    /// estimated profiles these are reports, never hard failures.
    pub fn validate(&self) -> Vec<String> {
        let mut findings = Vec::new();
        for (i, b) in self.b.iter().enumerate() {
            if (*b - S::one()).modulus() < 1e-12 {
                findings.push(format!("node {i} is numerically one"));
            }
            if i > 0 && b.modulus() >= self.b[i - 1].modulus() {
                findings.push(format!(
                    "node moduli fail to decrease strictly between {} and {}",
                    i - 1,
                    i
                ));
            }
        }
        for (i, g) in self.ghat.iter().enumerate() {
            if g.norm() == 0.0 {
                findings.push(format!("limiting direction {i} is zero"));
            }
        }
        // Linear independence of the limiting directions is only a hint: a
        // small coordinate dimension forces dependence no matter the family.
        let dim = self.ghat.first().map_or(0, Vector::dim);
        if self.ghat.len() > dim {
            findings.push(format!(
                "{} limiting directions in dimension {dim} cannot be linearly independent",
                self.ghat.len()
            ));
        } else if !self.ghat.is_empty() {
            let k = self.ghat.len();
            let mut gram = crate::linalg::DenseMatrix::zeros(k);
            for i in 0..k {
                for j in 0..k {
                    let denom = self.ghat[i].norm() * self.ghat[j].norm();
                    let entry = if denom == 0.0 {
                        S::zero()
                    } else {
                        crate::space::inner(&self.ghat[i], &self.ghat[j]).unwrap_or(S::zero())
                            * S::from_f64(1.0 / denom)
                    };
                    gram.set(i, j, entry);
                }
            }
            if gram.det().modulus() < 1e-8 {
                findings.push("limiting directions look linearly dependent".into());
            }
        }
        findings
    }
}

/// A measured limit value together with its convergence diagnostic: the
/// largest relative deviation of the window's samples from the final one.
#[derive(Debug, Clone)]
pub struct Estimate<T> {
    pub value: T,
    pub spread: f64,
}

/// Estimate the node ratio `b_i` from `<y, g_i(m+1)> / <y, g_i(m)>`,
/// reporting the ratio at the window end and the spread across the window.
pub fn estimate_b<S: Scalar>(
    scale: &dyn ScaleFamily<S>,
    weighting: &Weighting<S>,
    i: usize,
    window: (usize, usize),
) -> Result<Estimate<S>> {
    let (lo, hi) = ordered_window(window)?;
    let ratio = |m: usize| -> Result<S> {
        let den = weighting.apply(&scale.eval(i, m)?)?;
        if den.modulus() == 0.0 {
            return Err(Error::ZeroDenominator { m });
        }
        Ok(weighting.apply(&scale.eval(i, m + 1)?)? / den)
    };
    let value = ratio(hi)?;
    let mut spread: f64 = 0.0;
    for m in lo..=hi {
        let deviation = (ratio(m)? - value).modulus();
        spread = spread.max(deviation / value.modulus().max(f64::MIN_POSITIVE));
    }
    Ok(Estimate { value, spread })
}

/// Estimate the limiting direction `ghat_i` from `g_i(m) / <y, dg_i(m)>`.
pub fn estimate_ghat<S: Scalar>(
    scale: &dyn ScaleFamily<S>,
    weighting: &Weighting<S>,
    i: usize,
    window: (usize, usize),
) -> Result<Estimate<Vector<S>>> {
    let (lo, hi) = ordered_window(window)?;
    let direction = |m: usize| -> Result<Vector<S>> {
        let den = weighting.apply(&scale.delta(i, m)?)?;
        if den.modulus() == 0.0 {
            return Err(Error::ZeroDenominator { m });
        }
        Ok(scale.eval(i, m)?.scaled(S::one() / den))
    };
    let value = direction(hi)?;
    let mut spread: f64 = 0.0;
    for m in lo..=hi {
        let deviation = direction(m)?.sub(&value).norm();
        spread = spread.max(deviation / value.norm().max(f64::MIN_POSITIVE));
    }
    Ok(Estimate { value, spread })
}

fn ordered_window(window: (usize, usize)) -> Result<(usize, usize)> {
    if window.0 > window.1 {
        return Err(Error::InvalidInput(format!(
            "window [{}, {}] is empty",
            window.0, window.1
        )));
    }
    Ok(window)
}

/// The bordered limit determinant for the first `k` directions against a
/// later direction `i >= k`: rows `(ghat, 1, b, ..., b^{k-1})`, the first
/// row carrying index `i`, the rest indices `0..k`.
pub fn hhat<S: Scalar>(profile: &AsymptoticProfile<S>, k: usize, i: usize) -> Result<Vector<S>> {
    if i < k {
        return Err(Error::Index { i, min: k });
    }
    let needed = i + 1;
    if profile.b.len() < needed || profile.ghat.len() < needed {
        return Err(Error::Range {
            index: i,
            max: profile.b.len().min(profile.ghat.len()).saturating_sub(1),
            context: "profile entries",
        });
    }
    let mut first_column = Vec::with_capacity(k + 1);
    let mut block = Vec::with_capacity(k + 1);
    let power_row = |b: S| -> Vec<S> {
        let mut row = Vec::with_capacity(k);
        let mut p = S::one();
        for _ in 0..k {
            row.push(p);
            p *= b;
        }
        row
    };
    first_column.push(profile.ghat[i].clone());
    block.push(power_row(profile.b[i]));
    for j in 0..k {
        first_column.push(profile.ghat[j].clone());
        block.push(power_row(profile.b[j]));
    }
    Ok(BorderedVectorDeterminant::new(first_column, block)?.evaluate())
}

/// The constant `C_{k,i} = |hhat_{k,i}| / (|V(b_0..b_{k-1})| * |ghat_i|)`
/// governing how fast the cell functional shrinks scale `i >= k`.
pub fn acceleration_constant<S: Scalar>(
    profile: &AsymptoticProfile<S>,
    k: usize,
    i: usize,
) -> Result<f64> {
    let h = hhat(profile, k, i)?;
    let v = vandermonde(&profile.b[..k]).modulus();
    if v == 0.0 {
        return Err(Error::DegenerateProfile {
            reason: "coincident nodes give a vanishing Vandermonde product".into(),
        });
    }
    let ghat_norm = profile.ghat[i].norm();
    if ghat_norm == 0.0 {
        return Err(Error::DegenerateProfile {
            reason: format!("limiting direction {i} is zero"),
        });
    }
    Ok(h.norm() / (v * ghat_norm))
}

/// Difference ratio `<y, dg_i(m+j)> / <y, dg_i(m)>`; approaches `b_i^j`.
pub fn eta<S: Scalar>(
    scale: &dyn ScaleFamily<S>,
    weighting: &Weighting<S>,
    i: usize,
    j: usize,
    m: usize,
) -> Result<S> {
    let den = weighting.apply(&scale.delta(i, m)?)?;
    if den.modulus() == 0.0 {
        return Err(Error::ZeroDenominator { m });
    }
    Ok(weighting.apply(&scale.delta(i, m + j)?)? / den)
}

/// Geometric decay fit of a positive error sequence.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    /// Geometric mean of successive ratios across the samples.
    pub rate: f64,
    /// Largest relative deviation of an individual ratio from the rate.
    pub fit_quality: f64,
}

/// Measure the decay rate of consecutive positive error values.
pub fn measure_rate(errors: &[(usize, f64)]) -> Result<RateFit> {
    if errors.len() < 4 {
        return Err(Error::InsufficientData {
            need: 4,
            got: errors.len(),
        });
    }
    for pair in errors.windows(2) {
        if pair[1].0 != pair[0].0 + 1 {
            return Err(Error::InvalidInput(format!(
                "error indices must be consecutive, got {} then {}",
                pair[0].0, pair[1].0
            )));
        }
    }
    for &(n, value) in errors {
        if !(value > 0.0) {
            return Err(Error::NonpositiveError { n, value });
        }
    }
    let steps = errors.len() - 1;
    let rate = (errors[steps].1 / errors[0].1).powf(1.0 / steps as f64);
    let mut fit_quality: f64 = 0.0;
    for pair in errors.windows(2) {
        let ratio = pair[1].1 / pair[0].1;
        fit_quality = fit_quality.max((ratio - rate).abs() / rate);
    }
    Ok(RateFit { rate, fit_quality })
}

/// Tolerances and the evaluation window for the claim registry.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// The column at which the claims are evaluated.
    pub k: usize,
    /// Index window for measurements, inclusive.
    pub window: (usize, usize),
    /// Tolerance for quantities that are exact up to rounding.
    pub tol_exact: f64,
    /// Relative tolerance for limit values read off at the window end.
    pub tol_asymptotic: f64,
    /// Required decay factor across the window for limits that approach zero.
    pub decrease_factor: f64,
    /// Ceiling for the final column-over-column error ratio.
    pub ratio_ceiling: f64,
    /// Below this norm a bordered limit determinant counts as zero.
    pub hhat_zero_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            k: 1,
            window: (15, 25),
            tol_exact: 1e-10,
            tol_asymptotic: 0.05,
            decrease_factor: 5.0,
            ratio_ceiling: 0.1,
            hhat_zero_tol: 1e-10,
        }
    }
}

/// Fixed registry of verifiable claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimId {
    /// Weighted difference ratios approach the nodes; adjacent scales decay.
    ScaleRatioLimits,
    /// The normalized denominator approaches the Vandermonde product.
    DenominatorLimit,
    /// The first `k` scales are annihilated; later scales shrink by their
    /// predicted constants.
    AnnihilationAndConstants,
    /// Functional outputs of later scales decay relative to earlier scales.
    GeneralizedScaleDecay,
    /// The truncated expansion residual is small against the last kept scale.
    ExpansionResidual,
    /// Plateau columns decay at the rate of the first surviving scale.
    RatePlateau,
    /// Column errors match the predicted constants times the surviving
    /// scale norm.
    RateConstants,
    /// Plateau columns improve on the column before them.
    ColumnAcceleration,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::ScaleRatioLimits,
        ClaimId::DenominatorLimit,
        ClaimId::AnnihilationAndConstants,
        ClaimId::GeneralizedScaleDecay,
        ClaimId::ExpansionResidual,
        ClaimId::RatePlateau,
        ClaimId::RateConstants,
        ClaimId::ColumnAcceleration,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            ClaimId::ScaleRatioLimits => "1",
            ClaimId::DenominatorLimit => "2",
            ClaimId::AnnihilationAndConstants => "3a",
            ClaimId::GeneralizedScaleDecay => "3b",
            ClaimId::ExpansionResidual => "4",
            ClaimId::RatePlateau => "5a",
            ClaimId::RateConstants => "5b",
            ClaimId::ColumnAcceleration => "5c",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClaimId::ScaleRatioLimits => "scale ratio limits",
            ClaimId::DenominatorLimit => "denominator limit",
            ClaimId::AnnihilationAndConstants => "annihilation and asymptotic constants",
            ClaimId::GeneralizedScaleDecay => "generalized scale decay",
            ClaimId::ExpansionResidual => "expansion residual",
            ClaimId::RatePlateau => "rate plateau",
            ClaimId::RateConstants => "rate constants",
            ClaimId::ColumnAcceleration => "column acceleration",
        }
    }
}

/// Outcome of one claim.
#[derive(Debug, Clone)]
pub struct ClaimRecord {
    pub claim: ClaimId,
    pub predicted: Vec<Value>,
    pub measured: Vec<Value>,
    pub tolerance: f64,
    pub pass: bool,
    pub window: (usize, usize),
    /// False when the claim's hypotheses do not apply to this run; such
    /// records are informational and never counted as failures.
    pub asserted: bool,
    pub note: Option<String>,
}

impl ClaimRecord {
    fn to_json(&self) -> Value {
        json!({
            "claim": self.claim.id(),
            "label": self.claim.label(),
            "predicted": self.predicted,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "pass": self.pass,
            "window": [self.window.0, self.window.1],
            "asserted": self.asserted,
            "note": self.note,
        })
    }
}

/// Full claim-registry outcome for one run.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub k: usize,
    pub window: (usize, usize),
    /// First offset `j >= 1` with a nonzero coefficient at `k + j - 1`,
    /// when the model coefficients are known.
    pub detected_mu: Option<usize>,
    pub claims: Vec<ClaimRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "window": [self.window.0, self.window.1],
            "detected_mu": self.detected_mu,
            "pass": self.pass,
            "claims": self.claims.iter().map(ClaimRecord::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn claim(&self, id: ClaimId) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.claim == id)
    }
}

fn real_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Claim evaluation context for a synthetic model with known limit and
/// coefficients.
struct ModelHarness<'a, S: Scalar> {
    model: &'a ModelSequence<'a, S>,
    ext: Extrapolator<'a, S>,
    profile: AsymptoticProfile<S>,
    cfg: VerifyConfig,
}

impl<'a, S: Scalar> ModelHarness<'a, S> {
    /// Column error through the expansion identity: with the model exact by
    /// construction and the functional linear and annihilating the first
    /// `kcol` scales, `s_{n,kcol} - limit` equals the sum of the surviving
    /// per-scale functional terms. Evaluating that sum keeps every term at
    /// its own magnitude, so the result stays fully accurate long after a
    /// direct `x_n`-based subtraction would drown in rounding.
    fn column_error(&self, kcol: usize, n: usize) -> Result<f64> {
        let scale = self.model.scale();
        let mut acc = Vector::zeros(self.model.dim());
        for idx in kcol..self.model.order() {
            let coeff = self.model.coeffs()[idx];
            if coeff == S::zero() {
                continue;
            }
            let member = ScaleMember::new(scale, idx)?;
            let term = self.ext.functional(&member, n, kcol)?;
            acc.axpy(coeff, &term);
        }
        Ok(acc.norm())
    }

    fn column_errors(&self, kcol: usize) -> Result<Vec<(usize, f64)>> {
        let (lo, hi) = self.cfg.window;
        (lo..=hi).map(|n| Ok((n, self.column_error(kcol, n)?))).collect()
    }

    fn mu(&self) -> Option<usize> {
        let k = self.cfg.k;
        (1..)
            .take_while(|j| k + j - 1 < self.model.order())
            .find(|j| self.model.coeffs()[k + j - 1] != S::zero())
    }
}

/// Evaluate the full claim registry against a synthetic model.
///
/// Per-claim errors become failed records with an explanatory note; only a
/// violated precondition (bad window, inestimable profile) aborts the run.
pub fn verify_claims<'a, S: Scalar>(
    model: &'a ModelSequence<'a, S>,
    weighting: &'a Weighting<S>,
    cfg: VerifyConfig,
) -> Result<VerificationReport> {
    let (lo, hi) = ordered_window(cfg.window)?;
    if cfg.k == 0 {
        return Err(Error::InvalidInput(
            "claims are evaluated at a column k >= 1".into(),
        ));
    }
    let scale = model.scale();
    if cfg.k > scale.count() {
        return Err(Error::Range {
            index: cfg.k,
            max: scale.count(),
            context: "claim column vs scale count",
        });
    }
    let ext = Extrapolator::new(model, scale, weighting)?;
    let profile = AsymptoticProfile::for_family(scale, weighting, (lo, hi))?;
    let harness = ModelHarness {
        model,
        ext,
        profile,
        cfg,
    };

    let mu = harness.mu();
    let mut claims = Vec::with_capacity(ClaimId::ALL.len());
    for id in ClaimId::ALL {
        let record = match id {
            ClaimId::ScaleRatioLimits => claim_scale_ratios(&harness),
            ClaimId::DenominatorLimit => claim_denominator(&harness),
            ClaimId::AnnihilationAndConstants => claim_annihilation(&harness),
            ClaimId::GeneralizedScaleDecay => claim_generalized_decay(&harness),
            ClaimId::ExpansionResidual => claim_expansion_residual(&harness),
            ClaimId::RatePlateau => claim_rate_plateau(&harness, mu),
            ClaimId::RateConstants => claim_rate_constants(&harness, mu),
            ClaimId::ColumnAcceleration => claim_column_acceleration(&harness, mu),
        };
        claims.push(record.unwrap_or_else(|err| ClaimRecord {
            claim: id,
            predicted: vec![],
            measured: vec![],
            tolerance: cfg.tol_asymptotic,
            pass: false,
            window: cfg.window,
            asserted: true,
            note: Some(format!("evaluation failed: {err}")),
        }));
    }

    let pass = claims.iter().all(|c| !c.asserted || c.pass);
    Ok(VerificationReport {
        k: cfg.k,
        window: cfg.window,
        detected_mu: mu,
        claims,
        pass,
    })
}

fn claim_scale_ratios<S: Scalar>(h: &ModelHarness<'_, S>) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (lo, hi) = cfg.window;
    let scale = h.model.scale();
    let weighting = h.ext.weighting();
    let mut predicted = Vec::new();
    let mut measured = Vec::new();
    let mut pass = true;
    let mut notes = Vec::new();

    for i in 0..scale.count() {
        let target = h.profile.b()[i];
        let plain = estimate_b(scale, weighting, i, (lo, hi))?;
        let delta_ratio = eta(scale, weighting, i, 1, hi)?;
        predicted.push(target.to_json());
        measured.push(delta_ratio.to_json());
        let rel_plain = (plain.value - target).modulus() / target.modulus();
        let rel_delta = (delta_ratio - target).modulus() / target.modulus();
        if rel_plain > cfg.tol_asymptotic || rel_delta > cfg.tol_asymptotic {
            pass = false;
            notes.push(format!(
                "scale {i}: ratio off target by {:.2e} (plain) / {:.2e} (difference)",
                rel_plain, rel_delta
            ));
        }
    }

    // Adjacent weighted differences must form a decaying scale themselves.
    for i in 0..scale.count().saturating_sub(1) {
        let ratio_at = |m: usize| -> Result<f64> {
            let den = weighting.apply(&scale.delta(i, m)?)?.modulus();
            if den == 0.0 {
                return Err(Error::ZeroDenominator { m });
            }
            Ok(weighting.apply(&scale.delta(i + 1, m)?)?.modulus() / den)
        };
        let head = ratio_at(lo)?;
        let tail = ratio_at(hi)?;
        if !(tail <= head / cfg.decrease_factor) {
            pass = false;
            notes.push(format!(
                "adjacent weighted differences {}/{} decayed only from {head:.3e} to {tail:.3e}",
                i + 1,
                i
            ));
        }
    }

    Ok(ClaimRecord {
        claim: ClaimId::ScaleRatioLimits,
        predicted,
        measured,
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: true,
        note: join_notes(notes),
    })
}

fn claim_denominator<S: Scalar>(h: &ModelHarness<'_, S>) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (lo, hi) = cfg.window;
    let k = cfg.k;
    let target = vandermonde(&h.profile.b()[..k]);
    let mut pass = true;
    let mut notes = Vec::new();
    for n in lo..=hi {
        if let Err(err) = h.ext.psi(n, k) {
            pass = false;
            notes.push(format!("normalized denominator undefined at n={n}: {err}"));
        }
    }
    let measured = h.ext.psi(hi, k)?;
    let rel = (measured - target).modulus() / target.modulus();
    if rel > cfg.tol_asymptotic {
        pass = false;
        notes.push(format!("relative gap {rel:.3e} at n={hi}"));
    }
    Ok(ClaimRecord {
        claim: ClaimId::DenominatorLimit,
        predicted: vec![target.to_json()],
        measured: vec![measured.to_json()],
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: true,
        note: join_notes(notes),
    })
}

fn claim_annihilation<S: Scalar>(h: &ModelHarness<'_, S>) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (lo, hi) = cfg.window;
    let k = cfg.k;
    let scale = h.model.scale();
    let mut pass = true;
    let mut notes = Vec::new();
    let mut predicted = Vec::new();
    let mut measured = Vec::new();

    // The first k scales must be removed down to rounding.
    let mut worst: f64 = 0.0;
    for i in 0..k {
        let member = ScaleMember::new(scale, i)?;
        let image = h.ext.functional(&member, hi, k)?.norm();
        let size = scale.eval(i, hi)?.norm();
        worst = worst.max(image / size);
    }
    if worst > cfg.tol_exact {
        pass = false;
        notes.push(format!("annihilation residual {worst:.3e} exceeds {:.1e}", cfg.tol_exact));
    } else {
        notes.push(format!("annihilation residual {worst:.3e}"));
    }

    // Surviving scales shrink by their constants (or vanish faster when the
    // bordered limit determinant is zero).
    for i in k..scale.count().min(k + 2) {
        let member = ScaleMember::new(scale, i)?;
        let ratio_at = |n: usize| -> Result<f64> {
            Ok(h.ext.functional(&member, n, k)?.norm() / scale.eval(i, n)?.norm())
        };
        let hh = hhat(&h.profile, k, i)?;
        if hh.norm() > cfg.hhat_zero_tol * (1.0 + h.profile.ghat()[i].norm()) {
            let constant = acceleration_constant(&h.profile, k, i)?;
            let got = ratio_at(hi)?;
            predicted.push(real_json(constant));
            measured.push(real_json(got));
            let rel = (got - constant).abs() / constant;
            if rel > cfg.tol_asymptotic {
                pass = false;
                notes.push(format!("scale {i}: constant off by {rel:.3e}"));
            }
        } else {
            let head = ratio_at(lo)?;
            let tail = ratio_at(hi)?;
            predicted.push(real_json(0.0));
            measured.push(real_json(tail));
            if !(tail <= head / cfg.decrease_factor) {
                pass = false;
                notes.push(format!(
                    "scale {i}: zero-determinant branch decayed only from {head:.3e} to {tail:.3e}"
                ));
            } else {
                notes.push(format!("scale {i}: zero-determinant branch, ratio decaying"));
            }
        }
    }

    Ok(ClaimRecord {
        claim: ClaimId::AnnihilationAndConstants,
        predicted,
        measured,
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: true,
        note: join_notes(notes),
    })
}

fn claim_generalized_decay<S: Scalar>(h: &ModelHarness<'_, S>) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (lo, hi) = cfg.window;
    let k = cfg.k;
    let scale = h.model.scale();
    if scale.count() < k + 2 {
        return Ok(skip(
            ClaimId::GeneralizedScaleDecay,
            cfg,
            "needs at least k+2 scale functions",
        ));
    }
    let member = ScaleMember::new(scale, k + 1)?;
    let q = |n: usize| -> Result<f64> {
        Ok(h.ext.functional(&member, n, k)?.norm() / scale.eval(k, n)?.norm())
    };
    let head = q(lo)?;
    let tail = q(hi)?;
    let pass = tail <= head / cfg.decrease_factor;
    Ok(ClaimRecord {
        claim: ClaimId::GeneralizedScaleDecay,
        predicted: vec![real_json(0.0)],
        measured: vec![real_json(tail)],
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: true,
        note: Some(format!("ratio fell from {head:.3e} to {tail:.3e}")),
    })
}

fn claim_expansion_residual<S: Scalar>(h: &ModelHarness<'_, S>) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (lo, hi) = cfg.window;
    let k = cfg.k;
    let scale = h.model.scale();
    let p = h.model.order();
    let mut predicted = Vec::new();
    let mut measured = Vec::new();
    let mut pass = true;
    let mut notes = Vec::new();
    let mut asserted_any = false;

    for r in [k, k + 1] {
        if r >= scale.count() {
            notes.push(format!("order {r}: no such scale function, skipped"));
            continue;
        }
        // Residual after keeping expansion terms up to scale r, relative to
        // that scale's size.
        let residual = |n: usize| -> Result<f64> {
            let mut acc = Vector::zeros(h.model.dim());
            for idx in (r + 1)..p {
                let coeff = h.model.coeffs()[idx];
                if coeff == S::zero() {
                    continue;
                }
                let member = ScaleMember::new(scale, idx)?;
                acc.axpy(coeff, &h.ext.functional(&member, n, k)?);
            }
            Ok(acc.norm() / scale.eval(r, n)?.norm())
        };
        let head = residual(lo)?;
        let tail = residual(hi)?;
        predicted.push(real_json(0.0));
        measured.push(real_json(tail));
        if head == 0.0 && tail == 0.0 {
            notes.push(format!("order {r}: residual identically zero"));
            continue;
        }
        asserted_any = true;
        if !(tail <= head / cfg.decrease_factor) {
            pass = false;
            notes.push(format!(
                "order {r}: residual decayed only from {head:.3e} to {tail:.3e}"
            ));
        }
    }

    Ok(ClaimRecord {
        claim: ClaimId::ExpansionResidual,
        predicted,
        measured,
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: asserted_any,
        note: join_notes(notes),
    })
}

fn claim_rate_plateau<S: Scalar>(
    h: &ModelHarness<'_, S>,
    mu: Option<usize>,
) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let k = cfg.k;
    let Some(mu) = mu else {
        return Ok(skip(
            ClaimId::RatePlateau,
            cfg,
            "no nonzero coefficient beyond the evaluated column; the column is exact",
        ));
    };
    let target = h.profile.b()[k + mu - 1].modulus();
    let mut predicted = Vec::new();
    let mut measured = Vec::new();
    let mut pass = true;
    let mut notes = Vec::new();
    for j in 0..mu {
        let errors = h.column_errors(k + j)?;
        let fit = measure_rate(&errors)?;
        predicted.push(real_json(target));
        measured.push(real_json(fit.rate));
        let rel = (fit.rate - target).abs() / target;
        if rel > cfg.tol_asymptotic {
            pass = false;
            notes.push(format!(
                "column {}: rate {:.6} vs target {target:.6}",
                k + j,
                fit.rate
            ));
        }
    }
    Ok(ClaimRecord {
        claim: ClaimId::RatePlateau,
        predicted,
        measured,
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: true,
        note: join_notes(notes),
    })
}

fn claim_rate_constants<S: Scalar>(
    h: &ModelHarness<'_, S>,
    mu: Option<usize>,
) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (_, hi) = cfg.window;
    let k = cfg.k;
    let Some(mu) = mu else {
        return Ok(skip(
            ClaimId::RateConstants,
            cfg,
            "no nonzero coefficient beyond the evaluated column",
        ));
    };
    let scale = h.model.scale();
    let target_idx = k + mu - 1;
    let coeff_mag = h.model.coeffs()[target_idx].modulus();
    let mut predicted = Vec::new();
    let mut measured = Vec::new();
    let mut pass = true;
    let mut notes = Vec::new();
    let mut asserted_any = false;
    for j in 0..mu {
        let hh = hhat(&h.profile, k + j, target_idx)?;
        if hh.norm() <= cfg.hhat_zero_tol * (1.0 + h.profile.ghat()[target_idx].norm()) {
            notes.push(format!(
                "column {}: bordered limit determinant vanishes, no constant to match",
                k + j
            ));
            continue;
        }
        asserted_any = true;
        let constant = coeff_mag * acceleration_constant(&h.profile, k + j, target_idx)?;
        let got = h.column_error(k + j, hi)? / scale.eval(target_idx, hi)?.norm();
        predicted.push(real_json(constant));
        measured.push(real_json(got));
        let rel = (got - constant).abs() / constant;
        if rel > cfg.tol_asymptotic {
            pass = false;
            notes.push(format!("column {}: constant off by {rel:.3e}", k + j));
        }
    }
    Ok(ClaimRecord {
        claim: ClaimId::RateConstants,
        predicted,
        measured,
        tolerance: cfg.tol_asymptotic,
        pass,
        window: cfg.window,
        asserted: asserted_any,
        note: join_notes(notes),
    })
}

fn claim_column_acceleration<S: Scalar>(
    h: &ModelHarness<'_, S>,
    mu: Option<usize>,
) -> Result<ClaimRecord> {
    let cfg = &h.cfg;
    let (lo, hi) = cfg.window;
    let k = cfg.k;
    let Some(mu) = mu else {
        return Ok(skip(
            ClaimId::ColumnAcceleration,
            cfg,
            "no nonzero coefficient beyond the evaluated column",
        ));
    };
    if h.model.coeffs().get(k - 1).map_or(true, |c| *c == S::zero()) {
        return Ok(skip(
            ClaimId::ColumnAcceleration,
            cfg,
            "coefficient at the evaluated column is zero; the hypothesis does not apply",
        ));
    }
    let hh = hhat(&h.profile, k - 1, k - 1)?;
    if hh.norm() <= cfg.hhat_zero_tol * (1.0 + h.profile.ghat()[k - 1].norm()) {
        return Ok(skip(
            ClaimId::ColumnAcceleration,
            cfg,
            "bordered limit determinant of the previous column vanishes",
        ));
    }

    let base_head = h.column_error(k - 1, lo)?;
    let base_tail = h.column_error(k - 1, hi)?;
    let mut predicted = Vec::new();
    let mut measured = Vec::new();
    let mut pass = true;
    let mut notes = Vec::new();
    for j in 0..mu {
        let head = h.column_error(k + j, lo)? / base_head;
        let tail = h.column_error(k + j, hi)? / base_tail;
        predicted.push(real_json(0.0));
        measured.push(real_json(tail));
        if !(tail <= cfg.ratio_ceiling && tail <= head / cfg.decrease_factor) {
            pass = false;
            notes.push(format!(
                "column {} over column {}: ratio went {head:.3e} -> {tail:.3e}",
                k + j,
                k - 1
            ));
        }
    }
    Ok(ClaimRecord {
        claim: ClaimId::ColumnAcceleration,
        predicted,
        measured,
        tolerance: cfg.ratio_ceiling,
        pass,
        window: cfg.window,
        asserted: true,
        note: join_notes(notes),
    })
}

fn skip(claim: ClaimId, cfg: &VerifyConfig, reason: &str) -> ClaimRecord {
    ClaimRecord {
        claim,
        predicted: vec![],
        measured: vec![],
        tolerance: cfg.tol_asymptotic,
        pass: true,
        window: cfg.window,
        asserted: false,
        note: Some(reason.to_string()),
    }
}

fn join_notes(notes: Vec<String>) -> Option<String> {
    if notes.is_empty() {
        None
    } else {
        Some(notes.join("; "))
    }
}

/// Claim evaluation for tabulated data with a known (or user-supplied) limit
/// but unknown coefficients. Scale-only claims are asserted; claims that
/// need the coefficients are reported informationally, with the directly
/// measured column rate attached for reference.
pub fn verify_claims_tabulated<S: Scalar>(
    x: &dyn Sequence<S>,
    limit: &Vector<S>,
    scale: &dyn ScaleFamily<S>,
    weighting: &Weighting<S>,
    cfg: VerifyConfig,
) -> Result<VerificationReport> {
    // Reuse the model machinery with zero coefficients for the scale-only
    // claims; x itself is consulted only for the direct-rate diagnostics.
    let zero_model = ModelSequence::new(limit.clone(), vec![], scale)?;
    let mut report = verify_claims(&zero_model, weighting, cfg)?;
    report.detected_mu = None;

    // Direct column-rate diagnostic for the data sequence.
    let ext = Extrapolator::new(x, scale, weighting)?;
    let (lo, hi) = cfg.window;
    let direct_note = {
        let errors: Result<Vec<(usize, f64)>> = (lo..=hi)
            .map(|n| Ok((n, ext.extrapolate(n, cfg.k)?.sub(limit).norm())))
            .collect();
        match errors.and_then(|e| measure_rate(&e)) {
            Ok(fit) => format!(
                "model coefficients unavailable; directly measured column-{} error rate {:.6} (fit spread {:.2e})",
                cfg.k, fit.rate, fit.fit_quality
            ),
            Err(err) => format!(
                "model coefficients unavailable; direct rate measurement failed: {err}"
            ),
        }
    };
    for claim in &mut report.claims {
        if matches!(
            claim.claim,
            ClaimId::ExpansionResidual
                | ClaimId::RatePlateau
                | ClaimId::RateConstants
                | ClaimId::ColumnAcceleration
        ) {
            claim.asserted = false;
            claim.pass = true;
            claim.note = Some(direct_note.clone());
        }
    }
    report.pass = report.claims.iter().all(|c| !c.asserted || c.pass);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::sequences::{GeometricScale, TabulatedScale, TabulatedSequence};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(components: &[f64]) -> Vector<f64> {
        Vector::new(components.to_vec())
    }

    fn scalar_two_scale() -> GeometricScale<f64> {
        GeometricScale::geometric(vec![v(&[1.0]), v(&[1.0])], vec![0.5, 0.25]).unwrap()
    }

    #[test]
    fn estimate_b_exact_family_has_zero_spread() {
        let fam = scalar_two_scale();
        let y = Weighting::ones(1);
        let estimate = estimate_b(&fam, &y, 0, (5, 15)).unwrap();
        assert!((estimate.value - 0.5).abs() <= 1e-14);
        assert!(estimate.spread <= 1e-13);
    }

    #[test]
    fn estimate_b_perturbed_family_converges() {
        let fam = GeometricScale::perturbed(vec![v(&[1.0])], vec![0.5], vec![0.3]).unwrap();
        let y = Weighting::ones(1);
        let estimate = estimate_b(&fam, &y, 0, (150, 200)).unwrap();
        assert!((estimate.value - 0.5).abs() <= 1e-2);
    }

    #[test]
    fn estimate_b_on_noise_reports_spread_without_failing() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vector<f64>> = (0..30)
            .map(|_| v(&[rng.random_range(0.5..1.5), rng.random_range(0.5..1.5)]))
            .collect();
        let table = TabulatedSequence::new(rows).unwrap();
        let fam = TabulatedScale::new(vec![table]).unwrap();
        let y = Weighting::ones(2);
        let estimate = estimate_b(&fam, &y, 0, (5, 25)).unwrap();
        assert!(estimate.spread > 0.05, "spread {}", estimate.spread);
    }

    #[test]
    fn estimate_ghat_closed_forms() {
        let fam = scalar_two_scale();
        let y = Weighting::ones(1);
        let g0 = estimate_ghat(&fam, &y, 0, (3, 9)).unwrap();
        let g1 = estimate_ghat(&fam, &y, 1, (3, 9)).unwrap();
        assert!((g0.value[0] - (-2.0)).abs() <= 1e-12);
        assert!((g1.value[0] - (-4.0 / 3.0)).abs() <= 1e-12);
        assert!(g0.spread <= 1e-12);

        // Two components, weighting only sees the first.
        let fam2 = GeometricScale::geometric(vec![v(&[1.0, 1.0])], vec![0.5]).unwrap();
        let y2 = Weighting::new(v(&[1.0, 0.0])).unwrap();
        let g = estimate_ghat(&fam2, &y2, 0, (3, 9)).unwrap();
        assert!((g.value[0] - (-2.0)).abs() <= 1e-12);
        assert!((g.value[1] - (-2.0)).abs() <= 1e-12);
    }

    #[test]
    fn hhat_order_one_is_direction_difference() {
        let fam = scalar_two_scale();
        let y = Weighting::ones(1);
        let profile = fam.limit_profile(&y).unwrap().unwrap();
        let h = hhat(&profile, 1, 1).unwrap();
        // -4/3 - (-2) = 2/3.
        assert!((h[0] - (2.0 / 3.0)).abs() <= 1e-12);
        assert!(matches!(hhat(&profile, 1, 0), Err(Error::Index { .. })));
    }

    #[test]
    fn hhat_vanishes_on_direction_collision() {
        let profile = AsymptoticProfile::new(
            vec![0.5, 0.25],
            vec![v(&[-2.0, 1.0]), v(&[-2.0, 1.0])],
            ProfileSource::ExactFromFamily,
            None,
        );
        let h = hhat(&profile, 1, 1).unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn acceleration_constant_scalar_case() {
        let fam = scalar_two_scale();
        let y = Weighting::ones(1);
        let profile = fam.limit_profile(&y).unwrap().unwrap();
        let c = acceleration_constant(&profile, 1, 1).unwrap();
        assert!((c - 0.5).abs() <= 1e-12, "C = {c}");
    }

    #[test]
    fn acceleration_constant_zero_when_hhat_vanishes() {
        let profile = AsymptoticProfile::new(
            vec![0.5, 0.25],
            vec![v(&[-2.0, 1.0]), v(&[-2.0, 1.0])],
            ProfileSource::ExactFromFamily,
            None,
        );
        let c = acceleration_constant(&profile, 1, 1).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn acceleration_constant_matches_measured_ratio() {
        // Scalar three-scale family: the measured shrink ratio of the first
        // unremoved scale equals the predicted constant.
        let fam = GeometricScale::geometric(
            vec![v(&[1.0]), v(&[1.0]), v(&[1.0])],
            vec![0.8, 0.4, 0.2],
        )
        .unwrap();
        let y = Weighting::ones(1);
        let profile = fam.limit_profile(&y).unwrap().unwrap();
        let c = acceleration_constant(&profile, 2, 2).unwrap();
        let model = ModelSequence::new(v(&[0.0]), vec![1.0, 1.0, 1.0], &fam).unwrap();
        let ext = Extrapolator::new(&model, &fam, &y).unwrap();
        let member = ScaleMember::new(&fam, 2).unwrap();
        let n = 30;
        let measured = ext.functional(&member, n, 2).unwrap().norm()
            / fam.eval(2, n).unwrap().norm();
        assert!(
            (measured - c).abs() <= 0.05 * c,
            "measured {measured} vs predicted {c}"
        );
    }

    #[test]
    fn eta_examples() {
        let fam = scalar_two_scale();
        let y = Weighting::ones(1);
        assert_eq!(eta(&fam, &y, 0, 0, 7).unwrap(), 1.0);
        let value = eta(&fam, &y, 0, 2, 5).unwrap();
        assert!((value - 0.25).abs() <= 1e-13);

        let perturbed =
            GeometricScale::perturbed(vec![v(&[1.0])], vec![0.5], vec![0.3]).unwrap();
        let value = eta(&perturbed, &y, 0, 2, 100).unwrap();
        assert!((value - 0.25).abs() <= 1e-2);
    }

    #[test]
    fn measure_rate_exact_geometric() {
        let errors: Vec<(usize, f64)> = (10..=20).map(|n| (n, 3.0 * 0.4f64.powi(n as i32))).collect();
        let fit = measure_rate(&errors).unwrap();
        assert!((fit.rate - 0.4).abs() <= 1e-12);
        assert!(fit.fit_quality <= 1e-12);
    }

    #[test]
    fn measure_rate_with_slow_correction() {
        let errors: Vec<(usize, f64)> = (15..=25)
            .map(|n| (n, 2.0 * 0.2f64.powi(n as i32) * (1.0 + 0.1 / n as f64)))
            .collect();
        let fit = measure_rate(&errors).unwrap();
        assert!((fit.rate - 0.2).abs() <= 0.02 * 0.2, "rate {}", fit.rate);
    }

    #[test]
    fn measure_rate_input_validation() {
        assert!(matches!(
            measure_rate(&[(0, 1.0), (1, 0.5), (2, 0.25)]),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            measure_rate(&[(0, 1.0), (2, 0.5), (3, 0.25), (4, 0.125)]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            measure_rate(&[(0, 1.0), (1, 0.5), (2, 0.0), (3, 0.25)]),
            Err(Error::NonpositiveError { n: 2, .. })
        ));
    }

    #[test]
    fn profile_validation_hints() {
        let good = scalar_two_scale();
        let y = Weighting::ones(1);
        let profile = good.limit_profile(&y).unwrap().unwrap();
        // Two directions in dimension one are necessarily dependent.
        let findings = profile.validate();
        assert!(findings.iter().any(|f| f.contains("linearly")));

        let bad = AsymptoticProfile::new(
            vec![0.25, 0.5],
            vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])],
            ProfileSource::EstimatedFromData,
            Some((0, 10)),
        );
        assert!(bad.validate().iter().any(|f| f.contains("decrease")));
    }

    #[test]
    fn verify_all_coefficients_nonzero_passes() {
        let parts = presets::named("g3").unwrap().materialize::<f64>().unwrap();
        let model =
            ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale).unwrap();
        let report = verify_claims(&model, &parts.weighting, VerifyConfig::default()).unwrap();
        assert!(report.pass, "report: {}", report.to_json());
        assert_eq!(report.detected_mu, Some(1));
        for claim in &report.claims {
            assert!(claim.pass, "claim {} failed: {:?}", claim.claim.id(), claim.note);
        }
    }

    #[test]
    fn verify_plateau_detects_mu_two() {
        let parts = presets::named("plateau").unwrap().materialize::<f64>().unwrap();
        let model =
            ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale).unwrap();
        let cfg = VerifyConfig {
            k: 2,
            ..VerifyConfig::default()
        };
        let report = verify_claims(&model, &parts.weighting, cfg).unwrap();
        assert_eq!(report.detected_mu, Some(2));
        assert!(report.pass, "report: {}", report.to_json());
        let plateau = report.claim(ClaimId::RatePlateau).unwrap();
        assert_eq!(plateau.measured.len(), 2);
        for rate in &plateau.measured {
            let rate = rate.as_f64().unwrap();
            assert!((rate - 0.1).abs() <= 0.05 * 0.1, "rate {rate}");
        }
    }

    #[test]
    fn verify_divergent_sequence_recovers_antilimit() {
        let parts = presets::named("divergent").unwrap().materialize::<f64>().unwrap();
        let model =
            ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale).unwrap();
        let cfg = VerifyConfig {
            k: 1,
            window: (10, 20),
            ..VerifyConfig::default()
        };
        // The input diverges...
        let head = model.value(10).unwrap().sub(model.limit()).norm();
        let tail = model.value(20).unwrap().sub(model.limit()).norm();
        assert!(tail > 5.0 * head);
        // ...while the first column still converges at the second node.
        let report = verify_claims(&model, &parts.weighting, cfg).unwrap();
        assert!(report.pass, "report: {}", report.to_json());
        let plateau = report.claim(ClaimId::RatePlateau).unwrap();
        let rate = plateau.measured[0].as_f64().unwrap();
        assert!((rate - 0.4).abs() <= 0.05 * 0.4, "rate {rate}");
    }

    #[test]
    fn verify_perturbed_family_passes_at_far_window() {
        let parts = presets::named("perturbed3").unwrap().materialize::<f64>().unwrap();
        let model =
            ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale).unwrap();
        let cfg = VerifyConfig {
            k: 1,
            window: (30, 45),
            ..VerifyConfig::default()
        };
        let report = verify_claims(&model, &parts.weighting, cfg).unwrap();
        assert!(report.pass, "report: {}", report.to_json());
    }

    #[test]
    fn verify_zero_tolerance_fails_and_reports() {
        let parts = presets::named("g3").unwrap().materialize::<f64>().unwrap();
        let model =
            ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale).unwrap();
        let cfg = VerifyConfig {
            tol_asymptotic: 0.0,
            ..VerifyConfig::default()
        };
        let report = verify_claims(&model, &parts.weighting, cfg).unwrap();
        assert!(!report.pass);
        let json = report.to_json();
        assert_eq!(json["pass"], false);
        assert!(json["claims"].as_array().unwrap().len() == 8);
    }

    #[test]
    fn verify_tabulated_asserts_scale_claims_only() {
        let parts = presets::named("g3").unwrap().materialize::<f64>().unwrap();
        let model =
            ModelSequence::new(parts.limit.clone(), parts.alpha.clone(), &parts.scale).unwrap();
        let x = TabulatedSequence::from_sequence(&model, 30).unwrap();
        let report = verify_claims_tabulated(
            &x,
            &parts.limit,
            &parts.scale,
            &parts.weighting,
            VerifyConfig::default(),
        )
        .unwrap();
        assert!(report.pass, "report: {}", report.to_json());
        assert_eq!(report.detected_mu, None);
        let plateau = report.claim(ClaimId::RatePlateau).unwrap();
        assert!(!plateau.asserted);
        assert!(plateau.note.as_ref().unwrap().contains("rate"));
        for id in [ClaimId::ScaleRatioLimits, ClaimId::DenominatorLimit, ClaimId::AnnihilationAndConstants] {
            assert!(report.claim(id).unwrap().asserted);
        }
    }

    #[test]
    fn report_claim_registry_is_complete() {
        let ids: Vec<&str> = ClaimId::ALL.iter().map(|c| c.id()).collect();
        assert_eq!(ids, ["1", "2", "3a", "3b", "4", "5a", "5b", "5c"]);
    }
}
