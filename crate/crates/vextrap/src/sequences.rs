//! Scale families and the sequences built on them.
//!
//! A scale family supplies the known comparison functions `g_i(m)` that the
//! extrapolation engine removes from a sequence. Analytic families evaluate
//! `w_i * b_i^m`, optionally damped by a decaying perturbation so that the
//! limiting behavior is reached asymptotically rather than identically;
//! tabulated families wrap user-supplied data.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Sequence, Vector, Weighting};
use crate::theory::{AsymptoticProfile, ProfileSource};

/// How a scale family is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleKind {
    AnalyticGeometric,
    AnalyticPerturbed,
    Tabulated,
}

impl ScaleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScaleKind::AnalyticGeometric => "analytic-geometric",
            ScaleKind::AnalyticPerturbed => "analytic-perturbed",
            ScaleKind::Tabulated => "tabulated",
        }
    }
}

/// A family of scale functions `(i, m) -> g_i(m)`, `i = 0..count`, sharing
/// one index range and one dimension.
pub trait ScaleFamily<S: Scalar> {
    /// Number of scale functions available.
    fn count(&self) -> usize;
    fn dim(&self) -> usize;
    /// Number of admissible indices `m` (each function evaluates on `0..len`).
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn kind(&self) -> ScaleKind;
    fn eval(&self, i: usize, m: usize) -> Result<Vector<S>>;

    /// Forward difference `g_i(m+1) - g_i(m)`.
    fn delta(&self, i: usize, m: usize) -> Result<Vector<S>> {
        Ok(self.eval(i, m + 1)?.sub(&self.eval(i, m)?))
    }

    /// Exact limiting profile (ratio targets and limiting directions) when
    /// the family has closed-form asymptotics; `Ok(None)` when it does not.
    fn limit_profile(&self, _weighting: &Weighting<S>) -> Result<Option<AsymptoticProfile<S>>> {
        Ok(None)
    }
}

/// One member of a scale family viewed as a standalone sequence.
pub struct ScaleMember<'a, S: Scalar> {
    family: &'a dyn ScaleFamily<S>,
    index: usize,
}

impl<'a, S: Scalar> ScaleMember<'a, S> {
    pub fn new(family: &'a dyn ScaleFamily<S>, index: usize) -> Result<Self> {
        if index >= family.count() {
            return Err(Error::Range {
                index,
                max: family.count().saturating_sub(1),
                context: "scale function index",
            });
        }
        Ok(ScaleMember { family, index })
    }
}

impl<S: Scalar> Sequence<S> for ScaleMember<'_, S> {
    fn dim(&self) -> usize {
        self.family.dim()
    }
    fn max_index(&self) -> usize {
        self.family.len().saturating_sub(1)
    }
    fn value(&self, m: usize) -> Result<Vector<S>> {
        self.family.eval(self.index, m)
    }
    fn delta(&self, m: usize) -> Result<Vector<S>> {
        self.family.delta(self.index, m)
    }
}

/// Default index range for analytic families.
const ANALYTIC_DEFAULT_LEN: usize = 10_001;

/// Analytic scale family `g_i(m) = w_i * b_i^m`, optionally with the decaying
/// perturbation factor `1 + c_i / (m + 1)`.
///
/// Construction enforces strictly decreasing node moduli, distinct nonzero
/// nodes, nodes different from one, and nonzero direction vectors.
#[derive(Debug, Clone)]
pub struct GeometricScale<S> {
    weights: Vec<Vector<S>>,
    nodes: Vec<S>,
    perturbation: Option<Vec<S>>,
    len: usize,
}

impl<S: Scalar> GeometricScale<S> {
    /// Exact geometric family `g_i(m) = w_i * b_i^m`.
    pub fn geometric(weights: Vec<Vector<S>>, nodes: Vec<S>) -> Result<Self> {
        Self::build(weights, nodes, None)
    }

    /// Asymptotically geometric family `g_i(m) = w_i * b_i^m * (1 + c_i/(m+1))`.
    /// Requires `|c_i| < 1` so the factor never vanishes.
    pub fn perturbed(weights: Vec<Vector<S>>, nodes: Vec<S>, amplitudes: Vec<S>) -> Result<Self> {
        if amplitudes.len() != nodes.len() {
            return Err(Error::Dimension {
                expected: nodes.len(),
                got: amplitudes.len(),
                context: "perturbation amplitudes",
            });
        }
        for (i, c) in amplitudes.iter().enumerate() {
            if c.modulus() >= 1.0 {
                return Err(Error::InvalidScale {
                    index: i,
                    reason: format!("perturbation amplitude |{c}| must be below 1"),
                });
            }
        }
        Self::build(weights, nodes, Some(amplitudes))
    }

    fn build(
        weights: Vec<Vector<S>>,
        nodes: Vec<S>,
        perturbation: Option<Vec<S>>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput(
                "scale family needs at least one node".into(),
            ));
        }
        if weights.len() != nodes.len() {
            return Err(Error::Dimension {
                expected: nodes.len(),
                got: weights.len(),
                context: "scale direction vectors",
            });
        }
        let dim = weights[0].dim();
        for (i, w) in weights.iter().enumerate() {
            if w.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: w.dim(),
                    context: "scale direction vector",
                });
            }
            if w.norm() == 0.0 {
                return Err(Error::InvalidScale {
                    index: i,
                    reason: "direction vector is zero".into(),
                });
            }
        }
        for (i, b) in nodes.iter().enumerate() {
            if b.modulus() == 0.0 {
                return Err(Error::InvalidScale {
                    index: i,
                    reason: "node is zero".into(),
                });
            }
            if *b == S::one() {
                return Err(Error::InvalidScale {
                    index: i,
                    reason: "node equals one".into(),
                });
            }
            for (j, prev) in nodes[..i].iter().enumerate() {
                if *b == *prev {
                    return Err(Error::InvalidScale {
                        index: i,
                        reason: format!("duplicate node, same as index {j}"),
                    });
                }
            }
            if i > 0 && b.modulus() >= nodes[i - 1].modulus() {
                return Err(Error::InvalidScale {
                    index: i,
                    reason: format!(
                        "node moduli must decrease strictly: |{}| >= |{}|",
                        b,
                        nodes[i - 1]
                    ),
                });
            }
        }
        Ok(GeometricScale {
            weights,
            nodes,
            perturbation,
            len: ANALYTIC_DEFAULT_LEN,
        })
    }

    /// Restrict or extend the admissible index range.
    pub fn with_len(mut self, len: usize) -> Self {
        self.len = len;
        self
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Vector<S>] {
        &self.weights
    }

    pub fn amplitudes(&self) -> Option<&[S]> {
        self.perturbation.as_deref()
    }
}

impl<S: Scalar> ScaleFamily<S> for GeometricScale<S> {
    fn count(&self) -> usize {
        self.nodes.len()
    }
    fn dim(&self) -> usize {
        self.weights[0].dim()
    }
    fn len(&self) -> usize {
        self.len
    }
    fn kind(&self) -> ScaleKind {
        if self.perturbation.is_some() {
            ScaleKind::AnalyticPerturbed
        } else {
            ScaleKind::AnalyticGeometric
        }
    }

    fn eval(&self, i: usize, m: usize) -> Result<Vector<S>> {
        if i >= self.count() {
            return Err(Error::Range {
                index: i,
                max: self.count() - 1,
                context: "scale function index",
            });
        }
        if m >= self.len {
            return Err(Error::Range {
                index: m,
                max: self.len.saturating_sub(1),
                context: "scale family evaluation",
            });
        }
        let mut factor = self.nodes[i].powi(m as i32);
        if let Some(c) = &self.perturbation {
            factor *= S::one() + c[i] / S::from_f64((m + 1) as f64);
        }
        Ok(self.weights[i].scaled(factor))
    }

    fn limit_profile(&self, weighting: &Weighting<S>) -> Result<Option<AsymptoticProfile<S>>> {
        // The perturbation decays, so both kinds share the same limits:
        // ratio target b_i and limiting direction w_i / (<y,w_i> (b_i - 1)).
        let mut ghat = Vec::with_capacity(self.count());
        for (i, w) in self.weights.iter().enumerate() {
            let coeff = weighting.apply(w)?;
            if coeff.modulus() == 0.0 {
                return Err(Error::DegenerateProfile {
                    reason: format!("weighted direction coefficient vanishes for scale {i}"),
                });
            }
            let denom = coeff * (self.nodes[i] - S::one());
            ghat.push(w.scaled(S::one() / denom));
        }
        Ok(Some(AsymptoticProfile::new(
            self.nodes.clone(),
            ghat,
            ProfileSource::ExactFromFamily,
            None,
        )))
    }
}

/// Stored vector sequence with rectangular rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSequence<S> {
    dim: usize,
    rows: Vec<Vector<S>>,
}

impl<S: Scalar> TabulatedSequence<S> {
    /// Infer the dimension from the first row; an empty list yields an empty
    /// zero-dimensional sequence.
    pub fn new(rows: Vec<Vector<S>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vector::dim);
        Self::with_dim(dim, rows)
    }

    pub fn with_dim(dim: usize, rows: Vec<Vector<S>>) -> Result<Self> {
        for row in &rows {
            if row.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: row.dim(),
                    context: "tabulated sequence row",
                });
            }
        }
        Ok(TabulatedSequence { dim, rows })
    }

    /// Materialize the first `len` values of any sequence.
    pub fn from_sequence(seq: &dyn Sequence<S>, len: usize) -> Result<Self> {
        let rows = (0..len).map(|m| seq.value(m)).collect::<Result<Vec<_>>>()?;
        TabulatedSequence::with_dim(seq.dim(), rows)
    }

    pub fn rows(&self) -> &[Vector<S>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl<S: Scalar> Sequence<S> for TabulatedSequence<S> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn max_index(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }
    fn value(&self, m: usize) -> Result<Vector<S>> {
        self.rows.get(m).cloned().ok_or(Error::Range {
            index: m,
            max: self.rows.len().saturating_sub(1),
            context: "tabulated sequence",
        })
    }
}

/// Scale family backed by stored tables, one per scale function.
///
/// No construction-time asymptotic validation happens here; whether the data
/// behaves like a scale family is measured and reported, never assumed.
#[derive(Debug, Clone)]
pub struct TabulatedScale<S> {
    members: Vec<TabulatedSequence<S>>,
}

impl<S: Scalar> TabulatedScale<S> {
    pub fn new(members: Vec<TabulatedSequence<S>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput(
                "tabulated scale family needs at least one member".into(),
            ));
        }
        let dim = members[0].dim();
        for m in &members {
            if m.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: m.dim(),
                    context: "tabulated scale member",
                });
            }
        }
        Ok(TabulatedScale { members })
    }

    /// Materialize the first `len` values of every member of any family;
    /// `order` selects and reorders the members.
    pub fn from_family(
        family: &dyn ScaleFamily<S>,
        order: &[usize],
        len: usize,
    ) -> Result<Self> {
        let members = order
            .iter()
            .map(|&i| {
                let member = ScaleMember::new(family, i)?;
                TabulatedSequence::from_sequence(&member, len)
            })
            .collect::<Result<Vec<_>>>()?;
        TabulatedScale::new(members)
    }

    pub fn members(&self) -> &[TabulatedSequence<S>] {
        &self.members
    }
}

impl<S: Scalar> ScaleFamily<S> for TabulatedScale<S> {
    fn count(&self) -> usize {
        self.members.len()
    }
    fn dim(&self) -> usize {
        self.members[0].dim()
    }
    fn len(&self) -> usize {
        self.members.iter().map(TabulatedSequence::len).min().unwrap_or(0)
    }
    fn kind(&self) -> ScaleKind {
        ScaleKind::Tabulated
    }
    fn eval(&self, i: usize, m: usize) -> Result<Vector<S>> {
        let member = self.members.get(i).ok_or(Error::Range {
            index: i,
            max: self.members.len().saturating_sub(1),
            context: "scale function index",
        })?;
        member.value(m)
    }
}

/// Synthetic sequence `x_m = limit + sum_i coeffs[i] * g_i(m)`, exact by
/// construction. Coefficients may be zero; the truncation order is the
/// coefficient count.
pub struct ModelSequence<'a, S: Scalar> {
    limit: Vector<S>,
    coeffs: Vec<S>,
    scale: &'a dyn ScaleFamily<S>,
}

impl<'a, S: Scalar> ModelSequence<'a, S> {
    pub fn new(limit: Vector<S>, coeffs: Vec<S>, scale: &'a dyn ScaleFamily<S>) -> Result<Self> {
        if limit.dim() != scale.dim() {
            return Err(Error::Dimension {
                expected: scale.dim(),
                got: limit.dim(),
                context: "model limit vector",
            });
        }
        if coeffs.len() > scale.count() {
            return Err(Error::Range {
                index: coeffs.len(),
                max: scale.count(),
                context: "model coefficient count",
            });
        }
        Ok(ModelSequence {
            limit,
            coeffs,
            scale,
        })
    }

    pub fn limit(&self) -> &Vector<S> {
        &self.limit
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn scale(&self) -> &'a dyn ScaleFamily<S> {
        self.scale
    }

    /// Truncation order: the number of scale terms in the model.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Tail after removing the limit and the first `r` terms:
    /// `x_m - limit - sum_{i<r} coeffs[i] g_i(m) = sum_{i>=r} coeffs[i] g_i(m)`.
    pub fn remainder(&self, r: usize, m: usize) -> Result<Vector<S>> {
        if r > self.coeffs.len() {
            return Err(Error::Range {
                index: r,
                max: self.coeffs.len(),
                context: "remainder order",
            });
        }
        let mut acc = Vector::zeros(self.limit.dim());
        for (i, coeff) in self.coeffs.iter().enumerate().skip(r) {
            acc.axpy(*coeff, &self.scale.eval(i, m)?);
        }
        Ok(acc)
    }

    /// The deviation sequence `m -> x_m - limit`, evaluated in closed form so
    /// that small values keep full relative accuracy.
    pub fn deviation(&self) -> ModelDeviation<'_, S> {
        ModelDeviation { model: self }
    }
}

impl<S: Scalar> Sequence<S> for ModelSequence<'_, S> {
    fn dim(&self) -> usize {
        self.limit.dim()
    }
    fn max_index(&self) -> usize {
        self.scale.len().saturating_sub(1)
    }
    fn value(&self, m: usize) -> Result<Vector<S>> {
        let mut acc = self.limit.clone();
        for (i, coeff) in self.coeffs.iter().enumerate() {
            acc.axpy(*coeff, &self.scale.eval(i, m)?);
        }
        Ok(acc)
    }
}

/// View of a model sequence relative to its limit.
pub struct ModelDeviation<'a, S: Scalar> {
    model: &'a ModelSequence<'a, S>,
}

impl<S: Scalar> Sequence<S> for ModelDeviation<'_, S> {
    fn dim(&self) -> usize {
        self.model.dim()
    }
    fn max_index(&self) -> usize {
        self.model.max_index()
    }
    fn value(&self, m: usize) -> Result<Vector<S>> {
        self.model.remainder(0, m)
    }
}

/// Advisory spot check that the family decays like an asymptotic scale:
/// reports every adjacent pair whose norm ratio fails to drop below `tol`
/// by the end of the window. An empty report means no findings.
pub fn scale_decay_report<S: Scalar>(
    family: &dyn ScaleFamily<S>,
    window: (usize, usize),
    tol: f64,
) -> Result<Vec<String>> {
    let (lo, hi) = window;
    let mut findings = Vec::new();
    for i in 0..family.count().saturating_sub(1) {
        let head = family.eval(i + 1, lo)?.norm() / family.eval(i, lo)?.norm();
        let tail = family.eval(i + 1, hi)?.norm() / family.eval(i, hi)?.norm();
        if !(tail < tol) || !(tail <= head) {
            findings.push(format!(
                "norm ratio of scales {}/{} is {tail:.3e} at index {hi} (was {head:.3e} at {lo}); expected decay below {tol:.1e}",
                i + 1,
                i
            ));
        }
    }
    Ok(findings)
}
