//! The extrapolation engine.
//!
//! For a sequence `x`, scale family `g`, and weighting `y`, each cell of the
//! extrapolation table comes from the k-by-k linear system
//!
//! ```text
//! sum_i <y, dg_i(n+j)> a_i = <y, dx_{n+j}>,   j = 0..k-1,
//! ```
//!
//! followed by `s_{n,k} = x_n - sum_i a_i g_i(n)`. The same construction
//! applied to an arbitrary sequence `v` in place of `x` defines the linear
//! functional `f_{n,k}(v)`; it reproduces `s_{n,k}` at `v = x` and
//! annihilates the first `k` scale functions. A ratio of determinants gives
//! the algebraically equivalent second route, kept as a cross-check.

use crate::error::{Error, Result};
use crate::linalg::{
    vandermonde, BorderedVectorDeterminant, DenseMatrix, DEFAULT_ORACLE_MAX_K,
    DEFAULT_SINGULAR_TOL,
};
use crate::scalar::{format_f64, Scalar};
use crate::sequences::ScaleFamily;
use crate::space::{Sequence, Vector, Weighting};
use serde_json::{json, Value};

/// Numerical policy for the engine.
#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    /// Relative pivot threshold that flags a cell as singular.
    pub singular_tol: f64,
    /// Largest order at which determinant cross-checks are intended to run.
    pub oracle_max_k: usize,
    /// Condition estimate above which a cell is marked numerically untrusted.
    pub condition_trust: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            singular_tol: DEFAULT_SINGULAR_TOL,
            oracle_max_k: DEFAULT_ORACLE_MAX_K,
            condition_trust: 1e12,
        }
    }
}

/// Solution of one defining system, with quality metadata.
#[derive(Debug, Clone)]
pub struct CoefficientSolution<S> {
    pub n: usize,
    pub k: usize,
    pub alpha_tilde: Vec<S>,
    /// 1-norm condition estimate of the system matrix.
    pub condition: f64,
    /// Euclidean norm of the linear-system residual.
    pub residual: f64,
}

/// Extrapolation of one sequence against one scale family and weighting.
pub struct Extrapolator<'a, S: Scalar> {
    x: &'a dyn Sequence<S>,
    scale: &'a dyn ScaleFamily<S>,
    weighting: &'a Weighting<S>,
    opts: EngineOptions,
}

impl<'a, S: Scalar> Extrapolator<'a, S> {
    pub fn new(
        x: &'a dyn Sequence<S>,
        scale: &'a dyn ScaleFamily<S>,
        weighting: &'a Weighting<S>,
    ) -> Result<Self> {
        Self::with_options(x, scale, weighting, EngineOptions::default())
    }

    pub fn with_options(
        x: &'a dyn Sequence<S>,
        scale: &'a dyn ScaleFamily<S>,
        weighting: &'a Weighting<S>,
        opts: EngineOptions,
    ) -> Result<Self> {
        if scale.dim() != x.dim() {
            return Err(Error::Dimension {
                expected: x.dim(),
                got: scale.dim(),
                context: "scale family vs sequence",
            });
        }
        if weighting.dim() != x.dim() {
            return Err(Error::Dimension {
                expected: x.dim(),
                got: weighting.dim(),
                context: "weighting vs sequence",
            });
        }
        Ok(Extrapolator {
            x,
            scale,
            weighting,
            opts,
        })
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    pub fn scale(&self) -> &'a dyn ScaleFamily<S> {
        self.scale
    }

    pub fn weighting(&self) -> &'a Weighting<S> {
        self.weighting
    }

    /// Check up front that indices `n ..= n+k` are available everywhere.
    fn check_range(&self, v: &dyn Sequence<S>, n: usize, k: usize) -> Result<()> {
        let need = n + k;
        if need > v.max_index() {
            return Err(Error::Range {
                index: need,
                max: v.max_index(),
                context: "sequence data",
            });
        }
        if k > 0 {
            if k > self.scale.count() {
                return Err(Error::Range {
                    index: k,
                    max: self.scale.count(),
                    context: "scale function count",
                });
            }
            if need + 1 > self.scale.len() {
                return Err(Error::Range {
                    index: need,
                    max: self.scale.len().saturating_sub(1),
                    context: "scale family data",
                });
            }
        }
        Ok(())
    }

    /// Assemble the defining system for the cell `(n, k)`, `k >= 1`:
    /// `matrix[j][i] = <y, dg_i(n+j)>`, `rhs[j] = <y, dx_{n+j}>`.
    pub fn build_system(&self, n: usize, k: usize) -> Result<(DenseMatrix<S>, Vec<S>)> {
        if k == 0 {
            return Err(Error::InvalidInput(
                "the defining system needs at least one scale function".into(),
            ));
        }
        self.check_range(self.x, n, k)?;
        let matrix = self.system_matrix(n, k)?;
        let rhs = self.weighted_deltas(self.x, n, k)?;
        Ok((matrix, rhs))
    }

    fn system_matrix(&self, n: usize, k: usize) -> Result<DenseMatrix<S>> {
        let mut matrix = DenseMatrix::zeros(k);
        for j in 0..k {
            for i in 0..k {
                matrix.set(j, i, self.weighting.apply(&self.scale.delta(i, n + j)?)?);
            }
        }
        Ok(matrix)
    }

    fn weighted_deltas(&self, v: &dyn Sequence<S>, n: usize, k: usize) -> Result<Vec<S>> {
        (0..k)
            .map(|j| self.weighting.apply(&v.delta(n + j)?))
            .collect()
    }

    /// Solve the defining system for the cell `(n, k)`.
    pub fn solve_coefficients(&self, n: usize, k: usize) -> Result<CoefficientSolution<S>> {
        let (matrix, rhs) = self.build_system(n, k)?;
        let (alpha_tilde, condition) = matrix.solve(&rhs, self.opts.singular_tol)?;
        let residual = residual_norm(&matrix, &alpha_tilde, &rhs);
        Ok(CoefficientSolution {
            n,
            k,
            alpha_tilde,
            condition,
            residual,
        })
    }

    /// The table entry `s_{n,k} = x_n - sum_i a_i g_i(n)`; `s_{n,0} = x_n`.
    pub fn extrapolate(&self, n: usize, k: usize) -> Result<Vector<S>> {
        self.functional(self.x, n, k)
    }

    /// Apply the cell functional to an arbitrary sequence `v` (solve route).
    pub fn functional(&self, v: &dyn Sequence<S>, n: usize, k: usize) -> Result<Vector<S>> {
        if v.dim() != self.scale.dim() {
            return Err(Error::Dimension {
                expected: self.scale.dim(),
                got: v.dim(),
                context: "functional argument",
            });
        }
        self.check_range(v, n, k)?;
        if k == 0 {
            return v.value(n);
        }
        let matrix = self.system_matrix(n, k)?;
        let rhs = self.weighted_deltas(v, n, k)?;
        let (coeffs, _) = matrix.solve(&rhs, self.opts.singular_tol)?;
        let mut result = v.value(n)?;
        for (i, c) in coeffs.iter().enumerate() {
            result.axpy(-*c, &self.scale.eval(i, n)?);
        }
        Ok(result)
    }

    /// Apply the cell functional through the determinant representation:
    /// a bordered numerator expanded along its first column over the scalar
    /// denominator determinant. Algebraically identical to
    /// [`Extrapolator::functional`]; kept as the independent cross-check.
    pub fn functional_det(&self, v: &dyn Sequence<S>, n: usize, k: usize) -> Result<Vector<S>> {
        if v.dim() != self.scale.dim() {
            return Err(Error::Dimension {
                expected: self.scale.dim(),
                got: v.dim(),
                context: "functional argument",
            });
        }
        self.check_range(v, n, k)?;
        if k == 0 {
            return v.value(n);
        }

        let mut first_column = Vec::with_capacity(k + 1);
        first_column.push(v.value(n)?);
        for i in 0..k {
            first_column.push(self.scale.eval(i, n)?);
        }
        let mut block = Vec::with_capacity(k + 1);
        block.push(self.weighted_deltas(v, n, k)?);
        for i in 0..k {
            let row = (0..k)
                .map(|j| self.weighting.apply(&self.scale.delta(i, n + j)?))
                .collect::<Result<Vec<S>>>()?;
            block.push(row);
        }

        // Denominator: the system matrix transposed; same determinant.
        let denominator_rows: Vec<Vec<S>> = block[1..].to_vec();
        let dmatrix = DenseMatrix::from_rows(denominator_rows)?;
        let denominator = dmatrix.det_with_threshold(self.opts.singular_tol)?;

        let numerator = BorderedVectorDeterminant::new(first_column, block)?.evaluate();
        Ok(numerator.scaled(S::one() / denominator))
    }

    /// Normalized denominator determinant at `(n, k)`; see [`psi`].
    pub fn psi(&self, n: usize, k: usize) -> Result<S> {
        psi(self.scale, self.weighting, n, k)
    }

    /// Vandermonde product of the first `k` nodes of an analytic family, the
    /// limiting value of [`Extrapolator::psi`]; `None` for tabulated data.
    pub fn psi_limit(&self, k: usize) -> Option<S>
    where
        S: Scalar,
    {
        let profile = self.scale.limit_profile(self.weighting).ok().flatten()?;
        if k > profile.b().len() {
            return None;
        }
        Some(vandermonde(&profile.b()[..k]))
    }

    /// Fill the full table over `n0..=n1` and `0..=k_max`.
    ///
    /// Cells fail independently: a singular system or missing data marks the
    /// cell and never aborts the fill. The result is deterministic and
    /// depends only on the inputs.
    pub fn fill_table(&self, n0: usize, n1: usize, k_max: usize) -> Result<ExtrapolationTable<S>> {
        if n0 > n1 {
            return Err(Error::InvalidInput(format!(
                "empty index range: n0 = {n0} exceeds n1 = {n1}"
            )));
        }
        if n1 > self.x.max_index() {
            return Err(Error::Range {
                index: n1,
                max: self.x.max_index(),
                context: "table base row",
            });
        }
        let mut cells = Vec::with_capacity((n1 - n0 + 1) * (k_max + 1));
        for n in n0..=n1 {
            for k in 0..=k_max {
                cells.push(self.fill_cell(n, k));
            }
        }
        Ok(ExtrapolationTable {
            n0,
            n1,
            k_max,
            dim: self.x.dim(),
            condition_trust: self.opts.condition_trust,
            cells,
        })
    }

    fn fill_cell(&self, n: usize, k: usize) -> TableCell<S> {
        if self.check_range(self.x, n, k).is_err() {
            return TableCell::missing(n, k, CellStatus::OutOfData);
        }
        if k == 0 {
            return match self.x.value(n) {
                Ok(value) => TableCell {
                    n,
                    k,
                    status: CellStatus::Ok,
                    value: Some(value),
                    condition: None,
                    residual: None,
                },
                Err(_) => TableCell::missing(n, k, CellStatus::OutOfData),
            };
        }
        match self.solve_coefficients(n, k) {
            Ok(solution) => {
                let mut value = match self.x.value(n) {
                    Ok(v) => v,
                    Err(_) => return TableCell::missing(n, k, CellStatus::OutOfData),
                };
                for (i, c) in solution.alpha_tilde.iter().enumerate() {
                    match self.scale.eval(i, n) {
                        Ok(g) => value.axpy(-*c, &g),
                        Err(_) => return TableCell::missing(n, k, CellStatus::OutOfData),
                    }
                }
                TableCell {
                    n,
                    k,
                    status: CellStatus::Ok,
                    value: Some(value),
                    condition: Some(solution.condition),
                    residual: Some(solution.residual),
                }
            }
            Err(Error::SingularSystem { .. }) => TableCell::missing(n, k, CellStatus::Singular),
            Err(_) => TableCell::missing(n, k, CellStatus::OutOfData),
        }
    }
}

/// Normalized denominator determinant: each row of the denominator
/// determinant is divided by its leading entry `<y, dg_i(n)>`, leaving the
/// determinant of difference ratios. For an exact geometric family this
/// equals the Vandermonde product of the nodes for every `n`, and in general
/// it approaches that product as `n` grows.
pub fn psi<S: Scalar>(
    scale: &dyn ScaleFamily<S>,
    weighting: &Weighting<S>,
    n: usize,
    k: usize,
) -> Result<S> {
    if k == 0 {
        return Ok(S::one());
    }
    if k > scale.count() {
        return Err(Error::Range {
            index: k,
            max: scale.count(),
            context: "scale function count",
        });
    }
    if n + k + 1 > scale.len() {
        return Err(Error::Range {
            index: n + k,
            max: scale.len().saturating_sub(1),
            context: "scale family data",
        });
    }
    let mut matrix = DenseMatrix::zeros(k);
    for i in 0..k {
        let lead = weighting.apply(&scale.delta(i, n)?)?;
        if lead.modulus() == 0.0 {
            return Err(Error::DegenerateNormalization { i, m: n });
        }
        for j in 0..k {
            let entry = weighting.apply(&scale.delta(i, n + j)?)?;
            matrix.set(i, j, entry / lead);
        }
    }
    Ok(matrix.det())
}

fn residual_norm<S: Scalar>(matrix: &DenseMatrix<S>, x: &[S], rhs: &[S]) -> f64 {
    matrix
        .mul_vec(x)
        .iter()
        .zip(rhs)
        .map(|(a, b)| (*a - *b).modulus_sq())
        .sum::<f64>()
        .sqrt()
}

/// Per-cell outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    Singular,
    OutOfData,
}

impl CellStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::Singular => "singular",
            CellStatus::OutOfData => "out-of-data",
        }
    }
}

/// One table cell with its quality metadata.
#[derive(Debug, Clone)]
pub struct TableCell<S> {
    pub n: usize,
    pub k: usize,
    pub status: CellStatus,
    pub value: Option<Vector<S>>,
    pub condition: Option<f64>,
    pub residual: Option<f64>,
}

impl<S: Scalar> TableCell<S> {
    fn missing(n: usize, k: usize, status: CellStatus) -> Self {
        TableCell {
            n,
            k,
            status,
            value: None,
            condition: None,
            residual: None,
        }
    }
}

/// Count summary over a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableCounts {
    pub ok: usize,
    pub singular: usize,
    pub out_of_data: usize,
    pub untrusted: usize,
}

/// The two-dimensional grid of approximations, row `k = 0` being the input
/// sequence itself.
#[derive(Debug, Clone)]
pub struct ExtrapolationTable<S> {
    n0: usize,
    n1: usize,
    k_max: usize,
    dim: usize,
    condition_trust: f64,
    cells: Vec<TableCell<S>>,
}

impl<S: Scalar> ExtrapolationTable<S> {
    pub fn n_range(&self) -> (usize, usize) {
        (self.n0, self.n1)
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cell(&self, n: usize, k: usize) -> Option<&TableCell<S>> {
        if n < self.n0 || n > self.n1 || k > self.k_max {
            return None;
        }
        self.cells.get((n - self.n0) * (self.k_max + 1) + k)
    }

    pub fn cells(&self) -> &[TableCell<S>] {
        &self.cells
    }

    /// A cell is trusted when it was computed and its condition estimate
    /// stays below the configured threshold.
    pub fn is_trusted(&self, cell: &TableCell<S>) -> bool {
        cell.status == CellStatus::Ok && cell.condition.unwrap_or(0.0) <= self.condition_trust
    }

    pub fn counts(&self) -> TableCounts {
        let mut counts = TableCounts {
            ok: 0,
            singular: 0,
            out_of_data: 0,
            untrusted: 0,
        };
        for cell in &self.cells {
            match cell.status {
                CellStatus::Ok => counts.ok += 1,
                CellStatus::Singular => counts.singular += 1,
                CellStatus::OutOfData => counts.out_of_data += 1,
            }
            if cell.status == CellStatus::Ok && !self.is_trusted(cell) {
                counts.untrusted += 1;
            }
        }
        counts
    }

    /// CSV export: `n,k,status,condition,residual` followed by one column
    /// per component; missing values stay empty.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        write!(out, "n,k,status,condition,residual")?;
        for c in 0..self.dim {
            write!(out, ",c{c}")?;
        }
        writeln!(out)?;
        for cell in &self.cells {
            write!(out, "{},{},{}", cell.n, cell.k, cell.status.as_str())?;
            match cell.condition {
                Some(c) => write!(out, ",{}", format_f64(c))?,
                None => write!(out, ",")?,
            }
            match cell.residual {
                Some(r) => write!(out, ",{}", format_f64(r))?,
                None => write!(out, ",")?,
            }
            match &cell.value {
                Some(v) => {
                    for comp in v.iter() {
                        write!(out, ",{}", comp.format_full())?;
                    }
                }
                None => {
                    for _ in 0..self.dim {
                        write!(out, ",")?;
                    }
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// JSON mirror of the CSV export.
    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|cell| {
                json!({
                    "n": cell.n,
                    "k": cell.k,
                    "status": cell.status.as_str(),
                    "condition": cell.condition,
                    "residual": cell.residual,
                    "value": cell.value.as_ref().map(|v| {
                        Value::Array(v.iter().map(|c| c.to_json()).collect())
                    }),
                })
            })
            .collect();
        json!({
            "field": S::FIELD,
            "dimension": self.dim,
            "n0": self.n0,
            "n1": self.n1,
            "kmax": self.k_max,
            "cells": cells,
        })
    }
}
