//! Small dense linear algebra: pivoted solves with condition estimates,
//! scalar determinants by two routes, vector-valued bordered determinants,
//! and Vandermonde products.
//!
//! Systems here are tiny (k rarely above 10) but often Vandermonde-like and
//! badly conditioned, so every solve carries a 1-norm condition estimate and
//! a relative pivot threshold that separates structural singularity from
//! benign rounding.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::Vector;

/// Default relative pivot threshold below which a system counts as singular.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-13;

/// Largest order at which the cofactor-expansion determinant is intended to
/// run; beyond this the factorial cost stops being negligible.
pub const DEFAULT_ORACLE_MAX_K: usize = 7;

/// Square row-major matrix of field elements.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    k: usize,
    entries: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(k: usize) -> Self {
        DenseMatrix {
            k,
            entries: vec![S::zero(); k * k],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for row in &rows {
            if row.len() != k {
                return Err(Error::Dimension {
                    expected: k,
                    got: row.len(),
                    context: "square matrix row",
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(DenseMatrix { k, entries })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries[row * self.k + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        self.entries[row * self.k + col] = value;
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.modulus())
            .fold(0.0, f64::max)
    }

    /// 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.k)
            .map(|col| (0..self.k).map(|row| self.get(row, col).modulus()).sum())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.k, "matrix-vector dimension mismatch");
        (0..self.k)
            .map(|row| {
                let mut acc = S::zero();
                for col in 0..self.k {
                    acc += self.get(row, col) * x[col];
                }
                acc
            })
            .collect()
    }

    /// Solve `A x = rhs` by Gaussian elimination with partial pivoting on
    /// the column-equilibrated matrix.
    ///
    /// The systems this crate builds have columns graded by wildly different
    /// scale magnitudes; equilibration makes the pivot test and the attached
    /// condition estimate respond to genuine near-dependence (coincident
    /// scales, Vandermonde-type trouble) instead of harmless grading.
    ///
    /// Returns the solution together with the 1-norm condition number of the
    /// equilibrated matrix (from its explicit inverse, cheap at these
    /// orders). Fails with [`Error::SingularSystem`] when an equilibrated
    /// pivot falls below `singular_tol`.
    pub fn solve(&self, rhs: &[S], singular_tol: f64) -> Result<(Vec<S>, f64)> {
        if rhs.len() != self.k {
            return Err(Error::Dimension {
                expected: self.k,
                got: rhs.len(),
                context: "right-hand side",
            });
        }
        let factors = self.factorize(singular_tol)?;
        let solution = factors.solve_scaled(rhs);
        let condition = factors.condition_one();
        Ok((solution, condition))
    }

    fn factorize(&self, singular_tol: f64) -> Result<LuFactors<S>> {
        let k = self.k;
        let mut lu = self.entries.clone();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut sign_flips = 0usize;

        // Column equilibration; a zero column is singular outright.
        let mut col_scale = vec![1.0f64; k];
        for col in 0..k {
            let max = (0..k)
                .map(|row| lu[row * k + col].modulus())
                .fold(0.0, f64::max);
            if max <= 0.0 {
                return Err(Error::SingularSystem {
                    step: col,
                    pivot: 0.0,
                    threshold: singular_tol,
                });
            }
            col_scale[col] = max;
            let inv = S::from_f64(1.0 / max);
            for row in 0..k {
                lu[row * k + col] *= inv;
            }
        }

        let norm_one: f64 = (0..k)
            .map(|col| (0..k).map(|row| lu[row * k + col].modulus()).sum())
            .fold(0.0, f64::max);

        for step in 0..k {
            let mut pivot_row = step;
            let mut pivot_mag = lu[step * k + step].modulus();
            for row in step + 1..k {
                let mag = lu[row * k + step].modulus();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = row;
                }
            }
            if pivot_mag <= singular_tol {
                return Err(Error::SingularSystem {
                    step,
                    pivot: pivot_mag,
                    threshold: singular_tol,
                });
            }
            if pivot_row != step {
                for col in 0..k {
                    lu.swap(step * k + col, pivot_row * k + col);
                }
                perm.swap(step, pivot_row);
                sign_flips += 1;
            }
            let pivot = lu[step * k + step];
            for row in step + 1..k {
                let factor = lu[row * k + step] / pivot;
                lu[row * k + step] = factor;
                for col in step + 1..k {
                    let sub = factor * lu[step * k + col];
                    lu[row * k + col] -= sub;
                }
            }
        }

        Ok(LuFactors {
            k,
            lu,
            perm,
            col_scale,
            norm_one,
            sign_flips,
        })
    }

    /// Determinant via pivoted elimination on the row-equilibrated matrix
    /// (the production route).
    ///
    /// Zero is a legitimate value: an exactly repeated row yields 0 rather
    /// than an error.
    pub fn det(&self) -> S {
        match self.det_impl(0.0) {
            Ok(value) => value,
            Err(_) => S::zero(),
        }
    }

    /// Like [`DenseMatrix::det`], but fails with [`Error::SingularSystem`]
    /// when a row-equilibrated pivot falls below `singular_tol`, so callers
    /// can distinguish a structurally zero determinant from one they should
    /// not divide by.
    pub fn det_with_threshold(&self, singular_tol: f64) -> Result<S> {
        self.det_impl(singular_tol)
    }

    fn det_impl(&self, singular_tol: f64) -> Result<S> {
        let k = self.k;
        if k == 0 {
            return Ok(S::one());
        }
        let mut lu = self.entries.clone();

        // Row equilibration keeps graded rows from tripping the pivot test;
        // the row factors multiply back into the determinant at the end.
        let mut row_factor = S::one();
        for row in 0..k {
            let max = (0..k)
                .map(|col| lu[row * k + col].modulus())
                .fold(0.0, f64::max);
            if max <= 0.0 {
                return if singular_tol > 0.0 {
                    Err(Error::SingularSystem {
                        step: row,
                        pivot: 0.0,
                        threshold: singular_tol,
                    })
                } else {
                    Ok(S::zero())
                };
            }
            row_factor *= S::from_f64(max);
            let inv = S::from_f64(1.0 / max);
            for col in 0..k {
                lu[row * k + col] *= inv;
            }
        }

        let mut sign = S::one();
        for step in 0..k {
            let mut pivot_row = step;
            let mut pivot_mag = lu[step * k + step].modulus();
            for row in step + 1..k {
                let mag = lu[row * k + step].modulus();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = row;
                }
            }
            if pivot_mag <= singular_tol {
                if singular_tol > 0.0 {
                    return Err(Error::SingularSystem {
                        step,
                        pivot: pivot_mag,
                        threshold: singular_tol,
                    });
                }
                if pivot_mag == 0.0 {
                    return Ok(S::zero());
                }
            }
            if pivot_row != step {
                for col in 0..k {
                    lu.swap(step * k + col, pivot_row * k + col);
                }
                sign = -sign;
            }
            let pivot = lu[step * k + step];
            for row in step + 1..k {
                let factor = lu[row * k + step] / pivot;
                for col in step + 1..k {
                    let sub = factor * lu[step * k + col];
                    lu[row * k + col] -= sub;
                }
            }
        }
        let mut det = sign * row_factor;
        for i in 0..k {
            det *= lu[i * k + i];
        }
        Ok(det)
    }

    /// Determinant by recursive cofactor expansion along the first row.
    ///
    /// Independent of the elimination route; factorial cost, meant for
    /// orders up to [`DEFAULT_ORACLE_MAX_K`].
    pub fn det_cofactor(&self) -> S {
        debug_assert!(
            self.k <= 10,
            "cofactor determinant is factorial-cost; order {} is too large",
            self.k
        );
        det_cofactor_rec(&self.entries, self.k, &(0..self.k).collect::<Vec<_>>())
    }
}

fn det_cofactor_rec<S: Scalar>(entries: &[S], k: usize, cols: &[usize]) -> S {
    let row = k - cols.len();
    if cols.is_empty() {
        return S::one();
    }
    let mut acc = S::zero();
    let mut sign = S::one();
    for (pos, &col) in cols.iter().enumerate() {
        let pivot = entries[row * k + col];
        if pivot != S::zero() {
            let remaining: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&c| c != col)
                .collect();
            acc += sign * pivot * det_cofactor_rec(entries, k, &remaining);
        }
        let _ = pos;
        sign = -sign;
    }
    acc
}

struct LuFactors<S> {
    k: usize,
    lu: Vec<S>,
    perm: Vec<usize>,
    col_scale: Vec<f64>,
    /// 1-norm of the equilibrated matrix, taken before elimination.
    norm_one: f64,
    #[allow(dead_code)]
    sign_flips: usize,
}

impl<S: Scalar> LuFactors<S> {
    /// Solve against the equilibrated factors without undoing the column
    /// scaling (the unknowns are the scaled ones).
    fn solve_equilibrated(&self, rhs: &[S]) -> Vec<S> {
        let k = self.k;
        // Forward substitution on the permuted right-hand side.
        let mut x: Vec<S> = self.perm.iter().map(|&p| rhs[p]).collect();
        for row in 1..k {
            for col in 0..row {
                let sub = self.lu[row * k + col] * x[col];
                x[row] -= sub;
            }
        }
        // Back substitution.
        for row in (0..k).rev() {
            for col in row + 1..k {
                let sub = self.lu[row * k + col] * x[col];
                x[row] -= sub;
            }
            x[row] = x[row] / self.lu[row * k + row];
        }
        x
    }

    /// Solve the original system: equilibrated solve, then unscale.
    fn solve_scaled(&self, rhs: &[S]) -> Vec<S> {
        let mut x = self.solve_equilibrated(rhs);
        for (value, scale) in x.iter_mut().zip(&self.col_scale) {
            *value *= S::from_f64(1.0 / scale);
        }
        x
    }

    /// 1-norm condition number of the equilibrated matrix, using explicit
    /// inverse columns.
    fn condition_one(&self) -> f64 {
        let k = self.k;
        if k == 0 {
            return 1.0;
        }
        let mut inv_norm: f64 = 0.0;
        let mut unit = vec![S::zero(); k];
        for col in 0..k {
            unit[col] = S::one();
            let inv_col = self.solve_equilibrated(&unit);
            unit[col] = S::zero();
            let col_sum: f64 = inv_col.iter().map(|e| e.modulus()).sum();
            inv_norm = inv_norm.max(col_sum);
        }
        self.norm_one * inv_norm
    }
}

/// A `(k+1) x (k+1)` determinant whose first column holds coordinate vectors
/// and whose remaining block holds field elements. Its value is the vector
/// obtained by expanding along the first column:
/// `sum_r (-1)^r * column[r] * minor_r`.
#[derive(Debug, Clone)]
pub struct BorderedVectorDeterminant<S> {
    first_column: Vec<Vector<S>>,
    block: Vec<Vec<S>>,
}

impl<S: Scalar> BorderedVectorDeterminant<S> {
    /// `first_column` has `k+1` vectors of equal dimension; `block` has
    /// `k+1` rows of `k` field elements each.
    pub fn new(first_column: Vec<Vector<S>>, block: Vec<Vec<S>>) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::InvalidInput(
                "bordered determinant needs at least one row".into(),
            ));
        }
        let rows = first_column.len();
        let dim = first_column[0].dim();
        for v in &first_column {
            if v.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: v.dim(),
                    context: "bordered determinant first column",
                });
            }
        }
        if block.len() != rows {
            return Err(Error::Dimension {
                expected: rows,
                got: block.len(),
                context: "bordered determinant scalar block rows",
            });
        }
        for row in &block {
            if row.len() != rows - 1 {
                return Err(Error::Dimension {
                    expected: rows - 1,
                    got: row.len(),
                    context: "bordered determinant scalar block row width",
                });
            }
        }
        Ok(BorderedVectorDeterminant {
            first_column,
            block,
        })
    }

    pub fn order(&self) -> usize {
        self.first_column.len() - 1
    }

    /// Evaluate by first-column expansion; the scalar minors run through the
    /// pivoted determinant.
    pub fn evaluate(&self) -> Vector<S> {
        let k = self.order();
        let dim = self.first_column[0].dim();
        let mut acc = Vector::zeros(dim);
        let mut sign = S::one();
        for r in 0..=k {
            let minor = self.minor(r);
            acc.axpy(sign * minor, &self.first_column[r]);
            sign = -sign;
        }
        acc
    }

    /// Scalar minor obtained by deleting row `r` and the first column.
    fn minor(&self, r: usize) -> S {
        let k = self.order();
        if k == 0 {
            return S::one();
        }
        let mut m = DenseMatrix::zeros(k);
        let mut out_row = 0;
        for (row, block_row) in self.block.iter().enumerate() {
            if row == r {
                continue;
            }
            for (col, &value) in block_row.iter().enumerate() {
                m.set(out_row, col, value);
            }
            out_row += 1;
        }
        m.det()
    }
}

/// Vandermonde determinant of the given nodes as the product
/// `prod_{i<j} (c_j - c_i)`; 1 for zero or one node, 0 for coincident nodes.
pub fn vandermonde<S: Scalar>(nodes: &[S]) -> S {
    let mut acc = S::one();
    for j in 1..nodes.len() {
        for i in 0..j {
            acc *= nodes[j] - nodes[i];
        }
    }
    acc
}

/// Explicit power matrix with rows `(1, c_i, c_i^2, ..., c_i^{k-1})`; its
/// determinant equals [`vandermonde`] of the same nodes.
pub fn power_matrix<S: Scalar>(nodes: &[S]) -> DenseMatrix<S> {
    let k = nodes.len();
    let mut m = DenseMatrix::zeros(k);
    for (row, &c) in nodes.iter().enumerate() {
        let mut p = S::one();
        for col in 0..k {
            m.set(row, col, p);
            p *= c;
        }
    }
    m
}
