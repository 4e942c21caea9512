//! Coordinate vectors, the sesquilinear inner product, and sequence access.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A fixed-dimension coordinate vector over the chosen scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S>(Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(components: Vec<S>) -> Self {
        Vector(components)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![S::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[S] {
        &self.0
    }

    pub fn into_components(self) -> Vec<S> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == S::zero())
    }

    /// Componentwise sum. Panics on dimension mismatch; callers validate
    /// dimensions once at construction time.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector addition dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector subtraction dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect())
    }

    pub fn scaled(&self, factor: S) -> Self {
        Vector(self.0.iter().map(|a| *a * factor).collect())
    }

    /// In-place `self += factor * other`.
    pub fn axpy(&mut self, factor: S, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += factor * *b;
        }
    }

    /// Euclidean norm induced by the inner product.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.modulus_sq()).sum::<f64>().sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl<S: Scalar> std::ops::Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, index: usize) -> &S {
        &self.0[index]
    }
}

impl<S: Scalar> FromIterator<S> for Vector<S> {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        Vector(iter.into_iter().collect())
    }
}

/// Sesquilinear inner product, conjugating the first argument:
/// `inner(a, b) = sum_j conj(a_j) * b_j`.
pub fn inner<S: Scalar>(a: &Vector<S>, b: &Vector<S>) -> Result<S> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            got: b.dim(),
            context: "inner product arguments",
        });
    }
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * *y;
    }
    Ok(acc)
}

/// Inner product with fixed positive componentwise weights.
pub fn weighted_inner<S: Scalar>(a: &Vector<S>, b: &Vector<S>, weights: &[f64]) -> Result<S> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            got: b.dim(),
            context: "inner product arguments",
        });
    }
    if weights.len() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            got: weights.len(),
            context: "inner product weights",
        });
    }
    let mut acc = S::zero();
    for ((x, y), w) in a.iter().zip(b.iter()).zip(weights) {
        acc += x.conj() * *y * S::from_f64(*w);
    }
    Ok(acc)
}

/// The fixed nonzero vector `y` that turns vector equations into scalar ones
/// through the functional `u -> inner(y, u)`, plus the inner-product
/// convention (first argument conjugated, optional positive weights).
#[derive(Debug, Clone)]
pub struct Weighting<S> {
    y: Vector<S>,
    inner_weights: Option<Vec<f64>>,
}

impl<S: Scalar> Weighting<S> {
    pub fn new(y: Vector<S>) -> Result<Self> {
        if y.norm() == 0.0 {
            return Err(Error::InvalidInput(
                "weighting vector must be nonzero".into(),
            ));
        }
        Ok(Weighting {
            y,
            inner_weights: None,
        })
    }

    /// All-ones weighting of the given dimension.
    pub fn ones(dim: usize) -> Self {
        Weighting {
            y: Vector::new(vec![S::one(); dim]),
            inner_weights: None,
        }
    }

    /// Attach fixed positive inner-product weights.
    pub fn with_inner_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.y.dim() {
            return Err(Error::Dimension {
                expected: self.y.dim(),
                got: weights.len(),
                context: "inner product weights",
            });
        }
        if weights.iter().any(|w| *w <= 0.0) {
            return Err(Error::InvalidInput(
                "inner product weights must be positive".into(),
            ));
        }
        self.inner_weights = Some(weights);
        Ok(self)
    }

    pub fn y(&self) -> &Vector<S> {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.y.dim()
    }

    /// Apply the scalar functional: `inner(y, u)`.
    pub fn apply(&self, u: &Vector<S>) -> Result<S> {
        match &self.inner_weights {
            None => inner(&self.y, u),
            Some(w) => weighted_inner(&self.y, u, w),
        }
    }
}

/// Read access to a vector sequence `m -> x_m` over the index range
/// `[0, max_index]`. Evaluation within range is total and deterministic.
pub trait Sequence<S: Scalar> {
    fn dim(&self) -> usize;
    /// Largest admissible index (inclusive).
    fn max_index(&self) -> usize;
    fn value(&self, m: usize) -> Result<Vector<S>>;

    /// Forward difference `x_{m+1} - x_m`.
    fn delta(&self, m: usize) -> Result<Vector<S>> {
        if m + 1 > self.max_index() {
            return Err(Error::Range {
                index: m + 1,
                max: self.max_index(),
                context: "forward difference",
            });
        }
        Ok(self.value(m + 1)?.sub(&self.value(m)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::TabulatedSequence;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn v(components: &[f64]) -> Vector<f64> {
        Vector::new(components.to_vec())
    }

    #[test]
    fn inner_orthogonal_axes_is_zero() {
        assert_eq!(inner(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn inner_conjugates_first_argument() {
        let a = Vector::new(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]);
        let b = Vector::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(inner(&a, &b).unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn inner_direct_summation() {
        // Oracle: 2*3 + 1*4 = 10 by direct summation.
        assert_eq!(inner(&v(&[2.0, 1.0]), &v(&[3.0, 4.0])).unwrap(), 10.0);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let err = inner(&v(&[1.0]), &v(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(v(&[0.0, 0.0, 0.0]).norm(), 0.0);
        assert_eq!(v(&[3.0, 4.0]).norm(), 5.0);
        // Oracle: sqrt(1+1+1+1) = 2 by direct summation.
        assert_eq!(v(&[1.0, 1.0, 1.0, 1.0]).norm(), 2.0);
    }

    #[test]
    fn delta_constant_sequence_is_zero() {
        let seq = TabulatedSequence::new(vec![v(&[2.0, -1.0]); 5]).unwrap();
        assert!(seq.delta(2).unwrap().is_zero());
    }

    #[test]
    fn delta_linear_sequence() {
        let rows = (0..5).map(|m| v(&[m as f64, 2.0 * m as f64])).collect();
        let seq = TabulatedSequence::new(rows).unwrap();
        for m in 0..4 {
            assert_eq!(seq.delta(m).unwrap(), v(&[1.0, 2.0]));
        }
    }

    #[test]
    fn delta_halving_sequence() {
        // x_m = 0.5^m, so x_{m+1} - x_m = -0.5^{m+1}; checked at m = 0, 1, 2.
        let rows = (0..5).map(|m| v(&[0.5f64.powi(m)])).collect();
        let seq = TabulatedSequence::new(rows).unwrap();
        for m in 0..3i32 {
            let expect = -(0.5f64.powi(m + 1));
            assert_eq!(seq.delta(m as usize).unwrap(), v(&[expect]));
        }
    }

    #[test]
    fn delta_out_of_range() {
        let seq = TabulatedSequence::new(vec![v(&[0.0]); 3]).unwrap();
        assert!(matches!(seq.delta(2), Err(Error::Range { .. })));
    }

    #[test]
    fn weighting_rejects_zero_vector() {
        assert!(Weighting::new(v(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn weighted_inner_stays_sesquilinear() {
        let a = Vector::new(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)]);
        let b = Vector::new(vec![Complex64::new(0.5, -1.0), Complex64::new(2.0, 0.0)]);
        let alpha = Complex64::new(0.3, -0.7);
        let beta = Complex64::new(-1.2, 0.4);
        let w = [0.5, 2.5];
        let lhs = weighted_inner(&a.scaled(alpha), &b.scaled(beta), &w).unwrap();
        let rhs = alpha.conj() * beta * weighted_inner(&a, &b, &w).unwrap();
        assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm());
    }

    proptest! {
        #[test]
        fn sesquilinearity(
            are in proptest::collection::vec(-10.0f64..10.0, 3),
            aim in proptest::collection::vec(-10.0f64..10.0, 3),
            bre in proptest::collection::vec(-10.0f64..10.0, 3),
            bim in proptest::collection::vec(-10.0f64..10.0, 3),
            sre in -5.0f64..5.0, sim in -5.0f64..5.0,
            tre in -5.0f64..5.0, tim in -5.0f64..5.0,
        ) {
            let a: Vector<Complex64> = are.iter().zip(&aim)
                .map(|(&re, &im)| Complex64::new(re, im)).collect();
            let b: Vector<Complex64> = bre.iter().zip(&bim)
                .map(|(&re, &im)| Complex64::new(re, im)).collect();
            let alpha = Complex64::new(sre, sim);
            let beta = Complex64::new(tre, tim);
            let lhs = inner(&a.scaled(alpha), &b.scaled(beta)).unwrap();
            let rhs = alpha.conj() * beta * inner(&a, &b).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-14 * (1.0 + rhs.norm()));
        }

        #[test]
        fn norm_zero_iff_zero_and_triangle(
            a in proptest::collection::vec(-10.0f64..10.0, 4),
            b in proptest::collection::vec(-10.0f64..10.0, 4),
        ) {
            let u = Vector::new(a.clone());
            let w = Vector::new(b);
            prop_assert_eq!(u.norm() == 0.0, u.is_zero());
            prop_assert!(u.add(&w).norm() <= u.norm() + w.norm() + 1e-12);
        }

        #[test]
        fn delta_is_linear(
            a in proptest::collection::vec(-10.0f64..10.0, 8),
            b in proptest::collection::vec(-10.0f64..10.0, 8),
        ) {
            let u = TabulatedSequence::new(a.iter().map(|&x| v(&[x])).collect()).unwrap();
            let w = TabulatedSequence::new(b.iter().map(|&x| v(&[x])).collect()).unwrap();
            let sum = TabulatedSequence::new(
                a.iter().zip(&b).map(|(&x, &y)| v(&[x + y])).collect(),
            ).unwrap();
            for m in 0..7 {
                let direct = sum.delta(m).unwrap();
                let split = u.delta(m).unwrap().add(&w.delta(m).unwrap());
                prop_assert!(direct.sub(&split).norm() <= 1e-12);
            }
        }
    }
}
