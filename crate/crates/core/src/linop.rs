//! Minimal interface for operators fed to the Lanczos routines.

use nalgebra::{DMatrix, DVector};

use crate::majorana::C64;

pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// A linear map on `C^dim` together with its adjoint under [`inner`](Self::inner).
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, v: &CVector) -> CVector;

    /// Action of the conjugate transpose.
    fn apply_adjoint(&self, v: &CVector) -> CVector;

    /// Inner product, conjugate-linear in `x`.
    fn inner(&self, x: &CVector, y: &CVector) -> C64 {
        x.dotc(y)
    }

    /// Upper bound on the induced 1-norm.
    fn norm1(&self) -> f64;
}

/// Plain dense matrix with the Euclidean inner product.
#[derive(Debug, Clone)]
pub struct DenseOperator(pub CMatrix);

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn apply(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    fn apply_adjoint(&self, v: &CVector) -> CVector {
        self.0.ad_mul(v)
    }

    fn norm1(&self) -> f64 {
        self.0.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_adjoint_identity() {
        let m = CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 + 1.0, j as f64 - 0.5));
        let op = DenseOperator(m);
        let x = CVector::from_fn(3, |i, _| C64::new(0.3 * i as f64, 1.0));
        let y = CVector::from_fn(3, |i, _| C64::new(1.0, -(i as f64)));
        let lhs = op.inner(&x, &op.apply(&y));
        let rhs = op.inner(&op.apply_adjoint(&x), &y);
        assert!((lhs - rhs).norm() < 1e-12);
        let expected: f64 = (1..=3).map(|i| ((i * i) as f64 + 2.25).sqrt()).sum();
        assert!((op.norm1() - expected).abs() < 1e-12);
    }
}
