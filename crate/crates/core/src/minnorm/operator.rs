use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{check_dim, Error, Result};
use crate::minnorm::NormTag;
use crate::scalar::{Real, Scalar};
use crate::sparse::{CscMatrix, DenseMatrix};

/// A linear map `ℝ^cols → ℝ^rows` together with its adjoint.
pub trait LinearMap<F: Scalar>: Send + Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply_into(&self, x: &[F], y: &mut [F]);
    fn apply_adjoint_into(&self, y: &[F], x: &mut [F]);

    /// `max_j Σ_i |a_ij|`, by probing basis vectors unless overridden.
    fn max_abs_column_sum(&self) -> F {
        let mut e = vec![F::zero(); self.cols()];
        let mut col = vec![F::zero(); self.rows()];
        let mut best = F::zero();
        for j in 0..self.cols() {
            e[j] = F::one();
            self.apply_into(&e, &mut col);
            e[j] = F::zero();
            best = best.max_of(col.iter().map(|v| v.abs()).sum());
        }
        best
    }

    /// `max_i Σ_j |a_ij|`, by probing the adjoint unless overridden.
    fn max_abs_row_sum(&self) -> F {
        let mut e = vec![F::zero(); self.rows()];
        let mut row = vec![F::zero(); self.cols()];
        let mut best = F::zero();
        for i in 0..self.rows() {
            e[i] = F::one();
            self.apply_adjoint_into(&e, &mut row);
            e[i] = F::zero();
            best = best.max_of(row.iter().map(|v| v.abs()).sum());
        }
        best
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl<F: Scalar> LinearMap<F> for Identity {
    fn rows(&self) -> usize {
        self.0
    }
    fn cols(&self) -> usize {
        self.0
    }
    fn apply_into(&self, x: &[F], y: &mut [F]) {
        y.copy_from_slice(x);
    }
    fn apply_adjoint_into(&self, y: &[F], x: &mut [F]) {
        x.copy_from_slice(y);
    }
    fn max_abs_column_sum(&self) -> F {
        if self.0 == 0 {
            F::zero()
        } else {
            F::one()
        }
    }
    fn max_abs_row_sum(&self) -> F {
        <Self as LinearMap<F>>::max_abs_column_sum(self)
    }
}

#[derive(Debug, Clone)]
pub struct Diagonal<F>(pub Vec<F>);

impl<F: Scalar> LinearMap<F> for Diagonal<F> {
    fn rows(&self) -> usize {
        self.0.len()
    }
    fn cols(&self) -> usize {
        self.0.len()
    }
    fn apply_into(&self, x: &[F], y: &mut [F]) {
        for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
            *yi = *xi * *d;
        }
    }
    fn apply_adjoint_into(&self, y: &[F], x: &mut [F]) {
        self.apply_into(y, x)
    }
    fn max_abs_column_sum(&self) -> F {
        self.0.iter().fold(F::zero(), |m, d| m.max_of(d.abs()))
    }
    fn max_abs_row_sum(&self) -> F {
        self.max_abs_column_sum()
    }
}

impl<F: Scalar> LinearMap<F> for DenseMatrix<F> {
    fn rows(&self) -> usize {
        DenseMatrix::rows(self)
    }
    fn cols(&self) -> usize {
        DenseMatrix::cols(self)
    }
    fn apply_into(&self, x: &[F], y: &mut [F]) {
        self.mul_vec_into(x, y)
    }
    fn apply_adjoint_into(&self, y: &[F], x: &mut [F]) {
        self.mul_t_vec_into(y, x)
    }
}

impl<F: Scalar> LinearMap<F> for CscMatrix<F> {
    fn rows(&self) -> usize {
        CscMatrix::rows(self)
    }
    fn cols(&self) -> usize {
        CscMatrix::cols(self)
    }
    fn apply_into(&self, x: &[F], y: &mut [F]) {
        self.mul_vec_into(x, y)
    }
    fn apply_adjoint_into(&self, y: &[F], x: &mut [F]) {
        self.mul_t_vec_into(y, x)
    }
    fn max_abs_column_sum(&self) -> F {
        CscMatrix::max_abs_column_sum(self)
    }
    fn max_abs_row_sum(&self) -> F {
        CscMatrix::max_abs_row_sum(self)
    }
}

struct Inner<F: Real> {
    map: Box<dyn LinearMap<F>>,
    domain_norm: NormTag<F>,
    codomain_norm: NormTag<F>,
    opnorm: OnceLock<F>,
}

/// A linear map between normed spaces. Cloning shares the underlying map;
/// [`NormedOperator::same_as`] tests that identity.
#[derive(Clone)]
pub struct NormedOperator<F: Real> {
    inner: Arc<Inner<F>>,
}

impl<F: Real> fmt::Debug for NormedOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormedOperator")
            .field("codomain_dim", &self.codomain_dim())
            .field("domain_dim", &self.domain_dim())
            .field("domain_norm", &self.inner.domain_norm)
            .field("codomain_norm", &self.inner.codomain_norm)
            .finish()
    }
}

impl<F: Real> NormedOperator<F> {
    pub fn new(
        map: impl LinearMap<F> + 'static,
        domain_norm: NormTag<F>,
        codomain_norm: NormTag<F>,
    ) -> Self {
        NormedOperator {
            inner: Arc::new(Inner {
                map: Box::new(map),
                domain_norm,
                codomain_norm,
                opnorm: OnceLock::new(),
            }),
        }
    }

    pub fn identity(n: usize, norm: NormTag<F>) -> Self {
        Self::new(Identity(n), norm.clone(), norm)
    }

    pub fn dense(rows: &[Vec<F>], domain_norm: NormTag<F>, codomain_norm: NormTag<F>) -> Self {
        Self::new(DenseMatrix::from_rows(rows), domain_norm, codomain_norm)
    }

    pub fn domain_dim(&self) -> usize {
        self.inner.map.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.inner.map.rows()
    }

    pub fn domain_norm(&self) -> &NormTag<F> {
        &self.inner.domain_norm
    }

    pub fn codomain_norm(&self) -> &NormTag<F> {
        &self.inner.codomain_norm
    }

    pub fn map(&self) -> &dyn LinearMap<F> {
        self.inner.map.as_ref()
    }

    pub fn same_as(&self, other: &NormedOperator<F>) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        check_dim("operator apply", self.domain_dim(), x.len())?;
        let mut y = vec![F::zero(); self.codomain_dim()];
        self.inner.map.apply_into(x, &mut y);
        Ok(y)
    }

    pub fn apply_adjoint(&self, y: &[F]) -> Result<Vec<F>> {
        check_dim("operator adjoint", self.codomain_dim(), y.len())?;
        let mut x = vec![F::zero(); self.domain_dim()];
        self.inner.map.apply_adjoint_into(y, &mut x);
        Ok(x)
    }

    pub fn domain_norm_of(&self, x: &[F]) -> F {
        self.inner.domain_norm.evaluate(x)
    }

    pub fn codomain_norm_of(&self, y: &[F]) -> F {
        self.inner.codomain_norm.evaluate(y)
    }

    /// Induced operator norm, computed once and cached.
    pub fn opnorm(&self) -> Result<F> {
        if let Some(v) = self.inner.opnorm.get() {
            return Ok(*v);
        }
        let v = self.compute_opnorm()?;
        Ok(*self.inner.opnorm.get_or_init(|| v))
    }

    fn compute_opnorm(&self) -> Result<F> {
        let map = self.inner.map.as_ref();
        match (&self.inner.domain_norm, &self.inner.codomain_norm) {
            (NormTag::L1, NormTag::L1) => Ok(map.max_abs_column_sum()),
            (NormTag::LInf, NormTag::LInf) => Ok(map.max_abs_row_sum()),
            // Extreme points of the unit ball are ±e_j (scaled by 1/ℓ_j).
            (NormTag::L1, _) | (NormTag::Cost(_), _) => {
                let weights = match &self.inner.domain_norm {
                    NormTag::Cost(l) => Some(l.clone()),
                    _ => None,
                };
                let mut e = vec![F::zero(); self.domain_dim()];
                let mut col = vec![F::zero(); self.codomain_dim()];
                let mut best = F::zero();
                for j in 0..self.domain_dim() {
                    e[j] = F::one();
                    map.apply_into(&e, &mut col);
                    e[j] = F::zero();
                    let mut v = self.codomain_norm_of(&col);
                    if let Some(l) = &weights {
                        v /= l[j];
                    }
                    best = best.max_of(v);
                }
                Ok(best)
            }
            // Extreme points of the ℓ∞ ball are sign vectors.
            (NormTag::LInf, _) if self.domain_dim() <= 16 => {
                let n = self.domain_dim();
                let mut x = vec![F::zero(); n];
                let mut y = vec![F::zero(); self.codomain_dim()];
                let mut best = F::zero();
                for mask in 0u32..(1u32 << n) {
                    for (j, xj) in x.iter_mut().enumerate() {
                        *xj = if mask >> j & 1 == 1 { F::one() } else { -F::one() };
                    }
                    map.apply_into(&x, &mut y);
                    best = best.max_of(self.codomain_norm_of(&y));
                }
                Ok(best)
            }
            (d, c) => Err(Error::Config(format!(
                "no exact operator norm for {d:?} -> {c:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opnorm_of_explicit_matrices() {
        let rows = vec![vec![1.0, -2.0], vec![3.0, 4.0]];
        let a1 = NormedOperator::dense(&rows, NormTag::L1, NormTag::L1);
        assert_eq!(a1.opnorm().unwrap(), 6.0);
        let ainf = NormedOperator::dense(&rows, NormTag::LInf, NormTag::LInf);
        assert_eq!(ainf.opnorm().unwrap(), 7.0);
        let id = NormedOperator::<f64>::identity(3, NormTag::L1);
        assert_eq!(id.opnorm().unwrap(), 1.0);
    }

    #[test]
    fn sign_enumeration_agrees_with_row_sums() {
        let rows = vec![vec![1.0, -2.0, 0.5], vec![3.0, 4.0, -1.0]];
        let a = NormedOperator::dense(&rows, NormTag::LInf, NormTag::L1);
        // max over sign vectors of ‖Ax‖₁ for this matrix, by hand: x = (1,-1,1)
        // gives (3.5, -2) -> 5.5; x = (1,1,-1) gives (-1.5, 8) -> 9.5.
        assert_eq!(a.opnorm().unwrap(), 9.5);
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let id = NormedOperator::<f64>::identity(2, NormTag::L1);
        assert!(matches!(
            id.apply(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_consistency_on_dense() {
        let rows = vec![vec![1.0, -2.0, 0.5], vec![3.0, 4.0, -1.0]];
        let a = NormedOperator::dense(&rows, NormTag::L1, NormTag::L1);
        let x = [0.3, -1.1, 2.0];
        let y = [1.5, 0.25];
        let lhs: f64 = crate::scalar::dot(&a.apply(&x).unwrap(), &y);
        let rhs = crate::scalar::dot(&x, &a.apply_adjoint(&y).unwrap());
        assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }
}
