use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{build_chain, LatticeDemands, LatticePoint};
use crate::scalar::Scalar;
use crate::sparse::CscMatrix;

/// The matrix `P` with one column per registered level-`T` point and one row
/// per `(level, lattice point)` reached by some column. Column `p` holds
/// `k·2^{-t}·b_t(v)` for the chain started from a unit demand at `p`, so
/// `‖Pb‖₁ = Σ_t k·2^{-t}‖b_t‖₁` by linearity.
#[derive(Debug, Clone)]
pub struct PreconditionerP<F> {
    dim: usize,
    top: u32,
    columns: BTreeMap<LatticePoint, usize>,
    points: Vec<LatticePoint>,
    row_keys: Vec<(u32, LatticePoint)>,
    matrix: CscMatrix<F>,
}

impl<F: Scalar> PreconditionerP<F> {
    /// Registers `points` (duplicates are merged; the column order is the
    /// first-occurrence order).
    pub fn new(dim: usize, top: u32, points: &[LatticePoint]) -> Result<Self> {
        let mut columns = BTreeMap::new();
        let mut unique = Vec::new();
        for p in points {
            if !columns.contains_key(p) {
                columns.insert(p.clone(), unique.len());
                unique.push(p.clone());
            }
        }
        let mut rows: BTreeMap<(u32, LatticePoint), usize> = BTreeMap::new();
        let mut raw_columns = Vec::with_capacity(unique.len());
        for p in &unique {
            let unit = LatticeDemands::from_entries(top, dim, [(p.clone(), F::one())])?;
            let chain = build_chain(&unit)?;
            let mut col = Vec::new();
            for t in 0..=top {
                let w = chain.weight(t);
                for (q, &v) in chain.level(t).iter() {
                    let next = rows.len();
                    let r = *rows.entry((t, q.clone())).or_insert(next);
                    col.push((r, w * v));
                }
            }
            raw_columns.push(col);
        }
        let mut row_keys = vec![(0, Vec::new()); rows.len()];
        for (key, r) in rows {
            row_keys[r] = key;
        }
        let matrix = CscMatrix::from_columns(row_keys.len(), raw_columns);
        Ok(PreconditionerP {
            dim,
            top,
            columns,
            points: unique,
            row_keys,
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn column_of(&self, point: &[i64]) -> Option<usize> {
        self.columns.get(point).copied()
    }

    /// `(t, v)` label of each row.
    pub fn row_keys(&self) -> &[(u32, LatticePoint)] {
        &self.row_keys
    }

    pub fn matrix(&self) -> &CscMatrix<F> {
        &self.matrix
    }

    pub fn max_column_nnz(&self) -> usize {
        (0..self.cols())
            .map(|c| self.matrix.column_nnz(c))
            .max()
            .unwrap_or(0)
    }

    /// `P b` for `b` indexed like [`points`](Self::points).
    pub fn apply(&self, b: &[F]) -> Result<Vec<F>> {
        crate::error::check_dim("preconditioner input", self.cols(), b.len())?;
        let mut y = vec![F::zero(); self.rows()];
        self.matrix.mul_vec_into(b, &mut y);
        Ok(y)
    }

    pub fn apply_adjoint(&self, y: &[F]) -> Result<Vec<F>> {
        crate::error::check_dim("preconditioner adjoint input", self.rows(), y.len())?;
        let mut x = vec![F::zero(); self.cols()];
        self.matrix.mul_t_vec_into(y, &mut x);
        Ok(x)
    }

    /// Gathers lattice demands into column order; errors on a support point
    /// that was never registered.
    pub fn gather(&self, b: &LatticeDemands<F>) -> Result<Vec<F>> {
        if b.level() != self.top || b.dim() != self.dim {
            return Err(Error::Config(format!(
                "demand at level {} dim {} does not match preconditioner level {} dim {}",
                b.level(),
                b.dim(),
                self.top,
                self.dim
            )));
        }
        let mut x = vec![F::zero(); self.cols()];
        for (p, &v) in b.iter() {
            let c = self
                .column_of(p)
                .ok_or_else(|| Error::UnregisteredPoint(p.clone()))?;
            x[c] = v;
        }
        Ok(x)
    }

    pub fn apply_demands(&self, b: &LatticeDemands<F>) -> Result<Vec<F>> {
        self.apply(&self.gather(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::l1_norm;

    #[test]
    fn dipole_norm_matches_chain() {
        let top = 4;
        let p = PreconditionerP::<f64>::new(1, top, &[vec![0], vec![1]]).unwrap();
        let b = LatticeDemands::from_entries(top, 1, [(vec![0], 1.0), (vec![1], -1.0)]).unwrap();
        let pb = p.apply_demands(&b).unwrap();
        assert_eq!(l1_norm(&pb), 5.0 * 2f64.powi(-3));
    }

    #[test]
    fn zero_in_zero_out() {
        let p = PreconditionerP::<f64>::new(2, 3, &[vec![1, 2], vec![5, 7]]).unwrap();
        assert!(p.apply(&[0.0, 0.0]).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn unregistered_point_rejected() {
        let p = PreconditionerP::<f64>::new(1, 2, &[vec![0], vec![3]]).unwrap();
        let b = LatticeDemands::from_entries(2, 1, [(vec![1], 1.0), (vec![0], -1.0)]).unwrap();
        assert!(matches!(p.apply_demands(&b), Err(Error::UnregisteredPoint(v)) if v == vec![1]));
    }

    #[test]
    fn duplicates_merge() {
        let p = PreconditionerP::<f64>::new(1, 2, &[vec![1], vec![1], vec![2]]).unwrap();
        assert_eq!(p.cols(), 2);
        assert_eq!(p.column_of(&[2]), Some(1));
    }

    #[test]
    fn column_sparsity_bound() {
        let (k, top) = (3usize, 5u32);
        let pts: Vec<LatticePoint> = vec![vec![1, 3, 5], vec![31, 17, 9], vec![0, 32, 11]];
        let p = PreconditionerP::<f64>::new(k, top, &pts).unwrap();
        assert!(p.max_column_nnz() <= (top as usize + 1) << k);
    }
}
