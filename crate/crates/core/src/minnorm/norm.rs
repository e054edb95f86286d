use std::sync::Arc;

use crate::scalar::{l1_norm, linf_norm, Real, Scalar};

/// A family of vertex sets with their boundary capacities; induces the
/// cut-congestion (semi-)norm `max_S |1_S·b| / c(∂S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutFamily<F> {
    dim: usize,
    sets: Vec<Vec<usize>>,
    boundary: Vec<F>,
    spans: bool,
}

impl<F: Scalar> CutFamily<F> {
    /// `boundary[i]` must be the (positive) boundary capacity of `sets[i]`.
    pub fn new(dim: usize, sets: Vec<Vec<usize>>, boundary: Vec<F>) -> Self {
        assert_eq!(sets.len(), boundary.len());
        let spans = family_spans(dim, &sets);
        CutFamily {
            dim,
            sets,
            boundary,
            spans,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn boundary(&self) -> &[F] {
        &self.boundary
    }

    /// False when the indicator vectors do not span the space, in which case
    /// the value is only a semi-norm.
    pub fn is_norm(&self) -> bool {
        self.spans
    }

    pub fn evaluate(&self, b: &[F]) -> F {
        self.sets
            .iter()
            .zip(&self.boundary)
            .map(|(s, c)| s.iter().map(|&v| b[v]).sum::<F>().abs() / *c)
            .fold(F::zero(), F::max_of)
    }
}

/// Rank test of the 0/1 indicator vectors via Gaussian elimination over f64.
fn family_spans(dim: usize, sets: &[Vec<usize>]) -> bool {
    let mut rows: Vec<Vec<f64>> = sets
        .iter()
        .map(|s| {
            let mut r = vec![0.0; dim];
            for &v in s {
                r[v] = 1.0;
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col].abs() > 1e-12) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][col].abs() > 1e-12 {
                let f = rows[i][col] / rows[rank][col];
                for c in col..dim {
                    rows[i][c] -= f * rows[rank][c];
                }
            }
        }
        rank += 1;
    }
    rank == dim
}

/// Which norm a space carries.
#[derive(Debug, Clone, PartialEq)]
pub enum NormTag<F> {
    L1,
    LInf,
    L2,
    /// `Σ |v_e| ℓ_e`
    Cost(Arc<[F]>),
    /// `max |v_e| / ℓ_e`
    Stretch(Arc<[F]>),
    CutFamily(Arc<CutFamily<F>>),
}

impl<F: Real> NormTag<F> {
    pub fn evaluate(&self, v: &[F]) -> F {
        match self {
            NormTag::L1 => l1_norm(v),
            NormTag::LInf => linf_norm(v),
            NormTag::L2 => v.iter().map(|x| *x * *x).sum::<F>().sqrt(),
            NormTag::Cost(len) => {
                let terms: Vec<F> = v.iter().zip(len.iter()).map(|(x, l)| x.abs() * *l).collect();
                crate::scalar::pairwise_sum(&terms)
            }
            NormTag::Stretch(len) => v
                .iter()
                .zip(len.iter())
                .map(|(x, l)| x.abs() / *l)
                .fold(F::zero(), F::max_of),
            NormTag::CutFamily(f) => f.evaluate(v),
        }
    }

    pub fn is_seminorm(&self) -> bool {
        matches!(self, NormTag::CutFamily(f) if !f.is_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_norms() {
        let v = [3.0, -4.0];
        assert_eq!(NormTag::L1.evaluate(&v), 7.0);
        assert_eq!(NormTag::LInf.evaluate(&v), 4.0);
        assert_eq!(NormTag::L2.evaluate(&v), 5.0);
        let len: Arc<[f64]> = Arc::from(vec![2.0, 0.5]);
        assert_eq!(NormTag::Cost(len.clone()).evaluate(&v), 8.0);
        assert_eq!(NormTag::Stretch(len).evaluate(&v), 8.0);
    }

    #[test]
    fn singleton_family_is_a_norm_partial_family_is_not() {
        let full = CutFamily::new(2, vec![vec![0], vec![1]], vec![1.0, 2.0]);
        assert!(full.is_norm());
        assert_eq!(full.evaluate(&[1.0, -4.0]), 2.0);
        let partial = CutFamily::new(2, vec![vec![0, 1]], vec![1.0]);
        assert!(!partial.is_norm());
        assert!(NormTag::CutFamily(Arc::new(partial.clone())).is_seminorm());
        assert_eq!(partial.evaluate(&[1.0, -1.0]), 0.0);
    }
}
