//! Compressed sparse column storage and a small dense matrix.

use crate::scalar::Scalar;

/// Column-compressed sparse matrix. Row indices within a column are sorted
/// and unique.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix<F> {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<F>,
}

impl<F: Scalar> CscMatrix<F> {
    /// Builds from per-column `(row, value)` lists. Duplicate rows within a
    /// column are summed and explicit zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, F)>>) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_by_key(|(r, _)| *r);
            let mut i = 0;
            while i < col.len() {
                let r = col[i].0;
                assert!(r < rows, "row index {r} out of bounds ({rows})");
                let mut v = col[i].1;
                i += 1;
                while i < col.len() && col[i].0 == r {
                    v += col[i].1;
                    i += 1;
                }
                if !v.is_zero() {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        CscMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn from_dense(dense: &DenseMatrix<F>) -> Self {
        let columns = (0..dense.cols())
            .map(|c| (0..dense.rows()).map(|r| (r, dense.get(r, c))).collect())
            .collect();
        Self::from_columns(dense.rows(), columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, F)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn column_nnz(&self, c: usize) -> usize {
        self.col_ptr[c + 1] - self.col_ptr[c]
    }

    /// `y = A x`
    pub fn mul_vec_into(&self, x: &[F], y: &mut [F]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        y.iter_mut().for_each(|v| *v = F::zero());
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.row_idx[k]] += self.values[k] * *xc;
            }
        }
    }

    /// `x = Aᵀ y`
    pub fn mul_t_vec_into(&self, y: &[F], x: &mut [F]) {
        assert_eq!(y.len(), self.rows);
        assert_eq!(x.len(), self.cols);
        for (c, xc) in x.iter_mut().enumerate() {
            let mut acc = F::zero();
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                acc += self.values[k] * y[self.row_idx[k]];
            }
            *xc = acc;
        }
    }

    pub fn max_abs_column_sum(&self) -> F {
        (0..self.cols)
            .map(|c| self.column(c).map(|(_, v)| v.abs()).sum::<F>())
            .fold(F::zero(), F::max_of)
    }

    pub fn max_abs_row_sum(&self) -> F {
        let mut sums = vec![F::zero(); self.rows];
        for (r, v) in self.row_idx.iter().zip(&self.values) {
            sums[*r] += v.abs();
        }
        sums.into_iter().fold(F::zero(), F::max_of)
    }

    pub fn to_dense(&self) -> DenseMatrix<F> {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for c in 0..self.cols {
            for (r, v) in self.column(c) {
                d.set(r, c, v);
            }
        }
        d
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> DenseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec_into(&self, x: &[F], y: &mut [F]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (r, yr) in y.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            *yr = row.iter().zip(x).map(|(a, b)| *a * *b).sum();
        }
    }

    pub fn mul_t_vec_into(&self, y: &[F], x: &mut [F]) {
        assert_eq!(y.len(), self.rows);
        assert_eq!(x.len(), self.cols);
        x.iter_mut().for_each(|v| *v = F::zero());
        for (r, yr) in y.iter().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            for (xc, a) in x.iter_mut().zip(row) {
                *xc += *a * *yr;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csc_matches_dense_products() {
        let d = DenseMatrix::from_rows(&[vec![1.0, 0.0, -2.0], vec![0.0, 3.0, 4.0]]);
        let s = CscMatrix::from_dense(&d);
        assert_eq!(s.nnz(), 4);
        let x = [1.0, 2.0, 3.0];
        let (mut y1, mut y2) = (vec![0.0; 2], vec![0.0; 2]);
        d.mul_vec_into(&x, &mut y1);
        s.mul_vec_into(&x, &mut y2);
        assert_eq!(y1, y2);
        let y = [5.0, -1.0];
        let (mut x1, mut x2) = (vec![0.0; 3], vec![0.0; 3]);
        d.mul_t_vec_into(&y, &mut x1);
        s.mul_t_vec_into(&y, &mut x2);
        assert_eq!(x1, x2);
        assert_eq!(s.max_abs_column_sum(), 6.0);
        assert_eq!(s.max_abs_row_sum(), 7.0);
        assert_eq!(s.to_dense(), d);
    }

    #[test]
    fn duplicate_entries_are_summed() {
        let s = CscMatrix::from_columns(2, vec![vec![(1, 1.0), (0, 2.0), (1, -1.0)]]);
        assert_eq!(s.nnz(), 1);
        assert_eq!(s.column(0).collect::<Vec<_>>(), vec![(0, 2.0)]);
    }
}
