//! Dense exact linear algebra over a [`Field`]: rank, nullspace, solving.
//! Plain Gaussian elimination; matrices here stay small (tens of rows).

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Clone, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>, // row-major
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }

    pub fn push_row(&mut self, row: Vec<FieldElement>) {
        assert_eq!(row.len(), self.cols);
        self.rows += 1;
        self.data.extend(row);
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut row = 0usize;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|r| !m.at(*r, col).is_zero());
            let Some(pr) = pivot_row else { continue };
            m.swap_rows(row, pr);
            let inv = m.at(row, col).inv().expect("pivot nonzero");
            for c in col..m.cols {
                *m.at_mut(row, c) = m.at(row, c).mul(&inv);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c).sub(&factor.mul(m.at(row, c)));
                        *m.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref();
        let mut basis = vec![];
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (i, pc) in pivots.iter().enumerate() {
                v[*pc] = r.at(i, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = rhs`, if consistent.
    pub fn solve(&self, rhs: &[FieldElement]) -> Result<Vec<FieldElement>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Matrix::zero(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = rhs[r].clone();
        }
        let (reduced, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::InconsistentSystem);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, pc) in pivots.iter().enumerate() {
            x[*pc] = reduced.at(i, self.cols).clone();
        }
        Ok(x)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    acc = acc.add(&self.at(r, c).mul(&v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn det(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = self.field.one();
        for col in 0..m.cols {
            let pivot_row = (col..m.rows).find(|r| !m.at(*r, col).is_zero());
            let Some(pr) = pivot_row else { return self.field.zero() };
            if pr != col {
                m.swap_rows(col, pr);
                det = det.neg();
            }
            let pivot = m.at(col, col).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("pivot nonzero");
            for r in col + 1..m.rows {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).mul(&inv);
                for c in col..m.cols {
                    let v = m.at(r, c).sub(&factor.mul(m.at(col, c)));
                    *m.at_mut(r, c) = v;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, n + r) = self.field.one();
        }
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zero(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                *out.at_mut(r, c) = reduced.at(r, n + c).clone();
            }
        }
        Some(out)
    }

    pub fn mat_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(other.at(k, c)));
                }
                *out.at_mut(r, c) = acc;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(field: &Field, vals: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            vals.iter().map(|r| r.iter().map(|v| field.from_i64(*v)).collect()).collect(),
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let q = Field::rationals();
        let m = f(&q, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_det() {
        let f7 = Field::prime(7).unwrap();
        let m = f(&f7, &[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), f7.from_i64(-2));
        let x = m.solve(&[f7.from_i64(5), f7.from_i64(6)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![f7.from_i64(5), f7.from_i64(6)]);
        let inv = m.inverse().unwrap();
        let id = m.mat_mul(&inv);
        assert_eq!(id.at(0, 0), &f7.one());
        assert_eq!(id.at(0, 1), &f7.zero());
    }
}
