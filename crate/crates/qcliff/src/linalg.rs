//! Dense exact matrices over Q(i, sqrt 2).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::FieldElement;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![FieldElement::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, FieldElement::one())
    }

    pub fn scalar(n: usize, c: FieldElement) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| FieldElement::from_int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    /// Columns given as vectors.
    pub fn from_cols(cols: Vec<Vec<FieldElement>>, rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch { left: rows, right: col.len() });
            }
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the matrix is `c` times the identity.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(FieldElement::zero());
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &c } else { &FieldElement::zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: o.rows });
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out.data[i * o.cols + j] += &prod;
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, o: &Matrix, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Result<Matrix> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch { left: self.rows * self.cols, right: o.rows * o.cols });
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&FieldElement::from_int(-1))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    pub fn conj_transpose(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn pow(&self, k: u32) -> Result<Matrix> {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn commutator(&self, o: &Matrix) -> Result<Matrix> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    /// Column vector product `M v`.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { left: self.cols, right: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = FieldElement::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Row vector product `v M`.
    pub fn apply_row(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.transpose().apply(v)
    }

    /// Fraction-free (Bareiss) forward elimination. Returns the echelon form
    /// and the pivot columns. Every row operation is invertible, so the row
    /// space is unchanged.
    pub fn echelon(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut prev = FieldElement::one();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..a.cols {
                    a.data.swap(p * a.cols + j, r * a.cols + j);
                }
            }
            let piv = a.get(r, c).clone();
            let prev_inv = prev.inv().expect("previous pivot is nonzero");
            for i in r + 1..a.rows {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    // plain scaling by piv/prev keeps the fraction-free invariant
                    let s = &piv * &prev_inv;
                    for j in c + 1..a.cols {
                        let v = a.get(i, j) * &s;
                        a.set(i, j, v);
                    }
                    continue;
                }
                for j in c + 1..a.cols {
                    let v = &(&(&piv * a.get(i, j)) - &(&f * a.get(r, j))) * &prev_inv;
                    a.set(i, j, v);
                }
                a.set(i, c, FieldElement::zero());
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Reduced row echelon form with its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (mut a, pivots) = self.echelon();
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = a.get(r, c).inv().expect("pivot is nonzero");
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..r {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = a.get(i, j) - &(&f * a.get(r, j));
                    a.set(i, j, v);
                }
            }
        }
        (a, pivots)
    }

    /// Basis of `{ v : M v = 0 }`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![FieldElement::zero(); self.cols];
            v[free] = FieldElement::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(FieldElement::one());
        }
        // Bareiss with explicit sign tracking: the last pivot is the determinant.
        let mut a = self.clone();
        let mut prev = FieldElement::one();
        let mut sign = FieldElement::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(FieldElement::zero());
            };
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            let piv = a.get(k, k).clone();
            let prev_inv = prev.inv()?;
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&(&piv * a.get(i, j)) - &(a.get(i, k) * a.get(k, j))) * &prev_inv;
                    a.set(i, j, v);
                }
                a.set(i, k, FieldElement::zero());
            }
            prev = piv;
        }
        Ok(&sign * a.get(n - 1, n - 1))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, FieldElement::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Coordinates with respect to a list of row vectors spanning a subspace.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    width: usize,
    reduced: Matrix,
    pivots: Vec<usize>,
    transform: Matrix,
    independent: bool,
}

impl SpanSolver {
    pub fn new(rows: &[Vec<FieldElement>], width: usize) -> Result<Self> {
        let k = rows.len();
        let mut aug = Matrix::zeros(k, width + k);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(Error::DimensionMismatch { left: width, right: r.len() });
            }
            for (j, x) in r.iter().enumerate() {
                aug.set(i, j, x.clone());
            }
            aug.set(i, width + i, FieldElement::one());
        }
        let (r, all_pivots) = aug.rref();
        let pivots: Vec<usize> = all_pivots.iter().copied().filter(|&c| c < width).collect();
        let rank = pivots.len();
        let mut reduced = Matrix::zeros(rank, width);
        let mut transform = Matrix::zeros(rank, k);
        for i in 0..rank {
            for j in 0..width {
                reduced.set(i, j, r.get(i, j).clone());
            }
            for j in 0..k {
                transform.set(i, j, r.get(i, width + j).clone());
            }
        }
        Ok(SpanSolver { width, reduced, pivots, transform, independent: rank == k })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn independent(&self) -> bool {
        self.independent
    }

    /// Coefficients `c` with `Σ c_i rows_i = x`, or `None` if `x` is outside the span.
    pub fn solve(&self, x: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if x.len() != self.width {
            return Err(Error::DimensionMismatch { left: self.width, right: x.len() });
        }
        let lead: Vec<FieldElement> = self.pivots.iter().map(|&c| x[c].clone()).collect();
        let recon = self.reduced.apply_row(&lead)?;
        if recon != x {
            return Ok(None);
        }
        Ok(Some(self.transform.apply_row(&lead)?))
    }

    pub fn contains(&self, x: &[FieldElement]) -> Result<bool> {
        Ok(self.solve(x)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3*-2 - 4*5) - (-1)(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(a.det().unwrap(), FieldElement::from_int(-54));
        let swapped = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(swapped.det().unwrap(), FieldElement::from_int(-1));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert!(a.mul(&a.inverse().unwrap()).unwrap().is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn span_solver() {
        let rows = vec![
            vec![FieldElement::from_int(1), FieldElement::from_int(1), FieldElement::zero()],
            vec![FieldElement::zero(), FieldElement::from_int(1), FieldElement::i()],
        ];
        let s = SpanSolver::new(&rows, 3).unwrap();
        let x: Vec<FieldElement> = vec![FieldElement::from_int(2), FieldElement::from_int(5), &FieldElement::i() * &FieldElement::from_int(3)];
        let c = s.solve(&x).unwrap().unwrap();
        assert_eq!(c, vec![FieldElement::from_int(2), FieldElement::from_int(3)]);
        assert!(s.solve(&[FieldElement::one(), FieldElement::zero(), FieldElement::zero()]).unwrap().is_none());
    }
}
