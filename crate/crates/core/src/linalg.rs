//! Small dense complex matrices for fiber-wise (pointwise in space or
//! frequency) linear algebra: matrix symbols, boundary coefficients,
//! coretractions and moment corrections.

use crate::scalar::{abs2, Complex, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Row-major constructor.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    /// Row-major constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[T]) -> Self {
        Self::from_rows(rows, cols, data.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Complex::new(T::zero(), T::zero()), |s, j| s + self.get(i, j) * v[j]))
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect() }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * c).collect() }
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |s, &z| s + abs2(z)).sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Induced 2-norm upper bound (Frobenius norm).
    pub fn norm_bound(&self) -> T {
        self.frobenius()
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        if scale == T::zero() {
            return None;
        }
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a.get(i, col).norm().partial_cmp(&a.get(j, col).norm()).unwrap())?;
            if a.get(piv, col).norm() <= T::epsilon() * scale * T::lit(16.0) {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(piv, j));
                    a.set(col, j, y);
                    a.set(piv, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(piv, j));
                    inv.set(col, j, y);
                    inv.set(piv, j, x);
                }
            }
            let p = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / p);
                inv.set(col, j, inv.get(col, j) / p);
            }
            for i in 0..n {
                if i != col {
                    let f = a.get(i, col);
                    if f != Complex::new(T::zero(), T::zero()) {
                        for j in 0..n {
                            a.set(i, j, a.get(i, j) - f * a.get(col, j));
                            inv.set(i, j, inv.get(i, j) - f * inv.get(col, j));
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    /// Solves `self · x = b` for square `self`.
    pub fn solve(&self, b: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
        Some(self.inverse()?.mul_vec(b))
    }

    /// Numerical rank by complete-pivoting elimination: pivots below
    /// `threshold` count as zero.
    pub fn rank(&self, threshold: T) -> usize {
        let mut a = self.clone();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut row_used = vec![false; m];
        let mut col_used = vec![false; n];
        for _ in 0..m.min(n) {
            let mut best = (0, 0, T::zero());
            for i in (0..m).filter(|&i| !row_used[i]) {
                for j in (0..n).filter(|&j| !col_used[j]) {
                    let v = a.get(i, j).norm();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            if best.2 <= threshold {
                break;
            }
            let (pi, pj, _) = best;
            row_used[pi] = true;
            col_used[pj] = true;
            rank += 1;
            let p = a.get(pi, pj);
            for i in (0..m).filter(|&i| !row_used[i]) {
                let f = a.get(i, pj) / p;
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - f * a.get(pi, j));
                }
            }
        }
        rank
    }

    /// Moore–Penrose right inverse `b*(b b*)^{-1}` of a full-row-rank matrix.
    ///
    /// Returns `None` when the numerical rank (threshold `rel·‖b‖`) is below
    /// the row count.
    pub fn right_pseudo_inverse(&self, rel: T) -> Option<Self> {
        let norm = self.frobenius();
        if norm == T::zero() || self.rank(rel * norm) < self.rows {
            return None;
        }
        let bstar = self.adjoint();
        let gram = self.mul(&bstar);
        Some(bstar.mul(&gram.inverse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[f64]) -> CMatrix<f64> {
        CMatrix::from_real(rows, cols, v)
    }

    #[test]
    fn inverse_of_2x2() {
        let a = m(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        assert!(id.sub(&CMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn singular_has_no_inverse() {
        assert!(m(2, 2, &[1.0, 2.0, 2.0, 4.0]).inverse().is_none());
        assert_eq!(m(2, 2, &[1.0, 2.0, 2.0, 4.0]).rank(1e-12), 1);
    }

    #[test]
    fn right_inverse_of_wide_matrix() {
        let b = m(1, 2, &[1.0, 0.5]);
        let bc = b.right_pseudo_inverse(1e-8).unwrap();
        let id = b.mul(&bc);
        assert!((id.get(0, 0).re - 1.0).abs() < 1e-15);
        let pi = bc.mul(&b);
        assert!(pi.mul(&pi).sub(&pi).max_abs() < 1e-15);
    }
}
