//! Small dense matrices, generic over the scalar type.
//!
//! Everything here is desk scale (n ≤ a few dozen), so the implementation
//! favors exactness and clarity over asymptotics: Gaussian elimination with
//! partial pivoting serves determinant, inverse, solve, rank and kernel for
//! any [`Scalar`], and a Jacobi sweep provides eigenvalues of symmetric
//! floating point matrices.
//!
//! Convention: a matrix acts on coordinate columns from the left, so the
//! matrix of a composition `R ∘ S` is the product `[R][S]`.  Bilinear forms
//! are handled through the matrix of their flat map `v ↦ B(v,·)`; the Gram
//! matrix `[B(e_i, e_j)]` is its transpose.

use num_traits::{Float, One, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::num::Scalar;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Entries as nested vectors, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entry-wise map to another scalar type.
    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }

    /// Extracts the `(bi, bj)` block of a matrix split into `n×n` blocks.
    pub fn block_of(&self, n: usize, bi: usize, bj: usize) -> Self {
        Self::from_fn(n, n, |i, j| self[(bi * n + i, bj * n + j)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T: Clone + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }
}

impl<T: Clone + Zero + One> Mat<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T: Scalar> Mat<T> {
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() * s.clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc += self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym_part(&self) -> Self {
        let half = T::from_rat(&crate::num::rat(1, 2));
        self.add(&self.transpose()).scale(&half)
    }

    /// Anti-symmetric part `(A − Aᵀ)/2`.
    pub fn antisym_part(&self) -> Self {
        let half = T::from_rat(&crate::num::rat(1, 2));
        self.sub(&self.transpose()).scale(&half)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && self.transpose() == self.neg()
    }

    /// Largest absolute entry (zero for empty matrices).
    pub fn max_abs(&self) -> T {
        let mut best = T::zero();
        for e in &self.data {
            let a = e.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.nrows();
        assert!(
            [a, b, c, d]
                .iter()
                .all(|m| m.nrows() == n && m.ncols() == n),
            "blocks must be square of equal size"
        );
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - n)].clone(),
            (false, true) => c[(i - n, j)].clone(),
            (false, false) => d[(i - n, j - n)].clone(),
        })
    }

    /// Gaussian elimination with partial pivoting; returns the determinant.
    /// Exact for exact scalar types.
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = pivot_row(&a, col, col) else {
                return T::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= pivot.clone();
            for r in col + 1..n {
                let factor = a[(r, col)].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let s = a[(col, c)].clone() * factor.clone();
                    a[(r, c)] -= s;
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan; `None` when a pivot vanishes.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = pivot_row(&a, col, col)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pivot = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / pivot.clone();
                inv[(col, c)] = inv[(col, c)].clone() / pivot.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let s = a[(col, c)].clone() * factor.clone();
                    a[(r, c)] -= s;
                    let s = inv[(col, c)].clone() * factor.clone();
                    inv[(r, c)] -= s;
                }
            }
        }
        Some(inv)
    }

    /// Solves `A x = b`; `None` when singular.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        Some(self.inverse()?.mul_vec(b))
    }

    /// Row rank by elimination.  `tol` is the pivot threshold: pass zero for
    /// exact scalars; for floats pass something like `max_abs * 1e-12`.
    pub fn rank(&self, tol: &T) -> usize {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            // largest |entry| in this column at or below `row`
            let mut best = row;
            for r in row + 1..m {
                if a[(r, col)].abs() > a[(best, col)].abs() {
                    best = r;
                }
            }
            if a[(best, col)].abs() <= *tol {
                continue;
            }
            a.swap_rows(best, row);
            let pivot = a[(row, col)].clone();
            for r in row + 1..m {
                let factor = a[(r, col)].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let s = a[(row, c)].clone() * factor.clone();
                    a[(r, c)] -= s;
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Basis of the right kernel `{x : A x = 0}`, columns of the result.
    /// Exact for exact scalars (`tol = 0`).
    pub fn kernel_basis(&self, tol: &T) -> Self {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        // reduced row echelon with pivot column bookkeeping
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            let mut best = row;
            for r in row + 1..m {
                if a[(r, col)].abs() > a[(best, col)].abs() {
                    best = r;
                }
            }
            if a[(best, col)].abs() <= *tol {
                continue;
            }
            a.swap_rows(best, row);
            let pivot = a[(row, col)].clone();
            for c in 0..n {
                a[(row, c)] = a[(row, c)].clone() / pivot.clone();
            }
            for r in 0..m {
                if r == row {
                    continue;
                }
                let factor = a[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let s = a[(row, c)].clone() * factor.clone();
                    a[(r, c)] -= s;
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Self::zeros(n, free_cols.len());
        for (k, &fc) in free_cols.iter().enumerate() {
            basis[(fc, k)] = T::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                basis[(pc, k)] = -a[(r, fc)].clone();
            }
        }
        basis
    }
}

fn pivot_row<T: Scalar>(a: &Mat<T>, col: usize, from: usize) -> Option<usize> {
    let mut best_row = None;
    let mut best_val = T::zero();
    for r in from..a.nrows() {
        let v = a[(r, col)].abs();
        if v > best_val {
            best_val = v;
            best_row = Some(r);
        }
    }
    best_row
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Float + Scalar>(m: &Mat<T>) -> Vec<T> {
    assert!(m.is_square());
    let n = m.nrows();
    let mut a = m.clone();
    let eps = T::epsilon() * T::from_f64(64.0).unwrap();
    let scale = a.max_abs().max(T::one());
    for _sweep in 0..64 {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() <= eps * scale * T::from_f64(1e-3).unwrap() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::from_f64(2.0).unwrap() * a[(p, q)]);
                let t = {
                    let s = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &Mat<f64>) -> f64 {
    symmetric_eigenvalues(m)[0]
}

/// Complex matrix stored as a real/imaginary pair; only the handful of
/// operations the holomorphic Poisson bookkeeping needs.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub re: Mat<f64>,
    pub im: Mat<f64>,
}

impl CMat {
    pub fn from_real(re: Mat<f64>) -> Self {
        let z = Mat::zeros(re.nrows(), re.ncols());
        CMat { re, im: z }
    }

    pub fn from_imag(im: Mat<f64>) -> Self {
        let z = Mat::zeros(im.nrows(), im.ncols());
        CMat { re: z, im }
    }

    pub fn new(re: Mat<f64>, im: Mat<f64>) -> Self {
        assert_eq!((re.nrows(), re.ncols()), (im.nrows(), im.ncols()));
        CMat { re, im }
    }

    pub fn mul(&self, other: &Self) -> Self {
        CMat {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CMat {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CMat {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        CMat {
            re: self.re.scale(&s),
            im: self.im.scale(&s),
        }
    }

    pub fn transpose(&self) -> Self {
        CMat {
            re: self.re.transpose(),
            im: self.im.transpose(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.im.max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::{MatF, MatQ, Rat};
    use num_traits::Zero;

    #[test]
    fn rational_inverse_is_exact() {
        let a = MatQ::from_rows(vec![
            vec![rat(4, 1), rat(1, 1)],
            vec![rat(-1, 1), rat(4, 1)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), MatQ::identity(2));
        assert_eq!(a.det(), rat(17, 1));
    }

    #[test]
    fn kernel_of_projection() {
        // rows span a rank-2 map R^3 -> R^2 with kernel (1,1,1)
        let a = MatQ::from_rows(vec![
            vec![rat(1, 1), rat(0, 1), rat(-1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(-1, 1)],
        ]);
        let k = a.kernel_basis(&Rat::zero());
        assert_eq!(k.ncols(), 1);
        let v: Vec<Rat> = (0..3).map(|i| k[(i, 0)].clone()).collect();
        let img = a.mul_vec(&v);
        assert!(img.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn antisymmetric_rank_is_even() {
        let c = MatQ::from_rows(vec![
            vec![rat(0, 1), rat(1, 1), rat(2, 1)],
            vec![rat(-1, 1), rat(0, 1), rat(3, 1)],
            vec![rat(-2, 1), rat(-3, 1), rat(0, 1)],
        ]);
        assert_eq!(c.rank(&Rat::zero()) % 2, 0);
    }

    #[test]
    fn jacobi_eigenvalues_of_diagonal() {
        let m = MatF::diagonal(&[3.0, -1.0, 7.0]);
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] + 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        assert!((e[2] - 7.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_eigenvalues_of_rotated_matrix() {
        // eigenvalues {1, 10} in a rotated basis
        let c = (0.3f64).cos();
        let s = (0.3f64).sin();
        let q = MatF::from_rows(vec![vec![c, -s], vec![s, c]]);
        let d = MatF::diagonal(&[1.0, 10.0]);
        let m = q.mul(&d).mul(&q.transpose());
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-10);
        assert!((e[1] - 10.0).abs() < 1e-10);
    }
}
