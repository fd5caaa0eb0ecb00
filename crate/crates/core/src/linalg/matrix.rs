use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Result, ZenoError};

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

const MAX_DIM: usize = 4;

/// Dense complex square matrix of dimension 2, 3 or 4.
///
/// Storage is a fixed 4x4 array so the type is `Copy`; entries outside the
/// active `dim x dim` block are kept at zero.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [[C64; MAX_DIM]; MAX_DIM],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(
            (2..=MAX_DIM).contains(&dim),
            "ComplexMatrix dimension must be 2, 3 or 4, got {dim}"
        );
        Self {
            dim,
            data: [[ZERO; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn try_zeros(dim: usize) -> Result<Self> {
        if (2..=MAX_DIM).contains(&dim) {
            Ok(Self::zeros(dim))
        } else {
            Err(ZenoError::UnsupportedDimension(dim))
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i][j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::try_zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(ZenoError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            m.data[i][..dim].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        let slices: Vec<&[C64]> = complex.iter().map(Vec::as_slice).collect();
        Self::from_rows(&slices)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i][i] = v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Iterator over the active entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.dim).flat_map(move |i| (0..self.dim).map(move |j| self.data[i][j]))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.data[i][j] *= s;
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j][i])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.data[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance `‖self - other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        (*self - *other).frobenius_norm()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.data[i][j]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &z) in v.iter().enumerate().take(self.dim) {
            self.data[i][j] = z;
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.data[i][j] * v[j]).sum())
            .collect()
    }

    /// Principal submatrix on the given row/column indices.
    pub fn submatrix(&self, idx: &[usize]) -> Result<Self> {
        let mut m = Self::try_zeros(idx.len())?;
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.data[a][b] = self.data[i][j];
            }
        }
        Ok(m)
    }

    /// Kronecker product of two 2x2 matrices, `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        assert!(self.dim == 2 && other.dim == 2, "kron is defined for 2x2 factors");
        Self::from_fn(4, |i, j| self.data[i / 2][j / 2] * other.data[i % 2][j % 2])
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(ZenoError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i][j] += a * other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    /// Determinant by partially pivoted elimination.
    pub fn det(&self) -> C64 {
        let n = self.dim;
        let mut a = self.data;
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap_or(col);
            if a[pivot][col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col];
            det *= p;
            let pivot_row = a[col];
            for row in a[col + 1..n].iter_mut() {
                let f = row[col] / p;
                for (x, v) in row[col..n].iter_mut().zip(&pivot_row[col..n]) {
                    *x -= f * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i][j]
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(&rhs).expect("matrix product dimension mismatch")
    }
}

impl Mul<C64> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        Self::from_fn(self.dim, |i, j| self.data[i][j] + rhs.data[i][j])
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        Self::from_fn(self.dim, |i, j| self.data[i][j] - rhs.data[i][j])
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.data[i][j];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices `[σ1, σ2, σ3]` in the standard basis.
pub fn pauli() -> [ComplexMatrix; 3] {
    let s1 = ComplexMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO });
    let s2 = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    });
    let s3 = ComplexMatrix::diag(&[ONE, -ONE]);
    [s1, s2, s3]
}

/// Matrix product with a dimension check.
pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.checked_mul(b)
}

/// `aⁿ` by binary exponentiation; `a⁰ = I`.
pub fn mat_power(a: &ComplexMatrix, mut n: u64) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(a.dim());
    let mut base = *a;
    while n > 0 {
        if n & 1 == 1 {
            result = result * base;
        }
        n >>= 1;
        if n > 0 {
            base = base * base;
        }
    }
    result
}

/// `aⁿ = e^L·M` with `M` renormalised to unit Frobenius norm after every
/// product, so powers far beyond the `f64` range stay representable.
/// Returns `(M, L)`; a nilpotent power comes back as the zero matrix, `L`
/// being whatever had accumulated.
pub fn mat_power_scaled(a: &ComplexMatrix, mut n: u64) -> (ComplexMatrix, f64) {
    fn renorm(m: &mut ComplexMatrix, log: &mut f64) {
        let s = m.frobenius_norm();
        if s > 0.0 && s.is_finite() {
            *m = m.scale(C64::new(1.0 / s, 0.0));
            *log += s.ln();
        }
    }
    let (mut result, mut result_log) = (ComplexMatrix::identity(a.dim()), 0.0);
    let (mut base, mut base_log) = (*a, 0.0);
    renorm(&mut base, &mut base_log);
    while n > 0 {
        if n & 1 == 1 {
            result = result * base;
            result_log += base_log;
            renorm(&mut result, &mut result_log);
        }
        n >>= 1;
        if n > 0 {
            base = base * base;
            base_log *= 2.0;
            renorm(&mut base, &mut base_log);
        }
    }
    (result, result_log)
}

/// LU factorisation with partial pivoting, kept for repeated solves.
struct Lu {
    n: usize,
    lu: [[C64; MAX_DIM]; MAX_DIM],
    perm: [usize; MAX_DIM],
}

impl Lu {
    fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let scale = a.max_abs();
        let threshold = 1e-14 * scale.powi(n as i32);
        let det = a.det();
        if scale == 0.0 || det.norm() <= threshold {
            return Err(ZenoError::SingularMatrix {
                det: det.norm(),
                threshold,
            });
        }
        let mut lu = a.data;
        let mut perm = [0, 1, 2, 3];
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| lu[x][col].norm().total_cmp(&lu[y][col].norm()))
                .unwrap_or(col);
            lu.swap(pivot, col);
            perm.swap(pivot, col);
            let p = lu[col][col];
            let pivot_row = lu[col];
            for row in lu[col + 1..n].iter_mut() {
                let f = row[col] / p;
                row[col] = f;
                for (x, v) in row[col + 1..n].iter_mut().zip(&pivot_row[col + 1..n]) {
                    *x -= f * v;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = (0..n).map(|i| b[self.perm[i]]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = x[j];
                x[i] -= self.lu[i][j] * v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = x[j];
                x[i] -= self.lu[i][j] * v;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

/// Solves `a·x = b`; fails with `SingularMatrix` when `|det a|` falls below
/// `1e-14·max|a_ij|ⁿ`.
pub fn solve_linear(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if b.len() != a.dim() {
        return Err(ZenoError::DimensionMismatch {
            left: a.dim(),
            right: b.len(),
        });
    }
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(b);
    // one step of iterative refinement
    let ax = a.apply(&x);
    let resid: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let dx = lu.solve(&resid);
    for (xi, d) in x.iter_mut().zip(dx) {
        *xi += d;
    }
    Ok(x)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::factor(a)?;
    let n = a.dim();
    let mut inv = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut e = vec![ZERO; n];
        e[j] = ONE;
        inv.set_column(j, &lu.solve(&e));
    }
    Ok(inv)
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let a = ComplexMatrix::from_fn(3, |i, j| c(i as f64 + 1.0, j as f64 - 0.5));
        let id = ComplexMatrix::identity(3);
        assert_eq!(mat_mul(&id, &a).unwrap(), a);
    }

    #[test]
    fn pauli_algebra() {
        let [t1, t2, t3] = pauli();
        let id = ComplexMatrix::identity(2);
        assert!((t1 * t1).distance(&id) < 1e-15);
        assert!((t2 * t3).distance(&t1.scale(I)) < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            mat_mul(&a, &b),
            Err(ZenoError::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(ComplexMatrix::try_zeros(5).is_err());
    }

    #[test]
    fn power_of_diagonal() {
        let d = ComplexMatrix::diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(mat_power(&d, 0), ComplexMatrix::identity(2));
        let cube = mat_power(&d, 3);
        assert!(cube.distance(&ComplexMatrix::diag(&[c(8.0, 0.0), c(27.0, 0.0)])) < 1e-13);
    }

    #[test]
    fn solve_diagonal_and_identity() {
        let id = ComplexMatrix::identity(2);
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5)];
        assert_eq!(solve_linear(&id, &b).unwrap(), b);
        let d = ComplexMatrix::diag(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let x = solve_linear(&d, &[c(2.0, 0.0), c(8.0, 0.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_linear(&a, &[ONE, ONE]),
            Err(ZenoError::SingularMatrix { .. })
        ));
        assert!(inverse(&a).is_err());
    }

    #[test]
    fn determinant_of_triangular() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 5.0], &[0.0, 3.0, -1.0], &[0.0, 0.0, -4.0]]).unwrap();
        assert!((a.det() - c(-24.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn kron_matches_block_layout() {
        let [s1, _, s3] = pauli();
        let k = s3.kron(&s1);
        assert_eq!(k[(0, 1)], ONE);
        assert_eq!(k[(2, 3)], -ONE);
        assert_eq!(k[(0, 2)], ZERO);
    }
}
