use num_complex::Complex64 as C64;

use super::matrix::{inverse, ComplexMatrix, ONE, ZERO};
use super::roots;

/// Eigenvector condition number above which a decomposition is treated as
/// defective.
pub const DEFECTIVE_CONDITION: f64 = 1e8;

/// Roots closer than this (relative to the largest entry) are one cluster.
const CLUSTER_TOL: f64 = 1e-6;
/// Largest admissible Schur remainder when extracting a null space.
const NULLSPACE_TOL: f64 = 1e-8;
/// Relative Frobenius bound on `A·V − V·Λ` for a usable decomposition.
const RESIDUAL_TOL: f64 = 1e-10;

/// Right eigenpairs of a small dense matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    /// Right eigenvectors as unit-norm columns. Columns that could not be
    /// resolved (defective clusters) are zero.
    pub vectors: ComplexMatrix,
    pub defective: bool,
    /// `‖V‖₁·‖V⁻¹‖₁`, infinite when `V` is singular.
    pub condition: f64,
}

impl EigenDecomposition {
    /// `‖A·V − V·Λ‖_F / (‖A‖_F·‖V‖_F)`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let lambda = ComplexMatrix::diag(&self.values);
        let r = (*a * self.vectors - self.vectors * lambda).frobenius_norm();
        let denom = a.frobenius_norm() * self.vectors.frobenius_norm();
        if denom == 0.0 {
            r
        } else {
            r / denom
        }
    }
}

fn is_diagonal(a: &ComplexMatrix) -> bool {
    let n = a.dim();
    (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] == ZERO))
}

/// Eigenvalues from the closed-form characteristic polynomial, eigenvectors
/// from null spaces of `A − λI`.
pub fn eigen(a: &ComplexMatrix) -> EigenDecomposition {
    let n = a.dim();
    let scale = a.max_abs();
    if scale == 0.0 || is_diagonal(a) {
        return EigenDecomposition {
            values: (0..n).map(|i| a[(i, i)]).collect(),
            vectors: ComplexMatrix::identity(n),
            defective: false,
            condition: 1.0,
        };
    }

    let b = a.scale(C64::new(1.0 / scale, 0.0));
    let coeffs = roots::characteristic_polynomial(&b);
    let clusters = cluster(&coeffs, &roots::roots(&coeffs));

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n);
    let mut resolved = true;
    let mut col = 0;
    for (lambda, mult) in clusters {
        match null_space(&b, lambda, mult) {
            Some(basis) => {
                for v in basis {
                    vectors.set_column(col, &v);
                    values.push(lambda);
                    col += 1;
                }
            }
            None => {
                resolved = false;
                for _ in 0..mult {
                    values.push(lambda);
                    col += 1;
                }
            }
        }
    }

    let mut condition = f64::INFINITY;
    let mut defective = !resolved;
    if resolved {
        match inverse(&vectors) {
            Ok(vinv) => {
                condition = vectors.norm1() * vinv.norm1();
                // diagonal of V⁻¹BV sharpens values of clustered roots
                let d = vinv * b * vectors;
                for (i, v) in values.iter_mut().enumerate() {
                    *v = d[(i, i)];
                }
            }
            Err(_) => defective = true,
        }
    }

    let mut out = EigenDecomposition {
        values: values.iter().map(|v| v * scale).collect(),
        vectors,
        defective,
        condition,
    };
    if !out.defective && (condition > DEFECTIVE_CONDITION || out.residual(a) > RESIDUAL_TOL) {
        out.defective = true;
    }
    out
}

/// Groups nearby roots and refines each group centre as a root of the
/// `(m−1)`-th derivative, where it is simple.
fn cluster(coeffs: &[C64], raw: &[C64]) -> Vec<(C64, usize)> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for &r in raw {
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|&x| (x - r).norm() <= CLUSTER_TOL))
        {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let m = g.len();
            let mean = g.iter().sum::<C64>() / m as f64;
            let centre = if m > 1 {
                roots::polish(&roots::derivative(coeffs, m - 1), mean, 4)
            } else {
                mean
            };
            (centre, m)
        })
        .collect()
}

/// `mult` unit vectors spanning the null space of `B − λI`, or `None` when
/// that null space is smaller than `mult`.
fn null_space(b: &ComplexMatrix, lambda: C64, mult: usize) -> Option<Vec<Vec<C64>>> {
    let n = b.dim();
    let rank = n - mult;
    let mut m = *b - ComplexMatrix::identity(n).scale(lambda);
    let mut cols: Vec<usize> = (0..n).collect();

    for step in 0..rank {
        let (pr, pc) = (step..n)
            .flat_map(|i| (step..n).map(move |j| (i, j)))
            .max_by(|&(i1, j1), &(i2, j2)| m[(i1, j1)].norm().total_cmp(&m[(i2, j2)].norm()))
            .unwrap_or((step, step));
        if m[(pr, pc)].norm() <= NULLSPACE_TOL {
            return None;
        }
        for j in 0..n {
            let t = m[(step, j)];
            m[(step, j)] = m[(pr, j)];
            m[(pr, j)] = t;
        }
        for i in 0..n {
            let t = m[(i, step)];
            m[(i, step)] = m[(i, pc)];
            m[(i, pc)] = t;
        }
        cols.swap(step, pc);
        let p = m[(step, step)];
        for i in step + 1..n {
            let f = m[(i, step)] / p;
            for j in step..n {
                let v = m[(step, j)];
                m[(i, j)] -= f * v;
            }
        }
    }

    let remainder = (rank..n)
        .flat_map(|i| (rank..n).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].norm())
        .fold(0.0, f64::max);
    if remainder > NULLSPACE_TOL {
        return None;
    }

    let mut basis = Vec::with_capacity(mult);
    for free in rank..n {
        let mut y = vec![ZERO; n];
        y[free] = ONE;
        for i in (0..rank).rev() {
            let s: C64 = (i + 1..n).map(|j| m[(i, j)] * y[j]).sum();
            y[i] = -s / m[(i, i)];
        }
        let mut x = vec![ZERO; n];
        for (pos, &orig) in cols.iter().enumerate() {
            x[orig] = y[pos];
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        basis.push(x.into_iter().map(|z| z / norm).collect());
    }
    Some(basis)
}
