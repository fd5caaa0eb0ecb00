use num_complex::Complex64 as C64;

use super::eigen::eigen;
use super::matrix::{inverse, ComplexMatrix};

/// `exp(scale·A)` by scaling and squaring.
///
/// The eigen route loses digits when eigenvalues cluster, even for normal
/// matrices (eigenvector error grows like residual/gap), so it is kept only
/// as the independent cross-check [`mat_exp_eigen`].
pub fn mat_exp(a: &ComplexMatrix, scale: C64) -> ComplexMatrix {
    mat_exp_series(a, scale)
}

/// Eigendecomposition route; `None` when the eigenbasis is unusable.
pub fn mat_exp_eigen(a: &ComplexMatrix, scale: C64) -> Option<ComplexMatrix> {
    let e = eigen(a);
    if e.defective {
        return None;
    }
    let vinv = inverse(&e.vectors).ok()?;
    let d: Vec<C64> = e.values.iter().map(|&l| (scale * l).exp()).collect();
    Some(e.vectors * ComplexMatrix::diag(&d) * vinv)
}

/// Scaling and squaring around a truncated Taylor series.
pub fn mat_exp_series(a: &ComplexMatrix, scale: C64) -> ComplexMatrix {
    let x = a.scale(scale);
    let n = x.dim();
    let norm = x.norm1();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let y = x.scale(C64::new(2f64.powi(-squarings), 0.0));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (term * y).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum + term;
        if term.norm1() <= 1e-18 * sum.norm1() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::super::matrix::pauli;
    use super::*;

    #[test]
    fn pauli_z_exponential() {
        let [_, _, t3] = pauli();
        let theta = 0.73;
        let e = mat_exp(&t3, C64::new(0.0, theta));
        let expected = ComplexMatrix::diag(&[C64::from_polar(1.0, theta), C64::from_polar(1.0, -theta)]);
        assert!(e.distance(&expected) < 1e-14);
    }

    #[test]
    fn pauli_x_exponential() {
        let [t1, _, _] = pauli();
        let theta = 1.9;
        let e = mat_exp(&t1, C64::new(0.0, theta));
        let (c, s) = (theta.cos(), theta.sin());
        let expected = ComplexMatrix::from_rows(&[
            &[C64::new(c, 0.0), C64::new(0.0, s)],
            &[C64::new(0.0, s), C64::new(c, 0.0)],
        ])
        .unwrap();
        assert!(e.distance(&expected) < 1e-14);
        assert!(mat_exp_series(&t1, C64::new(0.0, theta)).distance(&expected) < 1e-13);
    }

    #[test]
    fn nilpotent_goes_through_series() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(mat_exp_eigen(&a, C64::new(1.0, 0.0)).is_none());
        let e = mat_exp(&a, C64::new(2.5, 0.0));
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, 2.5], &[0.0, 1.0]]).unwrap();
        assert!(e.distance(&expected) < 1e-14);
    }
}
