//! Closed-form roots of monic polynomials up to degree four.
//!
//! Coefficients are stored lowest order first with the implicit leading 1
//! included as the last element: `x³ + a x² + b x + c` is `[c, b, a, 1]`.

use num_complex::Complex64 as C64;

use super::matrix::{ComplexMatrix, ONE, ZERO};

/// Characteristic polynomial `det(x·I − A)` by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[n] = ONE;
    let id = ComplexMatrix::identity(n);
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        m = *a * m + id.scale(coeffs[n - k + 1]);
        let am = *a * m;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

pub fn eval(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
}

/// `d-th` derivative of the polynomial.
pub fn derivative(coeffs: &[C64], d: usize) -> Vec<C64> {
    let mut c = coeffs.to_vec();
    for _ in 0..d {
        if c.len() <= 1 {
            return vec![ZERO];
        }
        c = c.iter().enumerate().skip(1).map(|(k, &v)| v * k as f64).collect();
    }
    c
}

/// Newton iterations that are only accepted while they reduce `|p(x)|`.
pub fn polish(coeffs: &[C64], mut x: C64, iterations: usize) -> C64 {
    let dp = derivative(coeffs, 1);
    let mut fx = eval(coeffs, x).norm();
    for _ in 0..iterations {
        if fx == 0.0 {
            break;
        }
        let d = eval(&dp, x);
        if d == ZERO {
            break;
        }
        let cand = x - eval(coeffs, x) / d;
        let fc = eval(coeffs, cand).norm();
        if fc < fx {
            x = cand;
            fx = fc;
        } else {
            break;
        }
    }
    x
}

/// Roots of `x² + b x + c`.
pub fn quadratic(b: C64, c: C64) -> [C64; 2] {
    let s = (b * b - 4.0 * c).sqrt();
    // pick the sign that avoids cancellation in -(b ± s)
    let s = if (b.conj() * s).re >= 0.0 { s } else { -s };
    let q = -(b + s) / 2.0;
    if q == ZERO {
        [-b / 2.0, -b / 2.0]
    } else {
        [q, c / q]
    }
}

/// Roots of `x³ + a x² + b x + c` by Cardano's formula.
pub fn cubic(a: C64, b: C64, c: C64) -> [C64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u3_plus = -q / 2.0 + disc;
    let u3_minus = -q / 2.0 - disc;
    let u3 = if u3_plus.norm() >= u3_minus.norm() {
        u3_plus
    } else {
        u3_minus
    };
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    if u3 == ZERO {
        return [-shift; 3];
    }
    let u = u3.powf(1.0 / 3.0);
    let mut roots = [ZERO; 3];
    let mut w = ONE;
    for r in roots.iter_mut() {
        let uk = u * w;
        *r = uk - p / (3.0 * uk) - shift;
        w *= omega;
    }
    roots
}

/// Roots of `x⁴ + a x³ + b x² + c x + d` by Ferrari's method.
pub fn quartic(a: C64, b: C64, c: C64, d: C64) -> [C64; 4] {
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
    let scale = 1.0 + p.norm() + r.norm().sqrt();
    let ys: [C64; 4] = if q.norm() <= 1e-15 * scale * scale.sqrt() {
        let [z1, z2] = quadratic(p, r);
        let (s1, s2) = (z1.sqrt(), z2.sqrt());
        [s1, -s1, s2, -s2]
    } else {
        let resolvent = cubic(p, p * p / 4.0 - r, -q * q / 8.0);
        let m = resolvent
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or(ZERO);
        let s = (2.0 * m).sqrt();
        let [y1, y2] = quadratic(-s, p / 2.0 + m + q / (2.0 * s));
        let [y3, y4] = quadratic(s, p / 2.0 + m - q / (2.0 * s));
        [y1, y2, y3, y4]
    };
    ys.map(|y| y - shift)
}

/// All roots of a monic polynomial of degree 1..=4, Newton-polished.
pub fn roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let raw: Vec<C64> = match n {
        1 => vec![-coeffs[0]],
        2 => quadratic(coeffs[1], coeffs[0]).to_vec(),
        3 => cubic(coeffs[2], coeffs[1], coeffs[0]).to_vec(),
        4 => quartic(coeffs[3], coeffs[2], coeffs[1], coeffs[0]).to_vec(),
        _ => panic!("closed-form roots only for degree 1..=4, got {n}"),
    };
    raw.into_iter().map(|x| polish(coeffs, x, 4)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn from_roots(rs: &[C64]) -> Vec<C64> {
        let mut p = vec![ONE];
        for &r in rs {
            let mut next = vec![ZERO; p.len() + 1];
            for (k, &v) in p.iter().enumerate() {
                next[k + 1] += v;
                next[k] -= v * r;
            }
            p = next;
        }
        p
    }

    fn assert_same_roots(found: &[C64], expected: &[C64], tol: f64) {
        let mut used = vec![false; expected.len()];
        for f in found {
            let (idx, dist) = expected
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, e)| (i, (e - f).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            assert!(dist < tol, "root {f} off by {dist}");
            used[idx] = true;
        }
    }

    #[test]
    fn cubic_distinct_complex_roots() {
        let rs = [c(1.0, 2.0), c(-0.5, 0.1), c(3.0, -1.0)];
        assert_same_roots(&roots(&from_roots(&rs)), &rs, 1e-12);
    }

    #[test]
    fn quartic_distinct_roots() {
        let rs = [c(1.0, 0.0), c(-2.0, 0.5), c(0.3, -0.7), c(4.0, 1.0)];
        assert_same_roots(&roots(&from_roots(&rs)), &rs, 1e-11);
    }

    #[test]
    fn quartic_biquadratic_branch() {
        let rs = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0)];
        assert_same_roots(&roots(&from_roots(&rs)), &rs, 1e-12);
    }

    #[test]
    fn characteristic_polynomial_of_diagonal() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let p = characteristic_polynomial(&a);
        let expected = from_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        for (x, y) in p.iter().zip(&expected) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_cubic() {
        // x^3 - 2x^2 + 5 -> 3x^2 - 4x -> 6x - 4
        let p = vec![c(5.0, 0.0), ZERO, c(-2.0, 0.0), ONE];
        assert_eq!(derivative(&p, 1), vec![ZERO, c(-4.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(derivative(&p, 2), vec![c(-4.0, 0.0), c(6.0, 0.0)]);
    }
}
