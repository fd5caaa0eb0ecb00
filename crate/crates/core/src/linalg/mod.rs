//! Fixed-size complex linear algebra (2x2, 3x3, 4x4).

mod eigen;
mod expm;
mod matrix;
pub mod roots;

pub use eigen::{eigen, EigenDecomposition, DEFECTIVE_CONDITION};
pub use expm::{mat_exp, mat_exp_eigen, mat_exp_series};
pub use matrix::{inverse, mat_mul, mat_power, mat_power_scaled, pauli, solve_linear, vector_norm, ComplexMatrix};

pub use num_complex::Complex64 as C64;

pub(crate) use matrix::{I, ONE, ZERO};
