//! Quantum Zeno dynamics of a neutron spin crossing magnetic-field regions.
//!
//! The crate covers three levels of description:
//!
//! * [`ideal_spin`]: a bare spin-1/2 rotated by a field and interrupted by
//!   `N` projective spin measurements;
//! * [`abstract_model`]: a four-state direction ⊗ spin model with exact
//!   propagators, finite-`N` measurement chains and their Zeno limits for a
//!   direction-insensitive and a direction-sensitive projector;
//! * [`scattering`] and [`zeno_scattering`]: stationary transfer-matrix
//!   scattering through a lattice of magnetic slabs, without measurements and
//!   with projections in every field-free gap.
//!
//! [`correspondence`] cross-checks the stationary and dynamical pictures.
//! Everything is built on the small fixed-size kernels in [`linalg`].

pub mod abstract_model;
pub mod correspondence;
pub mod error;
pub mod fit;
pub mod ideal_spin;
pub mod linalg;
pub mod scattering;
pub mod sweep;
pub mod verify;
pub mod zeno_scattering;

pub use error::{Result, ZenoError};
pub use linalg::{ComplexMatrix, C64};
