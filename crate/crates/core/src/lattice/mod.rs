//! Exact integer linear algebra: Smith and Hermite forms, saturated kernels
//! and cokernel presentations.
//!
//! Everything here is generic over [`IntegerScalar`](crate::scalar::IntegerScalar);
//! the rest of the crate instantiates it with `BigInt`.

mod group;
mod matrix;
mod normal_form;

pub use group::{cokernel, AbelianGroupPresentation};
pub use matrix::{is_unit, Matrix};
pub use normal_form::{
    hermite_normal_form, kernel_basis, rank, row_lattice_basis, same_row_lattice, smith_normal_form,
    unimodular_inverse, HermiteForm, SmithForm,
};
