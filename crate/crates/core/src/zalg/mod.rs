//! Exact integer linear algebra.
//!
//! Everything here works over `BigInt`; there is no floating point anywhere in the
//! homology pipeline. The cokernel convention is fixed once: the columns of a matrix
//! are relations among the generators indexed by its rows.

mod group;
mod matrix;
mod snf;

pub use group::{
    cokernel, gl_orbit_invariant, kernel_rank, prime_power_factors, rank, AbelianGroup,
    GroupError,
};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithDecomposition};
