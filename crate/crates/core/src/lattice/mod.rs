//! The quadratic space of trace-zero matrices, the lattice of level N and
//! the Γ₀(N) machinery built on it.

pub mod enumerate;
pub mod gamma0;
pub mod matrix;
pub mod vector;

pub use enumerate::{Majorant, ReducedEnumerator, REDUCED_HEIGHT};
pub use gamma0::{
    atkin_lehner, atkin_lehner_conjugate, cusp_constants, cusp_of_isotropic, gamma0_coset_reps,
    gamma0_equivalent, index_r, isotropic_of_cusp, reduce_to_fundamental_domain, stabilizer_order, Cusp,
    IsotropicLine,
};
pub use matrix::Mat2;
pub use vector::{
    norm_matches_coset, point_of_vector, quad_value_real, vector_of_point, CosetIndex, LatticeVector, Level,
    UpperHalfPoint,
};
