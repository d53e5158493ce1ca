//! Eisenstein series, the eta product Δ_N and the twisted theta kernel.

pub mod scalar;
pub mod theta;
pub mod vector;

pub use scalar::{
    delta_n_value, eta_product, kronecker_limit, kronecker_limit_closed_form, log_abs_eta, petersson_norm_log,
    scalar_eisenstein, EisensteinRoute, EtaProduct, PeterssonLog,
};
pub use theta::{theta_kernel, CoefficientProfile, DenseProfiles, ThetaKernel};
pub use vector::{
    eisenstein_coefficients_at_1, eisenstein_el, eisenstein_el_partial, normalization_factor, normalized_el,
    VectorValuedFunction,
};
