//! Exact arithmetic primitives and real special functions.

pub mod arith;
pub mod quadfield;
pub mod special;

pub use arith::{
    divisors, euler_phi, is_fundamental_discriminant, is_squarefree, kronecker, moebius,
};
pub use quadfield::{
    hurwitz_class_number, real_quadratic_data, FundamentalDiscriminant, RealQuadraticData,
};
pub use special::{
    bessel_k, beta_integral, dirichlet_l, dirichlet_lambda, exp_integral_e1, zeta, zeta_completed,
    zeta_family, zeta_level, ZetaValues,
};
