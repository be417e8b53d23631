//! Self-contained special-function kernel: Gamma machinery, confluent and
//! Gauss hypergeometric series, modified Bessel functions, Jacobi and
//! Gegenbauer polynomials, and Gauss–Jacobi quadrature against the
//! symmetric Beta measure.

mod bessel;
mod gamma;
mod hyp;
mod jacobi;
mod quad;

pub use bessel::{bessel_i, bessel_i_normalized, bessel_i_scaled, ln_bessel_i};
pub use gamma::{ln_gamma, lower_inc_gamma, pochhammer, reg_lower_inc_gamma};
pub use hyp::{
    erdelyi_multiplication_check, hyp_1f1, hyp_1f1_euler, hyp_2f1, hyp_2f1_euler, ln_hyp_1f1_pos,
};
pub use jacobi::{
    chebyshev_u, gegenbauer_c, jacobi_orthonormal, jacobi_p, jacobi_sq_norm, ln_jacobi_sq_norm,
    xu_identity_check, NormConvention,
};
pub use quad::{gauss_jacobi_general, gauss_jacobi_rule, QuadratureRule};

/// Crate-internal helpers shared with the series modules.
pub(crate) mod internal {
    pub(crate) use super::gamma::ln_gamma_unchecked;
}
