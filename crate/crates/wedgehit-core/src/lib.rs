//! Closed-form hitting-time laws for radial Dunkl processes in dihedral
//! wedges and for planar Brownian motion, together with an independent
//! Monte Carlo oracle.
//!
//! The crate is organized around five modules:
//!
//! - [`model`]: wedge geometry, multiplicities, series controls.
//! - [`specfun`]: the special-function kernel (Gamma, hypergeometric,
//!   Bessel, Jacobi/Gegenbauer polynomials, Gauss–Jacobi quadrature).
//! - [`hittime`]: the analytic laws for the first hitting time of the
//!   boundary of the wedge of angle π/4 (and the ℤ₂×ℤ₂ product case).
//! - [`planarbm`]: the Brownian specialisation — Spitzer's characteristic
//!   function, Bessel-series exit tail, square-wave Fourier tail.
//! - [`mcsim`]: Euler–Maruyama path simulation of the flipped-index
//!   process and exact planar Brownian winding, used as cross-validation.
//!
//! The crate is `no_std` compatible (requires `alloc`); enable the
//! default `std` feature for use with the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod hittime;
pub mod mcsim;
pub mod model;
pub mod planarbm;
pub mod specfun;

pub use error::Error;
pub use model::{Curve, SeriesControl, StartPoint, WedgeModel};
