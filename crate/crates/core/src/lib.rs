//! Asymptotic solutions of the quasilinear parabolic equation
//! `u_t + φ(u)_x = ε u_xx` near large-gradient and Lagrange `A_{2n+1}`
//! singularities, with a finite-difference reference solver and
//! residual-order verification tools.

// `!(x > 0.0)` is used on purpose: it rejects NaN together with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod colehopf;
pub mod error;
pub mod flux;
pub mod fold;
pub mod initial_layer;
pub mod oracle;
pub mod quad;
mod roots;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use flux::FluxModel;
