//! Numerics for the right tail of KPZ variational formulas.
//!
//! The crate evaluates the Airy and Scorer functions on complex arguments,
//! Groeneboom's distribution for the maximum of Brownian motion minus a
//! parabola, the GUE/GOE Tracy–Widom distributions, explicit tail bounds for
//! suprema of the Airy₂ process plus initial data, and Monte Carlo samplers
//! that cross-check those numbers.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod eval;
pub mod groeneboom;
pub mod monte_carlo;
pub mod quadrature;
pub mod special_functions;
pub mod tail_bounds;
pub mod tracy_widom;
pub mod verify;

pub use error::{Error, Result};
pub use eval::{AccuracyPolicy, EvalResult};
