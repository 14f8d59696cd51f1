//! Real-argument special functions and quadrature.

#![allow(clippy::excessive_precision)]

mod expint;
mod hyper;
mod quadrature;

pub use expint::{e1, e1_scaled, ei, E1_SERIES_LIMIT, EULER_GAMMA, SERIES_LIMIT};
pub use hyper::{harmonic_exponential_series, hyper3f3_unit_params, MAX_SERIES_TERMS};
pub(crate) use quadrature::gauss_legendre_8;
pub use quadrature::{integrate, integrate_semi_infinite, try_integrate, try_integrate_semi_infinite, QuadratureSpec};
