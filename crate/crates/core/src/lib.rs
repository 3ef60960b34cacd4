//! Numerical machinery for sign averages on finite-dimensional `l_p` spheres.
//!
//! The crate is organized around one pipeline: sample vector configurations
//! on the `l_p` sphere ([`lp`]), reduce them to scalar data `(sigma, alpha, u)`
//! ([`reduction`]), evaluate the Rademacher sign average `phi` and its
//! derivatives ([`phi`]), and run certified inequality sweeps over all of it
//! ([`certify`]). Two critical exponents fall out of the same scalar
//! functions ([`constants`]), and [`rendezvous`] estimates average-distance
//! intervals on spheres directly.
//!
//! Everything is deterministic under an explicit seed; Monte Carlo paths
//! report their standard error.

pub mod certify;
pub mod constants;
pub mod error;
pub mod lp;
pub mod phi;
pub mod reduction;
pub mod rendezvous;

mod util;

pub use error::{Error, Result};
pub use lp::{sample_configuration, Configuration, Exponent, LpVector};
pub use phi::{Method, PhiResult, SignVector, DEFAULT_ENUM_CAP};
pub use reduction::{bound_constants, reduce, BoundConstants, ReducedConfig};
