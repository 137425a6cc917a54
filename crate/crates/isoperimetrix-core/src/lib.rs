//! Isoperimetric profiles, Orlicz-Sobolev norms, weighted capacities and the
//! constant-transfer maps between them, for one-dimensional probability
//! measures.
//!
//! The crate is `no_std`-compatible (allocation required); IO, the CLI and
//! the file formats live in the companion `isoperimetrix` crate.
//!
//! Modules follow the pipeline:
//!
//! * [`numerics`]: quadrature, monotone inversion, scans, grid functions;
//! * [`measures`]: 1-D probability measures with density, CDF, quantile and
//!   a log-concavity certificate;
//! * [`orlicz`]: Orlicz (quasi-)norms, adjoints, Legendre transforms and the
//!   monotonicity predicates gating the transfer maps;
//! * [`profiles`]: isoperimetric profiles, the Gaussian comparator, Cheeger
//!   and Gaussian hierarchy constants, and the profile/measure bijection;
//! * [`capacity`]: weighted q-capacities, the capacity lifting transform and
//!   a discretized variational oracle;
//! * [`hierarchy`]: constant transfers between functional and isoperimetric
//!   inequalities, with a multiplicative-factor ledger;
//! * [`tensorize`]: the envelope and variance-interpolation machinery used
//!   to certify dimension-free tensorization.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod capacity;
pub mod error;
pub mod hierarchy;
pub mod math;
pub mod measures;
pub mod numerics;
pub mod orlicz;
pub mod profiles;
pub mod tensorize;

pub use error::{Error, Result};
pub use numerics::{GridFunction, QuadratureConfig};
