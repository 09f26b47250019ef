//! Wick-renormalized polynomial interactions for Gaussian fields on the
//! unit-volume torus.
//!
//! The crate has three layers:
//!
//! * exact combinatorics over multi-indices (Newton-polytope data, growth
//!   exponents, boundedness certificates) feeding the normalizability
//!   classifier in [`criteria`];
//! * spectral sampling of the Gaussian field with nested cutoff coupling
//!   ([`field`]) and renormalized interaction evaluation ([`wick`]);
//! * Monte Carlo estimation of partition functions and variational
//!   objectives with explicit drift witnesses ([`estimator`], [`drift`]).
//!
//! All classification arithmetic is exact (big rationals); floating point
//! only enters through sampling and quadrature.

pub mod bounded;
pub mod criteria;
pub mod drift;
pub mod error;
pub mod estimator;
pub mod field;
pub mod grid;
pub mod hermite;
pub mod hull;
pub mod multi_index;
pub mod norms;
pub mod params;
pub mod pmap;
pub mod polynomial;
pub mod rational;
pub mod ray;
pub mod rng;
pub mod sigma;
pub mod simplex;
pub mod wick;

pub use error::GibbsError;
pub use multi_index::MultiIndex;
pub use params::ModelParams;
pub use polynomial::Interaction;
pub use rational::{ExtRational, Rat};
