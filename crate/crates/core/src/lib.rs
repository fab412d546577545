//! Bayesian learning of soft random geometric graphs in a probabilistic
//! metric space, with uncertainty-normalized distances between learnt
//! graphical models.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiations.

// Negated float comparisons are used so NaN falls into the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bignet;
pub mod data;
pub mod distance;
pub mod io;
pub mod linalg;
pub mod mcmc;
pub mod posterior;
pub mod scalar;
pub mod srgg;

pub use scalar::Scalar;

pub type Matrix = linalg::Matrix<f64>;
pub type SpdMatrix = linalg::SpdMatrix<f64>;
pub type RawDataset = data::RawDataset<f64>;
pub type StandardizedDataset = data::StandardizedDataset<f64>;
pub type PartialCorrelationMatrix = srgg::PartialCorrelationMatrix<f64>;
pub type GraphParams = posterior::GraphParams<f64>;
pub type CorrelationPosterior = posterior::CorrelationPosterior<f64>;
