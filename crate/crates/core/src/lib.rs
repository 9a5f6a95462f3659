//! Simulation and analysis toolkit for probe-array storage channels with
//! global position jitter.
//!
//! One random jitter `J` per sampling instant shrinks the readback amplitude
//! of every probe by `p(J) = exp(-J^2 / W^2)`:
//!
//! ```text
//! r_k = p(J) * a_k + sigma * n_k,    k = 1..N,    J ~ N(0, sigma_J^2)
//! ```
//!
//! The crate provides the channel model ([`channel`]), the three threshold
//! detectors ([`detect`]), a deterministic parallel Monte Carlo engine
//! ([`sim`]), large-deviation error-floor analysis for Reed-Solomon sectors
//! ([`rs`]), capacity, random coding and Fano bounds ([`infotheory`]), and a
//! config-driven experiment runner ([`cli`]).

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod detect;
mod error;
pub mod infotheory;
pub mod numerics;
pub mod rs;
pub mod sim;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
