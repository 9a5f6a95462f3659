//! Capacity, random coding and Fano bounds for the global-jitter channel.
//!
//! Capacities and code rates are in bits per probe. Gallager exponents are
//! in bits, so the random coding bound reads `2^(-N E)`; they are converted
//! to nats only inside Laplace-method prefactors.
//!
//! Conditionally on the amplitude `p` the array is a binary-input AWGN
//! channel with ratio `f = p / sigma`. Averaging its capacity over `P`
//! gives the i.u.d. capacity of the jittered array; the reference channel
//! with independent per-probe jitter is a mixture channel whose capacity is
//! computed from its two output densities.

mod bounds;
mod capacity;
mod exponent;
mod fit;

pub use bounds::{
    capacity_critical_amplitude, capacity_critical_ratio, exponent_curvature_at_capacity,
    exponent_curvature_from_e0, fano_bound, fano_rate_integral, rcb_bound, FanoBound, RcbBound,
};
pub use capacity::{
    awgn_deficit, c_awgn, c_awgn_asymptotic, capacity_global, capacity_global_deficit,
    capacity_independent, capacity_point, AsymptoticCapacity, CapacityPoint,
};
pub use exponent::{error_exponent, gallager_e0, ExponentPoint, IndependentJitterExponent};
pub use fit::{power_law_fit, BoundCurve, BoundKind, BoundRow, PowerLawFit};
