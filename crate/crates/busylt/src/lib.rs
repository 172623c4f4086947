//! Laplace transforms of M/M/1 busy periods, proper and defective.
//!
//! The transform of a nonnegative random variable `X` has a probabilistic
//! reading: `L_X(s) = P(X < Y)` where `Y` is an independent exponential
//! "catastrophe" at rate `s`. For busy periods of an unstable queue this
//! reading explains the otherwise puzzling value `L(0) < 1`: it is the
//! probability the busy period ends at all, and `1 - L(0)` is the mass the
//! defective distribution puts on infinity.
//!
//! The crate computes this transform four independent ways and checks them
//! against each other:
//!
//! - [`analytic`] — the closed form, curves, defect mass and mean;
//! - [`branching`] — Galton-Watson extinction of the embedded offspring
//!   process, an independent route to `L(0)`;
//! - [`montecarlo`] — embedded-chain and continuous-clock simulations of
//!   the catastrophe race, plus a generic `P(X < Y)` estimator;
//! - [`boundary`] — bisection on the defect mass to locate the stability
//!   boundary of a parameterized family.
//!
//! ```
//! use busylt::analytic::{busy_lt, lt_at_zero, defect_mass, QueueParams, TransformArg};
//!
//! // Unstable queue: arrivals outpace service.
//! let params = QueueParams::new(4.0, 3.0)?;
//! assert_eq!(lt_at_zero(params), 0.75);
//! assert_eq!(defect_mass(params).value(), 0.25);
//! assert_eq!(busy_lt(params, TransformArg::new(1.0)?), 0.5);
//! # Ok::<(), busylt::Error>(())
//! ```

pub mod analytic;
pub mod boundary;
pub mod branching;
mod error;
pub mod montecarlo;

pub use error::{Error, Result};
