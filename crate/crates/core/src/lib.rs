//! Physical-layer-aware planning of elastic optical networks whose transponders
//! are fed either by single-wavelength sources (one laser per channel) or by
//! multi-wavelength sources (frequency combs serving several channels).
//!
//! The crate is organised bottom-up:
//!
//! - [`txmodel`] computes the transmit-side OSNR of each transmitter architecture.
//! - [`netgraph`] holds topologies, k-shortest-path routing and traffic matrices.
//! - [`phys`] turns a route and a transceiver configuration into an SNR budget
//!   (transmitter noise, amplifier ASE and closed-form GN nonlinear interference).
//! - [`spectrum`] keeps the per-link flex-grid slot occupancy.
//! - [`planner`] is the routing, configuration and spectrum assignment engine.
//! - [`metrics`] derives underprovisioning, source counts and the cost analysis.
//! - [`study`] runs parameter sweeps over all of the above.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod metrics;
pub mod netgraph;
pub mod phys;
pub mod planner;
pub mod spectrum;
pub mod study;
pub mod txmodel;
pub mod units;

pub use error::{Error, Result};
