//! Capacity loss of bounded-support signal constellations over complex
//! additive-noise channels.
//!
//! Confining channel inputs to a bounded region S of the complex plane
//! costs capacity at high SNR. This crate computes that cost three ways:
//!
//! - [`maxent`]: the vanishing-noise limit. The max-entropy input on S
//!   under a power budget is a truncated Gaussian tilt; the induced loss
//!   is `log P + log(πe) - log ∫_S e^{-λ|x|²} - λP` nats, which evaluates
//!   to the classic 1.53 dB for squares and 1.33 dB for disks at the
//!   uniform power.
//! - [`bounds`]: a finite-σ lower bound on the loss, from an auxiliary
//!   output law with a tilted core on the ε-inflated region and a heavy
//!   tail, minimized over ε.
//! - [`mi`]: exact rates of finite constellations (square QAM, discretized
//!   tilts) by Gauss-Hermite quadrature, cross-checked by Monte Carlo, for
//!   the rate-loss curves that diverge once the constellation saturates.
//!
//! [`regions`] supplies the geometry (squares, disks, simple polygons) and
//! the tilt integrals behind all three; [`noise`] models the unit-variance
//! noise; [`constellations`] builds the input ensembles. Everything works
//! in nats internally; dB and bits appear only at presentation boundaries.
//!
//! ## Example
//!
//! ```
//! use caploss::maxent::capacity_loss;
//! use caploss::regions::Region;
//!
//! let square = Region::square(1.0).unwrap();
//! let sol = capacity_loss(&square, square.uniform_power()).unwrap();
//! // the square shaping penalty at high SNR, roughly 1.53 dB
//! assert!((sol.loss_db - 1.53).abs() < 0.005);
//! ```

pub mod bounds;
pub mod constellations;
pub mod error;
pub mod maxent;
pub mod mi;
pub mod noise;
pub mod numerics;
pub mod regions;

pub use bounds::BoundPoint;
pub use constellations::{Constellation, ProductGrid};
pub use error::{Error, Result};
pub use maxent::MaxEntSolution;
pub use mi::{GhConfig, McEstimate, RatePoint};
pub use noise::{NoiseKind, NoiseModel, NoiseSampler};
pub use regions::{Region, RegionMoments, RegionSpec, Shape};
