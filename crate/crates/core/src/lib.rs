//! Heat contents of Brownian motion run on a random clock.
//!
//! The clock is a subordinator `D_t` (a nondecreasing Lévy process with
//! Laplace exponent `φ`) or its inverse `E_t`. Every estimator in this crate
//! conditions on the clock and evaluates the Brownian heat content on an
//! interval exactly, so Monte Carlo error comes from the clock alone.
//!
//! - [`exponent`]: the catalog of Laplace exponents and their Lévy densities.
//! - [`sampler`]: exact and importance-weighted draws of `D_t` and `E_t`.
//! - [`heat`]: exact interval heat contents and bridge-corrected disk walks.
//! - [`estimators`]: Rao–Blackwellized heat-content estimators.
//! - [`asymptotics`]: limit constants, rate functions and ladder fits.
//! - [`diagnostics`]: checks of the auxiliary small-time limit statements.
//! - [`cli`] and [`suites`]: the experiment runner behind the `subheat` binary.

pub mod asymptotics;
pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod exponent;
pub mod heat;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod stats;
pub mod suites;

pub use asymptotics::{AsymptoticPrediction, RateFunction};
pub use error::{Error, Result};
pub use estimators::Estimate;
pub use exponent::{LaplaceExponent, Regime, StableComponent};
pub use heat::Domain;
pub use rng::RandomStream;
pub use sampler::{Sampling, TailBoost, TimeChangeKind, TimeChangeSpec};
