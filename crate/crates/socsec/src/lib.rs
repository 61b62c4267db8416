//! Security analysis of cooperative beamforming-and-jamming in random networks.
//!
//! A source at the origin recruits trusted nearby nodes as decode-and-forward
//! relays and less-trusted ring nodes as friendly jammers, both drawn from a
//! Poisson point process thinned by social-trust thresholds. The crate computes
//! the resulting connection and secrecy outage probabilities two independent
//! ways:
//!
//! * closed forms built on Gamma moment-matching of the four received-power
//!   variables and the CDF of a ratio of two Gamma variables
//!   ([`gamma_approx`], [`outage`]), and
//! * a trial-level Monte Carlo simulator of the underlying signal model
//!   ([`montecarlo`]),
//!
//! so each side can be checked against the other. [`geometry`] supplies planar
//! regions, PPP sampling and radial quadrature; [`specfun`] the special
//! functions behind the closed forms; [`cli`] an experiment runner that writes
//! sweep results as CSV.

pub mod channel;
pub mod cli;
pub mod gamma_approx;
pub mod geometry;
pub mod montecarlo;
pub mod outage;
pub mod specfun;

pub use channel::SystemParams;
pub use geometry::{Point, Region};
pub use specfun::GammaParams;
