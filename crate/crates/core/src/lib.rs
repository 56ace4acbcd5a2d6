//! Low-SNR capacity bounds for noncoherent correlated Rayleigh-fading channels.
//!
//! - [`corr`]: single-process autocorrelation models and their statistics.
//! - [`channel`]: MIMO grids, separable structure, delay-spread channels.
//! - [`bounds`]: finite-SNR upper bounds and normalized-capacity limits.
//! - [`sim`]: fading synthesis, on-off FSK inputs and Monte Carlo mutual information.

pub mod bounds;
pub mod channel;
pub mod corr;
pub mod error;
pub mod linalg;
pub mod sim;

pub use error::{Error, Result};
