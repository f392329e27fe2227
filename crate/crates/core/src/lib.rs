//! Self-consistent model of the triple-well atomtronic transistor oscillator.
//!
//! * [`oscillator`]: harmonic-oscillator basis, truncated coherent states.
//! * [`coupling`]: transistor modes, overlap factors `U_n`, coupling factor χ(α).
//! * [`circuit`]: classical equivalent circuit and its steady state.
//! * [`matterwave`]: the classical matterwave emitted into the drain.

pub mod circuit;
pub mod coupling;
pub mod error;
pub mod matterwave;
pub mod oscillator;
pub mod quadrature;
pub mod summation;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use units::OscillatorConfig;
