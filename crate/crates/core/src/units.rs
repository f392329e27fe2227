//! Unit system and gate-well description.
//!
//! Every routine in the crate takes its scales from an [`OscillatorConfig`], so
//! the same code runs in SI or in oscillator units (ħ = m = ω₀ = 1). Numerics on
//! basis functions always happen in the dimensionless coordinate
//! `x̃ = x·√(mω₀/ħ)` and are rescaled on the way out.

use crate::error::{invalid, require_positive, Result};

/// Reduced Planck constant [J·s] (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant [J/K] (CODATA 2018, exact).
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;
/// Atomic mass unit [kg].
pub const ATOMIC_MASS_UNIT_SI: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorConfig {
    /// Gate frequency ω₀.
    pub omega0: f64,
    /// Particle mass m.
    pub mass: f64,
    /// Action unit ħ (1 in oscillator units).
    pub hbar: f64,
    /// Number of fully trapped gate levels N; the gate basis is `0..=N`.
    pub levels: usize,
}

impl OscillatorConfig {
    pub fn new(omega0: f64, mass: f64, hbar: f64, levels: usize) -> Result<Self> {
        require_positive("omega0", omega0)?;
        require_positive("mass", mass)?;
        require_positive("hbar", hbar)?;
        if levels < 1 {
            return Err(invalid("N", "at least one trapped level is required"));
        }
        Ok(Self {
            omega0,
            mass,
            hbar,
            levels,
        })
    }

    /// Oscillator units: ħ = m = ω₀ = 1.
    pub fn dimensionless(levels: usize) -> Self {
        assert!(levels >= 1, "N must be at least 1");
        Self {
            omega0: 1.0,
            mass: 1.0,
            hbar: 1.0,
            levels,
        }
    }

    /// SI units for a given trap frequency [rad/s] and mass [kg].
    pub fn si(omega0: f64, mass: f64, levels: usize) -> Result<Self> {
        Self::new(omega0, mass, HBAR_SI, levels)
    }

    pub fn with_levels(self, levels: usize) -> Self {
        Self { levels, ..self }
    }

    /// Level spacing ħω₀.
    pub fn quantum(&self) -> f64 {
        self.hbar * self.omega0
    }

    /// Oscillator length √(ħ/(mω₀)).
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega0)).sqrt()
    }

    /// Oscillator momentum √(mħω₀).
    pub fn momentum_scale(&self) -> f64 {
        (self.mass * self.hbar * self.omega0).sqrt()
    }

    pub fn time_scale(&self) -> f64 {
        1.0 / self.omega0
    }

    pub fn to_dimensionless_length(&self, x: f64) -> f64 {
        x / self.length_scale()
    }

    pub fn from_dimensionless_length(&self, x: f64) -> f64 {
        x * self.length_scale()
    }

    pub fn to_dimensionless_energy(&self, e: f64) -> f64 {
        e / self.quantum()
    }

    pub fn from_dimensionless_energy(&self, e: f64) -> f64 {
        e * self.quantum()
    }

    pub fn to_dimensionless_time(&self, t: f64) -> f64 {
        t * self.omega0
    }

    pub fn from_dimensionless_time(&self, t: f64) -> f64 {
        t / self.omega0
    }

    /// Half-width `2√(2N+1)` of the sampling window, in oscillator lengths.
    pub fn window_half_width(&self) -> f64 {
        2.0 * ((2 * self.levels + 1) as f64).sqrt()
    }
}
