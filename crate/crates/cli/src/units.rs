//! Optional unit suffixes on configuration quantities.
//!
//! Plain numbers are already in oscillator units (ħ = m = ω₀ = 1). Strings
//! carry a value and a unit, e.g. `"120 nK"` or `"0.25 hw"`.

use matteron::units::{BOLTZMANN_SI, HBAR_SI};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Dimensionless,
    Angle,
    Energy,
    /// Temperature, stored as the thermal energy k_B·T.
    Temperature,
    Time,
    Frequency,
    Rate,
    Length,
    Mass,
    /// Particles per energy.
    Capacitance,
    /// Energy·time per particle².
    Resistance,
}

/// Scales of the oscillator in SI, when the config supplies them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiScales {
    pub omega0: f64,
    pub mass: f64,
}

impl SiScales {
    fn energy(&self) -> f64 {
        HBAR_SI * self.omega0
    }

    fn length(&self) -> f64 {
        (HBAR_SI / (self.mass * self.omega0)).sqrt()
    }
}

enum Factor {
    /// Already in oscillator units after multiplying by the factor.
    Native(f64),
    /// SI value after multiplying by the factor.
    Si(f64),
}

fn unit_factor(kind: Kind, unit: &str) -> Option<Factor> {
    use Factor::{Native, Si};
    let tau = 2.0 * std::f64::consts::PI;
    Some(match (kind, unit) {
        (Kind::Angle, "rad") => Native(1.0),
        (Kind::Angle, "deg") => Native(std::f64::consts::PI / 180.0),
        (Kind::Energy, "hw") => Native(1.0),
        (Kind::Energy, "J") => Si(1.0),
        (Kind::Energy, "eV") => Si(1.602_176_634e-19),
        (Kind::Temperature, "hw") => Native(1.0),
        (Kind::Temperature, "K") => Si(BOLTZMANN_SI),
        (Kind::Temperature, "mK") => Si(1e-3 * BOLTZMANN_SI),
        (Kind::Temperature, "uK") => Si(1e-6 * BOLTZMANN_SI),
        (Kind::Temperature, "nK") => Si(1e-9 * BOLTZMANN_SI),
        (Kind::Time, "s") => Si(1.0),
        (Kind::Time, "ms") => Si(1e-3),
        (Kind::Time, "us") => Si(1e-6),
        (Kind::Time, "periods") => Native(tau),
        (Kind::Frequency | Kind::Rate, "w0") => Native(1.0),
        (Kind::Frequency, "rad/s") => Si(1.0),
        (Kind::Frequency, "Hz") => Si(tau),
        (Kind::Frequency, "kHz") => Si(tau * 1e3),
        (Kind::Rate, "1/s") => Si(1.0),
        (Kind::Rate, "1/ms") => Si(1e3),
        (Kind::Length, "m") => Si(1.0),
        (Kind::Length, "um") => Si(1e-6),
        (Kind::Length, "nm") => Si(1e-9),
        (Kind::Mass, "kg") => Si(1.0),
        (Kind::Mass, "u") => Si(matteron::units::ATOMIC_MASS_UNIT_SI),
        (Kind::Capacitance, "1/hw") => Native(1.0),
        (Kind::Capacitance, "1/J") => Si(1.0),
        (Kind::Resistance, "hbar") => Native(1.0),
        (Kind::Resistance, "J*s") => Si(1.0),
        _ => return None,
    })
}

fn si_to_native(kind: Kind, value: f64, scales: &SiScales) -> f64 {
    match kind {
        Kind::Dimensionless | Kind::Angle => value,
        Kind::Energy | Kind::Temperature => value / scales.energy(),
        Kind::Time => value * scales.omega0,
        Kind::Frequency | Kind::Rate => value / scales.omega0,
        Kind::Length => value / scales.length(),
        Kind::Mass => value / scales.mass,
        Kind::Capacitance => value * scales.energy(),
        Kind::Resistance => value / HBAR_SI,
    }
}

/// Parses `"<number> <unit>"` for a quantity named `name`.
pub fn parse_quantity(name: &str, text: &str, kind: Kind, scales: Option<&SiScales>) -> CliResult<f64> {
    let text = text.trim();
    let (number, unit) = match text.split_once(char::is_whitespace) {
        Some((n, u)) => (n, u.trim()),
        None => (text, ""),
    };
    let value: f64 = number
        .parse()
        .map_err(|_| CliError::Config(format!("{name}: cannot read a number from {text:?}")))?;
    if unit.is_empty() {
        return Ok(value);
    }
    match unit_factor(kind, unit) {
        Some(Factor::Native(f)) => Ok(value * f),
        Some(Factor::Si(f)) => {
            let scales = scales.ok_or_else(|| {
                CliError::Config(format!(
                    "{name}: SI unit {unit:?} needs oscillator.omega0 and oscillator.mass"
                ))
            })?;
            Ok(si_to_native(kind, value * f, scales))
        }
        None => Err(CliError::Config(format!("{name}: unit {unit:?} not valid for a {kind:?} quantity"))),
    }
}
