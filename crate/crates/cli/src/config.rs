//! TOML run configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use matteron::circuit::ModeSign;
use matteron::coupling::ChiNormalization;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::units::{parse_quantity, Kind, SiScales};

/// Bundled default configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    fn resolve(&self, name: &str, kind: Kind, scales: Option<&SiScales>) -> CliResult<f64> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(t) => parse_quantity(name, t, kind, scales),
        }
    }
}

fn num(v: f64) -> Quantity {
    Quantity::Number(v)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOscillator {
    #[serde(rename = "N")]
    levels: usize,
    omega0: Option<Quantity>,
    mass: Option<Quantity>,
}

impl Default for RawOscillator {
    fn default() -> Self {
        Self {
            levels: 36,
            omega0: None,
            mass: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTransistor {
    theta: Quantity,
    kappa: Quantity,
    gamma: Quantity,
}

impl Default for RawTransistor {
    fn default() -> Self {
        Self {
            theta: num(std::f64::consts::FRAC_PI_4),
            kappa: num(0.1),
            gamma: num(1.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawBattery {
    #[serde(rename = "mu_B")]
    mu_b: Quantity,
    #[serde(rename = "T_B")]
    t_b: Quantity,
    #[serde(rename = "V_SS")]
    v_ss: Quantity,
    #[serde(rename = "R_I")]
    r_i: Quantity,
    #[serde(rename = "C_S")]
    c_s: Quantity,
}

impl Default for RawBattery {
    fn default() -> Self {
        Self {
            mu_b: num(1.0),
            t_b: num(2.0 / 3.0),
            v_ss: num(10.0),
            r_i: num(1.0),
            c_s: num(1.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawGate {
    #[serde(rename = "C_G")]
    c_g: Quantity,
    #[serde(rename = "Q")]
    quality: Option<Quantity>,
    mode: String,
}

impl Default for RawGate {
    fn default() -> Self {
        Self {
            c_g: num(1.0),
            quality: Some(num(100.0)),
            mode: "antisymmetric".into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawCoupling {
    eta: Quantity,
    normalization: String,
    points: usize,
}

impl Default for RawCoupling {
    fn default() -> Self {
        Self {
            eta: num(1.0),
            normalization: "coherent".into(),
            points: 401,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawStates {
    fill: Vec<f64>,
    samples: usize,
}

impl Default for RawStates {
    fn default() -> Self {
        Self {
            fill: vec![0.56, 0.84],
            samples: 1001,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    start: Quantity,
    stop: Quantity,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawDetector {
    start: Quantity,
    stop: Quantity,
    count: usize,
    damping: Quantity,
    duration: Quantity,
    mass: Quantity,
}

impl Default for RawDetector {
    fn default() -> Self {
        Self {
            start: num(0.5),
            stop: num(1.5),
            count: 1001,
            damping: num(0.02),
            duration: num(2000.0),
            mass: num(1.0),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    oscillator: RawOscillator,
    transistor: RawTransistor,
    battery: RawBattery,
    gate: RawGate,
    coupling: RawCoupling,
    states: RawStates,
    sweep: Option<RawSweep>,
    detector: RawDetector,
    output: RawOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("output format must be csv or json, got {other:?}"))),
        }
    }
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    TB,
    MuB,
    RI,
    CG,
    CS,
    Kappa,
    Theta,
    Q,
    N,
    VSS,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 10] = [
        SweepParameter::TB,
        SweepParameter::MuB,
        SweepParameter::RI,
        SweepParameter::CG,
        SweepParameter::CS,
        SweepParameter::Kappa,
        SweepParameter::Theta,
        SweepParameter::Q,
        SweepParameter::N,
        SweepParameter::VSS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::TB => "T_B",
            SweepParameter::MuB => "mu_B",
            SweepParameter::RI => "R_I",
            SweepParameter::CG => "C_G",
            SweepParameter::CS => "C_S",
            SweepParameter::Kappa => "kappa",
            SweepParameter::Theta => "theta",
            SweepParameter::Q => "Q",
            SweepParameter::N => "N",
            SweepParameter::VSS => "V_SS",
        }
    }

    fn kind(self) -> Kind {
        match self {
            SweepParameter::TB => Kind::Temperature,
            SweepParameter::MuB | SweepParameter::VSS => Kind::Energy,
            SweepParameter::RI => Kind::Resistance,
            SweepParameter::CG | SweepParameter::CS => Kind::Capacitance,
            SweepParameter::Kappa | SweepParameter::Theta => Kind::Angle,
            SweepParameter::Q | SweepParameter::N => Kind::Dimensionless,
        }
    }
}

impl FromStr for SweepParameter {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|p| p.name()).collect();
            CliError::Config(format!("unknown sweep parameter {s:?}; allowed: {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    /// Evenly spaced values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorScan {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub damping: f64,
    pub duration: f64,
    pub mass: f64,
}

/// Fully resolved parameters in oscillator units.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub levels: usize,
    pub theta: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub mu_b: f64,
    /// Thermal energy k_B·T_B.
    pub t_b: f64,
    pub v_ss: f64,
    pub r_i: f64,
    pub c_s: f64,
    pub c_g: f64,
    pub quality: Option<f64>,
    pub mode: ModeSign,
    pub eta: f64,
    pub normalization: ChiNormalization,
    pub coupling_points: usize,
    pub fills: Vec<f64>,
    pub samples: usize,
    pub detector: DetectorScan,
}

impl Params {
    /// Copy with one whitelisted parameter replaced.
    pub fn with(&self, parameter: SweepParameter, value: f64) -> CliResult<Params> {
        let mut p = self.clone();
        match parameter {
            SweepParameter::TB => p.t_b = value,
            SweepParameter::MuB => p.mu_b = value,
            SweepParameter::RI => p.r_i = value,
            SweepParameter::CG => p.c_g = value,
            SweepParameter::CS => p.c_s = value,
            SweepParameter::Kappa => p.kappa = value,
            SweepParameter::Theta => p.theta = value,
            SweepParameter::Q => p.quality = if value.is_infinite() { None } else { Some(value) },
            SweepParameter::N => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(CliError::Config(format!("N must be a positive integer, got {value}")));
                }
                p.levels = value as usize;
            }
            SweepParameter::VSS => p.v_ss = value,
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Params,
    pub sweep: Option<Sweep>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    /// Exact input text, echoed into every result.
    pub source: String,
}

impl RunConfig {
    pub fn default_config() -> CliResult<Self> {
        Self::parse(DEFAULT_CONFIG)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let scales = match (&raw.oscillator.omega0, &raw.oscillator.mass) {
            (Some(w), Some(m)) => {
                // plain numbers here are SI: rad/s and kg
                let omega0 = match w {
                    Quantity::Number(v) => *v,
                    Quantity::Text(t) => si_frequency(t)?,
                };
                let mass = match m {
                    Quantity::Number(v) => *v,
                    Quantity::Text(t) => si_mass(t)?,
                };
                if !(omega0 > 0.0 && mass > 0.0) {
                    return Err(CliError::Config("oscillator.omega0 and oscillator.mass must be positive".into()));
                }
                Some(SiScales { omega0, mass })
            }
            (None, None) => None,
            _ => return Err(CliError::Config("give both oscillator.omega0 and oscillator.mass, or neither".into())),
        };
        let s = scales.as_ref();
        if raw.oscillator.levels == 0 {
            return Err(CliError::Config("oscillator.N must be at least 1".into()));
        }
        let mode = match raw.gate.mode.as_str() {
            "antisymmetric" => ModeSign::Antisymmetric,
            "symmetric" => ModeSign::Symmetric,
            other => return Err(CliError::Config(format!("gate.mode must be symmetric or antisymmetric, got {other:?}"))),
        };
        let normalization = match raw.coupling.normalization.as_str() {
            "coherent" => ChiNormalization::Coherent,
            "truncated" => ChiNormalization::Truncated,
            other => {
                return Err(CliError::Config(format!(
                    "coupling.normalization must be coherent or truncated, got {other:?}"
                )))
            }
        };
        let quality = match &raw.gate.quality {
            None => None,
            Some(q) => {
                let q = q.resolve("gate.Q", Kind::Dimensionless, s)?;
                if q.is_infinite() {
                    None
                } else {
                    Some(q)
                }
            }
        };
        if raw.coupling.points < 2 {
            return Err(CliError::Config("coupling.points must be at least 2".into()));
        }
        if raw.states.samples < 2 {
            return Err(CliError::Config("states.samples must be at least 2".into()));
        }
        if raw.states.fill.is_empty() || raw.states.fill.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
            return Err(CliError::Config(format!(
                "states.fill must be a non-empty list of finite values >= 0, got {:?}",
                raw.states.fill
            )));
        }
        let d = &raw.detector;
        let detector = DetectorScan {
            start: d.start.resolve("detector.start", Kind::Frequency, s)?,
            stop: d.stop.resolve("detector.stop", Kind::Frequency, s)?,
            count: d.count,
            damping: d.damping.resolve("detector.damping", Kind::Rate, s)?,
            duration: d.duration.resolve("detector.duration", Kind::Time, s)?,
            mass: d.mass.resolve("detector.mass", Kind::Mass, s)?,
        };
        if detector.count < 2 || !(detector.start > 0.0 && detector.stop > detector.start) {
            return Err(CliError::Config("detector scan needs 0 < start < stop and count >= 2".into()));
        }
        let params = Params {
            levels: raw.oscillator.levels,
            theta: raw.transistor.theta.resolve("transistor.theta", Kind::Angle, s)?,
            kappa: raw.transistor.kappa.resolve("transistor.kappa", Kind::Angle, s)?,
            gamma: raw.transistor.gamma.resolve("transistor.gamma", Kind::Rate, s)?,
            mu_b: raw.battery.mu_b.resolve("battery.mu_B", Kind::Energy, s)?,
            t_b: raw.battery.t_b.resolve("battery.T_B", Kind::Temperature, s)?,
            v_ss: raw.battery.v_ss.resolve("battery.V_SS", Kind::Energy, s)?,
            r_i: raw.battery.r_i.resolve("battery.R_I", Kind::Resistance, s)?,
            c_s: raw.battery.c_s.resolve("battery.C_S", Kind::Capacitance, s)?,
            c_g: raw.gate.c_g.resolve("gate.C_G", Kind::Capacitance, s)?,
            quality,
            mode,
            eta: raw.coupling.eta.resolve("coupling.eta", Kind::Dimensionless, s)?,
            normalization,
            coupling_points: raw.coupling.points,
            fills: raw.states.fill,
            samples: raw.states.samples,
            detector,
        };
        let sweep = match raw.sweep {
            None => None,
            Some(sw) => {
                let parameter: SweepParameter = sw.parameter.parse()?;
                let kind = parameter.kind();
                let start = sw.start.resolve("sweep.start", kind, s)?;
                let stop = sw.stop.resolve("sweep.stop", kind, s)?;
                if sw.count < 2 {
                    return Err(CliError::Config(format!("sweep.count must be at least 2, got {}", sw.count)));
                }
                if !(start.is_finite() && stop.is_finite()) {
                    return Err(CliError::Config("sweep bounds must be finite".into()));
                }
                Some(Sweep {
                    parameter,
                    start,
                    stop,
                    count: sw.count,
                })
            }
        };
        let format = raw.output.format.as_deref().map(str::parse).transpose()?;
        Ok(RunConfig {
            params,
            sweep,
            output_path: raw.output.path,
            format,
            source: text.to_string(),
        })
    }
}

fn si_frequency(text: &str) -> CliResult<f64> {
    let scales = SiScales { omega0: 1.0, mass: 1.0 };
    parse_quantity("oscillator.omega0", text, Kind::Frequency, Some(&scales))
}

fn si_mass(text: &str) -> CliResult<f64> {
    let scales = SiScales { omega0: 1.0, mass: 1.0 };
    parse_quantity("oscillator.mass", text, Kind::Mass, Some(&scales))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_default_parses() {
        let cfg = RunConfig::default_config().unwrap();
        assert_eq!(cfg.params.levels, 36);
        assert!((cfg.params.t_b - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(cfg.params.fills, vec![0.56, 0.84]);
        assert!(cfg.sweep.is_some());
    }

    #[test]
    fn empty_config_uses_defaults() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg.params, RunConfig::default_config().unwrap().params);
        assert!(cfg.sweep.is_none());
    }

    #[test]
    fn unknown_sweep_parameter_lists_whitelist() {
        let err = RunConfig::parse("[sweep]\nparameter = \"omega\"\nstart = 0\nstop = 1\ncount = 3\n").unwrap_err();
        let msg = err.to_string();
        assert_eq!(err.exit_code(), 2);
        for name in ["T_B", "mu_B", "R_I", "C_G", "C_S", "kappa", "theta", "Q", "N", "V_SS"] {
            assert!(msg.contains(name), "{msg}");
        }
    }

    #[test]
    fn sweep_count_must_be_two_or_more() {
        assert!(RunConfig::parse("[sweep]\nparameter = \"R_I\"\nstart = 0\nstop = 1\ncount = 1\n").is_err());
    }

    #[test]
    fn si_suffixes_convert() {
        let text = "[oscillator]\nN = 10\nomega0 = \"100 Hz\"\nmass = \"87 u\"\n[battery]\nT_B = \"4.8 nK\"\n";
        let cfg = RunConfig::parse(text).unwrap();
        let omega0 = 2.0 * std::f64::consts::PI * 100.0;
        let expect = 4.8e-9 * matteron::units::BOLTZMANN_SI / (matteron::units::HBAR_SI * omega0);
        assert!((cfg.params.t_b - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn si_suffix_without_scales_is_rejected() {
        assert!(RunConfig::parse("[battery]\nT_B = \"4.8 nK\"\n").is_err());
    }

    #[test]
    fn bad_fill_list_rejected() {
        assert!(RunConfig::parse("[states]\nfill = []\n").is_err());
        assert!(RunConfig::parse("[states]\nfill = [0.5, -0.1]\n").is_err());
    }

    #[test]
    fn sweep_values_hit_endpoints() {
        let s = Sweep {
            parameter: SweepParameter::RI,
            start: 0.0,
            stop: 0.3,
            count: 4,
        };
        let v = s.values();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.3);
    }

    #[test]
    fn integer_sweep_of_levels() {
        let p = RunConfig::default_config().unwrap().params;
        assert_eq!(p.with(SweepParameter::N, 12.0).unwrap().levels, 12);
        assert!(p.with(SweepParameter::N, 12.5).is_err());
    }
}
