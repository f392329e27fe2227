//! Classical matterwave emitted into the drain, and a mass-spring detector.
//!
//! The potential-like field `F` (acceleration) and current-like field `I`
//! (momentum) both oscillate at the gate frequency ω₀, not at the particle
//! frequency ω_d; they are tied by the real impedance `Z = n²ω₀/2m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, require_non_negative, require_positive, Result};
use crate::units::OscillatorConfig;

/// Relative tolerance of the internal identity checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// `ω_d = (N + 5/2)ω₀ + ΔV/ħ`, with ΔV the drop from the transistor level to
/// the drain floor.
pub fn drain_frequency(cfg: &OscillatorConfig, potential_drop: f64) -> f64 {
    (cfg.levels as f64 + 2.5) * cfg.omega0 + potential_drop / cfg.hbar
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrainWaveSpec {
    pub omega0: f64,
    /// Particle frequency ω_d = E_SD/ħ.
    pub omega_d: f64,
    pub mass: f64,
    pub hbar: f64,
    /// Drain particle current I_d.
    pub current: f64,
}

impl DrainWaveSpec {
    pub fn new(omega0: f64, omega_d: f64, mass: f64, hbar: f64, current: f64) -> Result<Self> {
        require_positive("omega0", omega0)?;
        require_positive("mass", mass)?;
        require_positive("hbar", hbar)?;
        require_non_negative("I_d", current)?;
        if !(omega_d.is_finite() && omega_d >= omega0) {
            return Err(invalid(
                "omega_d",
                format!("must be >= omega0 = {omega0} (index n <= 1), got {omega_d}"),
            ));
        }
        Ok(Self {
            omega0,
            omega_d,
            mass,
            hbar,
            current,
        })
    }

    pub fn from_config(cfg: &OscillatorConfig, potential_drop: f64, current: f64) -> Result<Self> {
        Self::new(cfg.omega0, drain_frequency(cfg, potential_drop), cfg.mass, cfg.hbar, current)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatterwaveParams {
    pub omega0: f64,
    pub omega_d: f64,
    /// Index n = √(ω₀/ω_d).
    pub index: f64,
    /// Z = n²Z₀.
    pub impedance: f64,
    /// Z₀ = ω₀/2m.
    pub reference_impedance: f64,
    pub wavenumber: f64,
    pub group_velocity: f64,
    /// F₀ = Z·I₀.
    pub potential_amplitude: f64,
    /// I₀ = (2/n)√(mħI_d).
    pub current_amplitude: f64,
    /// λ_m = 2π/k_m.
    pub wavelength: f64,
    /// λ_d = n·λ_m.
    pub lambda_d: f64,
    /// Kinematic de Broglie wavelength `2πħ/√(2mħω_d)` of the drain particles.
    pub de_broglie_wavelength: f64,
    /// P_d = I_dħω₀.
    pub power: f64,
    /// P_Tot = I_dħω_d.
    pub total_power: f64,
    /// p = √(2mħω₀).
    pub matteron_momentum: f64,
    /// k₀ = p/ħ = 2k_m/n.
    pub matteron_wavenumber: f64,
}

fn check_identity(name: &'static str, lhs: f64, rhs: f64) -> Result<()> {
    let scale = lhs.abs().max(rhs.abs());
    if (lhs - rhs).abs() <= IDENTITY_TOLERANCE * scale {
        Ok(())
    } else {
        Err(invalid(name, format!("identity violated: {lhs} vs {rhs}")))
    }
}

pub fn wave_params(spec: &DrainWaveSpec) -> Result<MatterwaveParams> {
    let DrainWaveSpec {
        omega0,
        omega_d,
        mass,
        hbar,
        current,
    } = *spec;
    let index = (omega0 / omega_d).sqrt();
    let reference_impedance = omega0 / (2.0 * mass);
    let impedance = index * index * reference_impedance;
    let wavenumber = index * (mass * omega0 / (2.0 * hbar)).sqrt();
    let group_velocity = (2.0 * hbar * omega0 / mass).sqrt() / index;
    let current_amplitude = 2.0 / index * (mass * hbar * current).sqrt();
    let potential_amplitude = impedance * current_amplitude;
    let wavelength = 2.0 * PI / wavenumber;
    let power = current * hbar * omega0;
    let matteron_momentum = (2.0 * mass * hbar * omega0).sqrt();
    let params = MatterwaveParams {
        omega0,
        omega_d,
        index,
        impedance,
        reference_impedance,
        wavenumber,
        group_velocity,
        potential_amplitude,
        current_amplitude,
        wavelength,
        lambda_d: index * wavelength,
        de_broglie_wavelength: 2.0 * PI * hbar / (2.0 * mass * hbar * omega_d).sqrt(),
        power,
        total_power: current * hbar * omega_d,
        matteron_momentum,
        matteron_wavenumber: 2.0 * wavenumber / index,
    };
    check_identity("P_d", 0.5 * potential_amplitude * current_amplitude, power)?;
    check_identity("k_m v_m", wavenumber * group_velocity, omega0)?;
    check_identity("p_matteron", hbar * params.matteron_wavenumber, matteron_momentum)?;
    Ok(params)
}

/// `(F, I)` at position `z` and time `t`, both `∝ cos(k_m z − ω₀t)`.
pub fn wave_field(params: &MatterwaveParams, z: f64, t: f64) -> (f64, f64) {
    let phase = (params.wavenumber * z - params.omega0 * t).cos();
    (params.potential_amplitude * phase, params.current_amplitude * phase)
}

/// Time-averaged `|I|²` in front of a perfectly reflecting barrier at
/// `barrier_at`: incident plus π-shifted reflected wave,
/// `2I₀² sin²(k_m(barrier_at − z))`.
pub fn standing_wave(params: &MatterwaveParams, z: f64, barrier_at: f64) -> Result<f64> {
    if z > barrier_at {
        return Err(invalid("z", format!("must not lie past the barrier at {barrier_at}")));
    }
    let s = (params.wavenumber * (barrier_at - z)).sin();
    Ok(2.0 * params.current_amplitude.powi(2) * s * s)
}

/// Positions of the standing-wave nodes `barrier_at − jπ/k_m`, `j = 0..count`.
pub fn standing_wave_nodes(params: &MatterwaveParams, barrier_at: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| barrier_at - j as f64 * PI / params.wavenumber)
        .collect()
}

/// Mirror on a spring, driven by the incident matterwave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector {
    pub spring_constant: f64,
    pub mass: f64,
    /// Amplitude decay rate γ in `ẍ + γẋ + ω_s²x = f(t)/m_s`.
    pub damping: f64,
    pub duration: f64,
}

impl Detector {
    pub fn new(spring_constant: f64, mass: f64, damping: f64, duration: f64) -> Result<Self> {
        require_positive("k_s", spring_constant)?;
        require_positive("m_s", mass)?;
        require_non_negative("damping", damping)?;
        require_positive("duration", duration)?;
        Ok(Self {
            spring_constant,
            mass,
            damping,
            duration,
        })
    }

    /// Builds a detector tuned to `omega_s`.
    pub fn tuned(omega_s: f64, mass: f64, damping: f64, duration: f64) -> Result<Self> {
        require_positive("omega_s", omega_s)?;
        Self::new(mass * omega_s * omega_s, mass, damping, duration)
    }

    /// ω_s = √(k_s/m_s).
    pub fn resonance(&self) -> f64 {
        (self.spring_constant / self.mass).sqrt()
    }

    /// Half width of the absorption peak in ω_s: damping plus the
    /// exposure-time limit, `γ/2 + 1/T`.
    pub fn linewidth(&self) -> f64 {
        0.5 * self.damping + 1.0 / self.duration
    }
}

/// Drive force amplitude on an ideal mirror: `I₀·v_m`.
pub fn drive_amplitude(params: &MatterwaveParams) -> f64 {
    params.current_amplitude * params.group_velocity
}

/// `(e^{zT} − 1)/z`, continuous through `z = 0`.
fn exp_integral(z: Complex64, duration: f64) -> Complex64 {
    let zt = z * duration;
    if zt.norm() < 1e-5 {
        duration * (1.0 + zt / 2.0 + zt * zt / 6.0)
    } else {
        ((zt).exp() - 1.0) / z
    }
}

/// Energy delivered by the drive `F cos(ω₀t)` to a detector starting at rest,
/// `W = ∫₀ᵀ F cos(ω₀t) ẋ(t) dt`, from the exact solution of the linear
/// oscillator.
pub fn detector_response(params: &MatterwaveParams, detector: &Detector) -> f64 {
    let force = drive_amplitude(params);
    if force == 0.0 {
        return 0.0;
    }
    let w = params.omega0;
    let gamma = detector.damping;
    let t_end = detector.duration;
    let mut ws = detector.resonance();
    // exact resonance without loss, or critical damping, are removable singularities
    let nudge = |ws: f64| ws * (1.0 + 1e-9);
    if gamma == 0.0 && (ws - w).abs() <= 1e-12 * w {
        ws = nudge(ws);
    }
    if (ws - 0.5 * gamma).abs() <= 1e-12 * ws.max(gamma) {
        ws = nudge(ws);
    }
    let i = Complex64::i();
    let x = Complex64::new(force / detector.mass, 0.0) / Complex64::new(ws * ws - w * w, gamma * w);
    let disc = Complex64::new(0.25 * gamma * gamma - ws * ws, 0.0).sqrt();
    let r_plus = -0.5 * gamma + disc;
    let r_minus = -0.5 * gamma - disc;
    // homogeneous part cancels x_p(0) = Re X and ẋ_p(0) = −ω Im X
    let s = Complex64::new(-x.re, 0.0);
    let d = Complex64::new(w * x.im, 0.0);
    let a = (d - r_minus * s) / (r_plus - r_minus);
    let b = s - a;

    let driven = i * w * x * 0.5 * (exp_integral(2.0 * i * w, t_end) + t_end);
    let transient = |c: Complex64, r: Complex64| {
        c * r * 0.5 * (exp_integral(r + i * w, t_end) + exp_integral(r - i * w, t_end))
    };
    force * (driven + transient(a, r_plus) + transient(b, r_minus)).re
}

/// Steady-state absorbed power
/// `(F²/2m_s)·γω₀²/((ω_s² − ω₀²)² + γ²ω₀²)`, the long-exposure Lorentzian.
pub fn steady_state_power(params: &MatterwaveParams, detector: &Detector) -> f64 {
    let force = drive_amplitude(params);
    let w = params.omega0;
    let ws = detector.resonance();
    let gamma = detector.damping;
    force * force / (2.0 * detector.mass) * gamma * w * w / ((ws * ws - w * w).powi(2) + (gamma * w).powi(2))
}
