//! Classical DC equivalent circuit of the transistor oscillator.
//!
//! Units follow the particle-current analogy: potentials are energies,
//! currents are particles per time, capacitance is particles per energy and
//! resistance is energy·time per particle².

use crate::coupling::{transmission_rate, TransistorSpec};
use crate::error::{invalid, require_non_negative, require_positive, Error, Result};
use crate::units::OscillatorConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatterySpec {
    /// Battery chemical potential μ_B.
    pub mu_b: f64,
    /// Thermal energy k_B·T_B of the battery particles.
    pub thermal_energy: f64,
    /// Source bias V_SS. Does not enter the drain current.
    pub v_ss: f64,
    /// Internal resistance R_I; either sign is allowed.
    pub r_i: f64,
    /// Source capacitance C_S.
    pub c_s: f64,
}

impl BatterySpec {
    pub fn new(mu_b: f64, thermal_energy: f64, v_ss: f64, r_i: f64, c_s: f64) -> Result<Self> {
        require_positive("mu_B", mu_b)?;
        require_positive("T_B", thermal_energy)?;
        require_positive("C_S", c_s)?;
        if !v_ss.is_finite() {
            return Err(invalid("V_SS", "must be finite"));
        }
        if !r_i.is_finite() {
            return Err(invalid("R_I", "must be finite"));
        }
        Ok(Self {
            mu_b,
            thermal_energy,
            v_ss,
            r_i,
            c_s,
        })
    }
}

/// Which transistor normal mode carries the drain current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeSign {
    Symmetric,
    #[default]
    Antisymmetric,
}

impl ModeSign {
    pub fn as_f64(self) -> f64 {
        match self {
            ModeSign::Symmetric => 1.0,
            ModeSign::Antisymmetric => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCircuitSpec {
    /// Gate capacitance C_G.
    pub c_g: f64,
    /// Quality factor; `None` means no oscillator loss.
    pub quality: Option<f64>,
    /// χ₀ = χ(0) from the coupling table.
    pub chi0: f64,
    pub transistor: TransistorSpec,
    pub mode: ModeSign,
}

impl GateCircuitSpec {
    pub fn new(c_g: f64, quality: Option<f64>, chi0: f64, transistor: TransistorSpec) -> Result<Self> {
        require_positive("C_G", c_g)?;
        if let Some(q) = quality {
            require_positive("Q", q)?;
        }
        require_non_negative("chi0", chi0)?;
        Ok(Self {
            c_g,
            quality,
            chi0,
            transistor,
            mode: ModeSign::default(),
        })
    }

    pub fn with_mode(self, mode: ModeSign) -> Self {
        Self { mode, ..self }
    }

    /// Γ_osc = ω₀/Q, zero for an ideal oscillator.
    pub fn gamma_osc(&self) -> f64 {
        match self.quality {
            Some(q) if q.is_finite() => self.transistor.config.omega0 / q,
            _ => 0.0,
        }
    }
}

/// Solved operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitState {
    /// Probability ϱ that a battery particle enters through the lower transistor state.
    pub rho: f64,
    pub gamma_t: f64,
    /// Bias current I₀ without coupling.
    pub i_0: f64,
    pub chi0: f64,
    pub v0: f64,
    pub g_m: f64,
    /// Current gain β; NaN when Γ_T = 0.
    pub beta: f64,
    /// Closed-form steady-state drain current.
    pub i_dss: f64,
    /// Same current from the damped fixed-point loop.
    pub i_dss_fixed_point: f64,
    pub fixed_point_iterations: usize,
    /// Driving potential μ = μ_B + ϱħω₀.
    pub mu: f64,
    pub mu_s: f64,
    pub mu_g: f64,
    /// Gate-source resistance; −∞ when no current flows.
    pub r_gs: f64,
    pub p_b: f64,
    pub p_g: f64,
    pub p_osc: f64,
    pub alpha_sq: f64,
    pub saturated: bool,
    pub mode: ModeSign,
}

/// ϱ = 1 − exp(−ħω₀/k_BT_B).
pub fn rho(battery: &BatterySpec, cfg: &OscillatorConfig) -> Result<f64> {
    require_positive("T_B", battery.thermal_energy)?;
    Ok(-(-cfg.quantum() / battery.thermal_energy).exp_m1())
}

/// `I₀ = μ_B C_S Γ_T exp(−ħω₀/k_BT_B)`.
///
/// Assumes the bias current is small enough that the drop across `R_I` is
/// negligible.
pub fn bias_current(battery: &BatterySpec, gamma_t: f64, cfg: &OscillatorConfig) -> Result<f64> {
    require_non_negative("Gamma_T", gamma_t)?;
    require_positive("T_B", battery.thermal_energy)?;
    let boltzmann = (-cfg.quantum() / battery.thermal_energy).exp();
    Ok(battery.mu_b * battery.c_s * gamma_t * boltzmann)
}

/// Phase-dependent coupling potential `V(φ) = −V₀ cos φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPotential {
    pub v0: f64,
}

impl CouplingPotential {
    pub fn at(&self, phi: f64) -> f64 {
        -self.v0 * phi.cos()
    }
}

/// `V₀ ≈ χ₀√N·C_G·μ_g`.
pub fn coupling_potential(chi0: f64, levels: usize, c_g: f64, mu_g: f64) -> Result<CouplingPotential> {
    require_non_negative("mu_g", mu_g)?;
    Ok(CouplingPotential {
        v0: chi0 * (levels as f64).sqrt() * c_g * mu_g,
    })
}

/// Phase `arccos(δE/V₀) ∈ [0, π]` at which a particle detuned by δE joins the drain current.
pub fn matched_phase(delta_e: f64, v0: f64) -> Result<f64> {
    if !(v0 > 0.0) || delta_e.abs() > v0 || !delta_e.is_finite() {
        return Err(Error::OutOfBand { delta_e, v0 });
    }
    Ok((delta_e / v0).clamp(-1.0, 1.0).acos())
}

/// `g_m = χ₀√N C_G C_S μ_B/ħ`.
pub fn transconductance(chi0: f64, levels: usize, c_g: f64, c_s: f64, mu_b: f64, hbar: f64) -> f64 {
    chi0 * (levels as f64).sqrt() * c_g * c_s * mu_b / hbar
}

/// Drain current carried by the coupling band, `μ_B C_S V₀/ħ`.
pub fn drain_current_from_coupling(mu_b: f64, c_s: f64, v0: f64, hbar: f64) -> f64 {
    mu_b * c_s * v0 / hbar
}

/// `β = V₀/((1−ϱ)ħΓ_T)`.
pub fn current_gain(v0: f64, gamma_t: f64, rho: f64, hbar: f64) -> Result<f64> {
    if !(gamma_t > 0.0) {
        return Err(invalid("Gamma_T", format!("current gain needs Γ_T > 0, got {gamma_t}")));
    }
    if !(rho < 1.0) {
        return Err(invalid("rho", format!("current gain needs ϱ < 1, got {rho}")));
    }
    Ok(v0 / ((1.0 - rho) * hbar * gamma_t))
}

/// Result of the damped self-consistency loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub current: f64,
    pub iterations: usize,
    pub damping: f64,
}

pub const MAX_ITERATIONS: usize = 10_000;
const INITIAL_DAMPING: f64 = 0.5;
const STEP_TOLERANCE: f64 = 1e-14;
const CONSISTENCY_TOLERANCE: f64 = 1e-10;

/// Iterates μ_g → V₀ → I_d → μ_s → μ_g from zero current.
///
/// Each pass rebuilds V₀ from the current gate potential. The damping factor
/// starts at 0.5 and is halved whenever the residual grows, which keeps the
/// loop contracting for any loop gain `g_m R_I > −1`.
pub fn fixed_point_drain_current(
    battery: &BatterySpec,
    gate: &GateCircuitSpec,
    cfg: &OscillatorConfig,
) -> Result<FixedPoint> {
    let rho = rho(battery, cfg)?;
    let quantum = cfg.quantum();
    let levels = gate.transistor.config.levels;
    let gate_potential = |i: f64| {
        let mu_s = battery.mu_b - i * battery.r_i;
        mu_s + rho * quantum
    };
    let next = |i: f64| {
        let v0 = gate.chi0 * (levels as f64).sqrt() * gate.c_g * gate_potential(i);
        drain_current_from_coupling(battery.mu_b, battery.c_s, v0, cfg.hbar)
    };
    let gain = gate.chi0 * (levels as f64).sqrt() * gate.c_g * battery.mu_b * battery.c_s / cfg.hbar;
    let mut current = 0.0;
    let mut damping = INITIAL_DAMPING;
    let mut last_residual = f64::INFINITY;
    let mut last_sign = 0.0;
    let mut last_step = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        let residual = next(current) - current;
        if !residual.is_finite() {
            break;
        }
        // remaining error of a linearly converging iteration ≈ step·q/(1 − q)
        let ratio = residual.abs() / last_residual;
        let step = (damping * residual).abs();
        let error_bound = if ratio < 1.0 { step / (1.0 - ratio) } else { f64::INFINITY };
        // rounding floor of the map itself; below it the iterate cannot improve
        let noise = 4.0
            * f64::EPSILON
            * (gain * (battery.mu_b.abs() + (current * battery.r_i).abs() + rho * quantum) + current.abs());
        if error_bound <= STEP_TOLERANCE * current.abs() || residual.abs() <= noise {
            return Ok(FixedPoint {
                current: current + damping * residual,
                iterations: iteration,
                damping,
            });
        }
        // growth, or a slowly decaying sign flip, means the damped step overshoots
        let flipped = residual.signum() != last_sign;
        if residual.abs() > last_residual || (flipped && ratio > 0.5) {
            damping *= 0.5;
        }
        last_residual = residual.abs();
        last_sign = residual.signum();
        current += damping * residual;
        last_step = (damping * residual / current).abs();
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        last_step,
        damping,
    })
}

/// Steady state of the closed loop,
/// `I_dss = g_m μ/(1 + g_m R_I)` with `μ = μ_B + ϱħω₀`.
///
/// The fixed-point loop runs alongside and must agree with the closed form to
/// 1e-10 relative.
pub fn solve_steady_state(
    battery: &BatterySpec,
    gate: &GateCircuitSpec,
    cfg: &OscillatorConfig,
) -> Result<CircuitState> {
    let rho = rho(battery, cfg)?;
    let quantum = cfg.quantum();
    let levels = gate.transistor.config.levels;
    let g_m = transconductance(gate.chi0, levels, gate.c_g, battery.c_s, battery.mu_b, cfg.hbar);
    let loop_gain = 1.0 + g_m * battery.r_i;
    if !(loop_gain > 0.0) {
        return Err(Error::UnstableBias { loop_gain });
    }
    let mu = battery.mu_b + rho * quantum;
    let i_dss = g_m * mu / loop_gain;

    let fixed = fixed_point_drain_current(battery, gate, cfg)?;
    let scale = i_dss.abs().max(fixed.current.abs());
    if scale > 0.0 && (i_dss - fixed.current).abs() > CONSISTENCY_TOLERANCE * scale {
        return Err(Error::Inconsistent {
            closed_form: i_dss,
            fixed_point: fixed.current,
        });
    }

    let mu_s = battery.mu_b - i_dss * battery.r_i;
    let mu_g = mu_s + rho * quantum;
    let v0 = coupling_potential(gate.chi0, levels, gate.c_g, mu_g.max(0.0))?.v0;
    let gamma_t = transmission_rate(&gate.transistor).rate;
    let i_0 = bias_current(battery, gamma_t, cfg)?;
    // 1 − ϱ taken as the Boltzmann factor itself, which stays accurate as ϱ → 1
    let boltzmann = (-quantum / battery.thermal_energy).exp();
    let beta = if gamma_t > 0.0 && boltzmann > 0.0 {
        v0 / (boltzmann * cfg.hbar * gamma_t)
    } else {
        f64::NAN
    };
    let r_gs = if i_dss > 0.0 {
        -rho * quantum / i_dss
    } else {
        f64::NEG_INFINITY
    };

    let mut state = CircuitState {
        rho,
        gamma_t,
        i_0,
        chi0: gate.chi0,
        v0,
        g_m,
        beta,
        i_dss,
        i_dss_fixed_point: fixed.current,
        fixed_point_iterations: fixed.iterations,
        mu,
        mu_s,
        mu_g,
        r_gs,
        p_b: i_dss * i_dss * battery.r_i,
        p_g: -rho * quantum * i_dss,
        p_osc: 0.0,
        alpha_sq: levels as f64,
        saturated: false,
        mode: gate.mode,
    };
    let limit = q_limited_amplitude(&state, gate, cfg);
    state.alpha_sq = limit.alpha_sq;
    state.p_osc = limit.p_osc;
    state.saturated = limit.saturated;
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeLimit {
    pub alpha_sq: f64,
    pub p_osc: f64,
    /// True when loss holds the amplitude below `N`.
    pub saturated: bool,
}

/// Oscillation amplitude sustained against a finite quality factor.
///
/// Gate cooling keeps the full amplitude `|α|² = N` while
/// `ϱ ≥ (Γ_osc/ω₀) μ_g C_G N`; below that `|α|² = ϱ/((Γ_osc/ω₀) μ_g C_G)`.
/// `P_osc = Γ_osc μ_g C_G |α|² ħω₀` at the returned amplitude.
pub fn q_limited_amplitude(state: &CircuitState, gate: &GateCircuitSpec, cfg: &OscillatorConfig) -> AmplitudeLimit {
    let levels = gate.transistor.config.levels as f64;
    let gamma_osc = gate.gamma_osc();
    let load = gamma_osc / cfg.omega0 * state.mu_g * gate.c_g;
    let (alpha_sq, saturated) = if state.rho >= load * levels {
        (levels, false)
    } else {
        ((state.rho / load).min(levels), true)
    };
    AmplitudeLimit {
        alpha_sq,
        p_osc: gamma_osc * state.mu_g * gate.c_g * alpha_sq * cfg.quantum(),
        saturated,
    }
}
