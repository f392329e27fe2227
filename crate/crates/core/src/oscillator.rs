//! Harmonic-oscillator basis, truncated coherent states and their densities.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{invalid, require_non_negative, Result};
use crate::quadrature::GaussHermite;
use crate::summation::{ln_factorials, log_sum_exp, CompensatedSum};
use crate::units::OscillatorConfig;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Dimensionless eigenfunctions `ψ̃_0(x̃) ..= ψ̃_max(x̃)`.
///
/// The Gaussian rides inside the normalized recurrence, so no factorial or
/// `H_n` is ever formed and high orders stay finite.
pub fn hermite_functions(max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if max >= 1 {
        out.push(SQRT_2 * x * out[0]);
    }
    for n in 1..max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Eigenfunction `ψ_n(x)` in the units of `cfg`.
pub fn eigenfunction(n: usize, x: f64, cfg: &OscillatorConfig) -> f64 {
    let xt = cfg.to_dimensionless_length(x);
    hermite_functions(n, xt)[n] / cfg.length_scale().sqrt()
}

/// Gauss–Hermite integration of products of basis functions.
///
/// Node count is `max(64, 2N+16)`, raised further if a requested product has
/// higher polynomial degree than the rule integrates exactly.
#[derive(Debug, Clone)]
pub struct BasisQuadrature {
    rule: GaussHermite,
}

impl BasisQuadrature {
    pub fn for_levels(levels: usize) -> Self {
        Self::with_nodes(Self::default_nodes(levels))
    }

    pub fn with_nodes(nodes: usize) -> Self {
        Self {
            rule: GaussHermite::new(nodes),
        }
    }

    pub fn default_nodes(levels: usize) -> usize {
        (2 * levels + 16).max(64)
    }

    pub fn nodes(&self) -> usize {
        self.rule.len()
    }

    /// `∫ Π_k ψ̃_{i_k}(x̃) dx̃` in oscillator units.
    ///
    /// With `p` factors the Gaussian is `e^{-p x̃²/2}`; substituting
    /// `y = x̃·√(p/2)` turns it into the Gauss–Hermite weight.
    pub fn product(&self, indices: &[usize]) -> f64 {
        if indices.is_empty() {
            return 0.0;
        }
        let degree: usize = indices.iter().sum();
        let rule = if degree / 2 + 1 > self.rule.len() {
            std::borrow::Cow::Owned(GaussHermite::new(degree / 2 + 1))
        } else {
            std::borrow::Cow::Borrowed(&self.rule)
        };
        let max = *indices.iter().max().unwrap();
        let scale = (indices.len() as f64 / 2.0).sqrt();
        let total = rule.integrate_gaussian(|y| {
            let psi = hermite_functions(max, y / scale);
            indices.iter().map(|&i| psi[i]).product::<f64>()
        });
        total / scale
    }
}

/// `ln Σ_{n=0}^{N} |α|^{2n}/n!`.
pub(crate) fn ln_partial_exponential(abs_alpha_sq: f64, levels: usize, ln_fact: &[f64]) -> f64 {
    if abs_alpha_sq == 0.0 {
        return 0.0;
    }
    let lx = abs_alpha_sq.ln();
    let logs: Vec<f64> = (0..=levels).map(|n| n as f64 * lx - ln_fact[n]).collect();
    log_sum_exp(&logs)
}

/// `ln C_N(α)`, i.e. minus the log of the Poisson probability `P(n ≤ N)`.
pub fn ln_normalization_cn(alpha: Complex64, levels: usize) -> f64 {
    let x = alpha.norm_sqr();
    let ln_fact = ln_factorials(levels);
    // the partial sum never exceeds e^{|α|²}; clamp rounding below zero
    (x - ln_partial_exponential(x, levels, &ln_fact)).max(0.0)
}

/// Normalization `C_N(α)` of the truncated coherent state,
/// `C_N⁻¹ = e^{-|α|²} Σ_{n=0}^{N} |α|^{2n}/n!`.
pub fn normalization_cn(alpha: Complex64, levels: usize) -> f64 {
    ln_normalization_cn(alpha, levels).exp()
}

/// Complex amplitudes over the Fock states `|0⟩ ..= |N⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coefficients: Vec<Complex64>,
    config: OscillatorConfig,
}

impl FockVector {
    /// Builds a state, normalizing the coefficients. The length must be `N+1`.
    pub fn new(coefficients: Vec<Complex64>, config: OscillatorConfig) -> Result<Self> {
        if coefficients.len() != config.levels + 1 {
            return Err(invalid(
                "coefficients",
                format!("expected {} entries, got {}", config.levels + 1, coefficients.len()),
            ));
        }
        let norm = coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .collect::<CompensatedSum>()
            .total()
            .sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("coefficients", "state has zero or non-finite norm"));
        }
        let coefficients = coefficients.into_iter().map(|c| c / norm).collect();
        Ok(Self {
            coefficients,
            config,
        })
    }

    pub fn ground(config: OscillatorConfig) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); config.levels + 1];
        coefficients[0] = Complex64::new(1.0, 0.0);
        Self {
            coefficients,
            config,
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn config(&self) -> &OscillatorConfig {
        &self.config
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .collect::<CompensatedSum>()
            .total()
    }

    /// `⟨self|other⟩` over the shared levels.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Free evolution by `t`: `c_n → c_n e^{-i(n+1/2)ω₀t}`.
    pub fn evolved(&self, t: f64) -> FockVector {
        let tau = self.config.to_dimensionless_time(t);
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64 + 0.5) * tau))
            .collect();
        FockVector {
            coefficients,
            config: self.config,
        }
    }

    /// Mean level occupation `⟨a†a⟩`.
    pub fn mean_level(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// Position mean and variance at time `t`, from ladder-operator sums.
    pub fn position_moments(&self, t: f64) -> (f64, f64) {
        let c = self.evolved(t).coefficients;
        let lowering: Complex64 = (0..c.len().saturating_sub(1))
            .map(|n| c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt())
            .sum();
        let lowering_sq: Complex64 = (0..c.len().saturating_sub(2))
            .map(|n| c[n].conj() * c[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt())
            .sum();
        let number = self.mean_level();
        let l = self.config.length_scale();
        let mean = SQRT_2 * lowering.re;
        let second = lowering_sq.re + number + 0.5;
        (mean * l, (second - mean * mean) * l * l)
    }
}

/// Truncated coherent state
/// `c_n = √C_N e^{-|α|²/2} αⁿ/√(n!)`, `n = 0..=N`.
///
/// Coefficients are formed in log magnitude so large `|α|` never overflows.
pub fn truncated_coherent_state(alpha: Complex64, cfg: &OscillatorConfig) -> FockVector {
    let levels = cfg.levels;
    if alpha.norm_sqr() == 0.0 {
        return FockVector::ground(*cfg);
    }
    let ln_fact = ln_factorials(levels);
    let (r, phase) = alpha.to_polar();
    let x = r * r;
    let ln_norm = ln_partial_exponential(x, levels, &ln_fact);
    let lr = r.ln();
    let coefficients = (0..=levels)
        .map(|n| {
            let magnitude = (n as f64 * lr - 0.5 * ln_fact[n] - 0.5 * ln_norm).exp();
            Complex64::from_polar(magnitude, n as f64 * phase)
        })
        .collect();
    FockVector {
        coefficients,
        config: *cfg,
    }
}

/// Amplitude with `|α|² = ratio·N`, real and positive.
pub fn amplitude_for_fill(ratio: f64, levels: usize) -> Result<f64> {
    require_non_negative("|alpha|^2/N", ratio)?;
    Ok((ratio * levels as f64).sqrt())
}

/// Time of maximal displacement for real positive α.
pub fn turnaround_time(_cfg: &OscillatorConfig) -> f64 {
    0.0
}

/// Time at which a real-α state crosses the well center, `π/(2ω₀)`.
pub fn center_time(cfg: &OscillatorConfig) -> f64 {
    FRAC_PI_2 / cfg.omega0
}

/// `|Σ c_n e^{-i(n+1/2)ω₀t} ψ_n(x)|²`.
pub fn position_density(state: &FockVector, x: f64, t: f64) -> f64 {
    let cfg = state.config;
    let psi = hermite_functions(cfg.levels, cfg.to_dimensionless_length(x));
    let tau = cfg.to_dimensionless_time(t);
    let amp: Complex64 = state
        .coefficients
        .iter()
        .zip(&psi)
        .enumerate()
        .map(|(n, (c, p))| c * Complex64::from_polar(*p, -(n as f64 + 0.5) * tau))
        .sum();
    amp.norm_sqr() / cfg.length_scale()
}

/// Density sampled on `xs`.
pub fn density_profile(state: &FockVector, xs: &[f64], t: f64) -> Vec<f64> {
    xs.iter().map(|&x| position_density(state, x, t)).collect()
}

/// Full width at half maximum of sampled density, with linear interpolation
/// at the crossings that bracket the tallest peak.
pub fn full_width_half_max(xs: &[f64], density: &[f64]) -> Option<f64> {
    let (peak, &max) = density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let half = 0.5 * max;
    let crossing = |i: usize, j: usize| {
        let (d0, d1) = (density[i], density[j]);
        xs[i] + (half - d0) / (d1 - d0) * (xs[j] - xs[i])
    };
    let left = (1..=peak).rev().find(|&i| density[i - 1] < half).map(|i| crossing(i - 1, i))?;
    let right = (peak..density.len() - 1)
        .find(|&i| density[i + 1] < half)
        .map(|i| crossing(i, i + 1))?;
    Some(right - left)
}

/// `M_g` particles sharing one displaced-ground-state orbital.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassiveState {
    pub alpha: Complex64,
    pub particles: f64,
}

impl MassiveState {
    pub fn new(alpha: Complex64, particles: f64) -> Result<Self> {
        require_non_negative("Mg", particles)?;
        Ok(Self { alpha, particles })
    }
}

/// `M_g(|α|² + 1/2)ħω₀`.
pub fn massive_state_energy(state: &MassiveState, cfg: &OscillatorConfig) -> f64 {
    state.particles * (state.alpha.norm_sqr() + 0.5) * cfg.quantum()
}
