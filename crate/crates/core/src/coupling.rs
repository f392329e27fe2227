//! Transistor modes and their coupling to the oscillating gate condensate.
//!
//! The two transistor modes `|SG⟩`, `|SD⟩` sit at gate levels `N+1`, `N+2`.
//! Inside the gate region only their harmonic-oscillator content
//! `cos θ·ψ_{N+1}`, `cos θ·ψ_{N+2}` survives, which is what the overlap
//! factors `U_n` integrate against.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{invalid, require_non_negative, require_positive, Error, Result};
use crate::oscillator::{ln_partial_exponential, BasisQuadrature};
use crate::summation::{ln_factorials, log_sum_exp};
use crate::units::OscillatorConfig;

/// `sin²κ` above which the small-transmission picture is questionable.
pub const STRONG_TRANSMISSION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransistorSpec {
    /// Mixing angle θ shared by both transistor modes.
    pub theta: f64,
    /// Amplitude transmission angle κ; `sin κ` couples `|SD⟩` to the drain.
    pub kappa: f64,
    /// Trial rate γ.
    pub gamma: f64,
    pub config: OscillatorConfig,
}

impl TransistorSpec {
    pub fn new(theta: f64, kappa: f64, gamma: f64, config: OscillatorConfig) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(invalid("theta", format!("must lie in [0, π/2], got {theta}")));
        }
        require_non_negative("kappa", kappa)?;
        require_positive("gamma", gamma)?;
        Ok(Self {
            theta,
            kappa,
            gamma,
            config,
        })
    }

    /// A message when `sin²κ` exceeds [`STRONG_TRANSMISSION`].
    pub fn transmission_warning(&self) -> Option<String> {
        let t = self.kappa.sin().powi(2);
        (t > STRONG_TRANSMISSION).then(|| {
            format!("sin²κ = {t:.3} exceeds {STRONG_TRANSMISSION}; small-transmission results are unreliable")
        })
    }
}

/// `η = (4π/A)·ħ²a_s/m`.
pub fn eta_coupling(scattering_length: f64, mass: f64, area: f64, hbar: f64) -> Result<f64> {
    require_positive("a_s", scattering_length)?;
    require_positive("mass", mass)?;
    require_positive("area", area)?;
    require_positive("hbar", hbar)?;
    Ok(4.0 * PI / area * hbar * hbar * scattering_length / mass)
}

fn overlap_with(quad: &BasisQuadrature, n: usize, spec: &TransistorSpec) -> Result<f64> {
    let levels = spec.config.levels;
    if !(1..=levels).contains(&n) {
        return Err(Error::LevelOutOfRange { index: n, max: levels });
    }
    let cos2 = spec.theta.cos().powi(2);
    let integral = quad.product(&[n - 1, n, levels + 2, levels + 1]);
    Ok(cos2 * integral / spec.config.length_scale())
}

/// Overlap factor `U_n = cos²θ ∫ψ_{n−1}ψ_nψ_{N+2}ψ_{N+1} dx`.
pub fn overlap_un(n: usize, spec: &TransistorSpec) -> Result<f64> {
    overlap_with(&BasisQuadrature::for_levels(spec.config.levels), n, spec)
}

/// How the amplitude series in χ is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChiNormalization {
    /// Plain coherent-state weight `e^{-|α|²}` (truncation normalization `C_N → 1`).
    #[default]
    Coherent,
    /// Include `C_N(α)`, renormalizing the truncated state exactly.
    Truncated,
}

/// Precomputed `U_1 ..= U_N` and the χ evaluator built on them.
#[derive(Debug, Clone)]
pub struct CouplingTable {
    overlaps: Vec<f64>,
    ln_abs_overlaps: Vec<f64>,
    ln_fact: Vec<f64>,
    eta: f64,
    chi0: f64,
    normalization: ChiNormalization,
    spec: TransistorSpec,
}

impl CouplingTable {
    pub fn new(spec: TransistorSpec, eta: f64) -> Result<Self> {
        Self::with_normalization(spec, eta, ChiNormalization::default())
    }

    pub fn with_normalization(spec: TransistorSpec, eta: f64, normalization: ChiNormalization) -> Result<Self> {
        if !eta.is_finite() {
            return Err(invalid("eta", "must be finite"));
        }
        let levels = spec.config.levels;
        let quad = BasisQuadrature::for_levels(levels);
        let overlaps = (1..=levels)
            .map(|n| overlap_with(&quad, n, &spec))
            .collect::<Result<Vec<_>>>()?;
        let ln_abs_overlaps = overlaps.iter().map(|u| u.abs().ln()).collect();
        let chi0 = 4.0 * eta * overlaps[0].abs();
        Ok(Self {
            overlaps,
            ln_abs_overlaps,
            ln_fact: ln_factorials(levels),
            eta,
            chi0,
            normalization,
            spec,
        })
    }

    /// `U_n` for `n = 1..=N` (index 0 holds `U_1`).
    pub fn overlaps(&self) -> &[f64] {
        &self.overlaps
    }

    pub fn overlap(&self, n: usize) -> Result<f64> {
        self.overlaps
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or(Error::LevelOutOfRange {
                index: n,
                max: self.overlaps.len(),
            })
    }

    pub fn levels(&self) -> usize {
        self.overlaps.len()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `χ(0) = 4η|U_1|`.
    pub fn chi0(&self) -> f64 {
        self.chi0
    }

    pub fn normalization(&self) -> ChiNormalization {
        self.normalization
    }

    pub fn spec(&self) -> &TransistorSpec {
        &self.spec
    }

    /// Coupling factor
    /// `χ(α) = 4η·w(α)·Σ_{n=1}^{N} |α|^{2(n−1)}/√(n!(n−1)!)·|U_n|`,
    /// where `w = e^{-|α|²}` or `C_N(α)e^{-|α|²}` per the normalization.
    /// Terms are combined in the log domain.
    pub fn chi(&self, alpha: Complex64) -> f64 {
        let modulus = alpha.norm();
        let x = modulus * modulus;
        if x == 0.0 {
            return self.chi0;
        }
        let lx = x.ln();
        let logs: Vec<f64> = (1..=self.levels())
            .map(|n| {
                (n - 1) as f64 * lx - 0.5 * (self.ln_fact[n] + self.ln_fact[n - 1]) + self.ln_abs_overlaps[n - 1]
            })
            .collect();
        let ln_series = log_sum_exp(&logs);
        if ln_series == f64::NEG_INFINITY {
            return 0.0;
        }
        let ln_weight = match self.normalization {
            ChiNormalization::Coherent => x,
            ChiNormalization::Truncated => ln_partial_exponential(x, self.levels(), &self.ln_fact),
        };
        4.0 * self.eta * (ln_series - ln_weight).exp()
    }

    /// `|α|·χ(α)` for real amplitude `|α|`.
    pub fn coupling_energy_factor(&self, abs_alpha: f64) -> f64 {
        abs_alpha * self.chi(Complex64::new(abs_alpha, 0.0))
    }
}

/// Free-function form of [`CouplingTable::chi`].
pub fn chi(alpha: Complex64, table: &CouplingTable) -> f64 {
    table.chi(alpha)
}

/// Maximum of `|α|χ(α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPeak {
    pub alpha: f64,
    pub value: f64,
    /// `value / (χ₀√N)`.
    pub ratio_to_estimate: f64,
}

const PEAK_SCAN_POINTS: usize = 41;
const PEAK_TOLERANCE: f64 = 1e-9;

/// Locates the maximizer of `|α||χ(α)|` on `[0, 2√N]`: coarse 41-point scan,
/// then golden-section refinement of the bracketing cell.
pub fn coupling_peak(table: &CouplingTable) -> CouplingPeak {
    let upper = 2.0 * (table.levels() as f64).sqrt();
    let f = |a: f64| table.coupling_energy_factor(a).abs();
    let step = upper / (PEAK_SCAN_POINTS - 1) as f64;
    let best = (0..PEAK_SCAN_POINTS)
        .map(|i| (i, f(step * i as f64)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut lo = step * best.saturating_sub(1) as f64;
    let mut hi = (step * (best + 1) as f64).min(upper);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > PEAK_TOLERANCE {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let alpha = 0.5 * (lo + hi);
    let value = table.coupling_energy_factor(alpha);
    let estimate = table.chi0() * (table.levels() as f64).sqrt();
    CouplingPeak {
        alpha,
        value,
        ratio_to_estimate: value / estimate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionInput {
    pub alpha: Complex64,
    /// Relative phase φ between the dipole and the symmetric normal mode.
    pub phi: f64,
    /// Gate particle number `M_g`.
    pub gate_particles: f64,
    pub m_plus: f64,
    pub m_minus: f64,
}

impl InteractionInput {
    pub fn new(alpha: Complex64, phi: f64, gate_particles: f64, m_plus: f64, m_minus: f64) -> Result<Self> {
        require_non_negative("Mg", gate_particles)?;
        require_non_negative("M+", m_plus)?;
        require_non_negative("M-", m_minus)?;
        Ok(Self {
            alpha,
            phi,
            gate_particles,
            m_plus,
            m_minus,
        })
    }
}

/// Gate–transistor interaction energy
/// `χ|α|M_g[cos φ(M₊−M₋) − i(κ²/2) sin φ(√(M₊(M₋+1)) − √(M₋(M₊+1)))]`.
///
/// The imaginary part is kept; the circuit uses the real part.
pub fn interaction_energy(input: &InteractionInput, table: &CouplingTable) -> Complex64 {
    let kappa = table.spec().kappa;
    let prefactor = table.chi(input.alpha) * input.alpha.norm() * input.gate_particles;
    let (mp, mm) = (input.m_plus, input.m_minus);
    let real = input.phi.cos() * (mp - mm);
    let cross = (mp * (mm + 1.0)).sqrt() - (mm * (mp + 1.0)).sqrt();
    let imag = -0.5 * kappa * kappa * input.phi.sin() * cross;
    Complex64::new(prefactor * real, prefactor * imag)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionRate {
    /// `Γ_T = γ sin²κ`.
    pub rate: f64,
    /// `γκ²`.
    pub small_angle: f64,
    /// `1 − sin²κ/κ²`, zero at κ = 0.
    pub relative_difference: f64,
}

pub fn transmission_rate(spec: &TransistorSpec) -> TransmissionRate {
    let k = spec.kappa;
    let rate = spec.gamma * k.sin().powi(2);
    let small_angle = spec.gamma * k * k;
    let relative_difference = if k == 0.0 { 0.0 } else { 1.0 - (k.sin() / k).powi(2) };
    TransmissionRate {
        rate,
        small_angle,
        relative_difference,
    }
}

/// `⟨−|+⟩ = −κ²/2` on the space excluding the drain.
pub fn normal_mode_overlap(spec: &TransistorSpec) -> f64 {
    -0.5 * spec.kappa * spec.kappa
}

/// Components on `(S₁, S₂, N+1, N+2, D)`.
pub type ModeVector = [f64; 5];

/// Index of the drain component in a [`ModeVector`].
pub const DRAIN: usize = 4;

/// `|SG⟩` and `|SD⟩` on the explicit basis, with `sin κ` leaking `|SD⟩` into the drain.
pub fn transistor_mode_vectors(spec: &TransistorSpec) -> (ModeVector, ModeVector) {
    let (st, ct) = spec.theta.sin_cos();
    let (sk, ck) = spec.kappa.sin_cos();
    let sg = [st, 0.0, ct, 0.0, 0.0];
    let sd = [0.0, ck * st, 0.0, ck * ct, sk];
    (sg, sd)
}

/// `⟨−|+⟩` by building `|±⟩ = (|SD⟩ ± |SG⟩)/√2` and dropping the drain
/// component from the inner product.
pub fn explicit_normal_mode_overlap(spec: &TransistorSpec) -> f64 {
    let (sg, sd) = transistor_mode_vectors(spec);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let plus: Vec<f64> = sd.iter().zip(&sg).map(|(a, b)| r * (a + b)).collect();
    let minus: Vec<f64> = sd.iter().zip(&sg).map(|(a, b)| r * (a - b)).collect();
    (0..DRAIN).map(|i| minus[i] * plus[i]).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransistorEnergy {
    pub total: f64,
    /// `(κ²/2)(√(M₋(M₊+1)) + √(M₊(M₋+1)))·ħω₀/2`, subtracted in `total`.
    pub spontaneous_emission: f64,
}

/// `⟨E_T⟩ = (N+2)(M₊+M₋)ħω₀ − (spontaneous-emission term)`.
pub fn transistor_energy(m_plus: f64, m_minus: f64, spec: &TransistorSpec) -> Result<TransistorEnergy> {
    require_non_negative("M+", m_plus)?;
    require_non_negative("M-", m_minus)?;
    let quantum = spec.config.quantum();
    let level = (spec.config.levels + 2) as f64;
    let k2 = spec.kappa * spec.kappa;
    let cross = (m_minus * (m_plus + 1.0)).sqrt() + (m_plus * (m_minus + 1.0)).sqrt();
    let spontaneous_emission = 0.5 * k2 * cross * 0.5 * quantum;
    Ok(TransistorEnergy {
        total: level * (m_plus + m_minus) * quantum - spontaneous_emission,
        spontaneous_emission,
    })
}
