//! Subcommand implementations. Each returns a [`ResultTable`].

use matteron::circuit::{solve_steady_state, BatterySpec, CircuitState, GateCircuitSpec};
use matteron::coupling::{coupling_peak, CouplingTable, TransistorSpec};
use matteron::matterwave::{
    detector_response, drive_amplitude, standing_wave, steady_state_power, wave_field, wave_params, Detector,
    DrainWaveSpec, MatterwaveParams,
};
use matteron::oscillator::{
    amplitude_for_fill, center_time, density_profile, full_width_half_max, truncated_coherent_state, turnaround_time,
};
use matteron::{Complex64, OscillatorConfig};
use rayon::prelude::*;

use crate::config::{Params, RunConfig, Sweep};
use crate::error::{CliError, CliResult};
use crate::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    States,
    Coupling,
    SteadyState,
    Sweep,
    Matterwave,
    Detector,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::States => "states",
            Command::Coupling => "coupling",
            Command::SteadyState => "steady-state",
            Command::Sweep => "sweep",
            Command::Matterwave => "matterwave",
            Command::Detector => "detector",
        }
    }
}

/// Runs one subcommand and stamps the common metadata block.
pub fn run(command: Command, config: &RunConfig, reproducible: bool) -> CliResult<ResultTable> {
    let mut table = match command {
        Command::States => cmd_states(&config.params)?,
        Command::Coupling => cmd_coupling(&config.params)?,
        Command::SteadyState => cmd_steady_state(&config.params)?,
        Command::Sweep => {
            let sweep = config
                .sweep
                .as_ref()
                .ok_or_else(|| CliError::Config("the sweep command needs a [sweep] section".into()))?;
            cmd_sweep(&config.params, sweep)?
        }
        Command::Matterwave => cmd_matterwave(&config.params)?,
        Command::Detector => cmd_detector(&config.params)?,
    };
    let mut header = ResultTable::new(Vec::<String>::new());
    header.meta("artifact", format!("matteron {}", env!("CARGO_PKG_VERSION")));
    header.meta("command", command.name());
    if !reproducible {
        header.meta("timestamp", chrono::Utc::now().to_rfc3339());
    }
    header.metadata.append(&mut table.metadata);
    header.meta("config", config.source.clone());
    table.metadata = header.metadata;
    Ok(table)
}

/// The solved pipeline for one parameter set.
pub struct Solved {
    pub cfg: OscillatorConfig,
    pub table: CouplingTable,
    pub state: CircuitState,
    pub wave: MatterwaveParams,
}

pub fn solve(p: &Params) -> CliResult<Solved> {
    let cfg = OscillatorConfig::dimensionless(p.levels);
    let spec = TransistorSpec::new(p.theta, p.kappa, p.gamma, cfg)?;
    let table = CouplingTable::with_normalization(spec, p.eta, p.normalization)?;
    let gate = GateCircuitSpec::new(p.c_g, p.quality, table.chi0(), spec)?.with_mode(p.mode);
    let battery = BatterySpec::new(p.mu_b, p.t_b, p.v_ss, p.r_i, p.c_s)?;
    let state = solve_steady_state(&battery, &gate, &cfg)?;
    let wave = wave_params(&DrainWaveSpec::from_config(&cfg, p.v_ss, state.i_dss.max(0.0))?)?;
    Ok(Solved {
        cfg,
        table,
        state,
        wave,
    })
}

pub fn cmd_states(p: &Params) -> CliResult<ResultTable> {
    let cfg = OscillatorConfig::dimensionless(p.levels);
    let half = cfg.window_half_width();
    let n = p.samples;
    let xs: Vec<f64> = (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect();
    let times = [("turnaround", turnaround_time(&cfg)), ("center", center_time(&cfg))];
    let mut columns = vec!["x".to_string()];
    let mut curves = Vec::new();
    let mut meta = Vec::new();
    for &fill in &p.fills {
        let alpha = amplitude_for_fill(fill, p.levels)?;
        let state = truncated_coherent_state(Complex64::new(alpha, 0.0), &cfg);
        for (label, t) in times {
            let name = format!("density_fill_{fill}_{label}");
            let density = density_profile(&state, &xs, t);
            let (_, variance) = state.position_moments(t);
            meta.push((format!("variance_fill_{fill}_{label}"), variance));
            if let Some(w) = full_width_half_max(&xs, &density) {
                meta.push((format!("fwhm_fill_{fill}_{label}"), w));
            }
            columns.push(name);
            curves.push(density);
        }
    }
    let mut table = ResultTable::new(columns);
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![x];
        row.extend(curves.iter().map(|c| c[i]));
        table.push_row(row);
    }
    table.meta("levels", p.levels as f64);
    table.meta("ground_state_variance", 0.5);
    for (k, v) in meta {
        table.meta(k, v);
    }
    Ok(table)
}

pub fn cmd_coupling(p: &Params) -> CliResult<ResultTable> {
    let cfg = OscillatorConfig::dimensionless(p.levels);
    let spec = TransistorSpec::new(p.theta, p.kappa, p.gamma, cfg)?;
    let coupling = CouplingTable::with_normalization(spec, p.eta, p.normalization)?;
    let upper = 2.0 * (p.levels as f64).sqrt();
    let m = p.coupling_points;
    let alphas: Vec<f64> = (0..m).map(|i| upper * i as f64 / (m - 1) as f64).collect();
    let chis: Vec<f64> = alphas.iter().map(|&a| coupling.chi(Complex64::new(a, 0.0))).collect();
    let factors: Vec<f64> = alphas.iter().zip(&chis).map(|(a, c)| a * c).collect();
    let (grid_idx, grid_max) = factors
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    let peak = coupling_peak(&coupling);
    let mut table = ResultTable::new(["abs_alpha", "chi", "coupling_factor", "normalized"]);
    for i in 0..m {
        let normalized = if grid_max > 0.0 { factors[i] / grid_max } else { 0.0 };
        table.push_row(vec![alphas[i], chis[i], factors[i], normalized]);
    }
    table.meta("levels", p.levels as f64);
    table.meta("chi0", coupling.chi0());
    table.meta("normalization", format!("{:?}", p.normalization).to_lowercase());
    table.meta("grid_peak_alpha", alphas[grid_idx]);
    table.meta("peak_alpha", peak.alpha);
    table.meta("peak_value", peak.value);
    table.meta("peak_ratio_to_estimate", peak.ratio_to_estimate);
    if let Some(w) = spec.transmission_warning() {
        table.meta("warning", w);
    }
    Ok(table)
}

pub const STEADY_STATE_COLUMNS: [&str; 34] = [
    "rho",
    "gamma_T",
    "I_0",
    "chi0",
    "g_m",
    "V0",
    "beta",
    "I_dss",
    "I_dss_fixed_point",
    "fixed_point_iterations",
    "mu",
    "mu_s",
    "mu_g",
    "mu_g_minus_mu_s",
    "r_gs",
    "P_b",
    "P_g",
    "P_osc",
    "alpha_sq",
    "saturated",
    "omega_d",
    "n",
    "Z",
    "k_m",
    "v_m",
    "F0",
    "I0_wave",
    "lambda_m",
    "lambda_d",
    "lambda_de_broglie",
    "P_d",
    "P_Tot",
    "p_matteron",
    "k_matteron",
];

fn steady_state_row(s: &Solved) -> Vec<f64> {
    let c = &s.state;
    let w = &s.wave;
    vec![
        c.rho,
        c.gamma_t,
        c.i_0,
        c.chi0,
        c.g_m,
        c.v0,
        c.beta,
        c.i_dss,
        c.i_dss_fixed_point,
        c.fixed_point_iterations as f64,
        c.mu,
        c.mu_s,
        c.mu_g,
        c.mu_g - c.mu_s,
        c.r_gs,
        c.p_b,
        c.p_g,
        c.p_osc,
        c.alpha_sq,
        if c.saturated { 1.0 } else { 0.0 },
        w.omega_d,
        w.index,
        w.impedance,
        w.wavenumber,
        w.group_velocity,
        w.potential_amplitude,
        w.current_amplitude,
        w.wavelength,
        w.lambda_d,
        w.de_broglie_wavelength,
        w.power,
        w.total_power,
        w.matteron_momentum,
        w.matteron_wavenumber,
    ]
}

pub fn cmd_steady_state(p: &Params) -> CliResult<ResultTable> {
    let solved = solve(p)?;
    let mut table = ResultTable::new(STEADY_STATE_COLUMNS);
    table.push_row(steady_state_row(&solved));
    table.meta("mode", format!("{:?}", solved.state.mode).to_lowercase());
    if let Some(w) = solved.table.spec().transmission_warning() {
        table.meta("warning", w);
    }
    Ok(table)
}

/// Worker count for sweeps: `ART_THREADS` when set, else rayon's default.
pub fn sweep_threads() -> CliResult<Option<usize>> {
    match std::env::var("ART_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("ART_THREADS must be a positive integer, got {v:?}"))),
        },
    }
}

pub fn cmd_sweep(p: &Params, sweep: &Sweep) -> CliResult<ResultTable> {
    let values = sweep.values();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = sweep_threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start sweep workers: {e}")))?;
    // par_iter + collect keeps input order
    let rows: Vec<CliResult<Vec<f64>>> = pool.install(|| {
        values
            .par_iter()
            .map(|&v| {
                let point = p.with(sweep.parameter, v)?;
                let mut row = vec![v];
                row.extend(steady_state_row(&solve(&point)?));
                Ok(row)
            })
            .collect()
    });
    let mut columns = vec![sweep.parameter.name()];
    columns.extend(STEADY_STATE_COLUMNS);
    let mut table = ResultTable::new(columns);
    for row in rows {
        table.push_row(row?);
    }
    table.meta("sweep_parameter", sweep.parameter.name());
    table.meta("sweep_count", sweep.count as f64);
    Ok(table)
}

pub fn cmd_matterwave(p: &Params) -> CliResult<ResultTable> {
    let solved = solve(p)?;
    let w = solved.wave;
    let samples = 801;
    let barrier = 0.0;
    let start = barrier - 4.0 * w.wavelength;
    let mut table = ResultTable::new(["z", "F", "I", "I_sq_standing"]);
    for i in 0..samples {
        let z = start + (barrier - start) * i as f64 / (samples - 1) as f64;
        let (f, current) = wave_field(&w, z, 0.0);
        table.push_row(vec![z, f, current, standing_wave(&w, z.min(barrier), barrier)?]);
    }
    for (k, v) in [
        ("I_d", solved.state.i_dss),
        ("omega_d", w.omega_d),
        ("n", w.index),
        ("Z", w.impedance),
        ("Z0", w.reference_impedance),
        ("k_m", w.wavenumber),
        ("v_m", w.group_velocity),
        ("F0", w.potential_amplitude),
        ("I0_wave", w.current_amplitude),
        ("lambda_m", w.wavelength),
        ("lambda_d", w.lambda_d),
        ("lambda_de_broglie", w.de_broglie_wavelength),
        ("P_d", w.power),
        ("P_Tot", w.total_power),
        ("p_matteron", w.matteron_momentum),
        ("k_matteron", w.matteron_wavenumber),
    ] {
        table.meta(k, v);
    }
    table.meta("barrier_at", barrier);
    Ok(table)
}

pub fn cmd_detector(p: &Params) -> CliResult<ResultTable> {
    let solved = solve(p)?;
    let d = &p.detector;
    let omegas: Vec<f64> = (0..d.count)
        .map(|i| d.start + (d.stop - d.start) * i as f64 / (d.count - 1) as f64)
        .collect();
    let detectors = omegas
        .iter()
        .map(|&w| Detector::tuned(w * solved.cfg.omega0, d.mass, d.damping, d.duration))
        .collect::<Result<Vec<_>, _>>()?;
    let energy: Vec<f64> = detectors.iter().map(|det| detector_response(&solved.wave, det)).collect();
    let lorentz: Vec<f64> = detectors.iter().map(|det| steady_state_power(&solved.wave, det)).collect();
    let peak = energy.iter().copied().fold(0.0, f64::max);
    let lorentz_peak = lorentz.iter().copied().fold(0.0, f64::max);
    let argmax = energy
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| omegas[i])
        .unwrap_or(f64::NAN);
    let mut table = ResultTable::new(["omega_s", "energy", "relative", "lorentzian_relative"]);
    for i in 0..omegas.len() {
        let rel = if peak > 0.0 { energy[i] / peak } else { 0.0 };
        let lrel = if lorentz_peak > 0.0 { lorentz[i] / lorentz_peak } else { 0.0 };
        table.push_row(vec![omegas[i], energy[i], rel, lrel]);
    }
    table.meta("drive_amplitude", drive_amplitude(&solved.wave));
    table.meta("linewidth", detectors[0].linewidth());
    table.meta("argmax_omega_s", argmax);
    table.meta("scan_step", (d.stop - d.start) / (d.count - 1) as f64);
    table.meta("omega0", solved.cfg.omega0);
    Ok(table)
}
