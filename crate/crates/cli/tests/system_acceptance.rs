//! Acceptance criteria, one PASS/FAIL line each.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command as Process;
use std::time::Instant;

use matteron::circuit::{solve_steady_state, transconductance, BatterySpec, GateCircuitSpec};
use matteron::coupling::{
    explicit_normal_mode_overlap, interaction_energy, normal_mode_overlap, overlap_un, CouplingTable,
    InteractionInput, TransistorSpec,
};
use matteron::matterwave::{detector_response, steady_state_power, wave_params, Detector, DrainWaveSpec};
use matteron::oscillator::{hermite_functions, BasisQuadrature};
use matteron::quadrature::{trapezoid, trapezoid_samples};
use matteron::{Complex64, OscillatorConfig};
use matteron_cli::config::RunConfig;
use matteron_cli::{run, Command};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spec(levels: usize, theta: f64, kappa: f64) -> TransistorSpec {
    TransistorSpec::new(theta, kappa, 1.0, OscillatorConfig::dimensionless(levels)).unwrap()
}

fn coupling_table() -> CouplingTable {
    CouplingTable::new(spec(36, PI / 4.0, 0.1), 1.0).unwrap()
}

fn fig5_peak() -> Outcome {
    let start = Instant::now();
    let table = coupling_table();
    let upper = 12.0;
    let curve: Vec<(f64, f64)> = (0..401)
        .map(|i| {
            let a = upper * i as f64 / 400.0;
            (a, table.coupling_energy_factor(a))
        })
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let (argmax, _) = curve.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    check(
        (5.0..=6.0).contains(&argmax) && elapsed < 5.0,
        format!("argmax |α| = {argmax:.3} (want [5, 6]), 401 points in {elapsed:.3} s"),
    )
}

fn small_amplitude_linearity() -> Outcome {
    let table = coupling_table();
    let xs: Vec<f64> = (1..=300).map(|i| 0.3 * i as f64 / 300.0).collect();
    let ys: Vec<f64> = xs.iter().map(|&a| table.coupling_energy_factor(a)).collect();
    let slope = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / xs.iter().map(|x| x * x).sum::<f64>();
    let worst = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| ((y - slope * x) / (slope * x)).abs())
        .fold(0.0, f64::max);
    check(worst < 0.01, format!("max relative deviation {worst:.3e} (want < 1e-2)"))
}

fn fig3_states() -> Outcome {
    let cfg = RunConfig::default_config().unwrap();
    let table = run(Command::States, &cfg, true).unwrap();
    let xs = table.column("x").unwrap();
    let step = xs[1] - xs[0];
    let worst_integral = table.columns[1..]
        .iter()
        .map(|c| (trapezoid_samples(step, &table.column(c).unwrap()) - 1.0).abs())
        .fold(0.0, f64::max);
    let ground = 0.5;
    let squeezed = table.meta_number("variance_fill_0.84_turnaround").unwrap();
    let moderate = table.meta_number("variance_fill_0.56_turnaround").unwrap();
    let fwhm_ground = 2.0 * (2f64.ln()).sqrt();
    let fwhm_squeezed = table.meta_number("fwhm_fill_0.84_turnaround").unwrap();
    let squeezing = squeezed < ground;
    let close = ((moderate - ground) / ground).abs() < 0.1;
    let normalized = worst_integral < 1e-6;
    check(
        squeezing && close && normalized,
        format!(
            "0.84 variance {squeezed:.4} vs ground {ground} (squeezing {}); 0.56 variance {moderate:.5} \
             within 10% ({}); worst |∫ρ−1| {worst_integral:.2e} ({}); 0.84 FWHM {fwhm_squeezed:.3} vs ground {fwhm_ground:.3}",
            if squeezing { "yes" } else { "NO" },
            if close { "yes" } else { "NO" },
            if normalized { "yes" } else { "NO" },
        ),
    )
}

fn interaction_null() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tables: Vec<CouplingTable> = [0.0, 0.05, 0.1, 0.3, 0.6]
        .iter()
        .map(|&k| CouplingTable::new(spec(36, PI / 4.0, k), 1.0).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let table = &tables[rng.gen_range(0..tables.len())];
        let m = rng.gen_range(0.0..1e6);
        let input = InteractionInput::new(
            Complex64::from_polar(rng.gen_range(0.0..12.0), rng.gen_range(-PI..PI)),
            rng.gen_range(-PI..PI),
            rng.gen_range(1.0..1e5),
            m,
            m,
        )
        .unwrap();
        worst = worst.max(interaction_energy(&input, table).norm());
    }
    check(worst == 0.0, format!("max |⟨E_GT⟩| over 1000 tuples = {worst:e}"))
}

fn normal_mode() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for kappa in [0.05, 0.1, 0.2, 0.3] {
        let s = spec(36, PI / 4.0, kappa);
        let err = (explicit_normal_mode_overlap(&s) - normal_mode_overlap(&s)).abs();
        ok &= err <= kappa.powi(4);
        lines.push(format!("κ={kappa}: {err:.2e} ≤ {:.2e}", kappa.powi(4)));
    }
    check(ok, lines.join("; "))
}

fn circuit_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut worst_ulps = 0.0f64;
    let mut as_computed = true;
    let mut solved = 0;
    while solved < 100 {
        let levels = rng.gen_range(1..60);
        let cfg = OscillatorConfig::dimensionless(levels);
        let t = TransistorSpec::new(rng.gen_range(0.0..FRAC_PI_2), rng.gen_range(0.0..0.6), 1.0, cfg).unwrap();
        let battery = BatterySpec::new(
            rng.gen_range(0.05..10.0),
            rng.gen_range(0.05..5.0),
            rng.gen_range(-5.0..20.0),
            rng.gen_range(-3.0..10.0),
            rng.gen_range(0.01..3.0),
        )
        .unwrap();
        let quality = if rng.gen_bool(0.5) { Some(rng.gen_range(1.0..1e4)) } else { None };
        let gate = GateCircuitSpec::new(rng.gen_range(0.01..3.0), quality, rng.gen_range(0.0..2.0), t).unwrap();
        let g_m = transconductance(gate.chi0, levels, gate.c_g, battery.c_s, battery.mu_b, 1.0);
        if 1.0 + g_m * battery.r_i <= 0.1 {
            continue;
        }
        let s = match solve_steady_state(&battery, &gate, &cfg) {
            Ok(s) => s,
            Err(e) => return Err(format!("solver failed: {e}")),
        };
        solved += 1;
        if s.i_dss != 0.0 {
            worst = worst.max((s.i_dss - s.i_dss_fixed_point).abs() / s.i_dss.abs());
        }
        let bias = s.rho * cfg.quantum();
        as_computed &= s.mu_g == s.mu_s + bias;
        worst_ulps = worst_ulps.max((s.mu_g - s.mu_s - bias).abs() / (f64::EPSILON * s.mu_g.abs()));
    }
    check(
        worst <= 1e-10 && as_computed && worst_ulps <= 1.0,
        format!(
            "max relative |closed − fixed| {worst:.2e} (want ≤ 1e-10); μ_g = μ_s + ϱħω₀ as stored: {as_computed}; \
             recomputed difference within {worst_ulps:.2} ulp of μ_g"
        ),
    )
}

fn matterwave_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let omega0 = 10f64.powf(rng.gen_range(-3.0..6.0));
        let spec = DrainWaveSpec::new(
            omega0,
            omega0 * rng.gen_range(1.0..500.0),
            10f64.powf(rng.gen_range(-27.0..2.0)),
            10f64.powf(rng.gen_range(-34.0..1.0)),
            10f64.powf(rng.gen_range(-3.0..8.0)),
        )
        .unwrap();
        let p = wave_params(&spec).unwrap();
        for e in [
            rel(p.potential_amplitude, p.impedance * p.current_amplitude),
            rel(p.wavenumber * p.group_velocity, p.omega0),
            rel(p.lambda_d, p.index * p.wavelength),
            rel(0.5 * p.potential_amplitude * p.current_amplitude, spec.current * spec.hbar * omega0),
            rel(p.total_power / p.power, p.omega_d / p.omega0),
        ] {
            worst = worst.max(e);
        }
    }
    check(worst <= 1e-12, format!("max relative identity error {worst:.2e} over 1000 specs"))
}

fn detector_argmax() -> Outcome {
    let p = wave_params(&DrainWaveSpec::new(1.0, 20.0, 1.0, 1.0, 0.3).unwrap()).unwrap();
    let (damping, duration) = (0.02, 2000.0);
    let step = 1e-3;
    let scan: Vec<(f64, f64)> = (0..1001)
        .map(|i| {
            let w = 0.5 + step * i as f64;
            (w, detector_response(&p, &Detector::tuned(w, 1.0, damping, duration).unwrap()))
        })
        .collect();
    let (best, peak) = scan.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let center = Detector::tuned(1.0, 1.0, damping, duration).unwrap();
    let width = center.linewidth();
    let mut worst = 0.0f64;
    let mut worst_lorentz = 0.0f64;
    for sign in [-1.0, 1.0] {
        let off = Detector::tuned(1.0 + sign * 10.0 * width, 1.0, damping, duration).unwrap();
        worst = worst.max(detector_response(&p, &off) / peak);
        worst_lorentz = worst_lorentz.max(steady_state_power(&p, &off) / steady_state_power(&p, &center));
    }
    check(
        (best - 1.0).abs() <= step + 1e-12 && worst < 0.05 && worst_lorentz < 0.05,
        format!(
            "argmax ω_s = {best:.4} (step {step}); at ±10 linewidths ({width:.4}) absorbed/peak = {worst:.4}, \
             Lorentzian oracle {worst_lorentz:.4}"
        ),
    )
}

fn quadrature_cross_check() -> Outcome {
    let levels = 36;
    let s = spec(levels, PI / 4.0, 0.1);
    let half = 2.0 * ((2 * levels + 1) as f64).sqrt();
    let steps = (2.0 * half / 0.01).round() as usize;
    let cos2 = (PI / 4.0).cos().powi(2);
    let mut worst_u = 0.0f64;
    for n in 1..=levels {
        let oracle = cos2
            * trapezoid(-half, half, steps, |x| {
                let psi = hermite_functions(levels + 2, x);
                psi[n - 1] * psi[n] * psi[levels + 2] * psi[levels + 1]
            });
        worst_u = worst_u.max((overlap_un(n, &s).unwrap() - oracle).abs());
    }
    let quad = BasisQuadrature::for_levels(40);
    let mut worst_o = 0.0f64;
    for m in 0..=40 {
        for n in 0..=m {
            let expect = if m == n { 1.0 } else { 0.0 };
            worst_o = worst_o.max((quad.product(&[m, n]) - expect).abs());
        }
    }
    check(
        worst_u < 1e-8 && worst_o < 1e-10,
        format!("max |U_n GH − trapezoid| {worst_u:.2e} (want < 1e-8); orthonormality max-norm {worst_o:.2e} (want < 1e-10)"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, matteron_cli::config::DEFAULT_CONFIG).unwrap();
    let bin = env!("CARGO_BIN_EXE_matteron");
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let out = Process::new(bin)
                .args(["sweep", "--reproducible", "--config"])
                .arg(&config)
                .output()
                .unwrap();
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    check(
        runs[0] == runs[1] && !runs[0].is_empty(),
        format!("two sweep runs, {} bytes each, identical: {}", runs[0].len(), runs[0] == runs[1]),
    )
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("coupling peak for N = 36", fig5_peak),
        ("small-amplitude linearity", small_amplitude_linearity),
        ("truncated-state densities", fig3_states),
        ("interaction-energy null", interaction_null),
        ("normal-mode overlap", normal_mode),
        ("circuit self-consistency", circuit_consistency),
        ("matterwave identities", matterwave_identities),
        ("detector argmax and linewidth", detector_argmax),
        ("quadrature cross-check", quadrature_cross_check),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        writeln!(err, "{tag} [{}] {name}: {detail}", i + 1).unwrap();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    writeln!(err, "acceptance suite ran in {:.2} s", start.elapsed().as_secs_f64()).unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
