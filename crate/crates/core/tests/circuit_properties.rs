use matteron::circuit::*;
use matteron::coupling::TransistorSpec;
use matteron::{Error, OscillatorConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    battery: BatterySpec,
    gate: GateCircuitSpec,
    cfg: OscillatorConfig,
}

fn random_case(rng: &mut ChaCha8Rng) -> Case {
    loop {
        let levels = rng.gen_range(1..60);
        let cfg = OscillatorConfig::dimensionless(levels);
        let transistor = TransistorSpec::new(
            rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
            rng.gen_range(0.0..0.6),
            rng.gen_range(0.1..3.0),
            cfg,
        )
        .unwrap();
        let battery = BatterySpec::new(
            rng.gen_range(0.05..10.0),
            rng.gen_range(0.05..5.0),
            rng.gen_range(-5.0..20.0),
            rng.gen_range(-3.0..10.0),
            rng.gen_range(0.01..3.0),
        )
        .unwrap();
        let quality = if rng.gen_bool(0.5) { Some(rng.gen_range(1.0..1e4)) } else { None };
        let gate = GateCircuitSpec::new(rng.gen_range(0.01..3.0), quality, rng.gen_range(0.0..2.0), transistor).unwrap();
        let g_m = transconductance(gate.chi0, levels, gate.c_g, battery.c_s, battery.mu_b, cfg.hbar);
        if 1.0 + g_m * battery.r_i > 0.1 {
            return Case { battery, gate, cfg };
        }
    }
}

fn ulp(x: f64) -> f64 {
    f64::EPSILON * x.abs()
}

#[test]
fn closed_form_agrees_with_fixed_point_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..100 {
        let Case { battery, gate, cfg } = random_case(&mut rng);
        let s = solve_steady_state(&battery, &gate, &cfg).unwrap_or_else(|e| panic!("case {k}: {e}"));
        let scale = s.i_dss.abs().max(1e-300);
        assert!((s.i_dss - s.i_dss_fixed_point).abs() <= 1e-10 * scale, "case {k}");
        let q = cfg.quantum();
        assert_eq!(s.mu_g, s.mu_s + s.rho * q);
        assert!((s.mu_g - s.mu_s - s.rho * q).abs() <= ulp(s.mu_g), "case {k}");
        if s.i_dss > 0.0 {
            assert!(s.mu_g > s.mu_s);
            assert!((s.r_gs * s.i_dss + s.rho * q).abs() <= 2.0 * ulp(s.rho * q));
        }
        assert_eq!(s.p_g, -s.rho * q * s.i_dss);
        assert_eq!(s.p_b, s.i_dss * s.i_dss * battery.r_i);
        if battery.r_i >= 0.0 {
            assert!(s.p_b >= 0.0);
        }
        assert!(s.alpha_sq <= cfg.levels as f64);
    }
}

#[test]
fn identity_chain_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let Case { battery, gate, cfg } = random_case(&mut rng);
        let s = solve_steady_state(&battery, &gate, &cfg).unwrap();
        if !(s.gamma_t > 0.0) || s.mu_g <= 0.0 {
            continue;
        }
        let drain = drain_current_from_coupling(battery.mu_b, battery.c_s, s.v0, cfg.hbar);
        let via_gain = s.beta * s.i_0;
        let via_gm = s.g_m * s.mu_g;
        assert!((via_gain - drain).abs() <= 1e-12 * drain.abs());
        assert!((via_gm - drain).abs() <= 1e-12 * drain.abs());
    }
}

#[test]
fn zero_coupling_gives_zero_current() {
    let cfg = OscillatorConfig::dimensionless(36);
    let t = TransistorSpec::new(0.7, 0.1, 1.0, cfg).unwrap();
    let gate = GateCircuitSpec::new(1.0, None, 0.0, t).unwrap();
    let battery = BatterySpec::new(1.0, 0.5, 1.0, 2.0, 1.0).unwrap();
    let s = solve_steady_state(&battery, &gate, &cfg).unwrap();
    assert_eq!(s.g_m, 0.0);
    assert_eq!(s.i_dss, 0.0);
    assert_eq!(s.i_dss_fixed_point, 0.0);
}

#[test]
fn unstable_negative_resistance_is_rejected() {
    let cfg = OscillatorConfig::dimensionless(4);
    let t = TransistorSpec::new(0.7, 0.1, 1.0, cfg).unwrap();
    let gate = GateCircuitSpec::new(1.0, None, 1.0, t).unwrap();
    let g_m = transconductance(1.0, 4, 1.0, 1.0, 1.0, 1.0);
    let battery = BatterySpec::new(1.0, 0.5, 1.0, -2.0 / g_m, 1.0).unwrap();
    assert!(matches!(solve_steady_state(&battery, &gate, &cfg), Err(Error::UnstableBias { .. })));
}

fn solve(mu_b: f64, r_i: f64, t_b: f64) -> CircuitState {
    let cfg = OscillatorConfig::dimensionless(36);
    let t = TransistorSpec::new(0.7, 0.1, 1.0, cfg).unwrap();
    let gate = GateCircuitSpec::new(0.5, Some(100.0), 0.05, t).unwrap();
    let battery = BatterySpec::new(mu_b, t_b, 1.0, r_i, 0.8).unwrap();
    solve_steady_state(&battery, &gate, &cfg).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn current_rises_with_battery_potential(mu in 0.1f64..10.0, dmu in 0.0f64..5.0, r in 0.0f64..20.0) {
        prop_assert!(solve(mu + dmu, r, 0.7).i_dss >= solve(mu, r, 0.7).i_dss);
    }

    #[test]
    fn current_falls_with_resistance(r in 0.0f64..20.0, dr in 0.0f64..20.0, mu in 0.1f64..10.0) {
        prop_assert!(solve(mu, r + dr, 0.7).i_dss <= solve(mu, r, 0.7).i_dss);
    }

    #[test]
    fn rho_falls_with_temperature(t in 0.05f64..5.0, dt in 1e-3f64..5.0) {
        prop_assert!(solve(1.0, 1.0, t + dt).rho < solve(1.0, 1.0, t).rho);
    }
}
