use approx::assert_relative_eq;
use vnfab::config::{Config, Mode, ParamSet};
use vnfab::repeater::{analyze, optimal_segment, segment_delay, wire_rc};
use vnfab::thermal::{calibrated_stack, solve, stack_scenario, NodeKind, Scenario, ThermalNetwork};

// Values frozen from the reference implementation with default parameters.

#[test]
fn interconnect_and_repeater_totals() {
    let cfg = Config::default();
    let cases = [
        (
            ParamSet::Cmos1,
            6322,
            3757,
            1.0038222744982923,
            7788078.0522737615,
        ),
        (
            ParamSet::Cmos2,
            6322,
            1841,
            1.0010570852984928,
            781707.1794717873,
        ),
        (
            ParamSet::Skybridge,
            4473,
            2279,
            1.037721846575932,
            93574.64761674109,
        ),
    ];
    for (set, l_max, longest, gamma, total) in cases {
        let a = analyze(&cfg, set).unwrap();
        assert_eq!(a.distribution.l_max, l_max, "{set:?}");
        assert_eq!(a.distribution.longest(), Some(longest), "{set:?}");
        assert_relative_eq!(a.distribution.gamma, gamma, max_relative = 1e-9);
        assert_relative_eq!(a.report.total, total, max_relative = 1e-9);
    }
}

#[test]
fn fabric_local_wires_need_no_repeaters() {
    let a = analyze(&Config::default(), ParamSet::Skybridge).unwrap();
    assert_eq!(a.report.tiers[0].repeaters, 0.0);
    let bounds: Vec<u64> = a.report.tiers.iter().map(|t| t.l_max).collect();
    assert_eq!(bounds, [169, 966, 2279]);
}

#[test]
fn closed_form_optimum_matches_numeric_search() {
    let cfg = Config::default();
    for mode in [Mode::Cmos, Mode::Skybridge] {
        let d = cfg.driver.for_mode(mode);
        for tier in &cfg.tiers {
            let w = wire_rc(tier, &cfg.capacitance);
            let (l_opt, s_opt) = optimal_segment(&d, &w);
            // log-spaced grid, narrowed around the best cell on each pass
            let (mut lc, mut sc, mut span) = (l_opt * 3.7, s_opt * 0.3, 4.0f64);
            for _ in 0..6 {
                let mut best = (f64::INFINITY, lc, sc);
                for i in -20..=20 {
                    for j in -20..=20 {
                        let l = lc * span.powf(i as f64 / 20.0);
                        let s = sc * span.powf(j as f64 / 20.0);
                        let v = segment_delay(l, s, &d, &w) / l;
                        if v < best.0 {
                            best = (v, l, s);
                        }
                    }
                }
                (lc, sc) = (best.1, best.2);
                span = span.sqrt();
            }
            assert_relative_eq!(lc, l_opt, max_relative = 2e-2);
            assert_relative_eq!(sc, s_opt, max_relative = 2e-2);
        }
    }
}

#[test]
fn resistor_ladder_matches_hand_solution() {
    // source -> r1 -> mid -> r2 -> sink at 300 K, plus r3 from source to sink
    let (r1, r2, r3, q) = (2.0e5, 3.0e5, 1.0e6, 1e-4);
    let mut net = ThermalNetwork::new();
    let src = net.add_node("src", NodeKind::Internal);
    let mid = net.add_node("mid", NodeKind::Internal);
    let sink = net.reference("sink", 300.0);
    net.add_resistor(src, mid, r1, "r1");
    net.add_resistor(mid, sink, r2, "r2");
    net.add_resistor(src, sink, r3, "r3");
    net.add_source(src, q);
    let sol = solve(&net).unwrap();
    let r_eq = (r1 + r2) * r3 / (r1 + r2 + r3);
    let t_src = 300.0 + q * r_eq;
    let t_mid = 300.0 + (t_src - 300.0) * r2 / (r1 + r2);
    assert_relative_eq!(sol.temperature[src], t_src, max_relative = 1e-12);
    assert_relative_eq!(sol.temperature[mid], t_mid, max_relative = 1e-12);
    assert_relative_eq!(sol.absorbed[sink], q, max_relative = 1e-12);
}

#[test]
fn stack_temperatures() {
    let cfg = Config::default();
    let (spec, scale) = calibrated_stack(&cfg.materials, &cfg.thermal, 2, 8).unwrap();
    assert_relative_eq!(scale, 1.319633978672214, max_relative = 1e-9);
    assert_eq!(spec.series_len(), 10);
    let lower_gate_top = spec.series_len() - 1;
    let cases = [
        (0.0, false, vec![], 4306.999999999974, 3035.741542777918),
        (1.0, false, vec![], 461.7388190744086, 450.19656985920255),
        (1.0, true, vec![], 454.41579820138116, 448.06365847796485),
        (
            1.0,
            true,
            vec![lower_gate_top],
            452.1979291539616,
            428.5515095887939,
        ),
    ];
    for (g, hdpp, hej, t_top, avg) in cases {
        let s = stack_scenario(
            &cfg.materials,
            &cfg.thermal,
            &spec,
            &Scenario {
                gate_conduction: g,
                hdpp_attached: hdpp,
                hej_positions: hej,
                ..Scenario::default()
            },
        )
        .unwrap()
        .1;
        assert_relative_eq!(s.top(), t_top, max_relative = 1e-9);
        assert_relative_eq!(s.average, avg, max_relative = 1e-9);
    }
}
