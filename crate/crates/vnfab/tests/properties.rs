use proptest::prelude::*;
use vnfab::config::{alpha, Config, DesignRules, FabricParams, ParamSet};
use vnfab::designs::*;
use vnfab::dynlogic::{parse_netlist, run, NetlistBuilder, PhaseSchedule, Value};
use vnfab::interconnect::*;
use vnfab::layout::{apply_axis, area, place, raw_area, SweepAxis};
use vnfab::repeater::{analyze, optimal_segment, segment_delay, wire_rc};
use vnfab::thermal::{calibrated_stack, stack_scenario, Scenario};

fn fabric(k: f64, p: f64, fo: f64, n: u64, gz: u32, pv: f64) -> FabricParams {
    FabricParams {
        rent_k: k,
        rent_p: p,
        fan_out: fo,
        gate_pitch_h: 150.0,
        gate_pitch_v: pv,
        gz,
        n_gates: n,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn config_round_trip(k in 1.0f64..6.0, p in 0.2f64..0.9) {
        let mut cfg = Config::default();
        cfg.fabric.cmos_set2.rent_k = k;
        cfg.fabric.cmos_set2.rent_p = p;
        let back = Config::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn alpha_bounded_increasing(a in 0.01f64..50.0, d in 0.01f64..10.0) {
        let (x, y) = (alpha(a).unwrap(), alpha(a + d).unwrap());
        prop_assert!(x > 0.0 && y < 1.0 && x < y);
    }

    #[test]
    fn distribution_normalized_and_non_negative(
        k in 1.0f64..6.0,
        p in 0.1f64..0.95,
        fo in 1.0f64..5.0,
        n in 100u64..200_000,
        gz in 1u32..4,
        pv in 100.0f64..600.0,
    ) {
        let d = distribution(&fabric(k, p, fo, n, gz, pv)).unwrap();
        prop_assert!(d.counts.iter().all(|&f| f >= 0.0));
        prop_assert!((d.total() - d.i_total).abs() <= 1e-3 * d.i_total);
    }

    #[test]
    fn planar_reduction(l in 1u32..200, span in 250.0f64..1000.0) {
        let x = l as f64;
        prop_assert_eq!(m_3d(x, span, 1, 0.0).unwrap(), m_2d(x, span).unwrap());
        prop_assert_eq!(block_counts_3d(x, 1, 0.0), block_counts_2d(x));
    }

    #[test]
    fn planar_distribution_matches_stacked_with_one_layer(n in 100u64..100_000) {
        let a = distribution(&fabric(3.0, 0.6, 3.0, n, 1, 0.0)).unwrap();
        prop_assert_eq!(l_max_3d(n, 1, 0.0).unwrap(), a.l_max);
    }

    #[test]
    fn segment_delay_monotone_convex(l in 1.0f64..1e6, s in 0.5f64..200.0) {
        let cfg = Config::default();
        let d = cfg.driver.for_mode(vnfab::config::Mode::Cmos);
        let w = wire_rc(&cfg.tiers[0], &cfg.capacitance);
        let h = l * 1e-3;
        let (a, b, c) = (segment_delay(l - h, s, &d, &w), segment_delay(l, s, &d, &w), segment_delay(l + h, s, &d, &w));
        prop_assert!(a >= 0.0 && a <= b && b <= c);
        prop_assert!(a + c - 2.0 * b >= -1e-12 * b);
    }

    #[test]
    fn optimum_not_beaten(fl in 0.5f64..2.0, fs in 0.5f64..2.0, tier in 0usize..3) {
        let cfg = Config::default();
        let d = cfg.driver.for_mode(vnfab::config::Mode::Skybridge);
        let w = wire_rc(&cfg.tiers[tier], &cfg.capacitance);
        let (l, s) = optimal_segment(&d, &w);
        let best = segment_delay(l, s, &d, &w) / l;
        prop_assert!(segment_delay(l * fl, s * fs, &d, &w) / (l * fl) >= best * (1.0 - 1e-12));
    }

    #[test]
    fn isa_round_trip(op in 0usize..5, rd in 0u8..4, rs in 0u8..4, imm in 0u8..16) {
        let op = Opcode::ALL[op];
        let ins = match op {
            Opcode::Nop => Instruction::nop(),
            Opcode::Movi => Instruction::movi(rd, imm),
            _ => Instruction::rr(op, rd, rs),
        };
        prop_assert_eq!(Instruction::decode(ins.encode()).unwrap(), ins);
        prop_assert_eq!(parse_program(&ins.to_string()).unwrap(), vec![ins]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tier_bounds_ordered_and_repeaters_grow(n1 in 10_000u64..300_000, extra in 1u64..300_000) {
        for set in [ParamSet::Cmos1, ParamSet::Skybridge] {
            let mut cfg = Config::default();
            let base = cfg.fabric(set).clone();
            let totals: Vec<f64> = [n1, n1 + extra]
                .iter()
                .map(|&n| {
                    match set {
                        ParamSet::Cmos1 => cfg.fabric.cmos_set1 = base.with_n_gates(n),
                        _ => cfg.fabric.skybridge = base.with_n_gates(n),
                    }
                    let a = analyze(&cfg, set).unwrap();
                    assert!(a.bounds.l_max_local <= a.bounds.l_max_semi_global);
                    assert!(a.bounds.l_max_semi_global <= a.bounds.l_max_global);
                    a.report.total
                })
                .collect();
            prop_assert!(totals[0] <= totals[1], "{:?}", totals);
        }
    }

    #[test]
    fn thermal_conservation_and_feature_monotonicity(
        scale in 0.2f64..3.0,
        g in 0.0f64..1.0,
        hej in proptest::collection::btree_set(0usize..20, 0..4),
    ) {
        let cfg = Config::default();
        let (mut spec, _) = calibrated_stack(&cfg.materials, &cfg.thermal, 2, 8).unwrap();
        spec.q_per_transistor *= scale;
        let run = |hdpp: bool, hej: Vec<usize>| {
            stack_scenario(&cfg.materials, &cfg.thermal, &spec, &Scenario {
                gate_conduction: g,
                hdpp_attached: hdpp,
                hej_positions: hej,
                ..Scenario::default()
            })
            .unwrap()
            .1
        };
        let bare = run(false, vec![]);
        let pillars = run(true, vec![]);
        let hej: Vec<usize> = hej.into_iter().collect();
        let junctions = run(true, hej.clone());
        let injected = spec.q_per_transistor * spec.transistor_count() as f64;
        for s in [&bare, &pillars, &junctions] {
            let absorbed: f64 = s.absorbed.iter().sum();
            prop_assert!((absorbed - injected).abs() <= 1e-9 * injected);
        }
        for (before, after) in [(&bare, &pillars), (&pillars, &junctions)] {
            for (b, a) in before.temperature.iter().zip(&after.temperature) {
                prop_assert!(*a <= b + 1e-9 * b);
            }
        }
    }

    #[test]
    fn gate_conduction_ordering(g1 in 0.0f64..1.0, g2 in 0.0f64..1.0) {
        let cfg = Config::default();
        let (spec, _) = calibrated_stack(&cfg.materials, &cfg.thermal, 2, 8).unwrap();
        let top = |g: f64| {
            stack_scenario(&cfg.materials, &cfg.thermal, &spec, &Scenario {
                gate_conduction: g,
                ..Scenario::default()
            })
            .unwrap()
            .1
            .top()
        };
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        prop_assert!(top(lo) >= top(hi) - 1e-9);
    }

    #[test]
    fn simulation_is_deterministic(words in proptest::collection::vec((0u64..16, 0u64..16, any::<bool>()), 1..12)) {
        let nl = gen_cla(ClaSpec::new(4).unwrap()).unwrap();
        let vectors: Vec<Vec<Value>> = words
            .iter()
            .map(|&(a, b, c)| {
                dual_inputs(&nl, |n| if n == "cin" { Some(c) } else { bus_bit(n, "a", a).or_else(|| bus_bit(n, "b", b)) })
                    .unwrap()
                    .into_iter()
                    .map(Value::from_bool)
                    .collect()
            })
            .collect();
        let sched = PhaseSchedule::dual(nl.stages);
        let t1 = run(&nl, &sched, &vectors).unwrap();
        let t2 = run(&nl, &sched, &vectors).unwrap();
        prop_assert_eq!(t1.to_csv(&nl), t2.to_csv(&nl));
    }

    #[test]
    fn wisp_matches_reference_on_hazard_free_programs(
        ops in proptest::collection::vec((0usize..5, 0u8..4, 0u8..4, 0u8..16), 1..5),
    ) {
        let mut text = String::from("MOVI R0, #3\nMOVI R1, #5\nMOVI R2, #7\nMOVI R3, #9\n");
        for (op, rd, rs, imm) in ops {
            let ins = match Opcode::ALL[op] {
                Opcode::Nop => Instruction::nop(),
                Opcode::Movi => Instruction::movi(rd, imm),
                o => Instruction::rr(o, rd, rs),
            };
            text += &format!("NOP\nNOP\n{ins}\n");
        }
        let rom = RomImage::from_asm(&text).unwrap();
        let n = parse_program(&text).unwrap().len();
        prop_assert!(raw_hazards(&rom, n).unwrap().is_empty());
        let m = WispMachine::new(rom).unwrap();
        let snaps = m.run(WispMachine::pulses_to_retire(n)).unwrap();
        let last = snaps.last().unwrap();
        prop_assert_eq!(last.architectural(&rom), wisp_reference(&rom, n).unwrap());
    }

    #[test]
    fn layout_conservation_and_monotonicity(n in 1usize..120, extra in 1usize..40, f in 1.0f64..3.0) {
        let chain = |n: usize| {
            let mut b = NetlistBuilder::new();
            let mut prev = b.input("a");
            for i in 0..n {
                prev = b.nand(&format!("g{i}"), i, &[prev]);
            }
            b.build().unwrap()
        };
        let rules = DesignRules::default();
        let small = place(&chain(n), &rules).unwrap();
        let big = place(&chain(n + extra), &rules).unwrap();
        prop_assert_eq!(small.cells(), n);
        prop_assert!(small.blocks.iter().all(|b| b.wires.iter().all(|w| w.len() <= 2)));
        prop_assert!(raw_area(&small, &rules) <= raw_area(&big, &rules));
        let mut wide = rules.clone();
        wide.nanowire_pitch *= f;
        prop_assert!(area(&small, &rules) <= area(&small, &wide));
        let spaced = apply_axis(&rules, SweepAxis::Spacing, rules.min_spacing * f).unwrap();
        prop_assert!(area(&small, &rules) <= area(&place(&chain(n), &spaced).unwrap(), &spaced));
    }
}

#[test]
fn compound_with_one_member_is_a_nand() {
    let a = parse_netlist("input a b\noutput y\nnand y 0 : a b\n").unwrap();
    let mut nb = NetlistBuilder::new();
    let x = nb.input("a");
    let y = nb.input("b");
    nb.compound("y", 0, &[vec![x, y]]);
    nb.output("y");
    assert_eq!(a, nb.build().unwrap());
}

#[test]
fn shipped_designs_never_read_floating_nets() {
    for nl in [
        gen_cla(ClaSpec::new(4).unwrap()).unwrap(),
        gen_multiplier4().unwrap(),
        gen_decoder(3).unwrap(),
        gen_latch(false).unwrap(),
    ] {
        let vectors: Vec<Vec<Value>> = (0..6u64)
            .map(|k| {
                nl.inputs
                    .iter()
                    .enumerate()
                    .map(|(i, _)| Value::from_bool((k >> (i / 2)) & 1 == 1))
                    .collect()
            })
            .map(|v: Vec<Value>| {
                // complements follow their true inputs
                v.iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        if nl.name(nl.inputs[i]).ends_with("_n") {
                            Value::from_bool(v[i - 1] != Value::One)
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        assert!(run(&nl, &PhaseSchedule::dual(nl.stages), &vectors).is_ok());
    }
}

#[test]
fn netlist_text_round_trip_keeps_blocks() {
    let rom = RomImage::from_asm("MOVI R0, #1").unwrap();
    let nl = gen_wisp4(&rom).unwrap().netlist;
    let back = parse_netlist(&nl.to_text()).unwrap();
    assert_eq!(back.blocks, nl.blocks);
    assert_eq!(back.gates.len(), nl.gates.len());
    assert_eq!(back.latches.len(), nl.latches.len());
}
