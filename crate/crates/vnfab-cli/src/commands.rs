//! Subcommand implementations. Each returns the text printed on success.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use vnfab::accept::{render, run_all, SHIPPED_PROGRAMS};
use vnfab::config::{Config, Mode, ParamSet};
use vnfab::designs::{
    gen_cla, gen_multiplier4, gen_wisp4, parse_program, raw_hazards, wisp_reference, ClaSpec,
    RomImage, WispMachine,
};
use vnfab::dynlogic::{parse_netlist, parse_stimulus, run, Netlist, PhaseSchedule};
use vnfab::layout::{area, calibrate_overhead, place, raw_area, sensitivity_sweep, SweepAxis};
use vnfab::repeater::{analyze, Analysis};
use vnfab::thermal::{calibrated_stack, stack_scenario, NodeKind, Scenario};

use crate::manifest::{LoadedConfig, RunManifest};
use crate::{Cli, CliError, Command, FabricArgs, WispAction};

pub fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let cfg = LoadedConfig::load(cli.config.as_deref())?;
    let out = cli.out.as_path();
    match &cli.command {
        Command::Interconnect { fabric, compare } => interconnect(&cfg, out, fabric, *compare),
        Command::Repeaters { fabric } => repeaters(&cfg, out, fabric),
        Command::Thermal {
            gate_conduction,
            hdpp,
            hej,
            hej_at,
            bridge_pitches,
            gates,
            fan_in,
        } => thermal(
            &cfg,
            out,
            &ThermalArgs {
                gate_conduction: *gate_conduction,
                hdpp: *hdpp,
                hej: *hej,
                hej_at: hej_at.clone(),
                bridge_pitches: *bridge_pitches,
                gates: *gates,
                fan_in: *fan_in,
            },
        ),
        Command::Simulate {
            netlist,
            stimulus,
            single_rail,
        } => simulate(&cfg, out, netlist, stimulus, *single_rail),
        Command::Wisp { action } => match action {
            WispAction::Run {
                program,
                instructions,
            } => wisp_run(&cfg, out, program, *instructions),
            WispAction::Assemble { program } => Ok(RomImage::from_asm(&read(program)?)
                .map_err(CliError::analysis)?
                .to_text()),
        },
        Command::Layout {
            design,
            netlist,
            program,
            sweep,
            values,
        } => layout(
            &cfg,
            out,
            design,
            netlist.as_deref(),
            program.as_deref(),
            sweep.as_deref(),
            values,
        ),
        Command::Accept => accept(&cfg, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// Parameter set selected by `--mode`/`--param-set`, with `--n` applied.
fn select_set(cfg: &Config, args: &FabricArgs) -> Result<(Config, ParamSet), CliError> {
    let set = match (args.mode, args.param_set) {
        (Mode::Skybridge, None) => ParamSet::Skybridge,
        (Mode::Skybridge, Some(_)) => {
            return Err(CliError::Usage(
                "--param-set applies to cmos mode only".into(),
            ))
        }
        (Mode::Cmos, None | Some(1)) => ParamSet::Cmos1,
        (Mode::Cmos, Some(2)) => ParamSet::Cmos2,
        (Mode::Cmos, Some(k)) => return Err(CliError::Usage(format!("unknown parameter set {k}"))),
    };
    let mut cfg = cfg.clone();
    if let Some(n) = args.n {
        with_gate_count(&mut cfg, n, &[set])?;
    }
    Ok((cfg, set))
}

fn with_gate_count(cfg: &mut Config, n: f64, sets: &[ParamSet]) -> Result<u64, CliError> {
    if !(n >= 1.0 && n.fract() == 0.0 && n < 1e15) {
        return Err(CliError::Usage(format!(
            "--n must be a positive integer, got {n}"
        )));
    }
    let n = n as u64;
    for &set in sets {
        let p = cfg.fabric(set).with_n_gates(n);
        match set {
            ParamSet::Cmos1 => cfg.fabric.cmos_set1 = p,
            ParamSet::Cmos2 => cfg.fabric.cmos_set2 = p,
            ParamSet::Skybridge => cfg.fabric.skybridge = p,
        }
    }
    Ok(n)
}

fn fabric_manifest(
    sub: &str,
    cfg: &LoadedConfig,
    out: &Path,
    c: &Config,
    set: ParamSet,
) -> RunManifest {
    let mut m = RunManifest::new(sub, cfg, out);
    m.param("set", set.label())
        .param("mode", set.mode())
        .param("n", c.fabric(set).n_gates);
    m
}

fn repeater_rows(a: &Analysis) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = a
        .report
        .tiers
        .iter()
        .map(|t| {
            vec![
                t.name.as_str().to_string(),
                num(t.l_opt_nm),
                num(t.l_opt_pitches),
                num(t.s_opt),
                t.l_max.to_string(),
                num(t.boundary_delay),
                num(t.repeaters),
            ]
        })
        .collect();
    rows.push(vec![
        "total".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        num(a.report.total),
    ]);
    rows
}

const REPEATER_COLUMNS: [&str; 7] = [
    "tier [-]",
    "l_opt [nm]",
    "l_opt [pitch]",
    "s_opt [x min inverter]",
    "l_max [pitch]",
    "boundary_delay [s]",
    "repeaters [count]",
];

fn interconnect(
    cfg: &LoadedConfig,
    out: &Path,
    args: &FabricArgs,
    compare: bool,
) -> Result<String, CliError> {
    let (c, set) = select_set(&cfg.config, args)?;
    let a = analyze(&c, set).map_err(CliError::analysis)?;
    let mut m = fabric_manifest("interconnect", cfg, out, &c, set);
    m.param("compare", compare);
    let label = set.label();
    let pitch_um = a.gate_pitch_nm * 1e-3;
    let dist: Vec<Vec<String>> = a
        .distribution
        .cumulative()
        .into_iter()
        .map(|(l, f, cum)| vec![l.to_string(), num(l as f64 * pitch_um), num(f), num(cum)])
        .collect();
    m.write_csv(
        &format!("interconnect_{label}_distribution.csv"),
        &[
            "l [pitch]",
            "length [um]",
            "f_l [wires]",
            "cumulative [wires]",
        ],
        &dist,
    )?;
    let longest = a.distribution.longest().unwrap_or(0);
    let summary = vec![
        vec![
            "n_gates".into(),
            c.fabric(set).n_gates.to_string(),
            "gates".into(),
        ],
        vec!["gate_pitch".into(), num(a.gate_pitch_nm), "nm".into()],
        vec![
            "l_max".into(),
            a.distribution.l_max.to_string(),
            "pitch".into(),
        ],
        vec!["longest_wire".into(), longest.to_string(), "pitch".into()],
        vec![
            "longest_wire_length".into(),
            num(longest as f64 * pitch_um),
            "um".into(),
        ],
        vec!["gamma".into(), num(a.distribution.gamma), "-".into()],
        vec![
            "i_total".into(),
            num(a.distribution.i_total),
            "wires".into(),
        ],
        vec![
            "l_max_local".into(),
            a.bounds.l_max_local.to_string(),
            "pitch".into(),
        ],
        vec![
            "l_max_semi_global".into(),
            a.bounds.l_max_semi_global.to_string(),
            "pitch".into(),
        ],
        vec![
            "l_max_global".into(),
            a.bounds.l_max_global.to_string(),
            "pitch".into(),
        ],
        vec![
            "repeaters_total".into(),
            num(a.report.total),
            "count".into(),
        ],
    ];
    m.write_csv(
        &format!("interconnect_{label}_summary.csv"),
        &["quantity [-]", "value [see unit]", "unit [-]"],
        &summary,
    )?;
    m.write_csv(
        &format!("interconnect_{label}_repeaters.csv"),
        &REPEATER_COLUMNS,
        &repeater_rows(&a),
    )?;
    let mut s = String::new();
    let _ = writeln!(s, "set {label}, N = {}", c.fabric(set).n_gates);
    let _ = writeln!(
        s,
        "L_max {} pitches, longest wire {longest} pitches = {:.1} um",
        a.distribution.l_max,
        longest as f64 * pitch_um
    );
    let _ = writeln!(
        s,
        "tier bounds local {} / semi-global {} / global {} pitches",
        a.bounds.l_max_local, a.bounds.l_max_semi_global, a.bounds.l_max_global
    );
    let _ = writeln!(s, "repeaters {:.0}", a.report.total);
    if compare {
        let mut c = cfg.config.clone();
        let sets = [ParamSet::Cmos1, ParamSet::Cmos2, ParamSet::Skybridge];
        if let Some(n) = args.n {
            with_gate_count(&mut c, n, &sets)?;
        }
        let mut rows = Vec::new();
        for set in sets {
            let a = analyze(&c, set).map_err(CliError::analysis)?;
            let longest = a.distribution.longest().unwrap_or(0);
            rows.push(vec![
                set.label().to_string(),
                c.fabric(set).n_gates.to_string(),
                a.distribution.l_max.to_string(),
                longest.to_string(),
                num(longest as f64 * a.gate_pitch_nm * 1e-3),
                num(a.distribution.i_total),
                num(a.report.total),
            ]);
        }
        m.write_csv(
            "interconnect_comparison.csv",
            &[
                "set [-]",
                "n_gates [gates]",
                "l_max [pitch]",
                "longest_wire [pitch]",
                "longest_wire [um]",
                "i_total [wires]",
                "repeaters [count]",
            ],
            &rows,
        )?;
        for r in &rows {
            let um: f64 = r[4].parse().unwrap_or(f64::NAN);
            let reps: f64 = r[6].parse().unwrap_or(f64::NAN);
            let _ = writeln!(
                s,
                "{:<10} longest {um:>7.1} um, repeaters {reps:>9.0}",
                r[0]
            );
        }
    }
    Ok(s)
}

fn repeaters(cfg: &LoadedConfig, out: &Path, args: &FabricArgs) -> Result<String, CliError> {
    let (c, set) = select_set(&cfg.config, args)?;
    let a = analyze(&c, set).map_err(CliError::analysis)?;
    let m = fabric_manifest("repeaters", cfg, out, &c, set);
    let rows = repeater_rows(&a);
    m.write_csv(
        &format!("repeaters_{}.csv", set.label()),
        &REPEATER_COLUMNS,
        &rows,
    )?;
    let mut s = String::new();
    for r in &rows {
        let _ = writeln!(s, "{:<12} {}", r[0], r[6]);
    }
    Ok(s)
}

pub struct ThermalArgs {
    pub gate_conduction: f64,
    pub hdpp: bool,
    pub hej: usize,
    pub hej_at: Vec<usize>,
    pub bridge_pitches: u32,
    pub gates: usize,
    pub fan_in: usize,
}

fn thermal(cfg: &LoadedConfig, out: &Path, args: &ThermalArgs) -> Result<String, CliError> {
    let g = args.gate_conduction;
    if !(0.0..=1.0).contains(&g) {
        return Err(CliError::Usage(format!(
            "--gate-conduction must lie in [0, 1], got {g}"
        )));
    }
    if args.gates == 0 || args.fan_in == 0 {
        return Err(CliError::Usage(
            "--gates and --fan-in must be positive".into(),
        ));
    }
    if args.hej > args.gates {
        return Err(CliError::Usage(format!(
            "--hej {} exceeds the {} gates",
            args.hej, args.gates
        )));
    }
    let c = &cfg.config;
    let (spec, scale) = calibrated_stack(&c.materials, &c.thermal, args.gates, args.fan_in)
        .map_err(CliError::analysis)?;
    let top = spec.transistor_count() - 1;
    let mut hej: Vec<usize> = (0..args.hej).map(|i| top - i * spec.series_len()).collect();
    hej.extend(&args.hej_at);
    hej.sort_unstable();
    hej.dedup();
    let scenario = Scenario {
        gate_conduction: g,
        hdpp_attached: args.hdpp || !hej.is_empty(),
        hej_positions: hej.clone(),
        bridge_pitches: args.bridge_pitches,
    };
    let (net, sol) =
        stack_scenario(&c.materials, &c.thermal, &spec, &scenario).map_err(CliError::analysis)?;
    let mut m = RunManifest::new("thermal", cfg, out);
    let positions: Vec<String> = hej.iter().map(usize::to_string).collect();
    m.param("gate_conduction", g)
        .param("hdpp", scenario.hdpp_attached)
        .param("hej", format!("[{}]", positions.join(",")))
        .param("bridge_pitches", args.bridge_pitches)
        .param("gates", args.gates)
        .param("fan_in", args.fan_in);
    let nodes: Vec<Vec<String>> = net
        .nodes
        .iter()
        .map(|n| {
            vec![
                n.id.to_string(),
                n.label.clone(),
                match n.kind {
                    NodeKind::Internal => "internal".into(),
                    NodeKind::Reference(_) => "reference".into(),
                },
                num(sol.temperature[n.id]),
                num(sol.absorbed[n.id]),
            ]
        })
        .collect();
    m.write_csv(
        "thermal_nodes.csv",
        &[
            "node [-]",
            "label [-]",
            "kind [-]",
            "temperature [K]",
            "absorbed [W]",
        ],
        &nodes,
    )?;
    let transistors: Vec<Vec<String>> = sol
        .transistors
        .iter()
        .map(|t| {
            vec![
                t.index.to_string(),
                t.label.clone(),
                t.gate.to_string(),
                t.role.clone(),
                num(t.source),
                num(t.channel),
                num(t.drain),
            ]
        })
        .collect();
    m.write_csv(
        "thermal_transistors.csv",
        &[
            "position [-]",
            "label [-]",
            "gate [-]",
            "role [-]",
            "source [K]",
            "channel [K]",
            "drain [K]",
        ],
        &transistors,
    )?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "heat scale {scale:.4}, {:.3e} W per transistor",
        spec.q_per_transistor
    );
    let _ = writeln!(s, "top transistor {:.1} K", sol.top());
    let _ = writeln!(
        s,
        "peak {:.1} K, channel average {:.1} K",
        sol.peak, sol.average
    );
    Ok(s)
}

fn simulate(
    cfg: &LoadedConfig,
    out: &Path,
    netlist: &Path,
    stimulus: &Path,
    single: bool,
) -> Result<String, CliError> {
    let nl = parse_netlist(&read(netlist)?).map_err(CliError::analysis)?;
    let vectors = parse_stimulus(&nl, &read(stimulus)?).map_err(CliError::analysis)?;
    let sched = if single {
        PhaseSchedule::single(nl.stages)
    } else {
        PhaseSchedule::dual(nl.stages)
    };
    let trace = run(&nl, &sched, &vectors).map_err(CliError::analysis)?;
    let mut m = RunManifest::new("simulate", cfg, out);
    m.param("netlist", netlist.display())
        .param("stimulus", stimulus.display())
        .param("rail", if single { "single" } else { "dual" });
    let body = trace.to_csv(&nl);
    let rows: Vec<Vec<String>> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    m.write_csv(
        "simulate_trace.csv",
        &["slot [-]", "net [-]", "value [0/1/Z]"],
        &rows,
    )?;
    let mut columns = vec!["cycle [-]".to_string()];
    columns.extend(
        nl.outputs
            .iter()
            .map(|&o| format!("{} [0/1/Z]", nl.name(o))),
    );
    let mut per_cycle = Vec::new();
    if !trace.is_empty() {
        for c in 0..vectors.len() {
            let mut row = vec![c.to_string()];
            for &o in &nl.outputs {
                let stage = nl.net_stage(o).unwrap_or(0);
                let slot = sched.valid_slot(stage, c).min(trace.len() - 1);
                row.push(trace.snapshots[slot][o].to_string());
            }
            per_cycle.push(row);
        }
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    m.write_csv("simulate_outputs.csv", &cols, &per_cycle)?;
    Ok(format!(
        "{} vectors, {} slots, pipeline depth {}\n",
        vectors.len(),
        trace.len(),
        nl.stages
    ))
}

fn wisp_run(
    cfg: &LoadedConfig,
    out: &Path,
    program: &Path,
    n: Option<usize>,
) -> Result<String, CliError> {
    let text = read(program)?;
    let len = parse_program(&text).map_err(CliError::analysis)?.len();
    let n = n.unwrap_or(len);
    let rom = RomImage::from_asm(&text).map_err(CliError::analysis)?;
    let mut s = String::new();
    for (w, r) in raw_hazards(&rom, n).map_err(CliError::analysis)? {
        let _ = writeln!(
            s,
            "warning: instruction {r} reads a result of {w} before write-back"
        );
    }
    let machine = WispMachine::new(rom).map_err(CliError::analysis)?;
    let pulses = WispMachine::pulses_to_retire(n);
    let snaps = machine.run(pulses).map_err(CliError::analysis)?;
    let mut m = RunManifest::new("wisp run", cfg, out);
    m.param("program", program.display())
        .param("instructions", n);
    let rows: Vec<Vec<String>> = snaps
        .iter()
        .map(|p| {
            let mut r = vec![
                p.pulse.to_string(),
                machine.cycles_for(p.pulse).to_string(),
                p.fetch_pc.to_string(),
                p.retired().to_string(),
            ];
            r.extend(p.regs.iter().map(u8::to_string));
            r.push(p.product.to_string());
            r
        })
        .collect();
    m.write_csv(
        "wisp_trace.csv",
        &[
            "pulse [pipeline clock]",
            "cycles [dynamic cycle]",
            "fetch_pc [-]",
            "retired [instructions]",
            "r0 [-]",
            "r1 [-]",
            "r2 [-]",
            "r3 [-]",
            "product [-]",
        ],
        &rows,
    )?;
    let reference = wisp_reference(&rom, n).map_err(CliError::analysis)?;
    let state = snaps.last().map(|p| p.architectural(&rom));
    let _ = writeln!(
        s,
        "retired {n} instructions in {pulses} pipeline clocks ({} dynamic-logic cycles, {} per clock)",
        machine.cycles_for(pulses),
        machine.design.macro_cycle
    );
    if let Some(st) = state {
        for (i, r) in st.regs.iter().enumerate() {
            let _ = writeln!(s, "R{i} = {r:>2} ({r:04b})");
        }
        let _ = writeln!(s, "product = {} ({:08b})", st.product, st.product);
        if st != reference {
            return Err(CliError::Analysis(format!(
                "{s}pipeline state differs from the reference interpreter: {:?}",
                reference.regs
            )));
        }
        let _ = writeln!(s, "matches reference interpreter");
    }
    Ok(s)
}

fn layout(
    cfg: &LoadedConfig,
    out: &Path,
    design: &str,
    netlist: Option<&Path>,
    program: Option<&Path>,
    sweep: Option<&str>,
    values: &[f64],
) -> Result<String, CliError> {
    let (name, nl): (String, Netlist) = match netlist {
        Some(p) => (
            p.display().to_string(),
            parse_netlist(&read(p)?).map_err(CliError::analysis)?,
        ),
        None => {
            let nl = match design {
                "cla4" | "cla8" | "cla16" => {
                    let w = design[3..].parse().expect("width suffix");
                    gen_cla(ClaSpec::new(w).map_err(CliError::analysis)?)
                        .map_err(CliError::analysis)?
                }
                "multiplier" => gen_multiplier4().map_err(CliError::analysis)?,
                "wisp" => {
                    let text = match program {
                        Some(p) => read(p)?,
                        None => SHIPPED_PROGRAMS[1].1.to_string(),
                    };
                    let rom = RomImage::from_asm(&text).map_err(CliError::analysis)?;
                    gen_wisp4(&rom).map_err(CliError::analysis)?.netlist
                }
                other => return Err(CliError::Usage(format!("unknown design `{other}`"))),
            };
            (design.to_string(), nl)
        }
    };
    let axis = sweep
        .map(|a| a.parse::<SweepAxis>().map_err(CliError::Usage))
        .transpose()?;
    let rules = &cfg.config.layout;
    let k = calibrate_overhead(rules).map_err(CliError::analysis)?;
    let plan = place(&nl, rules)
        .map_err(CliError::analysis)?
        .with_overhead(k);
    let a = area(&plan, rules);
    let mut m = RunManifest::new("layout", cfg, out);
    m.param("design", &name);
    if let Some(p) = program {
        m.param("program", p.display());
    }
    let (w, h) = plan.footprint;
    let summary = vec![
        vec![
            "cells".into(),
            plan.cells().to_string(),
            "gates+latches".into(),
        ],
        vec![
            "gates_per_nanowire".into(),
            plan.gates_per_nanowire.to_string(),
            "cells".into(),
        ],
        vec![
            "logic_nanowires".into(),
            plan.logic_wires().to_string(),
            "nanowires".into(),
        ],
        vec![
            "signal_nanowires".into(),
            plan.signal_wires().to_string(),
            "nanowires".into(),
        ],
        vec![
            "pillar_sites".into(),
            plan.pillars().to_string(),
            "sites".into(),
        ],
        vec!["footprint_width".into(), w.to_string(), "pitch".into()],
        vec!["footprint_height".into(), h.to_string(), "pitch".into()],
        vec![
            "nanowire_pitch".into(),
            num(rules.nanowire_pitch),
            "nm".into(),
        ],
        vec!["overhead_factor".into(), num(k), "-".into()],
        vec!["raw_area".into(), num(raw_area(&plan, rules)), "um2".into()],
        vec!["area".into(), num(a), "um2".into()],
    ];
    m.write_csv(
        "layout_summary.csv",
        &["quantity [-]", "value [see unit]", "unit [-]"],
        &summary,
    )?;
    let blocks: Vec<Vec<String>> = plan
        .blocks
        .iter()
        .map(|b| {
            vec![
                b.name.clone(),
                b.cells().to_string(),
                b.wires.len().to_string(),
                b.signal_wires.to_string(),
                b.pillars.to_string(),
                b.size.0.to_string(),
                b.size.1.to_string(),
                b.origin.0.to_string(),
                b.origin.1.to_string(),
            ]
        })
        .collect();
    m.write_csv(
        "layout_blocks.csv",
        &[
            "block [-]",
            "cells [-]",
            "logic_nanowires [-]",
            "signal_nanowires [-]",
            "pillar_sites [-]",
            "width [pitch]",
            "height [pitch]",
            "origin_x [pitch]",
            "origin_y [pitch]",
        ],
        &blocks,
    )?;
    m.write_text(
        "layout_grid.txt",
        &format!(
            "# legend: L logic, S signal, P pillar, . empty; top row first\n{}",
            plan.grid_text()
        ),
    )?;
    let mut s = format!(
        "{name}: {} cells on {} logic + {} signal nanowires, footprint {w} x {h} pitches, area {a:.3} um2\n",
        plan.cells(),
        plan.logic_wires(),
        plan.signal_wires()
    );
    if let Some(axis) = axis {
        if values.is_empty() {
            return Err(CliError::Usage("--sweep needs --values".into()));
        }
        let rows = sensitivity_sweep(&nl, rules, axis, values, k).map_err(CliError::analysis)?;
        let unit = match axis {
            SweepAxis::AspectRatio => "value [height/width]",
            _ => "value [nm]",
        };
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    num(r.value),
                    num(r.pitch_nm),
                    r.gates_per_nanowire.to_string(),
                    r.logic_wires.to_string(),
                    r.signal_wires.to_string(),
                    r.footprint.0.to_string(),
                    r.footprint.1.to_string(),
                    num(r.area),
                    r.area_linear.map(num).unwrap_or_default(),
                    num(r.ratio),
                ]
            })
            .collect();
        let axis_name = sweep.unwrap_or_default().replace('-', "_");
        m.write_csv(
            &format!("layout_sweep_{axis_name}.csv"),
            &[
                unit,
                "pitch [nm]",
                "gates_per_nanowire [-]",
                "logic_nanowires [-]",
                "signal_nanowires [-]",
                "footprint_width [pitch]",
                "footprint_height [pitch]",
                "area [um2]",
                "area_linear [um2]",
                "ratio [-]",
            ],
            &table,
        )?;
        for r in &rows {
            let _ = writeln!(
                s,
                "{axis_name} {} -> area {:.3} um2 (x{:.3})",
                r.value, r.area, r.ratio
            );
        }
    }
    Ok(s)
}

fn accept(cfg: &LoadedConfig, out: &Path) -> Result<String, CliError> {
    let results = run_all(&cfg.config);
    let m = RunManifest::new("accept", cfg, out);
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.to_string(),
                if r.pass { "pass" } else { "fail" }.to_string(),
                r.measured.clone(),
                r.target.clone(),
            ]
        })
        .collect();
    m.write_csv(
        "accept.csv",
        &[
            "criterion [-]",
            "name [-]",
            "result [-]",
            "measured [-]",
            "target [-]",
        ],
        &rows,
    )?;
    let table = render(&results);
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(format!("{table}all {} criteria pass\n", results.len()))
    } else {
        Err(CliError::Analysis(format!(
            "{table}failed criteria: {}",
            failed.join(", ")
        )))
    }
}
