//! Browser bindings: run a program on the gate-level processor, add two
//! words on a lookahead adder netlist, and solve a nanowire-stack thermal
//! scenario. Each entry point returns JSON.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use vnfab::config::Config;
use vnfab::designs::{
    bus_bit, bus_word, dual_inputs, gen_cla, parse_program, raw_hazards, wisp_reference, ClaSpec,
    RomImage, WispMachine,
};
use vnfab::dynlogic::{PhaseSchedule, Simulator};
use vnfab::thermal::{calibrated_stack, stack_scenario, Scenario};

#[derive(Debug, Serialize)]
pub struct WispRun {
    pub instructions: usize,
    pub pulses: usize,
    pub cycles: usize,
    pub regs: [u8; 4],
    pub product: u8,
    pub matches_reference: bool,
    pub hazards: Vec<(usize, usize)>,
    /// Register file after each pipeline clock.
    pub trace: Vec<[u8; 4]>,
}

pub fn wisp_run(asm: &str) -> Result<WispRun, String> {
    let n = parse_program(asm).map_err(|e| e.to_string())?.len();
    let rom = RomImage::from_asm(asm).map_err(|e| e.to_string())?;
    let hazards = raw_hazards(&rom, n).map_err(|e| e.to_string())?;
    let m = WispMachine::new(rom).map_err(|e| e.to_string())?;
    let pulses = WispMachine::pulses_to_retire(n);
    let snaps = m.run(pulses).map_err(|e| e.to_string())?;
    let last = snaps.last().ok_or("empty program")?;
    let state = last.architectural(&rom);
    let reference = wisp_reference(&rom, n).map_err(|e| e.to_string())?;
    Ok(WispRun {
        instructions: n,
        pulses,
        cycles: m.cycles_for(pulses),
        regs: state.regs,
        product: state.product,
        matches_reference: state == reference,
        hazards,
        trace: snaps.iter().map(|s| s.regs).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct AddResult {
    pub sum: u64,
    pub carry: bool,
    pub expected: u64,
    pub stages: usize,
    pub gates: usize,
}

pub fn cla_add(width: usize, a: u64, b: u64, cin: bool) -> Result<AddResult, String> {
    let nl = gen_cla(ClaSpec::new(width).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mask = (1u64 << width) - 1;
    let (a, b) = (a & mask, b & mask);
    let v = dual_inputs(&nl, |n| {
        if n == "cin" {
            Some(cin)
        } else {
            bus_bit(n, "a", a).or_else(|| bus_bit(n, "b", b))
        }
    })
    .ok_or("unnamed adder input")?;
    let out = Simulator::new(&nl, PhaseSchedule::dual(nl.stages))
        .run_vectors(&[v])
        .map_err(|e| e.to_string())?;
    let cout = nl
        .outputs
        .iter()
        .position(|&o| nl.name(o) == "cout")
        .ok_or("no carry output")?;
    Ok(AddResult {
        sum: bus_word(&nl, &out[0], "s"),
        carry: out[0][cout],
        expected: a + b + cin as u64,
        stages: nl.stages,
        gates: nl.gates.len(),
    })
}

#[derive(Debug, Serialize)]
pub struct ThermalProfile {
    /// Channel temperature per transistor, bottom first, K.
    pub channel: Vec<f64>,
    pub top: f64,
    pub peak: f64,
    pub average: f64,
}

/// Two 8-input gates on one nanowire; `hej` junctions go on the topmost
/// transistor of each gate from the top down and bring the power pillars.
pub fn thermal_profile(
    gate_conduction: f64,
    pillars: bool,
    hej: usize,
) -> Result<ThermalProfile, String> {
    if !(0.0..=1.0).contains(&gate_conduction) {
        return Err(format!("gate conduction {gate_conduction} outside [0, 1]"));
    }
    let cfg = Config::default();
    let (spec, _) =
        calibrated_stack(&cfg.materials, &cfg.thermal, 2, 8).map_err(|e| e.to_string())?;
    let top = spec.transistor_count() - 1;
    let positions: Vec<usize> = (0..hej.min(spec.n_gates))
        .map(|i| top - i * spec.series_len())
        .collect();
    let scenario = Scenario {
        gate_conduction,
        hdpp_attached: pillars || !positions.is_empty(),
        hej_positions: positions,
        ..Scenario::default()
    };
    let (_, sol) = stack_scenario(&cfg.materials, &cfg.thermal, &spec, &scenario)
        .map_err(|e| e.to_string())?;
    Ok(ThermalProfile {
        channel: sol.transistors.iter().map(|t| t.channel).collect(),
        top: sol.top(),
        peak: sol.peak,
        average: sol.average,
    })
}

fn json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
        .map(|v| serde_json::to_string(&v).expect("result serializes"))
}

#[wasm_bindgen(js_name = wispRun)]
pub fn wisp_run_js(asm: &str) -> Result<String, JsError> {
    json(wisp_run(asm))
}

#[wasm_bindgen(js_name = claAdd)]
pub fn cla_add_js(width: usize, a: u32, b: u32, cin: bool) -> Result<String, JsError> {
    json(cla_add(width, a as u64, b as u64, cin))
}

#[wasm_bindgen(js_name = thermalProfile)]
pub fn thermal_profile_js(
    gate_conduction: f64,
    pillars: bool,
    hej: usize,
) -> Result<String, JsError> {
    json(thermal_profile(gate_conduction, pillars, hej))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wisp_demo_program() {
        let r = wisp_run("MOVI R0, #3\nMOVI R1, #5\nNOP\nNOP\nMULT R0, R1").unwrap();
        assert!(r.matches_reference && r.hazards.is_empty());
        assert_eq!(r.product, 15);
        assert_eq!(r.regs[0], 15);
        assert_eq!(r.trace.len(), r.pulses);
    }

    #[test]
    fn adder_wraps_and_carries() {
        let r = cla_add(8, 200, 100, true).unwrap();
        assert_eq!((r.sum, r.carry, r.expected), (45, true, 301));
        assert!(cla_add(5, 1, 1, false).is_err());
    }

    #[test]
    fn junction_cools_the_top() {
        let bare = thermal_profile(0.0, false, 0).unwrap();
        let one = thermal_profile(0.0, false, 1).unwrap();
        assert_eq!(bare.channel.len(), 20);
        assert!(one.top < 0.2 * bare.top);
        assert!(thermal_profile(2.0, false, 0).is_err());
    }
}
