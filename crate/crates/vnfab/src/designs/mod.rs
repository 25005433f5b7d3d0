//! Circuit generators built on the dynamic-logic netlist: lookahead adders,
//! an array multiplier, decoders, ROM, latches, the NAND memory cell and a
//! small pipelined processor.
//!
//! Generated netlists use dual-rail primary inputs: every input `x` comes
//! with a complement `x_n`. [`dual_inputs`] expands a plain assignment.

pub mod arith;
mod builder;
pub mod isa;
pub mod memory;
pub mod wisp;

use thiserror::Error;

use crate::dynlogic::{Netlist, NetlistError, SimError};

pub use arith::{gen_cla, gen_multiplier4, ClaSpec, MULTIPLIER_OUTPUT_STAGE};
pub use builder::INPUT_STAGE;
pub use isa::{
    assemble, disassemble, parse_program, wisp_reference, Instruction, Opcode, RomImage, WispState,
};
pub use memory::{gen_decoder, gen_latch, gen_nwram, gen_rom, NwramCell, NwramControls};
pub use wisp::{gen_wisp4, raw_hazards, PipelineSnapshot, WispDesign, WispMachine, REQUIRED_NOPS};

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("{0}")]
    Structure(String),
    #[error("gate `{gate}` needs fan-in {fan_in}, limit is {max}")]
    FanIn {
        gate: String,
        fan_in: usize,
        max: usize,
    },
    #[error("{words} words exceed capacity {max}")]
    Capacity { words: usize, max: usize },
    #[error("memory-cell protocol violation: {0}")]
    Protocol(String),
    #[error("line {line}: {msg}")]
    Asm { line: usize, msg: String },
    #[error("illegal instruction word {word:#011b}")]
    Decode { word: u16 },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Expands named bit values into the input vector of `netlist`: `x` takes
/// `value(x)`, `x_n` its complement. Returns `None` for an unnamed input.
pub fn dual_inputs(netlist: &Netlist, value: impl Fn(&str) -> Option<bool>) -> Option<Vec<bool>> {
    netlist
        .inputs
        .iter()
        .map(|&id| {
            let name = netlist.name(id);
            match name.strip_suffix("_n") {
                Some(base) => value(base).map(|v| !v),
                None => value(name),
            }
        })
        .collect()
}

/// Bit `i` of a bus named `prefix{i}` taken from `word`.
pub fn bus_bit(name: &str, prefix: &str, word: u64) -> Option<bool> {
    let i: u32 = name.strip_prefix(prefix)?.parse().ok()?;
    Some(word >> i & 1 == 1)
}

/// Collects outputs named `prefix{i}` (ignoring complements) into a word.
pub fn bus_word(netlist: &Netlist, outputs: &[bool], prefix: &str) -> u64 {
    netlist
        .outputs
        .iter()
        .zip(outputs)
        .filter_map(|(&id, &v)| {
            let i: u32 = netlist.name(id).strip_prefix(prefix)?.parse().ok()?;
            Some(if v { 1u64 << i } else { 0 })
        })
        .sum()
}
