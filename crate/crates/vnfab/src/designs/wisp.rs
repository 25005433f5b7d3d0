//! Gate-level 4-bit five-stage pipelined processor.
//!
//! Each pipeline register is a bank of select latches. Logic between
//! latches is itself a chain of dynamic stages, so a pipeline clock (a
//! "macro-cycle") spans several dynamic-logic cycles: long enough for the
//! deepest latch-to-latch path to settle. The shared enable input `en`
//! pulses for one dynamic-logic cycle per macro-cycle, and every latch
//! captures its input on that pulse.
//!
//! Stages: fetch (PC, incrementer, 4:16 decoder, ROM), decode (opcode
//! lines), register read (4:1 multiplexers), execute (adder, multiplier,
//! result multiplexer), write-back (register file with recirculating
//! 2:1 multiplexers).

use serde::Serialize;

use super::arith::{cla_core, multiplier_core};
use super::builder::{DualBuilder, PendingLatch, Sig, Term};
use super::isa::{Instruction, Opcode, RomImage, WispState};
use super::memory::{decoder_core, rom_core, ROM_BITS, ROM_WORDS};
use super::DesignError;
use crate::dynlogic::{Netlist, PhaseSchedule, Simulator, Value};

/// Pipeline depth in macro-cycles from fetch to register write.
pub const PIPELINE_DEPTH: usize = 5;

/// NOPs needed between an instruction and one that reads its result. An
/// instruction fetched at pulse `i` writes the register file at pulse
/// `i + 5`; a later instruction `j` latches its operands at pulse `j + 3`
/// from the register file as it stood after pulse `j + 2`. So `j ≥ i + 3`.
pub const REQUIRED_NOPS: usize = 2;

#[derive(Debug, Clone, Serialize)]
pub struct WispDesign {
    pub netlist: Netlist,
    /// Dynamic-logic cycles per pipeline clock.
    pub macro_cycle: usize,
    /// Latch indices, lowest bit first.
    pub pc: Vec<usize>,
    pub regs: Vec<Vec<usize>>,
    pub product: Vec<usize>,
}

fn inv(s: Sig) -> Sig {
    Sig {
        t: s.f,
        f: s.t,
        ..s
    }
}

fn decls(b: &mut DualBuilder, name: &str, n: usize, init: bool) -> Vec<PendingLatch> {
    (0..n)
        .map(|i| b.latch_decl(&format!("{name}{i}"), 0, init))
        .collect()
}

fn outs(l: &[PendingLatch]) -> Vec<Sig> {
    l.iter().map(|p| p.out).collect()
}

/// Builds the processor with `rom` preconfigured into the fetch stage.
pub fn gen_wisp4(rom: &RomImage) -> Result<WispDesign, DesignError> {
    let mut b = DualBuilder::new(8);
    let en = b.control("en");
    let zero = b.constant(false);
    let one = b.constant(true);

    let ops = Opcode::ALL;
    let op_decl = |b: &mut DualBuilder, prefix: &str| -> Vec<PendingLatch> {
        ops.iter()
            .map(|o| {
                let name = format!("{prefix}_{}", o.mnemonic().to_lowercase());
                b.latch_decl(&name, 0, *o == Opcode::Nop)
            })
            .collect()
    };

    let pc = decls(&mut b, "pc", 4, false);
    let ir = decls(&mut b, "ir", ROM_BITS, false);
    let id_op = op_decl(&mut b, "id");
    let id_rd = decls(&mut b, "id_rd", 2, false);
    let id_f = decls(&mut b, "id_f", 4, false);
    let ex_a = decls(&mut b, "ex_a", 4, false);
    let ex_b = decls(&mut b, "ex_b", 4, false);
    let ex_imm = decls(&mut b, "ex_imm", 4, false);
    let ex_op = op_decl(&mut b, "ex");
    let ex_rd = decls(&mut b, "ex_rd", 2, false);
    let wb_res = decls(&mut b, "wb_res", 4, false);
    let wb_rd = decls(&mut b, "wb_rd", 2, false);
    let wb_we = b.latch_decl("wb_we", 0, false);
    let wb_mult = b.latch_decl("wb_mult", 0, false);
    let wb_prod = decls(&mut b, "wb_prod", 8, false);
    let regs: Vec<Vec<PendingLatch>> = (0..4)
        .map(|r| decls(&mut b, &format!("r{r}_"), 4, false))
        .collect();
    let product = decls(&mut b, "product", 8, false);

    let mut deepest = 0i64;
    let mut connect =
        |b: &mut DualBuilder, l: &[PendingLatch], d: &[Sig]| -> Result<(), DesignError> {
            for (latch, sig) in l.iter().zip(d) {
                deepest = deepest.max(b.latch_connect(*latch, en, *sig)?);
            }
            Ok(())
        };

    b.nb.block("pc");
    let pc_q = outs(&pc);
    let inc = cla_core(&mut b, &pc_q, &[one, zero, zero, zero], zero)?;
    connect(&mut b, &pc, &inc.sum)?;
    b.nb.block("rom");
    let lines = decoder_core(&mut b, "fetch", &pc_q)?;
    let words: Vec<Vec<bool>> = (0..ROM_WORDS).map(|w| rom.bits(w)).collect();
    let word = rom_core(&mut b, "rom", &lines, &words, ROM_BITS)?;
    connect(&mut b, &ir, &word)?;

    b.nb.block("decode");
    let ir_q = outs(&ir);
    let mut op_lines = Vec::new();
    for o in ops {
        let lits: Vec<_> = (0..3)
            .map(|i| {
                if o.code() >> i & 1 == 1 {
                    ir_q[6 + i].pos()
                } else {
                    ir_q[6 + i].neg()
                }
            })
            .collect();
        op_lines.push(b.and(&format!("op_{}", o.mnemonic().to_lowercase()), &lits)?);
    }
    connect(&mut b, &id_op, &op_lines)?;
    connect(&mut b, &id_rd, &ir_q[4..6])?;
    connect(&mut b, &id_f, &ir_q[0..4])?;

    b.nb.block("read");
    let reg_q: Vec<Vec<Sig>> = regs.iter().map(|r| outs(r)).collect();
    let rd_lines = decoder_core(&mut b, "rd_sel", &outs(&id_rd))?;
    let id_f_q = outs(&id_f);
    let rs_lines = decoder_core(&mut b, "rs_sel", &id_f_q[0..2])?;
    let mut a_val = Vec::new();
    let mut b_val = Vec::new();
    for bit in 0..4 {
        let arms: Vec<_> = (0..4).map(|r| (rd_lines[r], Some(reg_q[r][bit]))).collect();
        a_val.push(b.mux(&format!("read_a{bit}"), &arms)?);
        let arms: Vec<_> = (0..4).map(|r| (rs_lines[r], Some(reg_q[r][bit]))).collect();
        b_val.push(b.mux(&format!("read_b{bit}"), &arms)?);
    }
    connect(&mut b, &ex_a, &a_val)?;
    connect(&mut b, &ex_b, &b_val)?;
    connect(&mut b, &ex_imm, &id_f_q)?;
    connect(&mut b, &ex_op, &outs(&id_op))?;
    connect(&mut b, &ex_rd, &outs(&id_rd))?;

    let (a_q, b_q, imm_q, op_q) = (outs(&ex_a), outs(&ex_b), outs(&ex_imm), outs(&ex_op));
    let line = |o: Opcode| op_q[ops.iter().position(|x| *x == o).expect("opcode listed")];
    b.nb.block("adder");
    let sum = cla_core(&mut b, &a_q, &b_q, zero)?.sum;
    b.nb.block("multiplier");
    let prod = multiplier_core(&mut b, &a_q, &b_q)?;
    b.nb.block("select");
    let mut res = Vec::new();
    for bit in 0..4 {
        let arms = [
            (line(Opcode::Add), Some(sum[bit])),
            (line(Opcode::Mult), Some(prod[bit])),
            (line(Opcode::Mov), Some(b_q[bit])),
            (line(Opcode::Movi), Some(imm_q[bit])),
            (line(Opcode::Nop), None),
        ];
        res.push(b.mux(&format!("result{bit}"), &arms)?);
    }
    let writers: Vec<Term> = ops
        .iter()
        .filter(|o| o.writes())
        .map(|o| vec![line(*o).pos()])
        .collect();
    let we = b.sop("we", &writers, &[vec![line(Opcode::Nop).pos()]])?;
    connect(&mut b, &wb_res, &res)?;
    connect(&mut b, &wb_rd, &outs(&ex_rd))?;
    connect(&mut b, &[wb_we], &[we])?;
    connect(&mut b, &[wb_mult], &[line(Opcode::Mult)])?;
    connect(&mut b, &wb_prod, &prod)?;

    b.nb.block("regfile");
    let wb_rd_q = outs(&wb_rd);
    let res_q = outs(&wb_res);
    for r in 0..4 {
        let mut lits = vec![wb_we.out.pos()];
        for (i, rd) in wb_rd_q.iter().enumerate() {
            lits.push(if r >> i & 1 == 1 { rd.pos() } else { rd.neg() });
        }
        let we_r = b.and(&format!("we_r{r}"), &lits)?;
        let next: Vec<Sig> = (0..4)
            .map(|bit| {
                b.mux(
                    &format!("next_r{r}_{bit}"),
                    &[(we_r, Some(res_q[bit])), (inv(we_r), Some(reg_q[r][bit]))],
                )
            })
            .collect::<Result<_, _>>()?;
        connect(&mut b, &regs[r], &next)?;
    }
    let prod_q = outs(&wb_prod);
    let product_q = outs(&product);
    let next_product: Vec<Sig> = (0..8)
        .map(|bit| {
            b.mux(
                &format!("next_product{bit}"),
                &[
                    (wb_mult.out, Some(prod_q[bit])),
                    (inv(wb_mult.out), Some(product_q[bit])),
                ],
            )
        })
        .collect::<Result<_, _>>()?;
    connect(&mut b, &product, &next_product)?;

    for r in 0..4 {
        for bit in 0..4 {
            b.nb.output_id(reg_q[r][bit].t);
        }
    }
    for s in &pc_q {
        b.nb.output_id(s.t);
    }
    let netlist = b.finish()?;
    let find = |name: String| -> Result<usize, DesignError> {
        netlist
            .latches
            .iter()
            .position(|l| netlist.name(l.q) == name)
            .ok_or_else(|| DesignError::Structure(format!("latch `{name}` missing")))
    };
    let pc = (0..4)
        .map(|i| find(format!("pc{i}")))
        .collect::<Result<_, _>>()?;
    let regs = (0..4)
        .map(|r| {
            (0..4)
                .map(|i| find(format!("r{r}_{i}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let product = (0..8)
        .map(|i| find(format!("product{i}")))
        .collect::<Result<_, _>>()?;
    // a latch at stage 0 reading stage `deepest` sees a wave launched
    // `deepest + 1` slots earlier
    let macro_cycle = ((deepest + 1) as usize).div_ceil(3);
    Ok(WispDesign {
        netlist,
        macro_cycle,
        pc,
        regs,
        product,
    })
}

/// Read-after-write pairs `(writer, reader)` in the first `n` executed
/// instructions that are closer than the pipeline allows.
pub fn raw_hazards(rom: &RomImage, n: usize) -> Result<Vec<(usize, usize)>, DesignError> {
    let stream: Vec<Instruction> = (0..n)
        .map(|i| Instruction::decode(rom.0[i % ROM_WORDS]))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (j, ins) in stream.iter().enumerate() {
        for i in j.saturating_sub(REQUIRED_NOPS)..j {
            if let Some(r) = stream[i].writes() {
                if ins.reads().contains(&r) {
                    out.push((i, j));
                }
            }
        }
    }
    Ok(out)
}

/// Pipeline state sampled right after an enable pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PipelineSnapshot {
    pub pulse: usize,
    pub fetch_pc: u8,
    pub regs: [u8; 4],
    pub product: u8,
}

impl PipelineSnapshot {
    /// Instructions whose write-back has completed.
    pub fn retired(&self) -> usize {
        self.pulse.saturating_sub(PIPELINE_DEPTH - 1)
    }

    pub fn architectural(&self, rom: &RomImage) -> WispState {
        let retired = self.retired();
        WispState {
            pc: (retired % ROM_WORDS) as u8,
            regs: self.regs,
            product: self.product,
            retired,
            rom: *rom,
        }
    }
}

/// Gate-level processor driven through the dynamic-logic simulator.
#[derive(Debug, Clone)]
pub struct WispMachine {
    pub rom: RomImage,
    pub design: WispDesign,
}

impl WispMachine {
    pub fn new(rom: RomImage) -> Result<Self, DesignError> {
        Ok(Self {
            design: gen_wisp4(&rom)?,
            rom,
        })
    }

    /// Dynamic-logic cycles before the first enable pulse; every stage is
    /// active and settled by then.
    pub fn warmup_cycles(&self) -> usize {
        self.design
            .macro_cycle
            .max(self.design.netlist.stages.div_ceil(3))
    }

    /// Dynamic-logic cycles simulated for `pulses` pipeline clocks.
    pub fn cycles_for(&self, pulses: usize) -> usize {
        if pulses == 0 {
            return 0;
        }
        self.warmup_cycles() + (pulses - 1) * self.design.macro_cycle + 1
    }

    /// Runs `pulses` pipeline clocks and returns the state after each.
    pub fn run(&self, pulses: usize) -> Result<Vec<PipelineSnapshot>, DesignError> {
        let nl = &self.design.netlist;
        let mut sim = Simulator::new(nl, PhaseSchedule::dual(nl.stages));
        let m = self.design.macro_cycle;
        let first = self.warmup_cycles();
        let mut snaps = Vec::with_capacity(pulses);
        let word = |sim: &Simulator, idx: &[usize]| -> u8 {
            idx.iter().enumerate().fold(0u8, |acc, (i, &l)| {
                acc | (sim.state.latch_state[l] as u8) << i
            })
        };
        for c in 0..self.cycles_for(pulses) {
            let pulse = c >= first && (c - first).is_multiple_of(m);
            let en = [Value::from_bool(pulse), Value::from_bool(!pulse)];
            sim.step(Some(&en))?;
            // latches sit at stage 0 and evaluate in the cycle's second slot
            sim.step(None)?;
            if pulse {
                let regs = [0, 1, 2, 3].map(|r| word(&sim, &self.design.regs[r]));
                snaps.push(PipelineSnapshot {
                    pulse: snaps.len() + 1,
                    fetch_pc: word(&sim, &self.design.pc),
                    regs,
                    product: word(&sim, &self.design.product),
                });
            }
            sim.step(None)?;
        }
        Ok(snaps)
    }

    /// Pulses needed to retire the first `n` instructions.
    pub fn pulses_to_retire(n: usize) -> usize {
        n + PIPELINE_DEPTH - 1
    }
}
