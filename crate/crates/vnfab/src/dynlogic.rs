//! Phase-accurate Boolean simulation of clocked dynamic logic.
//!
//! Every gate belongs to a stage. A stage cycles through precharge (output
//! driven to 0), evaluate (output = AND over its NAND terms) and hold
//! (output retained). Outside its active window a stage is idle and its
//! outputs float. An evaluating gate may only read primary inputs, rails
//! and nets whose producer is holding; anything else is reported as a read
//! of a floating net.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

pub type NetId = usize;

/// Largest number of series inputs a NAND term may have.
pub const MAX_FAN_IN: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Value {
    Zero,
    One,
    Floating,
}

impl Value {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Value::One
        } else {
            Value::Zero
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Zero => Some(false),
            Value::One => Some(true),
            Value::Floating => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Value::Zero => '0',
            Value::One => '1',
            Value::Floating => 'z',
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Pre,
    Eva,
    Hold,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Driver {
    PrimaryInput,
    Rail(bool),
    Gate(usize),
    LatchQ(usize),
    LatchQn(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Net {
    pub id: NetId,
    pub name: String,
    pub driver: Driver,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NandTerm {
    pub id: usize,
    pub inputs: Vec<NetId>,
    pub stage: usize,
    pub output: NetId,
}

/// NAND terms sharing one output net; the output is the AND of the terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompoundGate {
    pub output: NetId,
    pub stage: usize,
    pub members: Vec<usize>,
    /// Index into [`Netlist::blocks`].
    pub block: usize,
}

/// 2:1 multiplexer with feedback: when `sel` is 1 the state takes `d`,
/// otherwise it is retained. Equivalent to the compound
/// `AND(NAND(sel, dn), NAND(seln, qn))` closed around its own output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Latch {
    pub q: NetId,
    pub qn: NetId,
    pub stage: usize,
    pub sel: NetId,
    pub seln: NetId,
    pub d: NetId,
    pub dn: NetId,
    pub init: bool,
    pub block: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum NetlistError {
    #[error("net `{0}` is read but never driven")]
    Undriven(String),
    #[error("net `{0}` has more than one driver")]
    MultipleDrivers(String),
    #[error("term driving `{net}` has fan-in {fan_in} (allowed 1..={max})")]
    FanIn {
        net: String,
        fan_in: usize,
        max: usize,
    },
    #[error("gate `{0}` has no terms")]
    EmptyCompound(String),
    #[error("gate `{gate}` at stage {stage} reads `{input}` from stage {input_stage}")]
    StageOrder {
        gate: String,
        stage: usize,
        input: String,
        input_stage: usize,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("slot {slot}: `{reader}` read floating net `{net}`")]
    ReadOfFloating {
        slot: usize,
        net: String,
        reader: String,
    },
    #[error("input vector has {got} values, netlist has {expected} primary inputs")]
    InputWidth { expected: usize, got: usize },
    #[error("slot {slot}: latch `{latch}` select rails disagree")]
    SelectMismatch { slot: usize, latch: String },
    #[error("netlist is a self-timed cell and cannot be run on a stage schedule")]
    SelfTimed,
    #[error("stimulus line {line}: {msg}")]
    Stimulus { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Netlist {
    pub nets: Vec<Net>,
    pub terms: Vec<NandTerm>,
    pub gates: Vec<CompoundGate>,
    pub latches: Vec<Latch>,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
    pub stages: usize,
    /// Functional block names; gates and latches refer to them by index.
    pub blocks: Vec<String>,
    /// Cross-coupled cells (memory) that are sequenced by their own
    /// protocol rather than a stage schedule.
    pub self_timed: bool,
}

impl Netlist {
    pub fn net_id(&self, name: &str) -> Option<NetId> {
        self.nets.iter().position(|n| n.name == name)
    }

    pub fn name(&self, id: NetId) -> &str {
        &self.nets[id].name
    }

    /// Stage of the element driving `net`, `None` for inputs and rails.
    pub fn net_stage(&self, net: NetId) -> Option<usize> {
        match self.nets[net].driver {
            Driver::PrimaryInput | Driver::Rail(_) => None,
            Driver::Gate(g) => Some(self.gates[g].stage),
            Driver::LatchQ(l) | Driver::LatchQn(l) => Some(self.latches[l].stage),
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn max_fan_in(&self) -> usize {
        self.terms.iter().map(|t| t.inputs.len()).max().unwrap_or(0)
    }

    /// Last stage that drives a primary output.
    pub fn output_stage(&self) -> Option<usize> {
        self.outputs.iter().filter_map(|&o| self.net_stage(o)).max()
    }

    pub fn validate(&self) -> Result<(), NetlistError> {
        for t in &self.terms {
            if t.inputs.is_empty() || t.inputs.len() > MAX_FAN_IN {
                return Err(NetlistError::FanIn {
                    net: self.name(t.output).to_string(),
                    fan_in: t.inputs.len(),
                    max: MAX_FAN_IN,
                });
            }
        }
        if self.self_timed {
            return Ok(());
        }
        for g in &self.gates {
            for &m in &g.members {
                for &i in &self.terms[m].inputs {
                    let producer_is_gate = matches!(self.nets[i].driver, Driver::Gate(_));
                    if let (true, Some(s)) = (producer_is_gate, self.net_stage(i)) {
                        if s >= g.stage {
                            return Err(NetlistError::StageOrder {
                                gate: self.name(g.output).to_string(),
                                stage: g.stage,
                                input: self.name(i).to_string(),
                                input_stage: s,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Line-oriented text form, parseable by [`parse_netlist`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let names = |ids: &[NetId]| {
            ids.iter()
                .map(|&i| self.name(i))
                .collect::<Vec<_>>()
                .join(" ")
        };
        if self.self_timed {
            s.push_str("self_timed\n");
        }
        if !self.inputs.is_empty() {
            let _ = writeln!(s, "input {}", names(&self.inputs));
        }
        if !self.outputs.is_empty() {
            let _ = writeln!(s, "output {}", names(&self.outputs));
        }
        for n in &self.nets {
            if let Driver::Rail(v) = n.driver {
                let _ = writeln!(s, "rail {} {}", n.name, v as u8);
            }
        }
        let mut block = 0;
        let mut switch = |s: &mut String, b: usize| {
            if b != block {
                let _ = writeln!(s, "block {}", self.blocks[b]);
                block = b;
            }
        };
        for g in &self.gates {
            switch(&mut s, g.block);
            let terms: Vec<String> = g
                .members
                .iter()
                .map(|&m| names(&self.terms[m].inputs))
                .collect();
            let _ = writeln!(
                s,
                "nand {} {} : {}",
                self.name(g.output),
                g.stage,
                terms.join(" | ")
            );
        }
        for l in &self.latches {
            switch(&mut s, l.block);
            let _ = writeln!(
                s,
                "latch {} {} {} : {} {} {} {} {}",
                self.name(l.q),
                self.name(l.qn),
                l.stage,
                self.name(l.sel),
                self.name(l.seln),
                self.name(l.d),
                self.name(l.dn),
                l.init as u8
            );
        }
        s
    }
}

/// Incremental netlist construction with forward references by name.
#[derive(Debug, Default)]
pub struct NetlistBuilder {
    index: HashMap<String, NetId>,
    names: Vec<String>,
    drivers: Vec<Vec<Driver>>,
    terms: Vec<NandTerm>,
    gates: Vec<CompoundGate>,
    latches: Vec<Latch>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    self_timed: bool,
    blocks: Vec<String>,
    block: usize,
}

/// Block that gates belong to until [`NetlistBuilder::block`] is called.
pub const DEFAULT_BLOCK: &str = "main";

impl NetlistBuilder {
    pub fn new() -> Self {
        Self {
            blocks: vec![DEFAULT_BLOCK.to_string()],
            ..Self::default()
        }
    }

    /// Assigns subsequently added gates and latches to block `name`.
    pub fn block(&mut self, name: &str) {
        self.block = match self.blocks.iter().position(|b| b == name) {
            Some(i) => i,
            None => {
                self.blocks.push(name.to_string());
                self.blocks.len() - 1
            }
        };
    }

    pub fn net(&mut self, name: &str) -> NetId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.drivers.push(Vec::new());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn has(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn input(&mut self, name: &str) -> NetId {
        let id = self.net(name);
        if !self.inputs.contains(&id) {
            self.drivers[id].push(Driver::PrimaryInput);
            self.inputs.push(id);
        }
        id
    }

    pub fn rail(&mut self, name: &str, value: bool) -> NetId {
        let id = self.net(name);
        if self.drivers[id].is_empty() {
            self.drivers[id].push(Driver::Rail(value));
        }
        id
    }

    pub fn output(&mut self, name: &str) -> NetId {
        let id = self.net(name);
        if !self.outputs.contains(&id) {
            self.outputs.push(id);
        }
        id
    }

    pub fn name_of(&self, id: NetId) -> &str {
        &self.names[id]
    }

    /// Renames a net; fails if `name` is taken by another net.
    pub fn rename(&mut self, id: NetId, name: &str) -> bool {
        match self.index.get(name) {
            Some(&other) => other == id,
            None => {
                let old = std::mem::replace(&mut self.names[id], name.to_string());
                self.index.remove(&old);
                self.index.insert(name.to_string(), id);
                true
            }
        }
    }

    pub fn output_id(&mut self, id: NetId) {
        if !self.outputs.contains(&id) {
            self.outputs.push(id);
        }
    }

    pub fn mark_self_timed(&mut self) {
        self.self_timed = true;
    }

    /// Compound gate: `out = AND_i NAND(terms[i])`.
    pub fn compound(&mut self, out: &str, stage: usize, terms: &[Vec<NetId>]) -> NetId {
        let output = self.net(out);
        let gate = self.gates.len();
        let mut members = Vec::with_capacity(terms.len());
        for inputs in terms {
            let id = self.terms.len();
            self.terms.push(NandTerm {
                id,
                inputs: inputs.clone(),
                stage,
                output,
            });
            members.push(id);
        }
        self.gates.push(CompoundGate {
            output,
            stage,
            members,
            block: self.block,
        });
        self.drivers[output].push(Driver::Gate(gate));
        output
    }

    pub fn nand(&mut self, out: &str, stage: usize, inputs: &[NetId]) -> NetId {
        self.compound(out, stage, &[inputs.to_vec()])
    }

    #[allow(clippy::too_many_arguments)]
    pub fn latch(
        &mut self,
        q: &str,
        qn: &str,
        stage: usize,
        sel: NetId,
        seln: NetId,
        d: NetId,
        dn: NetId,
        init: bool,
    ) -> (NetId, NetId) {
        let q = self.net(q);
        let qn = self.net(qn);
        let idx = self.latches.len();
        self.latches.push(Latch {
            q,
            qn,
            stage,
            sel,
            seln,
            d,
            dn,
            init,
            block: self.block,
        });
        self.drivers[q].push(Driver::LatchQ(idx));
        self.drivers[qn].push(Driver::LatchQn(idx));
        (q, qn)
    }

    pub fn build(self) -> Result<Netlist, NetlistError> {
        let mut nets = Vec::with_capacity(self.names.len());
        for (id, (name, drivers)) in self.names.into_iter().zip(self.drivers).enumerate() {
            let driver = match drivers.as_slice() {
                [] => return Err(NetlistError::Undriven(name)),
                [d] => *d,
                _ => return Err(NetlistError::MultipleDrivers(name)),
            };
            nets.push(Net { id, name, driver });
        }
        for g in &self.gates {
            if g.members.is_empty() {
                return Err(NetlistError::EmptyCompound(nets[g.output].name.clone()));
            }
        }
        let stages = self
            .gates
            .iter()
            .map(|g| g.stage + 1)
            .chain(self.latches.iter().map(|l| l.stage + 1))
            .max()
            .unwrap_or(0);
        let netlist = Netlist {
            nets,
            terms: self.terms,
            gates: self.gates,
            latches: self.latches,
            inputs: self.inputs,
            outputs: self.outputs,
            stages,
            blocks: self.blocks,
            self_timed: self.self_timed,
        };
        netlist.validate()?;
        Ok(netlist)
    }
}

/// Parses the text form written by [`Netlist::to_text`]. `#` starts a comment.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut b = NetlistBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| NetlistError::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        let mut words = line.split_whitespace();
        let kw = words.next().unwrap_or_default();
        match kw {
            "self_timed" => b.mark_self_timed(),
            "block" => match (words.next(), words.next()) {
                (Some(name), None) => b.block(name),
                _ => return Err(err("expected `block <name>`")),
            },
            "input" => {
                for w in words {
                    b.input(w);
                }
            }
            "output" => {
                for w in words {
                    b.output(w);
                }
            }
            "rail" => {
                let name = words.next().ok_or_else(|| err("rail needs a name"))?;
                let v = match words.next() {
                    Some("0") => false,
                    Some("1") => true,
                    _ => return Err(err("rail value must be 0 or 1")),
                };
                b.rail(name, v);
            }
            "nand" | "latch" => {
                let (head, body) = line
                    .split_once(':')
                    .ok_or_else(|| err("missing `:` before inputs"))?;
                let head: Vec<&str> = head.split_whitespace().skip(1).collect();
                if kw == "nand" {
                    let [out, stage] = head[..] else {
                        return Err(err("expected `nand <out> <stage> : ...`"));
                    };
                    let stage: usize = stage.parse().map_err(|_| err("bad stage number"))?;
                    let mut terms = Vec::new();
                    for t in body.split('|') {
                        let ins: Vec<NetId> = t.split_whitespace().map(|w| b.net(w)).collect();
                        if ins.is_empty() {
                            return Err(err("empty term"));
                        }
                        terms.push(ins);
                    }
                    b.compound(out, stage, &terms);
                } else {
                    let [q, qn, stage] = head[..] else {
                        return Err(err("expected `latch <q> <qn> <stage> : ...`"));
                    };
                    let stage: usize = stage.parse().map_err(|_| err("bad stage number"))?;
                    let args: Vec<&str> = body.split_whitespace().collect();
                    let [sel, seln, d, dn, init] = args[..] else {
                        return Err(err("latch needs `sel seln d dn init`"));
                    };
                    let init = match init {
                        "0" => false,
                        "1" => true,
                        _ => return Err(err("latch init must be 0 or 1")),
                    };
                    let (sel, seln, d, dn) = (b.net(sel), b.net(seln), b.net(d), b.net(dn));
                    b.latch(q, qn, stage, sel, seln, d, dn, init);
                }
            }
            other => return Err(err(&format!("unknown keyword `{other}`"))),
        }
    }
    b.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RailMode {
    /// Both polarities produced per stage; 3-slot cycle.
    Dual,
    /// Two overlapped 3-phase sequences; 6-slot cycle.
    Single,
}

/// Clock-phase assignment per stage and slot. Stage `s` stays idle until
/// its start slot, so a wave entering stage 0 reaches stage `s` exactly
/// when that stage first evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseSchedule {
    pub mode: RailMode,
    pub stages: usize,
}

impl PhaseSchedule {
    pub fn dual(stages: usize) -> Self {
        Self {
            mode: RailMode::Dual,
            stages,
        }
    }

    pub fn single(stages: usize) -> Self {
        Self {
            mode: RailMode::Single,
            stages,
        }
    }

    pub fn cycle_len(&self) -> usize {
        match self.mode {
            RailMode::Dual => 3,
            RailMode::Single => 6,
        }
    }

    pub fn start_slot(&self, stage: usize) -> usize {
        match self.mode {
            RailMode::Dual => stage,
            RailMode::Single => 3 * stage,
        }
    }

    pub fn phase(&self, stage: usize, slot: usize) -> Phase {
        if slot < self.start_slot(stage) {
            return Phase::Idle;
        }
        match self.mode {
            RailMode::Dual => [Phase::Pre, Phase::Eva, Phase::Hold][(slot - stage) % 3],
            RailMode::Single => {
                const A: [Phase; 6] = [
                    Phase::Pre,
                    Phase::Eva,
                    Phase::Eva,
                    Phase::Hold,
                    Phase::Hold,
                    Phase::Hold,
                ];
                const B: [Phase; 6] = [
                    Phase::Hold,
                    Phase::Hold,
                    Phase::Hold,
                    Phase::Pre,
                    Phase::Eva,
                    Phase::Eva,
                ];
                if stage.is_multiple_of(2) {
                    A[slot % 6]
                } else {
                    B[slot % 6]
                }
            }
        }
    }

    /// Slot at which input vector `c` is applied.
    pub fn input_slot(&self, c: usize) -> usize {
        c * self.cycle_len()
    }

    /// First slot in which `stage` holds its result for input vector `c`.
    pub fn valid_slot(&self, stage: usize, c: usize) -> usize {
        match self.mode {
            RailMode::Dual => 3 * c + stage + 2,
            RailMode::Single => 6 * c + 3 * stage + 3,
        }
    }
}

/// Mutable simulation state: one value per net plus latch contents.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub values: Vec<Value>,
    pub latch_state: Vec<bool>,
}

impl SimState {
    pub fn new(netlist: &Netlist) -> Self {
        let values = netlist
            .nets
            .iter()
            .map(|n| match n.driver {
                Driver::Rail(v) => Value::from_bool(v),
                _ => Value::Floating,
            })
            .collect();
        Self {
            values,
            latch_state: netlist.latches.iter().map(|l| l.init).collect(),
        }
    }
}

fn read(
    netlist: &Netlist,
    phases: &[Phase],
    state: &SimState,
    slot: usize,
    net: NetId,
    reader: NetId,
) -> Result<bool, SimError> {
    let legal = match netlist.nets[net].driver {
        Driver::PrimaryInput | Driver::Rail(_) => true,
        Driver::Gate(g) => phases[netlist.gates[g].stage] == Phase::Hold,
        Driver::LatchQ(l) | Driver::LatchQn(l) => phases[netlist.latches[l].stage] == Phase::Hold,
    };
    match (legal, state.values[net].as_bool()) {
        (true, Some(v)) => Ok(v),
        _ => Err(SimError::ReadOfFloating {
            slot,
            net: netlist.name(net).to_string(),
            reader: netlist.name(reader).to_string(),
        }),
    }
}

/// Advances `state` by one slot. `inputs`, when given, replaces the primary
/// input values (in declaration order) before any gate is evaluated.
pub fn step(
    netlist: &Netlist,
    schedule: &PhaseSchedule,
    slot: usize,
    inputs: Option<&[Value]>,
    state: &mut SimState,
) -> Result<(), SimError> {
    if netlist.self_timed {
        return Err(SimError::SelfTimed);
    }
    if let Some(v) = inputs {
        if v.len() != netlist.inputs.len() {
            return Err(SimError::InputWidth {
                expected: netlist.inputs.len(),
                got: v.len(),
            });
        }
        for (&id, &val) in netlist.inputs.iter().zip(v) {
            state.values[id] = val;
        }
    }
    let phases: Vec<Phase> = (0..netlist.stages.max(schedule.stages))
        .map(|s| schedule.phase(s, slot))
        .collect();

    // Evaluation reads only holding producers, whose values do not change
    // within the slot, so in-place updates are order independent.
    for g in &netlist.gates {
        let out = match phases[g.stage] {
            Phase::Pre => Value::Zero,
            Phase::Idle => Value::Floating,
            Phase::Hold => continue,
            Phase::Eva => {
                let mut all = true;
                for &m in &g.members {
                    let mut and = true;
                    for &i in &netlist.terms[m].inputs {
                        and &= read(netlist, &phases, state, slot, i, g.output)?;
                    }
                    all &= !and;
                }
                Value::from_bool(all)
            }
        };
        state.values[g.output] = out;
    }
    for (k, l) in netlist.latches.iter().enumerate() {
        let (q, qn) = match phases[l.stage] {
            Phase::Pre => (Value::Zero, Value::Zero),
            Phase::Idle => (Value::Floating, Value::Floating),
            Phase::Hold => continue,
            Phase::Eva => {
                let sel = read(netlist, &phases, state, slot, l.sel, l.q)?;
                if let Some(seln) = state.values[l.seln].as_bool() {
                    let seln_legal = read(netlist, &phases, state, slot, l.seln, l.q).is_ok();
                    if seln_legal && seln == sel {
                        return Err(SimError::SelectMismatch {
                            slot,
                            latch: netlist.name(l.q).to_string(),
                        });
                    }
                }
                if sel {
                    state.latch_state[k] = read(netlist, &phases, state, slot, l.d, l.q)?;
                }
                let s = state.latch_state[k];
                (Value::from_bool(s), Value::from_bool(!s))
            }
        };
        state.values[l.q] = q;
        state.values[l.qn] = qn;
    }
    Ok(())
}

/// Owned simulator over one netlist.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    pub netlist: &'a Netlist,
    pub schedule: PhaseSchedule,
    pub state: SimState,
    pub slot: usize,
}

impl<'a> Simulator<'a> {
    pub fn new(netlist: &'a Netlist, schedule: PhaseSchedule) -> Self {
        Self {
            netlist,
            schedule,
            state: SimState::new(netlist),
            slot: 0,
        }
    }

    pub fn step(&mut self, inputs: Option<&[Value]>) -> Result<(), SimError> {
        step(
            self.netlist,
            &self.schedule,
            self.slot,
            inputs,
            &mut self.state,
        )?;
        self.slot += 1;
        Ok(())
    }

    pub fn value(&self, net: NetId) -> Value {
        self.state.values[net]
    }

    /// Streams boolean vectors through the pipeline, one per cycle, and
    /// samples every primary output once its stage holds the result.
    pub fn run_vectors(&mut self, vectors: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, SimError> {
        let n = vectors.len();
        let nl = self.netlist;
        let out_stage: Vec<Option<usize>> = nl.outputs.iter().map(|&o| nl.net_stage(o)).collect();
        let mut results = vec![vec![false; nl.outputs.len()]; n];
        let cycle = self.schedule.cycle_len();
        let schedule = self.schedule;
        let mut pending: Vec<(usize, usize, usize)> = Vec::new();
        for c in 0..n {
            for (k, s) in out_stage.iter().enumerate() {
                let slot = match s {
                    Some(st) => schedule.valid_slot(*st, c),
                    None => schedule.input_slot(c),
                };
                pending.push((slot, c, k));
            }
        }
        pending.sort_unstable();
        let last_slot = pending.last().map_or(0, |p| p.0);
        let mut next = 0;
        let base = self.slot;
        let mut buf = vec![Value::Zero; nl.inputs.len()];
        for t in 0..=last_slot {
            let inputs = if t % cycle == 0 && t / cycle < n {
                let v = &vectors[t / cycle];
                if v.len() != nl.inputs.len() {
                    return Err(SimError::InputWidth {
                        expected: nl.inputs.len(),
                        got: v.len(),
                    });
                }
                for (b, &x) in buf.iter_mut().zip(v) {
                    *b = Value::from_bool(x);
                }
                Some(&buf[..])
            } else {
                None
            };
            step(nl, &self.schedule, base + t, inputs, &mut self.state)?;
            while next < pending.len() && pending[next].0 == t {
                let (_, c, k) = pending[next];
                let net = nl.outputs[k];
                results[c][k] =
                    self.state.values[net]
                        .as_bool()
                        .ok_or_else(|| SimError::ReadOfFloating {
                            slot: base + t,
                            net: nl.name(net).to_string(),
                            reader: "<output sampler>".into(),
                        })?;
                next += 1;
            }
        }
        self.slot = base + last_slot + 1;
        Ok(results)
    }
}

/// Per-slot snapshots plus change events on primary outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimTrace {
    pub snapshots: Vec<Vec<Value>>,
    /// For each primary output, `(slot, value)` at every change.
    pub events: Vec<(NetId, Vec<(usize, Value)>)>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// CSV of value changes for every net: `slot,net,value`.
    pub fn to_csv(&self, netlist: &Netlist) -> String {
        let mut s = String::from("slot,net,value\n");
        let mut prev: Option<&Vec<Value>> = None;
        for (t, snap) in self.snapshots.iter().enumerate() {
            for (id, v) in snap.iter().enumerate() {
                if prev.is_none_or(|p| p[id] != *v) {
                    let _ = writeln!(s, "{t},{},{}", netlist.name(id), v);
                }
            }
            prev = Some(snap);
        }
        s
    }
}

/// Applies one input vector per cycle and runs until the last vector has
/// reached the deepest stage.
pub fn run(
    netlist: &Netlist,
    schedule: &PhaseSchedule,
    input_stream: &[Vec<Value>],
) -> Result<SimTrace, SimError> {
    let stages = netlist.stages.max(1);
    let n = input_stream.len();
    let total = if n == 0 {
        0
    } else {
        schedule.valid_slot(stages - 1, n - 1) + 1
    };
    let mut state = SimState::new(netlist);
    let mut snapshots = Vec::with_capacity(total);
    let mut events: Vec<(NetId, Vec<(usize, Value)>)> =
        netlist.outputs.iter().map(|&o| (o, Vec::new())).collect();
    let cycle = schedule.cycle_len();
    for t in 0..total {
        let inputs = if t % cycle == 0 && t / cycle < n {
            Some(input_stream[t / cycle].as_slice())
        } else {
            None
        };
        step(netlist, schedule, t, inputs, &mut state)?;
        for (net, ev) in events.iter_mut() {
            let v = state.values[*net];
            if ev.last().is_none_or(|&(_, last)| last != v) {
                ev.push((t, v));
            }
        }
        snapshots.push(state.values.clone());
    }
    Ok(SimTrace { snapshots, events })
}

/// Stimulus file: a header of input names, then one row of 0/1 per cycle.
/// Columns may be in any order; the result follows the netlist's input order.
pub fn parse_stimulus(netlist: &Netlist, text: &str) -> Result<Vec<Vec<Value>>, SimError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let split = |l: &str| -> Vec<String> {
        l.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect()
    };
    let Some((hline, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let header = split(header);
    let mut column = Vec::with_capacity(netlist.inputs.len());
    for &id in &netlist.inputs {
        let name = netlist.name(id);
        let pos = header
            .iter()
            .position(|h| h == name)
            .ok_or(SimError::Stimulus {
                line: hline,
                msg: format!("missing column for input `{name}`"),
            })?;
        column.push(pos);
    }
    let mut rows = Vec::new();
    for (line, l) in lines {
        let cells = split(l);
        if cells.len() != header.len() {
            return Err(SimError::Stimulus {
                line,
                msg: format!("expected {} values, got {}", header.len(), cells.len()),
            });
        }
        let mut row = Vec::with_capacity(column.len());
        for &c in &column {
            row.push(match cells[c].as_str() {
                "0" => Value::Zero,
                "1" => Value::One,
                other => {
                    return Err(SimError::Stimulus {
                        line,
                        msg: format!("value `{other}` is not 0 or 1"),
                    })
                }
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Elmore delay of an `m`-deep series stack driving `c_load`, seconds.
pub fn stack_delay(m: usize, r_on: f64, c_load: f64, c_node: f64) -> f64 {
    let m_f = m as f64;
    let internal: f64 = (1..=m).map(|i| i as f64 * r_on * c_node).sum();
    internal + m_f * r_on * c_load
}

/// Floating-node voltage after a full-swing aggressor couples through
/// `c_couple`. Shielding adds to `c_self`.
pub fn charge_share(v0: f64, c_self: f64, c_couple: f64) -> f64 {
    if c_self + c_couple == 0.0 {
        return v0;
    }
    v0 * c_self / (c_self + c_couple)
}

/// Coefficient of determination of the least-squares line through `(x, y)`.
pub fn linear_r2(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    sxy * sxy / (sxx * syy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(bits: &[u8]) -> Vec<Value> {
        bits.iter().map(|&b| Value::from_bool(b != 0)).collect()
    }

    #[test]
    fn nand_truth_table() {
        let mut b = NetlistBuilder::new();
        let a = b.input("a");
        let c = b.input("b");
        b.nand("y", 0, &[a, c]);
        b.output("y");
        let nl = b.build().unwrap();
        let mut sim = Simulator::new(&nl, PhaseSchedule::dual(1));
        let out = sim
            .run_vectors(&[vec![true, true], vec![true, false], vec![false, false]])
            .unwrap();
        assert_eq!(out, vec![vec![false], vec![true], vec![true]]);
    }

    #[test]
    fn xor_compound() {
        let nl = parse_netlist("input a an b bn\noutput x\nnand x 0 : a b | an bn\n").unwrap();
        let mut sim = Simulator::new(&nl, PhaseSchedule::dual(1));
        let out = sim
            .run_vectors(&[
                vec![true, false, false, true],
                vec![true, false, true, false],
            ])
            .unwrap();
        assert_eq!(out, vec![vec![true], vec![false]]);
    }

    #[test]
    fn read_during_precharge_is_an_error() {
        // stage-2 gate reading a stage-0 net sees it precharging
        let nl = parse_netlist("input a\noutput z\nnand y 0 : a\nnand z 2 : y\n").unwrap();
        let err = run(&nl, &PhaseSchedule::dual(3), &[vals(&[1]), vals(&[0])]).unwrap_err();
        assert!(matches!(err, SimError::ReadOfFloating { ref net, .. } if net == "y"));
    }

    #[test]
    fn text_round_trip() {
        let text = "input a an s sn\noutput q\nrail one 1\nnand x 0 : a one | an\nlatch q qn 1 : s sn x an 1\n";
        let nl = parse_netlist(text).unwrap();
        assert_eq!(parse_netlist(&nl.to_text()).unwrap(), nl);
        assert!(matches!(
            parse_netlist("nand x 0 a b"),
            Err(NetlistError::Parse { line: 1, .. })
        ));
        assert_eq!(
            parse_netlist("output y\nnand y 0 : ghost"),
            Err(NetlistError::Undriven("ghost".into()))
        );
    }

    #[test]
    fn single_rail_schedule_orders_phases() {
        let s = PhaseSchedule::single(4);
        for stage in 0..4 {
            let start = s.start_slot(stage);
            assert_eq!(s.phase(stage, start), Phase::Pre);
            for t in start..start + 12 {
                if s.phase(stage, t) == Phase::Eva && stage > 0 {
                    assert_eq!(s.phase(stage - 1, t), Phase::Hold);
                }
            }
        }
    }

    #[test]
    fn elmore_stack() {
        assert_eq!(stack_delay(1, 2.0, 3.0, 5.0), 2.0 * 8.0);
        assert_eq!(stack_delay(4, 1.0, 2.0, 0.0), 8.0);
        assert_eq!(stack_delay(3, 1.0, 0.0, 1.0), 6.0);
    }

    #[test]
    fn charge_sharing() {
        assert_eq!(charge_share(0.8, 1.0, 0.0), 0.8);
        assert!((charge_share(0.8, 1.0, 0.379) - 0.58).abs() < 1e-3);
        assert!(charge_share(0.8, 1.5, 0.379) > charge_share(0.8, 1.0, 0.379));
    }
}
