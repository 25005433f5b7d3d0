//! Dual-rail construction helper: every signal is a (true, complement) pair
//! produced at a known stage. Gates are placed one stage after their latest
//! input and earlier inputs are carried forward through buffer pairs, so
//! every gate reads exactly the previous stage.

use std::collections::HashMap;

use crate::dynlogic::{NetId, Netlist, NetlistBuilder};

use super::DesignError;

/// Stage of primary inputs; they are consumed by stage 0.
pub const INPUT_STAGE: i64 = -1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sig {
    pub t: NetId,
    pub f: NetId,
    pub stage: i64,
    /// Rail constants are readable at any stage.
    pub konst: Option<bool>,
}

impl Sig {
    pub fn pos(self) -> Lit {
        Lit {
            sig: self,
            pos: true,
        }
    }

    pub fn neg(self) -> Lit {
        Lit {
            sig: self,
            pos: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit {
    pub sig: Sig,
    pub pos: bool,
}

pub type Term = Vec<Lit>;

/// Handle for a latch whose data input is connected later.
#[derive(Debug, Clone, Copy)]
pub struct PendingLatch {
    pub out: Sig,
    name_idx: usize,
}

#[derive(Debug)]
struct LatchDecl {
    q: String,
    qn: String,
    stage: usize,
    init: bool,
    connected: bool,
}

pub struct DualBuilder {
    pub nb: NetlistBuilder,
    max_fan_in: usize,
    counter: HashMap<String, usize>,
    delays: HashMap<(NetId, i64), Sig>,
    /// Buffer output net → the signal its chain started from.
    origin: HashMap<NetId, Sig>,
    one: Option<Sig>,
    zero: Option<Sig>,
    latches: Vec<LatchDecl>,
}

impl DualBuilder {
    pub fn new(max_fan_in: usize) -> Self {
        Self {
            nb: NetlistBuilder::new(),
            max_fan_in,
            counter: HashMap::new(),
            delays: HashMap::new(),
            origin: HashMap::new(),
            one: None,
            zero: None,
            latches: Vec::new(),
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        let n = self.counter.entry(base.to_string()).or_insert(0);
        let name = if *n == 0 {
            base.to_string()
        } else {
            format!("{base}.{n}")
        };
        *n += 1;
        if self.nb.has(&name) {
            return self.fresh(&format!("{base}_"));
        }
        name
    }

    /// Dual-rail primary input `name` / `name_n`.
    pub fn input(&mut self, name: &str) -> Sig {
        let t = self.nb.input(name);
        let f = self.nb.input(&format!("{name}_n"));
        Sig {
            t,
            f,
            stage: INPUT_STAGE,
            konst: None,
        }
    }

    /// Single-rail primary input used as a select line; `name_n` is its
    /// complement, also a primary input.
    pub fn control(&mut self, name: &str) -> Sig {
        self.input(name)
    }

    pub fn constant(&mut self, v: bool) -> Sig {
        let slot = if v { self.one } else { self.zero };
        if let Some(s) = slot {
            return s;
        }
        let hi = self.nb.rail("vdd", true);
        let lo = self.nb.rail("gnd", false);
        let s = Sig {
            t: if v { hi } else { lo },
            f: if v { lo } else { hi },
            stage: INPUT_STAGE,
            konst: Some(v),
        };
        if v {
            self.one = Some(s);
        } else {
            self.zero = Some(s);
        }
        s
    }

    /// Carries `sig` forward to `stage` through buffer pairs.
    pub fn delay(&mut self, sig: Sig, stage: i64) -> Result<Sig, DesignError> {
        if sig.konst.is_some() || sig.stage == stage {
            return Ok(sig);
        }
        if stage < sig.stage {
            return Err(DesignError::Structure(format!(
                "cannot move `{}` back from stage {} to {stage}",
                self.nb.name_of(sig.t),
                sig.stage
            )));
        }
        if let Some(&root) = self.origin.get(&sig.t) {
            return self.delay(root, stage);
        }
        if let Some(&s) = self.delays.get(&(sig.t, stage)) {
            return Ok(s);
        }
        let prev = self.delay(sig, stage - 1)?;
        let root = self.nb.name_of(sig.t);
        let root = root.split('@').next().unwrap_or(root).to_string();
        let base = format!("{root}@{stage}");
        let tn = self.fresh(&base);
        let fn_ = self.fresh(&format!("{base}_n"));
        let st = stage as usize;
        let t = self.nb.nand(&tn, st, &[prev.f]);
        let f = self.nb.nand(&fn_, st, &[prev.t]);
        let out = Sig {
            t,
            f,
            stage,
            konst: None,
        };
        self.delays.insert((sig.t, stage), out);
        self.origin.insert(t, sig);
        Ok(out)
    }

    /// Places the pair `X = OR(hi)`, `X̄ = OR(lo)`. The true rail is the
    /// compound `AND_k NAND(lo_k)` and the complement `AND_k NAND(hi_k)`,
    /// so `hi` and `lo` must be complementary sum-of-products covers.
    pub fn sop(&mut self, name: &str, hi: &[Term], lo: &[Term]) -> Result<Sig, DesignError> {
        self.sop_at(name, hi, lo, 0)
    }

    /// As [`Self::sop`], placed no earlier than `min_stage`.
    pub fn sop_at(
        &mut self,
        name: &str,
        hi: &[Term],
        lo: &[Term],
        min_stage: i64,
    ) -> Result<Sig, DesignError> {
        if hi.is_empty() {
            return Ok(self.constant(false));
        }
        if lo.is_empty() {
            return Ok(self.constant(true));
        }
        let latest = hi
            .iter()
            .chain(lo)
            .flatten()
            .filter(|l| l.sig.konst.is_none())
            .map(|l| l.sig.stage)
            .max()
            .unwrap_or(INPUT_STAGE);
        let stage = (latest + 1).max(min_stage).max(0);
        for term in hi.iter().chain(lo) {
            if term.len() > self.max_fan_in {
                return Err(DesignError::FanIn {
                    gate: name.to_string(),
                    fan_in: term.len(),
                    max: self.max_fan_in,
                });
            }
        }
        let nets = |terms: &[Term], me: &mut Self| -> Result<Vec<Vec<NetId>>, DesignError> {
            let mut out = Vec::with_capacity(terms.len());
            for term in terms {
                let mut ins = Vec::with_capacity(term.len());
                for l in term {
                    let s = me.delay(l.sig, stage - 1)?;
                    ins.push(if l.pos { s.t } else { s.f });
                }
                out.push(ins);
            }
            Ok(out)
        };
        let lo_nets = nets(lo, self)?;
        let hi_nets = nets(hi, self)?;
        let tn = self.fresh(name);
        let fn_ = self.fresh(&format!("{name}_n"));
        let t = self.nb.compound(&tn, stage as usize, &lo_nets);
        let f = self.nb.compound(&fn_, stage as usize, &hi_nets);
        Ok(Sig {
            t,
            f,
            stage,
            konst: None,
        })
    }

    pub fn and(&mut self, name: &str, lits: &[Lit]) -> Result<Sig, DesignError> {
        let hi = vec![lits.to_vec()];
        let lo: Vec<Term> = lits.iter().map(|l| vec![not(*l)]).collect();
        self.sop(name, &hi, &lo)
    }

    pub fn or(&mut self, name: &str, lits: &[Lit]) -> Result<Sig, DesignError> {
        let hi: Vec<Term> = lits.iter().map(|l| vec![*l]).collect();
        let lo = vec![lits.iter().map(|l| not(*l)).collect()];
        self.sop(name, &hi, &lo)
    }

    pub fn xor2(&mut self, name: &str, x: Sig, y: Sig) -> Result<Sig, DesignError> {
        self.sop(
            name,
            &[vec![x.pos(), y.neg()], vec![x.neg(), y.pos()]],
            &[vec![x.pos(), y.pos()], vec![x.neg(), y.neg()]],
        )
    }

    pub fn xor3(&mut self, name: &str, x: Sig, y: Sig, z: Sig) -> Result<Sig, DesignError> {
        self.sop(
            name,
            &[
                vec![x.pos(), y.pos(), z.pos()],
                vec![x.pos(), y.neg(), z.neg()],
                vec![x.neg(), y.pos(), z.neg()],
                vec![x.neg(), y.neg(), z.pos()],
            ],
            &[
                vec![x.neg(), y.neg(), z.neg()],
                vec![x.neg(), y.pos(), z.pos()],
                vec![x.pos(), y.neg(), z.pos()],
                vec![x.pos(), y.pos(), z.neg()],
            ],
        )
    }

    pub fn maj3(&mut self, name: &str, x: Sig, y: Sig, z: Sig) -> Result<Sig, DesignError> {
        self.sop(
            name,
            &[
                vec![x.pos(), y.pos()],
                vec![x.pos(), z.pos()],
                vec![y.pos(), z.pos()],
            ],
            &[
                vec![x.neg(), y.neg()],
                vec![x.neg(), z.neg()],
                vec![y.neg(), z.neg()],
            ],
        )
    }

    /// One-hot selection `OR_k sel_k·data_k`. A select with `None` data
    /// contributes a constant 0.
    pub fn mux(&mut self, name: &str, arms: &[(Sig, Option<Sig>)]) -> Result<Sig, DesignError> {
        let mut hi = Vec::new();
        let mut lo = Vec::new();
        for &(sel, data) in arms {
            match data {
                Some(d) => {
                    hi.push(vec![sel.pos(), d.pos()]);
                    lo.push(vec![sel.pos(), d.neg()]);
                }
                None => lo.push(vec![sel.pos()]),
            }
        }
        self.sop(name, &hi, &lo)
    }

    /// Declares a latch at `stage`; connect its select and data later.
    pub fn latch_decl(&mut self, name: &str, stage: usize, init: bool) -> PendingLatch {
        let q = self.fresh(name);
        let qn = self.fresh(&format!("{name}_n"));
        let t = self.nb.net(&q);
        let f = self.nb.net(&qn);
        self.latches.push(LatchDecl {
            q,
            qn,
            stage,
            init,
            connected: false,
        });
        PendingLatch {
            out: Sig {
                t,
                f,
                stage: stage as i64,
                konst: None,
            },
            name_idx: self.latches.len() - 1,
        }
    }

    /// Connects a latch. The data pair is carried forward to the first stage
    /// at or after its own that the latch can read while that stage holds;
    /// returns that stage.
    pub fn latch_connect(
        &mut self,
        latch: PendingLatch,
        sel: Sig,
        d: Sig,
    ) -> Result<i64, DesignError> {
        let decl = &self.latches[latch.name_idx];
        if decl.connected {
            return Err(DesignError::Structure(format!(
                "latch `{}` connected twice",
                decl.q
            )));
        }
        let ls = decl.stage as i64;
        let mut target = d.stage.max(ls + 2);
        while (target - (ls - 1)).rem_euclid(3) != 0 {
            target += 1;
        }
        let d = self.delay(d, target)?;
        let decl = &mut self.latches[latch.name_idx];
        decl.connected = true;
        let (q, qn, stage, init) = (decl.q.clone(), decl.qn.clone(), decl.stage, decl.init);
        self.nb.latch(&q, &qn, stage, sel.t, sel.f, d.t, d.f, init);
        Ok(target)
    }

    pub fn output(&mut self, name: &str, sig: Sig) -> Result<(), DesignError> {
        if sig.konst.is_some() {
            return Err(DesignError::Structure(format!(
                "output `{name}` is constant"
            )));
        }
        if !self.nb.rename(sig.t, name) {
            return Err(DesignError::Structure(format!(
                "output name `{name}` already used"
            )));
        }
        let _ = self.nb.rename(sig.f, &format!("{name}_n"));
        self.nb.output_id(sig.t);
        Ok(())
    }

    pub fn finish(self) -> Result<Netlist, DesignError> {
        if let Some(l) = self.latches.iter().find(|l| !l.connected) {
            return Err(DesignError::Structure(format!(
                "latch `{}` never connected",
                l.q
            )));
        }
        Ok(self.nb.build()?)
    }
}

pub fn not(l: Lit) -> Lit {
    Lit {
        sig: l.sig,
        pos: !l.pos,
    }
}
