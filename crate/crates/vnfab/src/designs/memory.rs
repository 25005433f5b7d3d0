//! Decoders, preconfigured ROM, the select latch and the cross-coupled
//! NAND memory cell with its access protocol.

use serde::Serialize;

use super::builder::{DualBuilder, Lit, Sig, Term};
use super::DesignError;
use crate::dynlogic::{Netlist, NetlistBuilder, Value};

/// Largest ROM: 16 words of 9 bits.
pub const ROM_WORDS: usize = 16;
pub const ROM_BITS: usize = 9;

/// One-hot decode of `addr` (lowest bit first): line `k` is high when the
/// address equals `k`.
pub fn decoder_core(
    b: &mut DualBuilder,
    prefix: &str,
    addr: &[Sig],
) -> Result<Vec<Sig>, DesignError> {
    let n = addr.len();
    (0..1usize << n)
        .map(|k| {
            let lits: Vec<Lit> = (0..n)
                .map(|i| {
                    if k >> i & 1 == 1 {
                        addr[i].pos()
                    } else {
                        addr[i].neg()
                    }
                })
                .collect();
            b.and(&format!("{prefix}{k}"), &lits)
        })
        .collect()
}

/// ROM bits from one-hot word lines. Bit `b` is realised as the AND over
/// words storing 0 of `NAND(line)`, its complement over words storing 1.
pub fn rom_core(
    b: &mut DualBuilder,
    prefix: &str,
    lines: &[Sig],
    words: &[Vec<bool>],
    bits: usize,
) -> Result<Vec<Sig>, DesignError> {
    if words.len() > lines.len() || words.len() > ROM_WORDS {
        return Err(DesignError::Capacity {
            words: words.len(),
            max: lines.len().min(ROM_WORDS),
        });
    }
    if let Some(w) = words.iter().find(|w| w.len() != bits) {
        return Err(DesignError::Structure(format!(
            "ROM word has {} bits, expected {bits}",
            w.len()
        )));
    }
    let mut out = Vec::with_capacity(bits);
    for bit in 0..bits {
        let mut hi: Vec<Term> = Vec::new();
        let mut lo: Vec<Term> = Vec::new();
        for (w, line) in lines.iter().enumerate() {
            let stored = words.get(w).is_some_and(|word| word[bit]);
            if stored {
                hi.push(vec![line.pos()]);
            } else {
                lo.push(vec![line.pos()]);
            }
        }
        out.push(b.sop(&format!("{prefix}{bit}"), &hi, &lo)?);
    }
    Ok(out)
}

/// `n`-to-`2^n` decoder with dual-rail inputs `x*` and outputs `y*`.
pub fn gen_decoder(n: usize) -> Result<Netlist, DesignError> {
    if !(2..=4).contains(&n) {
        return Err(DesignError::Structure(format!(
            "decoder width {n} not in 2..=4"
        )));
    }
    let mut b = DualBuilder::new(n);
    let addr: Vec<Sig> = (0..n).map(|i| b.input(&format!("x{i}"))).collect();
    let lines = decoder_core(&mut b, "line", &addr)?;
    for (k, l) in lines.iter().enumerate() {
        b.output(&format!("y{k}"), *l)?;
    }
    b.finish()
}

/// ROM with address inputs `x*` and data outputs `d*`; a decoder stage
/// followed by the preconfigured bit stage.
pub fn gen_rom(words: &[Vec<bool>]) -> Result<Netlist, DesignError> {
    if words.len() > ROM_WORDS {
        return Err(DesignError::Capacity {
            words: words.len(),
            max: ROM_WORDS,
        });
    }
    let bits = words.first().map_or(0, Vec::len);
    let n = (usize::BITS - words.len().max(2).saturating_sub(1).leading_zeros()) as usize;
    let mut b = DualBuilder::new(ROM_WORDS);
    let addr: Vec<Sig> = (0..n).map(|i| b.input(&format!("x{i}"))).collect();
    let lines = decoder_core(&mut b, "w", &addr)?;
    let data = rom_core(&mut b, "bit", &lines, words, bits)?;
    for (i, d) in data.iter().enumerate() {
        if d.konst.is_some() {
            return Err(DesignError::Structure(format!(
                "ROM bit {i} is constant across all words"
            )));
        }
        b.output(&format!("d{i}"), *d)?;
    }
    b.finish()
}

/// Latch with dual-rail data `d`, select `sel` and output `q`, reading its
/// inputs directly at stage 0.
pub fn gen_latch(init: bool) -> Result<Netlist, DesignError> {
    let mut nb = NetlistBuilder::new();
    let sel = nb.input("sel");
    let seln = nb.input("sel_n");
    let d = nb.input("d");
    let dn = nb.input("d_n");
    nb.latch("q", "q_n", 0, sel, seln, d, dn, init);
    nb.output("q");
    Ok(nb.build()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct NwramControls {
    pub xpre: bool,
    pub xeve: bool,
    pub ypre: bool,
    pub yeve: bool,
    pub read: bool,
}

/// Cross-coupled dynamic NAND pair: `out = NAND(nout)` clocked by the x
/// controls, `nout = NAND(out)` by the y controls, plus a read term that
/// discharges the precharged bit line when `nout` is high.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NwramCell {
    pub out: Value,
    pub nout: Value,
    pub bl: Value,
}

impl Default for NwramCell {
    fn default() -> Self {
        Self {
            out: Value::Floating,
            nout: Value::Floating,
            bl: Value::Floating,
        }
    }
}

impl NwramCell {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stored(&self) -> Option<bool> {
        match (self.out.as_bool(), self.nout.as_bool()) {
            (Some(o), Some(n)) if o != n => Some(o),
            _ => None,
        }
    }

    /// One protocol step. Precharge acts before evaluation.
    pub fn apply(&mut self, c: NwramControls) -> Result<(), DesignError> {
        if c.xeve && c.yeve {
            return Err(DesignError::Protocol(
                "x and y evaluate windows overlap".into(),
            ));
        }
        if (c.xpre && c.xeve) || (c.ypre && c.yeve) {
            return Err(DesignError::Protocol(
                "a node cannot precharge and evaluate in the same step".into(),
            ));
        }
        if c.xpre {
            self.out = Value::Zero;
        }
        if c.ypre {
            self.nout = Value::Zero;
        }
        let nand = |v: Value| -> Result<Value, DesignError> {
            v.as_bool()
                .map(|b| Value::from_bool(!b))
                .ok_or_else(|| DesignError::Protocol("evaluate reads a floating node".into()))
        };
        if c.xeve {
            self.out = nand(self.nout)?;
        }
        if c.yeve {
            self.nout = nand(self.out)?;
        }
        if c.read {
            self.bl = nand(self.nout)?;
        }
        Ok(())
    }

    /// Write sequence: precharge both nodes, evaluate the node that must
    /// end high, then the other.
    pub fn write_sequence(v: bool) -> [NwramControls; 3] {
        let pre = NwramControls {
            xpre: true,
            ypre: true,
            ..Default::default()
        };
        let x = NwramControls {
            xeve: true,
            ..Default::default()
        };
        let y = NwramControls {
            yeve: true,
            ..Default::default()
        };
        if v {
            [pre, x, y]
        } else {
            [pre, y, x]
        }
    }

    pub fn write(&mut self, v: bool) -> Result<(), DesignError> {
        for c in Self::write_sequence(v) {
            self.apply(c)?;
        }
        Ok(())
    }

    pub fn read(&mut self) -> Result<bool, DesignError> {
        self.apply(NwramControls {
            read: true,
            ..Default::default()
        })?;
        Ok(self.bl == Value::One)
    }

    /// Controls off: nodes are left undriven and keep their charge.
    pub fn idle(&mut self) -> Result<(), DesignError> {
        self.apply(NwramControls::default())
    }

    /// Clock back on: evaluating without precharge re-drives the stored
    /// value, so no read-back and rewrite is needed.
    pub fn restore(&mut self) -> Result<(), DesignError> {
        self.apply(NwramControls {
            xeve: true,
            ..Default::default()
        })?;
        self.apply(NwramControls {
            yeve: true,
            ..Default::default()
        })
    }
}

/// Cell structure as a self-timed netlist plus a fresh protocol driver.
pub fn gen_nwram() -> Result<(Netlist, NwramCell), DesignError> {
    let mut nb = NetlistBuilder::new();
    nb.mark_self_timed();
    let rd = nb.input("rd");
    let nout = nb.net("nout");
    let out = nb.nand("out", 0, &[nout]);
    nb.nand("nout", 1, &[out]);
    nb.nand("bl", 2, &[nout, rd]);
    nb.output("out");
    nb.output("bl");
    Ok((nb.build()?, NwramCell::new()))
}
