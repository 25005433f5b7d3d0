//! Carry-lookahead adders and the 4×4 array multiplier.

use serde::Serialize;

use super::builder::{DualBuilder, Lit, Sig, Term};
use super::DesignError;
use crate::dynlogic::Netlist;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClaSpec {
    pub width: usize,
    pub max_fan_in: usize,
}

impl ClaSpec {
    pub fn new(width: usize) -> Result<Self, DesignError> {
        let max_fan_in = match width {
            4 => 4,
            8 | 16 => 9,
            _ => {
                return Err(DesignError::Structure(format!(
                    "CLA width {width} not in {{4, 8, 16}}"
                )))
            }
        };
        Ok(Self { width, max_fan_in })
    }
}

/// Outputs of [`cla_core`]; all at the same stage.
#[derive(Debug, Clone)]
pub struct ClaOut {
    pub sum: Vec<Sig>,
    pub cout: Sig,
}

/// Four-stage lookahead adder: propagate/generate (with the first carry
/// folded in as a majority), carries, buffered or upper-block carries, sum.
/// Widths above 8 use two 8-bit carry blocks; the upper block's group
/// generate/propagate is formed alongside the lower carries so every term
/// stays within eight literals.
pub fn cla_core(
    b: &mut DualBuilder,
    a: &[Sig],
    bb: &[Sig],
    cin: Sig,
) -> Result<ClaOut, DesignError> {
    let w = a.len();
    if bb.len() != w || w == 0 {
        return Err(DesignError::Structure(
            "adder operands differ in width".into(),
        ));
    }
    let mut g = Vec::with_capacity(w);
    let mut k = Vec::with_capacity(w);
    let mut p = Vec::with_capacity(w);
    for i in 0..w {
        let (x, y) = (a[i], bb[i]);
        g.push(b.and(&format!("g{i}"), &[x.pos(), y.pos()])?);
        k.push(b.and(&format!("k{i}"), &[x.neg(), y.neg()])?);
        p.push(b.xor2(&format!("p{i}"), x, y)?);
    }
    let c1 = b.maj3("c1", a[0], bb[0], cin)?;
    let pg_stage = g[0].stage;
    let mut c: Vec<Sig> = vec![cin, c1];

    // lower block: carries into bits 2..=min(w, 8)
    let low_top = w.min(8);
    for i in 1..low_top {
        let mut hi: Vec<Term> = Vec::new();
        let mut lo: Vec<Term> = Vec::new();
        for j in (1..=i).rev() {
            let mut th: Vec<Lit> = (j + 1..=i).map(|m| p[m].pos()).collect();
            th.push(g[j].pos());
            hi.push(th);
            let mut tl: Vec<Lit> = (j + 1..=i).map(|m| g[m].neg()).collect();
            tl.push(k[j].pos());
            lo.push(tl);
        }
        let mut th: Vec<Lit> = (1..=i).map(|m| p[m].pos()).collect();
        th.push(c1.pos());
        hi.push(th);
        let mut tl: Vec<Lit> = (1..=i).map(|m| g[m].neg()).collect();
        tl.push(c1.neg());
        lo.push(tl);
        c.push(b.sop(&format!("c{}", i + 1), &hi, &lo)?);
    }

    // upper block: group signals over bits 8..=i, then carries
    if w > 8 {
        let c8 = c[8];
        for i in 8..w {
            let mut hi: Vec<Term> = Vec::new();
            let mut lo: Vec<Term> = Vec::new();
            for j in (8..=i).rev() {
                let mut th: Vec<Lit> = (j + 1..=i).map(|m| p[m].pos()).collect();
                th.push(g[j].pos());
                hi.push(th);
            }
            for j in (9..=i).rev() {
                let mut tl: Vec<Lit> = (j + 1..=i).map(|m| g[m].neg()).collect();
                tl.push(k[j].pos());
                lo.push(tl);
            }
            lo.push((8..=i).map(|m| g[m].neg()).collect());
            let gh = b.sop(&format!("gh{i}"), &hi, &lo)?;
            let ph_hi: Vec<Term> = vec![(8..=i).map(|m| p[m].pos()).collect()];
            let ph_lo: Vec<Term> = (8..=i).map(|m| vec![p[m].neg()]).collect();
            let ph = b.sop(&format!("ph{i}"), &ph_hi, &ph_lo)?;
            let carry = b.sop(
                &format!("c{}", i + 1),
                &[vec![gh.pos()], vec![ph.pos(), c8.pos()]],
                &[vec![gh.neg(), ph.neg()], vec![gh.neg(), c8.neg()]],
            )?;
            c.push(carry);
        }
    }

    let carry_stage = pg_stage + 2;
    let sum_stage = pg_stage + 3;
    let mut sum = Vec::with_capacity(w);
    for i in 0..w {
        let pi = b.delay(p[i], carry_stage)?;
        let ci = b.delay(c[i], carry_stage)?;
        sum.push(b.sop_at(
            &format!("s{i}"),
            &[vec![pi.pos(), ci.neg()], vec![pi.neg(), ci.pos()]],
            &[vec![pi.pos(), ci.pos()], vec![pi.neg(), ci.neg()]],
            sum_stage,
        )?);
    }
    let cout = b.delay(c[w], sum_stage)?;
    Ok(ClaOut { sum, cout })
}

/// Stand-alone adder: dual-rail inputs `a*`, `b*`, `cin`; outputs `s*`, `cout`.
pub fn gen_cla(spec: ClaSpec) -> Result<Netlist, DesignError> {
    let mut b = DualBuilder::new(spec.max_fan_in);
    let a: Vec<Sig> = (0..spec.width).map(|i| b.input(&format!("a{i}"))).collect();
    let bb: Vec<Sig> = (0..spec.width).map(|i| b.input(&format!("b{i}"))).collect();
    let cin = b.input("cin");
    let out = cla_core(&mut b, &a, &bb, cin)?;
    for (i, s) in out.sum.iter().enumerate() {
        b.output(&format!("s{i}"), *s)?;
    }
    b.output("cout", out.cout)?;
    b.finish()
}

/// Carry-save array multiplier; returns the eight product bits, lowest
/// first. Partial products take one stage, each further row one stage, and
/// the final carries ripple one column per stage.
pub fn multiplier_core(b: &mut DualBuilder, a: &[Sig], x: &[Sig]) -> Result<Vec<Sig>, DesignError> {
    let n = a.len();
    if x.len() != n || n == 0 {
        return Err(DesignError::Structure(
            "multiplier operands differ in width".into(),
        ));
    }
    let mut pp = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            pp[i][j] = Some(b.and(&format!("pp{i}{j}"), &[a[i].pos(), x[j].pos()])?);
        }
    }
    let cols = 2 * n;
    let mut s: Vec<Option<Sig>> = vec![None; cols];
    let mut c: Vec<Option<Sig>> = vec![None; cols + 1];
    for i in 0..n {
        s[i] = pp[i][0];
    }
    for j in 1..n {
        let mut next_c: Vec<Option<Sig>> = vec![None; cols + 1];
        for col in j..j + n {
            let mut ins: Vec<Sig> = Vec::new();
            ins.extend(s[col]);
            ins.extend(c[col]);
            ins.extend(pp[col - j][j]);
            let (sum, carry) = add_column(b, &format!("r{j}c{col}"), &ins)?;
            s[col] = sum;
            next_c[col + 1] = carry;
        }
        c = next_c;
    }
    // ripple the remaining carries through the upper columns
    let mut ripple: Option<Sig> = None;
    for col in n..cols {
        let mut ins: Vec<Sig> = Vec::new();
        ins.extend(s[col]);
        ins.extend(c[col]);
        ins.extend(ripple);
        let (sum, carry) = add_column(b, &format!("m{col}"), &ins)?;
        s[col] = sum;
        ripple = carry;
    }
    s.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| DesignError::Structure(format!("product bit {i} empty"))))
        .collect()
}

fn add_column(
    b: &mut DualBuilder,
    name: &str,
    ins: &[Sig],
) -> Result<(Option<Sig>, Option<Sig>), DesignError> {
    Ok(match ins {
        [] => (None, None),
        [x] => (Some(*x), None),
        [x, y] => (
            Some(b.xor2(&format!("{name}s"), *x, *y)?),
            Some(b.and(&format!("{name}c"), &[x.pos(), y.pos()])?),
        ),
        [x, y, z] => (
            Some(b.xor3(&format!("{name}s"), *x, *y, *z)?),
            Some(b.maj3(&format!("{name}c"), *x, *y, *z)?),
        ),
        _ => {
            return Err(DesignError::Structure(
                "column with more than three bits".into(),
            ))
        }
    })
}

/// Stage index at which the stand-alone multiplier presents its product.
pub const MULTIPLIER_OUTPUT_STAGE: i64 = 8;

/// 4×4 multiplier with dual-rail inputs `a*`, `b*` and product `p0..p7`,
/// every bit aligned to the ninth stage.
pub fn gen_multiplier4() -> Result<Netlist, DesignError> {
    let mut b = DualBuilder::new(4);
    let a: Vec<Sig> = (0..4).map(|i| b.input(&format!("a{i}"))).collect();
    let x: Vec<Sig> = (0..4).map(|i| b.input(&format!("b{i}"))).collect();
    let prod = multiplier_core(&mut b, &a, &x)?;
    for (i, p) in prod.iter().enumerate() {
        let p = b.delay(*p, MULTIPLIER_OUTPUT_STAGE)?;
        b.output(&format!("p{i}"), p)?;
    }
    b.finish()
}
