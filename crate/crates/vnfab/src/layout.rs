//! Placement of dynamic-logic netlists onto the vertical-nanowire grid,
//! footprint area, and design-rule sensitivity sweeps.
//!
//! Each functional block becomes a rectangle: a core of logic and signal
//! nanowires, interleaved, wrapped in a ring of power pillars. Every compound
//! gate or latch is one logic stage and a logic nanowire stacks up to
//! `gates_per_nanowire` of them. Signal demand follows the number of gate
//! outputs to route; a signal nanowire carries two signals plus a shield.
//! Blocks are shelf-packed into the final bounding box.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, DesignRules};
use crate::designs::{gen_cla, ClaSpec, DesignError};
use crate::dynlogic::Netlist;

/// Routed signals per signal nanowire (three conductors, one is ground).
pub const SIGNALS_PER_WIRE: usize = 2;

/// Reference area of the 4-bit lookahead adder, μm².
pub const CLA4_AREA_UM2: f64 = 0.76;

/// Height-to-width ratio that fits one logic stage on a nanowire.
pub const ASPECT_PER_GATE: f64 = 27.0;

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("gate `{gate}` has fan-in {fan_in}, only {max} inputs usable")]
    FanIn {
        gate: String,
        fan_in: usize,
        max: usize,
    },
    #[error("sweep value {0} must be positive and finite")]
    BadValue(f64),
    #[error(transparent)]
    Rules(#[from] ConfigError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SiteKind {
    Logic,
    Signal,
    Pillar,
    Empty,
}

impl SiteKind {
    pub fn symbol(self) -> char {
        match self {
            SiteKind::Logic => 'L',
            SiteKind::Signal => 'S',
            SiteKind::Pillar => 'P',
            SiteKind::Empty => '.',
        }
    }
}

/// A placeable logic stage: a compound gate or a latch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cell {
    Gate(usize),
    Latch(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPlan {
    pub name: String,
    /// Logic stages on each logic nanowire, in placement order.
    pub wires: Vec<Vec<Cell>>,
    pub signal_wires: usize,
    pub pillars: usize,
    /// Width and height in pitches, pillar ring included.
    pub size: (usize, usize),
    /// Lower-left corner within the plan, pitches.
    pub origin: (usize, usize),
    /// Row-major, `size.0` per row.
    pub sites: Vec<SiteKind>,
}

impl BlockPlan {
    pub fn cells(&self) -> usize {
        self.wires.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutPlan {
    pub blocks: Vec<BlockPlan>,
    /// Bounding box in pitches.
    pub footprint: (usize, usize),
    pub gates_per_nanowire: usize,
    /// Multiplier absorbing routing overhead not modelled by the grid.
    pub overhead_factor: f64,
}

impl LayoutPlan {
    pub fn cells(&self) -> usize {
        self.blocks.iter().map(BlockPlan::cells).sum()
    }

    pub fn logic_wires(&self) -> usize {
        self.blocks.iter().map(|b| b.wires.len()).sum()
    }

    pub fn signal_wires(&self) -> usize {
        self.blocks.iter().map(|b| b.signal_wires).sum()
    }

    pub fn pillars(&self) -> usize {
        self.blocks.iter().map(|b| b.pillars).sum()
    }

    pub fn with_overhead(mut self, f: f64) -> Self {
        self.overhead_factor = f;
        self
    }

    /// Whole-plan site grid, top row first.
    pub fn grid(&self) -> Vec<Vec<SiteKind>> {
        let (w, h) = self.footprint;
        let mut g = vec![vec![SiteKind::Empty; w]; h];
        for b in &self.blocks {
            for (i, &s) in b.sites.iter().enumerate() {
                let (x, y) = (b.origin.0 + i % b.size.0, b.origin.1 + i / b.size.0);
                g[h - 1 - y][x] = s;
            }
        }
        g
    }

    pub fn grid_text(&self) -> String {
        let mut s = String::new();
        for row in self.grid() {
            let line: String = row.iter().map(|k| k.symbol()).collect();
            let _ = writeln!(s, "{line}");
        }
        s
    }
}

fn core_shape(n: usize) -> (usize, usize) {
    if n == 0 {
        return (0, 0);
    }
    let w = (n as f64).sqrt().ceil() as usize;
    (w, n.div_ceil(w))
}

fn place_block(name: &str, cells: Vec<Cell>, rules: &DesignRules) -> BlockPlan {
    let gpn = rules.gates_per_nanowire as usize;
    let wires: Vec<Vec<Cell>> = cells.chunks(gpn).map(<[Cell]>::to_vec).collect();
    let logic = wires.len();
    let signal =
        (rules.signal_per_logic * cells.len() as f64 / SIGNALS_PER_WIRE as f64).ceil() as usize;
    let total = logic + signal;
    let (cw, ch) = core_shape(total);
    let ring = rules.pillar_size as usize;
    let (w, h) = (cw + 2 * ring, ch + 2 * ring);
    let mut sites = vec![SiteKind::Empty; w * h];
    // spread signal wires evenly through the logic sequence
    for i in 0..total {
        let is_signal = (i + 1) * signal / total > i * signal / total;
        let (x, y) = (ring + i % cw, ring + i / cw);
        sites[y * w + x] = if is_signal {
            SiteKind::Signal
        } else {
            SiteKind::Logic
        };
    }
    let step = rules.pillar_spacing as usize;
    let mut origins = Vec::new();
    for x in (0..=w - ring).step_by(step) {
        origins.push((x, 0));
        origins.push((x, h - ring));
    }
    for y in (0..=h - ring).step_by(step) {
        origins.push((0, y));
        origins.push((w - ring, y));
    }
    origins.sort_unstable();
    origins.dedup();
    for &(x0, y0) in &origins {
        for y in y0..y0 + ring {
            for x in x0..x0 + ring {
                sites[y * w + x] = SiteKind::Pillar;
            }
        }
    }
    BlockPlan {
        name: name.to_string(),
        wires,
        signal_wires: signal,
        pillars: origins.len(),
        size: (w, h),
        origin: (0, 0),
        sites,
    }
}

/// Shelf packing, tallest block first, into a roughly square box.
fn pack(blocks: &mut [BlockPlan]) -> (usize, usize) {
    if blocks.is_empty() {
        return (0, 0);
    }
    let area: usize = blocks.iter().map(|b| b.size.0 * b.size.1).sum();
    let widest = blocks.iter().map(|b| b.size.0).max().unwrap_or(0);
    let limit = ((area as f64).sqrt().ceil() as usize).max(widest);
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(blocks[i].size.1), i));
    let (mut x, mut y, mut shelf_h, mut width) = (0, 0, 0, 0);
    for i in order {
        let (bw, bh) = blocks[i].size;
        if x + bw > limit && x > 0 {
            y += shelf_h;
            x = 0;
            shelf_h = 0;
        }
        blocks[i].origin = (x, y);
        x += bw;
        width = width.max(x);
        shelf_h = shelf_h.max(bh);
    }
    (width, y + shelf_h)
}

/// Places every gate and latch of `netlist`, grouped by block.
pub fn place(netlist: &Netlist, rules: &DesignRules) -> Result<LayoutPlan, LayoutError> {
    rules.validate()?;
    let max = rules.usable_fan_in as usize;
    if let Some(t) = netlist.terms.iter().find(|t| t.inputs.len() > max) {
        return Err(LayoutError::FanIn {
            gate: netlist.name(t.output).to_string(),
            fan_in: t.inputs.len(),
            max,
        });
    }
    let n_blocks = netlist.blocks.len().max(1);
    let mut per_block: Vec<Vec<(usize, Cell)>> = vec![Vec::new(); n_blocks];
    for (i, g) in netlist.gates.iter().enumerate() {
        per_block[g.block].push((g.stage, Cell::Gate(i)));
    }
    for (i, l) in netlist.latches.iter().enumerate() {
        per_block[l.block].push((l.stage, Cell::Latch(i)));
    }
    let mut blocks = Vec::new();
    for (b, mut cells) in per_block.into_iter().enumerate() {
        if cells.is_empty() {
            continue;
        }
        // stable: same-stage gates of a block stay adjacent
        cells.sort_by_key(|&(stage, _)| stage);
        let name = netlist
            .blocks
            .get(b)
            .map_or(crate::dynlogic::DEFAULT_BLOCK, String::as_str);
        blocks.push(place_block(
            name,
            cells.into_iter().map(|(_, c)| c).collect(),
            rules,
        ));
    }
    let footprint = pack(&mut blocks);
    Ok(LayoutPlan {
        blocks,
        footprint,
        gates_per_nanowire: rules.gates_per_nanowire as usize,
        overhead_factor: 1.0,
    })
}

/// Bounding-box area before the overhead factor, μm².
pub fn raw_area(plan: &LayoutPlan, rules: &DesignRules) -> f64 {
    let p = rules.nanowire_pitch * 1e-3;
    (plan.footprint.0 as f64 * p) * (plan.footprint.1 as f64 * p)
}

/// Footprint area with overhead, μm².
pub fn area(plan: &LayoutPlan, rules: &DesignRules) -> f64 {
    raw_area(plan, rules) * plan.overhead_factor
}

/// Overhead factor that maps the 4-bit lookahead adder onto its reference
/// area under `rules`.
pub fn calibrate_overhead(rules: &DesignRules) -> Result<f64, LayoutError> {
    let cla4 = gen_cla(ClaSpec::new(4)?)?;
    Ok(CLA4_AREA_UM2 / raw_area(&place(&cla4, rules)?, rules))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    /// Minimum nanowire spacing, nm; pitch grows by the same amount.
    Spacing,
    /// Nanowire width, nm; every lateral dimension scales with it.
    FeatureSize,
    /// Height over width; sets the logic stages per nanowire.
    AspectRatio,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spacing" => Ok(Self::Spacing),
            "feature_size" | "feature-size" => Ok(Self::FeatureSize),
            "aspect_ratio" | "aspect-ratio" => Ok(Self::AspectRatio),
            _ => Err(format!("unknown sweep axis `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub pitch_nm: f64,
    pub gates_per_nanowire: usize,
    pub logic_wires: usize,
    pub signal_wires: usize,
    pub footprint: (usize, usize),
    /// Re-placed area under the modified rules (pitch² scaling), μm².
    pub area: f64,
    /// Baseline area scaled linearly with pitch, μm²; lateral axes only.
    pub area_linear: Option<f64>,
    /// `area` over the baseline area.
    pub ratio: f64,
}

/// Rules with one axis moved to `value`.
pub fn apply_axis(
    rules: &DesignRules,
    axis: SweepAxis,
    value: f64,
) -> Result<DesignRules, LayoutError> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(LayoutError::BadValue(value));
    }
    let mut r = rules.clone();
    match axis {
        SweepAxis::Spacing => {
            r.nanowire_pitch += value - r.min_spacing;
            r.min_spacing = value;
        }
        SweepAxis::FeatureSize => {
            let f = value / r.nanowire_width;
            r.nanowire_width = value;
            r.nanowire_height *= f;
            r.nanowire_pitch *= f;
            r.min_spacing *= f;
        }
        SweepAxis::AspectRatio => {
            r.nanowire_height = value * r.nanowire_width;
            r.gates_per_nanowire = ((value / ASPECT_PER_GATE).floor() as u32).max(1);
        }
    }
    r.validate()?;
    Ok(r)
}

/// Re-places `netlist` under each swept value with a fixed overhead factor.
pub fn sensitivity_sweep(
    netlist: &Netlist,
    rules: &DesignRules,
    axis: SweepAxis,
    values: &[f64],
    overhead: f64,
) -> Result<Vec<SweepRow>, LayoutError> {
    let base_plan = place(netlist, rules)?.with_overhead(overhead);
    let base = area(&base_plan, rules);
    values
        .iter()
        .map(|&v| {
            let r = apply_axis(rules, axis, v)?;
            let plan = place(netlist, &r)?.with_overhead(overhead);
            let a = area(&plan, &r);
            let area_linear = match axis {
                SweepAxis::AspectRatio => None,
                _ => Some(base * r.nanowire_pitch / rules.nanowire_pitch),
            };
            Ok(SweepRow {
                value: v,
                pitch_nm: r.nanowire_pitch,
                gates_per_nanowire: plan.gates_per_nanowire,
                logic_wires: plan.logic_wires(),
                signal_wires: plan.signal_wires(),
                footprint: plan.footprint,
                area: a,
                area_linear,
                ratio: if base > 0.0 { a / base } else { 1.0 },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynlogic::NetlistBuilder;

    #[test]
    fn small_and_empty_netlists() {
        let rules = DesignRules::default();
        let empty = NetlistBuilder::new().build().unwrap();
        let plan = place(&empty, &rules).unwrap();
        assert_eq!(plan.footprint, (0, 0));
        assert_eq!(raw_area(&plan, &rules), 0.0);

        let mut b = NetlistBuilder::new();
        let a = b.input("a");
        let x = b.nand("x", 0, &[a]);
        b.nand("y", 1, &[x]);
        let plan = place(&b.build().unwrap(), &rules).unwrap();
        assert_eq!(plan.logic_wires(), 1);
        assert_eq!(plan.signal_wires(), 1);
        assert_eq!(plan.cells(), 2);
    }

    #[test]
    fn fan_in_cap() {
        let mut b = NetlistBuilder::new();
        let ins: Vec<_> = (0..9).map(|i| b.input(&format!("i{i}"))).collect();
        b.nand("y", 0, &ins);
        let nl = b.build().unwrap();
        assert!(matches!(
            place(&nl, &DesignRules::default()),
            Err(LayoutError::FanIn {
                fan_in: 9,
                max: 8,
                ..
            })
        ));
    }

    #[test]
    fn pitch_doubling_quadruples_raw_area() {
        let rules = DesignRules::default();
        let nl = gen_cla(ClaSpec::new(4).unwrap()).unwrap();
        let plan = place(&nl, &rules).unwrap();
        let mut wide = rules.clone();
        wide.nanowire_pitch *= 2.0;
        let ratio = raw_area(&plan, &wide) / raw_area(&plan, &rules);
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn identity_sweep_matches_baseline() {
        let rules = DesignRules::default();
        let nl = gen_cla(ClaSpec::new(4).unwrap()).unwrap();
        let k = calibrate_overhead(&rules).unwrap();
        let base = area(&place(&nl, &rules).unwrap().with_overhead(k), &rules);
        assert!((base - CLA4_AREA_UM2).abs() < 1e-12);
        for (axis, v) in [
            (SweepAxis::Spacing, rules.min_spacing),
            (SweepAxis::FeatureSize, rules.nanowire_width),
            (
                SweepAxis::AspectRatio,
                rules.nanowire_height / rules.nanowire_width,
            ),
        ] {
            let rows = sensitivity_sweep(&nl, &rules, axis, &[v], k).unwrap();
            assert_eq!(rows[0].area, base, "{axis:?}");
        }
    }
}
