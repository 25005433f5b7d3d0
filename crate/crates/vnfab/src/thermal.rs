//! Steady-state thermal resistance networks at transistor granularity.
//!
//! A logic nanowire is a vertical series chain of transistors. Each
//! transistor contributes a channel resistor from its source-side interface
//! to a drain-side hot node (where its heat is injected) and a silicide
//! resistor from the hot node to the next interface. Gates, power-rail
//! contacts and heat-extraction junctions add parallel paths to fixed
//! reference temperatures.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::config::{
    MaterialProps, MaterialTable, PartialGateModel, ThermalConfig, BRIDGE, CHANNEL,
    DRAIN_ELECTRODE, DRAIN_SILICIDE, GATE_ELECTRODE, GATE_OXIDE, HEAT_JUNCTION, INTERLAYER, SPACER,
};

#[derive(Debug, Error, PartialEq)]
pub enum ThermalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular system: nodes {0:?} have no path to a reference temperature")]
    Singular(Vec<String>),
    #[error("transistor index {index} out of range (stack has {len})")]
    OutOfRange { index: usize, len: usize },
    #[error("config error: {0}")]
    Config(String),
    #[error("network has no {0} node")]
    MissingNode(&'static str),
}

type Result<T> = std::result::Result<T, ThermalError>;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NodeKind {
    Internal,
    /// Fixed temperature, K.
    Reference(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalNode {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalResistor {
    pub a: NodeId,
    pub b: NodeId,
    /// K/W
    pub resistance: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatSource {
    pub node: NodeId,
    /// W
    pub q: f64,
}

/// `L / (k·A)` with `L` in nm, `A` in nm² and `k` in W/(m·K); returns K/W.
pub fn resistor_from_geometry(length: f64, area: f64, conductivity: f64) -> Result<f64> {
    if !(length > 0.0 && area > 0.0 && conductivity > 0.0) {
        return Err(ThermalError::Domain(format!(
            "length={length} area={area} k={conductivity} must all be > 0"
        )));
    }
    Ok(length * 1e-9 / (conductivity * area * 1e-18))
}

/// Heat dissipated by a conducting device, `I·V`.
pub fn heat_q(i_ds: f64, v_ds: f64) -> Result<f64> {
    if !(i_ds >= 0.0 && v_ds >= 0.0) {
        return Err(ThermalError::Domain(
            "current and voltage must be >= 0".into(),
        ));
    }
    Ok(i_ds * v_ds)
}

/// Conduction along the row's length through its width × thickness face.
pub fn axial(m: &MaterialProps) -> f64 {
    let [l, w, t] = m.dims;
    l * 1e-9 / (m.thermal_conductivity * w * t * 1e-18)
}

/// Conduction across the row's thickness through its length × width face
/// (wrap-around layers such as the gate stack and spacers).
pub fn radial(m: &MaterialProps) -> f64 {
    let [l, w, t] = m.dims;
    t * 1e-9 / (m.thermal_conductivity * l * w * 1e-18)
}

/// Gate stack: oxide then electrode, both conducting radially.
pub fn gate_branch_resistance(mats: &MaterialTable) -> f64 {
    radial(mats.row(GATE_OXIDE)) + radial(mats.row(GATE_ELECTRODE))
}

/// Rail contact: spacer (radial) then the drain electrode (axial).
pub fn contact_resistance(mats: &MaterialTable) -> f64 {
    radial(mats.row(SPACER)) + axial(mats.row(DRAIN_ELECTRODE))
}

/// Tungsten bridge of `pitches` nanowire pitches with the given section.
pub fn bridge_resistance(
    mats: &MaterialTable,
    pitches: f64,
    nanowire_pitch: f64,
    section: [f64; 2],
) -> f64 {
    let k = mats.row(BRIDGE).thermal_conductivity;
    pitches * nanowire_pitch * 1e-9 / (k * section[0] * section[1] * 1e-18)
}

/// Heat junction slab of thickness `thickness` over the row's width × thickness face.
pub fn hej_resistance(mats: &MaterialTable, thickness: f64) -> f64 {
    let m = mats.row(HEAT_JUNCTION);
    thickness * 1e-9 / (m.thermal_conductivity * m.dims[1] * m.dims[2] * 1e-18)
}

/// Which extraction features are present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    /// 0 (insulating), 0.5 or 1 (gate at reference temperature).
    pub gate_conduction: f64,
    pub hdpp_attached: bool,
    pub hej_positions: Vec<usize>,
    pub bridge_pitches: u32,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            gate_conduction: 0.0,
            hdpp_attached: false,
            hej_positions: Vec::new(),
            bridge_pitches: 10,
        }
    }
}

/// Role of a transistor in a dynamic gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Precharge,
    Input(u32),
    Evaluate,
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Role::Precharge => f.write_str("PRE"),
            Role::Input(i) => write!(f, "IN{i}"),
            Role::Evaluate => f.write_str("EVA"),
        }
    }
}

/// Node handles of one transistor fragment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransistorNodes {
    pub label: String,
    pub gate: usize,
    pub role: Role,
    pub source: NodeId,
    pub hot: NodeId,
    pub drain: NodeId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ThermalNetwork {
    pub nodes: Vec<ThermalNode>,
    pub resistors: Vec<ThermalResistor>,
    pub sources: Vec<HeatSource>,
    pub transistors: Vec<TransistorNodes>,
    /// Interface nodes carrying a power-rail contact, bottom to top.
    pub rails: Vec<NodeId>,
    pub scenario: Scenario,
}

impl ThermalNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: impl Into<String>, kind: NodeKind) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(ThermalNode {
            id,
            label: label.into(),
            kind,
        });
        id
    }

    pub fn add_resistor(&mut self, a: NodeId, b: NodeId, r: f64, label: impl Into<String>) {
        assert!(a != b, "self-loop resistor");
        assert!(r > 0.0 && r.is_finite(), "resistance must be positive");
        self.resistors.push(ThermalResistor {
            a,
            b,
            resistance: r,
            label: label.into(),
        });
    }

    pub fn add_source(&mut self, node: NodeId, q: f64) {
        assert!(q >= 0.0);
        self.sources.push(HeatSource { node, q });
    }

    pub fn find(&self, label: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label)
    }

    /// Reference node with the given label, created on first use.
    pub fn reference(&mut self, label: &str, temp: f64) -> NodeId {
        self.find(label)
            .unwrap_or_else(|| self.add_node(label, NodeKind::Reference(temp)))
    }

    pub fn min_reference_temp(&self) -> Option<f64> {
        self.nodes
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::Reference(t) => Some(t),
                NodeKind::Internal => None,
            })
            .reduce(f64::min)
    }
}

/// Appends one transistor whose source side is the existing node `source`.
/// The new drain-side interface is returned so the next fragment can start
/// from it. The gate branch to `gate_ref` is omitted at zero conduction and
/// scaled by `1/gate_conduction` otherwise.
pub fn build_transistor(
    net: &mut ThermalNetwork,
    mats: &MaterialTable,
    gate_conduction: f64,
    source: NodeId,
    gate_ref: NodeId,
    label: &str,
) -> (NodeId, NodeId) {
    let hot = net.add_node(format!("{label}.channel"), NodeKind::Internal);
    let drain = net.add_node(format!("{label}.drain"), NodeKind::Internal);
    net.add_resistor(
        source,
        hot,
        axial(mats.row(CHANNEL)),
        format!("{label}.channel"),
    );
    net.add_resistor(
        hot,
        drain,
        axial(mats.row(DRAIN_SILICIDE)),
        format!("{label}.silicide"),
    );
    if gate_conduction > 0.0 {
        let r = gate_branch_resistance(mats) / gate_conduction;
        net.add_resistor(hot, gate_ref, r, format!("{label}.gate"));
    }
    (hot, drain)
}

/// Isolated device: heat at the drain side of the channel leaves through
/// the drain contact, the source contact and (if conducting) the gate.
pub fn single_transistor(
    mats: &MaterialTable,
    gate_conduction: f64,
    q: f64,
    t_ref: f64,
) -> ThermalNetwork {
    let mut net = ThermalNetwork::new();
    let ground = net.add_node("ref", NodeKind::Reference(t_ref));
    let source = net.add_node("T0.source", NodeKind::Internal);
    let (hot, drain) = build_transistor(&mut net, mats, gate_conduction, source, ground, "T0");
    let contact = contact_resistance(mats);
    let silicide = axial(mats.row(DRAIN_SILICIDE));
    net.add_resistor(drain, ground, contact, "T0.drain_contact");
    net.add_resistor(source, ground, silicide + contact, "T0.source_contact");
    net.add_source(hot, q);
    net.transistors.push(TransistorNodes {
        label: "T0".into(),
        gate: 0,
        role: Role::Evaluate,
        source,
        hot,
        drain,
    });
    net.scenario.gate_conduction = gate_conduction;
    net
}

/// Stack shape and per-transistor heat.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StackSpec {
    pub n_gates: usize,
    pub fan_in: usize,
    /// Heat per transistor, W.
    pub q_per_transistor: f64,
}

impl StackSpec {
    pub fn series_len(&self) -> usize {
        self.fan_in + 2
    }

    pub fn transistor_count(&self) -> usize {
        self.n_gates * self.series_len()
    }
}

/// Nominal worst-case static heat per series transistor, `I_on·V_DD/n`.
pub fn nominal_heat(cfg: &ThermalConfig, series_len: usize) -> f64 {
    cfg.on_current * cfg.vdd / series_len as f64
}

fn role_in_gate(gate: usize, pos: usize, series: usize) -> Role {
    // Evaluate transistors sit next to the ground contacts (stack ends and
    // every other boundary), precharge next to the supply contacts.
    let from_gnd = if gate.is_multiple_of(2) {
        pos
    } else {
        series - 1 - pos
    };
    match from_gnd {
        0 => Role::Evaluate,
        p if p == series - 1 => Role::Precharge,
        p => Role::Input(p as u32),
    }
}

/// Vertical chain of `n_gates × (fan_in + 2)` transistors. The bottom
/// interface is the substrate reference; rail contacts sit at every gate
/// boundary (ground at the ends, supply in the middle) and float unless
/// power pillars are attached.
pub fn build_nanowire_stack(
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    spec: &StackSpec,
    gate_conduction: f64,
) -> Result<ThermalNetwork> {
    if spec.fan_in < 1 {
        return Err(ThermalError::Config("fan_in must be >= 1".into()));
    }
    if spec.n_gates < 1 {
        return Err(ThermalError::Config("n_gates must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&gate_conduction) {
        return Err(ThermalError::Domain(format!(
            "gate_conduction {gate_conduction} outside [0, 1]"
        )));
    }
    let mut net = ThermalNetwork::new();
    let t_ref = cfg.reference_temp;
    let substrate = net.add_node("substrate", NodeKind::Reference(t_ref));
    let gate_ref = net.add_node("gate_ref", NodeKind::Reference(t_ref));
    let series = spec.series_len();
    let mut below = substrate;
    net.rails.push(substrate);
    for g in 0..spec.n_gates {
        for pos in 0..series {
            let idx = g * series + pos;
            let role = role_in_gate(g, pos, series);
            let label = format!("T{idx}");
            let (hot, drain) =
                build_transistor(&mut net, mats, gate_conduction, below, gate_ref, &label);
            net.add_source(hot, spec.q_per_transistor);
            net.transistors.push(TransistorNodes {
                label,
                gate: g,
                role,
                source: below,
                hot,
                drain,
            });
            below = drain;
        }
        net.rails.push(below);
    }
    if cfg.lateral_ild {
        let far = net.add_node("far_field", NodeKind::Reference(t_ref));
        let r = axial(mats.row(INTERLAYER));
        let hots: Vec<_> = net
            .transistors
            .iter()
            .map(|t| (t.hot, t.label.clone()))
            .collect();
        for (hot, label) in hots {
            net.add_resistor(hot, far, r, format!("{label}.ild"));
        }
    }
    net.scenario = Scenario {
        gate_conduction,
        ..Scenario::default()
    };
    Ok(net)
}

/// Connects every floating rail contact through its contact stack and a
/// tungsten bridge to a power pillar held at the reference temperature.
pub fn attach_hdpp(
    mut net: ThermalNetwork,
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    bridge_pitches: f64,
) -> Result<ThermalNetwork> {
    if net.rails.is_empty() {
        return Err(ThermalError::MissingNode("rail"));
    }
    let pillar = net.reference("pillar", cfg.reference_temp);
    let r = contact_resistance(mats)
        + bridge_resistance(
            mats,
            bridge_pitches,
            cfg.nanowire_pitch,
            cfg.rail_bridge_section,
        );
    let rails: Vec<NodeId> = net.rails.clone();
    for (i, rail) in rails.into_iter().enumerate() {
        if matches!(net.nodes[rail].kind, NodeKind::Reference(_)) {
            continue;
        }
        net.add_resistor(rail, pillar, r, format!("rail{i}.hdpp"));
    }
    net.scenario.hdpp_attached = true;
    net.scenario.bridge_pitches = bridge_pitches.round() as u32;
    Ok(net)
}

/// Adds a heat-extraction junction at the output (drain-side interface) of
/// each listed transistor, bridged to a pillar at the reference temperature.
pub fn attach_hej(
    mut net: ThermalNetwork,
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    positions: &[usize],
    bridge_pitches: f64,
) -> Result<ThermalNetwork> {
    let len = net.transistors.len();
    if let Some(&index) = positions.iter().find(|&&p| p >= len) {
        return Err(ThermalError::OutOfRange { index, len });
    }
    if positions.is_empty() {
        return Ok(net);
    }
    let pillar = net.reference("pillar", cfg.reference_temp);
    let r_junction = hej_resistance(mats, cfg.hej_thickness);
    let r_bridge = bridge_resistance(
        mats,
        bridge_pitches,
        cfg.nanowire_pitch,
        cfg.heat_bridge_section,
    );
    for &p in positions {
        let t = net.transistors[p].clone();
        let j = net.add_node(format!("{}.hej", t.label), NodeKind::Internal);
        net.add_resistor(t.drain, j, r_junction, format!("{}.hej", t.label));
        net.add_resistor(j, pillar, r_bridge, format!("{}.heat_bridge", t.label));
        net.scenario.hej_positions.push(p);
    }
    net.scenario.bridge_pitches = bridge_pitches.round() as u32;
    Ok(net)
}

/// Temperatures across one transistor, K.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransistorTemps {
    pub index: usize,
    pub label: String,
    pub gate: usize,
    pub role: String,
    pub source: f64,
    pub channel: f64,
    pub drain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalSolution {
    /// Indexed by node id.
    pub temperature: Vec<f64>,
    pub transistors: Vec<TransistorTemps>,
    /// Hottest node, K.
    pub peak: f64,
    /// Mean channel temperature over transistors (all internal nodes if
    /// there are none), K.
    pub average: f64,
    /// Power entering each reference node, W, indexed like `temperature`
    /// (zero for internal nodes).
    pub absorbed: Vec<f64>,
    /// `‖G·T − P‖ / ‖P‖` over the internal nodes.
    pub residual: f64,
}

impl ThermalSolution {
    /// Channel temperature of the topmost transistor.
    pub fn top(&self) -> f64 {
        self.transistors
            .last()
            .map(|t| t.channel)
            .unwrap_or(self.peak)
    }

    pub fn channel_max(&self) -> f64 {
        self.transistors
            .iter()
            .map(|t| t.channel)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Nodal analysis: `G·T = P` on internal nodes with reference nodes as
/// Dirichlet boundaries.
pub fn solve(net: &ThermalNetwork) -> Result<ThermalSolution> {
    let n = net.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in &net.resistors {
        adj[r.a].push(r.b);
        adj[r.b].push(r.a);
    }
    let mut reached = vec![false; n];
    let mut queue = VecDeque::new();
    for node in &net.nodes {
        if matches!(node.kind, NodeKind::Reference(_)) {
            reached[node.id] = true;
            queue.push_back(node.id);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !reached[v] {
                reached[v] = true;
                queue.push_back(v);
            }
        }
    }
    let stranded: Vec<String> = net
        .nodes
        .iter()
        .filter(|nd| !reached[nd.id])
        .map(|nd| nd.label.clone())
        .collect();
    if !stranded.is_empty() {
        return Err(ThermalError::Singular(stranded));
    }

    let mut index = vec![usize::MAX; n];
    let mut fixed = vec![None; n];
    let mut m = 0;
    for node in &net.nodes {
        match node.kind {
            NodeKind::Internal => {
                index[node.id] = m;
                m += 1;
            }
            NodeKind::Reference(t) => fixed[node.id] = Some(t),
        }
    }
    let mut g = DMatrix::<f64>::zeros(m, m);
    let mut p = DVector::<f64>::zeros(m);
    for s in &net.sources {
        if index[s.node] != usize::MAX {
            p[index[s.node]] += s.q;
        }
    }
    let rhs_power = p.clone();
    for r in &net.resistors {
        let c = 1.0 / r.resistance;
        match (fixed[r.a], fixed[r.b]) {
            (None, None) => {
                let (i, j) = (index[r.a], index[r.b]);
                g[(i, i)] += c;
                g[(j, j)] += c;
                g[(i, j)] -= c;
                g[(j, i)] -= c;
            }
            (None, Some(t)) => {
                let i = index[r.a];
                g[(i, i)] += c;
                p[i] += c * t;
            }
            (Some(t), None) => {
                let j = index[r.b];
                g[(j, j)] += c;
                p[j] += c * t;
            }
            (Some(_), Some(_)) => {}
        }
    }
    let x = if m == 0 {
        DVector::zeros(0)
    } else {
        g.clone()
            .lu()
            .solve(&p)
            .ok_or_else(|| ThermalError::Singular(vec!["<matrix>".into()]))?
    };
    let resid = (&g * &x - &p).norm();
    let scale = p.norm().max(rhs_power.norm()).max(f64::MIN_POSITIVE);

    let mut temperature = vec![0.0; n];
    for node in &net.nodes {
        temperature[node.id] = match fixed[node.id] {
            Some(t) => t,
            None => x[index[node.id]],
        };
    }
    let mut absorbed = vec![0.0; n];
    for r in &net.resistors {
        let flow = (temperature[r.a] - temperature[r.b]) / r.resistance;
        if fixed[r.b].is_some() {
            absorbed[r.b] += flow;
        }
        if fixed[r.a].is_some() {
            absorbed[r.a] -= flow;
        }
    }
    let transistors: Vec<TransistorTemps> = net
        .transistors
        .iter()
        .enumerate()
        .map(|(i, t)| TransistorTemps {
            index: i,
            label: t.label.clone(),
            gate: t.gate,
            role: t.role.to_string(),
            source: temperature[t.source],
            channel: temperature[t.hot],
            drain: temperature[t.drain],
        })
        .collect();
    let peak = temperature
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let average = if transistors.is_empty() {
        let internal: Vec<f64> = (0..n)
            .filter(|&i| fixed[i].is_none())
            .map(|i| temperature[i])
            .collect();
        if internal.is_empty() {
            peak
        } else {
            internal.iter().sum::<f64>() / internal.len() as f64
        }
    } else {
        transistors.iter().map(|t| t.channel).sum::<f64>() / transistors.len() as f64
    };
    Ok(ThermalSolution {
        temperature,
        transistors,
        peak,
        average,
        absorbed,
        residual: resid / scale,
    })
}

/// Builds and solves one stack scenario. With the mid-temperature model a
/// partially conducting gate is a nominal branch to a boundary held between
/// the reference and the bare-stack temperature of that transistor.
pub fn stack_scenario(
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    spec: &StackSpec,
    scenario: &Scenario,
) -> Result<(ThermalNetwork, ThermalSolution)> {
    let g = scenario.gate_conduction;
    let mid = cfg.partial_gate == PartialGateModel::MidTemperature && g > 0.0 && g < 1.0;
    let mut net = if mid {
        let bare = build_nanowire_stack(mats, cfg, spec, 0.0)?;
        let bare = solve(&with_features(bare, mats, cfg, scenario)?)?;
        let mut net = build_nanowire_stack(mats, cfg, spec, 0.0)?;
        let r = gate_branch_resistance(mats);
        let t_ref = cfg.reference_temp;
        for (i, t) in net.transistors.clone().iter().enumerate() {
            let boundary = t_ref + (1.0 - g) * (bare.transistors[i].channel - t_ref);
            let b = net.add_node(
                format!("{}.gate_contact", t.label),
                NodeKind::Reference(boundary),
            );
            net.add_resistor(t.hot, b, r, format!("{}.gate", t.label));
        }
        net.scenario.gate_conduction = g;
        net
    } else {
        build_nanowire_stack(mats, cfg, spec, g)?
    };
    net = with_features(net, mats, cfg, scenario)?;
    let sol = solve(&net)?;
    Ok((net, sol))
}

fn with_features(
    mut net: ThermalNetwork,
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    scenario: &Scenario,
) -> Result<ThermalNetwork> {
    let pitches = scenario.bridge_pitches as f64;
    if scenario.hdpp_attached {
        net = attach_hdpp(net, mats, cfg, pitches)?;
    }
    net = attach_hej(net, mats, cfg, &scenario.hej_positions, pitches)?;
    net.scenario.bridge_pitches = scenario.bridge_pitches;
    Ok(net)
}

/// Heat-scale factor that puts the bare, insulating-gate stack's topmost
/// transistor at the calibration peak.
pub fn calibrate_heat_scale(
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    n_gates: usize,
    fan_in: usize,
) -> Result<f64> {
    let spec = StackSpec {
        n_gates,
        fan_in,
        q_per_transistor: nominal_heat(cfg, fan_in + 2),
    };
    let (_, sol) = stack_scenario(mats, cfg, &spec, &Scenario::default())?;
    let rise = sol.top() - cfg.reference_temp;
    if !(rise > 0.0) {
        return Err(ThermalError::Domain(
            "bare stack shows no temperature rise".into(),
        ));
    }
    Ok((cfg.calibration_peak - cfg.reference_temp) / rise)
}

/// Stack spec with the calibrated heat per transistor.
pub fn calibrated_stack(
    mats: &MaterialTable,
    cfg: &ThermalConfig,
    n_gates: usize,
    fan_in: usize,
) -> Result<(StackSpec, f64)> {
    let scale = calibrate_heat_scale(mats, cfg, n_gates, fan_in)?;
    Ok((
        StackSpec {
            n_gates,
            fan_in,
            q_per_transistor: scale * nominal_heat(cfg, fan_in + 2),
        },
        scale,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_resistors() {
        let ch = resistor_from_geometry(16.0, 256.0, 13.0).unwrap();
        assert!((ch - 4.81e6).abs() / 4.81e6 < 1e-3);
        let ti = resistor_from_geometry(10.0, 192.0, 21.0).unwrap();
        assert!((ti - 2.48e6).abs() / 2.48e6 < 1e-3);
        let half = resistor_from_geometry(10.0, 384.0, 21.0).unwrap();
        assert!((ti / half - 2.0).abs() < 1e-12);
        assert!(resistor_from_geometry(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn heat_products() {
        assert!((heat_q(3.2e-5, 0.8).unwrap() - 25.6e-6).abs() < 1e-18);
        assert_eq!(heat_q(0.0, 0.8).unwrap(), 0.0);
        assert!((heat_q(2.7e-5, 0.8).unwrap() - 21.6e-6).abs() < 1e-18);
    }

    #[test]
    fn two_node_network() {
        let mut net = ThermalNetwork::new();
        let r = net.add_node("ref", NodeKind::Reference(350.0));
        let a = net.add_node("a", NodeKind::Internal);
        net.add_resistor(a, r, 1e6, "r");
        net.add_source(a, 1e-5);
        let s = solve(&net).unwrap();
        assert!((s.temperature[a] - 360.0).abs() < 1e-9);
        assert!((s.absorbed[r] - 1e-5).abs() < 1e-18);
    }

    #[test]
    fn star_divider() {
        // centre node fed by 1 mW, legs to 300 K (1 kK/W) and 400 K (3 kK/W)
        let mut net = ThermalNetwork::new();
        let c = net.add_node("c", NodeKind::Internal);
        let a = net.add_node("a", NodeKind::Reference(300.0));
        let b = net.add_node("b", NodeKind::Reference(400.0));
        net.add_resistor(c, a, 1e3, "ca");
        net.add_resistor(c, b, 3e3, "cb");
        net.add_source(c, 1e-3);
        let s = solve(&net).unwrap();
        // (T-300)/1e3 + (T-400)/3e3 = 1e-3  →  T = 325.75
        let want = (1e-3 + 300.0 / 1e3 + 400.0 / 3e3) / (1.0 / 1e3 + 1.0 / 3e3);
        assert!((s.temperature[c] - want).abs() < 1e-9);
    }

    #[test]
    fn island_is_reported() {
        let mut net = ThermalNetwork::new();
        let r = net.add_node("ref", NodeKind::Reference(350.0));
        let a = net.add_node("a", NodeKind::Internal);
        let b = net.add_node("b", NodeKind::Internal);
        let c = net.add_node("c", NodeKind::Internal);
        net.add_resistor(a, r, 1.0, "ar");
        net.add_resistor(b, c, 1.0, "bc");
        match solve(&net) {
            Err(ThermalError::Singular(names)) => assert_eq!(names, vec!["b", "c"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stack_shape() {
        let mats = MaterialTable::default();
        let cfg = ThermalConfig::default();
        let spec = StackSpec {
            n_gates: 2,
            fan_in: 8,
            q_per_transistor: 1e-6,
        };
        let net = build_nanowire_stack(&mats, &cfg, &spec, 0.0).unwrap();
        assert_eq!(net.transistors.len(), 20);
        assert_eq!(net.rails.len(), 3);
        assert!(net.resistors.iter().all(|r| !r.label.ends_with(".gate")));
        assert_eq!(net.transistors[19].role, Role::Evaluate);
        assert_eq!(net.transistors[0].role, Role::Evaluate);
        assert_eq!(net.transistors[9].role, Role::Precharge);
        assert_eq!(net.transistors[10].role, Role::Precharge);
        // consecutive fragments share exactly one interface node
        for w in net.transistors.windows(2) {
            assert_eq!(w[0].drain, w[1].source);
        }
        assert!(build_nanowire_stack(&mats, &cfg, &StackSpec { fan_in: 0, ..spec }, 0.0).is_err());
    }

    #[test]
    fn hej_position_checked() {
        let mats = MaterialTable::default();
        let cfg = ThermalConfig::default();
        let spec = StackSpec {
            n_gates: 2,
            fan_in: 8,
            q_per_transistor: 1e-6,
        };
        let net = build_nanowire_stack(&mats, &cfg, &spec, 0.0).unwrap();
        let same = attach_hej(net.clone(), &mats, &cfg, &[], 10.0).unwrap();
        assert_eq!(same, net);
        assert_eq!(
            attach_hej(net, &mats, &cfg, &[20], 10.0).unwrap_err(),
            ThermalError::OutOfRange { index: 20, len: 20 }
        );
    }
}
