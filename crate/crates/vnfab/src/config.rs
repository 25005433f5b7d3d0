//! Parameter types, configuration loading and validation.
//!
//! Every tunable constant lives in one JSON document. Units are fixed per
//! field: lengths in nm, resistivity in μΩ·cm, resistance in Ω, capacitance
//! in F, thermal conductivity in W/(m·K), temperature in K.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("unknown parameter set `{0}` (expected 1, 2 or skybridge)")]
    UnknownParamSet(String),
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Interconnect mode: static 2-D CMOS or the vertical-nanowire fabric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cmos,
    Skybridge,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cmos => "cmos",
            Mode::Skybridge => "skybridge",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cmos" => Ok(Mode::Cmos),
            "skybridge" => Ok(Mode::Skybridge),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Rent-rule and geometry parameters for one fabric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FabricParams {
    pub rent_k: f64,
    pub rent_p: f64,
    pub fan_out: f64,
    /// Average horizontal gate pitch, nm.
    pub gate_pitch_h: f64,
    /// Vertical gate pitch, nm. Ignored when `gz == 1`.
    #[serde(default)]
    pub gate_pitch_v: f64,
    /// Gates stacked per nanowire.
    #[serde(default = "one_u32")]
    pub gz: u32,
    pub n_gates: u64,
}

fn one_u32() -> u32 {
    1
}

impl FabricParams {
    pub fn validate(&self, prefix: &str) -> Result<(), ConfigError> {
        let f = |name: &str| format!("{prefix}.{name}");
        if !(self.rent_k >= 0.0 && self.rent_k.is_finite()) {
            return Err(invalid(f("rent_k"), "must be finite and >= 0"));
        }
        if !(self.rent_p > 0.0 && self.rent_p < 1.0) {
            return Err(invalid(f("rent_p"), "rent_p out of (0,1)"));
        }
        if !(self.fan_out > 0.0 && self.fan_out.is_finite()) {
            return Err(invalid(f("fan_out"), "must be > 0"));
        }
        if !(self.gate_pitch_h > 0.0 && self.gate_pitch_h.is_finite()) {
            return Err(invalid(f("gate_pitch_h"), "must be > 0"));
        }
        if self.gz < 1 {
            return Err(invalid(f("gz"), "must be >= 1"));
        }
        if self.gz > 1 && !(self.gate_pitch_v > 0.0 && self.gate_pitch_v.is_finite()) {
            return Err(invalid(f("gate_pitch_v"), "must be > 0 when gz > 1"));
        }
        if self.n_gates < 2 {
            return Err(invalid(f("n_gates"), "must be >= 2"));
        }
        Ok(())
    }

    /// Vertical pitch expressed in horizontal gate pitches (0 for 2-D).
    pub fn p_z(&self) -> f64 {
        if self.gz > 1 {
            self.gate_pitch_v / self.gate_pitch_h
        } else {
            0.0
        }
    }

    pub fn alpha(&self) -> f64 {
        self.fan_out / (1.0 + self.fan_out)
    }

    pub fn with_n_gates(&self, n_gates: u64) -> Self {
        Self {
            n_gates,
            ..self.clone()
        }
    }
}

/// `fan_out / (1 + fan_out)`: fraction of terminals that are outputs.
pub fn alpha(fan_out: f64) -> Result<f64, ConfigError> {
    if !(fan_out > 0.0 && fan_out.is_finite()) {
        return Err(invalid("fan_out", "must be > 0"));
    }
    Ok(fan_out / (1.0 + fan_out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TierName {
    Local,
    SemiGlobal,
    Global,
}

impl TierName {
    pub const ALL: [TierName; 3] = [TierName::Local, TierName::SemiGlobal, TierName::Global];

    pub fn as_str(self) -> &'static str {
        match self {
            TierName::Local => "local",
            TierName::SemiGlobal => "semi_global",
            TierName::Global => "global",
        }
    }
}

impl fmt::Display for TierName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Wiring parameters of one metal tier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TierParams {
    pub name: TierName,
    /// μΩ·cm
    pub resistivity: f64,
    /// height / width
    pub aspect_ratio: f64,
    /// nm
    pub pitch: f64,
    /// Fraction of the clock period allowed for wire delay.
    pub beta: f64,
    /// Optional measured capacitance per unit length, F/m. Overrides the
    /// built-in plate/coupling estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_per_m: Option<f64>,
}

impl TierParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let f = |name: &str| format!("tiers.{}.{name}", self.name);
        if !(self.resistivity > 0.0) {
            return Err(invalid(f("resistivity"), "must be > 0"));
        }
        if !(self.aspect_ratio > 0.0) {
            return Err(invalid(f("aspect_ratio"), "must be > 0"));
        }
        if !(self.pitch > 0.0) {
            return Err(invalid(f("pitch"), "must be > 0"));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(invalid(f("beta"), "beta out of (0,1]"));
        }
        if let Some(c) = self.c_per_m {
            if !(c > 0.0) {
                return Err(invalid(f("c_per_m"), "must be > 0"));
            }
        }
        Ok(())
    }
}

/// Dielectric constants used for the wire capacitance estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacitanceModel {
    pub eps_r: f64,
    pub k_coupling: f64,
    pub k_ground: f64,
}

impl Default for CapacitanceModel {
    fn default() -> Self {
        Self {
            eps_r: 2.5,
            k_coupling: 1.0,
            k_ground: 2.0,
        }
    }
}

/// Minimum-inverter electricals plus the swing constants of the delay model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriverParams {
    pub r0: f64,
    pub c0: f64,
    pub cp: f64,
    pub a: f64,
    pub b: f64,
}

impl DriverParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("r0", self.r0),
            ("c0", self.c0),
            ("cp", self.cp),
            ("a", self.a),
            ("b", self.b),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("driver.{name}"), "must be > 0"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Swing {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwingTable {
    /// 50 % propagation delay, used for static CMOS.
    pub cmos: Swing,
    /// 10–90 % fall time, used for dynamic fabric logic.
    pub skybridge: Swing,
}

impl Default for SwingTable {
    fn default() -> Self {
        Self {
            cmos: Swing { a: 0.4, b: 0.7 },
            skybridge: Swing { a: 0.9, b: 2.2 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverConfig {
    pub r0: f64,
    pub c0: f64,
    pub cp: f64,
    #[serde(default)]
    pub swing: SwingTable,
}

impl DriverConfig {
    pub fn for_mode(&self, mode: Mode) -> DriverParams {
        let s = match mode {
            Mode::Cmos => self.swing.cmos,
            Mode::Skybridge => self.swing.skybridge,
        };
        DriverParams {
            r0: self.r0,
            c0: self.c0,
            cp: self.cp,
            a: s.a,
            b: s.b,
        }
    }
}

/// One row of the material table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialProps {
    pub name: String,
    pub material: String,
    /// W/(m·K)
    pub thermal_conductivity: f64,
    /// (length, width, thickness), nm
    pub dims: [f64; 3],
}

impl MaterialProps {
    fn new(name: &str, material: &str, k: f64, dims: [f64; 3]) -> Self {
        Self {
            name: name.into(),
            material: material.into(),
            thermal_conductivity: k,
            dims,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.thermal_conductivity > 0.0) {
            return Err(invalid(
                format!("materials.{}.thermal_conductivity", self.name),
                "must be > 0",
            ));
        }
        if self.dims.iter().any(|d| !(*d > 0.0)) {
            return Err(invalid(
                format!("materials.{}.dims", self.name),
                "must be > 0",
            ));
        }
        Ok(())
    }
}

pub const DRAIN_ELECTRODE: &str = "drain_electrode";
pub const DRAIN_SILICIDE: &str = "drain_silicide";
pub const SPACER: &str = "spacer";
pub const CHANNEL: &str = "channel";
pub const GATE_OXIDE: &str = "gate_oxide";
pub const GATE_ELECTRODE: &str = "gate_electrode";
pub const HEAT_JUNCTION: &str = "heat_junction";
pub const INTERLAYER: &str = "interlayer";
pub const BRIDGE: &str = "bridge";

/// Material rows used by the transistor thermal model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialTable {
    pub rows: Vec<MaterialProps>,
}

impl Default for MaterialTable {
    fn default() -> Self {
        Self {
            rows: vec![
                MaterialProps::new(DRAIN_ELECTRODE, "Ti", 21.0, [10.0, 16.0, 12.0]),
                MaterialProps::new(DRAIN_SILICIDE, "silicide", 45.9, [10.0, 16.0, 16.0]),
                MaterialProps::new(SPACER, "Si3N4", 1.5, [5.0, 16.0, 18.5]),
                MaterialProps::new(CHANNEL, "doped Si", 13.0, [16.0, 16.0, 16.0]),
                MaterialProps::new(GATE_OXIDE, "HfO2", 0.52, [16.0, 18.0, 2.0]),
                MaterialProps::new(GATE_ELECTRODE, "TiN", 1.9, [10.0, 16.0, 6.0]),
                MaterialProps::new(HEAT_JUNCTION, "Al2O3", 30.0, [4.0, 16.0, 18.5]),
                // No dimensions are tabulated; one bridge width of lateral
                // dielectric over a channel-sized face.
                MaterialProps::new(INTERLAYER, "C-doped SiO2", 0.6, [58.0, 16.0, 16.0]),
                MaterialProps::new(BRIDGE, "W", 167.0, [43.5, 58.0, 16.0]),
            ],
        }
    }
}

impl MaterialTable {
    pub fn get(&self, name: &str) -> Option<&MaterialProps> {
        self.rows.iter().find(|m| m.name == name)
    }

    /// Looks up a row that `validate` guarantees to exist.
    pub fn row(&self, name: &str) -> &MaterialProps {
        self.get(name)
            .unwrap_or_else(|| panic!("material `{name}` missing from a validated table"))
    }

    /// Fills any missing standard rows from the defaults.
    fn complete(&mut self) {
        for d in MaterialTable::default().rows {
            if self.get(&d.name).is_none() {
                self.rows.push(d);
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for m in &self.rows {
            m.validate()?;
        }
        for name in [
            DRAIN_ELECTRODE,
            DRAIN_SILICIDE,
            SPACER,
            CHANNEL,
            GATE_OXIDE,
            GATE_ELECTRODE,
            HEAT_JUNCTION,
            INTERLAYER,
            BRIDGE,
        ] {
            if self.get(name).is_none() {
                return Err(invalid(format!("materials.{name}"), "missing row"));
            }
        }
        Ok(())
    }
}

/// How a partially conducting gate is represented in the thermal network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialGateModel {
    /// Gate branch resistance divided by the conduction level.
    ScaledResistance,
    /// Nominal branch tied to a boundary node halfway between the reference
    /// and the local drain temperature of the bare network.
    MidTemperature,
}

/// Thermal network settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalConfig {
    /// Substrate / pillar reference temperature, K.
    pub reference_temp: f64,
    /// Transistor on-current, A.
    pub on_current: f64,
    /// Supply voltage, V.
    pub vdd: f64,
    /// Peak temperature of the bare stack with insulating gates, used to fit
    /// the heat-scale factor, K.
    pub calibration_peak: f64,
    /// Nanowire pitch used for bridge lengths, nm.
    pub nanowire_pitch: f64,
    /// Heat-junction slab thickness along the heat path, nm.
    pub hej_thickness: f64,
    /// Cross-section (width, thickness) of rail bridges to the power pillar, nm.
    pub rail_bridge_section: [f64; 2],
    /// Cross-section of dedicated heat bridges leaving a junction, nm.
    pub heat_bridge_section: [f64; 2],
    /// Adds one interlayer-dielectric resistor per transistor to a far-field
    /// reference.
    pub lateral_ild: bool,
    pub partial_gate: PartialGateModel,
}

impl Default for ThermalConfig {
    fn default() -> Self {
        Self {
            reference_temp: 350.0,
            on_current: 3.2e-5,
            vdd: 0.8,
            calibration_peak: 4307.0,
            nanowire_pitch: 66.0,
            hej_thickness: 6.0,
            rail_bridge_section: [58.0, 16.0],
            heat_bridge_section: [58.0, 58.0],
            lateral_ild: false,
            partial_gate: PartialGateModel::ScaledResistance,
        }
    }
}

impl ThermalConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let pos = [
            ("reference_temp", self.reference_temp),
            ("on_current", self.on_current),
            ("vdd", self.vdd),
            ("calibration_peak", self.calibration_peak),
            ("nanowire_pitch", self.nanowire_pitch),
            ("hej_thickness", self.hej_thickness),
            ("rail_bridge_section[0]", self.rail_bridge_section[0]),
            ("rail_bridge_section[1]", self.rail_bridge_section[1]),
            ("heat_bridge_section[0]", self.heat_bridge_section[0]),
            ("heat_bridge_section[1]", self.heat_bridge_section[1]),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("thermal.{name}"), "must be > 0"));
            }
        }
        if self.calibration_peak <= self.reference_temp {
            return Err(invalid(
                "thermal.calibration_peak",
                "must exceed reference_temp",
            ));
        }
        Ok(())
    }
}

/// Size triple of one fabric feature, nm. Absent entries are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct FeatureRule {
    pub width: f64,
    pub length: f64,
    pub thickness: f64,
    pub spacing: f64,
}

impl FeatureRule {
    const fn new(width: f64, length: f64, thickness: f64, spacing: f64) -> Self {
        Self {
            width,
            length,
            thickness,
            spacing,
        }
    }
}

/// Geometric design rules of the nanowire fabric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRules {
    pub bridge: FeatureRule,
    pub channel: FeatureRule,
    pub gate_electrode: FeatureRule,
    pub contact: FeatureRule,
    pub heat_junction: FeatureRule,
    pub coax_si_m1: FeatureRule,
    pub coax_m1_m2: FeatureRule,
    /// nm
    pub nanowire_width: f64,
    /// nm
    pub nanowire_height: f64,
    /// nm
    pub nanowire_pitch: f64,
    /// Minimum wire-to-wire spacing for material deposition, nm.
    pub min_spacing: f64,
    /// Logic gates stacked on one logic nanowire.
    pub gates_per_nanowire: u32,
    /// Input transistors available per gate after the heat-junction slot.
    pub usable_fan_in: u32,
    /// Signal nanowires per logic nanowire.
    pub signal_per_logic: f64,
    /// Pillar spacing along the block periphery, pitches.
    pub pillar_spacing: u32,
    /// Pillar footprint edge, pitches.
    pub pillar_size: u32,
}

impl Default for DesignRules {
    fn default() -> Self {
        Self {
            bridge: FeatureRule::new(58.0, 16.0, 16.0, 16.0),
            channel: FeatureRule::new(16.0, 16.0, 16.0, 58.0),
            gate_electrode: FeatureRule::new(29.0, 16.0, 11.5, 0.0),
            contact: FeatureRule::new(26.0, 16.0, 16.0, 39.0),
            heat_junction: FeatureRule::new(22.0, 16.0, 6.0, 0.0),
            coax_si_m1: FeatureRule::new(37.0, 0.0, 37.0, 4.0),
            coax_m1_m2: FeatureRule::new(58.0, 0.0, 58.0, 4.0),
            nanowire_width: 16.0,
            nanowire_height: 868.0,
            nanowire_pitch: 66.0,
            min_spacing: 16.0,
            gates_per_nanowire: 2,
            usable_fan_in: 8,
            signal_per_logic: 1.0,
            pillar_spacing: 10,
            pillar_size: 2,
        }
    }
}

impl DesignRules {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("nanowire_width", self.nanowire_width),
            ("nanowire_height", self.nanowire_height),
            ("nanowire_pitch", self.nanowire_pitch),
            ("min_spacing", self.min_spacing),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("layout.{name}"), "must be > 0"));
            }
        }
        if self.nanowire_pitch < self.nanowire_width + self.min_spacing {
            return Err(invalid(
                "layout.nanowire_pitch",
                "pitch must be >= nanowire_width + min_spacing",
            ));
        }
        if self.gates_per_nanowire == 0 {
            return Err(invalid("layout.gates_per_nanowire", "must be >= 1"));
        }
        if self.usable_fan_in == 0 {
            return Err(invalid("layout.usable_fan_in", "must be >= 1"));
        }
        if !(self.signal_per_logic >= 0.0) {
            return Err(invalid("layout.signal_per_logic", "must be >= 0"));
        }
        if self.pillar_spacing == 0 || self.pillar_size == 0 {
            return Err(invalid("layout.pillar_spacing", "must be >= 1"));
        }
        for (name, r) in [
            ("bridge", &self.bridge),
            ("channel", &self.channel),
            ("gate_electrode", &self.gate_electrode),
            ("contact", &self.contact),
            ("heat_junction", &self.heat_junction),
            ("coax_si_m1", &self.coax_si_m1),
            ("coax_m1_m2", &self.coax_m1_m2),
        ] {
            if r.width <= 0.0 || r.length < 0.0 || r.thickness <= 0.0 || r.spacing < 0.0 {
                return Err(invalid(
                    format!("layout.{name}"),
                    "dimensions must be positive",
                ));
            }
        }
        Ok(())
    }
}

/// The three Rent parameter sets compared by the interconnect study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FabricSets {
    /// Typical microprocessor values from the literature.
    pub cmos_set1: FabricParams,
    /// Values extracted from the benchmark circuits.
    pub cmos_set2: FabricParams,
    pub skybridge: FabricParams,
}

/// Selects one of the three parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamSet {
    Cmos1,
    Cmos2,
    Skybridge,
}

impl ParamSet {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "1" | "cmos1" | "cmos_set1" => Ok(ParamSet::Cmos1),
            "2" | "cmos2" | "cmos_set2" => Ok(ParamSet::Cmos2),
            "skybridge" | "sb" => Ok(ParamSet::Skybridge),
            other => Err(ConfigError::UnknownParamSet(other.to_string())),
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            ParamSet::Skybridge => Mode::Skybridge,
            _ => Mode::Cmos,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParamSet::Cmos1 => "cmos_set1",
            ParamSet::Cmos2 => "cmos_set2",
            ParamSet::Skybridge => "skybridge",
        }
    }
}

/// Fully resolved, validated parameter bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub fabric: FabricSets,
    pub tiers: Vec<TierParams>,
    #[serde(default)]
    pub capacitance: CapacitanceModel,
    pub driver: DriverConfig,
    #[serde(default)]
    pub materials: MaterialTable,
    #[serde(default)]
    pub thermal: ThermalConfig,
    #[serde(default)]
    pub layout: DesignRules,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let mut cfg: Config = serde_json::from_str(text)?;
        cfg.materials.complete();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.fabric.cmos_set1.validate("fabric.cmos_set1")?;
        self.fabric.cmos_set2.validate("fabric.cmos_set2")?;
        self.fabric.skybridge.validate("fabric.skybridge")?;
        if self.tiers.len() != 3 {
            return Err(invalid("tiers", "exactly three tiers required"));
        }
        for name in TierName::ALL {
            if self.tiers.iter().filter(|t| t.name == name).count() != 1 {
                return Err(invalid("tiers", format!("tier `{name}` must appear once")));
            }
        }
        for t in &self.tiers {
            t.validate()?;
        }
        for (name, v) in [
            ("eps_r", self.capacitance.eps_r),
            ("k_coupling", self.capacitance.k_coupling),
            ("k_ground", self.capacitance.k_ground),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("capacitance.{name}"), "must be >= 0"));
            }
        }
        self.driver.for_mode(Mode::Cmos).validate()?;
        self.driver.for_mode(Mode::Skybridge).validate()?;
        self.materials.validate()?;
        self.thermal.validate()?;
        self.layout.validate()?;
        Ok(())
    }

    pub fn tier(&self, name: TierName) -> &TierParams {
        self.tiers
            .iter()
            .find(|t| t.name == name)
            .expect("validated config has every tier")
    }

    pub fn fabric(&self, set: ParamSet) -> &FabricParams {
        match set {
            ParamSet::Cmos1 => &self.fabric.cmos_set1,
            ParamSet::Cmos2 => &self.fabric.cmos_set2,
            ParamSet::Skybridge => &self.fabric.skybridge,
        }
    }
}

/// The example configuration shipped with the repository.
pub const DEFAULT_CONFIG_JSON: &str = include_str!("../../../configs/default.json");

impl Default for Config {
    fn default() -> Self {
        Config::from_json(DEFAULT_CONFIG_JSON).expect("shipped default config is valid")
    }
}

/// Reads, parses and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<Config, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Config::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(1.0).unwrap(), 0.5);
        assert_eq!(alpha(3.0).unwrap(), 0.75);
        assert!((alpha(2.018).unwrap() - 0.6687).abs() < 5e-5);
        assert!(alpha(0.0).is_err());
        assert!(alpha(-1.0).is_err());
    }

    #[test]
    fn default_config_loads() {
        let cfg = Config::default();
        let sb = &cfg.fabric.skybridge;
        assert_eq!((sb.rent_k, sb.rent_p, sb.fan_out), (5.39, 0.577, 2.018));
        assert_eq!(cfg.materials, MaterialTable::default());
    }

    #[test]
    fn rent_p_bound() {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_CONFIG_JSON).unwrap();
        v["fabric"]["skybridge"]["rent_p"] = 1.2.into();
        let err = Config::from_json(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("rent_p out of (0,1)"), "{err}");
    }

    #[test]
    fn missing_materials_take_defaults() {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_CONFIG_JSON).unwrap();
        v.as_object_mut().unwrap().remove("materials");
        let cfg = Config::from_json(&v.to_string()).unwrap();
        assert_eq!(cfg.materials, MaterialTable::default());

        v["materials"] = serde_json::json!({ "rows": [] });
        let cfg = Config::from_json(&v.to_string()).unwrap();
        assert_eq!(
            cfg.materials.rows.len(),
            MaterialTable::default().rows.len()
        );
    }

    #[test]
    fn driver_required() {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_CONFIG_JSON).unwrap();
        v.as_object_mut().unwrap().remove("driver");
        assert!(matches!(
            Config::from_json(&v.to_string()),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn pitch_below_spacing_rejected() {
        let mut cfg = Config::default();
        cfg.layout.nanowire_pitch = 20.0;
        assert!(cfg.validate().is_err());
    }
}
