//! Wire delay, optimal repeater insertion and tier classification.
//!
//! Lengths passed to the delay functions are in nm; tier boundaries and the
//! distribution use gate pitches.

use serde::Serialize;

use crate::config::{CapacitanceModel, Config, DriverParams, Mode, ParamSet, TierName, TierParams};
use crate::interconnect::{distribution, InterconnectDistribution, InterconnectError};

const EPS0: f64 = 8.854_187_812_8e-12;

/// Per-unit-length wire parasitics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireRC {
    /// Ω/nm
    pub r_per_len: f64,
    /// F/nm
    pub c_per_len: f64,
    pub tier: TierName,
}

/// Width is half the pitch, height is width × aspect ratio. Capacitance uses
/// two coupling sidewalls plus a ground plate unless the tier overrides it.
pub fn wire_rc(tier: &TierParams, cap: &CapacitanceModel) -> WireRC {
    let width = tier.pitch / 2.0 * 1e-9;
    let height = width * tier.aspect_ratio;
    let rho = tier.resistivity * 1e-8;
    let r_per_m = rho / (width * height);
    let c_per_m = tier.c_per_m.unwrap_or({
        cap.eps_r * EPS0 * (2.0 * tier.aspect_ratio * cap.k_coupling + cap.k_ground)
    });
    WireRC {
        r_per_len: r_per_m * 1e-9,
        c_per_len: c_per_m * 1e-9,
        tier: tier.name,
    }
}

/// Delay of one segment of length `l` nm driven by a repeater `s` times the
/// minimum inverter and loaded by an identical repeater.
pub fn segment_delay(l: f64, s: f64, d: &DriverParams, w: &WireRC) -> f64 {
    let r_tr = d.r0 / s;
    let c_l = s * d.c0;
    let c_p = s * d.cp;
    let (r, c) = (w.r_per_len, w.c_per_len);
    d.b * r_tr * (c_l + c_p) + d.b * (c * r_tr + r * c_l) * l + d.a * r * c * l * l
}

/// Segment length (nm) and repeater size minimising delay per unit length.
pub fn optimal_segment(d: &DriverParams, w: &WireRC) -> (f64, f64) {
    let (r, c) = (w.r_per_len, w.c_per_len);
    let l_opt = (d.b * d.r0 * (d.c0 + d.cp) / (d.a * r * c)).sqrt();
    let s_opt = (d.r0 * c / (r * d.c0)).sqrt();
    (l_opt, s_opt)
}

/// Delay of a wire split into `ceil(l/l_opt)` equal optimally sized segments.
pub fn total_wire_delay(l_total: f64, d: &DriverParams, w: &WireRC) -> f64 {
    let (l_opt, s_opt) = optimal_segment(d, w);
    if l_total <= l_opt {
        return segment_delay(l_total, s_opt, d, w);
    }
    let n = (l_total / l_opt).ceil();
    n * segment_delay(l_total / n, s_opt, d, w)
}

/// Delay of an unbuffered wire driven by a minimum inverter.
pub fn unsegmented_delay(l_total: f64, d: &DriverParams, w: &WireRC) -> f64 {
    segment_delay(l_total, 1.0, d, w)
}

/// Repeaters on one wire: one per segment, except the first segment which
/// the logic gate drives itself.
pub fn repeaters_for_length(l: f64, l_opt: f64) -> u64 {
    if l < l_opt {
        0
    } else {
        ((l / l_opt).ceil() as u64).saturating_sub(1)
    }
}

/// Derived per-tier wire model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TierModel {
    pub name: TierName,
    pub beta: f64,
    pub wire: WireRC,
    pub driver: DriverParams,
    pub l_opt_nm: f64,
    pub s_opt: f64,
    /// Whether long wires on this tier are broken up by repeaters.
    pub segmented: bool,
}

impl TierModel {
    pub fn new(
        tier: &TierParams,
        cap: &CapacitanceModel,
        driver: DriverParams,
        mode: Mode,
    ) -> Self {
        let wire = wire_rc(tier, cap);
        let (l_opt_nm, s_opt) = optimal_segment(&driver, &wire);
        Self {
            name: tier.name,
            beta: tier.beta,
            wire,
            driver,
            l_opt_nm,
            s_opt,
            segmented: !(mode == Mode::Skybridge && tier.name == TierName::Local),
        }
    }

    /// Delay of a wire of `l_nm` on this tier.
    pub fn delay(&self, l_nm: f64) -> f64 {
        if self.segmented {
            total_wire_delay(l_nm, &self.driver, &self.wire)
        } else {
            unsegmented_delay(l_nm, &self.driver, &self.wire)
        }
    }
}

/// Builds local, semi-global and global models in that order.
pub fn tier_models(
    tiers: &[TierParams],
    cap: &CapacitanceModel,
    driver: DriverParams,
    mode: Mode,
) -> Vec<TierModel> {
    TierName::ALL
        .iter()
        .map(|name| {
            let t = tiers
                .iter()
                .find(|t| t.name == *name)
                .unwrap_or_else(|| panic!("tier {name} missing"));
            TierModel::new(t, cap, driver, mode)
        })
        .collect()
}

/// Longest wire (gate pitches) assigned to each tier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TierBoundaries {
    pub l_max_local: u64,
    pub l_max_semi_global: u64,
    pub l_max_global: u64,
    /// Tiers whose delay target could not be met even at one pitch.
    pub infeasible: Vec<TierName>,
}

impl TierBoundaries {
    pub fn get(&self, name: TierName) -> u64 {
        match name {
            TierName::Local => self.l_max_local,
            TierName::SemiGlobal => self.l_max_semi_global,
            TierName::Global => self.l_max_global,
        }
    }
}

/// Largest integer `l` in `[1, hi]` with `f(l) <= target`, assuming `f`
/// non-decreasing. `None` if even `l = 1` exceeds the target.
fn bisect_max(target: f64, hi: u64, f: impl Fn(u64) -> f64) -> Option<u64> {
    if f(1) > target {
        return None;
    }
    let (mut lo, mut hi) = (1u64, hi.max(1));
    if f(hi) <= target {
        return Some(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Splits the distribution into tiers. The global bound is the longest wire
/// expected at least once; lower tiers take the longest length whose delay
/// fits the tier's share of the clock period (CMOS) or the global delay
/// (fabric, where every tier gets the full evaluate phase).
pub fn classify(
    dist: &InterconnectDistribution,
    gate_pitch_nm: f64,
    models: &[TierModel],
    mode: Mode,
) -> TierBoundaries {
    let model = |n: TierName| models.iter().find(|m| m.name == n).expect("tier model");
    let global = model(TierName::Global);
    let l_g = dist.longest().unwrap_or(1).max(1);
    let tau_g = global.delay(l_g as f64 * gate_pitch_nm);
    let mut infeasible = Vec::new();
    let mut bound = |n: TierName| {
        let m = model(n);
        let target = match mode {
            Mode::Cmos => m.beta / global.beta * tau_g,
            Mode::Skybridge => tau_g,
        };
        bisect_max(target, l_g, |l| m.delay(l as f64 * gate_pitch_nm)).unwrap_or_else(|| {
            infeasible.push(n);
            1
        })
    };
    let semi = bound(TierName::SemiGlobal).min(l_g);
    let local = bound(TierName::Local).min(semi);
    TierBoundaries {
        l_max_local: local,
        l_max_semi_global: semi,
        l_max_global: l_g,
        infeasible,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TierReport {
    pub name: TierName,
    pub l_opt_nm: f64,
    pub l_opt_pitches: f64,
    pub s_opt: f64,
    pub l_max: u64,
    /// Delay of the tier's longest wire, s.
    pub boundary_delay: f64,
    pub repeaters: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeaterReport {
    pub mode: Mode,
    pub tiers: Vec<TierReport>,
    pub total: f64,
}

/// Expected repeater count per tier. Each length belongs to exactly one tier
/// (`previous bound < l <= this bound`); wires shorter than the tier's
/// optimal segment need none and unsegmented tiers contribute nothing.
pub fn repeater_counts(
    dist: &InterconnectDistribution,
    bounds: &TierBoundaries,
    gate_pitch_nm: f64,
    models: &[TierModel],
    mode: Mode,
) -> RepeaterReport {
    let mut prev = 0u64;
    let mut tiers = Vec::new();
    let mut total = 0.0;
    for name in TierName::ALL {
        let m = models.iter().find(|m| m.name == name).expect("tier model");
        let upper = bounds.get(name);
        let l_opt_p = m.l_opt_nm / gate_pitch_nm;
        let mut r = 0.0;
        if m.segmented {
            for l in (prev + 1)..=upper {
                let lf = l as f64;
                if lf >= l_opt_p {
                    r += dist.count_at(l) * repeaters_for_length(lf, l_opt_p) as f64;
                }
            }
        }
        total += r;
        tiers.push(TierReport {
            name,
            l_opt_nm: m.l_opt_nm,
            l_opt_pitches: l_opt_p,
            s_opt: m.s_opt,
            l_max: upper,
            boundary_delay: m.delay(upper as f64 * gate_pitch_nm),
            repeaters: r,
        });
        prev = prev.max(upper);
    }
    RepeaterReport { mode, tiers, total }
}

/// Distribution, tier split and repeater count of one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub set: &'static str,
    pub gate_pitch_nm: f64,
    pub distribution: InterconnectDistribution,
    pub models: Vec<TierModel>,
    pub bounds: TierBoundaries,
    pub report: RepeaterReport,
}

pub fn analyze(cfg: &Config, set: ParamSet) -> Result<Analysis, InterconnectError> {
    let params = cfg.fabric(set);
    let mode = set.mode();
    let dist = distribution(params)?;
    let models = tier_models(
        &cfg.tiers,
        &cfg.capacitance,
        cfg.driver.for_mode(mode),
        mode,
    );
    let pitch = params.gate_pitch_h;
    let bounds = classify(&dist, pitch, &models, mode);
    let report = repeater_counts(&dist, &bounds, pitch, &models, mode);
    Ok(Analysis {
        set: set.label(),
        gate_pitch_nm: pitch,
        distribution: dist,
        models,
        bounds,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tier(name: TierName, rho: f64, ar: f64, pitch: f64) -> TierParams {
        TierParams {
            name,
            resistivity: rho,
            aspect_ratio: ar,
            pitch,
            beta: 0.25,
            c_per_m: None,
        }
    }

    fn driver() -> DriverParams {
        DriverParams {
            r0: 8e3,
            c0: 0.15e-15,
            cp: 0.1e-15,
            a: 0.4,
            b: 0.7,
        }
    }

    #[test]
    fn wire_resistance() {
        let cap = CapacitanceModel::default();
        let g = wire_rc(&tier(TierName::Global, 5.26, 2.34, 152.0), &cap);
        // Ω/nm → Ω/μm
        assert!((g.r_per_len * 1e3 - 3.892).abs() < 5e-3);
        let l = wire_rc(&tier(TierName::Local, 6.96, 2.0, 38.0), &cap);
        assert!((l.r_per_len * 1e3 - 96.4).abs() < 0.1);
        let wide = wire_rc(&tier(TierName::Local, 6.96, 2.0, 76.0), &cap);
        assert!((l.r_per_len / wide.r_per_len - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_length_delay() {
        let w = wire_rc(
            &tier(TierName::Global, 5.26, 2.34, 152.0),
            &CapacitanceModel::default(),
        );
        let d = driver();
        let want = d.b * d.r0 * (d.c0 + d.cp);
        for s in [1.0, 3.0, 17.5] {
            assert!((segment_delay(0.0, s, &d, &w) - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn optimum_scaling() {
        let d = driver();
        let w = WireRC {
            r_per_len: 1e-3,
            c_per_len: 2e-19,
            tier: TierName::Global,
        };
        let w4 = WireRC {
            r_per_len: 4e-3,
            c_per_len: 8e-19,
            tier: TierName::Global,
        };
        let (l1, s1) = optimal_segment(&d, &w);
        let (l4, s4) = optimal_segment(&d, &w4);
        assert!((l1 / l4 - 4.0).abs() < 1e-12);
        assert!((s4 - s1).abs() < 1e-12 * s1);
        let bal = WireRC {
            r_per_len: d.r0,
            c_per_len: d.c0,
            tier: TierName::Global,
        };
        assert!((optimal_segment(&d, &bal).1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repeater_convention() {
        assert_eq!(repeaters_for_length(3.0 * 7.5, 7.5), 2);
        assert_eq!(repeaters_for_length(7.4, 7.5), 0);
        assert_eq!(repeaters_for_length(7.5, 7.5), 0);
        assert_eq!(repeaters_for_length(7.6, 7.5), 1);
    }

    #[test]
    fn bisect_edges() {
        assert_eq!(bisect_max(5.0, 100, |l| l as f64), Some(5));
        assert_eq!(bisect_max(0.5, 100, |l| l as f64), None);
        assert_eq!(bisect_max(500.0, 100, |l| l as f64), Some(100));
    }
}
