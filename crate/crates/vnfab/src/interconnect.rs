//! Stochastic wire-length distribution from Rent's rule.
//!
//! Lengths are integers in units of the horizontal gate pitch. The 3-D
//! variant stacks `gz` gate layers at a vertical pitch `p_z` and counts a
//! vertical hop as `p_z` horizontal pitches.

use serde::Serialize;
use thiserror::Error;

use crate::config::FabricParams;

#[derive(Debug, Error, PartialEq)]
pub enum InterconnectError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate distribution: {0}")]
    Degenerate(String),
}

type Result<T> = std::result::Result<T, InterconnectError>;

fn domain(msg: impl Into<String>) -> InterconnectError {
    InterconnectError::Domain(msg.into())
}

/// Longest Manhattan wire across a square array of `n_gates`.
pub fn l_max_2d(n_gates: u64) -> Result<u64> {
    if n_gates < 2 {
        return Err(domain(format!("n_gates = {n_gates} < 2")));
    }
    Ok((2.0 * ((n_gates as f64).sqrt() - 1.0)).floor() as u64)
}

/// Longest Manhattan wire across `gz` stacked layers; `p_z` in horizontal
/// pitches, not rounded.
pub fn l_max_3d(n_gates: u64, gz: u32, p_z: f64) -> Result<u64> {
    if gz == 0 {
        return Err(domain("gz must be >= 1"));
    }
    let per_layer = n_gates as f64 / gz as f64;
    if per_layer < 1.0 {
        return Err(domain(format!("n_gates / gz = {per_layer} < 1")));
    }
    if !(p_z >= 0.0) {
        return Err(domain("p_z must be >= 0"));
    }
    let l = 2.0 * (per_layer.sqrt() - 1.0) + (gz as f64 - 1.0) * p_z;
    Ok(l.floor().max(0.0) as u64)
}

/// Continuum span of an `n`-gate square layer (twice its side), the length
/// scale of the pair-count polynomial.
pub fn lattice_span(n_gates_per_layer: f64) -> f64 {
    2.0 * n_gates_per_layer.sqrt()
}

fn m_2d_raw(l: f64, span: f64) -> f64 {
    if l <= 0.0 || l >= span {
        0.0
    } else if l < span / 2.0 {
        l * l * l / 3.0 - span * l * l + span * span / 2.0 * l
    } else {
        let d = span - l;
        d * d * d / 3.0
    }
}

/// Number of gate pairs separated by `l` in a square layer of span `span`.
pub fn m_2d(l: f64, span: f64) -> Result<f64> {
    if !(l >= 1.0 && l < span) {
        return Err(domain(format!("l = {l} outside [1, {span})")));
    }
    Ok(m_2d_raw(l, span))
}

/// Both branch polynomials of the planar pair count at `l`: the near
/// branch (used below half the span) and the far branch.
pub fn m_2d_branches(l: f64, span: f64) -> (f64, f64) {
    let d = span - l;
    (
        l * l * l / 3.0 - span * l * l + span * span / 2.0 * l,
        d * d * d / 3.0,
    )
}

/// Vertical pitch rounded onto the integer length lattice.
pub fn p_z_lattice(p_z: f64) -> f64 {
    p_z.round()
}

/// Pair count for `gz` stacked layers: layer offset `i` shifts the planar
/// count by `i·p_z` and has `gz − i` layer pairings.
pub fn m_3d(l: f64, span: f64, gz: u32, p_z: f64) -> Result<f64> {
    if !(l >= 1.0) {
        return Err(domain(format!("l = {l} < 1")));
    }
    let pz = p_z_lattice(p_z);
    Ok((0..gz)
        .map(|i| {
            let x = l - i as f64 * pz;
            if x >= 0.0 {
                (gz - i) as f64 * m_2d_raw(x, span)
            } else {
                0.0
            }
        })
        .sum())
}

/// Gate counts of the source block (A), the blocks already enclosed (B) and
/// the ring at distance `l` (C).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockCounts {
    pub n_a: f64,
    pub n_b: f64,
    pub n_c: f64,
}

fn nb_2d(x: f64) -> f64 {
    if x >= 0.0 {
        x * (x - 1.0)
    } else {
        0.0
    }
}

fn nc_2d(x: f64) -> f64 {
    if x >= 0.0 {
        2.0 * x
    } else {
        0.0
    }
}

pub fn block_counts_2d(l: f64) -> BlockCounts {
    BlockCounts {
        n_a: 1.0,
        n_b: nb_2d(l),
        n_c: nc_2d(l),
    }
}

pub fn block_counts_3d(l: f64, gz: u32, p_z: f64) -> BlockCounts {
    let pz = p_z_lattice(p_z);
    let g = gz as f64;
    let mut n_b = nb_2d(l);
    let mut n_c = nc_2d(l);
    for i in 1..gz {
        let x = l - i as f64 * pz;
        if x >= 0.0 {
            let w = 2.0 * (g - i as f64) / g;
            n_b += w * nb_2d(x);
            n_c += w * nc_2d(x);
        }
    }
    BlockCounts { n_a: 1.0, n_b, n_c }
}

/// Expected connections between one gate pair at the block geometry `b`.
/// Returns 0 when the ring is empty.
pub fn i_of_l(b: BlockCounts, alpha: f64, rent_k: f64, rent_p: f64) -> f64 {
    if b.n_c <= 0.0 {
        return 0.0;
    }
    let p = rent_p;
    let bracket = (b.n_a + b.n_b).powf(p) - b.n_b.powf(p) + (b.n_b + b.n_c).powf(p)
        - (b.n_a + b.n_b + b.n_c).powf(p);
    alpha * rent_k / b.n_c * bracket
}

/// Total interconnect count `α·k·N·(1 − N^(p−1))`.
pub fn i_total(alpha: f64, rent_k: f64, rent_p: f64, n_gates: f64) -> f64 {
    alpha * rent_k * n_gates * (1.0 - n_gates.powf(rent_p - 1.0))
}

/// Normalisation constant so that `Σ Γ·M·I = I_total`. Summation runs
/// left to right over `l = 1..=l_max`.
pub fn gamma(
    i_total: f64,
    l_max: u64,
    m_fn: impl Fn(f64) -> f64,
    i_fn: impl Fn(f64) -> f64,
) -> Result<f64> {
    let mut sum = 0.0;
    for l in 1..=l_max {
        let x = l as f64;
        sum += m_fn(x) * i_fn(x);
    }
    if !(sum > 0.0) || !sum.is_finite() {
        return Err(InterconnectError::Degenerate(format!(
            "sum of M·I over 1..={l_max} is {sum}"
        )));
    }
    Ok(i_total / sum)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterconnectDistribution {
    pub lengths: Vec<u64>,
    pub counts: Vec<f64>,
    pub l_max: u64,
    pub gamma: f64,
    pub i_total: f64,
}

impl InterconnectDistribution {
    /// Largest length still expected to occur at least once.
    pub fn longest(&self) -> Option<u64> {
        self.lengths
            .iter()
            .zip(&self.counts)
            .rev()
            .find(|(_, &f)| f >= 1.0)
            .map(|(&l, _)| l)
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn count_at(&self, l: u64) -> f64 {
        if l == 0 || l > self.l_max {
            0.0
        } else {
            self.counts[(l - 1) as usize]
        }
    }

    /// `(l, f(l), cumulative)` rows.
    pub fn cumulative(&self) -> Vec<(u64, f64, f64)> {
        let mut acc = 0.0;
        self.lengths
            .iter()
            .zip(&self.counts)
            .map(|(&l, &f)| {
                acc += f;
                (l, f, acc)
            })
            .collect()
    }
}

/// Full `f(l) = Γ·I(l)·M(l)` for `l = 1..=L_max`.
pub fn distribution(params: &FabricParams) -> Result<InterconnectDistribution> {
    if !(params.rent_p > 0.0 && params.rent_p < 1.0) {
        return Err(domain(format!("rent_p = {} outside (0,1)", params.rent_p)));
    }
    if !(params.fan_out > 0.0) {
        return Err(domain("fan_out must be > 0"));
    }
    let n = params.n_gates as f64;
    let gz = params.gz.max(1);
    let p_z = params.p_z();
    let l_max = if gz == 1 {
        l_max_2d(params.n_gates)?
    } else {
        l_max_3d(params.n_gates, gz, p_z)?
    };
    if l_max < 1 {
        return Err(InterconnectError::Degenerate("L_max < 1".into()));
    }
    let span = lattice_span(n / gz as f64);
    let alpha = params.alpha();
    let m_fn = |l: f64| {
        if gz == 1 {
            m_2d_raw(l, span)
        } else {
            m_3d(l, span, gz, p_z).unwrap_or(0.0)
        }
    };
    let i_fn = |l: f64| {
        let b = if gz == 1 {
            block_counts_2d(l)
        } else {
            block_counts_3d(l, gz, p_z)
        };
        i_of_l(b, alpha, params.rent_k, params.rent_p)
    };
    let it = i_total(alpha, params.rent_k, params.rent_p, n);
    let g = gamma(it, l_max, m_fn, i_fn)?;
    let lengths: Vec<u64> = (1..=l_max).collect();
    let counts = lengths
        .iter()
        .map(|&l| {
            let x = l as f64;
            (g * m_fn(x) * i_fn(x)).max(0.0)
        })
        .collect();
    Ok(InterconnectDistribution {
        lengths,
        counts,
        l_max,
        gamma: g,
        i_total: it,
    })
}

/// One (gate count, terminal count) observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RentDataPoint {
    pub n: u64,
    pub t: f64,
}

/// Least-squares fit of `log t = log k + p·log n`. Points sharing a gate
/// count are first merged into their geometric mean.
pub fn rent_fit(data: &[RentDataPoint]) -> Result<(f64, f64)> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for d in data {
        if d.n < 1 || !(d.t > 0.0) {
            return Err(domain(format!("bad data point n={} t={}", d.n, d.t)));
        }
        groups.entry(d.n).or_default().push(d.t.ln());
    }
    if groups.len() < 2 {
        return Err(InterconnectError::Degenerate(
            "need at least two distinct gate counts".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = groups
        .iter()
        .map(|(&n, logs)| {
            (
                (n as f64).ln(),
                logs.iter().sum::<f64>() / logs.len() as f64,
            )
        })
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let p = sxy / sxx;
    let k = (my - p * mx).exp();
    Ok((k, p))
}

/// One placed module used for gate-pitch extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModuleArea {
    /// nm²
    pub area: f64,
    pub n_gates: u64,
    /// Gates stacked per footprint site.
    pub stacking: u32,
}

/// Mean over modules of `sqrt(stacking·A/N)`, nm.
pub fn gate_pitch(modules: &[ModuleArea]) -> Result<f64> {
    if modules.is_empty() {
        return Err(domain("no modules"));
    }
    let mut sum = 0.0;
    for m in modules {
        if !(m.area > 0.0) || m.n_gates < 1 || m.stacking < 1 {
            return Err(domain(format!(
                "module area={} n_gates={} stacking={}",
                m.area, m.n_gates, m.stacking
            )));
        }
        sum += (m.stacking as f64 * m.area / m.n_gates as f64).sqrt();
    }
    Ok(sum / modules.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_max_values() {
        assert_eq!(l_max_2d(16).unwrap(), 6);
        assert_eq!(l_max_2d(4).unwrap(), 2);
        assert_eq!(l_max_2d(10_000_000).unwrap(), 6322);
        assert!(l_max_2d(1).is_err());
        assert_eq!(l_max_3d(16, 1, 0.0).unwrap(), 6);
        assert_eq!(l_max_3d(8, 2, 1.0).unwrap(), 3);
        assert_eq!(l_max_3d(10_000_000, 2, 448.0 / 150.0).unwrap(), 4473);
    }

    #[test]
    fn m_2d_branches() {
        let s = 14.0;
        assert!(m_2d(14.0, s).is_err());
        assert!(m_2d(0.5, s).is_err());
        assert_eq!(m_2d_raw(s, s), 0.0);
        // continuity at the midpoint
        for s in [14.0, 100.0, 6324.555320336759] {
            let h: f64 = s / 2.0;
            let a = h * h * h / 3.0 - s * h * h + s * s / 2.0 * h;
            let b = (s - h).powi(3) / 3.0;
            assert!((a - b).abs() <= 1e-12 * b.abs());
            assert!((a - s.powi(3) / 24.0).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn m_3d_reduces() {
        for l in 1..14 {
            let x = l as f64;
            assert_eq!(m_3d(x, 14.0, 1, 0.0).unwrap(), m_2d_raw(x, 14.0));
        }
        // below the vertical pitch only the in-layer term survives
        assert_eq!(m_3d(2.0, 20.0, 2, 3.0).unwrap(), 2.0 * m_2d_raw(2.0, 20.0));
    }

    #[test]
    fn block_counts() {
        assert_eq!(
            block_counts_2d(1.0),
            BlockCounts {
                n_a: 1.0,
                n_b: 0.0,
                n_c: 2.0
            }
        );
        assert_eq!(
            block_counts_2d(3.0),
            BlockCounts {
                n_a: 1.0,
                n_b: 6.0,
                n_c: 6.0
            }
        );
        assert_eq!(block_counts_3d(2.0, 2, 3.0), block_counts_2d(2.0));
        assert_eq!(block_counts_3d(7.0, 1, 0.0), block_counts_2d(7.0));
    }

    #[test]
    fn i_of_l_cases() {
        let v = i_of_l(block_counts_2d(1.0), 0.75, 4.0, 0.66);
        // N_B = 0 at l = 1, so the first power is 1^p
        let want = (0.75 * 4.0 / 2.0) * (1.0 - 0.0 + 2f64.powf(0.66) - 3f64.powf(0.66));
        assert!((v - want).abs() <= 1e-14 * want.abs());
        let one = i_of_l(block_counts_2d(5.0), 0.75, 4.0, 1.0);
        assert!(one.abs() < 1e-12);
        assert_eq!(i_of_l(block_counts_2d(0.0), 0.75, 4.0, 0.66), 0.0);
        let mut prev = f64::INFINITY;
        for l in 1..=3161 {
            let v = i_of_l(block_counts_2d(l as f64), 0.75, 4.0, 0.66);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn i_total_small() {
        let v = i_total(0.5, 1.0, 0.5, 2.0);
        assert!((v - 0.2929).abs() < 1e-4);
    }

    #[test]
    fn rent_fit_exact_and_merge() {
        let data: Vec<_> = [2u64, 8, 32, 128, 1000]
            .iter()
            .map(|&n| RentDataPoint {
                n,
                t: 4.0 * (n as f64).powf(0.66),
            })
            .collect();
        let (k, p) = rent_fit(&data).unwrap();
        assert!((k - 4.0).abs() < 1e-12 && (p - 0.66).abs() < 1e-12);

        // n = 8 with t = 2 and t = 8 behaves as t = 4
        let merged = rent_fit(&[
            RentDataPoint { n: 8, t: 2.0 },
            RentDataPoint { n: 8, t: 8.0 },
            RentDataPoint { n: 64, t: 16.0 },
        ])
        .unwrap();
        let direct = rent_fit(&[
            RentDataPoint { n: 8, t: 4.0 },
            RentDataPoint { n: 64, t: 16.0 },
        ])
        .unwrap();
        assert!((merged.0 - direct.0).abs() < 1e-12 && (merged.1 - direct.1).abs() < 1e-12);

        assert!(rent_fit(&[
            RentDataPoint { n: 3, t: 1.0 },
            RentDataPoint { n: 3, t: 2.0 }
        ])
        .is_err());
    }

    #[test]
    fn gate_pitch_cases() {
        let m = |area, n_gates, stacking| ModuleArea {
            area,
            n_gates,
            stacking,
        };
        assert_eq!(gate_pitch(&[m(2.0, 4, 2)]).unwrap(), 1.0);
        assert_eq!(gate_pitch(&[m(9.0, 9, 1)]).unwrap(), 1.0);
        assert!(gate_pitch(&[m(0.0, 9, 1)]).is_err());
        assert!(gate_pitch(&[]).is_err());
    }
}
