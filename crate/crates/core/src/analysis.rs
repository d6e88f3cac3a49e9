//! Structure detection in parametric profiles and fission timelines.
//!
//! Peaks are found along the curve parameter `T`, not along `x`, because a
//! profile may be multivalued in `x`. Each retained peak is tagged
//! multivalued when the jacobian `xT` changes sign inside its prominence
//! window.

use crate::error::{Error, Result};
use crate::soliton::TauFunction;
use crate::transform::{snapshot, ParametricProfile};
use serde::Serialize;

/// Default peak prominence threshold relative to the global maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.02;

/// One detected solitary structure.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Structure {
    #[serde(rename = "U_peak")]
    pub u_peak: f64,
    pub x_peak: f64,
    pub multivalued: bool,
}

/// Census of solitary structures at one physical time.
#[derive(Debug, Clone, Serialize)]
pub struct StructureCensus {
    pub t: f64,
    pub count: usize,
    pub structures: Vec<Structure>,
}

/// Indices of local maxima of `u`, strict against both neighbours.
fn local_maxima(u: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    for i in 1..u.len().saturating_sub(1) {
        if u[i] > u[i - 1] && u[i] > u[i + 1] {
            peaks.push(i);
        }
    }
    peaks
}

/// Topographic prominence of a peak plus its base window.
///
/// Walk outward to the nearest strictly higher sample on each side; the
/// prominence is the peak height above the higher of the two valley minima
/// found on the way (scipy-style).
fn prominence(u: &[f64], peak: usize) -> (f64, usize, usize) {
    let mut left_min = u[peak];
    let mut left_base = 0;
    for i in (0..peak).rev() {
        if u[i] > u[peak] {
            left_base = i;
            break;
        }
        if u[i] < left_min {
            left_min = u[i];
            left_base = i;
        }
    }
    let mut right_min = u[peak];
    let mut right_base = u.len() - 1;
    for (i, &ui) in u.iter().enumerate().skip(peak + 1) {
        if ui > u[peak] {
            right_base = i;
            break;
        }
        if ui < right_min {
            right_min = ui;
            right_base = i;
        }
    }
    (u[peak] - left_min.max(right_min), left_base, right_base)
}

/// Count solitary structures with prominence at least
/// `prominence_rel * max(U)`.
pub fn count_structures(
    profile: &ParametricProfile,
    prominence_rel: f64,
) -> Result<StructureCensus> {
    if profile.samples.len() < 3 {
        return Err(Error::Domain(format!(
            "profile needs at least 3 samples, got {}",
            profile.samples.len()
        )));
    }
    if prominence_rel <= 0.0 || prominence_rel.is_nan() {
        return Err(Error::Domain(format!(
            "prominence must be > 0, got {prominence_rel}"
        )));
    }
    let u: Vec<f64> = profile.samples.iter().map(|s| s.u).collect();
    let u_max = u.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    if u_max <= 0.0 || u_max.is_nan() {
        return Ok(StructureCensus {
            t: profile.t,
            count: 0,
            structures: Vec::new(),
        });
    }
    let threshold = prominence_rel * u_max;
    let mut structures = Vec::new();
    for peak in local_maxima(&u) {
        let (prom, left, right) = prominence(&u, peak);
        if prom < threshold {
            continue;
        }
        let window = &profile.samples[left..=right];
        let multivalued = window
            .windows(2)
            .any(|w| w[0].x_t.signum() != w[1].x_t.signum() && w[0].x_t != 0.0);
        structures.push(Structure {
            u_peak: u[peak],
            x_peak: profile.samples[peak].x,
            multivalued,
        });
    }
    structures.sort_by(|a, b| a.x_peak.partial_cmp(&b.x_peak).unwrap());
    Ok(StructureCensus {
        t: profile.t,
        count: structures.len(),
        structures,
    })
}

/// Census sequence over uniformly spaced physical times.
#[derive(Debug, Clone, Serialize)]
pub struct FissionTimeline {
    pub censuses: Vec<StructureCensus>,
    /// Earliest index where the count first rises from 1 to 2.
    pub first_split_index: Option<usize>,
}

impl FissionTimeline {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "timeline": self.censuses,
            "first_split_index": self.first_split_index,
        })
    }

    /// Flat CSV: `t,count,U_peak,x_peak,multivalued`, one row per structure.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,count,U_peak,x_peak,multivalued\n");
        for c in &self.censuses {
            if c.structures.is_empty() {
                out.push_str(&format!("{},0,,,\n", c.t));
            }
            for s in &c.structures {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.t, c.count, s.u_peak, s.x_peak, s.multivalued
                ));
            }
        }
        out
    }
}

/// Snapshot and census at each of `n_times` uniformly spaced times.
pub fn fission_timeline(
    tau: &TauFunction,
    t_start: f64,
    t_end: f64,
    n_times: usize,
    prominence_rel: f64,
    n_samples: usize,
    x0: f64,
) -> Result<FissionTimeline> {
    if n_times < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 times, got {n_times}"
        )));
    }
    if t_end <= t_start || t_end.is_nan() || t_start.is_nan() {
        return Err(Error::Domain(format!(
            "bad time range [{t_start}, {t_end}]"
        )));
    }
    let mut censuses = Vec::with_capacity(n_times);
    for i in 0..n_times {
        let t = t_start + (t_end - t_start) * i as f64 / (n_times - 1) as f64;
        let profile = snapshot(tau, t, None, n_samples, x0)?;
        censuses.push(count_structures(&profile, prominence_rel)?);
    }
    let first_split_index = censuses
        .windows(2)
        .position(|w| w[0].count == 1 && w[1].count == 2)
        .map(|i| i + 1);
    Ok(FissionTimeline {
        censuses,
        first_split_index,
    })
}
