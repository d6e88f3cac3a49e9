//! Mapping from the transformed `(X, T)` plane to physical `(x, t)`
//! coordinates and sampling of parametric physical-space profiles.
//!
//! Physical time equals `X`, and `x = T + W(X, T) + x0` (the cumulative
//! integral of `U` collapses to `W` because `U = W_X` with `W -> 0` on the
//! left). A snapshot therefore fixes `X = t` and sweeps `T` as the curve
//! parameter, which is what lets multivalued (loop) profiles be represented
//! at all.

use crate::error::{Error, Result};
use crate::soliton::TauFunction;
use serde::Serialize;

/// One sample of a parametric profile at fixed physical time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    /// Curve parameter (transformed coordinate `T`).
    #[serde(rename = "T")]
    pub t_param: f64,
    pub x: f64,
    #[serde(rename = "U")]
    pub u: f64,
    /// Jacobian `dx/dT = 1 + W_T`; sign changes mark multivalued stretches.
    #[serde(rename = "xT")]
    pub x_t: f64,
}

/// Ordered samples `(T, x, U, xT)` at fixed physical time `t`.
#[derive(Debug, Clone, Serialize)]
pub struct ParametricProfile {
    pub t: f64,
    pub x0: f64,
    pub samples: Vec<ProfileSample>,
}

impl ParametricProfile {
    /// Number of sign changes of `xT` along the parameter.
    pub fn x_t_sign_changes(&self) -> usize {
        self.samples
            .windows(2)
            .filter(|w| w[0].x_t.signum() != w[1].x_t.signum() && w[0].x_t != 0.0)
            .count()
    }

    pub fn min_x_t(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.x_t)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_u(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.u)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_x_strictly_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].x > w[0].x)
    }

    /// CSV with header `T,x,U,xT`, one row per sample, shortest
    /// round-trippable float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,x,U,xT\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{},{}\n", s.t_param, s.x, s.u, s.x_t));
        }
        out
    }

    /// Parse the CSV format written by [`ParametricProfile::to_csv`].
    pub fn from_csv(t: f64, x0: f64, csv: &str) -> Result<Self> {
        let mut lines = csv.lines();
        match lines.next() {
            Some("T,x,U,xT") => {}
            other => return Err(Error::Domain(format!("bad profile CSV header: {other:?}"))),
        }
        let mut samples = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Domain(format!("row {}: expected 4 fields", i + 1)));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse()
                    .map_err(|e| Error::Domain(format!("row {}: {e}", i + 1)))
            };
            samples.push(ProfileSample {
                t_param: parse(fields[0])?,
                x: parse(fields[1])?,
                u: parse(fields[2])?,
                x_t: parse(fields[3])?,
            });
        }
        Ok(Self { t, x0, samples })
    }
}

/// `x = T + W(X, T) + x0`.
pub fn physical_x(tau: &TauFunction, x_coord: f64, t_coord: f64, x0: f64) -> Result<f64> {
    Ok(t_coord + tau.eval_w(x_coord, t_coord)? + x0)
}

/// `dx/dT = 1 + W_T`, from exact derivative polynomials.
pub fn jacobian_xt(tau: &TauFunction, x_coord: f64, t_coord: f64) -> Result<f64> {
    Ok(1.0 + tau.eval_w_t(x_coord, t_coord)?)
}

/// Default parameter range at physical time `t`.
///
/// Structures of a tau-function profile sit where the dominance of its
/// exponential terms changes hands, so the range unions the phase zeros
/// `eta_i = 0` (padded by `20 / K_min`) with every pairwise crossing of the
/// term logarithms (padded by ten transition widths). The result is clamped
/// to the window where every exponent argument stays within the
/// representable range, so default-range sampling cannot overflow.
pub fn default_t_range(tau: &TauFunction, t: f64) -> (f64, f64) {
    let modes = tau.basis().modes();
    let k2 = modes.get(1).map(|m| m.k).unwrap_or(0.0);
    let w2 = modes.get(1).map(|m| m.omega).unwrap_or(0.0);
    let e2 = modes.get(1).map(|m| m.eta0).unwrap_or(0.0);

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut k_min = f64::INFINITY;
    for m in modes {
        let center = (m.k * t + m.eta0) / m.omega;
        lo = lo.min(center - 20.0 / m.k);
        hi = hi.max(center + 20.0 / m.k);
        k_min = k_min.min(m.k);
    }

    // log of term (m, n) at fixed X = t is (offset) - (slope) * T
    let line = |e: [i32; 2], c: f64| -> (f64, f64) {
        let offset = c.abs().max(f64::MIN_POSITIVE).ln()
            + f64::from(e[0]) * (modes[0].k * t + modes[0].eta0)
            + f64::from(e[1]) * (k2 * t + e2);
        let slope = f64::from(e[0]) * modes[0].omega + f64::from(e[1]) * w2;
        (offset, slope)
    };
    let terms: Vec<([i32; 2], f64)> = tau.f().terms().collect();
    for (i, &(ei, ci)) in terms.iter().enumerate() {
        for &(ej, cj) in terms.iter().skip(i + 1) {
            let (oi, si) = line(ei, ci);
            let (oj, sj) = line(ej, cj);
            let ds = si - sj;
            if ds.abs() < 1e-12 {
                continue;
            }
            let t_cross = (oi - oj) / ds;
            let pad = 10.0 / ds.abs();
            lo = lo.min(t_cross - pad);
            hi = hi.max(t_cross + pad);
        }
    }

    // Clamp to the window where |m eta1 + n eta2| <= 320 for every term of F.
    // Evaluation also touches the Hirota combinations D_X^2 F.F and
    // D_X D_T F.F, whose exponents are pairwise sums, so halving the eval
    // budget here keeps those within range too.
    let mut safe_lo = f64::NEG_INFINITY;
    let mut safe_hi = f64::INFINITY;
    for &(e, c) in &terms {
        let (offset, slope) = line(e, c);
        let arg0 = offset - c.abs().max(f64::MIN_POSITIVE).ln(); // pure phase part
        if slope.abs() < 1e-12 {
            continue;
        }
        let (a, b) = ((arg0 - 320.0) / slope, (arg0 + 320.0) / slope);
        safe_lo = safe_lo.max(a.min(b));
        safe_hi = safe_hi.min(a.max(b));
    }
    (lo.max(safe_lo), hi.min(safe_hi))
}

/// Sample the parametric physical profile at fixed physical time `t`.
pub fn snapshot(
    tau: &TauFunction,
    t: f64,
    t_range: Option<(f64, f64)>,
    n_samples: usize,
    x0: f64,
) -> Result<ParametricProfile> {
    if n_samples < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let (t_lo, t_hi) = t_range.unwrap_or_else(|| default_t_range(tau, t));
    if t_hi <= t_lo || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::Domain(format!("bad T range [{t_lo}, {t_hi}]")));
    }
    let mut samples = Vec::with_capacity(n_samples);
    for j in 0..n_samples {
        let t_param = t_lo + (t_hi - t_lo) * j as f64 / (n_samples - 1) as f64;
        let w = tau.eval_w(t, t_param)?;
        let u = tau.eval_u(t, t_param)?;
        let w_t = tau.eval_w_t(t, t_param)?;
        samples.push(ProfileSample {
            t_param,
            x: t_param + w + x0,
            u,
            x_t: 1.0 + w_t,
        });
    }
    Ok(ParametricProfile { t, x0, samples })
}
