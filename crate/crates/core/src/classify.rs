//! Regime trichotomy (loop / cusp / hump) and the region and amplitude maps.
//!
//! The diagnostic is `lambda = 6 K omega = 6 K^2 v`; the profile is
//! multivalued when the coordinate-map jacobian `1 - lambda sech^2(eta)`
//! changes sign, i.e. exactly when `lambda > 1`. Along fixed `v`, `lambda`
//! decreases in `alpha` and crosses 1 at `alpha* = 1/sqrt(6 v)`.

use crate::error::{Error, Result};
use crate::soliton::solve_wavenumber;
use serde::Serialize;
use std::fmt;

/// Default tolerance on `|lambda - 1|` for calling a case a cusp.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Loop,
    Cusp,
    Hump,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Loop => write!(f, "loop"),
            Regime::Cusp => write!(f, "cusp"),
            Regime::Hump => write!(f, "hump"),
        }
    }
}

/// Classification result with its diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegimeClass {
    pub regime: Regime,
    pub lambda: f64,
    pub alpha_star: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "U_M")]
    pub u_m: f64,
}

/// Classify `(alpha, v)` by the sign of `lambda - 1`.
pub fn classify_regime(alpha: f64, v: f64, tie_tol: f64) -> Result<RegimeClass> {
    if tie_tol < 0.0 {
        return Err(Error::Domain(format!(
            "tie tolerance must be >= 0, got {tie_tol}"
        )));
    }
    let k = solve_wavenumber(alpha, v)?;
    let omega = k * v;
    let lambda = 6.0 * k * omega;
    let alpha_star = 1.0 / (6.0 * v).sqrt();
    let regime = if (lambda - 1.0).abs() <= tie_tol {
        Regime::Cusp
    } else if lambda > 1.0 {
        Regime::Loop
    } else {
        Regime::Hump
    };
    Ok(RegimeClass {
        regime,
        lambda,
        alpha_star,
        k,
        u_m: 6.0 * k * k,
    })
}

/// One cell of the region scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanCell {
    pub alpha: f64,
    pub v: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub lambda: f64,
    #[serde(rename = "U_M")]
    pub u_m: f64,
    pub regime: Regime,
}

/// Classify every node of a uniform `(alpha, v)` grid, row-major in `alpha`.
pub fn region_scan(
    alpha_range: (f64, f64),
    v_range: (f64, f64),
    grid: (usize, usize),
) -> Result<Vec<ScanCell>> {
    let (na, nv) = grid;
    if na < 2 || nv < 2 {
        return Err(Error::Domain("scan grid needs at least 2x2 cells".into()));
    }
    if alpha_range.1 <= alpha_range.0 || alpha_range.0 < 0.0 {
        return Err(Error::Domain(format!("bad alpha range {alpha_range:?}")));
    }
    if v_range.1 <= v_range.0 || v_range.0 <= 0.0 {
        return Err(Error::Domain(format!("bad v range {v_range:?}")));
    }
    let mut cells = Vec::with_capacity(na * nv);
    for i in 0..na {
        let alpha = alpha_range.0 + (alpha_range.1 - alpha_range.0) * i as f64 / (na - 1) as f64;
        for j in 0..nv {
            let v = v_range.0 + (v_range.1 - v_range.0) * j as f64 / (nv - 1) as f64;
            let rc = classify_regime(alpha, v, TIE_TOL)?;
            cells.push(ScanCell {
                alpha,
                v,
                k: rc.k,
                lambda: rc.lambda,
                u_m: rc.u_m,
                regime: rc.regime,
            });
        }
    }
    Ok(cells)
}

/// CSV for a region scan, header `alpha,v,K,lambda,U_M,regime`.
pub fn scan_to_csv(cells: &[ScanCell]) -> String {
    let mut out = String::from("alpha,v,K,lambda,U_M,regime\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.alpha, c.v, c.k, c.lambda, c.u_m, c.regime
        ));
    }
    out
}

/// Peak amplitudes `U_M = 6 K^2` for a list of alphas at fixed `v`.
pub fn amplitude_comparison(v: f64, alphas: &[f64]) -> Result<Vec<f64>> {
    alphas
        .iter()
        .map(|&alpha| Ok(classify_regime(alpha, v, TIE_TOL)?.u_m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trichotomy_cases() {
        // alpha* at v = 0.24 is 1/sqrt(1.44) = 0.8333...
        let rc = classify_regime(0.5, 0.24, TIE_TOL).unwrap();
        assert_eq!(rc.regime, Regime::Loop);
        assert!((rc.alpha_star - 1.0 / 1.2).abs() < 1e-12);
        let v: f64 = 0.24;
        let rc = classify_regime(1.0 / (6.0 * v).sqrt(), v, TIE_TOL).unwrap();
        assert_eq!(rc.regime, Regime::Cusp);
        assert!((rc.lambda - 1.0).abs() <= 1e-12);
        let rc = classify_regime(5.0, 0.24, TIE_TOL).unwrap();
        assert_eq!(rc.regime, Regime::Hump);
        assert!(rc.lambda < 1.0);
    }

    #[test]
    fn lambda_is_um_times_v() {
        for &(alpha, v) in &[(0.1, 0.05), (0.5, 0.24), (2.6, 1.0), (5.0, 0.12)] {
            let rc = classify_regime(alpha, v, TIE_TOL).unwrap();
            assert!((rc.lambda - rc.u_m * v).abs() <= 1e-12 * rc.lambda.max(1.0));
        }
    }

    #[test]
    fn lambda_decreasing_in_alpha() {
        let v = 0.3;
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let alpha = 0.05 * i as f64;
            let rc = classify_regime(alpha, v, TIE_TOL).unwrap();
            assert!(rc.lambda < prev);
            prev = rc.lambda;
        }
    }

    #[test]
    fn amplitude_ordering_and_closed_forms() {
        let v: f64 = 0.24;
        let alpha_star = 1.0 / (6.0 * v).sqrt();
        let ums = amplitude_comparison(v, &[0.1, alpha_star, 5.0]).unwrap();
        assert!(ums[0] > ums[1] && ums[1] > ums[2], "loop > cusp > hump");
        // Cusp amplitude is exactly 1/v; alpha = 0 amplitude is 3/(2v).
        assert!((ums[1] - 1.0 / v).abs() < 1e-12);
        let um0 = amplitude_comparison(v, &[0.0]).unwrap()[0];
        assert!((um0 - 1.5 / v).abs() < 1e-12);
    }

    #[test]
    fn alpha_star_decreasing_in_v() {
        let a1 = classify_regime(0.5, 0.2, TIE_TOL).unwrap().alpha_star;
        let a2 = classify_regime(0.5, 0.4, TIE_TOL).unwrap().alpha_star;
        assert!(a2 < a1);
    }

    #[test]
    fn scan_boundary_tracks_critical_curve() {
        let cells = region_scan((0.0, 3.0), (0.05, 1.0), (40, 40)).unwrap();
        let step = 3.0 / 39.0;
        // Row-major: for each fixed v column, find the loop->hump transition.
        for j in 0..40 {
            let col: Vec<&ScanCell> = cells.iter().skip(j).step_by(40).collect();
            let mut transitions = 0;
            for w in col.windows(2) {
                if w[0].regime != w[1].regime {
                    transitions += 1;
                    let alpha_star = 1.0 / (6.0 * w[0].v).sqrt();
                    assert!(
                        w[0].alpha <= alpha_star + 1e-12 && alpha_star <= w[1].alpha + step,
                        "boundary cell off the critical curve at v={}",
                        w[0].v
                    );
                }
            }
            assert!(transitions <= 1, "regime sequence along alpha not monotone");
        }
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        assert!(region_scan((0.0, 3.0), (0.0, 1.0), (4, 4)).is_err());
        assert!(region_scan((3.0, 0.0), (0.05, 1.0), (4, 4)).is_err());
        assert!(region_scan((0.0, 3.0), (0.05, 1.0), (1, 4)).is_err());
    }

    #[test]
    fn scan_csv_header() {
        let cells = region_scan((0.0, 1.0), (0.1, 0.5), (2, 2)).unwrap();
        let csv = scan_to_csv(&cells);
        assert!(csv.starts_with("alpha,v,K,lambda,U_M,regime\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
