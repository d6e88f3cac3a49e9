//! Certification of tau functions against the coupled bilinear system and the
//! transformed PDE, plus the order-by-order interaction-coefficient oracle.
//!
//! Two eliminated residual functionals appear here, differing only in how the
//! outer `T`-derivative of `D_X^2 F.F` is taken:
//!
//! * plain: `R = P*F^2 + alpha * dT(D_X^2 F.F) * F^2` with
//!   `P = (D_T D_X^3 + D_X^2) F.F`. The one-soliton tau satisfies this
//!   identically under the dispersion constraint, so it is the certification
//!   functional used by [`combined_bilinear_residual`] and (divided through
//!   by `2 F^2`) by [`pde_residual`].
//! * Hirota-paired: the outer derivative acts as `D_T (D_X^2 F.F).F^2`. This
//!   variant is the one whose low-order equations admit nonzero
//!   self-interaction coefficients, and [`derive_coefficients`] solves those
//!   equations; its higher orders do not close, which the solve reports
//!   rather than hides.

use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, Var, ZeroCheck};
use crate::soliton::{SolitonParams, TauFunction};
use serde::Serialize;

/// Relative tolerance for coefficient-wise residual checks.
pub const COEFF_TOL: f64 = 1e-9;
/// Absolute tolerance for grid residual checks.
pub const GRID_TOL: f64 = 1e-8;

/// Outcome of a residual certification.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// Largest residual coefficient relative to the construction scale
    /// (0 when only a grid check ran).
    pub max_relative_coefficient: f64,
    /// Exponent vector of the worst coefficient, if any.
    pub offending_exponent: Option<[i32; 2]>,
    /// Largest pointwise residual over the grid, when a grid check ran.
    pub grid_max_abs: Option<f64>,
    pub passed: bool,
    pub notes: String,
}

/// Rectangle in the `(X, T)` plane with node counts.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub nx: usize,
    pub nt: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -10.0,
            x_max: 10.0,
            t_min: -10.0,
            t_max: 10.0,
            nx: 41,
            nt: 41,
        }
    }
}

/// `P = (D_T D_X^3 + D_X^2) F.F`.
fn p_of(f: &ExpPoly) -> Result<ExpPoly> {
    f.hirota(f, 3, 1)?.add(&f.hirota(f, 2, 0)?)
}

/// Eliminated residual, plain outer derivative:
/// `R = P*F^2 + alpha * dT(D_X^2 F.F) * F^2`.
fn eliminated_residual(f: &ExpPoly, alpha: f64) -> Result<ExpPoly> {
    let f2 = f.mul(f)?;
    let p = p_of(f)?;
    let s_t = f.hirota(f, 2, 0)?.diff(Var::T);
    p.mul(&f2)?.add(&s_t.mul(&f2)?.scaled(alpha))
}

/// Eliminated residual, Hirota-paired outer derivative:
/// `R = P*F^2 + alpha * D_T (D_X^2 F.F).F^2`.
fn paired_outer_residual(f: &ExpPoly, alpha: f64) -> Result<ExpPoly> {
    let f2 = f.mul(f)?;
    let p = p_of(f)?;
    let q = f.hirota(f, 2, 0)?.hirota(&f2, 0, 1)?;
    p.mul(&f2)?.add(&q.scaled(alpha))
}

/// Certify `F` against the eliminated bilinear condition `P*F^2 + alpha*Q = 0`.
pub fn combined_bilinear_residual(f: &ExpPoly, alpha: f64, tol: f64) -> Result<ResidualReport> {
    if alpha <= 0.0 || alpha.is_nan() {
        return Err(Error::Domain(format!(
            "combined residual needs alpha > 0 (the auxiliary-function elimination divides by alpha), got {alpha}"
        )));
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let r = eliminated_residual(f, alpha)?;
    let check = r.is_zero(tol);
    let paired = paired_outer_residual(f, alpha)?.is_zero(tol);
    let notes = format!(
        "outer T-derivative taken as the plain derivative of the inner bilinear; \
         the Hirota-paired alternate reading leaves max relative coefficient {:.3e}",
        paired.max_relative
    );
    Ok(ResidualReport {
        max_relative_coefficient: check.max_relative,
        offending_exponent: check.worst_exponent,
        grid_max_abs: None,
        passed: check.passed,
        notes,
    })
}

/// Exact partial derivatives of `F` needed for third-order PDE evaluation.
struct TauPartials {
    f: ExpPoly,
    f_x: ExpPoly,
    f_xx: ExpPoly,
    f_xxx: ExpPoly,
    f_t: ExpPoly,
    f_xt: ExpPoly,
    f_xxt: ExpPoly,
    f_xxxt: ExpPoly,
}

impl TauPartials {
    fn new(f: &ExpPoly) -> Self {
        let f_x = f.diff(Var::X);
        let f_xx = f_x.diff(Var::X);
        let f_xxx = f_xx.diff(Var::X);
        Self {
            f: f.clone(),
            f_t: f.diff(Var::T),
            f_xt: f_x.diff(Var::T),
            f_xxt: f_xx.diff(Var::T),
            f_xxxt: f_xxx.diff(Var::T),
            f_x,
            f_xx,
            f_xxx,
        }
    }

    /// Residuals at one node: (system form, legacy `alpha*W_T` form).
    fn residuals_at(&self, x: f64, t: f64, alpha: f64) -> Result<(f64, f64)> {
        let fv = self.f.eval(x, t)?;
        if fv <= 0.0 || fv.is_nan() {
            return Err(Error::NonPositiveTau { x, t, value: fv });
        }
        let a = self.f_x.eval(x, t)? / fv;
        let b = self.f_t.eval(x, t)? / fv;
        let rxx = self.f_xx.eval(x, t)? / fv - a * a;
        let rxt = self.f_xt.eval(x, t)? / fv - a * b;
        let fxx_f = self.f_xx.eval(x, t)? / fv;
        let fxt_f = self.f_xt.eval(x, t)? / fv;
        let fxxx_f = self.f_xxx.eval(x, t)? / fv;
        let fxxt_f = self.f_xxt.eval(x, t)? / fv;
        let fxxxt_f = self.f_xxxt.eval(x, t)? / fv;
        let rxxt = fxxt_f - b * fxx_f - 2.0 * a * fxt_f + 2.0 * a * a * b;
        let rxxxt =
            fxxxt_f - b * fxxx_f - 3.0 * (fxt_f - a * b) * fxx_f - 3.0 * a * (fxxt_f - b * fxx_f)
                + 6.0 * a * a * (fxt_f - a * b);
        // W = 6 (ln F)_X; the transformed equation divided by 2F^2 reads
        // rho_XXXT + 6 rho_XX rho_XT + rho_XX + alpha (rho_XXT + 2 rho_T rho_XX) = 0.
        let core = rxxxt + 6.0 * rxx * rxt + rxx;
        let system = 6.0 * (core + alpha * (rxxt + 2.0 * b * rxx));
        let legacy = 6.0 * (core + alpha * rxt);
        Ok((system, legacy))
    }
}

/// Max-norm residual of the transformed evolution equation on a grid,
/// evaluated from exact closed-form derivatives of `F`.
pub fn pde_residual(
    tau: &TauFunction,
    grid: &GridSpec,
    alpha: f64,
    tol_abs: f64,
) -> Result<ResidualReport> {
    if grid.nx < 2 || grid.nt < 2 {
        return Err(Error::Domain("grid needs at least 2x2 nodes".into()));
    }
    let parts = TauPartials::new(tau.f());
    let mut max_sys: f64 = 0.0;
    let mut max_legacy: f64 = 0.0;
    for i in 0..grid.nx {
        for j in 0..grid.nt {
            let x = grid.x_min + (grid.x_max - grid.x_min) * i as f64 / (grid.nx - 1) as f64;
            let t = grid.t_min + (grid.t_max - grid.t_min) * j as f64 / (grid.nt - 1) as f64;
            let (sys, legacy) = parts.residuals_at(x, t, alpha)?;
            max_sys = max_sys.max(sys.abs());
            max_legacy = max_legacy.max(legacy.abs());
        }
    }
    let notes = format!(
        "W_XXT + W_X W_T + W_X + alpha*(W_XT + 2 (ln F)_T W_X) evaluated on {}x{} nodes; \
         the local-only variant W_XXT + W_X W_T + alpha*W_T + W_X peaks at {:.3e}",
        grid.nx, grid.nt, max_legacy
    );
    Ok(ResidualReport {
        max_relative_coefficient: 0.0,
        offending_exponent: None,
        grid_max_abs: Some(max_sys),
        passed: max_sys <= tol_abs,
        notes,
    })
}

/// Order-by-order solution of the two-soliton interaction coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientSolve {
    /// Solved from the exp(4 eta1) equation.
    pub a: f64,
    /// Solved from the exp(4 eta2) equation.
    pub b: f64,
    /// Solved from the exp(2 eta1 + 2 eta2) equation.
    pub c: f64,
    pub printed_a: f64,
    pub printed_b: f64,
    /// Published closed form for `c`; singular denominators yield `None`.
    pub printed_c: Option<f64>,
    pub a_rel_dev: f64,
    pub b_rel_dev: f64,
    pub c_rel_dev: Option<f64>,
    /// Residual of the three solved equations after substitution, relative
    /// to the construction scale.
    pub order_equation_max_rel: f64,
    /// Full-polynomial zero check of the solving functional after
    /// substitution. The truncated six-term tau does not close it; the
    /// check records how far off it is and where.
    pub closure: ZeroCheck,
}

fn two_soliton_f(params: &SolitonParams, a: f64, b: f64, c: f64) -> Result<ExpPoly> {
    let m = &params.modes;
    let basis = crate::exppoly::PhaseBasis::pair(
        crate::exppoly::Mode {
            k: m[0].k,
            omega: m[0].omega,
            eta0: m[0].eta0,
        },
        crate::exppoly::Mode {
            k: m[1].k,
            omega: m[1].omega,
            eta0: m[1].eta0,
        },
    )?;
    Ok(ExpPoly::from_terms(
        basis,
        &[
            ([0, 0], 1.0),
            ([2, 0], 1.0),
            ([0, 2], 1.0),
            ([4, 0], a),
            ([0, 4], b),
            ([2, 2], c),
        ],
    ))
}

/// Solve A, B, C from the low-order equations of the Hirota-paired residual.
///
/// The coefficient of each target exponent is affine in exactly one unknown
/// (nonnegative exponent vectors add, so no cross products reach these
/// slots), which makes the solve a diagonal probe: evaluate the residual at
/// unit values of one unknown at a time and divide.
pub fn derive_coefficients(params: &SolitonParams) -> Result<CoefficientSolve> {
    if params.modes.len() != 2 {
        return Err(Error::Domain("coefficient solve needs two modes".into()));
    }
    if params.alpha <= 0.0 || params.alpha.is_nan() {
        return Err(Error::Domain(format!(
            "coefficient solve needs alpha > 0, got {}",
            params.alpha
        )));
    }
    let alpha = params.alpha;
    let (k1, k2) = (params.modes[0].k, params.modes[1].k);
    if (k1 - k2).abs() <= 1e-12 * k1.abs().max(k2.abs()) {
        return Err(Error::Singular(format!(
            "wave numbers too close: K1={k1}, K2={k2}"
        )));
    }
    for i in 0..2 {
        if params.dispersion_residual(i).abs() > 1e-9 {
            return Err(Error::Certification(format!(
                "mode {i} violates the dispersion constraint by {:.3e}",
                params.dispersion_residual(i)
            )));
        }
    }

    let residual = |a: f64, b: f64, c: f64| -> Result<ExpPoly> {
        paired_outer_residual(&two_soliton_f(params, a, b, c)?, alpha)
    };

    let r0 = residual(0.0, 0.0, 0.0)?;
    let targets = [[4, 0], [0, 4], [2, 2]];
    let probes = [
        residual(1.0, 0.0, 0.0)?,
        residual(0.0, 1.0, 0.0)?,
        residual(0.0, 0.0, 1.0)?,
    ];
    let mut solved = [0.0_f64; 3];
    for (i, (target, probe)) in targets.iter().zip(&probes).enumerate() {
        let base = r0.coeff(*target);
        let slope = probe.coeff(*target) - base;
        if slope.abs() < 1e-12 * r0.construction_scale().max(1.0) {
            return Err(Error::Certification(format!(
                "degenerate order equation at exponent {target:?}: coefficient does not depend on the unknown"
            )));
        }
        solved[i] = -base / slope;
    }
    let (a, b, c) = (solved[0], solved[1], solved[2]);

    let r_final = residual(a, b, c)?;
    let scale = r_final.construction_scale().max(1.0);
    let order_equation_max_rel = targets
        .iter()
        .map(|&e| r_final.coeff(e).abs() / scale)
        .fold(0.0, f64::max)
        .max(r_final.coeff([2, 0]).abs() / scale)
        .max(r_final.coeff([0, 2]).abs() / scale);
    let closure = r_final.is_zero(COEFF_TOL);

    let printed_a = alpha / (2.0 * (alpha + 6.0 * k1));
    let printed_b = alpha / (2.0 * (alpha + 6.0 * k2));
    let printed_c = crate::soliton::interaction_coefficients(params)
        .ok()
        .map(|ic| ic.c);
    Ok(CoefficientSolve {
        a,
        b,
        c,
        printed_a,
        printed_b,
        printed_c,
        a_rel_dev: (a - printed_a).abs() / printed_a.abs().max(f64::MIN_POSITIVE),
        b_rel_dev: (b - printed_b).abs() / printed_b.abs().max(f64::MIN_POSITIVE),
        c_rel_dev: printed_c.map(|pc| (c - pc).abs() / pc.abs().max(f64::MIN_POSITIVE)),
        order_equation_max_rel,
        closure,
    })
}
