//! Dispersion-relation solving and tau-function construction for one- and
//! two-soliton solutions in the transformed `(X, T)` plane.

use crate::bilinear;
use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, Mode, PhaseBasis, Var};
use serde::Serialize;

/// `|2(alpha + 2K) omega - 1|` must stay below this for every constructed mode.
pub const DISPERSION_TOL: f64 = 1e-12;

/// One wave mode with its velocity and derived wave number / frequency.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeParams {
    pub v: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub omega: f64,
    pub eta0: f64,
}

/// Validated parameter set; `K` and `omega` are always derived from
/// `(alpha, v)`, never free inputs.
#[derive(Debug, Clone, Serialize)]
pub struct SolitonParams {
    pub alpha: f64,
    pub modes: Vec<ModeParams>,
}

impl SolitonParams {
    pub fn kind(&self) -> TauKind {
        if self.modes.len() == 1 {
            TauKind::OneSoliton
        } else {
            TauKind::TwoSoliton
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha,
            "modes": self.modes,
            "kind": match self.kind() {
                TauKind::OneSoliton => "one_soliton",
                TauKind::TwoSoliton => "two_soliton",
            },
        })
    }

    /// Residual of the dispersion constraint for mode `i`.
    pub fn dispersion_residual(&self, i: usize) -> f64 {
        let m = &self.modes[i];
        2.0 * (self.alpha + 2.0 * m.k) * m.omega - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TauKind {
    OneSoliton,
    TwoSoliton,
}

/// Two-soliton interaction coefficients attached to a tau function.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InteractionCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// A tau function `F` with precomputed exact derivative combinations.
///
/// `W = 6 F_X / F` and `U = W_X = 3 (D_X^2 F.F) / F^2`. The quotient
/// numerators `F_XX F - F_X^2` and `F_XT F - F_X F_T` are kept as Hirota
/// polynomials rather than recombined from pointwise values, so the huge
/// like-term cancellations happen exactly in the exponent algebra instead of
/// in floating point.
#[derive(Debug, Clone)]
pub struct TauFunction {
    f: ExpPoly,
    f_x: ExpPoly,
    /// `D_X^2 F.F = 2 (F_XX F - F_X^2)`.
    dx2_ff: ExpPoly,
    /// `D_X D_T F.F = 2 (F_XT F - F_X F_T)`.
    dxdt_ff: ExpPoly,
    kind: TauKind,
    coefficients: Option<InteractionCoefficients>,
}

impl TauFunction {
    pub fn new(
        f: ExpPoly,
        kind: TauKind,
        coefficients: Option<InteractionCoefficients>,
    ) -> Result<Self> {
        if f.coeff([0, 0]) != 1.0 {
            return Err(Error::Domain(format!(
                "tau function must have constant term exactly 1, got {}",
                f.coeff([0, 0])
            )));
        }
        let f_x = f.diff(Var::X);
        let dx2_ff = f.hirota(&f, 2, 0)?;
        let dxdt_ff = f.hirota(&f, 1, 1)?;
        Ok(Self {
            f,
            f_x,
            dx2_ff,
            dxdt_ff,
            kind,
            coefficients,
        })
    }

    pub fn f(&self) -> &ExpPoly {
        &self.f
    }

    pub fn kind(&self) -> TauKind {
        self.kind
    }

    pub fn coefficients(&self) -> Option<InteractionCoefficients> {
        self.coefficients
    }

    pub fn basis(&self) -> &PhaseBasis {
        self.f.basis()
    }

    fn f_positive(&self, x: f64, t: f64) -> Result<f64> {
        let fv = self.f.eval(x, t)?;
        if fv <= 0.0 || fv.is_nan() {
            return Err(Error::NonPositiveTau { x, t, value: fv });
        }
        Ok(fv)
    }

    /// `W = 6 F_X / F`.
    pub fn eval_w(&self, x: f64, t: f64) -> Result<f64> {
        let fv = self.f_positive(x, t)?;
        Ok(6.0 * self.f_x.eval(x, t)? / fv)
    }

    /// `U = W_X = 6 (F_XX F - F_X^2) / F^2 = 3 (D_X^2 F.F) / F^2`.
    pub fn eval_u(&self, x: f64, t: f64) -> Result<f64> {
        let fv = self.f_positive(x, t)?;
        Ok(3.0 * self.dx2_ff.eval(x, t)? / (fv * fv))
    }

    /// `W_T = 6 (F_XT F - F_X F_T) / F^2 = 3 (D_X D_T F.F) / F^2`.
    pub fn eval_w_t(&self, x: f64, t: f64) -> Result<f64> {
        let fv = self.f_positive(x, t)?;
        Ok(3.0 * self.dxdt_ff.eval(x, t)? / (fv * fv))
    }

    /// Positivity spot-check of `F` over a bounded rectangle.
    pub fn check_positive_on(
        &self,
        x_range: (f64, f64),
        t_range: (f64, f64),
        n: usize,
    ) -> Result<()> {
        let steps = n.max(2);
        for i in 0..steps {
            for j in 0..steps {
                let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / (steps - 1) as f64;
                let t = t_range.0 + (t_range.1 - t_range.0) * j as f64 / (steps - 1) as f64;
                self.f_positive(x, t)?;
            }
        }
        Ok(())
    }
}

/// Positive root of `4vK^2 + 2 alpha v K - 1 = 0`, the dispersion constraint
/// `2(alpha + 2K) omega = 1` with `omega = K v`.
pub fn solve_wavenumber(alpha: f64, v: f64) -> Result<f64> {
    if v <= 0.0 || !v.is_finite() {
        return Err(Error::Domain(format!("velocity must be > 0, got {v}")));
    }
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
    }
    let k = (-alpha * v + (alpha * alpha * v * v + 4.0 * v).sqrt()) / (4.0 * v);
    debug_assert!((2.0 * (alpha + 2.0 * k) * k * v - 1.0).abs() <= DISPERSION_TOL);
    Ok(k)
}

/// One-soliton tau `F = 1 + exp(2 eta)`, `eta = K X - omega T + eta0`.
pub fn build_one_soliton(alpha: f64, v: f64, eta0: f64) -> Result<(SolitonParams, TauFunction)> {
    let k = solve_wavenumber(alpha, v)?;
    let omega = k * v;
    let params = SolitonParams {
        alpha,
        modes: vec![ModeParams { v, k, omega, eta0 }],
    };
    let basis = PhaseBasis::single(k, omega, eta0)?;
    let f = ExpPoly::from_terms(basis, &[([0, 0], 1.0), ([2, 0], 1.0)]);
    let tau = TauFunction::new(f, TauKind::OneSoliton, None)?;
    Ok((params, tau))
}

/// Printed closed forms of the interaction coefficients. `C` keeps the
/// asymmetric denominator exactly as published; `derive_coefficients` is the
/// independent check on it.
pub fn interaction_coefficients(params: &SolitonParams) -> Result<InteractionCoefficients> {
    if params.modes.len() != 2 {
        return Err(Error::Domain(
            "interaction coefficients need two modes".into(),
        ));
    }
    if params.alpha <= 0.0 || params.alpha.is_nan() {
        return Err(Error::Domain(format!(
            "interaction coefficients need alpha > 0, got {}",
            params.alpha
        )));
    }
    let alpha = params.alpha;
    let (k1, k2) = (params.modes[0].k, params.modes[1].k);
    let (w1, w2) = (params.modes[0].omega, params.modes[1].omega);
    if k1 == k2 {
        return Err(Error::Singular(format!(
            "equal wave numbers K1 = K2 = {k1}"
        )));
    }
    let a = alpha / (2.0 * (alpha + 6.0 * k1));
    let b = alpha / (2.0 * (alpha + 6.0 * k2));
    let numer = 2.0 * alpha * ((w1 - w2) * (k1 * k1 - k2 * k2) + 2.0 * k1 * k2 * (w1 + w2))
        + 4.0 * (w2 - w1) * (k1 - k2).powi(3)
        + (k1 - k2).powi(2);
    let denom = (k1 + k2).powi(2) * (2.0 * (w1 + w2) * (alpha + 2.0 * k1 + k2) - 1.0);
    if denom.abs() < 1e-14 {
        return Err(Error::Singular(format!(
            "vanishing interaction denominator for alpha={alpha}, K1={k1}, K2={k2}"
        )));
    }
    let c = numer / denom;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::Singular("non-finite interaction coefficient".into()));
    }
    Ok(InteractionCoefficients { a, b, c })
}

/// Result of a two-soliton construction: the tau function carries the
/// order-by-order solved coefficients, and the solve diagnostics travel with
/// it so a failed closure is never silent.
#[derive(Debug, Clone)]
pub struct TwoSolitonBuild {
    pub params: SolitonParams,
    pub tau: TauFunction,
    /// True when the inputs arrived with `v1 < v2` and were swapped.
    pub reordered: bool,
    pub solve: bilinear::CoefficientSolve,
}

/// Two-soliton tau on exponent vectors (0,0),(2,0),(0,2),(4,0),(0,4),(2,2)
/// with coefficients 1, 1, 1, A, B, C solved order-by-order. The published
/// form writes first-power phases in one slot; the canonical form here uses
/// exp(2 eta_1) and exp(2 eta_2) at first order throughout.
pub fn build_two_soliton(
    alpha: f64,
    v1: f64,
    v2: f64,
    eta10: f64,
    eta20: f64,
) -> Result<TwoSolitonBuild> {
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "two-soliton construction needs alpha > 0, got {alpha}"
        )));
    }
    if v1 <= 0.0 || v2 <= 0.0 || v1.is_nan() || v2.is_nan() {
        return Err(Error::Domain(format!(
            "velocities must be > 0, got {v1}, {v2}"
        )));
    }
    // Fast mode first; reorder rather than reject.
    let (v1, v2, eta10, eta20, reordered) = if v1 < v2 {
        (v2, v1, eta20, eta10, true)
    } else {
        (v1, v2, eta10, eta20, false)
    };
    let k1 = solve_wavenumber(alpha, v1)?;
    let k2 = solve_wavenumber(alpha, v2)?;
    if (k1 - k2).abs() <= 1e-12 * k1.abs().max(k2.abs()) {
        return Err(Error::Singular(format!(
            "wave numbers too close: K1={k1}, K2={k2} (equal velocities?)"
        )));
    }
    let params = SolitonParams {
        alpha,
        modes: vec![
            ModeParams {
                v: v1,
                k: k1,
                omega: k1 * v1,
                eta0: eta10,
            },
            ModeParams {
                v: v2,
                k: k2,
                omega: k2 * v2,
                eta0: eta20,
            },
        ],
    };
    let solve = bilinear::derive_coefficients(&params)?;
    let basis = PhaseBasis::pair(
        Mode {
            k: k1,
            omega: k1 * v1,
            eta0: eta10,
        },
        Mode {
            k: k2,
            omega: k2 * v2,
            eta0: eta20,
        },
    )?;
    let f = ExpPoly::from_terms(
        basis,
        &[
            ([0, 0], 1.0),
            ([2, 0], 1.0),
            ([0, 2], 1.0),
            ([4, 0], solve.a),
            ([0, 4], solve.b),
            ([2, 2], solve.c),
        ],
    );
    let coeffs = InteractionCoefficients {
        a: solve.a,
        b: solve.b,
        c: solve.c,
    };
    let tau = TauFunction::new(f, TauKind::TwoSoliton, Some(coeffs))?;
    Ok(TwoSolitonBuild {
        params,
        tau,
        reordered,
        solve,
    })
}
