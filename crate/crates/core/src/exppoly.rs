//! Exact algebra of exponential polynomials in one or two phase generators.
//!
//! A term is `c * exp(m*eta1 + n*eta2)` with integer `(m, n)` and real `c`,
//! where `eta_i = K_i*X - omega_i*T + eta0_i`. Exponent vectors are exact
//! integers, so like terms merge exactly and only coefficients carry
//! round-off. The type is closed under addition, multiplication, the partial
//! derivatives `d/dX`, `d/dT`, and the Hirota bilinear operators
//! `D_X^m D_T^n a.b`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One phase generator `eta = K*X - omega*T + eta0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    #[serde(rename = "K")]
    pub k: f64,
    pub omega: f64,
    pub eta0: f64,
}

/// The set of phase generators an [`ExpPoly`] is written over (one or two).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseBasis {
    modes: Vec<Mode>,
}

impl PhaseBasis {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        if modes.is_empty() || modes.len() > 2 {
            return Err(Error::Domain(format!(
                "phase basis must have 1 or 2 modes, got {}",
                modes.len()
            )));
        }
        for (i, m) in modes.iter().enumerate() {
            if m.k <= 0.0 || !m.k.is_finite() {
                return Err(Error::Domain(format!(
                    "mode {i}: K must be > 0, got {}",
                    m.k
                )));
            }
            if m.omega <= 0.0 || !m.omega.is_finite() {
                return Err(Error::Domain(format!(
                    "mode {i}: omega must be > 0, got {}",
                    m.omega
                )));
            }
            if !m.eta0.is_finite() {
                return Err(Error::Domain(format!("mode {i}: eta0 must be finite")));
            }
        }
        if modes.len() == 2 && modes[0].k == modes[1].k {
            return Err(Error::Domain(format!(
                "degenerate basis: K1 = K2 = {}",
                modes[0].k
            )));
        }
        Ok(Self { modes })
    }

    pub fn single(k: f64, omega: f64, eta0: f64) -> Result<Self> {
        Self::new(vec![Mode { k, omega, eta0 }])
    }

    pub fn pair(m1: Mode, m2: Mode) -> Result<Self> {
        Self::new(vec![m1, m2])
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Eigenvalue of `d/dX` on `exp(m*eta1 + n*eta2)`.
    pub fn x_eigenvalue(&self, exp: Exponent) -> f64 {
        let mut s = f64::from(exp[0]) * self.modes[0].k;
        if let Some(m2) = self.modes.get(1) {
            s += f64::from(exp[1]) * m2.k;
        }
        s
    }

    /// Eigenvalue of `d/dT` on `exp(m*eta1 + n*eta2)`.
    pub fn t_eigenvalue(&self, exp: Exponent) -> f64 {
        let mut s = -f64::from(exp[0]) * self.modes[0].omega;
        if let Some(m2) = self.modes.get(1) {
            s -= f64::from(exp[1]) * m2.omega;
        }
        s
    }

    /// Phase argument `m*eta1(X,T) + n*eta2(X,T)`.
    pub fn phase(&self, exp: Exponent, x: f64, t: f64) -> f64 {
        let eta = |m: &Mode| m.k * x - m.omega * t + m.eta0;
        let mut s = f64::from(exp[0]) * eta(&self.modes[0]);
        if let Some(m2) = self.modes.get(1) {
            s += f64::from(exp[1]) * eta(m2);
        }
        s
    }
}

/// Integer exponent vector `(m, n)`; the second entry is 0 on one-mode bases.
pub type Exponent = [i32; 2];

/// Differentiation variable of the transformed plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    T,
}

/// Sparse exponential polynomial over a [`PhaseBasis`].
///
/// Values are immutable after normalization; every operation returns a new
/// polynomial, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly {
    basis: PhaseBasis,
    terms: BTreeMap<Exponent, f64>,
    /// Largest coefficient magnitude seen while building this value,
    /// including contributions that later cancelled. Floor 1 is applied
    /// by [`ExpPoly::is_zero`], not here.
    scale: f64,
}

/// Outcome of a relative zero test.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroCheck {
    pub passed: bool,
    /// Largest `|c| / max(scale, 1)` over stored terms.
    pub max_relative: f64,
    /// Exponent vector of the worst offender, if any term survives.
    pub worst_exponent: Option<Exponent>,
    /// Construction scale the ratio was taken against.
    pub scale: f64,
}

impl ExpPoly {
    pub fn zero(basis: PhaseBasis) -> Self {
        Self {
            basis,
            terms: BTreeMap::new(),
            scale: 0.0,
        }
    }

    pub fn constant(basis: PhaseBasis, c: f64) -> Self {
        let mut p = Self::zero(basis);
        p.push_term([0, 0], c);
        p
    }

    /// Single term `c * exp(m*eta1 + n*eta2)`.
    pub fn term(basis: PhaseBasis, exp: Exponent, c: f64) -> Self {
        let mut p = Self::zero(basis);
        p.push_term(exp, c);
        p
    }

    pub fn from_terms(basis: PhaseBasis, terms: &[(Exponent, f64)]) -> Self {
        let mut p = Self::zero(basis);
        for &(e, c) in terms {
            p.push_term(e, c);
        }
        p
    }

    fn push_term(&mut self, exp: Exponent, c: f64) {
        if self.basis.n_modes() == 1 && exp[1] != 0 {
            // Unused generator: keep the invariant that the second entry is 0.
            panic!("exponent {exp:?} uses mode 2 on a one-mode basis");
        }
        self.scale = self.scale.max(c.abs());
        let entry = self.terms.entry(exp).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&exp);
        }
    }

    pub fn basis(&self) -> &PhaseBasis {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, f64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: Exponent) -> f64 {
        self.terms.get(&exp).copied().unwrap_or(0.0)
    }

    pub fn construction_scale(&self) -> f64 {
        self.scale
    }

    fn check_basis(&self, other: &Self, op: &str) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!(
                "{op}: operands use different phase bases"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(other, "add")?;
        let mut out = Self {
            basis: self.basis.clone(),
            terms: self.terms.clone(),
            scale: self.scale.max(other.scale),
        };
        for (&e, &c) in &other.terms {
            out.push_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::zero(self.basis.clone());
        out.scale = self.scale * factor.abs();
        for (&e, &c) in &self.terms {
            out.push_term(e, c * factor);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_basis(other, "mul")?;
        let mut out = Self::zero(self.basis.clone());
        out.scale = self.scale.max(other.scale);
        for (&ea, &ca) in &self.terms {
            for (&eb, &cb) in &other.terms {
                out.push_term([ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
        Ok(out)
    }

    /// Exact partial derivative: each term is scaled by its `d/dX` or `d/dT`
    /// eigenvalue, exponents unchanged.
    pub fn diff(&self, var: Var) -> Self {
        let mut out = Self::zero(self.basis.clone());
        out.scale = self.scale;
        for (&e, &c) in &self.terms {
            let eig = match var {
                Var::X => self.basis.x_eigenvalue(e),
                Var::T => self.basis.t_eigenvalue(e),
            };
            if eig != 0.0 {
                out.push_term(e, c * eig);
            }
        }
        out
    }

    /// Hirota bilinear derivative `D_X^order_x D_T^order_t self.other`:
    /// term pairs `(u, v)` contribute
    /// `c_u c_v (phiX(u)-phiX(v))^order_x (phiT(u)-phiT(v))^order_t` at `u+v`.
    pub fn hirota(&self, other: &Self, order_x: u32, order_t: u32) -> Result<Self> {
        self.check_basis(other, "hirota")?;
        let mut out = Self::zero(self.basis.clone());
        out.scale = self.scale.max(other.scale);
        for (&ea, &ca) in &self.terms {
            let ax = self.basis.x_eigenvalue(ea);
            let at = self.basis.t_eigenvalue(ea);
            for (&eb, &cb) in &other.terms {
                let dx = ax - self.basis.x_eigenvalue(eb);
                let dt = at - self.basis.t_eigenvalue(eb);
                let factor = dx.powi(order_x as i32) * dt.powi(order_t as i32);
                if factor != 0.0 {
                    out.push_term([ea[0] + eb[0], ea[1] + eb[1]], ca * cb * factor);
                }
            }
        }
        Ok(out)
    }

    /// Evaluate at a point of the transformed plane.
    ///
    /// Exponent arguments beyond 700 in magnitude are reported as overflow
    /// instead of silently returning infinities.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if !x.is_finite() || !t.is_finite() {
            return Err(Error::Domain(format!(
                "eval at non-finite point ({x}, {t})"
            )));
        }
        let mut sum = 0.0;
        for (&e, &c) in &self.terms {
            let arg = self.basis.phase(e, x, t);
            if arg.abs() > 700.0 {
                return Err(Error::Overflow {
                    x,
                    t,
                    m: e[0],
                    n: e[1],
                    arg,
                });
            }
            sum += c * arg.exp();
        }
        Ok(sum)
    }

    /// Relative zero test against the construction scale (floor 1).
    pub fn is_zero(&self, tol: f64) -> ZeroCheck {
        let scale = self.scale.max(1.0);
        let mut max_relative = 0.0;
        let mut worst_exponent = None;
        for (&e, &c) in &self.terms {
            let rel = c.abs() / scale;
            if rel > max_relative {
                max_relative = rel;
                worst_exponent = Some(e);
            }
        }
        ZeroCheck {
            passed: max_relative <= tol,
            max_relative,
            worst_exponent,
            scale,
        }
    }

    /// Debug JSON: modes plus terms sorted lexicographically by `(m, n)`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(&e, &c)| serde_json::json!({ "m": e[0], "n": e[1], "c": c }))
            .collect();
        serde_json::json!({ "modes": self.basis.modes, "terms": terms })
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                [0, 0] => write!(f, "{c}")?,
                [m, 0] => write!(f, "{c}*exp({m}u1)")?,
                [0, n] => write!(f, "{c}*exp({n}u2)")?,
                [m, n] => write!(f, "{c}*exp({m}u1+{n}u2)")?,
            }
        }
        Ok(())
    }
}
