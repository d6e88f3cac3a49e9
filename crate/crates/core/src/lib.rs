//! Construction, certification, transformation, classification and analysis
//! of one- and two-soliton solutions of the dissipative Vakhnenko equation,
//! worked in the transformed `(X, T)` plane with exact exponential-polynomial
//! algebra.

pub mod analysis;
pub mod bilinear;
pub mod classify;
pub mod error;
pub mod exppoly;
pub mod soliton;
pub mod transform;

pub use error::{Error, Result};
pub use exppoly::{ExpPoly, Mode, PhaseBasis, Var};
pub use soliton::{SolitonParams, TauFunction, TauKind};
