use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument violated a domain constraint (e.g. `v <= 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two polynomials built on different phase bases were combined.
    #[error("phase basis mismatch: {0}")]
    BasisMismatch(String),

    /// An exponential argument left the representable range during `eval`.
    #[error("exp overflow at (X={x}, T={t}): term exp({m}*eta1 + {n}*eta2) has argument {arg}")]
    Overflow {
        x: f64,
        t: f64,
        m: i32,
        n: i32,
        arg: f64,
    },

    /// A tau function evaluated to a non-positive value where positivity is required.
    #[error("tau function non-positive at (X={x}, T={t}): F = {value}")]
    NonPositiveTau { x: f64, t: f64, value: f64 },

    /// A parameter set hits a structural singularity (vanishing denominator etc.).
    #[error("singular configuration: {0}")]
    Singular(String),

    /// An order-by-order solve or residual certification could not be completed.
    #[error("certification failure: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
