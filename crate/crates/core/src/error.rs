use thiserror::Error;

/// Errors produced by the quadrature and certificate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown function id `{0}`")]
    UnknownFunction(String),
    #[error("invalid parameters for `{id}`: {reason}")]
    InvalidParams { id: String, reason: String },
    #[error("{what} = {value} lies outside the domain {domain}")]
    OutsideDomain {
        what: &'static str,
        value: f64,
        domain: String,
    },
    #[error("{what} produced a non-finite value at x = {x}")]
    NonFinite { what: &'static str, x: f64 },
    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval { a: f64, b: f64, reason: &'static str },
    #[error("evaluation point x = {x} must lie in [{lo}, {hi}]")]
    PointOutOfRange { x: f64, lo: f64, hi: f64 },
    #[error("kernel argument t = {0} must lie in [0, 1]")]
    KernelArgument(f64),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid certificate input: {0}")]
    InvalidCertificateInput(String),
    #[error("integration of [{a}, {b}] did not reach tolerance {tol:e} within {cap} subintervals (error estimate {estimate:e})")]
    NoConvergence {
        a: f64,
        b: f64,
        tol: f64,
        cap: usize,
        estimate: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
