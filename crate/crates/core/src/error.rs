use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("unsupported coefficient branch: {0}")]
    UnsupportedBranch(&'static str),

    #[error("state (n={n}, l={l}) is not bound: eta = {eta}")]
    Unbound { n: u32, l: u32, eta: f64 },

    #[error("state is not normalizable: c12 = {c12}, c13 = {c13}")]
    NonNormalizable { c12: f64, c13: f64 },

    #[error("bracket [{lo}, {hi}] does not contain a sign change")]
    Bracket { lo: f64, hi: f64 },

    #[error("no bound state with {n} nodes below {ceiling} eV ({found} states found)")]
    BracketExhausted { n: u32, ceiling: f64, found: u32 },

    #[error("no convergence after {iterations} iterations; last bracket [{lo}, {hi}]")]
    NonConvergence { iterations: u32, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error_estimate}")]
    Quadrature { estimate: f64, error_estimate: f64 },

    #[error("molecule record {record}: invalid field `{field}`: {reason}")]
    Parse {
        record: String,
        field: &'static str,
        reason: String,
    },

    #[error("malformed molecule database: {0}")]
    Format(String),

    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
