//! Resource caps for the brute-force parts of the library.

use std::env;

/// Environment variables read by [`Limits::from_env`].
pub const ENV_GROUP: &str = "CWS_GROUP_LIMIT";
pub const ENV_MODULE: &str = "CWS_MODULE_LIMIT";
pub const ENV_ORACLE_DIM: &str = "CWS_ORACLE_DIM";
pub const ENV_VERTICES: &str = "CWS_VERTEX_LIMIT";
pub const ENV_ERRORS: &str = "CWS_ERROR_LIMIT";

/// Caps on exhaustive enumerations.
///
/// Every brute-force routine checks its predicted work against one of these
/// before starting and fails with [`crate::Error::ResourceLimit`] instead of
/// running away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum `d^m` for enumerating all generator exponent vectors.
    pub group_elements: u64,
    /// Maximum size of an enumerated Z_d-module.
    pub module_elements: u64,
    /// Maximum Hilbert-space dimension `d^n` for the dense oracle.
    pub oracle_dim: usize,
    /// Maximum number of clique-graph vertices.
    pub vertices: usize,
    /// Maximum number of Pauli errors enumerated by a single sweep.
    pub errors: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_elements: 1 << 24,
            module_elements: 1 << 22,
            oracle_dim: 4096,
            vertices: 1 << 15,
            errors: 1 << 26,
        }
    }
}

impl Limits {
    /// Defaults, overridden by any of the `CWS_*` environment variables that
    /// parse as unsigned integers.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = read(ENV_GROUP) {
            limits.group_elements = v;
        }
        if let Some(v) = read(ENV_MODULE) {
            limits.module_elements = v;
        }
        if let Some(v) = read(ENV_ORACLE_DIM) {
            limits.oracle_dim = v as usize;
        }
        if let Some(v) = read(ENV_VERTICES) {
            limits.vertices = v as usize;
        }
        if let Some(v) = read(ENV_ERRORS) {
            limits.errors = v;
        }
        limits
    }
}

fn read(key: &str) -> Option<u64> {
    env::var(key).ok().and_then(|s| s.trim().parse().ok())
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn pow_sat(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
