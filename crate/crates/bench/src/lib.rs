//! Inputs shared by the benchmarks.

use cws_core::{ring_spec, Limits, StabilizerSpec};

/// `(label, spec, delta)` cases, smallest first.
pub fn cases() -> Vec<(String, StabilizerSpec, usize)> {
    let mut out = Vec::new();
    for (d, n) in [(2, 5), (3, 4), (4, 4), (2, 7), (5, 4)] {
        out.push((format!("ring d={d} n={n}"), ring_spec(d, n), 2));
    }
    out
}

pub fn limits() -> Limits {
    Limits::default()
}
