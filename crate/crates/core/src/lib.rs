//! Codeword-stabilized codes over qudits of arbitrary dimension.

pub mod clique;
pub mod corpus;
pub mod cws;
pub mod dense;
pub mod error;
pub mod format;
pub mod limits;
pub mod oracle;
pub mod pauli;
pub mod stabilizer;
pub mod structure;
pub mod zd;

pub use error::{Error, Result};
pub use clique::{build_clique_graph, max_clique, search, Budget, CliqueGraph, CliqueResult, SearchOutcome};
pub use cws::{
    check_code, check_codewords, classical_rep, detection_set, distance, is_additive, CwsCode,
    DetectionSet, Syndrome, Verdict,
};
pub use limits::Limits;
pub use oracle::{kl_check, stabilized_state, DenseState, KlReport};
pub use pauli::{enumerate_errors, enumerate_errors_of_weight, error_count, PauliOperator};
pub use structure::{
    gcd_pattern_scan, group_extension, example_fixtures, ring_spec, scalar_closure, ExtensionVerdict,
    GcdWitness,
};
pub use stabilizer::{CanonicalForm, GroupElement, StabilizerSpec, ValidationReport};
pub use zd::{IntMatrix, ZdMatrix, ZdVector};
