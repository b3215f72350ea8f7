//! Statevector check of the detection condition, independent of the
//! symplectic bookkeeping in [`crate::cws`].
//!
//! Operators are applied as generalized permutations built from the basis
//! action `Z|k⟩ = q^k|k⟩`, `X|k⟩ = |k+1⟩`.

use num_complex::Complex64;
use serde::Serialize;

use crate::cws::CwsCode;
use crate::dense::{inner, norm, Monomial, RootsOfUnity};
use crate::error::{check_limit, Error, Result};
use crate::limits::{pow_sat, Limits};
use crate::pauli::{enumerate_errors, error_count, PauliOperator};
use crate::stabilizer::StabilizerSpec;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DenseState {
    pub d: u32,
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
    pub tolerance: f64,
}

impl DenseState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|⟨self|other⟩|`
    pub fn overlap(&self, other: &[Complex64]) -> f64 {
        inner(&self.amplitudes, other).norm()
    }
}

fn oracle_dim(d: u32, n: usize, limits: &Limits) -> Result<usize> {
    let dim = pow_sat(d as u64, n);
    check_limit("oracle dimension d^n", dim, limits.oracle_dim as u128)?;
    Ok(dim as usize)
}

/// Applies `(1/d) Σ_j g^j` for each generator in turn.
fn project(gens: &[Monomial], roots: &RootsOfUnity, d: u32, x: Vec<Complex64>) -> Vec<Complex64> {
    let scale = 1.0 / d as f64;
    let mut x = x;
    for g in gens {
        let mut acc = x.clone();
        let mut cur = x;
        for _ in 1..d {
            cur = g.apply(roots, &cur);
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += c;
            }
        }
        for a in acc.iter_mut() {
            *a *= scale;
        }
        x = acc;
    }
    x
}

/// The joint `+1` eigenvector of the generators.
///
/// Builds `P = Π_k (1/d) Σ_j g_k^j`, requires `tr P ≈ 1`, and returns the
/// normalized image of the basis vector with the largest diagonal entry.
pub fn stabilized_state(spec: &StabilizerSpec, limits: &Limits) -> Result<DenseState> {
    let d = spec.d();
    let dim = oracle_dim(d, spec.n(), limits)?;
    let roots = RootsOfUnity::new(d);
    let gens: Vec<Monomial> = spec.generators().iter().map(|g| g.monomial()).collect();

    let mut trace = Complex64::new(0.0, 0.0);
    let mut best = (f64::NEG_INFINITY, 0usize);
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        e[j] = Complex64::new(1.0, 0.0);
        let col = project(&gens, &roots, d, e.clone());
        e[j] = Complex64::new(0.0, 0.0);
        trace += col[j];
        if col[j].re > best.0 + DEFAULT_TOLERANCE {
            best = (col[j].re, j);
        }
    }
    if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-6 {
        return Err(Error::NonUniqueState { trace: trace.re });
    }
    e[best.1] = Complex64::new(1.0, 0.0);
    let mut psi = project(&gens, &roots, d, e);
    let nrm = norm(&psi);
    for a in psi.iter_mut() {
        *a /= nrm;
    }
    for g in &gens {
        let gpsi = g.apply(&roots, &psi);
        let dev = gpsi
            .iter()
            .zip(&psi)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if dev > DEFAULT_TOLERANCE {
            return Err(Error::Internal(format!(
                "projected state is not stabilized (deviation {dev:e})"
            )));
        }
    }
    Ok(DenseState {
        d,
        n: spec.n(),
        amplitudes: psi,
        tolerance: DEFAULT_TOLERANCE,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum KlFailure {
    /// `|⟨w_i|w_j⟩ − δ_ij|` too large.
    NotOrthonormal { i: usize, j: usize, value: f64 },
    /// `⟨w_i|E|w_j⟩ ≠ 0` for `i ≠ j`.
    OffDiagonal { error: PauliOperator, i: usize, j: usize, value: f64 },
    /// `⟨w_i|E|w_i⟩ ≠ ⟨w_0|E|w_0⟩`.
    Diagonal { error: PauliOperator, i: usize, spread: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KlReport {
    pub ok: bool,
    pub degenerate: bool,
    pub errors_checked: u64,
    pub max_off_diagonal: f64,
    pub max_diagonal_spread: f64,
    /// An error with `|C_E| > tol`.
    pub degenerate_witness: Option<PauliOperator>,
    pub failure: Option<KlFailure>,
}

/// Checks `⟨w_i|E|w_j⟩ = C_E δ_ij` for every error of weight `1..δ`.
pub fn kl_check(code: &CwsCode, delta: usize, limits: &Limits) -> Result<KlReport> {
    let spec = &code.spec;
    let d = spec.d();
    oracle_dim(d, spec.n(), limits)?;
    check_limit(
        "oracle error sweep",
        error_count(d, spec.n(), delta.saturating_sub(1)),
        limits.errors as u128,
    )?;
    let roots = RootsOfUnity::new(d);
    let state = stabilized_state(spec, limits)?;
    let basis: Vec<Vec<Complex64>> = code
        .word_operators()?
        .iter()
        .map(|w| w.monomial().apply(&roots, &state.amplitudes))
        .collect();
    let tol = state.tolerance;
    let k = basis.len();

    let mut report = KlReport {
        ok: true,
        degenerate: false,
        errors_checked: 0,
        max_off_diagonal: 0.0,
        max_diagonal_spread: 0.0,
        degenerate_witness: None,
        failure: None,
    };
    for i in 0..k {
        for j in i..k {
            let expect = if i == j { 1.0 } else { 0.0 };
            let value = (inner(&basis[i], &basis[j]) - expect).norm();
            if value > tol {
                report.ok = false;
                report.failure = Some(KlFailure::NotOrthonormal { i, j, value });
                return Ok(report);
            }
        }
    }

    for e in enumerate_errors(d, spec.n(), delta.saturating_sub(1)) {
        report.errors_checked += 1;
        let op = e.monomial();
        let images: Vec<Vec<Complex64>> = basis.iter().map(|b| op.apply(&roots, b)).collect();
        let c0 = inner(&basis[0], &images[0]);
        if c0.norm() > tol {
            report.degenerate = true;
            report.degenerate_witness.get_or_insert_with(|| e.clone());
        }
        for i in 0..k {
            for j in 0..k {
                let value = inner(&basis[i], &images[j]);
                if i == j {
                    let spread = (value - c0).norm();
                    report.max_diagonal_spread = report.max_diagonal_spread.max(spread);
                    if spread > tol && report.failure.is_none() {
                        report.failure = Some(KlFailure::Diagonal {
                            error: e.clone(),
                            i,
                            spread,
                        });
                    }
                } else {
                    let value = value.norm();
                    report.max_off_diagonal = report.max_off_diagonal.max(value);
                    if value > tol && report.failure.is_none() {
                        report.failure = Some(KlFailure::OffDiagonal {
                            error: e.clone(),
                            i,
                            j,
                            value,
                        });
                    }
                }
            }
        }
    }
    report.ok = report.failure.is_none();
    Ok(report)
}
