//! Phase-tracked qudit Pauli operators.
//!
//! An operator is stored in the normal form `q_d^phase · Z^z · X^x` (all Z
//! factors to the left of all X factors), where `Z|k⟩ = q_d^k|k⟩`,
//! `X|k⟩ = |k+1⟩` and `q_d = exp(2πi/d)`. These basis actions give
//! `ZX = q_d·XZ`, so moving `X^a` to the right of `Z^b` costs `q_d^{-ab}`.
//!
//! Qudits are indexed from 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dense::{ComplexMatrix, Monomial, RootsOfUnity};
use crate::error::{Error, Result};
use crate::zd::{dot_mod, ZdVector};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PauliOperator {
    d: u32,
    phase: u32,
    z: ZdVector,
    x: ZdVector,
}

impl PauliOperator {
    pub fn new(d: u32, phase: u32, z: ZdVector, x: ZdVector) -> Result<Self> {
        if z.modulus() != d || x.modulus() != d || z.len() != x.len() {
            return Err(Error::InvalidInput(
                "Z and X exponent vectors must share the modulus d and length n".into(),
            ));
        }
        if phase >= d {
            return Err(Error::InvalidInput(format!("phase {phase} not reduced mod {d}")));
        }
        Ok(PauliOperator { d, phase, z, x })
    }

    pub(crate) fn from_parts(d: u32, phase: u32, z: Vec<u32>, x: Vec<u32>) -> Self {
        PauliOperator {
            d,
            phase: phase % d,
            z: ZdVector::from_raw(d, z),
            x: ZdVector::from_raw(d, x),
        }
    }

    pub fn identity(d: u32, n: usize) -> Self {
        PauliOperator::from_parts(d, 0, vec![0; n], vec![0; n])
    }

    /// `Z_qudit^exponent`
    pub fn z_on(d: u32, n: usize, qudit: usize, exponent: u32) -> Self {
        let mut z = vec![0; n];
        z[qudit] = exponent % d;
        PauliOperator::from_parts(d, 0, z, vec![0; n])
    }

    /// `X_qudit^exponent`
    pub fn x_on(d: u32, n: usize, qudit: usize, exponent: u32) -> Self {
        let mut x = vec![0; n];
        x[qudit] = exponent % d;
        PauliOperator::from_parts(d, 0, vec![0; n], x)
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.z.len()
    }

    #[inline]
    pub fn phase(&self) -> u32 {
        self.phase
    }

    /// Z exponents `v`.
    #[inline]
    pub fn z_exp(&self) -> &ZdVector {
        &self.z
    }

    /// X exponents `u`.
    #[inline]
    pub fn x_exp(&self) -> &ZdVector {
        &self.x
    }

    pub fn with_phase(&self, phase: u32) -> Self {
        PauliOperator {
            phase: phase % self.d,
            ..self.clone()
        }
    }

    /// True when the operator is the identity up to phase.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.z.is_zero() && self.x.is_zero()
    }

    /// True when the operator equals the identity including phase.
    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_identity_up_to_phase()
    }

    pub fn same_up_to_phase(&self, other: &PauliOperator) -> bool {
        self.z == other.z && self.x == other.x
    }

    fn check_same_space(&self, other: &PauliOperator) -> Result<()> {
        if self.d != other.d || self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected_d: self.d,
                expected_n: self.n(),
                found_d: other.d,
                found_n: other.n(),
            });
        }
        Ok(())
    }

    /// Normal-form product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_same_space(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOperator) -> PauliOperator {
        let d = self.d;
        // X^{u_a} Z^{v_b} = q^{-u_a·v_b} Z^{v_b} X^{u_a}
        let cross = dot_mod(self.x.entries(), other.z.entries(), d);
        let phase = (self.phase + other.phase + d - cross) % d;
        PauliOperator {
            d,
            phase,
            z: self.z.add(&other.z),
            x: self.x.add(&other.x),
        }
    }

    /// `γ` with `self · other = q_d^γ · other · self`.
    pub fn symplectic_phase(&self, other: &PauliOperator) -> Result<u32> {
        self.check_same_space(other)?;
        Ok(self.symplectic_unchecked(other))
    }

    #[inline]
    pub(crate) fn symplectic_unchecked(&self, other: &PauliOperator) -> u32 {
        let d = self.d;
        let a = dot_mod(self.z.entries(), other.x.entries(), d);
        let b = dot_mod(self.x.entries(), other.z.entries(), d);
        (a + d - b) % d
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> Result<bool> {
        Ok(self.symplectic_phase(other)? == 0)
    }

    /// Number of qudits acted on nontrivially; the phase is ignored.
    pub fn weight(&self) -> usize {
        self.z
            .entries()
            .iter()
            .zip(self.x.entries())
            .filter(|(&z, &x)| z != 0 || x != 0)
            .count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.z.get(i) != 0 || self.x.get(i) != 0)
            .collect()
    }

    pub fn pow(&self, k: u64) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.d, self.n());
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn inverse(&self) -> PauliOperator {
        let d = self.d;
        let uv = dot_mod(self.x.entries(), self.z.entries(), d);
        let phase = (2 * d - self.phase - uv) % d;
        PauliOperator {
            d,
            phase,
            z: self.z.neg(),
            x: self.x.neg(),
        }
    }

    /// Action on computational basis states as a generalized permutation:
    /// `q^p Z^v X^u |j⟩ = q^{p + v·(j+u)} |j+u⟩`, qudit 0 most significant.
    pub fn monomial(&self) -> Monomial {
        let d = self.d;
        let n = self.n();
        let dim = (d as usize).pow(n as u32);
        let mut target = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        let mut digits = vec![0u32; n];
        for _ in 0..dim {
            let mut t = 0usize;
            let mut ph = self.phase as u64;
            for q in 0..n {
                let shifted = (digits[q] + self.x.get(q)) % d;
                t = t * d as usize + shifted as usize;
                ph += self.z.get(q) as u64 * shifted as u64;
            }
            target.push(t);
            phase.push((ph % d as u64) as u32);
            for q in (0..n).rev() {
                digits[q] += 1;
                if digits[q] < d {
                    break;
                }
                digits[q] = 0;
            }
        }
        Monomial { d, target, phase }
    }

    /// Exact matrix of the operator as a Kronecker product of single-qudit
    /// factors `Z^{v_i} X^{u_i}`, scaled by `q^phase`.
    pub fn dense_matrix(&self, max_dim: usize) -> Result<ComplexMatrix> {
        let d = self.d as usize;
        let dim = (d as u128).saturating_pow(self.n() as u32);
        crate::error::check_limit("dense operator dimension", dim, max_dim as u128)?;
        let roots = RootsOfUnity::new(self.d);
        let mut z1 = ComplexMatrix::zeros(d);
        let mut x1 = ComplexMatrix::zeros(d);
        for k in 0..d {
            z1.set(k, k, roots.pow(k as u64));
            x1.set((k + 1) % d, k, roots.pow(0));
        }
        let mut out = ComplexMatrix::identity(1);
        for q in 0..self.n() {
            let mut local = ComplexMatrix::identity(d);
            for _ in 0..self.z.get(q) {
                local = local.mul(&z1);
            }
            for _ in 0..self.x.get(q) {
                local = local.mul(&x1);
            }
            out = out.kron(&local);
        }
        let s = roots.pow(self.phase as u64);
        let mut scaled = ComplexMatrix::zeros(out.dim());
        for r in 0..out.dim() {
            for c in 0..out.dim() {
                scaled.set(r, c, s * out.get(r, c));
            }
        }
        Ok(scaled)
    }

    /// Parses the error-literal grammar: whitespace-separated `Z<i>`, `X<i>`,
    /// `Z<i>^<e>`, `X<i>^<e>` tokens multiplied left to right. `I` is the
    /// identity and `q^<k>` multiplies by a phase. The empty string is the
    /// identity.
    pub fn parse_literal(d: u32, n: usize, literal: &str) -> Result<PauliOperator> {
        let mut acc = PauliOperator::identity(d, n);
        for token in literal.split_whitespace() {
            let bad = |why: &str| Error::InvalidInput(format!("bad token `{token}`: {why}"));
            if token == "I" {
                continue;
            }
            let (head, exponent) = match token.split_once('^') {
                Some((h, e)) => (
                    h,
                    e.parse::<u64>().map_err(|_| bad("exponent is not an integer"))?,
                ),
                None => (token, 1),
            };
            let e = (exponent % d as u64) as u32;
            if head == "q" {
                acc = acc.with_phase(acc.phase + e);
                continue;
            }
            let mut chars = head.chars();
            let kind = chars.next().ok_or_else(|| bad("empty"))?;
            let qudit: usize = chars
                .as_str()
                .parse()
                .map_err(|_| bad("qudit index is not an integer"))?;
            if qudit >= n {
                return Err(bad(&format!("qudit index out of range for n = {n}")));
            }
            let factor = match kind {
                'Z' => PauliOperator::z_on(d, n, qudit, e),
                'X' => PauliOperator::x_on(d, n, qudit, e),
                _ => return Err(bad("expected Z, X, I or q")),
            };
            acc = acc.mul_unchecked(&factor);
        }
        Ok(acc)
    }
}

impl fmt::Display for PauliOperator {
    /// Writes the normal form in the literal grammar, e.g. `q^2 Z0 Z4^2 X1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens = Vec::new();
        if self.phase != 0 {
            tokens.push(format!("q^{}", self.phase));
        }
        for (label, exps) in [("Z", &self.z), ("X", &self.x)] {
            for (i, &e) in exps.entries().iter().enumerate() {
                match e {
                    0 => {}
                    1 => tokens.push(format!("{label}{i}")),
                    _ => tokens.push(format!("{label}{i}^{e}")),
                }
            }
        }
        if tokens.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&tokens.join(" "))
        }
    }
}

/// Number of Pauli errors (phase-0 representatives) with weight in
/// `1..=max_weight`: `Σ_w C(n,w)(d²-1)^w`.
pub fn error_count(d: u32, n: usize, max_weight: usize) -> u128 {
    let per_site = (d as u128) * (d as u128) - 1;
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for w in 1..=max_weight.min(n) {
        binom = binom * (n - w + 1) as u128 / w as u128;
        power = power.saturating_mul(per_site);
        total = total.saturating_add(binom.saturating_mul(power));
    }
    total
}

/// Deterministic stream of all phase-0 Pauli errors with
/// `1 ≤ weight ≤ max_weight`: by weight, then support in lexicographic order,
/// then the per-site `(z, x)` exponent pairs in lexicographic order.
pub fn enumerate_errors(d: u32, n: usize, max_weight: usize) -> ErrorIter {
    ErrorIter::new(d, n, 1, max_weight.min(n))
}

/// The errors of [`enumerate_errors`] with weight exactly `weight`, same order.
pub fn enumerate_errors_of_weight(d: u32, n: usize, weight: usize) -> ErrorIter {
    if weight == 0 || weight > n {
        return ErrorIter::new(d, n, 1, 0);
    }
    ErrorIter::new(d, n, weight, weight)
}

pub struct ErrorIter {
    d: u32,
    n: usize,
    max_weight: usize,
    weight: usize,
    support: Vec<usize>,
    // per support site: index p in 1..d² encoding (z, x) = (p / d, p % d)
    pairs: Vec<u32>,
    done: bool,
}

impl ErrorIter {
    fn new(d: u32, n: usize, min_weight: usize, max_weight: usize) -> Self {
        let mut it = ErrorIter {
            d,
            n,
            max_weight,
            weight: 0,
            support: Vec::new(),
            pairs: Vec::new(),
            done: max_weight < min_weight,
        };
        if !it.done {
            it.start_weight(min_weight);
        }
        it
    }

    fn start_weight(&mut self, w: usize) {
        self.weight = w;
        self.support = (0..w).collect();
        self.pairs = vec![1; w];
    }

    fn current(&self) -> PauliOperator {
        let mut z = vec![0; self.n];
        let mut x = vec![0; self.n];
        for (&site, &p) in self.support.iter().zip(&self.pairs) {
            z[site] = p / self.d;
            x[site] = p % self.d;
        }
        PauliOperator::from_parts(self.d, 0, z, x)
    }

    fn advance(&mut self) {
        let top = self.d * self.d;
        for i in (0..self.weight).rev() {
            self.pairs[i] += 1;
            if self.pairs[i] < top {
                return;
            }
            self.pairs[i] = 1;
        }
        // next support of the same size
        let w = self.weight;
        for i in (0..w).rev() {
            if self.support[i] < self.n - w + i {
                self.support[i] += 1;
                for j in i + 1..w {
                    self.support[j] = self.support[j - 1] + 1;
                }
                return;
            }
        }
        if w < self.max_weight {
            self.start_weight(w + 1);
        } else {
            self.done = true;
        }
    }
}

impl Iterator for ErrorIter {
    type Item = PauliOperator;

    fn next(&mut self) -> Option<PauliOperator> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: u32, n: usize, s: &str) -> PauliOperator {
        PauliOperator::parse_literal(d, n, s).unwrap()
    }

    #[test]
    fn z_times_x_is_normal_form_and_x_times_z_picks_up_inverse_root() {
        for d in [2, 3, 4, 6] {
            let z = lit(d, 1, "Z0");
            let x = lit(d, 1, "X0");
            let zx = z.multiply(&x).unwrap();
            assert_eq!(zx.phase(), 0);
            assert_eq!(zx.to_string(), "Z0 X0");
            let xz = x.multiply(&z).unwrap();
            assert_eq!(xz.phase(), d - 1);
            assert!(xz.same_up_to_phase(&zx));
        }
    }

    #[test]
    fn identity_is_neutral() {
        let a = lit(5, 3, "Z0^2 X1 X2^4 q^3");
        let id = PauliOperator::identity(5, 3);
        assert_eq!(a.multiply(&id).unwrap(), a);
        assert_eq!(id.multiply(&a).unwrap(), a);
    }

    #[test]
    fn x_squared_squared_is_identity_for_d4() {
        let x2 = lit(4, 1, "X0^2");
        let p = x2.multiply(&x2).unwrap();
        assert!(p.is_identity());
        let dense = x2.dense_matrix(64).unwrap();
        assert!(dense.mul(&dense).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn symplectic_examples() {
        for d in [2, 3, 4, 6, 7] {
            let z = lit(d, 1, "Z0");
            let x = lit(d, 1, "X0");
            assert_eq!(z.symplectic_phase(&x).unwrap(), 1);
            assert_eq!(x.symplectic_phase(&z).unwrap(), d - 1);
            assert_eq!(z.symplectic_phase(&z).unwrap(), 0);
        }
        // generators g1 = Z0 X1^2 X2^2 and g2 = X0^2 Z1 over d = 4
        let g1 = lit(4, 3, "Z0 X1^2 X2^2");
        let g2 = lit(4, 3, "X0^2 Z1");
        assert_eq!(g1.symplectic_phase(&g2).unwrap(), 0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = PauliOperator::identity(3, 2);
        let b = PauliOperator::identity(3, 3);
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
        let c = PauliOperator::identity(5, 2);
        assert!(a.symplectic_phase(&c).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(PauliOperator::identity(3, 7).weight(), 0);
        assert_eq!(lit(3, 7, "Z1 Z5 X1 X5").weight(), 2);
        assert_eq!(lit(4, 3, "Z0^2").weight(), 1);
        assert_eq!(lit(4, 3, "Z0^4").weight(), 0);
    }

    #[test]
    fn error_stream_examples() {
        assert_eq!(enumerate_errors(3, 4, 0).count(), 0);
        assert_eq!(enumerate_errors(3, 7, 2).count(), 1400);
        assert_eq!(error_count(3, 7, 2), 7 * 8 + 21 * 64);
        let qubit: Vec<String> = enumerate_errors(2, 1, 1).map(|e| e.to_string()).collect();
        assert_eq!(qubit, vec!["X0", "Z0", "Z0 X0"]);
    }

    #[test]
    fn error_stream_is_ordered_and_distinct() {
        let errs: Vec<_> = enumerate_errors(3, 4, 3).collect();
        assert_eq!(errs.len() as u128, error_count(3, 4, 3));
        let distinct: std::collections::HashSet<_> = errs.iter().collect();
        assert_eq!(distinct.len(), errs.len());
        assert!(errs.windows(2).all(|w| w[0].weight() <= w[1].weight()));
        assert!(errs.iter().all(|e| e.phase() == 0 && e.weight() >= 1));
    }

    #[test]
    fn dense_z_is_clock_matrix() {
        let z = lit(3, 1, "Z0").dense_matrix(16).unwrap();
        let roots = RootsOfUnity::new(3);
        for k in 0..3 {
            assert!((z.get(k, k) - roots.pow(k as u64)).norm() < 1e-12);
        }
        let id = PauliOperator::identity(3, 2).dense_matrix(16).unwrap();
        assert!(id.max_abs_diff(&ComplexMatrix::identity(9)) < 1e-12);
    }

    #[test]
    fn dense_respects_limit() {
        let a = PauliOperator::identity(4, 7);
        assert!(matches!(a.dense_matrix(4096), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn monomial_matches_dense() {
        let roots = RootsOfUnity::new(4);
        let a = lit(4, 2, "q^1 Z0^3 X0 X1^2 Z1");
        let diff = a
            .monomial()
            .to_dense(&roots)
            .max_abs_diff(&a.dense_matrix(64).unwrap());
        assert!(diff < 1e-12);
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let a = lit(6, 3, "q^5 Z0^3 X0^2 X1 Z2^5 X2^4");
        assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        assert!(a.inverse().multiply(&a).unwrap().is_identity());
    }

    #[test]
    fn literal_parse_errors() {
        assert!(PauliOperator::parse_literal(3, 2, "Z2").is_err());
        assert!(PauliOperator::parse_literal(3, 2, "Y0").is_err());
        assert!(PauliOperator::parse_literal(3, 2, "Z0^x").is_err());
        assert!(PauliOperator::parse_literal(3, 2, "").unwrap().is_identity());
    }

    #[test]
    fn display_roundtrips_through_parser() {
        let a = lit(5, 4, "X3 Z1^2 q^4 X0^3 Z3");
        let back = lit(5, 4, &a.to_string());
        assert_eq!(a, back);
    }
}
