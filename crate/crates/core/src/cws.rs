//! Classical representation of CWS codes and the error-detection verdict.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{check_limit, Error, Result};
use crate::limits::Limits;
use crate::pauli::{enumerate_errors, enumerate_errors_of_weight, error_count, PauliOperator};
use crate::stabilizer::StabilizerSpec;
use crate::zd::ZdVector;

/// Phase-exponent vector of length `m`.
pub type Syndrome = ZdVector;

/// `Cl_S(E)`: the vector `s` with `E g_k E† = q_d^{s_k} g_k`.
///
/// Entry `k` is `Σ_l v_l·x_mat[k][l] − u_l·z_mat[k][l]` for `E ∝ Z^v X^u`.
pub fn classical_rep(spec: &StabilizerSpec, e: &PauliOperator) -> Result<Syndrome> {
    if e.d() != spec.d() || e.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected_d: spec.d(),
            expected_n: spec.n(),
            found_d: e.d(),
            found_n: e.n(),
        });
    }
    Ok(classical_rep_unchecked(spec, e))
}

pub(crate) fn classical_rep_unchecked(spec: &StabilizerSpec, e: &PauliOperator) -> Syndrome {
    let d = spec.d() as u64;
    let (v, u) = (e.z_exp().entries(), e.x_exp().entries());
    let support: Vec<usize> = (0..spec.n()).filter(|&l| v[l] != 0 || u[l] != 0).collect();
    let xm = spec.x_mat();
    let zm = spec.z_mat();
    let entries = (0..spec.m())
        .map(|k| {
            let mut acc = 0u64;
            for &l in &support {
                acc += v[l] as u64 * xm.get(k, l) as u64;
                acc += (d - u[l] as u64) * zm.get(k, l) as u64;
            }
            (acc % d) as u32
        })
        .collect();
    ZdVector::from_raw(spec.d(), entries)
}

/// Same map with the `+u·t` sign. Agrees with [`classical_rep`] as a set
/// over any weight-closed family of errors.
pub fn classical_rep_plus(spec: &StabilizerSpec, e: &PauliOperator) -> Result<Syndrome> {
    let flipped = PauliOperator::new(spec.d(), 0, e.z_exp().clone(), e.x_exp().neg())?;
    classical_rep(spec, &flipped)
}

/// A weight-`<δ` error acting on the stabilizer state as a group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSyndromeError {
    pub error: PauliOperator,
    /// `a` with `Π g_k^{a_k} ∝ error`.
    pub exponents: ZdVector,
}

#[derive(Clone, Debug)]
pub struct DetectionSet {
    pub delta: usize,
    /// Nonzero syndromes of weight-`<δ` errors, each with its first witness.
    pub syndromes: HashMap<Syndrome, PauliOperator>,
    pub zero_syndrome_errors: Vec<ZeroSyndromeError>,
}

impl DetectionSet {
    pub fn contains(&self, s: &Syndrome) -> bool {
        self.syndromes.contains_key(s)
    }

    pub fn witness(&self, s: &Syndrome) -> Option<&PauliOperator> {
        self.syndromes.get(s)
    }

    /// Whether `c` (measured from the zero codeword) passes every
    /// degeneracy constraint.
    pub fn degeneracy_ok(&self, c: &Syndrome) -> bool {
        self.zero_syndrome_errors
            .iter()
            .all(|z| z.exponents.dot(c) == 0)
    }

    /// Distinct exponent vectors of the zero-syndrome errors.
    pub fn degeneracy_constraints(&self) -> Vec<ZdVector> {
        let mut seen = HashSet::new();
        self.zero_syndrome_errors
            .iter()
            .filter(|z| seen.insert(z.exponents.clone()))
            .map(|z| z.exponents.clone())
            .collect()
    }
}

/// Sweeps every error of weight `1..δ`.
pub fn detection_set(spec: &StabilizerSpec, delta: usize, limits: &Limits) -> Result<DetectionSet> {
    let max_w = delta.saturating_sub(1);
    check_limit(
        "error enumeration",
        error_count(spec.d(), spec.n(), max_w),
        limits.errors as u128,
    )?;
    let solver = spec.exponent_solver();
    let mut syndromes = HashMap::new();
    let mut zero = Vec::new();
    for e in enumerate_errors(spec.d(), spec.n(), max_w) {
        let s = classical_rep_unchecked(spec, &e);
        if s.is_zero() {
            let exponents = solver.solve(&e).ok_or_else(|| {
                Error::Precondition(format!(
                    "{e} commutes with every generator but is not in the group, so the generators do not fix a unique state"
                ))
            })?;
            zero.push(ZeroSyndromeError { error: e, exponents });
        } else {
            syndromes.entry(s).or_insert(e);
        }
    }
    Ok(DetectionSet {
        delta,
        syndromes,
        zero_syndrome_errors: zero,
    })
}

#[derive(Clone, Debug)]
pub struct CwsCode {
    pub spec: StabilizerSpec,
    pub codewords: Vec<Syndrome>,
    pub delta: usize,
    pub canonical_rank: usize,
}

impl CwsCode {
    /// Checks shapes, the zero first codeword and the canonical prefix.
    /// Duplicates and lattice membership are left to [`check_code`] and
    /// [`CwsCode::check_realizable`].
    pub fn new(
        spec: StabilizerSpec,
        codewords: Vec<Syndrome>,
        delta: usize,
        canonical_rank: usize,
    ) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::InvalidInput("a code needs at least one codeword".into()));
        }
        for (i, c) in codewords.iter().enumerate() {
            if c.len() != spec.m() || c.modulus() != spec.d() {
                return Err(Error::InvalidInput(format!(
                    "codeword {i} must have {} entries over Z_{}",
                    spec.m(),
                    spec.d()
                )));
            }
            if c.entries()[..canonical_rank.min(c.len())].iter().any(|&x| x != 0) {
                return Err(Error::InvalidInput(format!(
                    "codeword {i} is nonzero on the first {canonical_rank} coordinates"
                )));
            }
        }
        if !codewords[0].is_zero() {
            return Err(Error::InvalidInput("the first codeword must be zero".into()));
        }
        Ok(CwsCode {
            spec,
            codewords,
            delta,
            canonical_rank,
        })
    }

    pub fn k(&self) -> usize {
        self.codewords.len()
    }

    /// Fails with the first codeword that no Pauli operator realizes.
    pub fn check_realizable(&self) -> Result<()> {
        let solver = self.spec.word_operator_solver();
        for c in &self.codewords {
            solver.solve(c)?;
        }
        Ok(())
    }

    pub fn word_operators(&self) -> Result<Vec<PauliOperator>> {
        let solver = self.spec.word_operator_solver();
        self.codewords.iter().map(|c| solver.solve(c)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalViolation {
    pub i: usize,
    pub j: usize,
    /// `c_i − c_j`
    pub difference: Syndrome,
    pub error: PauliOperator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyViolation {
    pub codeword: usize,
    pub error: PauliOperator,
    pub exponents: ZdVector,
    /// `Σ_k a_k c_k mod d`
    pub phase: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub duplicates: Vec<(usize, usize)>,
    pub classical_violations: Vec<ClassicalViolation>,
    pub degeneracy_violations: Vec<DegeneracyViolation>,
}

/// Both detection conditions for a list of codewords. Every failing pair
/// and codeword is reported.
pub fn check_codewords(ds: &DetectionSet, codewords: &[Syndrome]) -> Verdict {
    let mut duplicates = Vec::new();
    let mut classical = Vec::new();
    for i in 0..codewords.len() {
        for j in i + 1..codewords.len() {
            let diff = codewords[i].sub(&codewords[j]);
            if diff.is_zero() {
                duplicates.push((i, j));
            } else if let Some(e) = ds.witness(&diff) {
                classical.push(ClassicalViolation {
                    i,
                    j,
                    difference: diff,
                    error: e.clone(),
                });
            }
        }
    }
    let mut degeneracy = Vec::new();
    for (idx, c) in codewords.iter().enumerate() {
        for z in &ds.zero_syndrome_errors {
            let phase = z.exponents.dot(c);
            if phase != 0 {
                degeneracy.push(DegeneracyViolation {
                    codeword: idx,
                    error: z.error.clone(),
                    exponents: z.exponents.clone(),
                    phase,
                });
            }
        }
    }
    Verdict {
        ok: duplicates.is_empty() && classical.is_empty() && degeneracy.is_empty(),
        duplicates,
        classical_violations: classical,
        degeneracy_violations: degeneracy,
    }
}

pub fn check_code(code: &CwsCode, delta: usize, limits: &Limits) -> Result<Verdict> {
    let ds = detection_set(&code.spec, delta, limits)?;
    Ok(check_codewords(&ds, &code.codewords))
}

/// Largest `δ` for which [`check_code`] passes, capped at `n + 1`.
/// Zero if two codewords coincide.
pub fn distance(code: &CwsCode, limits: &Limits) -> Result<usize> {
    let spec = &code.spec;
    let mut diffs: HashSet<Syndrome> = HashSet::new();
    for (i, a) in code.codewords.iter().enumerate() {
        for b in &code.codewords[i + 1..] {
            let diff = a.sub(b);
            if diff.is_zero() {
                return Ok(0);
            }
            diffs.insert(diff.neg());
            diffs.insert(diff);
        }
    }
    let solver = spec.exponent_solver();
    let mut budget = limits.errors as u128;
    for w in 1..=spec.n() {
        let layer = error_count(spec.d(), spec.n(), w) - error_count(spec.d(), spec.n(), w - 1);
        check_limit("error enumeration", layer, budget)?;
        budget -= layer;
        for e in enumerate_errors_of_weight(spec.d(), spec.n(), w) {
            let s = classical_rep_unchecked(spec, &e);
            if s.is_zero() {
                let a = solver.solve(&e).ok_or_else(|| {
                    Error::Precondition(format!("{e} commutes with the group but is not in it"))
                })?;
                if code.codewords.iter().any(|c| a.dot(c) != 0) {
                    return Ok(w);
                }
            } else if diffs.contains(&s) {
                return Ok(w);
            }
        }
    }
    Ok(spec.n() + 1)
}

/// Closed under entrywise addition mod `d`.
pub fn is_additive(codewords: &[Syndrome]) -> bool {
    let set: HashSet<&Syndrome> = codewords.iter().collect();
    codewords
        .iter()
        .all(|a| codewords.iter().all(|b| set.contains(&a.add(b))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: u32, n: usize, s: &str) -> PauliOperator {
        PauliOperator::parse_literal(d, n, s).unwrap()
    }

    fn v(d: u32, e: &[u32]) -> ZdVector {
        ZdVector::new(d, e.to_vec()).unwrap()
    }

    fn ring(d: u32, n: usize) -> StabilizerSpec {
        let gens: Vec<PauliOperator> = (0..n)
            .map(|i| lit(d, n, &format!("Z{} X{} Z{}", (i + n - 1) % n, i, (i + 1) % n)))
            .collect();
        StabilizerSpec::from_generators(d, n, &gens).unwrap()
    }

    fn example2() -> StabilizerSpec {
        let g: Vec<_> = ["Z0 X1^2 X2^2", "X0^2 Z1", "X0^2 Z2"]
            .iter()
            .map(|s| lit(4, 3, s))
            .collect();
        StabilizerSpec::from_generators(4, 3, &g).unwrap()
    }

    #[test]
    fn identity_has_zero_syndrome() {
        let s = ring(3, 7);
        assert!(classical_rep(&s, &PauliOperator::identity(3, 7)).unwrap().is_zero());
    }

    #[test]
    fn example_syndromes() {
        assert_eq!(
            classical_rep(&example2(), &lit(4, 3, "Z0")).unwrap(),
            v(4, &[0, 2, 2])
        );
        assert_eq!(
            classical_rep(&ring(3, 7), &lit(3, 7, "Z1 Z5 X1^2 X5^2")).unwrap(),
            v(3, &[1, 1, 1, 0, 1, 1, 1])
        );
        // the "+" convention reaches the same vector with the other X power
        assert_eq!(
            classical_rep_plus(&ring(3, 7), &lit(3, 7, "Z1 Z5 X1 X5")).unwrap(),
            v(3, &[1, 1, 1, 0, 1, 1, 1])
        );
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            classical_rep(&ring(3, 7), &lit(3, 6, "Z0")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn detection_set_examples() {
        let lim = Limits::default();
        let ds = detection_set(&ring(3, 7), 1, &lim).unwrap();
        assert!(ds.syndromes.is_empty() && ds.zero_syndrome_errors.is_empty());

        let ds = detection_set(&ring(3, 7), 3, &lim).unwrap();
        assert!(ds.contains(&v(3, &[1, 1, 1, 0, 1, 1, 1])));
        assert!(ds.zero_syndrome_errors.is_empty());

        let ds = detection_set(&example2(), 2, &lim).unwrap();
        assert!(ds.contains(&v(4, &[0, 2, 2])));
        let zero: Vec<_> = ds.zero_syndrome_errors.iter().map(|z| z.error.to_string()).collect();
        assert_eq!(zero, vec!["Z0^2", "Z1^2", "Z2^2"]);
        assert_eq!(ds.zero_syndrome_errors[0].exponents, v(4, &[2, 0, 0]));
    }

    #[test]
    fn example1_code_and_failed_extensions() {
        let lim = Limits::default();
        let c1 = v(3, &[1, 1, 0, 0, 1, 0, 0]);
        let c2 = v(3, &[0, 0, 1, 0, 0, 1, 1]);
        let base = vec![ZdVector::zeros(3, 7), c1.clone(), c2.clone()];
        let code = CwsCode::new(ring(3, 7), base.clone(), 3, 0).unwrap();
        assert!(check_code(&code, 3, &lim).unwrap().ok);
        assert_eq!(distance(&code, &lim).unwrap(), 3);
        assert!(!is_additive(&base));

        for extra in [c1.add(&c2), c1.sub(&c2)] {
            let mut words = base.clone();
            words.push(extra);
            let code = CwsCode::new(ring(3, 7), words, 3, 0).unwrap();
            let verdict = check_code(&code, 3, &lim).unwrap();
            assert!(!verdict.ok);
            let w = verdict
                .classical_violations
                .iter()
                .find(|w| {
                    w.difference == v(3, &[1, 1, 1, 0, 1, 1, 1])
                        || w.difference == v(3, &[2, 2, 2, 0, 2, 2, 2])
                })
                .expect("weight-2 witness");
            assert_eq!(w.error.weight(), 2);
        }
    }

    #[test]
    fn duplicates_fail() {
        let code = CwsCode::new(ring(3, 7), vec![ZdVector::zeros(3, 7); 2], 1, 0).unwrap();
        let verdict = check_code(&code, 1, &Limits::default()).unwrap();
        assert!(!verdict.ok);
        assert_eq!(verdict.duplicates, vec![(0, 1)]);
        assert_eq!(distance(&code, &Limits::default()).unwrap(), 0);
    }

    #[test]
    fn stabilizer_state_distance() {
        let code = CwsCode::new(ring(3, 7), vec![ZdVector::zeros(3, 7)], 1, 0).unwrap();
        assert!(distance(&code, &Limits::default()).unwrap() >= 3);
    }

    #[test]
    fn example2_code_is_caught_by_squared_generators() {
        let lim = Limits::default();
        let code =
            CwsCode::new(example2(), vec![ZdVector::zeros(4, 3), v(4, &[0, 1, 1])], 2, 0).unwrap();
        let verdict = check_code(&code, 2, &lim).unwrap();
        assert!(verdict.classical_violations.is_empty());
        let errs: Vec<_> = verdict
            .degeneracy_violations
            .iter()
            .map(|x| (x.error.to_string(), x.phase))
            .collect();
        assert_eq!(errs, vec![("Z1^2".to_string(), 2), ("Z2^2".to_string(), 2)]);
        assert_eq!(distance(&code, &lim).unwrap(), 1);
    }

    #[test]
    fn additivity() {
        let c = v(4, &[0, 1, 1]);
        let cyc: Vec<_> = (0..4).map(|k| c.scale(k)).collect();
        assert!(is_additive(&cyc));
        assert!(is_additive(&[ZdVector::zeros(4, 3)]));
        assert!(!is_additive(&cyc[..2]));
    }

    #[test]
    fn constructor_rejects_bad_first_codeword() {
        assert!(CwsCode::new(example2(), vec![v(4, &[0, 1, 1])], 2, 0).is_err());
        assert!(CwsCode::new(example2(), vec![ZdVector::zeros(4, 3), v(4, &[1, 0, 0])], 2, 1).is_err());
    }
}
