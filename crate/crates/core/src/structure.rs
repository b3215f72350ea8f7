//! Additive structure of CWS codewords: closure under scalars and under a
//! new generator, the GCD witness scan for composite `d`, and harnesses that
//! exercise the prime-dimension extension properties on random instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clique::{build_clique_graph, max_clique, Budget, CliqueGraph};
use crate::corpus::random_spec;
use crate::cws::{check_codewords, classical_rep_unchecked, detection_set, is_additive, CwsCode, DetectionSet, Syndrome, Verdict};
use crate::error::{check_limit, Error, Result};
use crate::limits::Limits;
use crate::pauli::{enumerate_errors, error_count, PauliOperator};
use crate::stabilizer::StabilizerSpec;
use crate::zd::{gcd_with, ZdMatrix, ZdVector};

/// An element `q·c_new − c_j` of an extension that lands in the detection set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub q: u32,
    pub j: usize,
    pub difference: Syndrome,
    pub error: PauliOperator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionVerdict {
    pub ok: bool,
    /// The closed codeword set, zero first.
    pub codewords: Vec<Syndrome>,
    pub witness: Option<ExtensionWitness>,
    pub verdict: Verdict,
}

impl ExtensionVerdict {
    pub fn into_code(self, spec: &StabilizerSpec, delta: usize) -> Result<CwsCode> {
        CwsCode::new(spec.clone(), self.codewords, delta, 0)
    }
}

/// Checks the group `{q·c_new − c_j}`. `labels[i] = (q, j)` names element `i`.
fn check_group(ds: &DetectionSet, elements: Vec<Syndrome>, labels: Vec<(u32, usize)>) -> ExtensionVerdict {
    // every difference of two group elements is itself an element
    let witness = elements
        .iter()
        .zip(&labels)
        .filter(|(e, _)| !e.is_zero())
        .find_map(|(e, &(q, j))| {
            ds.witness(e).map(|err| ExtensionWitness {
                q,
                j,
                difference: e.clone(),
                error: err.clone(),
            })
        });
    let verdict = check_codewords(ds, &elements);
    ExtensionVerdict {
        ok: verdict.ok,
        codewords: elements,
        witness,
        verdict,
    }
}

/// `{0, c, 2c, …}`: the cyclic group generated by `c`.
pub fn scalar_closure(spec: &StabilizerSpec, c: &Syndrome, delta: usize, limits: &Limits) -> Result<ExtensionVerdict> {
    let ds = detection_set(spec, delta, limits)?;
    Ok(scalar_closure_with(&ds, c))
}

pub fn scalar_closure_with(ds: &DetectionSet, c: &Syndrome) -> ExtensionVerdict {
    let mut elements = vec![ZdVector::zeros(c.modulus(), c.len())];
    let mut labels = vec![(0, 0)];
    for q in 1..c.modulus() {
        let e = c.scale(q as u64);
        if e.is_zero() {
            break;
        }
        elements.push(e);
        labels.push((q, 0));
    }
    check_group(ds, elements, labels)
}

/// `{q·c_new − c_j : q ∈ Z_d, c_j ∈ linear}` for an additive `linear`
/// (zero first) not containing `c_new`.
pub fn group_extension(
    spec: &StabilizerSpec,
    linear: &[Syndrome],
    c_new: &Syndrome,
    delta: usize,
    limits: &Limits,
) -> Result<ExtensionVerdict> {
    let ds = detection_set(spec, delta, limits)?;
    group_extension_with(&ds, linear, c_new)
}

pub fn group_extension_with(ds: &DetectionSet, linear: &[Syndrome], c_new: &Syndrome) -> Result<ExtensionVerdict> {
    if linear.is_empty() || !linear[0].is_zero() {
        return Err(Error::Precondition("linear code must start with the zero codeword".into()));
    }
    if !is_additive(linear) {
        return Err(Error::Precondition("linear code is not closed under addition".into()));
    }
    if linear.contains(c_new) {
        return Err(Error::Precondition("new codeword already belongs to the code".into()));
    }
    let mut seen = BTreeSet::new();
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for q in 0..c_new.modulus() {
        let base = c_new.scale(q as u64);
        for (j, cj) in linear.iter().enumerate() {
            let e = base.sub(cj);
            if seen.insert(e.clone()) {
                elements.push(e);
                labels.push((q, j));
            }
        }
    }
    Ok(check_group(ds, elements, labels))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcdWitness {
    pub error: PauliOperator,
    pub syndrome: Syndrome,
    /// `gcd(syndrome, d)`
    pub m_value: u64,
    /// `gcd(v, u, d)` over all exponents of the error
    pub vu_gcd: u64,
}

/// Errors of weight `1..δ` whose nonzero syndrome shares a factor
/// `m > 1` with `d` that does not divide the error's own exponent gcd.
pub fn gcd_pattern_scan(spec: &StabilizerSpec, delta: usize, limits: &Limits) -> Result<Vec<GcdWitness>> {
    let d = spec.d() as u64;
    let max_w = delta.saturating_sub(1);
    check_limit("error enumeration", error_count(spec.d(), spec.n(), max_w), limits.errors as u128)?;
    let mut out = Vec::new();
    for e in enumerate_errors(spec.d(), spec.n(), max_w) {
        let s = classical_rep_unchecked(spec, &e);
        if s.is_zero() {
            continue;
        }
        let m = gcd_with(&s, d);
        if m <= 1 {
            continue;
        }
        let vu = gcd_with(e.x_exp(), gcd_with(e.z_exp(), d));
        if !vu.is_multiple_of(m) {
            out.push(GcdWitness {
                error: e,
                syndrome: s,
                m_value: m,
                vu_gcd: vu,
            });
        }
    }
    Ok(out)
}

/// Ring of `Z_{i−1} X_i Z_{i+1}` generators, indices mod `n`.
pub fn ring_spec(d: u32, n: usize) -> StabilizerSpec {
    let mut x = ZdMatrix::zeros(d, n, n);
    let mut z = ZdMatrix::zeros(d, n, n);
    for i in 0..n {
        x.set(i, i, 1);
        z.set(i, (i + n - 1) % n, 1);
        z.set(i, (i + 1) % n, 1);
    }
    StabilizerSpec::new(d, n, x, z, None).expect("well-formed ring")
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub spec: StabilizerSpec,
    pub delta: usize,
    /// Zero first.
    pub codewords: Vec<Syndrome>,
}

impl Fixture {
    pub fn code(&self) -> CwsCode {
        CwsCode::new(self.spec.clone(), self.codewords.clone(), self.delta, 0).expect("fixture code")
    }
}

/// The seven-qutrit ring with two codewords, and the `d = 4` three-qudit
/// state with `(0,1,1)`.
pub fn example_fixtures() -> (Fixture, Fixture) {
    let ring = Fixture {
        name: "ring7",
        spec: ring_spec(3, 7),
        delta: 3,
        codewords: vec![
            ZdVector::zeros(3, 7),
            ZdVector::from_ints(3, [1, 1, 0, 0, 1, 0, 0]),
            ZdVector::from_ints(3, [0, 0, 1, 0, 0, 1, 1]),
        ],
    };
    let x = ZdMatrix::from_rows(4, 3, &[vec![0, 2, 2], vec![2, 0, 0], vec![2, 0, 0]]).expect("rows");
    let d4 = Fixture {
        name: "d4",
        spec: StabilizerSpec::new(4, 3, x, ZdMatrix::identity(4, 3), None).expect("well-formed"),
        delta: 2,
        codewords: vec![ZdVector::zeros(4, 3), ZdVector::from_ints(4, [0, 1, 1])],
    };
    (ring, d4)
}

/// Largest additive codeword sets inside the zero-anchored clique graph and
/// whether any of them extends by one more compatible codeword.
#[derive(Clone, Debug, Serialize)]
pub struct AdditiveExtensionReport {
    /// Size of the largest additive code.
    pub additive_k: usize,
    pub optimal_codes: usize,
    /// `(code, extra codeword)` making a larger valid code.
    pub extension: Option<(Vec<Syndrome>, Syndrome)>,
    pub clique_k: usize,
}

/// All subgroups of the vertex set whose members are pairwise compatible,
/// found by closing under one new generator at a time.
fn additive_cliques(graph: &CliqueGraph) -> Vec<Vec<usize>> {
    let zero_nb: Vec<usize> = graph.neighbors(0).iter().collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![vec![0usize]];
    while let Some(group) = stack.pop() {
        if !found.insert(group.clone()) {
            continue;
        }
        for &g in &zero_nb {
            if group.binary_search(&g).is_ok() {
                continue;
            }
            // closure of group ∪ {g}
            let mut members: BTreeSet<usize> = group.iter().copied().collect();
            let mut ok = true;
            let c = &graph.vertices[g];
            let mut q = c.clone();
            while !q.is_zero() && ok {
                for &h in &group {
                    match graph.index_of(&q.add(&graph.vertices[h])) {
                        Some(i) if i == 0 || graph.has_edge(0, i) => {
                            members.insert(i);
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                q = q.add(c);
            }
            if ok {
                stack.push(members.into_iter().collect());
            }
        }
    }
    found.into_iter().collect()
}

/// Whether some largest additive code on `spec` is a strict subset of a
/// larger code at the same distance.
pub fn additive_extension_check(spec: &StabilizerSpec, delta: usize, limits: &Limits) -> Result<AdditiveExtensionReport> {
    let graph = build_clique_graph(spec, delta, limits)?;
    let groups = additive_cliques(&graph);
    let best = groups.iter().map(Vec::len).max().unwrap_or(1);
    let optimal: Vec<&Vec<usize>> = groups.iter().filter(|g| g.len() == best).collect();
    let mut extension = None;
    'outer: for g in &optimal {
        for v in 0..graph.len() {
            if g.binary_search(&v).is_err() && g.iter().all(|&h| graph.has_edge(h, v)) {
                extension = Some((
                    g.iter().map(|&i| graph.vertices[i].clone()).collect(),
                    graph.vertices[v].clone(),
                ));
                break 'outer;
            }
        }
    }
    let clique_k = max_clique(&graph, &Budget::default()).size();
    Ok(AdditiveExtensionReport {
        additive_k: best,
        optimal_codes: optimal.len(),
        extension,
        clique_k,
    })
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub dims: Vec<u32>,
    pub min_n: usize,
    pub max_n: usize,
    pub deltas: Vec<usize>,
    /// Instances with a usable code to collect.
    pub instances: usize,
    /// Give up after this many specs.
    pub max_specs: usize,
    pub composite_block_rate: f64,
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            dims: vec![3, 5],
            min_n: 2,
            max_n: 5,
            deltas: vec![2, 3],
            instances: 50,
            max_specs: 2000,
            composite_block_rate: 0.0,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TrialReport {
    pub instances: usize,
    pub successes: usize,
    pub specs_tried: usize,
    pub failures: Vec<String>,
}

impl TrialReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.successes == self.instances
    }
}

struct Instance {
    spec: StabilizerSpec,
    delta: usize,
    graph: CliqueGraph,
}

/// Random specs with their clique graphs, in a reproducible order.
fn instances<'a>(config: &'a TrialConfig, limits: &'a Limits) -> impl Iterator<Item = Result<Instance>> + 'a {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.max_specs).map(move |i| {
        let d = config.dims[i % config.dims.len()];
        let n = rand::Rng::gen_range(&mut rng, config.min_n..=config.max_n);
        let delta = *config.deltas.choose(&mut rng).expect("deltas");
        let spec = random_spec(&mut rng, d, n, config.composite_block_rate, limits)?;
        let graph = build_clique_graph(&spec, delta, limits)?;
        Ok(Instance { spec, delta, graph })
    })
}

/// Scalar closure of `{0, c}` for a random neighbor `c` of zero.
pub fn scalar_closure_trials(config: &TrialConfig, limits: &Limits) -> Result<TrialReport> {
    let mut report = TrialReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x51);
    for inst in instances(config, limits) {
        let inst = inst?;
        report.specs_tried += 1;
        let nb: Vec<usize> = inst.graph.neighbors(0).iter().collect();
        let Some(&c) = nb.choose(&mut rng) else { continue };
        let ds = inst.graph.detection.as_ref().expect("stabilizer graph");
        let ext = scalar_closure_with(ds, &inst.graph.vertices[c]);
        report.instances += 1;
        if ext.ok {
            report.successes += 1;
        } else {
            report.failures.push(format!(
                "d={} n={} delta={} c=({}): {:?}",
                inst.spec.d(),
                inst.spec.n(),
                inst.delta,
                inst.graph.vertices[c],
                ext.witness
            ));
        }
        if report.instances >= config.instances {
            break;
        }
    }
    Ok(report)
}

/// Group extension of a random additive code `⟨c⟩` by a random codeword
/// compatible with all of it.
pub fn group_extension_trials(config: &TrialConfig, limits: &Limits) -> Result<TrialReport> {
    let mut report = TrialReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6e);
    for inst in instances(config, limits) {
        let inst = inst?;
        report.specs_tried += 1;
        let g = &inst.graph;
        let ds = g.detection.as_ref().expect("stabilizer graph");
        let nb: Vec<usize> = g.neighbors(0).iter().collect();
        let Some(&c) = nb.choose(&mut rng) else { continue };
        let base = scalar_closure_with(ds, &g.vertices[c]);
        if !base.ok {
            report.instances += 1;
            report.failures.push(format!("base closure failed: {:?}", base.witness));
            continue;
        }
        let members: Vec<usize> = base
            .codewords
            .iter()
            .map(|w| g.index_of(w).expect("closure stays in the lattice"))
            .collect();
        let extra: Vec<usize> = (0..g.len())
            .filter(|v| !members.contains(v) && members.iter().all(|&h| g.has_edge(h, *v)))
            .collect();
        let Some(&e) = extra.choose(&mut rng) else { continue };
        let ext = group_extension_with(ds, &base.codewords, &g.vertices[e])?;
        report.instances += 1;
        if ext.ok {
            report.successes += 1;
        } else {
            report.failures.push(format!(
                "d={} n={} delta={} new=({}): {:?}",
                inst.spec.d(),
                inst.spec.n(),
                inst.delta,
                g.vertices[e],
                ext.witness
            ));
        }
        if report.instances >= config.instances {
            break;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct BinarySuiteReport {
    /// `{0, c}` closed under addition mod 2.
    pub two_codeword_closure: TrialReport,
    /// Valid `{0, c1, c2}` extends to `{0, c1, c2, c1 + c2}`.
    pub three_codeword_extension: TrialReport,
    /// Largest additive codes never extend by one codeword.
    pub additive_optimality: TrialReport,
}

/// The qubit statements on random `d = 2` instances.
pub fn binary_theorem_suite(config: &TrialConfig, limits: &Limits) -> Result<BinarySuiteReport> {
    let config = TrialConfig {
        dims: vec![2],
        ..config.clone()
    };
    let mut closure = scalar_closure_trials(&config, limits)?;
    for w in closure.failures.iter_mut() {
        w.insert_str(0, "binary ");
    }
    let extension = group_extension_trials(&config, limits)?;

    let mut optimality = TrialReport::default();
    let small = TrialConfig {
        max_n: config.max_n.min(5),
        ..config.clone()
    };
    for inst in instances(&small, limits) {
        let inst = inst?;
        optimality.specs_tried += 1;
        let r = additive_extension_check(&inst.spec, inst.delta, limits)?;
        optimality.instances += 1;
        match r.extension {
            None => optimality.successes += 1,
            Some((code, v)) => optimality.failures.push(format!(
                "n={} delta={} additive K={} extends by ({v}) from {:?}",
                inst.spec.n(),
                inst.delta,
                r.additive_k,
                code.iter().map(ToString::to_string).collect::<Vec<_>>()
            )),
        }
        if optimality.instances >= config.instances {
            break;
        }
    }
    Ok(BinarySuiteReport {
        two_codeword_closure: closure,
        three_codeword_extension: extension,
        additive_optimality: optimality,
    })
}

pub fn is_prime(d: u32) -> bool {
    d >= 2 && (2..d).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

pub fn is_composite(d: u32) -> bool {
    d >= 4 && !is_prime(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: u32, n: usize, s: &str) -> PauliOperator {
        PauliOperator::parse_literal(d, n, s).unwrap()
    }

    #[test]
    fn fixtures_validate() {
        let lim = Limits::default();
        let (ring, d4) = example_fixtures();
        let r = ring.spec.validate(&lim).unwrap();
        assert!(r.is_valid());
        assert_eq!((ring.spec.n(), ring.spec.m()), (7, 7));
        let r = d4.spec.validate(&lim).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.group_order, 64);
    }

    #[test]
    fn d4_scalar_closure_fails_at_two() {
        let (_, d4) = example_fixtures();
        let v = scalar_closure(&d4.spec, &d4.codewords[1], 2, &Limits::default()).unwrap();
        assert!(!v.ok);
        let w = v.witness.unwrap();
        assert_eq!((w.q, w.j), (2, 0));
        assert_eq!(w.difference, ZdVector::from_ints(4, [0, 2, 2]));
        assert_eq!(w.error, lit(4, 3, "Z0"));
    }

    #[test]
    fn binary_closure_adds_nothing() {
        let s = ring_spec(2, 5);
        let c = ZdVector::from_ints(2, [1, 1, 1, 1, 1]);
        let v = scalar_closure(&s, &c, 1, &Limits::default()).unwrap();
        assert_eq!(v.codewords.len(), 2);
        assert!(v.ok);
    }

    #[test]
    fn ring7_extension_by_c2_fails() {
        let (ring, _) = example_fixtures();
        let c1 = &ring.codewords[1];
        let linear = vec![ZdVector::zeros(3, 7), c1.clone(), c1.scale(2)];
        let lim = Limits::default();
        // {0, c1, 2c1, c2} is itself not a code, so the failure is allowed
        let mut with_c2 = linear.clone();
        with_c2.push(ring.codewords[2].clone());
        let ds = detection_set(&ring.spec, 3, &lim).unwrap();
        assert!(!check_codewords(&ds, &with_c2).ok);
        let v = group_extension(&ring.spec, &linear, &ring.codewords[2], 3, &lim).unwrap();
        assert!(!v.ok);
        assert_eq!(v.codewords.len(), 9);
    }

    #[test]
    fn extension_preconditions() {
        let (ring, _) = example_fixtures();
        let lim = Limits::default();
        let c1 = ring.codewords[1].clone();
        let linear = vec![ZdVector::zeros(3, 7), c1.clone(), c1.scale(2)];
        assert!(matches!(
            group_extension(&ring.spec, &linear, &c1, 3, &lim),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            group_extension(&ring.spec, &linear[..2], &ring.codewords[2], 3, &lim),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gcd_scan_examples() {
        let lim = Limits::default();
        let (ring, d4) = example_fixtures();
        assert!(gcd_pattern_scan(&ring.spec, 3, &lim).unwrap().is_empty());
        let w = gcd_pattern_scan(&d4.spec, 2, &lim).unwrap();
        let z0 = w.iter().find(|w| w.error == lit(4, 3, "Z0")).unwrap();
        assert_eq!(z0.syndrome, ZdVector::from_ints(4, [0, 2, 2]));
        assert_eq!((z0.m_value, z0.vu_gcd), (2, 1));
    }

    #[test]
    fn primality() {
        let p: Vec<u32> = (1..14).filter(|&d| is_prime(d)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13]);
        assert!(is_composite(4) && is_composite(6) && !is_composite(5));
    }

    #[test]
    fn five_qubit_ring_pair_is_not_extendable() {
        let r = additive_extension_check(&ring_spec(2, 5), 3, &Limits::default()).unwrap();
        assert_eq!(r.additive_k, 2);
        assert_eq!(r.clique_k, 2);
        assert!(r.extension.is_none());
    }
}
