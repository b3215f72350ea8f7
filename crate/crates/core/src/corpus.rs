//! Seeded random stabilizer states for property tests and sweeps.
//!
//! Each spec starts as a product state, one block per qudit, either `{Z}`
//! or (composite `d` only) `{X^a, Z^b}` with `a·b = d`. Random symplectic
//! maps (Fourier, phase, CSUM, unit multipliers, generator row operations)
//! then scramble it, and generator phases are re-solved so the group holds
//! no nontrivial multiple of the identity.

use std::collections::HashSet;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cws::{classical_rep_unchecked, Syndrome};
use crate::error::Result;
use crate::limits::Limits;
use crate::pauli::PauliOperator;
use crate::stabilizer::StabilizerSpec;
use crate::zd::{ModSolver, ZdMatrix, ZdVector};

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub dims: Vec<u32>,
    pub min_n: usize,
    pub max_n: usize,
    /// Probability of a two-generator block on a qudit when `d` is composite.
    pub composite_block_rate: f64,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            dims: vec![2, 3, 4, 6],
            min_n: 1,
            max_n: 4,
            composite_block_rate: 0.3,
            seed: 0x5eed,
        }
    }
}

/// Exponent rows `(v, u)` of each generator.
type Rows = Vec<(Vec<u32>, Vec<u32>)>;

fn unit_pairs(d: u32) -> Vec<(u32, u32)> {
    (1..d)
        .filter(|k| k.gcd(&d) == 1)
        .map(|k| (k, (1..d).find(|j| k * j % d == 1).expect("unit")))
        .collect()
}

fn product_blocks<R: Rng>(rng: &mut R, d: u32, n: usize, rate: f64) -> Rows {
    let splits: Vec<(u32, u32)> = (2..d)
        .filter(|a| d.is_multiple_of(*a))
        .map(|a| (a, d / a))
        .collect();
    let mut rows = Vec::new();
    for l in 0..n {
        if !splits.is_empty() && rng.gen_bool(rate) {
            let (a, b) = *splits.choose(rng).expect("nonempty");
            let mut u = vec![0; n];
            u[l] = a;
            rows.push((vec![0; n], u));
            let mut v = vec![0; n];
            v[l] = b;
            rows.push((v, vec![0; n]));
        } else {
            let mut v = vec![0; n];
            v[l] = 1;
            rows.push((v, vec![0; n]));
        }
    }
    rows
}

fn scramble<R: Rng>(rng: &mut R, d: u32, n: usize, rows: &mut Rows) {
    let units = unit_pairs(d);
    let steps = 3 * n * n + 2;
    for _ in 0..steps {
        match rng.gen_range(0..5) {
            0 => {
                // Fourier: (v, u) -> (-u, v)
                let l = rng.gen_range(0..n);
                for (v, u) in rows.iter_mut() {
                    let (a, b) = (v[l], u[l]);
                    v[l] = (d - b) % d;
                    u[l] = a;
                }
            }
            1 => {
                // phase gate: v += u
                let l = rng.gen_range(0..n);
                for (v, u) in rows.iter_mut() {
                    v[l] = (v[l] + u[l]) % d;
                }
            }
            2 if n > 1 => {
                // CSUM c -> t: u_t += u_c, v_c -= v_t
                let c = rng.gen_range(0..n);
                let mut t = rng.gen_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                for (v, u) in rows.iter_mut() {
                    u[t] = (u[t] + u[c]) % d;
                    v[c] = (v[c] + d - v[t]) % d;
                }
            }
            3 => {
                // multiplier: v -> k^{-1} v, u -> k u
                let l = rng.gen_range(0..n);
                let (k, kinv) = *units.choose(rng).expect("1 is a unit");
                for (v, u) in rows.iter_mut() {
                    v[l] = v[l] * kinv % d;
                    u[l] = u[l] * k % d;
                }
            }
            _ if rows.len() > 1 => {
                // g_i <- g_i g_j^k
                let i = rng.gen_range(0..rows.len());
                let mut j = rng.gen_range(0..rows.len() - 1);
                if j >= i {
                    j += 1;
                }
                let k = rng.gen_range(1..d);
                let (vj, uj) = rows[j].clone();
                let (vi, ui) = &mut rows[i];
                for l in 0..n {
                    vi[l] = (vi[l] + k * vj[l]) % d;
                    ui[l] = (ui[l] + k * uj[l]) % d;
                }
            }
            _ => {}
        }
    }
    rows.shuffle(rng);
}

/// Generator phases making every identity product phase-free, if any exist.
fn solve_phases(d: u32, n: usize, rows: &Rows, limits: &Limits) -> Result<Option<Vec<u32>>> {
    let gens: Vec<PauliOperator> = rows
        .iter()
        .map(|(v, u)| PauliOperator::from_parts(d, 0, v.clone(), u.clone()))
        .collect();
    if gens.iter().any(|g| g.pow(d as u64).phase() != 0) {
        return Ok(None);
    }
    let spec = StabilizerSpec::from_generators(d, n, &gens)?;
    let m = gens.len();
    // a spanning set of the relation module with its phases
    let mut relations: Vec<(Vec<u32>, u32)> = Vec::new();
    let mut span: HashSet<Vec<u32>> = HashSet::from([vec![0; m]]);
    spec.for_each_element(limits, |a, op| {
        if op.is_identity_up_to_phase() && !span.contains(a) {
            relations.push((a.to_vec(), op.phase()));
            let mut grown = span.clone();
            for base in &span {
                let mut cur = base.clone();
                for _ in 1..d {
                    for k in 0..m {
                        cur[k] = (cur[k] + a[k]) % d;
                    }
                    grown.insert(cur.clone());
                }
            }
            span = grown;
        }
    })?;
    if relations.is_empty() {
        return Ok(Some(vec![0; m]));
    }
    let a: Vec<Vec<i64>> = relations
        .iter()
        .map(|(r, _)| r.iter().map(|&x| x as i64).collect())
        .collect();
    let matrix = ZdMatrix::from_rows(d, m, &a)?;
    let rhs = ZdVector::from_ints(d, relations.iter().map(|(_, p)| -(*p as i64)));
    Ok(ModSolver::new(&matrix).solve(&rhs).map(ZdVector::into_entries))
}

/// A random valid spec on `n` qudits of dimension `d`.
pub fn random_spec<R: Rng>(rng: &mut R, d: u32, n: usize, composite_rate: f64, limits: &Limits) -> Result<StabilizerSpec> {
    loop {
        let mut rows = product_blocks(rng, d, n, composite_rate);
        scramble(rng, d, n, &mut rows);
        let Some(phases) = solve_phases(d, n, &rows, limits)? else {
            continue;
        };
        let gens: Vec<PauliOperator> = rows
            .iter()
            .zip(phases)
            .map(|((v, u), p)| PauliOperator::from_parts(d, p, v.clone(), u.clone()))
            .collect();
        let spec = StabilizerSpec::from_generators(d, n, &gens)?;
        if spec.validate(limits)?.is_valid() {
            return Ok(spec);
        }
    }
}

/// `count` specs, dimensions cycling through `config.dims`.
pub fn random_specs(config: &CorpusConfig, count: usize, limits: &Limits) -> Result<Vec<StabilizerSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..count)
        .map(|i| {
            let d = config.dims[i % config.dims.len()];
            let n = rng.gen_range(config.min_n..=config.max_n);
            random_spec(&mut rng, d, n, config.composite_block_rate, limits)
        })
        .collect()
}

/// Syndrome of a uniformly random Pauli operator, hence a uniformly random
/// lattice element.
pub fn random_lattice_element<R: Rng>(rng: &mut R, spec: &StabilizerSpec) -> Syndrome {
    let d = spec.d();
    let v = (0..spec.n()).map(|_| rng.gen_range(0..d)).collect();
    let u = (0..spec.n()).map(|_| rng.gen_range(0..d)).collect();
    classical_rep_unchecked(spec, &PauliOperator::from_parts(d, 0, v, u))
}

/// A random Pauli operator with weight at most `max_weight`.
pub fn random_error<R: Rng>(rng: &mut R, d: u32, n: usize, max_weight: usize) -> PauliOperator {
    let w = rng.gen_range(0..=max_weight.min(n));
    let mut sites: Vec<usize> = (0..n).collect();
    sites.shuffle(rng);
    let mut v = vec![0; n];
    let mut u = vec![0; n];
    for &l in &sites[..w] {
        let p = rng.gen_range(1..d * d);
        v[l] = p / d;
        u[l] = p % d;
    }
    PauliOperator::from_parts(d, 0, v, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_specs_are_valid_and_reproducible() {
        let lim = Limits::default();
        let cfg = CorpusConfig::default();
        let a = random_specs(&cfg, 12, &lim).unwrap();
        let b = random_specs(&cfg, 12, &lim).unwrap();
        assert_eq!(a, b);
        for s in &a {
            assert!(s.validate(&lim).unwrap().is_valid());
        }
    }

    #[test]
    fn composite_blocks_appear() {
        let lim = Limits::default();
        let cfg = CorpusConfig {
            dims: vec![4],
            composite_block_rate: 1.0,
            min_n: 2,
            max_n: 2,
            ..CorpusConfig::default()
        };
        let specs = random_specs(&cfg, 3, &lim).unwrap();
        assert!(specs.iter().all(|s| s.m() == 4));
    }
}
