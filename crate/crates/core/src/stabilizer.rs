//! Word-stabilizer groups given by an `[x | z]` exponent table.
//!
//! Row `k` of `x_mat` / `z_mat` holds the X / Z exponents of generator `g_k`,
//! and `phases[k]` its `q_d` phase exponent, so that
//! `g_k = q_d^{phases[k]} Z^{z_mat[k]} X^{x_mat[k]}`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{check_limit, Error, Result};
use crate::limits::{pow_sat, Limits};
use crate::pauli::PauliOperator;
use crate::zd::{enumerate_module, smith_normal_form, IntMatrix, ModSolver, ZdMatrix, ZdVector};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StabilizerSpec {
    d: u32,
    n: usize,
    x_mat: ZdMatrix,
    z_mat: ZdMatrix,
    phases: ZdVector,
}

/// Outcome of exhaustive validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub commuting: bool,
    /// First pair of generators that fails to commute.
    pub noncommuting_pair: Option<(usize, usize)>,
    /// Number of distinct operators (up to phase) among all generator products.
    pub group_order: u64,
    /// `d^n`
    pub expected_order: u128,
    /// No product of generators is a nontrivial phase times the identity.
    pub phase_clean: bool,
    /// Exponent vector of a product equal to `q_d^k·I`, `k ≠ 0`.
    pub phase_witness: Option<Vec<u32>>,
    /// `n ≤ m ≤ 2n`
    pub m_range_ok: bool,
}

impl ValidationReport {
    /// Commuting, phase-clean and of order `d^n`: the generators define a
    /// stabilizer state.
    pub fn is_stabilizer_group(&self) -> bool {
        self.commuting && self.phase_clean && self.group_order as u128 == self.expected_order
    }

    pub fn is_valid(&self) -> bool {
        self.is_stabilizer_group() && self.m_range_ok
    }
}

/// A group element together with the generator exponents producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub exponents: ZdVector,
    pub resolved: PauliOperator,
}

/// A generating set whose first `canonical_rank` generators generate the
/// subgroup spanned by all low-weight stabilizer elements.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub spec: StabilizerSpec,
    pub canonical_rank: usize,
    /// `m × m'`; codewords map as `c' = c·transform`.
    pub transform: ZdMatrix,
    /// `m' × m`; `c = c'·inverse` for every `c'` in the image of `transform`.
    pub inverse: ZdMatrix,
}

impl CanonicalForm {
    pub fn to_canonical(&self, c: &ZdVector) -> ZdVector {
        self.transform.vec_mul(c)
    }

    pub fn from_canonical(&self, c: &ZdVector) -> ZdVector {
        self.inverse.vec_mul(c)
    }
}

impl StabilizerSpec {
    /// `x_mat` and `z_mat` are `m × n`; `phases` defaults to all zero.
    pub fn new(
        d: u32,
        n: usize,
        x_mat: ZdMatrix,
        z_mat: ZdMatrix,
        phases: Option<ZdVector>,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("dimension d = {d} < 2")));
        }
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let m = x_mat.rows();
        for (name, mat) in [("x", &x_mat), ("z", &z_mat)] {
            if mat.modulus() != d || mat.rows() != m || mat.cols() != n {
                return Err(Error::InvalidInput(format!(
                    "{name} matrix must be {m}×{n} over Z_{d}"
                )));
            }
        }
        let phases = phases.unwrap_or_else(|| ZdVector::zeros(d, m));
        if phases.len() != m || phases.modulus() != d {
            return Err(Error::InvalidInput(format!("phases must have {m} entries")));
        }
        Ok(StabilizerSpec {
            d,
            n,
            x_mat,
            z_mat,
            phases,
        })
    }

    pub fn from_generators(d: u32, n: usize, generators: &[PauliOperator]) -> Result<Self> {
        let m = generators.len();
        let mut x_mat = ZdMatrix::zeros(d, m, n);
        let mut z_mat = ZdMatrix::zeros(d, m, n);
        let mut phases = Vec::with_capacity(m);
        for (k, g) in generators.iter().enumerate() {
            if g.d() != d || g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected_d: d,
                    expected_n: n,
                    found_d: g.d(),
                    found_n: g.n(),
                });
            }
            for l in 0..n {
                x_mat.set(k, l, g.x_exp().get(l));
                z_mat.set(k, l, g.z_exp().get(l));
            }
            phases.push(g.phase());
        }
        StabilizerSpec::new(d, n, x_mat, z_mat, Some(ZdVector::from_raw(d, phases)))
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.x_mat.rows()
    }

    pub fn x_mat(&self) -> &ZdMatrix {
        &self.x_mat
    }

    pub fn z_mat(&self) -> &ZdMatrix {
        &self.z_mat
    }

    pub fn phases(&self) -> &ZdVector {
        &self.phases
    }

    pub fn generator(&self, k: usize) -> PauliOperator {
        PauliOperator::from_parts(
            self.d,
            self.phases.get(k),
            self.z_mat.row(k).to_vec(),
            self.x_mat.row(k).to_vec(),
        )
    }

    pub fn generators(&self) -> Vec<PauliOperator> {
        (0..self.m()).map(|k| self.generator(k)).collect()
    }

    /// Phase-tracked product `Π_k g_k^{a_k}`, `k` ascending.
    pub fn element(&self, exponents: &ZdVector) -> PauliOperator {
        assert_eq!(exponents.len(), self.m());
        let mut acc = PauliOperator::identity(self.d, self.n);
        for k in 0..self.m() {
            let a = exponents.get(k);
            if a != 0 {
                acc = acc.mul_unchecked(&self.generator(k).pow(a as u64));
            }
        }
        acc
    }

    /// Calls `f(a, Π_k g_k^{a_k})` for every `a ∈ Z_d^m` in lexicographic order.
    pub fn for_each_element<F>(&self, limits: &Limits, mut f: F) -> Result<()>
    where
        F: FnMut(&[u32], &PauliOperator),
    {
        let m = self.m();
        let d = self.d;
        check_limit(
            "group enumeration d^m",
            pow_sat(d as u64, m),
            limits.group_elements as u128,
        )?;
        let powers: Vec<Vec<PauliOperator>> = (0..m)
            .map(|k| {
                let g = self.generator(k);
                let mut row = Vec::with_capacity(d as usize);
                let mut acc = PauliOperator::identity(d, self.n);
                for _ in 0..d {
                    row.push(acc.clone());
                    acc = acc.mul_unchecked(&g);
                }
                row
            })
            .collect();
        let mut a = vec![0u32; m];
        let mut prefix = Vec::with_capacity(m + 1);
        prefix.push(PauliOperator::identity(d, self.n));
        for k in 0..m {
            let next = prefix[k].mul_unchecked(&powers[k][0]);
            prefix.push(next);
        }
        loop {
            f(&a, &prefix[m]);
            let mut k = m;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                a[k] += 1;
                if a[k] < d {
                    break;
                }
                a[k] = 0;
            }
            for j in k..m {
                prefix[j + 1] = prefix[j].mul_unchecked(&powers[j][a[j] as usize]);
            }
        }
    }

    /// Exhaustive check of the stabilizer-state conditions.
    pub fn validate(&self, limits: &Limits) -> Result<ValidationReport> {
        let m = self.m();
        let gens = self.generators();
        let mut noncommuting_pair = None;
        'pairs: for i in 0..m {
            for j in i + 1..m {
                if gens[i].symplectic_unchecked(&gens[j]) != 0 {
                    noncommuting_pair = Some((i, j));
                    break 'pairs;
                }
            }
        }

        // g^d must be the identity, or the group is larger than Z_d^m can index.
        let mut phase_witness = None;
        for (k, g) in gens.iter().enumerate() {
            let p = g.pow(self.d as u64);
            debug_assert!(p.is_identity_up_to_phase());
            if p.phase() != 0 {
                let mut a = vec![0u32; m];
                a[k] = self.d;
                phase_witness = Some(a);
                break;
            }
        }

        let mut seen: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
        self.for_each_element(limits, |a, op| {
            if op.is_identity_up_to_phase() && op.phase() != 0 && phase_witness.is_none() {
                phase_witness = Some(a.to_vec());
            }
            seen.insert((op.z_exp().entries().to_vec(), op.x_exp().entries().to_vec()));
        })?;

        Ok(ValidationReport {
            commuting: noncommuting_pair.is_none(),
            noncommuting_pair,
            group_order: seen.len() as u64,
            expected_order: pow_sat(self.d as u64, self.n),
            phase_clean: phase_witness.is_none(),
            phase_witness,
            m_range_ok: self.n <= m && m <= 2 * self.n,
        })
    }

    /// Solver for generator exponents `a` with `Π g_k^{a_k}` equal to a given
    /// operator up to phase.
    pub fn exponent_solver(&self) -> ExponentSolver {
        let (n, m) = (self.n, self.m());
        let mut a = ZdMatrix::zeros(self.d, 2 * n, m);
        for k in 0..m {
            for l in 0..n {
                a.set(l, k, self.z_mat.get(k, l));
                a.set(n + l, k, self.x_mat.get(k, l));
            }
        }
        ExponentSolver {
            d: self.d,
            n,
            solver: ModSolver::new(&a),
        }
    }

    /// Re-generates the group as `g'_t = Π_k g_k^{R_{kt}}`; codewords map as
    /// `c' = c·R`. Fails unless every old generator lies in the new group.
    pub fn transform_generators(&self, r: &ZdMatrix) -> Result<(StabilizerSpec, ZdMatrix)> {
        if r.rows() != self.m() || r.modulus() != self.d {
            return Err(Error::InvalidInput(format!(
                "transform must have {} rows over Z_{}",
                self.m(),
                self.d
            )));
        }
        let new_gens: Vec<PauliOperator> = (0..r.cols())
            .map(|t| self.element(&r.column(t)))
            .collect();
        let new_spec = StabilizerSpec::from_generators(self.d, self.n, &new_gens)?;
        let solver = new_spec.exponent_solver();
        for g in self.generators() {
            if solver.solve(&g).is_none() {
                return Err(Error::GroupNotPreserved);
            }
        }
        Ok((new_spec, r.clone()))
    }

    /// All non-identity group elements of weight below `delta`, one per
    /// element, each with its lexicographically smallest exponent vector.
    pub fn low_weight_elements(&self, delta: usize, limits: &Limits) -> Result<Vec<GroupElement>> {
        let mut out = Vec::new();
        if delta <= 1 {
            return Ok(out);
        }
        let mut seen: HashSet<PauliOperator> = HashSet::new();
        self.for_each_element(limits, |a, op| {
            let w = op.weight();
            if w >= 1 && w < delta && seen.insert(op.with_phase(0)) {
                out.push(GroupElement {
                    exponents: ZdVector::from_raw(self.d, a.to_vec()),
                    resolved: op.clone(),
                });
            }
        })?;
        Ok(out)
    }

    /// Canonical generating set for distance `delta`.
    ///
    /// The exponent vectors of the low-weight elements, together with
    /// `d·e_i`, span a lattice `L ⊆ Z^m`. With `U·M·V = D` its Smith form,
    /// `L` is spanned by `d_i·b_i` where `b_i` are the rows of `V^{-1}`. The
    /// new generators are `Π g^{d_i b_i}` for every `d_i < d` (these span the
    /// low-weight subgroup; their count is the canonical rank) followed by
    /// `Π g^{b_i}` for every `d_i ≠ 1`, which restores the whole group.
    pub fn canonicalize(&self, delta: usize, limits: &Limits) -> Result<CanonicalForm> {
        let m = self.m();
        let d = self.d;
        let low = self.low_weight_elements(delta, limits)?;
        if low.is_empty() {
            return Ok(CanonicalForm {
                spec: self.clone(),
                canonical_rank: 0,
                transform: ZdMatrix::identity(d, m),
                inverse: ZdMatrix::identity(d, m),
            });
        }

        let reps: BTreeSet<&ZdVector> = low.iter().map(|e| &e.exponents).collect();
        let mut lattice = IntMatrix::zeros(reps.len() + m, m);
        for (r, a) in reps.iter().enumerate() {
            for k in 0..m {
                *lattice.get_mut(r, k) = BigInt::from(a.get(k));
            }
        }
        for k in 0..m {
            *lattice.get_mut(reps.len() + k, k) = BigInt::from(d);
        }
        let smith = smith_normal_form(&lattice);
        let diag: Vec<u32> = smith
            .diagonal()
            .iter()
            .map(|x| x.to_u32().expect("invariant factors divide d"))
            .collect();
        let big_d = BigInt::from(d);
        let mut v_mod = ZdMatrix::zeros(d, m, m);
        for r in 0..m {
            for c in 0..m {
                let x = smith.v.get(r, c) % &big_d;
                let x = if x < BigInt::zero() { x + &big_d } else { x };
                v_mod.set(r, c, x.to_u32().expect("reduced"));
            }
        }
        let b = v_mod
            .inverse()
            .ok_or_else(|| Error::Internal("Smith transform not invertible mod d".into()))?;

        // low-weight part, ordered by leading generator index
        let mut low_cols: Vec<(usize, ZdVector)> = diag
            .iter()
            .enumerate()
            .filter(|&(_, &di)| di % d != 0)
            .map(|(i, &di)| (i, b.row_vector(i).scale(di as u64)))
            .collect();
        low_cols.sort_by_key(|(_, c)| c.entries().iter().position(|&x| x != 0));
        let mut columns: Vec<ZdVector> = Vec::new();
        let mut position = vec![usize::MAX; m];
        for (i, col) in low_cols {
            if diag[i] == 1 {
                position[i] = columns.len();
            }
            columns.push(col);
        }
        let rank = columns.len();
        for (i, &di) in diag.iter().enumerate() {
            if di != 1 {
                position[i] = columns.len();
                columns.push(b.row_vector(i));
            }
        }
        let transform = ZdMatrix::from_columns(d, m, &columns);
        let mut inverse = ZdMatrix::zeros(d, columns.len(), m);
        for (i, &pos) in position.iter().enumerate() {
            for l in 0..m {
                inverse.set(pos, l, v_mod.get(l, i));
            }
        }
        debug_assert_eq!(transform.mul(&inverse), ZdMatrix::identity(d, m));
        let (spec, transform) = self.transform_generators(&transform)?;
        Ok(CanonicalForm {
            spec,
            canonical_rank: rank,
            transform,
            inverse,
        })
    }

    /// X-exponent column `r_l` (length `m`).
    pub fn x_column(&self, l: usize) -> ZdVector {
        self.x_mat.column(l)
    }

    /// Z-exponent column `t_l` (length `m`).
    pub fn z_column(&self, l: usize) -> ZdVector {
        self.z_mat.column(l)
    }

    /// Every syndrome realizable by some Pauli operator: the module spanned
    /// by the `2n` columns of `x_mat` and `z_mat`.
    pub fn syndrome_lattice(&self, limits: &Limits) -> Result<BTreeSet<ZdVector>> {
        let cols: Vec<ZdVector> = (0..self.n)
            .flat_map(|l| [self.x_column(l), self.z_column(l)])
            .collect();
        enumerate_module(self.d, self.m(), &cols, limits.module_elements)
    }

    pub fn word_operator_solver(&self) -> WordOperatorSolver {
        // Cl(E)_k = Σ_l v_l x[k][l] - u_l z[k][l]
        let a = self.x_mat.hstack(&self.z_mat.neg());
        WordOperatorSolver {
            d: self.d,
            n: self.n,
            solver: ModSolver::new(&a),
        }
    }

    /// A phase-0 operator `w` with `w g_k w† = q_d^{c_k} g_k` for every `k`.
    pub fn word_operator_for(&self, c: &ZdVector) -> Result<PauliOperator> {
        if c.len() != self.m() || c.modulus() != self.d {
            return Err(Error::InvalidInput(format!(
                "syndrome must have {} entries over Z_{}",
                self.m(),
                self.d
            )));
        }
        self.word_operator_solver().solve(c)
    }

    /// Summary used by manifests: `(d, n, m)`.
    pub fn shape(&self) -> (u32, usize, usize) {
        (self.d, self.n, self.m())
    }
}

pub struct WordOperatorSolver {
    d: u32,
    n: usize,
    solver: ModSolver,
}

impl WordOperatorSolver {
    pub fn solve(&self, c: &ZdVector) -> Result<PauliOperator> {
        let sol = self
            .solver
            .solve(c)
            .ok_or_else(|| Error::NotRealizable(c.clone()))?;
        let e = sol.entries();
        Ok(PauliOperator::from_parts(
            self.d,
            0,
            e[..self.n].to_vec(),
            e[self.n..].to_vec(),
        ))
    }
}

pub struct ExponentSolver {
    d: u32,
    n: usize,
    solver: ModSolver,
}

impl ExponentSolver {
    /// Exponents `a` with `Π g_k^{a_k} ∝ op`, if `op` lies in the group up to phase.
    pub fn solve(&self, op: &PauliOperator) -> Option<ZdVector> {
        let mut rhs = Vec::with_capacity(2 * self.n);
        rhs.extend_from_slice(op.z_exp().entries());
        rhs.extend_from_slice(op.x_exp().entries());
        self.solver.solve(&ZdVector::from_raw(self.d, rhs))
    }
}

/// Closure of a set of operators under multiplication, up to phase.
#[cfg(test)]
pub(crate) fn span_up_to_phase(
    d: u32,
    n: usize,
    ops: &[PauliOperator],
    limit: u64,
) -> Result<BTreeSet<ZdVector>> {
    let vecs: Vec<ZdVector> = ops
        .iter()
        .map(|op| {
            let mut e = op.z_exp().entries().to_vec();
            e.extend_from_slice(op.x_exp().entries());
            ZdVector::from_raw(d, e)
        })
        .collect();
    enumerate_module(d, 2 * n, &vecs, limit)
}
