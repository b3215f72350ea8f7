//! Exact linear algebra over the ring Z_d and over the integers.
//!
//! Z_d is not a field for composite `d`, so nothing here uses Gaussian
//! elimination modulo `d`. Linear systems are lifted to the integers,
//! augmented with `d·I`, and solved through a Smith decomposition computed
//! with arbitrary-precision integers.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fixed-length vector with entries in `[0, modulus)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ZdVector {
    modulus: u32,
    entries: Vec<u32>,
}

impl ZdVector {
    pub fn new(modulus: u32, entries: Vec<u32>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidInput(format!("modulus {modulus} < 2")));
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= modulus) {
            return Err(Error::InvalidInput(format!(
                "entry {e} not reduced modulo {modulus}"
            )));
        }
        Ok(ZdVector { modulus, entries })
    }

    /// Reduces arbitrary integers into `[0, modulus)`.
    pub fn from_ints<I: IntoIterator<Item = i64>>(modulus: u32, values: I) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let entries = values
            .into_iter()
            .map(|v| v.rem_euclid(modulus as i64) as u32)
            .collect();
        ZdVector { modulus, entries }
    }

    pub(crate) fn from_raw(modulus: u32, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < modulus));
        ZdVector { modulus, entries }
    }

    pub fn zeros(modulus: u32, len: usize) -> Self {
        ZdVector::from_raw(modulus, vec![0; len])
    }

    pub fn unit(modulus: u32, len: usize, index: usize) -> Self {
        let mut v = ZdVector::zeros(modulus, len);
        v.entries[index] = 1;
        v
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &ZdVector) {
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        assert_eq!(self.len(), other.len(), "length mismatch");
    }

    pub fn add(&self, other: &ZdVector) -> ZdVector {
        self.check_compatible(other);
        let d = self.modulus;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % d)
            .collect();
        ZdVector::from_raw(d, entries)
    }

    pub fn sub(&self, other: &ZdVector) -> ZdVector {
        self.check_compatible(other);
        let d = self.modulus;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + d - b) % d)
            .collect();
        ZdVector::from_raw(d, entries)
    }

    pub fn neg(&self) -> ZdVector {
        let d = self.modulus;
        ZdVector::from_raw(d, self.entries.iter().map(|&a| (d - a) % d).collect())
    }

    pub fn scale(&self, k: u64) -> ZdVector {
        let d = self.modulus as u64;
        let k = k % d;
        ZdVector::from_raw(
            self.modulus,
            self.entries
                .iter()
                .map(|&a| ((a as u64 * k) % d) as u32)
                .collect(),
        )
    }

    pub fn dot(&self, other: &ZdVector) -> u32 {
        self.check_compatible(other);
        dot_mod(&self.entries, &other.entries, self.modulus)
    }

    /// Mixed-radix index with entry 0 as the most significant digit.
    pub fn index(&self) -> u128 {
        let d = self.modulus as u128;
        self.entries.iter().fold(0u128, |acc, &e| acc * d + e as u128)
    }

    /// Inverse of [`ZdVector::index`].
    pub fn from_index(modulus: u32, len: usize, mut index: u128) -> ZdVector {
        let d = modulus as u128;
        let mut entries = vec![0u32; len];
        for slot in entries.iter_mut().rev() {
            *slot = (index % d) as u32;
            index /= d;
        }
        ZdVector::from_raw(modulus, entries)
    }
}

impl fmt::Display for ZdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn dot_mod(a: &[u32], b: &[u32], d: u32) -> u32 {
    let d = d as u64;
    let mut acc = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        acc = (acc + x as u64 * y as u64) % d;
    }
    acc as u32
}

/// A dense matrix over Z_d, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ZdMatrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ZdMatrix {
    pub fn zeros(modulus: u32, rows: usize, cols: usize) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        ZdMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u32, n: usize) -> Self {
        let mut m = ZdMatrix::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry.
    pub fn from_rows(modulus: u32, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut m = ZdMatrix::zeros(modulus, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v.rem_euclid(modulus as i64) as u32);
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(modulus: u32, rows: usize, columns: &[ZdVector]) -> Self {
        let mut m = ZdMatrix::zeros(modulus, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for r in 0..rows {
                m.set(r, c, col.get(r) % modulus);
            }
        }
        m
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        assert!(value < self.modulus);
        self.data[r * self.cols + c] = value;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> ZdVector {
        ZdVector::from_raw(self.modulus, self.row(r).to_vec())
    }

    pub fn column(&self, c: usize) -> ZdVector {
        ZdVector::from_raw(
            self.modulus,
            (0..self.rows).map(|r| self.get(r, c)).collect(),
        )
    }

    pub fn transpose(&self) -> ZdMatrix {
        let mut t = ZdMatrix::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn neg(&self) -> ZdMatrix {
        let d = self.modulus;
        ZdMatrix {
            data: self.data.iter().map(|&a| (d - a) % d).collect(),
            ..self.clone()
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &ZdMatrix) -> ZdMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let mut m = ZdMatrix::zeros(self.modulus, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Column-vector product `A·x`.
    pub fn mul_vec(&self, x: &ZdVector) -> ZdVector {
        assert_eq!(x.len(), self.cols);
        ZdVector::from_raw(
            self.modulus,
            (0..self.rows)
                .map(|r| dot_mod(self.row(r), x.entries(), self.modulus))
                .collect(),
        )
    }

    /// Row-vector product `x·A`.
    pub fn vec_mul(&self, x: &ZdVector) -> ZdVector {
        assert_eq!(x.len(), self.rows);
        let d = self.modulus as u64;
        let mut out = vec![0u64; self.cols];
        for r in 0..self.rows {
            let xr = x.get(r) as u64;
            if xr == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = (*o + xr * self.get(r, c) as u64) % d;
            }
        }
        ZdVector::from_raw(self.modulus, out.into_iter().map(|v| v as u32).collect())
    }

    pub fn mul(&self, other: &ZdMatrix) -> ZdMatrix {
        assert_eq!(self.cols, other.rows);
        let d = self.modulus as u64;
        let mut m = ZdMatrix::zeros(self.modulus, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.get(r, k) as u64 * other.get(k, c) as u64) % d;
                }
                m.set(r, c, acc as u32);
            }
        }
        m
    }

    /// Integer lift with entries in `[0, d)`.
    pub fn lift(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.get_mut(r, c) = BigInt::from(self.get(r, c));
            }
        }
        m
    }

    /// Two-sided inverse over Z_d, if the matrix is square and invertible.
    pub fn inverse(&self) -> Option<ZdMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let solver = ModSolver::new(self);
        let columns: Option<Vec<ZdVector>> = (0..n)
            .map(|i| solver.solve(&ZdVector::unit(self.modulus, n, i)))
            .collect();
        let inv = ZdMatrix::from_columns(self.modulus, n, &columns?);
        let id = ZdMatrix::identity(self.modulus, n);
        (self.mul(&inv) == id && inv.mul(self) == id).then_some(inv)
    }
}

/// A dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (c, &v) in row.iter().enumerate() {
                *m.get_mut(r, c) = BigInt::from(v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    /// Entry as `i64`, if it fits.
    pub fn entry_i64(&self, r: usize, c: usize) -> Option<i64> {
        self.get(r, c).to_i64()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * other.get(k, c);
                    *m.get_mut(r, c) += prod;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * &x[c])
                    .fold(BigInt::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    *a.get_mut(i, j) = val;
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row[dst] -= q · row[src]`
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = q * self.get(src, c);
            *self.get_mut(dst, c) -= t;
        }
    }

    /// `col[dst] -= q · col[src]`
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = q * self.get(r, src);
            *self.get_mut(r, dst) -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(self.get_mut(r, c));
            *self.get_mut(r, c) = v;
        }
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal with each diagonal
/// entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The `min(rows, cols)` diagonal entries of `D`, all non-negative.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero |entry| in the trailing block becomes the pivot.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < a.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            let p = a.get(t, t).clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
            if let Some(i) = offender {
                let minus_one = -BigInt::one();
                a.row_sub(t, i, &minus_one);
                u.row_sub(t, i, &minus_one);
                continue;
            }
            break;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { u, d: a, v }
}

/// Reusable solver for `A·x ≡ b (mod d)` with fixed `A`.
///
/// Lifts `[A | d·I]` to the integers and stores its Smith decomposition, so
/// each right-hand side costs two integer matrix-vector products.
#[derive(Clone, Debug)]
pub struct ModSolver {
    modulus: u32,
    unknowns: usize,
    u: IntMatrix,
    diag: Vec<BigInt>,
    v: IntMatrix,
}

impl ModSolver {
    pub fn new(a: &ZdMatrix) -> Self {
        let (m, k) = (a.rows(), a.cols());
        let d = BigInt::from(a.modulus());
        let mut lifted = IntMatrix::zeros(m, k + m);
        for r in 0..m {
            for c in 0..k {
                *lifted.get_mut(r, c) = BigInt::from(a.get(r, c));
            }
            *lifted.get_mut(r, k + r) = d.clone();
        }
        let smith = smith_normal_form(&lifted);
        let diag = smith.diagonal();
        ModSolver {
            modulus: a.modulus(),
            unknowns: k,
            u: smith.u,
            diag,
            v: smith.v,
        }
    }

    pub fn solve(&self, b: &ZdVector) -> Option<ZdVector> {
        assert_eq!(b.modulus(), self.modulus, "modulus mismatch");
        assert_eq!(b.len(), self.diag.len(), "right-hand side length mismatch");
        let rhs: Vec<BigInt> = b.entries().iter().map(|&x| BigInt::from(x)).collect();
        let ub = self.u.mul_vec(&rhs);
        let mut z = vec![BigInt::zero(); self.v.rows()];
        for (i, (ubi, di)) in ub.iter().zip(&self.diag).enumerate() {
            if di.is_zero() {
                if !ubi.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = ubi.div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            }
        }
        let y = self.v.mul_vec(&z);
        let d = BigInt::from(self.modulus);
        let x = y[..self.unknowns]
            .iter()
            .map(|yi| yi.mod_floor(&d).to_u32().expect("reduced below modulus"))
            .collect();
        Some(ZdVector::from_raw(self.modulus, x))
    }
}

/// Solves `A·x ≡ b (mod d)`; `None` means `b` is outside the column module of `A`.
pub fn solve_mod(a: &ZdMatrix, b: &ZdVector) -> Option<ZdVector> {
    ModSolver::new(a).solve(b)
}

/// The Z_d-module generated by `generators` inside `Z_d^len`.
///
/// Breadth-first closure under adding generators; scalar multiples are
/// repeated additions, so this is closure under the full module operations.
pub fn enumerate_module(
    modulus: u32,
    len: usize,
    generators: &[ZdVector],
    limit: u64,
) -> Result<BTreeSet<ZdVector>> {
    for g in generators {
        if g.modulus() != modulus || g.len() != len {
            return Err(Error::InvalidInput(format!(
                "generator {g} does not live in Z_{modulus}^{len}"
            )));
        }
    }
    let zero = ZdVector::zeros(modulus, len);
    let mut seen: HashSet<ZdVector> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.add(g);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                queue.push_back(y);
                if seen.len() as u64 > limit {
                    return Err(Error::ResourceLimit {
                        what: "module enumeration",
                        required: seen.len() as u128,
                        limit: limit as u128,
                    });
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// gcd of every entry of `v` together with `p`; `p` itself when `v` is zero.
pub fn gcd_with(v: &ZdVector, p: u64) -> u64 {
    v.entries().iter().fold(p, |g, &e| g.gcd(&(e as u64)))
}
