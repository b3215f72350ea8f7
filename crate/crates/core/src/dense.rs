//! Small dense complex matrices and monomial operators used by the oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Table of the `d`-th roots of unity `q_d^k = exp(2πik/d)`.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    roots: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(d: u32) -> Self {
        let roots = (0..d)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64))
            .collect();
        RootsOfUnity { roots }
    }

    #[inline]
    pub fn pow(&self, k: u64) -> Complex64 {
        self.roots[(k % self.roots.len() as u64) as usize]
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (a, b) = (self.dim, other.dim);
        let mut out = ComplexMatrix::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let s = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, s * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * x[c]).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A generalized permutation matrix: column `j` holds `q_d^{phase[j]}` in
/// row `target[j]`. Every qudit Pauli operator has this shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub(crate) d: u32,
    pub(crate) target: Vec<usize>,
    pub(crate) phase: Vec<u32>,
}

impl Monomial {
    pub fn identity(d: u32, dim: usize) -> Self {
        Monomial {
            d,
            target: (0..dim).collect(),
            phase: vec![0; dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.dim(), other.dim());
        let d = self.d;
        let mut target = Vec::with_capacity(self.dim());
        let mut phase = Vec::with_capacity(self.dim());
        for j in 0..other.dim() {
            let mid = other.target[j];
            target.push(self.target[mid]);
            phase.push((other.phase[j] + self.phase[mid]) % d);
        }
        Monomial { d, target, phase }
    }

    pub fn apply(&self, roots: &RootsOfUnity, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim());
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for (j, &xj) in x.iter().enumerate() {
            out[self.target[j]] += roots.pow(self.phase[j] as u64) * xj;
        }
        out
    }

    pub fn to_dense(&self, roots: &RootsOfUnity) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim());
        for j in 0..self.dim() {
            m.set(self.target[j], j, roots.pow(self.phase[j] as u64));
        }
        m
    }
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
