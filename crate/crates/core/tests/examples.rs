//! Worked examples checked against dense matrices built here from scratch.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cws_core::corpus::{random_error, random_spec};
use cws_core::cws::classical_rep_plus;
use cws_core::{classical_rep, distance, example_fixtures, Limits, PauliOperator, StabilizerSpec, ZdVector};

type Mat = Vec<Vec<Complex64>>;

fn root(d: u32, k: i64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * (k.rem_euclid(d as i64) as f64) / d as f64;
    Complex64::new(t.cos(), t.sin())
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// `q^phase Z^v X^u` with `Z|k> = q^k|k>`, `X|k> = |k+1>`, qudit 0 most
/// significant.
fn dense(op: &PauliOperator) -> Mat {
    let d = op.d() as usize;
    let n = op.n();
    let dim = d.pow(n as u32);
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut digits: Vec<usize> = (0..n).map(|q| col / d.pow((n - 1 - q) as u32) % d).collect();
        let mut phase = op.phase() as i64;
        for q in 0..n {
            digits[q] = (digits[q] + op.x_exp().get(q) as usize) % d;
            phase += op.z_exp().get(q) as i64 * digits[q] as i64;
        }
        let row = digits.iter().fold(0, |acc, &x| acc * d + x);
        m[row][col] = root(op.d(), phase);
    }
    m
}

/// `c` with `E g E^dagger = q^c g`.
fn conjugation_phase(e: &PauliOperator, g: &PauliOperator) -> u32 {
    let (me, mg) = (dense(e), dense(g));
    let conj = matmul(&matmul(&me, &mg), &dagger(&me));
    (0..g.d())
        .find(|&c| {
            let w = root(g.d(), c as i64);
            conj.iter()
                .zip(&mg)
                .all(|(r1, r2)| r1.iter().zip(r2).all(|(a, b)| (a - w * b).norm() < 1e-9))
        })
        .expect("Pauli conjugation is a phase")
}

fn oracle_syndrome(spec: &StabilizerSpec, e: &PauliOperator) -> ZdVector {
    ZdVector::from_ints(spec.d(), spec.generators().iter().map(|g| conjugation_phase(e, g) as i64))
}

#[test]
fn ring_weight_two_syndrome() {
    let (ring, _) = example_fixtures();
    let e = PauliOperator::parse_literal(3, 7, "Z1 Z5 X1^2 X5^2").unwrap();
    let target = ZdVector::from_ints(3, [1, 1, 1, 0, 1, 1, 1]);
    assert_eq!(oracle_syndrome(&ring.spec, &e), target);
    assert_eq!(classical_rep(&ring.spec, &e).unwrap(), target);
    let plus = PauliOperator::parse_literal(3, 7, "Z1 Z5 X1 X5").unwrap();
    assert_eq!(classical_rep_plus(&ring.spec, &plus).unwrap(), target);
}

#[test]
fn d4_single_z_syndrome() {
    let (_, f) = example_fixtures();
    let z0 = PauliOperator::z_on(4, 3, 0, 1);
    assert_eq!(oracle_syndrome(&f.spec, &z0), ZdVector::from_ints(4, [0, 2, 2]));
    assert_eq!(classical_rep(&f.spec, &z0).unwrap(), ZdVector::from_ints(4, [0, 2, 2]));
}

#[test]
fn syndrome_matches_dense_conjugation() {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..40 {
        let d = [2, 3, 4, 5, 6][i % 5];
        let n = 1 + i % 3;
        let spec = random_spec(&mut rng, d, n, 0.5, &lim).unwrap();
        for _ in 0..4 {
            let e = random_error(&mut rng, d, n, n);
            assert_eq!(classical_rep(&spec, &e).unwrap(), oracle_syndrome(&spec, &e), "d={d} {e}");
        }
    }
}

#[test]
fn ring_code_distance() {
    let (ring, d4) = example_fixtures();
    let lim = Limits::default();
    assert_eq!(distance(&ring.code(), &lim).unwrap(), 3);
    // Z1^2 is a weight-1 stabilizer element acting as -1 on (011)
    assert_eq!(distance(&d4.code(), &lim).unwrap(), 1);
}

#[test]
fn data_files_match_fixtures() {
    use cws_core::format::{write_code, write_spec};
    let dir = format!("{}/../../data", env!("CARGO_MANIFEST_DIR"));
    let (ring, d4) = example_fixtures();
    for f in [ring, d4] {
        let spec = std::fs::read_to_string(format!("{dir}/{}.spec", f.name)).unwrap();
        let code = std::fs::read_to_string(format!("{dir}/{}.code", f.name)).unwrap();
        assert_eq!(spec, write_spec(&f.spec));
        assert_eq!(code, write_code(&f.code()));
    }
}
