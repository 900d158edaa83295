#![allow(dead_code)]

use acceptcert_core::exactalg::commutant;
use acceptcert_core::{CycNum, ExactMatrix};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CONDUCTORS: [i64; 7] = [1, 3, 4, 5, 8, 12, 20];

pub fn coeff_vec() -> impl Strategy<Value = (i64, Vec<i64>)> {
    prop::sample::select(CONDUCTORS.to_vec())
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-4i64..=4, n as usize)))
}

pub fn build(n: i64, c: &[i64]) -> CycNum {
    let q: Vec<BigRational> = c.iter().map(|&v| BigRational::from_integer(v.into())).collect();
    CycNum::new(n, &q).unwrap()
}

pub fn cyc() -> impl Strategy<Value = CycNum> {
    coeff_vec().prop_map(|(n, c)| build(n, &c))
}

pub fn matrix(size: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(
        (prop::sample::select(vec![1i64, 3, 4, 8]), prop::collection::vec(-2i64..=2, 2)),
        size * size,
    )
    .prop_map(move |es| {
        let data = es.iter().map(|(n, c)| build(*n, c)).collect();
        ExactMatrix::new(size, size, data).unwrap()
    })
}

/// Unit lower-triangular times a permutation: always invertible.
pub fn invertible(size: usize) -> impl Strategy<Value = ExactMatrix> {
    (matrix(size), Just((0..size).collect::<Vec<usize>>()).prop_shuffle()).prop_map(move |(m, perm)| {
        let mut l = ExactMatrix::identity(size);
        for r in 0..size {
            for c in 0..r {
                l.set(r, c, m.get(r, c).clone());
            }
        }
        let mut p = ExactMatrix::zeros(size, size);
        for (r, &c) in perm.iter().enumerate() {
            p.set(r, c, CycNum::one());
        }
        &l * &p
    })
}

fn ensure(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

pub fn field_axioms(a: &CycNum, b: &CycNum, c: &CycNum) -> Result<(), TestCaseError> {
    ensure(&(a + b) + c == a + &(b + c), "additive associativity")?;
    ensure(&(a * b) * c == a * &(b * c), "multiplicative associativity")?;
    ensure(a + b == b + a, "additive commutativity")?;
    ensure(a * b == b * a, "multiplicative commutativity")?;
    ensure(a * &(b + c) == &(a * b) + &(a * c), "distributivity")?;
    ensure((a + &-a).is_zero(), "additive inverse")?;
    ensure(a + &CycNum::zero() == *a && a * &CycNum::one() == *a, "identities")?;
    if !a.is_zero() {
        ensure((a * &a.inv().unwrap()).is_one(), "multiplicative inverse")?;
    }
    ensure((a * b).conj() == &a.conj() * &b.conj(), "conjugation is multiplicative")?;
    ensure(a.conj().conj() == *a, "conjugation is an involution")
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn zeta_order(n: u32, k: i64) -> Result<(), TestCaseError> {
    let z = CycNum::root_of_unity(n, k);
    let expect = n / gcd(n, k.rem_euclid(n as i64) as u32);
    ensure(z.root_order(n) == Some(expect), "order of a root of unity")
}

/// `Σ aₖXᵏ · Σ bₖXᵏ` reduced modulo `Xⁿ − 1`.
fn cyclic_convolution(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[(i + j) % n] += x * y;
        }
    }
    out
}

/// Spreads coordinates over powers of `ζ_big`, `big = n·t`.
fn spread(c: &[i64], t: usize) -> Vec<i64> {
    let mut out = vec![0; c.len() * t];
    for (k, v) in c.iter().enumerate() {
        out[k * t] = *v;
    }
    out
}

pub fn embedding_homomorphism(n: i64, a: &[i64], b: &[i64], t: usize) -> Result<(), TestCaseError> {
    let big = n * t as i64;
    let (x, y) = (build(n, a), build(n, b));
    let sum: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
    let prod = cyclic_convolution(n as usize, a, b);
    ensure(build(big, &spread(a, t)) == x, "embedding preserves the value")?;
    ensure(build(big, &spread(&sum, t)) == &x + &y, "embedding preserves sums")?;
    ensure(build(big, &spread(&prod, t)) == &x * &y, "embedding preserves products")?;
    let back = CycNum::new(big, &x.coeffs_in(big as u32).unwrap()).unwrap();
    ensure(back == x, "coordinates in the larger field reconstruct the value")
}

pub fn charpoly_invariance(a: &ExactMatrix, p: &ExactMatrix) -> Result<(), TestCaseError> {
    let conj = &(p * a) * &p.inverse().unwrap();
    ensure(conj.char_poly().unwrap() == a.char_poly().unwrap(), "char poly conjugation invariance")?;
    ensure(conj.trace().unwrap() == a.trace().unwrap(), "trace conjugation invariance")
}

pub fn commutant_correct(a: &ExactMatrix) -> Result<(), TestCaseError> {
    let n = a.rows();
    let space = commutant(std::slice::from_ref(a)).unwrap();
    for x in space.basis_matrices(n, n).unwrap() {
        ensure(x.commutes_with(a).unwrap(), "commutant basis commutes")?;
    }
    let id = ExactMatrix::identity(n);
    let poly = (a * a).try_add(&a.scale(&CycNum::from_i64(3))).unwrap().try_add(&id).unwrap();
    ensure(space.contains(&poly.flatten()).unwrap(), "polynomials in the matrix lie in the commutant")?;
    ensure(space.dim() >= n, "commutant of one matrix has dimension at least its size")
}

pub fn commutant_of_distinct_diagonal(k: usize) -> Result<(), TestCaseError> {
    let d: Vec<CycNum> = (0..k as i64).map(|j| CycNum::from_i64(j + 1)).collect();
    let space = commutant(&[ExactMatrix::diag(&d)]).unwrap();
    ensure(space.dim() == k, "distinct diagonal has diagonal commutant")
}

fn fmt<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| format!("{e}"))
}

fn runner(seed: u64, cases: u32) -> TestRunner {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &key))
}

/// Every exact-arithmetic property under a fixed seed; one entry per property.
pub fn property_suite(seed: u64, cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    let mut out = Vec::new();
    out.push((
        "field axioms",
        fmt(runner(seed, cases).run(&(cyc(), cyc(), cyc()), |(a, b, c)| field_axioms(&a, &b, &c))),
    ));
    out.push((
        "root of unity order",
        fmt(runner(seed, cases).run(&(1u32..=60, -100i64..100), |(n, k)| zeta_order(n, k))),
    ));
    out.push((
        "embedding homomorphism",
        fmt(runner(seed, cases).run(
            &coeff_vec().prop_flat_map(|(n, a)| {
                let len = a.len();
                (Just(n), Just(a), prop::collection::vec(-4i64..=4, len), prop::sample::select(vec![1usize, 2, 3]))
            }),
            |(n, a, b, t)| embedding_homomorphism(n, &a, &b, t),
        )),
    ));
    out.push((
        "char poly conjugation invariance",
        fmt(runner(seed, cases / 4 + 1).run(&(matrix(3), invertible(3)), |(a, p)| charpoly_invariance(&a, &p))),
    ));
    out.push((
        "commutant correctness",
        fmt(runner(seed, cases / 4 + 1).run(&matrix(3), |a| commutant_correct(&a))),
    ));
    out.push((
        "distinct diagonal commutant",
        fmt(runner(seed, 8).run(&(1usize..=5), commutant_of_distinct_diagonal)),
    ));
    out
}
