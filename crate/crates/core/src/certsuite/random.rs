//! Seeded random homomorphism pairs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::GroupResult;
use crate::exactalg::{CycNum, ExactMatrix};
use crate::fingrp::{formal_group, FinGroup, FormalElem, FormalGroupSpec};
use crate::grpcore::{make_group, AmbientElement, FactorKind, GroupSpec, Quat};
use crate::homcheck::HomPair;

fn c4_squared() -> Arc<FinGroup<FormalElem>> {
    Arc::new(formal_group(&FormalGroupSpec::CyclicProduct(vec![4, 4])).expect("valid"))
}

fn pair(
    target: Arc<GroupSpec>,
    phi: Vec<AmbientElement>,
    phi2: Vec<AmbientElement>,
) -> GroupResult<HomPair<FormalElem>> {
    let src = c4_squared();
    let gens = src.generators().to_vec();
    HomPair::from_generator_images(src, target, &gens, &phi, &phi2)
}

/// `diag(i^{a₀}, …, i^{a₃})` with `Σ aⱼ ≡ 0 mod 4`.
fn random_diag4(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut a: Vec<i64> = (0..3).map(|_| rng.gen_range(0..4)).collect();
    a.push((4 - a.iter().sum::<i64>() % 4) % 4);
    a
}

fn diag_i(a: &[i64]) -> ExactMatrix {
    let e: Vec<CycNum> = a.iter().map(|&k| CycNum::root_of_unity(4, k)).collect();
    ExactMatrix::diag(&e)
}

fn su4(m: ExactMatrix) -> AmbientElement {
    AmbientElement::su(m).expect("special unitary")
}

pub fn su4_mod_minus_one() -> Arc<GroupSpec> {
    make_group(vec![FactorKind::SU(4)], vec![su4(ExactMatrix::scalar(4, &CycNum::from_i64(-1)))]).expect("finite")
}

pub fn sp1_cube_mod_diagonal() -> Arc<GroupSpec> {
    let m = Quat::minus_one();
    make_group(vec![FactorKind::Sp1; 3], vec![AmbientElement::sp1s(&[m.clone(), m.clone(), m]).unwrap()])
        .expect("finite")
}

/// A pair of diagonal `(C₄)² → SU(4)/⟨−I⟩` homomorphisms, the second drawn
/// as a twisted permutation, a conjugate, a twisted conjugate, or independently.
pub fn random_su4_diag_pair(rng: &mut ChaCha8Rng) -> GroupResult<HomPair<FormalElem>> {
    let a = [random_diag4(rng), random_diag4(rng)];
    let mut perm: Vec<usize> = (0..4).collect();
    perm.shuffle(rng);
    let variant = rng.gen_range(0..4);
    let b: Vec<Vec<i64>> = a
        .iter()
        .map(|v| {
            let t = if rng.gen_bool(0.5) { 2 } else { 0 };
            match variant {
                0 => perm.iter().map(|&p| (v[p] + t) % 4).collect(),
                1 => v.iter().map(|&x| (4 - x) % 4).collect(),
                2 => perm.iter().map(|&p| (8 - v[p] + t) % 4).collect(),
                _ => random_diag4(rng),
            }
        })
        .collect();
    let phi = a.iter().map(|v| su4(diag_i(v))).collect();
    let phi2 = b.iter().map(|v| su4(diag_i(v))).collect();
    pair(su4_mod_minus_one(), phi, phi2)
}

fn circle_i(k: i64) -> Quat {
    Quat::circle(k, 4)
}

/// A pair of `(C₄)² → Sp(1)³/⟨(−1,−1,−1)⟩` homomorphisms with images in the
/// `i`-circles, the second drawn by per-factor inversions and a twist, by
/// inverting one factor only, or independently.
pub fn random_sp1_cube_diag_pair(rng: &mut ChaCha8Rng) -> GroupResult<HomPair<FormalElem>> {
    let a: Vec<Vec<i64>> = (0..2).map(|_| (0..3).map(|_| rng.gen_range(0..4)).collect()).collect();
    let flips: Vec<bool> = (0..3).map(|_| rng.gen_bool(0.5)).collect();
    let variant = rng.gen_range(0..3);
    let odd = rng.gen_range(0..3);
    let b: Vec<Vec<i64>> = a
        .iter()
        .map(|v| {
            let t = if rng.gen_bool(0.5) { 2 } else { 0 };
            match variant {
                0 => (0..3).map(|f| (if flips[f] { 4 - v[f] } else { v[f] } + t) % 4).collect(),
                1 => (0..3).map(|f| if f == odd { (4 - v[f] + t) % 4 } else { (v[f] + t) % 4 }).collect(),
                _ => (0..3).map(|_| rng.gen_range(0..4)).collect(),
            }
        })
        .collect();
    let lift = |v: &Vec<i64>| {
        let qs: Vec<Quat> = v.iter().map(|&k| circle_i(k)).collect();
        AmbientElement::sp1s(&qs).unwrap()
    };
    pair(sp1_cube_mod_diagonal(), a.iter().map(lift).collect(), b.iter().map(lift).collect())
}

fn su4_generators() -> Vec<ExactMatrix> {
    let s = CycNum::sqrt2().inv().unwrap();
    let i = CycNum::i();
    let mut out = Vec::new();
    for (p, q) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
        // Rotation by π/4 and its complex analogue in the (p, q) plane.
        let mut r = ExactMatrix::identity(4);
        r.set(p, p, s.clone());
        r.set(p, q, s.clone());
        r.set(q, p, -&s);
        r.set(q, q, s.clone());
        out.push(r);
        let mut c = ExactMatrix::identity(4);
        c.set(p, p, s.clone());
        c.set(p, q, &s * &i);
        c.set(q, p, &s * &i);
        c.set(q, q, s.clone());
        out.push(c);
    }
    out.push(diag_i(&[1, 3, 0, 0]));
    out.push(diag_i(&[0, 1, 1, 2]));
    out
}

/// A product of random generators of a dense subgroup of `SU(4)`.
pub fn random_su4_element(rng: &mut ChaCha8Rng, len: usize) -> ExactMatrix {
    let gens = su4_generators();
    let mut g = ExactMatrix::identity(4);
    for _ in 0..len {
        g = &g * gens.choose(rng).unwrap();
    }
    g
}

fn sp1_generators() -> Vec<Quat> {
    let h = CycNum::frac(1, 2);
    let s = CycNum::sqrt2().inv().unwrap();
    let z = CycNum::zero();
    vec![
        Quat::i(),
        Quat::j(),
        Quat::eta(),
        Quat::new(h.clone(), h.clone(), h.clone(), h).unwrap(),
        Quat::new(s.clone(), z.clone(), s, z).unwrap(),
        Quat::circle(1, 3),
    ]
}

pub fn random_unit_quaternion(rng: &mut ChaCha8Rng, len: usize) -> Quat {
    let gens = sp1_generators();
    let mut q = Quat::one();
    for _ in 0..len {
        q = &q * gens.choose(rng).unwrap();
    }
    q
}

/// `(φ, Ad(g)φ)` into `SU(4)` with `φ` a conjugated random diagonal pair.
pub fn random_conjugated_su4_pair(rng: &mut ChaCha8Rng) -> GroupResult<HomPair<FormalElem>> {
    let target = make_group(vec![FactorKind::SU(4)], vec![])?;
    let h = random_su4_element(rng, 3);
    let g = random_su4_element(rng, 3);
    let hi = h.conj_transpose();
    let phi: Vec<AmbientElement> =
        (0..2).map(|_| su4(&(&h * &diag_i(&random_diag4(rng))) * &hi)).collect();
    let ga = su4(g);
    let phi2 = phi.iter().map(|x| x.conjugate_by(&ga)).collect();
    pair(target, phi, phi2)
}

/// `(φ, Ad(g)φ)` into `Sp(1)³`, each factor landing in a random circle.
pub fn random_conjugated_sp1_cube_pair(rng: &mut ChaCha8Rng) -> GroupResult<HomPair<FormalElem>> {
    let target = make_group(vec![FactorKind::Sp1; 3], vec![])?;
    let axes: Vec<Quat> = (0..3)
        .map(|_| {
            let h = random_unit_quaternion(rng, 3);
            &(&h * &Quat::i()) * &h.conj()
        })
        .collect();
    let pow = |q: &Quat, k: i64| (0..k).fold(Quat::one(), |acc, _| &acc * q);
    let phi: Vec<AmbientElement> = (0..2)
        .map(|_| {
            let qs: Vec<Quat> = axes.iter().map(|u| pow(u, rng.gen_range(0..4))).collect();
            AmbientElement::sp1s(&qs).unwrap()
        })
        .collect();
    let g: Vec<Quat> = (0..3).map(|_| random_unit_quaternion(rng, 3)).collect();
    let ga = AmbientElement::sp1s(&g)?;
    let phi2 = phi.iter().map(|x| x.conjugate_by(&ga)).collect();
    pair(target, phi, phi2)
}
