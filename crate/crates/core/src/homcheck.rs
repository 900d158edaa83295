//! Element-conjugacy and global conjugacy of two homomorphisms `Γ → Ĝ/Z`.
//!
//! Global conjugacy is decided without searching for a conjugator. Two
//! homomorphisms into `Ĝ/Z` are globally conjugate exactly when, for some
//! twist `z : Γ → Z`, the map `w·a(γ) ↦ w·z(γ)·b(γ)` (with `a`, `b` lifts to
//! `Ĝ`) is an isomorphism `P → P′` of the finite preimage groups that preserves
//! every factor's character. Equal characters give a per-factor intertwiner,
//! which can be normalized into the factor (`SU(n)`: scale by an `n`-th root
//! of the determinant; `Sp(1)`: the quaternionic structure is preserved by the
//! real character; `SO(3)`: flip the sign of a 3-dimensional intertwiner).

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::conjtest::{character_vector, conjugate_modulo_z};
use crate::error::{GroupError, GroupResult};
use crate::exactalg::CycNum;
use crate::fingrp::{closure, hom_from_gens, FinGroup, Hom, Label};
use crate::grpcore::{AmbientElement, FactorElem, GroupSpec, QuotElement};

/// Two homomorphisms from the same finite group into the same quotient.
#[derive(Clone, Debug)]
pub struct HomPair<E: Label> {
    source: Arc<FinGroup<E>>,
    target: Arc<GroupSpec>,
    phi: Hom<QuotElement>,
    phi2: Hom<QuotElement>,
    kernels_equal: bool,
}

impl<E: Label> HomPair<E> {
    pub fn new(
        source: Arc<FinGroup<E>>,
        target: Arc<GroupSpec>,
        phi: Hom<QuotElement>,
        phi2: Hom<QuotElement>,
    ) -> GroupResult<Self> {
        for h in [&phi, &phi2] {
            if h.images().len() != source.order() {
                return Err(GroupError::Precondition("homomorphism has the wrong source".into()));
            }
            if h.images().iter().any(|q| **q.spec() != *target) {
                return Err(GroupError::FactorMismatch("image outside the target group".into()));
            }
        }
        let k1 = phi.kernel(|q| q.is_identity());
        let k2 = phi2.kernel(|q| q.is_identity());
        Ok(HomPair { source, target, phi, phi2, kernels_equal: k1 == k2 })
    }

    /// Builds both homomorphisms from generator images in `Ĝ`, verifying each.
    pub fn from_generator_images(
        source: Arc<FinGroup<E>>,
        target: Arc<GroupSpec>,
        gens: &[usize],
        phi_images: &[AmbientElement],
        phi2_images: &[AmbientElement],
    ) -> GroupResult<Self> {
        let id = QuotElement::from_ambient(&target, &target.identity_ambient());
        let lift = |xs: &[AmbientElement]| -> GroupResult<Vec<QuotElement>> {
            xs.iter().map(|x| crate::grpcore::quot(&target, x)).collect()
        };
        let phi = hom_from_gens(&source, gens, &lift(phi_images)?, &id)?;
        let phi2 = hom_from_gens(&source, gens, &lift(phi2_images)?, &id)?;
        HomPair::new(source, target, phi, phi2)
    }

    pub fn source(&self) -> &Arc<FinGroup<E>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroupSpec> {
        &self.target
    }

    pub fn phi(&self) -> &Hom<QuotElement> {
        &self.phi
    }

    pub fn phi2(&self) -> &Hom<QuotElement> {
        &self.phi2
    }

    pub fn kernels_equal(&self) -> bool {
        self.kernels_equal
    }

    /// The same pair with the two homomorphisms exchanged.
    pub fn swapped(&self) -> Self {
        HomPair {
            source: self.source.clone(),
            target: self.target.clone(),
            phi: self.phi2.clone(),
            phi2: self.phi.clone(),
            kernels_equal: self.kernels_equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementConjugacy {
    pub holds: bool,
    /// First source element (by index) whose images are not conjugate.
    pub first_failure: Option<usize>,
}

pub fn is_element_conjugate<E: Label>(p: &HomPair<E>) -> ElementConjugacy {
    for x in 0..p.source.order() {
        if !conjugate_modulo_z(&p.target, p.phi.image(x).rep(), p.phi2.image(x).rep()) {
            return ElementConjugacy { holds: false, first_failure: Some(x) };
        }
    }
    ElementConjugacy { holds: true, first_failure: None }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision")]
pub enum GlobalVerdict {
    GloballyConjugate {
        /// Index into `Z` (identity first) of the twist at every source element.
        twist: Vec<usize>,
        twists_examined: usize,
    },
    NotGloballyConjugate {
        kernel_mismatch: bool,
        twists_examined: usize,
    },
}

impl GlobalVerdict {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, GlobalVerdict::GloballyConjugate { .. })
    }

    pub fn twists_examined(&self) -> usize {
        match self {
            GlobalVerdict::GloballyConjugate { twists_examined, .. }
            | GlobalVerdict::NotGloballyConjugate { twists_examined, .. } => *twists_examined,
        }
    }
}

/// `Z` with its multiplication table and per-factor scalars.
struct ZData {
    elems: Vec<AmbientElement>,
    index: HashMap<AmbientElement, usize>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    /// Scalar by which each `z` acts in each factor's defining representation.
    scalars: Vec<Vec<CycNum>>,
}

impl ZData {
    fn new(g: &GroupSpec) -> ZData {
        let elems = g.z_elements().to_vec();
        let index: HashMap<AmbientElement, usize> = elems.iter().cloned().enumerate().map(|(i, z)| (z, i)).collect();
        let n = elems.len();
        let mut mul = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&elems[i].mul(&elems[j])];
            }
        }
        let inv = (0..n).map(|i| (0..n).find(|&j| mul[i * n + j] == 0).unwrap()).collect();
        let scalars = elems
            .iter()
            .map(|z| {
                z.parts()
                    .iter()
                    .map(|p| match p {
                        FactorElem::SU(m) => m.as_scalar().expect("central SU element is scalar"),
                        FactorElem::Sp1(q) => q.real_part().clone(),
                        FactorElem::SO3(_) => CycNum::one(),
                    })
                    .collect()
            })
            .collect();
        ZData { elems, index, mul, inv, scalars }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b]
    }

    fn lookup(&self, x: &AmbientElement) -> GroupResult<usize> {
        self.index
            .get(x)
            .copied()
            .ok_or_else(|| GroupError::Precondition("lift discrepancy is not central".into()))
    }
}

/// Decides global conjugacy using the canonical representatives as lifts.
pub fn decide_global<E: Label>(p: &HomPair<E>) -> GroupResult<GlobalVerdict> {
    decide_global_with_cap(p, crate::fingrp::DEFAULT_CLOSURE_CAP)
}

pub fn decide_global_with_cap<E: Label>(p: &HomPair<E>, cap: usize) -> GroupResult<GlobalVerdict> {
    let a: Vec<AmbientElement> = p.phi.images().iter().map(|q| q.rep().clone()).collect();
    let b: Vec<AmbientElement> = p.phi2.images().iter().map(|q| q.rep().clone()).collect();
    decide_global_with_lifts(p, &a, &b, cap)
}

/// A generating set for `g`: its recorded generators when they suffice,
/// otherwise a greedy one.
fn generating_set<E: Label>(g: &FinGroup<E>) -> Vec<usize> {
    if g.subgroup_indices(g.generators()).len() == g.order() {
        return g.generators().to_vec();
    }
    let mut gens = Vec::new();
    let mut reached = g.subgroup_indices(&gens);
    for x in 0..g.order() {
        if !reached.contains(&x) {
            gens.push(x);
            reached = g.subgroup_indices(&gens);
        }
    }
    gens
}

/// Twist-and-character decision with arbitrary lifts `a(γ)`, `b(γ)` of the two
/// homomorphisms.
pub fn decide_global_with_lifts<E: Label>(
    p: &HomPair<E>,
    a: &[AmbientElement],
    b: &[AmbientElement],
    cap: usize,
) -> GroupResult<GlobalVerdict> {
    if !p.kernels_equal {
        return Ok(GlobalVerdict::NotGloballyConjugate { kernel_mismatch: true, twists_examined: 0 });
    }
    let src = &*p.source;
    let g = &*p.target;
    let n = src.order();
    for x in 0..n {
        if QuotElement::from_ambient(&p.target, &a[x]) != *p.phi.image(x)
            || QuotElement::from_ambient(&p.target, &b[x]) != *p.phi2.image(x)
        {
            return Err(GroupError::Precondition(format!("lift of element {x} is not in its coset")));
        }
    }
    let z = ZData::new(g);
    let nz = z.len();

    let gens = generating_set(src);
    let k = gens.len();
    let mut pgens: Vec<AmbientElement> = gens.iter().map(|&s| a[s].clone()).collect();
    pgens.extend(g.central_gens().iter().cloned());
    let pgrp = closure(&g.identity_ambient(), &pgens, cap)?;
    if pgrp.order() != p.phi.image_size() * nz {
        return Err(GroupError::Precondition(format!(
            "preimage group has order {}, expected {}",
            pgrp.order(),
            p.phi.image_size() * nz
        )));
    }

    // Lift discrepancy cocycles on generator edges: a(x)a(s) = c(x,s)·a(xs).
    let cocycle = |lift: &[AmbientElement]| -> GroupResult<Vec<usize>> {
        let mut c = Vec::with_capacity(n * k);
        for x in 0..n {
            for &s in &gens {
                let xs = src.mul(x, s);
                c.push(z.lookup(&lift[x].mul(&lift[s]).mul(&lift[xs].inv()))?);
            }
        }
        Ok(c)
    };
    let c = cocycle(a)?;
    let c2 = cocycle(b)?;
    // z(xs) = z(x)·z(s)·c′(x,s)·c(x,s)⁻¹, abbreviated as z(x)·z(s)·delta(x,s).
    let delta: Vec<usize> = c.iter().zip(&c2).map(|(&u, &v)| z.m(v, z.inv[u])).collect();
    let z_e = z.lookup(&a[src.identity()].mul(&b[src.identity()].inv()))?;

    let (order, tree) = src.cayley_tree(&gens);
    let chars_a: Vec<Vec<CycNum>> = a.iter().map(character_vector).collect();
    let chars_b: Vec<Vec<CycNum>> = b.iter().map(character_vector).collect();

    // Elements sharing an image, for the well-definedness check.
    let mut first_with_image: HashMap<&QuotElement, usize> = HashMap::new();
    let mut same_image: Vec<(usize, usize, usize)> = Vec::new();
    for x in 0..n {
        match first_with_image.get(p.phi.image(x)) {
            Some(&x0) => {
                let w = z.lookup(&a[x].mul(&a[x0].inv()))?;
                same_image.push((x, x0, w));
            }
            None => {
                first_with_image.insert(p.phi.image(x), x);
            }
        }
    }

    let total = nz.pow(k as u32);
    let mut twist = vec![usize::MAX; n];
    for code in 0..total {
        let mut rest = code;
        // Most significant digit first, so seeds run in lexicographic order.
        let mut seed = vec![0usize; k];
        for d in (0..k).rev() {
            seed[d] = rest % nz;
            rest /= nz;
        }
        twist.iter_mut().for_each(|t| *t = usize::MAX);
        twist[src.identity()] = z_e;
        let mut ok = true;
        for &x in order.iter().skip(1) {
            let (parent, s) = tree[x].unwrap();
            twist[x] = z.m(z.m(twist[parent], seed[s]), delta[parent * k + s]);
        }
        'edges: for x in 0..n {
            for (si, &s) in gens.iter().enumerate() {
                let want = z.m(z.m(twist[x], seed[si]), delta[x * k + si]);
                if twist[src.mul(x, s)] != want {
                    ok = false;
                    break 'edges;
                }
            }
        }
        // The seed must agree with the propagated value at each generator.
        if ok && gens.iter().enumerate().any(|(si, &s)| twist[s] != seed[si]) {
            ok = false;
        }
        if ok {
            for &(x, x0, w) in &same_image {
                let lhs = z.elems[twist[x]].mul(&b[x]);
                let rhs = z.elems[z.m(w, twist[x0])].mul(&b[x0]);
                if lhs != rhs {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            ok = (0..n).all(|x| {
                chars_a[x]
                    .iter()
                    .zip(&chars_b[x])
                    .zip(&z.scalars[twist[x]])
                    .all(|((ca, cb), s)| *ca == cb * s)
            });
        }
        if ok {
            return Ok(GlobalVerdict::GloballyConjugate { twist, twists_examined: code + 1 });
        }
    }
    Ok(GlobalVerdict::NotGloballyConjugate { kernel_mismatch: false, twists_examined: total })
}

/// Independent decision for abelian sources with simultaneously diagonal images.
///
/// Commuting diagonal families in `SU(n)` are conjugate exactly when one
/// permutation of the coordinates carries the joint weights of one family onto
/// the other; circle subgroups of `Sp(1)` admit only the identity and the
/// inversion. The pair is globally conjugate iff some choice of permutation
/// per `SU` factor and inversion flag per `Sp(1)` factor matches `b(γ)` with
/// `a(γ)` up to a central element of `Z`, separately for each `γ`.
pub fn abelian_weight_oracle<E: Label>(p: &HomPair<E>) -> GroupResult<bool> {
    let src = &*p.source;
    if !src.is_abelian() {
        return Err(GroupError::Precondition("source group is not abelian".into()));
    }
    let g = &*p.target;
    let n = src.order();
    let a: Vec<&AmbientElement> = p.phi.images().iter().map(|q| q.rep()).collect();
    let b: Vec<&AmbientElement> = p.phi2.images().iter().map(|q| q.rep()).collect();
    // Per factor, the diagonal weights of every element.
    let nf = g.factors().len();
    let weights = |lift: &[&AmbientElement]| -> GroupResult<Vec<Vec<Vec<CycNum>>>> {
        (0..nf)
            .map(|f| {
                lift.iter()
                    .map(|x| match &x.parts()[f] {
                        FactorElem::SU(m) if m.is_diagonal() => Ok(m.diagonal()),
                        FactorElem::Sp1(q) if q.c.is_zero() && q.d.is_zero() => Ok(vec![q.a.clone(), q.b.clone()]),
                        _ => Err(GroupError::Precondition("image is not diagonal".into())),
                    })
                    .collect()
            })
            .collect()
    };
    let wa = weights(&a)?;
    let wb = weights(&b)?;
    let z = ZData::new(g);

    // Candidate symmetries per factor, each a map on weight vectors.
    let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
    for f in 0..nf {
        match g.factors()[f] {
            crate::grpcore::FactorKind::SU(m) => choices.push(permutations(m)),
            // [0] keeps the circle element, [1] inverts it.
            crate::grpcore::FactorKind::Sp1 => choices.push(vec![vec![0], vec![1]]),
            crate::grpcore::FactorKind::SO3 => {
                return Err(GroupError::Precondition("SO(3) factors are outside the oracle's domain".into()))
            }
        }
    }
    let apply = |f: usize, choice: &[usize], w: &[CycNum], scalar: &CycNum| -> Vec<CycNum> {
        match g.factors()[f] {
            crate::grpcore::FactorKind::SU(_) => choice.iter().map(|&i| &w[i] * scalar).collect(),
            _ => {
                let im = if choice[0] == 1 { -&w[1] } else { w[1].clone() };
                vec![&w[0] * scalar, &im * scalar]
            }
        }
    };
    let mut pick = vec![0usize; nf];
    loop {
        let matches = (0..n).all(|x| {
            (0..z.len()).any(|t| {
                (0..nf).all(|f| apply(f, &choices[f][pick[f]], &wa[f][x], &z.scalars[t][f]) == wb[f][x])
            })
        });
        if matches {
            return Ok(true);
        }
        let mut f = 0;
        loop {
            if f == nf {
                return Ok(false);
            }
            pick[f] += 1;
            if pick[f] < choices[f].len() {
                break;
            }
            pick[f] = 0;
            f += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    heap_permute(k - 1, a, out);
    for i in 0..k - 1 {
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
        heap_permute(k - 1, a, out);
    }
}
