//! The X/Y criterion for `G = Sp(1)³/⟨(1,−1,−1),(−1,1,−1)⟩`.
//!
//! `Ḡ = SO(3)³` is the image of `G` under the adjoint map `π`, whose kernel
//! `Z_G` has order two. For a finite `Γ̄ ⊂ Ḡ` the centralizer quotient
//! `X = Z_Ḡ(Γ̄)/π(Z_G(π⁻¹Γ̄))` embeds in `Y = Hom(Γ̄/Γ̄′, Z_G)`; `G` is
//! unacceptable exactly when this embedding fails to be onto for some `Γ̄`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, GroupResult};
use crate::exactalg::{CycNum, ExactMatrix};
use crate::fingrp::{closure, hom_set_to_elem_abelian_2, quotient_by_central, FinGroup, GroupMap, Hom, DEFAULT_CLOSURE_CAP};
use crate::grpcore::{adjoint_to_so3, center, quot, AmbientElement, FactorElem, FactorKind, GroupSpec, Quat, QuotElement};
use crate::homcheck::HomPair;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationInfo {
    /// Rotation axis scaled so its first nonzero coordinate is 1; `None` for `I`.
    pub axis: Option<[CycNum; 3]>,
    pub trace: CycNum,
    pub is_half_turn: bool,
    pub is_identity: bool,
}

pub fn rotation_info(r: &ExactMatrix) -> GroupResult<RotationInfo> {
    if r.rows() != 3 || r.cols() != 3 {
        return Err(GroupError::InvalidElement("rotation must be 3x3".into()));
    }
    let trace = r.trace()?;
    if r.is_identity() {
        return Ok(RotationInfo { axis: None, trace, is_half_turn: false, is_identity: true });
    }
    let fixed = (r - &ExactMatrix::identity(3)).nullspace()?;
    if fixed.dim() != 1 {
        return Err(GroupError::InvalidElement("not a rotation".into()));
    }
    let axis = canonical_axis(&fixed.basis()[0]).expect("nonzero axis");
    let is_half_turn = trace == CycNum::from_i64(-1);
    Ok(RotationInfo { axis: Some(axis), trace, is_half_turn, is_identity: false })
}

fn canonical_axis(v: &[CycNum]) -> Option<[CycNum; 3]> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let s = lead.inv()?;
    Some([&v[0] * &s, &v[1] * &s, &v[2] * &s])
}

fn dot(a: &[CycNum; 3], b: &[CycNum; 3]) -> CycNum {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

fn cross(a: &[CycNum; 3], b: &[CycNum; 3]) -> [CycNum; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// `2vvᵀ/(v·v) − I`.
fn half_turn(v: &[CycNum; 3]) -> GroupResult<ExactMatrix> {
    let n = dot(v, v).inv().ok_or(GroupError::InvalidElement("isotropic axis".into()))?;
    let two_n = &CycNum::from_i64(2) * &n;
    let mut rows = Vec::with_capacity(3);
    for i in 0..3 {
        let mut row = Vec::with_capacity(3);
        for j in 0..3 {
            let mut e = &(&v[i] * &v[j]) * &two_n;
            if i == j {
                e = &e - &CycNum::one();
            }
            row.push(e);
        }
        rows.push(row);
    }
    Ok(ExactMatrix::from_rows(rows)?)
}

/// A centralizer that is either a finite group or positive-dimensional.
#[derive(Clone, Debug)]
pub enum Centralizer<E: crate::fingrp::Label> {
    Finite(FinGroup<E>),
    Infinite,
}

impl<E: crate::fingrp::Label> Centralizer<E> {
    pub fn finite(self) -> Option<FinGroup<E>> {
        match self {
            Centralizer::Finite(g) => Some(g),
            Centralizer::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Centralizer::Infinite)
    }
}

/// Centralizer in `SO(3)` of a finite rotation group.
///
/// Two nontrivial rotations commute iff they share an axis or are half-turns
/// about perpendicular axes. Unless every element shares one axis the
/// centralizer is finite and consists of `I` and half-turns about axes `v` such
/// that every nontrivial element either has axis `v` or is a half-turn about an
/// axis perpendicular to `v`.
pub fn so3_centralizer(delta: &FinGroup<ExactMatrix>) -> GroupResult<Centralizer<ExactMatrix>> {
    let infos: Vec<RotationInfo> = delta
        .elements()
        .iter()
        .map(rotation_info)
        .collect::<GroupResult<_>>()?;
    let nontrivial: Vec<&RotationInfo> = infos.iter().filter(|r| !r.is_identity).collect();
    let mut axes: Vec<[CycNum; 3]> = Vec::new();
    for r in &nontrivial {
        let a = r.axis.clone().unwrap();
        if !axes.contains(&a) {
            axes.push(a);
        }
    }
    if axes.len() <= 1 {
        return Ok(Centralizer::Infinite);
    }
    let mut candidates = axes.clone();
    for i in 0..axes.len() {
        for j in i + 1..axes.len() {
            if let Some(c) = canonical_axis(&cross(&axes[i], &axes[j])) {
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
        }
    }
    let mut gens = Vec::new();
    for v in &candidates {
        let ok = nontrivial.iter().all(|h| {
            let a = h.axis.as_ref().unwrap();
            a == v || (h.is_half_turn && dot(a, v).is_zero())
        });
        if ok {
            let t = half_turn(v)?;
            for &g in delta.generators() {
                if !t.commutes_with(delta.element(g))? {
                    return Err(GroupError::Precondition("half-turn candidate fails to commute".into()));
                }
            }
            gens.push(t);
        }
    }
    gens.sort();
    Ok(Centralizer::Finite(closure(&ExactMatrix::identity(3), &gens, DEFAULT_CLOSURE_CAP)?))
}

/// Centralizer in `Sp(1)` of a finite group of unit quaternions.
pub fn sp1_centralizer(delta: &FinGroup<Quat>) -> GroupResult<Centralizer<Quat>> {
    let imags: Vec<[CycNum; 3]> =
        delta.elements().iter().filter(|q| !q.is_pm_one()).map(|q| q.imag()).collect();
    for (x, a) in imags.iter().enumerate() {
        for b in &imags[x + 1..] {
            if cross(a, b).iter().any(|c| !c.is_zero()) {
                return Ok(Centralizer::Finite(closure(&Quat::one(), &[Quat::minus_one()], DEFAULT_CLOSURE_CAP)?));
            }
        }
    }
    Ok(Centralizer::Infinite)
}

/// A unit quaternion lifting the rotation `r`, when one exists with
/// coordinates in the supported fields.
pub fn lift_rotation(r: &ExactMatrix) -> GroupResult<Quat> {
    let g = |i: usize, j: usize| r.get(i, j).clone();
    let t = r.trace()?;
    let unsupported = || GroupError::Unsupported("rotation lift needs a non-cyclotomic square root".into());
    let q = if t != CycNum::from_i64(-1) {
        let a = (&(&t + &CycNum::one()) * &CycNum::frac(1, 4)).sqrt_rational().ok_or_else(unsupported)?;
        let f = (&CycNum::from_i64(4) * &a).inv().unwrap();
        Quat::new_unchecked(
            a,
            &(&g(2, 1) - &g(1, 2)) * &f,
            &(&g(0, 2) - &g(2, 0)) * &f,
            &(&g(1, 0) - &g(0, 1)) * &f,
        )
    } else {
        // Half-turn: r + I = 2vvᵀ.
        let i = (0..3).find(|&i| g(i, i) != CycNum::from_i64(-1)).ok_or_else(unsupported)?;
        let vi = (&(&g(i, i) + &CycNum::one()) * &CycNum::frac(1, 2)).sqrt_rational().ok_or_else(unsupported)?;
        let f = (&CycNum::from_i64(2) * &vi).inv().unwrap();
        let mut v = [CycNum::zero(), CycNum::zero(), CycNum::zero()];
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = if j == i { vi.clone() } else { &g(i, j) * &f };
        }
        let [b, c, d] = v;
        Quat::new_unchecked(CycNum::zero(), b, c, d)
    };
    if adjoint_to_so3(&q) != *r || !q.norm_sq().is_one() {
        return Err(unsupported());
    }
    Ok(q)
}

/// Indices of `Γ̄′`: generated by squares and by elements none of whose
/// components is a half-turn.
pub fn gamma_bar_prime(gbar: &FinGroup<AmbientElement>) -> GroupResult<Vec<usize>> {
    let minus_one = CycNum::from_i64(-1);
    let mut gens = BTreeSet::new();
    for x in 0..gbar.order() {
        gens.insert(gbar.mul(x, x));
        let no_half_turn = gbar.element(x).parts().iter().all(|p| match p {
            FactorElem::SO3(m) => m.trace().map(|t| t != minus_one).unwrap_or(false),
            _ => false,
        });
        if no_half_turn {
            gens.insert(x);
        }
    }
    let gens: Vec<usize> = gens.into_iter().collect();
    let sub = gbar.subgroup_indices(&gens);
    if !gbar.is_normal(&sub) {
        return Err(GroupError::NotNormal);
    }
    Ok(sub)
}

fn pi_elem(x: &AmbientElement) -> AmbientElement {
    AmbientElement::new_unchecked(
        x.parts()
            .iter()
            .map(|p| match p {
                FactorElem::Sp1(q) => FactorElem::SO3(adjoint_to_so3(q)),
                other => other.clone(),
            })
            .collect(),
    )
}

fn so3_component(x: &AmbientElement, f: usize) -> ExactMatrix {
    match &x.parts()[f] {
        FactorElem::SO3(m) => m.clone(),
        _ => unreachable!("Γ̄ elements are rotation triples"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub gamma_order: usize,
    pub gamma_bar_order: usize,
    pub zbar_centralizer_order: usize,
    pub pi_centralizer_order: usize,
    pub x_order: usize,
    pub gamma_bar_quotient_order: usize,
    pub y_order: usize,
    pub phi_injective: bool,
    pub phi_surjective: bool,
    /// Values in `Z_G` (false = trivial) of a character outside the image of
    /// `φ`, on the generators of `Γ`.
    pub witness_chi: Option<Vec<bool>>,
}

/// Everything computed while deciding the criterion, kept for witness building.
#[derive(Clone, Debug)]
pub struct Criterion {
    spec: Arc<GroupSpec>,
    gamma: Arc<FinGroup<QuotElement>>,
    gbar: FinGroup<AmbientElement>,
    /// `π` on `Γ`, as indices into `Γ̄`.
    proj: Vec<usize>,
    /// Projection `Γ̄ → Γ̄/Γ̄′`.
    q_proj: GroupMap,
    /// `Y`, each member a map `Γ̄/Γ̄′ → Z_G` (index 0 is the identity of `Z_G`).
    y: Vec<GroupMap>,
    /// Indices into `y` hit by `φ`.
    image: BTreeSet<usize>,
    report: CriterionReport,
}

#[derive(Clone, Debug)]
pub enum CriterionOutcome {
    Decided(Box<Criterion>),
    /// The factor whose projection of `Γ̄` has an infinite centralizer.
    NotApplicable { factor: usize },
}

fn z_quotient_class(g: &GroupSpec, zhat: &AmbientElement) -> GroupResult<bool> {
    if !zhat.is_central() {
        return Err(GroupError::NotCentral(0));
    }
    Ok(!g.is_in_z(zhat))
}

/// Whether `g` is `Sp(1)³/⟨(1,−1,−1),(−1,1,−1)⟩`.
pub fn is_target_group(g: &GroupSpec) -> bool {
    if g.factors() != [FactorKind::Sp1; 3] || g.z_order() != 4 {
        return false;
    }
    let m = Quat::minus_one();
    let o = Quat::one();
    [[o.clone(), m.clone(), m.clone()], [m.clone(), o.clone(), m.clone()]]
        .iter()
        .all(|t| g.is_in_z(&AmbientElement::sp1s(t).unwrap()))
}

/// Decides the criterion for `Γ̄ = π(⟨gens⟩)` with `gens ⊂ Sp(1)³`.
pub fn decide_criterion(g: &Arc<GroupSpec>, gens: &[AmbientElement]) -> GroupResult<CriterionOutcome> {
    decide_criterion_with_cap(g, gens, DEFAULT_CLOSURE_CAP)
}

pub fn decide_criterion_with_cap(
    g: &Arc<GroupSpec>,
    gens: &[AmbientElement],
    cap: usize,
) -> GroupResult<CriterionOutcome> {
    if !is_target_group(g) {
        return Err(GroupError::Precondition("criterion is only defined for Sp(1)^3/<(1,-1,-1),(-1,1,-1)>".into()));
    }
    let z0 = AmbientElement::sp1s(&[Quat::minus_one(), Quat::minus_one(), Quat::minus_one()])?;
    let mut qgens: Vec<QuotElement> = gens.iter().map(|x| quot(g, x)).collect::<GroupResult<_>>()?;
    let zg_elem = quot(g, &z0)?;
    if !qgens.contains(&zg_elem) {
        qgens.push(zg_elem);
    }
    let id = QuotElement::from_ambient(g, &g.identity_ambient());
    let gamma = Arc::new(closure(&id, &qgens, cap)?);

    let bar_id = AmbientElement::identity(&[FactorKind::SO3; 3]);
    let bar_gens: Vec<AmbientElement> = gens.iter().map(pi_elem).collect();
    let gbar = closure(&bar_id, &bar_gens, cap)?;
    if gamma.order() != 2 * gbar.order() {
        return Err(GroupError::Precondition("π⁻¹(Γ̄) has the wrong order".into()));
    }
    let proj: Vec<usize> = gamma
        .elements()
        .iter()
        .map(|x| gbar.index_of(&pi_elem(x.rep())).expect("π(Γ) ⊂ Γ̄"))
        .collect();

    // Factorwise centralizers.
    let mut factor_cents = Vec::with_capacity(3);
    for f in 0..3 {
        let comp_gens: Vec<ExactMatrix> = bar_gens.iter().map(|x| so3_component(x, f)).collect();
        let delta = closure(&ExactMatrix::identity(3), &comp_gens, cap)?;
        match so3_centralizer(&delta)? {
            Centralizer::Finite(c) => factor_cents.push(c),
            Centralizer::Infinite => return Ok(CriterionOutcome::NotApplicable { factor: f }),
        }
    }
    let mut zbar: Vec<AmbientElement> = vec![bar_id.clone()];
    for (f, c) in factor_cents.iter().enumerate() {
        let mut next = Vec::with_capacity(zbar.len() * c.order());
        for x in &zbar {
            for m in c.elements() {
                let mut parts = x.parts().to_vec();
                parts[f] = FactorElem::SO3(m.clone());
                next.push(AmbientElement::new_unchecked(parts));
            }
        }
        zbar = next;
    }
    zbar.sort();
    for c in &zbar {
        for &x in gbar.generators() {
            if c.mul(gbar.element(x)) != gbar.element(x).mul(c) {
                return Err(GroupError::Precondition("factorwise centralizer fails to centralize Γ̄".into()));
            }
        }
    }

    // χ_c on Γ̄ for every c ∈ Z_Ḡ(Γ̄), via quaternion lifts.
    let signs: Vec<AmbientElement> = (0..8u32)
        .map(|bits| {
            let qs: Vec<Quat> =
                (0..3).map(|f| if bits >> f & 1 == 1 { Quat::minus_one() } else { Quat::one() }).collect();
            AmbientElement::sp1s(&qs).unwrap()
        })
        .collect();
    let mut chis: Vec<Vec<bool>> = Vec::with_capacity(zbar.len());
    for c in &zbar {
        let qs: Vec<Quat> =
            (0..3).map(|f| lift_rotation(&so3_component(c, f))).collect::<GroupResult<_>>()?;
        let base = AmbientElement::sp1s(&qs)?;
        let mut chi_c: Option<Vec<bool>> = None;
        for s in &signs {
            let lift = base.mul(s);
            let mut chi = vec![None; gbar.order()];
            for (x, xq) in gamma.elements().iter().enumerate() {
                let xh = xq.rep();
                let comm = lift.mul(xh).mul(&lift.inv()).mul(&xh.inv());
                let v = z_quotient_class(g, &comm)?;
                match chi[proj[x]] {
                    None => chi[proj[x]] = Some(v),
                    Some(w) if w != v => {
                        return Err(GroupError::Precondition("χ is not well defined on Γ̄".into()))
                    }
                    _ => {}
                }
            }
            let chi: Vec<bool> = chi.into_iter().map(Option::unwrap).collect();
            match &chi_c {
                None => chi_c = Some(chi),
                Some(prev) if *prev != chi => {
                    return Err(GroupError::Precondition("χ depends on the chosen lift".into()))
                }
                _ => {}
            }
        }
        chis.push(chi_c.unwrap());
    }
    let pi_centralizer_order = chis.iter().filter(|c| c.iter().all(|&v| !v)).count();
    let x_order = zbar.len() / pi_centralizer_order;

    let gprime = gamma_bar_prime(&gbar)?;
    let (qgrp, q_proj) = quotient_by_central(&gbar, &gprime)?;
    let zg = center(g)?;
    if zg.order() != 2 {
        return Err(GroupError::Precondition("Z_G must have order 2".into()));
    }
    let y = hom_set_to_elem_abelian_2(&qgrp, &zg)?;
    let zg_id = zg.identity();

    let mut image = BTreeSet::new();
    for chi in &chis {
        let hit = y.iter().position(|m| {
            (0..gbar.order()).all(|x| (m.images[q_proj.images[x]] != zg_id) == chi[x])
        });
        match hit {
            Some(k) => {
                image.insert(k);
            }
            None => return Err(GroupError::Precondition("χ_c is not trivial on Γ̄′".into())),
        }
    }
    let phi_injective = image.len() == x_order;
    if !phi_injective {
        return Err(GroupError::Precondition("φ is not injective".into()));
    }
    let phi_surjective = image.len() == y.len();

    let mut crit = Criterion {
        spec: g.clone(),
        gamma,
        gbar,
        proj,
        q_proj,
        y,
        image,
        report: CriterionReport {
            gamma_order: 0,
            gamma_bar_order: 0,
            zbar_centralizer_order: zbar.len(),
            pi_centralizer_order,
            x_order,
            gamma_bar_quotient_order: qgrp.order(),
            y_order: 0,
            phi_injective,
            phi_surjective,
            witness_chi: None,
        },
    };
    crit.report.gamma_order = crit.gamma.order();
    crit.report.gamma_bar_order = crit.gbar.order();
    crit.report.y_order = crit.y.len();
    crit.report.witness_chi = (0..crit.y.len()).find(|k| !crit.image.contains(k)).map(|k| crit.chi_on_generators(k));
    Ok(CriterionOutcome::Decided(Box::new(crit)))
}

impl Criterion {
    pub fn report(&self) -> &CriterionReport {
        &self.report
    }

    pub fn gamma(&self) -> &Arc<FinGroup<QuotElement>> {
        &self.gamma
    }

    pub fn gamma_bar(&self) -> &FinGroup<AmbientElement> {
        &self.gbar
    }

    fn chi_value(&self, k: usize, x: usize) -> bool {
        let zg_id = 0;
        self.y[k].images[self.q_proj.images[self.proj[x]]] != zg_id
    }

    fn chi_on_generators(&self, k: usize) -> Vec<bool> {
        self.gamma.generators().iter().map(|&x| self.chi_value(k, x)).collect()
    }

    /// Index in `Y` of the character with the given values on the generators of `Γ`.
    pub fn character_index(&self, values: &[bool]) -> Option<usize> {
        (0..self.y.len()).find(|&k| self.chi_on_generators(k) == values)
    }

    /// Whether the character lies in the image of `φ`.
    pub fn in_image(&self, k: usize) -> bool {
        self.image.contains(&k)
    }

    /// The inclusion of `Γ` and its twist `x ↦ χ(π(x))·x` by a character outside
    /// the image of `φ` (the first one unless `chi` is given).
    pub fn build_witness_pair(&self, chi: Option<usize>) -> GroupResult<HomPair<QuotElement>> {
        let k = match chi {
            Some(k) if k < self.y.len() && !self.in_image(k) => k,
            Some(_) => return Err(GroupError::Precondition("character is in the image of φ".into())),
            None => (0..self.y.len())
                .find(|k| !self.in_image(*k))
                .ok_or_else(|| GroupError::Precondition("φ is surjective".into()))?,
        };
        let z0 = quot(
            &self.spec,
            &AmbientElement::sp1s(&[Quat::minus_one(), Quat::minus_one(), Quat::minus_one()])?,
        )?;
        let gens = self.gamma.generators().to_vec();
        let phi = Hom::from_images(self.gamma.elements().to_vec(), gens.clone());
        let twisted: Vec<QuotElement> = self
            .gamma
            .elements()
            .iter()
            .enumerate()
            .map(|(x, e)| if self.chi_value(k, x) { crate::fingrp::GroupElement::op(&z0, e) } else { e.clone() })
            .collect();
        let phi2 = Hom::from_images(twisted, gens);
        phi.verify_all_pairs(&self.gamma)?;
        phi2.verify_all_pairs(&self.gamma)?;
        HomPair::new(self.gamma.clone(), self.spec.clone(), phi, phi2)
    }
}

/// The group of the criterion.
pub fn target_group() -> Arc<GroupSpec> {
    let m = Quat::minus_one();
    let o = Quat::one();
    crate::grpcore::make_group(
        vec![FactorKind::Sp1; 3],
        vec![
            AmbientElement::sp1s(&[o.clone(), m.clone(), m.clone()]).unwrap(),
            AmbientElement::sp1s(&[m.clone(), o, m]).unwrap(),
        ],
    )
    .expect("finite center")
}

/// `(j,η,η), (η,j,η), (η,η,j), (i,i,i)`.
pub fn example_generators() -> Vec<AmbientElement> {
    let (j, e, i) = (Quat::j(), Quat::eta(), Quat::i());
    vec![
        AmbientElement::sp1s(&[j.clone(), e.clone(), e.clone()]).unwrap(),
        AmbientElement::sp1s(&[e.clone(), j.clone(), e.clone()]).unwrap(),
        AmbientElement::sp1s(&[e.clone(), e, j]).unwrap(),
        AmbientElement::sp1s(&[i.clone(), i.clone(), i]).unwrap(),
    ]
}
