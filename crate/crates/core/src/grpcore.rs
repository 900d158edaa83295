//! Elements of products of `SU(n)`, `Sp(1)` and `SO(3)` and their quotients by
//! finite central subgroups.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, GroupResult};
use crate::exactalg::{CycNum, ExactMatrix};
use crate::fingrp::{closure, FinGroup, GroupElement, DEFAULT_CLOSURE_CAP};

/// A simple factor of the ambient product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    SU(usize),
    Sp1,
    SO3,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::SU(n) => write!(f, "SU({n})"),
            FactorKind::Sp1 => write!(f, "Sp(1)"),
            FactorKind::SO3 => write!(f, "SO(3)"),
        }
    }
}

/// Quaternion `a + bi + cj + dk` with real cyclotomic components.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quat {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
    pub d: CycNum,
}

impl Quat {
    /// A unit quaternion; rejects non-real components and non-unit norm.
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> GroupResult<Quat> {
        let q = Quat { a, b, c, d };
        if ![&q.a, &q.b, &q.c, &q.d].iter().all(|x| x.is_real()) {
            return Err(GroupError::InvalidElement("quaternion component is not real".into()));
        }
        if !q.norm_sq().is_one() {
            return Err(GroupError::InvalidElement(format!("quaternion norm² is {}", q.norm_sq())));
        }
        Ok(q)
    }

    pub fn new_unchecked(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Quat {
        Quat { a, b, c, d }
    }

    pub fn one() -> Quat {
        Quat::new_unchecked(CycNum::one(), CycNum::zero(), CycNum::zero(), CycNum::zero())
    }

    pub fn minus_one() -> Quat {
        -&Quat::one()
    }

    pub fn i() -> Quat {
        Quat::new_unchecked(CycNum::zero(), CycNum::one(), CycNum::zero(), CycNum::zero())
    }

    pub fn j() -> Quat {
        Quat::new_unchecked(CycNum::zero(), CycNum::zero(), CycNum::one(), CycNum::zero())
    }

    pub fn k() -> Quat {
        Quat::new_unchecked(CycNum::zero(), CycNum::zero(), CycNum::zero(), CycNum::one())
    }

    /// `η = (1 + i)/√2`.
    pub fn eta() -> Quat {
        let h = CycNum::sqrt2().scale(&num_rational::BigRational::new(1.into(), 2.into()));
        Quat::new_unchecked(h.clone(), h, CycNum::zero(), CycNum::zero())
    }

    /// `cos(2πk/m) + sin(2πk/m)·i`.
    pub fn circle(k: i64, m: u32) -> Quat {
        Quat::new_unchecked(CycNum::cos_2pi(k, m), CycNum::sin_2pi(k, m), CycNum::zero(), CycNum::zero())
    }

    pub fn norm_sq(&self) -> CycNum {
        &(&(&self.a * &self.a) + &(&self.b * &self.b)) + &(&(&self.c * &self.c) + &(&self.d * &self.d))
    }

    /// Quaternion conjugate, the inverse of a unit quaternion.
    pub fn conj(&self) -> Quat {
        Quat::new_unchecked(self.a.clone(), -&self.b, -&self.c, -&self.d)
    }

    pub fn real_part(&self) -> &CycNum {
        &self.a
    }

    pub fn imag(&self) -> [CycNum; 3] {
        [self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_pm_one(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn mul(&self, o: &Quat) -> Quat {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        Quat::new_unchecked(
            &(&(a1 * a2) - &(b1 * b2)) - &(&(c1 * c2) + &(d1 * d2)),
            &(&(a1 * b2) + &(b1 * a2)) + &(&(c1 * d2) - &(d1 * c2)),
            &(&(a1 * c2) - &(b1 * d2)) + &(&(c1 * a2) + &(d1 * b2)),
            &(&(a1 * d2) + &(b1 * c2)) + &(&(d1 * a2) - &(c1 * b2)),
        )
    }

    pub fn scale(&self, s: &CycNum) -> Quat {
        Quat::new_unchecked(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }
}

impl std::ops::Neg for &Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new_unchecked(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl std::ops::Mul for &Quat {
    type Output = Quat;
    fn mul(self, o: &Quat) -> Quat {
        Quat::mul(self, o)
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.a, self.b, self.c, self.d)
    }
}

/// Matrix of `v ↦ q v q⁻¹` on the ordered basis `(i, j, k)`.
pub fn adjoint_to_so3(q: &Quat) -> ExactMatrix {
    let (a, b, c, d) = (&q.a, &q.b, &q.c, &q.d);
    let sq = |x: &CycNum| x * x;
    let two = CycNum::from_i64(2);
    let tw = |x: CycNum| &two * &x;
    let rows = vec![
        vec![
            &(&sq(a) + &sq(b)) - &(&sq(c) + &sq(d)),
            tw(&(b * c) - &(a * d)),
            tw(&(b * d) + &(a * c)),
        ],
        vec![
            tw(&(b * c) + &(a * d)),
            &(&sq(a) - &sq(b)) + &(&sq(c) - &sq(d)),
            tw(&(c * d) - &(a * b)),
        ],
        vec![
            tw(&(b * d) - &(a * c)),
            tw(&(c * d) + &(a * b)),
            &(&sq(a) - &sq(b)) - &(&sq(c) - &sq(d)),
        ],
    ];
    ExactMatrix::from_rows(rows).expect("3x3 rotation")
}

/// One factor's component of an ambient element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum FactorElem {
    SU(ExactMatrix),
    Sp1(Quat),
    SO3(ExactMatrix),
}

impl FactorElem {
    pub fn kind(&self) -> FactorKind {
        match self {
            FactorElem::SU(m) => FactorKind::SU(m.rows()),
            FactorElem::Sp1(_) => FactorKind::Sp1,
            FactorElem::SO3(_) => FactorKind::SO3,
        }
    }

    pub fn identity(kind: FactorKind) -> FactorElem {
        match kind {
            FactorKind::SU(n) => FactorElem::SU(ExactMatrix::identity(n)),
            FactorKind::Sp1 => FactorElem::Sp1(Quat::one()),
            FactorKind::SO3 => FactorElem::SO3(ExactMatrix::identity(3)),
        }
    }

    pub fn validate(&self) -> GroupResult<()> {
        match self {
            FactorElem::SU(m) => {
                if m.rows() < 2 || !m.is_square() {
                    return Err(GroupError::InvalidElement(format!("SU block of shape {}x{}", m.rows(), m.cols())));
                }
                if !m.is_unitary()? {
                    return Err(GroupError::InvalidElement("SU block is not unitary".into()));
                }
                if !m.det()?.is_one() {
                    return Err(GroupError::InvalidElement("SU block has determinant ≠ 1".into()));
                }
            }
            FactorElem::Sp1(q) => {
                Quat::new(q.a.clone(), q.b.clone(), q.c.clone(), q.d.clone())?;
            }
            FactorElem::SO3(m) => {
                if m.rows() != 3 || m.cols() != 3 {
                    return Err(GroupError::InvalidElement("SO(3) block must be 3x3".into()));
                }
                if !m.entries().iter().all(|x| x.is_real()) {
                    return Err(GroupError::InvalidElement("SO(3) block is not real".into()));
                }
                if !m.is_orthogonal()? || !m.det()?.is_one() {
                    return Err(GroupError::InvalidElement("SO(3) block is not a rotation".into()));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, o: &FactorElem) -> FactorElem {
        match (self, o) {
            (FactorElem::SU(a), FactorElem::SU(b)) => FactorElem::SU(a * b),
            (FactorElem::Sp1(a), FactorElem::Sp1(b)) => FactorElem::Sp1(a * b),
            (FactorElem::SO3(a), FactorElem::SO3(b)) => FactorElem::SO3(a * b),
            _ => panic!("factor kind mismatch in product"),
        }
    }

    pub fn inv(&self) -> FactorElem {
        match self {
            FactorElem::SU(a) => FactorElem::SU(a.conj_transpose()),
            FactorElem::Sp1(q) => FactorElem::Sp1(q.conj()),
            FactorElem::SO3(a) => FactorElem::SO3(a.transpose()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            FactorElem::SU(a) | FactorElem::SO3(a) => a.is_identity(),
            FactorElem::Sp1(q) => q.is_one(),
        }
    }

    /// Whether the element lies in the center of its factor.
    pub fn is_central(&self) -> bool {
        match self {
            FactorElem::SU(m) => m.as_scalar().is_some(),
            FactorElem::Sp1(q) => q.is_pm_one(),
            FactorElem::SO3(m) => m.is_identity(),
        }
    }
}

impl fmt::Debug for FactorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorElem::SU(m) => write!(f, "SU{m:?}"),
            FactorElem::Sp1(q) => write!(f, "Sp1[{q:?}]"),
            FactorElem::SO3(m) => write!(f, "SO3{m:?}"),
        }
    }
}

/// A point of `G₁ × ⋯ × G_s`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AmbientElement {
    parts: Vec<FactorElem>,
}

impl AmbientElement {
    /// Validated constructor.
    pub fn new(parts: Vec<FactorElem>) -> GroupResult<Self> {
        for p in &parts {
            p.validate()?;
        }
        Ok(AmbientElement { parts })
    }

    pub fn new_unchecked(parts: Vec<FactorElem>) -> Self {
        AmbientElement { parts }
    }

    pub fn identity(factors: &[FactorKind]) -> Self {
        AmbientElement { parts: factors.iter().map(|&k| FactorElem::identity(k)).collect() }
    }

    pub fn su(m: ExactMatrix) -> GroupResult<Self> {
        AmbientElement::new(vec![FactorElem::SU(m)])
    }

    pub fn sp1s(qs: &[Quat]) -> GroupResult<Self> {
        AmbientElement::new(qs.iter().cloned().map(FactorElem::Sp1).collect())
    }

    pub fn parts(&self) -> &[FactorElem] {
        &self.parts
    }

    pub fn kinds(&self) -> Vec<FactorKind> {
        self.parts.iter().map(|p| p.kind()).collect()
    }

    pub fn mul(&self, o: &AmbientElement) -> AmbientElement {
        assert_eq!(self.parts.len(), o.parts.len(), "factor count mismatch in product");
        let out = AmbientElement { parts: self.parts.iter().zip(&o.parts).map(|(a, b)| a.mul(b)).collect() };
        debug_assert!(out.parts.iter().all(|p| p.validate().is_ok()), "product left the group");
        out
    }

    pub fn inv(&self) -> AmbientElement {
        AmbientElement { parts: self.parts.iter().map(|p| p.inv()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|p| p.is_identity())
    }

    pub fn is_central(&self) -> bool {
        self.parts.iter().all(|p| p.is_central())
    }

    pub fn conjugate_by(&self, g: &AmbientElement) -> AmbientElement {
        g.mul(self).mul(&g.inv())
    }
}

impl fmt::Debug for AmbientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.parts).finish()
    }
}

impl GroupElement for AmbientElement {
    fn op(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn inverse(&self) -> Self {
        self.inv()
    }
    fn identity_like(&self) -> Self {
        AmbientElement::identity(&self.kinds())
    }
}

/// `G = (G₁ × ⋯ × G_s)/Z` with `Z` enumerated.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<FactorKind>,
    central_gens: Vec<AmbientElement>,
    /// Elements of `Z`, identity first, then in ascending order.
    z: Vec<AmbientElement>,
}

/// Builds `G = Ĝ/Z` and enumerates `Z`.
pub fn make_group(factors: Vec<FactorKind>, central_gens: Vec<AmbientElement>) -> GroupResult<Arc<GroupSpec>> {
    make_group_with_cap(factors, central_gens, DEFAULT_CLOSURE_CAP)
}

pub fn make_group_with_cap(
    factors: Vec<FactorKind>,
    central_gens: Vec<AmbientElement>,
    cap: usize,
) -> GroupResult<Arc<GroupSpec>> {
    for k in &factors {
        if let FactorKind::SU(n) = k {
            if *n < 2 {
                return Err(GroupError::Unsupported(format!("SU({n})")));
            }
        }
    }
    for (idx, g) in central_gens.iter().enumerate() {
        if g.kinds() != factors {
            return Err(GroupError::FactorMismatch(format!("central generator {idx} has factors {:?}", g.kinds())));
        }
        for p in g.parts() {
            p.validate()?;
        }
        if !g.is_central() {
            return Err(GroupError::NotCentral(idx));
        }
    }
    let id = AmbientElement::identity(&factors);
    let zg = closure(&id, &central_gens, cap)?;
    let mut rest: Vec<AmbientElement> = zg.elements().iter().filter(|e| !e.is_identity()).cloned().collect();
    rest.sort();
    let mut z = vec![id];
    z.extend(rest);
    Ok(Arc::new(GroupSpec { factors, central_gens, z }))
}

impl GroupSpec {
    pub fn factors(&self) -> &[FactorKind] {
        &self.factors
    }

    pub fn central_gens(&self) -> &[AmbientElement] {
        &self.central_gens
    }

    /// Elements of `Z`, identity first.
    pub fn z_elements(&self) -> &[AmbientElement] {
        &self.z
    }

    pub fn z_order(&self) -> usize {
        self.z.len()
    }

    pub fn identity_ambient(&self) -> AmbientElement {
        AmbientElement::identity(&self.factors)
    }

    fn check(&self, x: &AmbientElement) -> GroupResult<()> {
        if x.kinds() != self.factors {
            return Err(GroupError::FactorMismatch(format!(
                "element factors {:?} vs group factors {:?}",
                x.kinds(),
                self.factors
            )));
        }
        Ok(())
    }

    /// Canonical representative of the coset `Z·x`: the identity for `Z`
    /// itself, otherwise the least element of the coset.
    pub fn canonical(&self, x: &AmbientElement) -> AmbientElement {
        if self.is_in_z(x) {
            return self.z[0].clone();
        }
        self.z
            .iter()
            .skip(1)
            .map(|z| z.mul(x))
            .fold(x.clone(), |best, c| if c < best { c } else { best })
    }

    pub fn is_in_z(&self, x: &AmbientElement) -> bool {
        self.z.contains(x)
    }
}

/// A coset of `Z`, held by its canonical representative.
#[derive(Clone)]
pub struct QuotElement {
    spec: Arc<GroupSpec>,
    rep: AmbientElement,
}

/// `x ↦ Zx`, validating the factor structure.
pub fn quot(g: &Arc<GroupSpec>, x: &AmbientElement) -> GroupResult<QuotElement> {
    g.check(x)?;
    for p in x.parts() {
        p.validate()?;
    }
    Ok(QuotElement { spec: g.clone(), rep: g.canonical(x) })
}

impl QuotElement {
    /// Projection without validating `x`.
    pub fn from_ambient(g: &Arc<GroupSpec>, x: &AmbientElement) -> QuotElement {
        QuotElement { spec: g.clone(), rep: g.canonical(x) }
    }

    pub fn rep(&self) -> &AmbientElement {
        &self.rep
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    pub fn is_identity(&self) -> bool {
        self.spec.is_in_z(&self.rep)
    }
}

impl PartialEq for QuotElement {
    fn eq(&self, o: &Self) -> bool {
        self.rep == o.rep
    }
}

impl Eq for QuotElement {}

impl Hash for QuotElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.rep.hash(h)
    }
}

impl PartialOrd for QuotElement {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QuotElement {
    fn cmp(&self, o: &Self) -> Ordering {
        self.rep.cmp(&o.rep)
    }
}

impl fmt::Debug for QuotElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.rep)
    }
}

impl Serialize for QuotElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rep.serialize(s)
    }
}

impl GroupElement for QuotElement {
    fn op(&self, o: &Self) -> Self {
        QuotElement { spec: self.spec.clone(), rep: self.spec.canonical(&self.rep.mul(&o.rep)) }
    }
    fn inverse(&self) -> Self {
        QuotElement { spec: self.spec.clone(), rep: self.spec.canonical(&self.rep.inv()) }
    }
    fn identity_like(&self) -> Self {
        QuotElement { spec: self.spec.clone(), rep: self.spec.identity_ambient() }
    }
}

/// `Z(Ĝ)/Z` as a finite group of cosets.
pub fn center(g: &Arc<GroupSpec>) -> GroupResult<FinGroup<QuotElement>> {
    let id = g.identity_ambient();
    let mut gens = Vec::new();
    for (idx, k) in g.factors.iter().enumerate() {
        let gen = match k {
            FactorKind::SU(n) => FactorElem::SU(ExactMatrix::scalar(*n, &CycNum::root_of_unity(*n as u32, 1))),
            FactorKind::Sp1 => FactorElem::Sp1(Quat::minus_one()),
            FactorKind::SO3 => continue,
        };
        let mut parts = id.parts().to_vec();
        parts[idx] = gen;
        gens.push(QuotElement::from_ambient(g, &AmbientElement::new_unchecked(parts)));
    }
    closure(&QuotElement::from_ambient(g, &id), &gens, DEFAULT_CLOSURE_CAP)
}
