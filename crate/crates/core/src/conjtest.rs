//! Conjugacy invariants per factor and conjugacy in central quotients.
//!
//! For finite-order elements the invariants are complete: characteristic
//! polynomial in `SU(n)`, real part in `Sp(1)`, trace in `SO(3)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{GroupError, GroupResult};
use crate::exactalg::CycNum;
use crate::grpcore::{AmbientElement, FactorElem, FactorKind, GroupSpec, QuotElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConjInvariant {
    CharPoly(Vec<CycNum>),
    RealPart(CycNum),
    Trace(CycNum),
}

pub fn invariant(x: &FactorElem) -> ConjInvariant {
    match x {
        FactorElem::SU(m) => ConjInvariant::CharPoly(m.char_poly().expect("square SU block")),
        FactorElem::Sp1(q) => ConjInvariant::RealPart(q.real_part().clone()),
        FactorElem::SO3(m) => ConjInvariant::Trace(m.trace().expect("square SO(3) block")),
    }
}

/// Invariant checked against an expected factor kind.
pub fn invariant_for(kind: FactorKind, x: &FactorElem) -> GroupResult<ConjInvariant> {
    if x.kind() != kind {
        return Err(GroupError::FactorMismatch(format!("{:?} is not an element of {kind}", x.kind())));
    }
    Ok(invariant(x))
}

pub fn invariants(x: &AmbientElement) -> Vec<ConjInvariant> {
    x.parts().iter().map(invariant).collect()
}

/// Whether `x` and `y` are conjugate in `G = Ĝ/Z`: some `z ∈ Z` makes `z·y`
/// factorwise conjugate to `x` in `Ĝ`.
pub fn elements_conjugate(g: &Arc<GroupSpec>, x: &QuotElement, y: &QuotElement) -> GroupResult<bool> {
    if **x.spec() != **g || **y.spec() != **g {
        return Err(GroupError::FactorMismatch("elements belong to a different group".into()));
    }
    Ok(conjugate_modulo_z(g, x.rep(), y.rep()))
}

pub(crate) fn conjugate_modulo_z(g: &GroupSpec, x: &AmbientElement, y: &AmbientElement) -> bool {
    let target = invariants(x);
    g.z_elements().iter().any(|z| invariants(&z.mul(y)) == target)
}

/// Per-factor character of the defining representation: trace for `SU(n)` and
/// `SO(3)`, twice the real part for `Sp(1)`.
pub fn character_vector(x: &AmbientElement) -> Vec<CycNum> {
    x.parts()
        .iter()
        .map(|p| match p {
            FactorElem::SU(m) | FactorElem::SO3(m) => m.trace().expect("square block"),
            FactorElem::Sp1(q) => q.real_part() * &CycNum::from_i64(2),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ExactMatrix;
    use crate::grpcore::{adjoint_to_so3, make_group, quot, Quat};

    fn i() -> CycNum {
        CycNum::i()
    }

    fn su(v: &[CycNum]) -> FactorElem {
        FactorElem::SU(ExactMatrix::diag(v))
    }

    #[test]
    fn sp1_invariants() {
        assert_eq!(invariant(&FactorElem::Sp1(Quat::i())), invariant(&FactorElem::Sp1(Quat::j())));
        assert_eq!(invariant(&FactorElem::Sp1(Quat::i())), ConjInvariant::RealPart(CycNum::zero()));
    }

    #[test]
    fn su4_invariants() {
        let one = CycNum::one();
        let a = su(&[one.clone(), i(), one.clone(), -i()]);
        let b = su(&[one.clone(), -i(), one, i()]);
        assert_eq!(invariant(&a), invariant(&b));
    }

    #[test]
    fn so3_invariants() {
        let s = ExactMatrix::from_i64(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 1]]).unwrap();
        let t = ExactMatrix::from_i64(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]).unwrap();
        assert_eq!(invariant(&FactorElem::SO3(s.clone())), ConjInvariant::Trace(CycNum::one()));
        assert_eq!(invariant(&FactorElem::SO3(t.clone())), ConjInvariant::Trace(CycNum::from_i64(-1)));
        assert_eq!(invariant(&FactorElem::SO3(&s * &s)), invariant(&FactorElem::SO3(t)));
        assert!(invariant_for(FactorKind::Sp1, &FactorElem::SO3(s)).is_err());
    }

    #[test]
    fn quotient_conjugacy_needs_z() {
        let g = make_group(
            vec![FactorKind::SU(4)],
            vec![AmbientElement::su(ExactMatrix::scalar(4, &CycNum::from_i64(-1))).unwrap()],
        )
        .unwrap();
        let one = CycNum::one();
        // φ(γ₁γ₂) = diag(1, i, i, −1) and its conjugate.
        let x = AmbientElement::su(ExactMatrix::diag(&[one.clone(), i(), i(), -&one])).unwrap();
        let y = AmbientElement::su(ExactMatrix::diag(&[one.clone(), -i(), -i(), -&one])).unwrap();
        let (qx, qy) = (quot(&g, &x).unwrap(), quot(&g, &y).unwrap());
        assert!(elements_conjugate(&g, &qx, &qy).unwrap());
        assert!(elements_conjugate(&g, &qx, &qx).unwrap());
        assert_ne!(invariants(&x), invariants(&y));
    }

    #[test]
    fn sp1_cube_conjugacy() {
        let z = AmbientElement::sp1s(&[Quat::minus_one(), Quat::minus_one(), Quat::minus_one()]).unwrap();
        let g = make_group(vec![FactorKind::Sp1; 3], vec![z]).unwrap();
        let a = AmbientElement::sp1s(&[Quat::i(), Quat::one(), Quat::i()]).unwrap();
        let b = AmbientElement::sp1s(&[-&Quat::i(), Quat::one(), -&Quat::i()]).unwrap();
        assert!(elements_conjugate(&g, &quot(&g, &a).unwrap(), &quot(&g, &b).unwrap()).unwrap());
    }

    #[test]
    fn characters() {
        let one = CycNum::one();
        let x = AmbientElement::new(vec![
            su(&[one.clone(), one.clone(), i(), -i()]),
            FactorElem::Sp1(Quat::eta()),
            FactorElem::SO3(adjoint_to_so3(&Quat::one())),
        ])
        .unwrap();
        let chi = character_vector(&x);
        assert_eq!(chi[0], CycNum::from_i64(2));
        assert_eq!(chi[1], &CycNum::root_of_unity(8, 1) + &CycNum::root_of_unity(8, -1));
        assert_eq!(chi[2], CycNum::from_i64(3));
    }
}
