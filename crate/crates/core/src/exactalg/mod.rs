//! Exact cyclotomic arithmetic and linear algebra.

mod cyc;
mod matrix;
mod subspace;

pub use cyc::{parse_rational, CycNum, MAX_CONDUCTOR};
pub use matrix::ExactMatrix;
pub use subspace::{commutant, Subspace};

use num_rational::BigRational;

use crate::error::ExactResult;

/// Builds `Σ coeffs[k] ζ_n^k` in canonical form.
pub fn cyc_make(conductor: i64, coeffs: &[BigRational]) -> ExactResult<CycNum> {
    CycNum::new(conductor, coeffs)
}

/// Checks that `x` lies in `Q(ζ_n)` for the given conductor and returns it.
pub fn cyc_embed(x: &CycNum, new_conductor: u32) -> ExactResult<CycNum> {
    x.embed(new_conductor)
}

pub fn char_poly(m: &ExactMatrix) -> ExactResult<Vec<CycNum>> {
    m.char_poly()
}

pub fn nullspace(m: &ExactMatrix) -> ExactResult<Subspace> {
    m.nullspace()
}

pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> ExactResult<Subspace> {
    a.intersect(b)
}
