use serde::Serialize;

use super::cyc::CycNum;
use super::matrix::ExactMatrix;
use crate::error::{ExactError, ExactResult};

/// Reduced row echelon form over the first `ncols` columns (extra columns are
/// carried along, as for an augmented system). Returns the nonzero rows and
/// their pivot columns.
pub(crate) fn rref(a: &mut Vec<Vec<CycNum>>, ncols: usize) -> ExactResult<(Vec<Vec<CycNum>>, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].inv().ok_or(ExactError::DivisionByZero)?;
        if !inv.is_one() {
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.try_mul(&inv)?;
                }
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.try_sub(&f.try_mul(p)?)?;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Ok((std::mem::take(a), pivots))
}

/// A linear subspace of `K^d` held by its reduced row echelon basis, so equal
/// subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<CycNum>>,
}

impl Subspace {
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<CycNum>>) -> ExactResult<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(ExactError::Shape(format!("vector of length {} in dimension {ambient}", v.len())));
        }
        let mut a = vectors;
        let (basis, _) = rref(&mut a, ambient)?;
        Ok(Subspace { ambient, basis })
    }

    /// Span of matrices read as flat row-major vectors.
    pub fn from_matrices(mats: &[ExactMatrix]) -> ExactResult<Self> {
        let Some(first) = mats.first() else {
            return Err(ExactError::Shape("no matrices".into()));
        };
        let d = first.rows() * first.cols();
        Subspace::from_vectors(d, mats.iter().map(|m| m.flatten()).collect())
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }).collect())
            .collect();
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    /// Basis vectors reshaped into `rows × cols` matrices.
    pub fn basis_matrices(&self, rows: usize, cols: usize) -> ExactResult<Vec<ExactMatrix>> {
        self.basis.iter().map(|v| ExactMatrix::new(rows, cols, v.clone())).collect()
    }

    fn check_same(&self, o: &Subspace) -> ExactResult<()> {
        if self.ambient != o.ambient {
            return Err(ExactError::Shape(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, o.ambient
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[CycNum]) -> ExactResult<bool> {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Ok(Subspace::from_vectors(self.ambient, vs)?.dim() == self.dim())
    }

    pub fn contains_subspace(&self, o: &Subspace) -> ExactResult<bool> {
        self.check_same(o)?;
        Ok(self.sum(o)?.dim() == self.dim())
    }

    pub fn sum(&self, o: &Subspace) -> ExactResult<Subspace> {
        self.check_same(o)?;
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Subspace::from_vectors(self.ambient, vs)
    }

    /// `self ∩ o`, via the kernel of `[A | −B]`.
    pub fn intersect(&self, o: &Subspace) -> ExactResult<Subspace> {
        self.check_same(o)?;
        if self.dim() == 0 || o.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let p = self.dim();
        let q = o.dim();
        let mut data = Vec::with_capacity(self.ambient * (p + q));
        for r in 0..self.ambient {
            for a in &self.basis {
                data.push(a[r].clone());
            }
            for b in &o.basis {
                data.push(-&b[r]);
            }
        }
        let m = ExactMatrix::new(self.ambient, p + q, data)?;
        let ker = m.nullspace()?;
        let mut vs = Vec::with_capacity(ker.dim());
        for coeffs in ker.basis() {
            let mut v = vec![CycNum::zero(); self.ambient];
            for (alpha, a) in coeffs[..p].iter().zip(&self.basis) {
                if alpha.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(a) {
                    if !y.is_zero() {
                        *x = x.try_add(&alpha.try_mul(y)?)?;
                    }
                }
            }
            vs.push(v);
        }
        Subspace::from_vectors(self.ambient, vs)
    }
}

/// `{X : XM = MX for every M in mats}` as a subspace of flattened `N × N` matrices.
pub fn commutant(mats: &[ExactMatrix]) -> ExactResult<Subspace> {
    let Some(first) = mats.first() else {
        return Err(ExactError::Shape("commutant of an empty list".into()));
    };
    let n = first.rows();
    if let Some(m) = mats.iter().find(|m| m.rows() != n || m.cols() != n) {
        return Err(ExactError::Shape(format!("{}x{} matrix in a size-{n} commutant", m.rows(), m.cols())));
    }
    let unknowns = n * n;
    let mut system: Vec<Vec<CycNum>> = Vec::new();
    for m in mats {
        for i in 0..n {
            for j in 0..n {
                // (XM − MX)_{ij} = Σ_k X_{ik} M_{kj} − M_{ik} X_{kj}
                let mut row = vec![CycNum::zero(); unknowns];
                for k in 0..n {
                    let a = m.get(k, j);
                    if !a.is_zero() {
                        row[i * n + k] = row[i * n + k].try_add(a)?;
                    }
                    let b = m.get(i, k);
                    if !b.is_zero() {
                        row[k * n + j] = row[k * n + j].try_sub(b)?;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    system.push(row);
                }
            }
        }
        let (reduced, _) = rref(&mut system, unknowns)?;
        system = reduced;
    }
    if system.is_empty() {
        return Ok(Subspace::full(unknowns));
    }
    ExactMatrix::from_rows(system)?.nullspace()
}
