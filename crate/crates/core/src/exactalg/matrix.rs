use std::fmt;

use serde::{Deserialize, Serialize};

use super::cyc::CycNum;
use super::subspace::{rref, Subspace};
use crate::error::{ExactError, ExactResult};

/// Dense row-major matrix over cyclotomic numbers.
///
/// Entries are kept individually in canonical form; mixing conductors inside
/// one matrix is allowed and arithmetic embeds on demand.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

#[derive(Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl TryFrom<MatrixWire> for ExactMatrix {
    type Error = ExactError;
    fn try_from(w: MatrixWire) -> ExactResult<Self> {
        ExactMatrix::new(w.rows, w.cols, w.data)
    }
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<CycNum>) -> ExactResult<Self> {
        if rows == 0 || cols == 0 {
            return Err(ExactError::Shape(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(ExactError::Shape(format!(
                "{} entries for shape {rows}x{cols}",
                data.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> ExactResult<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(ExactError::Shape("ragged rows".into()));
        }
        ExactMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix convenience constructor.
    pub fn from_i64(rows: &[&[i64]]) -> ExactResult<Self> {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| CycNum::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![CycNum::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = CycNum::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &CycNum) -> Self {
        ExactMatrix::diag(&vec![s.clone(); n])
    }

    pub fn diag(entries: &[CycNum]) -> Self {
        let n = entries.len();
        let mut m = ExactMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(blocks: &[ExactMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = ExactMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.rows;
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ExactMatrix) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for k in 0..other.rows {
                for j in 0..self.cols {
                    for l in 0..other.cols {
                        data.push(self.get(i, j) * other.get(k, l));
                    }
                }
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNum {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNum) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[CycNum] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<CycNum> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&CycNum) -> CycNum) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Entrywise complex conjugation.
    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        self.map(|x| x * s)
    }

    pub fn try_mul(&self, o: &ExactMatrix) -> ExactResult<Self> {
        if self.cols != o.rows {
            return Err(ExactError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = CycNum::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.try_add(&a.try_mul(b)?)?;
                    }
                }
                data.push(acc);
            }
        }
        Ok(ExactMatrix { rows: self.rows, cols: o.cols, data })
    }

    fn zip(&self, o: &ExactMatrix, sub: bool) -> ExactResult<Self> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(ExactError::Shape("elementwise shape mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| if sub { a.try_sub(b) } else { a.try_add(b) })
            .collect::<ExactResult<Vec<_>>>()?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, o: &ExactMatrix) -> ExactResult<Self> {
        self.zip(o, false)
    }

    pub fn try_sub(&self, o: &ExactMatrix) -> ExactResult<Self> {
        self.zip(o, true)
    }

    pub fn trace(&self) -> ExactResult<CycNum> {
        self.require_square()?;
        let mut t = CycNum::zero();
        for i in 0..self.rows {
            t = t.try_add(self.get(i, i))?;
        }
        Ok(t)
    }

    fn require_square(&self) -> ExactResult<()> {
        if !self.is_square() {
            return Err(ExactError::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j { v.is_one() } else { v.is_zero() }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// The scalar `s` if `self = s·I`.
    pub fn as_scalar(&self) -> Option<CycNum> {
        if !self.is_diagonal() {
            return None;
        }
        let s = self.get(0, 0);
        (0..self.rows).all(|i| self.get(i, i) == s).then(|| s.clone())
    }

    pub fn diagonal(&self) -> Vec<CycNum> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn det(&self) -> ExactResult<CycNum> {
        self.require_square()?;
        let n = self.rows;
        let mut a: Vec<Vec<CycNum>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut det = CycNum::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(CycNum::zero());
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let piv = a[col][col].clone();
            det = det.try_mul(&piv)?;
            let inv = piv.inv().ok_or(ExactError::DivisionByZero)?;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].try_mul(&inv)?;
                for c in col..n {
                    if !a[col][c].is_zero() {
                        a[r][c] = a[r][c].try_sub(&f.try_mul(&a[col][c])?)?;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> ExactResult<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut aug: Vec<Vec<CycNum>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { CycNum::one() } else { CycNum::zero() }));
                row
            })
            .collect();
        let (red, pivots) = rref(&mut aug, n)?;
        if pivots.len() < n {
            return Err(ExactError::Singular);
        }
        let data = red.into_iter().flat_map(|row| row[n..].to_vec()).collect();
        Ok(ExactMatrix { rows: n, cols: n, data })
    }

    /// Monic characteristic polynomial `det(xI − M)`, coefficients from degree 0 up.
    ///
    /// Faddeev–LeVerrier: `M_k = A M_{k−1} + c_{n−k+1} I`, `c_{n−k} = −tr(A M_k)/k`.
    pub fn char_poly(&self) -> ExactResult<Vec<CycNum>> {
        self.require_square()?;
        let n = self.rows;
        let mut c = vec![CycNum::zero(); n + 1];
        c[n] = CycNum::one();
        let mut mk = ExactMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.try_mul(&mk)?;
            for i in 0..n {
                let v = next.get(i, i).try_add(&c[n - k + 1])?;
                next.set(i, i, v);
            }
            let t = self.try_mul(&next)?.trace()?;
            c[n - k] = -(t.try_div(&CycNum::from_i64(k as i64))?);
            mk = next;
        }
        Ok(c)
    }

    pub fn pow(&self, e: u32) -> ExactResult<Self> {
        self.require_square()?;
        let mut acc = ExactMatrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Right kernel `{v : M v = 0}` as a subspace of column vectors.
    pub fn nullspace(&self) -> ExactResult<Subspace> {
        let mut a: Vec<Vec<CycNum>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let (red, pivots) = rref(&mut a, self.cols)?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![CycNum::zero(); self.cols];
            v[f] = CycNum::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&red[r][f];
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.cols, basis)
    }

    /// The matrix read as a flat row-major vector.
    pub fn flatten(&self) -> Vec<CycNum> {
        self.data.clone()
    }

    pub fn commutes_with(&self, o: &ExactMatrix) -> ExactResult<bool> {
        Ok(self.try_mul(o)? == o.try_mul(self)?)
    }

    /// `M M^* = I`.
    pub fn is_unitary(&self) -> ExactResult<bool> {
        Ok(self.is_square() && self.try_mul(&self.conj_transpose())?.is_identity())
    }

    /// `M M^T = I`.
    pub fn is_orthogonal(&self) -> ExactResult<bool> {
        Ok(self.is_square() && self.try_mul(&self.transpose())?.is_identity())
    }
}

macro_rules! matrix_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&ExactMatrix> for &ExactMatrix {
            type Output = ExactMatrix;
            fn $method(self, rhs: &ExactMatrix) -> ExactMatrix {
                self.$try(rhs).unwrap_or_else(|e| panic!("matrix arithmetic: {e}"))
            }
        }
    };
}

matrix_op!(Mul, mul, try_mul);
matrix_op!(Add, add, try_add);
matrix_op!(Sub, sub, try_sub);

impl std::ops::Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> CycNum {
        CycNum::i()
    }

    fn ints(v: &[i64]) -> Vec<CycNum> {
        v.iter().map(|&x| CycNum::from_i64(x)).collect()
    }

    #[test]
    fn shape_errors() {
        assert!(ExactMatrix::new(2, 2, ints(&[1, 2, 3])).is_err());
        let a = ExactMatrix::identity(2);
        let b = ExactMatrix::identity(3);
        assert!(a.try_mul(&b).is_err());
        assert!(ExactMatrix::zeros(2, 3).char_poly().is_err());
    }

    #[test]
    fn char_poly_diagonal() {
        let m = ExactMatrix::diag(&[CycNum::one(), CycNum::one(), i(), -i()]);
        // (x−1)²(x²+1) = x⁴ − 2x³ + 2x² − 2x + 1
        assert_eq!(m.char_poly().unwrap(), ints(&[1, -2, 2, -2, 1]));
        assert_eq!(ExactMatrix::identity(3).char_poly().unwrap(), ints(&[-1, 3, -3, 1]));
    }

    #[test]
    fn char_poly_rotation() {
        // Quarter turn about e3: x³ − x² + x − 1.
        let s = ExactMatrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(s.char_poly().unwrap(), ints(&[-1, 1, -1, 1]));
        let ns = (&s - &ExactMatrix::identity(3)).nullspace().unwrap();
        assert_eq!(ns.basis(), &[ints(&[0, 0, 1])]);
    }

    #[test]
    fn nullspace_examples() {
        let t = ExactMatrix::from_i64(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]).unwrap();
        let ns = (&t - &ExactMatrix::identity(3)).nullspace().unwrap();
        assert_eq!(ns.basis(), &[ints(&[1, 0, 0])]);
        assert_eq!(ExactMatrix::zeros(3, 3).nullspace().unwrap().dim(), 3);
    }

    #[test]
    fn det_and_inverse() {
        let m = ExactMatrix::from_rows(vec![
            vec![CycNum::from_i64(2), i()],
            vec![CycNum::root_of_unity(3, 1), CycNum::from_i64(1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let d = m.det().unwrap();
        assert_eq!(d, &CycNum::from_i64(2) - &(&i() * &CycNum::root_of_unity(3, 1)));
        let sing = ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(sing.inverse(), Err(ExactError::Singular));
        assert!(sing.det().unwrap().is_zero());
    }

    #[test]
    fn unitary_checks() {
        let m = ExactMatrix::diag(&[CycNum::one(), CycNum::one(), i(), -i()]);
        assert!(m.is_unitary().unwrap());
        assert!(m.det().unwrap().is_one());
        assert!(!ExactMatrix::scalar(2, &CycNum::from_i64(2)).is_unitary().unwrap());
    }

    #[test]
    fn kron_and_blocks() {
        let a = ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        let k = a.kron(&ExactMatrix::identity(2));
        assert_eq!(k.rows(), 4);
        assert!(k.try_mul(&k).unwrap().is_identity());
        let b = ExactMatrix::block_diag(&[a.clone(), ExactMatrix::identity(1)]);
        assert_eq!(b.trace().unwrap(), CycNum::one());
    }

    #[test]
    fn json_round_trip() {
        let m = ExactMatrix::diag(&[CycNum::sqrt2(), i()]);
        let s = serde_json::to_string(&m).unwrap();
        let back: ExactMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
