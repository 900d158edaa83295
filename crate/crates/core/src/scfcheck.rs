//! The fusion-control condition `g ∈ Z_G(H ∩ Ad(g)H)·H` for the pairs
//! `O(2n+1) ⊂ SO(2n+2)` and `SO(2n+1) ⊂ SO(2n+2)`, checked exactly on the
//! torus `g_θ` of double coset representatives.
//!
//! Closed subgroups are represented by a Lie subalgebra of `so(N)` together
//! with diagonal sign matrices meeting the non-identity components.

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, GroupResult};
use crate::exactalg::{commutant, CycNum, ExactMatrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `O(2n+1)`, the fixed points of `Ad(I_{2n+1,1})`.
    OOddInSoEven,
    /// `SO(2n+1)`, the stabilizer of the last basis vector.
    SoOddInSoEven,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymPairFamily {
    pub kind: FamilyKind,
    pub n: usize,
}

impl SymPairFamily {
    pub fn new(kind: FamilyKind, n: usize) -> GroupResult<Self> {
        if n == 0 {
            return Err(GroupError::Precondition("n must be at least 1".into()));
        }
        Ok(SymPairFamily { kind, n })
    }

    /// Ambient dimension `2n+2`.
    pub fn dim(&self) -> usize {
        2 * self.n + 2
    }

    /// Whether `h ∈ SO(N)` lies in the subgroup.
    pub fn contains(&self, h: &ExactMatrix) -> GroupResult<bool> {
        let n = self.dim();
        let last = n - 1;
        // Both subgroups preserve the splitting e_N ⊕ e_N^⊥.
        for i in 0..last {
            if !h.get(i, last).is_zero() || !h.get(last, i).is_zero() {
                return Ok(false);
            }
        }
        if self.kind == FamilyKind::SoOddInSoEven && !h.get(last, last).is_one() {
            return Ok(false);
        }
        Ok(h.is_orthogonal()? && h.det()?.is_one())
    }

    /// Label of the condition that is checked.
    pub fn condition(&self) -> &'static str {
        match self.kind {
            FamilyKind::OOddInSoEven => "g in Z_G(H cap Ad(g)H) H",
            FamilyKind::SoOddInSoEven => "g in Z_G(H0 cap Ad(g)H0) H0",
        }
    }
}

/// `θ = 2πk/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Angle {
    pub k: i64,
    pub m: u32,
}

impl Angle {
    pub fn new(k: i64, m: u32) -> GroupResult<Self> {
        if m == 0 {
            return Err(GroupError::Precondition("angle denominator must be positive".into()));
        }
        Ok(Angle { k, m })
    }

    pub fn cos(&self) -> CycNum {
        CycNum::cos_2pi(self.k, self.m)
    }

    pub fn sin(&self) -> CycNum {
        CycNum::sin_2pi(self.k, self.m)
    }

    /// `k/m` in lowest terms with `0 ≤ k < m`.
    pub fn reduced(&self) -> (i64, u32) {
        let m = self.m as i64;
        let k = self.k.rem_euclid(m);
        let g = num_integer::gcd(k, m).max(1);
        (k / g, (m / g) as u32)
    }
}

/// Identity on the first `2n` coordinates, rotation `[[c, s], [−s, c]]` on the last two.
pub fn build_g_theta(fam: &SymPairFamily, ang: &Angle) -> ExactMatrix {
    let n = fam.dim();
    let mut g = ExactMatrix::identity(n);
    let (c, s) = (ang.cos(), ang.sin());
    g.set(n - 2, n - 2, c.clone());
    g.set(n - 2, n - 1, s.clone());
    g.set(n - 1, n - 2, -&s);
    g.set(n - 1, n - 1, c);
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupDescriptor {
    dim: usize,
    lie: Subspace,
    components: Vec<ExactMatrix>,
}

fn elementary_so(n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    m.set(i, j, CycNum::one());
    m.set(j, i, CycNum::from_i64(-1));
    m
}

fn sign_matrix(signs: &[i64]) -> ExactMatrix {
    let d: Vec<CycNum> = signs.iter().map(|&s| CycNum::from_i64(s)).collect();
    ExactMatrix::diag(&d)
}

impl SubgroupDescriptor {
    pub fn new(dim: usize, lie: Subspace, components: Vec<ExactMatrix>) -> GroupResult<Self> {
        if lie.ambient_dim() != dim * dim {
            return Err(GroupError::Precondition("Lie subspace has the wrong ambient dimension".into()));
        }
        Ok(SubgroupDescriptor { dim, lie, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lie(&self) -> &Subspace {
        &self.lie
    }

    pub fn lie_dim(&self) -> usize {
        self.lie.dim()
    }

    /// Sign matrices meeting each non-identity component once.
    pub fn components(&self) -> &[ExactMatrix] {
        &self.components
    }

    pub fn lie_basis(&self) -> Vec<ExactMatrix> {
        self.lie.basis_matrices(self.dim, self.dim).expect("square basis")
    }

    /// Lie basis and component representatives.
    pub fn generators(&self) -> Vec<ExactMatrix> {
        let mut v = self.lie_basis();
        v.extend(self.components.iter().cloned());
        v
    }

    /// Brackets of basis pairs stay in the Lie subspace and the component
    /// representatives normalize it.
    pub fn check_invariants(&self) -> GroupResult<bool> {
        let basis = self.lie_basis();
        for (a, x) in basis.iter().enumerate() {
            for y in &basis[a + 1..] {
                let br = &(x * y) - &(y * x);
                if !self.lie.contains(&br.flatten())? {
                    return Ok(false);
                }
            }
        }
        for c in &self.components {
            let ci = c.transpose();
            for x in &basis {
                if !self.lie.contains(&(&(c * x) * &ci).flatten())? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Coordinate blocks when the Lie algebra is `⊕ so(B)`.
    fn so_blocks(&self) -> Option<Vec<Vec<usize>>> {
        let n = self.dim;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for v in self.lie.basis() {
            for i in 0..n {
                for j in 0..n {
                    if i != j && !v[i * n + j].is_zero() {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            match root_of[r] {
                Some(b) => blocks[b].push(i),
                None => {
                    root_of[r] = Some(blocks.len());
                    blocks.push(vec![i]);
                }
            }
        }
        let expected: usize = blocks.iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
        if expected != self.lie.dim() {
            return None;
        }
        for b in &blocks {
            for (x, &i) in b.iter().enumerate() {
                for &j in &b[x + 1..] {
                    if !self.lie.contains(&elementary_so(n, i, j).flatten()).ok()? {
                        return None;
                    }
                }
            }
        }
        Some(blocks)
    }
}

/// Whether the sign matrix `d` lies in the connected group `∏ SO(B)`.
fn sign_in_identity_component(blocks: &[Vec<usize>], d: &[i64]) -> bool {
    blocks.iter().all(|b| {
        let neg = b.iter().filter(|&&i| d[i] < 0).count();
        if b.len() == 1 {
            neg == 0
        } else {
            neg % 2 == 0
        }
    })
}

fn hull_lie(fam: &SymPairFamily) -> GroupResult<Subspace> {
    let n = fam.dim();
    let mut basis = Vec::new();
    for i in 0..n - 1 {
        for j in i + 1..n - 1 {
            basis.push(elementary_so(n, i, j));
        }
    }
    Ok(Subspace::from_matrices(&basis)?)
}

/// Sign vectors with determinant 1, in the order of their binary codes.
fn det_one_signs(n: usize) -> impl Iterator<Item = Vec<i64>> {
    (0u32..1 << n).filter_map(move |bits| {
        let signs: Vec<i64> = (0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
        (bits.count_ones() % 2 == 0).then_some(signs)
    })
}

/// `H ∩ Ad(g_θ)H` (with `H⁰` in place of `H` for the `SO(2n+1)` family).
pub fn intersection_descriptor(fam: &SymPairFamily, ang: &Angle) -> GroupResult<SubgroupDescriptor> {
    let n = fam.dim();
    let g = build_g_theta(fam, ang);
    let gi = g.transpose();
    let h = hull_lie(fam)?;
    let conj: Vec<ExactMatrix> = h
        .basis_matrices(n, n)?
        .iter()
        .map(|x| &(&g * x) * &gi)
        .collect();
    let lie = h.intersect(&Subspace::from_matrices(&conj)?)?;
    let mut desc = SubgroupDescriptor::new(n, lie, Vec::new())?;
    let blocks = desc.so_blocks();
    let mut reps: Vec<Vec<i64>> = Vec::new();
    for signs in det_one_signs(n) {
        let d = sign_matrix(&signs);
        if !fam.contains(&d)? || !fam.contains(&(&(&gi * &d) * &g))? {
            continue;
        }
        if let Some(b) = &blocks {
            let trivial = |s: &[i64]| sign_in_identity_component(b, s);
            if trivial(&signs) {
                continue;
            }
            if reps.iter().any(|r| {
                let prod: Vec<i64> = r.iter().zip(&signs).map(|(x, y)| x * y).collect();
                trivial(&prod)
            }) {
                continue;
            }
        } else if signs.iter().all(|&s| s == 1) {
            continue;
        }
        reps.push(signs);
    }
    desc.components = reps.iter().map(|s| sign_matrix(s)).collect();
    Ok(desc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CentralizerResult {
    /// Every determinant-one element of the centralizer.
    Finite { elements: Vec<ExactMatrix> },
    /// The commutant is not spanned by coordinate block identities.
    NotSignPattern { commutant_dim: usize },
}

/// `Z_{SO(N)}(K)` when the commutant of `K` is spanned by identities on
/// disjoint coordinate blocks.
pub fn centralizer_of_descriptor(d: &SubgroupDescriptor) -> GroupResult<CentralizerResult> {
    let n = d.dim;
    let gens = d.generators();
    let c = if gens.is_empty() { Subspace::full(n * n) } else { commutant(&gens)? };
    let not_sign = CentralizerResult::NotSignPattern { commutant_dim: c.dim() };
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut covered = vec![false; n];
    for v in c.basis() {
        let mut block = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let e = &v[i * n + j];
                if e.is_zero() {
                    continue;
                }
                if i != j || !e.is_one() || covered[i] {
                    return Ok(not_sign);
                }
                covered[i] = true;
                block.push(i);
            }
        }
        blocks.push(block);
    }
    if covered.iter().any(|c| !c) {
        return Ok(not_sign);
    }
    let mut elements = Vec::new();
    for bits in 0u32..1 << blocks.len() {
        let mut signs = vec![1i64; n];
        let mut det = 1i64;
        for (b, block) in blocks.iter().enumerate() {
            if bits >> b & 1 == 1 {
                for &i in block {
                    signs[i] = -1;
                    det = -det;
                }
            }
        }
        if det == 1 {
            let z = sign_matrix(&signs);
            for x in &gens {
                if !z.commutes_with(x)? {
                    return Err(GroupError::Precondition("sign pattern fails to commute".into()));
                }
            }
            elements.push(z);
        }
    }
    Ok(CentralizerResult::Finite { elements })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Eq2Verdict {
    Holds { reason: String },
    /// No element of the (finite) centralizer moves `g` into the subgroup.
    Fails { centralizer_size: usize },
    Undecided { commutant_dim: usize },
}

impl Eq2Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Eq2Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Eq2Verdict::Fails { .. })
    }
}

pub fn decide_eq2(fam: &SymPairFamily, ang: &Angle) -> GroupResult<Eq2Verdict> {
    let g = build_g_theta(fam, ang);
    let k = intersection_descriptor(fam, ang)?;
    let mut centralizes = true;
    for x in k.generators() {
        if !g.commutes_with(&x)? {
            centralizes = false;
            break;
        }
    }
    if centralizes {
        return Ok(Eq2Verdict::Holds { reason: "g centralizes the intersection".into() });
    }
    if fam.contains(&g)? {
        return Ok(Eq2Verdict::Holds { reason: "g lies in the subgroup".into() });
    }
    match centralizer_of_descriptor(&k)? {
        CentralizerResult::Finite { elements } => {
            for z in &elements {
                if fam.contains(&(&z.transpose() * &g))? {
                    return Ok(Eq2Verdict::Holds { reason: format!("z^-1 g lies in the subgroup for z = {z:?}") });
                }
            }
            Ok(Eq2Verdict::Fails { centralizer_size: elements.len() })
        }
        CentralizerResult::NotSignPattern { commutant_dim } => Ok(Eq2Verdict::Undecided { commutant_dim }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: i64,
    pub m: u32,
    #[serde(flatten)]
    pub verdict: Eq2Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTable {
    pub family: SymPairFamily,
    pub condition: String,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    /// Reduced angles `(k, m)` at which the condition fails, deduplicated.
    pub fn failing_angles(&self) -> Vec<(i64, u32)> {
        let mut v: Vec<(i64, u32)> = self
            .rows
            .iter()
            .filter(|r| r.verdict.fails())
            .map(|r| Angle { k: r.k, m: r.m }.reduced())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn undecided(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.verdict, Eq2Verdict::Undecided { .. })).count()
    }
}

/// `decide_eq2` at `θ = 2πk/m` for `0 ≤ k < m`, rows ordered by `(m, k)`.
pub fn scan_angles(fam: &SymPairFamily, denominators: &[u32]) -> GroupResult<ScanTable> {
    let mut ms = denominators.to_vec();
    ms.sort();
    ms.dedup();
    let mut rows = Vec::new();
    for &m in &ms {
        for k in 0..m as i64 {
            let verdict = decide_eq2(fam, &Angle::new(k, m)?)?;
            rows.push(ScanRow { k, m, verdict });
        }
    }
    Ok(ScanTable { family: *fam, condition: fam.condition().to_string(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o_odd(n: usize) -> SymPairFamily {
        SymPairFamily::new(FamilyKind::OOddInSoEven, n).unwrap()
    }

    fn so_odd(n: usize) -> SymPairFamily {
        SymPairFamily::new(FamilyKind::SoOddInSoEven, n).unwrap()
    }

    #[test]
    fn g_theta_shape() {
        let g = build_g_theta(&o_odd(1), &Angle::new(1, 4).unwrap());
        let want = ExactMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]).unwrap();
        assert_eq!(g, want);
        assert!(build_g_theta(&o_odd(2), &Angle::new(0, 6).unwrap()).is_identity());
        let a = build_g_theta(&o_odd(1), &Angle::new(1, 6).unwrap());
        let b = build_g_theta(&o_odd(1), &Angle::new(-1, 6).unwrap());
        assert!((&a * &b).is_identity());
        assert!(a.is_orthogonal().unwrap() && a.det().unwrap().is_one());
    }

    #[test]
    fn generic_intersections() {
        let k = intersection_descriptor(&o_odd(1), &Angle::new(1, 6).unwrap()).unwrap();
        assert_eq!(k.lie_dim(), 1);
        assert_eq!(k.components(), &[sign_matrix(&[1, 1, -1, -1])]);
        assert!(k.check_invariants().unwrap());
        let s = intersection_descriptor(&so_odd(1), &Angle::new(1, 6).unwrap()).unwrap();
        assert_eq!(s.lie_dim(), 1);
        assert!(s.components().is_empty());
        let full = intersection_descriptor(&o_odd(1), &Angle::new(0, 4).unwrap()).unwrap();
        assert_eq!(full.lie_dim(), 3);
        assert_eq!(full.components().len(), 1);
    }

    #[test]
    fn quarter_turn_intersection() {
        let k = intersection_descriptor(&o_odd(1), &Angle::new(1, 4).unwrap()).unwrap();
        assert_eq!(k.lie_dim(), 1);
        // S(O(2)×O(1)×O(1)) has four components.
        assert_eq!(k.components().len(), 3);
        match centralizer_of_descriptor(&k).unwrap() {
            CentralizerResult::Finite { elements } => assert_eq!(elements.len(), 4),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn centralizer_kinds() {
        let n = 4;
        let so2 = SubgroupDescriptor::new(n, Subspace::from_matrices(&[elementary_so(n, 0, 1)]).unwrap(), vec![])
            .unwrap();
        assert!(matches!(centralizer_of_descriptor(&so2).unwrap(), CentralizerResult::NotSignPattern { .. }));
        let mut basis = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                basis.push(elementary_so(n, i, j));
            }
        }
        let full = SubgroupDescriptor::new(n, Subspace::from_matrices(&basis).unwrap(), vec![]).unwrap();
        match centralizer_of_descriptor(&full).unwrap() {
            CentralizerResult::Finite { elements } => {
                assert_eq!(elements, vec![ExactMatrix::identity(4), sign_matrix(&[-1, -1, -1, -1])])
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn verdicts() {
        assert!(decide_eq2(&o_odd(1), &Angle::new(1, 4).unwrap()).unwrap().fails());
        assert!(decide_eq2(&o_odd(1), &Angle::new(1, 6).unwrap()).unwrap().holds());
        for n in [1, 2] {
            for (k, m) in [(1, 4), (1, 6), (1, 8), (1, 2)] {
                assert!(decide_eq2(&so_odd(n), &Angle::new(k, m).unwrap()).unwrap().holds(), "n={n} {k}/{m}");
            }
        }
    }

    #[test]
    fn scans() {
        let t = scan_angles(&o_odd(1), &[4, 6, 8]).unwrap();
        assert_eq!(t.rows.len(), 18);
        assert_eq!(t.failing_angles(), vec![(1, 4), (3, 4)]);
        assert_eq!(t.undecided(), 0);
        let s = scan_angles(&so_odd(1), &[4, 6, 8]).unwrap();
        assert!(s.failing_angles().is_empty());
        assert_eq!(scan_angles(&o_odd(2), &[4]).unwrap().failing_angles(), vec![(1, 4), (3, 4)]);
    }

    #[test]
    fn intersection_dimension_is_conjugation_invariant() {
        let fam = o_odd(1);
        let ang = Angle::new(1, 8).unwrap();
        let g = build_g_theta(&fam, &ang);
        let base = intersection_descriptor(&fam, &ang).unwrap().lie_dim();
        for signs in det_one_signs(4) {
            let h = sign_matrix(&signs);
            if !fam.contains(&h).unwrap() {
                continue;
            }
            let g2 = &(&h * &g) * &h.transpose();
            let lie = hull_lie(&fam).unwrap();
            let conj: Vec<ExactMatrix> =
                lie.basis_matrices(4, 4).unwrap().iter().map(|x| &(&g2 * x) * &g2.transpose()).collect();
            let d = lie.intersect(&Subspace::from_matrices(&conj).unwrap()).unwrap().dim();
            assert_eq!(d, base);
        }
    }
}
