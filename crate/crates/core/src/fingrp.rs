//! Finite groups with explicit multiplication tables, homomorphisms out of them,
//! and the small amount of structure theory the certificates need.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, GroupResult};
use crate::exactalg::ExactMatrix;
use crate::grpcore::Quat;

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// Anything that can label the elements of a finite group.
pub trait Label: Clone + Eq + Hash + Ord + Debug {}
impl<T: Clone + Eq + Hash + Ord + Debug> Label for T {}

/// Elements that carry their own multiplication.
pub trait GroupElement: Label {
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn identity_like(&self) -> Self;
}

impl GroupElement for Quat {
    fn op(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn inverse(&self) -> Self {
        self.conj()
    }
    fn identity_like(&self) -> Self {
        Quat::one()
    }
}

impl GroupElement for ExactMatrix {
    fn op(&self, o: &Self) -> Self {
        self * o
    }
    fn inverse(&self) -> Self {
        self.inverse().expect("group element is invertible")
    }
    fn identity_like(&self) -> Self {
        ExactMatrix::identity(self.rows())
    }
}

/// A finite group on labelled elements with a full multiplication table.
#[derive(Clone, Debug)]
pub struct FinGroup<E: Label> {
    elements: Vec<E>,
    index: HashMap<E, usize>,
    table: Vec<u32>,
    inverses: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
}

/// Breadth-first closure of `gens` under right multiplication.
///
/// Only `|G|·|gens|` products of ambient elements are formed; the rest of the
/// table is read off the Cayley graph.
pub fn closure<E: GroupElement>(identity: &E, gens: &[E], cap: usize) -> GroupResult<FinGroup<E>> {
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<E, usize> = HashMap::new();
    index.insert(identity.clone(), 0);
    let k = gens.len();
    let mut right: Vec<u32> = Vec::new();
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut i = 0;
    while i < elements.len() {
        for (s, g) in gens.iter().enumerate() {
            let p = elements[i].op(g);
            let j = match index.get(&p) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(GroupError::ClosureCap { cap });
                    }
                    let j = elements.len();
                    index.insert(p.clone(), j);
                    elements.push(p);
                    parent.push((i, s));
                    j
                }
            };
            right.push(j as u32);
        }
        i += 1;
    }
    let n = elements.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        table[a * n] = a as u32;
        for j in 1..n {
            let (p, s) = parent[j];
            let ap = table[a * n + p] as usize;
            table[a * n + j] = right[ap * k + s];
        }
    }
    let generators = gens.iter().map(|g| index[g]).collect();
    Ok(FinGroup::assemble(elements, index, table, 0, generators))
}

impl<E: Label> FinGroup<E> {
    fn assemble(
        elements: Vec<E>,
        index: HashMap<E, usize>,
        table: Vec<u32>,
        identity: usize,
        generators: Vec<usize>,
    ) -> Self {
        let n = elements.len();
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] as usize == identity {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        FinGroup { elements, index, table, inverses, identity, generators }
    }

    /// Group from a multiplication table on distinct labels.
    ///
    /// Checks closure, identity, inverses and associativity.
    pub fn from_table(elements: Vec<E>, table: Vec<u32>, generators: Vec<usize>) -> GroupResult<Self> {
        let n = elements.len();
        if n == 0 || table.len() != n * n || table.iter().any(|&t| t as usize >= n) {
            return Err(GroupError::InvalidFormal("malformed multiplication table".into()));
        }
        let index: HashMap<E, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != n {
            return Err(GroupError::InvalidFormal("duplicate labels".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] as usize == a && table[a * n + e] as usize == a))
            .ok_or_else(|| GroupError::InvalidFormal("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| table[a * n + b] as usize == identity) {
                return Err(GroupError::InvalidFormal(format!("element {a} has no inverse")));
            }
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(GroupError::InvalidFormal("table is not associative".into()));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(GroupError::InvalidFormal("generator out of range".into()));
        }
        Ok(FinGroup::assemble(elements, index, table, identity, generators))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.effective_generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.commute(a, b)))
    }

    /// Declared generators, or every element when none are recorded.
    fn effective_generators(&self) -> Vec<usize> {
        if self.generators.is_empty() || self.subgroup_indices(&self.generators).len() != self.order() {
            (0..self.order()).collect()
        } else {
            self.generators.clone()
        }
    }

    pub fn center_indices(&self) -> Vec<usize> {
        let gens = self.effective_generators();
        (0..self.order()).filter(|&x| gens.iter().all(|&g| self.commute(x, g))).collect()
    }

    /// Index set of the subgroup generated by `gens`, in BFS order from the identity.
    pub fn subgroup_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut q = VecDeque::from([self.identity]);
        while let Some(x) = q.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    q.push_back(y);
                }
            }
        }
        out
    }

    /// The subgroup on `indices` (assumed closed) as a group in its own right.
    pub fn subgroup(&self, indices: &[usize], generators: &[usize]) -> FinGroup<E> {
        let mut idx = indices.to_vec();
        idx.sort();
        idx.dedup();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = idx.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate() {
                table[i * n + j] = pos[&self.mul(a, b)] as u32;
            }
        }
        let elements: Vec<E> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let gens = generators.iter().filter_map(|g| pos.get(g).copied()).collect();
        FinGroup::assemble(elements, index, table, pos[&self.identity], gens)
    }

    pub fn generated_subgroup(&self, gens: &[usize]) -> FinGroup<E> {
        self.subgroup(&self.subgroup_indices(gens), gens)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Indices of the derived subgroup.
    pub fn derived_indices(&self) -> Vec<usize> {
        let n = self.order();
        let comms: HashSet<usize> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        let gens: Vec<usize> = comms.into_iter().collect();
        self.subgroup_indices(&gens)
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let set: HashSet<usize> = sub.iter().copied().collect();
        let gens = self.effective_generators();
        sub.iter().all(|&h| gens.iter().all(|&g| set.contains(&self.mul(self.mul(g, h), self.inv(g)))))
    }

    /// Whether every non-identity element has order 2.
    pub fn is_elementary_abelian_2(&self) -> bool {
        (0..self.order()).all(|a| self.mul(a, a) == self.identity)
    }

    /// Number of conjugacy classes paired with the class sizes, for orbit-counting checks.
    pub fn conjugacy_class_sizes(&self) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut cls = HashSet::new();
            for g in 0..n {
                cls.insert(self.mul(self.mul(g, x), self.inv(g)));
            }
            for &c in &cls {
                seen[c] = true;
            }
            sizes.push(cls.len());
        }
        sizes
    }

    /// Right-multiplication BFS tree over `gens`: `(parent, generator position)`
    /// for each reached element, or `None` for the root.
    pub(crate) fn cayley_tree(&self, gens: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
        let n = self.order();
        let mut order = vec![self.identity];
        let mut tree: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.identity] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (s, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, s));
                    order.push(y);
                }
            }
            i += 1;
        }
        (order, tree)
    }
}

/// `{x ∈ g : xs = sx for all s ∈ subset}`.
pub fn centralizer_in<E: Label>(g: &FinGroup<E>, subset: &[usize]) -> FinGroup<E> {
    let idx: Vec<usize> = (0..g.order()).filter(|&x| subset.iter().all(|&s| g.commute(x, s))).collect();
    g.subgroup(&idx, &idx)
}

/// A homomorphism from a finite group, stored as the image of every element.
#[derive(Clone, Debug)]
pub struct Hom<T> {
    images: Vec<T>,
    gens: Vec<usize>,
}

/// Extends generator images multiplicatively and verifies the result on all pairs.
pub fn hom_from_gens<E: Label, T: GroupElement>(
    src: &FinGroup<E>,
    gen_indices: &[usize],
    images: &[T],
    target_identity: &T,
) -> GroupResult<Hom<T>> {
    if gen_indices.len() != images.len() {
        return Err(GroupError::Precondition("one image per generator required".into()));
    }
    let (order, tree) = src.cayley_tree(gen_indices);
    if order.len() != src.order() {
        return Err(GroupError::NotGenerating { reached: order.len(), order: src.order() });
    }
    let mut img: Vec<Option<T>> = vec![None; src.order()];
    img[src.identity()] = Some(target_identity.clone());
    for &x in order.iter().skip(1) {
        let (p, s) = tree[x].unwrap();
        img[x] = Some(img[p].as_ref().unwrap().op(&images[s]));
    }
    let hom = Hom { images: img.into_iter().map(Option::unwrap).collect(), gens: gen_indices.to_vec() };
    hom.verify_all_pairs(src)?;
    Ok(hom)
}

impl<T: GroupElement> Hom<T> {
    /// Checks `f(xy) = f(x)f(y)` for every pair, multiplying each pair of
    /// distinct images once.
    pub fn verify_all_pairs<E: Label>(&self, src: &FinGroup<E>) -> GroupResult<()> {
        let mut distinct: HashMap<&T, usize> = HashMap::new();
        let mut class = Vec::with_capacity(self.images.len());
        for im in &self.images {
            let n = distinct.len();
            class.push(*distinct.entry(im).or_insert(n));
        }
        let reps: Vec<&T> = {
            let mut v = vec![None; distinct.len()];
            for (t, &c) in &distinct {
                v[c] = Some(*t);
            }
            v.into_iter().map(Option::unwrap).collect()
        };
        let m = reps.len();
        let mut memo: Vec<Option<usize>> = vec![None; m * m];
        let mut lookup: HashMap<T, usize> = reps.iter().enumerate().map(|(i, t)| ((*t).clone(), i)).collect();
        let mut extra = 0usize;
        for x in 0..src.order() {
            for y in 0..src.order() {
                let (cx, cy) = (class[x], class[y]);
                let prod = match memo[cx * m + cy] {
                    Some(p) => p,
                    None => {
                        let p = reps[cx].op(reps[cy]);
                        let id = match lookup.get(&p) {
                            Some(&i) => i,
                            None => {
                                // Product outside the image set: can never match.
                                extra += 1;
                                let i = m + extra;
                                lookup.insert(p, i);
                                i
                            }
                        };
                        memo[cx * m + cy] = Some(id);
                        id
                    }
                };
                if prod != class[src.mul(x, y)] {
                    return Err(GroupError::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(())
    }
}

impl<T> Hom<T> {
    pub fn images(&self) -> &[T] {
        &self.images
    }

    pub fn image(&self, x: usize) -> &T {
        &self.images[x]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gens
    }

    /// Source elements mapping to `target_identity`.
    pub fn kernel(&self, is_identity: impl Fn(&T) -> bool) -> Vec<usize> {
        (0..self.images.len()).filter(|&x| is_identity(&self.images[x])).collect()
    }
}

impl<T: Label> Hom<T> {
    pub fn image_size(&self) -> usize {
        self.images.iter().collect::<HashSet<_>>().len()
    }

    /// Builds a map from explicit images without checking it; callers verify.
    pub fn from_images(images: Vec<T>, gens: Vec<usize>) -> Self {
        Hom { images, gens }
    }
}

/// Formal presentation-backed groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormalGroupSpec {
    /// `C_{n₁} × ⋯ × C_{n_k}` with the unit vectors as generators.
    CyclicProduct(Vec<u32>),
    /// Normal forms `γ₀^a γ₁^b γ₂^c` with
    /// `(a,b,c)(a′,b′,c′) = (a+a′+c·b′ mod 2, b+b′ mod n₁, c+c′ mod n₂)`;
    /// generators `γ₁, γ₂`, and `γ₂γ₁ = γ₀γ₁γ₂`.
    CentralExt2(u32, u32),
}

/// Normal-form tuple of a formal group element.
pub type FormalElem = Vec<u32>;

pub fn formal_group(spec: &FormalGroupSpec) -> GroupResult<FinGroup<FormalElem>> {
    match spec {
        FormalGroupSpec::CyclicProduct(ns) => {
            if ns.contains(&0) {
                return Err(GroupError::InvalidFormal("cyclic orders must be positive".into()));
            }
            let mut elements: Vec<FormalElem> = vec![vec![]];
            for &n in ns {
                elements = elements
                    .into_iter()
                    .flat_map(|e| {
                        (0..n).map(move |v| {
                            let mut e2 = e.clone();
                            e2.push(v);
                            e2
                        })
                    })
                    .collect();
            }
            let pos: HashMap<FormalElem, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let n = elements.len();
            let mut table = vec![0u32; n * n];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    let c: FormalElem = a.iter().zip(b).zip(ns).map(|((x, y), m)| (x + y) % m).collect();
                    table[i * n + j] = pos[&c] as u32;
                }
            }
            let gens = (0..ns.len())
                .map(|k| {
                    let mut e = vec![0; ns.len()];
                    e[k] = 1 % ns[k];
                    pos[&e]
                })
                .collect();
            Ok(FinGroup::assemble(elements, pos, table, 0, gens))
        }
        FormalGroupSpec::CentralExt2(n1, n2) => {
            let (n1, n2) = (*n1, *n2);
            if n1 == 0 || n2 == 0 {
                return Err(GroupError::InvalidFormal("cyclic orders must be positive".into()));
            }
            if n1 % 2 != 0 || n2 % 2 != 0 {
                return Err(GroupError::InvalidFormal("CentralExt2 needs even orders".into()));
            }
            let mut elements: Vec<FormalElem> = Vec::new();
            for a in 0..2 {
                for b in 0..n1 {
                    for c in 0..n2 {
                        elements.push(vec![a, b, c]);
                    }
                }
            }
            let pos: HashMap<FormalElem, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let n = elements.len();
            let mut table = vec![0u32; n * n];
            for (i, x) in elements.iter().enumerate() {
                for (j, y) in elements.iter().enumerate() {
                    let z = vec![(x[0] + y[0] + x[2] * y[1]) % 2, (x[1] + y[1]) % n1, (x[2] + y[2]) % n2];
                    table[i * n + j] = pos[&z] as u32;
                }
            }
            let g1 = pos[&vec![0, 1 % n1, 0]];
            let g2 = pos[&vec![0, 0, 1 % n2]];
            let g0 = pos[&vec![1, 0, 0]];
            let grp = FinGroup::assemble(elements, pos, table, 0, vec![g1, g2]);
            let ok = grp.pow(g1, n1 as u64) == grp.identity
                && grp.pow(g2, n2 as u64) == grp.identity
                && grp.mul(g0, g0) == grp.identity
                && (0..grp.order()).all(|x| grp.commute(g0, x))
                && grp.mul(g2, g1) == grp.mul(g0, grp.mul(g1, g2));
            if !ok {
                return Err(GroupError::InvalidFormal("relations fail".into()));
            }
            Ok(grp)
        }
    }
}

/// Index-level homomorphism between two finite groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupMap {
    pub images: Vec<usize>,
}

impl GroupMap {
    pub fn is_homomorphism<A: Label, B: Label>(&self, src: &FinGroup<A>, dst: &FinGroup<B>) -> bool {
        (0..src.order()).all(|x| {
            (0..src.order()).all(|y| self.images[src.mul(x, y)] == dst.mul(self.images[x], self.images[y]))
        })
    }

    pub fn is_trivial<B: Label>(&self, dst: &FinGroup<B>) -> bool {
        self.images.iter().all(|&i| i == dst.identity())
    }
}

/// `g/n` for a normal subgroup `n` (given by indices in `g`), with the projection.
///
/// Cosets are labelled by their least member index.
pub fn quotient_by_central<E: Label>(g: &FinGroup<E>, n: &[usize]) -> GroupResult<(FinGroup<usize>, GroupMap)> {
    if !g.is_normal(n) {
        return Err(GroupError::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut labels: Vec<usize> = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = labels.len();
        labels.push(x);
        for &h in n {
            coset_of[g.mul(x, h)] = id;
        }
    }
    let m = labels.len();
    let mut table = vec![0u32; m * m];
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate() {
            table[i * m + j] = coset_of[g.mul(a, b)] as u32;
        }
    }
    let index = labels.iter().copied().enumerate().map(|(i, l)| (l, i)).collect();
    let gens: Vec<usize> = {
        let mut v: Vec<usize> = g.generators().iter().map(|&x| coset_of[x]).collect();
        v.dedup();
        v
    };
    let q = FinGroup::assemble(labels, index, table, coset_of[g.identity()], gens);
    let proj = GroupMap { images: coset_of };
    debug_assert!(proj.is_homomorphism(g, &q));
    Ok((q, proj))
}

/// A basis of an elementary abelian 2-group viewed as an `F₂`-space.
pub fn f2_basis<E: Label>(g: &FinGroup<E>) -> GroupResult<Vec<usize>> {
    if !g.is_elementary_abelian_2() {
        return Err(GroupError::NotElementaryAbelian2);
    }
    let mut basis = Vec::new();
    let mut span = vec![g.identity()];
    for x in 0..g.order() {
        if span.contains(&x) {
            continue;
        }
        basis.push(x);
        span = g.subgroup_indices(&basis);
    }
    Ok(basis)
}

/// Every homomorphism between two elementary abelian 2-groups.
pub fn hom_set_to_elem_abelian_2<A: Label, B: Label>(src: &FinGroup<A>, target: &FinGroup<B>) -> GroupResult<Vec<GroupMap>> {
    let basis = f2_basis(src)?;
    if !target.is_elementary_abelian_2() {
        return Err(GroupError::NotElementaryAbelian2);
    }
    let (order, tree) = src.cayley_tree(&basis);
    debug_assert_eq!(order.len(), src.order());
    let t = target.order();
    let r = basis.len();
    let total = t.pow(r as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let gen_img: Vec<usize> = (0..r)
            .map(|_| {
                let v = c % t;
                c /= t;
                v
            })
            .collect();
        let mut images = vec![target.identity(); src.order()];
        for &x in order.iter().skip(1) {
            let (p, s) = tree[x].unwrap();
            images[x] = target.mul(images[p], gen_img[s]);
        }
        let m = GroupMap { images };
        debug_assert!(m.is_homomorphism(src, target));
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::CycNum;

    fn diag(v: &[CycNum]) -> ExactMatrix {
        ExactMatrix::diag(v)
    }

    fn su4_gens() -> Vec<ExactMatrix> {
        let i = CycNum::i();
        let one = CycNum::one();
        vec![
            diag(&[one.clone(), one.clone(), i.clone(), -&i]),
            diag(&[one.clone(), i.clone(), one, -&i]),
        ]
    }

    #[test]
    fn closure_orders() {
        let g = closure(&ExactMatrix::identity(4), &su4_gens(), 1000).unwrap();
        assert_eq!(g.order(), 16);
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 4);
        let t = closure(&ExactMatrix::identity(4), &[], 10).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn closure_cap() {
        let r = closure(&ExactMatrix::identity(4), &su4_gens(), 5);
        assert_eq!(r.unwrap_err(), GroupError::ClosureCap { cap: 5 });
    }

    #[test]
    fn closure_generator_order_independent() {
        let mut gens = su4_gens();
        let a = closure(&ExactMatrix::identity(4), &gens, 100).unwrap();
        gens.reverse();
        let b = closure(&ExactMatrix::identity(4), &gens, 100).unwrap();
        let sa: HashSet<_> = a.elements().iter().collect();
        let sb: HashSet<_> = b.elements().iter().collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn table_matches_direct_products() {
        let q8 = closure(&Quat::one(), &[Quat::i(), Quat::j(), Quat::eta()], 100).unwrap();
        for a in 0..q8.order() {
            for b in 0..q8.order() {
                assert_eq!(q8.element(q8.mul(a, b)), &q8.element(a).mul(q8.element(b)));
            }
            assert!(q8.element(q8.inv(a)).mul(q8.element(a)).is_one());
        }
    }

    #[test]
    fn formal_groups() {
        let c44 = formal_group(&FormalGroupSpec::CyclicProduct(vec![4, 4])).unwrap();
        assert_eq!(c44.order(), 16);
        assert_eq!(c44.exponent(), 4);
        let c33 = formal_group(&FormalGroupSpec::CyclicProduct(vec![3, 3])).unwrap();
        assert_eq!(c33.order(), 9);
        let ext = formal_group(&FormalGroupSpec::CentralExt2(4, 4)).unwrap();
        assert_eq!(ext.order(), 32);
        let g0 = ext.index_of(&vec![1, 0, 0]).unwrap();
        assert!(ext.center_indices().contains(&g0));
        let der = ext.derived_indices();
        assert_eq!(der.len(), 2);
        assert!(der.contains(&g0));
        let (ab, _) = quotient_by_central(&ext, &der).unwrap();
        assert_eq!(ab.order(), 16);
        assert!(ab.is_abelian());
        assert_eq!(ab.exponent(), 4);
        assert!(formal_group(&FormalGroupSpec::CyclicProduct(vec![0])).is_err());
        assert!(formal_group(&FormalGroupSpec::CentralExt2(3, 4)).is_err());
    }

    #[test]
    fn homs_from_generators() {
        let c44 = formal_group(&FormalGroupSpec::CyclicProduct(vec![4, 4])).unwrap();
        let h = hom_from_gens(&c44, c44.generators(), &su4_gens(), &ExactMatrix::identity(4)).unwrap();
        assert_eq!(h.image_size(), 16);
        let c2 = formal_group(&FormalGroupSpec::CyclicProduct(vec![2])).unwrap();
        let bad = hom_from_gens(&c2, c2.generators(), &[Quat::eta()], &Quat::one());
        assert!(matches!(bad, Err(GroupError::NotAHomomorphism { .. })));
    }

    #[test]
    fn inclusion_hom_is_identity() {
        let q = closure(&Quat::one(), &[Quat::i(), Quat::j()], 100).unwrap();
        let gens: Vec<Quat> = q.generators().iter().map(|&g| q.element(g).clone()).collect();
        let h = hom_from_gens(&q, q.generators(), &gens, &Quat::one()).unwrap();
        for x in 0..q.order() {
            assert_eq!(h.image(x), q.element(x));
        }
    }

    #[test]
    fn centralizers() {
        let q8 = closure(&Quat::one(), &[Quat::i(), Quat::j()], 100).unwrap();
        assert_eq!(q8.order(), 8);
        let i = q8.index_of(&Quat::i()).unwrap();
        assert_eq!(centralizer_in(&q8, &[i]).order(), 4);
        let all: Vec<usize> = (0..8).collect();
        assert_eq!(centralizer_in(&q8, &all).order(), q8.center_indices().len());
        assert_eq!(centralizer_in(&q8, &[q8.identity()]).order(), 8);
    }

    #[test]
    fn class_equation() {
        let g = closure(&Quat::one(), &[Quat::i(), Quat::j(), Quat::eta()], 100).unwrap();
        let sizes = g.conjugacy_class_sizes();
        assert_eq!(sizes.iter().sum::<usize>(), g.order());
        assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), g.center_indices().len());
    }

    #[test]
    fn quotients() {
        let c44 = formal_group(&FormalGroupSpec::CyclicProduct(vec![4, 4])).unwrap();
        let squares: Vec<usize> = {
            let s: Vec<usize> = (0..16).map(|x| c44.mul(x, x)).collect();
            c44.subgroup_indices(&s)
        };
        let (q, p) = quotient_by_central(&c44, &squares).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_elementary_abelian_2());
        assert!(p.is_homomorphism(&c44, &q));
        let all: Vec<usize> = (0..16).collect();
        assert_eq!(quotient_by_central(&c44, &all).unwrap().0.order(), 1);
        let q8 = closure(&Quat::one(), &[Quat::eta(), Quat::j()], 100).unwrap();
        let sub = q8.subgroup_indices(&[q8.index_of(&Quat::j()).unwrap()]);
        assert_eq!(quotient_by_central(&q8, &sub).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn hom_sets() {
        let c2 = formal_group(&FormalGroupSpec::CyclicProduct(vec![2])).unwrap();
        let c2_4 = formal_group(&FormalGroupSpec::CyclicProduct(vec![2, 2, 2, 2])).unwrap();
        let c2_3 = formal_group(&FormalGroupSpec::CyclicProduct(vec![2, 2, 2])).unwrap();
        let triv = formal_group(&FormalGroupSpec::CyclicProduct(vec![1])).unwrap();
        assert_eq!(hom_set_to_elem_abelian_2(&c2_4, &c2).unwrap().len(), 16);
        assert_eq!(hom_set_to_elem_abelian_2(&c2_3, &c2).unwrap().len(), 8);
        assert_eq!(hom_set_to_elem_abelian_2(&c2_3, &triv).unwrap().len(), 1);
        let c4 = formal_group(&FormalGroupSpec::CyclicProduct(vec![4])).unwrap();
        assert_eq!(hom_set_to_elem_abelian_2(&c4, &c2).unwrap_err(), GroupError::NotElementaryAbelian2);
    }

    #[test]
    fn from_table_validates() {
        assert!(FinGroup::from_table(vec![0u8, 1], vec![0, 1, 1, 0], vec![1]).is_ok());
        assert!(FinGroup::from_table(vec![0u8, 1], vec![0, 1, 1, 1], vec![1]).is_err());
    }
}
