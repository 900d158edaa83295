//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! A [`CycNum`] is stored in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}` of the
//! *smallest* cyclotomic field containing it, so two values are equal exactly
//! when their conductors and coefficient vectors are equal. Arithmetic between
//! values of different conductors happens in the field of the lcm conductor and
//! the result is lowered back to its minimal conductor.
//!
//! Coefficients are rationals with a common positive denominator. The common
//! case (small numerators) runs on checked `i128` arithmetic and falls back to
//! `BigInt` on overflow, so results are always exact.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ExactError, ExactResult};

/// Largest conductor arithmetic may reach before it is rejected.
pub const MAX_CONDUCTOR: u32 = 240;

// ---------------------------------------------------------------------------
// Per-conductor data
// ---------------------------------------------------------------------------

struct FieldData {
    deg: usize,
    /// `ζ^e` for `0 <= e < n` in the power basis.
    powers: Vec<Vec<i64>>,
    primes: Vec<u32>,
}

/// Left inverse of the embedding `Q(ζ_t) -> Q(ζ_n)`, scaled to integers.
struct Restriction {
    t: u32,
    scale: i64,
    rows: Vec<Vec<i64>>,
}

fn field_cache() -> &'static RwLock<HashMap<u32, Arc<FieldData>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn restriction_cache() -> &'static RwLock<HashMap<(u32, u32), Arc<Restriction>>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), Arc<Restriction>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exact division of integer polynomials (low degree first) by a monic divisor.
fn poly_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by every Φ_d for proper divisors d of n.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_monic(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn field(n: u32) -> Arc<FieldData> {
    if let Some(f) = field_cache().read().unwrap().get(&n) {
        return f.clone();
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let mut powers: Vec<Vec<i64>> = Vec::with_capacity(n as usize);
    for e in 0..n as usize {
        if e < deg {
            let mut v = vec![0i64; deg];
            v[e] = 1;
            powers.push(v);
        } else {
            let prev = &powers[e - 1];
            let top = prev[deg - 1];
            let mut v = vec![0i64; deg];
            for i in (1..deg).rev() {
                v[i] = prev[i - 1];
            }
            for i in 0..deg {
                v[i] -= top * phi[i];
            }
            powers.push(v);
        }
    }
    let data = Arc::new(FieldData {
        deg,
        powers,
        primes: prime_factors(n),
    });
    field_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert(data)
        .clone()
}

fn restriction(n: u32, t: u32) -> Arc<Restriction> {
    if let Some(r) = restriction_cache().read().unwrap().get(&(n, t)) {
        return r.clone();
    }
    let big = field(n);
    let small = field(t);
    let step = (n / t) as usize;
    // Embedding matrix: column k is ζ_t^k written in the basis of Q(ζ_n).
    let emb: Vec<Vec<BigRational>> = (0..big.deg)
        .map(|j| {
            (0..small.deg)
                .map(|k| BigRational::from_integer(big.powers[(k * step) % n as usize][j].into()))
                .collect()
        })
        .collect();
    // Pick independent rows greedily, then invert that square block.
    let mut chosen: Vec<usize> = Vec::new();
    let mut echelon: Vec<Vec<BigRational>> = Vec::new();
    for (j, row) in emb.iter().enumerate() {
        let mut r = row.clone();
        for e in &echelon {
            let lead = e.iter().position(|x| !x.is_zero()).unwrap();
            if !r[lead].is_zero() {
                let f = &r[lead] / &e[lead];
                for c in 0..r.len() {
                    let d = &f * &e[c];
                    r[c] -= d;
                }
            }
        }
        if r.iter().any(|x| !x.is_zero()) {
            echelon.push(r);
            chosen.push(j);
            if chosen.len() == small.deg {
                break;
            }
        }
    }
    let square: Vec<Vec<BigRational>> = chosen.iter().map(|&j| emb[j].clone()).collect();
    let inv = invert_rational(&square);
    // inv is deg_t x deg_t with inv * square = I; spread into deg_t x deg_n.
    let mut denom = BigInt::one();
    for row in &inv {
        for x in row {
            denom = denom.lcm(x.denom());
        }
    }
    let rows: Vec<Vec<i64>> = (0..small.deg)
        .map(|k| {
            let mut out = vec![0i64; big.deg];
            for (c, &j) in chosen.iter().enumerate() {
                let v = &inv[k][c] * BigRational::from_integer(denom.clone());
                out[j] = v.to_integer().to_i64().expect("restriction coefficient overflow");
            }
            out
        })
        .collect();
    let data = Arc::new(Restriction {
        t,
        scale: denom.to_i64().expect("restriction scale overflow"),
        rows,
    });
    restriction_cache()
        .write()
        .unwrap()
        .entry((n, t))
        .or_insert(data)
        .clone()
}

fn invert_rational(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular embedding block");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

// ---------------------------------------------------------------------------
// Generic coefficient arithmetic (checked i128, then BigInt)
// ---------------------------------------------------------------------------

trait Coef: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn as_i64(&self) -> Option<i64>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
}

const I128_LIMIT: i128 = 1 << 120;

fn bounded(v: i128) -> Option<i128> {
    (-I128_LIMIT..=I128_LIMIT).contains(&v).then_some(v)
}

impl Coef for i128 {
    fn nil() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128().and_then(bounded)
    }
    fn as_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o).and_then(bounded)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o).and_then(bounded)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).and_then(bounded)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        Some(-*self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl Coef for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn as_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

/// Unnormalized value in `Q(ζ_n)`: `num / den` with `den > 0`.
#[derive(Clone, Debug)]
struct Raw<T> {
    n: u32,
    num: Vec<T>,
    den: T,
}

fn accumulate<T: Coef>(f: &FieldData, acc: &[T]) -> Option<Vec<T>> {
    let mut out: Vec<T> = acc[..f.deg].to_vec();
    for (e, c) in acc.iter().enumerate().skip(f.deg) {
        if c.is_zero() {
            continue;
        }
        for (k, &p) in f.powers[e].iter().enumerate() {
            if p != 0 {
                out[k] = out[k].add(&c.mul(&T::from_i64(p))?)?;
            }
        }
    }
    Some(out)
}

/// Re-expresses `raw` after mapping each exponent `k` to `map(k) mod target`.
fn map_exponents<T: Coef>(raw: &Raw<T>, target: u32, map: impl Fn(usize) -> usize) -> Option<Raw<T>> {
    let f = field(target);
    let mut acc = vec![T::nil(); target as usize];
    for (k, c) in raw.num.iter().enumerate() {
        if !c.is_zero() {
            let e = map(k) % target as usize;
            acc[e] = acc[e].add(c)?;
        }
    }
    Some(Raw {
        n: target,
        num: accumulate(&f, &acc)?,
        den: raw.den.clone(),
    })
}

fn embed_raw<T: Coef>(raw: &Raw<T>, target: u32) -> Option<Raw<T>> {
    if raw.n == target {
        return Some(raw.clone());
    }
    let step = (target / raw.n) as usize;
    map_exponents(raw, target, |k| k * step)
}

fn mul_raw<T: Coef>(a: &Raw<T>, b: &Raw<T>) -> Option<Raw<T>> {
    debug_assert_eq!(a.n, b.n);
    let f = field(a.n);
    let n = a.n as usize;
    let mut acc = vec![T::nil(); n];
    for (i, x) in a.num.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.num.iter().enumerate() {
            if !y.is_zero() {
                let e = (i + j) % n;
                acc[e] = acc[e].add(&x.mul(y)?)?;
            }
        }
    }
    Some(Raw {
        n: a.n,
        num: accumulate(&f, &acc)?,
        den: a.den.mul(&b.den)?,
    })
}

fn add_raw<T: Coef>(a: &Raw<T>, b: &Raw<T>, negate_b: bool) -> Option<Raw<T>> {
    debug_assert_eq!(a.n, b.n);
    let combine = |x: &T, y: &T| if negate_b { x.sub(y) } else { x.add(y) };
    if a.den == b.den {
        let num = a.num.iter().zip(&b.num).map(|(x, y)| combine(x, y)).collect::<Option<Vec<_>>>()?;
        return Some(Raw { n: a.n, num, den: a.den.clone() });
    }
    let num = a
        .num
        .iter()
        .zip(&b.num)
        .map(|(x, y)| combine(&x.mul(&b.den)?, &y.mul(&a.den)?))
        .collect::<Option<Vec<_>>>()?;
    Some(Raw {
        n: a.n,
        num,
        den: a.den.mul(&b.den)?,
    })
}

fn reduce_content<T: Coef>(mut raw: Raw<T>) -> Raw<T> {
    if raw.num.iter().all(|c| c.is_zero()) {
        return Raw { n: 1, num: vec![T::nil()], den: T::from_i64(1) };
    }
    let mut g = raw.den.clone();
    for c in &raw.num {
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if g.is_negative() {
        g = g.neg().unwrap();
    }
    if g != T::from_i64(1) {
        for c in raw.num.iter_mut() {
            *c = c.div_exact(&g);
        }
        raw.den = raw.den.div_exact(&g);
    }
    raw
}

fn try_restrict<T: Coef>(raw: &Raw<T>, t: u32) -> Option<Option<Raw<T>>> {
    let r = restriction(raw.n, t);
    debug_assert_eq!(r.t, t);
    let mut c = Vec::with_capacity(r.rows.len());
    for row in &r.rows {
        let mut acc = T::nil();
        for (j, &w) in row.iter().enumerate() {
            if w != 0 && !raw.num[j].is_zero() {
                acc = acc.add(&raw.num[j].mul(&T::from_i64(w))?)?;
            }
        }
        c.push(acc);
    }
    let candidate = Raw { n: t, num: c, den: raw.den.mul(&T::from_i64(r.scale))? };
    let back = embed_raw(&Raw { n: t, num: candidate.num.clone(), den: T::from_i64(1) }, raw.n)?;
    let scale = T::from_i64(r.scale);
    for (x, y) in back.num.iter().zip(&raw.num) {
        if *x != y.mul(&scale)? {
            return Some(None);
        }
    }
    Some(Some(candidate))
}

/// Lowers `raw` to the smallest cyclotomic field containing it.
fn lower<T: Coef>(raw: Raw<T>) -> Option<Raw<T>> {
    let mut raw = reduce_content(raw);
    'outer: loop {
        if raw.n == 1 {
            return Some(raw);
        }
        if raw.num[1..].iter().all(|c| c.is_zero()) {
            return Some(Raw { n: 1, num: vec![raw.num[0].clone()], den: raw.den });
        }
        let f = field(raw.n);
        for &p in &f.primes {
            let m = raw.n / p;
            let t = if m % 4 == 2 { m / 2 } else { m };
            if t == 1 {
                continue;
            }
            if m.is_multiple_of(p) && m % 4 != 2 {
                // Φ_n(x) = Φ_m(x^p): the subfield is spanned by ζ^{pk}.
                let pu = p as usize;
                if raw.num.iter().enumerate().all(|(k, c)| k % pu == 0 || c.is_zero()) {
                    let num = raw.num.iter().step_by(pu).cloned().collect();
                    raw = Raw { n: m, num, den: raw.den };
                    continue 'outer;
                }
            } else if let Some(r) = try_restrict(&raw, t)? {
                raw = reduce_content(r);
                continue 'outer;
            }
        }
        return Some(raw);
    }
}

// ---------------------------------------------------------------------------
// CycNum
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Hash)]
enum Store {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

/// An exact element of a cyclotomic field, in canonical (minimal conductor) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u32,
    store: Store,
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl CycNum {
    fn to_raw<T: Coef>(&self) -> Option<Raw<T>> {
        match &self.store {
            Store::Small { num, den } => Some(Raw {
                n: self.n,
                num: num.iter().map(|&v| T::from_i64(v)).collect(),
                den: T::from_i64(*den),
            }),
            Store::Big { num, den } => Some(Raw {
                n: self.n,
                num: num.iter().map(T::from_big).collect::<Option<Vec<_>>>()?,
                den: T::from_big(den)?,
            }),
        }
    }

    fn from_lowered<T: Coef>(raw: Raw<T>) -> CycNum {
        let small: Option<Vec<i64>> = raw.num.iter().map(|c| c.as_i64()).collect();
        let store = match (small, raw.den.as_i64()) {
            (Some(num), Some(den)) => Store::Small { num, den },
            _ => Store::Big {
                num: raw.num.iter().map(|c| c.to_big()).collect(),
                den: raw.den.to_big(),
            },
        };
        CycNum { n: raw.n, store }
    }

    fn binary(&self, other: &CycNum, op: Op) -> ExactResult<CycNum> {
        let n = lcm_checked(self.n, other.n)?;
        fn go<T: Coef>(a: &CycNum, b: &CycNum, n: u32, op: Op) -> Option<Raw<T>> {
            let x = embed_raw(&a.to_raw::<T>()?, n)?;
            let y = embed_raw(&b.to_raw::<T>()?, n)?;
            let r = match op {
                Op::Add => add_raw(&x, &y, false)?,
                Op::Sub => add_raw(&x, &y, true)?,
                Op::Mul => mul_raw(&x, &y)?,
            };
            lower(r)
        }
        if let Some(r) = go::<i128>(self, other, n, op) {
            return Ok(CycNum::from_lowered(r));
        }
        Ok(CycNum::from_lowered(go::<BigInt>(self, other, n, op).expect("bigint arithmetic")))
    }

    fn map_unary(&self, f: impl Fn(&Raw<i128>) -> Option<Raw<i128>>, g: impl Fn(&Raw<BigInt>) -> Option<Raw<BigInt>>) -> CycNum {
        if let Some(r) = self.to_raw::<i128>().and_then(|r| f(&r)).and_then(lower) {
            return CycNum::from_lowered(r);
        }
        let r = self.to_raw::<BigInt>().and_then(|r| g(&r)).and_then(lower).expect("bigint arithmetic");
        CycNum::from_lowered(r)
    }

    /// Builds `Σ coeffs[k] ζ_conductor^k`, reduced to canonical form.
    ///
    /// `coeffs` may have any length; exponents are taken modulo the conductor.
    pub fn new(conductor: i64, coeffs: &[BigRational]) -> ExactResult<CycNum> {
        if conductor < 1 {
            return Err(ExactError::BadConductor(conductor));
        }
        if conductor > MAX_CONDUCTOR as i64 {
            return Err(ExactError::ConductorCap { needed: conductor as u64, cap: MAX_CONDUCTOR });
        }
        let c = conductor as u32;
        // Q(ζ_{2k}) = Q(ζ_k) for odd k, but ζ_{2k} itself lives most naturally in conductor 4k.
        let work = if c % 4 == 2 { 2 * c } else { c };
        if work > MAX_CONDUCTOR {
            return Err(ExactError::ConductorCap { needed: work as u64, cap: MAX_CONDUCTOR });
        }
        let mut den = BigInt::one();
        for q in coeffs {
            den = den.lcm(q.denom());
        }
        let scaled: Vec<BigInt> = coeffs.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
        let step = (work / c) as usize;
        let f = field(work);
        let mut acc = vec![BigInt::zero(); work as usize];
        for (k, v) in scaled.iter().enumerate() {
            let e = (k % c as usize) * step;
            acc[e] += v;
        }
        let raw = Raw { n: work, num: accumulate(&f, &acc).unwrap(), den };
        Ok(CycNum::from_lowered(lower(raw).unwrap()))
    }

    pub fn zero() -> CycNum {
        CycNum { n: 1, store: Store::Small { num: vec![0], den: 1 } }
    }

    pub fn one() -> CycNum {
        CycNum::from_i64(1)
    }

    pub fn from_i64(v: i64) -> CycNum {
        CycNum { n: 1, store: Store::Small { num: vec![v], den: 1 } }
    }

    pub fn from_rational(q: &BigRational) -> CycNum {
        let raw = Raw { n: 1, num: vec![q.numer().clone()], den: q.denom().clone() };
        CycNum::from_lowered(reduce_content(raw))
    }

    /// `p / q` as a field element. Panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> CycNum {
        CycNum::from_rational(&BigRational::new(p.into(), q.into()))
    }

    /// `ζ_n^k` with `ζ_n = e^{2πi/n}`.
    pub fn root_of_unity(n: u32, k: i64) -> CycNum {
        let e = k.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        CycNum::new(n as i64, &coeffs).expect("root of unity conductor within cap")
    }

    /// The imaginary unit `i = ζ_4`.
    pub fn i() -> CycNum {
        CycNum::root_of_unity(4, 1)
    }

    /// `√2 = ζ_8 + ζ_8^{-1}`.
    pub fn sqrt2() -> CycNum {
        &CycNum::root_of_unity(8, 1) + &CycNum::root_of_unity(8, -1)
    }

    /// `cos(2πk/m)`.
    pub fn cos_2pi(k: i64, m: u32) -> CycNum {
        let z = CycNum::root_of_unity(m, k);
        (&z + &z.conj()).scale(&BigRational::new(1.into(), 2.into()))
    }

    /// `sin(2πk/m)`.
    pub fn sin_2pi(k: i64, m: u32) -> CycNum {
        let z = CycNum::root_of_unity(m, k);
        let two_i = &CycNum::i() * &CycNum::from_i64(2);
        &(&z - &z.conj()) / &two_i
    }

    /// Minimal conductor of the value.
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Coefficients in the power basis of `Q(ζ_conductor)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        match &self.store {
            Store::Small { num, den } => num
                .iter()
                .map(|&v| BigRational::new(v.into(), (*den).into()))
                .collect(),
            Store::Big { num, den } => num.iter().map(|v| BigRational::new(v.clone(), den.clone())).collect(),
        }
    }

    /// Checks that `self` embeds into `Q(ζ_target)` and returns the same value.
    ///
    /// Values are always held in their minimal field, so embedding never changes
    /// the representation; use [`CycNum::coeffs_in`] to see the coordinates in
    /// the larger field.
    pub fn embed(&self, target: u32) -> ExactResult<CycNum> {
        self.check_embeds(target)?;
        Ok(self.clone())
    }

    fn check_embeds(&self, target: u32) -> ExactResult<()> {
        if target == 0 {
            return Err(ExactError::BadConductor(0));
        }
        if target > MAX_CONDUCTOR {
            return Err(ExactError::ConductorCap { needed: target as u64, cap: MAX_CONDUCTOR });
        }
        let work = if target % 4 == 2 { target / 2 } else { target };
        if work % self.n != 0 {
            return Err(ExactError::NotDivisible { from: self.n, to: target });
        }
        Ok(())
    }

    /// Coordinates of `self` in the power basis of `Q(ζ_target)`.
    pub fn coeffs_in(&self, target: u32) -> ExactResult<Vec<BigRational>> {
        self.check_embeds(target)?;
        if target % 4 == 2 {
            // ζ_{2k} = -ζ_k^{(k+1)/2} for odd k; solve for coordinates in powers of ζ_{2k}.
            let k = target / 2;
            let f = field(k);
            let x = embed_raw(&self.to_raw::<BigInt>().unwrap(), k).unwrap();
            let half = (k as usize).div_ceil(2);
            let cols: Vec<Vec<BigRational>> = (0..f.deg)
                .map(|j| {
                    let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
                    f.powers[(j * half) % k as usize]
                        .iter()
                        .map(|&v| BigRational::from_integer((sign * v).into()))
                        .collect()
                })
                .collect();
            let m: Vec<Vec<BigRational>> = (0..f.deg).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            let inv = invert_rational(&m);
            return Ok(inv
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&x.num)
                        .fold(BigRational::zero(), |acc, (a, v)| acc + a * BigRational::new(v.clone(), x.den.clone()))
                })
                .collect());
        }
        let raw = embed_raw(&self.to_raw::<BigInt>().unwrap(), target).unwrap();
        Ok(raw.num.iter().map(|v| BigRational::new(v.clone(), raw.den.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && matches!(&self.store, Store::Small { num, .. } if num[0] == 0)
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && matches!(&self.store, Store::Small { num, den } if num[0] == 1 && *den == 1)
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs()[0].clone())
    }

    /// Field automorphism `ζ ↦ ζ^a` (requires `gcd(a, conductor) = 1`).
    pub fn galois(&self, a: i64) -> CycNum {
        let n = self.n;
        let a = a.rem_euclid(n as i64) as usize;
        debug_assert_eq!(Integer::gcd(&a, &(n as usize)), 1);
        self.map_unary(
            |r| map_exponents(r, n, |k| k * a),
            |r| map_exponents(r, n, |k| k * a),
        )
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycNum {
        if self.n == 1 {
            return self.clone();
        }
        self.galois(self.n as i64 - 1)
    }

    /// Whether the value is fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn scale(&self, q: &BigRational) -> CycNum {
        self.map_unary(
            |r| {
                let p = i128::from_big(q.numer())?;
                let d = i128::from_big(q.denom())?;
                Some(Raw {
                    n: r.n,
                    num: r.num.iter().map(|c| c.mul(&p)).collect::<Option<Vec<_>>>()?,
                    den: r.den.mul(&d)?,
                })
            },
            |r| {
                Some(Raw {
                    n: r.n,
                    num: r.num.iter().map(|c| c * q.numer()).collect(),
                    den: &r.den * q.denom(),
                })
            },
        )
    }

    pub fn try_add(&self, o: &CycNum) -> ExactResult<CycNum> {
        self.binary(o, Op::Add)
    }

    pub fn try_sub(&self, o: &CycNum) -> ExactResult<CycNum> {
        self.binary(o, Op::Sub)
    }

    pub fn try_mul(&self, o: &CycNum) -> ExactResult<CycNum> {
        if self.is_zero() || o.is_zero() {
            return Ok(CycNum::zero());
        }
        if self.is_one() {
            return Ok(o.clone());
        }
        if o.is_one() {
            return Ok(self.clone());
        }
        self.binary(o, Op::Mul)
    }

    pub fn try_div(&self, o: &CycNum) -> ExactResult<CycNum> {
        self.try_mul(&o.inv().ok_or(ExactError::DivisionByZero)?)
    }

    /// Multiplicative inverse via the norm: `x⁻¹ = (∏_{σ≠1} σx) / N(x)`.
    pub fn inv(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(CycNum::from_rational(&q.recip()));
        }
        let n = self.n as i64;
        let mut prod = CycNum::one();
        for a in 2..n {
            if Integer::gcd(&a, &n) == 1 {
                prod = &prod * &self.galois(a);
            }
        }
        let norm = (self * &prod).to_rational().expect("field norm is rational");
        Some(prod.scale(&norm.recip()))
    }

    pub fn pow(&self, e: i64) -> CycNum {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = CycNum::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative order if `self` is a root of unity of order dividing `bound`.
    pub fn root_order(&self, bound: u32) -> Option<u32> {
        let mut x = self.clone();
        for k in 1..=bound {
            if x.is_one() {
                return Some(k);
            }
            x = &x * self;
        }
        None
    }
}

impl CycNum {
    /// A square root of a rational value, when it lies within the conductor cap.
    ///
    /// Square roots of primes come from quadratic Gauss sums; the result is the
    /// positive root for positive input and `i` times it for negative input.
    pub fn sqrt_rational(&self) -> Option<CycNum> {
        let q = self.to_rational()?;
        if q.is_zero() {
            return Some(CycNum::zero());
        }
        // √(p/q) = √(p·q) / q
        let den = q.denom().clone();
        let mut rest = (q.numer() * &den).abs();
        let mut outside = BigInt::one();
        let mut root = CycNum::one();
        let mut p = BigInt::from(2u32);
        while &p * &p <= rest {
            let mut e = 0u32;
            while Zero::is_zero(&(&rest % &p)) {
                rest /= &p;
                e += 1;
            }
            if e >= 2 {
                outside *= num_traits::pow(p.clone(), (e / 2) as usize);
            }
            if e % 2 == 1 {
                root = root.try_mul(&sqrt_prime(p.to_u32()?)?).ok()?;
            }
            p += 1;
        }
        if rest > BigInt::one() {
            root = root.try_mul(&sqrt_prime(rest.to_u32()?)?).ok()?;
        }
        let mut out = root.scale(&BigRational::new(outside, den));
        if q.is_negative() {
            out = out.try_mul(&CycNum::i()).ok()?;
        }
        Some(out)
    }
}

fn sqrt_prime(p: u32) -> Option<CycNum> {
    if p == 2 {
        return Some(CycNum::sqrt2());
    }
    if p > MAX_CONDUCTOR {
        return None;
    }
    let mut g = CycNum::zero();
    for k in 1..p {
        let chi = if (1..p).any(|x| (x as u64 * x as u64) % p as u64 == k as u64) { 1 } else { -1 };
        let z = CycNum::root_of_unity(p, k as i64);
        g = if chi == 1 { &g + &z } else { &g - &z };
    }
    if p % 4 == 3 {
        g = g.try_mul(&-CycNum::i()).ok()?;
    }
    Some(g)
}

fn lcm_checked(a: u32, b: u32) -> ExactResult<u32> {
    let l = (a as u64).lcm(&(b as u64));
    if l > MAX_CONDUCTOR as u64 {
        return Err(ExactError::ConductorCap { needed: l, cap: MAX_CONDUCTOR });
    }
    Ok(l as u32)
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (conductor, coefficients). Not a numeric order: it exists
/// for canonical representatives and deterministic iteration only.
impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| match (&self.store, &other.store) {
            (Store::Small { num: a, den: da }, Store::Small { num: b, den: db }) => {
                for (x, y) in a.iter().zip(b) {
                    let o = (*x as i128 * *db as i128).cmp(&(*y as i128 * *da as i128));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
            _ => {
                for (x, y) in self.coeffs().iter().zip(other.coeffs()) {
                    let o = x.cmp(&y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        })
    }
}

impl Default for CycNum {
    fn default() -> Self {
        CycNum::zero()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$try(rhs).unwrap_or_else(|e| panic!("cyclotomic arithmetic: {e}"))
            }
        }
        impl std::ops::$trait<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.map_unary(
            |r| Some(Raw { n: r.n, num: r.num.iter().map(|c| -c).collect(), den: r.den }),
            |r| Some(Raw { n: r.n, num: r.num.iter().map(|c| -c).collect(), den: r.den.clone() }),
        )
    }
}

impl std::ops::Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z{}", self.n)?,
                _ => write!(f, "({c})z{}^{k}", self.n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{self}]")
    }
}

/// Wire form: `{"n": conductor, "c": ["p/q", …]}`, coefficients in lowest terms.
#[derive(Serialize, Deserialize)]
struct CycWire {
    n: u32,
    c: Vec<String>,
}

pub fn parse_rational(s: &str) -> ExactResult<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| ExactError::ParseRational(s.to_string()))
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycWire {
            n: self.n,
            c: self.coeffs().iter().map(|q| q.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = CycWire::deserialize(deserializer)?;
        let coeffs = w
            .c
            .iter()
            .map(|s| parse_rational(s))
            .collect::<ExactResult<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CycNum::new(w.n as i64, &coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn rational_square_roots() {
        for v in [2i64, 3, 5, 6, 7, 12, 15, -1, -3, 49] {
            let x = CycNum::from_i64(v);
            let r = x.sqrt_rational().unwrap();
            assert_eq!(&r * &r, x, "sqrt({v})");
        }
        let r = CycNum::frac(9, 8).sqrt_rational().unwrap();
        assert_eq!(&r * &r, CycNum::frac(9, 8));
        assert!(CycNum::i().sqrt_rational().is_none());
        assert!(CycNum::from_i64(241).sqrt_rational().is_none());
    }

    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycNum::new(4, &[q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(&i * &i, CycNum::from_i64(-1));
    }

    #[test]
    fn sqrt2_squared() {
        let z = CycNum::root_of_unity(8, 1);
        let s = &z + &CycNum::root_of_unity(8, 7);
        assert_eq!(&s * &s, CycNum::from_i64(2));
        assert_eq!(s, CycNum::sqrt2());
    }

    #[test]
    fn fifth_roots_sum_to_zero() {
        let sum = (0..5).fold(CycNum::zero(), |acc, k| &acc + &CycNum::root_of_unity(5, k));
        assert!(sum.is_zero());
    }

    #[test]
    fn bad_conductor() {
        assert_eq!(CycNum::new(0, &[]), Err(ExactError::BadConductor(0)));
        assert!(CycNum::new(-3, &[]).is_err());
    }

    #[test]
    fn embed_examples() {
        assert_eq!(CycNum::i().coeffs_in(8).unwrap(), vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)]);
        assert_eq!(CycNum::i().embed(8).unwrap(), CycNum::root_of_unity(8, 2));
        assert_eq!(CycNum::one().embed(7).unwrap(), CycNum::one());
        let w = CycNum::root_of_unity(3, 1).embed(12).unwrap();
        assert!(w.pow(3).is_one());
        assert_eq!(
            CycNum::i().embed(6),
            Err(ExactError::NotDivisible { from: 4, to: 6 })
        );
    }

    #[test]
    fn minimal_conductor() {
        // ζ_12^4 = ζ_3, ζ_12^3 = i, ζ_6 lives in Q(ζ_3).
        assert_eq!(CycNum::root_of_unity(12, 4).conductor(), 3);
        assert_eq!(CycNum::root_of_unity(12, 3).conductor(), 4);
        assert_eq!(CycNum::root_of_unity(6, 1).conductor(), 3);
        assert_eq!(CycNum::root_of_unity(2, 1), CycNum::from_i64(-1));
        // √3 = ζ_12 + ζ_12^{-1} needs the full conductor 12.
        let s3 = &CycNum::root_of_unity(12, 1) + &CycNum::root_of_unity(12, -1);
        assert_eq!(s3.conductor(), 12);
        assert_eq!(&s3 * &s3, CycNum::from_i64(3));
    }

    #[test]
    fn coeffs_in_twice_odd_conductor() {
        // ζ_3 written over ζ_6: ζ_3 = ζ_6^2 = ζ_6 - 1.
        let w = CycNum::root_of_unity(3, 1);
        assert_eq!(w.coeffs_in(6).unwrap(), vec![q(-1, 1), q(1, 1)]);
        assert_eq!(CycNum::new(6, &w.coeffs_in(6).unwrap()).unwrap(), w);
    }

    #[test]
    fn trig_values() {
        assert!(CycNum::cos_2pi(1, 4).is_zero());
        assert!(CycNum::sin_2pi(1, 4).is_one());
        assert_eq!(CycNum::cos_2pi(1, 6), CycNum::frac(1, 2));
        for m in [3u32, 5, 8, 12] {
            for k in 0..m as i64 {
                let c = CycNum::cos_2pi(k, m);
                let s = CycNum::sin_2pi(k, m);
                assert!((&(&c * &c) + &(&s * &s)).is_one());
                assert!(c.is_real() && s.is_real());
            }
        }
    }

    #[test]
    fn inverse_and_division() {
        let x = &CycNum::root_of_unity(5, 1) + &CycNum::from_i64(3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(CycNum::zero().inv(), None);
        assert_eq!(CycNum::one().try_div(&CycNum::zero()), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn conductor_cap_is_an_error() {
        let a = CycNum::root_of_unity(16, 1);
        let b = CycNum::root_of_unity(17, 1);
        assert!(matches!(a.try_mul(&b), Err(ExactError::ConductorCap { .. })));
    }

    #[test]
    fn bigint_fallback() {
        let mut x = &CycNum::root_of_unity(8, 1) + &CycNum::from_i64(7);
        for _ in 0..6 {
            x = &x * &x;
        }
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let back: CycNum = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn wire_format() {
        let x = &CycNum::root_of_unity(8, 1).scale(&q(3, 4)) - &CycNum::frac(1, 2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"n":8,"c":["-1/2","3/4","0","0"]}"#);
        let back: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn ordering_is_total_and_consistent() {
        let mut v = [CycNum::from_i64(2),
            CycNum::i(),
            -CycNum::i(),
            CycNum::frac(1, 3),
            CycNum::root_of_unity(8, 1)];
        v.sort();
        assert_eq!(v[0], CycNum::frac(1, 3));
        assert_eq!(v[1], CycNum::from_i64(2));
        assert_eq!(v[2], -CycNum::i());
    }
}
