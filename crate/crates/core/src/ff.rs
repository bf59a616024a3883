//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! Elements are stored by their integer encoding `Σ cᵢ·pⁱ`, where `cᵢ` is the
//! coefficient of `xⁱ` in the polynomial basis. Multiplication goes through
//! exp/log tables over a primitive element; Frobenius powers are precomputed
//! from the `F_p`-linear action of `x ↦ x^p` on the basis, so they never go
//! through the log tables.

use std::fmt;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on `p^m`.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 14;

// Above this order the odd-characteristic addition table is not materialized.
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// An element of some `GF(p^m)`, tagged with the field it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    enc: u32,
    tag: u32,
}

impl FieldElement {
    /// Integer encoding `Σ cᵢ·pⁱ`.
    #[inline]
    pub fn encoding(self) -> u32 {
        self.enc
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.enc == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.enc)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.enc)
    }
}

/// Checked operations accepted by [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

/// A concrete realization of `GF(p^m)`.
pub struct FieldCtx {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    modulus_enc: u64,
    tag: u32,
    pow_p: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<Vec<u32>>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus_enc)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus_enc == other.modulus_enc
    }
}

impl Eq for FieldCtx {}

impl Serialize for FieldCtx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldCtx", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("modulus", &self.modulus_enc)?;
        st.end()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u64, m: u32, cap: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if order > cap as u128 || order > u32::MAX as u128 {
        return Err(Error::SizeCap { order, cap });
    }
    Ok(order as u32)
}

impl FieldCtx {
    /// `GF(p^m)` with the canonical modulus and the default size cap.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_cap(p, m, DEFAULT_SIZE_CAP)
    }

    /// `GF(p^m)` with the canonical modulus: the monic irreducible of degree
    /// `m` whose non-leading coefficients have minimal encoding.
    pub fn with_cap(p: u64, m: u32, cap: u64) -> Result<Self> {
        let order = checked_order(p, m, cap)?;
        let p = p as u32;
        for enc in 0..order as u64 {
            let low = digits_of(enc, p, m);
            let mut full = low.clone();
            full.push(1);
            if poly::is_irreducible(&full, p) {
                return Ok(Self::build(p, m, low, enc));
            }
        }
        unreachable!("every GF(p)[x] has irreducibles of every degree")
    }

    /// `GF(p^m)` with a caller-chosen modulus, given by the encoding of its
    /// non-leading coefficients.
    pub fn with_modulus(p: u64, m: u32, modulus_enc: u64) -> Result<Self> {
        let order = checked_order(p, m, DEFAULT_SIZE_CAP)?;
        if modulus_enc >= order as u64 {
            return Err(Error::OutOfRange {
                enc: modulus_enc,
                order: order as u64,
            });
        }
        let p = p as u32;
        let low = digits_of(modulus_enc, p, m);
        let mut full = low.clone();
        full.push(1);
        if !poly::is_irreducible(&full, p) {
            return Err(Error::NotIrreducible(modulus_enc));
        }
        Ok(Self::build(p, m, low, modulus_enc))
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>, modulus_enc: u64) -> Self {
        let order = p.pow(m);
        let pow_p: Vec<u32> = (0..m).map(|i| p.pow(i)).collect();
        let mut full = modulus.clone();
        full.push(1);

        let to_poly = |enc: u32| poly::trim(digits_of(enc as u64, p, m));
        let from_poly = |v: &[u32]| -> u32 { v.iter().zip(&pow_p).map(|(&c, &w)| c * w).sum() };
        let mulmod = |a: u32, b: u32| -> u32 {
            from_poly(&poly::mulmod(&to_poly(a), &to_poly(b), &full, p))
        };

        // Smallest encoding of multiplicative order p^m - 1.
        let group = order - 1;
        let mut generator = 0;
        'search: for g in 1..order {
            let mut cur = 1u32;
            for i in 1..=group {
                cur = mulmod(cur, g);
                if cur == 1 {
                    if i == group {
                        generator = g;
                        break 'search;
                    }
                    continue 'search;
                }
            }
        }
        debug_assert!(generator != 0);

        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![0u32; order as usize];
        let mut cur = 1u32;
        for i in 0..group {
            exp[i as usize] = cur;
            log[cur as usize] = i;
            cur = mulmod(cur, generator);
        }
        for i in group..2 * group {
            exp[i as usize] = exp[(i - group) as usize];
        }

        // x ↦ x^p is F_p-linear: tabulate it from the images of the basis.
        let images: Vec<Vec<u32>> = (0..m)
            .map(|i| {
                let mut xi = vec![0u32; i as usize + 1];
                xi[i as usize] = 1;
                let img = poly::powmod(&poly::trim(xi), p as u64, &full, p);
                let mut d = img;
                d.resize(m as usize, 0);
                d
            })
            .collect();
        let frob1: Vec<u32> = (0..order)
            .map(|e| {
                let c = digits_of(e as u64, p, m);
                let mut acc = vec![0u32; m as usize];
                for (ci, img) in c.iter().zip(&images) {
                    for (a, &v) in acc.iter_mut().zip(img) {
                        *a = (*a + ci * v) % p;
                    }
                }
                from_poly(&acc)
            })
            .collect();
        let mut frob = vec![(0..order).collect::<Vec<u32>>()];
        for t in 1..m as usize {
            let prev = &frob[t - 1];
            let next: Vec<u32> = prev.iter().map(|&v| frob1[v as usize]).collect();
            frob.push(next);
        }

        let digitwise = |a: u32, b: u32, f: &dyn Fn(u32, u32) -> u32| -> u32 {
            let mut out = 0;
            for &w in &pow_p {
                let da = (a / w) % p;
                let db = (b / w) % p;
                out += f(da, db) * w;
            }
            out
        };
        let neg: Vec<u32> = (0..order)
            .map(|a| digitwise(a, 0, &|x, _| (p - x) % p))
            .collect();
        let add = if p != 2 && order <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = digitwise(a, b, &|x, y| (x + y) % p);
                }
            }
            Some(t)
        } else {
            None
        };

        let tag = fnv1a(&[p as u64, m as u64, modulus_enc]);
        FieldCtx {
            p,
            m,
            order,
            modulus,
            modulus_enc,
            tag,
            pow_p,
            generator,
            exp,
            log,
            frob,
            neg,
            add,
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Non-leading coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_encoding(&self) -> u64 {
        self.modulus_enc
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> FieldElement {
        self.at(self.generator)
    }

    /// Element with the given encoding, range-checked.
    pub fn element(&self, enc: u64) -> Result<FieldElement> {
        if enc >= self.order as u64 {
            return Err(Error::OutOfRange {
                enc,
                order: self.order as u64,
            });
        }
        Ok(self.at(enc as u32))
    }

    /// Element with the given encoding. Panics when out of range.
    #[inline]
    pub fn at(&self, enc: u32) -> FieldElement {
        assert!(enc < self.order, "encoding {enc} out of range");
        FieldElement { enc, tag: self.tag }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.at(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.at(1)
    }

    /// Embeds an integer through `Z → GF(p)`.
    pub fn scalar(&self, c: i64) -> FieldElement {
        self.at(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |e| self.at(e))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.order).map(move |e| self.at(e))
    }

    /// Whether `e` was produced by this context.
    #[inline]
    pub fn owns(&self, e: FieldElement) -> bool {
        e.tag == self.tag
    }

    pub fn check(&self, e: FieldElement) -> Result<()> {
        if self.owns(e) {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    /// Coefficients `c₀..c_{m-1}` of `e`.
    pub fn coeffs(&self, e: FieldElement) -> Vec<u32> {
        digits_of(e.enc as u64, self.p, self.m)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m as usize {
            return Err(Error::Dimension {
                expected: self.m as usize,
                got: coeffs.len(),
            });
        }
        let mut enc = 0u64;
        for (&c, &w) in coeffs.iter().zip(&self.pow_p) {
            if c >= self.p {
                return Err(Error::OutOfRange {
                    enc: c as u64,
                    order: self.p as u64,
                });
            }
            enc += c as u64 * w as u64;
        }
        self.element(enc)
    }

    /// The `i`-th polynomial basis element `xⁱ`.
    pub fn basis(&self, i: u32) -> FieldElement {
        self.at(self.pow_p[i as usize])
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.owns(a) && self.owns(b));
        let enc = if self.p == 2 {
            a.enc ^ b.enc
        } else if let Some(t) = &self.add {
            t[(a.enc * self.order + b.enc) as usize]
        } else {
            let mut out = 0;
            for &w in &self.pow_p {
                let d = ((a.enc / w) % self.p + (b.enc / w) % self.p) % self.p;
                out += d * w;
            }
            out
        };
        FieldElement { enc, tag: self.tag }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(self.owns(a));
        FieldElement {
            enc: self.neg[a.enc as usize],
            tag: self.tag,
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.owns(a) && self.owns(b));
        if a.enc == 0 || b.enc == 0 {
            return self.zero();
        }
        let i = self.log[a.enc as usize] + self.log[b.enc as usize];
        FieldElement {
            enc: self.exp[i as usize],
            tag: self.tag,
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.enc == 0 {
            return Err(Error::InverseOfZero);
        }
        let group = self.order - 1;
        let i = (group - self.log[a.enc as usize]) % group;
        Ok(self.at(self.exp[i as usize]))
    }

    /// `a / b`; panics when `b` is zero.
    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.enc == 0 {
            return self.zero();
        }
        let group = (self.order - 1) as u64;
        let i = (self.log[a.enc as usize] as u64 * (e % group)) % group;
        self.at(self.exp[i as usize])
    }

    /// `a^(p^t)`, with `t` taken modulo `m`.
    #[inline]
    pub fn frobenius(&self, a: FieldElement, t: u32) -> FieldElement {
        debug_assert!(self.owns(a));
        let t = (t % self.m) as usize;
        FieldElement {
            enc: self.frob[t][a.enc as usize],
            tag: self.tag,
        }
    }

    /// Whether the nonzero element `a` is a `d`-th power.
    pub fn is_dth_power(&self, a: FieldElement, d: u64) -> Result<bool> {
        if a.enc == 0 {
            return Err(Error::ZeroPowerTest);
        }
        let group = (self.order - 1) as u64;
        let g = d.gcd(&group);
        Ok(self.pow(a, group / g) == self.one())
    }

    /// Checked operation dispatch: verifies arity and field membership.
    pub fn arith(&self, op: ArithOp, args: &[FieldElement]) -> Result<FieldElement> {
        let (name, arity) = match op {
            ArithOp::Add => ("add", 2),
            ArithOp::Sub => ("sub", 2),
            ArithOp::Mul => ("mul", 2),
            ArithOp::Neg => ("neg", 1),
            ArithOp::Inv => ("inv", 1),
            ArithOp::Pow(_) => ("pow", 1),
        };
        if args.len() != arity {
            return Err(Error::Arity {
                op: name,
                expected: arity,
                got: args.len(),
            });
        }
        for &a in args {
            self.check(a)?;
        }
        Ok(match op {
            ArithOp::Add => self.add(args[0], args[1]),
            ArithOp::Sub => self.sub(args[0], args[1]),
            ArithOp::Mul => self.mul(args[0], args[1]),
            ArithOp::Neg => self.neg(args[0]),
            ArithOp::Inv => self.inv(args[0])?,
            ArithOp::Pow(e) => self.pow(args[0], e),
        })
    }

    /// Writes the `m` base-`p` digits of `e` into `out`.
    #[inline]
    pub(crate) fn write_digits(&self, e: FieldElement, out: &mut [u32]) {
        let mut v = e.enc;
        for o in out.iter_mut().take(self.m as usize) {
            *o = v % self.p;
            v /= self.p;
        }
    }

    #[inline]
    pub(crate) fn from_digits_unchecked(&self, d: &[u32]) -> FieldElement {
        let enc = d.iter().zip(&self.pow_p).map(|(&c, &w)| c * w).sum();
        FieldElement { enc, tag: self.tag }
    }
}

fn digits_of(mut enc: u64, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = (enc % p as u64) as u32;
            enc /= p as u64;
            d
        })
        .collect()
}

fn fnv1a(words: &[u64]) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut acc = 1u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Dense polynomials over GF(p), lowest degree first, used only while
/// building a field context.
mod poly {
    use super::inv_mod;

    pub fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let f = trim(f.to_vec());
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p) as u64;
        while r.len() > df {
            let dr = r.len() - 1;
            let c = (r[dr] as u64 * lead_inv % p as u64) as u32;
            let shift = dr - df;
            for (i, &fi) in f.iter().enumerate() {
                let sub = (c as u64 * fi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
        rem(&prod, f, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(a, f, p);
        let mut acc = rem(&[1], f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `f` of degree m is irreducible iff gcd(f, x^{p^i} - x) = 1
    /// for every i ≤ m/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let m = f.len() - 1;
        if m == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = rem(&x, &f, p);
        for _ in 1..=m / 2 {
            h = powmod(&h, p as u64, &f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(&f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus_encoding(), 3);
        assert_eq!(FieldCtx::new(3, 3).unwrap().modulus_encoding(), 7);
        assert_eq!(FieldCtx::new(3, 3).unwrap().modulus(), &[1, 2, 0]);
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.modulus_encoding(), 0);
        assert_eq!(f3.mul(f3.at(2), f3.at(2)), f3.at(1));
        assert_eq!(f3.add(f3.at(2), f3.at(2)), f3.at(1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 2).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldCtx::new(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(FieldCtx::new(2, 15), Err(Error::SizeCap { .. })));
        assert!(FieldCtx::with_cap(2, 15, 1 << 15).is_ok());
        assert_eq!(
            FieldCtx::with_modulus(2, 3, 1).unwrap_err(),
            Error::NotIrreducible(1)
        );
    }

    #[test]
    fn gf8_examples() {
        let f = FieldCtx::new(2, 3).unwrap();
        assert_eq!(f.mul(f.at(3), f.at(2)), f.at(6));
        assert_eq!(f.inv(f.at(2)).unwrap(), f.at(5));
        assert_eq!(f.frobenius(f.at(2), 1), f.at(4));
        assert_eq!(f.inv(f.zero()), Err(Error::InverseOfZero));
        for e in f.nonzero_elements() {
            assert!(f.is_dth_power(e, 1).unwrap());
        }
    }

    #[test]
    fn identity_laws() {
        let f = FieldCtx::new(3, 3).unwrap();
        for e in f.elements() {
            assert_eq!(f.mul(e, f.one()), e);
            assert_eq!(f.add(e, f.neg(e)), f.zero());
            assert_eq!(f.frobenius(e, 0), e);
            assert_eq!(f.frobenius(e, 3), e);
        }
        assert_eq!(f.pow(f.zero(), 0), f.one());
    }

    #[test]
    fn squares_in_gf27() {
        let f = FieldCtx::new(3, 3).unwrap();
        let brute: std::collections::BTreeSet<u32> = f
            .nonzero_elements()
            .map(|e| f.mul(e, e).encoding())
            .collect();
        assert_eq!(brute.len(), 13);
        let tested = f
            .nonzero_elements()
            .filter(|&e| f.is_dth_power(e, 2).unwrap())
            .count();
        assert_eq!(tested, 13);
        for e in f.nonzero_elements() {
            assert_eq!(f.is_dth_power(e, 2).unwrap(), brute.contains(&e.encoding()));
        }
        assert_eq!(f.is_dth_power(f.zero(), 2), Err(Error::ZeroPowerTest));
    }

    #[test]
    fn checked_dispatch() {
        let f = FieldCtx::new(2, 3).unwrap();
        let g = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.arith(ArithOp::Mul, &[f.at(3), f.at(2)]).unwrap(), f.at(6));
        assert_eq!(
            f.arith(ArithOp::Add, &[f.at(3), g.at(2)]),
            Err(Error::CtxMismatch)
        );
        assert_eq!(
            f.arith(ArithOp::Inv, &[f.zero()]),
            Err(Error::InverseOfZero)
        );
        assert!(matches!(
            f.arith(ArithOp::Neg, &[f.one(), f.one()]),
            Err(Error::Arity { .. })
        ));
        assert_eq!(f.arith(ArithOp::Pow(9), &[f.at(2)]).unwrap(), f.at(4));
    }

    #[test]
    fn coefficient_io() {
        let f = FieldCtx::new(3, 3).unwrap();
        let e = f.from_coeffs(&[2, 0, 1]).unwrap();
        assert_eq!(e.encoding(), 11);
        assert_eq!(f.coeffs(e), vec![2, 0, 1]);
        assert!(f.from_coeffs(&[3, 0, 0]).is_err());
        assert!(f.from_coeffs(&[1, 0]).is_err());
        assert!(f.element(27).is_err());
    }
}
