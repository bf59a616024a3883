//! Taniguchi pre-semifields on `GF(p^m)²`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::linalg::{BlockMap, Pair};
use crate::semifield::{IsotopismCertificate, Presemifield};

/// Parameters `(q = p^k, α, a, b)` of a Taniguchi pre-semifield.
#[derive(Clone)]
pub struct TaniguchiParams {
    ctx: Arc<FieldCtx>,
    k: u32,
    alpha: FieldElement,
    a: FieldElement,
    b: FieldElement,
    alpha_q: FieldElement,
    alpha_q2: FieldElement,
}

impl PartialEq for TaniguchiParams {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.owns(o.alpha) && self.key() == o.key()
    }
}

impl Eq for TaniguchiParams {}

impl fmt::Debug for TaniguchiParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for TaniguchiParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            p: u32,
            k: u32,
            m: u32,
            alpha: u32,
            a: u32,
            b: u32,
        }
        Wire {
            p: self.ctx.p(),
            k: self.k,
            m: self.ctx.m(),
            alpha: self.alpha.encoding(),
            a: self.a.encoding(),
            b: self.b.encoding(),
        }
        .serialize(s)
    }
}

/// Result of [`TaniguchiParams::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub alpha_ok: bool,
    pub b_ok: bool,
    pub root_witness: Option<FieldElement>,
    pub classification_admissible: bool,
}

/// `m > 2`, `(p, m) ≠ (2, 6)` and `2k ≠ m`.
pub fn classification_admissible(p: u32, k: u32, m: u32) -> bool {
    m > 2 && (p, m) != (2, 6) && 2 * k != m
}

/// Whether `−α` is a nonzero non-`(q−1)`-st power.
pub fn alpha_ok(ctx: &FieldCtx, k: u32, alpha: FieldElement) -> bool {
    if alpha.is_zero() {
        return false;
    }
    let q = (ctx.p() as u64).pow(k);
    !ctx.is_dth_power(ctx.neg(alpha), q - 1)
        .expect("nonzero argument")
}

/// First root of `x^{q+1} + a·x + b` in encoding order.
pub fn projective_root(
    ctx: &FieldCtx,
    k: u32,
    a: FieldElement,
    b: FieldElement,
) -> Option<FieldElement> {
    ctx.elements().find(|&x| {
        let xq1 = ctx.mul(ctx.frobenius(x, k), x);
        ctx.add(ctx.add(xq1, ctx.mul(a, x)), b).is_zero()
    })
}

/// Valid `α` in ascending encoding order.
pub fn valid_alphas(ctx: &FieldCtx, k: u32) -> Vec<FieldElement> {
    ctx.nonzero_elements()
        .filter(|&x| alpha_ok(ctx, k, x))
        .collect()
}

/// Valid `b` for the given `a`, in ascending encoding order.
pub fn valid_bs(ctx: &FieldCtx, k: u32, a: FieldElement) -> Vec<FieldElement> {
    let all: Vec<u32> = (0..ctx.order()).collect();
    all.par_iter()
        .map(|&e| ctx.at(e))
        .filter(|&b| projective_root(ctx, k, a, b).is_none())
        .collect()
}

fn check_k(m: u32, k: u32) -> Result<()> {
    if k == 0 || k >= m {
        return Err(Error::InvalidParams(format!(
            "k must satisfy 1 <= k <= m-1, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

impl TaniguchiParams {
    pub fn new(
        ctx: Arc<FieldCtx>,
        k: u32,
        alpha: FieldElement,
        a: FieldElement,
        b: FieldElement,
    ) -> Result<Self> {
        check_k(ctx.m(), k)?;
        for e in [alpha, a, b] {
            ctx.check(e)?;
        }
        let alpha_q = ctx.frobenius(alpha, k);
        let alpha_q2 = ctx.frobenius(alpha, 2 * k);
        Ok(TaniguchiParams {
            ctx,
            k,
            alpha,
            a,
            b,
            alpha_q,
            alpha_q2,
        })
    }

    pub fn from_encodings(ctx: Arc<FieldCtx>, k: u32, alpha: u64, a: u64, b: u64) -> Result<Self> {
        let (alpha, a, b) = (ctx.element(alpha)?, ctx.element(a)?, ctx.element(b)?);
        Self::new(ctx, k, alpha, a, b)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn m(&self) -> u32 {
        self.ctx.m()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    pub fn b(&self) -> FieldElement {
        self.b
    }

    /// `p^k`.
    pub fn q(&self) -> u64 {
        (self.p() as u64).pow(self.k)
    }

    /// `p^{m−k}`.
    pub fn q_bar(&self) -> u64 {
        (self.p() as u64).pow(self.m() - self.k)
    }

    /// `gcd(k, m)`.
    pub fn d(&self) -> u32 {
        self.k.gcd(&self.m())
    }

    /// `m / gcd(k, m)`.
    pub fn l(&self) -> u32 {
        self.m() / self.d()
    }

    /// `(k, α, a, b)` by encoding.
    pub fn key(&self) -> (u32, u32, u32, u32) {
        (
            self.k,
            self.alpha.encoding(),
            self.a.encoding(),
            self.b.encoding(),
        )
    }

    pub fn label(&self) -> String {
        format!(
            "T(p={},k={},m={},alpha={},a={},b={})",
            self.p(),
            self.k,
            self.m(),
            self.alpha,
            self.a,
            self.b
        )
    }

    pub fn with_ab(&self, alpha: FieldElement, b: FieldElement) -> Result<Self> {
        Self::new(self.ctx.clone(), self.k, alpha, self.a, b)
    }

    pub fn validate(&self) -> ValidationReport {
        let ctx = &*self.ctx;
        let alpha_ok = alpha_ok(ctx, self.k, self.alpha);
        let root_witness = projective_root(ctx, self.k, self.a, self.b);
        let b_ok = root_witness.is_none();
        ValidationReport {
            valid: alpha_ok && b_ok,
            alpha_ok,
            b_ok,
            root_witness,
            classification_admissible: classification_admissible(self.p(), self.k, self.m()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.valid {
            Ok(())
        } else if !r.alpha_ok {
            Err(Error::InvalidParams(format!(
                "-alpha is a (q-1)-st power in {}",
                self.label()
            )))
        } else {
            Err(Error::InvalidParams(format!(
                "x^(q+1) + a x + b has a root in {}",
                self.label()
            )))
        }
    }

    /// `(x^q u + α^{q²} x u^q − a(x v^q − α^q u y^q) − b(y^q v + α y v^q), x v^{q²} + y^{q²} u)`.
    pub fn multiply(&self, l: Pair, r: Pair) -> Pair {
        let f = &*self.ctx;
        let (k, k2) = (self.k, 2 * self.k);
        let (Pair(x, y), Pair(u, v)) = (l, r);
        let (xq, yq, uq, vq) = (
            f.frobenius(x, k),
            f.frobenius(y, k),
            f.frobenius(u, k),
            f.frobenius(v, k),
        );
        let mut first = f.add(f.mul(xq, u), f.mul(self.alpha_q2, f.mul(x, uq)));
        if !self.a.is_zero() {
            let t = f.sub(f.mul(x, vq), f.mul(self.alpha_q, f.mul(u, yq)));
            first = f.sub(first, f.mul(self.a, t));
        }
        let t = f.add(f.mul(yq, v), f.mul(self.alpha, f.mul(y, vq)));
        first = f.sub(first, f.mul(self.b, t));
        let second = f.add(f.mul(x, f.frobenius(v, k2)), f.mul(f.frobenius(y, k2), u));
        Pair(first, second)
    }

    /// `((x^q u + α x u^q)^{q²} − a(x^q v − α u^q y)^q − b(y^q v + α y v^q), xv + yu)`.
    pub fn multiply_original(&self, l: Pair, r: Pair) -> Pair {
        let f = &*self.ctx;
        let k = self.k;
        let (Pair(x, y), Pair(u, v)) = (l, r);
        let (xq, yq, uq, vq) = (
            f.frobenius(x, k),
            f.frobenius(y, k),
            f.frobenius(u, k),
            f.frobenius(v, k),
        );
        let head = f.add(f.mul(xq, u), f.mul(self.alpha, f.mul(x, uq)));
        let mut first = f.frobenius(head, 2 * k);
        let mid = f.sub(f.mul(xq, v), f.mul(self.alpha, f.mul(uq, y)));
        first = f.sub(first, f.mul(self.a, f.frobenius(mid, k)));
        let tail = f.add(f.mul(yq, v), f.mul(self.alpha, f.mul(y, vq)));
        first = f.sub(first, f.mul(self.b, tail));
        Pair(first, f.add(f.mul(x, v), f.mul(y, u)))
    }

    pub fn presemifield(&self) -> Presemifield {
        let me = self.clone();
        Presemifield::new(self.ctx.clone(), self.label(), move |l, r| {
            me.multiply(l, r)
        })
    }

    pub fn original_presemifield(&self) -> Presemifield {
        let me = self.clone();
        Presemifield::new(
            self.ctx.clone(),
            format!("{} [original]", self.label()),
            move |l, r| me.multiply_original(l, r),
        )
    }

    fn certificate(
        &self,
        n: BlockMap,
        l: BlockMap,
        m: BlockMap,
        source: String,
        target: String,
    ) -> IsotopismCertificate {
        let f = &*self.ctx;
        IsotopismCertificate {
            n: n.expand(f),
            l: l.expand(f),
            m: m.expand(f),
            source,
            target,
        }
    }

    /// Isotopism from [`Self::original_presemifield`] to [`Self::presemifield`]:
    /// raise `x, u` to the `q²` in the arguments and the second output
    /// component to the `q²`.
    pub fn representation_certificate(&self) -> Result<IsotopismCertificate> {
        self.require_valid()?;
        let f = &*self.ctx;
        let one = f.one();
        let k2 = 2 * self.k;
        let n = BlockMap::diagonal(f, one, 0, one, k2);
        let lm = BlockMap::diagonal(f, one, k2, one, 0);
        Ok(self.certificate(
            n,
            lm,
            lm,
            format!("{} [original]", self.label()),
            self.label(),
        ))
    }

    /// Brings `a ≠ 0` to `a = 1` by `y ↦ δy`, `v ↦ δv` with
    /// `δ = a^{−p^{m−k}}`. Returns the new parameters and an isotopism from
    /// `self` to them.
    pub fn normalize_a(&self) -> Result<(TaniguchiParams, IsotopismCertificate)> {
        self.require_valid()?;
        let f = &*self.ctx;
        if self.a.is_zero() || self.a == f.one() {
            let id = IsotopismCertificate::identity(f.p(), 2 * f.m() as usize, &self.label());
            return Ok((self.clone(), id));
        }
        let delta = f.frobenius(f.inv(self.a)?, self.m() - self.k);
        debug_assert_eq!(f.frobenius(delta, self.k), f.inv(self.a)?);
        let delta_q1 = f.mul(f.frobenius(delta, self.k), delta);
        let next = TaniguchiParams::new(
            self.ctx.clone(),
            self.k,
            self.alpha,
            f.one(),
            f.mul(self.b, delta_q1),
        )?;
        let one = f.one();
        let delta_inv = f.inv(delta)?;
        let n = BlockMap::diagonal(f, one, 0, f.inv(f.frobenius(delta, 2 * self.k))?, 0);
        let lm = BlockMap::diagonal(f, one, 0, delta_inv, 0);
        let cert = self.certificate(n, lm, lm, self.label(), next.label());
        Ok((next, cert))
    }

    /// Passes from `q` to `q̄ = p^{m−k}`: the parameters
    /// `(α^{−q²}, a·α^{q−1}/b, α^{q²−1}/b)` at `k′ = m − k`, followed by
    /// [`Self::normalize_a`]. The certificate is the composite.
    pub fn qbar_transform(&self) -> Result<(TaniguchiParams, IsotopismCertificate)> {
        self.require_valid()?;
        let f = &*self.ctx;
        let (alpha, b) = (self.alpha, self.b);
        let b_inv = f.inv(b)?;
        let alpha_q1 = f.div(self.alpha_q, alpha);
        let alpha_q21 = f.div(self.alpha_q2, alpha);
        let raw = TaniguchiParams::new(
            self.ctx.clone(),
            self.m() - self.k,
            f.inv(self.alpha_q2)?,
            f.mul(self.a, f.mul(alpha_q1, b_inv)),
            f.mul(alpha_q21, b_inv),
        )?;
        let one = f.one();
        let scale = f.neg(f.inv(f.mul(b, alpha))?);
        let n = BlockMap::diagonal(f, scale, 0, one, self.m() - self.k);
        let lm = BlockMap::anti_diagonal(f, one, self.k, one, self.k);
        let first = self.certificate(n, lm, lm, self.label(), raw.label());
        let (next, second) = raw.normalize_a()?;
        Ok((next, first.then(&second)))
    }

    /// Representative with `k < m/2`: `self` when already so, otherwise the
    /// [`Self::qbar_transform`] image.
    pub fn canonical_k(&self) -> Result<TaniguchiParams> {
        Ok(self.canonical_k_with_certificate()?.0)
    }

    pub fn canonical_k_with_certificate(
        &self,
    ) -> Result<(TaniguchiParams, Option<IsotopismCertificate>)> {
        let m = self.m();
        if 2 * self.k == m {
            return Err(Error::HalfDegree);
        }
        if 2 * self.k < m {
            return Ok((self.clone(), None));
        }
        let (next, cert) = self.qbar_transform()?;
        Ok((next, Some(cert)))
    }
}

/// All valid parameter tuples for fixed `(k, a)`, ordered by `(α, b)` encodings.
pub fn enumerate_valid(
    ctx: &Arc<FieldCtx>,
    k: u32,
    a: FieldElement,
) -> Result<Vec<TaniguchiParams>> {
    check_k(ctx.m(), k)?;
    ctx.check(a)?;
    let alphas = valid_alphas(ctx, k);
    let bs = valid_bs(ctx, k, a);
    let mut out = Vec::with_capacity(alphas.len() * bs.len());
    for &alpha in &alphas {
        for &b in &bs {
            out.push(TaniguchiParams::new(ctx.clone(), k, alpha, a, b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::verify_certificate;

    fn gf27() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(3, 3).unwrap())
    }

    fn first_valid(ctx: &Arc<FieldCtx>, a: u32) -> TaniguchiParams {
        enumerate_valid(ctx, 1, ctx.at(a)).unwrap().remove(0)
    }

    #[test]
    fn valid_counts_at_27() {
        let f = gf27();
        assert_eq!(valid_alphas(&f, 1).len(), 13);
        assert_eq!(valid_bs(&f, 1, f.one()).len(), 10);
        assert_eq!(valid_bs(&f, 1, f.zero()).len(), 13);
    }

    #[test]
    fn no_valid_alpha_in_gf8() {
        let f = FieldCtx::new(2, 3).unwrap();
        assert!(valid_alphas(&f, 1).is_empty());
    }

    #[test]
    fn product_spot_values() {
        let f = gf27();
        let t = first_valid(&f, 1);
        let (one, zero) = (f.one(), f.zero());
        let e = Pair(one, zero);
        let w = Pair(zero, one);
        assert_eq!(
            t.multiply(e, e),
            Pair(f.add(one, f.frobenius(t.alpha(), 2)), zero)
        );
        assert_eq!(
            t.multiply(w, w),
            Pair(f.neg(f.mul(t.b(), f.add(one, t.alpha()))), zero)
        );
        assert_eq!(
            t.multiply_original(e, e),
            Pair(f.frobenius(f.add(one, t.alpha()), 2), zero)
        );
        assert!(t.multiply(e, Pair::zero(&f)).is_zero());
    }

    #[test]
    fn certificates_verify() {
        let f = gf27();
        for a in [0, 1, 2, 5] {
            let t = first_valid(&f, a);
            let rep = t.representation_certificate().unwrap();
            assert!(verify_certificate(
                &rep,
                &t.original_presemifield(),
                &t.presemifield()
            ));
            let (n, c) = t.normalize_a().unwrap();
            assert!(n.a().is_zero() || n.a() == f.one());
            assert!(verify_certificate(&c, &t.presemifield(), &n.presemifield()));
            let (qb, c) = t.qbar_transform().unwrap();
            assert_eq!(qb.k(), 2);
            assert!(qb.is_valid());
            assert!(verify_certificate(
                &c,
                &t.presemifield(),
                &qb.presemifield()
            ));
        }
    }

    #[test]
    fn qbar_at_a_zero_matches_closed_form() {
        let f = gf27();
        let t = first_valid(&f, 0);
        let (qb, _) = t.qbar_transform().unwrap();
        let a9 = f.frobenius(t.alpha(), 2);
        assert_eq!(qb.alpha(), f.inv(a9).unwrap());
        assert_eq!(qb.a(), f.zero());
        assert_eq!(qb.b(), f.div(f.pow(t.alpha(), 8), t.b()));
    }

    #[test]
    fn canonical_k_rules() {
        let f = gf27();
        let t = first_valid(&f, 1);
        assert_eq!(t.canonical_k().unwrap(), t);
        let (qb, _) = t.qbar_transform().unwrap();
        assert_eq!(qb.canonical_k().unwrap().k(), 1);
        let g = Arc::new(FieldCtx::new(3, 4).unwrap());
        let half = TaniguchiParams::from_encodings(g, 2, 1, 1, 1).unwrap();
        assert_eq!(half.canonical_k().unwrap_err(), Error::HalfDegree);
    }

    #[test]
    fn invalid_params_are_refused() {
        let f = gf27();
        let bad = TaniguchiParams::from_encodings(f.clone(), 1, 1, 1, 0).unwrap();
        let r = bad.validate();
        assert!(!r.b_ok && r.root_witness == Some(f.zero()));
        assert!(bad.normalize_a().is_err());
        assert!(TaniguchiParams::from_encodings(f.clone(), 3, 1, 1, 1).is_err());
        assert!(TaniguchiParams::from_encodings(f, 1, 27, 1, 1).is_err());
    }
}
