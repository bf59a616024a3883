//! Generic pre-semifields on `GF(p^m)²`: axiom checks, Kaplansky's trick,
//! nuclei, and isotopism certificates.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::linalg::{pair_basis, pair_to_vec, vec_to_pair, LinearMap, Pair};

/// Largest `p^{2m}` on which the exhaustive checks run.
pub const AXIOM_CAP: u64 = 1 << 20;

/// Largest `p^{2m}` for which structure constants are materialized.
pub const TENSOR_CAP: u64 = 729;

/// Seed of the randomized additivity probes.
pub const DEFAULT_SEED: u64 = 0x5EED_7A41;

const RANDOM_TRIPLES: usize = 32;

pub type Product = Arc<dyn Fn(Pair, Pair) -> Pair + Send + Sync>;

/// A biadditive product on `GF(p^m)²`.
#[derive(Clone)]
pub struct Presemifield {
    ctx: Arc<FieldCtx>,
    product: Product,
    label: String,
}

impl fmt::Debug for Presemifield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presemifield")
            .field("label", &self.label)
            .field("ctx", &self.ctx)
            .finish()
    }
}

impl Presemifield {
    pub fn new(
        ctx: Arc<FieldCtx>,
        label: impl Into<String>,
        product: impl Fn(Pair, Pair) -> Pair + Send + Sync + 'static,
    ) -> Self {
        Presemifield {
            ctx,
            product: Arc::new(product),
            label: label.into(),
        }
    }

    /// The field `GF(p^{2m})` written on `GF(p^m)²` through the digit basis:
    /// the big-field encoding of `(x, y)` is `enc(x) + enc(y)·p^m`.
    pub fn from_field(ctx: Arc<FieldCtx>, big: Arc<FieldCtx>) -> Result<Self> {
        if big.p() != ctx.p() || big.m() != 2 * ctx.m() {
            return Err(Error::Dimension {
                expected: 2 * ctx.m() as usize,
                got: big.m() as usize,
            });
        }
        let label = format!("GF({}^{})", big.p(), big.m());
        let small = ctx.clone();
        Ok(Presemifield::new(ctx, label, move |a, b| {
            let ea = big.at(a.index(&small) as u32);
            let eb = big.at(b.index(&small) as u32);
            Pair::from_index(&small, big.mul(ea, eb).encoding() as u64)
        }))
    }

    #[inline]
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Dimension `2m` over GF(p).
    pub fn dim(&self) -> usize {
        2 * self.ctx.m() as usize
    }

    /// `p^{2m}`.
    pub fn size(&self) -> u64 {
        (self.ctx.order() as u64).pow(2)
    }

    #[inline]
    pub fn mul(&self, a: Pair, b: Pair) -> Pair {
        (self.product)(a, b)
    }

    pub fn basis(&self) -> Vec<Pair> {
        pair_basis(&self.ctx)
    }

    pub fn elements(&self) -> impl Iterator<Item = Pair> + '_ {
        (0..self.size()).map(move |i| Pair::from_index(&self.ctx, i))
    }

    /// Matrix of `w ↦ z∘w`.
    pub fn left_map(&self, z: Pair) -> LinearMap {
        LinearMap::from_pair_fn(&self.ctx, |w| self.mul(z, w))
    }

    /// Matrix of `w ↦ w∘z`.
    pub fn right_map(&self, z: Pair) -> LinearMap {
        LinearMap::from_pair_fn(&self.ctx, |w| self.mul(w, z))
    }

    /// Products of all basis pairs.
    pub fn structure_constants(&self) -> StructureConstants {
        let basis = self.basis();
        let n = basis.len();
        let mut table = Vec::with_capacity(n * n);
        for &ei in &basis {
            for &ej in &basis {
                table.push(pair_to_vec(&self.ctx, self.mul(ei, ej)));
            }
        }
        StructureConstants {
            ctx: self.ctx.clone(),
            n,
            table,
        }
    }

    /// A copy backed by its structure-constant tensor, for `p^{2m} ≤ 3⁶`.
    pub fn materialize(&self) -> Option<Presemifield> {
        if self.size() > TENSOR_CAP {
            return None;
        }
        let sc = self.structure_constants();
        Some(Presemifield::new(
            self.ctx.clone(),
            format!("{} [tensor]", self.label),
            move |a, b| sc.eval(a, b),
        ))
    }
}

/// The bilinear product determined by its values on basis pairs.
#[derive(Clone)]
pub struct StructureConstants {
    ctx: Arc<FieldCtx>,
    n: usize,
    table: Vec<Vec<u32>>,
}

impl StructureConstants {
    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        &self.table[i * self.n + j]
    }

    pub fn eval(&self, a: Pair, b: Pair) -> Pair {
        let p = self.ctx.p() as u64;
        let x = pair_to_vec(&self.ctx, a);
        let y = pair_to_vec(&self.ctx, b);
        let mut acc = vec![0u64; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = xi as u64 * yj as u64 % p;
                for (o, &v) in acc.iter_mut().zip(self.basis_product(i, j)) {
                    *o = (*o + c * v as u64) % p;
                }
            }
        }
        let acc: Vec<u32> = acc.into_iter().map(|v| v as u32).collect();
        vec_to_pair(&self.ctx, &acc)
    }
}

/// A failing instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: &'static str,
    pub inputs: Vec<Pair>,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Nuclei {
    #[serde(rename = "l")]
    pub left: u64,
    #[serde(rename = "m")]
    pub middle: u64,
    #[serde(rename = "r")]
    pub right: u64,
    #[serde(rename = "z")]
    pub center: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub label: String,
    #[serde(rename = "S2")]
    pub s2: bool,
    #[serde(rename = "S3")]
    pub s3: bool,
    #[serde(rename = "S4")]
    pub s4: Option<bool>,
    pub nuclei: Option<Nuclei>,
    pub witnesses: Vec<Witness>,
}

fn check_cap(p: &Presemifield) -> Result<()> {
    if p.size() > AXIOM_CAP {
        return Err(Error::SizeCap {
            order: p.size() as u128,
            cap: AXIOM_CAP,
        });
    }
    Ok(())
}

fn random_pair(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Pair {
    let n = ctx.order();
    Pair(ctx.at(rng.gen_range(0..n)), ctx.at(rng.gen_range(0..n)))
}

/// Biadditivity probes: every basis triple, then seeded random triples
/// checked for additivity in both slots and against the bilinear expansion
/// from basis-pair products.
pub fn check_biadditive(p: &Presemifield, seed: u64) -> Option<Witness> {
    let ctx = &**p.ctx();
    let basis = p.basis();
    let additive = |x: Pair, y: Pair, z: Pair| -> Option<Witness> {
        let left = p.mul(x, y.add(ctx, z));
        if left != p.mul(x, y).add(ctx, p.mul(x, z)) {
            return Some(Witness {
                axiom: "S2",
                inputs: vec![x, y, z],
                note: "x∘(y+z) ≠ x∘y + x∘z".into(),
            });
        }
        let right = p.mul(x.add(ctx, y), z);
        if right != p.mul(x, z).add(ctx, p.mul(y, z)) {
            return Some(Witness {
                axiom: "S2",
                inputs: vec![x, y, z],
                note: "(x+y)∘z ≠ x∘z + y∘z".into(),
            });
        }
        None
    };
    for &x in &basis {
        for &y in &basis {
            for &z in &basis {
                if let Some(w) = additive(x, y, z) {
                    return Some(w);
                }
            }
        }
    }
    let sc = p.structure_constants();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIPLES {
        let x = random_pair(ctx, &mut rng);
        let y = random_pair(ctx, &mut rng);
        let z = random_pair(ctx, &mut rng);
        if let Some(w) = additive(x, y, z) {
            return Some(w);
        }
        if p.mul(x, y) != sc.eval(x, y) {
            return Some(Witness {
                axiom: "S2",
                inputs: vec![x, y],
                note: "product differs from its basis-pair expansion".into(),
            });
        }
    }
    None
}

fn zero_divisor_for(p: &Presemifield, z: Pair) -> Option<Witness> {
    let ctx = &**p.ctx();
    for (side, map) in [("left", p.left_map(z)), ("right", p.right_map(z))] {
        if map.invertible() {
            continue;
        }
        let w = vec_to_pair(ctx, &map.kernel()[0]);
        let (a, b) = if side == "left" { (z, w) } else { (w, z) };
        let verified = p.mul(a, b).is_zero();
        return Some(Witness {
            axiom: "S3",
            inputs: vec![a, b],
            note: if verified {
                format!("{side} multiplication by a nonzero element is singular; product is zero")
            } else {
                format!("{side} multiplication is singular but the kernel vector does not multiply to zero")
            },
        });
    }
    None
}

/// First zero-divisor witness in index order, or `None` when every left and
/// right multiplication by a nonzero element is invertible.
pub fn find_zero_divisor(p: &Presemifield) -> Option<Witness> {
    (1..p.size())
        .into_par_iter()
        .find_map_first(|i| zero_divisor_for(p, Pair::from_index(p.ctx(), i)))
}

/// Checks S2 and S3.
pub fn check_axioms(p: &Presemifield, seed: u64) -> Result<AxiomReport> {
    check_cap(p)?;
    let mut witnesses = Vec::new();
    let s2_witness = check_biadditive(p, seed);
    let s2 = s2_witness.is_none();
    witnesses.extend(s2_witness);
    let s3_witness = find_zero_divisor(p);
    let s3 = s3_witness.is_none();
    witnesses.extend(s3_witness);
    Ok(AxiomReport {
        label: p.label().to_string(),
        s2,
        s3,
        s4: None,
        nuclei: None,
        witnesses,
    })
}

/// A pre-semifield with a two-sided identity.
#[derive(Clone, Debug)]
pub struct Semifield {
    inner: Presemifield,
    identity: Pair,
}

impl Semifield {
    /// Wraps `p` with a claimed identity; `check_identity` verifies the claim.
    pub fn new_unchecked(inner: Presemifield, identity: Pair) -> Self {
        Semifield { inner, identity }
    }

    pub fn presemifield(&self) -> &Presemifield {
        &self.inner
    }

    pub fn identity(&self) -> Pair {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Pair, b: Pair) -> Pair {
        self.inner.mul(a, b)
    }

    /// First `x` with `x∗ε ≠ x` or `ε∗x ≠ x`, searched exhaustively.
    pub fn check_identity(&self) -> Result<Option<Witness>> {
        check_cap(&self.inner)?;
        let e = self.identity;
        Ok((0..self.inner.size()).into_par_iter().find_map_first(|i| {
            let x = Pair::from_index(self.inner.ctx(), i);
            (self.mul(x, e) != x || self.mul(e, x) != x).then(|| Witness {
                axiom: "S4",
                inputs: vec![x, e],
                note: "identity fails".into(),
            })
        }))
    }
}

/// S2, S3, S4 and nuclei of a semifield.
pub fn check_semifield_axioms(s: &Semifield, seed: u64) -> Result<AxiomReport> {
    let mut report = check_axioms(&s.inner, seed)?;
    let s4_witness = s.check_identity()?;
    report.s4 = Some(s4_witness.is_none());
    report.witnesses.extend(s4_witness);
    report.nuclei = Some(nuclei(s));
    Ok(report)
}

/// Output of [`kaplansky`]: the semifield and an isotopism from it to the
/// original pre-semifield.
#[derive(Clone, Debug)]
pub struct Kaplansky {
    pub semifield: Semifield,
    pub certificate: IsotopismCertificate,
}

/// Kaplansky's trick at base point `e`: `a∗b = Lₑ⁻¹(a)∘Rₑ⁻¹(b)` with
/// `Lₑ(x) = x∘e`, `Rₑ(y) = e∘y`, identity `e∘e`.
///
/// Only the invertibility of `Lₑ` and `Rₑ` is checked here; a full S3 check is
/// [`check_axioms`].
pub fn kaplansky(p: &Presemifield, e: Pair) -> Result<Kaplansky> {
    if e.is_zero() {
        return Err(Error::ZeroBasePoint);
    }
    let ctx = p.ctx().clone();
    let le_inv = p.right_map(e).inverse().ok_or(Error::ZeroDivisors)?;
    let re_inv = p.left_map(e).inverse().ok_or(Error::ZeroDivisors)?;
    let identity = p.mul(e, e);
    let inner = p.clone();
    let (li, ri) = (le_inv.clone(), re_inv.clone());
    let label = format!("kaplansky({})", p.label());
    let c2 = ctx.clone();
    let product = Presemifield::new(ctx.clone(), label.clone(), move |a, b| {
        inner.mul(li.apply_pair(&c2, a), ri.apply_pair(&c2, b))
    });
    let n = p.dim();
    let certificate = IsotopismCertificate {
        n: LinearMap::identity(ctx.p(), n),
        l: le_inv,
        m: re_inv,
        source: label,
        target: p.label().to_string(),
    };
    Ok(Kaplansky {
        semifield: Semifield {
            inner: product,
            identity,
        },
        certificate,
    })
}

fn kernel_size(p: u32, n: usize, rows: Vec<Vec<u32>>) -> u64 {
    let mut rows = rows;
    let rank = crate::linalg::rref(&mut rows, n, p).len();
    (p as u64).pow((n - rank) as u32)
}

/// Constraint rows `a ↦ f(a)` for a bilinear-in-`a` defect `f`, stacked over
/// all output coordinates.
fn constraint_rows(s: &Semifield, f: impl Fn(Pair) -> Pair) -> Vec<Vec<u32>> {
    let ctx = &**s.inner.ctx();
    let cols: Vec<Vec<u32>> = s
        .inner
        .basis()
        .into_iter()
        .map(|e| pair_to_vec(ctx, f(e)))
        .collect();
    let n = cols.len();
    (0..n)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect()
}

/// Left, middle, right nuclei and center. Each is the kernel of a linear
/// system built from basis pairs, so sizes are powers of `p`.
pub fn nuclei(s: &Semifield) -> Nuclei {
    let ctx = &**s.inner.ctx();
    let basis = s.inner.basis();
    let n = basis.len();
    let p = ctx.p();
    let mut left = Vec::new();
    let mut middle = Vec::new();
    let mut right = Vec::new();
    let mut commute = Vec::new();
    for &x in &basis {
        for &y in &basis {
            left.extend(constraint_rows(s, |a| {
                s.mul(s.mul(a, x), y).sub(ctx, s.mul(a, s.mul(x, y)))
            }));
            middle.extend(constraint_rows(s, |a| {
                s.mul(s.mul(x, a), y).sub(ctx, s.mul(x, s.mul(a, y)))
            }));
            right.extend(constraint_rows(s, |a| {
                s.mul(s.mul(x, y), a).sub(ctx, s.mul(x, s.mul(y, a)))
            }));
        }
        commute.extend(constraint_rows(s, |a| s.mul(a, x).sub(ctx, s.mul(x, a))));
    }
    let mut all = left.clone();
    all.extend(middle.iter().cloned());
    all.extend(right.iter().cloned());
    all.extend(commute);
    Nuclei {
        left: kernel_size(p, n, left),
        middle: kernel_size(p, n, middle),
        right: kernel_size(p, n, right),
        center: kernel_size(p, n, all),
    }
}

/// A triple `(N, L, M)` claimed to satisfy `N(x∘₁y) = L(x)∘₂M(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotopismCertificate {
    #[serde(rename = "N")]
    pub n: LinearMap,
    #[serde(rename = "L")]
    pub l: LinearMap,
    #[serde(rename = "M")]
    pub m: LinearMap,
    pub source: String,
    pub target: String,
}

impl IsotopismCertificate {
    pub fn identity(p: u32, n: usize, label: &str) -> Self {
        IsotopismCertificate {
            n: LinearMap::identity(p, n),
            l: LinearMap::identity(p, n),
            m: LinearMap::identity(p, n),
            source: label.to_string(),
            target: label.to_string(),
        }
    }

    /// Follow `self` (P₁→P₂) by `next` (P₂→P₃).
    pub fn then(&self, next: &IsotopismCertificate) -> IsotopismCertificate {
        IsotopismCertificate {
            n: next.n.compose(&self.n),
            l: next.l.compose(&self.l),
            m: next.m.compose(&self.m),
            source: self.source.clone(),
            target: next.target.clone(),
        }
    }

    /// The reverse isotopism P₂→P₁, when all components are invertible.
    pub fn inverse(&self) -> Option<IsotopismCertificate> {
        Some(IsotopismCertificate {
            n: self.n.inverse()?,
            l: self.l.inverse()?,
            m: self.m.inverse()?,
            source: self.target.clone(),
            target: self.source.clone(),
        })
    }

    pub fn components_invertible(&self) -> bool {
        self.n.invertible() && self.l.invertible() && self.m.invertible()
    }
}

/// Checks the isotopism identity on all pairs drawn from `probes` and the
/// invertibility of N, L, M. Exact whenever `probes` spans the space.
pub fn verify_on(
    c: &IsotopismCertificate,
    p1: &Presemifield,
    p2: &Presemifield,
    probes: &[Pair],
) -> bool {
    let n = p1.dim();
    if p2.dim() != n || c.n.n() != n || c.l.n() != n || c.m.n() != n {
        return false;
    }
    if !c.components_invertible() {
        return false;
    }
    let ctx = &**p1.ctx();
    let lx: Vec<Pair> = probes.iter().map(|&x| c.l.apply_pair(ctx, x)).collect();
    let my: Vec<Pair> = probes.iter().map(|&y| c.m.apply_pair(ctx, y)).collect();
    for (i, &x) in probes.iter().enumerate() {
        for (j, &y) in probes.iter().enumerate() {
            if c.n.apply_pair(ctx, p1.mul(x, y)) != p2.mul(lx[i], my[j]) {
                return false;
            }
        }
    }
    true
}

/// [`verify_on`] over the standard basis.
pub fn verify_certificate(c: &IsotopismCertificate, p1: &Presemifield, p2: &Presemifield) -> bool {
    verify_on(c, p1, p2, &p1.basis())
}

/// `c⁻¹·a·c`: transports an autotopism of P₂ along `c: P₁→P₂` to one of P₁.
pub fn conjugate_autotopism(
    c: &IsotopismCertificate,
    a: &IsotopismCertificate,
    p1: &Presemifield,
    p2: &Presemifield,
) -> Result<IsotopismCertificate> {
    if !verify_certificate(c, p1, p2) {
        return Err(Error::Certificate("isotopism does not verify".into()));
    }
    if !verify_certificate(a, p2, p2) {
        return Err(Error::Certificate("autotopism does not verify".into()));
    }
    let back = c.inverse().expect("verified components are invertible");
    Ok(c.then(a).then(&back))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf729_as_pairs() -> Presemifield {
        let small = Arc::new(FieldCtx::new(3, 3).unwrap());
        let big = Arc::new(FieldCtx::new(3, 6).unwrap());
        Presemifield::from_field(small, big).unwrap()
    }

    #[test]
    fn field_is_a_semifield() {
        let p = gf729_as_pairs();
        let r = check_axioms(&p, DEFAULT_SEED).unwrap();
        assert!(r.s2 && r.s3, "{:?}", r.witnesses);
        let k = kaplansky(&p, Pair(p.ctx().one(), p.ctx().zero())).unwrap();
        let s = &k.semifield;
        assert_eq!(s.identity(), Pair(p.ctx().one(), p.ctx().zero()));
        let nuc = nuclei(s);
        assert_eq!(
            nuc,
            Nuclei {
                left: 729,
                middle: 729,
                right: 729,
                center: 729
            }
        );
        assert!(verify_certificate(&k.certificate, s.presemifield(), &p));
    }

    #[test]
    fn kaplansky_at_identity_keeps_product() {
        let p = gf729_as_pairs();
        let one = Pair(p.ctx().one(), p.ctx().zero());
        let s = kaplansky(&p, one).unwrap().semifield;
        for i in (0..729).step_by(17) {
            for j in (0..729).step_by(23) {
                let a = Pair::from_index(p.ctx(), i);
                let b = Pair::from_index(p.ctx(), j);
                assert_eq!(s.mul(a, b), p.mul(a, b));
            }
        }
        assert_eq!(
            kaplansky(&p, Pair::zero(p.ctx())).unwrap_err(),
            Error::ZeroBasePoint
        );
    }

    #[test]
    fn broken_products_are_caught() {
        let ctx = Arc::new(FieldCtx::new(3, 2).unwrap());
        let c = ctx.clone();
        // Not additive: squares the first argument.
        let bad = Presemifield::new(ctx.clone(), "bad", move |a: Pair, b: Pair| {
            Pair(c.mul(c.mul(a.0, a.0), b.0), c.zero())
        });
        let r = check_axioms(&bad, DEFAULT_SEED).unwrap();
        assert!(!r.s2);
        assert!(!r.s3);
        let c = ctx.clone();
        // Bilinear with zero divisors.
        let degenerate = Presemifield::new(ctx.clone(), "degenerate", move |a: Pair, b: Pair| {
            Pair(c.mul(a.0, b.0), c.mul(a.1, b.1))
        });
        let r = check_axioms(&degenerate, DEFAULT_SEED).unwrap();
        assert!(r.s2 && !r.s3);
        let w = &r.witnesses[0];
        assert!(!w.inputs[0].is_zero() && !w.inputs[1].is_zero());
        assert!(degenerate.mul(w.inputs[0], w.inputs[1]).is_zero());
    }

    #[test]
    fn identity_certificate_and_conjugation() {
        let p = gf729_as_pairs();
        let id = IsotopismCertificate::identity(3, 6, p.label());
        assert!(verify_certificate(&id, &p, &p));
        let conj = conjugate_autotopism(&id, &id, &p, &p).unwrap();
        assert_eq!(conj, id);
    }

    #[test]
    fn materialized_product_matches() {
        let p = gf729_as_pairs();
        let t = p.materialize().unwrap();
        for i in (0..729).step_by(7) {
            for j in (0..729).step_by(11) {
                let a = Pair::from_index(p.ctx(), i);
                let b = Pair::from_index(p.ctx(), j);
                assert_eq!(t.mul(a, b), p.mul(a, b));
            }
        }
    }
}
