//! Isotopy between Taniguchi pre-semifields: the closed-form decision,
//! structured brute-force oracles, and autotopism enumeration.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::linalg::{fit_map, null_space, pair_to_vec, BlockMap, LinearMap, Pair};
use crate::semifield::{verify_certificate, IsotopismCertificate, Presemifield};
use crate::taniguchi::{enumerate_valid, TaniguchiParams};

/// Field-size cap for the brute-force searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleLimits {
    pub max_order: u32,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_order: 32 }
    }
}

impl OracleLimits {
    fn check(&self, ctx: &FieldCtx) -> Result<()> {
        if ctx.order() > self.max_order {
            return Err(Error::SizeCap {
                order: ctx.order() as u128,
                cap: self.max_order as u64,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    SameK,
    QbarReduced,
    DifferentK,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotopyDecision {
    pub isotopic: bool,
    pub witness_t: Option<u32>,
    pub route: Route,
    pub reason: String,
    /// Inputs after `a`-normalization and `k`-reduction.
    pub lhs: TaniguchiParams,
    pub rhs: TaniguchiParams,
}

impl IsotopyDecision {
    /// Re-evaluates the criterion at `witness_t` on the reduced inputs.
    pub fn recheck(&self) -> bool {
        match self.witness_t {
            Some(t) => self.isotopic && criterion_holds(&self.lhs, &self.rhs, t),
            None => !self.isotopic,
        }
    }
}

/// The same-`k` criterion at a fixed `t`, for `a, a′ ∈ {0, 1}`:
/// `α^{p^t}/α′` must be a `(q−1)`-st power, and `b′/b^{p^t}` a `(q+1)`-st
/// power when `a = 0`, or `b′ = b^{p^t}` when `a = 1`.
pub fn criterion_holds(p1: &TaniguchiParams, p2: &TaniguchiParams, t: u32) -> bool {
    let f = &**p1.ctx();
    if p1.k() != p2.k() || p1.a() != p2.a() {
        return false;
    }
    let q = p1.q();
    let ratio = f.div(f.frobenius(p1.alpha(), t), p2.alpha());
    if !f.is_dth_power(ratio, q - 1).expect("nonzero ratio") {
        return false;
    }
    let bt = f.frobenius(p1.b(), t);
    if p1.a().is_zero() {
        f.is_dth_power(f.div(p2.b(), bt), q + 1)
            .expect("nonzero ratio")
    } else {
        p2.b() == bt
    }
}

/// The criterion with the twist on `b′` instead: `b′^{p^t}/b` a `(q+1)`-st
/// power when `a = 0`, `b = b′^{p^t}` when `a = 1`. Agrees in verdict with
/// [`criterion_holds`] whenever `gcd(k, m) ≤ 2`.
pub fn criterion_holds_twisted_b(p1: &TaniguchiParams, p2: &TaniguchiParams, t: u32) -> bool {
    let f = &**p1.ctx();
    if p1.k() != p2.k() || p1.a() != p2.a() {
        return false;
    }
    let q = p1.q();
    let ratio = f.div(f.frobenius(p1.alpha(), t), p2.alpha());
    if !f.is_dth_power(ratio, q - 1).expect("nonzero ratio") {
        return false;
    }
    let bt = f.frobenius(p2.b(), t);
    if p1.a().is_zero() {
        f.is_dth_power(f.div(bt, p1.b()), q + 1)
            .expect("nonzero ratio")
    } else {
        p1.b() == bt
    }
}

fn require_admissible(p: &TaniguchiParams) -> Result<()> {
    let r = p.validate();
    if !r.valid {
        return Err(Error::InvalidParams(format!("{} is not valid", p.label())));
    }
    if 2 * p.k() == p.m() {
        return Err(Error::HalfDegree);
    }
    if !r.classification_admissible {
        return Err(Error::Inadmissible(format!(
            "need m > 2 and (p, m) != (2, 6), got {}",
            p.label()
        )));
    }
    Ok(())
}

/// Brings `p` to `a ∈ {0, 1}` and `k < m/2`; reports whether the `q̄`
/// transform was used.
pub fn reduce(p: &TaniguchiParams) -> Result<(TaniguchiParams, bool)> {
    let (n, _) = p.normalize_a()?;
    let flipped = 2 * n.k() > n.m();
    Ok((n.canonical_k()?, flipped))
}

/// Closed-form isotopy decision. Inputs are normalized internally.
pub fn decide_isotopy(p1: &TaniguchiParams, p2: &TaniguchiParams) -> Result<IsotopyDecision> {
    if p1.p() != p2.p() || p1.m() != p2.m() {
        return Err(Error::CtxMismatch);
    }
    require_admissible(p1)?;
    require_admissible(p2)?;
    let (lhs, f1) = reduce(p1)?;
    let (rhs, f2) = reduce(p2)?;
    let route = if f1 || f2 {
        Route::QbarReduced
    } else {
        Route::SameK
    };
    let no = |route, reason: String| IsotopyDecision {
        isotopic: false,
        witness_t: None,
        route,
        reason,
        lhs: lhs.clone(),
        rhs: rhs.clone(),
    };
    if lhs.k() != rhs.k() {
        return Ok(no(
            Route::DifferentK,
            format!(
                "k = {} and k' = {} are distinct and not complementary mod m",
                lhs.k(),
                rhs.k()
            ),
        ));
    }
    if lhs.a() != rhs.a() {
        return Ok(no(
            route,
            format!("normalized a = {} differs from a' = {}", lhs.a(), rhs.a()),
        ));
    }
    for t in 0..lhs.m() {
        if criterion_holds(&lhs, &rhs, t) {
            let reason = if lhs.a().is_zero() {
                format!(
                    "alpha^(p^{t})/alpha' is a (q-1)-st power and b'/b^(p^{t}) a (q+1)-st power"
                )
            } else {
                format!("alpha^(p^{t})/alpha' is a (q-1)-st power and b' = b^(p^{t})")
            };
            return Ok(IsotopyDecision {
                isotopic: true,
                witness_t: Some(t),
                route,
                reason,
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            });
        }
    }
    Ok(no(route, "no t in [0, m) satisfies the criterion".into()))
}

/// `(diag(r^{q+1}, r^{q²+1}), diag(r, r), diag(r, r))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaR {
    pub r: FieldElement,
    pub n: BlockMap,
    pub l: BlockMap,
    pub m: BlockMap,
}

pub fn gamma_r(params: &TaniguchiParams, r: FieldElement) -> Result<GammaR> {
    let f = &**params.ctx();
    f.check(r)?;
    if r.is_zero() {
        return Err(Error::InvalidParams("r must be nonzero".into()));
    }
    let q = params.q();
    let lm = BlockMap::diagonal(f, r, 0, r, 0);
    Ok(GammaR {
        r,
        n: BlockMap::diagonal(f, f.pow(r, q + 1), 0, f.pow(r, q * q + 1), 0),
        l: lm,
        m: lm,
    })
}

impl GammaR {
    pub fn certificate(&self, params: &TaniguchiParams) -> IsotopismCertificate {
        let f = &**params.ctx();
        IsotopismCertificate {
            n: self.n.expand(f),
            l: self.l.expand(f),
            m: self.m.expand(f),
            source: params.label(),
            target: params.label(),
        }
    }
}

pub fn verify_gamma_r(params: &TaniguchiParams, r: FieldElement) -> Result<bool> {
    let g = gamma_r(params, r)?;
    let p = params.presemifield();
    Ok(verify_certificate(&g.certificate(params), &p, &p))
}

fn pairwise_checks(
    p1: &TaniguchiParams,
    p2: &TaniguchiParams,
    limits: &OracleLimits,
) -> Result<()> {
    if p1.p() != p2.p() || p1.m() != p2.m() {
        return Err(Error::CtxMismatch);
    }
    limits.check(p1.ctx())?;
    for p in [p1, p2] {
        if !p.is_valid() {
            return Err(Error::InvalidParams(format!("{} is not valid", p.label())));
        }
    }
    if p1.k() != p2.k() {
        return Err(Error::InvalidParams(format!(
            "searches need equal k, got {} and {}",
            p1.k(),
            p2.k()
        )));
    }
    Ok(())
}

/// A certificate of the shape `N = diag(a₁·x^σ, d₁·y^σ)`,
/// `L = diag((a₂x)^σ, (d₂y)^σ)`, `M = diag((a₃u)^σ, (d₃v)^σ)`, `σ = p^t`.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalHit {
    pub t: u32,
    pub a2: FieldElement,
    pub d2: FieldElement,
    pub a3: FieldElement,
    pub d3: FieldElement,
    pub certificate: IsotopismCertificate,
}

struct DiagonalSearch<'a> {
    f: &'a FieldCtx,
    p1: &'a TaniguchiParams,
    p2: &'a TaniguchiParams,
    m: usize,
    t: u32,
    /// `e_i^σ` for the polynomial basis.
    e: Vec<FieldElement>,
    /// `(x∘₁y)^σ` componentwise, over basis pairs.
    prod: Vec<Vec<Pair>>,
}

impl<'a> DiagonalSearch<'a> {
    fn new(p1: &'a TaniguchiParams, p2: &'a TaniguchiParams, t: u32) -> Self {
        let f = &**p1.ctx();
        let m = f.m() as usize;
        let basis = p1.presemifield().basis();
        let prod = basis
            .iter()
            .map(|&x| {
                basis
                    .iter()
                    .map(|&y| {
                        let z = p1.multiply(x, y);
                        Pair(f.frobenius(z.0, t), f.frobenius(z.1, t))
                    })
                    .collect()
            })
            .collect();
        let e = (0..m as u32).map(|i| f.frobenius(f.basis(i), t)).collect();
        DiagonalSearch {
            f,
            p1,
            p2,
            m,
            t,
            e,
            prod,
        }
    }

    fn sigma(&self, x: FieldElement) -> FieldElement {
        self.f.frobenius(x, self.t)
    }

    fn x(&self, c: FieldElement, i: usize) -> Pair {
        Pair(self.f.mul(c, self.e[i]), self.f.zero())
    }

    fn y(&self, c: FieldElement, i: usize) -> Pair {
        Pair(self.f.zero(), self.f.mul(c, self.e[i]))
    }

    fn n(&self, a1: FieldElement, d1: FieldElement, i: usize, j: usize) -> Pair {
        let z = self.prod[i][j];
        Pair(self.f.mul(a1, z.0), self.f.mul(d1, z.1))
    }

    /// All `(d₂, a₃, d₃)` completing a certificate for this `a₂`, in
    /// lexicographic order.
    fn hits_for(&self, a2: FieldElement) -> Vec<(FieldElement, FieldElement, FieldElement)> {
        let f = self.f;
        let (m, k) = (self.m, self.p1.k());
        let big_a2 = self.sigma(a2);
        let mut out = Vec::new();
        for a3 in f.nonzero_elements() {
            let big_a3 = self.sigma(a3);
            let a1 = self.sigma(f.mul(f.frobenius(a2, k), a3));
            // (x,0)∘(u,0): only the first component can be nonzero.
            let xx = (0..m).all(|i| {
                (0..m).all(|j| {
                    let rhs = self.p2.multiply(self.x(big_a2, i), self.x(big_a3, j));
                    rhs.0 == f.mul(a1, self.prod[i][j].0) && rhs.1.is_zero()
                })
            });
            if !xx {
                continue;
            }
            for d3 in f.nonzero_elements() {
                let big_d3 = self.sigma(d3);
                let d1 = self.sigma(f.mul(a2, f.frobenius(d3, 2 * k)));
                let xy = (0..m).all(|i| {
                    (0..m).all(|j| {
                        self.p2.multiply(self.x(big_a2, i), self.y(big_d3, j))
                            == self.n(a1, d1, i, m + j)
                    })
                });
                if !xy {
                    continue;
                }
                for d2 in f.nonzero_elements() {
                    let big_d2 = self.sigma(d2);
                    let rest = (0..m).all(|i| {
                        (0..m).all(|j| {
                            self.p2.multiply(self.y(big_d2, i), self.x(big_a3, j))
                                == self.n(a1, d1, m + i, j)
                                && self.p2.multiply(self.y(big_d2, i), self.y(big_d3, j))
                                    == self.n(a1, d1, m + i, m + j)
                        })
                    });
                    if rest {
                        out.push((d2, a3, d3));
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn certificate(
        &self,
        a2: FieldElement,
        d2: FieldElement,
        a3: FieldElement,
        d3: FieldElement,
    ) -> IsotopismCertificate {
        let f = self.f;
        let (k, t) = (self.p1.k(), self.t);
        let a1 = self.sigma(f.mul(f.frobenius(a2, k), a3));
        let d1 = self.sigma(f.mul(a2, f.frobenius(d3, 2 * k)));
        let n = BlockMap::diagonal(f, a1, t, d1, t);
        let l = BlockMap::diagonal(f, self.sigma(a2), t, self.sigma(d2), t);
        let m = BlockMap::diagonal(f, self.sigma(a3), t, self.sigma(d3), t);
        IsotopismCertificate {
            n: n.expand(f),
            l: l.expand(f),
            m: m.expand(f),
            source: self.p1.label(),
            target: self.p2.label(),
        }
    }
}

/// First diagonal-shape isotopism from `p1` to `p2` in the scan order
/// `(t, a₂, d₂, a₃, d₃)` by encoding, accepted only after full bilinear
/// verification.
pub fn structured_search_diagonal(
    p1: &TaniguchiParams,
    p2: &TaniguchiParams,
    limits: &OracleLimits,
) -> Result<Option<DiagonalHit>> {
    pairwise_checks(p1, p2, limits)?;
    let f = &**p1.ctx();
    let (s1, s2) = (p1.presemifield(), p2.presemifield());
    let nonzero: Vec<FieldElement> = f.nonzero_elements().collect();
    for t in 0..f.m() {
        let search = DiagonalSearch::new(p1, p2, t);
        let hit = nonzero.par_iter().find_map_first(|&a2| {
            search.hits_for(a2).into_iter().find_map(|(d2, a3, d3)| {
                let c = search.certificate(a2, d2, a3, d3);
                verify_certificate(&c, &s1, &s2).then_some(DiagonalHit {
                    t,
                    a2,
                    d2,
                    a3,
                    d3,
                    certificate: c,
                })
            })
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    Diagonal,
    AntiDiagonal,
}

impl Pattern {
    pub const ALL: [Pattern; 2] = [Pattern::Diagonal, Pattern::AntiDiagonal];

    /// `c·x^σ` placed according to the pattern, for an input in the `x` slot.
    fn image_x(self, f: &FieldCtx, v: FieldElement) -> Pair {
        match self {
            Pattern::Diagonal => Pair(v, f.zero()),
            Pattern::AntiDiagonal => Pair(f.zero(), v),
        }
    }

    fn image_y(self, f: &FieldCtx, v: FieldElement) -> Pair {
        match self {
            Pattern::Diagonal => Pair(f.zero(), v),
            Pattern::AntiDiagonal => Pair(v, f.zero()),
        }
    }

    fn block(self, f: &FieldCtx, cx: FieldElement, cy: FieldElement, t: u32) -> BlockMap {
        match self {
            Pattern::Diagonal => BlockMap::diagonal(f, cx, t, cy, t),
            Pattern::AntiDiagonal => BlockMap::anti_diagonal(f, cy, t, cx, t),
        }
    }
}

/// Which `(L, M)` pattern pairs a monomial search visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternFilter {
    All,
    DiagonalOnly,
    /// At least one of `L`, `M` anti-diagonal.
    AntiOnly,
}

impl PatternFilter {
    fn pairs(self) -> Vec<(Pattern, Pattern)> {
        let mut out = Vec::new();
        for l in Pattern::ALL {
            for m in Pattern::ALL {
                let diag = l == Pattern::Diagonal && m == Pattern::Diagonal;
                let keep = match self {
                    PatternFilter::All => true,
                    PatternFilter::DiagonalOnly => diag,
                    PatternFilter::AntiOnly => !diag,
                };
                if keep {
                    out.push((l, m));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialHit {
    pub t: u32,
    pub l_pattern: Pattern,
    pub m_pattern: Pattern,
    pub l: BlockMap,
    pub m: BlockMap,
    pub certificate: IsotopismCertificate,
}

/// A linear relation `Σ c·(eᵢ∘₁eⱼ) = 0` among basis products.
struct Relation {
    terms: Vec<(usize, usize, FieldElement)>,
}

/// Relations among the products of `p1`, grouped by the block
/// (`xx`, `xy`, `yx`, `yy`) of the latest column they involve.
fn product_relations(p1: &Presemifield) -> [Vec<Relation>; 4] {
    let f = &**p1.ctx();
    let m = f.m() as usize;
    let basis = p1.basis();
    let mut cols = Vec::new();
    for block in 0..4 {
        let (bi, bj) = (block / 2, block % 2);
        for i in 0..m {
            for j in 0..m {
                cols.push((bi * m + i, bj * m + j));
            }
        }
    }
    let vecs: Vec<Vec<u32>> = cols
        .iter()
        .map(|&(i, j)| pair_to_vec(f, p1.mul(basis[i], basis[j])))
        .collect();
    let mut rows: Vec<Vec<u32>> = (0..2 * m)
        .map(|r| vecs.iter().map(|v| v[r]).collect())
        .collect();
    let mut groups: [Vec<Relation>; 4] = Default::default();
    for v in null_space(&mut rows, cols.len(), f.p()) {
        let last = v
            .iter()
            .rposition(|&c| c != 0)
            .expect("nonzero null vector");
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(idx, &c)| (cols[idx].0, cols[idx].1, f.scalar(c as i64)))
            .collect();
        groups[last / (m * m)].push(Relation { terms });
    }
    groups
}

struct MonomialSearch<'a> {
    f: &'a FieldCtx,
    s1: &'a Presemifield,
    s2: &'a Presemifield,
    basis: Vec<Pair>,
    relations: [Vec<Relation>; 4],
}

impl<'a> MonomialSearch<'a> {
    fn new(s1: &'a Presemifield, s2: &'a Presemifield) -> Self {
        MonomialSearch {
            f: &**s1.ctx(),
            s1,
            s2,
            basis: s1.basis(),
            relations: product_relations(s1),
        }
    }

    fn holds(&self, group: usize, l: &[Pair], m: &[Pair]) -> bool {
        let f = self.f;
        self.relations[group].iter().all(|r| {
            let mut acc = Pair::zero(f);
            for &(i, j, c) in &r.terms {
                let z = self.s2.mul(l[i], m[j]);
                acc = acc.add(f, Pair(f.mul(c, z.0), f.mul(c, z.1)));
            }
            acc.is_zero()
        })
    }

    /// All hits with `L` pattern `lp`, `M` pattern `mp`, degree `t`, and
    /// first `x`-coefficient of `L` equal to `lx`, in `(μx, μy, ℓy)` order.
    fn hits(&self, t: u32, lp: Pattern, mp: Pattern, lx: FieldElement) -> Vec<MonomialHit> {
        let f = self.f;
        let m = f.m() as usize;
        let e: Vec<FieldElement> = (0..m as u32).map(|i| f.frobenius(f.basis(i), t)).collect();
        let mut lv = vec![Pair::zero(f); 2 * m];
        let mut mv = vec![Pair::zero(f); 2 * m];
        for i in 0..m {
            lv[i] = lp.image_x(f, f.mul(lx, e[i]));
        }
        let mut out = Vec::new();
        for mx in f.nonzero_elements() {
            for j in 0..m {
                mv[j] = mp.image_x(f, f.mul(mx, e[j]));
            }
            if !self.holds(0, &lv, &mv) {
                continue;
            }
            for my in f.nonzero_elements() {
                for j in 0..m {
                    mv[m + j] = mp.image_y(f, f.mul(my, e[j]));
                }
                if !self.holds(1, &lv, &mv) {
                    continue;
                }
                for ly in f.nonzero_elements() {
                    for i in 0..m {
                        lv[m + i] = lp.image_y(f, f.mul(ly, e[i]));
                    }
                    if !(self.holds(2, &lv, &mv) && self.holds(3, &lv, &mv)) {
                        continue;
                    }
                    if let Some(hit) = self.finish(t, lp, mp, (lx, ly), (mx, my)) {
                        out.push(hit);
                    }
                }
            }
        }
        out
    }

    fn finish(
        &self,
        t: u32,
        lp: Pattern,
        mp: Pattern,
        (lx, ly): (FieldElement, FieldElement),
        (mx, my): (FieldElement, FieldElement),
    ) -> Option<MonomialHit> {
        let f = self.f;
        let l = lp.block(f, lx, ly, t);
        let m = mp.block(f, mx, my, t);
        let mut constraints = Vec::with_capacity(self.basis.len().pow(2));
        for &x in &self.basis {
            for &y in &self.basis {
                constraints.push((self.s1.mul(x, y), self.s2.mul(l.apply(f, x), m.apply(f, y))));
            }
        }
        let n = fit_map(f, &constraints).ok()?;
        let certificate = IsotopismCertificate {
            n,
            l: l.expand(f),
            m: m.expand(f),
            source: self.s1.label().to_string(),
            target: self.s2.label().to_string(),
        };
        verify_certificate(&certificate, self.s1, self.s2).then_some(MonomialHit {
            t,
            l_pattern: lp,
            m_pattern: mp,
            l,
            m,
            certificate,
        })
    }
}

fn monomial_scan(
    s1: &Presemifield,
    s2: &Presemifield,
    filter: PatternFilter,
    degrees: &[u32],
    first_only: bool,
) -> Vec<MonomialHit> {
    let search = MonomialSearch::new(s1, s2);
    let f = &**s1.ctx();
    let nonzero: Vec<FieldElement> = f.nonzero_elements().collect();
    let mut out = Vec::new();
    for &t in degrees {
        for (lp, mp) in filter.pairs() {
            if first_only {
                let hit = nonzero
                    .par_iter()
                    .find_map_first(|&lx| search.hits(t, lp, mp, lx).into_iter().next());
                if let Some(h) = hit {
                    return vec![h];
                }
            } else {
                let hits: Vec<Vec<MonomialHit>> = nonzero
                    .par_iter()
                    .map(|&lx| search.hits(t, lp, mp, lx))
                    .collect();
                out.extend(hits.into_iter().flatten());
            }
        }
    }
    out
}

/// First isotopism `p1 → p2` whose `L` and `M` are diagonal or anti-diagonal
/// monomial blocks of one common degree, with `N` solved from the product
/// constraints. Scan order: `t`, pattern pair, then coefficients.
pub fn structured_search_monomial(
    p1: &TaniguchiParams,
    p2: &TaniguchiParams,
    filter: PatternFilter,
    limits: &OracleLimits,
) -> Result<Option<MonomialHit>> {
    pairwise_checks(p1, p2, limits)?;
    let degrees: Vec<u32> = (0..p1.m()).collect();
    let hits = monomial_scan(
        &p1.presemifield(),
        &p2.presemifield(),
        filter,
        &degrees,
        true,
    );
    Ok(hits.into_iter().next())
}

/// Every hit of [`structured_search_monomial`] at the given degrees.
pub fn structured_search_monomial_all(
    p1: &TaniguchiParams,
    p2: &TaniguchiParams,
    filter: PatternFilter,
    degrees: &[u32],
    limits: &OracleLimits,
) -> Result<Vec<MonomialHit>> {
    pairwise_checks(p1, p2, limits)?;
    Ok(monomial_scan(
        &p1.presemifield(),
        &p2.presemifield(),
        filter,
        degrees,
        false,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerReport {
    pub enumerated_size: u64,
    pub formula_size: u64,
    #[serde(rename = "match")]
    pub matches: bool,
    pub params: TaniguchiParams,
}

/// `(p^{gcd(k,m)} − 1)(p^m − 1)`, times `gcd(p^m − 1, p^k + 1)` when `a = 0`.
pub fn centralizer_formula(params: &TaniguchiParams) -> u64 {
    use num_integer::Integer;
    let p = params.p() as u64;
    let n = p.pow(params.m()) - 1;
    let base = (p.pow(params.d()) - 1) * n;
    if params.a().is_zero() {
        base * n.gcd(&(params.q() + 1))
    } else {
        base
    }
}

/// Autotopisms of `T(params)` with `L = diag(a₂, d₂)`, `M = diag(a₃, d₃)`
/// (degree 0), in `(a₂, a₃, d₃, d₂)` encoding order.
pub fn centralizer_autotopisms(
    params: &TaniguchiParams,
    limits: &OracleLimits,
) -> Result<Vec<IsotopismCertificate>> {
    limits.check(params.ctx())?;
    if !params.is_valid() {
        return Err(Error::InvalidParams(format!(
            "{} is not valid",
            params.label()
        )));
    }
    let ctx: &Arc<FieldCtx> = params.ctx();
    let f = &**ctx;
    let s = params.presemifield();
    let basis = s.basis();
    let dim = basis.len();
    let m = f.m() as usize;
    // The products (1,0)∘e_j span, since left multiplication is invertible.
    let e0 = basis[0];
    let z_cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|&y| pair_to_vec(f, s.mul(e0, y)))
        .collect();
    let z_inv = LinearMap::from_columns(f.p(), &z_cols)?
        .inverse()
        .ok_or(Error::ZeroDivisors)?;
    let nonzero: Vec<FieldElement> = f.nonzero_elements().collect();
    let per_a2: Vec<Vec<IsotopismCertificate>> = nonzero
        .par_iter()
        .map(|&a2| {
            let mut out = Vec::new();
            for &a3 in &nonzero {
                for &d3 in &nonzero {
                    let mm = BlockMap::diagonal(f, a3, 0, d3, 0);
                    let lx = |v: Pair| Pair(f.mul(a2, v.0), f.zero());
                    let w_cols: Vec<Vec<u32>> = basis
                        .iter()
                        .map(|&y| pair_to_vec(f, s.mul(lx(e0), mm.apply(f, y))))
                        .collect();
                    let w = LinearMap::from_columns(f.p(), &w_cols).expect("square");
                    let n = w.compose(&z_inv);
                    let ok = |x: Pair, lxv: Pair| {
                        basis
                            .iter()
                            .all(|&y| n.apply_pair(f, s.mul(x, y)) == s.mul(lxv, mm.apply(f, y)))
                    };
                    if !basis[1..m].iter().all(|&x| ok(x, lx(x))) {
                        continue;
                    }
                    for &d2 in &nonzero {
                        let l = BlockMap::diagonal(f, a2, 0, d2, 0);
                        if basis[m..dim].iter().all(|&x| ok(x, l.apply(f, x))) && n.invertible() {
                            out.push(IsotopismCertificate {
                                n: n.clone(),
                                l: l.expand(f),
                                m: mm.expand(f),
                                source: s.label().to_string(),
                                target: s.label().to_string(),
                            });
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(per_a2.into_iter().flatten().collect())
}

pub fn enumerate_centralizer(
    params: &TaniguchiParams,
    limits: &OracleLimits,
) -> Result<CentralizerReport> {
    let enumerated_size = centralizer_autotopisms(params, limits)?.len() as u64;
    let formula_size = centralizer_formula(params);
    Ok(CentralizerReport {
        enumerated_size,
        formula_size,
        matches: enumerated_size == formula_size,
        params: params.clone(),
    })
}

/// Primes dividing `p^m − 1` but no `p^j − 1` with `j < m`.
pub fn primitive_prime_divisors(p: u64, m: u32) -> Vec<u64> {
    let n = p.pow(m) - 1;
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            primes.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    primes.retain(|&l| (1..m).all(|j| (p.pow(j) - 1) % l != 0));
    primes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub lhs: TaniguchiParams,
    pub rhs: TaniguchiParams,
    pub criterion: bool,
    pub oracle: bool,
}

/// Compares [`decide_isotopy`] with [`structured_search_diagonal`] on every
/// ordered pair of valid tuples for `(k, a)`.
pub fn oracle_compare(
    ctx: &Arc<FieldCtx>,
    k: u32,
    a: FieldElement,
    limits: &OracleLimits,
) -> Result<Vec<Disagreement>> {
    limits.check(ctx)?;
    let grid = enumerate_valid(ctx, k, a)?;
    let mut out = Vec::new();
    for p1 in &grid {
        for p2 in &grid {
            let criterion = decide_isotopy(p1, p2)?.isotopic;
            let oracle = structured_search_diagonal(p1, p2, limits)?.is_some();
            if criterion != oracle {
                out.push(Disagreement {
                    lhs: p1.clone(),
                    rhs: p2.clone(),
                    criterion,
                    oracle,
                });
            }
        }
    }
    Ok(out)
}
