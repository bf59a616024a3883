//! Root-free projective polynomials, the gcd lemma, and isotopy classes of
//! Taniguchi semifields.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::isotopy::{decide_isotopy, structured_search_diagonal, OracleLimits};
use crate::linalg::Pair;
use crate::semifield::{kaplansky, nuclei, Nuclei};
use crate::taniguchi::{
    classification_admissible, projective_root, valid_alphas, valid_bs, TaniguchiParams,
};

/// Largest `p^m` for brute-force counts and class enumeration.
pub const COUNT_CAP: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BluherCase {
    #[serde(rename = "l-even")]
    LEven,
    #[serde(rename = "p-odd-l-odd")]
    POddLOdd,
    #[serde(rename = "p-even-l-odd")]
    PEvenLOdd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BluherResult {
    pub p: u64,
    pub k: u32,
    pub m: u32,
    pub d: u32,
    pub l: u32,
    pub formula_value: u128,
    pub brute_value: Option<u64>,
    pub case_tag: BluherCase,
}

fn check_pkm(p: u64, k: u32, m: u32) -> Result<()> {
    if !crate::ff::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k >= m {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k < m, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

fn case_of(p: u64, l: u32) -> BluherCase {
    if l % 2 == 0 {
        BluherCase::LEven
    } else if p % 2 == 1 {
        BluherCase::POddLOdd
    } else {
        BluherCase::PEvenLOdd
    }
}

/// Number of `b ∈ GF(p^m)` for which `x^{q+1} + x + b` has no root, by the
/// closed form keyed on the parity of `l = m/gcd(k, m)` and `p`.
pub fn bluher_formula(p: u64, k: u32, m: u32) -> Result<BluherResult> {
    check_pkm(p, k, m)?;
    let d = k.gcd(&m);
    let l = m / d;
    let (p128, pd) = (p as u128, (p as u128).pow(d));
    let top = p128
        .checked_pow(m + d)
        .ok_or_else(|| Error::InvalidParams("p^(m+d) overflows".into()))?;
    let case_tag = case_of(p, l);
    let numerator = match case_tag {
        BluherCase::LEven => top - pd,
        BluherCase::POddLOdd => top - 1,
        BluherCase::PEvenLOdd => top + pd,
    };
    Ok(BluherResult {
        p,
        k,
        m,
        d,
        l,
        formula_value: numerator / (2 * (pd + 1)),
        brute_value: None,
        case_tag,
    })
}

/// [`bluher_formula`] together with an exhaustive count.
pub fn bluher_bruteforce(p: u64, k: u32, m: u32) -> Result<BluherResult> {
    let mut r = bluher_formula(p, k, m)?;
    let ctx = FieldCtx::with_cap(p, m, COUNT_CAP)?;
    let one = ctx.one();
    let elems: Vec<FieldElement> = ctx.elements().collect();
    let count = elems
        .par_iter()
        .filter(|&&b| projective_root(&ctx, k, one, b).is_none())
        .count();
    r.brute_value = Some(count as u64);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcdLemma {
    pub p: u64,
    pub k: u32,
    pub m: u32,
    pub gcd_minus: u128,
    pub gcd_plus: u128,
    pub formula_minus: u128,
    pub formula_plus: u128,
    pub formula_match: bool,
}

/// `gcd(p^k − 1, p^m − 1)` and `gcd(p^k + 1, p^m − 1)`, computed directly and
/// by the closed forms.
pub fn gcd_lemma(p: u64, k: u32, m: u32) -> Result<GcdLemma> {
    check_pkm(p, k, m)?;
    let p128 = p as u128;
    let pow = |e: u32| {
        p128.checked_pow(e)
            .ok_or_else(|| Error::InvalidParams(format!("p^{e} overflows")))
    };
    let (pk, pm) = (pow(k)?, pow(m)?);
    let d = k.gcd(&m);
    let pd = pow(d)?;
    let gcd_minus = (pk - 1).gcd(&(pm - 1));
    let gcd_plus = (pk + 1).gcd(&(pm - 1));
    let formula_minus = pd - 1;
    let formula_plus = match case_of(p, m / d) {
        BluherCase::LEven => pd + 1,
        BluherCase::POddLOdd => 2,
        BluherCase::PEvenLOdd => 1,
    };
    Ok(GcdLemma {
        p,
        k,
        m,
        gcd_minus,
        gcd_plus,
        formula_minus,
        formula_plus,
        formula_match: gcd_minus == formula_minus && gcd_plus == formula_plus,
    })
}

fn ser_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Bounds on the number of classes for `(p, k, m, a)`.
pub fn class_bounds(p: u64, k: u32, m: u32, a_is_one: bool) -> Result<(Ratio<u64>, Ratio<u64>)> {
    let n = bluher_formula(p, k, m)?;
    let d = k.gcd(&m);
    let pd = p.pow(d);
    let cosets = pd.saturating_sub(2);
    let mm = m as u64;
    Ok(if a_is_one {
        let nb = n.formula_value as u64;
        (
            Ratio::new(cosets * nb, mm),
            Ratio::from_integer(cosets * nb),
        )
    } else {
        match n.case_tag {
            BluherCase::LEven => (
                Ratio::new(cosets * pd, mm),
                Ratio::from_integer(cosets * pd),
            ),
            BluherCase::POddLOdd => (Ratio::new(cosets, mm), Ratio::from_integer(cosets)),
            BluherCase::PEvenLOdd => (Ratio::from_integer(0), Ratio::from_integer(0)),
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRep {
    pub alpha: FieldElement,
    pub b: FieldElement,
    pub size: usize,
    pub nuclei: Option<Nuclei>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub p: u32,
    pub k: u32,
    pub m: u32,
    pub a: u32,
    pub valid_alpha_count: usize,
    pub valid_b_count: usize,
    pub exact_classes: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub lower_bound: Ratio<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub upper_bound: Ratio<u64>,
    pub bounds_ok: bool,
    pub representatives: Vec<ClassRep>,
    /// Representatives pairwise non-isotopic under the structured search,
    /// when that check was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_distinct: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassOptions {
    pub nuclei: bool,
    pub oracle: bool,
    pub limits: OracleLimits,
}

impl Default for ClassOptions {
    fn default() -> Self {
        ClassOptions {
            nuclei: true,
            oracle: false,
            limits: OracleLimits::default(),
        }
    }
}

fn check_class_args(ctx: &FieldCtx, k: u32, a: FieldElement) -> Result<()> {
    let (p, m) = (ctx.p(), ctx.m());
    if k == 0 || 2 * k >= m {
        return Err(Error::Inadmissible(format!(
            "need 1 <= k < m/2, got k = {k}, m = {m}"
        )));
    }
    if !classification_admissible(p, k, m) {
        return Err(Error::Inadmissible(format!(
            "need m > 2 and (p, m) != (2, 6), got p = {p}, m = {m}"
        )));
    }
    if a.encoding() > 1 {
        return Err(Error::InvalidParams("a must be 0 or 1".into()));
    }
    if ctx.order() as u64 > COUNT_CAP {
        return Err(Error::SizeCap {
            order: ctx.order() as u128,
            cap: COUNT_CAP,
        });
    }
    Ok(())
}

/// Isotopy classes of valid `T(p^k, α, a, b)`. Members of each class are
/// ordered by `(α, b)` encodings; classes by their first member.
///
/// Two tuples are joined when they differ by a Frobenius twist
/// `(α, b) ↦ (α^p, b^p)`, or when `α′/α` is a `(q−1)`-st power and `b′ = b`
/// (`a = 1`) or `b′/b` is a `(q+1)`-st power (`a = 0`). The relation from
/// [`decide_isotopy`] is the one these moves generate.
pub fn partition(
    ctx: &Arc<FieldCtx>,
    k: u32,
    a: FieldElement,
) -> Result<Vec<Vec<(FieldElement, FieldElement)>>> {
    check_class_args(ctx, k, a)?;
    let alphas = valid_alphas(ctx, k);
    let bs = valid_bs(ctx, k, a);
    let (na, nb) = (alphas.len(), bs.len());
    if na == 0 || nb == 0 {
        return Ok(Vec::new());
    }
    let order = ctx.order() as usize;
    let index_of = |list: &[FieldElement]| {
        let mut v = vec![usize::MAX; order];
        for (i, e) in list.iter().enumerate() {
            v[e.encoding() as usize] = i;
        }
        v
    };
    let (ai, bi) = (index_of(&alphas), index_of(&bs));
    let n1 = ctx.order() as u64 - 1;
    let q = (ctx.p() as u64).pow(k);
    let alpha_key = |x: FieldElement| ctx.pow(x, n1 / (q - 1).gcd(&n1)).encoding();
    let b_key = |x: FieldElement| {
        if a.is_zero() {
            ctx.pow(x, n1 / (q + 1).gcd(&n1)).encoding()
        } else {
            x.encoding()
        }
    };
    let mut uf = UnionFind::<usize>::new(na * nb);
    let mut first: HashMap<(u32, u32), usize> = HashMap::new();
    for (i, &alpha) in alphas.iter().enumerate() {
        let fa = ai[ctx.frobenius(alpha, 1).encoding() as usize];
        for (j, &b) in bs.iter().enumerate() {
            let idx = i * nb + j;
            let fb = bi[ctx.frobenius(b, 1).encoding() as usize];
            uf.union(idx, fa * nb + fb);
            let key = (alpha_key(alpha), b_key(b));
            let root = *first.entry(key).or_insert(idx);
            uf.union(root, idx);
        }
    }
    let mut classes: Vec<Vec<(FieldElement, FieldElement)>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for idx in 0..na * nb {
        let r = uf.find(idx);
        let c = *slot.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push((alphas[idx / nb], bs[idx % nb]));
    }
    Ok(classes)
}

fn kaplansky_nuclei(params: &TaniguchiParams) -> Result<Nuclei> {
    let f = params.ctx();
    let e = Pair(f.one(), f.zero());
    Ok(nuclei(&kaplansky(&params.presemifield(), e)?.semifield))
}

pub fn enumerate_classes(p: u64, k: u32, m: u32, a: u32) -> Result<ClassReport> {
    let ctx = Arc::new(FieldCtx::with_cap(p, m, COUNT_CAP)?);
    enumerate_classes_in(&ctx, k, ctx.element(a as u64)?, &ClassOptions::default())
}

/// Class count, bounds, and one representative per class for a given field
/// representation.
pub fn enumerate_classes_in(
    ctx: &Arc<FieldCtx>,
    k: u32,
    a: FieldElement,
    opts: &ClassOptions,
) -> Result<ClassReport> {
    let classes = partition(ctx, k, a)?;
    let (p, m) = (ctx.p(), ctx.m());
    let (lower_bound, upper_bound) = class_bounds(p as u64, k, m, !a.is_zero())?;
    let exact = classes.len();
    let rep_params = classes
        .iter()
        .map(|c| TaniguchiParams::new(ctx.clone(), k, c[0].0, a, c[0].1))
        .collect::<Result<Vec<_>>>()?;
    let nuc: Vec<Option<Nuclei>> = if opts.nuclei {
        rep_params
            .par_iter()
            .map(|t| kaplansky_nuclei(t).map(Some))
            .collect::<Result<_>>()?
    } else {
        vec![None; exact]
    };
    let representatives = classes
        .iter()
        .zip(nuc)
        .map(|(c, nuclei)| ClassRep {
            alpha: c[0].0,
            b: c[0].1,
            size: c.len(),
            nuclei,
        })
        .collect();
    let oracle_distinct = if opts.oracle {
        Some(representatives_unlinked(&rep_params, &opts.limits)?)
    } else {
        None
    };
    let exact_r = Ratio::from_integer(exact as u64);
    Ok(ClassReport {
        p,
        k,
        m,
        a: a.encoding(),
        valid_alpha_count: valid_alphas(ctx, k).len(),
        valid_b_count: valid_bs(ctx, k, a).len(),
        exact_classes: exact,
        bounds_ok: lower_bound <= exact_r && exact_r <= upper_bound,
        lower_bound,
        upper_bound,
        representatives,
        oracle_distinct,
    })
}

/// Whether no two distinct representatives are isotopic by the criterion.
pub fn representatives_distinct(reps: &[TaniguchiParams]) -> Result<bool> {
    for (i, x) in reps.iter().enumerate() {
        for y in &reps[i + 1..] {
            if decide_isotopy(x, y)?.isotopic {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the structured search finds no isotopism between any two distinct
/// representatives.
pub fn representatives_unlinked(reps: &[TaniguchiParams], limits: &OracleLimits) -> Result<bool> {
    for (i, x) in reps.iter().enumerate() {
        for y in &reps[i + 1..] {
            if structured_search_diagonal(x, y, limits)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub p: u32,
    pub m: u32,
    pub total: usize,
    pub bounds_ok: bool,
    pub breakdown: Vec<ClassReport>,
}

/// Sum of class counts over `1 ≤ k < m/2` and `a ∈ {0, 1}`.
pub fn total_count(p: u64, m: u32, opts: &ClassOptions) -> Result<Census> {
    let ctx = Arc::new(FieldCtx::with_cap(p, m, COUNT_CAP)?);
    if m <= 2 || (p, m) == (2, 6) {
        return Err(Error::Inadmissible(format!(
            "need m > 2 and (p, m) != (2, 6), got p = {p}, m = {m}"
        )));
    }
    let mut breakdown = Vec::new();
    for k in (1..m).filter(|&k| 2 * k < m) {
        for a in [ctx.zero(), ctx.one()] {
            breakdown.push(enumerate_classes_in(&ctx, k, a, opts)?);
        }
    }
    Ok(Census {
        p: ctx.p(),
        m,
        total: breakdown.iter().map(|r| r.exact_classes).sum(),
        bounds_ok: breakdown.iter().all(|r| r.bounds_ok),
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bluher_spot_values() {
        for (p, k, m, v) in [(3, 1, 3, 10), (2, 1, 3, 3), (3, 1, 4, 30), (2, 2, 4, 6)] {
            let r = bluher_bruteforce(p, k, m).unwrap();
            assert_eq!(r.formula_value, v);
            assert_eq!(r.brute_value, Some(v as u64));
        }
        assert_eq!(bluher_formula(2, 2, 4).unwrap().case_tag, BluherCase::LEven);
    }

    #[test]
    fn gcd_lemma_spot_values() {
        let g = gcd_lemma(2, 2, 4).unwrap();
        assert_eq!((g.gcd_minus, g.gcd_plus), (3, 5));
        let g = gcd_lemma(3, 1, 3).unwrap();
        assert_eq!((g.gcd_minus, g.gcd_plus), (2, 2));
        let g = gcd_lemma(2, 1, 3).unwrap();
        assert_eq!((g.gcd_minus, g.gcd_plus), (1, 1));
        assert!(g.formula_match);
    }

    #[test]
    fn classes_at_27() {
        let r = enumerate_classes(3, 1, 3, 0).unwrap();
        assert_eq!(r.exact_classes, 1);
        assert_eq!(r.lower_bound, Ratio::new(1, 3));
        let r = enumerate_classes(3, 1, 3, 1).unwrap();
        assert_eq!(r.exact_classes, 4);
        assert_eq!((r.valid_alpha_count, r.valid_b_count), (13, 10));
        assert!(r.bounds_ok);
        assert_eq!(
            serde_json::to_value(&r).unwrap()["lower_bound"],
            serde_json::json!("10/3")
        );
    }

    #[test]
    fn census_small() {
        let c = total_count(2, 5, &ClassOptions::default()).unwrap();
        assert_eq!(c.total, 0);
        let c = total_count(2, 4, &ClassOptions::default()).unwrap();
        assert_eq!((c.total, c.breakdown.len()), (0, 2));
        assert!(total_count(2, 6, &ClassOptions::default()).is_err());
        assert!(enumerate_classes(3, 2, 4, 1).is_err());
    }
}
