//! At gcd(k, m) = 3 the two placements of the Frobenius twist on `b` give
//! different relations. The structured search decides which one is right.

use std::sync::Arc;

use semifields::ff::FieldCtx;
use semifields::isotopy::{
    criterion_holds, criterion_holds_twisted_b, decide_isotopy, structured_search_diagonal,
    OracleLimits,
};
use semifields::taniguchi::{valid_alphas, valid_bs, TaniguchiParams};

const LIMITS: OracleLimits = OracleLimits { max_order: 512 };

fn setup() -> (TaniguchiParams, Arc<FieldCtx>) {
    let f = Arc::new(FieldCtx::new(2, 9).unwrap());
    let alpha = valid_alphas(&f, 3)[0];
    // A b whose Frobenius orbit has full length 9.
    let b = valid_bs(&f, 3, f.one())
        .into_iter()
        .find(|&b| (1..9).all(|t| f.frobenius(b, t) != b))
        .unwrap();
    (
        TaniguchiParams::new(f.clone(), 3, alpha, f.one(), b).unwrap(),
        f,
    )
}

#[test]
fn twist_sits_on_b_at_gcd_three() {
    let (p, f) = setup();
    let alpha2 = f.frobenius(p.alpha(), 1);

    // (α^p, b^p): related at t = 1 by the untwisted form only.
    let fwd = p.with_ab(alpha2, f.frobenius(p.b(), 1)).unwrap();
    assert!(criterion_holds(&p, &fwd, 1));
    assert!(!(0..9).any(|t| criterion_holds_twisted_b(&p, &fwd, t)));
    let hit = structured_search_diagonal(&p, &fwd, &LIMITS).unwrap();
    assert_eq!(hit.map(|h| h.t), Some(1));
    assert!(decide_isotopy(&p, &fwd).unwrap().isotopic);

    // (α^p, b^{p^8}): related by the twisted form only.
    let back = p.with_ab(alpha2, f.frobenius(p.b(), 8)).unwrap();
    assert!((0..9).any(|t| criterion_holds_twisted_b(&p, &back, t)));
    assert!(!(0..9).any(|t| criterion_holds(&p, &back, t)));
    assert!(structured_search_diagonal(&p, &back, &LIMITS)
        .unwrap()
        .is_none());
    assert!(!decide_isotopy(&p, &back).unwrap().isotopic);
}
