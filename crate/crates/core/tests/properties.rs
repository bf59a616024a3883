use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use semifields::ff::FieldCtx;
use semifields::isotopy::{decide_isotopy, gamma_r};
use semifields::linalg::{fit_map, LinearMap, Pair};
use semifields::semifield::{verify_certificate, verify_on, IsotopismCertificate};
use semifields::taniguchi::{enumerate_valid, TaniguchiParams};

const FIELDS: [(u64, u32); 7] = [(2, 3), (2, 5), (3, 2), (3, 3), (3, 4), (5, 2), (7, 2)];

fn fields() -> &'static Vec<Arc<FieldCtx>> {
    static F: OnceLock<Vec<Arc<FieldCtx>>> = OnceLock::new();
    F.get_or_init(|| {
        FIELDS
            .iter()
            .map(|&(p, m)| Arc::new(FieldCtx::new(p, m).unwrap()))
            .collect()
    })
}

/// Valid tuples at `k = 1` over GF(81), all `a ∈ {0, 1, 2}`.
fn grid81() -> &'static Vec<TaniguchiParams> {
    static G: OnceLock<Vec<TaniguchiParams>> = OnceLock::new();
    G.get_or_init(|| {
        let f = Arc::new(FieldCtx::new(3, 4).unwrap());
        (0..3)
            .flat_map(|a| enumerate_valid(&f, 1, f.at(a)).unwrap())
            .collect()
    })
}

fn pair(f: &FieldCtx, x: u32, y: u32) -> Pair {
    let n = f.order();
    Pair(f.at(x % n), f.at(y % n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_laws(fi in 0..FIELDS.len(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>(), t in 0u32..8) {
        let f = &fields()[fi];
        let n = f.order();
        let (a, b, c) = (f.at(x % n), f.at(y % n), f.at(z % n));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        let pt = (f.p() as u64).pow(t % f.m());
        prop_assert_eq!(f.frobenius(a, t), f.pow(a, pt));
        prop_assert_eq!(f.frobenius(f.add(a, b), t), f.add(f.frobenius(a, t), f.frobenius(b, t)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), t), f.mul(f.frobenius(a, t), f.frobenius(b, t)));
    }

    #[test]
    fn linear_maps_round_trip(fi in 0..FIELDS.len(), seed in proptest::collection::vec(any::<u32>(), 100)) {
        let f = &fields()[fi];
        let n = 2 * f.m() as usize;
        let p = f.p();
        let rows: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| seed[(i * n + j) % seed.len()] % p).collect()).collect();
        let a = LinearMap::from_rows(p, rows).unwrap();
        prop_assert_eq!(a.rank() + a.kernel().len(), n);
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(inv.compose(&a), LinearMap::identity(p, n));
        }
        let basis: Vec<(Pair, Pair)> = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                let x = semifields::linalg::vec_to_pair(f, &e);
                (x, a.apply_pair(f, x))
            })
            .collect();
        prop_assert_eq!(fit_map(f, &basis).unwrap(), a);
    }

    #[test]
    fn taniguchi_product_is_biadditive(i in any::<usize>(), x in any::<[u32; 6]>()) {
        let g = grid81();
        let t = &g[i % g.len()];
        let f = t.ctx();
        let (u, v, w) = (pair(f, x[0], x[1]), pair(f, x[2], x[3]), pair(f, x[4], x[5]));
        prop_assert_eq!(t.multiply(u, v.add(f, w)), t.multiply(u, v).add(f, t.multiply(u, w)));
        prop_assert_eq!(t.multiply(u.add(f, v), w), t.multiply(u, w).add(f, t.multiply(v, w)));
        if !u.is_zero() && !v.is_zero() {
            prop_assert!(!t.multiply(u, v).is_zero());
        }
    }

    #[test]
    fn gamma_r_is_an_autotopism(i in any::<usize>(), r in 1u32..81) {
        let g = grid81();
        let t = &g[i % g.len()];
        let s = t.presemifield();
        let c = gamma_r(t, t.ctx().at(r)).unwrap().certificate(t);
        prop_assert!(verify_certificate(&c, &s, &s));
    }

    #[test]
    fn transforms_verify(i in any::<usize>()) {
        let g = grid81();
        let t = &g[i % g.len()];
        let s = t.presemifield();
        let (n, c) = t.normalize_a().unwrap();
        prop_assert!(verify_certificate(&c, &s, &n.presemifield()));
        let (q, c) = t.qbar_transform().unwrap();
        prop_assert!(verify_certificate(&c, &s, &q.presemifield()));
        let r = t.representation_certificate().unwrap();
        prop_assert!(verify_certificate(&r, &t.original_presemifield(), &s));
        let back = c.inverse().unwrap();
        prop_assert!(verify_certificate(&back, &q.presemifield(), &s));
        let id = c.then(&back);
        prop_assert_eq!(&id.n, &LinearMap::identity(3, 8));
    }

    /// Verdicts agree on the standard basis and on a shifted spanning set.
    #[test]
    fn verification_ignores_probe_basis(i in any::<usize>(), j in any::<usize>(), shift in any::<[u32; 2]>()) {
        let g = grid81();
        let (t1, t2) = (&g[i % g.len()], &g[j % g.len()]);
        let f = t1.ctx();
        let (s1, s2) = (t1.presemifield(), t2.presemifield());
        let id = IsotopismCertificate::identity(3, 8, "id");
        let extra = pair(f, shift[0], shift[1]);
        let probes: Vec<Pair> = s1.basis().into_iter().map(|b| b.add(f, extra)).chain([extra]).collect();
        prop_assert_eq!(verify_on(&id, &s1, &s2, &probes), verify_certificate(&id, &s1, &s2));
        let (n, c) = t1.normalize_a().unwrap();
        let sn = n.presemifield();
        prop_assert_eq!(verify_on(&c, &s1, &sn, &probes), verify_certificate(&c, &s1, &sn));
    }

    #[test]
    fn decisions_are_symmetric(i in any::<usize>(), j in any::<usize>()) {
        let g = grid81();
        let (x, y) = (&g[i % g.len()], &g[j % g.len()]);
        let d1 = decide_isotopy(x, y).unwrap();
        let d2 = decide_isotopy(y, x).unwrap();
        prop_assert_eq!(d1.isotopic, d2.isotopic);
        prop_assert!(d1.recheck());
    }
}
