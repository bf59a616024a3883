//! Cross-checks between independent computations of the same quantity.

use std::collections::HashMap;
use std::sync::Arc;

use semifields::counting::{bluher_formula, enumerate_classes_in, partition, ClassOptions};
use semifields::ff::{FieldCtx, FieldElement};
use semifields::isotopy::{
    centralizer_autotopisms, criterion_holds, decide_isotopy, oracle_compare,
    primitive_prime_divisors, structured_search_diagonal, structured_search_monomial, OracleLimits,
    PatternFilter,
};
use semifields::linalg::Pair;
use semifields::semifield::{kaplansky, nuclei, Nuclei, Semifield};
use semifields::taniguchi::{enumerate_valid, valid_bs, TaniguchiParams};

fn field(p: u64, m: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(p, m).unwrap())
}

fn class_of(classes: &[Vec<(FieldElement, FieldElement)>]) -> HashMap<(u32, u32), usize> {
    let mut out = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        for &(x, y) in c {
            out.insert((x.encoding(), y.encoding()), i);
        }
    }
    out
}

#[test]
fn partition_matches_pairwise_decisions_at_27() {
    let f = field(3, 3);
    for a in [0, 1] {
        let grid = enumerate_valid(&f, 1, f.at(a)).unwrap();
        let cls = class_of(&partition(&f, 1, f.at(a)).unwrap());
        for x in &grid {
            for y in &grid {
                let same = cls[&(x.alpha().encoding(), x.b().encoding())]
                    == cls[&(y.alpha().encoding(), y.b().encoding())];
                assert_eq!(same, decide_isotopy(x, y).unwrap().isotopic);
            }
        }
    }
}

#[test]
fn partition_matches_criterion_at_81() {
    let f = field(3, 4);
    for a in [0, 1] {
        let grid = enumerate_valid(&f, 1, f.at(a)).unwrap();
        let cls = class_of(&partition(&f, 1, f.at(a)).unwrap());
        let ids: Vec<usize> = grid
            .iter()
            .map(|x| cls[&(x.alpha().encoding(), x.b().encoding())])
            .collect();
        for (i, x) in grid.iter().enumerate() {
            for (j, y) in grid.iter().enumerate() {
                let linked = (0..4).any(|t| criterion_holds(x, y, t));
                assert_eq!(ids[i] == ids[j], linked, "{} vs {}", x.label(), y.label());
            }
        }
    }
}

#[test]
fn decide_is_an_equivalence_at_27() {
    let f = field(3, 3);
    for a in [0, 1] {
        let grid = enumerate_valid(&f, 1, f.at(a)).unwrap();
        let n = grid.len();
        let rel: Vec<Vec<bool>> = grid
            .iter()
            .map(|x| {
                grid.iter()
                    .map(|y| decide_isotopy(x, y).unwrap().isotopic)
                    .collect()
            })
            .collect();
        for i in 0..n {
            assert!(rel[i][i]);
            for j in 0..n {
                assert_eq!(rel[i][j], rel[j][i]);
                if rel[i][j] {
                    for k in 0..n {
                        assert!(!rel[j][k] || rel[i][k]);
                    }
                }
            }
        }
    }
}

#[test]
fn decisions_recheck() {
    let f = field(3, 3);
    let grid = enumerate_valid(&f, 1, f.one()).unwrap();
    for x in grid.iter().step_by(7) {
        for y in grid.iter().step_by(5) {
            assert!(decide_isotopy(x, y).unwrap().recheck());
        }
    }
}

#[test]
fn class_count_is_independent_of_the_modulus() {
    // x^3 + 2x + 2 is irreducible over GF(3) but not the canonical choice.
    let other = Arc::new(FieldCtx::with_modulus(3, 3, 8).unwrap());
    let canon = field(3, 3);
    assert_ne!(other.modulus_encoding(), canon.modulus_encoding());
    let opts = ClassOptions {
        nuclei: false,
        ..Default::default()
    };
    for a in [0, 1] {
        let x = enumerate_classes_in(&other, 1, other.at(a), &opts).unwrap();
        let y = enumerate_classes_in(&canon, 1, canon.at(a), &opts).unwrap();
        assert_eq!(x.exact_classes, y.exact_classes);
        let mut sx: Vec<usize> = x.representatives.iter().map(|r| r.size).collect();
        let mut sy: Vec<usize> = y.representatives.iter().map(|r| r.size).collect();
        sx.sort();
        sy.sort();
        assert_eq!(sx, sy);
    }
}

fn kap(p: &TaniguchiParams) -> Semifield {
    let f = p.ctx();
    kaplansky(&p.presemifield(), Pair(f.one(), f.zero()))
        .unwrap()
        .semifield
}

/// Nucleus sizes by scanning every element against all basis pairs.
fn nuclei_by_enumeration(s: &Semifield) -> Nuclei {
    let ps = s.presemifield();
    let basis = ps.basis();
    let (mut l, mut m, mut r, mut z) = (0, 0, 0, 0);
    for e in ps.elements() {
        let mut in_l = true;
        let mut in_m = true;
        let mut in_r = true;
        for &x in &basis {
            for &y in &basis {
                in_l &= s.mul(s.mul(e, x), y) == s.mul(e, s.mul(x, y));
                in_m &= s.mul(s.mul(x, e), y) == s.mul(x, s.mul(e, y));
                in_r &= s.mul(s.mul(x, y), e) == s.mul(x, s.mul(y, e));
            }
        }
        let commutes = basis.iter().all(|&x| s.mul(e, x) == s.mul(x, e));
        l += in_l as u64;
        m += in_m as u64;
        r += in_r as u64;
        z += (in_l && in_m && in_r && commutes) as u64;
    }
    Nuclei {
        left: l,
        middle: m,
        right: r,
        center: z,
    }
}

#[test]
fn nuclei_kernels_match_enumeration() {
    let f = field(3, 3);
    for a in [0, 1] {
        let grid = enumerate_valid(&f, 1, f.at(a)).unwrap();
        for p in [&grid[0], &grid[grid.len() - 1]] {
            let s = kap(p);
            assert_eq!(nuclei(&s), nuclei_by_enumeration(&s), "{}", p.label());
        }
    }
}

#[test]
fn nuclei_are_constant_on_classes() {
    let f = field(3, 3);
    for a in [0, 1] {
        for class in partition(&f, 1, f.at(a)).unwrap() {
            let sizes: Vec<Nuclei> = class
                .iter()
                .map(|&(alpha, b)| {
                    kap(&TaniguchiParams::new(f.clone(), 1, alpha, f.at(a), b).unwrap())
                })
                .map(|s| nuclei(&s))
                .collect();
            assert!(sizes.windows(2).all(|w| w[0] == w[1]), "{sizes:?}");
        }
    }
}

#[test]
fn kaplansky_identity_closed_form() {
    let f = field(3, 3);
    let p = &enumerate_valid(&f, 1, f.one()).unwrap()[4];
    let s = kap(p);
    let expected = Pair(f.add(f.one(), f.frobenius(p.alpha(), 2)), f.zero());
    assert_eq!(s.identity(), expected);
}

#[test]
fn centralizer_index_avoids_primitive_primes() {
    let f = field(3, 3);
    let lim = OracleLimits::default();
    let prim = primitive_prime_divisors(3, 3);
    for a in [0, 1] {
        let p = &enumerate_valid(&f, 1, f.at(a)).unwrap()[2];
        let size = centralizer_autotopisms(p, &lim).unwrap().len() as u64;
        assert_eq!(size % 26, 0);
        let index = size / 26;
        assert!(prim.iter().all(|&l| index % l != 0));
    }
}

#[test]
fn monomial_search_reproduces_diagonal_hits() {
    let f = field(3, 3);
    let lim = OracleLimits::default();
    let grid = enumerate_valid(&f, 1, f.one()).unwrap();
    for x in grid.iter().step_by(11) {
        for y in grid.iter().step_by(13) {
            let diag = structured_search_diagonal(x, y, &lim).unwrap().is_some();
            let mono = structured_search_monomial(x, y, PatternFilter::All, &lim)
                .unwrap()
                .is_some();
            assert_eq!(diag, mono, "{} vs {}", x.label(), y.label());
        }
    }
}

#[test]
fn characteristic_two_grids_are_empty() {
    let lim = OracleLimits::default();
    for (m, ks) in [(3, vec![1]), (5, vec![1, 2])] {
        let f = field(2, m);
        for k in ks {
            for a in [0, 1] {
                assert!(oracle_compare(&f, k, f.at(a), &lim).unwrap().is_empty());
                assert!(enumerate_valid(&f, k, f.at(a)).unwrap().is_empty());
            }
        }
    }
}

#[test]
fn b_counts_match_formula_on_grid() {
    for p in [2u64, 3, 5] {
        for m in 2u32.. {
            if p.pow(m) > 1 << 10 {
                break;
            }
            let f = FieldCtx::new(p, m).unwrap();
            for k in 1..m {
                let n = bluher_formula(p, k, m).unwrap().formula_value;
                assert_eq!(valid_bs(&f, k, f.one()).len() as u128, n, "({p},{k},{m})");
            }
        }
    }
}
