use brauer_core::diagrams::{compose, flip, tensor, BrauerDiagram};
use brauer_core::gtheory::{blocks, preceq, wt0};
use brauer_core::klmod::{decomposition_matrix_kl, kl_multiplicity, CosetModule, KLContext, PINNED_MODULE};
use brauer_core::oracle::decomp_oracle;
use brauer_core::scalar::{q, q_frac};
use brauer_core::symgrp::{lambda_plus, Partition};
use proptest::prelude::*;

/// A random perfect matching on `m + s` points.
fn arb_diagram(m: usize, s: usize) -> impl Strategy<Value = BrauerDiagram> {
    Just((1..=m + s).collect::<Vec<usize>>()).prop_shuffle().prop_map(move |v| {
        let pairs: Vec<[usize; 2]> = v.chunks(2).map(|c| [c[0], c[1]]).collect();
        BrauerDiagram::from_pairs(m, s, &pairs).unwrap()
    })
}

fn arb_chain() -> impl Strategy<Value = (BrauerDiagram, BrauerDiagram, BrauerDiagram)> {
    (0usize..5, 0usize..3, 0usize..3, 0usize..3).prop_flat_map(|(a, b2, c2, d2)| {
        let b = (a % 2) + 2 * b2;
        let c = (a % 2) + 2 * c2;
        let d = (a % 2) + 2 * d2;
        (arb_diagram(a, b), arb_diagram(b, c), arb_diagram(c, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn composition_is_associative_with_additive_loops((f, g, h) in arb_chain()) {
        let (fg, l1) = compose(&f, &g).unwrap();
        let (left, l2) = compose(&fg, &h).unwrap();
        let (gh, l3) = compose(&g, &h).unwrap();
        let (right, l4) = compose(&f, &gh).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(l1 + l2, l3 + l4);
    }

    #[test]
    fn identities_and_flip((f, _, _) in arb_chain()) {
        let (a, b) = (f.bottom(), f.top());
        prop_assert_eq!(compose(&BrauerDiagram::identity(a), &f).unwrap(), (f.clone(), 0));
        prop_assert_eq!(compose(&f, &BrauerDiagram::identity(b)).unwrap(), (f.clone(), 0));
        prop_assert_eq!(flip(&flip(&f)), f.clone());
        let id = BrauerDiagram::identity(0);
        prop_assert_eq!(tensor(&id, &f), f.clone());
        prop_assert_eq!(tensor(&f, &id), f);
    }
}

#[test]
fn empty_partition_only_meets_itself_at_zero() {
    let ctx = KLContext::default();
    for mu in lambda_plus(4).into_iter().chain(lambda_plus(3)) {
        let n = mu.size() + 2;
        let want = i64::from(mu.is_empty());
        assert_eq!(kl_multiplicity(&ctx, &Partition::empty(), &mu, 0, n, true).unwrap(), want, "{mu}");
    }
}

/// The sign module is the one that reproduces the brute-force decomposition numbers.
#[test]
fn pinned_coset_module_matches_oracle() {
    assert_eq!(PINNED_MODULE, CosetModule::Sign);
    let sign = KLContext::new(CosetModule::Sign);
    let trivial = KLContext::new(CosetModule::Trivial);
    let mut trivial_differs = false;
    for m in 0..=4 {
        for d in [0, 1, 2] {
            let delta = q(d);
            let oracle = decomp_oracle(m, &delta, 4).unwrap();
            assert_eq!(decomposition_matrix_kl(&sign, m, &delta, true).unwrap(), oracle, "m={m}, δ={d}");
            trivial_differs |= decomposition_matrix_kl(&trivial, m, &delta, false).map_or(true, |t| t != oracle);
        }
    }
    assert!(trivial_differs);
}

#[test]
fn blocks_agree_with_weight_classes() {
    for d in [q(0), q(1), q(2), q(3), q_frac(1, 2)] {
        for p in [0, 3, 5] {
            for m in 0..=6 {
                let bs = blocks(m, &d, p).unwrap();
                let total: usize = bs.iter().map(Vec::len).sum();
                assert_eq!(total, lambda_plus(m).len());
                let classes: Vec<_> = bs.iter().map(|b| wt0(&b[0], &d, p).unwrap()).collect();
                for (b, c) in bs.iter().zip(&classes) {
                    assert!(b.iter().all(|l| wt0(l, &d, p).unwrap() == *c));
                }
                for i in 0..classes.len() {
                    for j in i + 1..classes.len() {
                        assert_ne!(classes[i], classes[j]);
                    }
                }
            }
        }
    }
}

#[test]
fn weight_order_is_a_partial_order_on_blocks() {
    let d = q(2);
    for b in blocks(6, &d, 0).unwrap() {
        for x in &b {
            assert!(preceq(x, x, &d, 0).unwrap());
            for y in &b {
                if x != y && preceq(x, y, &d, 0).unwrap() {
                    assert!(!preceq(y, x, &d, 0).unwrap(), "{x} and {y}");
                }
                for z in &b {
                    if preceq(x, y, &d, 0).unwrap() && preceq(y, z, &d, 0).unwrap() {
                        assert!(preceq(x, z, &d, 0).unwrap());
                    }
                }
            }
        }
    }
}
