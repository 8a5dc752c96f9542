use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use vlab_core::criteria::{compare, cr1, cr2, cr3, Comparand, Criterion, Domain};
use vlab_core::graph::{all_pairs, canonical_mask, is_biconnected_mask, mask_from_edges, pair_count};
use vlab_core::mc::Moments;
use vlab_core::ree_hoover::{star_content, star_content_table};
use vlab_core::series::{
    a_from_b, a_to_virial, ab_recurrence_residual, b_from_a, b_to_virial, CoeffSeq, OpCounter,
};
use vlab_core::trees::{enumerate_tr, enumerate_tr0, tree_sum, LabeledTree, Subset, TreeClass};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn rationals(len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-20i64..=20, 1i64..=9), len).prop_map(|v| v.into_iter().map(|(p, q)| rat(p, q)).collect())
}

/// Random rooted labeled tree on `V_n`, rooted at 1: each vertex `v > 1`
/// attaches to a random earlier vertex of a random permutation.
fn labeled_tree(n: usize) -> impl Strategy<Value = LabeledTree> {
    (Just((2..=n).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::vec(any::<prop::sample::Index>(), n))
        .prop_map(move |(order, picks)| {
            let order: Vec<usize> = std::iter::once(1).chain(order).collect();
            let mut parent = vec![0; n + 1];
            for i in 1..n {
                parent[order[i]] = order[picks[i].index(i)];
            }
            LabeledTree::from_parents(n, parent).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn class_of_a_labeled_tree_is_enumerated(t in (2usize..=8).prop_flat_map(labeled_tree)) {
        let n = t.n();
        let class = TreeClass::from_labeled_tree(&t);
        let all = enumerate_tr(n).unwrap();
        prop_assert!(all.contains(&class));
        prop_assert_eq!(TreeClass::from_labeled_tree(&class.canonical_labeling()), class.clone());
        prop_assert_eq!(class.admissible_edges().len(), t.admissible_edges().len());
        if class.in_a_subset() {
            prop_assert!(enumerate_tr0(n).unwrap().contains(&class));
        }
    }

    #[test]
    fn tree_and_admissible_edges_disjoint(n in 2usize..=8, pick in any::<prop::sample::Index>()) {
        let classes = enumerate_tr(n).unwrap();
        let t = &classes[pick.index(classes.len())];
        let tree = t.tree_edges();
        let adm = t.admissible_edges();
        prop_assert_eq!(tree.len(), n - 1);
        prop_assert!(tree.is_disjoint(&adm));
        prop_assert_eq!(adm.len(), t.admissible_count());
        let g = t.to_two_color_graph();
        prop_assert!(g.is_base_product());
        prop_assert_eq!(g.n1_complexity().unwrap(), adm.len());
        prop_assert!(t.multiplicity() > BigUint::zero());
    }

    #[test]
    fn criterion_identity(n in 2usize..=10, full in any::<bool>()) {
        let subset = if full { Subset::Full } else { Subset::ASubset };
        let l = tree_sum(n, subset, Domain::ImproperSpace).unwrap().to_combination();
        prop_assert_eq!(cr2(&l), (n as u64 - 1) * cr1(&l) + cr3(&l).unwrap());
    }

    #[test]
    fn verdicts_are_antisymmetric(n in 2usize..=9, c in 0usize..3, la in any::<bool>(), ra in any::<bool>()) {
        let sub = |a: bool| if a { Subset::ASubset } else { Subset::Full };
        let l = tree_sum(n, sub(la), Domain::ImproperSpace).unwrap().to_combination();
        let r = tree_sum(n, sub(ra), Domain::ImproperSpace).unwrap().to_combination();
        let c = Criterion::ALL[c];
        let x = compare(Comparand::from(&l), Comparand::from(&r), c).unwrap();
        let y = compare(Comparand::from(&r), Comparand::from(&l), c).unwrap();
        prop_assert_eq!(x.verdict, y.verdict.reversed());
        prop_assert_eq!((x.left, x.right), (y.right, y.left));
    }

    #[test]
    fn canonical_key_is_relabeling_invariant(
        n in 2usize..=7,
        mask in any::<u64>(),
        perm in Just((1..=7usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let mask = mask & ((1u64 << pair_count(n)) - 1);
        let perm: Vec<usize> = perm.into_iter().filter(|&v| v <= n).collect();
        let images: Vec<_> = all_pairs(n)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| {
                let (a, b) = (perm[e.u() - 1], perm[e.v() - 1]);
                vlab_core::graph::Edge::new(a.min(b), a.max(b)).unwrap()
            })
            .collect();
        let relabeled = mask_from_edges(n, &images);
        prop_assert_eq!(canonical_mask(n, mask).unwrap(), canonical_mask(n, relabeled).unwrap());
    }

    #[test]
    fn star_content_lives_on_blocks(n in 2usize..=5, mask in any::<u64>()) {
        let mask = mask & ((1u64 << pair_count(n)) - 1);
        let edges: BTreeSet<_> = all_pairs(n)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let sc = star_content(&edges, n).unwrap();
        prop_assert_eq!(sc, star_content_table(n).unwrap()[mask as usize] as i64);
        if sc != 0 {
            prop_assert!(is_biconnected_mask(n, mask));
        }
    }

    #[test]
    fn moments_merge_matches_sequential(xs in prop::collection::vec(-100.0f64..100.0, 2..200), cut in any::<prop::sample::Index>()) {
        let k = cut.index(xs.len());
        let fill = |s: &[f64]| {
            let mut m = Moments::default();
            s.iter().for_each(|&x| m.push(x));
            m
        };
        let whole = fill(&xs);
        let merged = fill(&xs[..k]).merge(fill(&xs[k..]));
        prop_assert_eq!(whole.count, merged.count);
        prop_assert!((whole.mean - merged.mean).abs() < 1e-9);
        prop_assert!((whole.stderr() - merged.stderr()).abs() < 1e-9 * (1.0 + whole.stderr()));
    }

    #[test]
    fn recurrence_and_routes_exact(tail in rationals(5)) {
        let a = CoeffSeq::new(tail);
        let b = b_from_a(&a, 6);
        prop_assert!(ab_recurrence_residual(&a, &b, 6).is_zero());
        prop_assert_eq!(a_from_b(&b, 6), a.clone());
        for n in 2..=6 {
            let mut ops = OpCounter::new();
            prop_assert_eq!(a_to_virial(&a, n, &mut ops), b_to_virial(&b, n, &mut ops));
        }
    }

    #[test]
    fn float_routes_track_exact(tail in rationals(4)) {
        let a = CoeffSeq::new(tail.clone());
        let af = CoeffSeq::new(tail.iter().map(|x| x.to_f64().unwrap()).collect());
        let mut ops = OpCounter::new();
        let exact = a_to_virial(&a, 5, &mut ops).to_f64().unwrap();
        let float = a_to_virial(&af, 5, &mut ops);
        prop_assert!((exact - float).abs() <= 1e-9 * (1.0 + exact.abs()));
    }
}

#[test]
fn canonical_classes_partition_all_graphs() {
    for n in 2..=6 {
        let mut sizes = std::collections::BTreeMap::new();
        for mask in 0..1u64 << pair_count(n) {
            *sizes.entry(canonical_mask(n, mask).unwrap()).or_insert(0u64) += 1;
        }
        assert_eq!(sizes.values().sum::<u64>(), 1 << pair_count(n));
        // graph counts on up to 6 vertices: 2, 4, 11, 34, 156
        assert_eq!(sizes.len(), [2, 4, 11, 34, 156][n - 2]);
    }
}

#[test]
fn star_is_the_only_complete_tree_class() {
    for n in 2..=8 {
        let complete: Vec<_> = enumerate_tr(n)
            .unwrap()
            .into_iter()
            .filter(|t| t.to_two_color_graph().is_complete())
            .collect();
        assert_eq!(complete.len(), 1, "n = {n}");
        assert_eq!(complete[0].height(), 1);
        assert_eq!(complete[0].multiplicity(), BigUint::from(1u32));
    }
}

#[test]
fn a_subset_is_a_subset() {
    for n in 2..=9 {
        let full: BTreeSet<_> = enumerate_tr(n).unwrap().into_iter().collect();
        let a = enumerate_tr0(n).unwrap();
        assert!(a.iter().all(|t| full.contains(t)));
    }
}
