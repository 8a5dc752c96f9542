use std::f64::consts::PI;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vlab_core::criteria::{compare, BaseSet, Comparand, Criterion, Domain, Verdict};
use vlab_core::mc::{
    connected_graph_oracle_b, estimate_B, estimate_b, estimate_tree_integral, estimate_tree_sum, Allocation,
};
use vlab_core::potential::PairPotential;
use vlab_core::ree_hoover::{mayer_oracle_Bn, rh_linear_combination, rh_summary, RhView};
use vlab_core::series::{b_to_virial, CoeffSeq, OpCounter, Route};
use vlab_core::trees::{enumerate_tr, tree_sum, Subset};

const SEED: u64 = 1729;
const V: f64 = 4.0 * PI / 3.0;

fn hs(dim: usize) -> PairPotential {
    PairPotential::hard_sphere(1.0, dim).unwrap()
}

fn within(mean: f64, stderr: f64, want: f64, k: f64) -> bool {
    (mean - want).abs() <= k * stderr
}

/// `int f12 f13 f23` for unit hard spheres as `-int_{|d|<1} lens(|d|)`,
/// by composite Simpson on the lens volume of two unit balls at distance d.
fn triangle() -> f64 {
    let lens = |d: f64| PI * (4.0 + d) * (2.0 - d).powi(2) / 12.0;
    let f = |d: f64| 4.0 * PI * d * d * lens(d);
    let steps = 1000;
    let h = 1.0 / steps as f64;
    let inner: f64 = (1..steps).map(|i| f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    -(f(0.0) + f(1.0) + inner) * h / 3.0
}

#[test]
fn triangle_quadrature_matches_closed_form() {
    assert!((triangle() + 5.0 * PI * PI / 6.0).abs() < 1e-10);
}

#[test]
fn star_and_chain_integrals_at_n3() {
    let classes = enumerate_tr(3).unwrap();
    let star = classes.iter().find(|t| t.height() == 1).unwrap();
    let chain = classes.iter().find(|t| t.height() == 2).unwrap();
    let e = estimate_tree_integral(star, &hs(3), 1_000_000, SEED);
    assert!(within(e.mean, e.stderr, V * V + triangle(), 3.0), "{} +- {}", e.mean, e.stderr);
    let e = estimate_tree_integral(chain, &hs(3), 10_000, SEED);
    assert_eq!(e.stderr, 0.0);
    assert!((e.mean - V * V).abs() < 1e-12);
}

#[test]
fn bond_sampler_mean_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = 400_000;
    let lengths: Vec<f64> = (0..n)
        .map(|_| {
            let (d, _) = hs(3).sample_bond(&mut rng);
            (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
        })
        .collect();
    let mean = lengths.iter().sum::<f64>() / n as f64;
    let var = lengths.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    // |r| of a uniform point in the unit ball has density 3r^2: mean 3/4
    assert!(within(mean, (var / n as f64).sqrt(), 0.75, 4.0), "{mean}");
}

#[test]
fn b3_tree_sum_matches_connected_graph_sum() {
    let exact = (3.0 * V * V + triangle()) / 6.0;
    let trees = estimate_b(3, &hs(3), 1_000_000, SEED).unwrap();
    let graphs = connected_graph_oracle_b(3, &hs(3), 1_000_000, SEED + 1).unwrap();
    assert!(within(trees.mean, trees.stderr, exact, 3.0), "{} +- {}", trees.mean, trees.stderr);
    assert!(within(graphs.mean, graphs.stderr, exact, 3.0), "{} +- {}", graphs.mean, graphs.stderr);
    let combined = (trees.stderr.powi(2) + graphs.stderr.powi(2)).sqrt();
    assert!(within(trees.mean, combined, graphs.mean, 3.0));
}

#[test]
fn block_sum_oracle() {
    let b2 = mayer_oracle_Bn(2, &hs(3), 1000, SEED).unwrap();
    assert_eq!(b2.stderr, 0.0);
    assert!((b2.mean - 2.0 * PI / 3.0).abs() < 1e-12);
    let b3 = mayer_oracle_Bn(3, &hs(3), 1_000_000, SEED).unwrap();
    assert!(within(b3.mean, b3.stderr, -triangle() / 3.0, 3.0), "{} +- {}", b3.mean, b3.stderr);
}

#[test]
fn square_well_b2() {
    let (lambda, beta_eps) = (1.5f64, 0.7f64);
    let sw = PairPotential::square_well(1.0, 3, lambda, beta_eps).unwrap();
    let want = 0.5 * V * (-1.0 + (beta_eps.exp() - 1.0) * (lambda.powi(3) - 1.0));
    let e = estimate_b(2, &sw, 1_000_000, SEED).unwrap();
    assert!(e.stderr > 0.0);
    assert!(within(e.mean, e.stderr, want, 3.0), "{} +- {} vs {want}", e.mean, e.stderr);
}

#[test]
fn hard_disks_b3() {
    // B_3 / B_2^2 = 4/3 - sqrt(3)/pi for hard disks
    let want = 4.0 / 3.0 - 3f64.sqrt() / PI;
    let b2 = PI / 2.0;
    for route in [Route::A, Route::B] {
        let e = estimate_B(3, route, &hs(2), 500_000, SEED).unwrap().estimate;
        let (r, se) = (e.mean / (b2 * b2), e.stderr / (b2 * b2));
        assert!(within(r, se, want, 3.0), "{route:?}: {r} +- {se} vs {want}");
    }
}

#[test]
fn hard_rods_virial_coefficients() {
    // Tonks gas: B_n = sigma^(n-1) for every n
    for n in 2..=5 {
        let e = estimate_B(n, Route::A, &hs(1), 200_000, SEED).unwrap().estimate;
        assert!(within(e.mean, e.stderr.max(1e-12), 1.0, 3.0), "n={n}: {} +- {}", e.mean, e.stderr);
    }
}

#[test]
fn exact_mayer_formula_at_low_order() {
    // hard spheres: b2 = -V/2, b3 = (3V^2 + T)/6; the b-route gives B3 = -T/3
    let t = triangle();
    let b = CoeffSeq::new(vec![-V / 2.0, (3.0 * V * V + t) / 6.0]);
    let mut ops = OpCounter::new();
    let b3 = b_to_virial(&b, 3, &mut ops);
    assert!((b3 / (V / 2.0).powi(2) - 0.625).abs() < 1e-9);
}

#[test]
fn pair_evaluations_follow_the_cost_model() {
    for (subset, n) in [(Subset::Full, 5), (Subset::ASubset, 6)] {
        let est = estimate_tree_sum(n, subset, &hs(3), Allocation::PerClass(100), SEED).unwrap();
        let classes = vlab_core::trees::enumerate(n, subset).unwrap();
        for (c, t) in est.classes.iter().zip(&classes) {
            assert_eq!(c.admissible, t.admissible_count());
            assert_eq!(c.pair_evals, 100 * (n as u64 - 1 + t.admissible_count() as u64));
        }
    }
}

fn set_over_box(n: usize, side: f64) -> BaseSet {
    BaseSet::new(
        (2..=n)
            .map(|k| tree_sum(k, Subset::Full, Domain::BoundedBox { side }).unwrap().to_combination())
            .collect(),
    )
    .unwrap()
}

#[test]
fn tree_set_against_ree_hoover() {
    let rh5 = rh_linear_combination(5, 1.0, RhView::Classes).unwrap();
    let c = compare(Comparand::from(&set_over_box(5, 1.0)), Comparand::from(&rh5), Criterion::Cr2).unwrap();
    assert_eq!((c.left, c.right), (121, 50));
    assert_eq!(c.verdict, Verdict::ConsiderablyMoreComplicated);

    let rh10 = rh_summary(10, 1.0).unwrap();
    let c = compare(Comparand::from(&set_over_box(10, 1.0)), Comparand::from(&rh10), Criterion::Cr1).unwrap();
    assert_eq!((c.left, c.right), (17756, 4980756));
    assert_eq!(c.verdict, Verdict::ConsiderablySimpler);

    // tree sums over the same box as the diagram sum are comparable at every n
    for n in 2..=6 {
        let l = tree_sum(n, Subset::Full, Domain::BoundedBox { side: 2.0 }).unwrap().to_combination();
        let r = rh_linear_combination(n, 2.0, RhView::Labeled).unwrap();
        assert!(vlab_core::criteria::is_comparable(Comparand::from(&l), Comparand::from(&r)));
    }
    // but not over different boxes, nor against an improper set
    let r = rh_linear_combination(4, 2.0, RhView::Labeled).unwrap();
    assert!(compare(Comparand::from(&set_over_box(4, 1.0)), Comparand::from(&r), Criterion::Cr1).is_err());
}

#[test]
fn ree_hoover_views_share_coefficient_mass() {
    // summing coefficients over labeled diagrams and over class
    // representatives (weighted by class size) must agree
    for n in 2..=6 {
        let sum = |v| -> BigRational {
            rh_linear_combination(n, 1.0, v).unwrap().entries().iter().map(|(_, c)| c.clone()).sum()
        };
        assert_eq!(sum(RhView::Labeled), sum(RhView::Classes), "n = {n}");
    }
}
