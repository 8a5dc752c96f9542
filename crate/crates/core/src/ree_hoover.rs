//! Ree-Hoover diagrams: complete graphs whose edges are split into Mayer
//! bonds `f` and Boltzmann bonds `f~ = 1 + f`.
//!
//! Writing every missing bond of a block as `1 = f~ - f` turns the block sum
//! into a sum over f-edge sets `F` weighted by the star content
//! `SC(F) = sum_{B subset F spanning block} (-1)^(|F| - |B|)`. A diagram is an
//! isomorphism class of `F` with nonzero star content.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{BaseLinearCombination, CombinationSummary, Domain};
use crate::error::{Error, Result};
use crate::graph::{
    all_pairs, canonical_mask, edges_from_mask, is_biconnected_mask, mask_from_edges, pair_count, CanonicalKey, Edge,
    PermutationTable, TwoColorGraph,
};
use crate::mc::{estimate_graph_sum, Estimate};
use crate::numbers::factorial;
use crate::potential::PairPotential;

/// Largest order handled by the mask-table enumeration.
pub const MAX_RH_ORDER: usize = 7;

/// Published diagram counts for `n = 2..=10`.
pub const RH_REFERENCE_COUNTS: [u64; 9] = [1, 1, 2, 5, 23, 171, 2606, 81564, 4980756];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhDiagram {
    pub n: usize,
    #[serde(rename = "f_edges")]
    pub mayer_edges: BTreeSet<Edge>,
    pub star_content: i64,
    pub class_size: u64,
    #[serde(skip)]
    pub key: CanonicalKey,
}

impl RhDiagram {
    /// Mayer bonds on the f-edges, Boltzmann bonds on the rest of `K_n`.
    pub fn graph(&self) -> TwoColorGraph {
        complete_label(self.n, &self.mayer_edges)
    }
}

fn complete_label(n: usize, f_edges: &BTreeSet<Edge>) -> TwoColorGraph {
    let rest: Vec<Edge> = all_pairs(n).into_iter().filter(|e| !f_edges.contains(e)).collect();
    TwoColorGraph::new(n, f_edges.iter().copied(), rest).expect("a complete label covers every vertex")
}

/// Star content by direct enumeration of the sub-edge-sets of `f_edges`.
pub fn star_content(f_edges: &BTreeSet<Edge>, n: usize) -> Result<i64> {
    Error::check_range("star content", n, 2, MAX_RH_ORDER)?;
    if let Some(e) = f_edges.iter().find(|e| e.v() > n) {
        return Err(Error::VertexOutOfRange { vertex: e.v(), n });
    }
    let full = mask_from_edges(n, f_edges);
    let size = full.count_ones();
    let mut total = 0i64;
    let mut sub = full;
    loop {
        if is_biconnected_mask(n, sub) {
            total += if (size - sub.count_ones()) % 2 == 0 { 1 } else { -1 };
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & full;
    }
    Ok(total)
}

/// Star content of every f-edge mask on `V_n`, indexed by mask.
///
/// Seeds the block indicator and applies the subset Moebius transform one
/// edge bit at a time.
pub fn star_content_table(n: usize) -> Result<Vec<i32>> {
    Error::check_range("star content table", n, 2, MAX_RH_ORDER)?;
    let edges = pair_count(n);
    let size = 1usize << edges;
    // a block on n >= 3 vertices has at least n edges
    let min_edges = if n == 2 { 1 } else { n as u32 };
    let mut g: Vec<i32> = (0..size as u64)
        .into_par_iter()
        .map(|m| (m.count_ones() >= min_edges && is_biconnected_mask(n, m)) as i32)
        .collect();
    for bit in 0..edges {
        let half = 1usize << bit;
        g.par_chunks_mut(half * 2).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h -= *l;
            }
        });
    }
    Ok(g)
}

/// Orbits of the masks on `V_n` accepted by `keep`, as (smallest mask,
/// orbit size), ascending.
pub(crate) fn mask_classes(n: usize, keep: impl Fn(u64) -> bool) -> Result<Vec<(u64, u64)>> {
    Error::check_range("mask classes", n, 2, MAX_RH_ORDER)?;
    let size = 1u64 << pair_count(n);
    let table = PermutationTable::get(n);
    let mut seen = vec![false; size as usize];
    let mut out = Vec::new();
    for mask in 0..size {
        if seen[mask as usize] || !keep(mask) {
            continue;
        }
        let mut orbit: Vec<u64> = table.images(mask).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &m in &orbit {
            seen[m as usize] = true;
        }
        out.push((mask, orbit.len() as u64));
    }
    Ok(out)
}

/// Isomorphism classes of f-edge sets with nonzero star content.
pub fn enumerate_rh_diagrams(n: usize) -> Result<Vec<RhDiagram>> {
    Error::check_range("Ree-Hoover enumeration", n, 2, MAX_RH_ORDER)?;
    let sc = star_content_table(n)?;
    let classes = mask_classes(n, |m| sc[m as usize] != 0)?;
    Ok(classes
        .into_iter()
        .map(|(mask, class_size)| RhDiagram {
            n,
            mayer_edges: edges_from_mask(n, mask),
            star_content: sc[mask as usize] as i64,
            class_size,
            key: CanonicalKey { n: n as u8, mask },
        })
        .collect())
}

pub fn rh_reference_count(n: usize) -> Result<u64> {
    Error::check_range("Ree-Hoover reference count", n, 2, 10)?;
    Ok(RH_REFERENCE_COUNTS[n - 2])
}

/// Whether a combination has one entry per labeled diagram or one per
/// isomorphism class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhView {
    Labeled,
    Classes,
}

fn rh_coefficient(n: usize, sc: i64, weight: u64) -> BigRational {
    BigRational::new(
        (-(n as i64 - 1) * sc * weight as i64).into(),
        factorial(n).into(),
    )
}

/// `B_n` over the box `Lambda^n` as a combination of complete labels with
/// coefficients `-(n-1)/n! * SC` (times the class size in the class view).
pub fn rh_linear_combination(n: usize, box_side: f64, view: RhView) -> Result<BaseLinearCombination> {
    Error::check_range("Ree-Hoover combination", n, 2, MAX_RH_ORDER)?;
    let domain = Domain::BoundedBox { side: box_side };
    let entries = match view {
        RhView::Classes => enumerate_rh_diagrams(n)?
            .into_iter()
            .map(|d| {
                let c = rh_coefficient(n, d.star_content, d.class_size);
                (d.graph(), c)
            })
            .collect(),
        RhView::Labeled => {
            let sc = star_content_table(n)?;
            sc.iter()
                .enumerate()
                .filter(|(_, &s)| s != 0)
                .map(|(mask, &s)| {
                    let label = complete_label(n, &edges_from_mask(n, mask as u64));
                    (label, rh_coefficient(n, s as i64, 1))
                })
                .collect()
        }
    };
    BaseLinearCombination::new(n, domain, entries)
}

/// Criterion totals of the class-view combination, from the enumeration
/// for `n <= 7` and from the published counts above that. Every label is
/// complete, so the edge total is `count * n(n-1)/2`.
pub fn rh_summary(n: usize, box_side: f64) -> Result<CombinationSummary> {
    let count = if n <= MAX_RH_ORDER {
        enumerate_rh_diagrams(n)?.len() as u64
    } else {
        rh_reference_count(n)?
    };
    Ok(CombinationSummary {
        n,
        domain: Domain::BoundedBox { side: box_side },
        length: count,
        edge_total: count * pair_count(n) as u64,
        n1_total: None,
    })
}

/// Number of edge masks where re-expanding `sum_F SC(F) prod_F f prod_rest (1+f)`
/// fails to give coefficient 1 on blocks and 0 elsewhere. Uses the direct
/// star content, independent of the transform table.
pub fn rh_expansion_mismatches(n: usize) -> Result<usize> {
    Error::check_range("Ree-Hoover expansion check", n, 2, 5)?;
    let size = 1u64 << pair_count(n);
    let direct: Vec<i64> = (0..size)
        .map(|m| star_content(&edges_from_mask(n, m), n))
        .collect::<Result<_>>()?;
    let mut bad = 0;
    for e in 0..size {
        // coefficient of prod_{e} f collects SC(F) for every F inside e
        let mut coeff = 0i64;
        let mut sub = e;
        loop {
            coeff += direct[sub as usize];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & e;
        }
        if coeff != is_biconnected_mask(n, e) as i64 {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Monte Carlo `B_n = -((n-1)/n!) sum_{labeled blocks B} int prod_B f`,
/// one integral per block class weighted by its labeled count.
#[allow(non_snake_case)]
pub fn mayer_oracle_Bn(n: usize, potential: &PairPotential, samples: u64, seed: u64) -> Result<Estimate> {
    Error::check_range("block-sum oracle", n, 2, 4)?;
    let classes = mask_classes(n, |m| is_biconnected_mask(n, m))?;
    let graphs: Vec<(u64, f64)> = classes.iter().map(|&(m, c)| (m, c as f64)).collect();
    let scale = -((n - 1) as f64) / factorial(n).to_f64().unwrap();
    Ok(estimate_graph_sum("B-block-oracle", n, &graphs, scale, potential, samples, seed))
}

/// Canonical key of an f-edge set, for looking diagrams up.
pub fn diagram_key(f_edges: &BTreeSet<Edge>, n: usize) -> Result<CanonicalKey> {
    canonical_mask(n, mask_from_edges(n, f_edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_set;

    fn k(n: usize) -> BTreeSet<Edge> {
        all_pairs(n).into_iter().collect()
    }

    #[test]
    fn small_star_contents() {
        assert_eq!(star_content(&k(3), 3).unwrap(), 1);
        assert_eq!(star_content(&k(4), 4).unwrap(), -2);
        let c4 = edge_set([(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert_eq!(star_content(&c4, 4).unwrap(), 1);
        let mut k4e = k(4);
        k4e.remove(&Edge::new(1, 3).unwrap());
        assert_eq!(star_content(&k4e, 4).unwrap(), 0);
        let isolated = edge_set([(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(star_content(&isolated, 4).unwrap(), 0);
        assert!(star_content(&k(3), 8).is_err());
    }

    #[test]
    fn table_agrees_with_direct() {
        for n in 2..=5 {
            let table = star_content_table(n).unwrap();
            for (m, &v) in table.iter().enumerate() {
                assert_eq!(v as i64, star_content(&edges_from_mask(n, m as u64), n).unwrap());
            }
        }
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (2..=5).map(|n| enumerate_rh_diagrams(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
        let d4 = enumerate_rh_diagrams(4).unwrap();
        let sizes: Vec<(i64, u64)> = d4.iter().map(|d| (d.star_content, d.class_size)).collect();
        assert_eq!(sizes, vec![(1, 3), (-2, 1)]);
        assert_eq!(diagram_key(&d4[1].mayer_edges, 4).unwrap(), d4[1].key);
    }

    #[test]
    fn combinations() {
        let l2 = rh_linear_combination(2, 1.0, RhView::Classes).unwrap();
        assert_eq!(l2.entries()[0].1, BigRational::new((-1).into(), 2.into()));
        let l3 = rh_linear_combination(3, 1.0, RhView::Labeled).unwrap();
        assert_eq!(l3.len(), 1);
        assert!(l3.entries()[0].0.boltzmann_edges().is_empty());
        assert!(l3.is_complete());
        let labeled = rh_linear_combination(4, 1.0, RhView::Labeled).unwrap();
        assert_eq!(labeled.len(), 4);
    }

    #[test]
    fn expansion_oracle_small() {
        for n in 2..=4 {
            assert_eq!(rh_expansion_mismatches(n).unwrap(), 0);
        }
    }

    #[test]
    fn reference_counts() {
        assert_eq!(rh_reference_count(9).unwrap(), 81564);
        assert_eq!(rh_reference_count(10).unwrap(), 4980756);
        assert!(rh_reference_count(11).is_err());
    }
}
