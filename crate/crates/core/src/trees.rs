//! Classes of rooted labeled trees and the tree sums built from them.
//!
//! A rooted labeled tree on `V_n` (root `1`) is split into layers by distance
//! from the root. Within a layer, vertices are ranked by ascending label. Two
//! trees fall into the same class when they share the layer sizes, the
//! parent rank of every vertex in the intermediate layers, and the number of
//! last-layer children of each vertex of the next-to-last layer. The
//! completed graph label (tree edges as Mayer bonds, admissible pairs as
//! Boltzmann bonds) depends only on the class, so a tree sum needs one
//! integral per class weighted by the class size.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::criteria::{BaseLinearCombination, Domain};
use crate::error::{Error, Result};
use crate::graph::{canonical_two_color, pair_count, mask_from_edges, Edge, TwoColorGraph};
use crate::numbers::{binomial, factorial};

/// Largest order accepted by the constructive enumerators.
pub const MAX_ENUMERATION_ORDER: usize = 12;

/// Which trees a tree sum runs over: all classes (Mayer coefficients) or the
/// layer-restricted subset indexing the activity/density ratio series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subset {
    Full,
    ASubset,
}

/// A rooted labeled tree given by parent pointers; `parent[v]` for
/// `v in 2..=n`, index 0 and 1 unused.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    n: usize,
    parent: Vec<usize>,
}

impl LabeledTree {
    pub fn from_parents(n: usize, parent: Vec<usize>) -> Result<Self> {
        if parent.len() != n + 1 {
            return Err(Error::InvalidTreeClass(format!(
                "parent vector of length {} for n = {n}",
                parent.len()
            )));
        }
        for v in 2..=n {
            let p = parent[v];
            if p == 0 || p > n || p == v {
                return Err(Error::InvalidTreeClass(format!("bad parent {p} of vertex {v}")));
            }
        }
        let tree = LabeledTree { n, parent };
        for v in 2..=n {
            // walk to the root; more than n steps means a cycle
            let (mut u, mut steps) = (v, 0);
            while u != 1 {
                u = tree.parent[u];
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidTreeClass("parent pointers form a cycle".into()));
                }
            }
        }
        Ok(tree)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        (2..=self.n).map(|v| Edge::of(self.parent[v], v)).collect()
    }

    /// Root distance of every vertex; index 0 unused.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.n + 1];
        depth[1] = 0;
        fn resolve(tree: &LabeledTree, depth: &mut [usize], v: usize) -> usize {
            if depth[v] == usize::MAX {
                let d = resolve(tree, depth, tree.parent[v]) + 1;
                depth[v] = d;
            }
            depth[v]
        }
        for v in 2..=self.n {
            resolve(self, &mut depth, v);
        }
        depth[0] = 0;
        depth
    }

    /// Non-tree pairs that keep this tree as the breadth-first frame of the
    /// completed graph: all pairs inside one layer, plus pairs `{u, v}` with
    /// `v` one layer below `u` and `u` labeled above `v`'s parent.
    pub fn admissible_edges(&self) -> BTreeSet<Edge> {
        let depth = self.depths();
        let mut out = BTreeSet::new();
        for u in 2..=self.n {
            for v in 2..=self.n {
                if u < v && depth[u] == depth[v] {
                    out.insert(Edge::of(u, v));
                }
                if depth[v] == depth[u] + 1 && u > self.parent[v] {
                    out.insert(Edge::of(u, v));
                }
            }
        }
        out
    }

    pub fn completed_graph(&self) -> TwoColorGraph {
        TwoColorGraph::new(self.n, self.edges(), self.admissible_edges())
            .expect("a spanning tree covers every vertex")
    }
}

/// Every rooted labeled tree on `V_n` with root `1` (`n^(n-2)` of them).
pub fn all_labeled_trees(n: usize) -> Result<Vec<LabeledTree>> {
    Error::check_range("labeled tree enumeration", n, 1, 8)?;
    let mut out = Vec::new();
    let mut parent = vec![0usize; n + 1];
    fn fill(n: usize, v: usize, parent: &mut Vec<usize>, out: &mut Vec<LabeledTree>) {
        if v > n {
            if let Ok(t) = LabeledTree::from_parents(n, parent.clone()) {
                out.push(t);
            }
            return;
        }
        for p in 1..=n {
            if p != v {
                parent[v] = p;
                fill(n, v + 1, parent, out);
            }
        }
    }
    fill(n, 2, &mut parent, &mut out);
    Ok(out)
}

/// A class of rooted labeled trees (see the module docs).
///
/// `parents[k]` holds, for each vertex of layer `k + 2` in rank order, the
/// rank (1-based) of its parent in layer `k + 1`. `composition` has one entry
/// per vertex of layer `H - 1` (the root when `H = 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TreeClass {
    n: usize,
    layers: Vec<usize>,
    parents: Vec<Vec<usize>>,
    composition: Vec<usize>,
}

impl TreeClass {
    pub fn new(n: usize, layers: Vec<usize>, parents: Vec<Vec<usize>>, composition: Vec<usize>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidTreeClass(msg));
        let h = layers.len();
        if n < 2 || h == 0 {
            return bad(format!("need n >= 2 and at least one layer (n = {n})"));
        }
        if layers.contains(&0) || layers.iter().sum::<usize>() != n - 1 {
            return bad(format!("layer sizes {layers:?} must be positive and sum to {}", n - 1));
        }
        if parents.len() != h.saturating_sub(2) {
            return bad(format!("expected {} parent maps, got {}", h.saturating_sub(2), parents.len()));
        }
        for (k, map) in parents.iter().enumerate() {
            let (above, here) = (layers[k], layers[k + 1]);
            if map.len() != here || map.iter().any(|&r| r == 0 || r > above) {
                return bad(format!("parent map {map:?} does not fit layers {above} -> {here}"));
            }
        }
        let above = if h == 1 { 1 } else { layers[h - 2] };
        if composition.len() != above || composition.iter().sum::<usize>() != layers[h - 1] {
            return bad(format!(
                "composition {composition:?} must have {above} parts summing to {}",
                layers[h - 1]
            ));
        }
        Ok(TreeClass {
            n,
            layers,
            parents,
            composition,
        })
    }

    /// The class every tree in `tree`'s class maps to.
    pub fn from_labeled_tree(tree: &LabeledTree) -> Self {
        let n = tree.n();
        let depth = tree.depths();
        let h = (2..=n).map(|v| depth[v]).max().unwrap_or(0);
        // labels ascending within each layer give ranks
        let mut by_layer: Vec<Vec<usize>> = vec![Vec::new(); h + 1];
        for v in 1..=n {
            by_layer[depth[v]].push(v);
        }
        let mut rank = vec![0usize; n + 1];
        for layer in &by_layer {
            for (r, &v) in layer.iter().enumerate() {
                rank[v] = r + 1;
            }
        }
        let layers: Vec<usize> = by_layer[1..].iter().map(Vec::len).collect();
        let parents = (2..h)
            .map(|i| by_layer[i].iter().map(|&v| rank[tree.parent(v)]).collect())
            .collect();
        let mut composition = vec![0usize; by_layer[h - 1].len()];
        for &v in &by_layer[h] {
            composition[rank[tree.parent(v)] - 1] += 1;
        }
        TreeClass {
            n,
            layers,
            parents,
            composition,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn height(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn parents(&self) -> &[Vec<usize>] {
        &self.parents
    }

    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    /// First label used by each layer `0..=H` in the canonical labeling.
    fn layer_starts(&self) -> Vec<usize> {
        let mut starts = vec![1, 2];
        for &s in &self.layers {
            let last = *starts.last().unwrap();
            starts.push(last + s);
        }
        starts.pop();
        starts
    }

    /// Class representative: labels `2..=n` assigned layer by layer in rank
    /// order, last-layer children grouped by parent rank.
    pub fn canonical_labeling(&self) -> LabeledTree {
        let n = self.n;
        let h = self.height();
        let starts = self.layer_starts();
        let mut parent = vec![0usize; n + 1];
        if h >= 2 {
            for v in starts[1]..starts[1] + self.layers[0] {
                parent[v] = 1;
            }
        }
        for (k, map) in self.parents.iter().enumerate() {
            let layer = k + 2;
            for (r, &p) in map.iter().enumerate() {
                parent[starts[layer] + r] = starts[layer - 1] + p - 1;
            }
        }
        let mut next = starts[h];
        for (r, &c) in self.composition.iter().enumerate() {
            for _ in 0..c {
                parent[next] = starts[h - 1] + r;
                next += 1;
            }
        }
        LabeledTree { n, parent }
    }

    pub fn tree_edges(&self) -> BTreeSet<Edge> {
        self.canonical_labeling().edges()
    }

    pub fn admissible_edges(&self) -> BTreeSet<Edge> {
        self.canonical_labeling().admissible_edges()
    }

    pub fn admissible_count(&self) -> usize {
        self.admissible_edges().len()
    }

    /// Completed graph label: tree edges as Mayer bonds, admissible pairs as
    /// Boltzmann bonds.
    pub fn to_two_color_graph(&self) -> TwoColorGraph {
        self.canonical_labeling().completed_graph()
    }

    /// Number of labeled trees in the class:
    /// `(n-1)! / prod_{i<H} n(i)! / prod_r c_r!`.
    pub fn multiplicity(&self) -> BigUint {
        let h = self.height();
        let mut denom = BigUint::one();
        for &s in &self.layers[..h - 1] {
            denom *= factorial(s);
        }
        for &c in &self.composition {
            denom *= factorial(c);
        }
        factorial(self.n - 1) / denom
    }

    /// Membership in the subset indexing the activity/density ratio series:
    /// every layer but the root and the last has at least two vertices, and
    /// no non-root layer has its children hanging off its highest-ranked
    /// vertex alone.
    pub fn in_a_subset(&self) -> bool {
        let h = self.height();
        if self.layers[..h - 1].iter().any(|&s| s < 2) {
            return false;
        }
        let only_highest = |parents_of_children: &BTreeSet<usize>, size: usize| {
            parents_of_children.len() == 1 && parents_of_children.contains(&size)
        };
        // layers 1..=H-2 have their children described by the parent maps
        for (k, map) in self.parents.iter().enumerate() {
            let with_children: BTreeSet<usize> = map.iter().copied().collect();
            if only_highest(&with_children, self.layers[k]) {
                return false;
            }
        }
        if h >= 2 {
            let with_children: BTreeSet<usize> = self
                .composition
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(r, _)| r + 1)
                .collect();
            if only_highest(&with_children, self.layers[h - 2]) {
                return false;
            }
        }
        true
    }

    pub fn in_subset(&self, subset: Subset) -> bool {
        match subset {
            Subset::Full => true,
            Subset::ASubset => self.in_a_subset(),
        }
    }
}

/// Compositions of `total` into `parts` positive parts, lexicographic.
pub(crate) fn positive_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left < parts {
            return;
        }
        for first in 1..=left - (parts - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `total` into `parts` non-negative parts, lexicographic.
fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=left {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// All functions `[len] -> [1..=range]`, lexicographic.
fn all_maps(len: usize, range: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![1usize; len];
    loop {
        out.push(cur.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < range {
                cur[i] += 1;
                for c in &mut cur[i + 1..] {
                    *c = 1;
                }
                break;
            }
        }
    }
}

/// Every tree class on `V_n`, each exactly once, ordered by height, then
/// layer sizes, then parent maps, then last-layer composition.
pub fn enumerate_tr(n: usize) -> Result<Vec<TreeClass>> {
    Error::check_range("tree class enumeration", n, 2, MAX_ENUMERATION_ORDER)?;
    let mut out = Vec::new();
    for h in 1..n {
        for layers in positive_compositions(n - 1, h) {
            let above = if h == 1 { 1 } else { layers[h - 2] };
            let compositions = weak_compositions(layers[h - 1], above);
            let mut parents = Vec::new();
            push_classes(n, &layers, &compositions, &mut parents, &mut out);
        }
    }
    Ok(out)
}

// Chooses the parent map of intermediate layer `parents.len() + 2`, recursing
// until every intermediate layer has one.
fn push_classes(
    n: usize,
    layers: &[usize],
    compositions: &[Vec<usize>],
    parents: &mut Vec<Vec<usize>>,
    out: &mut Vec<TreeClass>,
) {
    let h = layers.len();
    let k = parents.len();
    if k + 2 >= h {
        for composition in compositions {
            out.push(TreeClass {
                n,
                layers: layers.to_vec(),
                parents: parents.clone(),
                composition: composition.clone(),
            });
        }
        return;
    }
    for map in all_maps(layers[k + 1], layers[k]) {
        parents.push(map);
        push_classes(n, layers, compositions, parents, out);
        parents.pop();
    }
}

pub fn enumerate_tr0(n: usize) -> Result<Vec<TreeClass>> {
    Ok(enumerate_tr(n)?.into_iter().filter(TreeClass::in_a_subset).collect())
}

pub fn enumerate(n: usize, subset: Subset) -> Result<Vec<TreeClass>> {
    match subset {
        Subset::Full => enumerate_tr(n),
        Subset::ASubset => enumerate_tr0(n),
    }
}

/// Closed-form number of tree classes on `V_n`.
pub fn count_tr(n: usize) -> BigUint {
    assert!(n >= 2, "count_tr needs n >= 2");
    let mut total = BigUint::one() + (BigUint::one() << (n - 2)) - BigUint::one();
    for h in 3..n {
        for layers in positive_compositions(n - 1, h) {
            let mut term = binomial(layers[h - 2] + layers[h - 1] - 1, layers[h - 1]);
            for i in 1..h - 1 {
                term *= BigUint::from(layers[i - 1]).pow(layers[i] as u32);
            }
            total += term;
        }
    }
    total
}

/// Closed-form number of classes in the activity/density subset.
pub fn count_tr0(n: usize) -> BigUint {
    assert!(n >= 2, "count_tr0 needs n >= 2");
    let max_h = n / 2; // ceil((n - 1) / 2)
    let mut total = BigUint::one();
    for h in 2..=max_h {
        for layers in positive_compositions(n - 1, h) {
            if layers[..h - 1].iter().any(|&s| s < 2) {
                continue;
            }
            let mut term = binomial(layers[h - 2] + layers[h - 1] - 1, layers[h - 1]) - BigUint::one();
            for i in 1..h - 1 {
                term *= BigUint::from(layers[i - 1]).pow(layers[i] as u32) - BigUint::one();
            }
            total += term;
        }
    }
    total
}

/// A tree sum: `prefactor * sum_t multiplicity(t) * I(t)` over a domain.
#[derive(Debug, Clone)]
pub struct TreeSum {
    pub n: usize,
    pub subset: Subset,
    pub entries: Vec<(TreeClass, BigUint)>,
    pub prefactor: BigRational,
    pub domain: Domain,
}

pub fn tree_sum(n: usize, subset: Subset, domain: Domain) -> Result<TreeSum> {
    let entries = enumerate(n, subset)?
        .into_iter()
        .map(|t| {
            let m = t.multiplicity();
            (t, m)
        })
        .collect();
    Ok(TreeSum {
        n,
        subset,
        entries,
        prefactor: BigRational::new(1.into(), factorial(n).into()),
        domain,
    })
}

impl TreeSum {
    pub fn total_multiplicity(&self) -> BigUint {
        self.entries.iter().fold(BigUint::zero(), |acc, (_, m)| acc + m)
    }

    pub fn to_combination(&self) -> BaseLinearCombination {
        let entries = self
            .entries
            .iter()
            .map(|(t, m)| {
                (
                    t.to_two_color_graph(),
                    &self.prefactor * BigRational::from_integer(m.clone().into()),
                )
            })
            .collect();
        BaseLinearCombination::new(self.n, self.domain, entries).expect("tree sums are base linear combinations")
    }
}

/// How often the frame expansion `prod_tree f * prod_admissible (1 + f)`,
/// taken over every labeled rooted tree on `V_n`, produces each edge mask.
/// Connected masks should be hit exactly once and all others never.
pub fn frame_coverage(n: usize) -> Result<Vec<u32>> {
    Error::check_range("frame coverage", n, 2, 6)?;
    let mut hits = vec![0u32; 1 << pair_count(n)];
    for tree in all_labeled_trees(n)? {
        let t = mask_from_edges(n, &tree.edges());
        let adm = mask_from_edges(n, &tree.admissible_edges());
        let mut sub = adm;
        loop {
            hits[(t | sub) as usize] += 1;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & adm;
        }
    }
    Ok(hits)
}

/// Number of classes whose labeled trees disagree with the class: group
/// size differs from the multiplicity or some completed label is not
/// isomorphic to the class label.
pub fn class_consistency_failures(n: usize) -> Result<usize> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<TreeClass, Vec<LabeledTree>> = BTreeMap::new();
    for tree in all_labeled_trees(n)? {
        groups.entry(TreeClass::from_labeled_tree(&tree)).or_default().push(tree);
    }
    let mut failures = 0;
    for (class, members) in &groups {
        let key = canonical_two_color(&class.to_two_color_graph())?;
        let sized = BigUint::from(members.len()) == class.multiplicity();
        let same = members
            .iter()
            .all(|t| canonical_two_color(&t.completed_graph()).map(|k| k == key).unwrap_or(false));
        if !(sized && same) {
            failures += 1;
        }
    }
    if groups.len() != enumerate_tr(n)?.len() {
        failures += 1;
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_set;

    fn class(n: usize, layers: &[usize], parents: &[&[usize]], comp: &[usize]) -> TreeClass {
        TreeClass::new(
            n,
            layers.to_vec(),
            parents.iter().map(|p| p.to_vec()).collect(),
            comp.to_vec(),
        )
        .unwrap()
    }

    fn star(n: usize) -> TreeClass {
        class(n, &[n - 1], &[], &[n - 1])
    }

    #[test]
    fn canonical_labelings() {
        assert_eq!(star(3).tree_edges(), edge_set([(1, 2), (1, 3)]).unwrap());
        let chain = class(3, &[1, 1], &[], &[1]);
        assert_eq!(chain.tree_edges(), edge_set([(1, 2), (2, 3)]).unwrap());
        let t = class(4, &[2, 1], &[], &[1, 0]);
        assert_eq!(t.tree_edges(), edge_set([(1, 2), (1, 3), (2, 4)]).unwrap());
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(star(3).admissible_edges(), edge_set([(2, 3)]).unwrap());
        assert!(class(3, &[1, 1], &[], &[1]).admissible_edges().is_empty());
        let total: usize = enumerate_tr(4).unwrap().iter().map(TreeClass::admissible_count).sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn multiplicities() {
        for n in 2..8 {
            assert_eq!(star(n).multiplicity(), BigUint::one());
        }
        assert_eq!(class(3, &[1, 1], &[], &[1]).multiplicity(), BigUint::from(2u32));
        assert_eq!(class(5, &[2, 2], &[], &[2, 0]).multiplicity(), BigUint::from(6u32));
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_tr(2).unwrap().len(), 1);
        assert_eq!(enumerate_tr(4).unwrap().len(), 5);
        assert_eq!(enumerate_tr0(3).unwrap(), vec![star(3)]);
        assert_eq!(enumerate_tr0(4).unwrap().len(), 2);
        assert!(enumerate_tr(1).is_err());
        assert!(enumerate_tr(13).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(count_tr(3), 2u32.into());
        assert_eq!(count_tr(6), 44u32.into());
        assert_eq!(count_tr(9), 2852u32.into());
        assert_eq!(count_tr0(2), 1u32.into());
        assert_eq!(count_tr0(7), 55u32.into());
        assert_eq!(count_tr0(10), 6213u32.into());
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        for n in 2..=8 {
            let classes = enumerate_tr(n).unwrap();
            let mut sorted = classes.clone();
            sorted.sort_by(|a, b| {
                (a.height(), &a.layers, &a.parents, &a.composition).cmp(&(b.height(), &b.layers, &b.parents, &b.composition))
            });
            assert_eq!(sorted, classes, "n = {n}");
            let distinct: BTreeSet<_> = classes.iter().collect();
            assert_eq!(distinct.len(), classes.len());
        }
    }

    #[test]
    fn tree_sum_n3() {
        let full = tree_sum(3, Subset::Full, Domain::ImproperSpace).unwrap();
        let mults: Vec<(usize, u32)> = full
            .entries
            .iter()
            .map(|(t, m)| (t.height(), u32::try_from(m.clone()).unwrap()))
            .collect();
        assert_eq!(mults, vec![(1, 1), (2, 2)]);
        let a = tree_sum(3, Subset::ASubset, Domain::ImproperSpace).unwrap();
        assert_eq!(a.entries.len(), 1);
        assert_eq!(tree_sum(5, Subset::Full, Domain::ImproperSpace).unwrap().total_multiplicity(), 125u32.into());
    }

    #[test]
    fn class_roundtrip_through_labeling() {
        for n in 2..=7 {
            for t in enumerate_tr(n).unwrap() {
                assert_eq!(TreeClass::from_labeled_tree(&t.canonical_labeling()), t);
            }
        }
    }

    #[test]
    fn frame_oracle_small() {
        for n in 2..=4 {
            let hits = frame_coverage(n).unwrap();
            for (m, &h) in hits.iter().enumerate() {
                assert_eq!(h, crate::graph::is_connected_mask(n, m as u64) as u32, "n={n} mask={m:b}");
            }
            assert_eq!(class_consistency_failures(n).unwrap(), 0);
        }
    }

    #[test]
    fn invalid_classes() {
        assert!(TreeClass::new(4, vec![2, 2], vec![], vec![1, 1]).is_err());
        assert!(TreeClass::new(4, vec![1, 1, 1], vec![vec![2]], vec![1]).is_err());
        assert!(TreeClass::new(4, vec![3], vec![], vec![2]).is_err());
    }
}
