//! Edges, two-color graph labels and the small-graph predicates used by the
//! enumerators.
//!
//! Vertices are the labels `1..=n`. Edge sets of graphs with at most
//! [`MAX_MASK_VERTICES`] vertices are also handled as bit masks over the pair
//! order `{1,2}, {1,3}, .., {1,n}, {2,3}, ..`; see [`edge_index`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count a [`TwoColorGraph`] may have.
pub const MAX_VERTICES: usize = 16;
/// Largest vertex count for which edge sets fit a `u64` mask.
pub const MAX_MASK_VERTICES: usize = 11;
/// Largest vertex count accepted by [`canonical_form`].
pub const MAX_CANONICAL_VERTICES: usize = 8;

/// An unordered pair of distinct vertex labels, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: u8,
    v: u8,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b || a == 0 || b == 0 || a > MAX_VERTICES || b > MAX_VERTICES {
            return Err(Error::InvalidEdge(a, b));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(Edge {
            u: u as u8,
            v: v as u8,
        })
    }

    /// Panicking constructor for labels already known to be valid.
    pub(crate) fn of(a: usize, b: usize) -> Self {
        Edge::new(a, b).expect("valid edge")
    }

    pub fn u(self) -> usize {
        self.u as usize
    }

    pub fn v(self) -> usize {
        self.v as usize
    }

    pub fn touches(self, vertex: usize) -> bool {
        self.u() == vertex || self.v() == vertex
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.u, self.v)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.u, self.v].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[usize; 2]>::deserialize(d)?;
        Edge::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// Convenience for building edge sets from literal pairs.
pub fn edge_set<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<BTreeSet<Edge>> {
    pairs.into_iter().map(|(a, b)| Edge::new(a, b)).collect()
}

/// Number of vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit position of `{u, v}` in an edge mask on `n` vertices (1-based labels).
pub fn edge_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(u >= 1 && v <= n && u < v);
    // Pairs starting at 1..u-1 come first.
    (u - 1) * n - (u - 1) * u / 2 + (v - u - 1)
}

/// All pairs on `n` vertices in mask order.
pub fn all_pairs(n: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(pair_count(n));
    for u in 1..=n {
        for v in u + 1..=n {
            out.push(Edge::of(u, v));
        }
    }
    out
}

pub fn mask_from_edges<'a, I: IntoIterator<Item = &'a Edge>>(n: usize, edges: I) -> u64 {
    assert!(n <= MAX_MASK_VERTICES, "edge masks support at most {MAX_MASK_VERTICES} vertices");
    edges
        .into_iter()
        .fold(0u64, |m, e| m | 1u64 << edge_index(n, e.u(), e.v()))
}

pub fn edges_from_mask(n: usize, mask: u64) -> BTreeSet<Edge> {
    all_pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect()
}

/// Adjacency rows: bit `j` of `rows[i]` is set when vertices `i+1` and `j+1`
/// are joined.
#[derive(Debug, Clone, Copy)]
struct Adjacency {
    n: usize,
    rows: [u16; MAX_VERTICES],
}

impl Adjacency {
    fn from_edges<'a, I: IntoIterator<Item = &'a Edge>>(n: usize, edges: I) -> Self {
        let mut rows = [0u16; MAX_VERTICES];
        for e in edges {
            let (a, b) = (e.u() - 1, e.v() - 1);
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        Adjacency { n, rows }
    }

    fn from_mask(n: usize, mask: u64) -> Self {
        let mut rows = [0u16; MAX_VERTICES];
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if mask >> bit & 1 == 1 {
                    rows[a] |= 1 << b;
                    rows[b] |= 1 << a;
                }
                bit += 1;
            }
        }
        Adjacency { n, rows }
    }

    /// Whether the vertices in `alive` form one component, using only edges
    /// inside `alive`.
    fn connected_within(&self, alive: u16) -> bool {
        if alive == 0 {
            return true;
        }
        let start = alive.trailing_zeros() as usize;
        let mut seen = 1u16 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.rows[v] & alive & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == alive
    }

    fn all(&self) -> u16 {
        ((1u32 << self.n) - 1) as u16
    }

    fn connected(&self) -> bool {
        self.n >= 1 && self.connected_within(self.all())
    }

    fn biconnected(&self) -> bool {
        match self.n {
            0 | 1 => false,
            2 => self.rows[0] & 0b10 != 0,
            _ => {
                let all = self.all();
                self.connected_within(all)
                    && (0..self.n).all(|v| self.connected_within(all & !(1 << v)))
            }
        }
    }
}

/// Whether the graph `(V_n, edges)` is connected. Isolated vertices count.
pub fn is_connected_edges<'a, I: IntoIterator<Item = &'a Edge>>(edges: I, n: usize) -> bool {
    Adjacency::from_edges(n, edges).connected()
}

pub fn is_connected_mask(n: usize, mask: u64) -> bool {
    Adjacency::from_mask(n, mask).connected()
}

/// Block test on `V_n`: connected, spanning and free of cut vertices. The
/// single edge on two vertices counts as a block.
pub fn is_biconnected<'a, I: IntoIterator<Item = &'a Edge>>(edges: I, n: usize) -> bool {
    n <= MAX_VERTICES && Adjacency::from_edges(n, edges).biconnected()
}

pub fn is_biconnected_mask(n: usize, mask: u64) -> bool {
    Adjacency::from_mask(n, mask).biconnected()
}

/// Which edges take part in a connectivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    MayerOnly,
    Both,
}

/// A graph on `V_n` whose edges carry either a Mayer or a Boltzmann label.
///
/// Construction enforces the canonical-pair conditions: disjoint edge sets,
/// endpoints inside `V_n`, and every vertex covered by some edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct TwoColorGraph {
    n: usize,
    mayer: BTreeSet<Edge>,
    boltzmann: BTreeSet<Edge>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    mayer: Vec<Edge>,
    boltzmann: Vec<Edge>,
}

impl TryFrom<RawGraph> for TwoColorGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        TwoColorGraph::new(raw.n, raw.mayer, raw.boltzmann)
    }
}

impl From<TwoColorGraph> for RawGraph {
    fn from(g: TwoColorGraph) -> Self {
        RawGraph {
            n: g.n,
            mayer: g.mayer.into_iter().collect(),
            boltzmann: g.boltzmann.into_iter().collect(),
        }
    }
}

impl TwoColorGraph {
    pub fn new<M, B>(n: usize, mayer: M, boltzmann: B) -> Result<Self>
    where
        M: IntoIterator<Item = Edge>,
        B: IntoIterator<Item = Edge>,
    {
        if n > MAX_VERTICES {
            return Err(Error::range("two-color graph", n, 1, MAX_VERTICES));
        }
        let mayer: BTreeSet<Edge> = mayer.into_iter().collect();
        let boltzmann: BTreeSet<Edge> = boltzmann.into_iter().collect();
        for e in mayer.iter().chain(&boltzmann) {
            if e.v() > n {
                return Err(Error::VertexOutOfRange { vertex: e.v(), n });
            }
        }
        if let Some(e) = mayer.intersection(&boltzmann).next() {
            return Err(Error::EdgeOverlap(*e));
        }
        let mut covered = vec![false; n + 1];
        for e in mayer.iter().chain(&boltzmann) {
            covered[e.u()] = true;
            covered[e.v()] = true;
        }
        if let Some(vertex) = (1..=n).find(|&v| !covered[v]) {
            return Err(Error::IsolatedVertex { vertex, n });
        }
        Ok(TwoColorGraph {
            n,
            mayer,
            boltzmann,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mayer_edges(&self) -> &BTreeSet<Edge> {
        &self.mayer
    }

    pub fn boltzmann_edges(&self) -> &BTreeSet<Edge> {
        &self.boltzmann
    }

    pub fn edge_count(&self) -> usize {
        self.mayer.len() + self.boltzmann.len()
    }

    pub fn is_connected(&self, which: Connectivity) -> bool {
        match which {
            Connectivity::MayerOnly => is_connected_edges(&self.mayer, self.n),
            Connectivity::Both => is_connected_edges(self.mayer.iter().chain(&self.boltzmann), self.n),
        }
    }

    /// A base-product label has a connected Mayer subgraph.
    pub fn is_base_product(&self) -> bool {
        self.is_connected(Connectivity::MayerOnly)
    }

    /// Every vertex pair carries a label.
    pub fn is_complete(&self) -> bool {
        self.edge_count() == pair_count(self.n)
    }

    /// Pair-function evaluations left after importance sampling along a
    /// Mayer spanning tree: `|X_f| - n + 1 + |X_f~|`.
    pub fn n1_complexity(&self) -> Result<usize> {
        if !self.is_base_product() {
            return Err(Error::NotBaseProduct);
        }
        Ok(self.mayer.len() + 1 + self.boltzmann.len() - self.n)
    }
}

/// Isomorphism-class key of an edge set: smallest edge mask over all vertex
/// relabelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalKey {
    pub n: u8,
    pub mask: u64,
}

/// Edge-index images of every vertex permutation of `V_n`.
pub(crate) struct PermutationTable {
    edges: usize,
    maps: Vec<u8>,
}

impl PermutationTable {
    fn build(n: usize) -> Self {
        let edges = pair_count(n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut maps = Vec::new();
        let mut push = |perm: &[usize]| {
            for u in 0..n {
                for v in u + 1..n {
                    maps.push(edge_index(n, perm[u] + 1, perm[v] + 1) as u8);
                }
            }
        };
        // Heap's algorithm, iterative.
        let mut c = vec![0usize; n];
        push(&perm);
        let mut i = 1;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                push(&perm);
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        PermutationTable { edges, maps }
    }

    pub(crate) fn get(n: usize) -> &'static PermutationTable {
        static TABLES: [OnceLock<PermutationTable>; MAX_CANONICAL_VERTICES + 1] =
            [const { OnceLock::new() }; MAX_CANONICAL_VERTICES + 1];
        TABLES[n].get_or_init(|| PermutationTable::build(n))
    }

    pub(crate) fn images(&self, mask: u64) -> impl Iterator<Item = u64> + '_ {
        self.maps.chunks_exact(self.edges.max(1)).map(move |map| {
            let mut out = 0u64;
            let mut m = mask;
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                m &= m - 1;
                out |= 1u64 << map[e];
            }
            out
        })
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        if self.edges == 0 {
            1
        } else {
            self.maps.len() / self.edges
        }
    }
}

pub fn canonical_mask(n: usize, mask: u64) -> Result<CanonicalKey> {
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::range("canonical form", n, 0, MAX_CANONICAL_VERTICES));
    }
    let table = PermutationTable::get(n);
    let best = table.images(mask).min().unwrap_or(mask);
    Ok(CanonicalKey { n: n as u8, mask: best })
}

pub fn canonical_form<'a, I: IntoIterator<Item = &'a Edge>>(edges: I, n: usize) -> Result<CanonicalKey> {
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::range("canonical form", n, 0, MAX_CANONICAL_VERTICES));
    }
    canonical_mask(n, mask_from_edges(n, edges))
}

/// Isomorphism key of a two-color graph (colors preserved).
pub fn canonical_two_color(g: &TwoColorGraph) -> Result<(u64, u64)> {
    let n = g.n();
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::range("canonical form", n, 0, MAX_CANONICAL_VERTICES));
    }
    let table = PermutationTable::get(n);
    let mayer = mask_from_edges(n, g.mayer_edges());
    let boltz = mask_from_edges(n, g.boltzmann_edges());
    Ok(table
        .images(mayer)
        .zip(table.images(boltz))
        .min()
        .unwrap_or((mayer, boltz)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(usize, usize)]) -> BTreeSet<Edge> {
        edge_set(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn edge_is_unordered() {
        assert_eq!(Edge::new(3, 1).unwrap(), Edge::new(1, 3).unwrap());
        assert!(Edge::new(2, 2).is_err());
        assert!(Edge::new(0, 2).is_err());
    }

    #[test]
    fn example_graphs_are_valid() {
        let g = TwoColorGraph::new(3, set(&[(1, 2), (2, 3)]), set(&[])).unwrap();
        assert_eq!(g.n1_complexity().unwrap(), 0);
        let g1 = TwoColorGraph::new(3, set(&[(1, 2), (1, 3)]), set(&[(2, 3)])).unwrap();
        assert_eq!(g1.n1_complexity().unwrap(), 1);
        assert!(g1.is_complete());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            TwoColorGraph::new(3, set(&[(1, 2)]), set(&[])),
            Err(Error::IsolatedVertex { vertex: 3, n: 3 })
        );
        assert!(matches!(
            TwoColorGraph::new(3, set(&[(1, 2), (2, 3)]), set(&[(2, 3)])),
            Err(Error::EdgeOverlap(_))
        ));
        assert!(matches!(
            TwoColorGraph::new(3, set(&[(1, 2), (2, 4)]), set(&[])),
            Err(Error::VertexOutOfRange { vertex: 4, n: 3 })
        ));
    }

    #[test]
    fn connectivity_views() {
        let g = TwoColorGraph::new(4, set(&[(1, 2), (3, 4)]), set(&[(2, 3)])).unwrap();
        assert!(!g.is_connected(Connectivity::MayerOnly));
        assert!(g.is_connected(Connectivity::Both));
        assert_eq!(g.n1_complexity(), Err(Error::NotBaseProduct));
        let path = TwoColorGraph::new(3, set(&[(1, 2), (2, 3)]), set(&[])).unwrap();
        assert!(path.is_connected(Connectivity::MayerOnly));
    }

    #[test]
    fn blocks() {
        assert!(is_biconnected(&set(&[(1, 2), (2, 3), (1, 3)]), 3));
        assert!(!is_biconnected(&set(&[(1, 2), (2, 3)]), 3));
        assert!(is_biconnected(&set(&[(1, 2)]), 2));
        let k4_minus = set(&[(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]);
        assert!(is_biconnected(&k4_minus, 4));
        // cut vertex 3 joining two triangles
        let bowtie = set(&[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)]);
        assert!(!is_biconnected(&bowtie, 5));
        // triangle not spanning V_4
        assert!(!is_biconnected(&set(&[(1, 2), (2, 3), (1, 3)]), 4));
    }

    #[test]
    fn complete_graph_n1() {
        let g = TwoColorGraph::new(4, all_pairs(4), []).unwrap();
        assert_eq!(g.n1_complexity().unwrap(), 3);
    }

    #[test]
    fn edge_index_matches_pair_order() {
        for n in 2..=MAX_MASK_VERTICES {
            for (i, e) in all_pairs(n).iter().enumerate() {
                assert_eq!(edge_index(n, e.u(), e.v()), i);
            }
        }
    }

    #[test]
    fn canonical_keys() {
        let a = canonical_form(&set(&[(1, 2), (2, 3)]), 3).unwrap();
        let b = canonical_form(&set(&[(2, 1), (1, 3)]), 3).unwrap();
        let tri = canonical_form(&set(&[(1, 2), (2, 3), (1, 3)]), 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, tri);
        let cycles = [
            set(&[(1, 2), (2, 3), (3, 4), (1, 4)]),
            set(&[(1, 2), (2, 4), (3, 4), (1, 3)]),
            set(&[(1, 3), (2, 3), (2, 4), (1, 4)]),
        ];
        let keys: BTreeSet<_> = cycles.iter().map(|c| canonical_form(c, 4).unwrap()).collect();
        assert_eq!(keys.len(), 1);
        assert!(canonical_form(&set(&[(1, 2)]), 9).is_err());
    }

    #[test]
    fn permutation_table_sizes() {
        assert_eq!(PermutationTable::get(1).len(), 1);
        assert_eq!(PermutationTable::get(4).len(), 24);
        assert_eq!(PermutationTable::get(6).len(), 720);
    }

    #[test]
    fn json_shape() {
        let g = TwoColorGraph::new(3, set(&[(2, 3), (1, 2)]), set(&[])).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":3,"mayer":[[1,2],[2,3]],"boltzmann":[]}"#);
        let back: TwoColorGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad: std::result::Result<TwoColorGraph, _> =
            serde_json::from_str(r#"{"n":3,"mayer":[[1,2]],"boltzmann":[]}"#);
        assert!(bad.is_err());
    }
}
