//! Complexity criteria for base linear combinations and base sets.
//!
//! `Cr1` is the number of integrals, `Cr2` the total number of edges over all
//! integrand labels, `Cr3` the total of the per-integral measure
//! `N1 = |X_f| - n + 1 + |X_f~|` (improper integrals only). The primed
//! criteria sum these over the members of a base set.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TwoColorGraph;

/// Integration domain of a base linear combination of order `n`: the
/// improper space `(R^nu)^(n-1)` or the box `Lambda^n` with side `side`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Domain {
    ImproperSpace,
    BoundedBox { side: f64 },
}

impl Domain {
    pub fn is_improper(self) -> bool {
        matches!(self, Domain::ImproperSpace)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::ImproperSpace => write!(f, "improper-space"),
            Domain::BoundedBox { side } => write!(f, "bounded-box({side})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Cr1,
    Cr2,
    Cr3,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Cr1, Criterion::Cr2, Criterion::Cr3];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Cr1 => "Cr1",
            Criterion::Cr2 => "Cr2",
            Criterion::Cr3 => "Cr3",
        }
    }
}

/// A finite sum of base integrals of one order over one domain.
#[derive(Debug, Clone)]
pub struct BaseLinearCombination {
    n: usize,
    domain: Domain,
    entries: Vec<(TwoColorGraph, BigRational)>,
}

impl BaseLinearCombination {
    pub fn new(n: usize, domain: Domain, entries: Vec<(TwoColorGraph, BigRational)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCombination(msg));
        if entries.is_empty() {
            return bad("no entries".into());
        }
        if let Domain::BoundedBox { side } = domain {
            if !(side.is_finite() && side > 0.0) {
                return bad(format!("box side {side} must be positive and finite"));
            }
        }
        let mut seen = BTreeSet::new();
        for (g, _) in &entries {
            if g.n() != n {
                return bad(format!("label of order {} in a combination of order {n}", g.n()));
            }
            if !g.is_base_product() {
                return Err(Error::NotBaseProduct);
            }
            if !seen.insert(g) {
                return bad("repeated graph-label".into());
            }
        }
        Ok(BaseLinearCombination { n, domain, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn entries(&self) -> &[(TwoColorGraph, BigRational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether every label joins all pairs of vertices.
    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|(g, _)| g.is_complete())
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    fn labels(&self) -> BTreeSet<&TwoColorGraph> {
        self.entries.iter().map(|(g, _)| g).collect()
    }
}

pub fn cr1(l: &BaseLinearCombination) -> u64 {
    l.entries.len() as u64
}

pub fn cr2(l: &BaseLinearCombination) -> u64 {
    l.entries.iter().map(|(g, _)| g.edge_count() as u64).sum()
}

pub fn cr3(l: &BaseLinearCombination) -> Result<u64> {
    if !l.domain.is_improper() {
        return Err(Error::CriterionDomain("Cr3"));
    }
    l.entries
        .iter()
        .map(|(g, _)| g.n1_complexity().map(|v| v as u64))
        .sum()
}

pub fn criterion(c: Criterion, l: &BaseLinearCombination) -> Result<u64> {
    match c {
        Criterion::Cr1 => Ok(cr1(l)),
        Criterion::Cr2 => Ok(cr2(l)),
        Criterion::Cr3 => cr3(l),
    }
}

/// The shared domain of a base set's members: all improper, or all boxes
/// `Lambda^k` over one side length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Conjugate {
    Space,
    Box { side: f64 },
}

impl Conjugate {
    fn of(domain: Domain) -> Self {
        match domain {
            Domain::ImproperSpace => Conjugate::Space,
            Domain::BoundedBox { side } => Conjugate::Box { side },
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaseSet {
    members: Vec<BaseLinearCombination>,
    conjugate: Conjugate,
}

impl BaseSet {
    pub fn new(members: Vec<BaseLinearCombination>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidBaseSet("no members".into()))?;
        let conjugate = Conjugate::of(first.domain);
        if let Some(l) = members.iter().find(|l| Conjugate::of(l.domain) != conjugate) {
            return Err(Error::InvalidBaseSet(format!(
                "member of order {} over {} does not share the conjugate of the set",
                l.n, l.domain
            )));
        }
        Ok(BaseSet { members, conjugate })
    }

    pub fn members(&self) -> &[BaseLinearCombination] {
        &self.members
    }

    pub fn conjugate(&self) -> Conjugate {
        self.conjugate
    }

    /// The largest member order.
    pub fn order(&self) -> usize {
        self.members.iter().map(|l| l.n).max().unwrap_or(0)
    }
}

pub fn cr_prime(c: Criterion, s: &BaseSet) -> Result<u64> {
    s.members.iter().map(|l| criterion(c, l)).sum()
}

/// Criterion totals of a combination known only through published counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationSummary {
    pub n: usize,
    pub domain: Domain,
    pub length: u64,
    pub edge_total: u64,
    pub n1_total: Option<u64>,
}

impl CombinationSummary {
    pub fn of(l: &BaseLinearCombination) -> Self {
        CombinationSummary {
            n: l.n,
            domain: l.domain,
            length: cr1(l),
            edge_total: cr2(l),
            n1_total: cr3(l).ok(),
        }
    }

    fn value(&self, c: Criterion) -> Result<u64> {
        match c {
            Criterion::Cr1 => Ok(self.length),
            Criterion::Cr2 => Ok(self.edge_total),
            Criterion::Cr3 => {
                if !self.domain.is_improper() {
                    return Err(Error::CriterionDomain("Cr3"));
                }
                self.n1_total.ok_or(Error::CriterionDomain("Cr3"))
            }
        }
    }
}

/// One side of a comparison.
#[derive(Debug, Clone, Copy)]
pub enum Comparand<'a> {
    Combination(&'a BaseLinearCombination),
    Summary(&'a CombinationSummary),
    Set(&'a BaseSet),
}

impl Comparand<'_> {
    fn order(&self) -> usize {
        match self {
            Comparand::Combination(l) => l.n,
            Comparand::Summary(s) => s.n,
            Comparand::Set(s) => s.order(),
        }
    }

    // (order, domain) of a single combination
    fn single(&self) -> Option<(usize, Domain)> {
        match self {
            Comparand::Combination(l) => Some((l.n, l.domain)),
            Comparand::Summary(s) => Some((s.n, s.domain)),
            Comparand::Set(_) => None,
        }
    }

    /// Criterion value: `Cr_i` for a combination, `Cr'_i` for a set.
    pub fn value(&self, c: Criterion) -> Result<u64> {
        match self {
            Comparand::Combination(l) => criterion(c, l),
            Comparand::Summary(s) => s.value(c),
            Comparand::Set(s) => cr_prime(c, s),
        }
    }

    // labels tagged by order; None when only totals are known
    fn entry_set(&self) -> Option<BTreeSet<(usize, &TwoColorGraph)>> {
        match self {
            Comparand::Combination(l) => Some(l.labels().into_iter().map(|g| (l.n, g)).collect()),
            Comparand::Summary(_) => None,
            Comparand::Set(s) => Some(
                s.members
                    .iter()
                    .flat_map(|l| l.labels().into_iter().map(move |g| (l.n, g)))
                    .collect(),
            ),
        }
    }
}

impl<'a> From<&'a BaseLinearCombination> for Comparand<'a> {
    fn from(l: &'a BaseLinearCombination) -> Self {
        Comparand::Combination(l)
    }
}

impl<'a> From<&'a CombinationSummary> for Comparand<'a> {
    fn from(s: &'a CombinationSummary) -> Self {
        Comparand::Summary(s)
    }
}

impl<'a> From<&'a BaseSet> for Comparand<'a> {
    fn from(s: &'a BaseSet) -> Self {
        Comparand::Set(s)
    }
}

fn set_comparable_to_single(s: &BaseSet, n: usize, domain: Domain) -> bool {
    s.order() == n && s.members.iter().filter(|l| l.n == n).all(|l| l.domain == domain)
}

pub fn is_comparable(a: Comparand<'_>, b: Comparand<'_>) -> bool {
    match (a.single(), b.single(), a, b) {
        (Some(x), Some(y), _, _) => x == y,
        (None, Some((n, d)), Comparand::Set(s), _) | (Some((n, d)), None, _, Comparand::Set(s)) => {
            set_comparable_to_single(s, n, d)
        }
        (None, None, Comparand::Set(s), Comparand::Set(t)) => {
            s.order() == t.order() && s.conjugate == t.conjugate
        }
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsiderablyMoreComplicated,
    ConsiderablySimpler,
    ApproximatelyEqual,
}

impl Verdict {
    pub fn reversed(self) -> Self {
        match self {
            Verdict::ConsiderablyMoreComplicated => Verdict::ConsiderablySimpler,
            Verdict::ConsiderablySimpler => Verdict::ConsiderablyMoreComplicated,
            Verdict::ApproximatelyEqual => Verdict::ApproximatelyEqual,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsiderablyMoreComplicated => "considerably more complicated",
            Verdict::ConsiderablySimpler => "considerably simpler",
            Verdict::ApproximatelyEqual => "approximately equal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Verdict on the left comparand relative to the right one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub criterion: Criterion,
    pub left: u64,
    pub right: u64,
    pub verdict: Verdict,
    /// Set when the values tie but one side's entries strictly contain the
    /// other's; that side is negligibly more complicated.
    pub negligibly_more_complicated: Option<Side>,
}

pub fn compare(a: Comparand<'_>, b: Comparand<'_>, c: Criterion) -> Result<Comparison> {
    if !is_comparable(a, b) {
        return Err(Error::Incomparable(format!(
            "orders {} and {} or their domains differ",
            a.order(),
            b.order()
        )));
    }
    let (left, right) = (a.value(c)?, b.value(c)?);
    let verdict = match left.cmp(&right) {
        std::cmp::Ordering::Greater => Verdict::ConsiderablyMoreComplicated,
        std::cmp::Ordering::Less => Verdict::ConsiderablySimpler,
        std::cmp::Ordering::Equal => Verdict::ApproximatelyEqual,
    };
    let mut negligibly_more_complicated = None;
    if verdict == Verdict::ApproximatelyEqual {
        if let (Some(x), Some(y)) = (a.entry_set(), b.entry_set()) {
            if x.len() > y.len() && x.is_superset(&y) {
                negligibly_more_complicated = Some(Side::Left);
            } else if y.len() > x.len() && y.is_superset(&x) {
                negligibly_more_complicated = Some(Side::Right);
            }
        }
    }
    Ok(Comparison {
        criterion: c,
        left,
        right,
        verdict,
        negligibly_more_complicated,
    })
}
