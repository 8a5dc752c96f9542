//! Importance-sampled estimates of cluster integrals over `(R^nu)^(n-1)`.
//!
//! Vertex 1 sits at the origin. A spanning frame tree is sampled edge by
//! edge, each child displaced from its parent with density `|f| / int |f|`,
//! and the remaining pair factors are evaluated at the sampled positions.
//! Samples are split into fixed-size shards; shard `s` of stream `id` draws
//! from ChaCha8 seeded by `id` on stream `s`, and shard statistics are merged
//! in shard order, so results do not depend on the thread count.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge_index, is_connected_mask};
use crate::numbers::factorial;
use crate::potential::{norm2, PairPotential};
use crate::scalar::Linearized;
use crate::series::{self, CoeffSeq, OpCounter, Route};
use crate::trees::{enumerate, LabeledTree, Subset, TreeClass};

pub const DEFAULT_SEED: u64 = 1729;
pub const SHARD_SIZE: u64 = 1 << 16;
pub const MIN_CLASS_SAMPLES: u64 = 1000;
/// Largest order of the `b_n` / `a_n` tree-sum estimators.
pub const MAX_COEFF_ORDER: usize = 8;
/// Largest order of the virial estimator.
pub const MAX_VIRIAL_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub quantity: String,
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub pair_evals: u64,
    pub seed: u64,
    /// Arithmetic operations of the polynomial stages, when there are any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arithmetic_ops: Option<u64>,
}

/// Running mean and centered second moment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * (other.count as f64 / count as f64);
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64 / count as f64);
        Moments { count, mean, m2 }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2.max(0.0) / ((self.count - 1) as f64 * self.count as f64)).sqrt()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of an independent stream identified by `parts`.
pub fn stream_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix(seed), |acc, &p| splitmix(acc ^ splitmix(p)))
}

fn tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x1000_0000_01b3))
}

/// An integrand in sampling form: frame edges drawn from `|f|`, then
/// Boltzmann and extra Mayer factors on fixed pairs. Labels are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrand {
    n: usize,
    /// `(child, parent)`, each parent placed before its children.
    frame: Vec<(usize, usize)>,
    boltzmann: Vec<(usize, usize)>,
    mayer: Vec<(usize, usize)>,
}

impl Integrand {
    pub fn labeled_tree(tree: &LabeledTree, with_admissible: bool) -> Self {
        let n = tree.n();
        let depth = tree.depths();
        let mut order: Vec<usize> = (2..=n).collect();
        order.sort_by_key(|&v| (depth[v], v));
        let boltzmann = if with_admissible {
            tree.admissible_edges().iter().map(|e| (e.u(), e.v())).collect()
        } else {
            Vec::new()
        };
        Integrand {
            n,
            frame: order.into_iter().map(|v| (v, tree.parent(v))).collect(),
            boltzmann,
            mayer: Vec::new(),
        }
    }

    /// The tree-class integral: canonical tree as Mayer bonds, admissible
    /// pairs as Boltzmann factors.
    pub fn tree_class(t: &TreeClass) -> Self {
        Self::labeled_tree(&t.canonical_labeling(), true)
    }

    /// `int prod_{edges} f` of a connected all-Mayer graph given by its edge
    /// mask; the breadth-first tree from vertex 1 (smallest-label parents)
    /// is the frame.
    pub fn mayer_graph(n: usize, mask: u64) -> Option<Self> {
        if !is_connected_mask(n, mask) {
            return None;
        }
        let has = |u: usize, v: usize| mask >> edge_index(n, u.min(v), u.max(v)) & 1 == 1;
        let mut parent = vec![0usize; n + 1];
        let mut seen = vec![false; n + 1];
        seen[1] = true;
        let mut queue = std::collections::VecDeque::from([1usize]);
        let mut frame = Vec::new();
        while let Some(u) = queue.pop_front() {
            for v in 1..=n {
                if !seen[v] && has(u, v) {
                    seen[v] = true;
                    parent[v] = u;
                    frame.push((v, u));
                    queue.push_back(v);
                }
            }
        }
        let mut mayer = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if has(u, v) && parent[v] != u && parent[u] != v {
                    mayer.push((u, v));
                }
            }
        }
        Some(Integrand {
            n,
            frame,
            boltzmann: Vec::new(),
            mayer,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Pair-function evaluations per sample.
    pub fn evals_per_sample(&self) -> u64 {
        (self.frame.len() + self.boltzmann.len() + self.mayer.len()) as u64
    }

    fn sample<R: Rng>(&self, potential: &PairPotential, scale: f64, rng: &mut R, pos: &mut [[f64; 3]]) -> f64 {
        pos[1] = [0.0; 3];
        let mut w = scale;
        for &(child, parent) in &self.frame {
            let (d, sign) = potential.sample_bond(rng);
            let p = pos[parent];
            pos[child] = [p[0] + d[0], p[1] + d[1], p[2] + d[2]];
            w *= sign;
        }
        let r2 = |u: usize, v: usize| {
            let (a, b) = (pos[u], pos[v]);
            norm2(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
        };
        for &(u, v) in &self.boltzmann {
            w *= potential.boltzmann_r2(r2(u, v));
        }
        for &(u, v) in &self.mayer {
            w *= potential.mayer_r2(r2(u, v));
        }
        w
    }
}

/// Moments of the integrand estimator over `samples` draws of stream `id`.
pub fn sample_integral(integrand: &Integrand, potential: &PairPotential, samples: u64, id: u64) -> Moments {
    let scale = potential.abs_integral().powi(integrand.frame.len() as i32);
    let shards = samples.div_ceil(SHARD_SIZE);
    let parts: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(id);
            rng.set_stream(s);
            let len = SHARD_SIZE.min(samples - s * SHARD_SIZE);
            let mut pos = vec![[0.0; 3]; integrand.n + 1];
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(integrand.sample(potential, scale, &mut rng, &mut pos));
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

pub fn estimate_tree_integral(t: &TreeClass, potential: &PairPotential, samples: u64, seed: u64) -> Estimate {
    let integrand = Integrand::tree_class(t);
    let m = sample_integral(&integrand, potential, samples, stream_seed(seed, &[tag("I(t)"), t.n() as u64]));
    Estimate {
        quantity: "I(t)".into(),
        n: t.n(),
        mean: m.mean,
        stderr: m.stderr(),
        samples,
        pair_evals: samples * integrand.evals_per_sample(),
        seed,
        arithmetic_ops: None,
    }
}

/// Samples per class of a tree sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Allocation {
    /// A total budget split in proportion to class multiplicity, at least
    /// [`MIN_CLASS_SAMPLES`] per class.
    Proportional(u64),
    /// The same count for every class.
    PerClass(u64),
}

impl Allocation {
    fn split(self, multiplicities: &[u64]) -> Vec<u64> {
        match self {
            Allocation::PerClass(s) => vec![s.max(1); multiplicities.len()],
            Allocation::Proportional(total) => {
                let sum: u128 = multiplicities.iter().map(|&m| m as u128).sum();
                multiplicities
                    .iter()
                    .map(|&m| ((total as u128 * m as u128 / sum) as u64).max(MIN_CLASS_SAMPLES))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassEstimate {
    pub multiplicity: u64,
    pub admissible: usize,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub pair_evals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeSumEstimate {
    pub estimate: Estimate,
    pub classes: Vec<ClassEstimate>,
}

fn quantity_name(subset: Subset) -> &'static str {
    match subset {
        Subset::Full => "b",
        Subset::ASubset => "a",
    }
}

/// `(1/n!) sum_t |TI(t)| I(t)` over the full tree set (`b_n`) or the
/// activity/density subset (`a_n`).
pub fn estimate_tree_sum(
    n: usize,
    subset: Subset,
    potential: &PairPotential,
    allocation: Allocation,
    seed: u64,
) -> Result<TreeSumEstimate> {
    Error::check_range("tree-sum estimate", n, 2, MAX_COEFF_ORDER)?;
    let classes = enumerate(n, subset)?;
    let mults: Vec<u64> = classes
        .iter()
        .map(|t| t.multiplicity().to_u64().expect("multiplicity fits u64"))
        .collect();
    let alloc = allocation.split(&mults);
    let name = quantity_name(subset);
    let mut out = Vec::with_capacity(classes.len());
    for (k, t) in classes.iter().enumerate() {
        let integrand = Integrand::tree_class(t);
        let id = stream_seed(seed, &[tag(name), n as u64, k as u64]);
        let m = sample_integral(&integrand, potential, alloc[k], id);
        out.push(ClassEstimate {
            multiplicity: mults[k],
            admissible: integrand.boltzmann.len(),
            samples: alloc[k],
            mean: m.mean,
            stderr: m.stderr(),
            pair_evals: alloc[k] * integrand.evals_per_sample(),
        });
    }
    let norm = factorial(n).to_f64().unwrap();
    let mean = out.iter().map(|c| c.multiplicity as f64 * c.mean).sum::<f64>() / norm;
    let var = out.iter().map(|c| (c.multiplicity as f64 * c.stderr).powi(2)).sum::<f64>();
    Ok(TreeSumEstimate {
        estimate: Estimate {
            quantity: name.into(),
            n,
            mean,
            stderr: var.sqrt() / norm,
            samples: out.iter().map(|c| c.samples).sum(),
            pair_evals: out.iter().map(|c| c.pair_evals).sum(),
            seed,
            arithmetic_ops: None,
        },
        classes: out,
    })
}

/// Mayer coefficient `b_n` from the full tree sum.
pub fn estimate_b(n: usize, potential: &PairPotential, samples: u64, seed: u64) -> Result<Estimate> {
    Ok(estimate_tree_sum(n, Subset::Full, potential, Allocation::Proportional(samples), seed)?.estimate)
}

/// Activity/density ratio coefficient `a_n` from the layer-restricted sum.
pub fn estimate_a(n: usize, potential: &PairPotential, samples: u64, seed: u64) -> Result<Estimate> {
    Ok(estimate_tree_sum(n, Subset::ASubset, potential, Allocation::Proportional(samples), seed)?.estimate)
}

/// Inputs and result of a virial-coefficient estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VirialEstimate {
    pub estimate: Estimate,
    /// Stage-one estimates of `b_2..b_n` or `a_2..a_n`.
    pub inputs: Vec<Estimate>,
}

fn linearize(inputs: &[Estimate], offset: usize) -> CoeffSeq<Linearized> {
    CoeffSeq::new(
        inputs
            .iter()
            .enumerate()
            .map(|(i, e)| Linearized::input(e.mean, offset + i))
            .collect(),
    )
}

/// Virial coefficient `B_n`: stage one estimates every needed tree sum with
/// `samples` each; the polynomial stages run on first-order error carriers.
#[allow(non_snake_case)]
pub fn estimate_B(n: usize, route: Route, potential: &PairPotential, samples: u64, seed: u64) -> Result<VirialEstimate> {
    Error::check_range("virial estimate", n, 2, MAX_VIRIAL_ORDER)?;
    let inputs: Vec<Estimate> = (2..=n)
        .map(|k| match route {
            Route::B => estimate_b(k, potential, samples, seed),
            Route::A => estimate_a(k, potential, samples, seed),
        })
        .collect::<Result<_>>()?;
    let seq = linearize(&inputs, 0);
    let mut ops = OpCounter::new();
    let value = match route {
        Route::B => series::b_to_virial(&seq, n, &mut ops),
        Route::A => series::a_to_virial(&seq, n, &mut ops),
    };
    let se: Vec<f64> = inputs.iter().map(|e| e.stderr).collect();
    Ok(VirialEstimate {
        estimate: Estimate {
            quantity: "B".into(),
            n,
            mean: value.value,
            stderr: value.stderr(&se),
            samples: inputs.iter().map(|e| e.samples).sum(),
            pair_evals: inputs.iter().map(|e| e.pair_evals).sum(),
            seed,
            arithmetic_ops: Some(ops.ops),
        },
        inputs,
    })
}

/// Residual `n b_n - sum_q (q+1) a_{q+1} (n-q) b_{n-q}` of independent
/// estimates of `a_2..a_n` and `b_2..b_n`.
pub fn estimate_recurrence_residual(n: usize, potential: &PairPotential, samples: u64, seed: u64) -> Result<Estimate> {
    Error::check_range("recurrence residual", n, 2, MAX_COEFF_ORDER)?;
    let a: Vec<Estimate> = (2..=n).map(|k| estimate_a(k, potential, samples, seed)).collect::<Result<_>>()?;
    let b: Vec<Estimate> = (2..=n).map(|k| estimate_b(k, potential, samples, seed)).collect::<Result<_>>()?;
    let r = series::ab_recurrence_residual(&linearize(&a, 0), &linearize(&b, a.len()), n);
    let se: Vec<f64> = a.iter().chain(&b).map(|e| e.stderr).collect();
    Ok(Estimate {
        quantity: "recurrence-residual".into(),
        n,
        mean: r.value,
        stderr: r.stderr(&se),
        samples: a.iter().chain(&b).map(|e| e.samples).sum(),
        pair_evals: a.iter().chain(&b).map(|e| e.pair_evals).sum(),
        seed,
        arithmetic_ops: None,
    })
}

/// `scale * sum_k weight_k int prod_{edges of G_k} f` over all-Mayer graphs
/// given by edge masks, `samples` draws each.
pub fn estimate_graph_sum(
    quantity: &str,
    n: usize,
    graphs: &[(u64, f64)],
    scale: f64,
    potential: &PairPotential,
    samples: u64,
    seed: u64,
) -> Estimate {
    let mut mean = 0.0;
    let mut var = 0.0;
    let mut evals = 0;
    for (k, &(mask, weight)) in graphs.iter().enumerate() {
        let integrand = Integrand::mayer_graph(n, mask).expect("graph sums run over connected graphs");
        let m = sample_integral(&integrand, potential, samples, stream_seed(seed, &[tag(quantity), n as u64, k as u64]));
        mean += weight * m.mean;
        var += (weight * m.stderr()).powi(2);
        evals += samples * integrand.evals_per_sample();
    }
    Estimate {
        quantity: quantity.into(),
        n,
        mean: scale * mean,
        stderr: scale.abs() * var.sqrt(),
        samples: samples * graphs.len() as u64,
        pair_evals: evals,
        seed,
        arithmetic_ops: None,
    }
}

/// `b_n = (1/n!) sum over connected labeled graphs of int prod f`, one
/// integral per isomorphism class weighted by its labeled count.
pub fn connected_graph_oracle_b(n: usize, potential: &PairPotential, samples: u64, seed: u64) -> Result<Estimate> {
    Error::check_range("connected-graph oracle", n, 2, 5)?;
    let classes = crate::ree_hoover::mask_classes(n, |mask| is_connected_mask(n, mask))?;
    let graphs: Vec<(u64, f64)> = classes.iter().map(|&(m, c)| (m, c as f64)).collect();
    let scale = 1.0 / factorial(n).to_f64().unwrap();
    Ok(estimate_graph_sum("b-connected-oracle", n, &graphs, scale, potential, samples, seed))
}
