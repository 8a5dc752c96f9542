//! Polynomial assembly of virial coefficients from Mayer coefficients `b_k`
//! or from the activity/density ratio coefficients `a_k`.
//!
//! Everything here is generic over [`Scalar`] and records the arithmetic
//! operations it performs in an [`OpCounter`]. Multiplications, divisions,
//! additions and factorial-table lookups count one each; multiplying by a
//! unit weight and the first factor of a product cost nothing.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::numbers::{factorial, partition_count};
use crate::scalar::Scalar;

/// A vector `m = (m_1, .., m_{n-1})` with `sum_j j m_j = n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MVector {
    n: usize,
    m: Vec<usize>,
}

impl MVector {
    pub fn new(n: usize, m: Vec<usize>) -> Option<Self> {
        let weight: usize = m.iter().enumerate().map(|(j, &c)| (j + 1) * c).sum();
        (n >= 2 && m.len() == n - 1 && weight == n - 1).then_some(MVector { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[usize] {
        &self.m
    }

    /// `||m|| = sum_j m_j`.
    pub fn norm(&self) -> usize {
        self.m.iter().sum()
    }
}

/// All of `M(n)`: `m_1` descending first, then `m_2`, and so on.
pub fn enumerate_m_vectors(n: usize) -> Vec<MVector> {
    assert!(n >= 2, "M(n) needs n >= 2");
    let mut out = Vec::new();
    fn rec(j: usize, left: usize, cur: &mut Vec<usize>, n: usize, out: &mut Vec<MVector>) {
        if j == n {
            if left == 0 {
                out.push(MVector { n, m: cur.clone() });
            }
            return;
        }
        for c in (0..=left / j).rev() {
            cur.push(c);
            rec(j + 1, left - c * j, cur, n, out);
            cur.pop();
        }
    }
    rec(1, n - 1, &mut Vec::with_capacity(n - 1), n, &mut out);
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounter {
    pub ops: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    fn tick(&mut self, k: u64) {
        self.ops += k;
    }
}

fn fact<S: Scalar>(k: usize, ops: &mut OpCounter) -> S {
    ops.tick(1);
    S::from_bigint(&BigInt::from(factorial(k)))
}

/// `Q(x; y; m) = prod_j (y_j x_j)^{m_j} / m_j!` with `x[j-1] = x_j`.
pub fn q_product<S: Scalar>(x: &[S], y: &[i64], m: &MVector, ops: &mut OpCounter) -> S {
    let mut acc: Option<S> = None;
    for (j, &mj) in m.m.iter().enumerate() {
        if mj == 0 {
            continue;
        }
        let base = if y[j] == 1 {
            x[j].clone()
        } else {
            ops.tick(1);
            S::from_i64(y[j]) * x[j].clone()
        };
        let mut factor = base.clone();
        for _ in 1..mj {
            ops.tick(1);
            factor = factor * base.clone();
        }
        if mj >= 2 {
            factor = factor / fact::<S>(mj, ops);
            ops.tick(1);
        }
        acc = Some(match acc {
            None => factor,
            Some(a) => {
                ops.tick(1);
                a * factor
            }
        });
    }
    acc.unwrap_or_else(S::one)
}

/// Coefficients `c_1 = 1, c_2, ..` of a power series; `tail[0]` is `c_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq<S> {
    values: Vec<S>,
}

impl<S: Scalar> CoeffSeq<S> {
    pub fn new(tail: Vec<S>) -> Self {
        let mut values = vec![S::one()];
        values.extend(tail);
        CoeffSeq { values }
    }

    /// `c_k` for `1 <= k <= max_order()`.
    pub fn get(&self, k: usize) -> &S {
        &self.values[k - 1]
    }

    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    /// `(c_2, .., c_n)`.
    pub fn tail(&self) -> &[S] {
        &self.values[1..]
    }

    pub fn push(&mut self, v: S) {
        self.values.push(v);
    }
}

fn weights(len: usize, sign: i64) -> Vec<i64> {
    (1..=len as i64).map(|j| sign * (j + 1)).collect()
}

fn accumulate<S: Scalar>(sum: Option<S>, term: S, negate: bool, ops: &mut OpCounter) -> Option<S> {
    Some(match sum {
        None if negate => {
            ops.tick(1);
            -term
        }
        None => term,
        Some(s) => {
            ops.tick(1);
            if negate {
                s - term
            } else {
                s + term
            }
        }
    })
}

/// `sum_{m in M(n)} (n + ||m|| - 2)! Q_n(x; y; m)` with `x_j = -b_{j+1}`,
/// `y_j = j + 1`. The sign of `x` is folded into the accumulation.
pub fn mayer_formula_sum<S: Scalar>(b: &CoeffSeq<S>, n: usize, ops: &mut OpCounter) -> S {
    assert!(b.max_order() >= n, "need b_2..b_n");
    let x = &b.tail()[..n - 1];
    let y = weights(n - 1, 1);
    let mut sum = None;
    for m in enumerate_m_vectors(n) {
        let q = q_product(x, &y, &m, ops);
        let term = fact::<S>(n + m.norm() - 2, ops) * q;
        ops.tick(1);
        sum = accumulate(sum, term, m.norm() % 2 == 1, ops);
    }
    sum.unwrap_or_else(S::zero)
}

/// Virial coefficient `B_n` from `b_2..b_n` by the Mayer formula.
pub fn b_to_virial<S: Scalar>(b: &CoeffSeq<S>, n: usize, ops: &mut OpCounter) -> S {
    let sum = mayer_formula_sum(b, n, ops);
    ops.tick(3);
    sum * S::from_i64(n as i64 - 1) / S::from_bigint(&BigInt::from(factorial(n)))
}

/// `beta_mu = -(1/mu!) sum_{m in M(mu+1)} (mu + ||m|| - 1)! prod_j [-(j+1) b_{j+1}]^{m_j} / m_j!`;
/// `B_n = -((n-1)/n) beta_{n-1}`.
pub fn beta_mu<S: Scalar>(b: &CoeffSeq<S>, mu: usize) -> S {
    assert!(mu >= 1 && b.max_order() > mu, "need b_2..b_(mu+1)");
    let x: Vec<S> = b.tail()[..mu].iter().map(|v| -v.clone()).collect();
    let y = weights(mu, 1);
    let mut ops = OpCounter::new();
    let sum = enumerate_m_vectors(mu + 1).into_iter().fold(S::zero(), |acc, m| {
        let w = S::from_bigint(&BigInt::from(factorial(mu + m.norm() - 1)));
        acc + w * q_product(&x, &y, &m, &mut ops)
    });
    -sum / S::from_bigint(&BigInt::from(factorial(mu)))
}

/// `e_1 = 1` and `e_mu = mu^{-1} sum_{m in M(mu)} ||m||! Q(x; y; m)` with
/// `x_j = a_{j+1}`, `y_j = j + 1`, for `mu = 2..=n`.
pub fn e_coeffs<S: Scalar>(a: &CoeffSeq<S>, n: usize, ops: &mut OpCounter) -> Vec<S> {
    assert!(a.max_order() >= n, "need a_2..a_n");
    let mut e = vec![S::one()];
    for mu in 2..=n {
        let x = &a.tail()[..mu - 1];
        let y = weights(mu - 1, 1);
        let mut sum = None;
        for m in enumerate_m_vectors(mu) {
            let q = q_product(x, &y, &m, ops);
            let term = fact::<S>(m.norm(), ops) * q;
            ops.tick(1);
            sum = accumulate(sum, term, false, ops);
        }
        ops.tick(1);
        e.push(sum.unwrap_or_else(S::zero) / S::from_i64(mu as i64));
    }
    e
}

/// `tau_1 = 1` and `tau_mu = (mu-1)! sum_{m in M(mu)} Q(x; -y; m) / (mu - ||m||)!`
/// with `x_j = a_{j+1}`, `y_j = j + 1`, for `mu = 2..=n`.
pub fn tau_coeffs<S: Scalar>(a: &CoeffSeq<S>, n: usize, ops: &mut OpCounter) -> Vec<S> {
    assert!(a.max_order() >= n, "need a_2..a_n");
    let mut tau = vec![S::one()];
    for mu in 2..=n {
        let x = &a.tail()[..mu - 1];
        let y = weights(mu - 1, -1);
        let mut sum = None;
        for m in enumerate_m_vectors(mu) {
            let q = q_product(x, &y, &m, ops);
            let k = mu - m.norm();
            let term = if k <= 1 {
                q
            } else {
                ops.tick(1);
                q / fact::<S>(k, ops)
            };
            sum = accumulate(sum, term, false, ops);
        }
        let sum = sum.unwrap_or_else(S::zero);
        tau.push(if mu == 2 {
            sum
        } else {
            ops.tick(1);
            fact::<S>(mu - 1, ops) * sum
        });
    }
    tau
}

/// Intermediate and final values of the activity/density-ratio route.
#[derive(Debug, Clone)]
pub struct ARoute<S> {
    pub e: Vec<S>,
    pub tau: Vec<S>,
    pub virial: S,
}

/// `B_n = sum_{m in M(n+1)} ||m||! e_{||m||} Q(tau; 1; m)`, after computing
/// `e` and `tau` from `a_2..a_n`.
pub fn a_route<S: Scalar>(a: &CoeffSeq<S>, n: usize, ops: &mut OpCounter) -> ARoute<S> {
    let e = e_coeffs(a, n, ops);
    let tau = tau_coeffs(a, n, ops);
    let y = vec![1i64; n];
    let mut sum = None;
    for m in enumerate_m_vectors(n + 1) {
        let k = m.norm();
        let q = q_product(&tau, &y, &m, ops);
        let weight = fact::<S>(k, ops) * e[k - 1].clone();
        ops.tick(2);
        sum = accumulate(sum, weight * q, false, ops);
    }
    ARoute {
        e,
        tau,
        virial: sum.unwrap_or_else(S::zero),
    }
}

pub fn a_to_virial<S: Scalar>(a: &CoeffSeq<S>, n: usize, ops: &mut OpCounter) -> S {
    a_route(a, n, ops).virial
}

/// `n b_n - sum_{q=1}^{n-1} (q+1) a_{q+1} (n-q) b_{n-q}`.
pub fn ab_recurrence_residual<S: Scalar>(a: &CoeffSeq<S>, b: &CoeffSeq<S>, n: usize) -> S {
    let int = |k: usize| S::from_i64(k as i64);
    let rhs = (1..n).fold(S::zero(), |acc, q| {
        acc + int(q + 1) * a.get(q + 1).clone() * int(n - q) * b.get(n - q).clone()
    });
    int(n) * b.get(n).clone() - rhs
}

/// `b_2..b_n` from `a_2..a_n` through the recurrence.
pub fn b_from_a<S: Scalar>(a: &CoeffSeq<S>, n: usize) -> CoeffSeq<S> {
    let int = |k: usize| S::from_i64(k as i64);
    let mut b: CoeffSeq<S> = CoeffSeq::new(Vec::new());
    for k in 2..=n {
        let rhs = (1..k).fold(S::zero(), |acc, q| {
            acc + int(q + 1) * a.get(q + 1).clone() * int(k - q) * b.get(k - q).clone()
        });
        b.push(rhs / int(k));
    }
    b
}

/// `a_2..a_n` from `b_2..b_n` through the recurrence.
pub fn a_from_b<S: Scalar>(b: &CoeffSeq<S>, n: usize) -> CoeffSeq<S> {
    let int = |k: usize| S::from_i64(k as i64);
    let mut a: CoeffSeq<S> = CoeffSeq::new(Vec::new());
    for k in 2..=n {
        // the q = k-1 term is k a_k b_1
        let rest = (1..k - 1).fold(S::zero(), |acc, q| {
            acc + int(q + 1) * a.get(q + 1).clone() * int(k - q) * b.get(k - q).clone()
        });
        a.push((int(k) * b.get(k).clone() - rest) / int(k));
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Mayer formula over `b_2..b_n`.
    B,
    /// Staged assembly over `a_2..a_n`.
    A,
}

/// Arithmetic-operation budget of the polynomial stages.
///
/// For the `a` route this is `7 p(n-1) n (n-1) + 5 n p(n)`. For the `b`
/// route it is the sum over `M(n)` of `5 ||m||` for the product plus three for
/// the factorial weight and accumulation, and three for the prefactor.
pub fn op_bound(route: Route, n: usize) -> u64 {
    assert!(n >= 2, "op_bound needs n >= 2");
    let p = |k: usize| u64::try_from(partition_count(k)).expect("partition count fits u64");
    let n64 = n as u64;
    match route {
        Route::A => 7 * p(n - 1) * n64 * (n64 - 1) + 5 * n64 * p(n),
        Route::B => {
            enumerate_m_vectors(n)
                .iter()
                .map(|m| 5 * m.norm() as u64 + 3)
                .sum::<u64>()
                + 3
        }
    }
}

/// The published ceiling on the Mayer-formula sum for `n <= 10`.
pub const MAYER_SUM_OP_ENVELOPE: u64 = 2430;

/// Measured operation counts of both routes at order `n`, with unit inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasuredOps {
    pub n: usize,
    pub b_route_sum: u64,
    pub b_route_total: u64,
    pub a_route_total: u64,
}

pub fn measure_ops(n: usize) -> MeasuredOps {
    let ones = CoeffSeq::new(vec![1.0f64; n - 1]);
    let mut sum_ops = OpCounter::new();
    mayer_formula_sum(&ones, n, &mut sum_ops);
    let mut b_ops = OpCounter::new();
    b_to_virial(&ones, n, &mut b_ops);
    let mut a_ops = OpCounter::new();
    a_to_virial(&ones, n, &mut a_ops);
    MeasuredOps {
        n,
        b_route_sum: sum_ops.ops,
        b_route_total: b_ops.ops,
        a_route_total: a_ops.ops,
    }
}

/// A coefficient value in exact or estimate mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CoeffValue {
    Exact {
        #[serde(serialize_with = "ser_rational")]
        value: BigRational,
        source: String,
    },
    Estimate {
        mean: f64,
        stderr: f64,
        source: String,
    },
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn m_vectors() {
        let m3: Vec<Vec<usize>> = enumerate_m_vectors(3).into_iter().map(|m| m.m).collect();
        assert_eq!(m3, vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(enumerate_m_vectors(10).len(), 30);
        assert_eq!(enumerate_m_vectors(2)[0].m, vec![1]);
        assert!(MVector::new(3, vec![1, 1]).is_none());
    }

    #[test]
    fn q_examples() {
        let mut ops = OpCounter::new();
        let m = MVector::new(3, vec![2, 0]).unwrap();
        let b2 = rat(3, 7);
        let q = q_product(&[-b2.clone(), BigRational::zero()], &[2, 3], &m, &mut ops);
        assert_eq!(q, rat(2, 1) * &b2 * &b2);
        let m = MVector::new(2, vec![1]).unwrap();
        assert_eq!(q_product(&[rat(5, 1)], &[3], &m, &mut ops), rat(15, 1));
    }

    #[test]
    fn low_orders_by_hand() {
        let (b2, b3) = (rat(-2, 3), rat(5, 11));
        let b = CoeffSeq::new(vec![b2.clone(), b3.clone()]);
        let mut ops = OpCounter::new();
        assert_eq!(b_to_virial(&b, 2, &mut ops), -b2.clone());
        assert_eq!(b_to_virial(&b, 3, &mut ops), rat(4, 1) * &b2 * &b2 - rat(2, 1) * &b3);
        assert_eq!(beta_mu(&b, 1), rat(2, 1) * &b2);
        let a = CoeffSeq::new(vec![rat(1, 2), rat(3, 5)]);
        let e = e_coeffs(&a, 3, &mut ops);
        let tau = tau_coeffs(&a, 3, &mut ops);
        assert_eq!((e[0].clone(), e[1].clone()), (BigRational::one(), rat(1, 2)));
        assert_eq!((tau[0].clone(), tau[1].clone()), (BigRational::one(), rat(-1, 1)));
        assert_eq!(a_to_virial(&a, 2, &mut ops), rat(-1, 2));
    }

    #[test]
    fn recurrence_roundtrip() {
        let a = CoeffSeq::new(vec![rat(1, 3), rat(-2, 7), rat(5, 2), rat(1, 9)]);
        let b = b_from_a(&a, 5);
        for n in 2..=5 {
            assert!(ab_recurrence_residual(&a, &b, n).is_zero());
        }
        assert_eq!(a_from_b(&b, 5), a);
        let mut bumped = b.clone();
        bumped.values[3] += rat(1, 100);
        assert_eq!(ab_recurrence_residual(&a, &bumped, 4), rat(4, 100));
    }

    #[test]
    fn bounds() {
        assert_eq!(op_bound(Route::A, 2), 34);
        assert_eq!(op_bound(Route::A, 10), 21000);
        for n in 2..=10 {
            let m = measure_ops(n);
            assert!(m.a_route_total <= op_bound(Route::A, n), "{m:?}");
            assert!(m.b_route_total <= op_bound(Route::B, n), "{m:?}");
            assert!(m.b_route_sum <= MAYER_SUM_OP_ENVELOPE, "{m:?}");
        }
    }

    #[test]
    fn generic_over_floats() {
        let b = CoeffSeq::new(vec![-0.5f32, 0.25]);
        let mut ops = OpCounter::new();
        assert!((b_to_virial(&b, 3, &mut ops) - (4.0 * 0.25 - 0.5)).abs() < 1e-6);
    }
}
