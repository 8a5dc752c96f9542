//! Number types the polynomial assembly runs over.
//!
//! The series machinery is written once against [`Scalar`] and instantiated
//! with exact rationals (symbolic checks and tables), `f64`/`f32` (plain
//! numerics) and [`Linearized`] (Monte Carlo estimates with first-order
//! error propagation).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }
}

impl Scalar for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for f32 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::INFINITY)
    }
}

impl Scalar for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

/// A value together with its gradient with respect to a set of independent
/// inputs, indexed by position. Missing trailing gradient entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearized {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl Linearized {
    pub fn constant(value: f64) -> Self {
        Linearized {
            value,
            grad: Vec::new(),
        }
    }

    /// The `index`-th independent input.
    pub fn input(value: f64, index: usize) -> Self {
        let mut grad = vec![0.0; index + 1];
        grad[index] = 1.0;
        Linearized { value, grad }
    }

    /// Linearized standard error given the inputs' standard errors.
    pub fn stderr(&self, input_stderr: &[f64]) -> f64 {
        self.grad
            .iter()
            .zip(input_stderr)
            .map(|(g, s)| (g * s).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn zip_grad(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let len = a.len().max(b.len());
        (0..len)
            .map(|i| f(a.get(i).copied().unwrap_or(0.0), b.get(i).copied().unwrap_or(0.0)))
            .collect()
    }
}

impl Add for Linearized {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Linearized {
            value: self.value + rhs.value,
            grad: Self::zip_grad(&self.grad, &rhs.grad, |a, b| a + b),
        }
    }
}

impl Sub for Linearized {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Linearized {
            value: self.value - rhs.value,
            grad: Self::zip_grad(&self.grad, &rhs.grad, |a, b| a - b),
        }
    }
}

impl Mul for Linearized {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (x, y) = (self.value, rhs.value);
        Linearized {
            value: x * y,
            grad: Self::zip_grad(&self.grad, &rhs.grad, |a, b| a * y + x * b),
        }
    }
}

impl Div for Linearized {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let (x, y) = (self.value, rhs.value);
        Linearized {
            value: x / y,
            grad: Self::zip_grad(&self.grad, &rhs.grad, |a, b| (a * y - x * b) / (y * y)),
        }
    }
}

impl Neg for Linearized {
    type Output = Self;
    fn neg(self) -> Self {
        Linearized {
            value: -self.value,
            grad: self.grad.into_iter().map(|g| -g).collect(),
        }
    }
}

impl Zero for Linearized {
    fn zero() -> Self {
        Linearized::constant(0.0)
    }
    fn is_zero(&self) -> bool {
        self.value == 0.0 && self.grad.iter().all(|g| *g == 0.0)
    }
}

impl One for Linearized {
    fn one() -> Self {
        Linearized::constant(1.0)
    }
}

impl Scalar for Linearized {
    fn from_bigint(v: &BigInt) -> Self {
        Linearized::constant(f64::from_bigint(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Linearized::input(3.0, 0);
        let y = Linearized::input(2.0, 1);
        let z = x.clone() * x.clone() * y.clone() - x / y;
        // z = x^2 y - x/y ; dz/dx = 2xy - 1/y, dz/dy = x^2 + x/y^2
        assert_eq!(z.value, 18.0 - 1.5);
        assert!((z.grad[0] - (12.0 - 0.5)).abs() < 1e-12);
        assert!((z.grad[1] - (9.0 + 0.75)).abs() < 1e-12);
        assert!((z.stderr(&[0.1, 0.0]) - 1.15).abs() < 1e-12);
    }

    #[test]
    fn conversions() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(4);
        assert_eq!(f64::from_bigint(&big), 2f64.powi(64));
        assert_eq!(BigRational::from_i64(-3), BigRational::from_integer((-3).into()));
        assert!(Linearized::from_i64(0).is_zero());
    }
}
