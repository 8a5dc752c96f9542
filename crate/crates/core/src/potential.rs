//! Spherically symmetric pair potentials, their Mayer functions and the
//! bond-displacement sampler used by the Monte Carlo estimator.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PotentialKind {
    HardSphere,
    /// Hard core of diameter `sigma` plus an attractive shell out to
    /// `lambda * sigma` of reduced depth `beta_eps`.
    SquareWell { lambda: f64, beta_eps: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairPotential {
    #[serde(flatten)]
    pub kind: PotentialKind,
    pub sigma: f64,
    pub dim: usize,
}

/// Volume of the unit ball in `dim` dimensions.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => panic!("dimension {dim} unsupported"),
    }
}

impl PairPotential {
    pub fn hard_sphere(sigma: f64, dim: usize) -> Result<Self> {
        Self::new(PotentialKind::HardSphere, sigma, dim)
    }

    pub fn square_well(sigma: f64, dim: usize, lambda: f64, beta_eps: f64) -> Result<Self> {
        Self::new(PotentialKind::SquareWell { lambda, beta_eps }, sigma, dim)
    }

    pub fn new(kind: PotentialKind, sigma: f64, dim: usize) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidPotential(format!("sigma = {sigma} must be positive")));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidPotential(format!("dimension {dim} not in 1..=3")));
        }
        if let PotentialKind::SquareWell { lambda, beta_eps } = kind {
            if !(lambda.is_finite() && lambda > 1.0) {
                return Err(Error::InvalidPotential(format!("lambda = {lambda} must exceed 1")));
            }
            if !beta_eps.is_finite() || beta_eps.abs() > 50.0 {
                return Err(Error::InvalidPotential(format!("beta_eps = {beta_eps} out of range")));
            }
        }
        Ok(PairPotential { kind, sigma, dim })
    }

    fn shell_value(&self) -> f64 {
        match self.kind {
            PotentialKind::HardSphere => 0.0,
            PotentialKind::SquareWell { beta_eps, .. } => beta_eps.exp_m1(),
        }
    }

    fn outer_radius(&self) -> f64 {
        match self.kind {
            PotentialKind::HardSphere => self.sigma,
            PotentialKind::SquareWell { lambda, .. } => lambda * self.sigma,
        }
    }

    /// Mayer function at squared separation `r2`.
    pub fn mayer_r2(&self, r2: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        if r2 < s2 {
            -1.0
        } else {
            match self.kind {
                PotentialKind::HardSphere => 0.0,
                PotentialKind::SquareWell { lambda, .. } => {
                    if r2 < lambda * lambda * s2 {
                        self.shell_value()
                    } else {
                        0.0
                    }
                }
            }
        }
    }

    pub fn boltzmann_r2(&self, r2: f64) -> f64 {
        1.0 + self.mayer_r2(r2)
    }

    /// `sup |f|`.
    pub fn bound(&self) -> f64 {
        1.0f64.max(self.shell_value().abs())
    }

    fn core_volume(&self) -> f64 {
        unit_ball_volume(self.dim) * self.sigma.powi(self.dim as i32)
    }

    fn shell_volume(&self) -> f64 {
        let outer = unit_ball_volume(self.dim) * self.outer_radius().powi(self.dim as i32);
        outer - self.core_volume()
    }

    /// `int f(r) d^nu r`.
    pub fn mayer_integral(&self) -> f64 {
        -self.core_volume() + self.shell_value() * self.shell_volume()
    }

    /// `int |f(r)| d^nu r`, the normalizer of the bond sampler.
    pub fn abs_integral(&self) -> f64 {
        self.core_volume() + self.shell_value().abs() * self.shell_volume()
    }

    /// Draws a displacement with density `|f| / int |f|`; returns it with
    /// the sign of `f` there.
    pub fn sample_bond<R: Rng + ?Sized>(&self, rng: &mut R) -> ([f64; 3], f64) {
        let shell = self.shell_value();
        let shell_weight = shell.abs() * self.shell_volume();
        let s2 = self.sigma * self.sigma;
        if shell_weight > 0.0 && rng.random::<f64>() * self.abs_integral() < shell_weight {
            let outer = self.outer_radius();
            loop {
                let d = uniform_in_ball(rng, self.dim, outer);
                if norm2(&d) >= s2 {
                    return (d, shell.signum());
                }
            }
        }
        (uniform_in_ball(rng, self.dim, self.sigma), -1.0)
    }
}

pub(crate) fn norm2(d: &[f64; 3]) -> f64 {
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Uniform point of the radius-`radius` ball, by rejection from the cube.
pub(crate) fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> [f64; 3] {
    loop {
        let mut p = [0.0; 3];
        for c in p.iter_mut().take(dim) {
            *c = rng.random_range(-1.0..1.0);
        }
        if norm2(&p) < 1.0 {
            return p.map(|c| c * radius);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hard_sphere_integrals() {
        let p = PairPotential::hard_sphere(1.0, 3).unwrap();
        assert!((p.mayer_integral() + 4.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(p.abs_integral(), -p.mayer_integral());
        assert_eq!(p.mayer_r2(0.99), -1.0);
        assert_eq!(p.mayer_r2(1.01), 0.0);
        let q = PairPotential::hard_sphere(2.0, 2).unwrap();
        assert!((q.abs_integral() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn square_well_integrals() {
        let p = PairPotential::square_well(1.0, 3, 1.5, 0.5).unwrap();
        let shell = 4.0 * PI / 3.0 * (1.5f64.powi(3) - 1.0);
        let e = 0.5f64.exp() - 1.0;
        assert!((p.mayer_integral() - (-4.0 * PI / 3.0 + e * shell)).abs() < 1e-12);
        assert!((p.abs_integral() - (4.0 * PI / 3.0 + e * shell)).abs() < 1e-12);
        assert_eq!(p.mayer_r2(1.2 * 1.2), e);
        assert_eq!(p.mayer_r2(1.6 * 1.6), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PairPotential::hard_sphere(0.0, 3).is_err());
        assert!(PairPotential::hard_sphere(1.0, 4).is_err());
        assert!(PairPotential::square_well(1.0, 3, 1.0, 1.0).is_err());
    }

    #[test]
    fn sampler_matches_signed_density() {
        // E[sign] under |f|/Z equals int f / int |f|
        let p = PairPotential::square_well(1.0, 3, 1.5, -0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let (d, s) = p.sample_bond(&mut rng);
            assert_eq!(s, p.mayer_r2(norm2(&d)).signum());
            sum += s;
        }
        let expect = p.mayer_integral() / p.abs_integral();
        assert!((sum / n as f64 - expect).abs() < 0.01);
    }
}
