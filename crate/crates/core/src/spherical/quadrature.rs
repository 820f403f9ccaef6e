use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]` (weights sum to 2).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if libm::fabs(dz) < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Cubature on the unit sphere for the normalized surface measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SphereRule {
    /// `n` equispaced angles on the circle; exact for trigonometric
    /// polynomials of degree `< n`.
    Circle { n: usize },
    /// Gauss-Legendre in `cos theta` times equispaced `phi` on `S^2`.
    GaussProduct { n_theta: usize, n_phi: usize },
    /// Seeded uniform samples on `S^(d-1)`.
    MonteCarlo { d: u32, samples: usize, seed: u64 },
}

pub struct Node {
    pub point: Vec<f64>,
    pub weight: f64,
}

impl SphereRule {
    /// Cheapest rule integrating polynomials of the given degree exactly
    /// (Monte Carlo for `d >= 4`).
    pub fn exact_for(d: u32, degree: usize, seed: u64) -> Self {
        match d {
            2 => SphereRule::Circle { n: degree + 1 },
            3 => SphereRule::GaussProduct { n_theta: degree / 2 + 1, n_phi: degree + 1 },
            _ => SphereRule::MonteCarlo { d, samples: 200_000, seed },
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            SphereRule::Circle { .. } => 2,
            SphereRule::GaussProduct { .. } => 3,
            SphereRule::MonteCarlo { d, .. } => *d,
        }
    }

    /// Highest polynomial degree integrated exactly; `None` for Monte Carlo.
    pub fn exact_degree(&self) -> Option<usize> {
        match *self {
            SphereRule::Circle { n } => Some(n.saturating_sub(1)),
            SphereRule::GaussProduct { n_theta, n_phi } => {
                Some((2 * n_theta).saturating_sub(1).min(n_phi.saturating_sub(1)))
            }
            SphereRule::MonteCarlo { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact_degree().is_some()
    }

    pub fn nodes(&self) -> Result<Vec<Node>> {
        match *self {
            SphereRule::Circle { n } => {
                if n == 0 {
                    return Err(Error::Config("circle rule needs nodes"));
                }
                Ok((0..n)
                    .map(|i| {
                        let a = 2.0 * PI * i as f64 / n as f64;
                        Node { point: alloc::vec![libm::cos(a), libm::sin(a)], weight: 1.0 / n as f64 }
                    })
                    .collect())
            }
            SphereRule::GaussProduct { n_theta, n_phi } => {
                if n_theta == 0 || n_phi == 0 {
                    return Err(Error::Config("product rule needs nodes"));
                }
                let (ct, wt) = gauss_legendre(n_theta);
                let mut out = Vec::with_capacity(n_theta * n_phi);
                for (c, w) in ct.iter().zip(&wt) {
                    let st = libm::sqrt((1.0 - c * c).max(0.0));
                    for j in 0..n_phi {
                        let ph = 2.0 * PI * j as f64 / n_phi as f64;
                        out.push(Node {
                            point: alloc::vec![st * libm::cos(ph), st * libm::sin(ph), *c],
                            weight: w / 2.0 / n_phi as f64,
                        });
                    }
                }
                Ok(out)
            }
            SphereRule::MonteCarlo { d, samples, seed } => {
                if samples == 0 || d < 2 {
                    return Err(Error::Config("Monte Carlo rule needs samples and d >= 2"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..samples)
                    .map(|_| Node { point: uniform_on_sphere(&mut rng, d), weight: 1.0 / samples as f64 })
                    .collect())
            }
        }
    }
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal by Box-Muller.
pub(crate) fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - unit_f64(rng);
    let u2 = unit_f64(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
}

pub(crate) fn uniform_on_sphere(rng: &mut ChaCha8Rng, d: u32) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| normal(rng)).collect();
        let n = libm::sqrt(v.iter().map(|x| x * x).sum());
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}
