//! Spherical harmonics of zonal type.
//!
//! `Z_k(x, y)` is the reproducing kernel of the degree-`k` harmonic
//! polynomials restricted to the sphere, normalized against the rotation
//! invariant probability measure; `Y_k = Z_k / sqrt(dim H_k)` has unit
//! `L^2` norm and sup norm `sqrt(dim H_k)`.

mod attainer;
mod quadrature;

pub use attainer::{build_l2_attainer, m2_quadrature, AttainerFunction, QuadEstimate, ZonalBasis};
pub use quadrature::{gauss_legendre, SphereRule};
pub(crate) use quadrature::uniform_on_sphere;

use crate::{Error, Result};

fn binom(n: i64, m: i64) -> u128 {
    if m < 0 || n < m {
        return 0;
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc * (n as u128 - m as u128 + i) / i;
    }
    acc
}

/// Dimension of the homogeneous harmonic polynomials of degree `k` in `d`
/// variables: `C(k+d-1, d-1) - C(k+d-3, d-1)`.
pub fn dim_harm(k: u64, d: u32) -> u128 {
    let (k, d) = (k as i64, d as i64);
    binom(k + d - 1, d - 1) - binom(k + d - 3, d - 1)
}

/// [`dim_harm`] in floating point, usable for exponents beyond `u64`.
pub fn dim_harm_f64(k: f64, d: u32) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    if d == 2 {
        return 2.0;
    }
    // (2k + d - 2) / (k + d - 2) * C(k + d - 2, d - 2)
    let mut c = 1.0;
    for i in 1..=(d - 2) {
        c *= (k + i as f64) / i as f64;
    }
    (2.0 * k + d as f64 - 2.0) / (k + d as f64 - 2.0) * c
}

const T_TOL: f64 = 1e-12;

/// Gegenbauer polynomial `C_k^lambda(t)` by the three-term recurrence.
///
/// At `lambda = 0` the value returned is the circle kernel `2 T_k(t)`
/// (and `1` for `k = 0`), which is what [`zonal`] uses for `d = 2`.
pub fn gegenbauer(k: u64, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > -0.5) {
        return Err(Error::Domain("Gegenbauer order must exceed -1/2", lambda));
    }
    if !(libm::fabs(t) <= 1.0 + T_TOL) {
        return Err(Error::Domain("Gegenbauer argument must lie in [-1, 1]", t));
    }
    let t = t.clamp(-1.0, 1.0);
    if lambda == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 2.0 * chebyshev_t(k, t) });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, 2.0 * lambda * t);
    for n in 2..=k {
        let nf = n as f64;
        let next = (2.0 * t * (nf + lambda - 1.0) * cur - (nf + 2.0 * lambda - 2.0) * prev) / nf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn chebyshev_t(k: u64, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, t);
    for _ in 1..k {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Z_k` on the sphere as a function of `t = <x, y>`.
pub fn zonal_profile(k: u64, d: u32, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain("dimension must be at least 2", d as f64));
    }
    if d == 2 || k == 0 {
        return gegenbauer(k, 0.0, t);
    }
    let lambda = (d as f64 - 2.0) / 2.0;
    Ok((k as f64 + lambda) / lambda * gegenbauer(k, lambda, t)?)
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

fn check_unit(y: &[f64]) -> Result<()> {
    let n = norm(y);
    if libm::fabs(n - 1.0) > 1e-12 {
        return Err(Error::Domain("pole must be a unit vector", n));
    }
    Ok(())
}

/// Zonal harmonic `Z_k(x, y) = |x|^k Z_k(x/|x|, y)` for `x` in the closed
/// ball and unit `y`.
pub fn zonal(k: u64, d: u32, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != d as usize || y.len() != d as usize {
        return Err(Error::Config("point dimension mismatch"));
    }
    check_unit(y)?;
    if k == 0 {
        return Ok(1.0);
    }
    let rho = norm(x);
    if rho == 0.0 {
        return Ok(0.0);
    }
    let t = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / rho;
    Ok(libm::pow(rho, k as f64) * zonal_profile(k, d, t.clamp(-1.0, 1.0))?)
}

/// `Y_k = Z_k / sqrt(dim H_k)`.
pub fn y_k(k: u64, d: u32, pole: &[f64], x: &[f64]) -> Result<f64> {
    Ok(zonal(k, d, x, pole)? / libm::sqrt(dim_harm(k, d) as f64))
}
