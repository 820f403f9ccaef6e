use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_unit, dim_harm_f64, norm, zonal_profile, SphereRule};
use crate::coeffs::{log_term, CoefficientSequence};
use crate::logspace::{log_sum_exp, SignedLog};
use crate::{Error, Result};

/// Terms whose bound falls this far (in log) below the largest are skipped.
const NEGLIGIBLE_LOG: f64 = 80.0;
/// Largest degree evaluated through the recurrence.
pub const MAX_RECURRENCE_DEGREE: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalBasis {
    pub d: u32,
    pub pole: Vec<f64>,
    pub k_max: u128,
}

/// `f(x) = sum_j a_j Y_(k_j)(x)`, an orthonormal zonal series with
/// `M_2^2(f, r) = sum_j a_j^2 r^(2 k_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainerFunction {
    pub basis: ZonalBasis,
    pub coeffs: CoefficientSequence,
}

pub fn build_l2_attainer(c: &CoefficientSequence, d: u32, pole: &[f64]) -> Result<AttainerFunction> {
    if d < 2 {
        return Err(Error::Domain("dimension must be at least 2", d as f64));
    }
    if pole.len() != d as usize {
        return Err(Error::Config("pole dimension mismatch"));
    }
    check_unit(pole)?;
    Ok(AttainerFunction {
        basis: ZonalBasis { d, pole: pole.to_vec(), k_max: c.max_k() },
        coeffs: c.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadEstimate {
    pub log_m2_sq: f64,
    /// Relative standard error of a Monte Carlo estimate.
    pub rel_std_err: Option<f64>,
}

impl AttainerFunction {
    fn active_terms(&self, ln_r: f64) -> Vec<(u128, f64)> {
        let d = self.basis.d;
        let mags: Vec<(u128, f64, f64)> = self
            .coeffs
            .entries
            .iter()
            .map(|e| {
                let m = log_term(e.k, e.log_a, ln_r);
                (e.k, m, m + 0.5 * libm::log(dim_harm_f64(e.k as f64, d)))
            })
            .collect();
        let top = mags.iter().map(|m| m.2).fold(f64::NEG_INFINITY, f64::max);
        mags.into_iter()
            .filter(|m| m.1 > f64::NEG_INFINITY && m.2 >= top - NEGLIGIBLE_LOG)
            .map(|m| (m.0, m.1))
            .collect()
    }

    /// Largest degree contributing at radius `exp(ln_r)`.
    pub fn active_degree(&self, ln_r: f64) -> u128 {
        self.active_terms(ln_r).iter().map(|t| t.0).max().unwrap_or(0)
    }

    /// `f(r y)` for unit `y`, as sign and log-magnitude.
    pub fn eval_polar(&self, ln_r: f64, y: &[f64]) -> Result<SignedLog> {
        let d = self.basis.d;
        let t: f64 = y.iter().zip(&self.basis.pole).map(|(a, b)| a * b).sum();
        let t = t.clamp(-1.0, 1.0);
        let mut terms = Vec::new();
        for (k, ln_mag) in self.active_terms(ln_r) {
            if k > MAX_RECURRENCE_DEGREE {
                return Err(Error::Config("zonal degree beyond recurrence limit"));
            }
            let y_val = zonal_profile(k as u64, d, t)? / libm::sqrt(dim_harm_f64(k as f64, d));
            terms.push(SignedLog::from_f64(y_val).scale(ln_mag));
        }
        Ok(SignedLog::sum(&terms))
    }

    /// `f(x)` for `|x| < 1`.
    pub fn eval(&self, x: &[f64]) -> Result<SignedLog> {
        if x.len() != self.basis.d as usize {
            return Err(Error::Config("point dimension mismatch"));
        }
        let rho = norm(x);
        if !(rho < 1.0) {
            return Err(Error::Domain("point must lie in the open ball", rho));
        }
        if rho == 0.0 {
            return self.eval_polar(f64::NEG_INFINITY, &self.basis.pole);
        }
        let y: Vec<f64> = x.iter().map(|v| v / rho).collect();
        self.eval_polar(libm::log(rho), &y)
    }

    /// Closed form `log M_2^2(f, r)` from the orthonormality of the series.
    pub fn log_m2_sq_closed(&self, ln_r: f64) -> f64 {
        let mut top = f64::NEG_INFINITY;
        for e in &self.coeffs.entries {
            top = top.max(2.0 * log_term(e.k, e.log_a, ln_r));
        }
        if top == f64::NEG_INFINITY {
            return top;
        }
        let mut acc = 0.0;
        for e in self.coeffs.entries.iter().rev() {
            acc += libm::exp(2.0 * log_term(e.k, e.log_a, ln_r) - top);
        }
        top + libm::log(acc)
    }
}

/// `log M_2^2(f, r)` by cubature over the sphere of radius `r`.
pub fn m2_quadrature(f: &AttainerFunction, r: f64, rule: &SphereRule) -> Result<QuadEstimate> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain("radius must lie in [0, 1)", r));
    }
    if rule.dim() != f.basis.d {
        return Err(Error::Config("quadrature rule dimension mismatch"));
    }
    let ln_r = libm::log(r);
    let required = f.active_degree(ln_r).saturating_mul(2);
    if let Some(avail) = rule.exact_degree() {
        if (avail as u128) < required {
            return Err(Error::QuadratureOrder {
                required: required.min(usize::MAX as u128) as usize,
                available: avail,
            });
        }
    }
    let nodes = rule.nodes()?;
    let mut logs = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let v = f.eval_polar(ln_r, &n.point)?;
        logs.push(2.0 * v.ln_abs + libm::log(n.weight));
    }
    let log_m2_sq = log_sum_exp(&logs);
    let rel_std_err = if rule.is_exact() {
        None
    } else {
        // sample values relative to the mean
        let m = nodes.len() as f64;
        let mean_log = log_m2_sq;
        let mut var = 0.0;
        for (l, n) in logs.iter().zip(&nodes) {
            let rel = libm::exp(l - libm::log(n.weight) - mean_log);
            var += (rel - 1.0) * (rel - 1.0);
        }
        Some(libm::sqrt(var / (m - 1.0).max(1.0) / m))
    };
    Ok(QuadEstimate { log_m2_sq, rel_std_err })
}
