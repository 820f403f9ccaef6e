//! Power-series coefficients `a_k` with `sum a_k^2 r^2k` equivalent to `w^2`.
//!
//! Each coefficient is a Hadamard coefficient `a_k = inf_r w~(r) / r^k` of
//! the log-convex envelope `w~`, i.e. the intercept of the supporting line
//! of slope `k` in `(log r, log w~)`. A greedy pass keeps only the slopes
//! needed so that the largest term stays within a fixed factor of `w~`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::envelope::{build_envelope, logconvexity_defect, Grid, LogConvexEnvelope};
use crate::logspace::log_sum_exp;
use crate::weights::WeightFunction;
use crate::{Error, Result};

const SLOPE_TOL: f64 = 1e-9;

/// A supporting line of integer slope `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    pub k: u128,
    pub log_a: f64,
    /// `ln r` of the envelope node touched by the line.
    pub ln_r_touch: f64,
}

/// `log a_k` and the touching radius: minimizes `log w~(r) - k log r` over
/// the hull nodes (a convex sequence, searched by slope bisection).
pub fn hadamard_coefficient(env: &LogConvexEnvelope, k: u128) -> Tangent {
    let kf = k as f64;
    let nodes = &env.nodes;
    // first node whose right slope is >= k
    let slopes = env.slopes();
    let i = slopes.partition_point(|&s| s < kf);
    let (u, v) = nodes[i];
    Tangent { k, log_a: v - kf * u, ln_r_touch: u }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub k: u128,
    pub log_a: f64,
}

/// Sparse power series `sum_j a_j r^(k_j)`, `k_j` strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    pub entries: Vec<CoeffEntry>,
    pub tangency_radii: Vec<f64>,
    pub crossover: f64,
}

/// `log` of the term `a r^k` at `ln r`; `k = 0` is constant even at `r = 0`.
#[inline]
pub fn log_term(k: u128, log_a: f64, ln_r: f64) -> f64 {
    if k == 0 {
        log_a
    } else {
        log_a + k as f64 * ln_r
    }
}

impl CoefficientSequence {
    pub fn from_entries(entries: Vec<CoeffEntry>, crossover: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Config("coefficient sequence is empty"));
        }
        if entries.windows(2).any(|e| e[1].k <= e[0].k) {
            return Err(Error::Config("exponents must be strictly increasing"));
        }
        if entries.iter().any(|e| !e.log_a.is_finite()) {
            return Err(Error::Config("coefficients must be positive and finite"));
        }
        Ok(CoefficientSequence { entries, tangency_radii: Vec::new(), crossover })
    }

    /// `log max_j a_j r^(k_j)`.
    pub fn log_max_term(&self, ln_r: f64) -> f64 {
        self.entries
            .iter()
            .map(|e| log_term(e.k, e.log_a, ln_r))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_k(&self) -> u128 {
        self.entries.last().map(|e| e.k).unwrap_or(0)
    }
}

/// Greedy lacunary selection of supporting lines.
///
/// Starts from the line touching the envelope at `r_min`. While some grid
/// point lies beyond the covered range, picks the largest integer slope
/// whose supporting line still covers the first uncovered point within
/// `crossover`, so coverage stays contiguous:
/// `max_j a_j r^(k_j) >= w~(r) / crossover` on the grid.
pub fn greedy_lacunary(
    env: &LogConvexEnvelope,
    crossover: f64,
    k_max: u128,
) -> Result<CoefficientSequence> {
    if !(crossover > 1.0) {
        return Err(Error::Domain("crossover factor must exceed 1", crossover));
    }
    let ln_c = libm::log(crossover);
    let us: Vec<f64> = env.grid.iter().map(|p| p.ln_r).collect();
    let vs = env.grid_values();
    let last = us.len() - 1;
    let gap = |t: &Tangent, i: usize| vs[i] - (t.log_a + t.k as f64 * us[i]);

    let first_slope = env.slopes().first().copied().unwrap_or(0.0);
    let k0 = libm::floor(first_slope + SLOPE_TOL);
    let k0 = if k0 <= 0.0 { 0 } else { k0 as u128 };
    if k0 > k_max {
        return Err(Error::SlopeOverflow {
            k_required: k0 as f64,
            k_max,
            covered_to_r: 0.0,
        });
    }
    let mut line = hadamard_coefficient(env, k0);
    let mut entries = alloc::vec![CoeffEntry { k: line.k, log_a: line.log_a }];
    let mut radii = alloc::vec![libm::exp(line.ln_r_touch)];
    let mut covered = 0usize;
    while covered < last && gap(&line, covered + 1) <= ln_c {
        covered += 1;
    }

    while covered < last {
        let next = covered + 1;
        let sigma = env.left_slope(us[next]);
        let lo_f = libm::ceil(sigma - SLOPE_TOL);
        let mut lo = if lo_f <= 0.0 { 0 } else { lo_f as u128 };
        if lo <= line.k {
            lo = line.k + 1;
        }
        if lo > k_max {
            return Err(Error::SlopeOverflow {
                k_required: lo_f,
                k_max,
                covered_to_r: libm::exp(us[covered]),
            });
        }
        // gap at `next` is non-decreasing in k on [lo, inf)
        let chosen = if gap(&hadamard_coefficient(env, lo), next) > ln_c {
            lo
        } else {
            let (mut good, mut bad) = (lo, k_max.saturating_add(1));
            while bad - good > 1 {
                let mid = good + (bad - good) / 2;
                if gap(&hadamard_coefficient(env, mid), next) <= ln_c {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        };
        line = hadamard_coefficient(env, chosen);
        entries.push(CoeffEntry { k: line.k, log_a: line.log_a });
        radii.push(libm::exp(line.ln_r_touch));
        covered = next;
        while covered < last && gap(&line, covered + 1) <= ln_c {
            covered += 1;
        }
    }
    Ok(CoefficientSequence { entries, tangency_radii: radii, crossover })
}

/// `log sum_j a_j^2 r^(2 k_j)` at `ln r` (pass `-inf` for `r = 0`).
pub fn eval_series_sq_ln(c: &CoefficientSequence, ln_r: f64) -> f64 {
    let terms: Vec<f64> = c.entries.iter().map(|e| 2.0 * log_term(e.k, e.log_a, ln_r)).collect();
    log_sum_exp(&terms)
}

/// `log sum_j a_j^2 r^(2 k_j)` for `r` in `[0, 1)`.
pub fn eval_series_sq(c: &CoefficientSequence, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain("series radius must lie in [0, 1)", r));
    }
    Ok(eval_series_sq_ln(c, libm::log(r)))
}

/// Extremes of `sum a_j^2 r^(2k_j) / w^2(r)` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub log_min_ratio: f64,
    pub log_max_ratio: f64,
    pub argmin_r: f64,
    pub argmax_r: f64,
    /// `max w / w~` on the grid.
    pub defect: f64,
    /// Lower threshold `(defect * crossover)^-2 - 1e-6`.
    pub threshold: f64,
    pub pass: bool,
}

pub const L2_TOLERANCE: f64 = 1e-6;

pub fn verify_l2_equiv(
    c: &CoefficientSequence,
    w: &WeightFunction,
    grid: &Grid,
) -> Result<RatioReport> {
    let env = build_envelope(w, grid)?;
    let (defect, _) = logconvexity_defect(w, &env)?;
    let mut lo = (f64::INFINITY, 0.0);
    let mut hi = (f64::NEG_INFINITY, 0.0);
    for p in grid.points() {
        let lr = eval_series_sq_ln(c, p.ln_r) - 2.0 * w.log_weight_at(p.ln_s)?;
        if lr < lo.0 {
            lo = (lr, p.r());
        }
        if lr > hi.0 {
            hi = (lr, p.r());
        }
    }
    let threshold = 1.0 / (defect * defect * c.crossover * c.crossover) - L2_TOLERANCE;
    let min_ratio = libm::exp(lo.0);
    let max_ratio = libm::exp(hi.0);
    Ok(RatioReport {
        min_ratio,
        max_ratio,
        log_min_ratio: lo.0,
        log_max_ratio: hi.0,
        argmin_r: lo.1,
        argmax_r: hi.1,
        defect,
        threshold,
        pass: max_ratio.is_finite() && min_ratio >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{envelope_of_samples, GridPoint, GridSpec};

    fn grid() -> Grid {
        Grid::geometric(GridSpec::default()).unwrap()
    }

    /// Brute-force minimum of w(r)/r^k over the grid samples.
    fn brute_log_hadamard(w: &WeightFunction, g: &Grid, k: u32) -> (f64, f64) {
        g.points()
            .iter()
            .map(|p| (w.log_weight_at(p.ln_s).unwrap() - k as f64 * p.ln_r, p.r()))
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    #[test]
    fn hadamard_power_one() {
        let w = WeightFunction::power(1.0).unwrap();
        let g = grid();
        let env = build_envelope(&w, &g).unwrap();
        let a0 = hadamard_coefficient(&env, 0);
        assert!((a0.log_a.exp() - 1.0).abs() < 1e-9);
        for k in 1..=8u32 {
            let t = hadamard_coefficient(&env, k as u128);
            let (brute, r_at) = brute_log_hadamard(&w, &g, k);
            assert!((t.log_a - brute).abs() < 1e-12, "k = {k}");
            assert!((t.ln_r_touch.exp() - r_at).abs() < 1e-12);
        }
        // analytic optimum r = k/(k+1): (k+1)(1+1/k)^k, on-grid for k = 1, 3
        let t1 = hadamard_coefficient(&env, 1);
        assert!((t1.log_a.exp() - 4.0).abs() < 1e-9);
        assert!((t1.ln_r_touch.exp() - 0.5).abs() < 1e-12);
        let t3 = hadamard_coefficient(&env, 3);
        assert!((t3.log_a.exp() - 4.0 * (4.0f64 / 3.0).powi(3)).abs() < 1e-9);
        assert!((t3.ln_r_touch.exp() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn greedy_covers_power_weight() {
        let w = WeightFunction::power(1.0).unwrap();
        let g = grid();
        let env = build_envelope(&w, &g).unwrap();
        let c = greedy_lacunary(&env, 2.0, 1 << 100).unwrap();
        assert_eq!(c.entries[0].k, 0);
        assert!(c.entries.windows(2).all(|e| e[1].k > e[0].k));
        let vals = env.grid_values();
        for (p, v) in g.points().iter().zip(&vals) {
            let m = c.log_max_term(p.ln_r);
            assert!(m >= v - 2f64.ln(), "coverage fails at r = {}", p.r());
            // every term is a supporting line
            for e in &c.entries {
                assert!(log_term(e.k, e.log_a, p.ln_r) <= v + 1e-9 * v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn single_line_envelope_needs_one_entry() {
        // log w~ = 2 + 3 log r on the grid
        let pts: Vec<GridPoint> = grid().points().to_vec();
        let samples = pts.iter().map(|p| 2.0 + 3.0 * p.ln_r).collect();
        let env = envelope_of_samples(pts, samples);
        let c = greedy_lacunary(&env, 2.0, 100).unwrap();
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[0].k, 3);
        assert!((c.entries[0].log_a - 2.0).abs() < 1e-9);
    }

    #[test]
    fn exp_power_gaps_grow_and_overflow_is_reported() {
        let w = WeightFunction::exp_power(1.0).unwrap().normalize();
        let small = Grid::geometric(GridSpec { s_min_exp: 9, per_dyad: 16, origin_tail_exp: 40 }).unwrap();
        let env = build_envelope(&w, &small).unwrap();
        let c = greedy_lacunary(&env, 2.0, 1 << 20).unwrap();
        // coverage oracle
        for (p, v) in small.points().iter().zip(env.grid_values()) {
            assert!(c.log_max_term(p.ln_r) >= v - 2f64.ln());
        }
        let ks: Vec<f64> = c.entries.iter().map(|e| e.k as f64).filter(|&k| k > 0.0).collect();
        let tail_ratio = ks[ks.len() - 1] / ks[ks.len() - 2];
        assert!(tail_ratio > 1.01, "ratio {tail_ratio}");
        // the full default grid needs slopes near 2^80
        let env = build_envelope(&w, &grid()).unwrap();
        match greedy_lacunary(&env, 2.0, 1 << 20) {
            Err(Error::SlopeOverflow { covered_to_r, .. }) => assert!(covered_to_r > 0.99),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn series_examples() {
        let one = CoefficientSequence::from_entries(alloc::vec![CoeffEntry { k: 0, log_a: 0.0 }], 2.0).unwrap();
        assert_eq!(eval_series_sq(&one, 0.3).unwrap(), 0.0);
        assert_eq!(eval_series_sq(&one, 0.0).unwrap(), 0.0);
        let lin = CoefficientSequence::from_entries(alloc::vec![CoeffEntry { k: 1, log_a: 0.0 }], 2.0).unwrap();
        assert!((eval_series_sq(&lin, 0.5).unwrap() - 0.25f64.ln()).abs() < 1e-15);
        assert!(eval_series_sq(&lin, 1.0).is_err());
    }

    #[test]
    fn series_near_boundary_matches_direct_sum() {
        let w = WeightFunction::power(1.0).unwrap();
        let g = grid();
        let env = build_envelope(&w, &g).unwrap();
        let c = greedy_lacunary(&env, 2.0, 1 << 100).unwrap();
        let r = 1.0 - 2f64.powi(-10);
        let direct: f64 = c
            .entries
            .iter()
            .map(|e| ((2.0 * e.log_a).exp()) * r.powf(2.0 * e.k as f64))
            .sum();
        let ratio = (eval_series_sq(&c, r).unwrap() - 2.0 * 1024f64.ln()).exp();
        assert!((eval_series_sq(&c, r).unwrap() - direct.ln()).abs() < 1e-12);
        assert!(ratio >= 0.25 && ratio < 10.0, "ratio {ratio}");
    }

    #[test]
    fn l2_equivalence_reports() {
        let w = WeightFunction::power(1.0).unwrap();
        let g = grid();
        let env = build_envelope(&w, &g).unwrap();
        let c = greedy_lacunary(&env, 2.0, 1 << 100).unwrap();
        let rep = verify_l2_equiv(&c, &w, &g).unwrap();
        assert!(rep.pass);
        assert!(rep.min_ratio >= 0.25 - 1e-6);
        let one = CoefficientSequence::from_entries(alloc::vec![CoeffEntry { k: 0, log_a: 0.0 }], 2.0).unwrap();
        let bad = verify_l2_equiv(&one, &w, &g).unwrap();
        assert!(!bad.pass);
        assert!(bad.min_ratio < 1e-20);
    }
}
