//! Radial weights `w(r)` evaluated through the boundary distance `s = 1 - r`.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack for inequalities between logarithms that hold with equality in
/// exact arithmetic (`Phi(2^j) <= A^k` for power weights, say).
pub const LOG_SLACK: f64 = 1e-9;

/// `a <= b` up to [`LOG_SLACK`], relative to the size of the operands.
pub fn log_le(a: f64, b: f64) -> bool {
    a <= b + LOG_SLACK * libm::fmax(1.0, libm::fabs(b))
}

/// Samples `(ln s_i, log w(1 - s_i))`, `s` strictly decreasing from `s = 1`,
/// interpolated linearly in `(log s, log w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    ln_s: Vec<f64>,
    log_w: Vec<f64>,
}

impl Table {
    /// Builds a table from `(s, log w)` pairs.
    ///
    /// The first node must be `s = 1` (the origin `r = 0`), `s` must
    /// decrease strictly and `log w` must not decrease.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Table("need at least two samples"));
        }
        if samples[0].0 != 1.0 {
            return Err(Error::Table("first sample must be s = 1"));
        }
        let mut ln_s = Vec::with_capacity(samples.len());
        let mut log_w = Vec::with_capacity(samples.len());
        for (i, &(s, lw)) in samples.iter().enumerate() {
            if !(s > 0.0 && s <= 1.0) || !lw.is_finite() {
                return Err(Error::Table("samples need s in (0,1] and finite log w"));
            }
            if i > 0 {
                let (ps, plw) = samples[i - 1];
                if s >= ps {
                    return Err(Error::Table("s must be strictly decreasing"));
                }
                if lw < plw {
                    return Err(Error::Table("log w must be non-decreasing in r"));
                }
            }
            ln_s.push(libm::log(s));
            log_w.push(lw);
        }
        Ok(Table { ln_s, log_w })
    }

    pub fn len(&self) -> usize {
        self.ln_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_s.is_empty()
    }

    pub fn ln_s_min(&self) -> f64 {
        *self.ln_s.last().unwrap()
    }

    fn eval(&self, ln_s: f64) -> Result<f64> {
        let lo = self.ln_s_min();
        if ln_s < lo || ln_s > 0.0 {
            return Err(Error::TableRange {
                s: libm::exp(ln_s),
                s_min: libm::exp(lo),
                s_max: 1.0,
            });
        }
        // ln_s is decreasing along the table
        let i = self.ln_s.partition_point(|&x| x > ln_s);
        if i == 0 {
            return Ok(self.log_w[0]);
        }
        if self.ln_s[i] == ln_s {
            return Ok(self.log_w[i]);
        }
        let (x0, x1) = (self.ln_s[i - 1], self.ln_s[i]);
        let (y0, y1) = (self.log_w[i - 1], self.log_w[i]);
        let t = (ln_s - x0) / (x1 - x0);
        Ok(y0 + t * (y1 - y0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// `(1 - r)^-beta`
    Power { beta: f64 },
    /// `log(e / (1 - r))^gamma`
    LogPower { gamma: f64 },
    /// `exp((1 - r)^-gamma)`
    ExpPower { gamma: f64 },
    Tabulated(Table),
}

/// A weight function on `[0, 1)`, stored as `log w` plus an additive offset.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    kind: WeightKind,
    offset: f64,
}

impl WeightFunction {
    pub fn new(kind: WeightKind) -> Result<Self> {
        match &kind {
            WeightKind::Power { beta: x }
            | WeightKind::LogPower { gamma: x }
            | WeightKind::ExpPower { gamma: x } => {
                if !(x.is_finite() && *x > 0.0) {
                    return Err(Error::Domain("weight exponent must be positive", *x));
                }
            }
            WeightKind::Tabulated(_) => {}
        }
        Ok(WeightFunction { kind, offset: 0.0 })
    }

    pub fn power(beta: f64) -> Result<Self> {
        Self::new(WeightKind::Power { beta })
    }

    pub fn log_power(gamma: f64) -> Result<Self> {
        Self::new(WeightKind::LogPower { gamma })
    }

    pub fn exp_power(gamma: f64) -> Result<Self> {
        Self::new(WeightKind::ExpPower { gamma })
    }

    pub fn tabulated(table: Table) -> Self {
        WeightFunction { kind: WeightKind::Tabulated(table), offset: 0.0 }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// The same weight multiplied by `exp(shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        WeightFunction { kind: self.kind.clone(), offset: self.offset + shift }
    }

    fn raw_log_weight(&self, ln_s: f64) -> Result<f64> {
        Ok(match &self.kind {
            WeightKind::Power { beta } => -beta * ln_s,
            WeightKind::LogPower { gamma } => gamma * libm::log(1.0 - ln_s),
            WeightKind::ExpPower { gamma } => libm::exp(-gamma * ln_s),
            WeightKind::Tabulated(t) => t.eval(ln_s)?,
        })
    }

    /// `log w(1 - s)` from `ln s`, `ln s <= 0`.
    pub fn log_weight_at(&self, ln_s: f64) -> Result<f64> {
        if !(ln_s <= 0.0) || ln_s == f64::NEG_INFINITY {
            return Err(Error::Domain("ln s must lie in (-inf, 0]", ln_s));
        }
        Ok(self.raw_log_weight(ln_s)? + self.offset)
    }

    /// `log w(1 - s)` for `s` in `(0, 1]`.
    pub fn eval_log_weight(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::Domain("s must lie in (0, 1]", s));
        }
        self.log_weight_at(libm::log(s))
    }

    /// `log Phi(x) = log w(1 - 1/x)` for `x >= 1`.
    pub fn phi(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) || x == f64::INFINITY {
            return Err(Error::Domain("Phi needs x >= 1", x));
        }
        self.log_weight_at(-libm::log(x))
    }

    /// `log Phi(2^j)`, valid for any real `j >= 0` (no underflow of `2^-j`).
    pub fn log_phi_pow2(&self, j: f64) -> Result<f64> {
        if !(j >= 0.0) {
            return Err(Error::Domain("Phi(2^j) needs j >= 0", j));
        }
        self.log_weight_at(-j * LN_2)
    }

    /// Shifts `log w` so that `w(0) = 1`. Only the offset changes.
    pub fn normalize(&self) -> Self {
        // raw_log_weight(0) never fails: tables always contain s = 1
        let origin = self.raw_log_weight(0.0).unwrap_or(0.0);
        WeightFunction { kind: self.kind.clone(), offset: -origin }
    }

    pub fn is_normalized(&self) -> bool {
        matches!(self.log_weight_at(0.0), Ok(v) if v == 0.0)
    }
}

/// Measured doubling constant `sup w(1 - s/2) / w(1 - s)` on a probe grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingEstimate {
    /// Measured constant (may be `inf` when divergent).
    pub a: f64,
    pub log_a: f64,
    /// `max(a, 2)`, the value used by the construction.
    pub a_clamped: f64,
    pub divergent: bool,
    /// `s` attaining the maximal ratio, and its base-2 logarithm.
    pub witness_s: f64,
    pub witness_log2_s: f64,
    /// `Phi(2x) <= A_clamped Phi(x)` held on every probed `x = 2^j`.
    pub phi_form_holds: bool,
}

/// Refinement points per dyad of the doubling probe.
pub const DOUBLING_SUBDIVISIONS: u32 = 8;

/// Estimates the doubling constant on `s = 2^-(j + i/8)`, `0 <= j <= j_max`.
///
/// Ratios are formed in log space; `divergent` is set when some ratio
/// exceeds `cap`. Measured constants within `1e-12` (relative) of a power
/// of two are reported as that power of two.
pub fn estimate_doubling(w: &WeightFunction, j_max: u32, cap: f64) -> Result<DoublingEstimate> {
    if j_max < 4 {
        return Err(Error::Config("doubling probe needs j_max >= 4"));
    }
    let log_cap = libm::log(cap);
    let mut best = f64::NEG_INFINITY;
    let mut best_sigma = 0.0;
    let steps = j_max * DOUBLING_SUBDIVISIONS;
    for i in 0..=steps {
        let sigma = i as f64 / DOUBLING_SUBDIVISIONS as f64;
        let ln_s = -sigma * LN_2;
        let ratio = w.log_weight_at(ln_s - LN_2)? - w.log_weight_at(ln_s)?;
        if ratio > best {
            best = ratio;
            best_sigma = sigma;
        }
    }
    let (a, log_a) = snap_dyadic_log(best);
    let a_clamped = libm::fmax(a, 2.0);
    let log_a_clamped = libm::log(a_clamped);
    let mut phi_form_holds = true;
    for j in 0..j_max {
        let lo = w.log_phi_pow2(j as f64)?;
        let hi = w.log_phi_pow2((j + 1) as f64)?;
        if !log_le(hi - lo, log_a_clamped) {
            phi_form_holds = false;
        }
    }
    Ok(DoublingEstimate {
        a,
        log_a,
        a_clamped,
        divergent: best > log_cap,
        witness_s: libm::exp2(-best_sigma),
        witness_log2_s: 0.0 - best_sigma,
        phi_form_holds,
    })
}

/// `(A, log A)`, with `A` made an exact power of two when within rounding.
fn snap_dyadic_log(log_a: f64) -> (f64, f64) {
    let log2_a = log_a / LN_2;
    let nearest = libm::round(log2_a);
    if log2_a.is_finite() && libm::fabs(log2_a - nearest) < 1e-12 * libm::fmax(1.0, nearest) {
        (libm::exp2(nearest), nearest * LN_2)
    } else {
        (libm::exp(log_a), log_a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn power_weight_at_half() {
        let w = WeightFunction::power(1.0).unwrap();
        assert!((w.eval_log_weight(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exp_power_before_normalization() {
        let w = WeightFunction::exp_power(1.0).unwrap();
        assert_eq!(w.eval_log_weight(2f64.powi(-10)).unwrap(), 1024.0);
    }

    #[test]
    fn table_interpolates_in_log_log() {
        // chord through (ln 1, 0) and (ln 1/4, ln 4) at ln 1/2 is ln 2
        let t = Table::new(&[(1.0, 0.0), (0.25, 4f64.ln())]).unwrap();
        let w = WeightFunction::tabulated(t);
        assert!((w.eval_log_weight(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(w.eval_log_weight(0.125), Err(Error::TableRange { .. })));
    }

    #[test]
    fn domain_errors() {
        let w = WeightFunction::power(1.0).unwrap();
        for s in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(w.eval_log_weight(s), Err(Error::Domain(..))));
        }
        assert!(matches!(w.phi(0.5), Err(Error::Domain(..))));
        assert!(WeightFunction::power(-1.0).is_err());
        assert!(Table::new(&[(0.5, 0.0), (0.25, 1.0)]).is_err());
        assert!(Table::new(&[(1.0, 1.0), (0.25, 0.0)]).is_err());
        assert!(Table::new(&[(1.0, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn phi_examples() {
        let w = WeightFunction::power(1.0).unwrap();
        assert_eq!(w.phi(1.0).unwrap(), 0.0);
        assert!((w.phi(1024.0).unwrap() - 1024f64.ln()).abs() < 1e-12);
        let e = WeightFunction::exp_power(1.0).unwrap().normalize();
        assert_eq!(e.phi(1.0).unwrap(), 0.0);
        assert!((e.phi(8.0).unwrap() - 7.0).abs() < 1e-12);
        let l = WeightFunction::log_power(2.5).unwrap().normalize();
        assert_eq!(l.phi(1.0).unwrap(), 0.0);
    }

    #[test]
    fn normalize_offsets() {
        let p = WeightFunction::power(3.0).unwrap();
        assert_eq!(p.normalize().offset(), 0.0);
        let e = WeightFunction::exp_power(1.0).unwrap().normalize();
        assert_eq!(e.offset(), -1.0);
        let t = Table::new(&[(1.0, 3.0), (0.5, 4.0)]).unwrap();
        assert_eq!(WeightFunction::tabulated(t).normalize().offset(), -3.0);
    }

    #[test]
    fn doubling_power_is_two_to_beta() {
        let d = estimate_doubling(&WeightFunction::power(2.0).unwrap(), 60, 1e6).unwrap();
        assert_eq!(d.a, 4.0);
        assert!(!d.divergent);
        assert!(d.phi_form_holds);
        let d = estimate_doubling(&WeightFunction::power(0.7).unwrap(), 60, 1e6).unwrap();
        assert!((d.a / 2f64.powf(0.7) - 1.0).abs() < 1e-9);
        assert_eq!(d.a_clamped, 2.0);
    }

    #[test]
    fn doubling_log_power_attained_at_origin() {
        // grid sweep oracle over s = 2^-t of (1 + ln2 + ln(1/s)) / (1 + ln(1/s))
        let oracle = (0..=480)
            .map(|i| {
                let l = i as f64 / 8.0 * LN_2;
                (1.0 + LN_2 + l) / (1.0 + l)
            })
            .fold(0.0f64, f64::max);
        let d = estimate_doubling(&WeightFunction::log_power(1.0).unwrap(), 60, 1e6).unwrap();
        assert!((d.a - oracle).abs() < 1e-12);
        assert!((d.a - 1.6931).abs() < 1e-4);
        assert_eq!(d.witness_s, 1.0);
        assert_eq!(d.a_clamped, 2.0);
    }

    #[test]
    fn doubling_exp_power_diverges() {
        let w = WeightFunction::exp_power(1.0).unwrap();
        // direct evaluation: the ratio at s = 2^-20 is exp(2^20)
        let r = w.eval_log_weight(2f64.powi(-21)).unwrap() - w.eval_log_weight(2f64.powi(-20)).unwrap();
        assert!(r > 1e6f64.ln());
        let d = estimate_doubling(&w, 60, 1e6).unwrap();
        assert!(d.divergent);
    }

    fn any_builtin() -> impl Strategy<Value = WeightFunction> {
        prop_oneof![
            (0.1f64..5.0).prop_map(|b| WeightFunction::power(b).unwrap()),
            (0.1f64..5.0).prop_map(|g| WeightFunction::log_power(g).unwrap()),
            (0.1f64..2.0).prop_map(|g| WeightFunction::exp_power(g).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn monotone_in_s(w in any_builtin(), a in 0.0f64..60.0, b in 0.0f64..60.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            // deeper s (larger exponent) never has a smaller weight
            let v_lo = w.log_weight_at(-lo * LN_2).unwrap();
            let v_hi = w.log_weight_at(-hi * LN_2).unwrap();
            prop_assert!(v_hi >= v_lo);
        }

        #[test]
        fn normalize_idempotent(w in any_builtin(), shift in -50.0f64..50.0, j in 0.0f64..40.0) {
            let n1 = w.shifted(shift).normalize();
            let n2 = n1.normalize();
            prop_assert_eq!(n1.log_phi_pow2(j).unwrap().to_bits(), n2.log_phi_pow2(j).unwrap().to_bits());
            prop_assert_eq!(n1.eval_log_weight(1.0).unwrap(), 0.0);
        }

        #[test]
        fn phi_doubling_with_measured_constant(beta in 0.1f64..6.0, g in 0.1f64..4.0, x in 1.0f64..1e12) {
            for w in [WeightFunction::power(beta).unwrap(), WeightFunction::log_power(g).unwrap()] {
                let d = estimate_doubling(&w, 60, 1e6).unwrap();
                prop_assert!(!d.divergent);
                let step = w.phi(2.0 * x).unwrap() - w.phi(x).unwrap();
                prop_assert!(step <= d.a_clamped.ln() + 1e-9);
            }
        }
    }
}
