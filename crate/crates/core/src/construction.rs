//! Lacunary harmonic sums `F_{q,j} = sum_k A^(Jk+j) u_{q, n_(Jk+j)}`.
//!
//! A [`ConstructionPlan`] fixes the doubling constant `A`, the decay order
//! `p`, the stride `J`, the scale table `n_k` and the truncation depth `T`.
//! [`HarmonicSum`] pairs a plan with a block family and evaluates
//! `S(x) = 1 + sum_(q,j) |F_(q,j)(x)|` in log space.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::blocks::{BallPoint, BlockFamily};
use crate::logspace::{log_sum_exp, SignedLog};
use crate::weights::{estimate_doubling, log_le, WeightFunction};
use crate::{Error, Result};

/// Largest `log2` of any coefficient `A^i` a plan may contain.
pub const MAX_LOG2_SCALE: f64 = 16000.0;

/// Scales beyond this are not representable exactly as `f64`.
pub const MAX_SCALE: u64 = 1 << 53;

/// `n_k = max { j >= 0 : Phi(2^j) <= A^k }` for `k < count`.
///
/// `w` must be normalized. Fails with `NotDoubling` when two consecutive
/// scales coincide, which means `Phi` grows faster than `A` per octave.
pub fn compute_nk(w: &WeightFunction, a: f64, count: usize) -> Result<Vec<u64>> {
    if !w.is_normalized() {
        return Err(Error::Config("scale sequence needs a normalized weight"));
    }
    if !(a >= 2.0) || !a.is_finite() {
        return Err(Error::Domain("doubling constant must be finite and >= 2", a));
    }
    let log_a = libm::log(a);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    for k in 0..count {
        let target = k as f64 * log_a;
        let fits = |j: u64| -> Result<bool> { Ok(log_le(w.log_phi_pow2(j as f64)?, target)) };
        let lo_start = out.last().copied().unwrap_or(0);
        // lo always fits, hi never does
        let mut lo = lo_start;
        let mut step = 1u64;
        let mut hi = loop {
            let probe = lo_start.saturating_add(step);
            if probe > MAX_SCALE {
                return Err(Error::Domain("scale sequence leaves the representable range", k as f64));
            }
            if fits(probe)? {
                lo = probe;
                step *= 2;
            } else {
                break probe;
            }
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if fits(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if k > 0 && lo == lo_start {
            return Err(Error::NotDoubling("Phi grows by more than A over one octave"));
        }
        out.push(lo);
    }
    Ok(out)
}

/// Smallest `p >= 1` with `2A <= 2^p`.
pub fn choose_p(a: f64) -> u32 {
    let x = libm::log2(a) + 1.0;
    let p = libm::ceil(x - 1e-12 * libm::fmax(1.0, x));
    if p < 1.0 {
        1
    } else {
        p as u32
    }
}

/// `C 2^(p(alpha+1)) 2^-J / (1 - 2^-J) < 1/16`.
pub fn tail_constraint_holds(j: u32, p: u32, c_pd: f64, alpha: u32) -> bool {
    let jf = j as f64;
    let lhs = c_pd * libm::exp2((p * (alpha + 1)) as f64 - jf) / (1.0 - libm::exp2(-jf));
    j >= 1 && lhs < 1.0 / 16.0
}

/// `A^(J-1) >= 16`.
pub fn growth_constraint_holds(j: u32, a: f64) -> bool {
    j >= 1 && log_le(libm::log(16.0), (j - 1) as f64 * libm::log(a))
}

/// Smallest `J` satisfying both constraints.
pub fn choose_j(p: u32, c_pd: f64, alpha: u32, a: f64) -> u32 {
    (1..)
        .find(|&j| tail_constraint_holds(j, p, c_pd, alpha) && growth_constraint_holds(j, a))
        .expect("constraints hold for large J")
}

/// `T = ceil(log2(1/eps) / J) + 1`.
pub fn tail_bands(tail_eps: f64, j: u32) -> usize {
    libm::ceil(libm::log2(1.0 / tail_eps) / j as f64) as usize + 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    pub a_override: Option<f64>,
    /// Number of bands `m` the plan must be able to evaluate.
    pub bands: usize,
    pub tail_eps: f64,
    pub doubling_jmax: u32,
    pub doubling_cap: f64,
    pub weight_ref: String,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            a_override: None,
            bands: 6,
            tail_eps: 1e-9,
            doubling_jmax: 60,
            doubling_cap: 1e6,
            weight_ref: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub weight: String,
    pub d: u32,
    #[serde(rename = "A")]
    pub a: f64,
    pub p: u32,
    #[serde(rename = "J")]
    pub j: u32,
    pub alpha: u32,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "C_pd")]
    pub c_pd: f64,
    pub n: Vec<u64>,
    #[serde(rename = "T")]
    pub t: usize,
}

/// Guaranteed range of `S(x) / Phi(1/(1-|x|))` on the bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corridor {
    pub c_low: f64,
    pub c_high: f64,
}

impl ConstructionPlan {
    pub fn log_a(&self) -> f64 {
        libm::log(self.a)
    }

    /// Bands `m < max_band()` can be evaluated with full truncation depth.
    pub fn max_band(&self) -> usize {
        let per = self.j as usize;
        (self.n.len() / per).saturating_sub(self.t + 1) + 1
    }

    pub fn theoretical_bounds(&self) -> Corridor {
        theoretical_bounds(self)
    }

    /// Global index `i = Jm + j` of the band holding depth `2^e`, or `None`
    /// in the central region `1 - |x| > 2^(-alpha-n_0)`.
    pub fn band_index(&self, log2_depth: f64) -> Option<usize> {
        let depth = -log2_depth;
        let alpha = self.alpha as f64;
        let count = self.n.partition_point(|&n| alpha + n as f64 <= depth);
        count.checked_sub(1)
    }

    pub fn band(&self, log2_depth: f64) -> Band {
        match self.band_index(log2_depth) {
            None => Band::Center,
            Some(i) => Band::Shell { m: i / self.j as usize, j: i % self.j as usize },
        }
    }
}

/// `c_low = A^(-alpha-1)/8`, `c_high = A Q (1 + 2 C 2^(p alpha))`.
pub fn theoretical_bounds(plan: &ConstructionPlan) -> Corridor {
    let a = plan.a;
    Corridor {
        c_low: libm::pow(a, -(plan.alpha as f64) - 1.0) / 8.0,
        c_high: a * plan.q as f64 * (1.0 + 2.0 * plan.c_pd * libm::exp2((plan.p * plan.alpha) as f64)),
    }
}

pub fn build_plan<F: BlockFamily + ?Sized>(
    w: &WeightFunction,
    family: &F,
    cfg: &PlanConfig,
) -> Result<ConstructionPlan> {
    if !(cfg.tail_eps > 0.0 && cfg.tail_eps < 1.0) {
        return Err(Error::Config("tail_eps must lie in (0, 1)"));
    }
    if cfg.bands == 0 {
        return Err(Error::Config("plan needs at least one band"));
    }
    let w = w.normalize();
    let est = estimate_doubling(&w, cfg.doubling_jmax, cfg.doubling_cap)?;
    if est.divergent || !est.a.is_finite() {
        return Err(Error::NotDoubling("doubling ratio exceeds the cap"));
    }
    let mut a = est.a_clamped;
    if let Some(o) = cfg.a_override {
        if !o.is_finite() {
            return Err(Error::Config("A override must be finite"));
        }
        a = libm::fmax(a, o);
    }
    let p = choose_p(a);
    let c_pd = family.decay_constant(p);
    let alpha = family.alpha();
    let j = choose_j(p, c_pd, alpha, a);
    let t = tail_bands(cfg.tail_eps, j);
    let count = j as usize * (cfg.bands + t + 1);
    if count as f64 * libm::log2(a) > MAX_LOG2_SCALE {
        return Err(Error::Config("plan coefficients exceed the supported exponent range"));
    }
    let n = compute_nk(&w, a, count)?;
    Ok(ConstructionPlan {
        weight: cfg.weight_ref.clone(),
        d: family.dim(),
        a,
        p,
        j,
        alpha,
        q: family.width(),
        c_pd,
        n,
        t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Band {
    Center,
    Shell { m: usize, j: usize },
}

impl Band {
    /// `(m, j)` with `-1` for the center.
    pub fn indices(&self) -> (i64, i64) {
        match *self {
            Band::Center => (-1, -1),
            Band::Shell { m, j } => (m as i64, j as i64),
        }
    }
}

/// Full evaluation of `S` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SumEval {
    pub log_s: f64,
    pub band: Band,
    /// `log |F_(q,j)(x)|` at index `(q - 1) * J + j`.
    pub log_abs_f: Vec<f64>,
}

/// Split of `F_(q,j)` into the terms before, at and after the band of `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub m: usize,
    pub j: usize,
    pub q: usize,
    pub log_f1: f64,
    pub log_f2: f64,
    pub log_f3: f64,
    pub log_f: f64,
    /// `log A^(J(m-1)+j+1)`, `log A^(Jm+j)/4`, `log A^(Jm+j)/16`, `log A^(Jm+j)/8`.
    pub log_f1_bound: f64,
    pub log_f2_bound: f64,
    pub log_f3_bound: f64,
    pub log_f_bound: f64,
}

impl Decomposition {
    pub fn holds(&self) -> bool {
        (self.m == 0 || log_le(self.log_f1, self.log_f1_bound))
            && log_le(self.log_f2_bound, self.log_f2)
            && log_le(self.log_f3, self.log_f3_bound)
            && log_le(self.log_f_bound, self.log_f)
    }
}

fn abs_log(v: SignedLog) -> f64 {
    if v.sign == 0.0 {
        f64::NEG_INFINITY
    } else {
        v.ln_abs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSum<F> {
    pub plan: ConstructionPlan,
    pub family: F,
}

impl<F: BlockFamily> HarmonicSum<F> {
    pub fn new(plan: ConstructionPlan, family: F) -> Result<Self> {
        if plan.alpha != family.alpha() || plan.q != family.width() || plan.d != family.dim() {
            return Err(Error::Config("plan was built for a different block family"));
        }
        if plan.j == 0 || plan.n.len() < plan.j as usize * (plan.t + 1) {
            return Err(Error::Config("plan scale table too short"));
        }
        Ok(HarmonicSum { plan, family })
    }

    fn term(&self, q: usize, i: usize, x: &BallPoint) -> SignedLog {
        self.family.eval_log(q, self.plan.n[i], x).scale(i as f64 * self.plan.log_a())
    }

    /// Last `k` kept in each `F_(q,j)` for a point in `band`.
    fn k_last(&self, band: Band) -> Result<usize> {
        let m = match band {
            Band::Center => -1,
            Band::Shell { m, .. } => m as i64,
        };
        let k_last = (m + self.plan.t as i64).max(0) as usize;
        if self.plan.j as usize * (k_last + 1) > self.plan.n.len() {
            return Err(Error::Config("point lies beyond the plan's band range"));
        }
        Ok(k_last)
    }

    fn f_qj(&self, q: usize, j: usize, k_last: usize, x: &BallPoint) -> SignedLog {
        let per = self.plan.j as usize;
        let terms: Vec<SignedLog> = (0..=k_last).map(|k| self.term(q, per * k + j, x)).collect();
        SignedLog::sum(&terms)
    }

    /// `log S(x)` and the band of `x`. A hint overrides the band used for
    /// truncation.
    pub fn eval_sum(&self, x: &BallPoint, band_hint: Option<Band>) -> Result<(f64, Band)> {
        let e = self.evaluate(x, band_hint)?;
        Ok((e.log_s, e.band))
    }

    pub fn evaluate(&self, x: &BallPoint, band_hint: Option<Band>) -> Result<SumEval> {
        if x.dim() != self.plan.d as usize {
            return Err(Error::Config("point dimension differs from the plan"));
        }
        let band = self.plan.band(x.log2_depth);
        let k_last = self.k_last(band_hint.unwrap_or(band))?;
        let per = self.plan.j as usize;
        let mut log_abs_f = Vec::with_capacity(self.plan.q * per);
        for q in 1..=self.plan.q {
            for j in 0..per {
                log_abs_f.push(abs_log(self.f_qj(q, j, k_last, x)));
            }
        }
        let mut parts = Vec::with_capacity(log_abs_f.len() + 1);
        parts.push(0.0);
        parts.extend(log_abs_f.iter().copied().filter(|v| *v > f64::NEG_INFINITY));
        Ok(SumEval { log_s: log_sum_exp(&parts), band, log_abs_f })
    }

    /// `log sum_q |F_(q,j)(x)|` for one `j`.
    pub fn log_sum_over_q(&self, eval: &SumEval, j: usize) -> f64 {
        let per = self.plan.j as usize;
        let parts: Vec<f64> = (0..self.plan.q)
            .map(|q| eval.log_abs_f[q * per + j])
            .filter(|v| *v > f64::NEG_INFINITY)
            .collect();
        log_sum_exp(&parts)
    }

    /// For `x` in band `(m, j)`, splits `F_(q,j)` for the `q` maximizing
    /// `|u_(q, n_(Jm+j))(x)|`. `None` in the central region.
    pub fn decompose(&self, x: &BallPoint) -> Result<Option<Decomposition>> {
        let band = self.plan.band(x.log2_depth);
        let Band::Shell { m, j } = band else {
            return Ok(None);
        };
        let k_last = self.k_last(band)?;
        let per = self.plan.j as usize;
        let i = per * m + j;
        let mut q_best = 1;
        let mut best = f64::NEG_INFINITY;
        for q in 1..=self.plan.q {
            let v = abs_log(self.family.eval_log(q, self.plan.n[i], x));
            if v > best {
                best = v;
                q_best = q;
            }
        }
        let q = q_best;
        let head: Vec<SignedLog> = (0..m).map(|k| self.term(q, per * k + j, x)).collect();
        let f2 = self.term(q, i, x);
        let tail: Vec<SignedLog> = (m + 1..=k_last).map(|k| self.term(q, per * k + j, x)).collect();
        let f = SignedLog::sum(&[SignedLog::sum(&head), f2, SignedLog::sum(&tail)]);
        let la = self.plan.log_a();
        let base = i as f64 * la;
        Ok(Some(Decomposition {
            m,
            j,
            q,
            log_f1: abs_log(SignedLog::sum(&head)),
            log_f2: abs_log(f2),
            log_f3: abs_log(SignedLog::sum(&tail)),
            log_f: abs_log(f),
            log_f1_bound: (per as f64 * (m as f64 - 1.0) + j as f64 + 1.0) * la,
            log_f2_bound: base - libm::log(4.0),
            log_f3_bound: base - libm::log(16.0),
            log_f_bound: base - libm::log(8.0),
        }))
    }
}

/// `log Phi(1/(1-|x|))` for `1 - |x| = 2^e`.
pub fn log_phi_at_depth(w: &WeightFunction, log2_depth: f64) -> Result<f64> {
    w.log_weight_at(log2_depth * LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{decay_constant, DiskFamily};
    use proptest::prelude::*;

    fn pow_plan(beta: f64) -> ConstructionPlan {
        build_plan(&WeightFunction::power(beta).unwrap(), &DiskFamily, &PlanConfig::default()).unwrap()
    }

    #[test]
    fn nk_for_powers() {
        let w1 = WeightFunction::power(1.0).unwrap();
        let w2 = WeightFunction::power(2.0).unwrap();
        let n = compute_nk(&w1, 2.0, 40).unwrap();
        assert_eq!(n, (0..40).collect::<Vec<u64>>());
        let n = compute_nk(&w1, 4.0, 40).unwrap();
        assert_eq!(n, (0..40).map(|k| 2 * k).collect::<Vec<u64>>());
        let n = compute_nk(&w2, 4.0, 40).unwrap();
        assert_eq!(n, (0..40).collect::<Vec<u64>>());
    }

    #[test]
    fn nk_rejects_fast_growth() {
        let w = WeightFunction::power(3.0).unwrap();
        assert!(matches!(compute_nk(&w, 2.0, 5), Err(Error::NotDoubling(_))));
        let raw = WeightFunction::exp_power(1.0).unwrap();
        assert!(matches!(compute_nk(&raw, 2.0, 5), Err(Error::Config(_))));
    }

    #[test]
    fn p_selection() {
        // smallest p with 2A <= 2^p, checked against brute force
        for (a, p) in [(2.0, 2), (8.0, 4), (16.0, 5), (4.0, 3), (2.5, 3), (1.0, 1)] {
            assert_eq!(choose_p(a), p, "A = {a}");
            let brute = (1u32..).find(|&p| 2.0 * a <= 2f64.powi(p as i32)).unwrap();
            assert_eq!(choose_p(a), brute);
        }
    }

    #[test]
    fn j_selection_examples() {
        let c2 = (2.0f64 / std::f64::consts::E).powi(2);
        assert_eq!(choose_j(2, c2, 1, 2.0), 8);
        assert!(!tail_constraint_holds(7, 2, c2, 1));
        assert!(!growth_constraint_holds(4, 2.0));
        assert!(growth_constraint_holds(5, 2.0));
        let c3 = (3.0f64 / std::f64::consts::E).powi(3);
        assert_eq!(choose_j(3, c3, 1, 4.0), 11);
        assert_eq!(choose_j(2, 0.0, 1, 2.0), 5);
    }

    #[test]
    fn plans_for_powers() {
        let p1 = pow_plan(1.0);
        assert_eq!((p1.a, p1.p, p1.j, p1.t), (2.0, 2, 8, 5));
        assert!(p1.n.iter().enumerate().all(|(k, &n)| n == k as u64));
        let p2 = pow_plan(2.0);
        assert_eq!((p2.a, p2.p, p2.j), (4.0, 3, 11));
        assert!(p2.n.iter().enumerate().all(|(k, &n)| n == k as u64));
        let p3 = pow_plan(3.0);
        assert_eq!((p3.a, p3.p, p3.j), (8.0, 4, 15));
        assert_eq!(p1.max_band(), 7);
    }

    #[test]
    fn exp_power_is_not_doubling() {
        let w = WeightFunction::exp_power(1.0).unwrap();
        let r = build_plan(&w, &DiskFamily, &PlanConfig::default());
        assert!(matches!(r, Err(Error::NotDoubling(_))));
    }

    #[test]
    fn corridor_constants() {
        let c = pow_plan(1.0).theoretical_bounds();
        assert_eq!(c.c_low, 0.03125);
        let expect = 2.0 * 2.0 * (1.0 + 2.0 * decay_constant(2) * 4.0);
        assert!((c.c_high - expect).abs() < 1e-12 && (c.c_high - 21.32).abs() < 0.01);
        let mut degenerate = pow_plan(1.0);
        degenerate.q = 1;
        degenerate.c_pd = 0.0;
        assert_eq!(degenerate.theoretical_bounds().c_high, 2.0);
    }

    #[test]
    fn origin_gives_one() {
        let hs = HarmonicSum::new(pow_plan(1.0), DiskFamily).unwrap();
        let (log_s, band) = hs.eval_sum(&BallPoint::planar(0.0, 0.25).unwrap(), None).unwrap();
        assert_eq!(log_s, 0.0);
        assert_eq!(band, Band::Center);
    }

    #[test]
    fn band_edge_upper_bound() {
        let plan = pow_plan(1.0);
        let c = plan.theoretical_bounds();
        let hs = HarmonicSum::new(plan.clone(), DiskFamily).unwrap();
        let i = 3 * plan.j as usize;
        let e = -(plan.alpha as f64) - plan.n[i] as f64;
        for t in 0..32 {
            let x = BallPoint::planar(e, (t as f64 + 0.5) / 32.0).unwrap();
            let ev = hs.evaluate(&x, None).unwrap();
            assert_eq!(ev.band, Band::Shell { m: 3, j: 0 });
            let total = log_sum_exp(&ev.log_abs_f);
            assert!(total <= c.c_high.ln() + i as f64 * plan.log_a());
            let d = hs.decompose(&x).unwrap().unwrap();
            assert!(d.holds(), "{d:?}");
        }
    }

    #[test]
    fn band_hint_one_lower() {
        let plan = pow_plan(1.0);
        let hs = HarmonicSum::new(plan.clone(), DiskFamily).unwrap();
        for m in 1..4usize {
            let e = -(plan.alpha as f64) - plan.n[m * plan.j as usize] as f64;
            let x = BallPoint::planar(e, 0.137).unwrap();
            let (a, band) = hs.eval_sum(&x, None).unwrap();
            let (b, _) = hs.eval_sum(&x, Some(Band::Shell { m: m - 1, j: 0 })).unwrap();
            assert_eq!(band, Band::Shell { m, j: 0 });
            assert!((a - b).abs() < 1e-9, "m = {m}: {}", (a - b).abs());
        }
    }

    #[test]
    fn doubling_t_is_negligible() {
        let cfg = PlanConfig { bands: 12, ..Default::default() };
        let plan = build_plan(&WeightFunction::power(1.0).unwrap(), &DiskFamily, &cfg).unwrap();
        let hs = HarmonicSum::new(plan.clone(), DiskFamily).unwrap();
        let mut deep = plan.clone();
        deep.t *= 2;
        let hs2 = HarmonicSum::new(deep, DiskFamily).unwrap();
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let e = -next() * (plan.alpha as f64 + plan.n[3 * plan.j as usize] as f64);
            let x = BallPoint::planar(e, next()).unwrap();
            let a = hs.eval_sum(&x, None).unwrap().0;
            let b = hs2.eval_sum(&x, None).unwrap().0;
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn beyond_range_is_config_error() {
        let hs = HarmonicSum::new(pow_plan(1.0), DiskFamily).unwrap();
        let x = BallPoint::planar(-200.0, 0.1).unwrap();
        assert!(matches!(hs.eval_sum(&x, None), Err(Error::Config(_))));
    }

    #[test]
    fn normalization_absorbs_constants() {
        let w = WeightFunction::power(1.5).unwrap();
        let cfg = PlanConfig::default();
        let a = build_plan(&w, &DiskFamily, &cfg).unwrap();
        let b = build_plan(&w.shifted(3.5), &DiskFamily, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn plan_json_keys() {
        let v = serde_json::to_value(pow_plan(1.0)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in ["weight", "d", "A", "p", "J", "alpha", "Q", "C_pd", "n", "T"] {
            assert!(keys.contains(&k), "{k}");
        }
    }

    proptest! {
        #[test]
        fn nk_gaps(beta in 0.2f64..4.0, extra in 0.0f64..3.0) {
            let w = WeightFunction::power(beta).unwrap();
            let a = libm::fmax(2f64.powf(beta), 2.0) + extra;
            let n = compute_nk(&w, a, 60).unwrap();
            for k in 0..n.len() {
                for l in 1..n.len() - k {
                    prop_assert!(n[k + l] - n[k] >= l as u64);
                }
            }
        }

        #[test]
        fn j_is_minimal(p in 1u32..6, c in 0.0f64..50.0, alpha in 1u32..3, a in 2.0f64..40.0) {
            let j = choose_j(p, c, alpha, a);
            prop_assert!(tail_constraint_holds(j, p, c, alpha) && growth_constraint_holds(j, a));
            prop_assert!(!(tail_constraint_holds(j - 1, p, c, alpha) && growth_constraint_holds(j - 1, a)));
        }
    }
}
