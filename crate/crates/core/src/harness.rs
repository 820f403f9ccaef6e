//! Band sampling and two-sided verification of a [`HarmonicSum`].

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::blocks::{sample_directions, BallPoint, BlockFamily};
use crate::construction::{log_phi_at_depth, Band, HarmonicSum};
use crate::{Error, Result};

/// Log-scale tolerance on the corridor, before the truncation allowance.
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub radii_per_band: usize,
    pub directions: usize,
    pub seed: u64,
    /// Bands `m < max_band` are sampled, for every `j < J`.
    pub max_band: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { radii_per_band: 8, directions: 64, seed: 42, max_band: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Band the radius was drawn from.
    pub band: Band,
    pub direction_index: usize,
    pub point: BallPoint,
}

/// Radii geometric in `1 - |x|` across each band (both edges included),
/// crossed with the directions, preceded by a batch from the central region.
pub fn sample_bands<F: BlockFamily>(hs: &HarmonicSum<F>, spec: &SampleSpec) -> Result<Vec<Sample>> {
    let plan = &hs.plan;
    if spec.radii_per_band == 0 || spec.directions == 0 {
        return Err(Error::Config("empty sample spec"));
    }
    if spec.max_band + 1 > plan.max_band() {
        return Err(Error::Config("max_band exceeds the plan's band range"));
    }
    let dirs = sample_directions(plan.d, spec.directions, spec.seed);
    let alpha = plan.alpha as f64;
    let r = spec.radii_per_band;
    let mut out = Vec::with_capacity((plan.j as usize * spec.max_band + 1) * r * dirs.len());

    let push = |out: &mut Vec<Sample>, band: Band, e: f64| -> Result<()> {
        for (i, dir) in dirs.iter().enumerate() {
            out.push(Sample { band, direction_index: i, point: BallPoint::new(e, dir.clone())? });
        }
        Ok(())
    };

    let edge0 = alpha + plan.n[0] as f64;
    for t in 0..r {
        push(&mut out, Band::Center, -edge0 * t as f64 / r as f64)?;
    }
    let per = plan.j as usize;
    for m in 0..spec.max_band {
        for j in 0..per {
            let i = per * m + j;
            let top = -(alpha + plan.n[i] as f64);
            let bottom = -(alpha + plan.n[i + 1] as f64);
            for t in 0..r {
                let e = if r == 1 { top } else { top + (bottom - top) * t as f64 / (r - 1) as f64 };
                push(&mut out, Band::Shell { m, j }, e)?;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub band_m: i64,
    pub band_j: i64,
    pub one_minus_r_exp: f64,
    pub direction_index: usize,
    #[serde(rename = "log_S")]
    pub log_s: f64,
    #[serde(rename = "log_Phi")]
    pub log_phi: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub band_m: i64,
    pub band_j: i64,
    pub count: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleWitness {
    pub band_m: i64,
    pub band_j: i64,
    pub one_minus_r_exp: f64,
    pub direction_index: usize,
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub weight: String,
    pub spec: SampleSpec,
    pub c_low: f64,
    pub c_high: f64,
    /// Log-scale tolerance used for every comparison.
    pub tol: f64,
    /// Extremes of `S / Phi` over band samples.
    pub c_low_meas: Option<f64>,
    pub c_high_meas: Option<f64>,
    pub low_witness: Option<SampleWitness>,
    pub high_witness: Option<SampleWitness>,
    /// Central region: `min(1, c_low Phi) <= S <= c_high Phi + 1`.
    pub center_pass: bool,
    pub center_witness: Option<SampleWitness>,
    /// Smallest `sum_q |F_(q,j)| / Phi` for the `j` of each sample's band.
    pub jlow_min_ratio: Option<f64>,
    pub jlow_witness: Option<SampleWitness>,
    pub jlow_pass: bool,
    /// Smallest `max_q |u_(q, n_(Jm+j))(x)|` over band samples.
    pub attribution_min: Option<f64>,
    pub attribution_pass: bool,
    pub decomposition_failures: usize,
    pub decomposition_witness: Option<SampleWitness>,
    pub lower_pass: bool,
    pub upper_pass: bool,
    pub pass: bool,
    pub bands: Vec<BandSummary>,
    pub rows: Vec<Row>,
}

fn witness(s: &Sample, value: f64) -> SampleWitness {
    let (band_m, band_j) = s.band.indices();
    SampleWitness {
        band_m,
        band_j,
        one_minus_r_exp: s.point.log2_depth,
        direction_index: s.direction_index,
        x: s.point.cartesian(),
        value,
    }
}

fn track_min(slot: &mut Option<(f64, SampleWitness)>, v: f64, s: &Sample) {
    if slot.as_ref().is_none_or(|(b, _)| v < *b) {
        *slot = Some((v, witness(s, v)));
    }
}

/// Evaluates `S / Phi(1/(1-|x|))` on the band samples and checks the
/// corridor from [`crate::construction::theoretical_bounds`], together with
/// the per-`j` lower bound, the `1/4` attribution and the `f1/f2/f3` split.
pub fn verify_construction<F: BlockFamily>(
    hs: &HarmonicSum<F>,
    w: &crate::weights::WeightFunction,
    spec: &SampleSpec,
) -> Result<VerificationReport> {
    let w = w.normalize();
    let plan = &hs.plan;
    let corridor = plan.theoretical_bounds();
    let tail = libm::exp2(-(plan.j as f64) * (plan.t as f64 - 1.0));
    let tol = VERIFY_TOL + tail;
    let ln_low = libm::log(corridor.c_low);
    let ln_high = libm::log(corridor.c_high);
    let samples = sample_bands(hs, spec)?;

    let mut rows = Vec::with_capacity(samples.len());
    let mut bands: Vec<BandSummary> = Vec::new();
    let mut low: Option<(f64, SampleWitness)> = None;
    let mut high: Option<(f64, SampleWitness)> = None;
    let mut center: Option<(f64, SampleWitness)> = None;
    let mut jlow: Option<(f64, SampleWitness)> = None;
    let mut attr: Option<(f64, SampleWitness)> = None;
    let mut decomposition_failures = 0;
    let mut decomposition_witness = None;

    for s in &samples {
        let e = s.point.log2_depth;
        let ev = hs.evaluate(&s.point, None)?;
        let log_phi = log_phi_at_depth(&w, e)?;
        let log_ratio = ev.log_s - log_phi;
        let ratio = libm::exp(log_ratio);
        let (band_m, band_j) = s.band.indices();
        rows.push(Row {
            band_m,
            band_j,
            one_minus_r_exp: e,
            direction_index: s.direction_index,
            log_s: ev.log_s,
            log_phi,
            ratio,
        });
        match bands.last_mut() {
            Some(b) if b.band_m == band_m && b.band_j == band_j => {
                b.count += 1;
                b.min_ratio = libm::fmin(b.min_ratio, ratio);
                b.max_ratio = libm::fmax(b.max_ratio, ratio);
            }
            _ => bands.push(BandSummary { band_m, band_j, count: 1, min_ratio: ratio, max_ratio: ratio }),
        }

        if s.band == Band::Center {
            // margins of ln S against both ends of the central corridor
            let floor = libm::fmin(0.0, ln_low + log_phi);
            let ceil = crate::logspace::log_add(ln_high + log_phi, 0.0);
            let margin = libm::fmin(ev.log_s - floor, ceil - ev.log_s);
            track_min(&mut center, margin, s);
            continue;
        }
        track_min(&mut low, ratio, s);
        if high.as_ref().is_none_or(|(b, _)| ratio > *b) {
            high = Some((ratio, witness(s, ratio)));
        }

        let Band::Shell { m, j } = ev.band else {
            return Err(Error::Config("band sample evaluated in the central region"));
        };
        let jl = libm::exp(hs.log_sum_over_q(&ev, j) - log_phi);
        track_min(&mut jlow, jl, s);

        let n = plan.n[plan.j as usize * m + j];
        let best = (1..=plan.q)
            .map(|q| hs.family.eval_log(q, n, &s.point))
            .filter(|v| v.sign != 0.0)
            .map(|v| v.ln_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        track_min(&mut attr, libm::exp(best), s);

        if let Some(d) = hs.decompose(&s.point)? {
            if !d.holds() {
                decomposition_failures += 1;
                if decomposition_witness.is_none() {
                    decomposition_witness = Some(witness(s, libm::exp(d.log_f - d.log_f_bound)));
                }
            }
        }
    }

    let lower_pass = low.as_ref().is_none_or(|(v, _)| libm::log(*v) >= ln_low - tol);
    let upper_pass = high.as_ref().is_none_or(|(v, _)| libm::log(*v) <= ln_high + tol);
    let center_pass = center.as_ref().is_none_or(|(v, _)| *v >= -tol);
    let jlow_pass = jlow.as_ref().is_none_or(|(v, _)| libm::log(*v) >= ln_low - tol);
    let attribution_pass = attr.as_ref().is_none_or(|(v, _)| libm::log(*v) >= -2.0 * LN_2 - tol);
    let center_witness = if center_pass { None } else { center.map(|c| c.1) };

    Ok(VerificationReport {
        weight: plan.weight.clone(),
        spec: *spec,
        c_low: corridor.c_low,
        c_high: corridor.c_high,
        tol,
        c_low_meas: low.as_ref().map(|x| x.0),
        c_high_meas: high.as_ref().map(|x| x.0),
        low_witness: low.map(|x| x.1),
        high_witness: high.map(|x| x.1),
        center_pass,
        center_witness,
        jlow_min_ratio: jlow.as_ref().map(|x| x.0),
        jlow_witness: jlow.map(|x| x.1),
        jlow_pass,
        attribution_min: attr.map(|x| x.0),
        attribution_pass,
        decomposition_failures,
        decomposition_witness,
        lower_pass,
        upper_pass,
        pass: lower_pass && upper_pass && center_pass,
        bands,
        rows,
    })
}

impl VerificationReport {
    /// Corridor, per-`j` bound, attribution and decomposition all hold.
    pub fn all_checks_pass(&self) -> bool {
        self.pass && self.jlow_pass && self.attribution_pass && self.decomposition_failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::DiskFamily;
    use crate::construction::{build_plan, PlanConfig};
    use crate::weights::WeightFunction;

    fn pow_sum(beta: f64) -> (HarmonicSum<DiskFamily>, WeightFunction) {
        let w = WeightFunction::power(beta).unwrap();
        let plan = build_plan(&w, &DiskFamily, &PlanConfig::default()).unwrap();
        (HarmonicSum::new(plan, DiskFamily).unwrap(), w)
    }

    #[test]
    fn one_point_per_band() {
        let (hs, _) = pow_sum(1.0);
        let spec = SampleSpec { radii_per_band: 1, directions: 1, seed: 1, max_band: 3 };
        let s = sample_bands(&hs, &spec).unwrap();
        assert_eq!(s.len(), 24 + 1);
        assert_eq!(s.iter().filter(|x| x.band == Band::Center).count(), 1);
    }

    #[test]
    fn band_radii_are_dyadic_interpolants() {
        let (hs, _) = pow_sum(1.0);
        let s = sample_bands(&hs, &SampleSpec::default()).unwrap();
        assert_eq!(s.len(), (24 + 1) * 8 * 64);
        for x in s.iter().filter(|x| x.band != Band::Center) {
            let Band::Shell { m, j } = x.band else { unreachable!() };
            let top = -(1.0 + (8 * m + j) as f64);
            let frac = (x.point.log2_depth - top) * 7.0;
            assert!(x.point.log2_depth <= top && x.point.log2_depth >= top - 1.0);
            assert!((frac - frac.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn max_band_checked() {
        let (hs, _) = pow_sum(1.0);
        let spec = SampleSpec { max_band: 7, ..Default::default() };
        assert!(matches!(sample_bands(&hs, &spec), Err(Error::Config(_))));
    }

    #[test]
    fn power_one_passes() {
        let (hs, w) = pow_sum(1.0);
        let spec = SampleSpec { radii_per_band: 4, directions: 16, ..Default::default() };
        let rep = verify_construction(&hs, &w, &spec).unwrap();
        assert!(rep.all_checks_pass(), "{:?}", (rep.c_low_meas, rep.c_high_meas));
    }

    #[test]
    fn shortened_stride_breaks_per_j_bound() {
        let (mut hs, w) = pow_sum(1.0);
        hs.plan.j = 2;
        let rep = verify_construction(&hs, &w, &SampleSpec::default()).unwrap();
        assert!(!rep.jlow_pass);
        assert!(rep.decomposition_failures > 0);
        let wit = rep.jlow_witness.unwrap();
        assert!(wit.band_m >= 0 && wit.value < rep.c_low);
    }
}
