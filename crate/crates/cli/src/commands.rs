//! Subcommand bodies. Each returns its artifact and a verdict; the binary
//! decides where to write.

use std::path::{Path, PathBuf};

use harmsum_core::blocks::{certify_block_family, BallPoint, BlockFamily, CertSamples, CertificationReport, DiskFamily,
    RotatedPlanarFamily, Scaled};
use harmsum_core::coeffs::{greedy_lacunary, verify_l2_equiv, RatioReport};
use harmsum_core::construction::{build_plan, log_phi_at_depth, Band, ConstructionPlan, HarmonicSum, PlanConfig};
use harmsum_core::envelope::{build_envelope, logconvexity_defect, Grid, GridSpec};
use harmsum_core::harness::{verify_construction, SampleSpec, VerificationReport};
use harmsum_core::spherical::{build_l2_attainer, m2_quadrature, SphereRule};
use harmsum_core::weights::{estimate_doubling, DoublingEstimate};

use serde::{Deserialize, Serialize};

use crate::formats::{read_json, AttainerFile, CoeffsFile, L2Row};
use crate::grammar::parse_weight;
use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsReport {
    pub weight: String,
    /// Added to `log w` by normalization.
    pub normalize_offset: f64,
    pub doubling: DoublingEstimate,
    /// `log Phi(2^j)` of the normalized weight, `j = 0..=jmax`.
    pub log_phi_pow2: Vec<f64>,
}

pub fn weights_analyze(weight: &str, jmax: u32, cap: f64) -> Result<WeightsReport> {
    let w = parse_weight(weight)?.normalize();
    let doubling = estimate_doubling(&w, jmax, cap)?;
    let log_phi_pow2 = (0..=jmax).map(|j| w.log_phi_pow2(j as f64)).collect::<harmsum_core::Result<_>>()?;
    Ok(WeightsReport { weight: weight.to_string(), normalize_offset: w.offset(), doubling, log_phi_pow2 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub weight: String,
    pub grid: GridSpec,
    pub grid_points: usize,
    /// `(log r, log w~)` hull vertices.
    pub nodes: Vec<(f64, f64)>,
    pub slopes: Vec<f64>,
    pub defect: f64,
    pub defect_argmax_r: f64,
}

fn grid_spec(s_min_exp: u32) -> GridSpec {
    GridSpec { s_min_exp, ..GridSpec::default() }
}

pub fn envelope_build(weight: &str, s_min_exp: u32) -> Result<EnvelopeReport> {
    let w = parse_weight(weight)?;
    let spec = grid_spec(s_min_exp);
    let grid = Grid::geometric(spec)?;
    let env = build_envelope(&w, &grid)?;
    let (defect, defect_argmax_r) = logconvexity_defect(&w, &env)?;
    Ok(EnvelopeReport {
        weight: weight.to_string(),
        grid: spec,
        grid_points: grid.len(),
        slopes: env.slopes(),
        nodes: env.nodes,
        defect,
        defect_argmax_r,
    })
}

pub fn coeffs_build(weight: &str, crossover: f64, k_max: u128, s_min_exp: u32) -> Result<(CoeffsFile, RatioReport)> {
    let w = parse_weight(weight)?;
    let grid = Grid::geometric(grid_spec(s_min_exp))?;
    let env = build_envelope(&w, &grid)?;
    let c = greedy_lacunary(&env, crossover, k_max)?;
    let report = verify_l2_equiv(&c, &w, &grid)?;
    Ok((CoeffsFile::from_sequence(&c, weight), report))
}

fn default_pole(d: u32) -> Vec<f64> {
    let mut p = vec![0.0; d as usize];
    p[d as usize - 1] = 1.0;
    p
}

pub fn l2_build(coeffs_path: &Path, d: u32, pole: Option<Vec<f64>>) -> Result<AttainerFile> {
    if d < 2 {
        return Err(CliError::Parse("--dim must be at least 2".into()));
    }
    let file: CoeffsFile = read_json(coeffs_path)?;
    let c = file.to_sequence()?;
    let pole = pole.unwrap_or_else(|| default_pole(d));
    let f = build_l2_attainer(&c, d, &pole)?;
    Ok(AttainerFile {
        d,
        pole: f.basis.pole,
        k_max: f.basis.k_max,
        coeffs: coeffs_path.to_string_lossy().into_owned(),
    })
}

/// A relative coefficient path is tried from the working directory first,
/// then next to the attainer file.
fn resolve(reference: &str, attainer_path: &Path) -> PathBuf {
    let p = PathBuf::from(reference);
    if p.is_absolute() || p.exists() {
        return p;
    }
    attainer_path.parent().map(|d| d.join(&p)).unwrap_or(p)
}

/// `start:stop:count`, inclusive, linear.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Parse(format!("grid `{spec}` is not start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

/// Relative agreement required between quadrature and closed form.
pub const M2_REL_TOL: f64 = 1e-6;

pub fn l2_verify(attainer_path: &Path, radii: &[f64], seed: u64) -> Result<(Vec<L2Row>, bool)> {
    let att: AttainerFile = read_json(attainer_path)?;
    let file: CoeffsFile = read_json(&resolve(&att.coeffs, attainer_path))?;
    let w = parse_weight(&file.weight)?;
    let f = build_l2_attainer(&file.to_sequence()?, att.d, &att.pole)?;
    let mut rows = Vec::with_capacity(radii.len());
    let mut pass = true;
    for &r in radii {
        let ln_r = r.ln();
        let closed = f.log_m2_sq_closed(ln_r);
        let degree = f.active_degree(ln_r).saturating_mul(2);
        let degree = usize::try_from(degree).map_err(|_| CliError::Parse("degree too large".into()))?;
        let q = m2_quadrature(&f, r, &SphereRule::exact_for(att.d, degree, seed))?;
        let rel = (q.log_m2_sq - closed).exp_m1().abs();
        pass &= match q.rel_std_err {
            None => rel <= M2_REL_TOL,
            Some(se) => rel <= 5.0 * se + M2_REL_TOL,
        };
        let logw = w.log_weight_at((-r).ln_1p())?;
        rows.push(L2Row {
            r,
            log_m2_closed: 0.5 * closed,
            log_m2_quad: 0.5 * q.log_m2_sq,
            logw,
            ratio: (closed - 2.0 * logw).exp(),
        });
    }
    Ok((rows, pass))
}

pub fn blocks_certify(d: u32, p: u32, n_max: u64, seed: u64, scale: f64) -> Result<CertificationReport> {
    if p == 0 {
        return Err(CliError::Parse("--p must be at least 1".into()));
    }
    let samples = CertSamples { seed, ..CertSamples::default() };
    let n_list: Vec<u64> = (0..=n_max).collect();
    fn run<F: BlockFamily>(f: F, scale: f64, p: u32, n: &[u64], s: &CertSamples) -> harmsum_core::Result<CertificationReport> {
        if scale == 1.0 {
            certify_block_family(&f, p, n, s)
        } else {
            certify_block_family(&Scaled { inner: f, factor: scale }, p, n, s)
        }
    }
    Ok(match d {
        2 => run(DiskFamily, scale, p, &n_list, &samples)?,
        _ => run(RotatedPlanarFamily::coordinate_planes(d)?, scale, p, &n_list, &samples)?,
    })
}

fn family_for(d: u32) -> Result<DiskFamily> {
    if d == 2 {
        Ok(DiskFamily)
    } else {
        Err(CliError::Parse(format!("no certified block family for d = {d}; only d = 2 ships one")))
    }
}

pub fn construct_build(weight: &str, d: u32, tail_eps: f64, bands: usize, a_override: Option<f64>) -> Result<ConstructionPlan> {
    let w = parse_weight(weight)?;
    let cfg = PlanConfig { a_override, bands, tail_eps, weight_ref: weight.to_string(), ..PlanConfig::default() };
    Ok(build_plan(&w, &family_for(d)?, &cfg)?)
}

pub fn construct_verify(plan: ConstructionPlan, spec: &SampleSpec) -> Result<VerificationReport> {
    let w = parse_weight(&plan.weight)?;
    let hs = HarmonicSum::new(plan.clone(), family_for(plan.d)?)?;
    Ok(verify_construction(&hs, &w, spec)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub one_minus_r_exp: f64,
    pub turn: f64,
    #[serde(rename = "log_S")]
    pub log_s: f64,
    #[serde(rename = "log_Phi")]
    pub log_phi: f64,
    pub ratio: f64,
    pub band_m: i64,
    pub band_j: i64,
}

pub fn construct_eval(plan: ConstructionPlan, one_minus_r_exp: f64, turn: f64, hint: Option<usize>) -> Result<EvalOutput> {
    let w = parse_weight(&plan.weight)?.normalize();
    let per = plan.j as usize;
    let hs = HarmonicSum::new(plan, family_for(2)?)?;
    let x = BallPoint::planar(one_minus_r_exp, turn)?;
    let hint = hint.map(|m| Band::Shell { m, j: per - 1 });
    let (log_s, band) = hs.eval_sum(&x, hint)?;
    let log_phi = log_phi_at_depth(&w, one_minus_r_exp)?;
    let (band_m, band_j) = band.indices();
    Ok(EvalOutput {
        one_minus_r_exp,
        turn: match x.direction {
            harmsum_core::blocks::Direction::Turn(t) => t,
            _ => turn,
        },
        log_s,
        log_phi,
        ratio: (log_s - log_phi).exp(),
        band_m,
        band_j,
    })
}
