//! Building-block families `u_{q,n}`.
//!
//! A family of width `Q` with shell offset `alpha` must satisfy, for every
//! scale `n >= 0`:
//!
//! * `|u_{q,n}(x)| <= 1` on the ball,
//! * `max_q |u_{q,n}(x)| >= 1/4` on the shell `0 < 1 - |x| < 2^(-alpha-n)`,
//! * `|u_{q,n}(x)| <= C(p) 2^(-np) (1 - |x|)^(-p)`.
//!
//! [`DiskFamily`] satisfies all three in the plane with `Q = 2`,
//! `alpha = 1`, `C(p) = (p/e)^p`. [`certify_block_family`] checks a family
//! on samples and reports margins in log scale.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::logspace::{ln_neg_ln_r, ln_r_from_log2_depth, SignedLog};
use crate::spherical::uniform_on_sphere;
use crate::{Error, Result};

/// Direction of a point: a fraction of a full turn in the plane (exact
/// under angle doubling), or a unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Direction {
    Turn(f64),
    Unit(Vec<f64>),
}

/// A point of the ball given by `log2(1 - |x|)` and a direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    pub log2_depth: f64,
    pub direction: Direction,
}

fn turn_of(x: f64, y: f64) -> f64 {
    let t = libm::atan2(y, x) / (2.0 * PI);
    if t < 0.0 {
        t + 1.0
    } else {
        t
    }
}

impl BallPoint {
    pub fn new(log2_depth: f64, direction: Direction) -> Result<Self> {
        if !(log2_depth <= 0.0) || !log2_depth.is_finite() {
            return Err(Error::Domain("log2(1 - |x|) must be finite and <= 0", log2_depth));
        }
        // no negative zero in reports
        let log2_depth = log2_depth + 0.0;
        if let Direction::Turn(t) = direction {
            if !t.is_finite() {
                return Err(Error::Domain("turn must be finite", t));
            }
            let t = t - libm::floor(t);
            return Ok(BallPoint { log2_depth, direction: Direction::Turn(t) });
        }
        Ok(BallPoint { log2_depth, direction })
    }

    pub fn planar(log2_depth: f64, turn: f64) -> Result<Self> {
        Self::new(log2_depth, Direction::Turn(turn))
    }

    /// From Cartesian coordinates, `|x| < 1`. Loses resolution once
    /// `1 - |x|` approaches machine epsilon.
    pub fn from_cartesian(x: &[f64]) -> Result<Self> {
        let rho = libm::sqrt(x.iter().map(|v| v * v).sum());
        if !(rho < 1.0) {
            return Err(Error::Domain("point must lie in the open ball", rho));
        }
        let e = libm::log2(1.0 - rho);
        let direction = if x.len() == 2 {
            Direction::Turn(turn_of(x[0], x[1]))
        } else if rho == 0.0 {
            let mut v = alloc::vec![0.0; x.len()];
            v[0] = 1.0;
            Direction::Unit(v)
        } else {
            Direction::Unit(x.iter().map(|v| v / rho).collect())
        };
        Self::new(e, direction)
    }

    pub fn dim(&self) -> usize {
        match &self.direction {
            Direction::Turn(_) => 2,
            Direction::Unit(v) => v.len(),
        }
    }

    pub fn ln_r(&self) -> f64 {
        ln_r_from_log2_depth(self.log2_depth)
    }

    /// `ln s` with `s = 1 - |x|`.
    pub fn ln_s(&self) -> f64 {
        self.log2_depth * LN_2
    }

    pub fn unit_vector(&self) -> Vec<f64> {
        match &self.direction {
            Direction::Turn(t) => {
                let a = 2.0 * PI * t;
                alloc::vec![libm::cos(a), libm::sin(a)]
            }
            Direction::Unit(v) => v.clone(),
        }
    }

    pub fn cartesian(&self) -> Vec<f64> {
        let r = libm::exp(self.ln_r());
        self.unit_vector().into_iter().map(|v| r * v).collect()
    }

    fn turn(&self) -> f64 {
        match &self.direction {
            Direction::Turn(t) => *t,
            Direction::Unit(v) => turn_of(v[0], v[1]),
        }
    }
}

/// `log |r^(2^n)|` for `1 - r = 2^e`; `-inf` at the origin or on underflow.
pub fn ln_radial_power(n: u64, log2_depth: f64) -> f64 {
    -libm::exp(n as f64 * LN_2 + ln_neg_ln_r(log2_depth))
}

/// `2^n * turn` reduced mod 1, exact for any binary fraction `turn`.
pub fn doubled_turn(n: u64, turn: f64) -> f64 {
    if n > 1100 {
        return 0.0;
    }
    let scaled = libm::scalbn(turn, n as i32);
    scaled - libm::floor(scaled)
}

pub trait BlockFamily {
    fn dim(&self) -> u32;
    /// `Q`.
    fn width(&self) -> usize;
    fn alpha(&self) -> u32;
    /// `C(p, d)` for the decay axiom.
    fn decay_constant(&self, p: u32) -> f64;
    /// `u_{q,n}(x)`, `q` in `1..=Q`.
    fn eval_log(&self, q: usize, n: u64, x: &BallPoint) -> SignedLog;

    fn eval(&self, q: usize, n: u64, x: &BallPoint) -> f64 {
        self.eval_log(q, n, x).to_f64()
    }
}

/// `C(p) = (p/e)^p = sup_(t>0) t^p e^(-t)`.
pub fn decay_constant(p: u32) -> f64 {
    let p = p as f64;
    libm::pow(p / core::f64::consts::E, p)
}

/// `u_{1,n} = Re z^(2^n)`, `u_{2,n} = Im z^(2^n)` on the unit disk.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DiskFamily;

impl BlockFamily for DiskFamily {
    fn dim(&self) -> u32 {
        2
    }

    fn width(&self) -> usize {
        2
    }

    fn alpha(&self) -> u32 {
        1
    }

    fn decay_constant(&self, p: u32) -> f64 {
        decay_constant(p)
    }

    fn eval_log(&self, q: usize, n: u64, x: &BallPoint) -> SignedLog {
        let radial = ln_radial_power(n, x.log2_depth);
        let angle = 2.0 * PI * doubled_turn(n, x.turn());
        let trig = if q == 1 { libm::cos(angle) } else { libm::sin(angle) };
        SignedLog::from_f64(trig).scale(radial)
    }
}

/// Planar block value in Cartesian coordinates.
pub fn disk_block_eval(q: usize, n: u64, x: &[f64]) -> Result<f64> {
    if !(1..=2).contains(&q) || x.len() != 2 {
        return Err(Error::Config("disk blocks take q in {1, 2} and planar points"));
    }
    Ok(DiskFamily.eval(q, n, &BallPoint::from_cartesian(x)?))
}

/// Candidate for `d >= 3`: disk blocks in every coordinate plane,
/// `Re/Im (y_i + i y_j)^(2^n)`. Harmonic and bounded, but directions far
/// from every plane see `(r t)^(2^n)` with `t < 1`, so the shell axiom
/// fails as `n` grows.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedPlanarFamily {
    d: u32,
    planes: Vec<(usize, usize)>,
}

impl RotatedPlanarFamily {
    pub fn coordinate_planes(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain("dimension must be at least 2", d as f64));
        }
        let mut planes = Vec::new();
        for i in 0..d as usize {
            for j in i + 1..d as usize {
                planes.push((i, j));
            }
        }
        Ok(RotatedPlanarFamily { d, planes })
    }
}

impl BlockFamily for RotatedPlanarFamily {
    fn dim(&self) -> u32 {
        self.d
    }

    fn width(&self) -> usize {
        2 * self.planes.len()
    }

    fn alpha(&self) -> u32 {
        1
    }

    fn decay_constant(&self, p: u32) -> f64 {
        decay_constant(p)
    }

    fn eval_log(&self, q: usize, n: u64, x: &BallPoint) -> SignedLog {
        let (i, j) = self.planes[(q - 1) / 2];
        let y = x.unit_vector();
        let t = libm::hypot(y[i], y[j]);
        if t == 0.0 {
            return SignedLog::ZERO;
        }
        let radial = ln_radial_power(n, x.log2_depth) + libm::exp2(n as f64) * libm::log(t);
        let angle = 2.0 * PI * doubled_turn(n, turn_of(y[i], y[j]));
        let trig = if q % 2 == 1 { libm::cos(angle) } else { libm::sin(angle) };
        SignedLog::from_f64(trig).scale(radial)
    }
}

/// A family multiplied by a constant (used as a negative control).
#[derive(Debug, Clone, PartialEq)]
pub struct Scaled<F> {
    pub inner: F,
    pub factor: f64,
}

impl<F: BlockFamily> BlockFamily for Scaled<F> {
    fn dim(&self) -> u32 {
        self.inner.dim()
    }

    fn width(&self) -> usize {
        self.inner.width()
    }

    fn alpha(&self) -> u32 {
        self.inner.alpha()
    }

    fn decay_constant(&self, p: u32) -> f64 {
        self.inner.decay_constant(p)
    }

    fn eval_log(&self, q: usize, n: u64, x: &BallPoint) -> SignedLog {
        let v = self.inner.eval_log(q, n, x);
        SignedLog::new(v.sign * self.factor, v.ln_abs + libm::log(libm::fabs(self.factor)))
    }
}

/// Sampling plan for [`certify_block_family`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertSamples {
    /// Radii per shell, geometric in `1 - |x|` strictly inside the shell.
    pub shell_radii: usize,
    /// How many octaves below the shell top the shell samples reach.
    pub shell_depth: f64,
    pub directions: usize,
    /// General-position radii, `log2(1 - |x|)` from 0 down to `general_min_exp`.
    pub general_radii: usize,
    pub general_min_exp: f64,
    pub seed: u64,
}

impl Default for CertSamples {
    fn default() -> Self {
        CertSamples {
            shell_radii: 64,
            shell_depth: 40.0,
            directions: 256,
            general_radii: 64,
            general_min_exp: -60.0,
            seed: 42,
        }
    }
}

/// Fractional part of the golden ratio; offsets equispaced planar angles
/// so that doubled angles do not collapse onto multiples of `2 pi`.
pub const GOLDEN_TURN: f64 = 0.618_033_988_749_894_9;

/// Directions used by the samplers: offset equispaced turns in the plane,
/// seeded uniform unit vectors otherwise.
pub fn sample_directions(d: u32, count: usize, seed: u64) -> Vec<Direction> {
    if d == 2 {
        (0..count)
            .map(|i| Direction::Turn((i as f64 + GOLDEN_TURN) / count as f64))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Direction::Unit(uniform_on_sphere(&mut rng, d))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub q: usize,
    pub n: u64,
    pub one_minus_r_exp: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub pass: bool,
    /// Smallest log-scale margin seen (negative means violated).
    pub worst_margin: f64,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub em1: AxiomResult,
    pub em2: AxiomResult,
    pub em3: AxiomResult,
    /// Worst shell margin per scale `n`.
    pub em2_by_n: Vec<(u64, f64)>,
    pub p: u32,
    pub decay_constant: f64,
    pub alpha: u32,
    pub width: usize,
    pub samples: CertSamples,
}

impl CertificationReport {
    pub fn pass(&self) -> bool {
        self.em1.pass && self.em2.pass && self.em3.pass
    }
}

/// Log-scale tolerance of the bound and decay axioms.
pub const CERT_TOL: f64 = 1e-9;

struct Worst {
    margin: f64,
    witness: Option<(usize, u64, BallPoint)>,
}

impl Worst {
    fn new() -> Self {
        Worst { margin: f64::INFINITY, witness: None }
    }

    fn offer(&mut self, margin: f64, q: usize, n: u64, x: &BallPoint) {
        if margin < self.margin || self.witness.is_none() {
            self.margin = margin;
            self.witness = Some((q, n, x.clone()));
        }
    }

    fn finish(self, pass: impl Fn(f64) -> bool) -> AxiomResult {
        let (q, n, x) = self.witness.expect("at least one sample");
        AxiomResult {
            pass: pass(self.margin),
            worst_margin: self.margin,
            witness: Witness { q, n, one_minus_r_exp: x.log2_depth, x: x.cartesian() },
        }
    }
}

/// Checks the three axioms on shell and general-position samples.
pub fn certify_block_family<F: BlockFamily + ?Sized>(
    fam: &F,
    p: u32,
    n_list: &[u64],
    samples: &CertSamples,
) -> Result<CertificationReport> {
    if n_list.is_empty() {
        return Err(Error::Config("empty list of scales"));
    }
    if samples.shell_radii == 0 || samples.directions == 0 || samples.general_radii == 0 {
        return Err(Error::Config("empty sample spec"));
    }
    let d = fam.dim();
    let alpha = fam.alpha() as f64;
    let c = fam.decay_constant(p);
    let ln_c = libm::log(c);
    let pf = p as f64;
    let dirs = sample_directions(d, samples.directions, samples.seed);
    let ln_quarter = libm::log(0.25);

    let mut em1 = Worst::new();
    let mut em2 = Worst::new();
    let mut em3 = Worst::new();
    let mut em2_by_n = Vec::with_capacity(n_list.len());

    let check_bounds = |n: u64, x: &BallPoint, em1: &mut Worst, em3: &mut Worst| {
        for q in 1..=fam.width() {
            let v = fam.eval_log(q, n, x);
            let ln_abs = if v.sign == 0.0 { f64::NEG_INFINITY } else { v.ln_abs };
            em1.offer(-ln_abs, q, n, x);
            let bound = ln_c - (n as f64) * pf * LN_2 - pf * x.log2_depth * LN_2;
            em3.offer(bound - ln_abs, q, n, x);
        }
    };

    for &n in n_list {
        let mut worst_n = f64::INFINITY;
        let top = -alpha - n as f64;
        for i in 1..=samples.shell_radii {
            let e = top - samples.shell_depth * i as f64 / samples.shell_radii as f64;
            for dir in &dirs {
                let x = BallPoint::new(e, dir.clone())?;
                let (mut best, mut best_q) = (f64::NEG_INFINITY, 1);
                for q in 1..=fam.width() {
                    let v = fam.eval_log(q, n, &x);
                    if v.sign != 0.0 && v.ln_abs > best {
                        best = v.ln_abs;
                        best_q = q;
                    }
                }
                let margin = best - ln_quarter;
                worst_n = worst_n.min(margin);
                em2.offer(margin, best_q, n, &x);
                check_bounds(n, &x, &mut em1, &mut em3);
            }
        }
        em2_by_n.push((n, worst_n));
        let g = samples.general_radii;
        for i in 0..g {
            let e = if g == 1 { 0.0 } else { samples.general_min_exp * i as f64 / (g - 1) as f64 };
            for dir in &dirs {
                let x = BallPoint::new(e, dir.clone())?;
                check_bounds(n, &x, &mut em1, &mut em3);
            }
        }
    }

    Ok(CertificationReport {
        em1: em1.finish(|m| m >= -CERT_TOL),
        em2: em2.finish(|m| m >= 0.0),
        em3: em3.finish(|m| m >= -CERT_TOL),
        em2_by_n,
        p,
        decay_constant: c,
        alpha: fam.alpha(),
        width: fam.width(),
        samples: *samples,
    })
}
