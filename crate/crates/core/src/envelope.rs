//! Lower log-convex envelopes of weights in `(log r, log w)` coordinates.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::logspace::{ln_r_from_ln_s, ln_s_from_ln_r};
use crate::weights::WeightFunction;
use crate::{Error, Result};

/// A radius carried by both `ln r` and `ln s`, `s = 1 - r`, each computed
/// from whichever of `r`, `s` is small.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub ln_r: f64,
    pub ln_s: f64,
}

impl GridPoint {
    pub fn from_ln_s(ln_s: f64) -> Self {
        GridPoint { ln_r: ln_r_from_ln_s(ln_s), ln_s }
    }

    pub fn from_ln_r(ln_r: f64) -> Self {
        GridPoint { ln_r, ln_s: ln_s_from_ln_r(ln_r) }
    }

    pub fn r(&self) -> f64 {
        libm::exp(self.ln_r)
    }
}

/// Geometric grid: `s = 2^(-i/per_dyad)` for `0 < i <= s_min_exp * per_dyad`,
/// preceded by an origin tail `r = 2^-i` reaching down to `r = 2^-origin_tail_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s_min_exp: u32,
    pub per_dyad: u32,
    pub origin_tail_exp: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { s_min_exp: 40, per_dyad: 16, origin_tail_exp: 40 }
    }
}

/// Evaluation grid sorted by increasing `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<GridPoint>,
}

pub const MIN_GRID_POINTS: usize = 16;

impl Grid {
    pub fn geometric(spec: GridSpec) -> Result<Self> {
        if spec.per_dyad == 0 {
            return Err(Error::Grid("per_dyad must be positive"));
        }
        let first_ln_s = -LN_2 / spec.per_dyad as f64;
        let first_ln_r = ln_r_from_ln_s(first_ln_s);
        let mut points = Vec::new();
        for i in (1..=spec.origin_tail_exp).rev() {
            let ln_r = -(i as f64) * LN_2;
            if ln_r < first_ln_r {
                points.push(GridPoint::from_ln_r(ln_r));
            }
        }
        let steps = spec.s_min_exp * spec.per_dyad;
        for i in 1..=steps {
            points.push(GridPoint::from_ln_s(-(i as f64) * LN_2 / spec.per_dyad as f64));
        }
        Self::from_points(points)
    }

    /// Grid from explicit `s` values, strictly decreasing inside `(0, 1)`.
    pub fn from_s_values(s: &[f64]) -> Result<Self> {
        if s.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
            return Err(Error::Grid("grid s values must lie in (0, 1)"));
        }
        Self::from_points(s.iter().map(|&v| GridPoint::from_ln_s(libm::log(v))).collect())
    }

    pub fn from_points(points: Vec<GridPoint>) -> Result<Self> {
        if points.len() < MIN_GRID_POINTS {
            return Err(Error::Grid("grid needs at least 16 points"));
        }
        if points.windows(2).any(|p| !(p[1].ln_r > p[0].ln_r && p[1].ln_s < p[0].ln_s)) {
            return Err(Error::Grid("grid s values must be strictly decreasing"));
        }
        if points.iter().any(|p| !p.ln_r.is_finite() || !p.ln_s.is_finite()) {
            return Err(Error::Grid("grid radii must lie in (0, 1)"));
        }
        Ok(Grid { points })
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Piecewise-linear convex minorant of `log w` as a function of `log r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogConvexEnvelope {
    /// Hull vertices `(ln r, log w~)`, `ln r` strictly increasing.
    pub nodes: Vec<(f64, f64)>,
    /// The grid the envelope was built on.
    pub grid: Vec<GridPoint>,
    /// `log w` sampled on the grid.
    pub samples: Vec<f64>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower convex hull (monotone chain) of `(ln r_i, log w(r_i))`.
pub fn build_envelope(w: &WeightFunction, grid: &Grid) -> Result<LogConvexEnvelope> {
    let samples = grid
        .points()
        .iter()
        .map(|p| w.log_weight_at(p.ln_s))
        .collect::<Result<Vec<_>>>()?;
    Ok(envelope_of_samples(grid.points().to_vec(), samples))
}

/// Envelope of arbitrary samples on a grid (points sorted by `ln r`).
pub fn envelope_of_samples(grid: Vec<GridPoint>, samples: Vec<f64>) -> LogConvexEnvelope {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    for (p, &v) in grid.iter().zip(&samples) {
        let q = (p.ln_r, v);
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    LogConvexEnvelope { nodes: hull, grid, samples }
}

impl LogConvexEnvelope {
    pub fn r_min(&self) -> f64 {
        libm::exp(self.nodes[0].0)
    }

    pub fn r_max(&self) -> f64 {
        libm::exp(self.nodes[self.nodes.len() - 1].0)
    }

    /// Segment slopes; non-decreasing by construction.
    pub fn slopes(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|s| (s[1].1 - s[0].1) / (s[1].0 - s[0].0)).collect()
    }

    /// `log w~` at `ln r`, clamped to the end values outside the domain.
    pub fn eval(&self, ln_r: f64) -> f64 {
        let n = &self.nodes;
        if ln_r <= n[0].0 {
            return n[0].1;
        }
        if ln_r >= n[n.len() - 1].0 {
            return n[n.len() - 1].1;
        }
        let i = n.partition_point(|p| p.0 <= ln_r);
        let (a, b) = (n[i - 1], n[i]);
        if ln_r == a.0 {
            return a.1;
        }
        a.1 + (ln_r - a.0) * (b.1 - a.1) / (b.0 - a.0)
    }

    /// Envelope values at every grid point.
    pub fn grid_values(&self) -> Vec<f64> {
        self.grid.iter().map(|p| self.eval(p.ln_r)).collect()
    }

    /// Slope of the hull segment `(u_a, u_b]` containing `ln r`; the first
    /// segment's slope at or left of the first node.
    pub fn left_slope(&self, ln_r: f64) -> f64 {
        let n = &self.nodes;
        if n.len() < 2 {
            return 0.0;
        }
        let i = n.partition_point(|p| p.0 < ln_r).clamp(1, n.len() - 1);
        (n[i].1 - n[i - 1].1) / (n[i].0 - n[i - 1].0)
    }
}

/// `max_grid w / w~` together with the radius attaining it.
pub fn logconvexity_defect(w: &WeightFunction, env: &LogConvexEnvelope) -> Result<(f64, f64)> {
    let mut worst = 0.0f64;
    let mut arg = env.grid[0].r();
    for p in &env.grid {
        let gap = w.log_weight_at(p.ln_s)? - env.eval(p.ln_r);
        if gap > worst {
            worst = gap;
            arg = p.r();
        }
    }
    Ok((libm::exp(worst), arg))
}
