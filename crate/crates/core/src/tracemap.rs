//! The trace map `T_s = U^s ∘ P` and the spectra it encodes.
//!
//! `E` lies in the spectrum of the off-diagonal model exactly when the
//! forward orbit of `J(E)` on the line of initial conditions is bounded. At
//! finite depth this is replaced by an escape-time test, which gives outer
//! covers of the spectrum by bands.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{BandCover, Interval};
use crate::error::{Error, Result};
use crate::jacobi1d::ModelParams;
use crate::measure::EmpiricalMeasure;

/// A point of `R^3`, the state of the trace-map dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TraceVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        TraceVector { x, y, z }
    }

    pub fn sup_norm(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dist_sup(&self, o: &TraceVector) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }
}

/// `U(x, y, z) = (2xz - y, x, z)`.
pub fn apply_u(v: TraceVector) -> TraceVector {
    TraceVector::new(2.0 * v.x * v.z - v.y, v.x, v.z)
}

/// `P(x, y, z) = (x, z, y)`.
pub fn apply_p(v: TraceVector) -> TraceVector {
    TraceVector::new(v.x, v.z, v.y)
}

/// `T_s(v) = U^s(P(v))`.
pub fn trace_map(s: u32, v: TraceVector) -> TraceVector {
    assert!(s >= 1, "trace map needs s >= 1");
    let mut w = apply_p(v);
    for _ in 0..s {
        w = apply_u(w);
    }
    w
}

/// The Fricke–Vogt invariant `x^2 + y^2 + z^2 - 2xyz - 1`.
///
/// Products are split exactly with `fma` and the terms summed with
/// compensation, so the result is accurate even when `2xyz` nearly cancels
/// the squares.
pub fn fricke_vogt(v: TraceVector) -> f64 {
    let two_prod = |a: f64, b: f64| {
        let p = a * b;
        (p, a.mul_add(b, -p))
    };
    let (xy, xy_err) = two_prod(v.x, v.y);
    let (xyz, xyz_err) = two_prod(xy, v.z);
    let xyz_lo = xyz_err + xy_err * v.z;
    let (xx, xx_err) = two_prod(v.x, v.x);
    let (yy, yy_err) = two_prod(v.y, v.y);
    let (zz, zz_err) = two_prod(v.z, v.z);
    let terms = [xx, yy, zz, -2.0 * xyz, -1.0, xx_err, yy_err, zz_err, -2.0 * xyz_lo];
    // Neumaier summation.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let u = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - u) + t
        } else {
            (t - u) + sum
        };
        sum = u;
    }
    sum + comp
}

/// Point `((E^2 - a^2 - 1) / 2a, E / 2a, E / 2)` of the line of initial
/// conditions for the off-diagonal model.
pub fn line_point(p: ModelParams, e: f64) -> TraceVector {
    let a = p.a;
    TraceVector::new((e * e - a * a - 1.0) / (2.0 * a), e / (2.0 * a), e / 2.0)
}

/// Line of initial conditions `((E^2 - λE - 2) / 2, (E - λ) / 2, E / 2)` of
/// the on-site (diagonal) model.
pub fn onsite_line_point(lambda: f64, e: f64) -> TraceVector {
    TraceVector::new((e * e - lambda * e - 2.0) / 2.0, (e - lambda) / 2.0, e / 2.0)
}

/// Outcome of [`escape_time`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Escape {
    /// Escape detected after this many applications of `T_s`.
    Escaped(usize),
    Survived,
}

impl Escape {
    pub fn survived(self) -> bool {
        self == Escape::Survived
    }
}

/// Default escape radius `3 + λ`.
pub fn default_escape_radius(lambda: f64) -> f64 {
    3.0 + lambda
}

/// Iterates `T_s` from `v` for up to `max_iter` steps.
///
/// Step `k` counts as an escape when the sup norm exceeds `radius` and has
/// grown strictly over the two preceding steps, or when a coordinate is no
/// longer finite.
pub fn escape_time(s: u32, v: TraceVector, max_iter: usize, radius: f64) -> Escape {
    let mut n2 = f64::NAN;
    let mut n1 = v.sup_norm();
    let mut w = v;
    for k in 1..=max_iter {
        w = trace_map(s, w);
        if !w.is_finite() {
            return Escape::Escaped(k);
        }
        let n = w.sup_norm();
        if n > radius && n > n1 && n1 > n2 {
            return Escape::Escaped(k);
        }
        n2 = n1;
        n1 = n;
    }
    Escape::Survived
}

/// The first `n + 1` points `v, T_s v, ..., T_s^n v`.
pub fn orbit(s: u32, v: TraceVector, n: usize) -> Vec<TraceVector> {
    std::iter::successors(Some(v), |&w| Some(trace_map(s, w)))
        .take(n + 1)
        .collect()
}

/// Parameters of the band-cover refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverConfig {
    /// Width below which band edges stop being bisected.
    pub resolution: f64,
    /// Escape radius; `None` means [`default_escape_radius`].
    pub escape_radius: Option<f64>,
    /// Uniform samples on the search interval at depth 1.
    pub initial_grid: usize,
    /// Minimum number of samples placed in each band when refining it.
    pub min_band_samples: usize,
    /// Cap on the number of bands at any depth.
    pub max_bands: usize,
}

impl CoverConfig {
    pub fn new(resolution: f64) -> Self {
        CoverConfig {
            resolution,
            ..CoverConfig::default()
        }
    }
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            resolution: 1e-4,
            escape_radius: None,
            initial_grid: 4096,
            min_band_samples: 64,
            max_bands: 1_000_000,
        }
    }
}

/// Outer cover of the energies whose orbit survives `level` steps.
pub fn spectrum_cover(p: ModelParams, level: usize, resolution: f64) -> Result<BandCover> {
    let mut covers = spectrum_covers(p, &[level], &CoverConfig::new(resolution))?;
    Ok(covers.pop().expect("one level requested"))
}

/// Covers at each requested depth, from one nested refinement.
///
/// Depth `k` is computed by resampling every band of depth `k - 1`, so the
/// returned covers are nested. Each band is sampled at
/// `max(min_band_samples, width / h)` points, `h` being the depth-1 spacing,
/// plus `E = 0` whenever the band contains it. Runs of surviving samples
/// become bands whose edges are bisected against their escaping neighbours
/// down to `resolution`; the escaping side of every bracket is reported, so
/// the cover errs outward.
pub fn spectrum_covers(p: ModelParams, levels: &[usize], cfg: &CoverConfig) -> Result<Vec<BandCover>> {
    if !(cfg.resolution > 0.0 && cfg.resolution.is_finite()) {
        return Err(Error::domain(format!("resolution must be > 0, got {}", cfg.resolution)));
    }
    if cfg.initial_grid < 2 || cfg.min_band_samples < 2 {
        return Err(Error::domain("cover grids need at least two samples"));
    }
    if levels.contains(&0) {
        return Err(Error::domain("cover depth must be >= 1"));
    }
    let lambda = p.lambda();
    let radius = cfg.escape_radius.unwrap_or_else(|| default_escape_radius(lambda));
    if !(radius > 2.0) {
        return Err(Error::domain(format!("escape radius must exceed 2, got {radius}")));
    }
    let half = 2.0 * (1.0 + p.a.max(1.0));
    let spacing = 2.0 * half / (cfg.initial_grid - 1) as f64;
    let max_level = levels.iter().copied().max().unwrap_or(0);

    let mut bands = vec![Interval::new(-half, half)];
    let mut out = Vec::with_capacity(levels.len());
    for level in 1..=max_level {
        let survives = |e: f64| escape_time(p.s, line_point(p, e), level, radius).survived();
        let refined: Vec<Vec<Interval>> = bands
            .par_iter()
            .map(|b| {
                let n = if level == 1 {
                    cfg.initial_grid
                } else {
                    cfg.min_band_samples.max((b.len() / spacing).ceil() as usize + 1)
                };
                refine_band(*b, n, cfg.resolution, &survives)
            })
            .collect();
        let next: Vec<Interval> = refined.into_iter().flatten().collect();
        if next.len() > cfg.max_bands {
            return Err(Error::cap(
                "bands in spectrum cover",
                next.len() as u64,
                cfg.max_bands as u64,
            ));
        }
        bands = crate::cover::normalize(next);
        if levels.contains(&level) {
            let cover = BandCover {
                s: p.s,
                lambda,
                lambda2: None,
                level,
                resolution: cfg.resolution,
                bands: bands.clone(),
            };
            for (i, &l) in levels.iter().enumerate() {
                if l == level {
                    out.push((i, cover.clone()));
                }
            }
        }
    }
    out.sort_by_key(|(i, _)| *i);
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

fn refine_band(b: Interval, n: usize, res: f64, survives: &(impl Fn(f64) -> bool + Sync)) -> Vec<Interval> {
    let mut grid: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                b.hi
            } else {
                b.lo + b.len() * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    if b.lo < 0.0 && 0.0 < b.hi {
        let i = grid.partition_point(|&x| x < 0.0);
        if grid[i] != 0.0 {
            grid.insert(i, 0.0);
        }
    }
    grid.dedup();
    let alive: Vec<bool> = grid.iter().map(|&e| survives(e)).collect();

    let mut out = Vec::new();
    let mut i = 0;
    while i < grid.len() {
        if !alive[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < grid.len() && alive[i + 1] {
            i += 1;
        }
        let lo = if start == 0 {
            grid[0]
        } else {
            edge(grid[start - 1], grid[start], res, survives)
        };
        let hi = if i + 1 == grid.len() {
            grid[i]
        } else {
            edge(grid[i + 1], grid[i], res, survives)
        };
        out.push(Interval::new(lo, hi));
        i += 1;
    }
    out
}

/// Bisects between an escaping and a surviving energy; returns the escaping
/// end of the final bracket.
fn edge(mut dead: f64, mut alive: f64, res: f64, survives: &impl Fn(f64) -> bool) -> f64 {
    while (alive - dead).abs() > res {
        let mid = 0.5 * (dead + alive);
        if mid == dead || mid == alive {
            break;
        }
        if survives(mid) {
            alive = mid;
        } else {
            dead = mid;
        }
    }
    dead
}

/// Hyperbolic toral automorphism `(θ, φ) -> (sθ + φ, θ) mod 1`.
pub fn cat_map(s: u32, theta: f64, phi: f64) -> (f64, f64) {
    let t = s as f64 * theta + phi;
    (t - t.floor(), theta)
}

/// Semi-conjugacy `F(θ, φ) = (cos 2π(θ + φ), cos 2πθ, cos 2πφ)` from the
/// torus onto the surface `G = 0`.
pub fn factor_map(theta: f64, phi: f64) -> TraceVector {
    TraceVector::new(
        (2.0 * PI * (theta + phi)).cos(),
        (2.0 * PI * theta).cos(),
        (2.0 * PI * phi).cos(),
    )
}

/// Push-forward of Lebesgue measure on `[0, 1/2]` under `t -> 2 cos 2πt`,
/// sampled at the stratum midpoints `t_i = (i + 1/2) / 2n`.
pub fn pushforward_free_dos(num_samples: usize) -> Result<EmpiricalMeasure> {
    if num_samples == 0 {
        return Err(Error::domain("num_samples must be >= 1"));
    }
    let n = num_samples as f64;
    EmpiricalMeasure::new(
        (0..num_samples)
            .map(|i| 2.0 * (2.0 * PI * (i as f64 + 0.5) / (2.0 * n)).cos())
            .collect(),
    )
}
