//! Finite Dirichlet restrictions of the off-diagonal metallic-mean operator
//! `(H psi)(n) = w(n+1) psi(n+1) + w(n) psi(n-1)`.
//!
//! The hopping sequence takes the value `a` on letter `a` and `1` on letter
//! `b`. The `N x N` restriction keeps the interior couplings `w(2..=N)` only,
//! so it is the principal submatrix of the infinite operator.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::measure::EmpiricalMeasure;
use crate::substitution::{self, Letter, DEFAULT_MAX_WORD_LEN};

/// Largest window accepted by [`build_window`].
pub const DEFAULT_MAX_SITES: usize = DEFAULT_MAX_WORD_LEN;

/// Bumped whenever the finite-volume convention changes; part of cache keys.
pub const CONVENTION_VERSION: u32 = 1;

/// Magnitude below which a Sturm pivot is replaced by a tiny signed value.
const PIVOT_FLOOR: f64 = 1e-300;

/// Default bisection width for [`eigenvalues`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// `|a^2 - b^2| / (a b)`.
pub fn coupling_constant(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "hoppings must be positive and finite, got a = {a}, b = {b}"
        )));
    }
    Ok((a * a - b * b).abs() / (a * b))
}

/// The hopping `a >= 1` with `coupling_constant(a, 1) = lambda`, the positive
/// root of `a^2 - lambda a - 1 = 0`.
pub fn hopping_from_coupling(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!(
            "coupling constant must be finite and >= 0, got {lambda}"
        )));
    }
    Ok((lambda + (lambda * lambda + 4.0).sqrt()) / 2.0)
}

/// Substitution order `s` and hopping `a` (with `b = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub s: u32,
    pub a: f64,
}

impl ModelParams {
    pub fn new(s: u32, a: f64) -> Result<Self> {
        if s == 0 {
            return Err(Error::domain("substitution order s must be >= 1"));
        }
        coupling_constant(a, 1.0)?;
        Ok(ModelParams { s, a })
    }

    pub fn from_coupling(s: u32, lambda: f64) -> Result<Self> {
        ModelParams::new(s, hopping_from_coupling(lambda)?)
    }

    pub fn lambda(&self) -> f64 {
        (self.a * self.a - 1.0).abs() / self.a
    }
}

/// Which element of the hull supplies the hoppings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowSource {
    /// Letters `offset + 1 ..= offset + N` of the fixed point `u_s`.
    Substitution { offset: usize },
    /// The rotation sequence with phase `beta` on `1..=N`.
    Rotation { beta: f64 },
}

impl Default for WindowSource {
    fn default() -> Self {
        WindowSource::Substitution { offset: 0 }
    }
}

/// Hoppings `w(1..=N)` of one finite window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoppingWindow {
    weights: Vec<f64>,
    origin: i64,
}

impl HoppingWindow {
    /// Window from explicit positive hoppings.
    pub fn from_weights(weights: Vec<f64>, origin: i64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("a window needs N >= 1 sites"));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::domain(format!("hopping {w} is not positive and finite")));
        }
        Ok(HoppingWindow { weights, origin })
    }

    /// `w(1..=N)`; `weights()[k]` is `w(k + 1)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Off-diagonal of the Dirichlet matrix: `w(2..=N)`.
    pub fn couplings(&self) -> &[f64] {
        &self.weights[1..]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Closed interval guaranteed to contain the spectrum.
    pub fn search_interval(&self) -> (f64, f64) {
        let r = 2.0 * (1.0 + self.max_weight());
        (-r, r)
    }

    /// The restriction as a dense matrix (small `N` only).
    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::tridiagonal(&vec![0.0; self.len()], self.couplings())
    }
}

/// Hoppings of length `n` from the chosen hull element.
pub fn build_window(p: ModelParams, n: usize, source: WindowSource) -> Result<HoppingWindow> {
    if n == 0 {
        return Err(Error::domain("a window needs N >= 1 sites"));
    }
    let map = |l: &Letter| match l {
        Letter::A => p.a,
        Letter::B => 1.0,
    };
    match source {
        WindowSource::Substitution { offset } => {
            let need = offset as u128 + n as u128;
            if need > DEFAULT_MAX_SITES as u128 {
                return Err(Error::cap("window sites", need, DEFAULT_MAX_SITES as u64));
            }
            let word = substitution::iterate_at_least(p.s, need as usize, DEFAULT_MAX_WORD_LEN)?;
            let weights = word.letters()[offset..offset + n].iter().map(map).collect();
            Ok(HoppingWindow {
                weights,
                origin: offset as i64,
            })
        }
        WindowSource::Rotation { beta } => {
            if n > DEFAULT_MAX_SITES {
                return Err(Error::cap("window sites", n as u64, DEFAULT_MAX_SITES as u64));
            }
            let word = substitution::rotation_sequence(p.s, beta, 1..=n as i64)?;
            let weights = word.letters().iter().map(map).collect();
            Ok(HoppingWindow { weights, origin: 0 })
        }
    }
}

/// Number of eigenvalues `< e` by Sylvester inertia of `H - e`.
pub fn eig_count_below(w: &HoppingWindow, e: f64) -> usize {
    count_below(w.couplings(), e)
}

/// Number of eigenvalues `<= e`.
pub fn eig_count_at_most(w: &HoppingWindow, e: f64) -> usize {
    count_below(w.couplings(), e.next_up())
}

fn count_below(off: &[f64], e: f64) -> usize {
    if e.is_nan() {
        return 0;
    }
    // `0.0 - e` keeps a zero pivot at +0, which counts it as nonnegative.
    let mut q = 0.0 - e;
    let mut neg = 0usize;
    if q.abs() < PIVOT_FLOOR {
        q = PIVOT_FLOOR.copysign(q);
    }
    if q < 0.0 {
        neg += 1;
    }
    for &c in off {
        q = -e - c * c / q;
        if q.abs() < PIVOT_FLOOR || q.is_nan() {
            q = PIVOT_FLOOR.copysign(if q.is_nan() { 1.0 } else { q });
        }
        if q < 0.0 {
            neg += 1;
        }
    }
    neg
}

/// All `N` eigenvalues, each located by bisection to a bracket of width `<= tol`.
pub fn eigenvalues(w: &HoppingWindow, tol: f64) -> Result<EmpiricalMeasure> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let off = w.couplings();
    let (lo, hi) = w.search_interval();
    let mut out = Vec::with_capacity(w.len());
    // Zero is split off exactly so that odd windows report a true 0.
    let below = count_below(off, 0.0);
    let at_most = count_below(off, 0f64.next_up());
    bisect(off, lo, 0.0, count_below(off, lo), below, tol, 0, &mut out);
    out.extend(std::iter::repeat_n(0.0, at_most - below));
    bisect(off, 0f64.next_up(), hi, at_most, count_below(off, hi), tol, 0, &mut out);
    debug_assert_eq!(out.len(), w.len());
    EmpiricalMeasure::new(out)
}

/// Splits `[lo, hi)` until each bracket holding eigenvalues is narrower than
/// `tol`; the top levels run in parallel.
#[allow(clippy::too_many_arguments)]
fn bisect(off: &[f64], lo: f64, hi: f64, clo: usize, chi: usize, tol: f64, depth: u32, out: &mut Vec<f64>) {
    if chi == clo {
        return;
    }
    let mid = 0.5 * (lo + hi);
    if hi - lo <= tol || mid <= lo || mid >= hi {
        out.extend(std::iter::repeat_n(mid, chi - clo));
        return;
    }
    let cmid = count_below(off, mid);
    if depth < 8 && chi - clo > 64 {
        let (mut left, right) = rayon::join(
            || {
                let mut v = Vec::new();
                bisect(off, lo, mid, clo, cmid, tol, depth + 1, &mut v);
                v
            },
            || {
                let mut v = Vec::new();
                bisect(off, mid, hi, cmid, chi, tol, depth + 1, &mut v);
                v
            },
        );
        left.extend(right);
        out.append(&mut left);
    } else {
        bisect(off, lo, mid, clo, cmid, tol, depth + 1, out);
        bisect(off, mid, hi, cmid, chi, tol, depth + 1, out);
    }
}

/// Finite-volume integrated density of states `#{E_k <= e} / N` for the
/// window starting at the origin of `u_s`.
pub fn ids(p: ModelParams, e: f64, n: usize) -> Result<f64> {
    let w = build_window(p, n, WindowSource::default())?;
    Ok(ids_window(&w, e))
}

pub fn ids_window(w: &HoppingWindow, e: f64) -> f64 {
    eig_count_at_most(w, e) as f64 / w.len() as f64
}

/// `(E, ids)` pairs over a grid, evaluated in parallel.
pub fn ids_curve(w: &HoppingWindow, grid: &[f64]) -> Vec<(f64, f64)> {
    grid.par_iter().map(|&e| (e, ids_window(w, e))).collect()
}

/// Integrated density of states of the free chain, `arccos(-E/2) / pi` on `[-2, 2]`.
pub fn free_ids(e: f64) -> f64 {
    if e <= -2.0 {
        0.0
    } else if e >= 2.0 {
        1.0
    } else {
        (-e / 2.0).acos() / std::f64::consts::PI
    }
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
