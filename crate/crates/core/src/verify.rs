//! Acceptance suite: fourteen quantitative checks of the toolkit, shared by
//! the `acceptance` test target and the `verify` CLI subcommand.
//!
//! Reports are deterministic. Wall-clock time enters only the pass/fail
//! decision of the criteria with a runtime budget, never their text.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cantor::{gaps, is_interval, thickness};
use crate::cover::BandCover;
use crate::error::Result;
use crate::jacobi1d::{self, build_window, free_ids, linspace, ModelParams, WindowSource};
use crate::labyrinth::{self, LabyrinthParams, LogConvolution, ProductDos, Sublattice};
use crate::substitution::{self, Parity};
use crate::tracemap::{
    self, cat_map, escape_time, factor_map, fricke_vogt, line_point, spectrum_covers, trace_map, CoverConfig,
    TraceVector,
};

/// Number of criteria in the suite.
pub const CRITERIA: u32 = 14;

/// Word-length cap used for twin witnesses; `C_3(12)` has about two million letters.
pub const WITNESS_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0x5eed_1a6e }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    /// `criterion 01 PASS name: detail`
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "trace-map invariant conservation",
        2 => "torus semi-conjugacy",
        3 => "free spectrum is [-2, 2]",
        4 => "free integrated density of states",
        5 => "spectral symmetry",
        6 => "2D tensor eigenvalue law",
        7 => "2D density of states as product counting",
        8 => "log-convolution identity",
        9 => "small-coupling 2D spectrum is an interval",
        10 => "large-coupling 2D spectrum shrinks with depth",
        11 => "zero lies in every spectrum",
        12 => "odd-twin witnesses and parity patterns",
        13 => "thickness grows as coupling decreases",
        14 => "determinism of the suite",
        _ => "unknown criterion",
    }
}

type Outcome = Result<(bool, String)>;

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: u32, cfg: &VerifyConfig) -> CriterionResult {
    let t0 = Instant::now();
    let out: Outcome = match id {
        1 => c01_conservation(cfg),
        2 => c02_semiconjugacy(cfg),
        3 => c03_free_spectrum(),
        4 => c04_free_ids(),
        5 => c05_symmetry(),
        6 => c06_tensor_law(),
        7 => c07_product_counting(),
        8 => c08_log_convolution(cfg),
        9 => c09_small_coupling(),
        10 => c10_large_coupling(),
        11 => c11_zero_in_spectrum(),
        12 => c12_twins(),
        13 => c13_thickness(),
        14 => c14_determinism(cfg),
        _ => Ok((false, format!("no criterion with id {id}"))),
    };
    let elapsed = t0.elapsed();
    let budget = match id {
        1 => Some(Duration::from_secs(5)),
        3 => Some(Duration::from_secs(10)),
        6 => Some(Duration::from_secs(30)),
        _ => None,
    };
    let (mut passed, mut detail) = match out {
        Ok(v) => v,
        Err(e) => (false, format!("error ({}): {e}", e.kind())),
    };
    if let Some(b) = budget {
        detail.push_str(&format!("; runtime budget {}s", b.as_secs()));
        if elapsed > b {
            passed = false;
            detail.push_str(" exceeded");
        }
    }
    CriterionResult {
        id,
        name: name(id),
        passed,
        detail,
        elapsed,
    }
}

/// Runs criteria `1..=CRITERIA` in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, cfg)).collect()
}

/// One line per criterion plus a summary line.
pub fn render_text(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&r.line());
        s.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed).count();
    s.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    s
}

pub fn render_json(results: &[CriterionResult]) -> String {
    serde_json::to_string_pretty(results).expect("results serialize") + "\n"
}

fn rng(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn c01_conservation(cfg: &VerifyConfig) -> Outcome {
    let mut r = rng(cfg, 1);
    let pts: Vec<TraceVector> = (0..100_000)
        .map(|_| {
            TraceVector::new(
                r.gen_range(-2.0..=2.0),
                r.gen_range(-2.0..=2.0),
                r.gen_range(-2.0..=2.0),
            )
        })
        .collect();
    let mut worst: f64 = 0.0;
    for s in 1..=3 {
        for &v in &pts {
            let g = fricke_vogt(v);
            worst = worst.max((fricke_vogt(trace_map(s, v)) - g).abs() / (1.0 + g.abs()));
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max |G(T v) - G(v)| / (1 + |G(v)|) = {worst:.3e} over 3 x 1e5 points (<= 1e-10)"),
    ))
}

fn c02_semiconjugacy(cfg: &VerifyConfig) -> Outcome {
    let mut r = rng(cfg, 2);
    let pts: Vec<(f64, f64)> = (0..10_000).map(|_| (r.gen::<f64>(), r.gen::<f64>())).collect();
    let mut worst: f64 = 0.0;
    for s in 1..=3 {
        for &(t, p) in &pts {
            let (a, b) = cat_map(s, t, p);
            worst = worst.max(trace_map(s, factor_map(t, p)).dist_sup(&factor_map(a, b)));
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max sup-norm defect {worst:.3e} over 3 x 1e4 points (<= 1e-10)"),
    ))
}

fn interval_cover(lo: f64, hi: f64) -> BandCover {
    BandCover::from_intervals(&[(lo, hi)]).expect("valid interval")
}

fn c03_free_spectrum() -> Outcome {
    let c = tracemap::spectrum_cover(ModelParams::new(1, 1.0)?, 20, 1e-4)?;
    let h = c.hausdorff(&interval_cover(-2.0, 2.0));
    Ok((
        c.len() == 1 && h <= 1e-3,
        format!("{} band(s), Hausdorff distance to [-2, 2] = {h:.3e} (<= 1e-3)", c.len()),
    ))
}

fn c04_free_ids() -> Outcome {
    let w = build_window(ModelParams::new(1, 1.0)?, 4096, WindowSource::default())?;
    let grid = linspace(-2.5, 2.5, 401);
    let worst = jacobi1d::ids_curve(&w, &grid)
        .iter()
        .map(|&(e, v)| (v - free_ids(e)).abs())
        .fold(0.0, f64::max);
    Ok((
        worst <= 1e-2,
        format!("sup |ids - free_ids| = {worst:.3e} on 401 points, N = 4096 (<= 1e-2)"),
    ))
}

fn c05_symmetry() -> Outcome {
    let mut cases = Vec::new();
    for s in 1..=2 {
        for a in [1.5, 2.0, 4.0] {
            for n in [257, 512] {
                cases.push((s, a, n));
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(s, a, n)| -> Result<f64> {
            let w = build_window(ModelParams::new(s, a)?, n, WindowSource::default())?;
            let e = jacobi1d::eigenvalues(&w, 1e-12)?;
            let e = e.support();
            Ok((0..n).map(|k| (e[k] + e[n - 1 - k]).abs()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        worst <= 1e-9,
        format!(
            "max |e[k] + e[N+1-k]| = {worst:.3e} over {} windows (<= 1e-9)",
            cases.len()
        ),
    ))
}

fn c06_tensor_law() -> Outcome {
    let p = LabyrinthParams::new(1, 1.3, 1.5)?;
    let mut worst: f64 = 0.0;
    for n in [6, 8] {
        let dense = labyrinth::dense_eigs_2d(&labyrinth::build_2d(p, n, Sublattice::Full)?)?;
        let prod = labyrinth::product_eigs(p, n)?;
        if dense.len() != prod.len() {
            return Ok((
                false,
                format!("N = {n}: {} dense vs {} product eigenvalues", dense.len(), prod.len()),
            ));
        }
        for (x, y) in dense.support().iter().zip(prod.support()) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok((
        worst <= 1e-7,
        format!("max multiset deviation {worst:.3e} for N = 6, 8 (<= 1e-7)"),
    ))
}

fn c07_product_counting() -> Outcome {
    let n = 8;
    let p = LabyrinthParams::new(1, 1.3, 1.5)?;
    let dense = labyrinth::dense_eigs_2d(&labyrinth::build_2d(p, n, Sublattice::Full)?)?;
    let pd = ProductDos::from_params(p, n)?;
    // Every 1D eigenvalue lies in [-2 max a, 2 max a].
    let lim = (2.0 * p.a1.max(p.a2).max(1.0)).powi(2);
    let worst = linspace(-lim, lim, 401)
        .into_iter()
        .map(|e| (pd.cdf(e) - dense.cdf(e)).abs())
        .fold(0.0, f64::max);
    let tol = 1.0 / (n * n) as f64 + 1e-9;
    Ok((
        worst <= tol,
        format!("sup CDF difference {worst:.3e} on 401 points, N = 8 (<= {tol:.6e})"),
    ))
}

fn c08_log_convolution(cfg: &VerifyConfig) -> Outcome {
    let (n, bins) = (1024, 1024);
    let p = LabyrinthParams::from_couplings(1, 0.5, 0.5)?;
    let (e1, e2) = labyrinth::axis_eigenvalues(p, n)?;
    let pd = ProductDos::new(&e1, &e2);
    let lc = LogConvolution::new(&e1, &e2, 2.0 * (1.0 + p.a1.max(p.a2)), bins)?;
    let reach = (2.0 * (1.0 + p.a1.max(p.a2))).powi(2) / 4.0;
    let mut r = rng(cfg, 8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x: f64 = r.gen_range(-reach..reach);
        let y: f64 = r.gen_range(-reach..reach);
        let (lo, hi) = (x.min(y), x.max(y));
        let direct = pd.cdf(hi) - pd.cdf(lo);
        worst = worst.max((lc.mass(lo, hi) - direct).abs());
    }
    let nn = n as f64;
    let tol = 2.0 / bins as f64 + 2.0 * (2.0 * nn - 1.0) / (nn * nn);
    Ok((
        worst <= tol,
        format!("max deviation {worst:.3e} on 20 intervals, N = 1024, 1024 bins (<= {tol:.4e})"),
    ))
}

fn c09_small_coupling() -> Outcome {
    let res = 1e-4;
    let c = labyrinth::spectrum_2d(LabyrinthParams::from_couplings(1, 0.1, 0.1)?, 15, res)?;
    let chk = is_interval(&c, 4.0 * res);
    Ok((
        chk.is_interval,
        format!(
            "{} band(s), largest gap {:.3e} (tolerance {:.1e})",
            c.len(),
            chk.largest_gap,
            4.0 * res
        ),
    ))
}

fn c10_large_coupling() -> Outcome {
    let covers = labyrinth::spectrum_2d_levels(
        LabyrinthParams::new(1, 4.0, 4.0)?,
        &[5, 10, 15],
        &CoverConfig::new(1e-4),
    )?;
    let lens: Vec<f64> = covers.iter().map(BandCover::total_length).collect();
    let decreasing = lens.windows(2).all(|w| w[1] < w[0]);
    let gap_counts: Vec<usize> = covers.iter().map(|c| gaps(c).len()).collect();
    let gapped = gap_counts.iter().all(|&g| g > 0);
    Ok((
        decreasing && gapped,
        format!(
            "total lengths {:.6} > {:.6} > {:.6}, gap counts {:?}",
            lens[0], lens[1], lens[2], gap_counts
        ),
    ))
}

fn c11_zero_in_spectrum() -> Outcome {
    let lambdas = [0.0, 0.5, 1.5, 3.75];
    let mut orbits_ok = true;
    for &l in &lambdas {
        let p = ModelParams::from_coupling(1, l)?;
        for s in 1..=3 {
            let p = ModelParams { s, ..p };
            let r = tracemap::default_escape_radius(l);
            orbits_ok &= escape_time(s, line_point(p, 0.0), 10_000, r).survived();
        }
    }
    let mut checked = 0usize;
    let mut missing = Vec::new();
    for (s, depth) in [(1u32, 12usize), (2, 8)] {
        let levels: Vec<usize> = (1..=depth).collect();
        for &l in &lambdas {
            let covers = spectrum_covers(ModelParams::from_coupling(s, l)?, &levels, &CoverConfig::default())?;
            for c in &covers {
                checked += 1;
                if !c.contains(0.0) {
                    missing.push((s, l, c.level));
                }
            }
            let p = LabyrinthParams::from_couplings(s, l, 0.5)?;
            for c in labyrinth::spectrum_2d_levels(p, &[depth / 3, 2 * depth / 3, depth], &CoverConfig::default())? {
                checked += 1;
                if !c.contains(0.0) {
                    missing.push((s, l, c.level));
                }
            }
        }
    }
    Ok((
        orbits_ok && missing.is_empty(),
        format!(
            "zero-energy orbits survive 1e4 steps: {orbits_ok}; {} of {checked} covers contain 0",
            checked - missing.len()
        ),
    ))
}

fn c12_twins() -> Outcome {
    let cases: Vec<(u32, usize)> = (1..=3).flat_map(|s| (1..=12).map(move |k| (s, k))).collect();
    let bad: Vec<(u32, usize)> = cases
        .par_iter()
        .map(|&(s, k)| -> Result<Option<(u32, usize)>> {
            let ck = substitution::iterate_capped(s, k, WITNESS_CAP)?;
            let x = substitution::twin_witness(s, k, WITNESS_CAP)?;
            let ok = x.len() <= 3 * ck.len()
                && substitution::find_twin(&ck, &x, Parity::Odd)
                    .is_some_and(|t| t.validate(&ck, &x) && t.offset % 2 == 1);
            Ok((!ok).then_some((s, k)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut parity_ok = true;
    for s in 1..=3 {
        parity_ok &= substitution::parity_pattern(s, 30)? == substitution::expected_parity_pattern(s, 30);
    }
    Ok((
        bad.is_empty() && parity_ok,
        format!(
            "{} of {} witnesses confirmed odd-twin within 3|C_s(k)|; parity patterns match: {parity_ok}",
            cases.len() - bad.len(),
            cases.len()
        ),
    ))
}

/// Thickness values in increasing coupling order; at most one inversion of
/// at most 5% is tolerated.
pub fn thickness_trend_ok(taus: &[f64]) -> bool {
    let mut inversions = 0;
    for w in taus.windows(2) {
        if w[1] > w[0] {
            inversions += 1;
            if w[1] > 1.05 * w[0] {
                return false;
            }
        }
    }
    inversions <= 1
}

fn c13_thickness() -> Outcome {
    let lambdas = [0.1, 0.2, 0.5, 1.0];
    let taus = lambdas
        .par_iter()
        .map(|&l| -> Result<f64> {
            let mut c = spectrum_covers(ModelParams::from_coupling(1, l)?, &[15], &CoverConfig::default())?;
            Ok(thickness(&c.pop().expect("one level")))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((
        thickness_trend_ok(&taus),
        format!(
            "thickness at lambda 0.1, 0.2, 0.5, 1.0: {:.4}, {:.4}, {:.4}, {:.4}",
            taus[0], taus[1], taus[2], taus[3]
        ),
    ))
}

fn c14_determinism(cfg: &VerifyConfig) -> Outcome {
    let once = || render_json(&(1..CRITERIA).map(|id| run_criterion(id, cfg)).collect::<Vec<_>>());
    let (a, b) = (once(), once());
    Ok((
        a == b,
        format!(
            "two runs of criteria 1-13 give {} bytes each, identical: {}",
            a.len(),
            a == b
        ),
    ))
}
