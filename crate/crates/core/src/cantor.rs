//! Gaps, thickness, box-counting dimension and interval-union arithmetic.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{normalize, BandCover, Interval};
use crate::error::{Error, Result};
use crate::output::{json_f64, Cell, Table};

/// Cap on the number of bands produced by set arithmetic.
pub const MAX_OUTPUT_BANDS: usize = 1_000_000;

/// Cap on the number of band pairs visited by [`product_set`] and [`sum_set`].
pub const MAX_BAND_PAIRS: u64 = 200_000_000;

/// Default lower cutoff applied by [`log_positive_part`].
pub const DEFAULT_LOG_FLOOR: f64 = 1e-12;

/// Bounded open gaps of a cover, left to right; stored as their closures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapList {
    pub gaps: Vec<Interval>,
}

impl GapList {
    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.gaps.iter().map(Interval::len).fold(0.0, |s, l| s + l)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["lo", "hi", "length"]);
        for g in &self.gaps {
            t.push(vec![Cell::Float(g.lo), Cell::Float(g.hi), Cell::Float(g.len())]);
        }
        t
    }
}

pub fn gaps(c: &BandCover) -> GapList {
    GapList {
        gaps: c.bands.windows(2).map(|w| Interval::new(w[0].hi, w[1].lo)).collect(),
    }
}

/// Newhouse thickness of a finite union of intervals.
///
/// Gaps are processed from longest to shortest (ties left to right). For a
/// gap `U`, each bridge runs from an endpoint of `U` to the nearest
/// already-processed gap on that side, or to the end of the hull. The
/// thickness is the smallest ratio `min(bridge) / |U|`; without gaps it is
/// infinite.
pub fn thickness(c: &BandCover) -> f64 {
    let g = gaps(c);
    let Some(hull) = c.hull() else {
        return f64::INFINITY;
    };
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&i, &j| g.gaps[j].len().total_cmp(&g.gaps[i].len()).then(i.cmp(&j)));
    let mut done: BTreeSet<usize> = BTreeSet::new();
    let mut tau = f64::INFINITY;
    for i in order {
        let gap = g.gaps[i];
        let left_end = done.range(..i).next_back().map_or(hull.lo, |&j| g.gaps[j].hi);
        let right_end = done.range(i + 1..).next().map_or(hull.hi, |&j| g.gaps[j].lo);
        let bridge = (gap.lo - left_end).min(right_end - gap.hi);
        tau = tau.min(bridge / gap.len());
        done.insert(i);
    }
    tau
}

/// Minimal number of closed intervals of length `r` covering the union.
pub fn box_count(c: &BandCover, r: f64) -> usize {
    // Greedy left-to-right covering is optimal on the line. The slack keeps
    // bands of length exactly `r` from needing a second box after rounding.
    let reach = r * (1.0 + 1e-9);
    let mut count = 0usize;
    let mut covered_to = f64::NEG_INFINITY;
    for b in &c.bands {
        let mut start = b.lo.max(covered_to);
        if b.hi <= covered_to {
            continue;
        }
        if b.lo > covered_to {
            start = b.lo;
        }
        let n = (((b.hi - start) / reach).ceil() as usize).max(1);
        // A box placed at `start` may be partly left over after `b`.
        count += n;
        covered_to = start + n as f64 * reach;
    }
    count
}

fn slope(points: &[(f64, f64)]) -> Result<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 1e-24) {
        return Err(Error::DegenerateFit("all scales are identical".into()));
    }
    Ok(sxy / sxx)
}

/// Least-squares slope of `log N(r)` against `log(1/r)`, where each cover
/// is counted at its own resolution `r`.
pub fn box_dimension_estimate(covers: &[BandCover]) -> Result<f64> {
    if covers.len() < 3 {
        return Err(Error::domain("box dimension needs at least three covers"));
    }
    if let Some(c) = covers.iter().find(|c| !(c.resolution > 0.0)) {
        return Err(Error::domain(format!(
            "cover resolution must be > 0, got {}",
            c.resolution
        )));
    }
    let pts: Vec<(f64, f64)> = covers
        .iter()
        .map(|c| (-c.resolution.ln(), (box_count(c, c.resolution).max(1) as f64).ln()))
        .collect();
    slope(&pts)
}

/// Box-counting slope of a single cover over the given scales.
pub fn box_dimension_at_scales(c: &BandCover, scales: &[f64]) -> Result<f64> {
    if scales.len() < 3 {
        return Err(Error::domain("box dimension needs at least three scales"));
    }
    if let Some(r) = scales.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::domain(format!("scale must be > 0, got {r}")));
    }
    let pts: Vec<(f64, f64)> = scales
        .iter()
        .map(|&r| (-r.ln(), (box_count(c, r).max(1) as f64).ln()))
        .collect();
    slope(&pts)
}

/// `count` geometric scales from `hi` down to `lo`.
pub fn geometric_scales(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    let ratio = (lo / hi).powf(1.0 / (count.max(2) - 1) as f64);
    (0..count).map(|k| hi * ratio.powi(k as i32)).collect()
}

/// Summary statistics of a cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorStats {
    /// `+inf` exactly when there are no gaps.
    pub thickness_estimate: f64,
    /// Box-counting slope between `8 * resolution` and `hull / 16`.
    pub box_dim_estimate: f64,
    pub total_length: f64,
    pub hull: Interval,
    pub bands: usize,
}

impl CantorStats {
    pub fn of(c: &BandCover) -> Result<CantorStats> {
        let hull = c.hull().ok_or_else(|| Error::Empty("cover has no bands".into()))?;
        let fine = (8.0 * c.resolution).max(hull.len() * 1e-9);
        let coarse = hull.len() / 16.0;
        let dim = if coarse > 2.0 * fine {
            box_dimension_at_scales(c, &geometric_scales(coarse, fine, 12))?.clamp(0.0, 1.0)
        } else {
            1.0
        };
        Ok(CantorStats {
            thickness_estimate: thickness(c),
            box_dim_estimate: dim,
            total_length: c.total_length(),
            hull,
            bands: c.len(),
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "thickness_estimate": json_f64(self.thickness_estimate),
            "box_dim_estimate": self.box_dim_estimate,
            "total_length": self.total_length,
            "hull": [self.hull.lo, self.hull.hi],
            "bands": self.bands,
        })
    }
}

fn check_pairs(a: &BandCover, b: &BandCover) -> Result<()> {
    let pairs = a.len() as u64 * b.len() as u64;
    if pairs > MAX_BAND_PAIRS {
        return Err(Error::cap("band pairs", pairs, MAX_BAND_PAIRS));
    }
    Ok(())
}

fn pairwise(a: &BandCover, b: &BandCover, op: impl Fn(Interval, Interval) -> Interval + Sync) -> Result<Vec<Interval>> {
    check_pairs(a, b)?;
    let chunks: Vec<Vec<Interval>> = a
        .bands
        .par_iter()
        .map(|&x| normalize(b.bands.iter().map(|&y| op(x, y)).collect()))
        .collect();
    let out = normalize(chunks.into_iter().flatten().collect());
    if out.len() > MAX_OUTPUT_BANDS {
        return Err(Error::cap(
            "bands in set arithmetic",
            out.len() as u64,
            MAX_OUTPUT_BANDS as u64,
        ));
    }
    Ok(out)
}

fn product_params(a: &BandCover, b: &BandCover, bands: Vec<Interval>) -> BandCover {
    BandCover {
        s: a.s,
        lambda: a.lambda,
        lambda2: Some(b.lambda),
        level: a.level.min(b.level),
        resolution: a.resolution.max(b.resolution),
        bands,
    }
}

/// `{xy : x in A, y in B}` as a union of interval products.
pub fn product_set(a: &BandCover, b: &BandCover) -> Result<BandCover> {
    let bands = pairwise(a, b, |x, y| {
        let p = [x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi];
        Interval::new(
            p.iter().copied().fold(f64::INFINITY, f64::min),
            p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    })?;
    Ok(product_params(a, b, bands))
}

/// Minkowski sum `{x + y : x in A, y in B}`.
pub fn sum_set(a: &BandCover, b: &BandCover) -> Result<BandCover> {
    let bands = pairwise(a, b, |x, y| Interval::new(x.lo + y.lo, x.hi + y.hi))?;
    Ok(product_params(a, b, bands))
}

/// `log(A ∩ (0, ∞))` with the domain floored at `floor`.
pub fn log_positive_part(a: &BandCover, floor: f64) -> Result<BandCover> {
    if !(floor > 0.0) {
        return Err(Error::domain(format!("log floor must be > 0, got {floor}")));
    }
    let bands: Vec<Interval> = a
        .bands
        .iter()
        .filter(|b| b.hi > 0.0)
        .map(|b| Interval::new(b.lo.max(floor).min(b.hi.max(floor)).ln(), b.hi.max(floor).ln()))
        .collect();
    if bands.is_empty() {
        return Err(Error::Empty("cover does not meet (0, inf)".into()));
    }
    Ok(a.with_bands(bands))
}

/// Outcome of [`is_interval`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalCheck {
    pub is_interval: bool,
    pub tol: f64,
    pub largest_gap: f64,
    pub total_gap_length: f64,
    /// Gaps longer than `tol`.
    pub offending_gaps: Vec<Interval>,
}

/// Whether every gap of the cover is at most `tol` long.
pub fn is_interval(c: &BandCover, tol: f64) -> IntervalCheck {
    let g = gaps(c);
    let offending: Vec<Interval> = g.gaps.iter().copied().filter(|x| x.len() > tol).collect();
    IntervalCheck {
        is_interval: offending.is_empty() && !c.is_empty(),
        tol,
        largest_gap: g.gaps.iter().map(Interval::len).fold(0.0, f64::max),
        total_gap_length: g.total_length(),
        offending_gaps: offending,
    }
}

/// Level-`n` stage of the middle-thirds construction, with resolution `3^-n`.
pub fn middle_thirds(level: u32) -> BandCover {
    let mut bands = vec![Interval::new(0.0, 1.0)];
    for _ in 0..level {
        bands = bands
            .iter()
            .flat_map(|b| {
                let t = b.len() / 3.0;
                [Interval::new(b.lo, b.lo + t), Interval::new(b.hi - t, b.hi)]
            })
            .collect();
    }
    BandCover {
        s: 0,
        lambda: 0.0,
        lambda2: None,
        level: level as usize,
        resolution: 3f64.powi(-(level as i32)),
        bands,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(p: &[(f64, f64)]) -> BandCover {
        BandCover::from_intervals(p).unwrap()
    }

    #[test]
    fn gap_examples() {
        assert!(gaps(&cover(&[(0.0, 1.0)])).is_empty());
        assert_eq!(
            gaps(&cover(&[(0.0, 1.0), (2.0, 3.0)])).gaps,
            vec![Interval::new(1.0, 2.0)]
        );
        let g = gaps(&middle_thirds(2));
        let want = [(1.0 / 9.0, 2.0 / 9.0), (1.0 / 3.0, 2.0 / 3.0), (7.0 / 9.0, 8.0 / 9.0)];
        assert_eq!(g.len(), 3);
        for (x, y) in g.gaps.iter().zip(&want) {
            assert!((x.lo - y.0).abs() < 1e-15 && (x.hi - y.1).abs() < 1e-15);
        }
    }

    #[test]
    fn thickness_examples() {
        for level in 1..=10 {
            assert!((thickness(&middle_thirds(level)) - 1.0).abs() < 1e-9);
        }
        assert_eq!(thickness(&cover(&[(0.0, 1.0)])), f64::INFINITY);
        assert_eq!(thickness(&cover(&[(0.0, 1.0), (1.5, 2.5)])), 2.0);
    }

    #[test]
    fn newhouse_bridges_stop_at_larger_gaps() {
        // The gap (1, 1.1) has right bridge [1.1, 1.6], reaching past its
        // adjacent band to the longer gap (1.6, 2.5).
        let c = cover(&[(0.0, 1.0), (1.1, 1.3), (1.35, 1.6), (2.5, 10.0)]);
        assert!((thickness(&c) - 1.6 / 0.9).abs() < 1e-12);
        let c = cover(&[(0.0, 1.0), (1.1, 1.3), (1.35, 1.6), (2.5, 2.6)]);
        assert!((thickness(&c) - 0.1 / 0.9).abs() < 1e-12);
    }

    #[test]
    fn box_dimension_examples() {
        let levels: Vec<BandCover> = (1..=8).map(middle_thirds).collect();
        let d = box_dimension_estimate(&levels).unwrap();
        assert!((d - 2f64.ln() / 3f64.ln()).abs() < 0.02, "{d}");
        let unit: Vec<BandCover> = (1..=6)
            .map(|k| BandCover {
                resolution: 0.5f64.powi(k),
                ..cover(&[(0.0, 1.0)])
            })
            .collect();
        assert!((box_dimension_estimate(&unit).unwrap() - 1.0).abs() < 1e-9);
        let same = vec![cover(&[(0.0, 1.0)]); 3];
        assert!(matches!(
            box_dimension_estimate(
                &same
                    .iter()
                    .map(|c| BandCover {
                        resolution: 0.1,
                        ..c.clone()
                    })
                    .collect::<Vec<_>>()
            ),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn product_examples() {
        let p = product_set(&cover(&[(-2.0, 2.0)]), &cover(&[(-2.0, 2.0)])).unwrap();
        assert_eq!(p.bands, vec![Interval::new(-4.0, 4.0)]);
        let p = product_set(&cover(&[(1.0, 2.0)]), &cover(&[(3.0, 4.0)])).unwrap();
        assert_eq!(p.bands, vec![Interval::new(3.0, 8.0)]);
        let a = cover(&[(-2.0, -1.0), (1.0, 2.0)]);
        assert_eq!(product_set(&a, &cover(&[(1.0, 1.0)])).unwrap().bands, a.bands);
    }

    #[test]
    fn log_examples() {
        let e = std::f64::consts::E;
        let l = log_positive_part(&cover(&[(1.0, e)]), DEFAULT_LOG_FLOOR).unwrap();
        assert_eq!(l.bands, vec![Interval::new(0.0, 1.0)]);
        let l = log_positive_part(&cover(&[(-2.0, 2.0)]), DEFAULT_LOG_FLOOR).unwrap();
        assert_eq!(l.bands, vec![Interval::new(DEFAULT_LOG_FLOOR.ln(), 2f64.ln())]);
        let l = log_positive_part(&cover(&[(e, e * e)]), DEFAULT_LOG_FLOOR).unwrap();
        assert!((l.bands[0].lo - 1.0).abs() < 1e-15 && (l.bands[0].hi - 2.0).abs() < 1e-15);
        assert!(matches!(
            log_positive_part(&cover(&[(-2.0, -1.0)]), DEFAULT_LOG_FLOOR),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn sum_examples() {
        let u = cover(&[(0.0, 1.0)]);
        assert_eq!(sum_set(&u, &u).unwrap().bands, vec![Interval::new(0.0, 2.0)]);
        let s = sum_set(&cover(&[(0.0, 1.0), (10.0, 11.0)]), &u).unwrap();
        assert_eq!(s.bands, vec![Interval::new(0.0, 2.0), Interval::new(10.0, 12.0)]);
        let c = middle_thirds(10);
        let s = sum_set(&c, &c).unwrap();
        assert!(is_interval(&s, 1e-12).is_interval);
        assert_eq!(s.hull(), Some(Interval::new(0.0, 2.0)));
    }

    #[test]
    fn interval_check() {
        assert!(is_interval(&cover(&[(0.0, 1.0)]), 0.0).is_interval);
        let r = is_interval(&cover(&[(0.0, 1.0), (1.5, 2.0)]), 0.1);
        assert!(!r.is_interval);
        assert_eq!(r.offending_gaps, vec![Interval::new(1.0, 1.5)]);
    }

    #[test]
    fn stats_are_consistent() {
        let st = CantorStats::of(&middle_thirds(8)).unwrap();
        assert!(st.total_length <= st.hull.len());
        assert!((st.box_dim_estimate - 2f64.ln() / 3f64.ln()).abs() < 0.1);
        let st = CantorStats::of(&cover(&[(0.0, 1.0)])).unwrap();
        assert_eq!(st.thickness_estimate, f64::INFINITY);
    }
}
