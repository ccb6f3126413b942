//! Finite unions of closed intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{Cell, Meta, Table};

/// Closed interval `[lo, hi]`, serialized as a two-element array.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for Interval {
    fn from([lo, hi]: [f64; 2]) -> Self {
        Interval { lo, hi }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn scaled(&self, c: f64) -> Interval {
        let (a, b) = (self.lo * c, self.hi * c);
        Interval::new(a.min(b), a.max(b))
    }
}

/// Sorted, pairwise disjoint closed intervals with the parameters that
/// produced them.
///
/// For spectra this is an outer approximation at trace-map depth `level`,
/// with band edges located to within `resolution`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandCover {
    pub s: u32,
    pub lambda: f64,
    /// Coupling of the second factor, for product covers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<f64>,
    pub level: usize,
    pub resolution: f64,
    pub bands: Vec<Interval>,
}

/// Sorts and merges overlapping or touching intervals.
pub fn normalize(mut bands: Vec<Interval>) -> Vec<Interval> {
    bands.retain(|b| !(b.lo.is_nan() || b.hi.is_nan()));
    bands.sort_by(|x, y| x.lo.total_cmp(&y.lo).then(x.hi.total_cmp(&y.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(bands.len());
    for b in bands {
        match out.last_mut() {
            Some(last) if b.lo <= last.hi => last.hi = last.hi.max(b.hi),
            _ => out.push(b),
        }
    }
    out
}

impl BandCover {
    /// A cover of plain intervals with no model parameters attached.
    pub fn from_intervals(pairs: &[(f64, f64)]) -> Result<Self> {
        BandCover::with_params(
            pairs.iter().map(|&(lo, hi)| Interval { lo, hi }).collect(),
            0,
            0.0,
            0,
            0.0,
        )
    }

    pub fn with_params(bands: Vec<Interval>, s: u32, lambda: f64, level: usize, resolution: f64) -> Result<Self> {
        if let Some(b) = bands
            .iter()
            .find(|b| !(b.lo <= b.hi) || !b.lo.is_finite() || !b.hi.is_finite())
        {
            return Err(Error::domain(format!("invalid interval [{}, {}]", b.lo, b.hi)));
        }
        Ok(BandCover {
            s,
            lambda,
            lambda2: None,
            level,
            resolution,
            bands: normalize(bands),
        })
    }

    /// Same parameters, new bands.
    pub fn with_bands(&self, bands: Vec<Interval>) -> BandCover {
        BandCover {
            bands: normalize(bands),
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(self.bands.first()?.lo, self.bands.last()?.hi))
    }

    pub fn total_length(&self) -> f64 {
        self.bands.iter().map(Interval::len).fold(0.0, |s, l| s + l)
    }

    /// Index of the band containing `x`, if any.
    pub fn band_of(&self, x: f64) -> Option<usize> {
        let i = self.bands.partition_point(|b| b.hi < x);
        (i < self.bands.len() && self.bands[i].contains(x)).then_some(i)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.band_of(x).is_some()
    }

    /// Merges bands separated by gaps of length `<= tol`.
    pub fn merged_within(&self, tol: f64) -> BandCover {
        let mut out: Vec<Interval> = Vec::with_capacity(self.bands.len());
        for &b in &self.bands {
            match out.last_mut() {
                Some(last) if b.lo - last.hi <= tol => last.hi = last.hi.max(b.hi),
                _ => out.push(b),
            }
        }
        BandCover {
            bands: out,
            ..self.clone()
        }
    }

    /// All endpoints multiplied by `c`.
    pub fn scaled(&self, c: f64) -> BandCover {
        self.with_bands(self.bands.iter().map(|b| b.scaled(c)).collect())
    }

    /// Whether every band of `self` lies inside `other` enlarged by `slack`.
    pub fn is_subset_of(&self, other: &BandCover, slack: f64) -> bool {
        self.bands.iter().all(|b| {
            let i = other.bands.partition_point(|o| o.hi + slack < b.lo);
            i < other.bands.len() && other.bands[i].lo - slack <= b.lo && b.hi <= other.bands[i].hi + slack
        })
    }

    /// Distance from `x` to the nearest point of the union.
    pub fn distance_to(&self, x: f64) -> f64 {
        let i = self.bands.partition_point(|b| b.hi < x);
        let mut d = f64::INFINITY;
        if i < self.bands.len() {
            d = d.min((self.bands[i].lo - x).max(0.0));
        }
        if i > 0 {
            d = d.min(x - self.bands[i - 1].hi);
        }
        d
    }

    /// Largest distance from a point of `self` to `other`.
    fn directed_distance(&self, other: &BandCover) -> f64 {
        let mut d: f64 = 0.0;
        for b in &self.bands {
            d = d.max(other.distance_to(b.lo)).max(other.distance_to(b.hi));
            // Inside a gap of `other` the distance is a tent peaking at its midpoint.
            let first = other.bands.partition_point(|o| o.hi < b.lo);
            for w in other.bands[first.saturating_sub(1)..].windows(2) {
                let (g0, g1) = (w[0].hi, w[1].lo);
                if g0 >= b.hi {
                    break;
                }
                let (p0, p1) = (g0.max(b.lo), g1.min(b.hi));
                if p0 < p1 {
                    let m = (0.5 * (g0 + g1)).clamp(p0, p1);
                    d = d.max((m - g0).min(g1 - m));
                }
            }
        }
        d
    }

    /// Hausdorff distance between the two unions.
    pub fn hausdorff(&self, other: &BandCover) -> f64 {
        if self.is_empty() || other.is_empty() {
            return if self.is_empty() && other.is_empty() {
                0.0
            } else {
                f64::INFINITY
            };
        }
        self.directed_distance(other).max(other.directed_distance(self))
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["lo", "hi"]);
        for b in &self.bands {
            t.push(vec![Cell::Float(b.lo), Cell::Float(b.hi)]);
        }
        t
    }

    pub fn to_csv(&self, meta: &Meta) -> String {
        self.to_table().to_csv(meta)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("covers hold finite floats only")
    }

    pub fn from_json(text: &str) -> Result<BandCover> {
        let c: BandCover = serde_json::from_str(text)?;
        BandCover::with_params(c.bands, c.s, c.lambda, c.level, c.resolution).map(|n| BandCover {
            lambda2: c.lambda2,
            ..n
        })
    }
}
