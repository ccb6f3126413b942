//! Finite empirical measures: sorted atoms with equal weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::fmt_f64;

/// Uniform probability measure on a finite sorted support.
///
/// Used for finite-volume density-of-states approximants; the CDF is the
/// right-continuous step function `E -> #{x <= E} / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    support: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Sorts `values` ascending. Rejects empty input and NaN.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("empirical measure needs at least one atom".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("empirical measure atom is NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalMeasure { support: values })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn into_support(self) -> Vec<f64> {
        self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.support.len() as f64
    }

    /// Number of atoms `<= e`.
    pub fn count_at_most(&self, e: f64) -> usize {
        self.support.partition_point(|&x| x <= e)
    }

    /// Number of atoms `< e`.
    pub fn count_below(&self, e: f64) -> usize {
        self.support.partition_point(|&x| x < e)
    }

    pub fn cdf(&self, e: f64) -> f64 {
        self.count_at_most(e) as f64 / self.len() as f64
    }

    /// Left limit of the CDF at `e`.
    pub fn cdf_left(&self, e: f64) -> f64 {
        self.count_below(e) as f64 / self.len() as f64
    }

    /// Mass of the half-open interval `(lo, hi]`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        self.cdf(hi) - self.cdf(lo)
    }

    /// Exact Kolmogorov (sup-norm) distance between the two CDFs.
    pub fn sup_distance(&self, other: &EmpiricalMeasure) -> f64 {
        // Both CDFs are right-continuous steps, so the supremum is attained
        // at an atom of one of them.
        self.support
            .iter()
            .chain(other.support.iter())
            .map(|&e| (self.cdf(e) - other.cdf(e)).abs())
            .fold(0.0, f64::max)
    }

    /// One atom per line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.support.len() * 25);
        for &x in &self.support {
            out.push_str(&fmt_f64(x));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad eigenvalue line {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        EmpiricalMeasure::new(values)
    }
}
