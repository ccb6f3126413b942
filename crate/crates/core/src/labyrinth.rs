//! The Labyrinth model: a 2D operator with diagonal hoppings
//! `w1(m) w2(n)`, unitarily equivalent to the tensor product of two 1D
//! off-diagonal operators.
//!
//! On the box `[0, N-1]^2` the site `(m, n)` couples to `(m+1, n+1)` with
//! weight `w1(m+1) w2(n+1)`, to `(m+1, n-1)` with `w1(m+1) w2(n)`, and
//! symmetrically. Here `w_i(k)` is the coupling between sites `k-1` and `k`
//! of the 1D window, so the box restriction equals `H1 ⊗ H2` exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cantor::{is_interval, product_set, thickness};
use crate::cover::BandCover;
use crate::dense::{symmetric_eigenvalues, DenseMatrix};
use crate::error::{Error, Result};
use crate::jacobi1d::{self, build_window, HoppingWindow, ModelParams, WindowSource};
use crate::measure::EmpiricalMeasure;
use crate::tracemap::{spectrum_covers, CoverConfig};

/// Largest side accepted by [`build_2d`].
pub const MAX_SIDE_SPARSE: usize = 1024;

/// Largest side accepted by [`dense_eigs_2d`].
pub const MAX_SIDE_DENSE: usize = 16;

/// Cap on the number of eigenvalue products materialized by [`product_eigs`].
pub const MAX_PRODUCTS: usize = 1 << 24;

/// Per-axis hoppings `a1`, `a2` for a common substitution order `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabyrinthParams {
    pub s: u32,
    pub a1: f64,
    pub a2: f64,
    #[serde(default)]
    pub source1: WindowSource,
    #[serde(default)]
    pub source2: WindowSource,
}

impl LabyrinthParams {
    pub fn new(s: u32, a1: f64, a2: f64) -> Result<Self> {
        ModelParams::new(s, a1)?;
        ModelParams::new(s, a2)?;
        Ok(LabyrinthParams {
            s,
            a1,
            a2,
            source1: WindowSource::default(),
            source2: WindowSource::default(),
        })
    }

    pub fn from_couplings(s: u32, lambda1: f64, lambda2: f64) -> Result<Self> {
        LabyrinthParams::new(
            s,
            jacobi1d::hopping_from_coupling(lambda1)?,
            jacobi1d::hopping_from_coupling(lambda2)?,
        )
    }

    pub fn with_sources(self, source1: WindowSource, source2: WindowSource) -> Self {
        LabyrinthParams {
            source1,
            source2,
            ..self
        }
    }

    pub fn axis1(&self) -> ModelParams {
        ModelParams { s: self.s, a: self.a1 }
    }

    pub fn axis2(&self) -> ModelParams {
        ModelParams { s: self.s, a: self.a2 }
    }

    pub fn lambda1(&self) -> f64 {
        self.axis1().lambda()
    }

    pub fn lambda2(&self) -> f64 {
        self.axis2().lambda()
    }

    pub fn windows(&self, n: usize) -> Result<(HoppingWindow, HoppingWindow)> {
        Ok((
            build_window(self.axis1(), n, self.source1)?,
            build_window(self.axis2(), n, self.source2)?,
        ))
    }
}

/// Which sites of the box an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sublattice {
    Full,
    /// Sites with `m + n` even.
    Even,
    /// Sites with `m + n` odd.
    Odd,
}

impl Sublattice {
    pub fn admits(self, m: usize, n: usize) -> bool {
        match self {
            Sublattice::Full => true,
            Sublattice::Even => (m + n) % 2 == 0,
            Sublattice::Odd => (m + n) % 2 == 1,
        }
    }
}

/// One directed hopping `(m, n) -> (m + dm, n + dn)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hop {
    pub m: usize,
    pub n: usize,
    pub dm: i8,
    pub dn: i8,
    pub weight: f64,
}

/// The box restriction of the Labyrinth operator, stored as its hoppings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sparse2DOperator {
    side: usize,
    sublattice: Sublattice,
    /// Sites in row-major order.
    sites: Vec<(usize, usize)>,
    /// Sorted by `(m, n, dm, dn)`; both directions of every bond are present.
    hops: Vec<Hop>,
}

impl Sparse2DOperator {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn sublattice(&self) -> Sublattice {
        self.sublattice
    }

    pub fn sites(&self) -> &[(usize, usize)] {
        &self.sites
    }

    pub fn hops(&self) -> &[Hop] {
        &self.hops
    }

    /// Weight of `(m, n) -> (m + dm, n + dn)`, zero when absent.
    pub fn weight(&self, m: usize, n: usize, dm: i8, dn: i8) -> f64 {
        self.hops
            .binary_search_by(|h| (h.m, h.n, h.dm, h.dn).cmp(&(m, n, dm, dn)))
            .map_or(0.0, |i| self.hops[i].weight)
    }

    pub fn is_symmetric(&self) -> bool {
        self.hops.iter().all(|h| {
            let m2 = (h.m as isize + h.dm as isize) as usize;
            let n2 = (h.n as isize + h.dn as isize) as usize;
            self.weight(m2, n2, -h.dm, -h.dn) == h.weight
        })
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        if self.side > MAX_SIDE_DENSE {
            return Err(Error::cap("dense 2D side", self.side as u64, MAX_SIDE_DENSE as u64));
        }
        let index = |m: usize, n: usize| self.sites.binary_search(&(m, n)).ok();
        let mut d = DenseMatrix::zeros(self.sites.len());
        for h in &self.hops {
            let m2 = (h.m as isize + h.dm as isize) as usize;
            let n2 = (h.n as isize + h.dn as isize) as usize;
            if let (Some(i), Some(j)) = (index(h.m, h.n), index(m2, n2)) {
                d.set(i, j, h.weight);
            }
        }
        Ok(d)
    }
}

/// Builds the restriction to `[0, N-1]^2`, or to one of its sublattices.
/// Hoppings that leave the box are dropped.
pub fn build_2d(p: LabyrinthParams, side: usize, sublattice: Sublattice) -> Result<Sparse2DOperator> {
    if side < 2 {
        return Err(Error::domain("2D box side must be >= 2"));
    }
    if side > MAX_SIDE_SPARSE {
        return Err(Error::cap("2D box side", side as u64, MAX_SIDE_SPARSE as u64));
    }
    let (w1, w2) = p.windows(side)?;
    let (w1, w2) = (w1.weights(), w2.weights());
    let mut sites = Vec::new();
    let mut hops = Vec::new();
    for m in 0..side {
        for n in 0..side {
            if !sublattice.admits(m, n) {
                continue;
            }
            sites.push((m, n));
            for dm in [-1i8, 1] {
                for dn in [-1i8, 1] {
                    let m2 = m as isize + dm as isize;
                    let n2 = n as isize + dn as isize;
                    if m2 < 0 || n2 < 0 || m2 >= side as isize || n2 >= side as isize {
                        continue;
                    }
                    // Bond k-1 <-> k carries w(k) = weights[k].
                    let k1 = m.max(m2 as usize);
                    let k2 = n.max(n2 as usize);
                    hops.push(Hop {
                        m,
                        n,
                        dm,
                        dn,
                        weight: w1[k1] * w2[k2],
                    });
                }
            }
        }
    }
    Ok(Sparse2DOperator {
        side,
        sublattice,
        sites,
        hops,
    })
}

/// All eigenvalues of a small 2D operator by dense diagonalization.
pub fn dense_eigs_2d(op: &Sparse2DOperator) -> Result<EmpiricalMeasure> {
    let d = op.to_dense()?;
    EmpiricalMeasure::new(symmetric_eigenvalues(&d)?)
}

/// Eigenvalues of the two axis restrictions.
pub fn axis_eigenvalues(p: LabyrinthParams, n: usize) -> Result<(EmpiricalMeasure, EmpiricalMeasure)> {
    let (w1, w2) = p.windows(n)?;
    let (e1, e2) = rayon::join(
        || jacobi1d::eigenvalues(&w1, jacobi1d::DEFAULT_TOL),
        || jacobi1d::eigenvalues(&w2, jacobi1d::DEFAULT_TOL),
    );
    Ok((e1?, e2?))
}

/// All pairwise products of two eigenvalue lists.
pub fn products_of(e1: &EmpiricalMeasure, e2: &EmpiricalMeasure) -> Result<EmpiricalMeasure> {
    let total = e1.len() as u128 * e2.len() as u128;
    if total > MAX_PRODUCTS as u128 {
        return Err(Error::cap("eigenvalue products", total, MAX_PRODUCTS as u64));
    }
    let v: Vec<f64> = e1
        .support()
        .iter()
        .flat_map(|&x| e2.support().iter().map(move |&y| x * y))
        .collect();
    EmpiricalMeasure::new(v)
}

/// The `N^2` products `E_{1,k1} E_{2,k2}` of the axis eigenvalues.
pub fn product_eigs(p: LabyrinthParams, n: usize) -> Result<EmpiricalMeasure> {
    let (e1, e2) = axis_eigenvalues(p, n)?;
    products_of(&e1, &e2)
}

/// Counting function of the product measure without materializing it.
#[derive(Clone, Debug)]
pub struct ProductDos {
    e1: Vec<f64>,
    e2: Vec<f64>,
}

impl ProductDos {
    pub fn new(e1: &EmpiricalMeasure, e2: &EmpiricalMeasure) -> Self {
        ProductDos {
            e1: e1.support().to_vec(),
            e2: e2.support().to_vec(),
        }
    }

    pub fn from_params(p: LabyrinthParams, n: usize) -> Result<Self> {
        let (e1, e2) = axis_eigenvalues(p, n)?;
        Ok(ProductDos::new(&e1, &e2))
    }

    pub fn total(&self) -> usize {
        self.e1.len() * self.e2.len()
    }

    /// `#{(k1, k2) : E1[k1] * E2[k2] <= e}`.
    ///
    /// For fixed `x` the rounded product `x * y` is monotone in `y`, so each
    /// row is a binary search and the count matches brute force exactly.
    pub fn count_at_most(&self, e: f64) -> usize {
        self.e1
            .iter()
            .map(|&x| {
                if x > 0.0 {
                    self.e2.partition_point(|&y| x * y <= e)
                } else if x < 0.0 {
                    self.e2.len() - self.e2.partition_point(|&y| x * y > e)
                } else if 0.0 <= e {
                    self.e2.len()
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn cdf(&self, e: f64) -> f64 {
        self.count_at_most(e) as f64 / self.total() as f64
    }

    /// Quadratic reference count.
    pub fn count_at_most_brute(&self, e: f64) -> usize {
        self.e1
            .iter()
            .map(|&x| self.e2.iter().filter(|&&y| x * y <= e).count())
            .sum()
    }

    /// Fraction of pairs with an exactly vanishing factor.
    pub fn zero_factor_mass(&self) -> f64 {
        let z1 = self.e1.iter().filter(|&&x| x == 0.0).count();
        let z2 = self.e2.iter().filter(|&&y| y == 0.0).count();
        let pairs = z1 * self.e2.len() + z2 * self.e1.len() - z1 * z2;
        pairs as f64 / self.total() as f64
    }
}

/// Finite-volume integrated density of states of the 2D operator:
/// the fraction of eigenvalue products `<= e`.
pub fn dos2d_cdf(p: LabyrinthParams, e: f64, n: usize) -> Result<f64> {
    Ok(ProductDos::from_params(p, n)?.cdf(e))
}

/// Histogram convolution of the log-pushforwards of the positive parts of
/// two eigenvalue measures.
///
/// Each marginal keeps its positive eigenvalues with weight `1/N` and is
/// deposited cloud-in-cell on a common grid of `bins` cells spanning
/// `[log min(positive eigenvalues), log(2(1 + max a))]`. Exactly zero
/// eigenvalues are excluded; their pair mass is reported separately.
#[derive(Clone, Debug)]
pub struct LogConvolution {
    origin: f64,
    width: f64,
    /// Masses on the grid `2 * origin + k * width` of the log-sum.
    mass: Vec<f64>,
    cumulative: Vec<f64>,
    zero_mass: f64,
}

impl LogConvolution {
    pub fn new(e1: &EmpiricalMeasure, e2: &EmpiricalMeasure, upper: f64, bins: usize) -> Result<Self> {
        if bins < 64 {
            return Err(Error::domain(format!("need at least 64 bins, got {bins}")));
        }
        let pos1: Vec<f64> = e1.support().iter().copied().filter(|&x| x > 0.0).collect();
        let pos2: Vec<f64> = e2.support().iter().copied().filter(|&x| x > 0.0).collect();
        let smallest = pos1
            .first()
            .copied()
            .into_iter()
            .chain(pos2.first().copied())
            .fold(f64::INFINITY, f64::min);
        if !smallest.is_finite() {
            return Err(Error::Empty("no positive eigenvalues".into()));
        }
        let lo = smallest.ln();
        let largest = pos1
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(pos2.last().copied().unwrap_or(0.0));
        let hi = upper.max(largest).ln();
        let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
        let deposit = |pos: &[f64], n: usize| {
            let mut h = vec![0.0; bins + 2];
            let w = 1.0 / n as f64;
            for &x in pos {
                let t = (x.ln() - lo) / width;
                let i = (t.floor() as usize).min(bins);
                let f = t - i as f64;
                h[i] += (1.0 - f) * w;
                h[i + 1] += f * w;
            }
            h
        };
        let h1 = deposit(&pos1, e1.len());
        let h2 = deposit(&pos2, e2.len());
        let mut mass = vec![0.0; h1.len() + h2.len() - 1];
        for (i, &a) in h1.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in h2.iter().enumerate() {
                mass[i + j] += a * b;
            }
        }
        let cumulative = mass
            .iter()
            .scan(0.0, |acc, &m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        let pd = ProductDos::new(e1, e2);
        Ok(LogConvolution {
            origin: 2.0 * lo,
            width,
            mass,
            cumulative,
            zero_mass: pd.zero_factor_mass(),
        })
    }

    pub fn from_params(p: LabyrinthParams, n: usize, bins: usize) -> Result<Self> {
        let (e1, e2) = axis_eigenvalues(p, n)?;
        let upper = 2.0 * (1.0 + p.a1.max(p.a2).max(1.0));
        LogConvolution::new(&e1, &e2, upper, bins)
    }

    /// Mass of the pairs with a zero factor, which the convolution omits.
    pub fn zero_mass(&self) -> f64 {
        self.zero_mass
    }

    /// Convolution CDF at log-sum `t`, linear between grid points.
    fn cdf_log(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return *self.cumulative.last().expect("nonempty grid");
        }
        let u = (t - self.origin) / self.width;
        if !(u >= 0.0) {
            return 0.0;
        }
        let k = u.floor() as usize;
        if k + 1 >= self.cumulative.len() {
            return *self.cumulative.last().expect("nonempty grid");
        }
        self.cumulative[k] + (u - k as f64) * self.mass[k + 1]
    }

    /// Convolution mass of `log((c, d])` for `0 <= c <= d`.
    fn positive_mass(&self, c: f64, d: f64) -> f64 {
        if d <= 0.0 {
            return 0.0;
        }
        let upper = self.cdf_log(d.ln());
        let lower = if c > 0.0 { self.cdf_log(c.ln()) } else { 0.0 };
        (upper - lower).max(0.0)
    }

    /// `2 {conv(log A+) + conv(log A-)}` for `A = (e1, e2]`, where
    /// `A+ = A ∩ (0, ∞)` and `A- = (-A) ∩ (0, ∞)`.
    pub fn mass(&self, e1: f64, e2: f64) -> f64 {
        if !(e1 < e2) {
            return 0.0;
        }
        let plus = self.positive_mass(e1.max(0.0), e2);
        let minus = if e1 < 0.0 {
            self.positive_mass((-e2).max(0.0), -e1)
        } else {
            0.0
        };
        2.0 * (plus + minus)
    }
}

/// The density-of-states mass of `(e1, e2]` evaluated through the
/// log-convolution identity.
pub fn log_convolution_cdf(p: LabyrinthParams, e1: f64, e2: f64, n: usize, bins: usize) -> Result<f64> {
    Ok(LogConvolution::from_params(p, n, bins)?.mass(e1, e2))
}

/// Product of the two 1D spectrum covers at each requested depth.
pub fn spectrum_2d_levels(p: LabyrinthParams, levels: &[usize], cfg: &CoverConfig) -> Result<Vec<BandCover>> {
    let (c1, c2) = rayon::join(
        || spectrum_covers(p.axis1(), levels, cfg),
        || {
            if p.a2 == p.a1 {
                Ok(Vec::new())
            } else {
                spectrum_covers(p.axis2(), levels, cfg)
            }
        },
    );
    let c1 = c1?;
    let c2 = c2?;
    let c2 = if c2.is_empty() { &c1 } else { &c2 };
    c1.iter().zip(c2).map(|(a, b)| product_set(a, b)).collect()
}

/// Outer cover of the 2D spectrum `Σ1 · Σ2`.
pub fn spectrum_2d(p: LabyrinthParams, level: usize, resolution: f64) -> Result<BandCover> {
    let mut v = spectrum_2d_levels(p, &[level], &CoverConfig::new(resolution))?;
    Ok(v.pop().expect("one level requested"))
}

/// Sup distances between the spectral CDFs of the full operator and of its
/// two sublattice restrictions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SublatticeReport {
    pub side: usize,
    pub even_sites: usize,
    pub odd_sites: usize,
    pub even_vs_odd: f64,
    pub full_vs_even: f64,
    pub full_vs_odd: f64,
    /// Largest deviation of the full CDF from the size-weighted average of
    /// the sublattice CDFs, over all atoms.
    pub mixture_defect: f64,
}

pub fn sublattice_dos_compare(p: LabyrinthParams, side: usize) -> Result<SublatticeReport> {
    if side > MAX_SIDE_DENSE {
        return Err(Error::cap("dense 2D side", side as u64, MAX_SIDE_DENSE as u64));
    }
    let parts: Vec<Result<EmpiricalMeasure>> = [Sublattice::Full, Sublattice::Even, Sublattice::Odd]
        .par_iter()
        .map(|&sl| dense_eigs_2d(&build_2d(p, side, sl)?))
        .collect();
    let mut it = parts.into_iter();
    let full = it.next().expect("three parts")?;
    let even = it.next().expect("three parts")?;
    let odd = it.next().expect("three parts")?;
    let (ne, no) = (even.len() as f64, odd.len() as f64);
    let mixture_defect = full
        .support()
        .iter()
        .chain(even.support())
        .chain(odd.support())
        .map(|&e| (full.cdf(e) - (ne * even.cdf(e) + no * odd.cdf(e)) / (ne + no)).abs())
        .fold(0.0, f64::max);
    Ok(SublatticeReport {
        side,
        even_sites: even.len(),
        odd_sites: odd.len(),
        even_vs_odd: even.sup_distance(&odd),
        full_vs_even: full.sup_distance(&even),
        full_vs_odd: full.sup_distance(&odd),
        mixture_defect,
    })
}

/// One cell of a `(λ1, λ2)` classification sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda1: f64,
    pub lambda2: f64,
    pub is_interval: bool,
    pub total_gap_length: f64,
    pub thickness1: f64,
    pub thickness2: f64,
}

/// Classifies `Σ1 · Σ2` as an interval or not over a grid of couplings.
///
/// Gaps no longer than `tol` are ignored. Rows are ordered by `λ1`, then `λ2`.
pub fn classify_sweep(
    s: u32,
    lambdas1: &[f64],
    lambdas2: &[f64],
    level: usize,
    cfg: &CoverConfig,
    tol: f64,
) -> Result<Vec<SweepRow>> {
    let mut all: Vec<f64> = lambdas1.iter().chain(lambdas2).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    let covers: Vec<BandCover> = all
        .par_iter()
        .map(|&l| {
            let mut v = spectrum_covers(ModelParams::from_coupling(s, l)?, &[level], cfg)?;
            Ok(v.pop().expect("one level requested"))
        })
        .collect::<Result<_>>()?;
    let find = |l: f64| {
        &covers[all
            .binary_search_by(|x| x.total_cmp(&l))
            .expect("coupling was collected")]
    };
    let pairs: Vec<(f64, f64)> = lambdas1
        .iter()
        .flat_map(|&l1| lambdas2.iter().map(move |&l2| (l1, l2)))
        .collect();
    pairs
        .par_iter()
        .map(|&(l1, l2)| {
            let (c1, c2) = (find(l1), find(l2));
            let prod = product_set(c1, c2)?;
            let check = is_interval(&prod, tol);
            Ok(SweepRow {
                lambda1: l1,
                lambda2: l2,
                is_interval: check.is_interval,
                total_gap_length: check.total_gap_length,
                thickness1: thickness(c1),
                thickness2: thickness(c2),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> LabyrinthParams {
        LabyrinthParams::new(1, 1.0, 1.0).unwrap()
    }

    #[test]
    fn two_by_two_box() {
        let op = build_2d(free(), 2, Sublattice::Full).unwrap();
        assert_eq!(op.weight(0, 0, 1, 1), 1.0);
        assert_eq!(op.weight(0, 1, 1, -1), 1.0);
        assert_eq!(op.weight(0, 0, 1, -1), 0.0);
        assert_eq!(op.hops().len(), 4);
        let e = dense_eigs_2d(&op).unwrap();
        for (x, y) in e.support().iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn corner_weight_is_product_of_first_couplings() {
        let p = LabyrinthParams::new(1, 2.0, 3.0).unwrap();
        let (w1, w2) = p.windows(5).unwrap();
        let op = build_2d(p, 5, Sublattice::Full).unwrap();
        assert_eq!(op.weight(0, 0, 1, 1), w1.weights()[1] * w2.weights()[1]);
        assert!(op.is_symmetric());
    }

    #[test]
    fn full_is_direct_sum_of_sublattices() {
        let p = LabyrinthParams::new(2, 1.3, 1.5).unwrap();
        let full = build_2d(p, 6, Sublattice::Full).unwrap();
        let even = build_2d(p, 6, Sublattice::Even).unwrap();
        let odd = build_2d(p, 6, Sublattice::Odd).unwrap();
        assert_eq!(even.sites().len() + odd.sites().len(), 36);
        assert_eq!(even.hops().len() + odd.hops().len(), full.hops().len());
        let mut joined: Vec<f64> = dense_eigs_2d(&even).unwrap().into_support();
        joined.extend(dense_eigs_2d(&odd).unwrap().into_support());
        let joined = EmpiricalMeasure::new(joined).unwrap();
        let direct = dense_eigs_2d(&full).unwrap();
        for (x, y) in joined.support().iter().zip(direct.support()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn free_products_n3() {
        let prods = product_eigs(free(), 3).unwrap();
        let r = 2f64.sqrt();
        let mut want = vec![];
        for x in [-r, 0.0, r] {
            for y in [-r, 0.0, r] {
                want.push(x * y);
            }
        }
        want.sort_by(f64::total_cmp);
        for (x, y) in prods.support().iter().zip(&want) {
            assert!((x - y).abs() < 1e-11);
        }
        let pd = ProductDos::from_params(free(), 3).unwrap();
        assert!((pd.zero_factor_mass() - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn fast_count_equals_brute_force() {
        let p = LabyrinthParams::new(1, 1.7, 2.4).unwrap();
        for n in [7, 8, 33] {
            let pd = ProductDos::from_params(p, n).unwrap();
            for k in -200..=200 {
                let e = k as f64 * 0.05;
                assert_eq!(pd.count_at_most(e), pd.count_at_most_brute(e), "n={n} e={e}");
            }
            assert_eq!(pd.cdf(1e9), 1.0);
            assert_eq!(pd.cdf(-1e9), 0.0);
        }
    }

    #[test]
    fn even_boxes_split_evenly_at_zero() {
        let p = LabyrinthParams::new(1, 2.0, 1.5).unwrap();
        assert_eq!(dos2d_cdf(p, 0.0, 10).unwrap(), 0.5);
    }

    #[test]
    fn log_convolution_half_line() {
        let p = LabyrinthParams::from_couplings(1, 0.5, 0.5).unwrap();
        let lc = LogConvolution::from_params(p, 64, 128).unwrap();
        assert!((lc.mass(0.0, f64::INFINITY) - 0.5).abs() < 1e-12);
        assert!((lc.mass(f64::NEG_INFINITY, 0.0) - 0.5).abs() < 1e-12);
        assert_eq!(lc.mass(-3.0, -1.0), 2.0 * lc.positive_mass(1.0, 3.0));
        assert!(LogConvolution::from_params(p, 64, 32).is_err());
    }

    #[test]
    fn free_spectrum_2d() {
        let c = spectrum_2d(free(), 12, 1e-4).unwrap();
        assert_eq!(c.len(), 1);
        let h = c.hull().unwrap();
        assert!((h.lo + 4.0).abs() < 1e-3 && (h.hi - 4.0).abs() < 1e-3);
    }
}
