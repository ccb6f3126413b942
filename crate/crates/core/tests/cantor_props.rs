use proptest::prelude::*;
use quasilab::cantor::*;
use quasilab::tracemap::{spectrum_covers, CoverConfig};
use quasilab::{BandCover, ModelParams};

/// Disjoint bands built from alternating positive band and gap lengths.
fn cover_strategy() -> impl Strategy<Value = BandCover> {
    (prop::collection::vec((0.01f64..3.0, 0.01f64..3.0), 1..30), -5.0f64..5.0).prop_map(|(parts, start)| {
        let mut x = start;
        let mut bands = Vec::new();
        for (band, gap) in parts {
            bands.push((x, x + band));
            x += band + gap;
        }
        BandCover::from_intervals(&bands).unwrap()
    })
}

/// Thickness straight from the definition: for every gap, the bridges
/// extend to the nearest gap at least as long (earlier position breaking ties).
fn thickness_oracle(c: &BandCover) -> f64 {
    let g = gaps(c).gaps;
    let hull = c.hull().unwrap();
    let longer = |j: usize, i: usize| g[j].len() > g[i].len() || (g[j].len() == g[i].len() && j < i);
    let mut tau = f64::INFINITY;
    for i in 0..g.len() {
        let left = (0..i).rev().find(|&j| longer(j, i)).map_or(hull.lo, |j| g[j].hi);
        let right = (i + 1..g.len()).find(|&j| longer(j, i)).map_or(hull.hi, |j| g[j].lo);
        tau = tau.min((g[i].lo - left).min(right - g[i].hi) / g[i].len());
    }
    tau
}

proptest! {
    #[test]
    fn thickness_matches_definition(c in cover_strategy()) {
        let (a, b) = (thickness(&c), thickness_oracle(&c));
        prop_assert!(a == b || (a - b).abs() <= 1e-12 * b.abs(), "{} vs {}", a, b);
    }

    #[test]
    fn thickness_is_scale_invariant(c in cover_strategy(), k in -20i32..20) {
        // Powers of two scale every endpoint exactly.
        let scaled = c.scaled(2f64.powi(k));
        prop_assert_eq!(thickness(&scaled), thickness(&c));
    }

    #[test]
    fn thickness_nearly_scale_invariant(c in cover_strategy(), f in 0.1f64..10.0) {
        let (a, b) = (thickness(&c.scaled(f)), thickness(&c));
        if b.is_finite() {
            prop_assert!((a - b).abs() <= 1e-9 * b);
        } else {
            prop_assert!(a.is_infinite());
        }
    }

    #[test]
    fn unit_band_is_product_identity(c in cover_strategy()) {
        let one = BandCover::from_intervals(&[(1.0, 1.0)]).unwrap();
        prop_assert_eq!(product_set(&c, &one).unwrap().bands, c.bands);
    }

    #[test]
    fn set_arithmetic_contains_pointwise_results(a in cover_strategy(), b in cover_strategy(), t in 0.0f64..1.0, u in 0.0f64..1.0) {
        let x = a.bands[0].lo + t * a.bands[0].len();
        let y = b.bands[b.len() - 1].lo + u * b.bands[b.len() - 1].len();
        prop_assert!(product_set(&a, &b).unwrap().contains(x * y));
        let s = sum_set(&a, &b).unwrap();
        prop_assert!(s.distance_to(x + y) <= 1e-12 * (1.0 + (x + y).abs()));
    }

    #[test]
    fn stats_invariants(c in cover_strategy()) {
        let st = CantorStats::of(&c).unwrap();
        prop_assert!(st.total_length <= st.hull.len() * (1.0 + 1e-12));
        prop_assert_eq!(st.thickness_estimate.is_infinite(), gaps(&c).is_empty());
        prop_assert!((0.0..=1.0).contains(&st.box_dim_estimate));
    }
}

#[test]
fn thick_factors_give_interval_products() {
    let threshold = 1.0 + 2f64.sqrt();
    let covers: Vec<BandCover> = [0.1, 0.15, 0.2]
        .iter()
        .map(|&l| {
            spectrum_covers(
                ModelParams::from_coupling(1, l).unwrap(),
                &[15],
                &CoverConfig::default(),
            )
            .unwrap()
            .pop()
            .unwrap()
        })
        .collect();
    for a in &covers {
        for b in &covers {
            assert!(thickness(a) > threshold && thickness(b) > threshold);
            let p = product_set(a, b).unwrap();
            assert!(is_interval(&p, 4.0 * p.resolution).is_interval);
        }
    }
}

#[test]
fn strong_coupling_dimension_is_small() {
    let p = ModelParams::new(1, 4.0).unwrap();
    let covers: Vec<BandCover> = [(10, 1e-2), (12, 1e-3), (15, 1e-4), (18, 1e-5)]
        .iter()
        .map(|&(level, res)| quasilab::tracemap::spectrum_cover(p, level, res).unwrap())
        .collect();
    let d = box_dimension_estimate(&covers).unwrap();
    assert!(d > 0.0 && d < 0.5, "{d}");
}

#[test]
fn strong_coupling_product_has_gaps() {
    let c = spectrum_covers(ModelParams::new(1, 4.0).unwrap(), &[15], &CoverConfig::default())
        .unwrap()
        .pop()
        .unwrap();
    let p = product_set(&c, &c).unwrap();
    let chk = is_interval(&p, 4.0 * p.resolution);
    assert!(!chk.is_interval && !chk.offending_gaps.is_empty());
}
