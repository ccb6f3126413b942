use proptest::prelude::*;
use quasilab::tracemap::*;
use quasilab::{BandCover, ModelParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn invariant_is_conserved(
        s in 1u32..4,
        x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0,
    ) {
        let v = TraceVector::new(x, y, z);
        let g = fricke_vogt(v);
        prop_assert!((fricke_vogt(trace_map(s, v)) - g).abs() <= 1e-10 * (1.0 + g.abs()));
    }

    #[test]
    fn factor_map_semi_conjugates(s in 1u32..4, t in 0.0f64..1.0, p in 0.0f64..1.0) {
        let (a, b) = cat_map(s, t, p);
        prop_assert!(trace_map(s, factor_map(t, p)).dist_sup(&factor_map(a, b)) <= 1e-10);
        prop_assert!(fricke_vogt(factor_map(t, p)).abs() <= 1e-12);
    }

    #[test]
    fn lines_lie_on_their_surface(lambda in 0.0f64..4.0, e in -10.0f64..10.0) {
        let p = ModelParams::from_coupling(1, lambda).unwrap();
        let target = lambda * lambda / 4.0;
        prop_assert!((fricke_vogt(line_point(p, e)) - target).abs() <= 1e-12);
        prop_assert!((fricke_vogt(onsite_line_point(lambda, e)) - target).abs() <= 1e-12);
    }
}

#[test]
fn zero_energy_survives() {
    for lambda in [0.0, 0.5, 1.5, 3.75] {
        let p = ModelParams::from_coupling(1, lambda).unwrap();
        for s in 1..=3 {
            let e = escape_time(s, line_point(p, 0.0), 10_000, default_escape_radius(lambda));
            assert_eq!(e, Escape::Survived, "lambda = {lambda}, s = {s}");
        }
    }
}

#[test]
fn zero_energy_orbit_period_two_for_silver() {
    let p = ModelParams::new(2, 3.0).unwrap();
    let orb = orbit(2, line_point(p, 0.0), 4);
    assert!(orb[0].dist_sup(&orb[2]) < 1e-15 && orb[1].dist_sup(&orb[3]) < 1e-15);
}

#[test]
fn free_total_length_tends_to_four() {
    let p = ModelParams::new(1, 1.0).unwrap();
    let covers = spectrum_covers(p, &[2, 5, 10, 20], &CoverConfig::default()).unwrap();
    let last = covers.last().unwrap();
    assert!((last.total_length() - 4.0).abs() < 2e-3);
    let target = BandCover::from_intervals(&[(-2.0, 2.0)]).unwrap();
    assert!(last.hausdorff(&target) < 1e-3);
    for w in covers.windows(2) {
        assert!(w[1].total_length() <= w[0].total_length());
    }
}

#[test]
fn strong_coupling_length_strictly_decreases() {
    let p = ModelParams::new(1, 4.0).unwrap();
    let covers = spectrum_covers(p, &[5, 10, 15, 20], &CoverConfig::default()).unwrap();
    for w in covers.windows(2) {
        assert!(w[1].total_length() < w[0].total_length());
        assert!(w[1].is_subset_of(&w[0], 0.0));
    }
    assert!(covers.iter().all(|c| c.contains(0.0)));
}

#[test]
fn cover_survivors_are_inside() {
    // Every sampled surviving energy must be covered.
    let p = ModelParams::new(2, 1.8).unwrap();
    let level = 8;
    let c = spectrum_cover(p, level, 1e-4).unwrap();
    let r = default_escape_radius(p.lambda());
    let h = 2.0 * (1.0 + p.a);
    for k in 0..=20_000 {
        let e = -h + 2.0 * h * k as f64 / 20_000.0;
        if escape_time(p.s, line_point(p, e), level, r).survived() {
            assert!(c.contains(e), "E = {e} survives but is not covered");
        }
    }
}

#[test]
fn cover_depends_only_on_inputs() {
    let p = ModelParams::new(1, 2.5).unwrap();
    let a = spectrum_cover(p, 12, 1e-5).unwrap();
    let b = spectrum_cover(p, 12, 1e-5).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn pushforward_sup_distance() {
    for n in [1, 7, 100, 4096] {
        let m = pushforward_free_dos(n).unwrap();
        let mut worst: f64 = 0.0;
        for &e in m.support() {
            worst = worst.max((m.cdf(e) - quasilab::jacobi1d::free_ids(e)).abs());
            worst = worst.max((m.cdf_left(e) - quasilab::jacobi1d::free_ids(e)).abs());
        }
        assert!(worst <= 2.0 / n as f64);
    }
}
