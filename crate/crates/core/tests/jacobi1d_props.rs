use proptest::prelude::*;
use quasilab::dense::symmetric_eigenvalues;
use quasilab::jacobi1d::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weights(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..5.0, 1..max)
}

/// Determinant recurrence of `H - e` for the zero-diagonal tridiagonal matrix.
fn det_shifted(off: &[f64], e: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, -e);
    for &c in off {
        (p0, p1) = (p1, -e * p1 - c * c * p0);
    }
    p1
}

proptest! {
    #[test]
    fn counts_are_monotone(w in weights(40), mut es in prop::collection::vec(-12.0f64..12.0, 2..20)) {
        let w = HoppingWindow::from_weights(w, 0).unwrap();
        es.sort_by(f64::total_cmp);
        let counts: Vec<usize> = es.iter().map(|&e| eig_count_below(&w, e)).collect();
        prop_assert!(counts.windows(2).all(|c| c[0] <= c[1]));
        prop_assert_eq!(eig_count_below(&w, f64::NEG_INFINITY), 0);
        prop_assert_eq!(eig_count_below(&w, 1e10), w.len());
        for &e in &es {
            prop_assert!(eig_count_below(&w, e) <= eig_count_at_most(&w, e));
        }
    }

    #[test]
    fn bisection_agrees_with_dense_solver(w in weights(9)) {
        let w = HoppingWindow::from_weights(w, 0).unwrap();
        let bis = eigenvalues(&w, 1e-12).unwrap();
        let dense = symmetric_eigenvalues(&w.to_dense()).unwrap();
        for (x, y) in bis.support().iter().zip(&dense) {
            prop_assert!((x - y).abs() <= 1e-8, "{} vs {}", x, y);
        }
    }

    #[test]
    fn spectra_are_symmetric(s in 1u32..4, a in 0.2f64..5.0, n in 1usize..300) {
        let w = build_window(ModelParams::new(s, a).unwrap(), n, WindowSource::default()).unwrap();
        let e = eigenvalues(&w, 1e-12).unwrap();
        let e = e.support();
        for k in 0..n {
            prop_assert!((e[k] + e[n - 1 - k]).abs() <= 1e-9);
        }
    }

    #[test]
    fn ids_at_zero_is_half(s in 1u32..4, a in 0.2f64..5.0, n in 1usize..500) {
        let v = ids(ModelParams::new(s, a).unwrap(), 0.0, n).unwrap();
        prop_assert!((v - 0.5).abs() <= 0.5 / n as f64 + 1e-15);
    }
}

#[test]
fn odd_windows_are_singular() {
    for n in [1usize, 3, 5, 7, 21] {
        let w = build_window(ModelParams::new(2, 1.7).unwrap(), n, WindowSource::default()).unwrap();
        assert_eq!(det_shifted(w.couplings(), 0.0), 0.0);
        assert!(eigenvalues(&w, 1e-12).unwrap().support().contains(&0.0));
    }
}

#[test]
fn free_ids_convergence() {
    let w = build_window(ModelParams::new(1, 1.0).unwrap(), 4096, WindowSource::default()).unwrap();
    for (e, v) in ids_curve(&w, &linspace(-3.0, 3.0, 601)) {
        assert!((v - free_ids(e)).abs() <= 1e-2, "E = {e}");
    }
}

#[test]
fn ids_is_phase_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let grid = linspace(-4.0, 4.0, 161);
    for (s, lambda) in [(1, 1.5), (2, 0.8)] {
        let p = ModelParams::from_coupling(s, lambda).unwrap();
        let curves: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                let src = if i % 2 == 0 {
                    WindowSource::Substitution {
                        offset: rng.gen_range(0..100_000),
                    }
                } else {
                    WindowSource::Rotation { beta: rng.gen::<f64>() }
                };
                let w = build_window(p, 2048, src).unwrap();
                ids_curve(&w, &grid).into_iter().map(|(_, v)| v).collect()
            })
            .collect();
        for a in &curves {
            for b in &curves {
                let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                assert!(d <= 5e-2, "s = {s}: {d}");
            }
        }
    }
}

#[test]
fn measure_csv_roundtrip_through_eigenvalues() {
    let w = build_window(ModelParams::new(1, 2.0).unwrap(), 64, WindowSource::default()).unwrap();
    let e = eigenvalues(&w, 1e-12).unwrap();
    let back = quasilab::EmpiricalMeasure::from_csv(&e.to_csv()).unwrap();
    assert_eq!(back, e);
}
