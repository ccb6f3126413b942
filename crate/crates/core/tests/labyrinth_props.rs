use quasilab::labyrinth::*;
use quasilab::measure::EmpiricalMeasure;

#[test]
fn tensor_law_grid() {
    for n in [4, 6, 8] {
        for s in 1..=2 {
            for (a1, a2) in [(1.3, 1.5), (2.0, 2.0)] {
                let p = LabyrinthParams::new(s, a1, a2).unwrap();
                let dense = dense_eigs_2d(&build_2d(p, n, Sublattice::Full).unwrap()).unwrap();
                let prod = product_eigs(p, n).unwrap();
                assert_eq!(dense.len(), n * n);
                for (x, y) in dense.support().iter().zip(prod.support()) {
                    assert!((x - y).abs() <= 1e-7, "N={n} s={s} a=({a1},{a2})");
                }
            }
        }
    }
}

#[test]
fn operators_are_symmetric_products() {
    let p = LabyrinthParams::new(2, 1.3, 2.2).unwrap();
    let (w1, w2) = p.windows(7).unwrap();
    for sl in [Sublattice::Full, Sublattice::Even, Sublattice::Odd] {
        let op = build_2d(p, 7, sl).unwrap();
        assert!(op.is_symmetric());
        for h in op.hops() {
            let k1 = if h.dm > 0 { h.m + 1 } else { h.m };
            let k2 = if h.dn > 0 { h.n + 1 } else { h.n };
            assert_eq!(h.weight, w1.weights()[k1] * w2.weights()[k2]);
            assert!(sl == Sublattice::Full || (h.m + h.n) % 2 == if sl == Sublattice::Even { 0 } else { 1 });
        }
    }
}

#[test]
fn odd_box_zero_mass() {
    let p = LabyrinthParams::new(1, 1.6, 2.1).unwrap();
    for n in [3, 5, 9] {
        let prods = product_eigs(p, n).unwrap();
        let zeros = prods.support().iter().filter(|&&x| x == 0.0).count();
        assert_eq!(zeros, 2 * n - 1);
        assert_eq!(prods.len(), n * n);
    }
}

#[test]
fn dos_is_a_cdf_with_symmetry() {
    let p = LabyrinthParams::new(1, 1.4, 2.7).unwrap();
    for n in [9, 16] {
        let pd = ProductDos::from_params(p, n).unwrap();
        let grid: Vec<f64> = (-400..=400).map(|k| k as f64 * 0.031).collect();
        let vals: Vec<f64> = grid.iter().map(|&e| pd.cdf(e)).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(pd.cdf(-1e6), 0.0);
        assert_eq!(pd.cdf(1e6), 1.0);
        let total = pd.total() as f64;
        for &e in &grid {
            let left = pd.count_at_most(e.next_down()) as f64 / total;
            let sum = pd.cdf(-e) + left;
            assert!((sum - 1.0).abs() <= 1e-12, "E = {e}: {sum}");
        }
    }
}

#[test]
fn dos_matches_dense_eigenvalues() {
    let p = LabyrinthParams::new(2, 1.2, 1.9).unwrap();
    let n = 8;
    let dense = dense_eigs_2d(&build_2d(p, n, Sublattice::Full).unwrap()).unwrap();
    let pd = ProductDos::from_params(p, n).unwrap();
    for k in -300..=300 {
        let e = k as f64 * 0.0437;
        assert!((pd.cdf(e) - dense.cdf(e)).abs() <= 1.0 / (n * n) as f64 + 1e-9);
    }
}

#[test]
fn log_convolution_identity() {
    let p = LabyrinthParams::from_couplings(1, 0.5, 0.5).unwrap();
    for n in [256, 1024] {
        let (e1, e2) = axis_eigenvalues(p, n).unwrap();
        let pd = ProductDos::new(&e1, &e2);
        for bins in [256, 1024] {
            let lc = LogConvolution::new(&e1, &e2, 2.0 * (1.0 + p.a1), bins).unwrap();
            let tol = 2.0 / bins as f64 + 2.0 * (2.0 * n as f64 - 1.0) / (n * n) as f64;
            for k in 0..40 {
                let lo = -5.0 + 0.23 * k as f64;
                let hi = lo + 0.05 + 0.11 * (k % 7) as f64;
                let direct = pd.cdf(hi) - pd.cdf(lo);
                assert!(
                    (lc.mass(lo, hi) - direct).abs() <= tol,
                    "N={n} bins={bins} ({lo}, {hi}]"
                );
            }
            assert!((lc.mass(0.0, f64::INFINITY) - 0.5).abs() < 1e-12);
            assert!(lc.mass(-3.0, -0.5) > 0.0);
        }
    }
}

#[test]
fn log_convolution_excludes_zero_factors() {
    let p = LabyrinthParams::new(1, 1.3, 1.3).unwrap();
    let lc = LogConvolution::from_params(p, 33, 256).unwrap();
    assert!((lc.zero_mass() - 65.0 / (33.0 * 33.0)).abs() < 1e-15);
    assert!((lc.mass(f64::NEG_INFINITY, f64::INFINITY) + lc.zero_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn products_lie_in_spectrum_cover() {
    for (a1, a2) in [(1.3, 1.5), (2.0, 2.0), (4.0, 4.0)] {
        let p = LabyrinthParams::new(1, a1, a2).unwrap();
        let hull = spectrum_2d(p, 10, 1e-4).unwrap().hull().unwrap();
        let prods = product_eigs(p, 64).unwrap();
        assert!(prods.support().iter().all(|&e| hull.contains(e)));
    }
}

#[test]
fn window_choice_does_not_move_the_spectrum_cover() {
    use quasilab::WindowSource;
    let p = LabyrinthParams::new(1, 1.6, 2.2).unwrap();
    let q = p.with_sources(
        WindowSource::Substitution { offset: 777 },
        WindowSource::Rotation { beta: 0.3 },
    );
    let a = spectrum_2d(p, 10, 1e-4).unwrap();
    let b = spectrum_2d(q, 10, 1e-4).unwrap();
    assert_eq!(a, b);
    // Finite-volume densities of distinct windows stay close.
    let da = ProductDos::from_params(p, 512).unwrap();
    let db = ProductDos::from_params(q, 512).unwrap();
    for k in -100..=100 {
        let e = k as f64 * 0.1;
        assert!((da.cdf(e) - db.cdf(e)).abs() < 0.05);
    }
}

#[test]
fn sublattice_examples() {
    let free = LabyrinthParams::new(1, 1.0, 1.0).unwrap();
    let r8 = sublattice_dos_compare(free, 8).unwrap();
    let r16 = sublattice_dos_compare(free, 16).unwrap();
    assert!(r8.even_vs_odd <= 0.15);
    assert!(r16.even_vs_odd <= r8.even_vs_odd);
    assert!(r8.mixture_defect <= 1e-12);
    assert_eq!(r8.even_sites + r8.odd_sites, 64);
    assert!(sublattice_dos_compare(free, 17).is_err());
}

#[test]
fn dense_side_cap() {
    let p = LabyrinthParams::new(1, 1.0, 1.0).unwrap();
    assert!(dense_eigs_2d(&build_2d(p, 17, Sublattice::Full).unwrap()).is_err());
    assert!(build_2d(p, 1, Sublattice::Full).is_err());
    let m: EmpiricalMeasure = dense_eigs_2d(&build_2d(p, 16, Sublattice::Even).unwrap()).unwrap();
    assert_eq!(m.len(), 128);
}

#[test]
fn sweep_classifies_weak_and_strong() {
    let cfg = quasilab::tracemap::CoverConfig::default();
    let rows = classify_sweep(1, &[0.1, 3.75], &[0.1, 3.75], 12, &cfg, 4e-4).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].is_interval);
    assert!(!rows[3].is_interval);
    assert!(rows[0].thickness1 > rows[3].thickness1);
}
