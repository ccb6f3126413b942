use proptest::prelude::*;
use quasilab::substitution::*;
use quasilab::{Letter, Parity, Word};

/// Quadratic scan over all pairs of start positions.
fn brute_twin(y: &[Letter], x: &[Letter], parity: Parity) -> bool {
    let m = y.len();
    if m == 0 || m > x.len() {
        return false;
    }
    let occ: Vec<usize> = (0..=x.len() - m).filter(|&i| &x[i..i + m] == y).collect();
    occ.iter().any(|&i| {
        occ.iter()
            .any(|&j| j >= i + m && ((j - i) % 2 == 1) == (parity == Parity::Odd))
    })
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop_oneof![Just(Letter::A), Just(Letter::B)], 1..max).prop_map(Word::new)
}

fn parity_strategy() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Odd), Just(Parity::Even)]
}

proptest! {
    #[test]
    fn twin_reports_revalidate_and_match_brute_force(
        y in word_strategy(4),
        x in word_strategy(40),
        parity in parity_strategy(),
    ) {
        let found = find_twin(&y, &x, parity);
        prop_assert_eq!(found.is_some(), brute_twin(y.letters(), x.letters(), parity));
        if let Some(t) = found {
            prop_assert!(t.validate(&y, &x));
            prop_assert_eq!(t.parity, parity);
            prop_assert_eq!(Parity::of(t.offset), parity);
            prop_assert!(t.offset >= y.len());
            prop_assert_eq!(t.pos1, t.pos2 + t.offset);
        }
    }

    #[test]
    fn substitution_lengths(s in 1u32..6, w in word_strategy(50)) {
        let out = substitute(&w, s);
        let na = w.count(Letter::A);
        prop_assert_eq!(out.len(), (s as usize + 1) * na + w.count(Letter::B));
        prop_assert_eq!(out.count(Letter::B), na);
    }

    #[test]
    fn rotation_prefixes_the_fixed_point(s in 1u32..6, n in 2usize..9) {
        let c = iterate(s, n).unwrap();
        let r = rotation_sequence(s, 0.0, 1..=c.len() as i64).unwrap();
        prop_assert_eq!(r, c);
    }

    #[test]
    fn iterates_are_prefixes_of_each_other(s in 1u32..5, n in 1usize..8) {
        let a = iterate(s, n).unwrap();
        let b = iterate(s, n + 1).unwrap();
        prop_assert_eq!(b.prefix(a.len()), a);
    }
}

#[test]
fn fibonacci_lengths_from_independent_recurrence() {
    let (mut f0, mut f1) = (1usize, 2usize);
    for n in 1..=20 {
        assert_eq!(iterate(1, n).unwrap().len(), f1, "n = {n}");
        (f0, f1) = (f1, f0 + f1);
    }
    assert_eq!(iterate(1, 10).unwrap().len(), 144);
}

#[test]
fn concatenation_rule_for_small_orders() {
    for s in 1..=4u32 {
        for n in 1..=14 {
            let Ok(next) = iterate(s, n + 1) else { continue };
            let cur = iterate(s, n).unwrap();
            let prev = iterate(s, n - 1).unwrap();
            let mut parts: Vec<&Word> = vec![&cur; s as usize];
            parts.push(&prev);
            assert_eq!(next, Word::concat(&parts), "s = {s}, n = {n}");
        }
    }
}

#[test]
fn small_witness_checked_by_brute_force() {
    let ck = iterate(2, 2).unwrap();
    let x = twin_witness(2, 2, DEFAULT_MAX_WORD_LEN).unwrap();
    assert!(x.len() <= 3 * ck.len());
    assert!(brute_twin(ck.letters(), x.letters(), Parity::Odd));
}

#[test]
fn witnesses_for_all_small_cases() {
    for s in 1..=3 {
        for k in 1..=9 {
            let ck = iterate(s, k).unwrap();
            let x = twin_witness(s, k, DEFAULT_MAX_WORD_LEN).unwrap();
            assert!(x.len() <= 3 * ck.len());
            let t = find_twin(&ck, &x, Parity::Odd).expect("odd twin");
            assert!(t.validate(&ck, &x));
        }
    }
}

#[test]
fn parity_pattern_from_length_recurrence() {
    for s in 1..=6u32 {
        let lens = iterate_lengths(s, 19).unwrap();
        let direct: Vec<u8> = lens.iter().map(|l| (l % 2) as u8).collect();
        assert_eq!(parity_pattern(s, 20).unwrap(), direct);
        assert_eq!(direct, expected_parity_pattern(s, 20));
    }
}

#[test]
fn recurrence_constant_is_sane() {
    for s in 1..=3 {
        let est = recurrence_constant_estimate(s, 12).unwrap();
        assert!(est.constant >= 1.0);
        assert!(est.prefix_len >= 4096);
        assert!(twin_constant_bound(s, est.constant) >= est.constant);
    }
}
