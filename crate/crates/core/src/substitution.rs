//! Metallic-mean substitution words and their combinatorics.
//!
//! The substitution `P_s: a -> a^s b, b -> a` iterated on `a` gives the words
//! `C_s(n)`, with `C_s(0) = a`. They obey the concatenation rule
//! `C_s(n+1) = C_s(n)^s C_s(n-1)` and converge to the metallic-mean sequence
//! `u_s` (golden mean for `s = 1`, silver for `s = 2`, bronze for `s = 3`).

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of letters any word-producing operation may build.
pub const DEFAULT_MAX_WORD_LEN: usize = 1_000_000;

/// Longest factor length handled by [`recurrence_constant_estimate`].
pub const MAX_FACTOR_LEN: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    fn bit(self) -> u128 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

/// A finite sequence over `{a, b}`.
///
/// Serializes as an ASCII string such as `"abaab"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// The word with `a` and `b` exchanged.
    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|l| l.swapped()).collect())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Concatenation of `parts`, in order.
    pub fn concat(parts: &[&Word]) -> Word {
        let mut out = Vec::with_capacity(parts.iter().map(|w| w.len()).sum());
        for w in parts {
            out.extend_from_slice(&w.0);
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|l| l.as_char()).collect();
        f.write_str(&s)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'a' | 'A' => Ok(Letter::A),
                'b' | 'B' => Ok(Letter::B),
                other => Err(Error::Parse(format!("letter {other:?} is not in {{a, b}}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_order(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::domain("substitution order s must be at least 1"));
    }
    Ok(())
}

/// Applies `a -> a^s b, b -> a` once.
///
/// # Panics
///
/// Panics if `s == 0`.
pub fn substitute(w: &Word, s: u32) -> Word {
    assert!(s >= 1, "substitution order s must be at least 1");
    let s = s as usize;
    let na = w.count(Letter::A);
    let mut out = Vec::with_capacity(na * (s + 1) + (w.len() - na));
    for &l in w.letters() {
        match l {
            Letter::A => {
                out.extend(std::iter::repeat_n(Letter::A, s));
                out.push(Letter::B);
            }
            Letter::B => out.push(Letter::A),
        }
    }
    Word(out)
}

/// Lengths `|C_s(0)|, ..., |C_s(n)|`, or `None` on `u64` overflow.
pub fn iterate_lengths(s: u32, n: usize) -> Option<Vec<u64>> {
    let s = s as u64;
    let mut lens = Vec::with_capacity(n + 1);
    lens.push(1u64);
    if n >= 1 {
        lens.push(s.checked_add(1)?);
    }
    for k in 2..=n {
        let next = s.checked_mul(lens[k - 1])?.checked_add(lens[k - 2])?;
        lens.push(next);
    }
    Some(lens)
}

fn length_checked(s: u32, n: usize, cap: usize) -> Result<u64> {
    match iterate_lengths(s, n) {
        Some(lens) if lens[n] <= cap as u64 => Ok(lens[n]),
        Some(lens) => Err(Error::cap("word length", lens[n], cap as u64)),
        None => Err(Error::cap("word length", u128::MAX, cap as u64)),
    }
}

/// `C_s(n)` under the default length cap.
pub fn iterate(s: u32, n: usize) -> Result<Word> {
    iterate_capped(s, n, DEFAULT_MAX_WORD_LEN)
}

/// `C_s(n)`, built with the concatenation rule; fails if `|C_s(n)| > cap`.
pub fn iterate_capped(s: u32, n: usize, cap: usize) -> Result<Word> {
    check_order(s)?;
    length_checked(s, n, cap)?;
    let mut prev = Word(vec![Letter::A]);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = substitute(&prev, s);
    for _ in 1..n {
        let mut next = Vec::with_capacity(cur.len() * s as usize + prev.len());
        for _ in 0..s {
            next.extend_from_slice(&cur.0);
        }
        next.extend_from_slice(&prev.0);
        prev = std::mem::replace(&mut cur, Word(next));
    }
    Ok(cur)
}

/// The shortest `C_s(n)` with at least `len` letters.
pub fn iterate_at_least(s: u32, len: usize, cap: usize) -> Result<Word> {
    check_order(s)?;
    let mut n = 0;
    loop {
        let l = length_checked(s, n, cap)?;
        if l as usize >= len {
            return iterate_capped(s, n, cap);
        }
        n += 1;
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Rotation number `(s + 2 - sqrt(s^2 + 4)) / (2s)` as an unevaluated
/// double-double sum `hi + lo`.
pub fn metallic_frequency_dd(s: u32) -> (f64, f64) {
    let sf = s as f64;
    let d = sf * sf + 4.0;
    let r = d.sqrt();
    let r_lo = (-r).mul_add(r, d) / (2.0 * r);
    // s + 2 and sqrt(s^2 + 4) are within a factor two, so this is exact.
    let (nh, nl) = two_sum((sf + 2.0) - r, -r_lo);
    let den = 2.0 * sf;
    let q = nh / den;
    let rem = (-q).mul_add(den, nh);
    two_sum(q, (rem + nl) / den)
}

/// Rotation number of the metallic-mean circle coding, rounded to `f64`.
pub fn metallic_frequency(s: u32) -> f64 {
    let (hi, lo) = metallic_frequency_dd(s);
    hi + lo
}

fn phase(n: i64, alpha_hi: f64, alpha_lo: f64, beta: f64) -> f64 {
    let nf = n as f64;
    let p = nf * alpha_hi;
    let err = nf.mul_add(alpha_hi, -p);
    let t = (p - p.floor()) + (err + nf * alpha_lo) + beta;
    t - t.floor()
}

fn coding(alpha_hi: f64, alpha_lo: f64, beta: f64, range: RangeInclusive<i64>) -> Word {
    range
        .map(|n| {
            let t = phase(n, alpha_hi, alpha_lo, beta);
            if (t - 1.0) + alpha_hi + alpha_lo >= 0.0 {
                Letter::B
            } else {
                Letter::A
            }
        })
        .collect::<Vec<_>>()
        .into()
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Circle coding with rotation `alpha`: letter `n` is `b` when
/// `n alpha + beta mod 1` lies in `[1 - alpha, 1)`, and `a` otherwise.
pub fn circle_coding(alpha: f64, beta: f64, range: RangeInclusive<i64>) -> Word {
    coding(alpha, 0.0, beta, range)
}

/// The metallic-mean rotation sequence over `range`.
///
/// Uses the rotation number of [`metallic_frequency_dd`]; the marked arc
/// `[1 - alpha, 1)` carries the rare letter `b`, so for `beta = 0` the
/// sequence on `1..=n` is a prefix of `u_s`. Phases are reduced in
/// double-double arithmetic.
pub fn rotation_sequence(s: u32, beta: f64, range: RangeInclusive<i64>) -> Result<Word> {
    check_order(s)?;
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::domain(format!("phase beta = {beta} is not in [0, 1)")));
    }
    let len = (*range.end() as i128 - *range.start() as i128 + 1).max(0) as u128;
    if len > DEFAULT_MAX_WORD_LEN as u128 {
        return Err(Error::cap("word length", len, DEFAULT_MAX_WORD_LEN as u64));
    }
    let (hi, lo) = metallic_frequency_dd(s);
    Ok(coding(hi, lo, beta, range))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn of(k: usize) -> Parity {
        if k % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Two disjoint occurrences `J1 = J2 + offset` of a word inside another.
///
/// Positions are 1-based starts; `pos1 = pos2 + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinReport {
    pub parity: Parity,
    pub pos1: usize,
    pub pos2: usize,
    pub offset: usize,
}

impl TwinReport {
    /// Re-checks the report against `y` and `x`.
    pub fn validate(&self, y: &Word, x: &Word) -> bool {
        let m = y.len();
        let ok_at = |p: usize| p >= 1 && p - 1 + m <= x.len() && &x.0[p - 1..p - 1 + m] == y.letters();
        self.pos1 == self.pos2 + self.offset
            && self.offset >= m
            && Parity::of(self.offset) == self.parity
            && ok_at(self.pos1)
            && ok_at(self.pos2)
    }
}

/// 0-based starts of every (possibly overlapping) occurrence of `pattern` in `text`.
pub fn occurrences(pattern: &[Letter], text: &[Letter]) -> Vec<usize> {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return Vec::new();
    }
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = fail[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == m {
            out.push(i + 1 - m);
            k = fail[k - 1];
        }
    }
    out
}

/// Searches `x` for two disjoint occurrences of `y` whose offset has the
/// requested parity.
///
/// Occurrences may touch but not overlap. Every occurrence pair is
/// considered; the witness returned has the leftmost possible `pos2`, then
/// the leftmost `pos1`.
pub fn find_twin(y: &Word, x: &Word, parity: Parity) -> Option<TwinReport> {
    let m = y.len();
    if m == 0 {
        return None;
    }
    let occ = occurrences(y.letters(), x.letters());
    // next[i][p]: first index j >= i whose occurrence start has parity p.
    let mut next = vec![[usize::MAX; 2]; occ.len() + 1];
    for i in (0..occ.len()).rev() {
        next[i] = next[i + 1];
        next[i][occ[i] % 2] = i;
    }
    for &q in &occ {
        let first = occ.partition_point(|&p| p < q + m);
        let want = (q + parity.bit()) % 2;
        let j = next[first][want];
        if j != usize::MAX {
            return Some(TwinReport {
                parity,
                pos1: occ[j] + 1,
                pos2: q + 1,
                offset: occ[j] - q,
            });
        }
    }
    None
}

/// A word of length at most `3 |C_s(k)|` in which `C_s(k)` is an odd twin.
///
/// `C(k) C(k)` when `|C(k)|` is odd, otherwise `C(k) C(k-1) C(k)`.
pub fn twin_witness(s: u32, k: usize, cap: usize) -> Result<Word> {
    check_order(s)?;
    if k == 0 {
        return Err(Error::domain("twin_witness needs k >= 1"));
    }
    let ck_len = length_checked(s, k, usize::MAX)?;
    let bound = 3 * ck_len as u128;
    if 2 * ck_len as u128 > cap as u128 {
        return Err(Error::cap("word length", 2 * ck_len as u128, cap as u64));
    }
    let ck = iterate_capped(s, k, cap)?;
    let x = if ck.len() % 2 == 1 {
        Word::concat(&[&ck, &ck])
    } else {
        let prev = iterate_capped(s, k - 1, cap)?;
        if (2 * ck.len() + prev.len()) as u128 > cap as u128 {
            return Err(Error::cap("word length", bound, cap as u64));
        }
        Word::concat(&[&ck, &prev, &ck])
    };
    Ok(x)
}

/// `|C_s(n)| mod 2` for `n = 0, ..., n_max - 1`, from the length recurrence.
pub fn parity_pattern(s: u32, n_max: usize) -> Result<Vec<u8>> {
    check_order(s)?;
    if n_max < 3 {
        return Err(Error::domain("parity_pattern needs n_max >= 3"));
    }
    let sp = (s % 2) as u8;
    let mut out = Vec::with_capacity(n_max);
    out.push(1u8);
    out.push((sp + 1) % 2);
    while out.len() < n_max {
        let k = out.len();
        out.push((sp * out[k - 1] + out[k - 2]) % 2);
    }
    Ok(out)
}

/// The closed-form parity pattern: all ones for even `s`, period `1, 0, 1`
/// for odd `s`.
pub fn expected_parity_pattern(s: u32, n_max: usize) -> Vec<u8> {
    (0..n_max)
        .map(|n| if s % 2 == 0 || n % 3 != 1 { 1 } else { 0 })
        .collect()
}

/// Upper bound `3 (s + 1) K^2` on the odd-twin constant given a linear
/// recurrence constant `K`.
pub fn twin_constant_bound(s: u32, k: f64) -> f64 {
    3.0 * (s as f64 + 1.0) * k * k
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecurrenceEstimate {
    /// Smallest `K` such that each factor of length `l <= max_len` occurs in
    /// every window of length `ceil(K l)` of the prefix.
    pub constant: f64,
    /// Factor length at which `constant` is attained.
    pub worst_len: usize,
    pub prefix_len: usize,
}

/// Empirical linear-recurrence constant of `u_s` over factor lengths `1..=max_len`.
///
/// For a factor with occurrence starts `p_0 < ... < p_r` in a prefix of
/// length `M`, the longest window avoiding it has length
/// `max(p_0 + l, max_i (p_{i+1} - p_i) + l - 1, M - p_r) - 1`.
pub fn recurrence_constant_estimate(s: u32, max_len: usize) -> Result<RecurrenceEstimate> {
    check_order(s)?;
    if max_len == 0 || max_len > MAX_FACTOR_LEN {
        return Err(Error::domain(format!(
            "max_len must be in 1..={MAX_FACTOR_LEN}, got {max_len}"
        )));
    }
    let target = (256 * max_len * (s as usize + 1)).max(4096);
    let word = iterate_at_least(s, target, DEFAULT_MAX_WORD_LEN)?;
    let letters = word.letters();
    let m = letters.len();

    struct Seen {
        first: usize,
        last: usize,
        max_gap: usize,
    }

    let mut best = (0.0f64, 1usize);
    for len in 1..=max_len {
        let mask: u128 = if len == 128 { u128::MAX } else { (1u128 << len) - 1 };
        let mut key: u128 = 0;
        let mut seen: HashMap<u128, Seen> = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            key = ((key << 1) | l.bit()) & mask;
            if i + 1 < len {
                continue;
            }
            let start = i + 1 - len;
            seen.entry(key)
                .and_modify(|e| {
                    e.max_gap = e.max_gap.max(start - e.last);
                    e.last = start;
                })
                .or_insert(Seen {
                    first: start,
                    last: start,
                    max_gap: 0,
                });
        }
        let need = seen
            .values()
            .map(|e| {
                let gap = if e.max_gap > 0 { e.max_gap + len - 1 } else { 0 };
                gap.max(e.first + len).max(m - e.last)
            })
            .max()
            .unwrap_or(len);
        let k = need as f64 / len as f64;
        if k > best.0 {
            best = (k, len);
        }
    }
    Ok(RecurrenceEstimate {
        constant: best.0.max(1.0),
        worst_len: best.1,
        prefix_len: m,
    })
}
