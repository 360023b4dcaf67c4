//! Overlaps, fractional powers and complement squares inside finite words.
//!
//! Two scan strategies are provided. [`Strategy::Naive`] walks every
//! `(position, period)` pair and extends letter by letter. [`Strategy::Lce`]
//! precomputes, for each period `P`, the run lengths of `w[j] == w[j+P]`,
//! which gives every longest common extension `LCE(i, i+P)` in one pass.
//! Both return identical results.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{check_digits, BigRational};
use crate::error::{Error, Result};
use crate::words::{complement, Letter, Word};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Naive,
    Lce,
}

/// How many full copies of the period an occurrence needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Squares {
    /// `w w^δ`: at least one full copy.
    Two,
    /// `w w w^δ`: at least two full copies.
    Three,
}

impl Squares {
    pub fn min_repeats(self) -> usize {
        match self {
            Squares::Two => 1,
            Squares::Three => 2,
        }
    }

    pub fn from_count(n: u32) -> Result<Self> {
        match n {
            2 => Ok(Squares::Two),
            3 => Ok(Squares::Three),
            _ => Err(Error::InvalidArgument(format!("squares must be 2 or 3, got {n}"))),
        }
    }
}

/// `w^repeats · w[..frac_len]` located at `position`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepetitionOccurrence {
    #[serde(rename = "pos")]
    pub position: usize,
    #[serde(rename = "period")]
    pub period_word: Word,
    #[serde(rename = "repeats")]
    pub whole_repeats: usize,
    pub frac_len: usize,
}

impl RepetitionOccurrence {
    pub fn period(&self) -> usize {
        self.period_word.len()
    }

    /// Total length `repeats·|w| + frac_len`.
    pub fn window_len(&self) -> usize {
        self.whole_repeats * self.period() + self.frac_len
    }

    /// `α = repeats + frac_len/|w|`.
    pub fn exponent(&self) -> BigRational {
        BigRational::new(BigInt::from(self.window_len()), BigInt::from(self.period()))
    }

    /// The spelled-out window.
    pub fn pattern(&self) -> Word {
        let mut out = self.period_word.repeat(self.whole_repeats);
        out.extend_from_slice(&self.period_word[..self.frac_len.min(self.period())]);
        out
    }

    /// Non-empty period, at least one copy and `frac_len < |w|`.
    pub fn is_normalized(&self) -> bool {
        self.period() > 0 && self.whole_repeats >= 1 && self.frac_len < self.period()
    }

    /// Re-reads the window from `w`.
    pub fn matches(&self, w: &[Letter]) -> bool {
        let end = self.position + self.window_len();
        self.is_normalized() && end <= w.len() && w[self.position..end] == self.pattern()[..]
    }
}

/// An overlap `u X u X u` with `u` a letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OverlapOccurrence {
    pub position: usize,
    #[serde(with = "letter_string")]
    pub u: Letter,
    #[serde(rename = "X")]
    pub x: Word,
}

impl OverlapOccurrence {
    /// `|uX|`, the period of the overlap.
    pub fn period(&self) -> usize {
        self.x.len() + 1
    }

    pub fn len(&self) -> usize {
        2 * self.period() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pattern(&self) -> Word {
        let mut out = Word::new();
        for _ in 0..2 {
            out.push(self.u);
            out.extend_from_slice(&self.x);
        }
        out.push(self.u);
        out
    }

    fn at(w: &[Letter], position: usize, period: usize) -> Self {
        OverlapOccurrence {
            position,
            u: w[position],
            x: Word::from(&w[position + 1..position + period]),
        }
    }
}

mod letter_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &u8, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&(*c as char).to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u8, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_bytes() {
            [c] => Ok(*c),
            _ => Err(serde::de::Error::custom("expected a single letter")),
        }
    }
}

/// `v · v̄ · v[..frac_len]` located at `position`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplementSquare {
    #[serde(rename = "pos")]
    pub position: usize,
    #[serde(rename = "period")]
    pub v: Word,
    pub frac_len: usize,
}

impl ComplementSquare {
    pub fn window_len(&self) -> usize {
        2 * self.v.len() + self.frac_len
    }

    /// The same window read as `W W^δ` with `W = v·v̄`, one full copy, and a
    /// trailing piece that is a prefix of `v` (so shorter than `W`).
    pub fn as_repetition(&self, p: u32) -> Result<RepetitionOccurrence> {
        let mut period_word = self.v.clone();
        period_word.extend_from_slice(&complement(&self.v, p)?);
        Ok(RepetitionOccurrence {
            position: self.position,
            period_word,
            whole_repeats: 1,
            frac_len: self.frac_len,
        })
    }
}

/// Fills `runs[j] = LCE(j, j+period)` for every `j`, capped by the end of
/// the word.
fn period_runs(w: &[Letter], period: usize, runs: &mut Vec<usize>) {
    let len = w.len().saturating_sub(period);
    runs.clear();
    runs.resize(len + 1, 0);
    for j in (0..len).rev() {
        if w[j] == w[j + period] {
            runs[j] = runs[j + 1] + 1;
        }
    }
}

fn naive_extension(w: &[Letter], i: usize, period: usize) -> usize {
    let mut e = 0;
    while i + period + e < w.len() && w[i + e] == w[i + period + e] {
        e += 1;
    }
    e
}

/// Overlaps in left-to-right, then shortest-period order, at most `limit`.
pub fn find_overlaps(w: &[Letter], limit: usize) -> Vec<OverlapOccurrence> {
    find_overlaps_with(w, limit, Strategy::default())
}

pub fn find_overlaps_with(w: &[Letter], limit: usize, strategy: Strategy) -> Vec<OverlapOccurrence> {
    let n = w.len();
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    match strategy {
        Strategy::Naive => {
            'scan: for i in 0..n {
                let mut period = 1;
                while i + 2 * period < n {
                    if (0..=period).all(|j| w[i + j] == w[i + j + period]) {
                        out.push(OverlapOccurrence::at(w, i, period));
                        if out.len() == limit {
                            break 'scan;
                        }
                    }
                    period += 1;
                }
            }
        }
        Strategy::Lce => {
            let mut found = Vec::new();
            let mut runs = Vec::with_capacity(n);
            for period in 1..=n.saturating_sub(1) / 2 {
                period_runs(w, period, &mut runs);
                for i in 0..n - 2 * period {
                    if runs[i] > period {
                        found.push((i, period));
                    }
                }
            }
            found.sort_unstable();
            out.extend(
                found
                    .into_iter()
                    .take(limit)
                    .map(|(i, period)| OverlapOccurrence::at(w, i, period)),
            );
        }
    }
    out
}

pub fn is_overlap_free(w: &[Letter]) -> bool {
    find_overlaps(w, 1).is_empty()
}

/// The shortest overlap that is a suffix of `w`, if any. Used to extend
/// overlap-free words one letter at a time.
pub fn overlap_suffix(w: &[Letter]) -> Option<OverlapOccurrence> {
    let n = w.len();
    let mut period = 1;
    while 2 * period < n {
        let start = n - 2 * period - 1;
        if (0..=period).all(|j| w[start + j] == w[start + j + period]) {
            return Some(OverlapOccurrence::at(w, start, period));
        }
        period += 1;
    }
    None
}

fn occurrence(w: &[Letter], i: usize, period: usize, extension: usize) -> RepetitionOccurrence {
    let total = period + extension;
    RepetitionOccurrence {
        position: i,
        period_word: Word::from(&w[i..i + period]),
        whole_repeats: total / period,
        frac_len: total % period,
    }
}

/// Right-maximal occurrences `w^r w'` at every `(position, period)` with
/// `r ≥ squares.min_repeats()` and `frac_len ≥ min_frac`, ordered by
/// position then period. Exact integer powers (`frac_len = 0`) never pass
/// since `min_frac ≥ 1`.
pub fn find_fractional_squares(
    w: &[Letter],
    min_frac: usize,
    squares: Squares,
) -> Result<Vec<RepetitionOccurrence>> {
    find_fractional_squares_with(w, min_frac, squares, Strategy::default())
}

pub fn find_fractional_squares_with(
    w: &[Letter],
    min_frac: usize,
    squares: Squares,
    strategy: Strategy,
) -> Result<Vec<RepetitionOccurrence>> {
    if min_frac == 0 {
        return Err(Error::InvalidArgument("min_frac must be at least 1".into()));
    }
    let n = w.len();
    let copies = squares.min_repeats();
    let keep = |period: usize, ext: usize| {
        let total = period + ext;
        total / period >= copies && total % period >= min_frac
    };
    // an occurrence needs copies·period + min_frac letters
    let max_period = |i: usize| (n - i).saturating_sub(min_frac) / copies;
    let mut out = Vec::new();
    match strategy {
        Strategy::Naive => {
            for i in 0..n {
                for period in 1..=max_period(i) {
                    let ext = naive_extension(w, i, period);
                    if keep(period, ext) {
                        out.push(occurrence(w, i, period, ext));
                    }
                }
            }
        }
        Strategy::Lce => {
            let mut found = Vec::new();
            let mut runs = Vec::with_capacity(n);
            for period in 1..=max_period(0) {
                period_runs(w, period, &mut runs);
                for i in 0..n.saturating_sub(period) {
                    if period <= max_period(i) && keep(period, runs[i]) {
                        found.push((i, period, runs[i]));
                    }
                }
            }
            found.sort_unstable();
            out.extend(
                found
                    .into_iter()
                    .map(|(i, period, ext)| occurrence(w, i, period, ext)),
            );
        }
    }
    Ok(out)
}

/// Occurrences of `v·v̄·v[..f]` with `min_frac ≤ f ≤ |v|`, `f` maximal,
/// ordered by position then `|v|`.
pub fn find_complement_squares(w: &[Letter], p: u32, min_frac: usize) -> Result<Vec<ComplementSquare>> {
    check_digits(w, p)?;
    if min_frac == 0 {
        return Err(Error::InvalidArgument("min_frac must be at least 1".into()));
    }
    let bar = |c: Letter| b'0' + (p as u8 - 1) - (c - b'0');
    let n = w.len();
    let mut out = Vec::new();
    for i in 0..n {
        let mut m = min_frac;
        while i + 2 * m + min_frac <= n {
            if (0..m).all(|j| w[i + m + j] == bar(w[i + j])) {
                let tail = i + 2 * m;
                let mut f = 0;
                while f < m && tail + f < n && w[tail + f] == w[i + f] {
                    f += 1;
                }
                if f >= min_frac {
                    out.push(ComplementSquare {
                        position: i,
                        v: Word::from(&w[i..i + m]),
                        frac_len: f,
                    });
                }
            }
            m += 1;
        }
    }
    Ok(out)
}

/// A located subword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub position: usize,
    pub length: usize,
}

/// Leftmost longest overlap-free subword.
///
/// Overlap-freeness is inherited by subwords, so a sliding window works: the
/// left edge only ever moves past the start of the shortest overlap ending at
/// the current letter.
pub fn longest_overlap_free_subword(w: &[Letter]) -> Span {
    let mut best = Span { position: 0, length: 0 };
    let mut start = 0;
    for end in 0..w.len() {
        let mut period = 1;
        while end >= 2 * period && end - 2 * period >= start {
            let s = end - 2 * period;
            if (0..=period).all(|j| w[s + j] == w[s + j + period]) {
                start = s + 1;
                break;
            }
            period += 1;
        }
        let length = end + 1 - start;
        if length > best.length {
            best = Span { position: start, length };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const TM16: &[u8] = b"0110100110010110";

    fn occ(position: usize, period: &str, whole_repeats: usize, frac_len: usize) -> RepetitionOccurrence {
        RepetitionOccurrence {
            position,
            period_word: Word::from(period),
            whole_repeats,
            frac_len,
        }
    }

    #[test]
    fn overlaps() {
        assert!(find_overlaps(TM16, 10).is_empty());
        let o = find_overlaps(b"01010", 10);
        assert_eq!(o, vec![OverlapOccurrence { position: 0, u: b'0', x: Word::from("1") }]);
        let o = find_overlaps(b"000", 10);
        assert_eq!(o, vec![OverlapOccurrence { position: 0, u: b'0', x: Word::new() }]);
        assert_eq!(o[0].pattern().as_str(), "000");
    }

    #[test]
    fn overlap_order_and_limit() {
        let w = b"0000010101";
        let all = find_overlaps(w, usize::MAX);
        let keys: Vec<(usize, usize)> = all.iter().map(|o| (o.position, o.period())).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(find_overlaps(w, 2), all[..2].to_vec());
        assert_eq!(find_overlaps_with(w, 3, Strategy::Lce), all[..3].to_vec());
        assert!(find_overlaps(w, 0).is_empty());
    }

    #[test]
    fn overlap_freeness() {
        assert!(is_overlap_free(TM16));
        assert!(!is_overlap_free(b"0101010"));
        assert!(is_overlap_free(b""));
    }

    #[test]
    fn fractional_squares() {
        let found = find_fractional_squares(b"0101010", 1, Squares::Three).unwrap();
        assert!(found.contains(&occ(0, "01", 3, 1)));
        assert!(found.contains(&occ(2, "01", 2, 1)));
        for o in &found {
            assert!(o.matches(b"0101010"), "{o:?}");
        }
        assert!(find_fractional_squares(b"011011", 1, Squares::Three).unwrap().is_empty());
        assert!(find_fractional_squares(b"aa", 1, Squares::Two).unwrap().is_empty());
        assert!(find_fractional_squares(b"aa", 0, Squares::Two).is_err());
    }

    #[test]
    fn squares_two_reports_single_copy_extensions() {
        let found = find_fractional_squares(b"0110", 1, Squares::Two).unwrap();
        assert!(found.contains(&occ(0, "011", 1, 1)));
        assert!(!found.iter().any(|o| o.position == 1 && o.period() == 1));
    }

    #[test]
    fn complement_squares() {
        let found = find_complement_squares(b"12101", 3, 1).unwrap();
        assert!(found.contains(&ComplementSquare { position: 0, v: Word::from("12"), frac_len: 1 }));
        assert!(find_complement_squares(b"0110", 2, 1).unwrap().is_empty());
        let found = find_complement_squares(b"010", 2, 1).unwrap();
        assert_eq!(found, vec![ComplementSquare { position: 0, v: Word::from("0"), frac_len: 1 }]);
        assert!(find_complement_squares(b"013", 3, 1).is_err());
    }

    #[test]
    fn complement_square_as_repetition() {
        let c = ComplementSquare { position: 0, v: Word::from("12"), frac_len: 1 };
        let r = c.as_repetition(3).unwrap();
        assert_eq!(r, occ(0, "1210", 1, 1));
        assert!(r.matches(b"12101"));
        assert_eq!(r.window_len(), c.window_len());
    }

    #[test]
    fn longest_overlap_free() {
        assert_eq!(longest_overlap_free_subword(b"000111"), Span { position: 1, length: 4 });
        assert_eq!(longest_overlap_free_subword(TM16), Span { position: 0, length: 16 });
        assert_eq!(longest_overlap_free_subword(b"0"), Span { position: 0, length: 1 });
        assert_eq!(longest_overlap_free_subword(b""), Span { position: 0, length: 0 });
    }

    #[test]
    fn overlap_suffixes() {
        assert_eq!(overlap_suffix(b"0110100"), None);
        let o = overlap_suffix(b"1101010").unwrap();
        assert_eq!((o.position, o.pattern().as_str()), (2, "01010"));
        assert_eq!(overlap_suffix(b"1000").unwrap().position, 1);
    }
}
