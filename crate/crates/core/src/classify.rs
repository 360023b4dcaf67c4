//! Binary pure morphic words sorted into Thue–Morse (P1), containing
//! arbitrarily high powers (P2), or containing an overlap on a growing
//! letter (P3); the growth predicate `|φⁿ(a)| → ∞`; sub-alphabet
//! restriction; finite recurrence and prefix-distance tools.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{inverse_power, BigRational};
use crate::error::{Error, Result};
use crate::repetitions::{find_overlaps, OverlapOccurrence};
use crate::tm::{thue_morse_prefix, TmReference};
use crate::words::{complement, Letter, Morphism, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Mortal,
    Bounded,
    Growing,
}

/// Per-letter growth. Mortal letters are erased from every image; a
/// remaining letter grows iff it reaches a letter on a cycle whose reduced
/// image has at least two letters.
pub fn growth_classes(m: &Morphism) -> BTreeMap<Letter, Growth> {
    let letters = m.alphabet().letters();
    let n = letters.len();
    let mortal = m.mortal_mask();
    let idx: HashMap<Letter, usize> = letters.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let reduced: Vec<Vec<usize>> = letters
        .iter()
        .map(|&c| {
            m.image(c)
                .expect("declared")
                .iter()
                .map(|d| idx[d])
                .filter(|&j| !mortal[j])
                .collect()
        })
        .collect();

    // reach[i][j]: j reachable from i in one or more steps
    let mut reach = vec![vec![false; n]; n];
    for (i, image) in reduced.iter().enumerate() {
        for &j in image {
            reach[i][j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let pumping: Vec<bool> = (0..n).map(|c| reach[c][c] && reduced[c].len() >= 2).collect();

    letters
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let class = if mortal[i] {
                Growth::Mortal
            } else if pumping[i] || (0..n).any(|j| reach[i][j] && pumping[j]) {
                Growth::Growing
            } else {
                Growth::Bounded
            };
            (c, class)
        })
        .collect()
}

/// `sup_n |φⁿ(a)| = ∞`.
pub fn grows_unboundedly(m: &Morphism, a: Letter) -> Result<bool> {
    growth_classes(m)
        .get(&a)
        .map(|&g| g == Growth::Growing)
        .ok_or(Error::UnknownLetter(a as char))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerCase {
    /// `φ(0) = 0ⁿ⁺¹`, so `w = 0^ω`.
    #[serde(rename = "u=0^n")]
    AllZeros,
    /// `φ(1) = ε`, so `w = φ(0)^ω`.
    CaseI,
    /// `φ(1) = 1ⁿ` with `n ≥ 2`.
    #[serde(rename = "CaseII-1^n")]
    CaseIIOnes,
    /// `φ(1) = 1` and `φ(0)` ends in `1`: the run of trailing ones grows.
    #[serde(rename = "CaseII-tail")]
    CaseIITail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapCase {
    /// `φ(1) = 1` and `φ(0)` ends in `0`: `01ᵏ01ᵏ0` occurs.
    CaseII,
    /// `φ(1)` contains `0`: the morphism is primitive.
    CaseIII,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Classification {
    /// Prefix agrees with `M` or `M̃` and is overlap-free up to `depth`. The
    /// infinite claim rests on the uniqueness of `M`, `M̃` among overlap-free
    /// pure morphic words.
    P1 { matched: TmReference, depth: usize },
    /// `witness^j` occurs in the prefix for every `j ≤ confirmed_powers`.
    P2 {
        witness: Word,
        case: PowerCase,
        confirmed_powers: usize,
    },
    P3 {
        overlap: OverlapOccurrence,
        #[serde(with = "letter")]
        growing_letter: Letter,
        case: OverlapCase,
    },
    #[serde(rename = "UNRESOLVED")]
    Unresolved { depth: usize },
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::P1 { .. } => "P1",
            Classification::P2 { .. } => "P2",
            Classification::P3 { .. } => "P3",
            Classification::Unresolved { .. } => "UNRESOLVED",
        }
    }
}

/// Powers a P2 witness must show in the prefix.
pub const CONFIRM_POWERS: usize = 3;

fn swap(c: Letter) -> Letter {
    if c == b'0' {
        b'1'
    } else {
        b'0'
    }
}

fn swap_word(w: &[Letter]) -> Word {
    complement(w, 2).expect("binary word")
}

fn check_binary_morphism(m: &Morphism) -> Result<()> {
    let mut letters = m.alphabet().letters().to_vec();
    letters.sort_unstable();
    if letters == b"01" {
        Ok(())
    } else {
        Err(Error::NotBinary)
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Classifies `φ^ω(a)` following the case split `φ(0) = 0u`, `φ(1) = v`
/// (with the letters swapped when `a = 1`), confirming every claim on the
/// first `depth` letters.
pub fn classify_binary(m: &Morphism, a: Letter, depth: usize) -> Result<Classification> {
    check_binary_morphism(m)?;
    if !m.is_prolongable(a) {
        return Err(Error::NotProlongable(a as char));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let flipped = a == b'1';
    let m0 = if flipped {
        Morphism::new([
            (b'0', swap_word(m.image(b'1').expect("binary"))),
            (b'1', swap_word(m.image(b'0').expect("binary"))),
        ])?
    } else {
        m.clone()
    };
    let result = classify_from_zero(&m0, depth)?;
    Ok(if flipped { unflip(result) } else { result })
}

fn unflip(c: Classification) -> Classification {
    match c {
        Classification::P1 { matched, depth } => Classification::P1 {
            matched: match matched {
                TmReference::M => TmReference::Complement,
                TmReference::Complement => TmReference::M,
            },
            depth,
        },
        Classification::P2 { witness, case, confirmed_powers } => Classification::P2 {
            witness: swap_word(&witness),
            case,
            confirmed_powers,
        },
        Classification::P3 { overlap, growing_letter, case } => Classification::P3 {
            overlap: OverlapOccurrence {
                position: overlap.position,
                u: swap(overlap.u),
                x: swap_word(&overlap.x),
            },
            growing_letter: swap(growing_letter),
            case,
        },
        other => other,
    }
}

fn classify_from_zero(m: &Morphism, depth: usize) -> Result<Classification> {
    let image0 = m.image(b'0').expect("binary");
    let u = &image0[1..];
    let v = m.image(b'1').expect("binary");
    let prefix = m.fixed_point_prefix(b'0', depth)?;

    let power = |witness: Word, case: PowerCase| {
        let confirmed = contains(&prefix, &witness.repeat(CONFIRM_POWERS));
        confirmed.then_some(Classification::P2 {
            witness,
            case,
            confirmed_powers: CONFIRM_POWERS,
        })
    };
    let overlap = |case: OverlapCase, wanted: Option<Word>| -> Result<Option<Classification>> {
        let found = match wanted {
            Some(pattern) => prefix
                .windows(pattern.len())
                .position(|w| w == &pattern[..])
                .map(|position| OverlapOccurrence {
                    position,
                    u: pattern[0],
                    x: Word::from(&pattern[1..pattern.len() / 2]),
                }),
            None => find_overlaps(&prefix, 1).into_iter().next(),
        };
        match found {
            Some(o) if grows_unboundedly(m, o.u)? => Ok(Some(Classification::P3 {
                growing_letter: o.u,
                overlap: o,
                case,
            })),
            _ => Ok(None),
        }
    };

    let found = if u.iter().all(|&c| c == b'0') {
        power(Word::from("0"), PowerCase::AllZeros)
    } else if v.is_empty() {
        power(image0.clone(), PowerCase::CaseI)
    } else if v.iter().all(|&c| c == b'1') {
        if v.len() >= 2 {
            power(Word::from("1"), PowerCase::CaseIIOnes)
        } else if u.last() == Some(&b'1') {
            power(Word::from("1"), PowerCase::CaseIITail)
        } else {
            // u ends in 0: u = u'01ᵏ0 or 1ᵏ0, giving 01ᵏ01ᵏ0
            let k = u[..u.len() - 1].iter().rev().take_while(|&&c| c == b'1').count();
            let ones = "1".repeat(k);
            let pattern = Word::from(format!("0{ones}0{ones}0").as_str());
            overlap(OverlapCase::CaseII, Some(pattern))?
        }
    } else {
        match overlap(OverlapCase::CaseIII, None)? {
            Some(c) => Some(c),
            None if prefix == thue_morse_prefix(depth) => Some(Classification::P1 {
                matched: TmReference::M,
                depth,
            }),
            None => None,
        }
    };
    Ok(found.unwrap_or(Classification::Unresolved { depth }))
}

/// Every binary morphism with image lengths at most `max_len`, in a fixed
/// order (shorter images first, then lexicographic).
pub fn binary_morphisms(max_len: usize) -> Vec<Morphism> {
    let mut images = Vec::new();
    for len in 0..=max_len {
        for bits in 0..1u32 << len {
            let w: Word = (0..len)
                .map(|i| if bits >> (len - 1 - i) & 1 == 1 { b'1' } else { b'0' })
                .collect();
            images.push(w);
        }
    }
    let mut out = Vec::with_capacity(images.len() * images.len());
    for a in &images {
        for b in &images {
            out.push(Morphism::new([(b'0', a.clone()), (b'1', b.clone())]).expect("binary rules"));
        }
    }
    out
}

/// `φ` restricted to `B` when every image of a letter of `B` stays in `B*`.
pub fn restrict_to_subalphabet(m: &Morphism, sub: &[Letter]) -> Result<Option<Morphism>> {
    if let Some(&c) = sub.iter().find(|&&c| !m.alphabet().contains(c)) {
        return Err(Error::UnknownLetter(c as char));
    }
    let inside = |w: &Word| w.iter().all(|c| sub.contains(c));
    let rules: Vec<(Letter, Word)> = m
        .rules()
        .filter(|(c, _)| sub.contains(c))
        .map(|(c, w)| (c, w.clone()))
        .collect();
    if rules.iter().all(|(_, w)| inside(w)) {
        Ok(Some(Morphism::new(rules)?))
    } else {
        Ok(None)
    }
}

/// A window of the prefix missing one of its length-`n` subwords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceGap {
    pub subword: Word,
    pub window_start: usize,
    pub window_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recurrence {
    pub r_n: Option<usize>,
    /// A window of length `R_n - 1` that misses a subword, if `R_n > n`.
    pub witness_gap: Option<RecurrenceGap>,
}

/// Smallest `N` such that every length-`N` window of `prefix` contains
/// every length-`n` subword of `prefix`. The whole prefix is such a window,
/// so the answer always exists.
pub fn empirical_recurrence(prefix: &[Letter], n: usize) -> Result<Recurrence> {
    if n == 0 || n > prefix.len() {
        return Err(Error::InvalidArgument(format!(
            "subword length {n} must be in 1..={}",
            prefix.len()
        )));
    }
    let len = prefix.len();
    let mut occurrences: BTreeMap<&[Letter], Vec<usize>> = BTreeMap::new();
    for (i, w) in prefix.windows(n).enumerate() {
        occurrences.entry(w).or_default().push(i);
    }
    // a window [i, i+N) holds an occurrence j iff i ≤ j ≤ i + N - n
    let need = |pos: &[usize]| {
        let first = pos[0] + n;
        let last = len - pos[pos.len() - 1];
        let gap = pos.windows(2).map(|p| p[1] - p[0] + n - 1).max().unwrap_or(0);
        first.max(last).max(gap)
    };
    let (worst, r_n) = occurrences
        .iter()
        .map(|(w, pos)| (*w, need(pos)))
        .fold((&prefix[..n], n), |best, cur| if cur.1 > best.1 { cur } else { best });
    let witness_gap = (r_n > n).then(|| {
        let window_len = r_n - 1;
        let window_start = (0..=len - window_len)
            .find(|&i| !contains(&prefix[i..i + window_len], worst))
            .expect("a shorter window misses the worst subword");
        RecurrenceGap {
            subword: Word::from(worst),
            window_start,
            window_len,
        }
    });
    Ok(Recurrence { r_n: Some(r_n), witness_gap })
}

/// `2^(-|lcp(x, y)|)`, and `0` for equal words.
pub fn word_distance(x: &[Letter], y: &[Letter]) -> BigRational {
    if x == y {
        return BigRational::zero();
    }
    let lcp = x.iter().zip(y).take_while(|(a, b)| a == b).count();
    inverse_power(2, lcp as i64)
}

/// `1` as a rational, the diameter of the prefix metric.
pub fn max_distance() -> BigRational {
    BigRational::from_integer(BigInt::one())
}

mod letter {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_morphism;

    fn m(s: &str) -> Morphism {
        parse_morphism(s).unwrap()
    }

    #[test]
    fn growth() {
        let tm = Morphism::thue_morse();
        assert!(grows_unboundedly(&tm, b'0').unwrap());
        let phi = m("0->01;1->1");
        assert!(!grows_unboundedly(&phi, b'1').unwrap());
        assert!(grows_unboundedly(&phi, b'0').unwrap());
        let classes = growth_classes(&m("0->0z1;1->1;z->"));
        assert_eq!(classes[&b'z'], Growth::Mortal);
        assert_eq!(classes[&b'1'], Growth::Bounded);
        assert_eq!(classes[&b'0'], Growth::Growing);
        let chain = m("a->bb;b->c;c->b");
        assert_eq!(growth_classes(&chain)[&b'a'], Growth::Bounded);
        assert!(grows_unboundedly(&chain, b'q').is_err());
    }

    #[test]
    fn lemma_examples() {
        let c = classify_binary(&Morphism::thue_morse(), b'0', 1 << 12).unwrap();
        assert_eq!(c, Classification::P1 { matched: TmReference::M, depth: 4096 });
        let c = classify_binary(&Morphism::thue_morse(), b'1', 256).unwrap();
        assert_eq!(c, Classification::P1 { matched: TmReference::Complement, depth: 256 });

        let c = classify_binary(&m("0->010;1->1"), b'0', 64).unwrap();
        match c {
            Classification::P3 { overlap, growing_letter, case } => {
                assert_eq!(overlap.pattern().as_str(), "01010");
                assert_eq!(growing_letter, b'0');
                assert_eq!(case, OverlapCase::CaseII);
            }
            other => panic!("{other:?}"),
        }

        let c = classify_binary(&m("0->010;1->"), b'0', 64).unwrap();
        assert_eq!(
            c,
            Classification::P2 { witness: "010".into(), case: PowerCase::CaseI, confirmed_powers: 3 }
        );
        // 1 is mortal, so φⁿ(0) = 01 for every n
        assert!(matches!(classify_binary(&m("0->01;1->"), b'0', 64), Err(Error::NotProlongable('0'))));
    }

    #[test]
    fn power_cases() {
        let tag = |s: &str, a: u8| classify_binary(&m(s), a, 512).unwrap();
        assert!(matches!(tag("0->00;1->1", b'0'), Classification::P2 { case: PowerCase::AllZeros, .. }));
        assert!(matches!(tag("0->01;1->11", b'0'), Classification::P2 { case: PowerCase::CaseIIOnes, .. }));
        assert!(matches!(tag("0->011;1->1", b'0'), Classification::P2 { case: PowerCase::CaseIITail, .. }));
        assert!(matches!(tag("0->0101;1->1", b'0'), Classification::P2 { case: PowerCase::CaseIITail, .. }));
        match tag("0->0;1->10", b'1') {
            Classification::P2 { witness, case, .. } => {
                assert_eq!((witness.as_str(), case), ("0", PowerCase::CaseIITail));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overlap_cases() {
        match classify_binary(&m("0->0110;1->1"), b'0', 512).unwrap() {
            Classification::P3 { overlap, case, .. } => {
                assert_eq!(overlap.pattern().as_str(), "0110110");
                assert_eq!(case, OverlapCase::CaseII);
            }
            other => panic!("{other:?}"),
        }
        match classify_binary(&m("0->001;1->10"), b'0', 512).unwrap() {
            Classification::P3 { case, growing_letter, .. } => {
                assert_eq!(case, OverlapCase::CaseIII);
                assert!(grows_unboundedly(&m("0->001;1->10"), growing_letter).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_errors() {
        assert!(matches!(classify_binary(&m("0->1;1->0"), b'0', 8), Err(Error::NotProlongable('0'))));
        assert!(matches!(classify_binary(&m("0->01;1->2;2->2"), b'0', 8), Err(Error::NotBinary)));
    }

    #[test]
    fn census_is_resolved() {
        let mut tags = BTreeMap::new();
        for phi in binary_morphisms(3) {
            for a in *b"01" {
                if phi.is_prolongable(a) {
                    let c = classify_binary(&phi, a, 1 << 12).unwrap();
                    assert_ne!(c.tag(), "UNRESOLVED", "{phi} from {}", a as char);
                    *tags.entry(c.tag()).or_insert(0) += 1;
                }
            }
        }
        assert_eq!(tags.get("P1"), Some(&2));
    }

    #[test]
    fn restriction() {
        let phi = m("0->01;1->12;2->2");
        let r = restrict_to_subalphabet(&phi, b"12").unwrap().unwrap();
        assert_eq!(r.to_string(), "1->12;2->2");
        assert!(restrict_to_subalphabet(&Morphism::thue_morse(), b"0").unwrap().is_none());
        assert_eq!(restrict_to_subalphabet(&phi, b"012").unwrap().unwrap(), phi);
        assert!(restrict_to_subalphabet(&phi, b"3").is_err());
    }

    #[test]
    fn recurrence() {
        let tm = thue_morse_prefix(16);
        let r = empirical_recurrence(&tm, 1).unwrap();
        assert_eq!(r.r_n, Some(3));
        let gap = r.witness_gap.unwrap();
        assert_eq!(gap.window_len, 2);
        assert!(!contains(&tm[gap.window_start..gap.window_start + 2], &gap.subword));

        assert_eq!(empirical_recurrence(b"0101", 2).unwrap().r_n, Some(3));
        assert_eq!(empirical_recurrence(b"0001", 1).unwrap().r_n, Some(4));
        let r = empirical_recurrence(b"0000", 2).unwrap();
        assert_eq!((r.r_n, r.witness_gap), (Some(2), None));
        assert!(empirical_recurrence(b"01", 3).is_err());
    }

    #[test]
    fn recurrence_matches_window_scan() {
        let word = thue_morse_prefix(40);
        for n in 1..6 {
            let subwords: Vec<&[u8]> = word.windows(n).collect();
            let naive = (n..=word.len())
                .find(|&len| word.windows(len).all(|win| subwords.iter().all(|s| contains(win, s))))
                .unwrap();
            assert_eq!(empirical_recurrence(&word, n).unwrap().r_n, Some(naive));
        }
    }

    #[test]
    fn distances() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(word_distance(b"01101", b"01110"), r(1, 8));
        assert_eq!(word_distance(b"0110", b"0110"), r(0, 1));
        assert_eq!(word_distance(b"0", b"1"), max_distance());
        assert_eq!(word_distance(b"01", b"011"), r(1, 4));
    }
}
