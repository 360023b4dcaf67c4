//! Certificates of the form `q·‖q·p^k·x‖ < p^(-s)` read off a digit window,
//! their combinatorial verification, and an interval-exact brute force used
//! as an independent oracle.
//!
//! If `{p^k x}` starts with `w^r w'` (total length `L`) then it agrees on `L`
//! digits with the purely periodic number `w⁺/(p^m - 1) = a/q`, so
//! `q·‖q·p^k·x‖ ≤ q²·p^(-L)`. A `square3` certificate uses `q < p^m`, giving
//! exponent `L - 2m`. A `gcd` certificate uses `q < p^ell` from
//! [`gcd_bound`] and is scored `m·(r - 1) + f - 2·ell`; the sharper
//! `L - 2·ell` is available from [`PlcCertificate::sharp_exponent`].

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{biguint_string, check_base, check_digits, gcd_bound, inverse_power, pow, rational_string, BigRational};
use crate::error::{Error, Result};
use crate::repetitions::{find_complement_squares, find_fractional_squares_with, RepetitionOccurrence, Squares, Strategy};
use crate::words::{Word, WordStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Square3,
    Gcd,
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertificateKind::Square3 => "square3",
            CertificateKind::Gcd => "gcd",
        })
    }
}

impl std::str::FromStr for CertificateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square3" => Ok(CertificateKind::Square3),
            "gcd" => Ok(CertificateKind::Gcd),
            _ => Err(Error::InvalidArgument(format!("unknown certificate kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlcCertificate {
    pub p: u32,
    pub kind: CertificateKind,
    pub k: usize,
    #[serde(with = "biguint_string")]
    pub q: BigUint,
    pub period: Word,
    pub repeats: usize,
    pub frac_len: usize,
    pub s: i64,
    #[serde(with = "rational_string")]
    pub bound: BigRational,
    pub vacuous: bool,
}

impl PlcCertificate {
    pub fn occurrence(&self) -> RepetitionOccurrence {
        RepetitionOccurrence {
            position: self.k,
            period_word: self.period.clone(),
            whole_repeats: self.repeats,
            frac_len: self.frac_len,
        }
    }

    pub fn window_len(&self) -> usize {
        self.repeats * self.period.len() + self.frac_len
    }

    /// Letters a prefix needs before the window can be checked.
    pub fn required_len(&self) -> usize {
        self.k + self.window_len()
    }

    /// `L - 2m` for square3, `L - 2·ell` for gcd.
    pub fn sharp_exponent(&self) -> Result<i64> {
        let ell = match self.kind {
            CertificateKind::Square3 => self.period.len(),
            CertificateKind::Gcd => gcd_bound(&self.period, self.p)?.ell,
        };
        Ok(self.window_len() as i64 - 2 * ell as i64)
    }
}

fn score(kind: CertificateKind, occ: &RepetitionOccurrence, ell: usize) -> i64 {
    let m = occ.period() as i64;
    let r = occ.whole_repeats as i64;
    let f = occ.frac_len as i64;
    match kind {
        CertificateKind::Square3 => (r - 2) * m + f,
        CertificateKind::Gcd => m * (r - 1) + f - 2 * ell as i64,
    }
}

fn build(occ: &RepetitionOccurrence, p: u32, kind: CertificateKind) -> Result<PlcCertificate> {
    let needed = match kind {
        CertificateKind::Square3 => 2,
        CertificateKind::Gcd => 1,
    };
    if occ.whole_repeats < needed {
        return Err(Error::InvalidArgument(format!(
            "{kind} certificates need at least {needed} full copies, got {}",
            occ.whole_repeats
        )));
    }
    let g = gcd_bound(&occ.period_word, p)?;
    let s = score(kind, occ, g.ell);
    Ok(PlcCertificate {
        p,
        kind,
        k: occ.position,
        q: g.q_max,
        period: occ.period_word.clone(),
        repeats: occ.whole_repeats,
        frac_len: occ.frac_len,
        s,
        bound: inverse_power(p, s),
        vacuous: s <= 0,
    })
}

/// Builds a certificate after re-reading the occurrence from `w`.
pub fn certificate_from_occurrence(
    w: &[u8],
    occ: &RepetitionOccurrence,
    p: u32,
    kind: CertificateKind,
) -> Result<PlcCertificate> {
    check_base(p)?;
    check_digits(&occ.period_word, p)?;
    if !occ.matches(w) {
        return Err(Error::OccurrenceMismatch(format!(
            "{}^{}+{} at {} does not occur",
            occ.period_word, occ.whole_repeats, occ.frac_len, occ.position
        )));
    }
    build(occ, p, kind)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub combinatorial_ok: bool,
    /// `q`, `s`, `bound` and `vacuous` agree with a fresh recomputation.
    pub consistent: bool,
    pub window_checked: usize,
    #[serde(with = "option_rational_string")]
    pub guaranteed_bound: Option<BigRational>,
}

/// Digit-only check: when it passes, `cert.bound` bounds
/// `quality(q, k, p, x)` for every `x` whose expansion extends `prefix`.
pub fn verify_certificate(prefix: &[u8], cert: &PlcCertificate, p: u32) -> Result<Verification> {
    check_base(p)?;
    let need = cert.required_len();
    if prefix.len() < need {
        return Err(Error::PrefixTooShort { need, have: prefix.len() });
    }
    let occ = cert.occurrence();
    let consistent = cert.p == p
        && check_digits(&cert.period, p).is_ok()
        && build(&occ, p, cert.kind).is_ok_and(|fresh| fresh == *cert);
    let window_ok = occ.matches(prefix);
    let ok = window_ok && consistent;
    Ok(Verification {
        combinatorial_ok: ok,
        consistent,
        window_checked: need,
        guaranteed_bound: ok.then(|| cert.bound.clone()),
    })
}

/// Exact enclosure of `q·‖q·p^k·x‖` over `x ∈ [A/D, (A+1)/D]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityInterval {
    #[serde(with = "rational_string")]
    pub lo: BigRational,
    #[serde(with = "rational_string")]
    pub hi: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceMin {
    #[serde(with = "biguint_string")]
    pub q: BigUint,
    pub k: usize,
    pub value_interval: QualityInterval,
}

/// Numerators over `2D` of the min and max of `‖t/D‖` for
/// `t ∈ [r, r + c]`, with `0 ≤ r < D`.
///
/// Inside an interval free of integers the distance is maximal in the middle
/// and minimal at an endpoint; inside one free of half-integers the reverse.
fn distance_range(r: &BigUint, c: &BigUint, d: &BigUint) -> (BigUint, BigUint) {
    let end = r + c;
    let dist2 = |t: &BigUint| {
        let t = t % d;
        let u = d - &t;
        (if t <= u { t } else { u }) * 2u32
    };
    let (dr, de) = (dist2(r), dist2(&end));
    let min2 = if r.is_zero() || &end >= d {
        BigUint::zero()
    } else {
        dr.clone().min(de.clone())
    };
    // first odd multiple of D/2 at or after r, doubled
    let half2 = if r + r <= *d { d.clone() } else { d * 3u32 };
    let max2 = if half2 <= &end + &end { d.clone() } else { dr.max(de) };
    (min2, max2)
}

fn interval_from(q: &BigUint, r: &BigUint, c: &BigUint, d: &BigUint) -> QualityInterval {
    let (min2, max2) = distance_range(r, c, d);
    let den = BigInt::from(d * 2u32);
    QualityInterval {
        lo: BigRational::new(BigInt::from(q * min2), den.clone()),
        hi: BigRational::new(BigInt::from(q * max2), den),
    }
}

fn digits_integer(prefix: &[u8], p: u32) -> Result<BigUint> {
    check_digits(prefix, p)?;
    let mut a = BigUint::zero();
    for &c in prefix {
        a = a * p + u32::from(c - b'0');
    }
    Ok(a)
}

/// The enclosure of `q·‖q·p^k·x‖` for `x` extending `prefix`.
pub fn quality_interval(prefix: &[u8], p: u32, q: &BigUint, k: usize) -> Result<QualityInterval> {
    check_base(p)?;
    let a = digits_integer(prefix, p)?;
    let d = pow(p, prefix.len());
    let c = q * pow(p, k);
    let r = (&c * &a) % &d;
    Ok(interval_from(q, &r, &c, &d))
}

/// Minimizes the upper end of the enclosure over `1 ≤ q ≤ Q`, `0 ≤ k ≤ K`,
/// ties to smaller `k`, then smaller `q`.
pub fn brute_force_min(prefix: &[u8], p: u32, max_q: u64, max_k: usize) -> Result<BruteForceMin> {
    check_base(p)?;
    if max_q == 0 {
        return Err(Error::InvalidArgument("Q must be at least 1".into()));
    }
    let a = digits_integer(prefix, p)?;
    let d = pow(p, prefix.len());
    // all upper ends share the denominator 2D, so numerators compare directly
    let mut best: Option<(BigUint, u64, usize, BigUint, BigUint)> = None;
    for k in 0..=max_k {
        let pk = pow(p, k);
        let step = (&pk * &a) % &d;
        let mut r = BigUint::zero();
        let mut c = BigUint::zero();
        for q in 1..=max_q {
            r += &step;
            if r >= d {
                r -= &d;
            }
            c += &pk;
            let hi = distance_range(&r, &c, &d).1 * q;
            if best.as_ref().is_none_or(|b| hi < b.0) {
                best = Some((hi, q, k, r.clone(), c.clone()));
            }
        }
    }
    let (_, q, k, r, c) = best.expect("Q ≥ 1 gives a candidate");
    let q = BigUint::from(q);
    Ok(BruteForceMin {
        value_interval: interval_from(&q, &r, &c, &d),
        q,
        k,
    })
}

/// Scans `prefix(depth)` for `w w w^δ` (square3) and `w w^δ` or
/// `v v̄ v^δ` (gcd) occurrences and keeps certificates with `s ≥ target_s`,
/// best first.
pub fn scan_and_certify(stream: &WordStream, p: u32, depth: usize, target_s: i64) -> Result<Vec<PlcCertificate>> {
    check_base(p)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let prefix = stream.try_prefix(depth)?;
    check_digits(&prefix, p)?;
    certify_prefix(&prefix, p, target_s)
}

/// [`scan_and_certify`] on an explicit prefix.
pub fn certify_prefix(prefix: &[u8], p: u32, target_s: i64) -> Result<Vec<PlcCertificate>> {
    let mut out = Vec::new();
    for occ in find_fractional_squares_with(prefix, 1, Squares::Three, Strategy::Lce)? {
        out.push(build(&occ, p, CertificateKind::Square3)?);
    }
    let mut gcd_occ = find_fractional_squares_with(prefix, 1, Squares::Two, Strategy::Lce)?;
    for sq in find_complement_squares(prefix, p, 1)? {
        gcd_occ.push(sq.as_repetition(p)?);
    }
    gcd_occ.sort_by(|a, b| {
        (a.position, a.period())
            .cmp(&(b.position, b.period()))
            .then_with(|| b.window_len().cmp(&a.window_len()))
    });
    gcd_occ.dedup();
    for occ in gcd_occ {
        out.push(build(&occ, p, CertificateKind::Gcd)?);
    }
    out.retain(|c| c.s >= target_s);
    out.sort_by(|a, b| {
        b.s.cmp(&a.s)
            .then(a.kind.cmp(&b.kind))
            .then(a.k.cmp(&b.k))
            .then(a.period.len().cmp(&b.period.len()))
            .then(a.period.cmp(&b.period))
            .then(b.repeats.cmp(&a.repeats))
            .then(b.frac_len.cmp(&a.frac_len))
    });
    out.dedup();
    Ok(out)
}

mod option_rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arithmetic::{format_rational, parse_rational, BigRational};

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{prefix_value, quality};

    fn occ(position: usize, period: &str, repeats: usize, frac_len: usize) -> RepetitionOccurrence {
        RepetitionOccurrence {
            position,
            period_word: Word::from(period),
            whole_repeats: repeats,
            frac_len,
        }
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn square3_from_occurrence() {
        let c = certificate_from_occurrence(b"0101010", &occ(0, "01", 2, 1), 2, CertificateKind::Square3).unwrap();
        assert_eq!((c.k, c.q.clone(), c.s, c.bound.clone(), c.vacuous), (0, BigUint::from(3u32), 1, r(1, 2), false));

        let c = certificate_from_occurrence(b"11", &occ(0, "1", 2, 0), 2, CertificateKind::Square3).unwrap();
        assert_eq!((c.q.clone(), c.s, c.bound.clone(), c.vacuous), (BigUint::from(1u32), 0, r(1, 1), true));
    }

    #[test]
    fn gcd_from_occurrence() {
        let c = certificate_from_occurrence(b"12101", &occ(0, "1210", 1, 1), 3, CertificateKind::Gcd).unwrap();
        assert_eq!((c.q.clone(), c.s, c.vacuous), (BigUint::from(5u32), -3, true));
        assert_eq!(c.bound, r(27, 1));
        assert_eq!(c.sharp_exponent().unwrap(), 1);

        let c = certificate_from_occurrence(b"0000", &occ(0, "00", 2, 0), 2, CertificateKind::Gcd).unwrap();
        assert_eq!(c.q, BigUint::from(1u32));
    }

    #[test]
    fn occurrence_errors() {
        let e = certificate_from_occurrence(b"0111010", &occ(0, "01", 2, 1), 2, CertificateKind::Square3);
        assert!(matches!(e, Err(Error::OccurrenceMismatch(_))));
        let e = certificate_from_occurrence(b"0101", &occ(0, "01", 1, 1), 2, CertificateKind::Square3);
        assert!(matches!(e, Err(Error::InvalidArgument(_))));
        let e = certificate_from_occurrence(b"0202", &occ(0, "02", 2, 0), 2, CertificateKind::Gcd);
        assert!(e.is_err());
    }

    #[test]
    fn verification() {
        let c = certificate_from_occurrence(b"0101010", &occ(0, "01", 3, 1), 2, CertificateKind::Square3).unwrap();
        assert_eq!(c.s, 3);
        let v = verify_certificate(b"0101010", &c, 2).unwrap();
        assert!(v.combinatorial_ok);
        assert_eq!(v.window_checked, 7);
        assert_eq!(v.guaranteed_bound, Some(r(1, 8)));

        assert!(!verify_certificate(b"0101011", &c, 2).unwrap().combinatorial_ok);
        assert!(matches!(
            verify_certificate(b"010", &c, 2),
            Err(Error::PrefixTooShort { need: 7, have: 3 })
        ));

        let mut forged = c.clone();
        forged.s = 10;
        let v = verify_certificate(b"0101010", &forged, 2).unwrap();
        assert!(!v.combinatorial_ok && !v.consistent);
    }

    #[test]
    fn brute_force_one_third() {
        let prefix = "01".repeat(10);
        let b = brute_force_min(prefix.as_bytes(), 2, 3, 0).unwrap();
        assert_eq!((b.q.clone(), b.k), (BigUint::from(3u32), 0));
        assert!(b.value_interval.hi <= r(3, 1 << 19));
    }

    #[test]
    fn brute_force_single_candidate() {
        for n in 1..6 {
            let prefix = format!("1{}", "0".repeat(n - 1));
            let b = brute_force_min(prefix.as_bytes(), 2, 1, 0).unwrap();
            assert_eq!(b.q, BigUint::from(1u32));
            assert_eq!(b.value_interval.hi, r(1, 2));
            assert!(b.value_interval.lo <= r(1, 2));
        }
    }

    #[test]
    fn interval_encloses_exact_quality() {
        let prefix = b"0110100110";
        for q in 1u32..20 {
            for k in 0..4 {
                let iv = quality_interval(prefix, 2, &BigUint::from(q), k).unwrap();
                for tail in ["", "0", "1", "0110", "1111111", "010101"] {
                    let mut w = prefix.to_vec();
                    w.extend_from_slice(tail.as_bytes());
                    let v = quality(&BigUint::from(q), k, 2, &prefix_value(&w, 2).unwrap());
                    assert!(iv.lo <= v && v <= iv.hi, "q={q} k={k} tail={tail}");
                }
            }
        }
    }

    #[test]
    fn scan_periodic() {
        let stream = WordStream::periodic(Word::from("011")).unwrap();
        let certs = scan_and_certify(&stream, 2, 30, 4).unwrap();
        let best = &certs[0];
        assert!(["011", "110", "101"].contains(&best.period.as_str()));
        assert!(best.s >= 30 / 3 - 3);
        let deeper = scan_and_certify(&stream, 2, 60, 4).unwrap();
        assert!(deeper[0].s > best.s);
        assert!(certs.windows(2).all(|w| w[0].s >= w[1].s));
    }

    #[test]
    fn scan_thue_morse_has_no_square3() {
        let certs = scan_and_certify(&WordStream::thue_morse(), 2, 64, 1).unwrap();
        assert!(certs.iter().all(|c| c.kind == CertificateKind::Gcd));
    }

    #[test]
    fn scan_complement_square() {
        let stream = WordStream::eventually_periodic(Word::from("1210"), Word::from("1")).unwrap();
        let certs = scan_and_certify(&stream, 3, 6, -3).unwrap();
        assert!(certs
            .iter()
            .any(|c| c.kind == CertificateKind::Gcd && c.period.as_str() == "1210" && c.frac_len == 1));
        assert!(scan_and_certify(&stream, 3, 6, 0)
            .unwrap()
            .iter()
            .all(|c| c.period.as_str() != "1210"));
    }

    #[test]
    fn certificate_json_shape() {
        let c = certificate_from_occurrence(b"0101010", &occ(0, "01", 2, 1), 2, CertificateKind::Square3).unwrap();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "p": 2, "kind": "square3", "k": 0, "q": "3", "period": "01", "repeats": 2,
                "frac_len": 1, "s": 1, "bound": "1/2", "vacuous": false
            })
        );
        let back: PlcCertificate = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
    }
}
