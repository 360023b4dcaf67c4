//! Exact arithmetic on digit words.
//!
//! Digit words are read most significant digit first. Rationals are always
//! reduced; [`num_rational::Ratio`] maintains that invariant for us.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::words::{complement, Word};

/// Bases are limited to `2..=10` so every digit is one ASCII character.
pub fn check_base(p: u32) -> Result<()> {
    if (2..=10).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidBase(p))
    }
}

/// Value of a digit letter, checked against the base.
pub fn digit(c: u8, p: u32) -> Result<u32> {
    match c.checked_sub(b'0') {
        Some(d) if (d as u32) < p => Ok(d as u32),
        _ => Err(Error::DigitOutOfRange {
            letter: c as char,
            base: p,
        }),
    }
}

/// Checks that `w` is a digit word in base `p`.
pub fn check_digits(w: &[u8], p: u32) -> Result<()> {
    check_base(p)?;
    w.iter().try_for_each(|&c| digit(c, p).map(|_| ()))
}

pub fn pow(p: u32, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(p), e)
}

/// `p^(-s)` as an exact rational; `s` may be negative.
pub fn inverse_power(p: u32, s: i64) -> BigRational {
    let magnitude = BigInt::from(pow(p, s.unsigned_abs() as usize));
    if s >= 0 {
        BigRational::new(BigInt::one(), magnitude)
    } else {
        BigRational::from_integer(magnitude)
    }
}

pub fn to_rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// The integer whose base-`n` representation, leading zeros allowed, is `v`.
pub fn word_value(v: &[u8], n: u32) -> Result<BigUint> {
    check_base(n)?;
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut acc = BigUint::zero();
    for &c in v {
        acc = acc * n + digit(c, n)?;
    }
    Ok(acc)
}

/// The base-`n` representation of `a` without leading zeros (`"0"` for zero).
pub fn int_to_word(a: &BigUint, n: u32) -> Result<Word> {
    check_base(n)?;
    Ok(a.to_radix_be(n).into_iter().map(|d| b'0' + d).collect())
}

/// `Σ aᵢ p^(-i)` over the letters of `w`.
pub fn prefix_value(w: &[u8], p: u32) -> Result<BigRational> {
    check_digits(w, p)?;
    if w.is_empty() {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(
        BigInt::from(word_value(w, p)?),
        BigInt::from(pow(p, w.len())),
    ))
}

/// The rational whose base-`p` expansion is `w` repeated forever,
/// `(w)⁺ / (p^|w| - 1)`.
pub fn periodic_value(w: &[u8], p: u32) -> Result<BigRational> {
    let value = word_value(w, p)?;
    Ok(BigRational::new(
        BigInt::from(value),
        BigInt::from(pow(p, w.len()) - 1u32),
    ))
}

/// The denominator bound attached to a period word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdBound {
    pub m: usize,
    #[serde(with = "biguint_string")]
    pub d: BigUint,
    #[serde(with = "biguint_string")]
    pub q_max: BigUint,
    pub ell: usize,
}

/// `d = gcd(p^m - 1, w⁺)`, `q_max = (p^m - 1)/d` and the smallest `ell ≥ 1`
/// with `p^(ell-1) ≤ q_max ≤ p^ell`.
pub fn gcd_bound(w: &[u8], p: u32) -> Result<GcdBound> {
    let value = word_value(w, p)?;
    let modulus = pow(p, w.len()) - 1u32;
    // gcd(x, 0) = x, so an all-zero period gives q_max = 1.
    let d = modulus.gcd(&value);
    let q_max = &modulus / &d;
    let mut ell = 1;
    let mut bound = BigUint::from(p);
    while bound < q_max {
        bound *= p;
        ell += 1;
    }
    Ok(GcdBound {
        m: w.len(),
        d,
        q_max,
        ell,
    })
}

/// Fractional part `x - ⌊x⌋ ∈ [0, 1)`.
pub fn fract(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Distance to the nearest integer, `‖x‖ ∈ [0, 1/2]`.
pub fn dist_nearest_int(x: &BigRational) -> BigRational {
    let f = fract(x);
    let g = BigRational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

/// `q·‖q·p^k·x‖`.
pub fn quality(q: &BigUint, k: usize, p: u32, x: &BigRational) -> BigRational {
    let q = to_rational(q);
    let scaled = &q * to_rational(&pow(p, k)) * x;
    q * dist_nearest_int(&scaled)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementDivisibility {
    #[serde(with = "biguint_string")]
    pub value: BigUint,
    #[serde(with = "biguint_string")]
    pub divisor: BigUint,
    #[serde(with = "biguint_string")]
    pub quotient: BigUint,
}

/// `(v·v̄)⁺` is always a multiple of `p^|v| - 1`; returns the quotient.
pub fn complement_divisibility_check(v: &[u8], p: u32) -> Result<ComplementDivisibility> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut joined = Word::from(v);
    joined.extend_from_slice(&complement(v, p)?);
    let value = word_value(&joined, p)?;
    let divisor = pow(p, v.len()) - 1u32;
    let (quotient, rem) = value.div_rem(&divisor);
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "({joined})⁺ = {value} is not divisible by {divisor}"
        )));
    }
    Ok(ComplementDivisibility {
        value,
        divisor,
        quotient,
    })
}

/// Formats as `"num/den"`, always including the denominator.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("'{s}' is not a rational of the form num/den"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Positive-denominator representation check used by tests and verifiers.
pub fn is_reduced(x: &BigRational) -> bool {
    x.denom().is_positive() && x.numer().gcd(x.denom()).is_one()
}

/// Serde adapter: rationals as `"num/den"` strings.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: big integers as decimal strings.
pub mod biguint_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
