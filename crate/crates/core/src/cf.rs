//! Continued fractions of rationals, partial quotients along the orbit
//! `x, px, p²x, …`, and the finite-rational sandwich check relating the
//! largest partial quotient to `min q·‖qy‖`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{pow, to_rational, BigRational};
use crate::error::{Error, Result};

/// `[a0; a1, a2, …]` in canonical form: the last quotient is at least 2
/// whenever the list is non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    pub quotients: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Evaluates the expansion back to a rational.
    pub fn value(&self) -> BigRational {
        let mut acc: Option<BigRational> = None;
        for a in self.quotients.iter().rev() {
            let term = BigRational::from_integer(a.clone());
            acc = Some(match acc {
                None => term,
                Some(tail) => term + tail.recip(),
            });
        }
        let a0 = BigRational::from_integer(self.a0.clone());
        match acc {
            None => a0,
            Some(tail) => a0 + tail.recip(),
        }
    }

    /// Convergents `p_i/q_i` for `i = 0..=len`.
    pub fn convergents(&self) -> Vec<BigRational> {
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (self.a0.clone(), BigInt::one());
        let mut out = vec![BigRational::new(p.clone(), q.clone())];
        for a in &self.quotients {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push(BigRational::new(p.clone(), q.clone()));
        }
        out
    }

    /// Largest `a_i` with `i ≥ 1` and its leftmost index.
    pub fn max_quotient(&self) -> Option<(usize, &BigInt)> {
        let mut best: Option<(usize, &BigInt)> = None;
        for (i, a) in self.quotients.iter().enumerate() {
            if best.is_none_or(|(_, b)| a > b) {
                best = Some((i + 1, a));
            }
        }
        best
    }
}

impl std::fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}", self.a0)?;
        for (i, a) in self.quotients.iter().enumerate() {
            f.write_str(if i == 0 { "; " } else { ", " })?;
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Euclidean expansion with floor division; the final quotient of a
/// non-integer is automatically at least 2.
pub fn cf_expand(x: &BigRational) -> ContinuedFraction {
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let (a0, r) = num.div_mod_floor(&den);
    let mut quotients = Vec::new();
    num = den;
    den = r;
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        quotients.push(a);
        num = den;
        den = r;
    }
    ContinuedFraction { a0, quotients }
}

/// One `(k, i, a_{i,k})` entry of the orbit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub k: usize,
    pub i: usize,
    #[serde(with = "bigint_string")]
    pub a: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMax {
    #[serde(with = "option_bigint_string")]
    pub max_q: Option<BigInt>,
    pub attained_at: Option<(usize, usize)>,
}

/// All partial quotients `a_{i,k}`, `i ≥ 1`, of `p^k x` for `0 ≤ k ≤ max_k`.
pub fn orbit_table(x: &BigRational, p: u32, max_k: usize) -> Vec<OrbitRow> {
    let mut rows = Vec::new();
    let mut cur = x.clone();
    let scale = BigRational::from_integer(BigInt::from(p));
    for k in 0..=max_k {
        let cf = cf_expand(&cur);
        rows.extend(cf.quotients.into_iter().enumerate().map(|(i, a)| OrbitRow { k, i: i + 1, a }));
        cur *= &scale;
    }
    rows
}

/// Largest partial quotient over the orbit, first attainment in `(k, i)`
/// order. Orbit points that are integers contribute nothing.
pub fn orbit_max_quotient(x: &BigRational, p: u32, max_k: usize) -> OrbitMax {
    let mut best: Option<OrbitRow> = None;
    for row in orbit_table(x, p, max_k) {
        if best.as_ref().is_none_or(|b| row.a > b.a) {
            best = Some(row);
        }
    }
    OrbitMax {
        max_q: best.as_ref().map(|b| b.a.clone()),
        attained_at: best.map(|b| (b.k, b.i)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichCheck {
    #[serde(with = "bigint_string")]
    pub sup_pq: BigInt,
    #[serde(with = "crate::arithmetic::rational_string")]
    pub min_quality: BigRational,
    pub argmin_q: u64,
    #[serde(with = "crate::arithmetic::rational_string")]
    pub lower: BigRational,
    #[serde(with = "crate::arithmetic::rational_string")]
    pub upper: BigRational,
    pub holds: bool,
}

/// Checks `1/(sup+2) ≤ min_q q·‖qy‖ ≤ 1/sup` for a rational `y = a/b` in
/// `(0, 1)`. With `exclude_exact` the scan is `1 ≤ q < b`; otherwise it
/// also includes `q = b`, which gives 0.
pub fn sandwich_check(y: &BigRational, exclude_exact: bool) -> Result<SandwichCheck> {
    if !y.is_positive() || *y >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("{y} is not in (0, 1)")));
    }
    let a = y.numer().to_biguint().expect("positive numerator");
    let b = y.denom().to_biguint().expect("positive denominator");
    let last = if exclude_exact { &b - 1u32 } else { b.clone() };
    let last = last
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("denominator {b} is too large to scan")))?;

    // q·‖q a/b‖ = q·min(r, b-r)/b with r = q·a mod b; compare numerators.
    let mut best: Option<(BigUint, u64)> = None;
    let mut r = BigUint::zero();
    for q in 1..=last {
        r += &a;
        if r >= b {
            r -= &b;
        }
        let dist = if &r + &r <= b { r.clone() } else { &b - &r };
        let value = dist * q;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, q));
        }
    }
    let (num, argmin_q) = best.expect("b ≥ 2 leaves at least one q");
    let min_quality = to_rational(&num) / to_rational(&b);

    let cf = cf_expand(y);
    let sup_pq = cf
        .max_quotient()
        .map(|(_, a)| a.clone())
        .expect("non-integers have partial quotients");
    let lower = BigRational::new(BigInt::one(), &sup_pq + 2);
    let upper = BigRational::new(BigInt::one(), sup_pq.clone());
    let holds = lower <= min_quality && min_quality <= upper;
    Ok(SandwichCheck {
        sup_pq,
        min_quality,
        argmin_q,
        lower,
        upper,
        holds,
    })
}

/// `p^k x` for display and tests.
pub fn orbit_point(x: &BigRational, p: u32, k: usize) -> BigRational {
    x * to_rational(&pow(p, k))
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod option_bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}
