//! Exact rationals and p-adic valuations.
//!
//! Every scalar in the crate is a [`Rat`]; every valuation, slope and radius
//! exponent is an [`ExtVal`]. A radius `r = p^(-e)` is always carried as its
//! exponent `e`, so disk comparisons never leave exact arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number in canonical form.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let t = s.trim();
    let bad = || ArithError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => BigInt::from_str(t).map(Rat::from_integer).map_err(|_| bad()),
    }
}

/// Prints `"num"` for integers and `"num/den"` otherwise.
pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Deterministic primality test for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A rational prime, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ArithError::InvalidPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// Exponent of `p` in a nonzero integer; `None` for zero.
    pub fn val_int(self, n: &BigInt) -> Option<u64> {
        if n.is_zero() {
            return None;
        }
        let p = self.big();
        let mut m = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            m = q;
            v += 1;
        }
    }

    pub fn val_u64(self, n: u64) -> u64 {
        assert!(n != 0);
        let mut m = n;
        let mut v = 0;
        while m % self.0 == 0 {
            m /= self.0;
            v += 1;
        }
        v
    }

    /// The valuation `v_p(q)`, `+inf` at zero.
    pub fn val(self, q: &Rat) -> ExtVal {
        match self.val_int(q.numer()) {
            None => ExtVal::Inf,
            Some(vn) => {
                let vd = self.val_int(q.denom()).unwrap_or(0);
                ExtVal::from_int(vn as i64 - vd as i64)
            }
        }
    }

    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }
}

impl TryFrom<u64> for Prime {
    type Error = ArithError;
    fn try_from(p: u64) -> Result<Self, ArithError> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `v_p(q)` for a raw integer `p`, checking primality.
pub fn vp(q: &Rat, p: u64) -> Result<ExtVal, ArithError> {
    Ok(Prime::new(p)?.val(q))
}

/// A value in `Q ∪ {+inf}`. `Inf` sorts above every finite value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtVal {
    Fin(Rat),
    Inf,
}

impl ExtVal {
    pub fn from_int(n: i64) -> Self {
        ExtVal::Fin(rat(n))
    }

    pub fn zero() -> Self {
        ExtVal::from_int(0)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtVal::Inf)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtVal::Fin(q) => Some(q),
            ExtVal::Inf => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Multiplies by a rational scalar. Panics on `inf * s` with `s <= 0`.
    pub fn scale(&self, s: &Rat) -> Self {
        match self {
            ExtVal::Fin(q) => ExtVal::Fin(q * s),
            ExtVal::Inf => {
                assert!(s.is_positive(), "inf scaled by a non-positive factor");
                ExtVal::Inf
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtVal::Fin(q) => q.is_positive(),
            ExtVal::Inf => true,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtVal::Fin(q) => q.to_f64().unwrap_or(f64::NAN),
            ExtVal::Inf => f64::INFINITY,
        }
    }
}

impl From<Rat> for ExtVal {
    fn from(q: Rat) -> Self {
        ExtVal::Fin(q)
    }
}

impl PartialOrd for ExtVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtVal::Fin(a), ExtVal::Fin(b)) => a.cmp(b),
            (ExtVal::Fin(_), ExtVal::Inf) => Ordering::Less,
            (ExtVal::Inf, ExtVal::Fin(_)) => Ordering::Greater,
            (ExtVal::Inf, ExtVal::Inf) => Ordering::Equal,
        }
    }
}

impl Add for ExtVal {
    type Output = ExtVal;
    fn add(self, rhs: ExtVal) -> ExtVal {
        &self + &rhs
    }
}

impl<'a> Add<&'a ExtVal> for &'a ExtVal {
    type Output = ExtVal;
    fn add(self, rhs: &ExtVal) -> ExtVal {
        match (self, rhs) {
            (ExtVal::Fin(a), ExtVal::Fin(b)) => ExtVal::Fin(a + b),
            _ => ExtVal::Inf,
        }
    }
}

impl Neg for ExtVal {
    type Output = ExtVal;
    fn neg(self) -> ExtVal {
        match self {
            ExtVal::Fin(q) => ExtVal::Fin(-q),
            ExtVal::Inf => panic!("negating +inf"),
        }
    }
}

impl fmt::Display for ExtVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtVal::Fin(q) => f.write_str(&fmt_rat(q)),
            ExtVal::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtVal {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self, ArithError> {
        if s.trim() == "inf" {
            Ok(ExtVal::Inf)
        } else {
            parse_rat(s).map(ExtVal::Fin)
        }
    }
}

impl Serialize for ExtVal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtVal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn extval_min(x: &ExtVal, y: &ExtVal) -> ExtVal {
    x.clone().min(y.clone())
}

pub fn extval_add(x: &ExtVal, y: &ExtVal) -> ExtVal {
    x + y
}

/// `x / d`, the step used when a valuation is spread over `d` roots.
pub fn extval_scale(x: &ExtVal, d: u64) -> ExtVal {
    x.scale(&ratio(1, d as i64))
}

/// Serde helper: a `Rat` as its `"num/den"` string.
pub mod rat_str {
    use super::*;

    pub fn serialize<S: serde::Serializer>(q: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(q))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
