//! Arbitrary-precision rationals and the `"p/q"` text encoding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number; always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = |msg: &str| Error::Parse {
        line: 1,
        column: 1,
        msg: format!("{msg}: {s:?}"),
    };
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("invalid rational numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("invalid rational denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// `base^exp` for a possibly negative integer exponent. `base` must be nonzero
/// when `exp < 0`.
pub fn pow_i(base: &Rat, exp: i64) -> Rat {
    let mut acc = Rat::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

pub fn to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.numer()).ok()
}

pub(crate) fn big_to_i64(b: &BigInt) -> Option<i64> {
    i64::try_from(b).ok()
}

/// Least common multiple of the denominators and gcd of the numerators.
pub(crate) fn content_parts<'a>(coeffs: impl Iterator<Item = &'a Rat>) -> (BigInt, BigInt) {
    let mut l = BigInt::one();
    let mut g = BigInt::zero();
    for c in coeffs {
        l = l.lcm(c.denom());
        g = g.gcd(c.numer());
    }
    (g, l)
}
