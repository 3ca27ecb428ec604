//! Rational functions kept as `scalar · ∏ base^exp` over pairwise coprime
//! primitive bases.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{gcd, parse_factored, MultiPoly};
use crate::rat::{format_rat, pow_i, Rat};

/// Refines primitive, normalized, nonconstant polynomials carrying exponent
/// vectors into pairwise coprime bases. Exponent vectors add up when bases
/// are split; the product `∏ base^exp[j]` is preserved for every slot `j`.
pub(crate) fn coprime_basis(items: Vec<(MultiPoly, Vec<i64>)>) -> Vec<(MultiPoly, Vec<i64>)> {
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let mut done: Vec<(MultiPoly, Vec<i64>)> = Vec::new();
    let mut work = items;
    work.reverse();
    'next: while let Some((p, e)) = work.pop() {
        if p.is_constant() {
            continue;
        }
        if let Some(slot) = done.iter_mut().find(|(q, _)| *q == p) {
            slot.1 = add(&slot.1, &e);
            continue;
        }
        for idx in 0..done.len() {
            let g = gcd(&done[idx].0, &p);
            if g.is_constant() {
                continue;
            }
            let (a, ea) = done.remove(idx);
            let a_rest = a.div_exact(&g).expect("gcd divides");
            let p_rest = p.div_exact(&g).expect("gcd divides");
            debug_assert!(a_rest.is_constant() || a_rest == a_rest.normalized());
            work.push((p_rest, e.clone()));
            work.push((a_rest, ea.clone()));
            work.push((g, add(&ea, &e)));
            continue 'next;
        }
        done.push((p, e));
    }
    done.retain(|(_, e)| e.iter().any(|&x| x != 0));
    done.sort_by(|a, b| a.0.cmp(&b.0));
    done
}

/// `scalar · ∏ base^exp` with primitive, pairwise coprime, nonconstant bases
/// and nonzero exponents.
#[derive(Clone)]
pub struct FactoredRational {
    k: usize,
    scalar: Rat,
    factors: Vec<(MultiPoly, i64)>,
}

impl FactoredRational {
    pub fn one(k: usize) -> Self {
        Self::constant(k, Rat::one()).expect("nonzero")
    }

    pub fn constant(k: usize, c: Rat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroPolynomial("scalar of a rational function".into()));
        }
        Ok(FactoredRational {
            k,
            scalar: c,
            factors: vec![],
        })
    }

    /// Builds and refines `scalar · ∏ base^exp`; zero bases are rejected.
    pub fn from_factors(
        k: usize,
        scalar: Rat,
        factors: impl IntoIterator<Item = (MultiPoly, i64)>,
    ) -> Result<Self> {
        if scalar.is_zero() {
            return Err(Error::ZeroPolynomial("scalar of a rational function".into()));
        }
        let mut s = scalar;
        let mut items = Vec::new();
        for (p, e) in factors {
            if p.arity() != k {
                return Err(Error::dim(k, p.arity()));
            }
            if p.is_zero() {
                return Err(Error::ZeroPolynomial(format!("factor with exponent {e}")));
            }
            let (c, q) = p.split_content();
            s *= pow_i(&c, e);
            if e != 0 && !q.is_constant() {
                items.push((q, vec![e]));
            }
        }
        Ok(FactoredRational {
            k,
            scalar: s,
            factors: coprime_basis(items).into_iter().map(|(p, e)| (p, e[0])).collect(),
        })
    }

    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        Self::from_factors(p.arity(), Rat::one(), [(p.clone(), 1)])
    }

    /// `num / den`.
    pub fn fraction(num: &MultiPoly, den: &MultiPoly) -> Result<Self> {
        if num.arity() != den.arity() {
            return Err(Error::dim(num.arity(), den.arity()));
        }
        Self::from_factors(num.arity(), Rat::one(), [(num.clone(), 1), (den.clone(), -1)])
    }

    /// Parses factored numerator and denominator text, keeping the supplied
    /// factorization.
    pub fn parse(num: &str, den: &str, k: usize) -> Result<Self> {
        let (sn, fnum) = parse_factored(num, k)?;
        let (sd, fden) = parse_factored(den, k)?;
        if sn.is_zero() || fnum.iter().any(|(p, _)| p.is_zero()) {
            return Err(Error::ZeroPolynomial(format!("numerator {num:?}")));
        }
        if sd.is_zero() || fden.iter().any(|(p, _)| p.is_zero()) {
            return Err(Error::ZeroPolynomial(format!("denominator {den:?}")));
        }
        let items = fnum
            .into_iter()
            .map(|(p, e)| (p, i64::from(e)))
            .chain(fden.into_iter().map(|(p, e)| (p, -i64::from(e))));
        Self::from_factors(k, sn / sd, items)
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn factors(&self) -> &[(MultiPoly, i64)] {
        &self.factors
    }

    pub fn is_scalar(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_scalar() && self.scalar.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "arity mismatch");
        let items = self
            .factors
            .iter()
            .chain(&other.factors)
            .map(|(p, e)| (p.clone(), vec![*e]))
            .collect();
        FactoredRational {
            k: self.k,
            scalar: &self.scalar * &other.scalar,
            factors: coprime_basis(items).into_iter().map(|(p, e)| (p, e[0])).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        FactoredRational {
            k: self.k,
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::one(self.k);
        }
        FactoredRational {
            k: self.k,
            scalar: pow_i(&self.scalar, n),
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * n)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        out.scalar *= c;
        out
    }

    /// `R(z + u)`. Shifts keep bases primitive, normalized and coprime.
    pub fn shift(&self, u: &[i64]) -> Result<Self> {
        if u.len() != self.k {
            return Err(Error::dim(self.k, u.len()));
        }
        let mut factors = self
            .factors
            .iter()
            .map(|(p, e)| Ok((p.shift(u)?, *e)))
            .collect::<Result<Vec<_>>>()?;
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(FactoredRational {
            k: self.k,
            scalar: self.scalar.clone(),
            factors,
        })
    }

    /// Product of the positive-exponent factors times the scalar.
    pub fn numerator(&self) -> MultiPoly {
        self.part(1).scale(&self.scalar)
    }

    /// Product of the negative-exponent factors.
    pub fn denominator(&self) -> MultiPoly {
        self.part(-1)
    }

    fn part(&self, sign: i64) -> MultiPoly {
        self.factors
            .iter()
            .filter(|(_, e)| e.signum() == sign)
            .fold(MultiPoly::one(self.k), |acc, (p, e)| &acc * &p.pow(e.unsigned_abs() as u32))
    }

    /// Value at an integer point, `None` where the denominator vanishes.
    pub fn eval_int(&self, z: &[i64]) -> Result<Option<Rat>> {
        if z.len() != self.k {
            return Err(Error::dim(self.k, z.len()));
        }
        let mut acc = self.scalar.clone();
        let mut zero = false;
        for (p, e) in &self.factors {
            let v = p.eval_int(z)?;
            if v.is_zero() {
                if *e < 0 {
                    return Ok(None);
                }
                zero = true;
            } else {
                acc *= pow_i(&v, *e);
            }
        }
        Ok(Some(if zero { Rat::zero() } else { acc }))
    }

    /// Factored text of the numerator (including the scalar).
    pub fn num_string(&self) -> String {
        product_string(&self.scalar, self.factors.iter().filter(|(_, e)| *e > 0).map(|(p, e)| (p.to_string(), p.num_terms(), *e as u64)))
    }

    /// Factored text of the denominator.
    pub fn den_string(&self) -> String {
        product_string(&Rat::one(), self.factors.iter().filter(|(_, e)| *e < 0).map(|(p, e)| (p.to_string(), p.num_terms(), e.unsigned_abs())))
    }
}

/// `"3/2*(z1 + 1)^2*z2"`-style text. Items are (base text, number of terms,
/// exponent).
pub(crate) fn product_string(
    scalar: &Rat,
    items: impl Iterator<Item = (String, usize, u64)>,
) -> String {
    let items: Vec<(String, usize, u64)> = items.collect();
    if scalar.is_one() && items.len() == 1 && items[0].2 == 1 {
        return items[0].0.clone();
    }
    let mut parts: Vec<String> = Vec::new();
    for (s, terms, e) in items {
        let atomic = terms == 1 && !s.starts_with('-') && !s.contains('*') && !s.contains('^');
        let base = if atomic { s } else { format!("({s})") };
        parts.push(if e == 1 { base } else { format!("{base}^{e}") });
    }
    let neg = scalar < &Rat::zero();
    let mag = if neg { -scalar.clone() } else { scalar.clone() };
    if parts.is_empty() {
        return format_rat(scalar);
    }
    if !mag.is_one() {
        parts.insert(0, format_rat(&mag));
    }
    let body = parts.join("*");
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl PartialEq for FactoredRational {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.div(other).is_one()
    }
}

impl Eq for FactoredRational {}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.den_string();
        if den == "1" {
            write!(f, "{}", self.num_string())
        } else {
            write!(f, "{} / ({})", self.num_string(), den)
        }
    }
}

impl fmt::Debug for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredRational[{}]({self})", self.k)
    }
}
