use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::multi::MultiPoly;
use crate::rat::{content_parts, rat, Rat};

/// Dense univariate polynomial in `t`, coefficients low to high.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

/// Roots found over the rationals together with what is left over:
/// `p = cofactor · ∏ (t − r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roots<T> {
    pub roots: Vec<T>,
    pub cofactor: UniPoly,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    /// `a·t + b`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Self::from_coeffs(vec![b, a])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rat {
        self.eval(&rat(x))
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `p(t + c)`.
    pub fn shift(&self, c: &Rat) -> UniPoly {
        // Horner in the shifted variable.
        let mut acc = UniPoly::zero();
        let lin = UniPoly::linear(Rat::one(), c.clone());
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UniPoly::constant(a.clone());
        }
        acc
    }

    pub fn shift_int(&self, c: i64) -> UniPoly {
        self.shift(&rat(c))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.lc();
        if rem.len() < d.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (UniPoly::from_coeffs(quo), UniPoly::from_coeffs(rem))
    }

    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Greatest common divisor, normalized to primitive integer coefficients
    /// with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// `self = scalar · prim` with `prim` primitive over the integers and of
    /// positive leading coefficient.
    pub fn split_content(&self) -> (Rat, UniPoly) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let (g, l) = content_parts(self.coeffs.iter());
        let mut s = Rat::new(g, l);
        if self.lc().is_negative() {
            s = -s;
        }
        (s.clone(), self.scale(&s.recip()))
    }

    pub fn primitive(&self) -> UniPoly {
        self.split_content().1
    }

    /// All rational roots with multiplicity, plus the cofactor without
    /// rational roots.
    pub fn rational_roots(&self) -> Result<Roots<Rat>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("rational_roots".into()));
        }
        let mut p = self.primitive();
        let mut roots = Vec::new();
        while p.degree() > 0 && p.coeffs[0].is_zero() {
            roots.push(Rat::zero());
            p = UniPoly::from_coeffs(p.coeffs[1..].to_vec());
        }
        while p.degree() > 0 {
            let a0 = p.coeffs[0].numer().abs();
            let an = p.lc().numer().abs();
            let bound = p.cauchy_bound();
            let mut found = None;
            'search: for e in divisors(&an) {
                for d in divisors(&a0) {
                    let cand = Rat::new(d.clone(), e.clone());
                    if cand > bound {
                        continue;
                    }
                    for c in [cand.clone(), -cand] {
                        if p.eval(&c).is_zero() {
                            found = Some(c);
                            break 'search;
                        }
                    }
                }
            }
            let Some(r) = found else { break };
            let lin = UniPoly::linear(Rat::one(), -r.clone());
            p = p.div_exact(&lin).expect("root divides").primitive();
            roots.push(r);
        }
        roots.sort();
        let mut cofactor = p;
        let mut check = UniPoly::one();
        for r in &roots {
            check = &check * &UniPoly::linear(Rat::one(), -r.clone());
        }
        let s = self.lc() / (check.lc() * cofactor.lc());
        cofactor = cofactor.scale(&s);
        debug_assert_eq!(&(&check * &cofactor), self);
        Ok(Roots { roots, cofactor })
    }

    /// Integer roots with multiplicity; the cofactor keeps every other factor.
    pub fn integer_roots(&self) -> Result<Roots<i64>> {
        let all = self.rational_roots()?;
        let mut roots = Vec::new();
        let mut cofactor = all.cofactor;
        for r in all.roots {
            match crate::rat::to_i64(&r) {
                Some(n) => roots.push(n),
                None => cofactor = &cofactor * &UniPoly::linear(Rat::one(), -r),
            }
        }
        Ok(Roots { roots, cofactor })
    }

    /// Every complex root has absolute value at most this bound.
    pub fn cauchy_bound(&self) -> Rat {
        let lc = self.lc();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| (c / &lc).abs())
            .max()
            .unwrap_or_else(Rat::zero);
        m + Rat::one()
    }

    /// `p(v·z + c)` as a polynomial in `z`.
    pub fn compose_linear(&self, v: &[i64], c: i64) -> MultiPoly {
        let lin = MultiPoly::linear(v, c);
        let k = v.len();
        let mut acc = MultiPoly::zero(k);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &MultiPoly::constant(k, a.clone());
        }
        acc
    }
}

/// Positive divisors of `n` (`n = 0` yields only 1), by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.abs();
    let mut f = BigInt::from(2);
    while &f * &f <= m {
        let mut e = 0;
        while m.is_multiple_of(&f) {
            m /= &f;
            e += 1;
        }
        if e > 0 {
            primes.push((f.clone(), e));
        }
        f += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let cur = out.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &p;
            out.extend(cur.iter().map(|d| d * &pk));
        }
    }
    out.sort();
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i as u32], c.clone()));
        MultiPoly::from_terms(1, terms).fmt_with(f, Some("t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(&-Rat::one())
    }
}
