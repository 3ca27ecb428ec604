use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{content_parts, rat, Rat};

pub type Exponent = Vec<u32>;

/// Sparse polynomial in `z1..zk` with exact rational coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty
/// map and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Exponent, Rat>,
}

/// Graded-lexicographic comparison of exponent vectors.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rat::one())
    }

    /// The coordinate function `z_{i+1}` (0-based `i`).
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = Self::zero(arity);
        p.terms.insert(e, Rat::one());
        p
    }

    /// `coeffs · z + c`.
    pub fn linear(coeffs: &[i64], c: i64) -> Self {
        let k = coeffs.len();
        let mut p = Self::constant(k, rat(c));
        for (i, &a) in coeffs.iter().enumerate() {
            if a != 0 {
                let mut e = vec![0; k];
                e[i] = 1;
                p.terms.insert(e, rat(a));
            }
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponent, Rat)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent length must equal arity");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rat> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rat::zero))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rat)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn homogeneous_part(&self, degree: u32) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = Self::one(self.arity);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity {
            return Err(Error::dim(self.arity, got));
        }
        Ok(())
    }

    /// `q(z) = p(z + v)`.
    pub fn shift(&self, v: &[i64]) -> Result<MultiPoly> {
        self.check_arity(v.len())?;
        let mut p = self.clone();
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                p = p.shift_var(j, c);
            }
        }
        Ok(p)
    }

    fn shift_var(&self, j: usize, c: i64) -> MultiPoly {
        let c = BigInt::from(c);
        let mut out = Self::zero(self.arity);
        for (e, coef) in &self.terms {
            let n = e[j];
            for t in 0..=n {
                let factor = binomial(n, t) * num_traits::pow(c.clone(), (n - t) as usize);
                if factor.is_zero() {
                    continue;
                }
                let mut ne = e.clone();
                ne[j] = t;
                out.add_term(ne, coef * Rat::from_integer(factor));
            }
        }
        out
    }

    pub fn eval(&self, z: &[Rat]) -> Result<Rat> {
        self.check_arity(z.len())?;
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in z.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation at an integer point.
    pub fn eval_int(&self, z: &[i64]) -> Result<Rat> {
        self.check_arity(z.len())?;
        let mut acc = Rat::zero();
        let zb: Vec<BigInt> = z.iter().map(|&x| BigInt::from(x)).collect();
        for (e, c) in &self.terms {
            let mut m = BigInt::one();
            for (x, &k) in zb.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += c * Rat::from_integer(m);
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                out.add_term(ne, c * rat(i64::from(e[var])));
            }
        }
        out
    }

    /// Exact division; `None` when `q` does not divide `self`.
    pub fn div_exact(&self, q: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.arity, q.arity);
        if q.is_zero() {
            return None;
        }
        if let Some(c) = q.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lq, lc) = q.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = Self::zero(self.arity);
        while let Some((le, lcoef)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if le.iter().zip(&lq).any(|(a, b)| a < b) {
                return None;
            }
            let me: Exponent = le.iter().zip(&lq).map(|(a, b)| a - b).collect();
            let mc = lcoef / &lc;
            let mono = MultiPoly::from_terms(self.arity, [(me.clone(), mc.clone())]);
            rem = &rem - &(&mono * q);
            quo.add_term(me, mc);
        }
        Some(quo)
    }

    /// Coefficients as a polynomial in `z_{var}`: `self = Σ coeffs[i] · z_var^i`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.arity); deg + 1];
        if self.is_zero() {
            return vec![];
        }
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne[var] as usize;
            ne[var] = 0;
            out[d].add_term(ne, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(arity: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = Self::zero(arity);
        for (d, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut ne = e.clone();
                ne[var] += d as u32;
                out.add_term(ne, x.clone());
            }
        }
        out
    }

    /// Splits `self = scalar · prim` with `prim` having coprime integer
    /// coefficients and a positive graded-lex leading coefficient. The zero
    /// polynomial returns `(0, 0)`; constants return `(c, 1)`.
    pub fn split_content(&self) -> (Rat, MultiPoly) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let (g, l) = content_parts(self.terms.values());
        let mut scalar = Rat::new(g, l);
        if self.leading_coeff().is_some_and(|c| c.is_negative()) {
            scalar = -scalar;
        }
        let inv = scalar.recip();
        (scalar, self.scale(&inv))
    }

    /// Primitive normalized form (see [`MultiPoly::split_content`]).
    pub fn normalized(&self) -> MultiPoly {
        self.split_content().1
    }

    /// Substitutes `z_j := v_j · t` and returns the univariate coefficients
    /// of `t`, i.e. the restriction to the line through 0 in direction `v`.
    pub(crate) fn restrict_to_line(&self, v: &[Rat]) -> Vec<Rat> {
        let deg = self.total_degree() as usize;
        let mut out = vec![Rat::zero(); deg + 1];
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut d = 0usize;
            for (x, &k) in v.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                    d += k as usize;
                }
            }
            out[d] += t;
        }
        out
    }

    fn fmt_var(f: &mut fmt::Formatter<'_>, arity: usize, i: usize, names: Option<&str>) -> fmt::Result {
        match names {
            Some(n) => write!(f, "{n}"),
            None => {
                let _ = arity;
                write!(f, "z{}", i + 1)
            }
        }
    }

    pub(crate) fn fmt_with(&self, f: &mut fmt::Formatter<'_>, uni_name: Option<&str>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        for (idx, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            let mut need_star = false;
            if is_const || !mag.is_one() {
                write!(f, "{}", crate::rat::format_rat(&mag))?;
                need_star = true;
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if need_star {
                    write!(f, "*")?;
                }
                Self::fmt_var(f, self.arity, i, uni_name)?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
                need_star = true;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, None)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.arity, self)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = MultiPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}
