//! Hypergeometric terms given by their unit shift quotients.

use log::warn;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::factored::FactoredRational;
use crate::geometry::{characteristic_certificates, Hyperplane, MeasureZeroSet, PolyhedralRegion};
use crate::poly::{gcd, MultiPoly};
use crate::rat::Rat;

/// A known value `f(point) = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub point: Vec<i64>,
    pub value: Rat,
}

/// A term `f : Z^k → Q` described by `R_i = f(z + e_i) / f(z)`.
///
/// The recurrences used for evaluation are `A_i(z)·f(z) = B_i(z)·f(z + e_i)`
/// with `A_i = num(R_i)·guard_i` and `B_i = den(R_i)·guard_i`. Guards are 1
/// unless the term was extended by zero from a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSpec {
    k: usize,
    generators: Vec<FactoredRational>,
    guards: Vec<MultiPoly>,
    pub exceptions: MeasureZeroSet,
    pub seed: Option<Seed>,
    /// Asserted, not verified.
    pub honest: bool,
    pub zero_divisor_witness: Option<MultiPoly>,
}

impl TermSpec {
    pub fn new(k: usize, generators: Vec<FactoredRational>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("arity must be positive".into()));
        }
        if generators.len() != k {
            return Err(Error::dim(k, generators.len()));
        }
        if let Some(g) = generators.iter().find(|g| g.arity() != k) {
            return Err(Error::dim(k, g.arity()));
        }
        Ok(TermSpec {
            k,
            generators,
            guards: vec![MultiPoly::one(k); k],
            exceptions: MeasureZeroSet::empty(),
            seed: None,
            honest: true,
            zero_divisor_witness: None,
        })
    }

    /// Builds generators from (numerator, denominator) pairs, reducing them
    /// with a warning when they share a factor.
    pub fn from_fractions(k: usize, pairs: &[(MultiPoly, MultiPoly)]) -> Result<Self> {
        let mut gens = Vec::with_capacity(pairs.len());
        for (i, (n, d)) in pairs.iter().enumerate() {
            if n.is_zero() {
                return Err(Error::ZeroPolynomial(format!("numerator of generator {}", i + 1)));
            }
            if d.is_zero() {
                return Err(Error::ZeroPolynomial(format!("denominator of generator {}", i + 1)));
            }
            if !gcd(n, d).is_constant() {
                warn!("generator {} is not reduced; cancelling common factors", i + 1);
            }
            gens.push(FactoredRational::fraction(n, d)?);
        }
        Self::new(k, gens)
    }

    pub fn with_seed(mut self, point: Vec<i64>, value: Rat) -> Result<Self> {
        if point.len() != self.k {
            return Err(Error::dim(self.k, point.len()));
        }
        self.seed = Some(Seed { point, value });
        Ok(self)
    }

    pub fn with_guards(mut self, guards: Vec<MultiPoly>) -> Result<Self> {
        if guards.len() != self.k {
            return Err(Error::dim(self.k, guards.len()));
        }
        if guards.iter().any(MultiPoly::is_zero) {
            return Err(Error::ZeroPolynomial("guard".into()));
        }
        self.guards = guards;
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[FactoredRational] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &FactoredRational {
        &self.generators[i]
    }

    pub fn guards(&self) -> &[MultiPoly] {
        &self.guards
    }

    pub fn has_guards(&self) -> bool {
        self.guards.iter().any(|g| !g.is_one())
    }

    /// `A_i(z)` and `B_i(z)` of the recurrence along `e_i`.
    pub fn recurrence_values(&self, i: usize, z: &[i64]) -> Result<(Rat, Rat)> {
        let r = &self.generators[i];
        let g = self.guards[i].eval_int(z)?;
        let mut a = r.scalar().clone() * &g;
        let mut b = g;
        for (p, e) in r.factors() {
            let v = p.eval_int(z)?;
            let pw = num_traits::pow(v, e.unsigned_abs() as usize);
            if *e > 0 {
                a *= pw;
            } else {
                b *= pw;
            }
        }
        Ok((a, b))
    }

    /// True iff `R_i·R_j(z + e_i) = R_j·R_i(z + e_j)` for all `i < j`.
    pub fn check_compatibility(&self) -> bool {
        (0..self.k).all(|i| {
            (i + 1..self.k).all(|j| {
                let (ei, ej) = (unit(self.k, i), unit(self.k, j));
                let lhs = self.generators[i].mul(&self.generators[j].shift(&ei).expect("arity"));
                let rhs = self.generators[j].mul(&self.generators[i].shift(&ej).expect("arity"));
                lhs == rhs
            })
        })
    }

    fn require_compatible(&self) -> Result<()> {
        if self.check_compatibility() {
            Ok(())
        } else {
            Err(Error::Cocycle("generators violate R_i·R_j(z+e_i) = R_j·R_i(z+e_j)".into()))
        }
    }

    /// `R_w = f(z + w) / f(z)` in reduced factored form.
    pub fn compose_direction(&self, w: &[i64]) -> Result<FactoredRational> {
        if w.len() != self.k {
            return Err(Error::dim(self.k, w.len()));
        }
        self.require_compatible()?;
        Ok(self.compose_unchecked(w))
    }

    /// Axis-by-axis composition; assumes compatibility.
    pub(crate) fn compose_unchecked(&self, w: &[i64]) -> FactoredRational {
        let mut r = FactoredRational::one(self.k);
        let mut u = vec![0i64; self.k];
        for (i, &wi) in w.iter().enumerate() {
            for _ in 0..wi.unsigned_abs() {
                if wi > 0 {
                    r = r.mul(&self.generators[i].shift(&u).expect("arity"));
                    u[i] += 1;
                } else {
                    u[i] -= 1;
                    r = r.div(&self.generators[i].shift(&u).expect("arity"));
                }
            }
        }
        r
    }

    /// The term equal to `f` on `support` and 0 elsewhere. Each recurrence is
    /// multiplied on both sides by the region's characteristic certificate,
    /// whose zero hyperplanes join the declared exceptions.
    pub fn extend_by_zero(&self, support: &PolyhedralRegion) -> Result<TermSpec> {
        if support.arity() != self.k {
            return Err(Error::dim(self.k, support.arity()));
        }
        let certs = characteristic_certificates(support);
        let mut out = self.clone();
        let mut planes = Vec::new();
        for (i, p) in certs.iter().enumerate() {
            out.guards[i] = &out.guards[i] * p;
        }
        for h in support.constraints() {
            let mut ms = Vec::new();
            for i in 0..self.k {
                let vi = h.v()[i];
                if vi > 0 {
                    ms.extend(h.n() - vi + 1..=h.n());
                } else if vi < 0 {
                    ms.extend(h.n() + 1..=h.n() - vi);
                }
            }
            for m in ms {
                planes.extend(Hyperplane::new(h.v().to_vec(), m)?);
            }
        }
        out.exceptions.extend(planes);
        if let Some(seed) = &mut out.seed {
            if !support.contains(&seed.point)? {
                seed.value = Rat::zero();
            }
        }
        Ok(out)
    }
}

pub(crate) fn unit(k: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; k];
    e[i] = 1;
    e
}
