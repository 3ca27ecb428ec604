//! Exact rational feasibility by Fourier–Motzkin elimination.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::rat::{rat, to_i64, Rat};

/// `a·x > b` when `strict`, otherwise `a·x ≥ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinCon {
    pub a: Vec<Rat>,
    pub b: Rat,
    pub strict: bool,
}

impl LinCon {
    pub fn gt_int(a: &[i64], b: i64) -> Self {
        LinCon {
            a: a.iter().map(|&x| rat(x)).collect(),
            b: rat(b),
            strict: true,
        }
    }

    pub fn geq_int(a: &[i64], b: i64) -> Self {
        LinCon {
            a: a.iter().map(|&x| rat(x)).collect(),
            b: rat(b),
            strict: false,
        }
    }

    fn holds_const(&self) -> bool {
        let lhs = Rat::zero();
        if self.strict {
            lhs > self.b
        } else {
            lhs >= self.b
        }
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.a.iter().zip(x).map(|(a, x)| a * x).sum();
        if self.strict {
            lhs > self.b
        } else {
            lhs >= self.b
        }
    }

    /// Positive rescaling so the first nonzero coefficient has magnitude 1.
    fn normalized(mut self) -> Self {
        if let Some(s) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            let inv = s.recip();
            for x in self.a.iter_mut() {
                *x *= &inv;
            }
            self.b *= inv;
        }
        self
    }
}

/// A rational polyhedron in `Q^k`.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    pub k: usize,
    pub cons: Vec<LinCon>,
}

/// Bound of a linear functional: value and whether it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: Rat,
    pub strict: bool,
}

impl Polyhedron {
    pub fn new(k: usize, cons: Vec<LinCon>) -> Self {
        Polyhedron { k, cons }
    }

    /// Removes variables `m..k` (from the last); `None` when a constant
    /// contradiction shows up on the way.
    fn eliminate_to(&self, m: usize) -> Option<Vec<Vec<LinCon>>> {
        let mut stages = vec![simplify(self.cons.clone())?];
        for j in (m..self.k).rev() {
            let cur = stages.last().expect("nonempty");
            let (mut pos, mut neg, mut rest) = (vec![], vec![], vec![]);
            for c in cur {
                if c.a[j].is_positive() {
                    pos.push(c);
                } else if c.a[j].is_negative() {
                    neg.push(c);
                } else {
                    rest.push(c.clone());
                }
            }
            for p in &pos {
                for n in &neg {
                    let (sp, sn) = (p.a[j].recip(), n.a[j].abs().recip());
                    let a = p.a.iter().zip(&n.a).map(|(x, y)| x * &sp + y * &sn).collect();
                    rest.push(LinCon {
                        a,
                        b: &p.b * &sp + &n.b * &sn,
                        strict: p.strict || n.strict,
                    });
                }
            }
            stages.push(simplify(rest)?);
        }
        Some(stages)
    }

    /// A rational witness, or `None` when the system is infeasible.
    pub fn feasible(&self) -> Option<Vec<Rat>> {
        let stages = self.eliminate_to(0)?;
        let mut x: Vec<Rat> = Vec::with_capacity(self.k);
        for j in 0..self.k {
            let stage = &stages[self.k - 1 - j];
            let (lo, hi) = interval(stage, j, &x);
            x.push(pick(&lo, &hi)?);
        }
        debug_assert!(self.cons.iter().all(|c| c.holds(&x)));
        Some(x)
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible().is_some()
    }

    /// Range of `f·x` over the polyhedron; `None` when infeasible.
    pub fn range_of(&self, f: &[Rat]) -> Option<(Option<Bound>, Option<Bound>)> {
        // Fresh variable y = f·x placed first, then eliminate x.
        let k = self.k + 1;
        let mut cons: Vec<LinCon> = self
            .cons
            .iter()
            .map(|c| {
                let mut a = vec![Rat::zero()];
                a.extend(c.a.iter().cloned());
                LinCon {
                    a,
                    b: c.b.clone(),
                    strict: c.strict,
                }
            })
            .collect();
        let mut eq = vec![-Rat::one()];
        eq.extend(f.iter().cloned());
        cons.push(LinCon {
            a: eq.clone(),
            b: Rat::zero(),
            strict: false,
        });
        cons.push(LinCon {
            a: eq.iter().map(|x| -x).collect(),
            b: Rat::zero(),
            strict: false,
        });
        let stages = Polyhedron::new(k, cons).eliminate_to(1)?;
        let (lo, hi) = interval(stages.last().expect("nonempty"), 0, &[]);
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l.value > h.value || (l.value == h.value && (l.strict || h.strict)) {
                return None;
            }
        }
        Some((lo, hi))
    }

    /// Substitutes `x_0 = v`.
    fn fix_first(&self, v: &Rat) -> Polyhedron {
        Polyhedron {
            k: self.k - 1,
            cons: self
                .cons
                .iter()
                .map(|c| LinCon {
                    a: c.a[1..].to_vec(),
                    b: &c.b - &c.a[0] * v,
                    strict: c.strict,
                })
                .collect(),
        }
    }

    /// An integer point, found by branching on coordinates in order with each
    /// range read off the projection. Exact for bounded polyhedra; unbounded
    /// coordinates are scanned only near a rational witness.
    pub fn integer_point(&self) -> Option<Vec<i64>> {
        let mut budget = 20_000usize;
        self.int_search(&mut budget)
    }

    fn int_search(&self, budget: &mut usize) -> Option<Vec<i64>> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if self.k == 0 {
            return self.cons.iter().all(LinCon::holds_const).then(Vec::new);
        }
        let w = self.feasible()?;
        let stages = self.eliminate_to(1)?;
        let (lo, hi) = interval(stages.last().expect("nonempty"), 0, &[]);
        let lo_i = lo.map(|b| int_above(&b));
        let hi_i = hi.map(|b| int_below(&b));
        let center = to_i64(&w[0].round()).unwrap_or(0);
        const REACH: i64 = 48;
        let a = lo_i.map_or(center - REACH, |l| l.max(center - REACH));
        let b = hi_i.map_or(center + REACH, |h| h.min(center + REACH));
        let mut cands: Vec<i64> = (a..=b).collect();
        cands.sort_by_key(|&v| ((v - center).abs(), v));
        for v in cands {
            if let Some(mut rest) = self.fix_first(&rat(v)).int_search(budget) {
                rest.insert(0, v);
                return Some(rest);
            }
            if *budget == 0 {
                break;
            }
        }
        None
    }
}

/// Drops trivial rows (failing on violated ones), keeps the tightest among
/// rows with the same normal.
fn simplify(cons: Vec<LinCon>) -> Option<Vec<LinCon>> {
    let mut best: BTreeMap<Vec<Rat>, (Rat, bool)> = BTreeMap::new();
    for c in cons {
        if c.a.iter().all(Zero::is_zero) {
            if !c.holds_const() {
                return None;
            }
            continue;
        }
        let c = c.normalized();
        match best.get_mut(&c.a) {
            Some((b, s)) => {
                if c.b > *b || (c.b == *b && c.strict) {
                    *b = c.b;
                    *s = c.strict;
                }
            }
            None => {
                best.insert(c.a, (c.b, c.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(a, (b, strict))| LinCon { a, b, strict })
            .collect(),
    )
}

/// Bounds on `x_j` implied by `stage` once `x_0..x_{j-1}` are fixed.
fn interval(stage: &[LinCon], j: usize, x: &[Rat]) -> (Option<Bound>, Option<Bound>) {
    let mut lo: Option<Bound> = None;
    let mut hi: Option<Bound> = None;
    for c in stage {
        let aj = &c.a[j];
        if aj.is_zero() {
            continue;
        }
        let rest: Rat = c.a[..j].iter().zip(x).map(|(a, v)| a * v).sum();
        let val = (&c.b - rest) / aj;
        if aj.is_positive() {
            let tighter = match &lo {
                None => true,
                Some(b) => val > b.value || (val == b.value && c.strict),
            };
            if tighter {
                lo = Some(Bound { value: val, strict: c.strict });
            }
        } else {
            let tighter = match &hi {
                None => true,
                Some(b) => val < b.value || (val == b.value && c.strict),
            };
            if tighter {
                hi = Some(Bound { value: val, strict: c.strict });
            }
        }
    }
    (lo, hi)
}

fn admits(lo: &Option<Bound>, hi: &Option<Bound>, v: &Rat) -> bool {
    let ok_lo = lo.as_ref().is_none_or(|b| if b.strict { v > &b.value } else { v >= &b.value });
    let ok_hi = hi.as_ref().is_none_or(|b| if b.strict { v < &b.value } else { v <= &b.value });
    ok_lo && ok_hi
}

/// A value in the interval, preferring integers near its middle.
fn pick(lo: &Option<Bound>, hi: &Option<Bound>) -> Option<Rat> {
    let mid = match (lo, hi) {
        (Some(l), Some(h)) => (&l.value + &h.value) / rat(2),
        (Some(l), None) => l.value.floor() + Rat::one(),
        (None, Some(h)) => h.value.ceil() - Rat::one(),
        (None, None) => Rat::zero(),
    };
    [mid.floor(), mid.ceil(), mid.clone()]
        .into_iter()
        .find(|c| admits(lo, hi, c))
}

fn int_above(b: &Bound) -> i64 {
    let f = to_i64(&b.value.floor()).unwrap_or(i64::MIN / 4);
    if b.strict || !b.value.is_integer() {
        f + 1
    } else {
        f
    }
}

fn int_below(b: &Bound) -> i64 {
    let c = to_i64(&b.value.ceil()).unwrap_or(i64::MAX / 4);
    if b.strict || !b.value.is_integer() {
        c - 1
    } else {
        c
    }
}
