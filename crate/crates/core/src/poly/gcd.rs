//! Multivariate gcd over the rationals.
//!
//! Primitive polynomial remainder sequences, recursing on the variable of
//! lowest degree, with cheap exits for the overwhelmingly common coprime case.

use num_traits::{One, Zero};

use crate::poly::multi::MultiPoly;
use crate::poly::uni::UniPoly;
use crate::rat::{rat, Rat};

/// Normalized gcd: content 1 and positive graded-lex leading coefficient.
/// `gcd(p, 0)` is `p` normalized and `gcd(0, 0) = 0`.
pub fn gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    assert_eq!(p.arity(), q.arity(), "gcd of polynomials of different arity");
    if p.is_zero() {
        return q.normalized();
    }
    if q.is_zero() {
        return p.normalized();
    }
    gcd_norm(&p.normalized(), &q.normalized())
}

/// True when `p` and `q` share no nonconstant factor.
pub fn coprime(p: &MultiPoly, q: &MultiPoly) -> bool {
    gcd(p, q).is_constant()
}

fn gcd_norm(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let k = p.arity();
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one(k);
    }
    if p == q {
        return p.clone();
    }
    for (a, b) in [(p, q), (q, p)] {
        if a.total_degree() == 1 {
            return if b.div_exact(a).is_some() {
                a.clone()
            } else {
                MultiPoly::one(k)
            };
        }
    }
    let vq = q.variables();
    let common: Vec<usize> = p.variables().into_iter().filter(|x| vq.contains(x)).collect();
    if common.is_empty() || images_coprime(p, q, &common) {
        return MultiPoly::one(k);
    }
    let x = *common
        .iter()
        .min_by_key(|&&x| (p.degree_in(x).max(q.degree_in(x)), x))
        .expect("nonempty");
    let cp = content_in(p, x);
    let cq = content_in(q, x);
    let c = gcd_norm(&cp, &cq);
    let pp = p.div_exact(&cp).expect("content divides").normalized();
    let qp = q.div_exact(&cq).expect("content divides").normalized();
    let g = prs(pp, qp, x);
    (&c * &g).normalized()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `z_x`.
fn content_in(p: &MultiPoly, x: usize) -> MultiPoly {
    let k = p.arity();
    let mut acc = MultiPoly::zero(k);
    for c in p.coeffs_in(x) {
        if c.is_zero() {
            continue;
        }
        acc = if acc.is_zero() {
            c.normalized()
        } else {
            gcd_norm(&acc, &c.normalized())
        };
        if acc.is_constant() {
            return MultiPoly::one(k);
        }
    }
    acc
}

fn primitive_in(p: &MultiPoly, x: usize) -> MultiPoly {
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides").normalized()
}

fn lc_in(p: &MultiPoly, x: usize) -> MultiPoly {
    p.coeffs_in(x).pop().unwrap_or_else(|| MultiPoly::zero(p.arity()))
}

fn monomial(k: usize, x: usize, d: u32) -> MultiPoly {
    let mut e = vec![0; k];
    e[x] = d;
    MultiPoly::from_terms(k, [(e, Rat::one())])
}

/// Pseudo-remainder of `a` by `b` in `z_x` (up to a factor from `Q[others]`).
fn prem(a: &MultiPoly, b: &MultiPoly, x: usize) -> MultiPoly {
    let k = a.arity();
    let db = b.degree_in(x);
    let lcb = lc_in(b, x);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lr = lc_in(&r, x);
        r = &(&lcb * &r) - &(&(&lr * &monomial(k, x, dr - db)) * b);
        if !r.is_zero() {
            r = r.normalized();
        }
    }
    r
}

/// Gcd of two polynomials that are primitive with respect to `z_x`.
fn prs(mut a: MultiPoly, mut b: MultiPoly, x: usize) -> MultiPoly {
    let k = a.arity();
    if a.degree_in(x) < b.degree_in(x) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.degree_in(x) == 0 {
            // Primitive and free of z_x: a constant.
            return MultiPoly::one(k);
        }
        let r = prem(&a, &b, x);
        if r.is_zero() {
            return b.normalized();
        }
        a = b;
        b = primitive_in(&r, x);
    }
}

/// Specializes every variable but `x` and returns the image in `Q[z_x]`.
fn image(p: &MultiPoly, x: usize, point: &[Rat]) -> UniPoly {
    let mut coeffs = vec![Rat::zero(); p.degree_in(x) as usize + 1];
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (j, &d) in e.iter().enumerate() {
            if j != x && d > 0 {
                t *= num_traits::pow(point[j].clone(), d as usize);
            }
        }
        coeffs[e[x] as usize] += t;
    }
    UniPoly::from_coeffs(coeffs)
}

/// Proves coprimality when, for each shared variable, some specialization of
/// the others keeps both leading coefficients and has a coprime image. A
/// common factor involving `x` would survive into every such image.
fn images_coprime(p: &MultiPoly, q: &MultiPoly, common: &[usize]) -> bool {
    let k = p.arity();
    common.iter().all(|&x| {
        let (dp, dq) = (p.degree_in(x) as usize, q.degree_in(x) as usize);
        (0..4i64).any(|attempt| {
            let point: Vec<Rat> = (0..k)
                .map(|j| rat(3 + 7 * attempt + (j as i64) * (11 + 5 * attempt)))
                .collect();
            let (ip, iq) = (image(p, x, &point), image(q, x, &point));
            ip.degree() == dp && iq.degree() == dq && ip.gcd(&iq).is_constant()
        })
    })
}
