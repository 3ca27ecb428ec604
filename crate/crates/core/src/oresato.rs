//! Ore–Sato decomposition of compatible term ratios:
//!
//! ```text
//! R_w(z) = γ^w · C(z+w)/C(z) · D(z)/D(z+w) · ∏_{v∈V} gp_{j=0}^{v·w} a_v(v·z+j) / b_v(v·z+j)
//! ```

use std::collections::BTreeMap;

use log::debug;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factored::{coprime_basis, product_string, FactoredRational};
use crate::linalg;
use crate::poly::{detect_simple, gcd, MultiPoly, UniPoly};
use crate::rat::{pow_i, rat, to_i64, Rat};
use crate::termratio::{unit, TermSpec};

/// Generalized product: `∏_{j=a}^{b-1} term(j)` for `b ≥ a` and
/// `∏_{j=b}^{a-1} term(j)^{-1}` for `b < a`.
pub fn gp_eval(a: i64, b: i64, mut term: impl FnMut(i64) -> Rat) -> Result<Rat> {
    let (lo, hi, inv) = if b >= a { (a, b, false) } else { (b, a, true) };
    let mut acc = Rat::one();
    for j in lo..hi {
        let t = term(j);
        if t.is_zero() {
            return Err(Error::ZeroTerm(j));
        }
        acc *= t;
    }
    Ok(if inv { acc.recip() } else { acc })
}

/// The half-open index range of `gp_{j=a}^{b}` and whether it is inverted.
pub fn gp_range(a: i64, b: i64) -> (std::ops::Range<i64>, bool) {
    if b >= a {
        (a..b, false)
    } else {
        (b..a, true)
    }
}

/// One direction of the decomposition: `a_v` and `b_v` as products of
/// primitive univariate factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub v: Vec<i64>,
    pub a: Vec<(UniPoly, u32)>,
    pub b: Vec<(UniPoly, u32)>,
}

fn expand_uni(fs: &[(UniPoly, u32)]) -> UniPoly {
    fs.iter().fold(UniPoly::one(), |acc, (p, e)| &acc * &p.pow(*e))
}

pub(crate) fn uni_product_string(fs: &[(UniPoly, u32)]) -> String {
    product_string(
        &Rat::one(),
        fs.iter().map(|(p, e)| (p.to_string(), p.coeffs().iter().filter(|c| !c.is_zero()).count(), u64::from(*e))),
    )
}

pub(crate) fn multi_product_string(fs: &[(MultiPoly, u32)]) -> String {
    product_string(
        &Rat::one(),
        fs.iter().map(|(p, e)| (p.to_string(), p.num_terms(), u64::from(*e))),
    )
}

impl Chain {
    pub fn a_poly(&self) -> UniPoly {
        expand_uni(&self.a)
    }

    pub fn b_poly(&self) -> UniPoly {
        expand_uni(&self.b)
    }

    /// `a_v(t)/b_v(t)` at `t = j`.
    pub fn term(&self, j: i64) -> (Rat, Rat) {
        (self.a_poly().eval_int(j), self.b_poly().eval_int(j))
    }
}

/// `(C, D, V, {a_v, b_v}, γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreSatoForm {
    pub k: usize,
    pub c: Vec<(MultiPoly, u32)>,
    pub d: Vec<(MultiPoly, u32)>,
    pub gamma: Vec<Rat>,
    pub chains: Vec<Chain>,
}

impl OreSatoForm {
    pub fn trivial(k: usize) -> Self {
        OreSatoForm {
            k,
            c: vec![],
            d: vec![],
            gamma: vec![Rat::one(); k],
            chains: vec![],
        }
    }

    pub fn c_poly(&self) -> MultiPoly {
        self.c.iter().fold(MultiPoly::one(self.k), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn d_poly(&self) -> MultiPoly {
        self.d.iter().fold(MultiPoly::one(self.k), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn c_string(&self) -> String {
        multi_product_string(&self.c)
    }

    pub fn d_string(&self) -> String {
        multi_product_string(&self.d)
    }

    pub fn directions(&self) -> Vec<Vec<i64>> {
        self.chains.iter().map(|c| c.v.clone()).collect()
    }

    /// `γ^w`.
    pub fn gamma_pow(&self, w: &[i64]) -> Rat {
        self.gamma.iter().zip(w).map(|(g, &e)| pow_i(g, e)).product()
    }

    /// `R_w` expanded from the form.
    pub fn ratio_from_form(&self, w: &[i64]) -> Result<FactoredRational> {
        if w.len() != self.k {
            return Err(Error::dim(self.k, w.len()));
        }
        let mut items: Vec<(MultiPoly, i64)> = Vec::new();
        for (p, m) in &self.c {
            items.push((p.shift(w)?, i64::from(*m)));
            items.push((p.clone(), -i64::from(*m)));
        }
        for (p, m) in &self.d {
            items.push((p.clone(), i64::from(*m)));
            items.push((p.shift(w)?, -i64::from(*m)));
        }
        for ch in &self.chains {
            let s: i64 = ch.v.iter().zip(w).map(|(a, b)| a * b).sum();
            let (range, inv) = gp_range(0, s);
            let sign = if inv { -1 } else { 1 };
            for j in range {
                for (p, e) in &ch.a {
                    items.push((p.compose_linear(&ch.v, j), sign * i64::from(*e)));
                }
                for (p, e) in &ch.b {
                    items.push((p.compose_linear(&ch.v, j), -sign * i64::from(*e)));
                }
            }
        }
        FactoredRational::from_factors(self.k, self.gamma_pow(w), items)
    }
}

/// Computes the decomposition of a compatible, non-zero-divisor spec. The
/// identity for every generator is verified before returning.
pub fn decompose(spec: &TermSpec) -> Result<OreSatoForm> {
    if spec.zero_divisor_witness.is_some() {
        return Err(Error::Precondition("decompose does not apply to zero divisors".into()));
    }
    if !spec.check_compatibility() {
        return Err(Error::Cocycle("generators violate R_i·R_j(z+e_i) = R_j·R_i(z+e_j)".into()));
    }
    let k = spec.arity();
    let items: Vec<(MultiPoly, Vec<i64>)> = (0..k)
        .flat_map(|i| {
            spec.generator(i).factors().iter().map(move |(p, e)| {
                let mut ex = vec![0; k];
                ex[i] = *e;
                (p.clone(), ex)
            })
        })
        .collect();
    let mut atoms = coprime_basis(items);
    let mut last_err = None;
    for round in 0..3 {
        match attempt(spec, &atoms) {
            Ok(form) => return Ok(form),
            Err(e) => {
                debug!("decomposition attempt {round} failed: {e}");
                last_err = Some(e);
            }
        }
        let radius = if round == 0 { 1 } else { 2 };
        match shift_refine(&atoms, radius) {
            Some(next) => atoms = next,
            None if round == 0 => continue,
            None => break,
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Splits atoms along common factors with shifts of atoms; `None` when
/// nothing splits.
fn shift_refine(atoms: &[(MultiPoly, Vec<i64>)], radius: i64) -> Option<Vec<(MultiPoly, Vec<i64>)>> {
    let k = atoms.first()?.0.arity();
    let offsets: Vec<Vec<i64>> = if radius == 1 {
        (0..k).flat_map(|i| [1, -1].map(|s| unit(k, i).iter().map(|x| x * s).collect())).collect()
    } else {
        crate::geometry::Window::symmetric(k, radius)
            .points()
            .filter(|u| u.iter().any(|&x| x != 0))
            .collect()
    };
    let mut changed = false;
    let mut out: Vec<(MultiPoly, Vec<i64>)> = Vec::new();
    for (a, ea) in atoms {
        let mut piece = None;
        'search: for (b, _) in atoms {
            for u in &offsets {
                let bs = b.shift(u).expect("arity");
                if bs == *a {
                    continue;
                }
                let g = gcd(a, &bs);
                if !g.is_constant() && g != *a {
                    piece = Some(g);
                    break 'search;
                }
            }
        }
        match piece {
            Some(g) => {
                changed = true;
                let rest = a.div_exact(&g).expect("gcd divides");
                out.push((g, ea.clone()));
                out.push((rest, ea.clone()));
            }
            None => out.push((a.clone(), ea.clone())),
        }
    }
    changed.then(|| coprime_basis(out))
}

/// Exponent bookkeeping of one factor family: member offset ↦ exponent per
/// generator.
type Family<K> = BTreeMap<K, Vec<i64>>;

struct Builder {
    k: usize,
    c: Vec<(MultiPoly, u32)>,
    d: Vec<(MultiPoly, u32)>,
    chains: BTreeMap<Vec<i64>, Chain>,
}

impl Builder {
    fn telescope(&mut self, p: MultiPoly, m: i64) {
        if m > 0 {
            self.c.push((p, m as u32));
        } else if m < 0 {
            self.d.push((p, (-m) as u32));
        }
    }
}

fn attempt(spec: &TermSpec, atoms: &[(MultiPoly, Vec<i64>)]) -> Result<OreSatoForm> {
    let k = spec.arity();
    let mut b = Builder {
        k,
        c: vec![],
        d: vec![],
        chains: BTreeMap::new(),
    };
    let mut by_dir: BTreeMap<Vec<i64>, Vec<(UniPoly, Vec<i64>)>> = BTreeMap::new();
    let mut nonsimple: Vec<(MultiPoly, Vec<i64>)> = Vec::new();
    for (p, e) in atoms {
        match detect_simple(p) {
            Some(s) => {
                let pieces = by_dir.entry(s.v).or_default();
                let roots = s.pbar.rational_roots()?;
                for r in roots.roots {
                    let lin = UniPoly::linear(Rat::one(), -r).primitive();
                    pieces.push((lin, e.clone()));
                }
                if roots.cofactor.degree() > 0 {
                    pieces.push((roots.cofactor.primitive(), e.clone()));
                }
            }
            None => nonsimple.push((p.clone(), e.clone())),
        }
    }
    for (v, pieces) in by_dir {
        simple_direction(&mut b, &v, shift_basis(pieces))?;
    }
    for orbit in nonsimple_orbits(nonsimple) {
        nonsimple_orbit(&mut b, orbit)?;
    }
    let mut form = OreSatoForm {
        k,
        c: merge_factors(b.c),
        d: merge_factors(b.d),
        gamma: vec![Rat::one(); k],
        chains: b.chains.into_values().collect(),
    };
    for (i, g) in form.gamma.clone().iter().enumerate() {
        debug_assert!(g.is_one());
        let residual = spec.generator(i).div(&form.ratio_from_form(&unit(k, i))?);
        if !residual.is_scalar() {
            return Err(Error::Structure(format!(
                "generator {} leaves the non-telescoping residual {residual}",
                i + 1
            )));
        }
        form.gamma[i] = residual.scalar().clone();
    }
    if !gcd(&form.c_poly(), &form.d_poly()).is_constant() {
        return Err(Error::Structure("C and D share a factor".into()));
    }
    Ok(form)
}

fn merge_factors(mut fs: Vec<(MultiPoly, u32)>) -> Vec<(MultiPoly, u32)> {
    fs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    for (p, e) in fs {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// Integer shifts `h` for which `gcd(q(t), p(t+h))` may be nontrivial.
fn dispersion_candidates(q: &UniPoly, p: &UniPoly) -> Vec<i64> {
    if q.degree() == 1 && p.degree() == 1 {
        // p(t+h) ∝ q(t) forces h from the constant terms.
        let (qa, qb) = (q.coeff(1), q.coeff(0));
        let (pa, pb) = (p.coeff(1), p.coeff(0));
        if qa != pa {
            return vec![];
        }
        let h = (qb - pb) / pa;
        return to_i64(&h).into_iter().collect();
    }
    let bound = q.cauchy_bound() + p.cauchy_bound();
    let h = to_i64(&bound.ceil()).unwrap_or(i64::MAX / 4).min(10_000);
    (-h..=h).collect()
}

/// Refines univariate pieces so that any two are either integer shifts of
/// each other or coprime under every integer shift.
fn shift_basis(items: Vec<(UniPoly, Vec<i64>)>) -> Vec<(UniPoly, Vec<i64>)> {
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let mut done: Vec<(UniPoly, Vec<i64>)> = Vec::new();
    let mut work = items;
    work.reverse();
    'next: while let Some((p, e)) = work.pop() {
        if p.degree() == 0 {
            continue;
        }
        if let Some(slot) = done.iter_mut().find(|(q, _)| *q == p) {
            slot.1 = add(&slot.1, &e);
            continue;
        }
        for idx in 0..done.len() {
            let q = done[idx].0.clone();
            for h in dispersion_candidates(&q, &p) {
                let ph = p.shift_int(h);
                if ph == q {
                    continue;
                }
                let g = q.gcd(&ph);
                if g.degree() == 0 {
                    continue;
                }
                let (_, eq) = done.remove(idx);
                let q_rest = q.div_exact(&g).expect("gcd divides").primitive();
                let p_rest = ph.div_exact(&g).expect("gcd divides").shift_int(-h).primitive();
                work.push((p_rest, e.clone()));
                work.push((g.shift_int(-h).primitive(), e));
                work.push((q_rest, eq.clone()));
                work.push((g, eq));
                continue 'next;
            }
        }
        done.push((p, e));
    }
    done.retain(|(_, e)| e.iter().any(|&x| x != 0));
    done
}

/// `w` with `v·w = 1` for primitive `v`.
fn unimodular_partner(v: &[i64]) -> Vec<i64> {
    let k = v.len();
    let mut g = 0i64;
    let mut w = vec![0i64; k];
    for i in 0..k {
        if v[i] == 0 {
            continue;
        }
        if g == 0 {
            g = v[i];
            w[i] = 1;
            continue;
        }
        let ext = g.extended_gcd(&v[i]);
        for x in w.iter_mut() {
            *x *= ext.x;
        }
        w[i] = ext.y;
        g = ext.gcd;
    }
    if g < 0 {
        for x in w.iter_mut() {
            *x = -*x;
        }
    }
    debug_assert_eq!(v.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>(), 1);
    w
}

/// Exponent function of one orbit along `u`, from the per-generator
/// exponents `e_i(c)` of `ρ(t + c)`: `E_{u+e_i}(c) = E_u(c) + e_i(c − v·u)`.
fn compose_exponents(fam: &Family<i64>, v: &[i64], u: &[i64]) -> BTreeMap<i64, i64> {
    let mut out: BTreeMap<i64, i64> = BTreeMap::new();
    let mut pos = vec![0i64; v.len()];
    let bump = |out: &mut BTreeMap<i64, i64>, i: usize, shift: i64, sign: i64| {
        for (c, ex) in fam {
            if ex[i] != 0 {
                *out.entry(c + shift).or_default() += sign * ex[i];
            }
        }
    };
    for (i, &ui) in u.iter().enumerate() {
        for _ in 0..ui.unsigned_abs() {
            let vu: i64 = v.iter().zip(&pos).map(|(a, b)| a * b).sum();
            if ui > 0 {
                bump(&mut out, i, vu, 1);
                pos[i] += 1;
            } else {
                pos[i] -= 1;
                bump(&mut out, i, vu - v[i], -1);
            }
        }
    }
    out.retain(|_, x| *x != 0);
    out
}

fn simple_direction(b: &mut Builder, v: &[i64], pieces: Vec<(UniPoly, Vec<i64>)>) -> Result<()> {
    // Group pieces into orbits ρ(t + c).
    let mut orbits: Vec<(UniPoly, Family<i64>)> = Vec::new();
    'piece: for (p, e) in pieces {
        for (rho, fam) in orbits.iter_mut() {
            if let Some(c) = shift_offset(rho, &p) {
                fam.insert(c, e);
                continue 'piece;
            }
        }
        orbits.push((p, BTreeMap::from([(0, e)])));
    }
    let w = unimodular_partner(v);
    for (rho, fam) in orbits {
        let ew = compose_exponents(&fam, v, &w);
        let sigma: i64 = ew.values().sum();
        let (lo, hi) = match (ew.keys().next(), ew.keys().last()) {
            (Some(&l), Some(&h)) => (l, h),
            _ => continue,
        };
        // P(c) = −Σ_{t≤c} e_w(t);  M(c) = P(c) + σ·[c ≥ c*].
        let prefix = |c: i64| -> i64 { -ew.range(..=c).map(|(_, x)| x).sum::<i64>() };
        let m_of = |c: i64, cstar: i64| prefix(c) + if c >= cstar { sigma } else { 0 };
        let cstar = if sigma == 0 {
            lo
        } else {
            (lo..=hi + 1)
                .map(|cs| ((lo..=hi).map(|c| m_of(c, cs).abs()).sum::<i64>(), -cs))
                .min()
                .map(|(_, neg)| -neg)
                .expect("nonempty range")
        };
        for c in lo..=hi {
            let m = m_of(c, cstar);
            if m != 0 {
                b.telescope(rho.compose_linear(v, c), m);
            }
        }
        if sigma != 0 {
            let chain = b.chains.entry(v.to_vec()).or_insert_with(|| Chain {
                v: v.to_vec(),
                a: vec![],
                b: vec![],
            });
            let f = rho.shift_int(cstar);
            if sigma > 0 {
                chain.a.push((f, sigma as u32));
            } else {
                chain.b.push((f, (-sigma) as u32));
            }
            chain.a.sort();
            chain.b.sort();
        }
    }
    let _ = b.k;
    Ok(())
}

/// `c` with `p(t) = rho(t + c)`, if any.
fn shift_offset(rho: &UniPoly, p: &UniPoly) -> Option<i64> {
    let n = rho.degree();
    if p.degree() != n || p.lc() != rho.lc() {
        return None;
    }
    let c = (p.coeff(n - 1) - rho.coeff(n - 1)) / (rat(n as i64) * rho.lc());
    let c = to_i64(&c)?;
    (rho.shift_int(c) == *p).then_some(c)
}

/// Non-simple atoms grouped by integer shift: (representative, members with
/// their offsets `u`, `shift(rep, u) = member`).
type Orbit = (MultiPoly, Vec<(Vec<i64>, Vec<i64>)>);

fn nonsimple_orbits(atoms: Vec<(MultiPoly, Vec<i64>)>) -> Vec<Orbit> {
    let mut orbits: Vec<Orbit> = Vec::new();
    'atom: for (p, e) in atoms {
        for (rep, members) in orbits.iter_mut() {
            if let Some(u) = find_shift(rep, &p) {
                members.push((u, e));
                continue 'atom;
            }
        }
        let k = p.arity();
        orbits.push((p, vec![(vec![0; k], e)]));
    }
    orbits
}

/// `u` with `shift(p, u) = q`, if any.
pub(crate) fn find_shift(p: &MultiPoly, q: &MultiPoly) -> Option<Vec<i64>> {
    let n = p.total_degree();
    if q.total_degree() != n || n == 0 {
        return None;
    }
    let (pn, qn) = (p.homogeneous_part(n), q.homogeneous_part(n));
    if pn != qn {
        return None;
    }
    let k = p.arity();
    // Degree n−1 part: q_{n−1} − p_{n−1} = Σ u_j ∂_j p_n.
    let cols: Vec<MultiPoly> = (0..k).map(|j| pn.derivative(j)).collect();
    let rhs = &q.homogeneous_part(n - 1) - &p.homogeneous_part(n - 1);
    let mut monos: Vec<Vec<u32>> = cols.iter().chain([&rhs]).flat_map(|c| c.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    let coeff = |poly: &MultiPoly, e: &Vec<u32>| -> Rat {
        poly.terms().find(|(x, _)| *x == e).map_or_else(Rat::zero, |(_, c)| c.clone())
    };
    let a: Vec<Vec<Rat>> = monos.iter().map(|m| cols.iter().map(|c| coeff(c, m)).collect()).collect();
    let bvec: Vec<Rat> = monos.iter().map(|m| coeff(&rhs, m)).collect();
    if let Some(sol) = linalg::solve(&a, &bvec) {
        if let Some(u) = sol.iter().map(to_i64).collect::<Option<Vec<i64>>>() {
            if p.shift(&u).ok().as_ref() == Some(q) {
                return Some(u);
            }
        }
    }
    crate::geometry::Window::symmetric(k, 4)
        .points()
        .find(|u| p.shift(u).ok().as_ref() == Some(q))
}

/// Telescopes one non-simple orbit: `M(x) = Σ_{t≥1} e_d(x + t·d)` along a
/// direction `d = e_{i0}` that leaves the stabilizer.
fn nonsimple_orbit(b: &mut Builder, (rep, members): Orbit) -> Result<()> {
    let k = rep.arity();
    // Offsets are compared modulo the stabilizer {u : u·∇rep = 0}.
    let key = |u: &[i64]| -> MultiPoly {
        (0..k).fold(MultiPoly::zero(k), |acc, j| &acc + &rep.derivative(j).scale(&rat(u[j])))
    };
    let i0 = (0..k)
        .find(|&j| !rep.derivative(j).is_zero())
        .expect("nonconstant atom");
    let kd = key(&unit(k, i0));
    let (lead_e, lead_c) = kd.leading_term().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
    // Position along d of a key relative to a base key, if on the same line.
    let position = |x: &MultiPoly, base: &MultiPoly| -> Option<i64> {
        let diff = x - base;
        let tau = diff.terms().find(|(e, _)| **e == lead_e).map_or_else(Rat::zero, |(_, c)| c / &lead_c);
        let tau_i = to_i64(&tau)?;
        (diff == kd.scale(&tau)).then_some(tau_i)
    };
    // Lines: base member offset plus members at integer positions.
    let mut lines: Vec<(Vec<i64>, MultiPoly, BTreeMap<i64, i64>)> = Vec::new();
    for (u, e) in &members {
        let ku = key(u);
        let ed = e[i0];
        let mut placed = false;
        for (_, base, pts) in lines.iter_mut() {
            if let Some(t) = position(&ku, base) {
                *pts.entry(t).or_default() += ed;
                placed = true;
                break;
            }
        }
        if !placed {
            lines.push((u.clone(), ku, BTreeMap::from([(0, ed)])));
        }
    }
    for (u0, _, pts) in lines {
        let total: i64 = pts.values().sum();
        if total != 0 {
            return Err(Error::Structure(format!(
                "the shift family of the non-simple factor {} does not telescope",
                rep.shift(&u0)?
            )));
        }
        let (lo, hi) = (*pts.keys().next().unwrap(), *pts.keys().last().unwrap());
        for tau in lo..hi {
            let m: i64 = pts.range(tau + 1..).map(|(_, x)| x).sum();
            if m != 0 {
                let mut u = u0.clone();
                u[i0] += tau;
                b.telescope(rep.shift(&u)?, m);
            }
        }
    }
    Ok(())
}
