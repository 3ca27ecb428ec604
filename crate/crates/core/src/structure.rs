//! Piecewise closed forms over polyhedral regions, with factorial and
//! Pochhammer normal forms.

use log::{debug, info, warn};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    arrangement, dot, erode, is_measure_zero, s_path, HalfSpace, Hyperplane, MeasureZero, MeasureZeroSet,
    PolyhedralRegion, Window,
};
use crate::oracle::{flood, propagate, Flood, Propagation};
use crate::oresato::{decompose, gp_eval, gp_range, OreSatoForm};
use crate::poly::{find_nonzero_in_box, MultiPoly, UniPoly};
use crate::rat::{pow_i, rat, Rat};
use crate::termratio::TermSpec;

/// One region with its base point and base value (`None` when the seed does
/// not reach the base point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub region: PolyhedralRegion,
    pub z0: Vec<i64>,
    pub f0: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseStructure {
    pub form: OreSatoForm,
    pub h: MeasureZeroSet,
    pub pieces: Vec<Piece>,
}

/// Why a value is not available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Undefined {
    /// The point lies in no piece.
    OnH,
    /// `D(z) = 0`.
    DZero,
    /// The piece's base value is unknown.
    UnknownValue,
    /// The point is outside the form's region.
    OutsideRegion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eval {
    Value(Rat),
    Undefined(Undefined),
}

impl Eval {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Eval::Value(v) => Some(v),
            Eval::Undefined(_) => None,
        }
    }
}

const SPIRAL_RADIUS: i64 = 24;
const FLOOD_RADIUS: i64 = 10;

/// Runs the full construction: decomposition, exceptional hyperplanes,
/// arrangement, erosion, base points and base values.
pub fn build_structure(spec: &TermSpec) -> Result<PiecewiseStructure> {
    let k = spec.arity();
    if let Some(p) = &spec.zero_divisor_witness {
        return zero_divisor_structure(k, p);
    }
    let seed = spec
        .seed
        .as_ref()
        .ok_or_else(|| Error::Precondition("build_structure needs a seed value".into()))?;
    let form = decompose(spec)?;
    let cd = &form.c_poly() * &form.d_poly();
    let d = i64::from(cd.total_degree());

    let mut h2: Vec<Hyperplane> = spec.exceptions.planes().to_vec();
    for ch in &form.chains {
        // max |v·w| over S = [−2d, 2d]^k ± e_i.
        let span: i64 = ch.v.iter().map(|x| x.abs()).sum::<i64>() * 2 * d
            + ch.v.iter().map(|x| x.abs()).max().unwrap_or(0);
        let mut roots: Vec<i64> = Vec::new();
        for (p, _) in ch.a.iter().chain(&ch.b) {
            roots.extend(p.integer_roots()?.roots);
        }
        roots.sort();
        roots.dedup();
        for r in roots {
            // a_v(v·z + j) = 0 on v·z = r − j for j ∈ [lo, hi).
            for j in -span..span {
                h2.extend(Hyperplane::new(ch.v.clone(), r - j)?);
            }
        }
    }
    let h2 = MeasureZeroSet::new(h2);
    debug!("|H2| = {}", h2.len());
    let cells = arrangement(h2.planes(), k);
    let reach = flood(spec, seed, &Window::around(&[&seed.point], FLOOD_RADIUS))?;
    let mut h = h2.clone();
    let mut pieces = Vec::new();
    for cell in cells {
        if let MeasureZero::Zero { cover } = is_measure_zero(&cell) {
            h.extend(cover.planes().iter().cloned());
            continue;
        }
        // Unit boxes are needed for lattice-path connectivity even when d = 0.
        let (rp, cover) = erode(&cell, d.max(1) as u64);
        h.extend(cover.planes().iter().cloned());
        let (z0, f0) = match reached_base_point(&reach, &rp, &cd, &seed.point)? {
            Some((z0, f0)) => (z0, Some(f0)),
            None => {
                let z0 = base_point(&rp, &cd, &seed.point)?;
                let f0 = match propagate(spec, seed, &z0)? {
                    Propagation::Value { value, .. } => Some(value),
                    other => {
                        info!("base point {z0:?} is not reachable from the seed: {other:?}");
                        None
                    }
                };
                (z0, f0)
            }
        };
        check_connectivity(&cell, &rp, &z0)?;
        pieces.push(Piece { region: rp, z0, f0 });
    }
    Ok(PiecewiseStructure { form, h, pieces })
}

fn zero_divisor_structure(k: usize, p: &MultiPoly) -> Result<PiecewiseStructure> {
    if p.is_constant() {
        return Err(Error::Precondition("zero-divisor witness must be nonconstant".into()));
    }
    let p = p.normalized();
    let bx = crate::geometry::LatticeBox::new(vec![0; k], u64::from(p.total_degree()));
    let z0 = find_nonzero_in_box(&p, &bx)?.expect("nonzero polynomial");
    Ok(PiecewiseStructure {
        form: OreSatoForm {
            d: vec![(p, 1)],
            ..OreSatoForm::trivial(k)
        },
        h: MeasureZeroSet::empty(),
        pieces: vec![Piece {
            region: PolyhedralRegion::whole(k),
            z0,
            f0: Some(Rat::zero()),
        }],
    })
}

/// The point of `r` nearest to `near` (L1, then lexicographic) that the seed
/// reaches and where `cd` does not vanish, with its propagated value.
fn reached_base_point(
    reach: &Flood,
    r: &PolyhedralRegion,
    cd: &MultiPoly,
    near: &[i64],
) -> Result<Option<(Vec<i64>, Rat)>> {
    let mut best: Option<(i64, Vec<i64>)> = None;
    for z in reach.window().points() {
        let dist: i64 = z.iter().zip(near).map(|(a, b)| (a - b).abs()).sum();
        if best.as_ref().is_some_and(|(d, _)| *d <= dist) {
            continue;
        }
        if reach.value(&z).is_some() && r.contains(&z)? && !cd.eval_int(&z)?.is_zero() {
            best = Some((dist, z));
        }
    }
    Ok(best.map(|(_, z)| {
        let v = reach.value(&z).expect("reached").clone();
        (z, v)
    }))
}

/// A point of `r` with `cd(z) ≠ 0`, searched in growing shells around `near`
/// and otherwise in a large box inside `r`.
fn base_point(r: &PolyhedralRegion, cd: &MultiPoly, near: &[i64]) -> Result<Vec<i64>> {
    let k = r.arity();
    for radius in 0..=SPIRAL_RADIUS {
        let shell = Window::around(&[near], radius);
        for z in shell.points() {
            let on_shell = z.iter().zip(near).any(|(a, b)| (a - b).abs() == radius);
            if on_shell && r.contains(&z)? && !cd.eval_int(&z)?.is_zero() {
                return Ok(z);
            }
        }
    }
    let bx = r
        .large_box(u64::from(cd.total_degree()))
        .ok_or_else(|| Error::Integrity("full-dimensional cell without large boxes".into()))?;
    let z = find_nonzero_in_box(cd, &bx)?.ok_or_else(|| Error::Integrity("C·D vanishes on a box".into()))?;
    debug_assert_eq!(z.len(), k);
    Ok(z)
}

/// Checks on a few sampled points that the eroded region is lattice-path
/// connected inside its cell.
fn check_connectivity(cell: &PolyhedralRegion, rp: &PolyhedralRegion, z0: &[i64]) -> Result<()> {
    let k = cell.arity();
    let steps: Vec<Vec<i64>> = (0..k)
        .flat_map(|i| {
            [1, -1].map(|s| {
                let mut e = vec![0; k];
                e[i] = s;
                e
            })
        })
        .collect();
    let samples: Vec<Vec<i64>> = Window::around(&[z0], 3)
        .points()
        .filter(|z| rp.contains(z).unwrap_or(false))
        .step_by(7)
        .take(4)
        .collect();
    for z in samples {
        if s_path(z0, &z, cell, &steps)?.is_none() {
            warn!("no lattice path from {z0:?} to {z:?} inside the cell");
        }
    }
    Ok(())
}

impl PiecewiseStructure {
    pub fn arity(&self) -> usize {
        self.form.k
    }

    pub fn piece_of(&self, z: &[i64]) -> Result<Option<usize>> {
        for (i, p) in self.pieces.iter().enumerate() {
            if p.region.contains(z)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// The product `∏_{v} gp_{j=v·z0}^{v·z} a_v(j)/b_v(j)`.
fn chain_product(form: &OreSatoForm, z0: &[i64], z: &[i64]) -> Result<Rat> {
    let mut acc = Rat::one();
    for ch in &form.chains {
        let (a, b) = (ch.a_poly(), ch.b_poly());
        let mut zero_at = None;
        let val = gp_eval(dot(&ch.v, z0), dot(&ch.v, z), |j| {
            let (x, y) = (a.eval_int(j), b.eval_int(j));
            if x.is_zero() || y.is_zero() {
                zero_at = Some(j);
                Rat::zero()
            } else {
                x / y
            }
        });
        match val {
            Ok(v) => acc *= v,
            Err(_) => {
                return Err(Error::Integrity(format!(
                    "chain {:?} has a zero factor at j = {} between {z0:?} and {z:?}",
                    ch.v,
                    zero_at.unwrap_or_default()
                )))
            }
        }
    }
    Ok(acc)
}

/// `f(z) = f(z0)·C(z)/C(z0)·D(z0)/D(z)·γ^{z−z0}·∏ gp(...)` on the piece
/// containing `z`.
pub fn closed_form_eval(ps: &PiecewiseStructure, z: &[i64]) -> Result<Eval> {
    let k = ps.arity();
    if z.len() != k {
        return Err(Error::dim(k, z.len()));
    }
    let Some(i) = ps.piece_of(z)? else {
        return Ok(Eval::Undefined(Undefined::OnH));
    };
    let piece = &ps.pieces[i];
    let form = &ps.form;
    let dz = form.d_poly().eval_int(z)?;
    if dz.is_zero() {
        return Ok(Eval::Undefined(Undefined::DZero));
    }
    let Some(f0) = &piece.f0 else {
        return Ok(Eval::Undefined(Undefined::UnknownValue));
    };
    if f0.is_zero() {
        return Ok(Eval::Value(Rat::zero()));
    }
    let z0 = &piece.z0;
    let cz = form.c_poly().eval_int(z)?;
    let (cz0, dz0) = (form.c_poly().eval_int(z0)?, form.d_poly().eval_int(z0)?);
    let diff: Vec<i64> = z.iter().zip(z0).map(|(a, b)| a - b).collect();
    let value = f0 * cz / cz0 * dz0 / dz * form.gamma_pow(&diff) * chain_product(form, z0, z)?;
    Ok(Eval::Value(value))
}

/// `p(c − t)`.
fn reflect(p: &UniPoly, c: i64) -> UniPoly {
    let s = p.shift_int(c);
    UniPoly::from_coeffs(
        s.coeffs()
            .iter()
            .enumerate()
            .map(|(i, x)| if i % 2 == 1 { -x.clone() } else { x.clone() })
            .collect(),
    )
}

/// `∏_{j=1}^{w·z+n} a(j)/b(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialChain {
    pub w: Vec<i64>,
    pub a: Vec<(UniPoly, u32)>,
    pub b: Vec<(UniPoly, u32)>,
    pub n: i64,
}

impl FactorialChain {
    pub fn length(&self, z: &[i64]) -> i64 {
        dot(&self.w, z) + self.n
    }
}

/// `f(z) = scalar·γ^z·C(z)/D(z)·∏_chains ∏_{j=1}^{w·z+n} a(j)/b(j)` on `region`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialForm {
    pub region: PolyhedralRegion,
    pub piece: usize,
    pub c: Vec<(MultiPoly, u32)>,
    pub d: Vec<(MultiPoly, u32)>,
    pub gamma: Vec<Rat>,
    /// `None` when the piece's base value is unknown.
    pub scalar: Option<Rat>,
    pub chains: Vec<FactorialChain>,
}

fn factor_product(k: usize, fs: &[(MultiPoly, u32)]) -> MultiPoly {
    fs.iter().fold(MultiPoly::one(k), |acc, (p, e)| &acc * &p.pow(*e))
}

fn uni_factor_product(fs: &[(UniPoly, u32)]) -> UniPoly {
    fs.iter().fold(UniPoly::one(), |acc, (p, e)| &acc * &p.pow(*e))
}

impl FactorialForm {
    pub fn arity(&self) -> usize {
        self.region.arity()
    }

    pub fn c_poly(&self) -> MultiPoly {
        factor_product(self.arity(), &self.c)
    }

    pub fn d_poly(&self) -> MultiPoly {
        factor_product(self.arity(), &self.d)
    }

    /// True when every product length `w·z + n` is nonnegative on the region
    /// (decided over the rationals).
    pub fn lengths_nonnegative(&self) -> bool {
        let poly = self.region.tightened();
        self.chains.iter().all(|ch| {
            let f: Vec<Rat> = ch.w.iter().map(|&x| rat(x)).collect();
            match poly.range_of(&f) {
                None => true,
                Some((Some(lo), _)) => lo.value + rat(ch.n) >= Rat::zero(),
                Some((None, _)) => false,
            }
        })
    }

    fn gamma_pow(&self, z: &[i64]) -> Rat {
        self.gamma.iter().zip(z).map(|(g, &e)| pow_i(g, e)).product()
    }

    /// Makes every chain factor primitive with positive leading coefficient.
    /// A content `c` of a factor with exponent `e` in `∏_{j=1}^{w·z+n}`
    /// contributes `c^{e·(w·z+n)}`, moved into `γ` and the scalar.
    fn normalize_factors(&mut self) {
        for ch in &mut self.chains {
            for (fs, sign) in [(&mut ch.a, 1i64), (&mut ch.b, -1)] {
                for (p, e) in fs.iter_mut() {
                    let (c, prim) = p.split_content();
                    if c.is_one() {
                        continue;
                    }
                    let exp = sign * i64::from(*e);
                    for (g, &wi) in self.gamma.iter_mut().zip(&ch.w) {
                        *g *= pow_i(&c, exp * wi);
                    }
                    if let Some(s) = self.scalar.as_mut() {
                        *s *= pow_i(&c, exp * ch.n);
                    }
                    *p = prim;
                }
            }
        }
    }
}

/// Splits every piece by the signs of `v·(z − z0)` and rewrites its chains
/// as products starting at `j = 1`.
pub fn split_factorial(ps: &PiecewiseStructure) -> Result<Vec<FactorialForm>> {
    let form = &ps.form;
    let mut out = Vec::new();
    for (idx, piece) in ps.pieces.iter().enumerate() {
        let z0 = &piece.z0;
        let scalar = match &piece.f0 {
            Some(f0) => {
                let neg: Vec<i64> = z0.iter().map(|x| -x).collect();
                let (c0, d0) = (form.c_poly().eval_int(z0)?, form.d_poly().eval_int(z0)?);
                Some(f0 * d0 / c0 * form.gamma_pow(&neg))
            }
            None => None,
        };
        let nv = form.chains.len();
        for mask in 0..(1u64 << nv) {
            let mut region = piece.region.clone();
            let mut chains = Vec::with_capacity(nv);
            for (bit, ch) in form.chains.iter().enumerate() {
                let s0 = dot(&ch.v, z0);
                if mask >> bit & 1 == 0 {
                    // v·(z − z0) ≥ 0: ā(j) = a(j + v·z0 − 1), n = −v·z0.
                    region = region.with(HalfSpace::geq(ch.v.clone(), s0)?);
                    chains.push(FactorialChain {
                        w: ch.v.clone(),
                        a: ch.a.iter().map(|(p, e)| (p.shift_int(s0 - 1), *e)).collect(),
                        b: ch.b.iter().map(|(p, e)| (p.shift_int(s0 - 1), *e)).collect(),
                        n: -s0,
                    });
                } else {
                    // v·(z − z0) < 0: ā(j) = b(v·z0 − j), b̄(j) = a(v·z0 − j), n = v·z0.
                    region = region.with(HalfSpace::lt(ch.v.clone(), s0)?);
                    chains.push(FactorialChain {
                        w: ch.v.iter().map(|x| -x).collect(),
                        a: ch.b.iter().map(|(p, e)| (reflect(p, s0), *e)).collect(),
                        b: ch.a.iter().map(|(p, e)| (reflect(p, s0), *e)).collect(),
                        n: s0,
                    });
                }
            }
            if nv > 0 && !region.has_integer_point() {
                continue;
            }
            let mut ff = FactorialForm {
                region: if nv > 0 { region.pruned() } else { region },
                piece: idx,
                c: form.c.clone(),
                d: form.d.clone(),
                gamma: form.gamma.clone(),
                scalar: scalar.clone(),
                chains,
            };
            ff.normalize_factors();
            out.push(ff);
        }
    }
    Ok(out)
}

/// Evaluates a factorial form at a point of its region.
pub fn factorial_eval(ff: &FactorialForm, z: &[i64]) -> Result<Eval> {
    if z.len() != ff.arity() {
        return Err(Error::dim(ff.arity(), z.len()));
    }
    if !ff.region.contains(z)? {
        return Ok(Eval::Undefined(Undefined::OutsideRegion));
    }
    let dz = ff.d_poly().eval_int(z)?;
    if dz.is_zero() {
        return Ok(Eval::Undefined(Undefined::DZero));
    }
    let Some(scalar) = &ff.scalar else {
        return Ok(Eval::Undefined(Undefined::UnknownValue));
    };
    let mut acc = scalar * ff.gamma_pow(z) * ff.c_poly().eval_int(z)? / dz;
    for ch in &ff.chains {
        let len = ch.length(z);
        if len < 0 {
            return Err(Error::Integrity(format!("negative product length {len} at {z:?}")));
        }
        let (a, b) = (uni_factor_product(&ch.a), uni_factor_product(&ch.b));
        for j in 1..=len {
            let (x, y) = (a.eval_int(j), b.eval_int(j));
            if x.is_zero() || y.is_zero() {
                return Err(Error::Integrity(format!("zero factor at j = {j} in chain {:?}", ch.w)));
            }
            acc *= x / y;
        }
    }
    Ok(Eval::Value(acc))
}

/// `(m)_{v·z + r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochSymbol {
    pub m: Rat,
    pub v: Vec<i64>,
    pub r: i64,
}

/// `f(z) = scalar·γ^z·C(z)/D(z)·∏(m_i)_{v_i·z+r_i} / ∏(n_j)_{w_j·z+s_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochhammerForm {
    pub region: PolyhedralRegion,
    pub piece: usize,
    pub c: Vec<(MultiPoly, u32)>,
    pub d: Vec<(MultiPoly, u32)>,
    pub gamma: Vec<Rat>,
    pub scalar: Option<Rat>,
    pub num: Vec<PochSymbol>,
    pub den: Vec<PochSymbol>,
}

/// Rising factorial `(m)_r = m(m+1)···(m+r−1)`.
pub fn rising(m: &Rat, r: i64) -> Result<Rat> {
    if r < 0 {
        return Err(Error::Integrity(format!("negative Pochhammer length {r}")));
    }
    let mut acc = Rat::one();
    let mut x = m.clone();
    for _ in 0..r {
        acc *= &x;
        x += Rat::one();
    }
    Ok(acc)
}

/// Rewrites a factorial form with Pochhammer symbols; every chain factor
/// must split into linear factors over the rationals.
pub fn to_pochhammer(ff: &FactorialForm) -> Result<PochhammerForm> {
    let k = ff.arity();
    let mut gamma = ff.gamma.clone();
    let mut scalar = ff.scalar.clone();
    let (mut num, mut den) = (Vec::new(), Vec::new());
    for ch in &ff.chains {
        for (fs, upper) in [(&ch.a, true), (&ch.b, false)] {
            for (p, e) in fs {
                let roots = p.rational_roots()?;
                if roots.cofactor.degree() > 0 {
                    return Err(Error::Splitting(format!("{p} does not split into linear factors over Q")));
                }
                // p(j) = α·∏(j − a_i); ∏_{j=1}^{L} p(j) = α^L·∏(1 − a_i)_L.
                let alpha = roots.cofactor.lc();
                let exp = i64::from(*e);
                let sign = if upper { 1 } else { -1 };
                for (g, &wi) in gamma.iter_mut().zip(&ch.w) {
                    *g *= pow_i(&alpha, sign * exp * wi);
                }
                if let Some(s) = scalar.as_mut() {
                    *s *= pow_i(&alpha, sign * exp * ch.n);
                }
                let list = if upper { &mut num } else { &mut den };
                for r in &roots.roots {
                    for _ in 0..exp {
                        list.push(PochSymbol {
                            m: Rat::one() - r,
                            v: ch.w.clone(),
                            r: ch.n,
                        });
                    }
                }
            }
        }
    }
    debug_assert_eq!(gamma.len(), k);
    Ok(PochhammerForm {
        region: ff.region.clone(),
        piece: ff.piece,
        c: ff.c.clone(),
        d: ff.d.clone(),
        gamma,
        scalar,
        num,
        den,
    })
}

pub fn pochhammer_eval(pf: &PochhammerForm, z: &[i64]) -> Result<Eval> {
    let k = pf.region.arity();
    if z.len() != k {
        return Err(Error::dim(k, z.len()));
    }
    if !pf.region.contains(z)? {
        return Ok(Eval::Undefined(Undefined::OutsideRegion));
    }
    let dz = factor_product(k, &pf.d).eval_int(z)?;
    if dz.is_zero() {
        return Ok(Eval::Undefined(Undefined::DZero));
    }
    let Some(scalar) = &pf.scalar else {
        return Ok(Eval::Undefined(Undefined::UnknownValue));
    };
    let g: Rat = pf.gamma.iter().zip(z).map(|(g, &e)| pow_i(g, e)).product();
    let mut acc = scalar * g * factor_product(k, &pf.c).eval_int(z)? / dz;
    for s in &pf.num {
        acc *= rising(&s.m, dot(&s.v, z) + s.r)?;
    }
    for s in &pf.den {
        let x = rising(&s.m, dot(&s.v, z) + s.r)?;
        if x.is_zero() {
            return Err(Error::Integrity(format!("Pochhammer symbol ({})_{} vanishes", s.m, dot(&s.v, z) + s.r)));
        }
        acc /= x;
    }
    Ok(Eval::Value(acc))
}

/// Index range touched by a chain between two points (for diagnostics).
pub fn chain_range(v: &[i64], z0: &[i64], z: &[i64]) -> std::ops::Range<i64> {
    gp_range(dot(v, z0), dot(v, z)).0
}
