//! Ground-truth evaluation of a term by propagating its recurrences along
//! lattice paths.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{LatticeBox, Window};
use crate::rat::Rat;
use crate::structure::{closed_form_eval, Eval, PiecewiseStructure, Undefined};
use crate::termratio::{Seed, TermSpec};

/// One applied recurrence step: `f(to) = factor·f(from)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: Vec<i64>,
    pub to: Vec<i64>,
    pub factor: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// The value together with a replayable path certificate.
    Value { value: Rat, path: Vec<Step> },
    /// Every path inside the window hits a zero divisor or an exception.
    Blocked,
    /// The target lies outside the search window.
    OutOfWindow,
}

impl Propagation {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Propagation::Value { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Unit steps in lexicographic order.
pub fn unit_steps(k: usize) -> Vec<Vec<i64>> {
    let mut steps: Vec<Vec<i64>> = (0..k)
        .flat_map(|i| {
            [1, -1].map(|s| {
                let mut e = vec![0; k];
                e[i] = s;
                e
            })
        })
        .collect();
    steps.sort();
    steps
}

/// The factor `f(z + s)/f(z)` for a unit step `s`, if the recurrence allows
/// the step from a point with value `fz`.
fn step_factor(spec: &TermSpec, z: &[i64], s: &[i64], fz: &Rat) -> Result<Option<Rat>> {
    let i = s.iter().position(|&x| x != 0).expect("unit step");
    if s[i] > 0 {
        if spec.exceptions.contains(z) {
            return Ok(None);
        }
        let (a, b) = spec.recurrence_values(i, z)?;
        Ok((!b.is_zero()).then(|| a / b))
    } else {
        let w: Vec<i64> = z.iter().zip(s).map(|(x, d)| x + d).collect();
        if fz.is_zero() || spec.exceptions.contains(&w) {
            return Ok(None);
        }
        let (a, b) = spec.recurrence_values(i, &w)?;
        Ok((!a.is_zero()).then(|| b / a))
    }
}

/// Value at a point and the edge `(parent, factor)` it was reached by.
type Node = (Rat, Option<(Vec<i64>, Rat)>);

/// Breadth-first propagation tree from a seed inside a window.
#[derive(Clone, Debug)]
pub struct Flood {
    window: Window,
    nodes: HashMap<Vec<i64>, Node>,
}

impl Flood {
    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn value(&self, z: &[i64]) -> Option<&Rat> {
        self.nodes.get(z).map(|(v, _)| v)
    }

    pub fn reached(&self) -> usize {
        self.nodes.len()
    }

    pub fn propagation(&self, z: &[i64]) -> Propagation {
        if !self.window.contains(z) {
            return Propagation::OutOfWindow;
        }
        let Some((value, _)) = self.nodes.get(z) else {
            return Propagation::Blocked;
        };
        let mut path = Vec::new();
        let mut cur = z.to_vec();
        while let Some((_, Some((prev, factor)))) = self.nodes.get(&cur) {
            path.push(Step {
                from: prev.clone(),
                to: cur.clone(),
                factor: factor.clone(),
            });
            cur = prev.clone();
        }
        path.reverse();
        Propagation::Value {
            value: value.clone(),
            path,
        }
    }
}

fn bfs(spec: &TermSpec, seed: &Seed, window: &Window, target: Option<&[i64]>) -> Result<Flood> {
    bfs_with(spec, seed, window, target, &unit_steps(spec.arity()))
}

fn bfs_with(
    spec: &TermSpec,
    seed: &Seed,
    window: &Window,
    target: Option<&[i64]>,
    steps: &[Vec<i64>],
) -> Result<Flood> {
    let k = spec.arity();
    if seed.point.len() != k {
        return Err(Error::dim(k, seed.point.len()));
    }
    if window.arity() != k {
        return Err(Error::dim(k, window.arity()));
    }
    let mut nodes = HashMap::new();
    let mut queue = VecDeque::new();
    if window.contains(&seed.point) {
        nodes.insert(seed.point.clone(), (seed.value.clone(), None));
        queue.push_back(seed.point.clone());
    }
    while let Some(z) = queue.pop_front() {
        if target == Some(z.as_slice()) {
            break;
        }
        let fz = nodes[&z].0.clone();
        for s in steps {
            let w: Vec<i64> = z.iter().zip(s).map(|(a, b)| a + b).collect();
            if !window.contains(&w) || nodes.contains_key(&w) {
                continue;
            }
            if let Some(factor) = step_factor(spec, &z, s, &fz)? {
                nodes.insert(w.clone(), (&fz * &factor, Some((z.clone(), factor))));
                queue.push_back(w);
            }
        }
    }
    Ok(Flood {
        window: window.clone(),
        nodes,
    })
}

/// Default search window: bounding box of the endpoints grown by `2(k+1)`.
pub fn default_window(a: &[i64], b: &[i64]) -> Window {
    Window::around(&[a, b], 2 * (a.len() as i64 + 1))
}

/// `f(to)` from `f(from.point) = from.value` along a shortest admissible path.
pub fn propagate(spec: &TermSpec, from: &Seed, to: &[i64]) -> Result<Propagation> {
    if to.len() != spec.arity() {
        return Err(Error::dim(spec.arity(), to.len()));
    }
    propagate_in(spec, from, to, &default_window(&from.point, to))
}

pub fn propagate_in(spec: &TermSpec, from: &Seed, to: &[i64], window: &Window) -> Result<Propagation> {
    if !window.contains(to) {
        return Ok(Propagation::OutOfWindow);
    }
    Ok(bfs(spec, from, window, Some(to))?.propagation(to))
}

/// [`propagate_in`] with a caller-chosen order of the `2k` unit steps, which
/// changes tie-breaking between shortest paths.
pub fn propagate_with_steps(
    spec: &TermSpec,
    from: &Seed,
    to: &[i64],
    window: &Window,
    steps: &[Vec<i64>],
) -> Result<Propagation> {
    let mut sorted = steps.to_vec();
    sorted.sort();
    if sorted != unit_steps(spec.arity()) {
        return Err(Error::Precondition("steps must be a permutation of the unit steps ±e_i".into()));
    }
    if !window.contains(to) {
        return Ok(Propagation::OutOfWindow);
    }
    Ok(bfs_with(spec, from, window, Some(to), steps)?.propagation(to))
}

/// Propagates from the seed to every reachable point of `window`.
pub fn flood(spec: &TermSpec, seed: &Seed, window: &Window) -> Result<Flood> {
    bfs(spec, seed, window, None)
}

/// Replays a path certificate and returns the value it proves.
pub fn replay(spec: &TermSpec, from: &Seed, path: &[Step]) -> Result<Rat> {
    let mut cur = from.point.clone();
    let mut value = from.value.clone();
    for st in path {
        if st.from != cur {
            return Err(Error::Integrity("path certificate is not contiguous".into()));
        }
        let s: Vec<i64> = st.to.iter().zip(&st.from).map(|(a, b)| a - b).collect();
        if s.iter().map(|x| x.abs()).sum::<i64>() != 1 {
            return Err(Error::Integrity("path certificate uses a non-unit step".into()));
        }
        match step_factor(spec, &cur, &s, &value)? {
            Some(f) if f == st.factor => value *= f,
            _ => return Err(Error::Integrity(format!("step {:?} -> {:?} is not admissible", st.from, st.to))),
        }
        cur = st.to.clone();
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub z: Vec<i64>,
    pub closed: Rat,
    pub oracle: Rat,
}

/// Outcome of comparing the closed form with the oracle on a window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    pub checked: u64,
    pub equal: u64,
    pub on_h: u64,
    pub d_zero: u64,
    pub unknown: u64,
    pub blocked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl GridReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `closed_form_eval` against propagation from the spec's seed at
/// every point of `window`.
pub fn grid_compare(ps: &PiecewiseStructure, spec: &TermSpec, window: &Window) -> Result<GridReport> {
    let seed = spec
        .seed
        .as_ref()
        .ok_or_else(|| Error::Precondition("grid_compare needs a seed".into()))?;
    let k = spec.arity();
    if window.arity() != k {
        return Err(Error::dim(k, window.arity()));
    }
    let outer = Window::around(&[&window.lo, &window.hi, &seed.point], 2 * (k as i64 + 1));
    let fl = flood(spec, seed, &outer)?;
    let mut rep = GridReport::default();
    for z in window.points() {
        rep.checked += 1;
        match closed_form_eval(ps, &z)? {
            Eval::Undefined(Undefined::OnH) => rep.on_h += 1,
            Eval::Undefined(Undefined::DZero) => rep.d_zero += 1,
            Eval::Undefined(_) => rep.unknown += 1,
            Eval::Value(closed) => match fl.value(&z) {
                None => rep.blocked += 1,
                Some(o) if *o == closed => rep.equal += 1,
                Some(o) => rep.mismatches.push(Mismatch {
                    z,
                    closed,
                    oracle: o.clone(),
                }),
            },
        }
    }
    Ok(rep)
}

/// A box of size `n` inside `window` on which every propagated value is
/// defined and nonzero.
pub fn nonzero_box_search(spec: &TermSpec, n: u64, window: &Window) -> Result<Option<LatticeBox>> {
    let seed = spec
        .seed
        .as_ref()
        .ok_or_else(|| Error::Precondition("nonzero_box_search needs a seed".into()))?;
    let k = spec.arity();
    if window.arity() != k {
        return Err(Error::dim(k, window.arity()));
    }
    let outer = Window::around(&[&window.lo, &window.hi, &seed.point], 2 * (k as i64 + 1));
    let fl = flood(spec, seed, &outer)?;
    let n_i = n as i64;
    if window.lo.iter().zip(&window.hi).any(|(a, b)| b - a < n_i) {
        return Ok(None);
    }
    let corners = Window {
        lo: window.lo.clone(),
        hi: window.hi.iter().map(|h| h - n_i).collect(),
    };
    for c in corners.points() {
        let bx = LatticeBox::new(c, n);
        if bx.points().all(|z| fl.value(&z).is_some_and(|v| !v.is_zero())) {
            return Ok(Some(bx));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::rat::rat;

    fn spec(k: usize, gens: &[(&str, &str)]) -> TermSpec {
        let pairs: Vec<_> = gens
            .iter()
            .map(|(n, d)| (parse_poly(n, k).unwrap(), parse_poly(d, k).unwrap()))
            .collect();
        TermSpec::from_fractions(k, &pairs).unwrap()
    }

    fn binomial() -> TermSpec {
        spec(2, &[("z1 + 1", "z1 + 1 - z2"), ("z1 - z2", "z2 + 1")])
            .with_seed(vec![0, 0], rat(1))
            .unwrap()
    }

    #[test]
    fn propagate_examples() {
        let b = binomial();
        let seed = b.seed.clone().unwrap();
        let p = propagate(&b, &seed, &[4, 2]).unwrap();
        assert_eq!(p.value(), Some(&rat(6)));
        if let Propagation::Value { path, .. } = &p {
            assert_eq!(path.len(), 6);
            assert_eq!(replay(&b, &seed, path).unwrap(), rat(6));
        }
        assert_eq!(propagate(&b, &seed, &[0, 0]).unwrap().value(), Some(&rat(1)));
        assert_eq!(propagate(&b, &seed, &[2, 5]).unwrap().value(), Some(&rat(0)));
    }

    #[test]
    fn pascal_on_nonnegative_quadrant() {
        let b = binomial();
        let seed = b.seed.clone().unwrap();
        let fl = flood(&b, &seed, &Window::symmetric(2, 10)).unwrap();
        let mut row = vec![rat(1)];
        for n in 0..8i64 {
            for (j, c) in row.iter().enumerate() {
                assert_eq!(fl.value(&[n, j as i64]), Some(c), "C({n},{j})");
            }
            let mut next = vec![rat(1)];
            next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
            next.push(rat(1));
            row = next;
        }
    }

    #[test]
    fn backward_from_zero_is_blocked() {
        let s = spec(1, &[("z1", "1")]).with_seed(vec![0], rat(0)).unwrap();
        let seed = s.seed.clone().unwrap();
        assert_eq!(propagate(&s, &seed, &[3]).unwrap().value(), Some(&rat(0)));
        assert_eq!(propagate(&s, &seed, &[-1]).unwrap(), Propagation::Blocked);
        assert_eq!(propagate_in(&s, &seed, &[9], &Window::symmetric(1, 2)).unwrap(), Propagation::OutOfWindow);
    }

    #[test]
    fn nonzero_boxes() {
        let b = binomial();
        let bx = nonzero_box_search(&b, 2, &Window::cube(&[0, 0], 10)).unwrap().unwrap();
        assert!(bx.points().all(|z| z[0] >= z[1] && z[1] >= 0));
        let one = spec(2, &[("1", "1"), ("1", "1")]).with_seed(vec![0, 0], rat(1)).unwrap();
        let w = Window::cube(&[3, -2], 6);
        assert_eq!(nonzero_box_search(&one, 3, &w).unwrap(), Some(LatticeBox::new(vec![3, -2], 3)));
        let zero = one.clone().with_seed(vec![0, 0], rat(0)).unwrap();
        assert_eq!(nonzero_box_search(&zero, 1, &w).unwrap(), None);
    }
}
