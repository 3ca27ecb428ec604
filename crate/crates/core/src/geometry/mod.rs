//! Integer-lattice geometry: hyperplanes, half-spaces, polyhedral regions,
//! hyperplane covers, boxes, erosion, arrangements and lattice paths.

mod cells;
mod fm;
mod path;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cells::{arrangement, characteristic_certificates, erode, is_measure_zero, MeasureZero};
pub use fm::{LinCon, Polyhedron};
pub use path::{hull_points, s_path, s_path_with_margin, Hull};

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// `{z : v·z = n}` in canonical form: `v` primitive with its first nonzero
/// entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHyperplane")]
pub struct Hyperplane {
    v: Vec<i64>,
    n: i64,
}

#[derive(Deserialize)]
struct RawHyperplane {
    v: Vec<i64>,
    n: i64,
}

impl TryFrom<RawHyperplane> for Hyperplane {
    type Error = Error;
    fn try_from(r: RawHyperplane) -> Result<Self> {
        Hyperplane::new(r.v, r.n)?.ok_or_else(|| {
            Error::Precondition("hyperplane contains no integer points".into())
        })
    }
}

impl Hyperplane {
    /// Canonicalizes `v·z = n`; `Ok(None)` when the plane has no integer
    /// points (the scaled right-hand side is not integral).
    pub fn new(v: Vec<i64>, n: i64) -> Result<Option<Self>> {
        let g = gcd_all(&v);
        if g == 0 {
            return Err(Error::Precondition("hyperplane normal must be nonzero".into()));
        }
        let sign = if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -1 } else { 1 };
        if n % g != 0 {
            return Ok(None);
        }
        Ok(Some(Hyperplane {
            v: v.iter().map(|x| sign * x / g).collect(),
            n: sign * n / g,
        }))
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.v.len()
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        dot(&self.v, z) == self.n
    }

    /// The open sides `v·z > n` and `v·z < n`.
    pub fn sides(&self) -> (HalfSpace, HalfSpace) {
        (
            HalfSpace::new(self.v.clone(), self.n).expect("nonzero normal"),
            HalfSpace::new(self.v.iter().map(|x| -x).collect(), -self.n).expect("nonzero normal"),
        )
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·z = {}", self.v, self.n)
    }
}

/// `{z : v·z > n}`, stored with `v` primitive (`n` rounded down accordingly).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHalfSpace")]
pub struct HalfSpace {
    v: Vec<i64>,
    #[serde(rename = "gt")]
    n: i64,
}

#[derive(Deserialize)]
struct RawHalfSpace {
    v: Vec<i64>,
    gt: i64,
}

impl TryFrom<RawHalfSpace> for HalfSpace {
    type Error = Error;
    fn try_from(r: RawHalfSpace) -> Result<Self> {
        HalfSpace::new(r.v, r.gt)
    }
}

impl HalfSpace {
    pub fn new(v: Vec<i64>, n: i64) -> Result<Self> {
        let g = gcd_all(&v);
        if g == 0 {
            return Err(Error::Precondition("half-space normal must be nonzero".into()));
        }
        // On the lattice v·z > n  ⇔  (v/g)·z > floor(n/g).
        Ok(HalfSpace {
            v: v.iter().map(|x| x / g).collect(),
            n: Integer::div_floor(&n, &g),
        })
    }

    /// `v·z ≥ n`.
    pub fn geq(v: Vec<i64>, n: i64) -> Result<Self> {
        Self::new(v, n - 1)
    }

    /// `v·z < n`.
    pub fn lt(v: Vec<i64>, n: i64) -> Result<Self> {
        Self::new(v.iter().map(|x| -x).collect(), -n)
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        dot(&self.v, z) > self.n
    }

    /// The lattice complement `v·z ≤ n`, i.e. `−v·z > −n − 1`.
    pub fn complement(&self) -> HalfSpace {
        HalfSpace {
            v: self.v.iter().map(|x| -x).collect(),
            n: -self.n - 1,
        }
    }
}

/// Finite intersection of half-spaces; no constraints means all of `Z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyhedralRegion {
    k: usize,
    #[serde(rename = "halfspaces")]
    constraints: Vec<HalfSpace>,
}

impl PolyhedralRegion {
    pub fn whole(k: usize) -> Self {
        PolyhedralRegion {
            k,
            constraints: vec![],
        }
    }

    pub fn new(k: usize, constraints: Vec<HalfSpace>) -> Result<Self> {
        for h in &constraints {
            if h.v.len() != k {
                return Err(Error::dim(k, h.v.len()));
            }
        }
        let mut r = PolyhedralRegion { k, constraints };
        r.dedup();
        Ok(r)
    }

    fn dedup(&mut self) {
        self.constraints.sort();
        self.constraints.dedup();
        // Among parallel constraints with the same normal, keep the tightest.
        let mut out: Vec<HalfSpace> = Vec::new();
        for h in self.constraints.drain(..) {
            match out.last_mut() {
                Some(last) if last.v == h.v => last.n = last.n.max(h.n),
                _ => out.push(h),
            }
        }
        self.constraints = out;
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn contains(&self, z: &[i64]) -> Result<bool> {
        if z.len() != self.k {
            return Err(Error::dim(self.k, z.len()));
        }
        Ok(self.constraints.iter().all(|h| h.contains(z)))
    }

    pub fn with(&self, h: HalfSpace) -> Self {
        let mut r = self.clone();
        r.constraints.push(h);
        r.dedup();
        r
    }

    pub fn intersect(&self, other: &PolyhedralRegion) -> Self {
        let mut r = self.clone();
        r.constraints.extend(other.constraints.iter().cloned());
        r.dedup();
        r
    }

    /// The rational relaxation with integer tightening (`v·x ≥ n + 1`).
    pub fn tightened(&self) -> Polyhedron {
        Polyhedron::new(
            self.k,
            self.constraints
                .iter()
                .map(|h| LinCon::geq_int(&h.v, h.n + 1))
                .collect(),
        )
    }

    /// Some integer point of the region, if one can be found.
    pub fn integer_point(&self) -> Option<Vec<i64>> {
        if self.constraints.is_empty() {
            return Some(vec![0; self.k]);
        }
        self.tightened().integer_point()
    }
}

/// Finite union of hyperplanes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasureZeroSet {
    planes: Vec<Hyperplane>,
}

impl MeasureZeroSet {
    pub fn new(planes: impl IntoIterator<Item = Hyperplane>) -> Self {
        let mut s = MeasureZeroSet {
            planes: planes.into_iter().collect(),
        };
        s.planes.sort();
        s.planes.dedup();
        s
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        self.planes.iter().any(|h| h.contains(z))
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Hyperplane>) {
        self.planes.extend(other);
        self.planes.sort();
        self.planes.dedup();
    }
}

/// `{z : c_i ≤ z_i ≤ c_i + size}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBox {
    pub corner: Vec<i64>,
    pub size: u64,
}

impl LatticeBox {
    pub fn new(corner: Vec<i64>, size: u64) -> Self {
        LatticeBox { corner, size }
    }

    pub fn arity(&self) -> usize {
        self.corner.len()
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        z.len() == self.corner.len()
            && z
                .iter()
                .zip(&self.corner)
                .all(|(&x, &c)| c <= x && x <= c + self.size as i64)
    }

    /// All lattice points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> {
        Window::cube(&self.corner, self.size as i64).points()
    }
}

/// Axis-aligned window with per-axis bounds (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::dim(lo.len(), hi.len()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Precondition("window bounds must satisfy lo ≤ hi".into()));
        }
        Ok(Window { lo, hi })
    }

    pub fn cube(corner: &[i64], size: i64) -> Self {
        Window {
            lo: corner.to_vec(),
            hi: corner.iter().map(|c| c + size).collect(),
        }
    }

    pub fn symmetric(k: usize, r: i64) -> Self {
        Window {
            lo: vec![-r; k],
            hi: vec![r; k],
        }
    }

    /// Bounding box of the given points grown by `margin` on every side.
    pub fn around(points: &[&[i64]], margin: i64) -> Self {
        let k = points[0].len();
        let lo = (0..k).map(|i| points.iter().map(|p| p[i]).min().unwrap() - margin).collect();
        let hi = (0..k).map(|i| points.iter().map(|p| p[i]).max().unwrap() + margin).collect();
        Window { lo, hi }
    }

    pub fn arity(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        z.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn count(&self) -> u64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1) as u64)
            .product()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> {
        let k = self.lo.len();
        let (lo, hi) = (self.lo.clone(), self.hi.clone());
        let mut cur = Some(lo.clone());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if next[i] < hi[i] {
                    next[i] += 1;
                    cur = Some(next);
                    break;
                }
                next[i] = lo[i];
            }
            Some(out)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_hyperplanes() {
        let h = Hyperplane::new(vec![-2, 4], 6).unwrap().unwrap();
        assert_eq!((h.v(), h.n()), (&[1, -2][..], -3));
        assert!(Hyperplane::new(vec![2, 4], 3).unwrap().is_none());
        assert!(Hyperplane::new(vec![0, 0], 0).is_err());
    }

    #[test]
    fn halfspace_rounding() {
        // 2z > 3 ⇔ z > 1 on the lattice.
        let h = HalfSpace::new(vec![2], 3).unwrap();
        assert_eq!((h.v(), h.n()), (&[1][..], 1));
        let h = HalfSpace::new(vec![-2], -3).unwrap();
        assert_eq!((h.v(), h.n()), (&[-1][..], -2));
        for z in -5..5 {
            assert_eq!(h.contains(&[z]), -2 * z > -3);
        }
    }

    #[test]
    fn contains_examples() {
        let r = PolyhedralRegion::new(1, vec![HalfSpace::new(vec![1], -1).unwrap()]).unwrap();
        assert!(r.contains(&[0]).unwrap());
        assert!(PolyhedralRegion::whole(2).contains(&[-5, 7]).unwrap());
        let r = PolyhedralRegion::new(
            1,
            vec![HalfSpace::new(vec![1], 0).unwrap(), HalfSpace::new(vec![-1], -2).unwrap()],
        )
        .unwrap();
        assert!(!r.contains(&[2]).unwrap());
        assert!(r.contains(&[1]).unwrap());
        assert!(r.contains(&[1, 2]).is_err());
    }

    #[test]
    fn window_points_are_lexicographic() {
        let w = Window::new(vec![0, 0], vec![1, 2]).unwrap();
        let pts: Vec<_> = w.points().collect();
        assert_eq!(pts.len() as u64, w.count());
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[5], vec![1, 2]);
    }
}
