use log::warn;

use crate::geometry::fm::{LinCon, Polyhedron};
use crate::geometry::{HalfSpace, Hyperplane, LatticeBox, MeasureZeroSet, PolyhedralRegion};
use crate::poly::MultiPoly;
use crate::rat::{rat, to_i64, Rat};

/// Outcome of the measure-zero test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureZero {
    /// Covered by finitely many hyperplanes.
    Zero { cover: MeasureZeroSet },
    /// Contains arbitrarily large boxes; `direction` has `v·d ≥ 1` for every
    /// constraint normal `v`.
    Large { direction: Vec<i64> },
}

impl MeasureZero {
    pub fn is_zero(&self) -> bool {
        matches!(self, MeasureZero::Zero { .. })
    }
}

fn cone(r: &PolyhedralRegion, extra: Option<usize>) -> Polyhedron {
    Polyhedron::new(
        r.arity(),
        r.constraints()
            .iter()
            .enumerate()
            .map(|(i, h)| {
                if extra.is_none_or(|e| e == i) {
                    LinCon::gt_int(h.v(), 0)
                } else {
                    LinCon::geq_int(h.v(), 0)
                }
            })
            .collect(),
    )
}

/// Decides whether the region is covered by finitely many hyperplanes. This
/// holds exactly when the recession cone `{x : v·x ≥ 0}` has empty interior;
/// otherwise boxes of every size fit along an interior ray.
pub fn is_measure_zero(r: &PolyhedralRegion) -> MeasureZero {
    let k = r.arity();
    if r.constraints().is_empty() {
        return MeasureZero::Large { direction: vec![0; k] };
    }
    if let Some(d) = cone(r, None).feasible() {
        let l = d.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        });
        let direction = d
            .iter()
            .map(|x| to_i64(&(x * Rat::from_integer(l.clone()))).expect("small direction"))
            .collect();
        return MeasureZero::Large { direction };
    }
    // Some constraint is an implicit equality of the cone; its functional is
    // then bounded on the region, giving finitely many parallel hyperplanes.
    let tight = r.tightened();
    if !tight.is_feasible() {
        return MeasureZero::Zero { cover: MeasureZeroSet::empty() };
    }
    for (i, h) in r.constraints().iter().enumerate() {
        if cone(r, Some(i)).is_feasible() {
            continue;
        }
        let f: Vec<Rat> = h.v().iter().map(|&x| rat(x)).collect();
        let Some((lo, hi)) = tight.range_of(&f) else {
            return MeasureZero::Zero { cover: MeasureZeroSet::empty() };
        };
        let lo = lo.map_or(h.n() + 1, |b| to_i64(&b.value.ceil()).expect("bounded"));
        let hi = to_i64(&hi.expect("implicit equality bounds the functional").value.floor())
            .expect("bounded");
        let cover = (lo..=hi).filter_map(|m| Hyperplane::new(h.v().to_vec(), m).ok().flatten());
        return MeasureZero::Zero { cover: MeasureZeroSet::new(cover) };
    }
    unreachable!("an infeasible strict cone has an implicit equality")
}

impl PolyhedralRegion {
    /// True when the region contains boxes of every size.
    pub fn is_full(&self) -> bool {
        !is_measure_zero(self).is_zero()
    }

    /// A box of size `n` inside the region, when it is not of measure zero.
    pub fn large_box(&self, n: u64) -> Option<LatticeBox> {
        let MeasureZero::Large { direction } = is_measure_zero(self) else {
            return None;
        };
        let lam = self
            .constraints()
            .iter()
            .map(|h| h.n() + 1 + n as i64 * h.v().iter().map(|x| x.abs()).sum::<i64>())
            .max()
            .unwrap_or(0)
            .max(1);
        let bx = LatticeBox::new(direction.iter().map(|d| d * lam).collect(), n);
        debug_assert!(bx.points().all(|z| self.contains(&z).unwrap_or(false)));
        Some(bx)
    }

    /// True when some integer point lies in the region.
    pub fn has_integer_point(&self) -> bool {
        if self.is_full() {
            return true;
        }
        let tight = self.tightened();
        if !tight.is_feasible() {
            return false;
        }
        if tight.integer_point().is_some() {
            return true;
        }
        warn!("dropping a rationally feasible cell without an integer point in the search window: {self:?}");
        false
    }

    /// Drops constraints implied by the others over the integers.
    pub fn pruned(&self) -> PolyhedralRegion {
        let mut cons = self.constraints().to_vec();
        let mut i = 0;
        while i < cons.len() {
            let mut test: Vec<HalfSpace> = cons
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, h)| h.clone())
                .collect();
            test.push(cons[i].complement());
            let r = PolyhedralRegion::new(self.arity(), test).expect("same arity");
            if r.tightened().is_feasible() {
                i += 1;
            } else {
                cons.remove(i);
            }
        }
        PolyhedralRegion::new(self.arity(), cons).expect("same arity")
    }
}

/// Shrinks `r` to the points whose whole box of size `n` lies in `r`, and
/// covers what was removed by hyperplanes.
pub fn erode(r: &PolyhedralRegion, n: u64) -> (PolyhedralRegion, MeasureZeroSet) {
    let n = n as i64;
    let mut cons = Vec::new();
    let mut cover = Vec::new();
    for h in r.constraints() {
        // min over the box offsets of v·b is −n·N.
        let neg: i64 = h.v().iter().filter(|&&x| x < 0).map(|x| -x).sum();
        let shift = n * neg;
        cons.push(HalfSpace::new(h.v().to_vec(), h.n() + shift).expect("nonzero normal"));
        for t in h.n() + 1..=h.n() + shift {
            cover.extend(Hyperplane::new(h.v().to_vec(), t).ok().flatten());
        }
    }
    (
        PolyhedralRegion::new(r.arity(), cons).expect("same arity"),
        MeasureZeroSet::new(cover),
    )
}

/// The open cells cut out by the hyperplanes that contain integer points.
pub fn arrangement(hs: &[Hyperplane], k: usize) -> Vec<PolyhedralRegion> {
    let planes = MeasureZeroSet::new(hs.iter().cloned());
    let mut cells = vec![PolyhedralRegion::whole(k)];
    for h in planes.planes() {
        let (pos, neg) = h.sides();
        let mut next = Vec::with_capacity(cells.len() * 2);
        for c in &cells {
            for side in [&pos, &neg] {
                let p = c.with(side.clone());
                if p.has_integer_point() {
                    next.push(p.pruned());
                }
            }
        }
        cells = next;
    }
    cells
}

/// For each axis `e_i`, a product `p_i` of linear factors with
/// `p_i(z)·χ(z) = p_i(z)·χ(z + e_i)` where `χ` is the indicator of `r`.
pub fn characteristic_certificates(r: &PolyhedralRegion) -> Vec<MultiPoly> {
    let k = r.arity();
    (0..k)
        .map(|i| {
            let mut p = MultiPoly::one(k);
            for h in r.constraints() {
                let vi = h.v()[i];
                // Crossing v·z > n with one step along e_i changes v·z by vi.
                let ms: Vec<i64> = if vi > 0 {
                    (h.n() - vi + 1..=h.n()).collect()
                } else if vi < 0 {
                    (h.n() + 1..=h.n() - vi).collect()
                } else {
                    vec![]
                };
                for m in ms {
                    p = &p * &MultiPoly::linear(h.v(), -m);
                }
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;

    fn hs(v: &[i64], n: i64) -> HalfSpace {
        HalfSpace::new(v.to_vec(), n).unwrap()
    }

    fn region(k: usize, h: Vec<HalfSpace>) -> PolyhedralRegion {
        PolyhedralRegion::new(k, h).unwrap()
    }

    #[test]
    fn measure_zero_examples() {
        let r = region(1, vec![hs(&[1], 0), hs(&[-1], -2)]);
        match is_measure_zero(&r) {
            MeasureZero::Zero { cover } => {
                assert_eq!(cover.planes(), &[Hyperplane::new(vec![1], 1).unwrap().unwrap()])
            }
            other => panic!("{other:?}"),
        }
        let q = region(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0)]);
        assert!(!is_measure_zero(&q).is_zero());
        let bx = q.large_box(3).unwrap();
        assert!(bx.points().all(|z| q.contains(&z).unwrap()));

        let diag = region(2, vec![hs(&[1, -1], -1), hs(&[-1, 1], -1)]);
        match is_measure_zero(&diag) {
            MeasureZero::Zero { cover } => {
                for z in Window::symmetric(2, 5).points() {
                    if diag.contains(&z).unwrap() {
                        assert!(cover.contains(&z));
                    }
                }
                assert_eq!(cover.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounded_full_dimensional_regions_have_measure_zero() {
        let r = region(2, vec![hs(&[1, 0], 0), hs(&[-1, 0], -10), hs(&[0, 1], 0), hs(&[0, -1], -10)]);
        let MeasureZero::Zero { cover } = is_measure_zero(&r) else {
            panic!("bounded square must be measure zero")
        };
        for z in Window::symmetric(2, 12).points() {
            if r.contains(&z).unwrap() {
                assert!(cover.contains(&z));
            }
        }
    }

    #[test]
    fn erode_examples() {
        let r = region(1, vec![hs(&[1], -1), hs(&[-1], -4)]);
        let (rp, cover) = erode(&r, 1);
        for z in -2..=5 {
            assert_eq!(rp.contains(&[z]).unwrap(), (0..=2).contains(&z));
        }
        assert!(cover.contains(&[3]));

        let (rp, cover) = erode(&PolyhedralRegion::whole(2), 4);
        assert_eq!(rp, PolyhedralRegion::whole(2));
        assert!(cover.is_empty());

        let r = region(2, vec![hs(&[1, 0], 0)]);
        let (rp, cover) = erode(&r, 2);
        assert_eq!(rp, r);
        assert!(cover.is_empty());
    }

    #[test]
    fn arrangement_examples() {
        let h = |v: &[i64], n| Hyperplane::new(v.to_vec(), n).unwrap().unwrap();
        assert_eq!(arrangement(&[h(&[1], 0)], 1).len(), 2);
        assert_eq!(arrangement(&[h(&[1, 0], 0), h(&[0, 1], 0)], 2).len(), 4);
        assert_eq!(arrangement(&[h(&[1], 0), h(&[1], 0)], 1).len(), 2);
        // Adjacent parallel planes leave no integer point strictly between.
        assert_eq!(arrangement(&[h(&[1], 0), h(&[1], 1)], 1).len(), 2);
    }

    #[test]
    fn certificate_examples() {
        let p = characteristic_certificates(&region(1, vec![hs(&[1], 0)]));
        assert_eq!(p[0], MultiPoly::var(1, 0));
        assert!(characteristic_certificates(&PolyhedralRegion::whole(3))
            .iter()
            .all(MultiPoly::is_one));
        let p = characteristic_certificates(&region(2, vec![hs(&[1, 1], 0)]));
        assert_eq!(p[0], MultiPoly::linear(&[1, 1], 0));
    }
}
