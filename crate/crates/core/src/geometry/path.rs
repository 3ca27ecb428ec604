use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{LatticeBox, PolyhedralRegion, Window};
use crate::rat::{rat, Rat};

/// Shortest `S`-path from `a` to `b` inside `ambient`, searched by BFS in the
/// bounding box of the endpoints grown by `(max step)·(k+1)`.
pub fn s_path(
    a: &[i64],
    b: &[i64],
    ambient: &PolyhedralRegion,
    steps: &[Vec<i64>],
) -> Result<Option<Vec<Vec<i64>>>> {
    let k = ambient.arity() as i64;
    let reach = steps
        .iter()
        .map(|s| s.iter().map(|x| x.abs()).max().unwrap_or(0))
        .max()
        .unwrap_or(1);
    s_path_with_margin(a, b, ambient, steps, reach * (k + 1))
}

/// [`s_path`] with an explicit window margin.
pub fn s_path_with_margin(
    a: &[i64],
    b: &[i64],
    ambient: &PolyhedralRegion,
    steps: &[Vec<i64>],
    margin: i64,
) -> Result<Option<Vec<Vec<i64>>>> {
    for (name, z) in [("start", a), ("end", b)] {
        if !ambient.contains(z)? {
            return Err(Error::Precondition(format!("{name} point {z:?} is outside the ambient region")));
        }
    }
    let window = Window::around(&[a, b], margin);
    let mut steps: Vec<Vec<i64>> = steps.to_vec();
    steps.sort();
    steps.dedup();
    let mut parent: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(a.to_vec(), a.to_vec());
    queue.push_back(a.to_vec());
    while let Some(z) = queue.pop_front() {
        if z == b {
            let mut path = vec![z.clone()];
            let mut cur = z;
            while cur != a {
                cur = parent[&cur].clone();
                path.push(cur.clone());
            }
            path.reverse();
            return Ok(Some(path));
        }
        for s in &steps {
            let w: Vec<i64> = z.iter().zip(s).map(|(x, d)| x + d).collect();
            if !window.contains(&w) || parent.contains_key(&w) || !ambient.contains(&w)? {
                continue;
            }
            parent.insert(w.clone(), z.clone());
            queue.push_back(w);
        }
    }
    Ok(None)
}

/// Integer points of the rational convex hull of two unit boxes of the same
/// size, `conv(B0 ∪ B1) = B0 + [0, 1]·(c1 − c0)`.
#[derive(Clone, Debug)]
pub struct Hull {
    b0: LatticeBox,
    w: Vec<i64>,
}

pub fn hull_points(b0: &LatticeBox, b1: &LatticeBox) -> Result<Hull> {
    if b0.size != 1 || b1.size != 1 {
        return Err(Error::Precondition("hull_points needs two boxes of size 1".into()));
    }
    if b0.arity() != b1.arity() {
        return Err(Error::dim(b0.arity(), b1.arity()));
    }
    Ok(Hull {
        b0: b0.clone(),
        w: b1.corner.iter().zip(&b0.corner).map(|(a, b)| a - b).collect(),
    })
}

impl Hull {
    /// The largest `s ∈ [0, 1]` with `z − s·w ∈ B0`, if any.
    pub fn witness(&self, z: &[i64]) -> Option<Rat> {
        let (mut lo, mut hi) = (Rat::zero(), Rat::one());
        for ((&zi, &ci), &wi) in z.iter().zip(&self.b0.corner).zip(&self.w) {
            // ci ≤ zi − s·wi ≤ ci + 1
            let (a, b) = (rat(zi - ci - 1), rat(zi - ci));
            if wi == 0 {
                if a > Rat::zero() || b < Rat::zero() {
                    return None;
                }
                continue;
            }
            let wr = rat(wi);
            let (x, y) = (&a / &wr, &b / &wr);
            let (l, h) = if wi > 0 { (x, y) } else { (y, x) };
            lo = lo.max(l);
            hi = hi.min(h);
        }
        (lo <= hi).then_some(hi)
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        z.len() == self.w.len() && self.witness(z).is_some()
    }

    /// Lattice points of the bounding box of both boxes that lie in the hull.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let c1: Vec<i64> = self.b0.corner.iter().zip(&self.w).map(|(a, b)| a + b).collect();
        let lo: Vec<i64> = self.b0.corner.iter().zip(&c1).map(|(a, b)| *a.min(b)).collect();
        let hi: Vec<i64> = self.b0.corner.iter().zip(&c1).map(|(a, b)| a.max(b) + 1).collect();
        Window { lo, hi }.points().filter(|z| self.contains(z)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HalfSpace;
    use crate::rat::ratio;

    fn units(k: usize) -> Vec<Vec<i64>> {
        (0..k)
            .flat_map(|i| {
                [1, -1].map(|s| {
                    let mut e = vec![0; k];
                    e[i] = s;
                    e
                })
            })
            .collect()
    }

    #[test]
    fn s_path_examples() {
        let z2 = PolyhedralRegion::whole(2);
        let p = s_path(&[0, 0], &[2, 1], &z2, &units(2)).unwrap().unwrap();
        assert_eq!(p.len(), 4);
        for w in p.windows(2) {
            let d: Vec<i64> = w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect();
            assert!(units(2).contains(&d));
        }

        let half = PolyhedralRegion::new(2, vec![HalfSpace::new(vec![1, 0], 0).unwrap()]).unwrap();
        let p = s_path(&[1, 0], &[3, 0], &half, &[vec![1, 0], vec![-1, 0]]).unwrap().unwrap();
        assert_eq!(p, vec![vec![1, 0], vec![2, 0], vec![3, 0]]);

        let z1 = PolyhedralRegion::whole(1);
        assert_eq!(s_path(&[0], &[1], &z1, &[vec![2]]).unwrap(), None);
        assert!(s_path(&[0, 0], &[1, 0], &half, &units(2)).is_err());
    }

    #[test]
    fn hull_examples() {
        let h = hull_points(&LatticeBox::new(vec![0, 0], 1), &LatticeBox::new(vec![3, 2], 1)).unwrap();
        assert_eq!(h.witness(&[2, 1]), Some(ratio(1, 2)));
        assert!(h.contains(&[0, 0]));
        assert!(!h.contains(&[-1, 0]));
        assert!(hull_points(&LatticeBox::new(vec![0], 2), &LatticeBox::new(vec![1], 1)).is_err());
    }
}
