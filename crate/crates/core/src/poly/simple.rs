use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::LatticeBox;
use crate::poly::multi::MultiPoly;
use crate::poly::uni::UniPoly;
use crate::rat::{big_to_i64, rat, Rat};

/// A polynomial of one linear form: `p(z) = pbar(v·z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simple {
    pub v: Vec<i64>,
    pub pbar: UniPoly,
}

/// Writes `p` as `pbar(v·z)` with `v` primitive and its first nonzero entry
/// positive, or returns `None`. Constants report `v = 0`.
pub fn detect_simple(p: &MultiPoly) -> Option<Simple> {
    let k = p.arity();
    if p.is_constant() {
        return Some(Simple {
            v: vec![0; k],
            pbar: UniPoly::constant(p.constant_value().unwrap_or_else(Rat::zero)),
        });
    }
    // Candidate direction from proportional partials: ∂_j p = v_j · pbar'(v·z).
    let partials: Vec<MultiPoly> = (0..k).map(|j| p.derivative(j)).collect();
    let i0 = partials.iter().position(|d| !d.is_zero())?;
    let lead = partials[i0].leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut ratios = Vec::with_capacity(k);
    for d in &partials {
        if d.is_zero() {
            ratios.push(Rat::zero());
            continue;
        }
        let c = d.terms().find(|(e, _)| **e == lead.0).map(|(_, c)| c.clone())?;
        let lam = c / &lead.1;
        if d != &partials[i0].scale(&lam) {
            return None;
        }
        ratios.push(lam);
    }
    let v = primitive_direction(&ratios);
    let j = v.iter().position(|&x| x != 0)?;
    // pbar(t) = p(t / v_j · e_j).
    let mut line = vec![Rat::zero(); k];
    line[j] = rat(v[j]).recip();
    let pbar = UniPoly::from_coeffs(p.restrict_to_line(&line));
    if &pbar.compose_linear(&v, 0) != p {
        return None;
    }
    Some(Simple { v, pbar })
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
pub fn primitive_direction(r: &[Rat]) -> Vec<i64> {
    let l = r.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return vec![0; r.len()];
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    ints.iter()
        .map(|x| big_to_i64(&(x / &g)).expect("direction fits in i64") * sign)
        .collect()
}

/// Same normalization for integer vectors.
pub fn primitive_int(v: &[i64]) -> Vec<i64> {
    primitive_direction(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
}

/// First point of `bx` (lexicographic scan) where `p` does not vanish. A box
/// of size at least the total degree always contains one unless `p = 0`.
pub fn find_nonzero_in_box(p: &MultiPoly, bx: &LatticeBox) -> Result<Option<Vec<i64>>> {
    if bx.corner.len() != p.arity() {
        return Err(Error::dim(p.arity(), bx.corner.len()));
    }
    if u64::from(p.total_degree()) > bx.size {
        return Err(Error::Precondition(format!(
            "box of size {} is smaller than the total degree {}",
            bx.size,
            p.total_degree()
        )));
    }
    if p.is_zero() {
        return Ok(None);
    }
    for z in bx.points() {
        if !p.eval_int(&z)?.is_zero() {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn detect_simple_examples() {
        let s = detect_simple(&parse_poly("z1 - z2 + 3", 2).unwrap()).unwrap();
        assert_eq!(s.v, vec![1, -1]);
        assert_eq!(s.pbar, UniPoly::from_ints(&[3, 1]));

        assert!(detect_simple(&parse_poly("z1*z2", 2).unwrap()).is_none());

        let s = detect_simple(&parse_poly("4*z1^2 + 16*z1*z2 + 16*z2^2 + 1", 2).unwrap()).unwrap();
        assert_eq!(s.v, vec![1, 2]);
        assert_eq!(s.pbar, UniPoly::from_ints(&[1, 0, 4]));

        let s = detect_simple(&parse_poly("7/2", 2).unwrap()).unwrap();
        assert_eq!(s.v, vec![0, 0]);

        let s = detect_simple(&parse_poly("-2*z2^2 + 1", 2).unwrap()).unwrap();
        assert_eq!(s.v, vec![0, 1]);
        assert_eq!(s.pbar, UniPoly::from_ints(&[1, 0, -2]));

        let s = detect_simple(&parse_poly("-z1 + z2", 2).unwrap()).unwrap();
        assert_eq!(s.v, vec![1, -1]);
        assert_eq!(s.pbar, UniPoly::from_ints(&[0, -1]));
    }

    #[test]
    fn nonzero_in_box_examples() {
        let one = MultiPoly::one(2);
        let b = LatticeBox::new(vec![0, 0], 2);
        assert_eq!(find_nonzero_in_box(&one, &b).unwrap(), Some(vec![0, 0]));
        let z1 = parse_poly("z1", 1).unwrap();
        assert_eq!(find_nonzero_in_box(&z1, &LatticeBox::new(vec![0], 1)).unwrap(), Some(vec![1]));
        let p = parse_poly("(z1-1)*(z2-1)", 2).unwrap();
        assert_eq!(find_nonzero_in_box(&p, &b).unwrap(), Some(vec![0, 0]));
        assert!(find_nonzero_in_box(&p, &LatticeBox::new(vec![0, 0], 1)).is_err());
        assert_eq!(find_nonzero_in_box(&MultiPoly::zero(2), &b).unwrap(), None);
    }
}
