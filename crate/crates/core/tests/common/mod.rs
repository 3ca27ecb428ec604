//! Helpers shared by the integration tests.
#![allow(dead_code)]

use hyperterm::oresato::{Chain, OreSatoForm};
use hyperterm::poly::{coprime, primitive_int, MultiPoly, UniPoly};
use hyperterm::rat::{rat, ratio};
use hyperterm::{FactoredRational, Json, TermSpec};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const BUNDLED: [(&str, &str); 3] = [
    ("constant", include_str!("../../specs/constant.json")),
    ("odd", include_str!("../../specs/odd.json")),
    ("binomial", include_str!("../../specs/binomial.json")),
];

pub fn bundled() -> Vec<(&'static str, TermSpec)> {
    BUNDLED
        .iter()
        .map(|(name, text)| (*name, TermSpec::from_json(text).expect("bundled spec parses")))
        .collect()
}

pub fn bundled_spec(name: &str) -> TermSpec {
    bundled().into_iter().find(|(n, _)| *n == name).expect("known spec").1
}

fn random_linear(rng: &mut StdRng, k: usize) -> MultiPoly {
    loop {
        let v: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        if v.iter().any(|&x| x != 0) {
            return MultiPoly::linear(&v, rng.gen_range(-3..=3)).normalized();
        }
    }
}

/// `z_1^2 + z_2 + c`, which is not a polynomial of one linear form.
fn random_quadratic(rng: &mut StdRng, k: usize) -> MultiPoly {
    let x = MultiPoly::var(k, 0);
    let y = MultiPoly::var(k, 1);
    let c = MultiPoly::constant(k, rat(rng.gen_range(-3..=3)));
    (&(&(&x * &x) + &y) + &c).normalized()
}

fn random_multi_factor(rng: &mut StdRng, k: usize) -> MultiPoly {
    if k >= 2 && rng.gen_bool(0.3) {
        random_quadratic(rng, k)
    } else {
        random_linear(rng, k)
    }
}

fn random_uni_factor(rng: &mut StdRng) -> UniPoly {
    let a = if rng.gen_bool(0.7) { 1 } else { 2 };
    let mut c = rng.gen_range(-3..=3);
    if a == 2 && c % 2 == 0 {
        c += 1;
    }
    UniPoly::from_ints(&[c, a])
}

fn random_uni_product(rng: &mut StdRng) -> Vec<(UniPoly, u32)> {
    (0..rng.gen_range(0..=1)).map(|_| (random_uni_factor(rng), 1)).collect()
}

/// A random Ore–Sato form of arity `k` with small coefficients.
pub fn random_form(rng: &mut StdRng, k: usize) -> OreSatoForm {
    let c: Vec<(MultiPoly, u32)> = (0..rng.gen_range(0..=1)).map(|_| (random_multi_factor(rng, k), 1)).collect();
    let mut d = Vec::new();
    if rng.gen_bool(0.5) {
        let p = random_multi_factor(rng, k);
        if c.iter().all(|(q, _)| coprime(q, &p)) {
            d.push((p, 1));
        }
    }
    let gammas = [rat(1), rat(2), rat(-1), ratio(1, 2), rat(3)];
    let gamma = (0..k).map(|_| gammas.choose(rng).expect("nonempty").clone()).collect();
    let mut chains: Vec<Chain> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        if raw.iter().all(|&x| x == 0) {
            continue;
        }
        let mut v = primitive_int(&raw);
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        if chains.iter().any(|ch| ch.v == v) {
            continue;
        }
        let (a, b) = (random_uni_product(rng), random_uni_product(rng));
        if a.is_empty() && b.is_empty() {
            continue;
        }
        chains.push(Chain { v, a, b });
    }
    chains.sort_by(|x, y| x.v.cmp(&y.v));
    OreSatoForm { k, c, d, gamma, chains }
}

/// The spec whose generators are `R_{e_i}` of a random form.
pub fn random_compatible(rng: &mut StdRng, k: usize) -> (OreSatoForm, TermSpec) {
    let form = random_form(rng, k);
    let gens = (0..k)
        .map(|i| form.ratio_from_form(&unit(k, i)).expect("arity"))
        .collect::<Vec<_>>();
    let mut spec = TermSpec::new(k, gens).expect("valid generators");
    spec.seed = None;
    (form, spec)
}

/// Multiplies the first generator by `(z_2 + c)`, which breaks the cocycle
/// condition between the first two axes.
pub fn perturbed(rng: &mut StdRng, spec: &TermSpec) -> TermSpec {
    let k = spec.arity();
    assert!(k >= 2, "arity 1 specs are always compatible");
    let mut coeffs = vec![0; k];
    coeffs[1] = 1;
    let bump = FactoredRational::from_poly(&MultiPoly::linear(&coeffs, rng.gen_range(-3..=3))).expect("nonzero");
    let mut gens = spec.generators().to_vec();
    gens[0] = gens[0].mul(&bump);
    TermSpec::new(k, gens).expect("valid generators")
}

pub fn unit(k: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; k];
    e[i] = 1;
    e
}

pub fn random_point(rng: &mut StdRng, k: usize, r: i64) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(-r..=r)).collect()
}

pub fn rng(seed: u64) -> StdRng {
    <StdRng as rand::SeedableRng>::seed_from_u64(seed)
}
