//! Acceptance criteria 1–7. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use common::*;
use hyperterm::geometry::{
    arrangement, erode, hull_points, s_path, HalfSpace, Hyperplane, LatticeBox, PolyhedralRegion, Window,
};
use hyperterm::oracle::{propagate_with_steps, replay, unit_steps};
use hyperterm::poly::{detect_simple, find_nonzero_in_box, MultiPoly, UniPoly};
use hyperterm::rat::{pow_i, rat, ratio};
use hyperterm::structure::rising;
use hyperterm::{
    build_structure, closed_form_eval, decompose, factorial_eval, grid_compare, pochhammer_eval, split_factorial,
    to_pochhammer, Error, Eval, Json, Propagation, Rat, Seed, TermSpec,
};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

fn random_specs(seed: u64, n: usize, ks: std::ops::RangeInclusive<usize>) -> Vec<TermSpec> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let k = r.gen_range(ks.clone());
            random_compatible(&mut r, k).1
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut compatible: Vec<TermSpec> = bundled().into_iter().map(|(_, s)| s).collect();
    compatible.extend(random_specs(1, 20, 1..=3));
    for (i, s) in compatible.iter().enumerate() {
        ensure!(s.check_compatibility(), "compatible spec #{i} reported incompatible");
    }
    let mut r = rng(2);
    let bases = random_specs(3, 20, 2..=3);
    for (i, s) in bases.iter().enumerate() {
        let p = perturbed(&mut r, s);
        ensure!(!p.check_compatibility(), "perturbed spec #{i} reported compatible");
    }
    Ok(format!("{} compatible accepted, {} perturbed rejected", compatible.len(), bases.len()))
}

fn criterion_2() -> Outcome {
    let mut specs: Vec<TermSpec> = bundled().into_iter().map(|(_, s)| s).collect();
    specs.extend(random_specs(4, 20, 1..=3));
    let mut r = rng(5);
    let (mut directions, mut with_chains, mut with_cd) = (0, 0, 0);
    for (i, s) in specs.iter().enumerate() {
        let k = s.arity();
        let form = decompose(s).map_err(err(&format!("decompose spec #{i}")))?;
        with_chains += usize::from(!form.chains.is_empty());
        with_cd += usize::from(!form.c.is_empty() || !form.d.is_empty());
        for j in 0..k {
            let g = form.ratio_from_form(&unit(k, j)).map_err(err("ratio_from_form"))?;
            ensure!(&g == s.generator(j), "spec #{i}: generator {j} not reproduced: {g} vs {}", s.generator(j));
        }
        for _ in 0..50 {
            let w = random_point(&mut r, k, 3);
            let a = form.ratio_from_form(&w).map_err(err("ratio_from_form"))?;
            let b = s.compose_direction(&w).map_err(err("compose_direction"))?;
            ensure!(a == b, "spec #{i}: direction {w:?} disagrees: {a} vs {b}");
            directions += 1;
        }
    }
    Ok(format!(
        "{} specs round-tripped ({with_chains} with chains, {with_cd} with nonconstant C or D), {directions} directions agree",
        specs.len()
    ))
}

fn odd_closed(z: i64) -> Rat {
    // z ≥ 0: ∏_{j=1}^{z} (2j − 1); z < 0: ∏_{j=1}^{−z} 1/(1 − 2j).
    if z >= 0 {
        (1..=z).map(|j| rat(2 * j - 1)).product()
    } else {
        (1..=-z).map(|j| rat(1 - 2 * j).recip()).product()
    }
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for (name, spec) in bundled() {
        let ps = build_structure(&spec).map_err(err(name))?;
        let rep = grid_compare(&ps, &spec, &Window::symmetric(spec.arity(), 8)).map_err(err(name))?;
        ensure!(rep.mismatches.is_empty(), "{name}: {} mismatches, first {:?}", rep.mismatches.len(), rep.mismatches[0]);
        ensure!(rep.equal > 0, "{name}: no point was compared");
        parts.push(format!("{name} {}/{} equal", rep.equal, rep.checked));
    }
    let odd = build_structure(&bundled_spec("odd")).map_err(err("odd"))?;
    for z in -8..=8 {
        let v = closed_form_eval(&odd, &[z]).map_err(err("odd eval"))?;
        ensure!(v == Eval::Value(odd_closed(z)), "odd: f({z}) = {v:?}, expected {}", odd_closed(z));
    }
    ensure!(closed_form_eval(&odd, &[-2]).unwrap() == Eval::Value(ratio(1, 3)), "odd: f(-2) != 1/3");
    parts.push("odd two-case values on [-8,8], f(-2) = 1/3".into());
    Ok(parts.join("; "))
}

fn criterion_4() -> Outcome {
    let mut compared = 0;
    for (name, spec) in bundled() {
        let ps = build_structure(&spec).map_err(err(name))?;
        let ffs = split_factorial(&ps).map_err(err(name))?;
        for ff in &ffs {
            ensure!(ff.lengths_nonnegative(), "{name}: a product length can be negative");
        }
        for z in Window::symmetric(spec.arity(), 8).points() {
            for ff in &ffs {
                if !ff.region.contains(&z).unwrap() {
                    continue;
                }
                let a = factorial_eval(ff, &z).map_err(err(name))?;
                let b = closed_form_eval(&ps, &z).map_err(err(name))?;
                ensure!(a == b, "{name}: at {z:?} factorial {a:?} vs closed form {b:?}");
                compared += 1;
            }
        }
    }
    let ffs = split_factorial(&build_structure(&bundled_spec("odd")).unwrap()).map_err(err("odd"))?;
    ensure!(ffs.len() == 2, "odd: {} factorial regions, expected 2", ffs.len());
    let mut seen = [false; 2];
    for ff in &ffs {
        let members: Vec<bool> = (-50..=50).map(|z| ff.region.contains(&[z]).unwrap()).collect();
        let nonneg: Vec<bool> = (-50..=50).map(|z| z >= 0).collect();
        let neg: Vec<bool> = nonneg.iter().map(|b| !b).collect();
        if members == nonneg {
            seen[0] = true;
        } else if members == neg {
            seen[1] = true;
        } else {
            return Err(format!("odd: unexpected region {:?}", ff.region));
        }
    }
    ensure!(seen == [true, true], "odd: regions are not {{z1 >= 0}} and {{z1 < 0}}");
    Ok(format!("{compared} in-region points agree; odd splits into z1 >= 0 and z1 < 0"))
}

fn criterion_5() -> Outcome {
    // ∏_{j=1}^{z} (2j + 1) = 2^z (3/2)_z.
    let spec = TermSpec::from_json(
        r#"{"k": 1, "generators": [{"num": "2*z1 + 3", "den": "1"}], "seed": {"point": [0], "value": "1"}}"#,
    )
    .map_err(err("spec"))?;
    let pfs = split_factorial(&build_structure(&spec).map_err(err("structure"))?)
        .map_err(err("split"))?
        .iter()
        .map(to_pochhammer)
        .collect::<hyperterm::Result<Vec<_>>>()
        .map_err(err("pochhammer"))?;
    let pf = pfs
        .iter()
        .find(|p| p.region.contains(&[0]).unwrap())
        .ok_or("no form contains z1 = 0")?;
    ensure!(pf.gamma == vec![rat(2)], "gamma {:?}, expected [2]", pf.gamma);
    ensure!(pf.den.is_empty() && pf.num.len() == 1, "unexpected symbols {:?} / {:?}", pf.num, pf.den);
    ensure!(pf.num[0].m == ratio(3, 2) && pf.num[0].v == vec![1] && pf.num[0].r == 0, "symbol {:?}", pf.num[0]);
    for z in 0..=12 {
        let want = pow_i(&rat(2), z) * rising(&ratio(3, 2), z).unwrap();
        ensure!(pochhammer_eval(pf, &[z]).unwrap() == Eval::Value(want), "2^z (3/2)_z differs at {z}");
    }

    // The bundled odd spec is the same sequence shifted by one: f(z + 1) = 2^z (3/2)_z.
    let odd_ffs = split_factorial(&build_structure(&bundled_spec("odd")).unwrap()).unwrap();
    let odd_pfs: Vec<_> = odd_ffs.iter().map(to_pochhammer).collect::<hyperterm::Result<_>>().map_err(err("odd"))?;
    let nonneg = odd_pfs.iter().find(|p| p.region.contains(&[0]).unwrap()).ok_or("odd: no z1 >= 0 form")?;
    for z in 0..=12 {
        let want = pow_i(&rat(2), z) * rising(&ratio(3, 2), z).unwrap();
        ensure!(pochhammer_eval(nonneg, &[z + 1]).unwrap() == Eval::Value(want), "odd: f({}) differs", z + 1);
    }

    let mut sampled = 0;
    for (name, spec) in bundled() {
        let ffs = split_factorial(&build_structure(&spec).unwrap()).unwrap();
        for ff in &ffs {
            let pf = to_pochhammer(ff).map_err(err(name))?;
            for z in Window::symmetric(spec.arity(), 8).points() {
                if !ff.region.contains(&z).unwrap() {
                    continue;
                }
                let a = pochhammer_eval(&pf, &z).map_err(err(name))?;
                let b = factorial_eval(ff, &z).map_err(err(name))?;
                ensure!(a == b, "{name}: at {z:?} Pochhammer {a:?} vs factorial {b:?}");
                sampled += 1;
            }
        }
    }

    let irreducible = TermSpec::from_json(
        r#"{"k": 1, "generators": [{"num": "z1^2 + 1", "den": "1"}], "seed": {"point": [0], "value": "1"}}"#,
    )
    .unwrap();
    let ffs = split_factorial(&build_structure(&irreducible).map_err(err("t^2 + 1"))?).map_err(err("t^2 + 1"))?;
    let errs: Vec<_> = ffs.iter().map(to_pochhammer).filter_map(|r| r.err()).collect();
    ensure!(!errs.is_empty(), "t^2 + 1 was split into linear factors");
    ensure!(errs.iter().all(|e| matches!(e, Error::Splitting(_))), "wrong error kind: {errs:?}");
    Ok(format!("2^z (3/2)_z reproduced, {sampled} points agree, t^2 + 1 raises a splitting error"))
}

fn random_halfspace(r: &mut StdRng, k: usize) -> HalfSpace {
    loop {
        let v: Vec<i64> = (0..k).map(|_| r.gen_range(-2..=2)).collect();
        if v.iter().any(|&x| x != 0) {
            return HalfSpace::new(v, r.gen_range(-4..=2)).unwrap();
        }
    }
}

fn random_region(r: &mut StdRng, k: usize) -> PolyhedralRegion {
    let n = r.gen_range(1..=3);
    PolyhedralRegion::new(k, (0..n).map(|_| random_halfspace(r, k)).collect()).unwrap()
}

fn random_hyperplane(r: &mut StdRng, k: usize) -> Hyperplane {
    loop {
        let v: Vec<i64> = (0..k).map(|_| r.gen_range(-2..=2)).collect();
        if let Ok(Some(h)) = Hyperplane::new(v, r.gen_range(-3..=3)) {
            return h;
        }
    }
}

fn connected(points: &[Vec<i64>]) -> bool {
    let set: HashSet<&Vec<i64>> = points.iter().collect();
    let Some(start) = points.first() else { return true };
    let k = start.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(z) = queue.pop_front() {
        for s in unit_steps(k) {
            let w: Vec<i64> = z.iter().zip(&s).map(|(a, b)| a + b).collect();
            if set.contains(&w) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == set.len()
}

fn random_poly(r: &mut StdRng, k: usize, deg: u32) -> MultiPoly {
    loop {
        let mut p = MultiPoly::zero(k);
        for _ in 0..4 {
            let mut e = vec![0u32; k];
            let total = r.gen_range(0..=deg);
            for _ in 0..total {
                e[r.gen_range(0..k)] += 1;
            }
            p = &p + &MultiPoly::from_terms(k, [(e, rat(r.gen_range(-3..=3)))]);
        }
        if !p.is_zero() {
            return p;
        }
    }
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut counts = [0usize; 6];

    // Erosion cover: R = R' ∪ cover and every point of R' carries a full box in R.
    for _ in 0..60 {
        let k = r.gen_range(1..=3);
        let reg = random_region(&mut r, k);
        let n = r.gen_range(0..=2u64);
        let (inner, cover) = erode(&reg, n);
        for z in Window::symmetric(k, if k == 3 { 5 } else { 7 }).points() {
            let (in_r, in_inner) = (reg.contains(&z).unwrap(), inner.contains(&z).unwrap());
            if in_r {
                ensure!(in_inner || cover.contains(&z), "erosion: {z:?} lost without cover");
            }
            if in_inner {
                ensure!(in_r, "erosion: {z:?} added");
                for b in LatticeBox::new(z.clone(), n).points() {
                    ensure!(reg.contains(&b).unwrap(), "erosion: box at {z:?} leaves the region");
                }
            }
        }
        counts[0] += 1;
    }

    // Arrangement partition: off the hyperplanes each point is in exactly one cell.
    for _ in 0..60 {
        let k = r.gen_range(1..=3);
        let hs: Vec<Hyperplane> = (0..r.gen_range(1..=4)).map(|_| random_hyperplane(&mut r, k)).collect();
        let cells = arrangement(&hs, k);
        for z in Window::symmetric(k, if k == 3 { 4 } else { 7 }).points() {
            let on = hs.iter().any(|h| h.contains(&z));
            let n = cells.iter().filter(|c| c.contains(&z).unwrap()).count();
            ensure!(if on { n == 0 } else { n == 1 }, "arrangement: {z:?} in {n} cells (on H: {on})");
        }
        counts[1] += 1;
    }

    // s_path validity, and existence in boxes where it is guaranteed.
    for _ in 0..60 {
        let k = r.gen_range(1..=3);
        let steps = unit_steps(k);
        let (reg, guaranteed) = if r.gen_bool(0.5) {
            (random_region(&mut r, k), false)
        } else {
            let c = random_point(&mut r, k, 3);
            let cons = (0..k)
                .flat_map(|i| {
                    let e = unit(k, i);
                    let m: Vec<i64> = e.iter().map(|x| -x).collect();
                    [HalfSpace::geq(e, c[i]).unwrap(), HalfSpace::geq(m, -(c[i] + 3)).unwrap()]
                })
                .collect();
            (PolyhedralRegion::new(k, cons).unwrap(), true)
        };
        let pts: Vec<Vec<i64>> = Window::symmetric(k, 6).points().filter(|z| reg.contains(z).unwrap()).collect();
        if pts.len() < 2 {
            continue;
        }
        let a = pts.choose(&mut r).unwrap();
        let b = pts.choose(&mut r).unwrap();
        match s_path(a, b, &reg, &steps).map_err(err("s_path"))? {
            Some(path) => {
                ensure!(path.first() == Some(a) && path.last() == Some(b), "s_path: wrong endpoints");
                for w in path.windows(2) {
                    let d: Vec<i64> = w[1].iter().zip(&w[0]).map(|(x, y)| x - y).collect();
                    ensure!(steps.contains(&d), "s_path: step {d:?} not allowed");
                }
                for z in &path {
                    ensure!(reg.contains(z).unwrap(), "s_path: {z:?} leaves the region");
                }
            }
            None => ensure!(!guaranteed, "s_path: no path between {a:?} and {b:?} in a box"),
        }
        counts[2] += 1;
    }

    // Hull connectivity for 100 random pairs of unit boxes, staying inside a
    // common region that contains both boxes.
    for _ in 0..100 {
        let k = r.gen_range(1..=3);
        let b0 = LatticeBox::new(random_point(&mut r, k, 6), 1);
        let b1 = LatticeBox::new(random_point(&mut r, k, 6), 1);
        let hull = hull_points(&b0, &b1).map_err(err("hull_points"))?;
        let pts = hull.points();
        for b in [&b0, &b1] {
            for z in b.points() {
                ensure!(hull.contains(&z), "hull: box point {z:?} missing");
            }
        }
        ensure!(connected(&pts), "hull of {b0:?} and {b1:?} is not lattice-path connected");
        let h = random_halfspace(&mut r, k);
        let corners: Vec<Vec<i64>> = b0.points().chain(b1.points()).collect();
        let slack = corners.iter().map(|z| hyperterm::geometry::dot(h.v(), z)).min().unwrap();
        let reg = PolyhedralRegion::new(k, vec![HalfSpace::new(h.v().to_vec(), slack - 1).unwrap()]).unwrap();
        for z in &pts {
            ensure!(reg.contains(z).unwrap(), "hull point {z:?} leaves a convex region holding both boxes");
        }
        counts[3] += 1;
    }

    // Nonzero point in every box of size total_degree(p).
    for _ in 0..100 {
        let k = r.gen_range(1..=3);
        let p = random_poly(&mut r, k, 3);
        let n = u64::from(p.total_degree());
        let bx = LatticeBox::new(random_point(&mut r, k, 6), n);
        let z = find_nonzero_in_box(&p, &bx).map_err(err("find_nonzero_in_box"))?;
        let z = z.ok_or_else(|| format!("no nonzero point of {p} in {bx:?}"))?;
        ensure!(bx.contains(&z) && !p.eval_int(&z).unwrap().is_zero(), "bad witness {z:?} for {p}");
        if n > 0 {
            let small = LatticeBox::new(bx.corner.clone(), n - 1);
            ensure!(matches!(find_nonzero_in_box(&p, &small), Err(Error::Precondition(_))), "small box accepted");
        }
        counts[4] += 1;
    }

    // Zeros of a simple polynomial lie on v·z = r for integer roots r.
    for _ in 0..40 {
        let k = r.gen_range(1..=2);
        let v = loop {
            let v = random_point(&mut r, k, 2);
            if v.iter().any(|&x| x != 0) {
                break hyperterm::poly::primitive_int(&v);
            }
        };
        let mut pbar = UniPoly::from_ints(&[r.gen_range(-3..=3), 2]);
        for _ in 0..r.gen_range(0..=2) {
            let f = match r.gen_range(0..3) {
                0 => UniPoly::from_ints(&[1, 0, 1]),
                _ => UniPoly::from_ints(&[r.gen_range(-5..=5), 1]),
            };
            pbar = &pbar * &f;
        }
        let p = pbar.compose_linear(&v, 0);
        let s = detect_simple(&p).ok_or_else(|| format!("{p} not detected as simple"))?;
        ensure!(s.pbar.compose_linear(&s.v, 0) == p, "detect_simple does not round-trip {p}");
        let roots = s.pbar.integer_roots().map_err(err("integer_roots"))?.roots;
        for z in Window::symmetric(k, 10).points() {
            if p.eval_int(&z).unwrap().is_zero() {
                let t = hyperterm::geometry::dot(&s.v, &z);
                ensure!(roots.contains(&t), "zero {z:?} of {p} is off the root hyperplanes");
            }
        }
        counts[5] += 1;
    }

    Ok(format!(
        "erosion {}, arrangement {}, s_path {}, hull {}, nonzero-in-box {}, simple zeros {}",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]
    ))
}

fn criterion_7() -> Outcome {
    let mut specs: Vec<(String, TermSpec)> = bundled().into_iter().map(|(n, s)| (n.to_string(), s)).collect();
    let mut r = rng(7);
    for i in 0..3 {
        let k = r.gen_range(1..=2);
        let (_, spec) = random_compatible(&mut r, k);
        let z0 = (0..).map(|_| random_point(&mut r, k, 3));
        // Seed at a point where every generator is finite and nonzero.
        let z0 = z0
            .take(200)
            .find(|z| {
                spec.generators().iter().all(|g| {
                    matches!(g.eval_int(z), Ok(Some(v)) if !v.is_zero())
                })
            })
            .ok_or("no seed point")?;
        specs.push((format!("random#{i}"), spec.with_seed(z0, Rat::one()).unwrap()));
    }
    let (mut values, mut composed) = (0, 0);
    for (name, spec) in &specs {
        let k = spec.arity();
        let seed: Seed = spec.seed.clone().ok_or("spec without seed")?;
        for _ in 0..100 {
            let t = random_point(&mut r, k, 6);
            let window = Window::around(&[&seed.point, &t], 2 * (k as i64 + 1));
            let mut results = Vec::new();
            for _ in 0..3 {
                let mut steps = unit_steps(k);
                steps.shuffle(&mut r);
                results.push(propagate_with_steps(spec, &seed, &t, &window, &steps).map_err(err(name))?);
            }
            let vals: Vec<Option<&Rat>> = results.iter().map(|p| p.value()).collect();
            ensure!(vals.iter().all(|v| *v == vals[0]), "{name}: path dependence at {t:?}: {vals:?}");
            let Some(Propagation::Value { value, path }) = results.first() else { continue };
            ensure!(&replay(spec, &seed, path).map_err(err(name))? == value, "{name}: certificate replay differs");
            values += 1;
            let w: Vec<i64> = t.iter().zip(&seed.point).map(|(a, b)| a - b).collect();
            if let Some(ratio) = spec.compose_direction(&w).map_err(err(name))?.eval_int(&seed.point).map_err(err(name))? {
                ensure!(
                    *value == &seed.value * &ratio,
                    "{name}: f({t:?}) = {value} but f(seed)·R_w(seed) = {}",
                    &seed.value * &ratio
                );
                composed += 1;
            }
        }
    }
    Ok(format!(
        "{} specs x 100 targets: {values} values path-independent, {composed} agree with compose_direction",
        specs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("cocycle suite", criterion_1, Duration::from_secs(10)),
        ("decompose round trip", criterion_2, Duration::from_secs(30)),
        ("structure vs oracle on [-8,8]^k", criterion_3, Duration::from_secs(60)),
        ("factorial forms", criterion_4, Duration::from_secs(60)),
        ("Pochhammer forms", criterion_5, Duration::from_secs(60)),
        ("geometry suite", criterion_6, Duration::from_secs(30)),
        ("oracle path independence", criterion_7, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = match res {
            Ok(detail) if took > *budget => Err(format!("{detail}; over time budget {budget:?}")),
            other => other,
        };
        match res {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{:.2} s]", i + 1, took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}) [{:.2} s]", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
