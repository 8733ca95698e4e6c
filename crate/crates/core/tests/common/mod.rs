//! Random generators and property checks shared by the property suite and
//! the acceptance runner.
#![allow(dead_code)]

use preproj_core::cont_ideal::{d_sub, in_projective};
use preproj_core::plfunc::{to_bfunc, BFunc, PlFunc};
use preproj_core::preproj_fin::DiamondCurve;
use preproj_core::sheets_bricks::{cone_contains, codependence_class, generators, GridSheet, Sheet};
use preproj_core::{Rat, Scalar};
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rat {
    Rat::ratio(n, d)
}

/// Steps in `{-1, 0, +1}` (or `±1` only) summing to `n - 2i`, shuffled.
pub fn lattice_steps(rng: &mut impl Rng, n: usize, i: usize, allow_flat: bool) -> Vec<i64> {
    let target = n as i64 - 2 * i as i64;
    let (mut ups, mut downs) = ((n - i) as i64, i as i64);
    let mut flats = 0;
    if allow_flat {
        // trade (+1, -1) pairs for two flat steps
        let pairs = ups.min(downs);
        let t = rng.gen_range(0..=pairs);
        ups -= t;
        downs -= t;
        flats = 2 * t;
    }
    debug_assert_eq!(ups - downs, target);
    let mut steps: Vec<i64> =
        std::iter::repeat_n(1, ups as usize).chain(std::iter::repeat_n(-1, downs as usize)).collect();
    steps.extend(std::iter::repeat_n(0, flats as usize));
    steps.shuffle(rng);
    steps
}

/// Grid heights `n · f(j/n)` of a lattice path from `i` to `n - i`.
pub fn heights_from_steps(i: usize, steps: &[i64]) -> Vec<i64> {
    let mut h = vec![i as i64];
    for s in steps {
        h.push(h.last().unwrap() + s);
    }
    h
}

/// A boundary function on the `1/n` grid with slopes in `{-1, 0, 1}`.
pub fn grid_bfunc(rng: &mut impl Rng, n: usize, i: usize, allow_flat: bool) -> BFunc {
    let h = heights_from_steps(i, &lattice_steps(rng, n, i, allow_flat));
    let values: Vec<Rat> = h.iter().map(|&v| q(v, n as i64)).collect();
    BFunc::new(q(i as i64, n as i64), PlFunc::from_grid(&values).unwrap()).unwrap()
}

/// A 1-Lipschitz function with arbitrary rational breakpoints and slopes.
pub fn random_lipschitz(rng: &mut impl Rng) -> PlFunc {
    let pieces = rng.gen_range(1..=6);
    let den = rng.gen_range(2..=12i64);
    let mut cuts: Vec<i64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut xs: Vec<i64> = cuts.into_iter().take(pieces - 1).collect();
    xs.push(0);
    xs.push(den);
    xs.sort_unstable();
    xs.dedup();
    let mut y = q(rng.gen_range(-6..=6), 6);
    let mut pts = vec![(q(0, 1), y.clone())];
    for w in xs.windows(2) {
        let sd = rng.gen_range(1..=5i64);
        let slope = q(rng.gen_range(-sd..=sd), sd);
        y += slope * q(w[1] - w[0], den);
        pts.push((q(w[1], den), y.clone()));
    }
    PlFunc::new(pts).unwrap()
}

/// A random boundary function, either on a lattice or from
/// [`random_lipschitz`] normalized by `to_bfunc`.
pub fn random_bfunc(rng: &mut impl Rng) -> BFunc {
    loop {
        if rng.gen_bool(0.5) {
            let n = rng.gen_range(2..=12);
            let i = rng.gen_range(1..n);
            return grid_bfunc(rng, n, i, true);
        }
        if let Ok(b) = to_bfunc(&random_lipschitz(rng)) {
            return b;
        }
    }
}

/// A rational in the open interval `(lo, hi)`.
pub fn rational_between(rng: &mut impl Rng, lo: &Rat, hi: &Rat) -> Rat {
    let t = q(rng.gen_range(1..60), 60);
    lo.clone() + (hi.clone() - lo.clone()) * t
}

pub fn check_diamond_containment(b: &BFunc) -> Result<(), String> {
    let mut xs: Vec<Rat> = b.func().xs().cloned().collect();
    xs.extend([b.k().clone(), Rat::one() - b.k().clone()]);
    for x in xs {
        let v = b.func().eval(&x).unwrap();
        let (top, bottom) = (b.top_value(&x), b.bottom_value(&x));
        if !(top <= v && v <= bottom) {
            return Err(format!("k = {}, x = {x}: {top} <= {v} <= {bottom} fails", b.k()));
        }
    }
    Ok(())
}

pub fn check_to_bfunc_idempotent(b: &BFunc) -> Result<(), String> {
    let again = to_bfunc(b.func()).map_err(|e| e.to_string())?;
    if again != *b {
        return Err(format!("to_bfunc moved an element of B_{}", b.k()));
    }
    Ok(())
}

/// `min(f, g)` and `max(f, g)` stay in `B_k`, bracket both, and sum to `f + g`.
pub fn check_lattice_laws(f: &BFunc, g: &BFunc) -> Result<(), String> {
    let lo = f.func().pointwise_min(g.func());
    let hi = f.func().pointwise_max(g.func());
    for h in [&lo, &hi] {
        BFunc::new(f.k().clone(), h.clone()).map_err(|e| format!("min/max left B_k: {e}"))?;
    }
    let brackets = lo.pointwise_leq(f.func())
        && lo.pointwise_leq(g.func())
        && f.func().pointwise_leq(&hi)
        && g.func().pointwise_leq(&hi);
    if !brackets {
        return Err("min/max do not bracket the arguments".into());
    }
    if lo.add(&hi) != f.func().add(g.func()) {
        return Err("min + max != f + g".into());
    }
    Ok(())
}

/// Random points `(x, ℓ)` with `x ∈ (0, 1)` and `ℓ` spread over the diamond
/// of `P_k` and slightly beyond.
pub fn sample_points(rng: &mut impl Rng, count: usize) -> Vec<(Rat, Rat)> {
    (0..count)
        .map(|_| {
            let x = q(rng.gen_range(1..48), 48);
            let len = q(rng.gen_range(0..=52), 48);
            (x, len)
        })
        .collect()
}

/// Every element of `P_k` lies in exactly one of `D_f` and `P_k / D_f`.
pub fn check_ses(b: &BFunc, pts: &[(Rat, Rat)]) -> Result<(), String> {
    let d = d_sub(b.clone());
    let u = d.quotient();
    for (x, len) in pts {
        let (inp, ind, inu) =
            (in_projective(b.k(), x, len), d.member(x, len).unwrap(), u.member(x, len).unwrap());
        let ok = if inp { ind != inu } else { !ind && !inu };
        if !ok {
            return Err(format!("k = {}, (x, len) = ({x}, {len}): P {inp}, D {ind}, U {inu}", b.k()));
        }
    }
    Ok(())
}

/// Pathlike elements of `D_f` stay in `D_f` under longer paths that remain
/// nonzero in `P_k`.
pub fn check_downward_closure(b: &BFunc, pts: &[(Rat, Rat)]) -> Result<(), String> {
    let d = d_sub(b.clone());
    for (x, len) in pts {
        if !d.member(x, len).unwrap() {
            continue;
        }
        for (z, len2) in pts {
            let reachable = len2.clone() - len.clone() >= (x.clone() - z.clone()).abs();
            if reachable && in_projective(b.k(), z, len2) && !d.member(z, len2).unwrap() {
                return Err(format!("k = {}: ({x}, {len}) in D but ({z}, {len2}) is not", b.k()));
            }
        }
    }
    Ok(())
}

/// A sheet between two random lattice curves of `P_{i/n}` (flat steps allowed).
pub fn grid_sheet(rng: &mut impl Rng) -> (usize, Sheet) {
    let n = rng.gen_range(2..=8);
    let i = rng.gen_range(1..n);
    let a = grid_bfunc(rng, n, i, true);
    let b = grid_bfunc(rng, n, i, true);
    let (up, down) = if rng.gen_bool(0.2) { (a.clone(), b) } else {
        let lo = a.func().pointwise_min(b.func());
        let hi = a.func().pointwise_max(b.func());
        let k = a.k().clone();
        (BFunc::new(k.clone(), lo).unwrap(), BFunc::new(k, hi).unwrap())
    };
    let k = up.k().clone();
    (n, Sheet::new(k, up, down).unwrap())
}

/// Compare `generators` with the defining condition at every point of the
/// `1/(4n)` grid, testing against all points of the `1/(8n)` grid.
///
/// Support endpoints of lattice sheets lie on the `1/(2n)` grid, so for each
/// sampled `y` the nearest finer point on either side still lies in the
/// support whenever any point on that side does.
pub fn check_generators_brute_force(n: usize, s: &Sheet) -> Result<(), String> {
    let gens = generators(s);
    let up = s.up().func();
    let fine = 8 * n as i64;
    let zs: Vec<Rat> = (1..fine).map(|t| q(t, fine)).filter(|z| s.in_support(z)).collect();
    for t in 1..(4 * n as i64) {
        let y = q(t, 4 * n as i64);
        if !s.in_support(&y) {
            if gens.contains(&y) {
                return Err(format!("generator {y} outside the support"));
            }
            continue;
        }
        let uy = up.eval(&y).unwrap();
        let brute = zs
            .iter()
            .filter(|z| **z != y)
            .all(|z| (y.clone() - z.clone()).abs() > uy.clone() - up.eval(z).unwrap());
        if brute != gens.contains(&y) {
            return Err(format!("y = {y}: definition says {brute}, generators() says {}", !brute));
        }
    }
    Ok(())
}

/// Raising `b` inside `S'(z)` keeps `(z, b)` in the cone.
pub fn check_cone_monotone(rng: &mut impl Rng, s: &Sheet, sp: &Sheet) -> Result<(), String> {
    for _ in 0..8 {
        let y = q(rng.gen_range(1..24), 24);
        let z = q(rng.gen_range(1..24), 24);
        let a = q(rng.gen_range(-6..=6), 12);
        let b = q(rng.gen_range(0..=24), 24);
        if !cone_contains(s, sp, &y, &a, &z, &b) {
            continue;
        }
        let top = sp.down().func().eval(&z).unwrap();
        for t in 1..6 {
            let b2 = b.clone() + (top.clone() - b.clone()) * q(t, 6);
            if b2 < top && !cone_contains(s, sp, &y, &a, &z, &b2) {
                return Err(format!("(z, b) = ({z}, {b}) in C_{a}({y}) but ({z}, {b2}) is not"));
            }
        }
    }
    Ok(())
}

/// `class(z, a) = class(y, a)` for every member `z` of `class(y, a)`.
pub fn check_class_constancy(rng: &mut impl Rng, s: &Sheet, sp: &Sheet) -> Result<(), String> {
    let gens = generators(s);
    for y in gens.representatives() {
        let a = q(rng.gen_range(-4..=4), 8);
        let class = codependence_class(s, sp, &y, &a).map_err(|e| e.to_string())?;
        let mut members = class.points();
        members.extend(class.representatives());
        for z in members {
            let other = codependence_class(s, sp, &z, &a).map_err(|e| e.to_string())?;
            if other != class {
                return Err(format!("class({z}, {a}) differs from class({y}, {a})"));
            }
        }
    }
    Ok(())
}

/// All diamond curves of `P_i` for the `n`-grid.
pub fn all_curves(n: usize, i: usize) -> Vec<DiamondCurve> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n - i {
            continue;
        }
        let steps: Vec<i64> = (0..n).map(|b| if mask >> b & 1 == 1 { 1 } else { -1 }).collect();
        let h = heights_from_steps(i, &steps);
        if h.iter().all(|&v| v >= 0) {
            if let Ok(c) = DiamondCurve::new(n, i, h.iter().map(|&v| v as usize).collect()) {
                out.push(c);
            }
        }
    }
    out
}

/// All subquotients of the finite projectives for this `n` that are
/// nonzero, split into zigzag strips and modules with a doubled column.
pub fn grid_sheets(n: usize) -> (Vec<GridSheet>, Vec<GridSheet>) {
    let (mut strips, mut deep) = (Vec::new(), Vec::new());
    for i in 1..n {
        let curves = all_curves(n, i);
        for up in &curves {
            for down in &curves {
                let g = GridSheet::new(up.clone(), down.clone()).unwrap();
                if g.is_zero() {
                    continue;
                }
                if g.is_strip() {
                    strips.push(g);
                } else if g.max_column() >= 2 {
                    deep.push(g);
                }
            }
        }
    }
    (strips, deep)
}
