//! Seeded generators and small independent oracles shared by the
//! integration tests and the acceptance target.
#![allow(dead_code)]

use polymax::{AffineFunctional, Point, PolyhedralFunction, Rat};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

/// A rational in `[lo, hi]` with denominator at most `max_den`.
pub fn rand_rat(g: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rat {
    let q = g.gen_range(1..=max_den);
    let p = g.gen_range(lo * q..=hi * q);
    Rat::new(p, q)
}

pub fn rand_point(g: &mut impl Rng, n: usize, lo: i64, hi: i64, max_den: i64) -> Point {
    Point((0..n).map(|_| rand_rat(g, lo, hi, max_den)).collect())
}

pub fn rand_functional(g: &mut impl Rng, n: usize, slope: i64, max_den: i64) -> AffineFunctional {
    AffineFunctional::new(
        rand_point(g, n, -slope, slope, max_den),
        rand_rat(g, -4, 4, max_den),
    )
}

/// Any polyhedral function: `n` variables, up to `k` functionals with
/// entries of denominator at most `max_den`.
pub fn rand_polyfun(g: &mut impl Rng, n: usize, k: usize, max_den: i64) -> PolyhedralFunction {
    let k = g.gen_range(1..=k);
    let fs = (0..k).map(|_| rand_functional(g, n, 3, max_den)).collect();
    PolyhedralFunction::new(n, fs).unwrap()
}

/// Integer slopes in `[-s, s]ⁿ`, constants of denominator at most `max_den`.
pub fn rand_transintegral(
    g: &mut impl Rng,
    n: usize,
    k: usize,
    s: i64,
    max_den: i64,
) -> PolyhedralFunction {
    let k = g.gen_range(1..=k);
    let fs = (0..k)
        .map(|_| AffineFunctional::new(rand_point(g, n, -s, s, 1), rand_rat(g, -4, 4, max_den)))
        .collect();
    PolyhedralFunction::new(n, fs).unwrap()
}

/// A one-variable convex function with integer slopes, built from its
/// pieces: returns the function and its pieces left to right, which is its
/// canonical form.
pub fn rand_1d(g: &mut impl Rng) -> (PolyhedralFunction, Vec<AffineFunctional>) {
    let k = g.gen_range(1..=6);
    let mut slopes: Vec<i64> = (-6..=6).collect();
    slopes.shuffle(g);
    let mut slopes = slopes[..k].to_vec();
    slopes.sort();
    let mut bps: Vec<Rat> = Vec::new();
    while bps.len() < k - 1 {
        let b = rand_rat(g, 0, 10, 20);
        if b > Rat::zero() && b < Rat::from_int(10) && !bps.contains(&b) {
            bps.push(b);
        }
    }
    bps.sort();
    let mut c = rand_rat(g, -10, 10, 20);
    let mut pieces = vec![AffineFunctional::new(
        Point(vec![Rat::from_int(slopes[0])]),
        c.clone(),
    )];
    for (i, b) in bps.iter().enumerate() {
        c = c + Rat::from_int(slopes[i] - slopes[i + 1]) * b;
        pieces.push(AffineFunctional::new(
            Point(vec![Rat::from_int(slopes[i + 1])]),
            c.clone(),
        ));
    }
    (PolyhedralFunction::new(1, pieces.clone()).unwrap(), pieces)
}

/// Grid nodes `lo + i·step` strictly inside `[lo, hi]ⁿ`.
pub fn open_grid(n: usize, lo: i64, hi: i64, step: &Rat) -> Vec<Point> {
    let ticks: Vec<Rat> = {
        let mut t = Vec::new();
        let mut x = Rat::from_int(lo) + step;
        while x < Rat::from_int(hi) {
            t.push(x.clone());
            x = x + step;
        }
        t
    };
    let mut pts: Vec<Vec<Rat>> = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                ticks.iter().map(move |t| {
                    let mut q = p.clone();
                    q.push(t.clone());
                    q
                })
            })
            .collect();
    }
    pts.into_iter().map(Point).collect()
}

/// Index of the unique maximizing functional at `x`, if unique.
pub fn unique_max(fs: &[AffineFunctional], x: &Point) -> Option<usize> {
    let vals: Vec<Rat> = fs.iter().map(|l| l.slope.dot(x) + &l.constant).collect();
    let best = vals.iter().max()?;
    let mut it = vals.iter().enumerate().filter(|(_, v)| *v == best);
    let (i, _) = it.next()?;
    it.next().is_none().then_some(i)
}

/// Keeps the functionals that are the unique maximum at some node of
/// `nodes` (or, with `patch`, at every node of a 3×3 patch of spacing
/// `step` around it). Each kept functional is strictly largest somewhere,
/// so the kept list, sorted, is the canonical form of its maximum.
pub fn visible(
    fs: &[AffineFunctional],
    nodes: &[Point],
    step: &Rat,
    patch: bool,
) -> Vec<AffineFunctional> {
    let offsets: Vec<Point> = if patch {
        let mut o = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                o.push(Point(vec![step * &r(a, 1), step * &r(b, 1)]));
            }
        }
        o
    } else {
        vec![Point::zeros(nodes.first().map_or(1, Point::dim))]
    };
    let mut keep = vec![false; fs.len()];
    for x in nodes {
        let Some(i) = unique_max(fs, x) else {
            continue;
        };
        if offsets
            .iter()
            .all(|d| nodes.contains(&x.add(d)) && unique_max(fs, &x.add(d)) == Some(i))
        {
            keep[i] = true;
        }
    }
    let mut out: Vec<AffineFunctional> = fs
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(l, _)| l.clone())
        .collect();
    out.sort();
    out
}

/// A transintegral function on `[lo, hi]²` whose canonical functionals are
/// all uniquely active at an interior node of the step-`step` grid.
pub fn rand_visible_2d(
    g: &mut impl Rng,
    lo: i64,
    hi: i64,
    step: &Rat,
    k: usize,
    s: i64,
    max_den: i64,
) -> (PolyhedralFunction, Vec<AffineFunctional>) {
    let nodes = open_grid(2, lo, hi, step);
    loop {
        let f = rand_transintegral(g, 2, k, s, max_den);
        let kept = visible(f.functionals(), &nodes, step, false);
        if !kept.is_empty() {
            return (PolyhedralFunction::new(2, kept.clone()).unwrap(), kept);
        }
    }
}

/// A tropical polynomial on `[lo, hi]²`: slopes in `[0, s]²`, each
/// functional dominant on a 3×3 patch of interior grid nodes.
pub fn rand_tropical(
    g: &mut impl Rng,
    lo: i64,
    hi: i64,
    step: &Rat,
    k: usize,
    s: i64,
) -> (PolyhedralFunction, Vec<AffineFunctional>) {
    let nodes = open_grid(2, lo, hi, step);
    loop {
        let n = g.gen_range(1..=k);
        let fs: Vec<AffineFunctional> = (0..n)
            .map(|_| AffineFunctional::new(rand_point(g, 2, 0, s, 1), rand_rat(g, -4, 4, 2)))
            .collect();
        let kept = visible(&fs, &nodes, step, true);
        if !kept.is_empty() {
            return (PolyhedralFunction::new(2, kept.clone()).unwrap(), kept);
        }
    }
}

/// An integral polyhedral function: integer slopes in `[-3, 3]ⁿ` and
/// integer constants.
pub fn rand_integral(g: &mut impl Rng, n: usize, k: usize) -> PolyhedralFunction {
    let k = g.gen_range(1..=k);
    let fs = (0..k)
        .map(|_| AffineFunctional::new(rand_point(g, n, -3, 3, 1), rand_rat(g, -5, 5, 1)))
        .collect();
    PolyhedralFunction::new(n, fs).unwrap()
}

/// Direct evaluation from the functional list.
pub fn eval_max(fs: &[AffineFunctional], x: &Point) -> Rat {
    fs.iter()
        .map(|l| l.slope.dot(x) + &l.constant)
        .max()
        .unwrap()
}

pub fn rat_strategy(lo: i64, hi: i64, max_den: i64) -> impl Strategy<Value = Rat> {
    (1..=max_den).prop_flat_map(move |q| (lo * q..=hi * q).prop_map(move |p| Rat::new(p, q)))
}

pub fn point_strategy(n: usize, lo: i64, hi: i64, max_den: i64) -> impl Strategy<Value = Point> {
    proptest::collection::vec(rat_strategy(lo, hi, max_den), n).prop_map(Point)
}

pub fn functional_strategy(
    n: usize,
    slope: i64,
    slope_den: i64,
    max_den: i64,
) -> impl Strategy<Value = AffineFunctional> {
    (
        point_strategy(n, -slope, slope, slope_den),
        rat_strategy(-4, 4, max_den),
    )
        .prop_map(|(s, c)| AffineFunctional::new(s, c))
}

/// Polyhedral functions with `1..=k` functionals.
pub fn polyfun_strategy(
    n: usize,
    k: usize,
    slope_den: i64,
    max_den: i64,
) -> impl Strategy<Value = PolyhedralFunction> {
    proptest::collection::vec(functional_strategy(n, 3, slope_den, max_den), 1..=k)
        .prop_map(move |fs| PolyhedralFunction::new(n, fs).unwrap())
}
