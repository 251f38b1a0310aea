//! Acceptance criteria 1-10, one pass/fail line each.
//!
//! Expected values come from how the inputs were built (pieces, visible
//! functionals) or from small brute-force computations written here, not
//! from the library routine under test.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use num_integer::Integer;
use num_traits::One;
use polymax::cert::{self, Certificate, OracleSpec, Params};
use polymax::detect1d::{
    detect_integral_values, farey_points, reconstruct_transintegral, RayTag, Site, Witness,
};
use polymax::detectnd::{reconstruct_box, GridSpec};
use polymax::oracle::FunctionOracle;
use polymax::polyfun::{verify_slope_decomposition, verify_with_slope_set, DecompositionCheck};
use polymax::rat::{group_membership, membership_computation};
use polymax::tropical::{detect_tropical, TropicalConfig};
use polymax::{
    AffineFunctional, DetectOutcome, HalfSpace, IntegralityClass, Point, PolyhedralFunction, Rat,
    RationalBox, RationalPolyhedron,
};
use rand::Rng;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Accept certificates collected for the replay criterion.
#[derive(Default)]
struct Certs(Vec<(String, Certificate)>);

fn everywhere(f: &PolyhedralFunction) -> OracleSpec {
    OracleSpec::Function {
        function: f.clone(),
        domain: None,
    }
}

fn criterion_1(certs: &mut Certs) -> Check {
    let mut g = rng(1);
    let (a, b) = (r(0, 1), r(10, 1));
    let mut max_pieces = 0;
    for case in 0..200 {
        let (f, pieces) = rand_1d(&mut g);
        let spec = everywhere(&f);
        let o = spec.build().map_err(|e| e.to_string())?;
        let out = reconstruct_transintegral(&o, &a, &b, 64).map_err(|e| e.to_string())?;
        let DetectOutcome::Accept {
            reconstruction,
            queries,
        } = out
        else {
            return Err(format!("case {case}: {out:?} for {f}"));
        };
        let got = reconstruction.to_function().canonicalize();
        ensure!(
            got.functionals() == pieces.as_slice(),
            "case {case}: reconstructed {got}, built from {f}"
        );
        ensure!(
            f.canonicalize().functionals() == pieces.as_slice(),
            "case {case}: canonical form of the input differs from its pieces"
        );
        max_pieces = max_pieces.max(pieces.len());
        certs.0.push((
            format!("1-D case {case}"),
            Certificate::interval(spec, Params::default(), &reconstruction, &queries, false),
        ));
    }
    Ok(format!("200/200 exact, up to {max_pieces} pieces"))
}

fn criterion_2() -> Check {
    let square = FunctionOracle::builtin("square").unwrap();
    let out = reconstruct_transintegral(&square, &r(0, 1), &r(1, 1), 64).unwrap();
    ensure!(out.is_exhausted(), "square: {out:?}");

    let half = FunctionOracle::builtin("halfslope").unwrap();
    let out = reconstruct_transintegral(&half, &r(-1, 1), &r(1, 1), 64).unwrap();
    let Some(rej) = out.rejection() else {
        return Err(format!("halfslope: {out:?}"));
    };
    let Witness::NonIntegerSlope { span, slope } = &rej.witness else {
        return Err(format!("halfslope witness {:?}", rej.witness));
    };
    // t ↦ max(t/2, 0) recomputed here.
    let h = |t: &Rat| (t * &r(1, 2)).max(Rat::zero());
    ensure!(*slope == r(1, 2), "halfslope slope {slope}");
    ensure!(
        h(&span.lo) == span.f_lo && h(&span.hi) == span.f_hi,
        "halfslope span values"
    );
    ensure!(
        &span.f_lo + &span.f_hi == &span.f_mid + &span.f_mid,
        "span is not affine"
    );
    ensure!(
        (&span.f_hi - &span.f_lo) / (&span.hi - &span.lo) == r(1, 2),
        "span slope"
    );

    let saw = FunctionOracle::builtin("sawtooth-nonconvex").unwrap();
    let out = reconstruct_transintegral(&saw, &r(-1, 1), &r(3, 1), 64).unwrap();
    let Some(Witness::Jensen(w)) = out.rejection().map(|r| &r.witness) else {
        return Err(format!("sawtooth: {out:?}"));
    };
    // The sawtooth recomputed here: t on (-∞, 0], -t on [0, 1], t - 2 after.
    let s = |t: &Rat| {
        if t <= &Rat::zero() {
            t.clone()
        } else if t <= &Rat::one() {
            -t
        } else {
            t - &r(2, 1)
        }
    };
    let mix = &w.t * &w.x[0] + (Rat::one() - &w.t) * &w.y[0];
    let chord = &w.t * s(&w.x[0]) + (Rat::one() - &w.t) * s(&w.y[0]);
    ensure!(s(&mix) > chord, "witness does not violate Jensen");
    ensure!(w.recheck(&saw).unwrap(), "witness recheck failed");
    Ok(format!(
        "square exhausted, halfslope slope 1/2 on [{}, {}], sawtooth triple x={} y={} t={}",
        span.lo, span.hi, w.x, w.y, w.t
    ))
}

/// Membership in `ℤ + ℤx₁ + ⋯` via `(1/lcm of denominators)ℤ`.
fn member_by_denominators(v: &Rat, x: &Point) -> bool {
    let l =
        x.0.iter()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    (v * &Rat::from_bigint(l)).is_integer()
}

fn samples(n: usize) -> Vec<Point> {
    let f = farey_points(&r(-5, 1), &r(5, 1), 100);
    (0..100)
        .map(|i| match n {
            1 => Point(vec![f[i].clone()]),
            _ => Point(vec![f[i].clone(), f[(7 * i + 3) % 100].clone()]),
        })
        .collect()
}

fn criterion_3() -> Check {
    let mut g = rng(3);
    let mut detector_rejects = 0;
    for case in 0..50 {
        let n = 1 + case % 2;
        let f = rand_integral(&mut g, n, 4);
        let pts = samples(n);
        for x in &pts {
            let v = eval_max(f.functionals(), x);
            ensure!(
                group_membership(&v, x) && member_by_denominators(&v, x),
                "case {case}: {v} at {x} not in the group"
            );
        }
        // Raise the constant of the function's top functional at the first
        // sample whose denominators are odd.
        let x = pts
            .iter()
            .find(|x| x.0.iter().all(|c| c.denom().is_odd()))
            .expect("integer samples exist");
        let top = f
            .functionals()
            .iter()
            .max_by_key(|l| l.slope.dot(x) + &l.constant)
            .unwrap()
            .clone();
        let fs: Vec<AffineFunctional> = f
            .functionals()
            .iter()
            .map(|l| {
                if *l == top {
                    AffineFunctional::new(l.slope.clone(), &l.constant + &r(1, 2))
                } else {
                    l.clone()
                }
            })
            .collect();
        let bad = PolyhedralFunction::new(n, fs).unwrap();
        let failing = pts
            .iter()
            .map(|x| membership_computation(&eval_max(bad.functionals(), x), x))
            .find(|c| !c.member);
        let Some(c) = failing else {
            return Err(format!("case {case}: no failing sample for {bad}"));
        };
        ensure!(
            !member_by_denominators(&c.value, &c.point) && !c.scaled.is_integer(),
            "case {case}: computation at {} is inconsistent",
            c.point
        );
        if n == 1 {
            let o = FunctionOracle::from_polyfun_everywhere(&bad);
            let out = detect_integral_values(&o, &r(-5, 1), &r(5, 1), 64, 100).unwrap();
            let Some(Witness::Membership { computation, .. }) = out.rejection().map(|r| &r.witness)
            else {
                return Err(format!("case {case}: detector gave {out:?}"));
            };
            ensure!(
                !computation.member
                    && computation.value == eval_max(bad.functionals(), &computation.point)
                    && !member_by_denominators(&computation.value, &computation.point),
                "case {case}: detector witness does not check out"
            );
            detector_rejects += 1;
        }
    }
    Ok(format!(
        "50 functions x 100 samples in the group; 50 perturbed functions fail, {detector_rejects} via the 1-D detector"
    ))
}

fn criterion_4(certs: &mut Certs) -> Check {
    let mut g = rng(4);
    let step = r(1, 2);
    let grid = GridSpec::new(
        RationalBox::cube(2, r(-3, 1), r(3, 1)).unwrap(),
        step.clone(),
    )
    .unwrap();
    let mut cells = 0;
    for case in 0..50 {
        let (f, expected) = rand_visible_2d(&mut g, -3, 3, &step, 5, 4, 4);
        let spec = everywhere(&f);
        let o = spec.build().unwrap();
        let out = reconstruct_box(&o, &grid, 64, IntegralityClass::TransIntegral)
            .map_err(|e| e.to_string())?;
        let DetectOutcome::Accept {
            reconstruction,
            queries,
        } = out
        else {
            return Err(format!("case {case}: {out:?} for {f}"));
        };
        ensure!(
            reconstruction.function.functionals() == expected.as_slice(),
            "case {case}: reconstructed {}, expected {f}",
            reconstruction.function
        );
        cells += reconstruction.cells.len();
        certs.0.push((
            format!("2-D case {case}"),
            Certificate::grid(spec, Params::default(), &reconstruction, &queries, false),
        ));
    }
    Ok(format!("50/50 exact, {cells} certified cells"))
}

fn half_grid_point(g: &mut impl Rng, lo: i64, hi: i64) -> Point {
    Point(vec![
        r(g.gen_range(2 * lo..=2 * hi), 2),
        r(g.gen_range(2 * lo..=2 * hi), 2),
    ])
}

fn criterion_5(certs: &mut Certs) -> Check {
    let mut g = rng(5);
    let step = r(1, 2);
    let grid = GridSpec::new(
        RationalBox::cube(2, r(-4, 1), r(4, 1)).unwrap(),
        step.clone(),
    )
    .unwrap();
    let cfg = TropicalConfig {
        budget: 64,
        ray_length: r(2, 1),
    };
    for case in 0..25 {
        let (f, expected) = rand_tropical(&mut g, -4, 4, &step, 5, 3);
        let mut centers = BTreeSet::new();
        while centers.len() < 5 {
            centers.insert(half_grid_point(&mut g, -2, 2));
        }
        let centers: Vec<Point> = centers.into_iter().collect();
        let spec = everywhere(&f);
        let o = spec.build().unwrap();
        let out = detect_tropical(&o, &grid, &centers, &cfg).map_err(|e| e.to_string())?;
        let DetectOutcome::Accept {
            reconstruction,
            queries,
        } = out
        else {
            return Err(format!("case {case}: {out:?} for {f}"));
        };
        ensure!(
            reconstruction.function.functionals() == expected.as_slice(),
            "case {case}: reconstructed {}, expected {f}",
            reconstruction.function
        );
        let params = Params {
            ray_length: cfg.ray_length.clone(),
            ..Params::default()
        };
        certs.0.push((
            format!("tropical case {case}"),
            Certificate::tropical(spec, params, &centers, &reconstruction, &queries),
        ));
    }

    let h = FunctionOracle::builtin("halfslope-trop").unwrap();
    let centers: Vec<Point> = ["0,0", "2,0", "1,-1", "-2,1", "3,1"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let out = detect_tropical(&h, &grid, &centers, &cfg).unwrap();
    let Some(rej) = out.rejection() else {
        return Err(format!("max(x/2, y, 0): {out:?}"));
    };
    let Site::TropicalRay { center, ray } = &rej.site else {
        return Err(format!("rejection site {:?}", rej.site));
    };
    let Witness::NonIntegerSlope { span, slope } = &rej.witness else {
        return Err(format!("witness {:?}", rej.witness));
    };
    // Along the ray, t ↦ max((cₓ + t·dₓ)/2, c_y + t·d_y, 0).
    let d = ray.direction();
    let along = |t: &Rat| {
        let x = center.along(&d, t);
        (&x[0] * &r(1, 2)).max(x[1].clone()).max(Rat::zero())
    };
    ensure!(
        along(&span.lo) == span.f_lo && along(&span.hi) == span.f_hi,
        "ray witness values"
    );
    ensure!(
        *ray == RayTag::Left && *slope == r(-1, 2),
        "expected slope -1/2 on a left ray, got {slope} on {}",
        ray.as_str()
    );
    Ok(format!(
        "25/25 exact; max(x/2, y, 0) rejected on the left ray from {center} with slope {slope}"
    ))
}

/// `max{μ(z) : λ active at x}`, from the functional list.
fn dir_deriv_by_definition(fs: &[AffineFunctional], x: &Point, z: &Point) -> Rat {
    let top = eval_max(fs, x);
    fs.iter()
        .filter(|l| l.slope.dot(x) + &l.constant == top)
        .map(|l| l.slope.dot(z))
        .max()
        .unwrap()
}

fn criterion_6() -> Check {
    let mut g = rng(6);
    for case in 0..200 {
        let n = g.gen_range(1..=3);
        let f = rand_polyfun(&mut g, n, 6, 4);
        let z = loop {
            let z = rand_point(&mut g, n, -2, 2, 2);
            if !z.is_zero() {
                break z;
            }
        };
        // Both points in the closed domain of one functional, where f is
        // affine. Coarse coordinates put many of them on domain boundaries.
        let (x1, x2) = loop {
            let x1 = rand_point(&mut g, n, -3, 3, 2);
            let x2 = rand_point(&mut g, n, -3, 3, 2);
            let a1 = f.active_set(&x1).unwrap();
            if f.active_set(&x2).unwrap().iter().any(|i| a1.contains(i)) {
                break (x1, x2);
            }
        };
        let t = rand_rat(&mut g, 0, 1, 6);
        let xm = Point::lerp(&t, &x1, &x2);
        let d = |x: &Point| {
            let v = f.dir_deriv(x, &z).unwrap();
            assert_eq!(v, dir_deriv_by_definition(f.functionals(), x, &z));
            v
        };
        let (d1, d2, dm) = (d(&x1), d(&x2), d(&xm));
        ensure!(
            dm <= &t * &d1 + (Rat::one() - &t) * &d2,
            "case {case}: f'(·, z) not convex between {x1} and {x2} at t = {t}"
        );
    }
    let mut domains = 0;
    for case in 0..50 {
        let f = rand_polyfun(&mut g, 2, 5, 3);
        let z = Point(vec![rand_rat(&mut g, -2, 2, 3), r(1, 1)]);
        for i in 0..f.len() {
            let mut interior = Vec::new();
            for _ in 0..2000 {
                if interior.len() == 20 {
                    break;
                }
                let x = rand_point(&mut g, 2, -4, 4, 8);
                if unique_max(f.functionals(), &x) == Some(i) {
                    interior.push(x);
                }
            }
            if interior.is_empty() {
                continue;
            }
            domains += 1;
            let values: BTreeSet<Rat> = interior
                .iter()
                .map(|x| f.dir_deriv(x, &z).unwrap())
                .collect();
            ensure!(
                values.len() == 1 && values.first() == Some(&f.functionals()[i].slope.dot(&z)),
                "case {case}: f'(·, z) varies on the domain of {}",
                f.functionals()[i]
            );
        }
    }
    Ok(format!(
        "convexity on 200 instances; constancy on {domains} domains from 50 functions"
    ))
}

fn tu_grid() -> Vec<(Rat, Rat)> {
    let ts = [r(0, 1), r(1, 4), r(1, 2), r(3, 4), r(1, 1)];
    let us = [r(-1, 1), r(-1, 2), r(0, 1), r(1, 2), r(1, 1)];
    ts.iter()
        .flat_map(|t| us.iter().map(move |u| (t.clone(), u.clone())))
        .collect()
}

fn criterion_7() -> Check {
    let grid = tu_grid();
    let mxy = PolyhedralFunction::new(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
        ],
    )
    .unwrap();
    let (x1, x2, z) = (
        Point::from_ints(&[0, 0]),
        Point::from_ints(&[1, 0]),
        Point::from_ints(&[0, 1]),
    );
    let c = verify_slope_decomposition(&mxy, &x1, &x2, &z, &grid).unwrap();
    ensure!(c.holds(), "max(x, y): {c:?}");

    let mut g = rng(7);
    for case in 0..20 {
        let f = rand_transintegral(&mut g, 2, 5, 3, 4);
        let x1 = rand_point(&mut g, 2, -2, 2, 2);
        let x2 = loop {
            let p = rand_point(&mut g, 2, -2, 2, 2);
            if p != x1 {
                break p;
            }
        };
        let z = loop {
            let p = rand_point(&mut g, 2, -2, 2, 1);
            if !p.is_zero() {
                break p;
            }
        };
        let c = verify_slope_decomposition(&f, &x1, &x2, &z, &grid).unwrap();
        ensure!(c.holds(), "case {case}: {f} along {z}: {c:?}");
    }

    // Without the slope m = 1 the decomposition of max(x, y) along y reads
    // t, so it first fails where u > t in (t, u) order.
    let named = grid
        .iter()
        .find(|(t, u)| t.clone().max(u.clone()) != *t)
        .cloned()
        .unwrap();
    let c = verify_with_slope_set(&mxy, &x1, &x2, &z, &[Rat::zero()], &grid).unwrap();
    let DecompositionCheck::Mismatch { t, u, .. } = &c else {
        return Err(format!("truncated slope set: {c:?}"));
    };
    ensure!(
        (t.clone(), u.clone()) == named,
        "truncated slope set failed at ({t}, {u}), expected ({}, {})",
        named.0,
        named.1
    );
    Ok(format!(
        "max(x, y) and 20 random functions hold on 25 points; truncated set fails at (t, u) = ({t}, {u})"
    ))
}

/// A face of a polyhedron in ℚ¹ or ℚ², as a point set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PointSet {
    Point(Point),
    Segment(Point, Point),
    Ray(Point, Point),
    /// Normalized `(a, b, c)` of `a·x + b·y + c = 0`.
    Line(Vec<Rat>),
    Whole,
}

impl PointSet {
    fn dimension(&self, n: usize) -> usize {
        match self {
            PointSet::Point(_) => 0,
            PointSet::Whole => n,
            _ => 1,
        }
    }
}

fn value(l: &AffineFunctional, x: &Point) -> Rat {
    l.slope.dot(x) + &l.constant
}

/// Scales a nonzero rational vector to a primitive integer vector.
fn primitive(d: &Point) -> Point {
    let l =
        d.0.iter()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = d.0.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::from(0), |acc, c| acc.gcd(c));
    Point(ints.iter().map(|c| Rat::from_bigint(c / &g)).collect())
}

/// `{x ∈ P : λᵢ(x) = 0, i ∈ s}` by explicit solving; `None` when empty.
/// `P` must be full-dimensional, and `s` nonempty.
fn brute_face(p: &[AffineFunctional], n: usize, s: &[usize]) -> Option<PointSet> {
    let in_p = |x: &Point| p.iter().all(|l| !value(l, x).is_negative());
    let on = |x: &Point| s.iter().all(|&i| value(&p[i], x).is_zero());
    let first = &p[s[0]];
    if n == 1 {
        let x = Point(vec![-&first.constant / &first.slope[0]]);
        return (on(&x) && in_p(&x)).then_some(PointSet::Point(x));
    }
    let (a1, b1) = (&first.slope[0], &first.slope[1]);
    // A second equation independent of the first pins a point.
    for &j in &s[1..] {
        let (a2, b2) = (&p[j].slope[0], &p[j].slope[1]);
        let det = a1 * b2 - b1 * a2;
        if det.is_zero() {
            continue;
        }
        let (c1, c2) = (&first.constant, &p[j].constant);
        let x = Point(vec![(b1 * c2 - c1 * b2) / &det, (c1 * a2 - a1 * c2) / &det]);
        return (on(&x) && in_p(&x)).then_some(PointSet::Point(x));
    }
    let base = if a1.is_zero() {
        Point(vec![Rat::zero(), -&first.constant / b1])
    } else {
        Point(vec![-&first.constant / a1, Rat::zero()])
    };
    if !on(&base) {
        return None;
    }
    let d = Point(vec![-b1.clone(), a1.clone()]);
    let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
    for l in p {
        let (v, s) = (value(l, &base), l.slope.dot(&d));
        if s.is_zero() {
            if v.is_negative() {
                return None;
            }
            continue;
        }
        let t = -&v / &s;
        if s.is_positive() {
            lo = Some(lo.map_or(t.clone(), |x| x.max(t.clone())));
        } else {
            hi = Some(hi.map_or(t.clone(), |x| x.min(t.clone())));
        }
    }
    let at = |t: &Rat| base.along(&d, t);
    Some(match (lo, hi) {
        (Some(a), Some(b)) if a > b => return None,
        (Some(a), Some(b)) if a == b => PointSet::Point(at(&a)),
        (Some(a), Some(b)) => {
            let (u, v) = (at(&a), at(&b));
            PointSet::Segment(u.clone().min(v.clone()), u.max(v))
        }
        (Some(a), None) => PointSet::Ray(at(&a), primitive(&d)),
        (None, Some(b)) => PointSet::Ray(at(&b), primitive(&d.scale(&r(-1, 1)))),
        (None, None) => {
            let k = if a1.is_zero() { b1.clone() } else { a1.clone() };
            PointSet::Line(vec![a1 / &k, b1 / &k, &first.constant / &k])
        }
    })
}

/// A full-dimensional polyhedron: every constraint is positive at a
/// random point.
fn rand_polyhedron(g: &mut impl Rng, n: usize) -> Vec<AffineFunctional> {
    let x0 = rand_point(g, n, -2, 2, 2);
    let m = g.gen_range(1..=if n == 1 { 3 } else { 5 });
    (0..m)
        .map(|_| {
            let slope = loop {
                let s = rand_point(g, n, -3, 3, 1);
                if !s.is_zero() {
                    break s;
                }
            };
            let delta = rand_rat(g, 0, 3, 2) + r(1, 4);
            let c = delta - slope.dot(&x0);
            AffineFunctional::new(slope, c)
        })
        .collect()
}

fn check_polyhedron(
    fs: &[AffineFunctional],
    n: usize,
) -> std::result::Result<(usize, usize), String> {
    let p = RationalPolyhedron::new(
        n,
        fs.iter()
            .map(|l| HalfSpace::new(l.clone()).unwrap())
            .collect(),
    )
    .unwrap();
    let m = fs.len();
    let mut expected: BTreeSet<PointSet> = BTreeSet::new();
    expected.insert(PointSet::Whole);
    for mask in 1u32..(1 << m) {
        let s: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(face) = brute_face(fs, n, &s) {
            expected.insert(face);
        }
    }
    let facets = p.facets().map_err(|e| e.to_string())?;
    let mut got = BTreeSet::new();
    for f in &facets {
        let set = if f.active.is_empty() {
            PointSet::Whole
        } else {
            brute_face(fs, n, &f.active).ok_or("library facet is empty")?
        };
        if set.dimension(n) != f.dimension {
            return Err(format!(
                "facet {:?} has dimension {}",
                f.active, f.dimension
            ));
        }
        got.insert(set);
    }
    if got.len() != facets.len() {
        return Err("library lists a face twice".into());
    }
    if got != expected {
        return Err(format!("faces {got:?}, brute force {expected:?}"));
    }
    let verts: BTreeSet<Point> = p
        .vertices()
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    let brute_verts: BTreeSet<Point> = expected
        .iter()
        .filter_map(|s| match s {
            PointSet::Point(x) => Some(x.clone()),
            _ => None,
        })
        .collect();
    if verts != brute_verts {
        return Err(format!("vertices {verts:?}, brute force {brute_verts:?}"));
    }
    Ok((facets.len(), verts.len()))
}

fn criterion_8() -> Check {
    let triangle = vec![
        AffineFunctional::from_ints(&[1, 0], 0),
        AffineFunctional::from_ints(&[0, 1], 0),
        AffineFunctional::from_ints(&[-1, -1], 1),
    ];
    let (nf, nv) = check_polyhedron(&triangle, 2).map_err(|e| format!("triangle: {e}"))?;
    ensure!(nf == 7 && nv == 3, "triangle: {nf} facets, {nv} vertices");
    let mut g = rng(8);
    let mut faces = 0;
    for case in 0..100 {
        let n = 1 + (case % 4 != 0) as usize;
        let fs = rand_polyhedron(&mut g, n);
        let (nf, _) = check_polyhedron(&fs, n).map_err(|e| format!("case {case}: {e}"))?;
        faces += nf;
    }
    Ok(format!(
        "triangle 7 facets / 3 vertices; 100 random polyhedra, {faces} faces match"
    ))
}

fn criterion_9() -> Check {
    let mut g = rng(9);
    let pts = open_grid(2, -3, 3, &r(1, 1));
    for case in 0..100 {
        let f = rand_polyfun(&mut g, 2, 4, 3);
        let h = rand_polyfun(&mut g, 2, 4, 3);
        let k = rand_polyfun(&mut g, 2, 4, 3);
        let add = |a: &PolyhedralFunction, b: &PolyhedralFunction| a.trop_add(b).unwrap();
        let mul = |a: &PolyhedralFunction, b: &PolyhedralFunction| a.trop_mul(b).unwrap();
        let laws = [
            (
                "add associative",
                add(&add(&f, &h), &k),
                add(&f, &add(&h, &k)),
            ),
            ("add commutative", add(&f, &h), add(&h, &f)),
            ("add idempotent", add(&f, &f), f.clone()),
            (
                "mul associative",
                mul(&mul(&f, &h), &k),
                mul(&f, &mul(&h, &k)),
            ),
            ("mul commutative", mul(&f, &h), mul(&h, &f)),
            (
                "distributive",
                mul(&f, &add(&h, &k)),
                add(&mul(&f, &h), &mul(&f, &k)),
            ),
        ];
        for (name, lhs, rhs) in laws {
            let (a, b) = (lhs.canonicalize(), rhs.canonicalize());
            ensure!(a == b, "case {case}: {name}: {a} vs {b}");
            for x in &pts {
                ensure!(
                    eval_max(a.functionals(), x) == eval_max(b.functionals(), x),
                    "case {case}: {name} differs at {x}"
                );
            }
        }
    }
    Ok("6 laws on 100 triples, canonical forms identical".into())
}

fn criterion_10(certs: &Certs) -> Check {
    let mut replayed = 0;
    for (name, c) in &certs.0 {
        let text = cert::to_pretty(&c.to_json());
        let back = Certificate::from_json(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure!(back == *c, "{name}: certificate changed through JSON");
        let o = back.oracle.build().unwrap();
        let rep = cert::verify(&back, &o).unwrap();
        ensure!(rep.ok(), "{name}: {} mismatches", rep.mismatches.len());
        replayed += rep.queries;
    }
    // The command line replays a sample of them from files.
    let dir = tempfile::tempdir().unwrap();
    let mut via_cli = 0;
    for (i, (name, c)) in certs.0.iter().enumerate().step_by(25) {
        let path = dir.path().join(format!("cert{i}.json"));
        std::fs::write(&path, cert::to_pretty(&c.to_json())).unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_polymax"))
            .arg("verify-cert")
            .arg(&path)
            .output()
            .unwrap();
        ensure!(
            status.status.success(),
            "{name}: verify-cert exited {}",
            status.status
        );
        via_cli += 1;
    }
    Ok(format!(
        "{} certificates, {replayed} queries replayed, zero mismatches; {via_cli} also through verify-cert",
        certs.0.len()
    ))
}

fn run(n: usize, limit: Option<Duration>, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
    let took = start.elapsed();
    let over = limit.is_some_and(|l| took > l);
    let limit_text = limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
    match res {
        Ok(msg) if !over => {
            println!(
                "criterion {n}: PASS ({msg}; {:.2}s{limit_text})",
                took.as_secs_f64()
            );
            true
        }
        Ok(msg) => {
            println!(
                "criterion {n}: FAIL (too slow: {:.2}s{limit_text}; {msg})",
                took.as_secs_f64()
            );
            false
        }
        Err(msg) => {
            println!("criterion {n}: FAIL ({msg})");
            false
        }
    }
}

fn main() {
    let secs = Duration::from_secs;
    let mut certs = Certs::default();
    let results = [
        run(1, Some(secs(10)), || criterion_1(&mut certs)),
        run(2, Some(secs(1)), criterion_2),
        run(3, Some(secs(5)), criterion_3),
        run(4, Some(secs(60)), || criterion_4(&mut certs)),
        run(5, Some(secs(60)), || criterion_5(&mut certs)),
        run(6, None, criterion_6),
        run(7, None, criterion_7),
        run(8, None, criterion_8),
        run(9, None, criterion_9),
        run(10, None, || criterion_10(&certs)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
