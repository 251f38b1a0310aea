mod common;

use common::*;
use polymax::{AffineFunctional, LineParam, Point, PolyhedralFunction, Rat};
use proptest::prelude::*;

fn cube_grid(n: usize, half: i64) -> Vec<Point> {
    let mut pts: Vec<Vec<Rat>> = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-half..=half).map(move |i| {
                    let mut q = p.clone();
                    q.push(Rat::from_int(i));
                    q
                })
            })
            .collect();
    }
    pts.into_iter().map(Point).collect()
}

fn any_polyfun() -> impl Strategy<Value = PolyhedralFunction> {
    (1usize..=3).prop_flat_map(|n| polyfun_strategy(n, 6, 4, 4))
}

fn nonzero(n: usize) -> impl Strategy<Value = Point> {
    point_strategy(n, -2, 2, 3).prop_filter("nonzero", |z| !z.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonical_form_evaluates_the_same(f in any_polyfun()) {
        let c = f.canonicalize();
        for x in cube_grid(f.dim(), 4) {
            prop_assert_eq!(c.eval(&x).unwrap(), eval_max(f.functionals(), &x));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonicalization_ignores_dominated_functionals(
        f in (1usize..=3).prop_flat_map(|n| polyfun_strategy(n, 5, 3, 4)),
        extra in proptest::collection::vec((0usize..5, 0usize..5, rat_strategy(0, 1, 4), rat_strategy(0, 3, 4)), 1..4),
    ) {
        // Convex combinations of existing functionals, lowered: never above f.
        let fs = f.functionals();
        let mut more = fs.to_vec();
        for (i, j, t, drop) in extra {
            let (a, b) = (&fs[i % fs.len()], &fs[j % fs.len()]);
            let slope = Point::lerp(&t, &a.slope, &b.slope);
            let c = &t * &a.constant + (Rat::one() - &t) * &b.constant - drop;
            more.insert(0, AffineFunctional::new(slope, c));
        }
        let g = PolyhedralFunction::new(f.dim(), more).unwrap();
        let c = f.canonicalize();
        prop_assert_eq!(g.canonicalize(), c.clone());
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(c.is_canonical());
        prop_assert_eq!(f.canonicalize_via_lp(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn restriction_evaluates_along_the_line(
        (f, base, dir) in (1usize..=3).prop_flat_map(|n| (polyfun_strategy(n, 6, 4, 4), point_strategy(n, -3, 3, 4), nonzero(n))),
        t in rat_strategy(-4, 4, 8),
    ) {
        let line = LineParam::full(base.clone(), dir.clone()).unwrap();
        let g = f.restrict(&line).unwrap().function;
        prop_assert_eq!(g.eval(&Point(vec![t.clone()])).unwrap(), eval_max(f.functionals(), &base.along(&dir, &t)));
    }

    #[test]
    fn directional_derivative_is_a_secant_near_zero(
        (f, x, z) in (1usize..=3).prop_flat_map(|n| (polyfun_strategy(n, 6, 4, 4), point_strategy(n, -3, 3, 2), nonzero(n))),
        fracs in proptest::collection::vec(rat_strategy(0, 1, 9), 1..5),
    ) {
        let g = f.restrict(&LineParam::full(x.clone(), z.clone()).unwrap()).unwrap().function;
        let t0 = g
            .breakpoints()
            .unwrap()
            .into_iter()
            .find(Rat::is_positive)
            .unwrap_or(Rat::one());
        let d = f.dir_deriv(&x, &z).unwrap();
        let fx = eval_max(f.functionals(), &x);
        for s in fracs.into_iter().filter(Rat::is_positive) {
            let t = &s * &t0;
            let secant = (eval_max(f.functionals(), &x.along(&z, &t)) - &fx) / &t;
            prop_assert_eq!(&secant, &d, "t = {}", t);
        }
    }

    #[test]
    fn directional_derivative_is_convex_on_a_domain(
        (f, z) in (1usize..=3).prop_flat_map(|n| (polyfun_strategy(n, 6, 1, 2), nonzero(n))),
        seeds in proptest::collection::vec(any::<u64>(), 1),
        t in rat_strategy(0, 1, 6),
    ) {
        // Two points of one closed domain of affinity: the domain's
        // functional is active at both.
        let n = f.dim();
        let mut g = rng(seeds[0]);
        let (x1, x2) = loop {
            let a = rand_point(&mut g, n, -3, 3, 2);
            let b = rand_point(&mut g, n, -3, 3, 2);
            let sa = f.active_set(&a).unwrap();
            if f.active_set(&b).unwrap().iter().any(|i| sa.contains(i)) {
                break (a, b);
            }
        };
        let d = |x: &Point| f.dir_deriv(x, &z).unwrap();
        let mid = d(&Point::lerp(&t, &x1, &x2));
        prop_assert!(mid <= &t * d(&x1) + (Rat::one() - &t) * d(&x2));
    }

    #[test]
    fn supporting_functional_stays_below(
        (f, x) in (1usize..=3).prop_flat_map(|n| (polyfun_strategy(n, 6, 4, 4), point_strategy(n, -2, 2, 4))),
    ) {
        let l = f.support_at(&x).unwrap();
        prop_assert_eq!(l.eval(&x).unwrap(), eval_max(f.functionals(), &x));
        for y in open_grid(f.dim().min(2), -5, 5, &Rat::one()).into_iter().take(81) {
            let y = Point((0..f.dim()).map(|i| y.0.get(i).cloned().unwrap_or(Rat::zero())).collect());
            prop_assert!(eval_max(f.functionals(), &y) >= l.eval(&y).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn directional_derivative_is_constant_inside_domains(
        f in polyfun_strategy(2, 5, 1, 3),
        z in nonzero(2),
        seed in any::<u64>(),
    ) {
        let mut g = rng(seed);
        for (i, l) in f.functionals().iter().enumerate() {
            let mut hits = 0;
            for _ in 0..400 {
                let x = rand_point(&mut g, 2, -4, 4, 8);
                if unique_max(f.functionals(), &x) != Some(i) {
                    continue;
                }
                prop_assert_eq!(f.dir_deriv(&x, &z).unwrap(), l.slope.dot(&z));
                hits += 1;
                if hits == 20 {
                    break;
                }
            }
        }
    }

    #[test]
    fn tropical_operations_stay_tropical(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (f, _) = rand_tropical(&mut g, -2, 2, &Rat::one(), 4, 3);
        let (h, _) = rand_tropical(&mut g, -2, 2, &Rat::one(), 4, 3);
        prop_assert!(polymax::tropical::is_tropical_polynomial(&f.trop_add(&h).unwrap()));
        prop_assert!(polymax::tropical::is_tropical_polynomial(&f.trop_mul(&h).unwrap()));
    }
}

#[test]
fn canonical_form_of_a_square() {
    // max(x, 0) ⊗ max(x, 0) = max(2x, x, 0), and x is never strictly on top.
    let f = PolyhedralFunction::new(
        1,
        vec![
            AffineFunctional::from_ints(&[1], 0),
            AffineFunctional::from_ints(&[0], 0),
        ],
    )
    .unwrap();
    let sq = f.trop_mul(&f).unwrap();
    let want = vec![
        AffineFunctional::from_ints(&[0], 0),
        AffineFunctional::from_ints(&[2], 0),
    ];
    assert_eq!(sq.functionals(), want.as_slice());
}
