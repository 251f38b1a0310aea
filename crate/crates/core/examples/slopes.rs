//! Slope intervals on a triangle and the slope-set decomposition along a line.
use polymax::detectnd::slope_bound;
use polymax::polyfun::{slope_decomposition, Conjugate};
use polymax::{AffineFunctional, Point, PolyhedralFunction, RationalPolyhedron};

fn main() -> polymax::Result<()> {
    let f = PolyhedralFunction::new(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
            AffineFunctional::from_ints(&[-1, 2], -3),
        ],
    )?;
    let triangle = RationalPolyhedron::from_functionals(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
            AffineFunctional::from_ints(&[-1, -1], 4),
        ],
    )?;
    for b in slope_bound(&f, &triangle)? {
        println!("mu({}) in [{}, {}]", b.direction, b.lo, b.hi);
    }

    let (x1, x2, z) = (
        Point::from_ints(&[0, 0]),
        Point::from_ints(&[1, 0]),
        Point::from_ints(&[0, 1]),
    );
    let d = slope_decomposition(&f, &x1, &x2, &z)?;
    println!(
        "slope set along z: {:?}",
        d.slope_set
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
    );
    for (m, g) in &d.profiles {
        match g {
            Conjugate::Finite(g) => println!("  m = {m}: {g}"),
            Conjugate::MinusInfinity => println!("  m = {m}: -inf"),
        }
    }
    Ok(())
}
