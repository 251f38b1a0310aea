//! Tropical sums and products, canonical forms, restriction to a line.
use polymax::{AffineFunctional, LineParam, Point, PolyhedralFunction};

fn main() -> polymax::Result<()> {
    let f = PolyhedralFunction::new(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 1], 0),
            AffineFunctional::from_ints(&[2, 0], -1),
            AffineFunctional::from_ints(&[0, 0], 0),
        ],
    )?;
    let g = PolyhedralFunction::new(2, vec![AffineFunctional::from_ints(&[0, 1], 2)])?;

    println!("f          = {f}");
    println!("f(1,2)     = {}", f.eval(&Point::from_ints(&[1, 2]))?);
    println!("f (+) g    = {}", f.trop_add(&g)?);
    println!("f (x) g    = {}", f.trop_mul(&g)?);
    println!("f (x) f    = {}", f.trop_mul(&f)?);

    let line = LineParam::full(Point::from_ints(&[0, 0]), Point::from_ints(&[1, -1]))?;
    let r = f.restrict(&line)?;
    println!("f on t(1,-1) = {} ({:?})", r.function, r.class);
    println!(
        "f'((1,1); (1,-1)) = {}",
        f.dir_deriv(&Point::from_ints(&[1, 1]), &Point::from_ints(&[1, -1]))?
    );

    for d in f.domains() {
        println!("{} holds on {} constraints", d.functional, d.region.len());
    }
    Ok(())
}
