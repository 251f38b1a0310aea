//! The integral detector also checks that values lie in Z + Zx.
use polymax::detect1d::{detect_integral_values, DEFAULT_BUDGET};
use polymax::{FunctionOracle, PolyhedralFunction, Rat};

fn main() -> polymax::Result<()> {
    let (a, b) = (Rat::zero(), Rat::new(4, 1));
    let integral = PolyhedralFunction::univariate(&[
        (Rat::new(-1, 1), Rat::new(2, 1)),
        (Rat::new(2, 1), Rat::new(-4, 1)),
    ])?;
    let shifted = PolyhedralFunction::univariate(&[
        (Rat::new(-1, 1), Rat::new(2, 1)),
        (Rat::new(2, 1), Rat::new(-7, 2)),
    ])?;
    for (label, f) in [("integral", integral), ("half-integer constant", shifted)] {
        let o = FunctionOracle::from_polyfun_everywhere(&f);
        let out = detect_integral_values(&o, &a, &b, DEFAULT_BUDGET, 100)?;
        match out.rejection() {
            None if out.is_accept() => println!("{label}: accept"),
            None => println!("{label}: exhausted"),
            Some(r) => println!("{label}: reject, {:?}", r.witness),
        }
    }
    Ok(())
}
