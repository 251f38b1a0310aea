//! Restrictions to a tropical line and detection from its translates.
use polymax::detectnd::GridSpec;
use polymax::tropical::{detect_tropical, restrict_to_tropical_line, TropicalConfig};
use polymax::{FunctionOracle, Point, Rat, RationalBox};

fn main() -> polymax::Result<()> {
    let o = FunctionOracle::builtin("trop-conic")?;
    let f = o.symbolic().expect("builtin is symbolic").clone();
    for (tag, g) in restrict_to_tropical_line(&f, &Point::from_ints(&[0, 0]))? {
        println!("{} ray: {}", tag.as_str(), g);
    }

    let grid = GridSpec::new(
        RationalBox::cube(2, Rat::new(-2, 1), Rat::new(2, 1))?,
        Rat::new(1, 2),
    )?;
    let centers = [Point::from_ints(&[0, 0]), Point::from_ints(&[1, -1])];
    let cfg = TropicalConfig {
        budget: 64,
        ray_length: Rat::new(4, 1),
    };
    for name in ["trop-conic", "halfslope-trop"] {
        let o = FunctionOracle::builtin(name)?;
        let out = detect_tropical(&o, &grid, &centers, &cfg)?;
        match out.accepted() {
            Some(r) => println!(
                "{name}: accept {} ({} components)",
                r.function,
                r.components.len()
            ),
            None => println!("{name}: exit code {}", out.exit_code()),
        }
    }
    Ok(())
}
