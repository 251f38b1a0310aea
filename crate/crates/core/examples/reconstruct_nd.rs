//! Grid reconstruction on a box in two variables.
use polymax::detectnd::{reconstruct_box, GridSpec};
use polymax::{
    AffineFunctional, DetectOutcome, FunctionOracle, IntegralityClass, PolyhedralFunction, Rat,
    RationalBox,
};

fn main() -> polymax::Result<()> {
    let f = PolyhedralFunction::new(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
            AffineFunctional::from_ints(&[-1, -1], -1),
        ],
    )?;
    let grid = GridSpec::new(
        RationalBox::cube(2, Rat::new(-2, 1), Rat::new(2, 1))?,
        Rat::new(1, 2),
    )?;
    let o = FunctionOracle::from_polyfun_everywhere(&f);
    match reconstruct_box(&o, &grid, 64, IntegralityClass::TransIntegral)? {
        DetectOutcome::Accept {
            reconstruction,
            queries,
        } => {
            println!(
                "reconstructed {} from {} queries",
                reconstruction.function,
                queries.len()
            );
            for cell in &reconstruction.cells {
                println!(
                    "  cell {} ({} constraints)",
                    cell.ambient,
                    cell.region.len()
                );
            }
        }
        other => println!("{other:?}"),
    }

    let half = FunctionOracle::builtin("halfslope-2d")?;
    let out = reconstruct_box(&half, &grid, 64, IntegralityClass::TransIntegral)?;
    println!("halfslope-2d: exit code {}", out.exit_code());
    Ok(())
}
