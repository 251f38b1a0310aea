//! Detection from three segments through the vertices of a triangle.
use polymax::detectnd::{detect_on_skeleton, SkeletonConfig};
use polymax::{
    AffineFunctional, FunctionOracle, LineParam, Point, PolyhedralFunction, RationalPolyhedron,
};

fn p(s: &str) -> Point {
    s.parse().expect("point")
}

fn main() -> polymax::Result<()> {
    let triangle = RationalPolyhedron::from_functionals(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
            AffineFunctional::from_ints(&[-1, -1], 1),
        ],
    )?;
    let lines = vec![
        LineParam::segment(&p("0,0"), &p("1/2,1/2"))?,
        LineParam::segment(&p("1,0"), &p("0,1/2"))?,
        LineParam::segment(&p("0,1"), &p("1/2,0"))?,
    ];
    let f = PolyhedralFunction::new(
        2,
        vec![
            AffineFunctional::from_ints(&[2, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
        ],
    )?;
    let o = FunctionOracle::from_polyfun_everywhere(&f);
    let out = detect_on_skeleton(&o, &triangle, &lines, &SkeletonConfig::default())?;
    match out.accepted() {
        Some(r) => {
            println!("reconstructed {}", r.function);
            for (line, rec) in r.skeleton.iter().zip(&r.lines) {
                println!(
                    "  along {} + t{}: {}",
                    line.base,
                    line.direction,
                    rec.to_function()
                );
            }
        }
        None => println!("{out:?}"),
    }
    Ok(())
}
