//! Faces and vertices of a triangle.
use polymax::{AffineFunctional, RationalPolyhedron};

fn main() -> polymax::Result<()> {
    let t = RationalPolyhedron::from_functionals(
        2,
        vec![
            AffineFunctional::from_ints(&[1, 0], 0),
            AffineFunctional::from_ints(&[0, 1], 0),
            AffineFunctional::from_ints(&[-1, -1], 1),
        ],
    )?;
    for face in t.facets()? {
        let p = face.region.relative_interior_point().expect("nonempty");
        println!("dim {} active {:?} e.g. {}", face.dimension, face.active, p);
    }
    println!("vertices: {:?}", t.vertices()?);
    Ok(())
}
