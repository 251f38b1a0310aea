//! Tropical polynomials and detection from restrictions to tropical lines.
//!
//! The tropical line centered at `c` is the union of three rays from `c`,
//! going down, left, and diagonally up-right. Its complement has three
//! components, on each of which `max(x − cₓ, y − c_y, 0)` is attained by a
//! single term.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect1d::{
    reconstruct_transintegral, BudgetReport, DetectOutcome, RayTag, Reconstruction1D, Rejection,
    Site,
};
use crate::detectnd::{reconstruct_region, GridSpec, NdReconstruction};
use crate::error::{Error, Result};
use crate::oracle::FunctionOracle;
use crate::polyfun::{first_disagreement, Extent, LineParam, PolyhedralFunction};
use crate::polyhedron::{HalfSpace, RationalPolyhedron};
use crate::rat::{AffineFunctional, IntegralityClass, Point, Rat};

/// Canonical slopes are all nonnegative integer vectors.
pub fn is_tropical_polynomial(f: &PolyhedralFunction) -> bool {
    f.canonicalize()
        .functionals()
        .iter()
        .all(|l| l.slope.0.iter().all(|c| c.is_integer() && !c.is_negative()))
}

/// A polyhedral function whose canonical slopes are nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial(PolyhedralFunction);

impl TropicalPolynomial {
    pub fn new(f: PolyhedralFunction) -> Result<Self> {
        if is_tropical_polynomial(&f) {
            Ok(TropicalPolynomial(f.canonicalize()))
        } else {
            Err(Error::InvalidArgument(
                "slopes must be nonnegative integers".into(),
            ))
        }
    }

    pub fn underlying(&self) -> &PolyhedralFunction {
        &self.0
    }

    pub fn add(&self, other: &TropicalPolynomial) -> Result<TropicalPolynomial> {
        Ok(TropicalPolynomial(self.0.trop_add(&other.0)?))
    }

    pub fn mul(&self, other: &TropicalPolynomial) -> Result<TropicalPolynomial> {
        Ok(TropicalPolynomial(self.0.trop_mul(&other.0)?))
    }
}

/// The tropical line translated to `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalLineTranslate {
    pub center: Point,
}

impl TropicalLineTranslate {
    pub fn new(center: Point) -> Result<Self> {
        center.ensure_dim(2)?;
        Ok(TropicalLineTranslate { center })
    }

    /// The ray `{center + t·d : t ≥ 0}`.
    pub fn ray(&self, tag: RayTag) -> LineParam {
        LineParam::ray(self.center.clone(), tag.direction()).expect("nonzero direction")
    }

    pub fn rays(&self) -> [(RayTag, LineParam); 3] {
        RayTag::ALL.map(|t| (t, self.ray(t)))
    }

    /// Closures of the three components of the complement, tagged by the
    /// term of `max(x − cₓ, y − c_y, 0)` that dominates there.
    pub fn components(&self) -> [RationalPolyhedron; 3] {
        let (cx, cy) = (&self.center[0], &self.center[1]);
        let h = |a: i64, b: i64, c: Rat| {
            HalfSpace::new(AffineFunctional::new(Point::from_ints(&[a, b]), c)).expect("nonzero")
        };
        let x_side = vec![h(1, -1, cy - cx), h(1, 0, -cx)];
        let y_side = vec![h(-1, 1, cx - cy), h(0, 1, -cy)];
        let low = vec![h(-1, 0, cx.clone()), h(0, -1, cy.clone())];
        [x_side, y_side, low].map(|hs| RationalPolyhedron::new(2, hs).expect("valid"))
    }
}

/// Symbolic restrictions of `f` to the three rays from `center`, as
/// functions of `t ≥ 0`.
pub fn restrict_to_tropical_line(
    f: &PolyhedralFunction,
    center: &Point,
) -> Result<Vec<(RayTag, PolyhedralFunction)>> {
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: "2".into(),
            found: f.dim(),
        });
    }
    let line = TropicalLineTranslate::new(center.clone())?;
    line.rays()
        .into_iter()
        .map(|(tag, ray)| Ok((tag, clip_to_ray(&f.restrict(&ray)?.function)?)))
        .collect()
}

/// Drops pieces of a canonical univariate function that are active only at `t < 0`.
fn clip_to_ray(g: &PolyhedralFunction) -> Result<PolyhedralFunction> {
    let bps = g.breakpoints()?;
    let skip = bps.iter().take_while(|b| !b.is_positive()).count();
    PolyhedralFunction::new(1, g.functionals()[skip..].to_vec())
}

/// One-variable oracles for the three rays from `center`, on `[0, ray_length]`.
pub fn tropical_ray_oracles(
    o: &FunctionOracle,
    center: &Point,
    ray_length: &Rat,
) -> Result<Vec<(RayTag, FunctionOracle)>> {
    if o.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: "2".into(),
            found: o.dim(),
        });
    }
    if !ray_length.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "ray length {ray_length} must be positive"
        )));
    }
    let line = TropicalLineTranslate::new(center.clone())?;
    let mut out = Vec::new();
    for (tag, ray) in line.rays() {
        let end = ray.point_at(ray_length);
        if !o.domain().contains(center)? || !o.domain().contains(&end)? {
            return Err(Error::OutsideDomain(end));
        }
        let seg = LineParam::new(
            ray.base,
            ray.direction,
            Extent::Segment(Rat::zero(), ray_length.clone()),
        )?;
        out.push((tag, o.along_line(&seg)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayRecord {
    pub center: Point,
    pub tag: RayTag,
    pub reconstruction: Reconstruction1D,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalReconstruction {
    pub function: PolyhedralFunction,
    /// Center whose tropical line splits the box into components.
    pub designated_center: Point,
    pub rays: Vec<RayRecord>,
    pub components: Vec<NdReconstruction>,
    pub ray_length: Rat,
    pub grid: GridSpec,
}

/// Parameters of [`detect_tropical`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalConfig {
    pub budget: u32,
    pub ray_length: Rat,
}

/// Detection from restrictions to translates of the tropical line.
///
/// Each center contributes three ray detections. The box is then split by
/// the tropical line through the lexicographically smallest center, each
/// closed component is reconstructed on the grid, the component results
/// are compared along the shared rays, and their union is returned.
pub fn detect_tropical(
    o: &FunctionOracle,
    grid: &GridSpec,
    centers: &[Point],
    cfg: &TropicalConfig,
) -> Result<DetectOutcome<TropicalReconstruction>> {
    if o.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: "2".into(),
            found: o.dim(),
        });
    }
    if centers.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one center is needed".into(),
        ));
    }
    let mut jobs = Vec::new();
    for c in centers {
        c.ensure_dim(2)?;
        for (tag, ray) in tropical_ray_oracles(o, c, &cfg.ray_length)? {
            jobs.push((c.clone(), tag, ray));
        }
    }
    let results: Vec<Result<DetectOutcome<Reconstruction1D>>> = jobs
        .par_iter()
        .map(|(_, _, ray)| {
            reconstruct_transintegral(ray, &Rat::zero(), &cfg.ray_length, cfg.budget)
        })
        .collect();
    let mut log = std::collections::BTreeMap::new();
    let mut rays = Vec::new();
    for ((center, tag, _), r) in jobs.into_iter().zip(results) {
        match r? {
            DetectOutcome::Accept {
                reconstruction,
                queries,
            } => {
                let d = tag.direction();
                log.extend(
                    queries
                        .into_iter()
                        .map(|(t, v)| (center.along(&d, &t[0]), v)),
                );
                rays.push(RayRecord {
                    center,
                    tag,
                    reconstruction,
                });
            }
            DetectOutcome::Reject(r) => {
                return Ok(DetectOutcome::Reject(Rejection {
                    site: Site::TropicalRay { center, ray: tag },
                    ..r
                }))
            }
            DetectOutcome::Exhausted(rep) => {
                return Ok(DetectOutcome::Exhausted(BudgetReport {
                    reason: format!("{} ray from {center}: {}", tag.as_str(), rep.reason),
                    ..rep
                }))
            }
        }
    }

    let designated = centers.iter().min().expect("nonempty").clone();
    let line = TropicalLineTranslate::new(designated.clone())?;
    let bx = grid.bx.to_polyhedron();
    let regions: Vec<RationalPolyhedron> = line
        .components()
        .into_iter()
        .map(|c| c.intersect(&bx))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|c| c.is_full_dimensional())
        .collect();
    let outcomes: Vec<Result<DetectOutcome<NdReconstruction>>> = regions
        .par_iter()
        .map(|r| reconstruct_region(o, r, grid, cfg.budget, IntegralityClass::TransIntegral))
        .collect();
    let mut components = Vec::new();
    for out in outcomes {
        match out? {
            DetectOutcome::Accept {
                reconstruction,
                queries,
            } => {
                log.extend(queries);
                components.push(reconstruction);
            }
            DetectOutcome::Reject(r) => return Ok(DetectOutcome::Reject(r)),
            DetectOutcome::Exhausted(rep) => return Ok(DetectOutcome::Exhausted(rep)),
        }
    }

    let exhausted = |reason: String, used: usize| {
        Ok(DetectOutcome::Exhausted(BudgetReport {
            reason,
            budget: cfg.budget,
            queries_used: used,
        }))
    };
    for (tag, ray) in line.rays() {
        let Some((Some(lo), Some(hi))) = bx.line_interval(&ray.base, &ray.direction) else {
            continue;
        };
        let lo = lo.max(Rat::zero());
        if lo >= hi {
            continue;
        }
        let on_ray: Vec<&NdReconstruction> = components
            .iter()
            .filter(|c| {
                let mid = ray.point_at(&(&lo + &hi).half());
                c.region.contains(&mid).unwrap_or(false)
            })
            .collect();
        for pair in on_ray.windows(2) {
            let a = pair[0].function.restrict(&ray)?.function;
            let b = pair[1].function.restrict(&ray)?.function;
            if first_disagreement(&a, &b, &lo, &hi)?.is_some() {
                return exhausted(
                    format!(
                        "component reconstructions disagree on the {} ray",
                        tag.as_str()
                    ),
                    log.len(),
                );
            }
        }
    }

    let all: Vec<AffineFunctional> = components
        .iter()
        .flat_map(|c| c.function.functionals().iter().cloned())
        .collect();
    let function = PolyhedralFunction::new(2, all)?.canonicalize();
    // Ray queries outside the box are evidence for the ray detections only.
    if let Some((x, _)) = log
        .iter()
        .find(|(x, v)| grid.bx.contains(x) && function.eval_unchecked(x) != **v)
    {
        return exhausted(format!("union disagrees with the oracle at {x}"), log.len());
    }
    Ok(DetectOutcome::Accept {
        reconstruction: TropicalReconstruction {
            function,
            designated_center: designated,
            rays,
            components,
            ray_length: cfg.ray_length.clone(),
            grid: grid.clone(),
        },
        queries: log.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect1d::Witness;
    use crate::polyhedron::RationalBox;
    use crate::rat::rat;

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn f2(items: &[(&[i64], i64)]) -> PolyhedralFunction {
        PolyhedralFunction::new(
            2,
            items
                .iter()
                .map(|(s, c)| AffineFunctional::from_ints(s, *c))
                .collect(),
        )
        .unwrap()
    }

    fn univ(items: &[(i64, i64)]) -> PolyhedralFunction {
        PolyhedralFunction::univariate(
            &items
                .iter()
                .map(|(a, b)| (Rat::from_int(*a), Rat::from_int(*b)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn cfg() -> TropicalConfig {
        TropicalConfig {
            budget: 64,
            ray_length: rat(2, 1),
        }
    }

    fn grid4() -> GridSpec {
        GridSpec::new(
            RationalBox::cube(2, rat(-4, 1), rat(4, 1)).unwrap(),
            rat(1, 2),
        )
        .unwrap()
    }

    #[test]
    fn recognition() {
        assert!(is_tropical_polynomial(&f2(&[
            (&[2, 0], 0),
            (&[1, 1], 0),
            (&[0, 0], 0)
        ])));
        assert!(!is_tropical_polynomial(&f2(&[(&[1, -1], 0)])));
        let half = PolyhedralFunction::new(
            2,
            vec![
                AffineFunctional::new(Point(vec![rat(1, 2), rat(0, 1)]), Rat::zero()),
                AffineFunctional::from_ints(&[0, 0], 0),
            ],
        )
        .unwrap();
        assert!(!is_tropical_polynomial(&half));
        assert!(!is_tropical_polynomial(&f2(&[
            (&[1, 0], 0),
            (&[0, 0], 0),
            (&[-1, 0], -9)
        ])));
    }

    #[test]
    fn ray_restrictions() {
        let f = f2(&[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 0)]);
        let r = restrict_to_tropical_line(&f, &p("0,0")).unwrap();
        assert_eq!(r[0], (RayTag::Down, univ(&[(0, 0)])));
        assert_eq!(r[1], (RayTag::Left, univ(&[(0, 0)])));
        assert_eq!(r[2], (RayTag::Diag, univ(&[(1, 0)])));
        let r = restrict_to_tropical_line(&f, &p("-1,-1")).unwrap();
        assert_eq!(r[2].1, univ(&[(0, 0), (1, -1)]));
        let x = f2(&[(&[1, 0], 0)]);
        let r = restrict_to_tropical_line(&x, &p("1,5")).unwrap();
        assert_eq!(r[1].1, univ(&[(-1, 1)]));
        let zero = f2(&[(&[0, 0], 0)]);
        for (_, g) in restrict_to_tropical_line(&zero, &p("3,-2")).unwrap() {
            assert_eq!(g, univ(&[(0, 0)]));
        }
    }

    #[test]
    fn components_cover_the_plane() {
        let line = TropicalLineTranslate::new(p("1,-1")).unwrap();
        let comps = line.components();
        for x in ["3,0", "0,2", "-5,-5", "1,-1", "2,0"] {
            assert!(comps.iter().any(|c| c.contains(&p(x)).unwrap()), "{x}");
        }
        assert!(comps[0].interior_contains(&p("3,0")).unwrap());
        assert!(comps[1].interior_contains(&p("0,2")).unwrap());
        assert!(comps[2].interior_contains(&p("0,-2")).unwrap());
    }

    #[test]
    fn detect_examples() {
        let f = f2(&[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 0)]);
        let o = FunctionOracle::from_polyfun_everywhere(&f);
        let centers = [p("0,0"), p("1,-1"), p("-2,1")];
        let out = detect_tropical(&o, &grid4(), &centers, &cfg()).unwrap();
        let r = out.accepted().unwrap();
        assert_eq!(r.function, f.canonicalize());
        assert_eq!(r.designated_center, p("-2,1"));
        assert_eq!(r.rays.len(), 9);

        let h = FunctionOracle::builtin("halfslope-trop").unwrap();
        let out = detect_tropical(&h, &grid4(), &[p("0,0"), p("2,0")], &cfg()).unwrap();
        let rej = out.rejection().unwrap();
        assert_eq!(
            rej.site,
            Site::TropicalRay {
                center: p("2,0"),
                ray: RayTag::Left
            }
        );
        match &rej.witness {
            Witness::NonIntegerSlope { slope, .. } => assert_eq!(*slope, rat(-1, 2)),
            w => panic!("{w:?}"),
        }

        let zero = FunctionOracle::from_polyfun_everywhere(&f2(&[(&[0, 0], 0)]));
        let out = detect_tropical(&zero, &grid4(), &[p("0,0")], &cfg()).unwrap();
        assert_eq!(out.accepted().unwrap().function, f2(&[(&[0, 0], 0)]));
    }

    #[test]
    fn rays_must_stay_in_domain() {
        let f = f2(&[(&[0, 0], 0)]);
        let dom = RationalBox::cube(2, rat(-1, 1), rat(1, 1))
            .unwrap()
            .to_polyhedron();
        let o = FunctionOracle::from_polyfun(&f, dom).unwrap();
        assert!(tropical_ray_oracles(&o, &p("0,0"), &rat(2, 1)).is_err());
        assert!(tropical_ray_oracles(&o, &p("0,0"), &rat(1, 1)).is_ok());
    }
}
