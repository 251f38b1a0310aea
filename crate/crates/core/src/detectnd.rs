//! Detection in two and three variables.
//!
//! [`reconstruct_region`] runs the one-variable detector on axis-parallel
//! grid lines, reads off the affine functional at every grid node where all
//! axis restrictions are locally affine, and certifies each domain of
//! affinity of the resulting max-affine candidate by evaluating the oracle
//! at its vertices and centroid.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect1d::{
    reconstruct_transintegral, BudgetReport, DetectOutcome, Reconstruction1D, Rejection, Site,
    Witness,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::oracle::FunctionOracle;
use crate::polyfun::{
    certify_affine_with, first_disagreement, Extent, LineParam, PolyhedralFunction,
};
use crate::polyhedron::{RationalBox, RationalPolyhedron};
use crate::rat::{membership_computation, AffineFunctional, IntegralityClass, Point, Rat};

/// Number of step halvings tried when some cell fails certification.
pub const REFINEMENT_ROUNDS: usize = 3;

/// Default grid step.
pub fn default_step() -> Rat {
    Rat::new(1, 2)
}

/// Default truncation length for rays.
pub fn default_ray_length() -> Rat {
    Rat::from_int(4)
}

/// A box with a grid step that divides every side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "box")]
    pub bx: RationalBox,
    pub step: Rat,
}

impl GridSpec {
    pub fn new(bx: RationalBox, step: Rat) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "grid step {step} must be positive"
            )));
        }
        for i in 0..bx.dim() {
            if !((&bx.hi[i] - &bx.lo[i]) / &step).is_integer() {
                return Err(Error::InvalidArgument(format!(
                    "grid step {step} does not divide side [{}, {}]",
                    bx.lo[i], bx.hi[i]
                )));
            }
        }
        Ok(GridSpec { bx, step })
    }

    /// The smallest grid of spacing `step` on the lattice `step·ℤⁿ` whose
    /// box contains `bx`.
    pub fn covering(bx: &RationalBox, step: Rat) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "grid step {step} must be positive"
            )));
        }
        let lo = Point(
            bx.lo
                .0
                .iter()
                .map(|c| (c / &step).floor() * &step)
                .collect(),
        );
        let hi = Point(bx.hi.0.iter().map(|c| (c / &step).ceil() * &step).collect());
        let mut g = GridSpec::new(RationalBox::new(lo, hi)?, step)?;
        for i in 0..g.bx.dim() {
            if g.bx.lo[i] == g.bx.hi[i] {
                g.bx.hi.0[i] = &g.bx.hi[i] + &g.step;
            }
        }
        Ok(g)
    }
}

/// A certified domain of affinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub region: RationalPolyhedron,
    pub ambient: AffineFunctional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdReconstruction {
    pub function: PolyhedralFunction,
    pub cells: Vec<Cell>,
    pub grid: GridSpec,
    /// The region actually reconstructed (the grid box, or a part of it).
    pub region: RationalPolyhedron,
    /// Grid step after refinement.
    pub final_step: Rat,
    pub lines_used: usize,
}

/// Thread-safe query log in ambient coordinates.
pub(crate) struct QueryLog<'a> {
    o: &'a FunctionOracle,
    log: Mutex<BTreeMap<Point, Rat>>,
}

impl<'a> QueryLog<'a> {
    pub(crate) fn new(o: &'a FunctionOracle) -> Self {
        QueryLog {
            o,
            log: Mutex::new(BTreeMap::new()),
        }
    }

    pub(crate) fn query(&self, x: &Point) -> Result<Rat> {
        let v = self.o.query(x)?;
        self.log
            .lock()
            .expect("log lock")
            .insert(x.clone(), v.clone());
        Ok(v)
    }

    pub(crate) fn record(&self, entries: impl IntoIterator<Item = (Point, Rat)>) {
        self.log.lock().expect("log lock").extend(entries);
    }

    pub(crate) fn entries(&self) -> Vec<(Point, Rat)> {
        self.log
            .lock()
            .expect("log lock")
            .iter()
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect()
    }
}

enum LineResult {
    /// The region meets the line in at most one point.
    Degenerate,
    Accepted {
        lo: Rat,
        hi: Rat,
        rec: Reconstruction1D,
    },
}

impl LineResult {
    /// Slope at `t` when `t` is strictly inside a piece.
    fn slope_at(&self, t: &Rat) -> Option<i64> {
        let LineResult::Accepted { lo, hi, rec } = self else {
            return None;
        };
        if t <= lo || t >= hi || rec.breakpoints.contains(t) {
            return None;
        }
        let i = rec.breakpoints.iter().take_while(|b| *b < t).count();
        Some(rec.pieces[i].slope)
    }
}

type LineKey = (usize, Point);

fn line_key(x: &Point, axis: usize) -> LineKey {
    let mut base = x.clone();
    base.0[axis] = Rat::zero();
    (axis, base)
}

fn ticks_between(origin: &Rat, step: &Rat, lo: &Rat, hi: &Rat) -> Vec<Rat> {
    let k0 = ((lo - origin) / step).ceil();
    let k1 = ((hi - origin) / step).floor();
    let mut out = Vec::new();
    let mut k = k0;
    while k <= k1 {
        out.push(origin + &(&k * step));
        k += Rat::one();
    }
    out
}

fn grid_nodes(grid: &RationalBox, step: &Rat, focus: &[RationalBox]) -> BTreeSet<Point> {
    let n = grid.dim();
    let mut out = BTreeSet::new();
    for f in focus {
        let axes: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let lo = (&f.lo[i]).max(&grid.lo[i]);
                let hi = (&f.hi[i]).min(&grid.hi[i]);
                ticks_between(&grid.lo[i], step, lo, hi)
            })
            .collect();
        if axes.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; n];
        loop {
            out.insert(Point((0..n).map(|i| axes[i][idx[i]].clone()).collect()));
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

fn centroid(points: &[Point]) -> Point {
    let k = Rat::from_int(points.len() as i64);
    points
        .iter()
        .fold(Point::zeros(points[0].dim()), |acc, p| acc.add(p))
        .scale(&k.recip())
}

/// A point strictly inside a full-dimensional polyhedron whose coordinates
/// all have denominators coprime to `s`.
fn coprime_interior_point(region: &RationalPolyhedron, s: &Rat) -> Option<Point> {
    let c = region.relative_interior_point()?;
    let sn = s.numer().clone();
    for q in 1..=4096i64 {
        if num_integer::Integer::gcd(&sn, &q.into()) != 1.into() {
            continue;
        }
        let qr = Rat::from_int(q);
        let x = Point(
            c.0.iter()
                .map(|v| (v * &qr + Rat::new(1, 2)).floor() / &qr)
                .collect(),
        );
        if region
            .halfspaces()
            .iter()
            .all(|h| h.functional().eval_unchecked(&x).is_positive())
        {
            return Some(x);
        }
    }
    None
}

/// Reconstructs the oracle on the grid box.
pub fn reconstruct_box(
    o: &FunctionOracle,
    grid: &GridSpec,
    budget: u32,
    mode: IntegralityClass,
) -> Result<DetectOutcome<NdReconstruction>> {
    reconstruct_region(o, &grid.bx.to_polyhedron(), grid, budget, mode)
}

/// Reconstructs the oracle on `region`, a full-dimensional polyhedron
/// inside the grid box. Lines are grid lines clipped to the region.
pub fn reconstruct_region(
    o: &FunctionOracle,
    region: &RationalPolyhedron,
    grid: &GridSpec,
    budget: u32,
    mode: IntegralityClass,
) -> Result<DetectOutcome<NdReconstruction>> {
    let n = o.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension {
            expected: "2 or 3".into(),
            found: n,
        });
    }
    if mode == IntegralityClass::General {
        return Err(Error::InvalidArgument(
            "reconstruction needs integer slopes; use transintegral or integral".into(),
        ));
    }
    grid.bx.lo.ensure_dim(n)?;
    if region.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: region.dim(),
        });
    }
    let region = region.intersect(&grid.bx.to_polyhedron())?;
    if !region.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let log = QueryLog::new(o);
    let mut lines: BTreeMap<LineKey, LineResult> = BTreeMap::new();
    let mut candidates: BTreeSet<AffineFunctional> = BTreeSet::new();
    let mut focus = vec![grid.bx.clone()];
    let mut step = grid.step.clone();

    for round in 0..=REFINEMENT_ROUNDS {
        let nodes: Vec<Point> = grid_nodes(&grid.bx, &step, &focus)
            .into_iter()
            .filter(|x| region.contains(x).unwrap_or(false))
            .collect();

        let wanted: BTreeSet<LineKey> = nodes
            .iter()
            .flat_map(|x| (0..n).map(move |i| line_key(x, i)))
            .filter(|k| !lines.contains_key(k))
            .collect();
        let wanted: Vec<LineKey> = wanted.into_iter().collect();
        let results: Vec<Result<(DetectOutcome<Reconstruction1D>, Option<(Rat, Rat)>)>> = wanted
            .par_iter()
            .map(|(axis, base)| {
                let dir = Point::basis(n, *axis);
                match region.line_interval(base, &dir) {
                    Some((Some(lo), Some(hi))) if lo < hi => {
                        let lo_o = o.along_line(&LineParam::full(base.clone(), dir)?)?;
                        Ok((
                            reconstruct_transintegral(&lo_o, &lo, &hi, budget)?,
                            Some((lo, hi)),
                        ))
                    }
                    Some((Some(_), Some(_))) | None => Ok((
                        DetectOutcome::Exhausted(BudgetReport {
                            reason: String::new(),
                            budget,
                            queries_used: 0,
                        }),
                        None,
                    )),
                    _ => Err(Error::InvalidArgument(
                        "reconstruction region must be bounded".into(),
                    )),
                }
            })
            .collect();
        for ((axis, base), r) in wanted.into_iter().zip(results) {
            let (outcome, range) = r?;
            let Some((lo, hi)) = range else {
                lines.insert((axis, base), LineResult::Degenerate);
                continue;
            };
            let dir = Point::basis(n, axis);
            match outcome {
                DetectOutcome::Accept {
                    reconstruction,
                    queries,
                } => {
                    log.record(
                        queries
                            .into_iter()
                            .map(|(t, v)| (base.along(&dir, &t[0]), v)),
                    );
                    lines.insert(
                        (axis, base),
                        LineResult::Accepted {
                            lo,
                            hi,
                            rec: reconstruction,
                        },
                    );
                }
                DetectOutcome::Reject(r) => {
                    return Ok(DetectOutcome::Reject(Rejection {
                        site: Site::AxisLine { axis, base },
                        ..r
                    }));
                }
                DetectOutcome::Exhausted(rep) => {
                    return Ok(DetectOutcome::Exhausted(BudgetReport {
                        reason: format!("axis {axis} line through {base}: {}", rep.reason),
                        ..rep
                    }));
                }
            }
        }

        for x in &nodes {
            let slopes: Option<Vec<i64>> = (0..n)
                .map(|i| lines[&line_key(x, i)].slope_at(&x[i]))
                .collect();
            if mode == IntegralityClass::Integral {
                let v = log.query(x)?;
                let c = membership_computation(&v, x);
                if !c.member {
                    return Ok(DetectOutcome::Reject(Rejection {
                        witness: Witness::Membership {
                            computation: c,
                            piece: None,
                        },
                        site: Site::Node { point: x.clone() },
                    }));
                }
            }
            if let Some(s) = slopes {
                let slope = Point(s.into_iter().map(Rat::from_int).collect());
                let v = log.query(x)?;
                let constant = &v - &slope.dot(x);
                candidates.insert(AffineFunctional::new(slope, constant));
            }
        }

        if candidates.is_empty() {
            focus = vec![grid.bx.clone()];
            step = step.half();
            continue;
        }
        let g = PolyhedralFunction::new(n, candidates.iter().cloned().collect())?.canonicalize();
        let mut cells = Vec::new();
        let mut failed = Vec::new();
        for d in g.domains() {
            let cell = d.region.intersect(&region)?;
            if !cell.is_full_dimensional() {
                continue;
            }
            let verts = cell.vertices_unchecked();
            let z = centroid(&verts);
            match certify_affine_with(|p| log.query(p), &verts, &z, &d.functional) {
                Ok(true) => cells.push(Cell {
                    region: cell,
                    ambient: d.functional,
                }),
                Ok(false) | Err(Error::DegenerateHull(_)) | Err(Error::NotInHullInterior(_)) => {
                    failed.push(cell.bounding_box().expect("cells are bounded"));
                }
                Err(e) => return Err(e),
            }
        }
        if !failed.is_empty() {
            if round == REFINEMENT_ROUNDS {
                break;
            }
            focus = failed;
            step = step.half();
            continue;
        }

        let entries = log.entries();
        if let Some((x, _)) = entries.iter().find(|(x, v)| g.eval_unchecked(x) != *v) {
            return Ok(DetectOutcome::Exhausted(BudgetReport {
                reason: format!("reconstruction disagrees with the oracle at {x}"),
                budget,
                queries_used: entries.len(),
            }));
        }
        if mode == IntegralityClass::Integral {
            for (i, cell) in cells.iter().enumerate() {
                let b = &cell.ambient.constant;
                if b.is_integer() {
                    continue;
                }
                let s = Rat::from_bigint(b.denom().clone());
                let Some(x) = coprime_interior_point(&cell.region, &s) else {
                    continue;
                };
                let v = log.query(&x)?;
                let c = membership_computation(&v, &x);
                if !c.member {
                    return Ok(DetectOutcome::Reject(Rejection {
                        witness: Witness::Membership {
                            computation: c,
                            piece: Some(i),
                        },
                        site: Site::Cell { index: i },
                    }));
                }
            }
        }
        let queries = log.entries();
        return Ok(DetectOutcome::Accept {
            reconstruction: NdReconstruction {
                function: g,
                cells,
                grid: grid.clone(),
                region,
                final_step: step,
                lines_used: lines.len(),
            },
            queries,
        });
    }
    let used = log.entries().len();
    Ok(DetectOutcome::Exhausted(BudgetReport {
        reason: format!("cells not certified after {REFINEMENT_ROUNDS} refinements"),
        budget,
        queries_used: used,
    }))
}

/// An interval `[lo, hi]` containing `μ(direction)` for every ambient
/// slope `μ` of the function on the polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeBound {
    pub direction: Point,
    pub lo: Rat,
    pub hi: Rat,
}

impl SlopeBound {
    pub fn contains(&self, slope: &Point) -> bool {
        let v = slope.dot(&self.direction);
        self.lo <= v && v <= self.hi
    }
}

fn check_orthant_polyhedron(p: &RationalPolyhedron) -> Result<Vec<usize>> {
    if p.dim() > 3 {
        return Err(Error::DimensionTooLarge {
            max: 3,
            found: p.dim(),
        });
    }
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    p.orthant_constraints().ok_or(Error::NotInOrthant)
}

fn mixed_signs(values: &[Rat]) -> bool {
    values.iter().all(|v| !v.is_zero())
        && values.iter().any(Rat::is_positive)
        && values.iter().any(Rat::is_negative)
}

/// Directions `z₁, …, zₙ` along which every orthant constraint slope is
/// nonzero and the signs are mixed, so each line along `zᵢ` enters and
/// leaves the polyhedron.
///
/// `eᵢ − e_{i+1}` is used when it qualifies; the rest come from
/// `M⁻¹(𝟙 − (n+1)eₖ)` with `M` the matrix of orthant slopes.
pub fn orthant_directions(p: &RationalPolyhedron) -> Result<Vec<Point>> {
    let idx = check_orthant_polyhedron(p)?;
    let n = p.dim();
    let m: Vec<Point> = idx.iter().map(|&i| p.constraint(i).slope.clone()).collect();
    let qualifies = |z: &Point| mixed_signs(&m.iter().map(|mu| mu.dot(z)).collect::<Vec<_>>());
    let mut out: Vec<Point> = Vec::new();
    let push = |z: Point, out: &mut Vec<Point>| {
        let mut with = out.clone();
        with.push(z.clone());
        if linalg::rank(&with) == with.len() {
            out.push(z);
        }
    };
    if n >= 2 {
        for i in 0..n {
            let z = Point::basis(n, i).sub(&Point::basis(n, (i + 1) % n));
            if qualifies(&z) {
                push(z, &mut out);
            }
        }
    }
    let rows: Vec<Vec<Rat>> = m.iter().map(|mu| mu.0.clone()).collect();
    for k in 0..n {
        if out.len() == n {
            break;
        }
        let v: Vec<Rat> = (0..n)
            .map(|j| {
                if j == k {
                    Rat::from_int(-(n as i64))
                } else {
                    Rat::one()
                }
            })
            .collect();
        let z = Point(linalg::solve(&rows, &v).expect("orthant slopes are independent"));
        push(z, &mut out);
    }
    if out.len() < n || n == 1 {
        return Err(Error::InvalidArgument(
            "no direction with mixed signs exists in dimension 1".into(),
        ));
    }
    Ok(out)
}

/// Smallest `f′(x, z)` over points `x` of the face.
fn min_dir_deriv_on_face(
    f: &PolyhedralFunction,
    face: &RationalPolyhedron,
    face_dim: usize,
    z: &Point,
) -> Result<Option<Rat>> {
    let mut best: Option<Rat> = None;
    for d in f.domains() {
        let piece = d.region.intersect(face)?;
        if piece.affine_dimension() != Some(face_dim) {
            continue;
        }
        let x = piece.relative_interior_point().expect("nonempty piece");
        let v = f.dir_deriv(&x, z)?;
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
        }
    }
    Ok(best)
}

/// Bounds on `μ(zᵢ)` over the ambient slopes of `f` on `p`, computed from
/// directional derivatives on the boundary faces where lines along `zᵢ`
/// enter and leave `p`.
pub fn slope_bound(f: &PolyhedralFunction, p: &RationalPolyhedron) -> Result<Vec<SlopeBound>> {
    let dirs = orthant_directions(p)?;
    slope_bound_with(f, p, &dirs)
}

pub fn slope_bound_with(
    f: &PolyhedralFunction,
    p: &RationalPolyhedron,
    directions: &[Point],
) -> Result<Vec<SlopeBound>> {
    check_orthant_polyhedron(p)?;
    let n = p.dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        });
    }
    let f = f.canonicalize();
    let faces: Vec<_> = p
        .facets()?
        .into_iter()
        .filter(|fc| fc.dimension + 1 == n && fc.active.len() == 1)
        .collect();
    let mut out = Vec::new();
    for z in directions {
        z.ensure_dim(n)?;
        if z.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let neg = z.scale(&Rat::from_int(-1));
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for face in &faces {
            let s = p.constraint(face.active[0]).slope.dot(z);
            if s.is_positive() {
                if let Some(v) = min_dir_deriv_on_face(&f, &face.region, n - 1, z)? {
                    lo = Some(lo.map_or(v.clone(), |l| l.min(v)));
                }
            } else if s.is_negative() {
                if let Some(v) = min_dir_deriv_on_face(&f, &face.region, n - 1, &neg)? {
                    let v = -v;
                    hi = Some(hi.map_or(v.clone(), |h| h.max(v)));
                }
            }
        }
        match (lo, hi) {
            (Some(lo), Some(hi)) => out.push(SlopeBound {
                direction: z.clone(),
                lo,
                hi,
            }),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "direction {z} does not both enter and leave the polyhedron"
                )))
            }
        }
    }
    Ok(out)
}

/// Parameters of [`detect_on_skeleton`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonConfig {
    pub budget: u32,
    pub step: Rat,
    pub ray_length: Rat,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        SkeletonConfig {
            budget: crate::detect1d::DEFAULT_BUDGET,
            step: default_step(),
            ray_length: default_ray_length(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonReconstruction {
    pub function: PolyhedralFunction,
    /// The input lines with primitive integer directions.
    pub skeleton: Vec<LineParam>,
    /// Parameter interval actually sampled on each line.
    pub line_intervals: Vec<(Rat, Rat)>,
    pub lines: Vec<Reconstruction1D>,
    pub region: NdReconstruction,
}

/// The sampled parameter interval of a skeleton line.
pub fn truncate(line: &LineParam, ray_length: &Rat) -> Option<(Rat, Rat)> {
    match &line.extent {
        Extent::Segment(a, b) => Some((a.clone(), b.clone())),
        Extent::From(a) => Some((a.clone(), a + ray_length)),
        Extent::UpTo(b) => Some((b - ray_length, b.clone())),
        Extent::Line => None,
    }
}

fn in_recession_cone(p: &RationalPolyhedron, d: &Point) -> bool {
    p.halfspaces()
        .iter()
        .all(|h| !h.functional().slope_at(d).is_negative())
}

fn line_param_of(line: &LineParam, x: &Point) -> Option<Rat> {
    let i = line.direction.0.iter().position(|c| !c.is_zero())?;
    let t = (&x[i] - &line.base[i]) / &line.direction[i];
    (line.point_at(&t) == *x).then_some(t)
}

/// Checks the skeleton preconditions, returning the first violation.
pub fn check_skeleton(p: &RationalPolyhedron, lines: &[LineParam]) -> Result<()> {
    let n = p.dim();
    check_orthant_polyhedron(p)?;
    let bad = |index: usize, reason: &str| {
        Err(Error::BadSkeletonLine {
            index,
            reason: reason.into(),
        })
    };
    for (i, l) in lines.iter().enumerate() {
        l.base.ensure_dim(n)?;
        let inner = match &l.extent {
            Extent::Line => return bad(i, "is a full line"),
            Extent::Segment(a, b) => {
                if a == b {
                    return bad(i, "is a single point");
                }
                if !p.contains(&l.point_at(a))? || !p.contains(&l.point_at(b))? {
                    return bad(i, "has an endpoint outside the polyhedron");
                }
                l.point_at(&(a + b).half())
            }
            Extent::From(a) => {
                if !p.contains(&l.point_at(a))? || !in_recession_cone(p, &l.direction) {
                    return bad(i, "leaves the polyhedron");
                }
                l.point_at(&(a + &Rat::one()))
            }
            Extent::UpTo(b) => {
                if !p.contains(&l.point_at(b))?
                    || !in_recession_cone(p, &l.direction.scale(&Rat::from_int(-1)))
                {
                    return bad(i, "leaves the polyhedron");
                }
                l.point_at(&(b - &Rat::one()))
            }
        };
        if !p.interior_contains(&inner)? {
            return bad(i, "does not run through the interior");
        }
    }
    for v in p.vertices()? {
        let covered = lines
            .iter()
            .any(|l| line_param_of(l, &v).is_some_and(|t| l.contains_param(&t)));
        if !covered {
            return Err(Error::UncoveredVertex(v));
        }
    }
    for face in p.facets()? {
        if face.dimension != 1 || face.region.is_bounded() {
            continue;
        }
        let eq: Vec<Point> = face
            .active
            .iter()
            .map(|&i| p.constraint(i).slope.clone())
            .collect();
        let mut d = linalg::nullspace(&eq, n)
            .pop()
            .expect("one-dimensional face");
        if !in_recession_cone(&face.region, &d) {
            d = d.scale(&Rat::from_int(-1));
        }
        let translate = lines.iter().any(|l| {
            let along = match &l.extent {
                Extent::From(_) => l.direction.clone(),
                Extent::UpTo(_) => l.direction.scale(&Rat::from_int(-1)),
                _ => return false,
            };
            linalg::rank(&[along.clone(), d.clone()]) == 1 && along.dot(&d).is_positive()
        });
        if !translate {
            let base = face
                .region
                .vertices()?
                .into_iter()
                .next()
                .unwrap_or_else(|| {
                    face.region
                        .relative_interior_point()
                        .expect("nonempty face")
                });
            return Err(Error::MissingFacetTranslate { base, direction: d });
        }
    }
    Ok(())
}

/// Detection from restrictions to a skeleton of lines, followed by a grid
/// reconstruction on the polyhedron (clipped to a box around the vertices
/// and the sampled parts of the lines) and an exact consistency check
/// between the two.
pub fn detect_on_skeleton(
    o: &FunctionOracle,
    p: &RationalPolyhedron,
    lines: &[LineParam],
    cfg: &SkeletonConfig,
) -> Result<DetectOutcome<SkeletonReconstruction>> {
    if o.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: o.dim(),
            found: p.dim(),
        });
    }
    check_skeleton(p, lines)?;
    let lines: Vec<LineParam> = lines.iter().map(LineParam::primitive).collect();
    let mut log: BTreeMap<Point, Rat> = BTreeMap::new();
    let mut recs = Vec::new();
    let mut intervals = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        let (a, b) = truncate(l, &cfg.ray_length).expect("checked");
        let lo = o.along_line(&LineParam::new(
            l.base.clone(),
            l.direction.clone(),
            Extent::Segment(a.clone(), b.clone()),
        )?)?;
        match reconstruct_transintegral(&lo, &a, &b, cfg.budget)? {
            DetectOutcome::Accept {
                reconstruction,
                queries,
            } => {
                log.extend(queries.into_iter().map(|(t, v)| (l.point_at(&t[0]), v)));
                recs.push(reconstruction);
                intervals.push((a, b));
            }
            DetectOutcome::Reject(r) => {
                return Ok(DetectOutcome::Reject(Rejection {
                    site: Site::SkeletonLine { index: i },
                    ..r
                }))
            }
            DetectOutcome::Exhausted(rep) => {
                return Ok(DetectOutcome::Exhausted(BudgetReport {
                    reason: format!("skeleton line {i}: {}", rep.reason),
                    ..rep
                }))
            }
        }
    }

    let mut pts = p.vertices()?;
    for (l, (a, b)) in lines.iter().zip(&intervals) {
        pts.push(l.point_at(a));
        pts.push(l.point_at(b));
    }
    let n = p.dim();
    let lo = Point(
        (0..n)
            .map(|i| pts.iter().map(|x| x[i].clone()).min().expect("points"))
            .collect(),
    );
    let hi = Point(
        (0..n)
            .map(|i| pts.iter().map(|x| x[i].clone()).max().expect("points"))
            .collect(),
    );
    let grid = GridSpec::covering(&RationalBox::new(lo, hi)?, cfg.step.clone())?;
    let outcome = reconstruct_region(o, p, &grid, cfg.budget, IntegralityClass::TransIntegral)?;
    let (region, queries) = match outcome {
        DetectOutcome::Accept {
            reconstruction,
            queries,
        } => (reconstruction, queries),
        DetectOutcome::Reject(r) => return Ok(DetectOutcome::Reject(r)),
        DetectOutcome::Exhausted(rep) => return Ok(DetectOutcome::Exhausted(rep)),
    };
    log.extend(queries);
    for (i, ((l, rec), (a, b))) in lines.iter().zip(&recs).zip(&intervals).enumerate() {
        let restricted = region.function.restrict(l)?.function;
        if first_disagreement(&restricted, &rec.to_function(), a, b)?.is_some() {
            return Ok(DetectOutcome::Exhausted(BudgetReport {
                reason: format!("reconstruction does not match skeleton line {i}"),
                budget: cfg.budget,
                queries_used: log.len(),
            }));
        }
    }
    Ok(DetectOutcome::Accept {
        reconstruction: SkeletonReconstruction {
            function: region.function.clone(),
            skeleton: lines,
            line_intervals: intervals,
            lines: recs,
            region,
        },
        queries: log.into_iter().collect(),
    })
}
