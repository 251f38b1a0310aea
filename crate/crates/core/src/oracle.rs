//! Black-box functions on rational points, and sampling checks for
//! convexity and Lipschitz bounds.
//!
//! Every oracle caches its answers by exact point, so detectors pay once
//! per distinct query and [`FunctionOracle::queries_used`] counts distinct
//! evaluations.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyfun::{Extent, LineParam, PolyhedralFunction};
use crate::polyhedron::{RationalBox, RationalPolyhedron};
use crate::rat::{AffineFunctional, Point, Rat};

type QueryFn = dyn Fn(&Point) -> Result<Rat> + Send + Sync;

struct Inner {
    name: String,
    n: usize,
    domain: RationalPolyhedron,
    query: Box<QueryFn>,
    symbolic: Option<PolyhedralFunction>,
    cache: Mutex<HashMap<Point, Rat>>,
    distinct: AtomicU64,
}

/// A deterministic function on the rational points of a polyhedron.
///
/// Cloning is cheap and clones share the cache and the query counter.
#[derive(Clone)]
pub struct FunctionOracle {
    inner: Arc<Inner>,
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("name", &self.inner.name)
            .field("n", &self.inner.n)
            .field("queries", &self.queries_used())
            .finish()
    }
}

/// Names accepted by [`FunctionOracle::builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "square",
    "halfslope",
    "abs",
    "sawtooth-nonconvex",
    "zero",
    "trop-conic",
    "halfslope-2d",
    "halfslope-trop",
    "min-2d",
];

impl FunctionOracle {
    pub fn new(
        name: impl Into<String>,
        domain: RationalPolyhedron,
        query: impl Fn(&Point) -> Result<Rat> + Send + Sync + 'static,
    ) -> Self {
        FunctionOracle::build(name.into(), domain, Box::new(query), None)
    }

    fn build(
        name: String,
        domain: RationalPolyhedron,
        query: Box<QueryFn>,
        symbolic: Option<PolyhedralFunction>,
    ) -> Self {
        FunctionOracle {
            inner: Arc::new(Inner {
                name,
                n: domain.dim(),
                domain,
                query,
                symbolic,
                cache: Mutex::new(HashMap::new()),
                distinct: AtomicU64::new(0),
            }),
        }
    }

    /// Evaluates `f` on `domain`.
    pub fn from_polyfun(f: &PolyhedralFunction, domain: RationalPolyhedron) -> Result<Self> {
        if domain.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                found: domain.dim(),
            });
        }
        let g = f.clone();
        Ok(FunctionOracle::build(
            format!("polyfun({} functionals)", f.len()),
            domain,
            Box::new(move |x| g.eval(x)),
            Some(f.clone()),
        ))
    }

    /// Evaluates `f` on all of ℝⁿ.
    pub fn from_polyfun_everywhere(f: &PolyhedralFunction) -> Self {
        FunctionOracle::from_polyfun(f, RationalPolyhedron::whole(f.dim()))
            .expect("dimensions agree")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let uni = |pieces: &[(Rat, Rat)]| PolyhedralFunction::univariate(pieces).expect("nonempty");
        let bi = |items: &[(&[i64], i64)]| {
            PolyhedralFunction::new(
                2,
                items
                    .iter()
                    .map(|(s, c)| AffineFunctional::from_ints(s, *c))
                    .collect(),
            )
            .expect("valid")
        };
        let half = Rat::new(1, 2);
        let named = |f: PolyhedralFunction| {
            let mut o = FunctionOracle::from_polyfun_everywhere(&f);
            Arc::get_mut(&mut o.inner).expect("fresh").name = name.to_string();
            o
        };
        let o = match name {
            "square" => {
                FunctionOracle::new(name, RationalPolyhedron::whole(1), |x| Ok(&x[0] * &x[0]))
            }
            "halfslope" => named(uni(&[(half, Rat::zero()), (Rat::zero(), Rat::zero())])),
            "abs" => named(uni(&[
                (Rat::one(), Rat::zero()),
                (Rat::from_int(-1), Rat::zero()),
            ])),
            "sawtooth-nonconvex" => FunctionOracle::new(name, RationalPolyhedron::whole(1), |x| {
                let t = &x[0];
                Ok(if t <= &Rat::zero() {
                    t.clone()
                } else if t <= &Rat::one() {
                    -t
                } else {
                    t - &Rat::from_int(2)
                })
            }),
            "zero" => named(PolyhedralFunction::constant(1, Rat::zero())),
            "trop-conic" => named(bi(&[
                (&[2, 0], 0),
                (&[1, 1], 0),
                (&[0, 2], 0),
                (&[0, 0], 0),
            ])),
            "halfslope-2d" => named(
                PolyhedralFunction::new(
                    2,
                    vec![
                        AffineFunctional::new(Point(vec![half.clone(), Rat::zero()]), Rat::zero()),
                        AffineFunctional::from_ints(&[0, 1], 0),
                    ],
                )
                .expect("valid"),
            ),
            "halfslope-trop" => named(
                PolyhedralFunction::new(
                    2,
                    vec![
                        AffineFunctional::new(Point(vec![half, Rat::zero()]), Rat::zero()),
                        AffineFunctional::from_ints(&[0, 1], 0),
                        AffineFunctional::from_ints(&[0, 0], 0),
                    ],
                )
                .expect("valid"),
            ),
            "min-2d" => FunctionOracle::new(name, RationalPolyhedron::whole(2), |x| {
                Ok([x[0].clone(), x[1].clone(), Rat::zero()]
                    .into_iter()
                    .min()
                    .expect("nonempty"))
            }),
            _ => return Err(Error::UnknownOracle(name.to_string())),
        };
        Ok(o)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn dim(&self) -> usize {
        self.inner.n
    }

    pub fn domain(&self) -> &RationalPolyhedron {
        &self.inner.domain
    }

    /// The max-affine function behind the oracle, when it was built from one.
    pub fn symbolic(&self) -> Option<&PolyhedralFunction> {
        self.inner.symbolic.as_ref()
    }

    /// Number of distinct points evaluated so far.
    pub fn queries_used(&self) -> u64 {
        self.inner.distinct.load(Ordering::SeqCst)
    }

    pub fn query(&self, x: &Point) -> Result<Rat> {
        x.ensure_dim(self.inner.n)?;
        if let Some(v) = self.inner.cache.lock().expect("cache lock").get(x) {
            return Ok(v.clone());
        }
        if !self.inner.domain.contains(x)? {
            return Err(Error::OutsideDomain(x.clone()));
        }
        let v = (self.inner.query)(x)?;
        let mut cache = self.inner.cache.lock().expect("cache lock");
        if !cache.contains_key(x) {
            cache.insert(x.clone(), v.clone());
            self.inner.distinct.fetch_add(1, Ordering::SeqCst);
        }
        Ok(v)
    }

    /// Query at a scalar, for one-variable oracles.
    pub fn query_at(&self, t: &Rat) -> Result<Rat> {
        self.query(&Point(vec![t.clone()]))
    }

    /// `t ↦ o(base + t·direction)` on the part of the line inside the domain
    /// and inside the line's own extent.
    pub fn along_line(&self, line: &LineParam) -> Result<FunctionOracle> {
        line.base.ensure_dim(self.inner.n)?;
        let Some((mut lo, mut hi)) = self.inner.domain.line_interval(&line.base, &line.direction)
        else {
            return Err(Error::OutsideDomain(line.base.clone()));
        };
        let tighten_lo = |lo: &mut Option<Rat>, a: &Rat| {
            if lo.as_ref().is_none_or(|l| l < a) {
                *lo = Some(a.clone());
            }
        };
        let tighten_hi = |hi: &mut Option<Rat>, b: &Rat| {
            if hi.as_ref().is_none_or(|u| u > b) {
                *hi = Some(b.clone());
            }
        };
        match &line.extent {
            Extent::Line => {}
            Extent::From(a) => tighten_lo(&mut lo, a),
            Extent::UpTo(b) => tighten_hi(&mut hi, b),
            Extent::Segment(a, b) => {
                tighten_lo(&mut lo, a);
                tighten_hi(&mut hi, b);
            }
        }
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a > b {
                return Err(Error::OutsideDomain(line.base.clone()));
            }
        }
        let parent = self.clone();
        let (base, dir) = (line.base.clone(), line.direction.clone());
        let symbolic = match self.symbolic() {
            Some(f) => Some(f.restrict(line)?.function),
            None => None,
        };
        Ok(FunctionOracle::build(
            format!("{} along {} + t{}", self.name(), line.base, line.direction),
            RationalPolyhedron::interval(lo.as_ref(), hi.as_ref()),
            Box::new(move |t| parent.query(&base.along(&dir, &t[0]))),
            symbolic,
        ))
    }
}

/// `t·f(x) + (1−t)·f(y) < f(tx + (1−t)y)`, with all values recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JensenWitness {
    pub x: Point,
    pub y: Point,
    pub t: Rat,
    pub fx: Rat,
    pub fy: Rat,
    /// `f(tx + (1−t)y)`
    pub f_mix: Rat,
}

impl JensenWitness {
    pub fn mix_point(&self) -> Point {
        Point::lerp(&self.t, &self.x, &self.y)
    }

    /// `t·f(x) + (1−t)·f(y)`
    pub fn chord_value(&self) -> Rat {
        &self.t * &self.fx + (Rat::one() - &self.t) * &self.fy
    }

    pub fn is_violation(&self) -> bool {
        self.chord_value() < self.f_mix
    }

    /// Re-queries the three points and checks the recorded values.
    pub fn recheck(&self, o: &FunctionOracle) -> Result<bool> {
        Ok(o.query(&self.x)? == self.fx
            && o.query(&self.y)? == self.fy
            && o.query(&self.mix_point())? == self.f_mix
            && self.is_violation())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of a sampling check. A failure is a proof of non-convexity; a
/// pass only covers the sample described in `sample`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    pub witness: Option<JensenWitness>,
    pub queries_used: u64,
    pub sample: String,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn jensen_triple(
    o: &FunctionOracle,
    x: &Point,
    y: &Point,
    t: &Rat,
) -> Result<Option<JensenWitness>> {
    let w = JensenWitness {
        x: x.clone(),
        y: y.clone(),
        t: t.clone(),
        fx: o.query(x)?,
        fy: o.query(y)?,
        f_mix: o.query(&Point::lerp(t, x, y))?,
    };
    Ok(w.is_violation().then_some(w))
}

fn first_witness(results: Vec<Result<Option<JensenWitness>>>) -> Result<Option<JensenWitness>> {
    for r in results {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn report(
    o: &FunctionOracle,
    before: u64,
    witness: Option<JensenWitness>,
    sample: String,
) -> ConvexityReport {
    ConvexityReport {
        verdict: if witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        witness,
        queries_used: o.queries_used() - before,
        sample,
    }
}

/// Checks the Jensen inequality for every pair and every `t`. The witness
/// is the first violation in pair-major, then `t`, order.
pub fn jensen_check(
    o: &FunctionOracle,
    pairs: &[(Point, Point)],
    ts: &[Rat],
) -> Result<ConvexityReport> {
    for t in ts {
        if t.is_negative() || t > &Rat::one() {
            return Err(Error::InvalidArgument(format!("t = {t} outside [0, 1]")));
        }
    }
    let before = o.queries_used();
    let per_pair: Vec<Result<Option<JensenWitness>>> = pairs
        .par_iter()
        .map(|(x, y)| first_witness(ts.iter().map(|t| jensen_triple(o, x, y, t)).collect()))
        .collect();
    let witness = first_witness(per_pair)?;
    let ts_text: Vec<String> = ts.iter().map(Rat::to_string).collect();
    Ok(report(
        o,
        before,
        witness,
        format!("{} pairs, t in {{{}}}", pairs.len(), ts_text.join(", ")),
    ))
}

/// All axis-parallel grid lines of `bx` at spacing `resolution`, as
/// `(axis, point list)` in a fixed order.
fn axis_lines(bx: &RationalBox, resolution: &Rat) -> Vec<(usize, Vec<Point>)> {
    let n = bx.dim();
    let ticks: Vec<Vec<Rat>> = (0..n).map(|i| bx.axis_ticks(i, resolution)).collect();
    let mut out = Vec::new();
    for axis in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != axis).collect();
        let mut idx = vec![0usize; others.len()];
        loop {
            let pts = ticks[axis]
                .iter()
                .map(|s| {
                    let mut c = vec![Rat::zero(); n];
                    c[axis] = s.clone();
                    for (k, &j) in others.iter().enumerate() {
                        c[j] = ticks[j][idx[k]].clone();
                    }
                    Point(c)
                })
                .collect();
            out.push((axis, pts));
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < ticks[others[k]].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

fn check_resolution(resolution: &Rat) -> Result<()> {
    if resolution.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "resolution {resolution} must be positive"
        )))
    }
}

/// Jensen along every axis-parallel grid line of the box, on consecutive
/// triples of grid points.
pub fn axis_convexity_check(
    o: &FunctionOracle,
    bx: &RationalBox,
    resolution: &Rat,
) -> Result<ConvexityReport> {
    bx.lo.ensure_dim(o.dim())?;
    check_resolution(resolution)?;
    let before = o.queries_used();
    let lines = axis_lines(bx, resolution);
    let per_line: Vec<Result<Option<JensenWitness>>> = lines
        .par_iter()
        .map(|(axis, pts)| {
            first_witness(
                pts.windows(3)
                    .map(|w| {
                        let (a, b, c) = (&w[0][*axis], &w[1][*axis], &w[2][*axis]);
                        let t = (c - b) / (c - a);
                        jensen_triple(o, &w[0], &w[2], &t)
                    })
                    .collect(),
            )
        })
        .collect();
    let witness = first_witness(per_line)?;
    Ok(report(
        o,
        before,
        witness,
        format!(
            "{} axis lines of box {} .. {} at resolution {}",
            lines.len(),
            bx.lo,
            bx.hi,
            resolution
        ),
    ))
}

/// Largest `|f(b) − f(a)| / |b − a|` over adjacent axis-grid points.
pub fn lipschitz_estimate(o: &FunctionOracle, bx: &RationalBox, resolution: &Rat) -> Result<Rat> {
    bx.lo.ensure_dim(o.dim())?;
    check_resolution(resolution)?;
    let lines = axis_lines(bx, resolution);
    let per_line: Vec<Result<Rat>> = lines
        .par_iter()
        .map(|(axis, pts)| {
            let mut best = Rat::zero();
            for w in pts.windows(2) {
                let s = ((o.query(&w[1])? - o.query(&w[0])?) / (&w[1][*axis] - &w[0][*axis])).abs();
                best = best.max(s);
            }
            Ok(best)
        })
        .collect();
    let mut best = Rat::zero();
    for r in per_line {
        best = best.max(r?);
    }
    Ok(best)
}
