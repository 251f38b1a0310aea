//! Convex polyhedral functions `f(x) = max λᵢ(x)` and their algebra.
//!
//! Functions are stored as a nonempty list of affine functionals. Most
//! operations return canonical forms: the unique minimal list, sorted
//! lexicographically by `(slope, constant)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polyhedron::{HalfSpace, RationalPolyhedron};
use crate::rat::{AffineFunctional, IntegralityClass, Point, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction")]
pub struct PolyhedralFunction {
    n: usize,
    functionals: Vec<AffineFunctional>,
}

#[derive(Deserialize)]
struct RawFunction {
    n: usize,
    functionals: Vec<AffineFunctional>,
}

impl TryFrom<RawFunction> for PolyhedralFunction {
    type Error = Error;
    fn try_from(raw: RawFunction) -> Result<Self> {
        PolyhedralFunction::new(raw.n, raw.functionals)
    }
}

impl fmt::Display for PolyhedralFunction {
    /// `max(x + y, 2x - 1, 0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max(")?;
        for (i, l) in self.functionals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Parameter range of a [`LineParam`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extent {
    Line,
    /// `t ≥ t₀`
    From(Rat),
    /// `t ≤ t₁`
    UpTo(Rat),
    Segment(Rat, Rat),
}

/// The line (or ray, or segment) `t ↦ base + t·direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineParam {
    pub base: Point,
    pub direction: Point,
    pub extent: Extent,
}

impl LineParam {
    pub fn new(base: Point, direction: Point, extent: Extent) -> Result<Self> {
        direction.ensure_dim(base.dim())?;
        if direction.is_zero() {
            return Err(Error::ZeroDirection);
        }
        if let Extent::Segment(a, b) = &extent {
            if a > b {
                return Err(Error::InvalidArgument(format!(
                    "segment [{a}, {b}] is reversed"
                )));
            }
        }
        Ok(LineParam {
            base,
            direction,
            extent,
        })
    }

    pub fn full(base: Point, direction: Point) -> Result<Self> {
        LineParam::new(base, direction, Extent::Line)
    }

    /// The closed segment from `a` to `b`, parameterized over `[0, 1]`.
    pub fn segment(a: &Point, b: &Point) -> Result<Self> {
        LineParam::new(
            a.clone(),
            b.sub(a),
            Extent::Segment(Rat::zero(), Rat::one()),
        )
    }

    /// The ray `{from + t·direction : t ≥ 0}`.
    pub fn ray(from: Point, direction: Point) -> Result<Self> {
        LineParam::new(from, direction, Extent::From(Rat::zero()))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point_at(&self, t: &Rat) -> Point {
        self.base.along(&self.direction, t)
    }

    pub fn contains_param(&self, t: &Rat) -> bool {
        match &self.extent {
            Extent::Line => true,
            Extent::From(a) => t >= a,
            Extent::UpTo(b) => t <= b,
            Extent::Segment(a, b) => a <= t && t <= b,
        }
    }

    /// The same point set, reparameterized so the direction is a primitive
    /// integer vector. Integer slopes of a function then restrict to
    /// integer slopes along the line.
    pub fn primitive(&self) -> LineParam {
        let l = self
            .direction
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = self
            .direction
            .0
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let k = Rat::from_big(l, g);
        let direction = self.direction.scale(&k);
        let extent = match &self.extent {
            Extent::Line => Extent::Line,
            Extent::From(a) => Extent::From(a / &k),
            Extent::UpTo(b) => Extent::UpTo(b / &k),
            Extent::Segment(a, b) => Extent::Segment(a / &k, b / &k),
        };
        LineParam {
            base: self.base.clone(),
            direction,
            extent,
        }
    }
}

/// A restriction to a line, with the integrality class of the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub function: PolyhedralFunction,
    pub class: IntegralityClass,
}

/// Region on which `f` equals `functional`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainOfAffinity {
    pub functional: AffineFunctional,
    pub region: RationalPolyhedron,
}

/// `g_m(t) = inf_u f(x₁ + t(x₂ − x₁) + u·z) − m·u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugate {
    Finite(PolyhedralFunction),
    MinusInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialConjugateResult {
    /// The values `μ(z)` over the functionals of `f`.
    pub slope_set: Vec<Rat>,
    pub profiles: BTreeMap<Rat, Conjugate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionCheck {
    Holds,
    Mismatch {
        t: Rat,
        u: Rat,
        direct: Rat,
        decomposed: Rat,
    },
    Unbounded {
        m: Rat,
    },
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        matches!(self, DecompositionCheck::Holds)
    }
}

impl PolyhedralFunction {
    pub fn new(n: usize, functionals: Vec<AffineFunctional>) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::EmptyFunction);
        }
        if n == 0 {
            return Err(Error::InvalidArgument("function of dimension 0".into()));
        }
        for f in &functionals {
            if f.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.dim(),
                });
            }
        }
        Ok(PolyhedralFunction { n, functionals })
    }

    /// Dimension taken from the first functional.
    pub fn from_functionals(functionals: Vec<AffineFunctional>) -> Result<Self> {
        let n = functionals.first().ok_or(Error::EmptyFunction)?.dim();
        PolyhedralFunction::new(n, functionals)
    }

    /// `max(a₁ t + b₁, …)` in one variable, from `(slope, constant)` pairs.
    pub fn univariate(pieces: &[(Rat, Rat)]) -> Result<Self> {
        PolyhedralFunction::from_functionals(
            pieces
                .iter()
                .map(|(a, b)| AffineFunctional::new(Point(vec![a.clone()]), b.clone()))
                .collect(),
        )
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        PolyhedralFunction {
            n,
            functionals: vec![AffineFunctional::constant_fn(n, c)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn functionals(&self) -> &[AffineFunctional] {
        &self.functionals
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    fn same_dim(&self, other: &PolyhedralFunction) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    pub fn eval(&self, x: &Point) -> Result<Rat> {
        x.ensure_dim(self.n)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> Rat {
        self.functionals
            .iter()
            .map(|l| l.eval_unchecked(x))
            .max()
            .expect("nonempty")
    }

    /// Indices of the functionals attaining the maximum at `x`.
    pub fn active_set(&self, x: &Point) -> Result<Vec<usize>> {
        x.ensure_dim(self.n)?;
        let vals: Vec<Rat> = self
            .functionals
            .iter()
            .map(|l| l.eval_unchecked(x))
            .collect();
        let top = vals.iter().max().expect("nonempty").clone();
        Ok(vals
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == top)
            .map(|(i, _)| i)
            .collect())
    }

    /// Most permissive class among the functionals.
    pub fn integrality(&self) -> IntegralityClass {
        self.functionals
            .iter()
            .map(AffineFunctional::classify)
            .max()
            .expect("nonempty")
    }

    /// Tropical sum: pointwise maximum.
    pub fn trop_add(&self, other: &PolyhedralFunction) -> Result<PolyhedralFunction> {
        self.same_dim(other)?;
        let mut fs = self.functionals.clone();
        fs.extend(other.functionals.iter().cloned());
        Ok(PolyhedralFunction {
            n: self.n,
            functionals: fs,
        }
        .canonicalize())
    }

    /// Tropical product: pointwise sum.
    pub fn trop_mul(&self, other: &PolyhedralFunction) -> Result<PolyhedralFunction> {
        self.same_dim(other)?;
        let fs = self
            .functionals
            .iter()
            .flat_map(|a| other.functionals.iter().map(move |b| a.add(b)))
            .collect();
        Ok(PolyhedralFunction {
            n: self.n,
            functionals: fs,
        }
        .canonicalize())
    }

    /// The unique minimal representation, sorted by `(slope, constant)`.
    ///
    /// A functional is dropped when its lifted point `(slope, constant)`
    /// lies on or below the upper hull of the others, i.e. when some convex
    /// combination of the others has the same slope and a constant at least
    /// as large.
    pub fn canonicalize(&self) -> PolyhedralFunction {
        let fs = dedup_by_slope(&self.functionals);
        let kept = if self.n == 1 {
            upper_hull_1d(fs)
        } else {
            prune_redundant_lp(fs)
        };
        PolyhedralFunction {
            n: self.n,
            functionals: kept,
        }
    }

    /// Same as [`canonicalize`](Self::canonicalize) but always through the
    /// linear-programming redundancy test, whatever the dimension.
    pub fn canonicalize_via_lp(&self) -> PolyhedralFunction {
        let fs = dedup_by_slope(&self.functionals);
        PolyhedralFunction {
            n: self.n,
            functionals: prune_redundant_lp(fs),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    /// An active functional at `x`; the lexicographically smallest one on ties.
    pub fn support_at(&self, x: &Point) -> Result<AffineFunctional> {
        let active = self.active_set(x)?;
        Ok(active
            .into_iter()
            .map(|i| &self.functionals[i])
            .min()
            .expect("active set is nonempty")
            .clone())
    }

    /// `t ↦ f(base + t·direction)`, canonicalized.
    pub fn restrict(&self, line: &LineParam) -> Result<Restriction> {
        line.base.ensure_dim(self.n)?;
        if line.direction.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let fs = self
            .functionals
            .iter()
            .map(|l| {
                AffineFunctional::new(
                    Point(vec![l.slope_at(&line.direction)]),
                    l.eval_unchecked(&line.base),
                )
            })
            .collect();
        let function = PolyhedralFunction {
            n: 1,
            functionals: fs,
        }
        .canonicalize();
        let class = function.integrality();
        Ok(Restriction { function, class })
    }

    /// `f'(x, z)`: the largest `μᵢ(z)` over functionals active at `x`.
    pub fn dir_deriv(&self, x: &Point, z: &Point) -> Result<Rat> {
        z.ensure_dim(self.n)?;
        if z.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let active = self.active_set(x)?;
        Ok(active
            .into_iter()
            .map(|i| self.functionals[i].slope_at(z))
            .max()
            .expect("nonempty"))
    }

    /// `{x : λᵢ(x) ≥ λⱼ(x) for all j}` paired with `λᵢ`.
    pub fn domain_of_affinity(&self, i: usize) -> Result<DomainOfAffinity> {
        let lambda = self
            .functionals
            .get(i)
            .ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.functionals.len(),
            })?
            .clone();
        let mut hs = Vec::new();
        for (j, other) in self.functionals.iter().enumerate() {
            if j == i {
                continue;
            }
            let diff = lambda.sub(other);
            if diff.slope.is_zero() {
                if diff.constant.is_negative() {
                    return Ok(DomainOfAffinity {
                        functional: lambda,
                        region: RationalPolyhedron::empty(self.n),
                    });
                }
                continue;
            }
            hs.push(HalfSpace::new(diff)?);
        }
        Ok(DomainOfAffinity {
            functional: lambda,
            region: RationalPolyhedron::new(self.n, hs)?,
        })
    }

    /// Domains of affinity of every functional, in list order.
    pub fn domains(&self) -> Vec<DomainOfAffinity> {
        (0..self.functionals.len())
            .map(|i| self.domain_of_affinity(i).expect("index in range"))
            .collect()
    }

    /// Breakpoints of a one-variable canonical function, increasing.
    pub fn breakpoints(&self) -> Result<Vec<Rat>> {
        if self.n != 1 {
            return Err(Error::UnsupportedDimension {
                expected: "1".into(),
                found: self.n,
            });
        }
        let c = self.canonicalize();
        Ok(c.functionals
            .windows(2)
            .map(|w| (&w[0].constant - &w[1].constant) / (&w[1].slope[0] - &w[0].slope[0]))
            .collect())
    }
}

fn dedup_by_slope(fs: &[AffineFunctional]) -> Vec<AffineFunctional> {
    let mut best: BTreeMap<Point, Rat> = BTreeMap::new();
    for f in fs {
        best.entry(f.slope.clone())
            .and_modify(|c| {
                if f.constant > *c {
                    *c = f.constant.clone();
                }
            })
            .or_insert_with(|| f.constant.clone());
    }
    best.into_iter()
        .map(|(s, c)| AffineFunctional::new(s, c))
        .collect()
}

/// Vertices of the upper hull of `(slope, constant)`; input sorted by slope
/// with distinct slopes.
fn upper_hull_1d(fs: Vec<AffineFunctional>) -> Vec<AffineFunctional> {
    let mut hull: Vec<AffineFunctional> = Vec::with_capacity(fs.len());
    for p in fs {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            let lhs = (&b.constant - &a.constant) * (&p.slope[0] - &a.slope[0]);
            let rhs = (&p.constant - &a.constant) * (&b.slope[0] - &a.slope[0]);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn prune_redundant_lp(mut fs: Vec<AffineFunctional>) -> Vec<AffineFunctional> {
    let mut i = 0;
    while i < fs.len() {
        if fs.len() > 1 && is_redundant(&fs, i) {
            fs.remove(i);
        } else {
            i += 1;
        }
    }
    fs
}

/// Is `(μᵢ, bᵢ)` below a convex combination of the other lifted points?
fn is_redundant(fs: &[AffineFunctional], i: usize) -> bool {
    let target = &fs[i];
    let others: Vec<&AffineFunctional> = fs
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, f)| f)
        .collect();
    let k = others.len();
    let n = target.dim();
    let mut lp = LinearProgram::new(k).all_nonneg();
    for d in 0..n {
        lp.constraint(
            others.iter().map(|f| f.slope[d].clone()).collect(),
            Relation::Eq,
            target.slope[d].clone(),
        );
    }
    lp.constraint(vec![Rat::one(); k], Relation::Eq, Rat::one());
    match lp.maximize(others.iter().map(|f| f.constant.clone()).collect()) {
        LpOutcome::Optimal { value, .. } => value >= target.constant,
        _ => false,
    }
}

/// Errors unless `z` lies in the interior of the convex hull of `t`
/// (full-dimensional hulls only).
pub fn check_hull_interior(t: &[Point], z: &Point) -> Result<()> {
    let n = z.dim();
    for p in t {
        p.ensure_dim(n)?;
    }
    if linalg::affine_rank(t) != Some(n) {
        return Err(Error::DegenerateHull(z.clone()));
    }
    // z = Σ (vᵢ + ε) tᵢ with Σ (vᵢ + ε) = 1, v ≥ 0; maximize ε.
    let k = t.len();
    let mut lp = LinearProgram::new(k + 1).all_nonneg();
    for d in 0..n {
        let mut coef: Vec<Rat> = t.iter().map(|p| p[d].clone()).collect();
        coef.push(t.iter().map(|p| &p[d]).sum());
        lp.constraint(coef, Relation::Eq, z[d].clone());
    }
    let mut ones = vec![Rat::one(); k];
    ones.push(Rat::from_int(k as i64));
    lp.constraint(ones, Relation::Eq, Rat::one());
    let mut obj = vec![Rat::zero(); k];
    obj.push(Rat::one());
    match lp.maximize(obj) {
        LpOutcome::Optimal { value, .. } if value.is_positive() => Ok(()),
        _ => Err(Error::NotInHullInterior(z.clone())),
    }
}

/// True iff `eval` agrees with `λ` on `t ∪ {z}`; for a convex function this
/// certifies agreement on the whole hull of `t`.
pub fn certify_affine_with<E>(
    mut eval: impl FnMut(&Point) -> std::result::Result<Rat, E>,
    t: &[Point],
    z: &Point,
    lambda: &AffineFunctional,
) -> std::result::Result<bool, E>
where
    E: From<Error>,
{
    check_hull_interior(t, z)?;
    for p in t.iter().chain(std::iter::once(z)) {
        if eval(p)? != lambda.eval_unchecked(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn certify_affine_on_hull(
    f: &PolyhedralFunction,
    t: &[Point],
    z: &Point,
    lambda: &AffineFunctional,
) -> Result<bool> {
    z.ensure_dim(f.dim())?;
    lambda.slope.ensure_dim(f.dim())?;
    certify_affine_with(|p| f.eval(p), t, z, lambda)
}

/// The profile `g_m` of the slope decomposition of `f` along `z` over the
/// segment `x₁x₂`, computed symbolically.
///
/// For fixed `t` the inner function of `u` is a max of lines with slopes
/// `μⱼ(z) − m`; its infimum is the best convex combination of lines whose
/// slopes cancel, so `g_m` is a max of affine functions of `t`.
pub fn partial_conjugate(
    f: &PolyhedralFunction,
    x1: &Point,
    x2: &Point,
    z: &Point,
    m: &Rat,
) -> Result<Conjugate> {
    let frame = Frame::new(f, x1, x2, z)?;
    Ok(frame.profile(m))
}

pub fn slope_decomposition(
    f: &PolyhedralFunction,
    x1: &Point,
    x2: &Point,
    z: &Point,
) -> Result<PartialConjugateResult> {
    let frame = Frame::new(f, x1, x2, z)?;
    let slope_set: Vec<Rat> = {
        let mut s: Vec<Rat> = frame.lines.iter().map(|l| l.q.clone()).collect();
        s.sort();
        s.dedup();
        s
    };
    let profiles = slope_set
        .iter()
        .map(|m| (m.clone(), frame.profile(m)))
        .collect();
    Ok(PartialConjugateResult {
        slope_set,
        profiles,
    })
}

/// Checks `f(x₁ + t(x₂−x₁) + u z) = sup_m {g_m(t) + m u}` at every sample.
pub fn verify_slope_decomposition(
    f: &PolyhedralFunction,
    x1: &Point,
    x2: &Point,
    z: &Point,
    samples: &[(Rat, Rat)],
) -> Result<DecompositionCheck> {
    let res = slope_decomposition(f, x1, x2, z)?;
    verify_with_slope_set(f, x1, x2, z, &res.slope_set, samples)
}

/// Like [`verify_slope_decomposition`] but with a caller-chosen slope set.
pub fn verify_with_slope_set(
    f: &PolyhedralFunction,
    x1: &Point,
    x2: &Point,
    z: &Point,
    slopes: &[Rat],
    samples: &[(Rat, Rat)],
) -> Result<DecompositionCheck> {
    if slopes.is_empty() {
        return Err(Error::InvalidArgument("empty slope set".into()));
    }
    let frame = Frame::new(f, x1, x2, z)?;
    let mut profiles = Vec::with_capacity(slopes.len());
    for m in slopes {
        match frame.profile(m) {
            Conjugate::Finite(g) => profiles.push((m.clone(), g)),
            Conjugate::MinusInfinity => return Ok(DecompositionCheck::Unbounded { m: m.clone() }),
        }
    }
    let d = x2.sub(x1);
    for (t, u) in samples {
        let x = x1.along(&d, t).along(z, u);
        let direct = f.eval_unchecked(&x);
        let decomposed = profiles
            .iter()
            .map(|(m, g)| g.eval_unchecked(&Point(vec![t.clone()])) + m * u)
            .max()
            .expect("nonempty");
        if direct != decomposed {
            return Ok(DecompositionCheck::Mismatch {
                t: t.clone(),
                u: u.clone(),
                direct,
                decomposed,
            });
        }
    }
    Ok(DecompositionCheck::Holds)
}

struct FrameLine {
    /// λ(x₁)
    c: Rat,
    /// μ(x₂ − x₁)
    p: Rat,
    /// μ(z)
    q: Rat,
}

struct Frame {
    lines: Vec<FrameLine>,
}

impl Frame {
    fn new(f: &PolyhedralFunction, x1: &Point, x2: &Point, z: &Point) -> Result<Frame> {
        if f.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                expected: "2".into(),
                found: f.dim(),
            });
        }
        x1.ensure_dim(2)?;
        x2.ensure_dim(2)?;
        z.ensure_dim(2)?;
        if x1 == x2 {
            return Err(Error::InvalidArgument("x1 and x2 coincide".into()));
        }
        if z.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let d = x2.sub(x1);
        let lines = f
            .canonicalize()
            .functionals
            .iter()
            .map(|l| FrameLine {
                c: l.eval_unchecked(x1),
                p: l.slope_at(&d),
                q: l.slope_at(z),
            })
            .collect();
        Ok(Frame { lines })
    }

    fn profile(&self, m: &Rat) -> Conjugate {
        let beta: Vec<Rat> = self.lines.iter().map(|l| &l.q - m).collect();
        let mut pieces: Vec<(Rat, Rat)> = Vec::new();
        for (j, lj) in self.lines.iter().enumerate() {
            if beta[j].is_zero() {
                pieces.push((lj.p.clone(), lj.c.clone()));
            }
        }
        for (j, lj) in self.lines.iter().enumerate() {
            if !beta[j].is_negative() {
                continue;
            }
            for (k, lk) in self.lines.iter().enumerate() {
                if !beta[k].is_positive() {
                    continue;
                }
                let span = &beta[k] - &beta[j];
                let wj = &beta[k] / &span;
                let wk = -&beta[j] / &span;
                pieces.push((&wj * &lj.p + &wk * &lk.p, &wj * &lj.c + &wk * &lk.c));
            }
        }
        if pieces.is_empty() {
            return Conjugate::MinusInfinity;
        }
        Conjugate::Finite(
            PolyhedralFunction::univariate(&pieces)
                .expect("nonempty")
                .canonicalize(),
        )
    }
}

/// First point of `[lo, hi]` where two one-variable functions differ.
///
/// Both sides are affine between consecutive breakpoints, so comparing at
/// the endpoints and at every breakpoint inside is exact.
pub fn first_disagreement(
    f: &PolyhedralFunction,
    g: &PolyhedralFunction,
    lo: &Rat,
    hi: &Rat,
) -> Result<Option<Rat>> {
    let mut pts = vec![lo.clone(), hi.clone()];
    for b in f.breakpoints()?.into_iter().chain(g.breakpoints()?) {
        if lo < &b && &b < hi {
            pts.push(b);
        }
    }
    pts.sort();
    pts.dedup();
    for t in pts {
        let x = Point(vec![t.clone()]);
        if f.eval_unchecked(&x) != g.eval_unchecked(&x) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
