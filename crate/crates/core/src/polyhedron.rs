//! Rational polyhedra in halfspace form: membership, faces, vertices and
//! relative interiors.
//!
//! A polyhedron is `{x : λᵢ(x) ≥ 0 for all i}`. An empty constraint list is
//! all of ℚⁿ. Equalities are encoded as opposite pairs of halfspaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rat::{AffineFunctional, Point, Rat};

/// Maximum number of halfspaces accepted by [`RationalPolyhedron::facets`].
pub const FACET_BUDGET: usize = 12;

/// `{x : λ(x) ≥ 0}` with `λ` of nonzero slope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfSpace {
    functional: AffineFunctional,
}

impl HalfSpace {
    pub fn new(functional: AffineFunctional) -> Result<Self> {
        if functional.slope.is_zero() {
            return Err(Error::ZeroSlopeHalfspace);
        }
        Ok(HalfSpace { functional })
    }

    pub fn from_ints(slope: &[i64], constant: i64) -> Self {
        HalfSpace::new(AffineFunctional::from_ints(slope, constant)).expect("nonzero slope")
    }

    pub fn functional(&self) -> &AffineFunctional {
        &self.functional
    }

    pub fn opposite(&self) -> HalfSpace {
        HalfSpace {
            functional: self.functional.negate(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        !self.functional.eval_unchecked(x).is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolyhedron {
    n: usize,
    halfspaces: Vec<HalfSpace>,
}

/// A nonempty face `{x ∈ P : λᵢ(x) = 0 (i ∈ active)}`.
///
/// `active` is the full set of constraints that vanish identically on the
/// face, which identifies the face as a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub active: Vec<usize>,
    pub region: RationalPolyhedron,
    pub dimension: usize,
}

/// Closed axis-aligned box `[lo₁, hi₁] × ⋯ × [loₙ, hiₙ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalBox {
    pub lo: Point,
    pub hi: Point,
}

impl RationalBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        lo.ensure_dim(hi.dim())?;
        if lo.dim() == 0 {
            return Err(Error::InvalidArgument("box of dimension 0".into()));
        }
        if lo.0.iter().zip(&hi.0).any(|(a, b)| a > b) {
            return Err(Error::InvalidArgument(format!(
                "box with lo {lo} above hi {hi}"
            )));
        }
        Ok(RationalBox { lo, hi })
    }

    /// The cube `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: Rat, hi: Rat) -> Result<Self> {
        RationalBox::new(Point(vec![lo; n]), Point(vec![hi; n]))
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.dim() == self.dim()
            && x.0
                .iter()
                .zip(self.lo.0.iter().zip(&self.hi.0))
                .all(|(c, (l, h))| l <= c && c <= h)
    }

    pub fn center(&self) -> Point {
        self.lo.add(&self.hi).scale(&Rat::new(1, 2))
    }

    pub fn to_polyhedron(&self) -> RationalPolyhedron {
        let n = self.dim();
        let mut hs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let e = Point::basis(n, i);
            hs.push(HalfSpace {
                functional: AffineFunctional::new(e.clone(), -&self.lo[i]),
            });
            hs.push(HalfSpace {
                functional: AffineFunctional::new(e.scale(&Rat::from_int(-1)), self.hi[i].clone()),
            });
        }
        RationalPolyhedron { n, halfspaces: hs }
    }

    /// Grid coordinates `lo + k·step` along axis `i`, always ending at `hi`.
    pub fn axis_ticks(&self, i: usize, step: &Rat) -> Vec<Rat> {
        let mut out = vec![self.lo[i].clone()];
        let mut t = &self.lo[i] + step;
        while t < self.hi[i] {
            out.push(t.clone());
            t = &t + step;
        }
        if self.hi[i] > self.lo[i] {
            out.push(self.hi[i].clone());
        }
        out
    }
}

impl RationalPolyhedron {
    pub fn new(n: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("polyhedron of dimension 0".into()));
        }
        for h in &halfspaces {
            if h.functional.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: h.functional.dim(),
                });
            }
            if h.functional.slope.is_zero() {
                return Err(Error::ZeroSlopeHalfspace);
            }
        }
        Ok(RationalPolyhedron { n, halfspaces })
    }

    /// Builds from raw functionals, each read as `λ ≥ 0`.
    pub fn from_functionals(n: usize, fs: Vec<AffineFunctional>) -> Result<Self> {
        let hs = fs
            .into_iter()
            .map(HalfSpace::new)
            .collect::<Result<Vec<_>>>()?;
        RationalPolyhedron::new(n, hs)
    }

    pub fn whole(n: usize) -> Self {
        RationalPolyhedron {
            n,
            halfspaces: Vec::new(),
        }
    }

    /// The empty set, as the contradictory pair `x₁ ≥ 0`, `−x₁ − 1 ≥ 0`.
    pub fn empty(n: usize) -> Self {
        let e = Point::basis(n, 0);
        RationalPolyhedron {
            n,
            halfspaces: vec![
                HalfSpace {
                    functional: AffineFunctional::new(e.clone(), Rat::zero()),
                },
                HalfSpace {
                    functional: AffineFunctional::new(
                        e.scale(&Rat::from_int(-1)),
                        Rat::from_int(-1),
                    ),
                },
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn constraint(&self, i: usize) -> &AffineFunctional {
        &self.halfspaces[i].functional
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty_list(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn push(&mut self, h: HalfSpace) -> Result<()> {
        if h.functional.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: h.functional.dim(),
            });
        }
        self.halfspaces.push(h);
        Ok(())
    }

    pub fn intersect(&self, other: &RationalPolyhedron) -> Result<RationalPolyhedron> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Ok(RationalPolyhedron {
            n: self.n,
            halfspaces: hs,
        })
    }

    /// `P ∩ {λᵢ = 0 : i ∈ idx}`.
    pub fn with_equalities(&self, idx: &[usize]) -> RationalPolyhedron {
        let mut hs = self.halfspaces.clone();
        for &i in idx {
            hs.push(self.halfspaces[i].opposite());
        }
        RationalPolyhedron {
            n: self.n,
            halfspaces: hs,
        }
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        x.ensure_dim(self.n)?;
        Ok(self.halfspaces.iter().all(|h| h.contains(x)))
    }

    fn base_lp(&self, extra_vars: usize) -> LinearProgram {
        let mut lp = LinearProgram::new(self.n + extra_vars);
        for h in &self.halfspaces {
            let mut coef = h.functional.slope.0.clone();
            coef.extend(std::iter::repeat_n(Rat::zero(), extra_vars));
            lp.constraint(coef, Relation::Ge, -&h.functional.constant);
        }
        lp
    }

    /// `sup λ(x)` over the polyhedron.
    pub(crate) fn maximize(&self, lambda: &AffineFunctional) -> LpOutcome {
        match self.base_lp(0).maximize(lambda.slope.0.clone()) {
            LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
                value: value + &lambda.constant,
                point,
            },
            other => other,
        }
    }

    pub fn is_empty(&self) -> bool {
        if self.halfspaces.is_empty() {
            return false;
        }
        self.base_lp(0).feasible_point().is_none()
    }

    pub fn feasible_point(&self) -> Option<Point> {
        if self.halfspaces.is_empty() {
            return Some(Point::zeros(self.n));
        }
        self.base_lp(0).feasible_point().map(Point)
    }

    /// Indices of constraints that vanish on the whole polyhedron, and a
    /// relative interior point. `None` when empty.
    fn equality_analysis(&self) -> Option<(Vec<usize>, Point)> {
        let start = self.feasible_point()?;
        let mut implicit = Vec::new();
        let mut witnesses = vec![start];
        for (i, h) in self.halfspaces.iter().enumerate() {
            if h.functional.eval_unchecked(&witnesses[0]).is_positive() {
                continue;
            }
            let mut lp = self.base_lp(0);
            lp.constraint(
                h.functional.slope.0.clone(),
                Relation::Le,
                Rat::one() - &h.functional.constant,
            );
            match lp.maximize(h.functional.slope.0.clone()) {
                LpOutcome::Optimal { value, point } => {
                    if (value + &h.functional.constant).is_zero() {
                        implicit.push(i);
                    } else {
                        witnesses.push(Point(point));
                    }
                }
                _ => unreachable!("bounded by construction and feasible"),
            }
        }
        let k = Rat::from_int(witnesses.len() as i64);
        let mut centre = Point::zeros(self.n);
        for w in &witnesses {
            centre = centre.add(w);
        }
        Some((implicit, centre.scale(&k.recip())))
    }

    pub fn implicit_equalities(&self) -> Option<Vec<usize>> {
        self.equality_analysis().map(|(eq, _)| eq)
    }

    /// A point in the relative interior, if nonempty.
    pub fn relative_interior_point(&self) -> Option<Point> {
        self.equality_analysis().map(|(_, p)| p)
    }

    /// Dimension of the affine hull; `None` for the empty set.
    pub fn affine_dimension(&self) -> Option<usize> {
        let eq = self.implicit_equalities()?;
        let slopes: Vec<Point> = eq
            .iter()
            .map(|&i| self.constraint(i).slope.clone())
            .collect();
        Some(self.n - linalg::rank(&slopes))
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dimension() == Some(self.n)
    }

    pub fn is_bounded(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        (0..self.n).all(|i| {
            let e = Point::basis(self.n, i);
            let up = AffineFunctional::new(e.clone(), Rat::zero());
            let down = AffineFunctional::new(e.scale(&Rat::from_int(-1)), Rat::zero());
            matches!(self.maximize(&up), LpOutcome::Optimal { .. })
                && matches!(self.maximize(&down), LpOutcome::Optimal { .. })
        })
    }

    /// Smallest box containing a bounded nonempty polyhedron.
    pub fn bounding_box(&self) -> Option<RationalBox> {
        let mut lo = Vec::with_capacity(self.n);
        let mut hi = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let e = Point::basis(self.n, i);
            let up = AffineFunctional::new(e.clone(), Rat::zero());
            let down = AffineFunctional::new(e.scale(&Rat::from_int(-1)), Rat::zero());
            match (self.maximize(&up), self.maximize(&down)) {
                (LpOutcome::Optimal { value: h, .. }, LpOutcome::Optimal { value: l, .. }) => {
                    hi.push(h);
                    lo.push(-l);
                }
                _ => return None,
            }
        }
        RationalBox::new(Point(lo), Point(hi)).ok()
    }

    /// All nonempty faces, including the improper face `P` itself.
    ///
    /// Faces are enumerated over subsets of constraints and identified by
    /// the set of constraints vanishing on them. Sorted by decreasing
    /// dimension, then by that set.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        let m = self.halfspaces.len();
        if m > FACET_BUDGET {
            return Err(Error::FacetBudget {
                count: m,
                limit: FACET_BUDGET,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << m) {
            let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let region = self.with_equalities(&idx);
            let Some(eq) = region.implicit_equalities() else {
                continue;
            };
            let key: Vec<usize> = eq.into_iter().filter(|&i| i < m).collect();
            if !seen.insert(key.clone()) {
                continue;
            }
            let region = self.with_equalities(&key);
            let dimension = region.affine_dimension().expect("nonempty face");
            out.push(Facet {
                active: key,
                region,
                dimension,
            });
        }
        out.sort_by(|a, b| {
            b.dimension
                .cmp(&a.dimension)
                .then_with(|| a.active.cmp(&b.active))
        });
        Ok(out)
    }

    /// Faces other than `P` itself.
    pub fn proper_facets(&self) -> Result<Vec<Facet>> {
        let all = self.facets()?;
        let own = self.implicit_equalities();
        Ok(all
            .into_iter()
            .filter(|f| Some(&f.active) != own.as_ref())
            .collect())
    }

    /// Exact vertex list (n ≤ 3), sorted.
    pub fn vertices(&self) -> Result<Vec<Point>> {
        if self.n > 3 {
            return Err(Error::DimensionTooLarge {
                max: 3,
                found: self.n,
            });
        }
        Ok(self.vertices_unchecked())
    }

    pub(crate) fn vertices_unchecked(&self) -> Vec<Point> {
        let m = self.halfspaces.len();
        let n = self.n;
        let mut out = std::collections::BTreeSet::new();
        if m < n {
            return Vec::new();
        }
        let mut combo: Vec<usize> = (0..n).collect();
        loop {
            let a: Vec<Vec<Rat>> = combo
                .iter()
                .map(|&i| self.constraint(i).slope.0.clone())
                .collect();
            let b: Vec<Rat> = combo
                .iter()
                .map(|&i| -&self.constraint(i).constant)
                .collect();
            if let Some(x) = linalg::solve(&a, &b) {
                let p = Point(x);
                if self.halfspaces.iter().all(|h| h.contains(&p)) {
                    out.insert(p);
                }
            }
            if !next_combination(&mut combo, m) {
                break;
            }
        }
        out.into_iter().collect()
    }

    /// Exactly `n` constraints with linearly independent slopes.
    pub fn is_affine_orthant(&self) -> bool {
        self.halfspaces.len() == self.n && {
            let slopes: Vec<Point> = self
                .halfspaces
                .iter()
                .map(|h| h.functional.slope.clone())
                .collect();
            linalg::rank(&slopes) == self.n
        }
    }

    /// Indices of `n` constraints with independent slopes; their
    /// intersection is an affine orthant containing `P`.
    pub fn orthant_constraints(&self) -> Option<Vec<usize>> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut slopes: Vec<Point> = Vec::new();
        for (i, h) in self.halfspaces.iter().enumerate() {
            slopes.push(h.functional.slope.clone());
            if linalg::rank(&slopes) > chosen.len() {
                chosen.push(i);
            } else {
                slopes.pop();
            }
            if chosen.len() == self.n {
                return Some(chosen);
            }
        }
        None
    }

    /// Membership in the interior relative to the affine hull (n ≤ 3).
    pub fn interior_contains(&self, x: &Point) -> Result<bool> {
        if self.n > 3 {
            return Err(Error::DimensionTooLarge {
                max: 3,
                found: self.n,
            });
        }
        if !self.contains(x)? {
            return Ok(false);
        }
        let Some(eq) = self.implicit_equalities() else {
            return Ok(false);
        };
        Ok(self
            .halfspaces
            .iter()
            .enumerate()
            .filter(|(i, _)| !eq.contains(i))
            .all(|(_, h)| h.functional.eval_unchecked(x).is_positive()))
    }

    /// The one-dimensional interval between optional bounds.
    pub fn interval(lo: Option<&Rat>, hi: Option<&Rat>) -> RationalPolyhedron {
        let mut hs = Vec::new();
        if let Some(a) = lo {
            hs.push(HalfSpace {
                functional: AffineFunctional::new(Point(vec![Rat::one()]), -a),
            });
        }
        if let Some(b) = hi {
            hs.push(HalfSpace {
                functional: AffineFunctional::new(Point(vec![Rat::from_int(-1)]), b.clone()),
            });
        }
        RationalPolyhedron {
            n: 1,
            halfspaces: hs,
        }
    }

    /// The interval `{t : base + t·dir ∈ P}` as `(lower, upper)`; `None`
    /// bounds are infinite. Returns `None` when the line misses `P`.
    pub fn line_interval(&self, base: &Point, dir: &Point) -> Option<(Option<Rat>, Option<Rat>)> {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for h in &self.halfspaces {
            let a = h.functional.slope_at(dir);
            let c = h.functional.eval_unchecked(base);
            if a.is_zero() {
                if c.is_negative() {
                    return None;
                }
                continue;
            }
            let t = -&c / &a;
            if a.is_positive() {
                lo = Some(match lo {
                    Some(l) if l >= t => l,
                    _ => t,
                });
            } else {
                hi = Some(match hi {
                    Some(u) if u <= t => u,
                    _ => t,
                });
            }
        }
        if let (Some(l), Some(u)) = (&lo, &hi) {
            if l > u {
                return None;
            }
        }
        Some((lo, hi))
    }
}

pub(crate) fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < m - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
