//! Reconstruction of convex, integer-slope piecewise-affine functions of one
//! variable from point queries.
//!
//! The basic probe is [`one_sided_slope`]: halve a step until the midpoint
//! of `[x, x ± h]` lies exactly on the chord. For a convex function that
//! equality forces affinity on the whole step, so the chord slope is the
//! exact one-sided derivative at `x`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{FunctionOracle, JensenWitness};
use crate::polyfun::PolyhedralFunction;
use crate::rat::{membership_computation, MembershipComputation, Point, Rat};

/// Default number of halvings per slope probe.
pub const DEFAULT_BUDGET: u32 = 64;

/// Largest denominator used by [`farey_points`].
pub const FAREY_MAX_DENOMINATOR: i64 = 64;

/// At most this many sample points share one denominator.
pub const FAREY_PER_DENOMINATOR: usize = 8;

/// One affine piece `slope·t + const`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub slope: i64,
    #[serde(rename = "const")]
    pub constant: Rat,
}

impl Piece {
    pub fn eval(&self, t: &Rat) -> Rat {
        Rat::from_int(self.slope) * t + &self.constant
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction1D {
    pub interval: (Rat, Rat),
    /// Left to right, slopes strictly increasing.
    pub pieces: Vec<Piece>,
    pub breakpoints: Vec<Rat>,
}

impl Reconstruction1D {
    pub fn to_function(&self) -> PolyhedralFunction {
        PolyhedralFunction::univariate(
            &self
                .pieces
                .iter()
                .map(|p| (Rat::from_int(p.slope), p.constant.clone()))
                .collect::<Vec<_>>(),
        )
        .expect("at least one piece")
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.pieces
            .iter()
            .map(|p| p.eval(t))
            .max()
            .expect("at least one piece")
    }

    /// `(lo, hi)` of piece `i` within the interval.
    pub fn piece_range(&self, i: usize) -> (Rat, Rat) {
        let lo = if i == 0 {
            self.interval.0.clone()
        } else {
            self.breakpoints[i - 1].clone()
        };
        let hi = if i + 1 == self.pieces.len() {
            self.interval.1.clone()
        } else {
            self.breakpoints[i].clone()
        };
        (lo, hi)
    }
}

/// Exact affinity of `f` on `[lo, hi]`: the midpoint value is on the chord.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSpan {
    pub lo: Rat,
    pub hi: Rat,
    pub f_lo: Rat,
    pub f_mid: Rat,
    pub f_hi: Rat,
}

impl AffineSpan {
    pub fn slope(&self) -> Rat {
        (&self.f_hi - &self.f_lo) / (&self.hi - &self.lo)
    }

    pub fn is_consistent(&self) -> bool {
        &self.f_lo + &self.f_hi == &self.f_mid + &self.f_mid
    }
}

/// Where along a detection a rejection was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Site {
    Interval { lo: Rat, hi: Rat },
    AxisLine { axis: usize, base: Point },
    SkeletonLine { index: usize },
    TropicalRay { center: Point, ray: RayTag },
    Node { point: Point },
    Cell { index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayTag {
    Down,
    Left,
    Diag,
}

impl RayTag {
    pub const ALL: [RayTag; 3] = [RayTag::Down, RayTag::Left, RayTag::Diag];

    pub fn direction(self) -> Point {
        match self {
            RayTag::Down => Point::from_ints(&[0, -1]),
            RayTag::Left => Point::from_ints(&[-1, 0]),
            RayTag::Diag => Point::from_ints(&[1, 1]),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RayTag::Down => "down",
            RayTag::Left => "left",
            RayTag::Diag => "diag",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A logged triple violating the Jensen inequality.
    Jensen(JensenWitness),
    /// An exactly affine subinterval whose slope is not an integer.
    NonIntegerSlope { span: AffineSpan, slope: Rat },
    /// A value outside `ℤ + ℤx₁ + ⋯ + ℤxₙ`; `piece` names the offending
    /// piece when the failure came from a reconstructed constant.
    Membership {
        computation: MembershipComputation,
        piece: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub witness: Witness,
    pub site: Site,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub reason: String,
    pub budget: u32,
    pub queries_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetectOutcome<R> {
    /// The reconstruction and every `(point, value)` queried, sorted by point.
    Accept {
        reconstruction: R,
        queries: Vec<(Point, Rat)>,
    },
    Reject(Rejection),
    Exhausted(BudgetReport),
}

impl<R> DetectOutcome<R> {
    pub fn is_accept(&self) -> bool {
        matches!(self, DetectOutcome::Accept { .. })
    }

    pub fn is_reject(&self) -> bool {
        matches!(self, DetectOutcome::Reject(_))
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, DetectOutcome::Exhausted(_))
    }

    pub fn accepted(&self) -> Option<&R> {
        match self {
            DetectOutcome::Accept { reconstruction, .. } => Some(reconstruction),
            _ => None,
        }
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match self {
            DetectOutcome::Reject(r) => Some(r),
            _ => None,
        }
    }

    /// Exit status used by the command line: 0 accept, 1 reject, 2 exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            DetectOutcome::Accept { .. } => 0,
            DetectOutcome::Reject(_) => 1,
            DetectOutcome::Exhausted(_) => 2,
        }
    }

    pub fn with_site(self, site: Site) -> Self {
        match self {
            DetectOutcome::Reject(r) => DetectOutcome::Reject(Rejection { site, ..r }),
            other => other,
        }
    }
}

/// Result of [`one_sided_slope`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeProbe {
    Affine(AffineSpan),
    Violation(JensenWitness),
    Exhausted,
}

impl SlopeProbe {
    pub fn slope(&self) -> Option<Rat> {
        match self {
            SlopeProbe::Affine(s) => Some(s.slope()),
            _ => None,
        }
    }
}

pub(crate) enum Halt {
    Fail(Error),
    Reject(Witness),
    Exhausted(String),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

/// Query log of a single one-variable run.
pub(crate) struct Run<'a> {
    o: &'a FunctionOracle,
    budget: u32,
    log: BTreeMap<Rat, Rat>,
}

impl<'a> Run<'a> {
    fn new(o: &'a FunctionOracle, budget: u32) -> Result<Self> {
        if o.dim() != 1 {
            return Err(Error::UnsupportedDimension {
                expected: "1".into(),
                found: o.dim(),
            });
        }
        Ok(Run {
            o,
            budget,
            log: BTreeMap::new(),
        })
    }

    fn f(&mut self, t: &Rat) -> Result<Rat> {
        if let Some(v) = self.log.get(t) {
            return Ok(v.clone());
        }
        let v = self.o.query_at(t)?;
        self.log.insert(t.clone(), v.clone());
        Ok(v)
    }

    fn queries(&self) -> Vec<(Point, Rat)> {
        self.log
            .iter()
            .map(|(t, v)| (Point(vec![t.clone()]), v.clone()))
            .collect()
    }

    fn probe(&mut self, x: &Rat, sign: i8, h0: &Rat) -> Result<SlopeProbe> {
        let fx = self.f(x)?;
        let mut h = h0.clone();
        for _ in 0..=self.budget {
            let far = if sign > 0 { x + &h } else { x - &h };
            let mid = if sign > 0 {
                x + &h.half()
            } else {
                x - &h.half()
            };
            let f_far = self.f(&far)?;
            let f_mid = self.f(&mid)?;
            let chord2 = &fx + &f_far;
            let mid2 = &f_mid + &f_mid;
            if mid2 == chord2 {
                let (lo, hi, f_lo, f_hi) = if sign > 0 {
                    (x.clone(), far, fx.clone(), f_far)
                } else {
                    (far, x.clone(), f_far, fx.clone())
                };
                return Ok(SlopeProbe::Affine(AffineSpan {
                    lo,
                    hi,
                    f_lo,
                    f_mid,
                    f_hi,
                }));
            }
            if mid2 > chord2 {
                return Ok(SlopeProbe::Violation(JensenWitness {
                    x: Point(vec![x.clone()]),
                    y: Point(vec![far]),
                    t: Rat::new(1, 2),
                    fx: fx.clone(),
                    fy: f_far,
                    f_mix: f_mid,
                }));
            }
            h = h.half();
        }
        Ok(SlopeProbe::Exhausted)
    }

    /// A slope probe that must succeed with an integer slope.
    fn integer_slope(&mut self, x: &Rat, sign: i8, h0: &Rat) -> Result<(i64, AffineSpan), Halt> {
        match self.probe(x, sign, h0)? {
            SlopeProbe::Affine(span) => {
                let s = span.slope();
                if !s.is_integer() {
                    return Err(Halt::Reject(Witness::NonIntegerSlope { span, slope: s }));
                }
                let v = s
                    .to_i64()
                    .ok_or_else(|| Error::SlopeOverflow(s.to_string()))?;
                Ok((v, span))
            }
            SlopeProbe::Violation(w) => Err(Halt::Reject(Witness::Jensen(w))),
            SlopeProbe::Exhausted => Err(Halt::Exhausted(format!(
                "no affine step found at {x} ({}) after {} halvings",
                if sign > 0 { "right" } else { "left" },
                self.budget
            ))),
        }
    }

    /// First consecutive triple of logged points that violates convexity.
    fn jensen_scan(&self) -> Option<JensenWitness> {
        let pts: Vec<(&Rat, &Rat)> = self.log.iter().collect();
        pts.windows(3).find_map(|w| {
            let (a, fa) = w[0];
            let (b, fb) = w[1];
            let (c, fc) = w[2];
            let t = (c - b) / (c - a);
            let wit = JensenWitness {
                x: Point(vec![a.clone()]),
                y: Point(vec![c.clone()]),
                t,
                fx: fa.clone(),
                fy: fc.clone(),
                f_mix: fb.clone(),
            };
            wit.is_violation().then_some(wit)
        })
    }

    /// Pieces of `f` on `[a, b]`, given the affine step at `a` (rightwards,
    /// slope `sa`) and at `b` (leftwards, slope `sb`).
    fn split(&mut self, a: &Rat, sa: i64, b: &Rat, sb: i64) -> Result<Vec<Piece>, Halt> {
        let fa = self.f(a)?;
        let fb = self.f(b)?;
        let piece_a = Piece {
            slope: sa,
            constant: &fa - &(Rat::from_int(sa) * a),
        };
        let piece_b = Piece {
            slope: sb,
            constant: &fb - &(Rat::from_int(sb) * b),
        };
        if sa == sb {
            let mid = (a + b).half();
            let fm = self.f(&mid)?;
            if fm != piece_a.eval(&mid) || piece_a.constant != piece_b.constant {
                return Err(Halt::Exhausted(
                    "equal end slopes but not affine in between".into(),
                ));
            }
            return Ok(vec![piece_a]);
        }
        if sa > sb {
            return Err(Halt::Exhausted("end slopes decrease".into()));
        }
        let x = (&piece_a.constant - &piece_b.constant) / Rat::from_int(sb - sa);
        if &x <= a || &x >= b {
            return Err(Halt::Exhausted(format!(
                "support lines cross at {x} outside ({a}, {b})"
            )));
        }
        let fx = self.f(&x)?;
        if fx == piece_a.eval(&x) {
            for (lo, hi, p) in [(a, &x, &piece_a), (&x, b, &piece_b)] {
                let mid = (lo + hi).half();
                if self.f(&mid)? != p.eval(&mid) {
                    return Err(Halt::Exhausted(format!(
                        "midpoint {mid} off the support line"
                    )));
                }
            }
            return Ok(vec![piece_a, piece_b]);
        }
        if fx < piece_a.eval(&x) {
            return Err(Halt::Exhausted(format!(
                "value at {x} below a support line"
            )));
        }
        let (sl, _) = self.integer_slope(&x, -1, &(&x - a).half())?;
        let (sr, _) = self.integer_slope(&x, 1, &(b - &x).half())?;
        if sl <= sa || sr >= sb || sl > sr {
            return Err(Halt::Exhausted(format!("slopes at {x} out of order")));
        }
        let mut left = self.split(a, sa, &x, sl)?;
        let right = self.split(&x, sr, b, sb)?;
        left.extend(right);
        Ok(left)
    }

    fn reconstruct(&mut self, a: &Rat, b: &Rat) -> Result<Reconstruction1D, Halt> {
        let h0 = (b - a).half();
        let (sa, _) = self.integer_slope(a, 1, &h0)?;
        let (sb, _) = self.integer_slope(b, -1, &h0)?;
        let raw = self.split(a, sa, b, sb)?;
        let mut pieces: Vec<Piece> = Vec::with_capacity(raw.len());
        for p in raw {
            match pieces.last() {
                Some(last) if last.slope == p.slope => {
                    if last.constant != p.constant {
                        return Err(Halt::Exhausted("pieces with equal slope disagree".into()));
                    }
                }
                _ => pieces.push(p),
            }
        }
        let breakpoints: Vec<Rat> = pieces
            .windows(2)
            .map(|w| (&w[0].constant - &w[1].constant) / Rat::from_int(w[1].slope - w[0].slope))
            .collect();
        let in_order = breakpoints.windows(2).all(|w| w[0] < w[1])
            && breakpoints.first().is_none_or(|x| x > a)
            && breakpoints.last().is_none_or(|x| x < b);
        if !in_order {
            return Err(Halt::Exhausted("breakpoints out of order".into()));
        }
        Ok(Reconstruction1D {
            interval: (a.clone(), b.clone()),
            pieces,
            breakpoints,
        })
    }

    /// Wraps a run result: a convexity violation anywhere in the log always
    /// wins, and an accepted reconstruction must match every logged value.
    fn finish<R>(
        &self,
        result: Result<R, Halt>,
        site: &Site,
        check: impl Fn(&R, &Rat) -> Rat,
    ) -> Result<DetectOutcome<R>> {
        if let Some(w) = self.jensen_scan() {
            return Ok(DetectOutcome::Reject(Rejection {
                witness: Witness::Jensen(w),
                site: site.clone(),
            }));
        }
        match result {
            Ok(r) => {
                if let Some((t, _)) = self.log.iter().find(|(t, v)| check(&r, t) != **v) {
                    return Ok(
                        self.exhausted(format!("reconstruction disagrees with the oracle at {t}"))
                    );
                }
                Ok(DetectOutcome::Accept {
                    reconstruction: r,
                    queries: self.queries(),
                })
            }
            Err(Halt::Fail(e)) => Err(e),
            Err(Halt::Reject(witness)) => Ok(DetectOutcome::Reject(Rejection {
                witness,
                site: site.clone(),
            })),
            Err(Halt::Exhausted(reason)) => Ok(self.exhausted(reason)),
        }
    }

    fn exhausted<R>(&self, reason: String) -> DetectOutcome<R> {
        DetectOutcome::Exhausted(BudgetReport {
            reason,
            budget: self.budget,
            queries_used: self.log.len(),
        })
    }
}

fn check_interval(a: &Rat, b: &Rat) -> Result<()> {
    if a < b {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")))
    }
}

/// Exact one-sided derivative of a convex oracle at `x` in direction
/// `sign`, found by halving `h` from `h0` at most `budget` times.
pub fn one_sided_slope(
    o: &FunctionOracle,
    x: &Rat,
    sign: i8,
    h0: &Rat,
    budget: u32,
) -> Result<SlopeProbe> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!(
            "sign must be 1 or -1, got {sign}"
        )));
    }
    if !h0.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "initial step {h0} must be positive"
        )));
    }
    Run::new(o, budget)?.probe(x, sign, h0)
}

/// Reconstructs a convex function with integer slopes on `[a, b]`.
///
/// Accept is sound relative to the promise that the oracle is convex on
/// `[a, b]`: every logged query is reproduced exactly and no logged triple
/// violates convexity.
pub fn reconstruct_transintegral(
    o: &FunctionOracle,
    a: &Rat,
    b: &Rat,
    budget: u32,
) -> Result<DetectOutcome<Reconstruction1D>> {
    check_interval(a, b)?;
    let mut run = Run::new(o, budget)?;
    let result = run.reconstruct(a, b);
    let site = Site::Interval {
        lo: a.clone(),
        hi: b.clone(),
    };
    run.finish(result, &site, |r, t| r.eval(t))
}

/// Up to `count` points of the open interval `(a, b)` in lowest terms,
/// ordered by denominator, then by value.
///
/// Denominators run up to [`FAREY_MAX_DENOMINATOR`]; when more than
/// [`FAREY_PER_DENOMINATOR`] fractions share a denominator an evenly spread
/// subset is taken.
pub fn farey_points(a: &Rat, b: &Rat, count: usize) -> Vec<Rat> {
    let mut out = Vec::new();
    for q in 1..=FAREY_MAX_DENOMINATOR {
        if out.len() >= count {
            break;
        }
        let qr = Rat::from_int(q);
        let lo = (a * &qr).floor() + Rat::one();
        let hi = (b * &qr).ceil() - Rat::one();
        let (Some(lo), Some(hi)) = (lo.to_i64(), hi.to_i64()) else {
            continue;
        };
        let fracs: Vec<Rat> = (lo..=hi)
            .filter(|p| p.gcd(&q) == 1)
            .map(|p| Rat::new(p, q))
            .collect();
        let chosen: Vec<Rat> = if fracs.len() > FAREY_PER_DENOMINATOR {
            let k = FAREY_PER_DENOMINATOR;
            (0..k)
                .map(|i| fracs[i * (fracs.len() - 1) / (k - 1)].clone())
                .collect()
        } else {
            fracs
        };
        for x in chosen {
            if out.len() < count {
                out.push(x);
            }
        }
    }
    out
}

/// A point strictly inside `(lo, hi)` whose denominator is coprime to `s`.
pub(crate) fn coprime_point(lo: &Rat, hi: &Rat, s: &Rat) -> Option<Rat> {
    let s = s.numer().clone();
    for q in 1..=10_000i64 {
        if s.gcd(&q.into()) != 1.into() {
            continue;
        }
        let qr = Rat::from_int(q);
        let p = (lo * &qr).floor() + Rat::one();
        let x = &p / &qr;
        // The reduced denominator of p/q divides q, so stays coprime to s.
        if &x < hi {
            return Some(x);
        }
    }
    None
}

/// Detects an integral polyhedral function: values in `ℤ + ℤx` at sample
/// points, integer slopes, and integer constants.
pub fn detect_integral_values(
    o: &FunctionOracle,
    a: &Rat,
    b: &Rat,
    budget: u32,
    samples: usize,
) -> Result<DetectOutcome<Reconstruction1D>> {
    check_interval(a, b)?;
    let mut run = Run::new(o, budget)?;
    let site = Site::Interval {
        lo: a.clone(),
        hi: b.clone(),
    };
    for x in farey_points(a, b, samples) {
        let v = run.f(&x)?;
        let c = membership_computation(&v, &Point(vec![x]));
        if !c.member {
            let w = Witness::Membership {
                computation: c,
                piece: None,
            };
            return run.finish(Err(Halt::Reject(w)), &site, |r: &Reconstruction1D, t| {
                r.eval(t)
            });
        }
    }
    let mut result = run.reconstruct(a, b);
    if let Ok(r) = &result {
        for (i, p) in r.pieces.iter().enumerate() {
            if p.constant.is_integer() {
                continue;
            }
            let (lo, hi) = r.piece_range(i);
            let Some(x) = coprime_point(&lo, &hi, &Rat::from_bigint(p.constant.denom().clone()))
            else {
                continue;
            };
            let v = run.f(&x)?;
            let c = membership_computation(&v, &Point(vec![x]));
            if !c.member {
                result = Err(Halt::Reject(Witness::Membership {
                    computation: c,
                    piece: Some(i),
                }));
                break;
            }
        }
    }
    run.finish(result, &site, |r, t| r.eval(t))
}

/// Does `r` agree with `g` on the reconstruction's interval?
pub fn agrees_with(r: &Reconstruction1D, g: &PolyhedralFunction) -> Result<bool> {
    Ok(
        crate::polyfun::first_disagreement(&r.to_function(), g, &r.interval.0, &r.interval.1)?
            .is_none(),
    )
}
