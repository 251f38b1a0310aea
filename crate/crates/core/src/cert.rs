//! JSON certificates for detector outcomes, and their replay.
//!
//! A certificate names its oracle, the parameters used (defaults included),
//! the promise relative to which an Accept is sound, the reconstruction,
//! and every logged query. Replaying the queries against the oracle and
//! against the reconstruction needs nothing else.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::detect1d::{
    BudgetReport, DetectOutcome, Piece, RayTag, Reconstruction1D, Rejection, DEFAULT_BUDGET,
};
use crate::detectnd::{
    default_ray_length, default_step, Cell, GridSpec, NdReconstruction, SkeletonReconstruction,
};
use crate::error::{Error, Result};
use crate::oracle::FunctionOracle;
use crate::polyfun::{Extent, LineParam, PolyhedralFunction};
use crate::polyhedron::RationalPolyhedron;
use crate::rat::{Point, Rat};
use crate::tropical::TropicalReconstruction;

pub const PROMISE_INTERVAL: &str = "convex-on-interval";
pub const PROMISE_REGION: &str = "convex-on-region";
pub const PROMISE_TROPICAL: &str =
    "convex-on-box; integer slopes checked only on rays from the listed centers";

/// Default sampling resolution for convexity checks.
pub fn default_resolution() -> Rat {
    Rat::new(1, 8)
}

/// Default Jensen mixing parameters.
pub fn default_t_set() -> Vec<Rat> {
    vec![Rat::new(1, 4), Rat::new(1, 2), Rat::new(3, 4)]
}

/// How to rebuild the oracle a certificate was produced from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OracleSpec {
    Builtin {
        name: String,
    },
    Function {
        function: PolyhedralFunction,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<RationalPolyhedron>,
    },
}

/// A function file may carry a `"domain"` polyhedron next to `"n"` and
/// `"functionals"`.
#[derive(Deserialize)]
struct FunctionFile {
    #[serde(flatten)]
    function: PolyhedralFunction,
    #[serde(default)]
    domain: Option<RationalPolyhedron>,
}

impl OracleSpec {
    /// `builtin:NAME` or `file:PATH` (a function JSON file).
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("builtin:") {
            FunctionOracle::builtin(name)?;
            Ok(OracleSpec::Builtin {
                name: name.to_string(),
            })
        } else if let Some(path) = s.strip_prefix("file:") {
            let text = read_file(Path::new(path))?;
            let f: FunctionFile = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("oracle file {path}: {e}")))?;
            Ok(OracleSpec::Function {
                function: f.function,
                domain: f.domain,
            })
        } else {
            Err(Error::Parse(format!(
                "oracle {s:?}: expected builtin:NAME or file:PATH"
            )))
        }
    }

    pub fn build(&self) -> Result<FunctionOracle> {
        match self {
            OracleSpec::Builtin { name } => FunctionOracle::builtin(name),
            OracleSpec::Function {
                function,
                domain: Some(d),
            } => FunctionOracle::from_polyfun(function, d.clone()),
            OracleSpec::Function {
                function,
                domain: None,
            } => Ok(FunctionOracle::from_polyfun_everywhere(function)),
        }
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Parameters in effect for a run; every field is always written out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub budget: u32,
    pub step: Rat,
    pub resolution: Rat,
    pub ray_length: Rat,
    pub t_set: Vec<Rat>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            budget: DEFAULT_BUDGET,
            step: default_step(),
            resolution: default_resolution(),
            ray_length: default_ray_length(),
            t_set: default_t_set(),
        }
    }
}

/// A line, ray or segment: `base + t·direction` for `from ≤ t ≤ to`, either
/// bound optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSpec {
    pub base: Point,
    pub direction: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<Rat>,
}

impl LineSpec {
    pub fn to_line(&self) -> Result<LineParam> {
        let extent = match (&self.from, &self.to) {
            (None, None) => Extent::Line,
            (Some(a), None) => Extent::From(a.clone()),
            (None, Some(b)) => Extent::UpTo(b.clone()),
            (Some(a), Some(b)) => Extent::Segment(a.clone(), b.clone()),
        };
        LineParam::new(self.base.clone(), self.direction.clone(), extent)
    }

    pub fn from_line(l: &LineParam) -> Self {
        let (from, to) = match &l.extent {
            Extent::Line => (None, None),
            Extent::From(a) => (Some(a.clone()), None),
            Extent::UpTo(b) => (None, Some(b.clone())),
            Extent::Segment(a, b) => (Some(a.clone()), Some(b.clone())),
        };
        LineSpec {
            base: l.base.clone(),
            direction: l.direction.clone(),
            from,
            to,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayCert {
    pub center: Point,
    pub ray: RayTag,
    pub interval: (Rat, Rat),
    pub pieces: Vec<Piece>,
    pub breakpoints: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCert {
    pub region: RationalPolyhedron,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonLineCert {
    pub line: LineSpec,
    pub interval: (Rat, Rat),
    pub pieces: Vec<Piece>,
    pub breakpoints: Vec<Rat>,
}

/// The reconstruction part of an Accept certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Interval {
        interval: (Rat, Rat),
        pieces: Vec<Piece>,
        breakpoints: Vec<Rat>,
        /// Whether integral values were also checked.
        integral: bool,
        queries: Vec<(Rat, Rat)>,
    },
    Grid {
        function: PolyhedralFunction,
        cells: Vec<Cell>,
        grid: GridSpec,
        final_step: Rat,
        integral: bool,
        queries: Vec<(Point, Rat)>,
    },
    Skeleton {
        polyhedron: RationalPolyhedron,
        function: PolyhedralFunction,
        lines: Vec<SkeletonLineCert>,
        cells: Vec<Cell>,
        grid: GridSpec,
        queries: Vec<(Point, Rat)>,
    },
    Tropical {
        function: PolyhedralFunction,
        centers: Vec<Point>,
        designated_center: Point,
        rays: Vec<RayCert>,
        ray_length: Rat,
        components: Vec<ComponentCert>,
        grid: GridSpec,
        queries: Vec<(Point, Rat)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub oracle: OracleSpec,
    pub params: Params,
    pub promise: String,
    #[serde(flatten)]
    pub body: Body,
}

impl Certificate {
    pub fn interval(
        oracle: OracleSpec,
        params: Params,
        r: &Reconstruction1D,
        queries: &[(Point, Rat)],
        integral: bool,
    ) -> Self {
        Certificate {
            oracle,
            params,
            promise: PROMISE_INTERVAL.into(),
            body: Body::Interval {
                interval: r.interval.clone(),
                pieces: r.pieces.clone(),
                breakpoints: r.breakpoints.clone(),
                integral,
                queries: queries
                    .iter()
                    .map(|(x, v)| (x[0].clone(), v.clone()))
                    .collect(),
            },
        }
    }

    pub fn grid(
        oracle: OracleSpec,
        params: Params,
        r: &NdReconstruction,
        queries: &[(Point, Rat)],
        integral: bool,
    ) -> Self {
        Certificate {
            oracle,
            params,
            promise: PROMISE_REGION.into(),
            body: Body::Grid {
                function: r.function.clone(),
                cells: r.cells.clone(),
                grid: r.grid.clone(),
                final_step: r.final_step.clone(),
                integral,
                queries: queries.to_vec(),
            },
        }
    }

    pub fn skeleton(
        oracle: OracleSpec,
        params: Params,
        p: &RationalPolyhedron,
        r: &SkeletonReconstruction,
        queries: &[(Point, Rat)],
    ) -> Self {
        let lines = r
            .skeleton
            .iter()
            .zip(&r.lines)
            .map(|(l, rec)| SkeletonLineCert {
                line: LineSpec::from_line(l),
                interval: rec.interval.clone(),
                pieces: rec.pieces.clone(),
                breakpoints: rec.breakpoints.clone(),
            })
            .collect();
        Certificate {
            oracle,
            params,
            promise: PROMISE_REGION.into(),
            body: Body::Skeleton {
                polyhedron: p.clone(),
                function: r.function.clone(),
                lines,
                cells: r.region.cells.clone(),
                grid: r.region.grid.clone(),
                queries: queries.to_vec(),
            },
        }
    }

    pub fn tropical(
        oracle: OracleSpec,
        params: Params,
        centers: &[Point],
        r: &TropicalReconstruction,
        queries: &[(Point, Rat)],
    ) -> Self {
        Certificate {
            oracle,
            params,
            promise: PROMISE_TROPICAL.into(),
            body: Body::Tropical {
                function: r.function.clone(),
                centers: centers.to_vec(),
                designated_center: r.designated_center.clone(),
                rays: r
                    .rays
                    .iter()
                    .map(|x| RayCert {
                        center: x.center.clone(),
                        ray: x.tag,
                        interval: x.reconstruction.interval.clone(),
                        pieces: x.reconstruction.pieces.clone(),
                        breakpoints: x.reconstruction.breakpoints.clone(),
                    })
                    .collect(),
                ray_length: r.ray_length.clone(),
                components: r
                    .components
                    .iter()
                    .map(|c| ComponentCert {
                        region: c.region.clone(),
                        cells: c.cells.clone(),
                    })
                    .collect(),
                grid: r.grid.clone(),
                queries: queries.to_vec(),
            },
        }
    }

    /// Logged queries in ambient coordinates.
    pub fn queries(&self) -> Vec<(Point, Rat)> {
        match &self.body {
            Body::Interval { queries, .. } => queries
                .iter()
                .map(|(t, v)| (Point(vec![t.clone()]), v.clone()))
                .collect(),
            Body::Grid { queries, .. }
            | Body::Skeleton { queries, .. }
            | Body::Tropical { queries, .. } => queries.clone(),
        }
    }

    /// Value of the reconstruction at a logged point, where it claims one.
    fn model_value(&self, x: &Point) -> Option<Rat> {
        match &self.body {
            Body::Interval { pieces, .. } => pieces.iter().map(|p| p.eval(&x[0])).max(),
            Body::Grid { function, .. } | Body::Skeleton { function, .. } => {
                Some(function.eval_unchecked(x))
            }
            Body::Tropical { function, grid, .. } => {
                grid.bx.contains(x).then(|| function.eval_unchecked(x))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = to_sorted_value(self);
        v["outcome"] = Value::String("accept".into());
        v
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))
    }
}

/// One logged query whose value is not reproduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub point: Point,
    pub logged: Rat,
    /// `"oracle"` or `"reconstruction"`.
    pub against: String,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub queries: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Replays every logged query against `o` and against the reconstruction.
pub fn verify(cert: &Certificate, o: &FunctionOracle) -> Result<VerifyReport> {
    let queries = cert.queries();
    let mut mismatches = Vec::new();
    for (x, logged) in &queries {
        let value = o.query(x)?;
        if value != *logged {
            mismatches.push(Mismatch {
                point: x.clone(),
                logged: logged.clone(),
                against: "oracle".into(),
                value,
            });
        }
        if let Some(value) = cert.model_value(x) {
            if value != *logged {
                mismatches.push(Mismatch {
                    point: x.clone(),
                    logged: logged.clone(),
                    against: "reconstruction".into(),
                    value,
                });
            }
        }
    }
    Ok(VerifyReport {
        queries: queries.len(),
        mismatches,
    })
}

/// Serializes through `serde_json::Value`, whose maps keep keys sorted.
pub fn to_sorted_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn rejection_json(oracle: &OracleSpec, params: &Params, r: &Rejection) -> Value {
    let mut v = to_sorted_value(r);
    v["outcome"] = Value::String("reject".into());
    v["oracle"] = to_sorted_value(oracle);
    v["params"] = to_sorted_value(params);
    v
}

pub fn exhausted_json(oracle: &OracleSpec, params: &Params, r: &BudgetReport) -> Value {
    let mut v = to_sorted_value(r);
    v["outcome"] = Value::String("exhausted".into());
    v["oracle"] = to_sorted_value(oracle);
    v["params"] = to_sorted_value(params);
    v
}

/// JSON for any outcome; `accept` builds the certificate.
pub fn outcome_json<R>(
    out: &DetectOutcome<R>,
    oracle: &OracleSpec,
    params: &Params,
    accept: impl FnOnce(&R, &[(Point, Rat)]) -> Certificate,
) -> Value {
    match out {
        DetectOutcome::Accept {
            reconstruction,
            queries,
        } => accept(reconstruction, queries).to_json(),
        DetectOutcome::Reject(r) => rejection_json(oracle, params, r),
        DetectOutcome::Exhausted(r) => exhausted_json(oracle, params, r),
    }
}
