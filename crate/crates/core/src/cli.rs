//! The `polymax` command line.
//!
//! Results go to stdout as JSON with sorted keys (scalars as bare
//! rationals); `--out` also writes them to a file. Exit codes: 0 success or
//! accept, 1 reject (or a failed check), 2 budget exhausted, 3 usage or
//! input error.

use std::cmp::Ordering;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cert::{
    self, default_resolution, outcome_json, to_pretty, to_sorted_value, Certificate, LineSpec,
    OracleSpec, Params,
};
use crate::detect1d::{detect_integral_values, reconstruct_transintegral, DEFAULT_BUDGET};
use crate::detectnd::{
    default_ray_length, default_step, detect_on_skeleton, reconstruct_box, slope_bound, GridSpec,
    SkeletonConfig,
};
use crate::error::{Error, Result};
use crate::oracle::jensen_check;
use crate::polyfun::{LineParam, PolyhedralFunction};
use crate::polyhedron::{RationalBox, RationalPolyhedron};
use crate::rat::{IntegralityClass, Point, Rat};
use crate::tropical::{detect_tropical, restrict_to_tropical_line, TropicalConfig};

/// Exit status and files written by one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub artifacts: Vec<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "polymax",
    version,
    about = "Exact convex piecewise-linear functions with integer slopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutArg {
    /// Also write the result to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct DetectArgs {
    /// builtin:NAME or file:PATH
    #[arg(long)]
    oracle: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u32,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function at a point.
    Eval {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
    },
    /// Canonical form of a function.
    Canon {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tropical sum max(f, g) of two functions (`-f F -f G`).
    Tropadd {
        #[arg(short = 'f', long, num_args = 1, required = true)]
        function: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tropical product f + g of two functions (`-f F -f G`).
    Tropmul {
        #[arg(short = 'f', long, num_args = 1, required = true)]
        function: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Restriction to the line base + t·direction.
    Restrict {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Directional derivative f'(x, z).
    Dirderiv {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
    /// Domains of affinity, optionally intersected with a polyhedron.
    Domains {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(short = 'P', long)]
        polyhedron: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Nonempty faces of a polyhedron.
    Facets {
        #[arg(short = 'P', long)]
        polyhedron: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Vertices of a polyhedron.
    Vertices {
        #[arg(short = 'P', long)]
        polyhedron: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Jensen inequality on pairs of axis-grid points at dyadic spacings.
    Jensen {
        #[arg(long)]
        oracle: String,
        #[arg(long, num_args = 2, allow_hyphen_values = true, conflicts_with = "bx")]
        interval: Option<Vec<String>>,
        #[arg(long = "box", id = "bx", allow_hyphen_values = true)]
        bx: Option<String>,
        #[arg(long)]
        resolution: Option<String>,
        /// Comma-separated mixing parameters in [0, 1].
        #[arg(long)]
        t_set: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Reconstruct a convex integer-slope function of one variable.
    Detect1d {
        #[command(flatten)]
        common: DetectArgs,
        #[arg(long, num_args = 2, allow_hyphen_values = true, required = true)]
        interval: Vec<String>,
    },
    /// Like detect1d, also checking values lie in Z + Zx.
    DetectIntegral {
        #[command(flatten)]
        common: DetectArgs,
        #[arg(long, num_args = 2, allow_hyphen_values = true, required = true)]
        interval: Vec<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Reconstruct on a box in 2 or 3 variables from grid lines.
    Detectnd {
        #[command(flatten)]
        common: DetectArgs,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        #[arg(long)]
        step: Option<String>,
        /// Also require integer constants.
        #[arg(long)]
        integral: bool,
    },
    /// Detect from restrictions to the lines of a skeleton of a polyhedron.
    Skeleton {
        #[command(flatten)]
        common: DetectArgs,
        #[arg(short = 'P', long)]
        polyhedron: PathBuf,
        /// JSON list of {"base", "direction", "from"?, "to"?}.
        #[arg(long)]
        lines: PathBuf,
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        ray_length: Option<String>,
    },
    /// Restrictions of a 2-variable function to the rays of a tropical line.
    Tropline {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Detect from restrictions to translates of the tropical line.
    DetectTropical {
        #[command(flatten)]
        common: DetectArgs,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        /// Centers as "x,y;x,y;…".
        #[arg(long, allow_hyphen_values = true)]
        centers: String,
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        ray_length: Option<String>,
    },
    /// Interval of slopes along each orthant direction.
    SlopeBound {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(short = 'P', long)]
        polyhedron: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Replay a certificate's queries against its oracle.
    VerifyCert {
        cert: PathBuf,
        /// Replay against this oracle instead of the recorded one.
        #[arg(long)]
        oracle: Option<String>,
    },
    /// TSV samples of a one-variable function; segments JSON via --out.
    Plot1d {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(long, num_args = 2, allow_hyphen_values = true, required = true)]
        interval: Vec<String>,
        #[arg(long)]
        resolution: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Cell polygons of a 2-variable function on a box.
    Plot2d {
        #[arg(short = 'f', long)]
        function: PathBuf,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Runs the command line, printing to stdout and diagnostics to stderr.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(argv, &mut lock)
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return CommandResult {
                code,
                artifacts: vec![],
            };
        }
    };
    let mut ctx = Ctx {
        out,
        artifacts: vec![],
    };
    let code = match execute(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    };
    CommandResult {
        code,
        artifacts: ctx.artifacts,
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    artifacts: Vec<PathBuf>,
}

impl Ctx<'_> {
    fn text(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(io_err)
    }

    fn emit(&mut self, v: &Value, out: &OutArg) -> Result<()> {
        let text = to_pretty(v);
        self.text(&text)?;
        if let Some(p) = &out.out {
            self.write_file(p, &format!("{text}\n"))?;
        }
        Ok(())
    }

    fn write_file(&mut self, p: &Path, text: &str) -> Result<()> {
        std::fs::write(p, text).map_err(io_err)?;
        self.artifacts.push(p.to_path_buf());
        Ok(())
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o: {e}"))
}

fn field<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{name}: {m}")),
        e => Error::Parse(format!("{name}: {e}")),
    })
}

fn parse_rat(name: &str, s: &str) -> Result<Rat> {
    field(name, s.parse())
}

fn parse_point(name: &str, s: &str) -> Result<Point> {
    field(name, s.parse())
}

fn opt_rat(name: &str, s: &Option<String>, default: Rat) -> Result<Rat> {
    s.as_deref().map_or(Ok(default), |s| parse_rat(name, s))
}

fn parse_interval(v: &[String]) -> Result<(Rat, Rat)> {
    let a = parse_rat("--interval", &v[0])?;
    let b = parse_rat("--interval", &v[1])?;
    if a >= b {
        return Err(Error::Parse(format!("--interval: need a < b, got {a} {b}")));
    }
    Ok((a, b))
}

/// `"x0 x1 y0 y1 …"`: lower and upper bound per coordinate.
fn parse_box(s: &str) -> Result<RationalBox> {
    let vals: Vec<Rat> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_rat("--box", t))
        .collect::<Result<_>>()?;
    if vals.is_empty() || !vals.len().is_multiple_of(2) {
        return Err(Error::Parse(format!(
            "--box: expected lo hi per coordinate, got {} numbers",
            vals.len()
        )));
    }
    let lo = Point(vals.iter().step_by(2).cloned().collect());
    let hi = Point(vals.iter().skip(1).step_by(2).cloned().collect());
    field("--box", RationalBox::new(lo, hi))
}

fn parse_centers(s: &str) -> Result<Vec<Point>> {
    s.split(|c: char| c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let p = parse_point("--centers", t)?;
            field("--centers", p.ensure_dim(2).map(|_| p))
        })
        .collect()
}

fn parse_t_set(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(|t| parse_rat("--t-set", t)).collect()
}

fn read_json<T: serde::de::DeserializeOwned>(flag: &str, p: &Path) -> Result<T> {
    let text = field(flag, cert::read_file(p))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{flag} {}: {e}", p.display())))
}

fn read_function(p: &Path) -> Result<PolyhedralFunction> {
    read_json("--function", p)
}

fn read_polyhedron(p: &Path) -> Result<RationalPolyhedron> {
    read_json("--polyhedron", p)
}

fn parse_oracle(s: &str) -> Result<OracleSpec> {
    field("--oracle", OracleSpec::parse(s))
}

fn pair(flag: &str, fs: &[PathBuf]) -> Result<(PolyhedralFunction, PolyhedralFunction)> {
    if fs.len() != 2 {
        return Err(Error::Parse(format!(
            "{flag}: expected two functions, got {}",
            fs.len()
        )));
    }
    Ok((read_function(&fs[0])?, read_function(&fs[1])?))
}

fn value<T: Serialize>(x: &T) -> Value {
    to_sorted_value(x)
}

fn execute(cmd: Command, ctx: &mut Ctx) -> Result<i32> {
    match cmd {
        Command::Eval { function, x } => {
            let f = read_function(&function)?;
            let x = parse_point("-x", &x)?;
            ctx.text(&field("-x", f.eval(&x))?.to_string())?;
            Ok(0)
        }
        Command::Canon { function, out } => {
            let f = read_function(&function)?;
            ctx.emit(&value(&f.canonicalize()), &out)?;
            Ok(0)
        }
        Command::Tropadd { function, out } => {
            let (f, g) = pair("--function", &function)?;
            ctx.emit(&value(&f.trop_add(&g)?), &out)?;
            Ok(0)
        }
        Command::Tropmul { function, out } => {
            let (f, g) = pair("--function", &function)?;
            ctx.emit(&value(&f.trop_mul(&g)?), &out)?;
            Ok(0)
        }
        Command::Restrict {
            function,
            base,
            direction,
            out,
        } => {
            let f = read_function(&function)?;
            let line = LineParam::full(
                parse_point("--base", &base)?,
                parse_point("--direction", &direction)?,
            )?;
            let r = f.restrict(&line)?;
            ctx.emit(
                &json!({"function": value(&r.function), "class": value(&r.class)}),
                &out,
            )?;
            Ok(0)
        }
        Command::Dirderiv {
            function,
            x,
            direction,
        } => {
            let f = read_function(&function)?;
            let d = f.dir_deriv(
                &parse_point("-x", &x)?,
                &parse_point("--direction", &direction)?,
            )?;
            ctx.text(&d.to_string())?;
            Ok(0)
        }
        Command::Domains {
            function,
            polyhedron,
            out,
        } => {
            let f = read_function(&function)?;
            let p = polyhedron.as_deref().map(read_polyhedron).transpose()?;
            let mut items = Vec::new();
            for d in f.domains() {
                let region = match &p {
                    Some(p) => d.region.intersect(p)?,
                    None => d.region,
                };
                items.push(json!({
                    "functional": value(&d.functional),
                    "region": value(&region),
                    "dimension": region.affine_dimension(),
                }));
            }
            ctx.emit(&Value::Array(items), &out)?;
            Ok(0)
        }
        Command::Facets { polyhedron, out } => {
            let p = read_polyhedron(&polyhedron)?;
            let items: Vec<Value> = p
                .facets()?
                .into_iter()
                .map(|f| {
                    json!({
                        "active": f.active,
                        "dimension": f.dimension,
                        "region": value(&f.region),
                    })
                })
                .collect();
            ctx.emit(&Value::Array(items), &out)?;
            Ok(0)
        }
        Command::Vertices { polyhedron, out } => {
            let p = read_polyhedron(&polyhedron)?;
            ctx.emit(&value(&p.vertices()?), &out)?;
            Ok(0)
        }
        Command::Jensen {
            oracle,
            interval,
            bx,
            resolution,
            t_set,
            out,
        } => {
            let spec = parse_oracle(&oracle)?;
            let o = spec.build()?;
            let bx = match (interval, bx) {
                (Some(v), _) => {
                    let (a, b) = parse_interval(&v)?;
                    RationalBox::new(Point(vec![a]), Point(vec![b]))?
                }
                (None, Some(s)) => parse_box(&s)?,
                (None, None) => {
                    return Err(Error::Parse("jensen: give --interval or --box".into()))
                }
            };
            let resolution = opt_rat("--resolution", &resolution, default_resolution())?;
            let ts = match &t_set {
                Some(s) => parse_t_set(s)?,
                None => cert::default_t_set(),
            };
            let pairs = dyadic_pairs(&bx, &resolution)?;
            let report = jensen_check(&o, &pairs, &ts)?;
            let mut v = value(&report);
            v["oracle"] = value(&spec);
            v["params"] = value(&Params {
                resolution,
                t_set: ts,
                ..Params::default()
            });
            ctx.emit(&v, &out)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Detect1d { common, interval } => {
            let (a, b) = parse_interval(&interval)?;
            let spec = parse_oracle(&common.oracle)?;
            let o = spec.build()?;
            let params = Params {
                budget: common.budget,
                ..Params::default()
            };
            let outcome = reconstruct_transintegral(&o, &a, &b, common.budget)?;
            let v = outcome_json(&outcome, &spec, &params, |r, q| {
                Certificate::interval(spec.clone(), params.clone(), r, q, false)
            });
            ctx.emit(&v, &common.out)?;
            Ok(outcome.exit_code())
        }
        Command::DetectIntegral {
            common,
            interval,
            samples,
        } => {
            let (a, b) = parse_interval(&interval)?;
            let spec = parse_oracle(&common.oracle)?;
            let o = spec.build()?;
            let params = Params {
                budget: common.budget,
                ..Params::default()
            };
            let outcome = detect_integral_values(&o, &a, &b, common.budget, samples)?;
            let v = outcome_json(&outcome, &spec, &params, |r, q| {
                Certificate::interval(spec.clone(), params.clone(), r, q, true)
            });
            ctx.emit(&v, &common.out)?;
            Ok(outcome.exit_code())
        }
        Command::Detectnd {
            common,
            bx,
            step,
            integral,
        } => {
            let spec = parse_oracle(&common.oracle)?;
            let o = spec.build()?;
            let params = Params {
                budget: common.budget,
                step: opt_rat("--step", &step, default_step())?,
                ..Params::default()
            };
            let grid = field(
                "--step",
                GridSpec::new(parse_box(&bx)?, params.step.clone()),
            )?;
            let mode = if integral {
                IntegralityClass::Integral
            } else {
                IntegralityClass::TransIntegral
            };
            let outcome = reconstruct_box(&o, &grid, common.budget, mode)?;
            let v = outcome_json(&outcome, &spec, &params, |r, q| {
                Certificate::grid(spec.clone(), params.clone(), r, q, integral)
            });
            ctx.emit(&v, &common.out)?;
            Ok(outcome.exit_code())
        }
        Command::Skeleton {
            common,
            polyhedron,
            lines,
            step,
            ray_length,
        } => {
            let spec = parse_oracle(&common.oracle)?;
            let o = spec.build()?;
            let p = read_polyhedron(&polyhedron)?;
            let specs: Vec<LineSpec> = read_json("--lines", &lines)?;
            let lines: Vec<LineParam> = specs
                .iter()
                .map(|l| field("--lines", l.to_line()))
                .collect::<Result<_>>()?;
            let params = Params {
                budget: common.budget,
                step: opt_rat("--step", &step, default_step())?,
                ray_length: opt_rat("--ray-length", &ray_length, default_ray_length())?,
                ..Params::default()
            };
            let cfg = SkeletonConfig {
                budget: params.budget,
                step: params.step.clone(),
                ray_length: params.ray_length.clone(),
            };
            let outcome = detect_on_skeleton(&o, &p, &lines, &cfg)?;
            let v = outcome_json(&outcome, &spec, &params, |r, q| {
                Certificate::skeleton(spec.clone(), params.clone(), &p, r, q)
            });
            ctx.emit(&v, &common.out)?;
            Ok(outcome.exit_code())
        }
        Command::Tropline {
            function,
            center,
            out,
        } => {
            let f = read_function(&function)?;
            let c = parse_point("--center", &center)?;
            let items: Vec<Value> = restrict_to_tropical_line(&f, &c)?
                .into_iter()
                .map(|(tag, g)| {
                    json!({
                        "ray": tag.as_str(),
                        "direction": value(&tag.direction()),
                        "function": value(&g),
                        "class": value(&g.integrality()),
                    })
                })
                .collect();
            ctx.emit(&json!({"center": value(&c), "rays": items}), &out)?;
            Ok(0)
        }
        Command::DetectTropical {
            common,
            bx,
            centers,
            step,
            ray_length,
        } => {
            let spec = parse_oracle(&common.oracle)?;
            let o = spec.build()?;
            let centers = parse_centers(&centers)?;
            let params = Params {
                budget: common.budget,
                step: opt_rat("--step", &step, default_step())?,
                ray_length: opt_rat("--ray-length", &ray_length, default_ray_length())?,
                ..Params::default()
            };
            let grid = field(
                "--step",
                GridSpec::new(parse_box(&bx)?, params.step.clone()),
            )?;
            let cfg = TropicalConfig {
                budget: params.budget,
                ray_length: params.ray_length.clone(),
            };
            let outcome = detect_tropical(&o, &grid, &centers, &cfg)?;
            let v = outcome_json(&outcome, &spec, &params, |r, q| {
                Certificate::tropical(spec.clone(), params.clone(), &centers, r, q)
            });
            ctx.emit(&v, &common.out)?;
            Ok(outcome.exit_code())
        }
        Command::SlopeBound {
            function,
            polyhedron,
            out,
        } => {
            let f = read_function(&function)?;
            let p = read_polyhedron(&polyhedron)?;
            ctx.emit(&value(&slope_bound(&f, &p)?), &out)?;
            Ok(0)
        }
        Command::VerifyCert { cert: path, oracle } => {
            let text = cert::read_file(&path)?;
            let c = Certificate::from_json(&text)?;
            let o = match oracle {
                Some(s) => parse_oracle(&s)?.build()?,
                None => c.oracle.build()?,
            };
            let report = cert::verify(&c, &o)?;
            let mut v = value(&report);
            v["ok"] = Value::Bool(report.ok());
            ctx.text(&to_pretty(&v))?;
            Ok(if report.ok() { 0 } else { 1 })
        }
        Command::Plot1d {
            function,
            interval,
            resolution,
            out,
        } => {
            let f = read_function(&function)?;
            if f.dim() != 1 {
                return Err(Error::Parse(format!(
                    "--function: plot1d needs one variable, got {}",
                    f.dim()
                )));
            }
            let (a, b) = parse_interval(&interval)?;
            let res = opt_rat("--resolution", &resolution, default_resolution())?;
            if !res.is_positive() {
                return Err(Error::Parse("--resolution: must be positive".into()));
            }
            let mut t = a.clone();
            let mut rows = String::from("t\tvalue\n");
            while t <= b {
                let v = f.eval_unchecked(&Point(vec![t.clone()]));
                rows.push_str(&format!("{t}\t{v}\n"));
                t = &t + &res;
            }
            write!(ctx.out, "{rows}").map_err(io_err)?;
            if let Some(p) = &out.out {
                let segs = segments_1d(&f, &a, &b)?;
                ctx.write_file(p, &format!("{}\n", to_pretty(&segs)))?;
            }
            Ok(0)
        }
        Command::Plot2d { function, bx, out } => {
            let f = read_function(&function)?;
            let bx = parse_box(&bx)?;
            if f.dim() != 2 || bx.dim() != 2 {
                return Err(Error::Parse(
                    "--function/--box: plot2d needs two variables".into(),
                ));
            }
            ctx.emit(&cells_2d(&f, &bx)?, &out)?;
            Ok(0)
        }
    }
}

/// Pairs of points on every axis-parallel grid line of `bx`, at spacings
/// `resolution · 2ᵏ`.
fn dyadic_pairs(bx: &RationalBox, resolution: &Rat) -> Result<Vec<(Point, Point)>> {
    if !resolution.is_positive() {
        return Err(Error::Parse("--resolution: must be positive".into()));
    }
    let n = bx.dim();
    let ticks: Vec<Vec<Rat>> = (0..n).map(|i| bx.axis_ticks(i, resolution)).collect();
    let mut bases: Vec<Vec<Rat>> = vec![vec![]];
    for t in &ticks {
        bases = bases
            .into_iter()
            .flat_map(|b| {
                t.iter().map(move |x| {
                    let mut c = b.clone();
                    c.push(x.clone());
                    c
                })
            })
            .collect();
    }
    let mut pairs = Vec::new();
    for axis in 0..n {
        for base in bases.iter().filter(|b| b[axis] == ticks[axis][0]) {
            let line: Vec<Point> = ticks[axis]
                .iter()
                .map(|s| {
                    let mut c = base.clone();
                    c[axis] = s.clone();
                    Point(c)
                })
                .collect();
            let mut k = 1;
            while k < line.len() {
                for i in 0..line.len() - k {
                    pairs.push((line[i].clone(), line[i + k].clone()));
                }
                k *= 2;
            }
        }
    }
    Ok(pairs)
}

/// Maximal affine pieces of a one-variable function on `[a, b]`.
fn segments_1d(f: &PolyhedralFunction, a: &Rat, b: &Rat) -> Result<Value> {
    let c = f.canonicalize();
    let bps = c.breakpoints()?;
    let mut segs = Vec::new();
    for (i, l) in c.functionals().iter().enumerate() {
        let lo = if i == 0 {
            a.clone()
        } else {
            bps[i - 1].clone().max(a.clone())
        };
        let hi = if i == bps.len() {
            b.clone()
        } else {
            bps[i].clone().min(b.clone())
        };
        if lo < hi {
            segs.push(json!({
                "from": value(&lo),
                "to": value(&hi),
                "slope": value(&l.slope[0]),
                "const": value(&l.constant),
            }));
        }
    }
    Ok(Value::Array(segs))
}

/// Counterclockwise order around the centroid, starting from angle 0.
fn ccw_order(mut pts: Vec<Point>) -> Vec<Point> {
    if pts.len() < 3 {
        return pts;
    }
    let k = Rat::from_int(pts.len() as i64);
    let c = Point(vec![
        pts.iter().map(|p| &p[0]).sum::<Rat>() / &k,
        pts.iter().map(|p| &p[1]).sum::<Rat>() / &k,
    ]);
    let half = |d: &Point| !(d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()));
    pts.sort_by(|p, q| {
        let (dp, dq) = (p.sub(&c), q.sub(&c));
        half(&dp).cmp(&half(&dq)).then_with(|| {
            let cross = &dp[0] * &dq[1] - &dp[1] * &dq[0];
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    pts
}

/// Full-dimensional domains of affinity on the box, as polygons.
fn cells_2d(f: &PolyhedralFunction, bx: &RationalBox) -> Result<Value> {
    let c = f.canonicalize();
    let b = bx.to_polyhedron();
    let mut cells = Vec::new();
    for d in c.domains() {
        let region = d.region.intersect(&b)?;
        if !region.is_full_dimensional() {
            continue;
        }
        cells.push(json!({
            "ambient": value(&d.functional),
            "polygon": value(&ccw_order(region.vertices()?)),
        }));
    }
    Ok(json!({"box": value(bx), "cells": cells}))
}
