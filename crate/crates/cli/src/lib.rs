//! Batch front end for `pareto-kit`: reads instances, runs one analysis and
//! writes a JSON report.
//!
//! Exit codes: `0` when the analysis completed and every checked invariant
//! held, `1` on a domain error, `2` on a usage or parse error.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use pareto_kit::cone::PolyhedralCone;
use pareto_kit::connectivity::{frontier_sample_connected, FrontierSource};
use pareto_kit::finite::{
    cone_nondominated_set, nondominated_set, properly_nondominated_set, weakly_nondominated_set,
};
use pareto_kit::generate::{
    generate_hull, generate_instance, generate_points, generate_polyhedron, PolyFamily,
};
use pareto_kit::hull::{
    hull_contains, hull_is_nondominated, hull_is_properly_nondominated,
    hull_is_weakly_nondominated, HullSet,
};
use pareto_kit::io::{
    read_json, read_points_csv, to_json_string, write_connectivity_tsv, write_points_csv,
};
use pareto_kit::numerics::{rational_parse, Rational};
use pareto_kit::order::{Point, PointSet};
use pareto_kit::polyhedral::{
    recession_cone, redundancy_demonstration, theorem_full_report, Polyhedron,
};
use pareto_kit::reducibility::{
    hull_reducibility_check, reducibility_report, MopInstance, DEFAULT_MAX_OBJECTIVES,
};
use pareto_kit::selftest::run_selftest;
use pareto_kit::stability::external_stability_certificate;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "PARETO_KIT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pareto-kit",
    version,
    about = "Exact nondominance, stability and reducibility analyses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nondominated and weakly nondominated points of a point set or hull.
    Nondom(Analysis),
    /// Properly nondominated points with their least trade-off bounds.
    Proper(Analysis),
    /// A dominator certificate mapping every point to a nondominated one.
    Stability(Analysis),
    /// Efficient solutions of all objective subsets against the weakly
    /// efficient set.
    Reduce(Analysis),
    /// Full nondominance classification of query points in a convex hull.
    Hull(Analysis),
    /// Recession analysis of a polyhedron `{y : A y <= b}`.
    Poly(Analysis),
    /// Component count of the sampled nondominated frontier.
    Connect(Analysis),
    /// Seeded random instance.
    Gen(GenArgs),
    /// Invariant suite over every module on seeded instances.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Finite,
    Hull,
    Poly,
}

#[derive(Args, Debug)]
struct Analysis {
    /// Instance file: CSV for point sets, JSON otherwise.
    #[arg(long)]
    input: PathBuf,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Ordering cone as JSON `{"generators": [...]}`.
    #[arg(long)]
    cone: Option<PathBuf>,
    /// Image mode; inferred from the input when omitted.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Connectivity threshold; four times the largest adjacent-sample gap
    /// when omitted.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Weight grid resolution for frontier sampling.
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Largest objective count for subset enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_OBJECTIVES)]
    max_objectives: usize,
    /// A single query point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    query: Vec<String>,
    /// Query points as CSV with header `y1,...,yp`.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Sample points for polyhedral analyses as CSV.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Plot-ready TSV of frontier samples and component ids.
    #[arg(long)]
    tsv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Finite,
    Hull,
    Poly,
    Instance,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// What to generate.
    #[arg(long, value_enum, alias = "kind")]
    mode: Kind,
    /// Number of objectives.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of points, generators or rows.
    #[arg(long, default_value_t = 10)]
    size: usize,
    /// Polyhedron family: box, half-plane, cone-shift or random.
    #[arg(long, default_value = "random")]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure classes, each mapped to its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<pareto_kit::Error> for Failure {
    fn from(e: pareto_kit::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn open(path: &Path) -> Outcome<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    read_json(open(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_csv(path: &Path) -> Outcome<PointSet> {
    read_points_csv(open(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_point(text: &str) -> Outcome<Point> {
    text.split(',')
        .map(|v| rational_parse(v.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map(Point::new)
        .map_err(|e| Failure::Usage(format!("query {text:?}: {e}")))
}

fn parse_epsilon(text: &Option<String>) -> Outcome<Option<Rational>> {
    text.as_deref()
        .map(|t| rational_parse(t).map_err(|e| Failure::Usage(format!("--epsilon: {e}"))))
        .transpose()
}

impl Analysis {
    fn query_points(&self) -> Outcome<Vec<Point>> {
        let mut out: Vec<Point> = self
            .query
            .iter()
            .map(|q| parse_point(q))
            .collect::<Outcome<_>>()?;
        if let Some(path) = &self.queries {
            out.extend(load_csv(path)?.iter().cloned());
        }
        Ok(out)
    }

    fn sample_points(&self) -> Outcome<Vec<Point>> {
        let mut out = self.query_points()?;
        if let Some(path) = &self.samples {
            out.extend(load_csv(path)?.iter().cloned());
        }
        Ok(out)
    }

    /// Explicit `--mode`, else CSV means finite and JSON keys decide the rest.
    fn resolve_mode(&self) -> Outcome<Mode> {
        if let Some(m) = self.mode {
            return Ok(m);
        }
        if self
            .input
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        {
            return Ok(Mode::Finite);
        }
        let value: Value = load_json(&self.input)?;
        if value.get("A").is_some() {
            Ok(Mode::Poly)
        } else if value.get("generators").is_some() {
            Ok(Mode::Hull)
        } else if value.get("objectives").is_some() {
            Ok(Mode::Finite)
        } else {
            Err(Failure::Usage(format!(
                "{}: cannot infer --mode",
                self.input.display()
            )))
        }
    }

    fn cone(&self) -> Outcome<Option<PolyhedralCone>> {
        self.cone.as_deref().map(load_json).transpose()
    }
}

fn emit(output: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(usage),
    }
}

fn emit_json<T: Serialize>(output: &Option<PathBuf>, value: &T, stdout: &mut dyn Write) -> Outcome {
    emit(output, &to_json_string(value), stdout)
}

#[derive(Serialize)]
struct NondomReport {
    dim: usize,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cone: Option<PolyhedralCone>,
    nondominated: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weakly_nondominated: Option<Vec<usize>>,
    nondominated_points: Vec<Point>,
}

#[derive(Serialize)]
struct HullQueryReport {
    query: Point,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    weakly_nondominated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nondominated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    properly_nondominated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Rational>>,
}

fn classify_hull(hull: &HullSet, queries: Vec<Point>) -> Outcome<Vec<HullQueryReport>> {
    if queries.is_empty() {
        return Err(Failure::Usage(
            "hull mode needs --query or --queries".into(),
        ));
    }
    queries
        .into_iter()
        .map(|q| {
            if !hull_contains(hull, &q)? {
                return Ok(HullQueryReport {
                    query: q,
                    member: false,
                    weakly_nondominated: None,
                    nondominated: None,
                    properly_nondominated: None,
                    weights: None,
                });
            }
            let proper = hull_is_properly_nondominated(hull, &q)?;
            Ok(HullQueryReport {
                weakly_nondominated: Some(hull_is_weakly_nondominated(hull, &q)?),
                nondominated: Some(hull_is_nondominated(hull, &q)?),
                properly_nondominated: Some(proper.verdict),
                weights: proper.witness,
                member: true,
                query: q,
            })
        })
        .collect()
}

fn nondom(a: &Analysis, out: &mut dyn Write) -> Outcome {
    match a.resolve_mode()? {
        Mode::Finite => {
            let y = load_csv(&a.input)?;
            let cone = a.cone()?;
            let (nondominated, weakly) = match &cone {
                Some(c) => (cone_nondominated_set(&y, c)?, None),
                None => (nondominated_set(&y)?, Some(weakly_nondominated_set(&y)?)),
            };
            let report = NondomReport {
                dim: y.dim(),
                count: y.len(),
                nondominated_points: nondominated.iter().map(|&i| y.get(i).clone()).collect(),
                cone,
                nondominated,
                weakly_nondominated: weakly,
            };
            emit_json(&a.output, &report, out)
        }
        Mode::Hull => {
            let hull: HullSet = load_json(&a.input)?;
            emit_json(&a.output, &classify_hull(&hull, a.query_points()?)?, out)
        }
        Mode::Poly => Err(Failure::Usage(
            "nondom supports --mode finite or hull".into(),
        )),
    }
}

fn proper(a: &Analysis, out: &mut dyn Write) -> Outcome {
    match a.resolve_mode()? {
        Mode::Finite => emit_json(
            &a.output,
            &properly_nondominated_set(&load_csv(&a.input)?)?,
            out,
        ),
        Mode::Hull => {
            let hull: HullSet = load_json(&a.input)?;
            emit_json(&a.output, &classify_hull(&hull, a.query_points()?)?, out)
        }
        Mode::Poly => Err(Failure::Usage(
            "proper supports --mode finite or hull".into(),
        )),
    }
}

fn stability(a: &Analysis, out: &mut dyn Write) -> Outcome {
    let y = load_csv(&a.input)?;
    let cone = a.cone()?;
    let cert = external_stability_certificate(&y, cone.as_ref())?;
    cert.verify(&y)?;
    emit_json(&a.output, &cert, out)
}

fn reduce(a: &Analysis, out: &mut dyn Write) -> Outcome {
    match a.resolve_mode()? {
        Mode::Hull => {
            let hull: HullSet = load_json(&a.input)?;
            let mut queries = a.query_points()?;
            if queries.is_empty() {
                queries = hull.generators().to_vec();
            }
            let records = hull_reducibility_check(&hull, &queries, a.max_objectives)?;
            emit_json(&a.output, &records, out)?;
            match records.iter().find(|r| !r.agrees()) {
                Some(r) => Err(Failure::Domain(format!(
                    "reducibility equality fails at {}",
                    r.query
                ))),
                None => Ok(()),
            }
        }
        Mode::Finite | Mode::Poly => {
            let inst: MopInstance = load_json(&a.input)?;
            emit_json(
                &a.output,
                &reducibility_report(&inst, a.max_objectives)?,
                out,
            )
        }
    }
}

#[derive(Serialize)]
struct PolyReport {
    recession_directions: Vec<Point>,
    equivalence: pareto_kit::polyhedral::EquivalenceReport,
    redundancy: pareto_kit::polyhedral::RedundancyReport,
}

/// Reads a polyhedron plus the optional `center` and `expected` keys that
/// generated files carry.
fn load_polyhedron(path: &Path) -> Outcome<(Polyhedron, Option<Point>, Option<bool>)> {
    let value: Value = load_json(path)?;
    let poly: Polyhedron = serde_json::from_value(value.clone())
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let center = match value.get("center") {
        Some(c) => Some(
            serde_json::from_value(c.clone())
                .map_err(|e| Failure::Usage(format!("center: {e}")))?,
        ),
        None => None,
    };
    let expected = value.get("expected").and_then(Value::as_bool);
    Ok((poly, center, expected))
}

fn poly(a: &Analysis, out: &mut dyn Write) -> Outcome {
    let (poly, center, expected) = load_polyhedron(&a.input)?;
    let mut samples = a.sample_points()?;
    samples.extend(center);
    let report = PolyReport {
        recession_directions: recession_cone(&poly)?.samples,
        equivalence: theorem_full_report(&poly, &samples)?,
        redundancy: redundancy_demonstration(&poly, &samples)?,
    };
    emit_json(&a.output, &report, out)?;
    if !report.redundancy.pass {
        return Err(Failure::Domain(
            "lower sections unbounded although Y_N is nonempty".into(),
        ));
    }
    match expected {
        Some(e) if e != report.equivalence.y_n_nonempty => Err(Failure::Domain(format!(
            "expected Y_N nonempty = {e}, found {}",
            report.equivalence.y_n_nonempty
        ))),
        _ => Ok(()),
    }
}

fn connect(a: &Analysis, out: &mut dyn Write) -> Outcome {
    let source = match a.resolve_mode()? {
        Mode::Hull => FrontierSource::Hull(load_json(&a.input)?),
        Mode::Poly => {
            let (polyhedron, center, _) = load_polyhedron(&a.input)?;
            let anchor = a.sample_points()?.into_iter().next().or(center);
            FrontierSource::Polyhedron { polyhedron, anchor }
        }
        Mode::Finite => {
            return Err(Failure::Usage(
                "connect supports --mode hull or poly".into(),
            ))
        }
    };
    let epsilon = parse_epsilon(&a.epsilon)?;
    let report = frontier_sample_connected(&source, a.grid, epsilon.as_ref())?;
    if let Some(path) = &a.tsv {
        let file =
            File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        write_connectivity_tsv(&report, file).map_err(usage)?;
    }
    emit_json(&a.output, &report, out)
}

fn gen(g: &GenArgs, out: &mut dyn Write) -> Outcome {
    match g.mode {
        Kind::Finite => {
            let y = generate_points(g.dim, g.size, g.seed)?;
            let mut buf = Vec::new();
            write_points_csv(&y, &mut buf).map_err(usage)?;
            emit(
                &g.output,
                &String::from_utf8(buf).expect("csv output is utf-8"),
                out,
            )
        }
        Kind::Hull => emit_json(&g.output, &generate_hull(g.dim, g.size, g.seed)?, out),
        Kind::Instance => emit_json(&g.output, &generate_instance(g.dim, g.size, g.seed)?, out),
        Kind::Poly => {
            let family: PolyFamily = g.family.parse().map_err(|e: pareto_kit::Error| usage(e))?;
            emit_json(
                &g.output,
                &generate_polyhedron(g.dim, g.size, family, g.seed)?,
                out,
            )
        }
    }
}

fn selftest(s: &SelftestArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let report = run_selftest(s.seed);
    emit_json(&s.output, &report, out)?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        let _ = writeln!(
            err,
            "FAIL {}: {}",
            c.name,
            c.failure.as_deref().unwrap_or("")
        );
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Domain("selftest failed".into()))
    }
}

fn thread_pool() -> Outcome<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(usage)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Nondom(a) => nondom(a, out),
        Command::Proper(a) => proper(a, out),
        Command::Stability(a) => stability(a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::Hull(a) => {
            let hull: HullSet = load_json(&a.input)?;
            emit_json(&a.output, &classify_hull(&hull, a.query_points()?)?, out)
        }
        Command::Poly(a) => poly(a, out),
        Command::Connect(a) => connect(a, out),
        Command::Gen(g) => gen(g, out),
        Command::Selftest(s) => selftest(s, out, err),
    }
}

/// Parses `argv` (including the program name), runs the analysis and returns
/// the process exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    // Analyses write into buffers so the pool never touches the caller's
    // handles, which need not be `Send`.
    let (mut buf_out, mut buf_err) = (Vec::new(), Vec::new());
    let result =
        thread_pool().and_then(|pool| pool.install(|| dispatch(&cli, &mut buf_out, &mut buf_err)));
    let _ = out.write_all(&buf_out);
    let _ = err.write_all(&buf_err);
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}
