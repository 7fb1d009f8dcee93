//! Command-line front end: argument parsing, job execution and report output.
//!
//! Every run prints one JSON (or flattened text) document holding the resolved job and
//! its result. Exit status is 0 on success, 1 on invalid input and 2 when a computed
//! result violates one of the checked inequalities.

mod job;
mod output;
mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub use job::{Command, Format, JobSpec, DEFAULT_RESTARTS, DEFAULT_SAMPLES, DEFAULT_TERMINALS};
pub use output::{format_significant, round_significant, LENGTH_DIGITS, RATIO_DIGITS};

use crate::covering::{verify_covering, CoveringMap};
use crate::error::Error;
use crate::quotient::{smt_quotient, smt_upper_star};
use crate::ratio::{repro, search_inf_with, steiner_ratio_with, verify_theorem_with, ReproOptions, SearchOptions};
use crate::space::{Space, SurfacePoint, Vec2};
use crate::spanning::{self, Role, Tree, TreeVertex};
use crate::steiner::{smt_plane, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const SEED_ENV: &str = "STEINER_SEED";

/// Result of one invocation, before anything is written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
}

fn field(field: impl Into<String>, message: impl ToString) -> JobError {
    JobError::Field { field: field.into(), message: message.to_string() }
}

/// Attaches library errors to the job field they came from.
fn blame(error: Error) -> JobError {
    let name = match &error {
        Error::InvalidSpace(_) | Error::UnsupportedCone(_) => "space",
        Error::InvalidPoint(_) | Error::TooFewPoints { .. } | Error::DuplicatePoints { .. } => "points",
        Error::TerminalCount { .. } | Error::TooManyAssignments { .. } => "points",
        Error::InvalidArgument(_) | Error::NotConverged { .. } => return JobError::Core(error),
    };
    field(name, error)
}

#[derive(Parser, Debug)]
#[command(name = "steiner", version, about = "Spanning trees, Steiner trees and Steiner ratios on flat surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Intrinsic distance between two points
    Dist(JobArgs),
    /// Minimal spanning tree
    Mst(JobArgs),
    /// Steiner minimal tree, or an upper bound on cones without a plane covering
    Smt(JobArgs),
    /// Steiner ratio of a configuration
    Sr(JobArgs),
    /// Randomized search for configurations with a small Steiner ratio
    Search(JobArgs),
    /// Covering-property and ratio-inequality checks on random samples
    Verify(JobArgs),
    /// Table of ratio bounds on wide cones and search floors
    Repro(JobArgs),
    /// Runs a job file, e.g. the `job` echoed by an earlier run
    Run {
        job: PathBuf,
    },
}

#[derive(Args, Debug)]
struct JobArgs {
    /// `plane`, `cone:<radians>`, `cone:2pi/<k>`, `disphenoid:<a>,<b>,<c>` or `tetrahedron[:<side>]`
    #[arg(long, default_value = "plane")]
    space: String,
    /// JSON array of points: `[x, y]` or `[r, phi]` pairs, or `{"face": i, "bary": [u, v, w]}`
    #[arg(long)]
    points: Option<String>,
    /// JSON file with `space` and `points`
    #[arg(long, conflicts_with = "points")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Terminal count for `search`
    #[arg(long, default_value_t = DEFAULT_TERMINALS)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the tree as SVG (`mst` and `smt`)
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl JobArgs {
    fn into_job(self, command: Command) -> Result<JobSpec, JobError> {
        let space = self.space.parse().map_err(|e: Error| field("space", e))?;
        let points = self
            .points
            .map(|p| serde_json::from_str(&p).map_err(|e| field("points", format!("not valid JSON: {e}"))))
            .transpose()?;
        Ok(JobSpec {
            command,
            space,
            points,
            input: self.input,
            tol: self.tol,
            seed: self.seed,
            restarts: self.restarts,
            samples: self.samples,
            n: self.n,
            format: self.format,
            svg: self.svg,
        })
    }
}

/// Parses arguments (program name first) and runs the job.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let job = match cli.command {
        Sub::Dist(a) => a.into_job(Command::Dist),
        Sub::Mst(a) => a.into_job(Command::Mst),
        Sub::Smt(a) => a.into_job(Command::Smt),
        Sub::Sr(a) => a.into_job(Command::Sr),
        Sub::Search(a) => a.into_job(Command::Search),
        Sub::Verify(a) => a.into_job(Command::Verify),
        Sub::Repro(a) => a.into_job(Command::Repro),
        Sub::Run { job } => load_job(&job),
    };
    match job {
        Ok(job) => run(job),
        Err(e) => invalid(e),
    }
}

fn invalid(e: JobError) -> Outcome {
    Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {e}\n") }
}

/// Reads a job file; a missing seed falls back to the environment.
pub fn load_job(path: &Path) -> Result<JobSpec, JobError> {
    let text = std::fs::read_to_string(path).map_err(|e| field("job", format!("{}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| field("job", format!("not valid JSON: {e}")))?;
    if let (Some(map), Ok(seed)) = (value.as_object_mut(), std::env::var(SEED_ENV)) {
        if !map.contains_key("seed") {
            let seed: u64 = seed.trim().parse().map_err(|_| field("seed", format!("{SEED_ENV}={seed} is not an integer")))?;
            map.insert("seed".into(), seed.into());
        }
    }
    serde_json::from_value(value).map_err(|e| field("job", e))
}

/// Executes a job and renders its report.
pub fn run(job: JobSpec) -> Outcome {
    let job = match resolve(job) {
        Ok(job) => job,
        Err(e) => return invalid(e),
    };
    let (result, passed) = match execute(&job) {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let mut result = result;
    output::round_document(&mut result, false);
    let status = if passed { "ok" } else { "violation" };
    let stdout = match job.format {
        Format::Json => {
            let doc = json!({ "job": &job, "result": result, "status": status });
            let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("job = {}\n", serde_json::to_string(&job).expect("jobs serialize"));
            for line in output::text_lines(&result) {
                s.push_str(&line);
                s.push('\n');
            }
            s.push_str(&format!("status = {status}\n"));
            s
        }
    };
    let code = if passed { EXIT_OK } else { EXIT_VIOLATION };
    Outcome { code, stdout, stderr: String::new() }
}

/// Inlines the `input` file so the echoed job is self-contained.
fn resolve(mut job: JobSpec) -> Result<JobSpec, JobError> {
    if !(job.tol > 0.0 && job.tol.is_finite()) {
        return Err(field("tol", format!("must be positive, got {}", job.tol)));
    }
    if let Some(path) = job.input.take() {
        if job.points.is_some() {
            return Err(field("input", "given together with inline points"));
        }
        let text = std::fs::read_to_string(&path).map_err(|e| field("input", format!("{}: {e}", path.display())))?;
        let file: job::InputFile =
            serde_json::from_str(&text).map_err(|e| field("input", format!("{}: {e}", path.display())))?;
        if let Some(space) = file.space {
            job.space = space;
        }
        job.points = Some(file.points);
    }
    Ok(job)
}

fn parse_points(space: &Space, value: Option<&Value>) -> Result<Vec<SurfacePoint>, JobError> {
    let items = value
        .ok_or_else(|| field("points", "required for this command"))?
        .as_array()
        .ok_or_else(|| field("points", "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let name = format!("points[{i}]");
            match space {
                Space::Plane | Space::Cone(_) => {
                    let pair: [f64; 2] = serde_json::from_value(item.clone()).map_err(|_| {
                        let shape = if matches!(space, Space::Plane) { "[x, y]" } else { "[r, phi]" };
                        field(&name, format!("expected a number pair {shape}, got {item}"))
                    })?;
                    Ok(match space {
                        Space::Plane => SurfacePoint::xy(pair[0], pair[1]),
                        _ => SurfacePoint::polar(pair[0], pair[1]),
                    })
                }
                Space::Disphenoid(_) => {
                    #[derive(serde::Deserialize)]
                    #[serde(deny_unknown_fields)]
                    struct FacePoint {
                        face: u8,
                        bary: [f64; 3],
                    }
                    let p: FacePoint = serde_json::from_value(item.clone())
                        .map_err(|e| field(&name, format!("expected {{\"face\": i, \"bary\": [u, v, w]}}: {e}")))?;
                    Ok(SurfacePoint::on_face(p.face, p.bary))
                }
            }
        })
        .collect()
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn execute(job: &JobSpec) -> Result<(Value, bool), JobError> {
    let space = job.space;
    match job.command {
        Command::Dist => {
            let pts = parse_points(&space, job.points.as_ref())?;
            if pts.len() != 2 {
                return Err(field("points", format!("dist needs exactly two points, got {}", pts.len())));
            }
            let d = space.distance(pts[0], pts[1]).map_err(blame)?;
            Ok((json!({ "distance": d }), true))
        }
        Command::Mst => {
            let pts = parse_points(&space, job.points.as_ref())?;
            let tree = spanning::mst(&space, &pts).map_err(blame)?;
            if let Some(path) = &job.svg {
                draw(path, &schematic(&space, &tree), &tree)?;
            }
            Ok((json!({ "length": tree.total_length, "tree": to_value(&tree) }), true))
        }
        Command::Smt => smt(job, &space),
        Command::Sr => {
            let pts = parse_points(&space, job.points.as_ref())?;
            let report = steiner_ratio_with(&space, &pts, job.tol).map_err(blame)?;
            Ok((to_value(&report), report.within_bounds()))
        }
        Command::Search => {
            let mut options = SearchOptions::new(job.restarts, job.seed);
            options.tol = job.tol;
            if job.points.is_some() {
                options.seeded = vec![parse_points(&space, job.points.as_ref())?];
            }
            let report = search_inf_with(&space, job.n, &options).map_err(|e| match e {
                Error::TerminalCount { .. } => field("n", e),
                other => blame(other),
            })?;
            Ok((to_value(&report), report.within_bounds()))
        }
        Command::Verify => {
            let cover = CoveringMap::for_space(&space).map_err(blame)?;
            let covering = verify_covering(&cover, job.samples, job.seed)?;
            let theorem = verify_theorem_with(&cover, job.samples, job.seed, DEFAULT_TERMINALS, job.tol)?;
            let passed = covering.passed && theorem.passed();
            Ok((json!({ "covering": to_value(&covering), "theorem": to_value(&theorem) }), passed))
        }
        Command::Repro => {
            let report = repro(&ReproOptions { restarts: job.restarts, seed: job.seed })?;
            Ok((to_value(&report), report.passed))
        }
    }
}

fn smt(job: &JobSpec, space: &Space) -> Result<(Value, bool), JobError> {
    let pts = parse_points(space, job.points.as_ref())?;
    match space {
        Space::Plane => {
            let plane: Vec<Vec2> = pts.iter().filter_map(SurfacePoint::as_plane).collect();
            let tree = smt_plane(&plane, job.tol).map_err(blame)?;
            if let Some(path) = &job.svg {
                draw(path, &schematic(space, &tree), &tree)?;
            }
            Ok((json!({ "kind": "exact", "length": tree.total_length, "tree": to_value(&tree) }), true))
        }
        Space::Cone(cone) if cone.sheets().is_none() => {
            let tree = star_or_spanning(space, &pts)?;
            if let Some(path) = &job.svg {
                draw(path, &schematic(space, &tree), &tree)?;
            }
            let kind = if pts.len() == 2 { "exact" } else { "upper_bound" };
            Ok((json!({ "kind": kind, "length": tree.total_length, "tree": to_value(&tree) }), true))
        }
        _ => {
            let q = smt_quotient(space, &pts, job.tol).map_err(blame)?;
            if let Some(path) = &job.svg {
                let layout: Vec<Vec2> = q.plane_tree.vertices.iter().filter_map(|v| v.point.as_plane()).collect();
                draw(path, &layout, &q.tree)?;
            }
            let mut doc = to_value(&q);
            doc["kind"] = "exact".into();
            doc["length"] = q.length().into();
            Ok((doc, true))
        }
    }
}

/// The shorter of the apex star and the spanning tree, both genuine trees on the cone.
fn star_or_spanning(space: &Space, points: &[SurfacePoint]) -> Result<Tree, JobError> {
    let points = space.canonical_all(points).map_err(blame)?;
    let spanning = spanning::mst(space, &points).map_err(blame)?;
    let star = smt_upper_star(space, &points).map_err(blame)?;
    if spanning.total_length <= star {
        return Ok(spanning);
    }
    let mut vertices: Vec<TreeVertex> = points.iter().map(|&point| TreeVertex { point, role: Role::Terminal }).collect();
    let hub = match points.iter().position(|p| matches!(p, SurfacePoint::Cone { r, .. } if *r == 0.0)) {
        Some(i) => i,
        None => {
            vertices.push(TreeVertex { point: SurfacePoint::polar(0.0, 0.0), role: Role::Steiner });
            vertices.len() - 1
        }
    };
    let edges: Vec<(usize, usize)> = (0..points.len()).filter(|&i| i != hub).map(|i| (i.min(hub), i.max(hub))).collect();
    let lengths = edges
        .iter()
        .map(|&(a, b)| space.distance(vertices[a].point, vertices[b].point))
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok(Tree { total_length: lengths.iter().sum(), vertices, edges, edge_lengths: lengths })
}

/// Drawing positions: the plane itself, the cone opened out to a full turn, or the
/// tetrahedron net.
fn schematic(space: &Space, tree: &Tree) -> Vec<Vec2> {
    tree.vertices
        .iter()
        .map(|v| match (space, v.point) {
            (Space::Cone(c), SurfacePoint::Cone { r, phi }) => {
                let a = phi * std::f64::consts::TAU / c.total_angle();
                Vec2::new(r * a.cos(), r * a.sin())
            }
            (Space::Disphenoid(d), SurfacePoint::Disphenoid { face, bary }) => d.to_plane(face, bary),
            (_, p) => p.as_plane().unwrap_or_else(Vec2::zeros),
        })
        .collect()
}

fn draw(path: &Path, positions: &[Vec2], tree: &Tree) -> Result<(), JobError> {
    let roles: Vec<Role> = tree.vertices.iter().map(|v| v.role).collect();
    let svg = svg::render(positions, &roles, &tree.edges);
    svg::write_atomic(path, &svg).map_err(|e| field("svg", format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(line: &str) -> Vec<String> {
        std::iter::once("steiner".to_string()).chain(line.split(' ').map(str::to_string)).collect()
    }

    #[test]
    fn cone_distance_example() {
        let out = run_args(args("dist --space cone:3.14159265 --points [[1,0],[1,1.5707963]] --format text"));
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("distance = 1.414213"), "{}", out.stdout);
    }

    #[test]
    fn malformed_points_name_the_field() {
        let out = run_args(args("sr --points [[0,0],[1]]"));
        assert_eq!(out.code, EXIT_INVALID);
        assert!(out.stderr.contains("points[1]"), "{}", out.stderr);
        let out = run_args(args("sr --space cone:x --points [[0,0]]"));
        assert_eq!(out.code, EXIT_INVALID);
        assert!(out.stderr.contains("`space`"), "{}", out.stderr);
        assert_eq!(run_args(args("frobnicate")).code, EXIT_INVALID);
        assert_eq!(run_args(args("--help")).code, EXIT_OK);
    }

    #[test]
    fn numeric_cone_smt_is_a_bound() {
        let out = run_args(args("smt --space cone:9.42477796 --points [[1,0],[1,3.14159265],[1,6.28318531]]"));
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["result"]["kind"], "upper_bound");
        assert_eq!(doc["result"]["length"], json!(3.0));
    }
}
