//! Subcommands. [`run`] never exits the process; `main` does that with the
//! returned code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dlrkit::formula::{CnfFormula, DnfCell, DnfFormula, Formula, Point, QuantifiedFormula};
use dlrkit::geometry::{self, ConvexUnion, ConvexityVerdict, Piece};
use dlrkit::glp::{self, GlpProblem, GlpResult};
use dlrkit::qe;
use dlrkit::rational::Frac;
use dlrkit::reductions::{self, CspInstance};
use dlrkit::solver::{self, HornDlrFormula, SatResult};
use dlrkit::{Error, Limits, LinearTerm, Rational, VarId, VarPool};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::text::{self, SyntaxError};

/// Exit code for malformed input or unsupported requests.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for exceeded work budgets.
pub const EXIT_SIZE_LIMIT: i32 = 3;

const BUDGET_ENV: &str = "DLRKIT_BUDGET";
const DEFAULT_PLOT_BOUND: i64 = 100;
const QE_SAMPLES: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "dlrkit", version, about = "Exact solvers for disjunctive linear constraints")]
struct Cli {
    /// Work budget for cell enumeration and brute-force search
    /// (falls back to DLRKIT_BUDGET).
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    /// Seed for sampled cross-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Plain,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability of a formula.
    Solve { file: PathBuf },
    /// Maximise a linear objective over a Horn-DLR formula.
    Optimize {
        #[arg(long, allow_hyphen_values = true)]
        obj: String,
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<String>,
        file: PathBuf,
    },
    /// Eliminate existentially quantified variables.
    Qe {
        /// Comma-separated variables to eliminate.
        #[arg(long, value_delimiter = ',', required = true)]
        exists: Vec<String>,
        file: PathBuf,
    },
    /// Print a minimal definition using only `<=` and `!=` literals.
    Standardize { file: PathBuf },
    /// Check the Horn-DLR clause shape.
    Recognize { file: PathBuf },
    /// Compile `a1*x1 + ... + c = 0` into plus/one/leq atoms.
    CompileEq { equation: String },
    /// Compile a conjunction of `<=` literals into plus/one/leq atoms.
    Lp2csp { file: PathBuf },
    /// Print the closure of the defined set.
    Closure { file: PathBuf },
    /// Decide whether the closure of the set is convex.
    CheckConvex { file: PathBuf },
    /// Decide essential convexity of the defined set.
    CheckEssconvex { file: PathBuf },
    /// Split the segment from p to q into pieces inside and outside the set.
    SegmentProfile {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        file: PathBuf,
    },
    /// Decompose a unary set into points and intervals.
    Decompose {
        #[arg(long)]
        var: Option<String>,
        file: PathBuf,
    },
    /// Reduce a One-In-Three instance to a CSP over a unary relation.
    #[command(name = "reduce-1in3")]
    Reduce1in3 { phi: PathBuf, relation: PathBuf },
    /// Brute-force satisfiability of a formula or CSP instance.
    OracleSat { file: PathBuf },
    /// Brute-force a One-In-Three instance.
    #[command(name = "oracle-1in3")]
    Oracle1in3 { phi: PathBuf },
    /// CSV data for plots: segment pieces, or 2D cell polygons.
    PlotData {
        #[arg(long, allow_hyphen_values = true, requires = "q")]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "p")]
        q: Option<String>,
        /// Half-width of the clipping box for unbounded cells.
        #[arg(long)]
        bound: Option<String>,
        file: PathBuf,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Syntax { path: String, source: SyntaxError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::SizeLimit { .. }) => EXIT_SIZE_LIMIT,
            _ => EXIT_INPUT,
        }
    }
}

type Out = Result<String, Failure>;

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn limits(cli: &Cli) -> Result<Limits, Failure> {
    let budget = match cli.budget {
        Some(b) => Some(b),
        None => match std::env::var(BUDGET_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Input(format!("{BUDGET_ENV} is not a count: `{s}`")))?,
            ),
            Err(_) => None,
        },
    };
    Ok(match budget {
        Some(n) => Limits {
            cells: n,
            selections: n,
        },
        None => Limits::default(),
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    let shown = path.display().to_string();
    if shown == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|source| Failure::Io { path: shown, source })?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|source| Failure::Io { path: shown, source })
}

fn syntax(path: &str) -> impl FnOnce(SyntaxError) -> Failure + '_ {
    move |source| Failure::Syntax {
        path: path.to_string(),
        source,
    }
}

fn read_formula(path: &Path, pool: &mut VarPool) -> Result<CnfFormula, Failure> {
    let src = read(path)?;
    text::parse_formula(&src, pool).map_err(syntax(&path.display().to_string()))
}

fn execute(cli: &Cli) -> Out {
    let limits = limits(cli)?;
    let csv = cli.format == OutputFormat::Csv;
    let mut pool = VarPool::new();
    match &cli.command {
        Command::Solve { file } => solve(&read_formula(file, &mut pool)?, &limits),
        Command::Optimize { obj, threshold, file } => {
            let f = read_formula(file, &mut pool)?;
            let objective = text::parse_term(obj, &mut pool).map_err(syntax("--obj"))?;
            let threshold = threshold
                .as_deref()
                .map(|t| text::parse_rational(t).map_err(syntax("--threshold")))
                .transpose()?;
            optimize(&f, objective, threshold, &limits)
        }
        Command::Qe { exists, file } => {
            let f = read_formula(file, &mut pool)?;
            let prefix = exists.iter().map(|n| pool.var(n.trim())).collect();
            eliminate(f, prefix, cli.seed, &limits)
        }
        Command::Standardize { file } => {
            let sd = qe::standard_definition(&read_formula(file, &mut pool)?, &limits)?;
            let mut out = format!("{}\n", text::print_formula(&sd.cnf));
            if !sd.minimal {
                out.push_str("# not minimal\n");
            }
            Ok(out)
        }
        Command::Recognize { file } => Ok(match solver::recognize_horn_dlr(&read_formula(file, &mut pool)?) {
            Ok(_) => "HORN-DLR\n".into(),
            Err(r) => format!("NOT-HORN-DLR {r}\n"),
        }),
        Command::CompileEq { equation } => compile_eq(equation, &mut pool),
        Command::Lp2csp { file } => lp2csp(&read_formula(file, &mut pool)?, &mut pool),
        Command::Closure { file } => {
            let cells = closure_cells(&read_formula(file, &mut pool)?, &limits)?;
            let dnf = DnfFormula(cells.iter().map(|p| DnfCell(p.as_literals())).collect());
            Ok(format!("{}\n", text::print_formula(&qe::to_cnf(&dnf, &limits)?)))
        }
        Command::CheckConvex { file } => {
            let cells = closure_cells(&read_formula(file, &mut pool)?, &limits)?;
            if cells.is_empty() {
                return Ok("CONVEX\n".into());
            }
            Ok(match geometry::is_convex_union(&cells, &limits)? {
                ConvexUnion::Convex => "CONVEX\n".into(),
                ConvexUnion::NotConvex(x) => format!("NOT-CONVEX {x}\n"),
            })
        }
        Command::CheckEssconvex { file } => check_essconvex(&read_formula(file, &mut pool)?, &limits),
        Command::SegmentProfile { p, q, file } => {
            let f = read_formula(file, &mut pool)?;
            let p = text::parse_point(p, &mut pool).map_err(syntax("--p"))?;
            let q = text::parse_point(q, &mut pool).map_err(syntax("--q"))?;
            let profile = geometry::segment_profile(&Formula::Cnf(f), &p, &q)?;
            Ok(pieces_output(&profile.inside, &profile.outside, csv))
        }
        Command::Decompose { var, file } => {
            let f = read_formula(file, &mut pool)?;
            let vars = f.vars();
            let v = match var {
                Some(name) => pool.var(name),
                None if vars.len() == 1 => vars.into_iter().next().expect("one variable"),
                None => {
                    return Err(Failure::Input(format!(
                        "formula has {} variables; pick one with --var",
                        vars.len()
                    )))
                }
            };
            let d = geometry::decompose_unary(&Formula::Cnf(f), &v)?;
            Ok(pieces_output(&d.pieces, &d.gaps(), csv))
        }
        Command::Reduce1in3 { phi, relation } => {
            let phi_text = read(phi)?;
            let instance = text::parse_one_in_three(&phi_text).map_err(syntax(&phi.display().to_string()))?;
            let u = Formula::Cnf(read_formula(relation, &mut pool)?);
            let params = reductions::excluded_interval_params(&u)?;
            let csp = reductions::reduce_one_in_three(&mut pool, &instance, &u, &params)?;
            let mut out = format!(
                "# excluded [{}, {}] margin {} window [{}, {}]\n",
                Frac(&params.excluded_lo),
                Frac(&params.excluded_hi),
                Frac(&params.margin),
                Frac(&params.window_start),
                Frac(&params.window_end)
            );
            out.push_str(&text::print_csp(&csp)?);
            Ok(out)
        }
        Command::OracleSat { file } => {
            let src = read(file)?;
            let shown = file.display().to_string();
            let result = if text::is_csp_text(&src) {
                let csp: CspInstance = text::parse_csp(&src, &mut pool).map_err(syntax(&shown))?;
                csp.satisfiable(&limits)?
            } else {
                let f = text::parse_formula(&src, &mut pool).map_err(syntax(&shown))?;
                solver::exhaustive_sat(&f, &limits)?
            };
            Ok(sat_line(&result))
        }
        Command::Oracle1in3 { phi } => {
            let instance = text::parse_one_in_three(&read(phi)?).map_err(syntax(&phi.display().to_string()))?;
            Ok(match reductions::brute_force_one_in_three(&instance)? {
                Some(assignment) => {
                    let parts: Vec<String> = assignment
                        .iter()
                        .map(|(v, b)| format!("{v}={}", u8::from(*b)))
                        .collect();
                    format!("SAT {}\n", parts.join(" ")).replace("SAT \n", "SAT\n")
                }
                None => "UNSAT\n".into(),
            })
        }
        Command::PlotData { p, q, bound, file } => {
            let f = read_formula(file, &mut pool)?;
            if let (Some(p), Some(q)) = (p, q) {
                let p = text::parse_point(p, &mut pool).map_err(syntax("--p"))?;
                let q = text::parse_point(q, &mut pool).map_err(syntax("--q"))?;
                let profile = geometry::segment_profile(&Formula::Cnf(f), &p, &q)?;
                return Ok(pieces_output(&profile.inside, &profile.outside, true));
            }
            let bound = match bound {
                Some(b) => text::parse_rational(b).map_err(syntax("--bound"))?,
                None => Rational::from_integer(DEFAULT_PLOT_BOUND.into()),
            };
            plot_cells(&f, &bound, &limits)
        }
    }
}

fn sat_line(r: &SatResult) -> String {
    match r {
        SatResult::Sat(x) if x.is_empty() => "SAT\n".into(),
        SatResult::Sat(x) => format!("SAT {x}\n"),
        SatResult::Unsat => "UNSAT\n".into(),
    }
}

/// The formula itself if it is Horn-DLR, else the first Horn-DLR rewriting
/// found: literal splitting, then a standard definition.
fn as_horn(f: &CnfFormula, limits: &Limits) -> Result<Result<HornDlrFormula, String>, Failure> {
    let first = match solver::recognize_horn_dlr(f) {
        Ok(h) => return Ok(Ok(h)),
        Err(r) => r.to_string(),
    };
    if let Ok(h) = solver::recognize_horn_dlr(&qe::split_to_standard_literals(f)) {
        return Ok(Ok(h));
    }
    let sd = qe::standard_definition(f, limits)?;
    Ok(solver::recognize_horn_dlr(&sd.cnf).map_err(|_| first))
}

fn solve(f: &CnfFormula, limits: &Limits) -> Out {
    let result = match as_horn(f, limits)? {
        Ok(h) => solver::horn_dlr_sat(&h),
        Err(_) => solver::exhaustive_sat(f, limits)?,
    };
    Ok(sat_line(&result))
}

fn optimize(f: &CnfFormula, objective: LinearTerm, threshold: Option<Rational>, limits: &Limits) -> Out {
    let formula = as_horn(f, limits)?.map_err(|r| Failure::Input(format!("formula is not Horn-DLR: {r}")))?;
    let problem = GlpProblem {
        formula,
        objective,
        threshold,
    };
    let result = glp::glp_solve(&problem);
    let mut out = String::new();
    match &result {
        GlpResult::Infeasible => out.push_str("INFEASIBLE\n"),
        GlpResult::Unbounded => out.push_str("UNBOUNDED\n"),
        GlpResult::Optimum { value, witness } => {
            writeln!(out, "OPTIMUM {}", Frac(value)).expect("string write");
            writeln!(out, "WITNESS {witness}").expect("string write");
        }
        GlpResult::Supremum {
            value,
            probe,
            probe_gap,
        } => {
            writeln!(out, "SUPREMUM {}", Frac(value)).expect("string write");
            writeln!(out, "PROBE gap={} {probe}", Frac(probe_gap)).expect("string write");
        }
    }
    if let Some(m) = &problem.threshold {
        let reached = glp::decide_from(&result, m);
        writeln!(
            out,
            "THRESHOLD {} {}",
            Frac(m),
            if reached { "REACHED" } else { "NOT-REACHED" }
        )
        .expect("string write");
    }
    Ok(out)
}

fn eliminate(f: CnfFormula, prefix: Vec<VarId>, seed: Option<u64>, limits: &Limits) -> Out {
    let matrix = Formula::Cnf(f);
    let q = QuantifiedFormula { prefix, matrix };
    let dnf = qe::eliminate_exists(&q, limits)?;
    let cnf = qe::to_cnf(&dnf, limits)?;
    let mut out = format!("{}\n", text::print_formula(&cnf));
    if let Some(seed) = seed {
        let free: Vec<VarId> = q.free_vars().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut agree = 0;
        for _ in 0..QE_SAMPLES {
            let point: Point = free
                .iter()
                .map(|v| {
                    let den: i64 = rng.gen_range(1..=4);
                    (
                        v.clone(),
                        Rational::new(rng.gen_range(-5 * den..=5 * den).into(), den.into()),
                    )
                })
                .collect();
            let mut instantiated = q.matrix.clone();
            for (v, value) in point.iter() {
                instantiated = instantiated.substitute(v, &LinearTerm::constant(value.clone()));
            }
            let expected = qe::satisfiable(&instantiated, limits)?.is_some();
            if cnf.eval(&point)? == expected {
                agree += 1;
            }
        }
        writeln!(out, "# sampled {QE_SAMPLES} points, {agree} agree").expect("string write");
    }
    Ok(out)
}

fn compile_eq(equation: &str, pool: &mut VarPool) -> Out {
    let (lhs, rhs) = equation
        .split_once('=')
        .ok_or_else(|| Failure::Input("equation needs `=`".into()))?;
    let lhs = text::parse_term(lhs, pool).map_err(syntax("equation"))?;
    let rhs = text::parse_term(rhs, pool).map_err(syntax("equation"))?;
    let t = &lhs - &rhs;
    let pp = reductions::compile_linear_equation(pool, t.coeffs(), &-t.constant_part())?;
    let mut out = String::new();
    let names = |vs: &[VarId]| vs.iter().map(|v| v.name().to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "# free {}", names(&pp.free)).expect("string write");
    writeln!(out, "# exists {}", names(&pp.exists)).expect("string write");
    writeln!(out, "# atoms {}", pp.atom_count()).expect("string write");
    for a in &pp.atoms {
        writeln!(out, "{a}").expect("string write");
    }
    Ok(out)
}

fn lp2csp(f: &CnfFormula, pool: &mut VarPool) -> Out {
    let mut rows = Vec::new();
    for (i, c) in f.0.iter().enumerate() {
        match c.0.as_slice() {
            [l] if l.rel == dlrkit::Relation::LeqZero => {
                rows.push((l.term.linear_part(), -l.term.constant_part()));
            }
            _ => return Err(Failure::Input(format!("clause {} is not a single `<=` literal", i + 1))),
        }
    }
    let csp = reductions::lp_to_csp(pool, &rows)?;
    Ok(text::print_csp(&csp)?)
}

fn closure_cells(f: &CnfFormula, limits: &Limits) -> Result<Vec<dlrkit::lp::Polyhedron>, Failure> {
    Ok(geometry::closure_dnf(&qe::to_dnf(f, limits)?))
}

fn check_essconvex(f: &CnfFormula, limits: &Limits) -> Out {
    Ok(match geometry::essential_convexity_check(f, limits)? {
        ConvexityVerdict::EssentiallyConvex(h) => {
            format!("ESSENTIALLY-CONVEX\nCERTIFICATE {}\n", text::print_formula(h.cnf()))
        }
        ConvexityVerdict::NotEssentiallyConvex { p, q, excluded } => {
            let (lo, hi) = (excluded.lo.value(), excluded.hi.value());
            let (lo, hi) = (lo.expect("finite"), hi.expect("finite"));
            format!(
                "NOT-ESSENTIALLY-CONVEX p=({}) q=({}) t∈({},{})\nEXCLUDED {excluded}\n",
                point_list(&p),
                point_list(&q),
                Frac(lo),
                Frac(hi)
            )
        }
        ConvexityVerdict::Unknown(report) => format!("UNKNOWN\nREPORT {report}\n"),
    })
}

fn point_list(p: &Point) -> String {
    p.iter()
        .map(|(v, x)| format!("{v}={}", Frac(x)))
        .collect::<Vec<_>>()
        .join(",")
}

fn endpoint_csv(e: &geometry::Endpoint) -> (String, &'static str) {
    match e {
        geometry::Endpoint::NegInfinity => ("-inf".into(), "open"),
        geometry::Endpoint::PosInfinity => ("+inf".into(), "open"),
        geometry::Endpoint::Closed(r) => (Frac(r).to_string(), "closed"),
        geometry::Endpoint::Open(r) => (Frac(r).to_string(), "open"),
    }
}

fn pieces_output(inside: &[Piece], outside: &[Piece], csv: bool) -> String {
    let mut all: Vec<(&Piece, &str)> = inside
        .iter()
        .map(|p| (p, "inside"))
        .chain(outside.iter().map(|p| (p, "outside")))
        .collect();
    all.sort_by_key(|(p, _)| piece_key(p));
    let mut out = String::new();
    if csv {
        out.push_str("kind,lo,lo_end,hi,hi_end\n");
    }
    for (piece, kind) in all {
        if csv {
            let (lo, lo_end) = endpoint_csv(&piece.lo);
            let (hi, hi_end) = endpoint_csv(&piece.hi);
            writeln!(out, "{kind},{lo},{lo_end},{hi},{hi_end}").expect("string write");
        } else {
            writeln!(out, "{} {piece}", kind.to_uppercase()).expect("string write");
        }
    }
    out
}

/// Orders pieces by their left endpoint; a closed start comes before an
/// open one at the same value.
fn piece_key(p: &Piece) -> (u8, Option<Rational>, u8) {
    use geometry::Endpoint::*;
    match &p.lo {
        NegInfinity => (0, None, 0),
        Closed(r) => (1, Some(r.clone()), 0),
        Open(r) => (1, Some(r.clone()), 1),
        PosInfinity => (2, None, 0),
    }
}

fn plot_cells(f: &CnfFormula, bound: &Rational, limits: &Limits) -> Out {
    let vars: Vec<VarId> = f.vars().into_iter().collect();
    if vars.len() != 2 {
        return Err(Failure::Input(format!(
            "cell plots need exactly two variables, found {}",
            vars.len()
        )));
    }
    if *bound <= Rational::from_integer(0.into()) {
        return Err(Failure::Input("--bound must be positive".into()));
    }
    let cells = closure_cells(f, limits)?;
    let mut out = format!("cell,vertex,{},{}\n", vars[0], vars[1]);
    for (i, cell) in cells.iter().enumerate() {
        for (j, v) in geometry::polygon_vertices(cell, &vars[0], &vars[1], bound)?
            .iter()
            .enumerate()
        {
            let x = v.get(&vars[0]).expect("vertex has both coordinates");
            let y = v.get(&vars[1]).expect("vertex has both coordinates");
            writeln!(out, "{i},{j},{},{}", Frac(x), Frac(y)).expect("string write");
        }
    }
    Ok(out)
}
