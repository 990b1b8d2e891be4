//! Command-line front end. [`run_from_args`] does all the work and returns
//! the process output so it can be exercised without spawning a binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::codes::{scalar_code, verify_code, LinearIndexCode, VerifyOptions};
use crate::coloring::{fractional_chromatic, optimal_coloring_code};
use crate::covering::{covering_ilp, covering_lp, materialize, CatalogKind, ComponentCatalog};
use crate::error::{Error, Result};
use crate::field_linalg::Field;
use crate::graph::SideInfoGraph;
use crate::minrank::{minrank, optimal_scalar_encoder};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::schemes::{ais_cover_code, cyclic_balanced_code, separation_code, t_subset_cover};
use crate::tradeoff::{tradeoff_curve, Budgets, Grid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_CODE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ldic",
    version,
    about = "Locally decodable index codes on small side-information graphs"
)]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural report: girth, symmetry, fractional chromatic number, minrank, MAIS.
    Analyze {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        json: bool,
    },
    /// Construct, verify and write a code.
    Build {
        graph: PathBuf,
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        common: Common,
        /// Locality budget for the covering programs, e.g. 7/6.
        #[arg(long)]
        locality: Option<String>,
        /// Subset size for AIS covers.
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Covering radius for the separation scheme.
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Component catalog for the covering programs (defaults: minrank for
        /// the ILP, vector-cycle for the LP).
        #[arg(long)]
        catalog: Option<String>,
        /// Write the code here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Achievable points, upper envelope and lower bound as CSV.
    Tradeoff {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Locality grid lo:hi:step.
        #[arg(long, default_value = "1:2:1/12")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a code file against a graph.
    Verify {
        code: PathBuf,
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Prime field size.
    #[arg(long, default_value_t = 2)]
    pub field: u32,
    /// Cap on exhaustive enumerations (fitting matrices, covering-code candidates).
    #[arg(long)]
    pub budget: Option<u128>,
}

impl Common {
    fn field(&self) -> Result<Field> {
        Field::new(self.field)
    }

    fn budgets(&self) -> Budgets {
        let mut b = Budgets::default();
        if let Some(cap) = self.budget {
            b.minrank = cap;
            b.covering = cap;
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    FractionalColoring,
    ScalarMinrank,
    Ais,
    Cyclic,
    Separation,
    CoveringIlp,
    CoveringLp,
}

/// What the process should print and return.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidGraph(_)
        | Error::NotPrime(_)
        | Error::DimensionMismatch(_)
        | Error::LocalityBelowOne(_) => EXIT_INPUT,
        Error::BudgetExceeded { .. } | Error::SizeLimit { .. } => EXIT_BUDGET,
        Error::Precondition(_) | Error::Infeasible(_) => EXIT_PRECONDITION,
        Error::InvalidCode(_) | Error::UnreachableTarget | Error::CapExceeded(_) => EXIT_INVALID_CODE,
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let body = || match cli.command {
        Command::Analyze { graph, common, json } => analyze(&graph, &common, json),
        Command::Build {
            graph,
            scheme,
            common,
            locality,
            t,
            radius,
            catalog,
            out,
            json,
        } => {
            let opts = BuildOptions {
                scheme,
                locality,
                t,
                radius,
                catalog,
                out,
                json,
            };
            build(&graph, &common, &opts)
        }
        Command::Tradeoff {
            graph,
            common,
            grid,
            out,
        } => tradeoff(&graph, &common, &grid, out.as_deref()),
        Command::Verify { code, graph, json } => verify(&code, &graph, json),
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Err(Error::Parse(format!("cannot start {n} threads: {e}"))),
        },
        None => body(),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn read_graph(path: &Path) -> Result<SideInfoGraph> {
    SideInfoGraph::from_json(&fs::read_to_string(path)?)
}

fn analyze(path: &Path, common: &Common, json: bool) -> Result<Outcome> {
    let g = read_graph(path)?;
    let field = common.field()?;
    let budgets = common.budgets();
    let (chi, coloring) = fractional_chromatic(&g.interference_graph())?;
    let kappa = minrank(&g, field, budgets.minrank)?.rank;
    let (mais, _) = g.max_acyclic_induced_subgraph()?;
    let girth = g.girth();
    let cyclic = g.has_cyclic_automorphism();

    let text = if json {
        let doc = json!({
            "n": g.n(),
            "edges": g.edge_count(),
            "girth": girth,
            "cyclic_automorphism": cyclic,
            "chi_f": format_rational(&chi),
            "coloring": { "a": coloring.a, "b": coloring.b },
            "q": field.order(),
            "minrank": kappa,
            "mais": mais,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc)?)
    } else {
        format!(
            "vertices: {}\nedges: {}\ngirth: {}\ncyclic automorphism: {}\nchi_f: {} ({}:{} coloring)\nminrank over F_{}: {}\nmais: {}\n",
            g.n(),
            g.edge_count(),
            girth.map_or("none".to_string(), |v| v.to_string()),
            if cyclic { "yes" } else { "no" },
            format_rational(&chi),
            coloring.a,
            coloring.b,
            field.order(),
            kappa,
            mais
        )
    };
    Ok(Outcome::ok(text))
}

struct BuildOptions {
    scheme: Scheme,
    locality: Option<String>,
    t: usize,
    radius: usize,
    catalog: Option<String>,
    out: Option<PathBuf>,
    json: bool,
}

/// Scheme knobs; each scheme reads only the ones it needs.
#[derive(Clone, Debug)]
pub struct SchemeParams {
    pub locality: Option<Rational>,
    pub t: usize,
    pub radius: usize,
    pub catalog: Option<CatalogKind>,
}

impl Default for SchemeParams {
    fn default() -> Self {
        SchemeParams {
            locality: None,
            t: 1,
            radius: 1,
            catalog: None,
        }
    }
}

/// Runs one scheme and returns its (unverified) code.
pub fn build_code(
    g: &SideInfoGraph,
    field: Field,
    scheme: Scheme,
    params: &SchemeParams,
    budgets: &Budgets,
) -> Result<LinearIndexCode> {
    let (t, radius) = (params.t, params.radius);
    let need_locality = || {
        params
            .locality
            .clone()
            .ok_or_else(|| Error::Parse("--locality is required for covering schemes".into()))
    };
    match scheme {
        Scheme::FractionalColoring => Ok(optimal_coloring_code(g, field)?.1),
        Scheme::ScalarMinrank => {
            let mr = minrank(g, field, budgets.minrank)?;
            let b = optimal_scalar_encoder(&mr.witness);
            scalar_code(g, &b, &mr.witness, b.cols())
        }
        Scheme::Ais => {
            let mr = minrank(g, field, budgets.minrank)?;
            let b = optimal_scalar_encoder(&mr.witness);
            let cover = t_subset_cover(g, t)?;
            Ok(ais_cover_code(g, &cover, &b, &mr.witness)?.with_provenance(format!("ais(t={t})")))
        }
        Scheme::Cyclic => cyclic_balanced_code(g, field, budgets.minrank),
        Scheme::Separation => separation_code(g, field, radius, budgets.minrank, budgets.covering),
        Scheme::CoveringIlp | Scheme::CoveringLp => {
            let r = need_locality()?;
            let lp = scheme == Scheme::CoveringLp;
            let kind = params.catalog.unwrap_or(if lp {
                CatalogKind::VectorCycle
            } else {
                CatalogKind::Minrank
            });
            let cat = ComponentCatalog::build(g, kind, field, budgets.minrank)?;
            let sol = if lp {
                covering_lp(g, &cat, &r)?
            } else {
                covering_ilp(g, &cat, &r)?
            };
            materialize(g, &cat, &sol)
        }
    }
}

fn build(path: &Path, common: &Common, opts: &BuildOptions) -> Result<Outcome> {
    let g = read_graph(path)?;
    let field = common.field()?;
    let params = SchemeParams {
        locality: opts.locality.as_deref().map(parse_rational).transpose()?,
        t: opts.t,
        radius: opts.radius,
        catalog: opts.catalog.as_deref().map(str::parse::<CatalogKind>).transpose()?,
    };
    let code = build_code(&g, field, opts.scheme, &params, &common.budgets())?;

    let report = verify_code(&code, &g, &VerifyOptions::default())?;
    if let Some(c) = report.failure() {
        return Ok(Outcome {
            code: EXIT_INVALID_CODE,
            stdout: String::new(),
            stderr: format!("internal error: constructed code failed verification: {c}\n"),
        });
    }
    let m = code.metrics();
    let summary = if opts.json {
        let doc = json!({
            "scheme": code.provenance(),
            "q": code.field().order(),
            "m": code.m(),
            "len": code.len(),
            "beta": format_rational(&m.beta),
            "r": format_rational(&m.r),
            "r_i": m.per_receiver.iter().map(format_rational).collect::<Vec<_>>(),
        });
        format!("{}\n", serde_json::to_string_pretty(&doc)?)
    } else {
        format!(
            "scheme: {}\nm = {}, len = {}\nbeta = {}, r = {}\nr_i = {}\n",
            code.provenance(),
            code.m(),
            code.len(),
            format_rational(&m.beta),
            format_rational(&m.r),
            m.per_receiver.iter().map(format_rational).collect::<Vec<_>>().join(" ")
        )
    };
    let text = format!("{}\n", code.to_json());
    match &opts.out {
        Some(out) => {
            fs::write(out, text)?;
            Ok(Outcome::ok(summary))
        }
        None => Ok(Outcome {
            code: EXIT_OK,
            stdout: text,
            stderr: summary,
        }),
    }
}

fn tradeoff(path: &Path, common: &Common, grid: &str, out: Option<&Path>) -> Result<Outcome> {
    let g = read_graph(path)?;
    let field = common.field()?;
    let grid = Grid::parse(grid)?;
    let curve = tradeoff_curve(&g, field, &grid, &common.budgets())?;
    let csv = curve.to_csv()?;
    let notes: String = curve.skipped.iter().map(|s| format!("skipped {s}\n")).collect();
    match out {
        Some(p) => {
            fs::write(p, &csv)?;
            Ok(Outcome {
                code: EXIT_OK,
                stdout: format!("wrote {} points to {}\n", curve.points.len(), p.display()),
                stderr: notes,
            })
        }
        None => Ok(Outcome {
            code: EXIT_OK,
            stdout: csv,
            stderr: notes,
        }),
    }
}

fn verify(code_path: &Path, graph_path: &Path, json: bool) -> Result<Outcome> {
    let code = LinearIndexCode::from_json(&fs::read_to_string(code_path)?)?;
    let g = read_graph(graph_path)?;
    let report = verify_code(&code, &g, &VerifyOptions::default())?;
    let m = code.metrics();
    let exhaustive = match &report.exhaustive {
        None => "skipped",
        Some(Ok(())) => "passed",
        Some(Err(_)) => "failed",
    };
    if json {
        let failure = report.failure().map(|c| {
            json!({
                "receiver": c.receiver + 1,
                "backend": format!("{:?}", c.backend).to_lowercase(),
                "message": c.message,
                "other": c.other,
                "decoded": c.decoded,
                "detail": c.detail,
            })
        });
        let doc = json!({
            "valid": report.is_valid(),
            "beta": format_rational(&m.beta),
            "r": format_rational(&m.r),
            "exhaustive": exhaustive,
            "counterexample": failure,
        });
        let code = if report.is_valid() { EXIT_OK } else { EXIT_INVALID_CODE };
        return Ok(Outcome {
            code,
            stdout: format!("{}\n", serde_json::to_string_pretty(&doc)?),
            stderr: String::new(),
        });
    }
    match report.failure() {
        None => Ok(Outcome::ok(format!(
            "VALID (beta={}, r={})\n",
            format_rational(&m.beta),
            format_rational(&m.r)
        ))),
        Some(c) => Ok(Outcome {
            code: EXIT_INVALID_CODE,
            stdout: format!("INVALID\n{c}\n"),
            stderr: String::new(),
        }),
    }
}
