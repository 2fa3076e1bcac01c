//! `netaccess`: rank nodes of a transportation network, sweep the generalized
//! distance sum, report parameter diagnostics and run axiom checks.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netaccess::axioms::{self, applicable_axioms, check_axiom, check_prop2, dominance_pairs, AxiomVerdict};
use netaccess::fixtures;
use netaccess::generalized::{reasonable_alpha, sweep, DEFAULT_ALPHA_TOL};
use netaccess::indices::{ranking, AccessibilityIndex, DEFAULT_TIE_TOL};
use netaccess::io::{parse_network, Format};
use netaccess::{validate, Error, TransportationNetwork};
use serde_json::json;

use output::{num, sig};

#[derive(Parser, Debug)]
#[command(name = "netaccess", version, about = "Accessibility indices on transportation networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check symmetry, zero diagonal, nonnegativity and the triangle inequality
    Validate {
        #[command(flatten)]
        input: InputArgs,
        /// Triangle inequality tolerance (default 1e-9 + 1e-12 * max distance)
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Score and rank every node with one index
    Rank {
        #[command(flatten)]
        input: InputArgs,
        /// Index to evaluate
        #[arg(long, value_enum)]
        index: IndexId,
        /// Parameter of the generalized distance sum (required for gds)
        #[arg(long)]
        alpha: Option<f64>,
        /// Relative tolerance under which scores share a class
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generalized distance sums on an evenly spaced alpha grid
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Smallest alpha on the grid
        #[arg(long)]
        alpha_min: f64,
        /// Largest alpha on the grid; must stay below the existence bound
        #[arg(long)]
        alpha_max: f64,
        /// Number of grid points, at least 2
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Existence bound and reasonable upper bound for alpha
    Alpha {
        #[command(flatten)]
        input: InputArgs,
        /// Bisection tolerance
        #[arg(long, default_value_t = DEFAULT_ALPHA_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the axiom checkers for one or more indices
    Axioms {
        #[command(flatten)]
        input: InputArgs,
        /// Index to check; repeat for several
        #[arg(long = "index", value_enum, required = true)]
        indices: Vec<IndexId>,
        /// Parameter of the generalized distance sum (required for gds)
        #[arg(long)]
        alpha: Option<f64>,
        /// Random perturbations per axiom
        #[arg(long, default_value_t = axioms::DEFAULT_TRIALS)]
        trials: usize,
        /// Seed for the perturbation draws
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List every dominance pair
    Dominance {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print a built-in network as JSON with its provenance note
    Example {
        /// Fixture name
        name: String,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct SourceArgs {
    /// Built-in network (fig1, fig2_d, fig2_dprime, fig4, ralik, fig6)
    #[arg(long)]
    fixture: Option<String>,
    /// Network file
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InputArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Input format; inferred from the file extension when omitted
    #[arg(long, value_enum, requires = "input")]
    format: Option<InputFormat>,
    /// Accept networks that break the triangle inequality (results are tagged non-metric)
    #[arg(long)]
    allow_triangle_violation: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; each command has its own default
    #[arg(long, value_enum)]
    emit: Option<Emit>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum InputFormat {
    EdgeList,
    MatrixCsv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Emit {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum IndexId {
    Dsum,
    Dprod,
    Invdsum,
    #[value(name = "dsum-nt")]
    DsumNt,
    #[value(name = "ecc-lex")]
    EccLex,
    Gds,
}

impl IndexId {
    fn id(self) -> &'static str {
        match self {
            IndexId::Dsum => "dsum",
            IndexId::Dprod => "dprod",
            IndexId::Invdsum => "invdsum",
            IndexId::DsumNt => "dsum-nt",
            IndexId::EccLex => "ecc-lex",
            IndexId::Gds => "gds",
        }
    }
}

enum Failure {
    Usage(String),
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Singular { .. }
            | Error::EigenNoConvergence(_)
            | Error::SeriesDiverges(_)
            | Error::InvalidGrid(_)
            | Error::InvalidAlpha(_)
            | Error::InsufficientPerturbations { .. } => Failure::Numerical(m),
            Error::UnknownFixture(_)
            | Error::UnknownLabel(_)
            | Error::InvalidPermutation(_)
            | Error::NonPositiveScale(_)
            | Error::InvalidNodes { .. }
            | Error::ZeroTrials => Failure::Usage(m),
            _ => Failure::Validation(m),
        }
    }
}

type CmdResult = Result<(), Failure>;

struct Loaded {
    net: TransportationNetwork,
    non_metric: bool,
}

fn infer_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::MatrixCsv,
        _ => Format::EdgeList,
    }
}

fn read_network(input: &InputArgs) -> Result<TransportationNetwork, Failure> {
    if let Some(name) = &input.source.fixture {
        return Ok(fixtures::fixture(name)?.network);
    }
    let path = input.source.input.as_ref().expect("clap enforces one source");
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let format = match input.format {
        Some(InputFormat::EdgeList) => Format::EdgeList,
        Some(InputFormat::MatrixCsv) => Format::MatrixCsv,
        Some(InputFormat::Json) => Format::Json,
        None => infer_format(path),
    };
    Ok(parse_network(&text, format)?.into_network()?)
}

/// Loads the input and enforces the metric requirement of every analysis command.
fn load(input: &InputArgs) -> Result<Loaded, Failure> {
    let net = read_network(input)?;
    let report = validate(&net, net.default_triangle_tol());
    if !report.is_structurally_valid() {
        return Err(Failure::Validation(
            "distance matrix must be symmetric, nonnegative and zero on the diagonal".into(),
        ));
    }
    let non_metric = !report.is_metric();
    if non_metric {
        if !input.allow_triangle_violation {
            return Err(Failure::Validation(format!(
                "network violates the triangle inequality at {} triples; pass --allow-triangle-violation to proceed",
                report.triangle_violations.len()
            )));
        }
        eprintln!("warning: network violates the triangle inequality; results are tagged non-metric");
    }
    Ok(Loaded { net, non_metric })
}

fn write_out(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn index_from(id: IndexId, alpha: Option<f64>) -> Result<AccessibilityIndex, Failure> {
    AccessibilityIndex::from_id(id.id(), if id == IndexId::Gds { alpha } else { None }).map_err(Failure::Usage)
}

fn cmd_validate(input: &InputArgs, tol: Option<f64>, out: &OutputArgs) -> CmdResult {
    let net = read_network(input)?;
    let tol = tol.unwrap_or_else(|| net.default_triangle_tol());
    let report = validate(&net, tol);
    let metric = report.is_metric();
    let text = match out.emit.unwrap_or(Emit::Json) {
        Emit::Json => {
            let violations: Vec<_> = report
                .triangle_violations
                .iter()
                .map(|v| json!({"i": net.label(v.i), "j": net.label(v.j), "k": net.label(v.k), "slack": num(v.slack)}))
                .collect();
            pretty(&json!({
                "nodes": net.n(),
                "symmetric": report.symmetric,
                "zero_diagonal": report.zero_diagonal,
                "nonnegative": report.nonnegative,
                "metric": metric,
                "non_metric": !metric,
                "triangle_violations": violations,
            }))
        }
        Emit::Csv => {
            let mut s = String::from("i,j,k,slack\n");
            for v in &report.triangle_violations {
                s.push_str(&format!("{},{},{},{}\n", net.label(v.i), net.label(v.j), net.label(v.k), sig(v.slack)));
            }
            s
        }
    };
    write_out(out.out.as_deref(), &text)?;
    if !report.is_structurally_valid() {
        return Err(Failure::Validation("distance matrix is not a valid distance matrix".into()));
    }
    if !metric && !input.allow_triangle_violation {
        return Err(Failure::Validation(format!(
            "{} triangle inequality violations",
            report.triangle_violations.len()
        )));
    }
    Ok(())
}

fn cmd_rank(input: &InputArgs, id: IndexId, alpha: Option<f64>, tol: f64, out: &OutputArgs) -> CmdResult {
    if alpha.is_some() && id != IndexId::Gds {
        return Err(Failure::Usage(format!("--alpha only applies to gds, not {}", id.id())));
    }
    let index = index_from(id, alpha)?;
    let Loaded { net, non_metric } = load(input)?;
    let scores = index.evaluate(&net)?;
    let classes = ranking(&scores, tol);
    let class_of = classes.class_of();
    let order = classes.order();
    let text = match out.emit.unwrap_or(Emit::Csv) {
        Emit::Csv => {
            let mut s = String::from("label,score,class\n");
            for &i in &order {
                s.push_str(&format!("{},{},{}\n", net.label(i), sig(scores[i]), class_of[i] + 1));
            }
            s
        }
        Emit::Json => {
            let rows: Vec<_> = order
                .iter()
                .map(|&i| json!({"label": net.label(i), "score": num(scores[i]), "class": class_of[i] + 1}))
                .collect();
            pretty(&json!({
                "index": index.id(),
                "alpha": index.alpha().map(num),
                "non_metric": non_metric,
                "rows": rows,
            }))
        }
    };
    write_out(out.out.as_deref(), &text)
}

fn cmd_sweep(input: &InputArgs, alpha_min: f64, alpha_max: f64, steps: usize, out: &OutputArgs) -> CmdResult {
    let Loaded { net, non_metric } = load(input)?;
    let table = sweep(&net, alpha_min, alpha_max, steps)?;
    if let Some(row) = table.rows.iter().find(|r| r.result.is_err()) {
        let e = row.result.clone().unwrap_err();
        return Err(e.into());
    }
    let text = match out.emit.unwrap_or(Emit::Csv) {
        Emit::Csv => table.to_csv(),
        Emit::Json => {
            let rows: Vec<_> = table
                .solved()
                .map(|(a, v)| json!({"alpha": num(a), "scores": v.scores.iter().map(|&s| num(s)).collect::<Vec<_>>()}))
                .collect();
            pretty(&json!({"labels": table.labels, "non_metric": non_metric, "rows": rows}))
        }
    };
    write_out(out.out.as_deref(), &text)
}

fn cmd_alpha(input: &InputArgs, tol: f64, out: &OutputArgs) -> CmdResult {
    let Loaded { net, non_metric } = load(input)?;
    let d = reasonable_alpha(&net, tol)?;
    let text = match out.emit.unwrap_or(Emit::Json) {
        Emit::Json => {
            let exist = if d.alpha_exist.is_finite() {
                num(d.alpha_exist)
            } else {
                json!("inf")
            };
            let trace: Vec<_> = d.condition_values.iter().map(|&(a, c)| json!([num(a), num(c)])).collect();
            pretty(&json!({
                "alpha_exist": exist,
                "alpha_hat": num(d.alpha_hat),
                "capped_by_existence": d.capped_by_existence,
                "iterations": d.bisection_iterations,
                "non_metric": non_metric,
                "trace": trace,
            }))
        }
        Emit::Csv => {
            let mut s = String::from("alpha,c\n");
            for &(a, c) in &d.condition_values {
                s.push_str(&format!("{},{}\n", sig(a), sig(c)));
            }
            s
        }
    };
    write_out(out.out.as_deref(), &text)
}

fn cmd_axioms(
    input: &InputArgs,
    ids: &[IndexId],
    alpha: Option<f64>,
    trials: usize,
    seed: u64,
    out: &OutputArgs,
) -> CmdResult {
    if alpha.is_some() && !ids.contains(&IndexId::Gds) {
        return Err(Failure::Usage("--alpha only applies to gds".into()));
    }
    let indices = ids.iter().map(|&id| index_from(id, alpha)).collect::<Result<Vec<_>, _>>()?;
    let Loaded { net, .. } = load(input)?;
    let mut verdicts: Vec<AxiomVerdict> = Vec::new();
    for index in &indices {
        for &axiom in applicable_axioms(index) {
            verdicts.push(check_axiom(axiom, index, &net, trials, seed)?);
        }
        if let Some(a) = index.alpha() {
            verdicts.extend(check_prop2(&net, &[a], seed)?);
        }
    }
    if out.emit == Some(Emit::Csv) {
        let mut s = String::from("index,alpha,axiom,passed,trials,seed\n");
        for v in &verdicts {
            let a = v.index.alpha().map(sig).unwrap_or_default();
            s.push_str(&format!("{},{},{},{},{},{}\n", v.index.id(), a, v.axiom, v.passed, v.trials, v.seed));
        }
        return write_out(out.out.as_deref(), &s);
    }
    let mut text = axioms::report_json(&verdicts);
    text.push('\n');
    write_out(out.out.as_deref(), &text)
}

fn cmd_dominance(input: &InputArgs, out: &OutputArgs) -> CmdResult {
    let Loaded { net, .. } = load(input)?;
    let pairs = dominance_pairs(&net)?;
    let text = match out.emit.unwrap_or(Emit::Csv) {
        Emit::Csv => {
            let mut s = String::from("dominator,dominated\n");
            for p in &pairs {
                s.push_str(&format!("{},{}\n", net.label(p.dominator), net.label(p.dominated)));
            }
            s
        }
        Emit::Json => {
            let rows: Vec<_> = pairs
                .iter()
                .map(|p| json!({"dominator": net.label(p.dominator), "dominated": net.label(p.dominated)}))
                .collect();
            pretty(&serde_json::Value::Array(rows))
        }
    };
    write_out(out.out.as_deref(), &text)
}

fn cmd_example(name: &str, out: Option<&Path>) -> CmdResult {
    let f = fixtures::fixture(name)?;
    let payload = f.network.to_payload();
    let text = pretty(&json!({
        "name": f.name,
        "provenance": f.provenance,
        "non_metric": f.non_metric,
        "labels": payload.labels,
        "distances": payload.distances,
    }));
    write_out(out, &text)
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Validate { input, tol, out } => cmd_validate(input, *tol, out),
        Command::Rank {
            input,
            index,
            alpha,
            tol,
            out,
        } => cmd_rank(input, *index, *alpha, *tol, out),
        Command::Sweep {
            input,
            alpha_min,
            alpha_max,
            steps,
            out,
        } => cmd_sweep(input, *alpha_min, *alpha_max, *steps, out),
        Command::Alpha { input, tol, out } => cmd_alpha(input, *tol, out),
        Command::Axioms {
            input,
            indices,
            alpha,
            trials,
            seed,
            out,
        } => cmd_axioms(input, indices, *alpha, *trials, *seed, out),
        Command::Dominance { input, out } => cmd_dominance(input, out),
        Command::Example { name, out } => cmd_example(name, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
