//! `pascal-chase`: verify, prove, check and draw binomial identities.
//!
//! Exit codes: 0 when everything verified, 1 when a verification failure was
//! found, 2 on usage or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use pascal_chase::chase::replay;
use pascal_chase::harness::{self, catalog_identity_text, Certificate, SweepReport, SweepSpec};
use pascal_chase::lang::{self, eval_expr_with, Bindings, EvalOptions, FibConvention};
use pascal_chase::render::{self, Figure, LabelMode, RenderOptions};
use pascal_chase::scripts::{self, catalog_list, generate_script};
use pascal_chase::triangle;

#[derive(Parser)]
#[command(
    name = "pascal-chase",
    version,
    about = "Arrow-chasing proofs of binomial identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the identity catalog.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Check an identity exactly over every parameter tuple in a range.
    Verify(VerifyArgs),
    /// Generate a proof script and write it as a certificate.
    Prove {
        #[arg(long)]
        id: String,
        /// Parameter binding such as `n=6`; repeat for each parameter.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate from scratch.
    Check {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Draw every state of a certificate, or one of the built-in figures.
    #[command(group(ArgGroup::new("source").required(true).args(["cert", "figure"])))]
    Render {
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Built-in whole-proof figure, e.g. `fig9`.
        #[arg(long)]
        figure: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 40.0)]
        cell_size: f64,
        #[arg(long, value_enum, default_value_t = Labels::Weights)]
        labels: Labels,
    },
    /// Evaluate both sides with the identity language and the LHS with the
    /// independent oracle.
    Oracle {
        #[arg(long)]
        id: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        #[arg(long)]
        fib_convention: Option<FibConvention>,
    },
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("source").required(true).args(["id", "file", "spec"])))]
struct VerifyArgs {
    /// Catalog id.
    #[arg(long)]
    id: Option<String>,
    /// File of identities, one per line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// TOML sweep specification.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Parameter range such as `n=0..30` or `m=0..n`; repeatable.
    #[arg(long = "range")]
    ranges: Vec<String>,
    /// Upper bound for catalog default ranges when no `--range` is given.
    #[arg(long, default_value_t = 20)]
    bound: i64,
    #[arg(long)]
    max_instances: Option<usize>,
    /// Seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long)]
    fib_convention: Option<FibConvention>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Tikz,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    Weights,
    Binomials,
    Both,
}

fn parse_param(text: &str) -> Result<(String, i64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    let value = value
        .trim()
        .parse()
        .map_err(|e| format!("bad value in `{text}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

/// Exit status plus an error message for status 2.
enum Fail {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn bindings(params: Vec<(String, i64)>) -> Bindings {
    params.into_iter().collect()
}

fn list(json: bool) -> Result<(), Fail> {
    let entries = catalog_list();
    if json {
        let items: Vec<serde_json::Value> = entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id,
                    "identity": e.identity_text,
                    "params": e.params,
                    "constraints": e.constraints,
                    "figure": e.figure_ref,
                    "has_script": e.has_script,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&items)?);
        return Ok(());
    }
    for e in entries {
        let script = if e.has_script { "script" } else { "sweep only" };
        println!("{:<20} [{script}] {}", e.id, e.identity_text);
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Fail> {
    let mut specs = Vec::new();
    if let Some(id) = &args.id {
        let spec = if args.ranges.is_empty() {
            SweepSpec::from_catalog(id, args.bound)?
        } else {
            SweepSpec::from_texts(id.as_str(), scripts::builtin_identity(id)?, &args.ranges)?
        };
        specs.push(spec);
    } else if let Some(path) = &args.file {
        let text = read(path)?;
        let identities = lang::parse_identity_file(&text)
            .map_err(|(line, e)| Fail::Usage(format!("{}:{line}: {e}", path.display())))?;
        if identities.is_empty() {
            return Err(Fail::Usage(format!("{}: no identities", path.display())));
        }
        for (line, ast) in identities {
            // Each identity takes the ranges of the parameters it has.
            let ranges: Vec<&String> = args
                .ranges
                .iter()
                .filter(|r| {
                    let name = r.split('=').next().unwrap_or("").trim();
                    ast.params.iter().any(|p| p == name)
                })
                .collect();
            specs.push(SweepSpec::from_texts(format!("line {line}"), ast, &ranges)?);
        }
    } else if let Some(path) = &args.spec {
        if !args.ranges.is_empty() {
            return Err(Fail::Usage("--range cannot be combined with --spec".into()));
        }
        specs.push(SweepSpec::from_toml(&read(path)?)?);
    }
    for spec in &mut specs {
        if args.max_instances.is_some() {
            spec.max_instances = args.max_instances;
        }
        if let Some(secs) = args.time_budget {
            spec.time_budget = Some(
                std::time::Duration::try_from_secs_f64(secs)
                    .map_err(|_| Fail::Usage(format!("invalid --time-budget {secs}")))?,
            );
        }
        if let Some(fib) = args.fib_convention {
            spec.fib = fib;
        }
    }

    let reports = specs
        .iter()
        .map(harness::sweep)
        .collect::<Result<Vec<SweepReport>, _>>()?;
    let failed = reports.iter().any(|r| r.failed > 0);
    if args.json {
        let out = serde_json::json!({
            "all_passed": !failed,
            "reports": reports.iter().map(SweepReport::to_json).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for r in &reports {
            println!("{r}");
            for f in &r.failures {
                println!("  FAIL {f}");
            }
        }
    }
    if failed {
        Err(Fail::Verification)
    } else {
        Ok(())
    }
}

fn prove(id: &str, params: Bindings, out: Option<PathBuf>) -> Result<(), Fail> {
    let script = generate_script(id, &params)?;
    let (cert, report) = Certificate::certify(&script, &catalog_identity_text(id)?);
    match out {
        Some(path) => {
            write(&path, &cert.to_json())?;
            eprintln!("wrote {}", path.display());
            println!("{report}");
        }
        None => print!("{}", cert.to_json()),
    }
    if report.valid {
        Ok(())
    } else {
        Err(Fail::Verification)
    }
}

fn check(path: &Path, json: bool) -> Result<(), Fail> {
    let cert = Certificate::from_json(&read(path)?)?;
    let report = cert.check()?;
    if json {
        let failure = report.failure.as_ref().map(|f| {
            serde_json::json!({
                "kind": f.kind.describe(),
                "step": f.step,
                "cell": f.cell.map(|c| [c.n as i64, c.k]),
                "expected": f.expected,
                "found": f.found,
            })
        });
        let out = serde_json::json!({
            "theorem_id": report.theorem_id,
            "valid": report.valid,
            "value": report.value.to_string(),
            "failure": failure,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{report}");
    }
    if report.valid {
        Ok(())
    } else {
        Err(Fail::Verification)
    }
}

fn render_cmd(
    cert: Option<PathBuf>,
    figure: Option<String>,
    format: Format,
    out_dir: &Path,
    cell_size: f64,
    labels: Labels,
) -> Result<(), Fail> {
    let mut opts = RenderOptions::with_cell_size(cell_size)?;
    opts.labels = match labels {
        Labels::Weights => LabelMode::Weights,
        Labels::Binomials => LabelMode::Binomials,
        Labels::Both => LabelMode::Both,
    };
    fs::create_dir_all(out_dir).map_err(|e| Fail::Usage(format!("{}: {e}", out_dir.display())))?;
    let mut outputs: Vec<(String, String)> = Vec::new();

    if let Some(name) = figure {
        let fig = Figure::by_name(&name)?;
        match format {
            Format::Svg => outputs.push((format!("{name}.svg"), render::figure_svg(fig, &opts)?)),
            Format::Tikz => {
                let (merged, _, _) = render::figure_config(fig)?;
                outputs.push((format!("{name}.tex"), render::render_tikz(&merged, &opts)?));
            }
        }
    } else if let Some(path) = cert {
        let cert = Certificate::from_json(&read(&path)?)?;
        let script = cert.to_script()?;
        let stem = &cert.theorem_id;
        match format {
            Format::Svg => {
                for (i, svg) in render::render_script_svg(&script, &opts)?.into_iter().enumerate() {
                    outputs.push((format!("{stem}_{i:03}.svg"), svg));
                }
            }
            Format::Tikz => {
                let report = cert.check()?;
                if !report.valid {
                    return Err(Fail::Usage(format!("certificate does not check: {report}")));
                }
                let states = replay(&script).map_err(|(i, e)| Fail::Usage(format!("step {i}: {e}")))?;
                opts.rows = states.iter().filter_map(|c| c.max_row()).max();
                for (i, state) in states.iter().enumerate() {
                    outputs.push((format!("{stem}_{i:03}.tex"), render::render_tikz(state, &opts)?));
                }
            }
        }
    }
    for (name, text) in &outputs {
        write(&out_dir.join(name), text)?;
    }
    println!("wrote {} file(s) to {}", outputs.len(), out_dir.display());
    Ok(())
}

fn oracle(id: &str, params: Bindings, fib: Option<FibConvention>) -> Result<(), Fail> {
    let ast = scripts::builtin_identity(id)?;
    let options = EvalOptions {
        fib: fib.unwrap_or_default(),
    };
    if !lang::constraints_hold(&ast, &params)? {
        return Err(Fail::Usage(format!("parameters violate the constraints of {id}")));
    }
    let lhs = eval_expr_with(&ast.lhs, &params, &ast.indeterminates, options)?;
    let rhs = eval_expr_with(&ast.rhs, &params, &ast.indeterminates, options)?;
    let oracle = harness::oracle_sum_with(id, &params, options.fib)?;
    println!("dsl lhs:    {lhs}");
    println!("dsl rhs:    {rhs}");
    println!("oracle lhs: {oracle}");
    let agree = lhs == oracle;
    println!("lhs paths agree: {}", if agree { "yes" } else { "no" });
    println!("identity holds: {}", if lhs == rhs { "yes" } else { "no" });
    if agree && lhs == rhs {
        Ok(())
    } else {
        Err(Fail::Verification)
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    if let Ok(text) = std::env::var("PASCAL_CHASE_MAX_ROW") {
        let rows: usize = text
            .trim()
            .parse()
            .map_err(|_| Fail::Usage(format!("PASCAL_CHASE_MAX_ROW must be a row count, got `{text}`")))?;
        triangle::set_max_row(rows);
    }
    match cli.command {
        Command::List { json } => list(json),
        Command::Verify(args) => verify(args),
        Command::Prove { id, params, out } => prove(&id, bindings(params), out),
        Command::Check { cert, json } => check(&cert, json),
        Command::Render {
            cert,
            figure,
            format,
            out_dir,
            cell_size,
            labels,
        } => render_cmd(cert, figure, format, &out_dir, cell_size, labels),
        Command::Oracle {
            id,
            params,
            fib_convention,
        } => oracle(&id, bindings(params), fib_convention),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Verification) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
