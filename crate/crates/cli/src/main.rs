use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use eqcolor::bounds::{edge_threshold, lemma_bound, LemmaBound};
use eqcolor::coloring::{is_equitable, is_proper, Color, Coloring};
use eqcolor::experiments::{mc_estimate, EstimateReport, McParams, Quantity, DEFAULT_EXACT_BUDGET};
use eqcolor::hypergraph::Hypergraph;
use eqcolor::interval::choose_p;
use eqcolor::oracle::{brute_force_equitable, DEFAULT_ENUMERATION_BUDGET};
use eqcolor::rebalance::{compute_p_tilde, compute_q};
use eqcolor::solver::{solve_equitable, ForcePath, Outcome, SolveConfig};

#[derive(Parser)]
#[command(
    name = "eqcolor",
    version,
    about = "Equitable colorings of uniform hypergraphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: u64,
    /// Solver restart cap.
    #[arg(long, global = true, default_value_t = 10_000)]
    restarts: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Reject instances whose vertex count is not divisible by r.
    #[arg(long, global = true)]
    strict_divisibility: bool,
    /// Include chain records and rebalance plans in solver output.
    #[arg(long, global = true)]
    explain: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Auto,
    Balanced,
    Algorithm1,
}

#[derive(Subcommand)]
enum Command {
    /// Print a random instance.
    Gen {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        /// Number of edges.
        #[arg(short)]
        e: usize,
    },
    /// Search for an equitable coloring.
    Solve {
        /// Instance file; standard input when absent.
        input: Option<PathBuf>,
        #[arg(short, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
        /// Disable the greedy repair fallback.
        #[arg(long)]
        no_repair: bool,
    },
    /// Check a coloring against an instance.
    Verify {
        instance: PathBuf,
        coloring: PathBuf,
    },
    /// Decide by exhaustive search whether an equitable coloring exists.
    Oracle {
        input: Option<PathBuf>,
        #[arg(short, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
    },
    /// Monte Carlo estimate of a quantity: mono-edge, expected-x:I, excess,
    /// dangerous, balanced-mono, chain:E1,E2,...@I or deflected:V.
    Mc {
        quantity: String,
        input: Option<PathBuf>,
        #[arg(short, default_value_t = 2)]
        r: usize,
        /// Partition parameter; defaults to the standard choice for n and r.
        #[arg(long)]
        p: Option<f64>,
        /// Also compute the exact value by enumeration (tiny instances).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_EXACT_BUDGET)]
        budget: u128,
    },
    /// Print the edge threshold and the lemma bounds.
    Bounds {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        r: usize,
        /// Chain length for the chain probability bound.
        #[arg(short, default_value_t = 1)]
        k: usize,
        /// Vertex count for q and p̃.
        #[arg(short)]
        m: Option<usize>,
    },
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
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            Ok(s)
        }
    }
}

fn read_instance(path: Option<&Path>) -> Result<Hypergraph> {
    Ok(Hypergraph::parse_any(&read_input(path)?)?)
}

/// Accepts a coloring object, a bare color array, or a solver report.
fn parse_coloring(text: &str) -> Result<Coloring> {
    let v: Value = serde_json::from_str(text).context("coloring is not valid JSON")?;
    let v = match v.pointer("/outcome/coloring") {
        Some(inner) => inner.clone(),
        None => v,
    };
    let colors: Vec<Color> = match &v {
        Value::Array(_) => serde_json::from_value(v.clone())?,
        Value::Object(o) => {
            serde_json::from_value(o.get("colors").cloned().context("missing `colors`")?)?
        }
        _ => bail!("expected a coloring object or an array of colors"),
    };
    let r = match v.get("r") {
        Some(r) => serde_json::from_value(r.clone())?,
        None => colors.iter().copied().max().unwrap_or(1) as usize,
    };
    Ok(Coloring::from_colors(r, &colors)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let g = cli.global;
    match cli.command {
        Command::Gen { m, n, e } => {
            let h = Hypergraph::generate_random(m, n, e, g.seed)?;
            match g.format {
                Format::Json => println!("{}", h.to_json()),
                _ => print!("{}", h.to_text()),
            }
            Ok(0)
        }
        Command::Solve {
            input,
            r,
            path,
            no_repair,
        } => {
            let h = read_instance(input.as_deref())?;
            let cfg = SolveConfig {
                max_restarts: g.restarts,
                seed: g.seed,
                force_path: match path {
                    PathArg::Auto => ForcePath::Auto,
                    PathArg::Balanced => ForcePath::BalancedOnly,
                    PathArg::Algorithm1 => ForcePath::Algorithm1Only,
                },
                allow_fallback_repair: !no_repair,
                strict_divisibility: g.strict_divisibility,
                explain: g.explain,
                ..SolveConfig::default()
            };
            let report = solve_equitable(&h, r, &cfg)?;
            let code = if report.is_success() { 0 } else { 2 };
            match (&report.outcome, g.format) {
                (Outcome::Success(c), Format::Text) => {
                    let colors: Vec<String> = c.to_vec().iter().map(ToString::to_string).collect();
                    println!(
                        "success after {} attempts ({:?} path)",
                        report.attempts, report.path
                    );
                    println!("colors: {}", colors.join(" "));
                    println!("sizes: {:?}", c.class_sizes());
                }
                (_, Format::Text) => {
                    println!(
                        "no equitable coloring found in {} attempts ({:?} path)",
                        report.attempts, report.path
                    )
                }
                (Outcome::Success(c), _) if !g.explain => print_json(c)?,
                _ if g.explain => print_json(&report)?,
                _ => {
                    let failures: serde_json::Map<String, Value> = report
                        .failure_counts()
                        .into_iter()
                        .map(|(k, n)| (format!("{k:?}"), json!(n)))
                        .collect();
                    print_json(&json!({
                        "outcome": report.outcome,
                        "attempts": report.attempts,
                        "path": report.path,
                        "failures": failures,
                    }))?
                }
            }
            Ok(code)
        }
        Command::Verify { instance, coloring } => {
            let h = read_instance(Some(&instance))?;
            let c = parse_coloring(&read_input(Some(&coloring))?)?;
            let proper = is_proper(&h, &c)?;
            let equitable = is_equitable(&h, &c)?;
            let mono: Vec<usize> = c
                .monochromatic_edges(&h)
                .into_iter()
                .map(|(e, _)| e)
                .collect();
            match g.format {
                Format::Text => {
                    println!("proper: {proper}");
                    println!("equitable: {equitable}");
                    println!("sizes: {:?}", c.class_sizes());
                    if !mono.is_empty() {
                        println!("monochromatic edges: {mono:?}");
                    }
                }
                _ => print_json(&json!({
                    "proper": proper,
                    "equitable": equitable,
                    "sizes": c.class_sizes(),
                    "monochromatic_edges": mono,
                }))?,
            }
            Ok(if equitable { 0 } else { 2 })
        }
        Command::Oracle { input, r, budget } => {
            let h = read_instance(input.as_deref())?;
            let found = brute_force_equitable(&h, r, budget)?;
            match g.format {
                Format::Text => match &found {
                    Some(c) => println!("feasible: {:?}", c.to_vec()),
                    None => println!("infeasible"),
                },
                _ => print_json(&json!({ "feasible": found.is_some(), "coloring": found }))?,
            }
            Ok(if found.is_some() { 0 } else { 2 })
        }
        Command::Mc {
            quantity,
            input,
            r,
            p,
            exact,
            budget,
        } => {
            let q: Quantity = quantity.parse()?;
            let h = read_instance(input.as_deref())?;
            let params = McParams {
                p,
                exact,
                exact_budget: budget,
            };
            let report = mc_estimate(&q, &h, r, &params, g.trials, g.seed)?;
            print_report(&report, g.format)?;
            Ok(0)
        }
        Command::Bounds { n, r, k, m } => {
            if n < 2 || r < 2 {
                bail!("bounds need n >= 2 and r >= 2");
            }
            let t = edge_threshold(n, r);
            let p = choose_p(n, r)?;
            let mut rows = vec![
                ("threshold", t.value),
                ("ln_threshold", t.ln_value),
                ("p", p),
                (
                    "ordered_chain_prob",
                    lemma_bound(LemmaBound::OrderedChainProb { k }, n, r),
                ),
                (
                    "mono_edge_prob",
                    lemma_bound(LemmaBound::MonoEdgeProb, n, r),
                ),
                ("expected_x", lemma_bound(LemmaBound::ExpectedX, n, r)),
                (
                    "dangerous_count",
                    lemma_bound(LemmaBound::DangerousCount, n, r),
                ),
            ];
            let mut p_tilde_note = None;
            if let Some(m) = m {
                let q = compute_q(m, n, r, p);
                rows.push(("q", q));
                match compute_p_tilde(q, m, r, p) {
                    Ok(pt) => rows.push(("p_tilde", pt)),
                    Err(e) => p_tilde_note = Some(e.to_string()),
                }
            }
            match g.format {
                Format::Text => {
                    for (name, v) in &rows {
                        println!("{name}: {v:.6e}");
                    }
                    println!("asymptotic_regime: {}", t.asymptotic_regime);
                    if let Some(note) = &p_tilde_note {
                        println!("p_tilde: {note}");
                    }
                }
                Format::Csv => {
                    println!("name,value");
                    for (name, v) in &rows {
                        println!("{name},{v:e}");
                    }
                }
                Format::Json => {
                    let mut obj: serde_json::Map<String, Value> = rows
                        .iter()
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect();
                    obj.insert("asymptotic_regime".into(), json!(t.asymptotic_regime));
                    obj.insert("k".into(), json!(k));
                    if let Some(note) = p_tilde_note {
                        obj.insert("p_tilde_error".into(), json!(note));
                    }
                    print_json(&obj)?;
                }
            }
            Ok(0)
        }
    }
}

fn print_report(rep: &EstimateReport, format: Format) -> Result<()> {
    match format {
        Format::Json => print_json(rep),
        Format::Csv => {
            println!("quantity,trials,estimate,half_width,comparison_kind,comparison_value");
            let (kind, value) = match &rep.comparison {
                Some(c) => (
                    serde_json::to_value(c.kind)?
                        .as_str()
                        .unwrap_or("")
                        .to_string(),
                    c.value.to_string(),
                ),
                None => (String::new(), String::new()),
            };
            println!(
                "\"{}\",{},{},{},{kind},{value}",
                rep.quantity, rep.trials, rep.estimate, rep.half_width
            );
            Ok(())
        }
        Format::Text => {
            println!(
                "{}: {:.6} ± {:.6} ({} trials)",
                rep.quantity, rep.estimate, rep.half_width, rep.trials
            );
            for c in rep.comparison.iter().chain(&rep.context) {
                println!(
                    "  {}: {:.6e}",
                    serde_json::to_value(c.kind)?.as_str().unwrap_or(""),
                    c.value
                );
            }
            Ok(())
        }
    }
}
