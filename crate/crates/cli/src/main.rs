//! `incidence`: generate, verify and search point-line configurations.
//!
//! Exit codes: 0 pass or found, 1 verification failure, 2 usage or parse
//! error, 3 certified absent, 4 unknown (budget exhausted).

mod checks;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use incidence::configurations::{
    count_incidences, crossing_inequality_report, degree_csv, erdos_config, extended_gon_config,
    grid_host, hexagon_embedded_host, matching_graph, subdivided_clique_realization, write_svg,
    Chart, Configuration, SvgOptions,
};
use incidence::lowerbound::{exponent_report, trials_csv};
use incidence::patterns::{
    contains, count_embeddings, count_subdivided_cliques, pattern_grid, pattern_hk,
    pattern_subdivided_clique, Budget, Pattern, SearchOutcome,
};
use incidence::projective::{dualize, GonMode};

#[derive(Parser)]
#[command(
    name = "incidence",
    version,
    about = "Point-line incidence configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration or pattern file.
    Gen(GenArgs),
    /// Run a named verification.
    Verify(VerifyArgs),
    /// Search a host for a pattern.
    Find(FindArgs),
    /// Count embeddings or subdivided cliques.
    Count(CountArgs),
    /// Count incidences, optionally writing per-element degrees as CSV.
    Incidences(IncidencesArgs),
    /// Matching-graph crossing report.
    Crossings(CrossingsArgs),
    /// Write the dual configuration.
    Dualize(DualizeArgs),
    /// Run the random deletion pipeline and fit incidence exponents.
    Lowerbound(LowerboundArgs),
    /// Draw a configuration as SVG.
    ExportSvg(ExportSvgArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Erdos,
    ExtendedGon,
    SubdividedClique,
    Grid,
    HexagonEmbedded,
    GridHost,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long = "A")]
    a: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Output file; JSON goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    K6Embedding,
    CrossRatio,
    Degrees,
    NivenRange,
    Realization,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    /// A value or a `lo..hi` range.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    kmax: Option<u64>,
}

#[derive(Args)]
struct FindArgs {
    #[arg(long)]
    host: PathBuf,
    /// A pattern file or one of `hkN`, `gridN`, `cliqueN`.
    #[arg(long)]
    pattern: String,
    /// Node limit; unlimited when absent.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    host: PathBuf,
    #[arg(long, conflicts_with = "subdivided")]
    pattern: Option<String>,
    /// Count subdivided k-cliques with the specialized routine.
    #[arg(long)]
    subdivided: Option<usize>,
    #[arg(long)]
    modulo_symmetry: bool,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct IncidencesArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CrossingsArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[arg(long, default_value = "dual")]
    chart: String,
}

#[derive(Args)]
struct DualizeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// A value or a `lo..hi` range.
    #[arg(long = "A")]
    a: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
    /// Trial CSV; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Summary JSON; stdout when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct ExportSvgArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overlay the matching graph.
    #[arg(long)]
    matching: bool,
    #[arg(long)]
    labels: bool,
    #[arg(long)]
    no_lines: bool,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn failed(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

/// Parses `n` or `lo..hi` (inclusive).
pub(crate) fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|e| format!("bad number `{t}` in `{s}`: {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

fn need<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::usage(format!("`{kind}` needs --{flag}")))
}

fn load_config(path: &Path) -> Result<Configuration, Failure> {
    Configuration::load(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn builtin_pattern(name: &str) -> Option<Result<Pattern, Failure>> {
    let number = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|s| s.parse::<usize>().ok())
    };
    let wrap = |r: Result<Pattern, incidence::patterns::PatternError>| r.map_err(Failure::usage);
    if let Some(k) = number("hk") {
        return Some(wrap(pattern_hk(k)));
    }
    if let Some(t) = number("grid") {
        return Some(wrap(pattern_grid(t)));
    }
    number("clique").map(|k| wrap(pattern_subdivided_clique(k)))
}

fn load_pattern(spec: &str) -> Result<Pattern, Failure> {
    if let Some(p) = builtin_pattern(spec) {
        return p;
    }
    Pattern::load(Path::new(spec))
        .map_err(|e| Failure::usage(format!("cannot read pattern {spec}: {e}")))
}

fn write_or_print(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, body)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn cmd_gen(args: GenArgs) -> Outcome {
    let kind_name = args
        .kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let config = match args.kind {
        GenKind::Grid => {
            let p = pattern_grid(need(args.t, "t", &kind_name)?).map_err(Failure::usage)?;
            let body = p.to_json().map_err(Failure::failed)?;
            if args.out.is_some() {
                write_or_print(args.out.as_deref(), &body)?;
                println!(
                    "pattern {}: {} points, {} lines, {} edges",
                    p.name,
                    p.n_points(),
                    p.n_lines(),
                    p.edges.len()
                );
            } else {
                println!("{body}");
            }
            return Ok(0);
        }
        GenKind::Erdos => erdos_config(need(args.a, "A", &kind_name)?),
        GenKind::ExtendedGon => {
            let mode: GonMode = args.mode.parse().map_err(Failure::usage)?;
            extended_gon_config(need(args.k, "k", &kind_name)?, mode)
        }
        GenKind::SubdividedClique => subdivided_clique_realization(need(args.k, "k", &kind_name)?),
        GenKind::HexagonEmbedded => hexagon_embedded_host(),
        GenKind::GridHost => grid_host(args.n.unwrap_or(3)),
    }
    .map_err(Failure::usage)?;
    let count = count_incidences(&config).map_err(Failure::failed)?;
    let body = config.to_json().map_err(Failure::failed)?;
    let summary = format!(
        "points={} lines={} incidences={}{}",
        config.points.len(),
        config.lines.len(),
        count.incidences,
        if count.ambiguous > 0 {
            format!(" ambiguous={}", count.ambiguous)
        } else {
            String::new()
        }
    );
    match args.out {
        Some(path) => {
            write_or_print(Some(&path), &body)?;
            println!("{summary}");
        }
        None => {
            println!("{body}");
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn cmd_find(args: FindArgs) -> Outcome {
    let host = load_config(&args.host)?;
    let pattern = load_pattern(&args.pattern)?;
    let s = host.structure().map_err(Failure::usage)?;
    let budget = Budget(args.budget);
    let r = contains(&s, &pattern, budget).map_err(Failure::failed)?;
    let header = json!({
        "host": args.host.display().to_string(),
        "pattern": pattern.name,
        "budget": args.budget,
        "nodes": r.nodes,
    });
    let (status, code, pairs) = match &r.outcome {
        SearchOutcome::Found(e) => {
            let points: Vec<(String, usize)> = pattern
                .points
                .iter()
                .cloned()
                .zip(e.point_map.iter().copied())
                .collect();
            let lines: Vec<(String, usize)> = pattern
                .lines
                .iter()
                .cloned()
                .zip(e.line_map.iter().copied())
                .collect();
            ("found", 0, Some(json!({"points": points, "lines": lines})))
        }
        SearchOutcome::Absent => ("absent", 3, None),
        SearchOutcome::Unknown => ("unknown", 4, None),
    };
    println!(
        "{}",
        pretty(&json!({"run": header, "status": status, "embedding": pairs}))
    );
    Ok(code)
}

fn cmd_count(args: CountArgs) -> Outcome {
    let host = load_config(&args.host)?;
    let s = host.structure().map_err(Failure::usage)?;
    let budget = Budget(args.budget);
    let (report, complete) = match (args.subdivided, args.pattern.as_deref()) {
        (Some(k), _) => {
            let r = count_subdivided_cliques(&s, k, budget).map_err(Failure::usage)?;
            let complete = r.complete;
            let v = json!({
                "host": args.host.display().to_string(),
                "subdivided_k": k,
                "budget": args.budget,
                "count": r.count,
                "complete": r.complete,
                "nodes": r.nodes,
                "witnesses": r.witnesses,
            });
            (v, complete)
        }
        (None, Some(spec)) => {
            let p = load_pattern(spec)?;
            let r =
                count_embeddings(&s, &p, args.modulo_symmetry, budget).map_err(Failure::failed)?;
            let v = json!({
                "host": args.host.display().to_string(),
                "pattern": p.name,
                "budget": args.budget,
                "result": r,
            });
            (v, r.complete)
        }
        (None, None) => return Err(Failure::usage("count needs --pattern or --subdivided")),
    };
    println!("{}", pretty(&report));
    Ok(if complete { 0 } else { 4 })
}

fn cmd_incidences(args: IncidencesArgs) -> Outcome {
    let c = load_config(&args.config)?;
    let count = count_incidences(&c).map_err(Failure::failed)?;
    println!(
        "{}",
        pretty(&json!({
            "config": args.config.display().to_string(),
            "points": c.points.len(),
            "lines": c.lines.len(),
            "incidences": count.incidences,
            "ambiguous": count.ambiguous,
        }))
    );
    if let Some(path) = args.csv {
        write_or_print(Some(&path), &degree_csv(&c).map_err(Failure::failed)?)?;
    }
    Ok(0)
}

fn cmd_crossings(args: CrossingsArgs) -> Outcome {
    let c = load_config(&args.config)?;
    let chart: Chart = args.chart.parse().map_err(Failure::usage)?;
    let r = crossing_inequality_report(&c, args.t, chart).map_err(Failure::failed)?;
    println!(
        "{}",
        pretty(&json!({"config": args.config.display().to_string(), "report": r}))
    );
    Ok(0)
}

fn cmd_dualize(args: DualizeArgs) -> Outcome {
    let c = load_config(&args.config)?;
    let d = dualize(&c.points, &c.lines).map_err(Failure::failed)?;
    let incidences = c
        .incidence_list()
        .map_err(Failure::failed)?
        .into_iter()
        .map(|(p, l)| (l, p))
        .collect();
    let provenance = match d.shear {
        Some(q) => format!("dual of {} after shear 1/{q}", c.provenance),
        None => format!("dual of {}", c.provenance),
    };
    let dual = Configuration::with_incidences(d.points, d.lines, incidences, provenance)
        .and_then(|dual| dual.with_labels(c.line_labels.clone(), c.point_labels.clone()))
        .map_err(Failure::failed)?;
    let body = dual.to_json().map_err(Failure::failed)?;
    write_or_print(args.out.as_deref(), &body)?;
    if args.out.is_some() {
        println!(
            "points={} lines={} incidences={} shear={}",
            dual.points.len(),
            dual.lines.len(),
            dual.incidence_list().map_err(Failure::failed)?.len(),
            d.shear.map_or("none".to_string(), |q| q.to_string())
        );
    }
    Ok(0)
}

fn cmd_lowerbound(args: LowerboundArgs) -> Outcome {
    let (lo, hi) = parse_range(&args.a).map_err(Failure::usage)?;
    let a_values: Vec<usize> = (lo as usize..=hi as usize).collect();
    let report = exponent_report(&a_values, args.k, args.trials, args.seed, args.budget)
        .map_err(Failure::usage)?;
    let csv = trials_csv(&report).map_err(Failure::failed)?;
    match &args.csv {
        Some(p) => write_or_print(Some(p), &csv)?,
        None => print!("{csv}"),
    }
    let summary = pretty(&report);
    match &args.summary {
        Some(p) => write_or_print(Some(p), &summary)?,
        None if args.csv.is_some() => println!("{summary}"),
        None => eprintln!("{summary}"),
    }
    Ok(0)
}

fn cmd_export_svg(args: ExportSvgArgs) -> Outcome {
    let c = load_config(&args.config)?;
    let g = if args.matching {
        Some(matching_graph(&c).map_err(Failure::failed)?)
    } else {
        None
    };
    let opts = SvgOptions {
        draw_lines: !args.no_lines,
        draw_labels: args.labels,
        ..SvgOptions::default()
    };
    write_or_print(Some(&args.out), &write_svg(&c, g.as_ref(), &opts))?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => checks::cmd_verify(a),
        Command::Find(a) => cmd_find(a),
        Command::Count(a) => cmd_count(a),
        Command::Incidences(a) => cmd_incidences(a),
        Command::Crossings(a) => cmd_crossings(a),
        Command::Dualize(a) => cmd_dualize(a),
        Command::Lowerbound(a) => cmd_lowerbound(a),
        Command::ExportSvg(a) => cmd_export_svg(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
