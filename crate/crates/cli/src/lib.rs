//! Command implementations behind the `fermigraph` binary. Every command
//! renders into a string so the binary, the tests and the acceptance suite
//! share one code path.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fermigraph::graph::{export_graph, ExportFormat};
use fermigraph::irreps::mixture_spectrum_by_symmetry;
use fermigraph::physics::{energy_at, SolveMethod, ground_state_of, interchange_walk, lieb_mattis_table, WalkConfig};
use fermigraph::spectral::{box_gap, full_spectrum, spectral_gap};
use fermigraph::weights::{box_weights, load_weights, random_weights, uniform_weights, DEFAULT_RANDOM_RANGE};
use fermigraph::{Partition, SchreierGraph, WeightSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "fermigraph", version, about = "Snippet-space spectra of strongly repulsive 1D fermionic mixtures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Component populations, e.g. `2,2` or `3,1,1`.
    #[arg(long, global = true)]
    pub mixture: Option<String>,

    #[arg(
        long,
        global = true,
        help = "uniform:α, box:L, random:seed or file:path; {N} in the path is replaced by the particle number"
    )]
    pub weights: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Relative tolerance for oracle comparisons, scaled by `max(1, d)`.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Random seed for walk trajectories.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Cross-check against the dense eigensolver.
    #[arg(long, global = true)]
    pub oracle: bool,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Labelled spectrum by symmetry class.
    Spectrum,
    /// Spectral gap K₂ over a range of particle numbers.
    Gap {
        /// A single N or an inclusive range `A..B`.
        #[arg(long)]
        n: String,
    },
    /// Export the Schreier graph.
    Graph,
    /// Simulate the interchange process.
    Walk {
        #[arg(long, default_value_t = 10.0)]
        duration: f64,
        #[arg(long, default_value_t = 10_000)]
        trajectories: usize,
        /// Jumps per trajectory before it stops.
        #[arg(long)]
        events: Option<u64>,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Energy-slope ordering of all symmetry classes of N particles.
    Liebmattis {
        #[arg(long)]
        n: usize,
    },
    /// Largest eigenpair of the mixture and its symmetry class.
    Groundstate {
        /// Fermionized energy E_A for the first-order energy.
        #[arg(long)]
        energy_a: Option<f64>,
        /// Coupling g for the first-order energy.
        #[arg(long)]
        coupling: Option<f64>,
    },
    /// Load and check a weight file.
    WeightsValidate { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

/// What a command produced: exit code plus both streams.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<fermigraph::Error> for Failure {
    fn from(e: fermigraph::Error) -> Self {
        use fermigraph::Error as E;
        match e {
            E::InvalidPartition(_)
            | E::InvalidWeights(_)
            | E::Parse { .. }
            | E::UnknownFormat(_)
            | E::SizeMismatch { .. }
            | E::OutOfRange(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<Rendered, Failure>;

/// Command output before it is routed to a file or standard output.
struct Rendered {
    body: String,
    warnings: Vec<String>,
    code: i32,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered {
            body,
            warnings: Vec::new(),
            code: EXIT_OK,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    let mut warnings = Vec::new();
    let result = match &cli.command {
        Command::Spectrum => cmd_spectrum(cli, &mut warnings),
        Command::Gap { n } => cmd_gap(cli, n),
        Command::Graph => cmd_graph(cli, &mut warnings),
        Command::Walk {
            duration,
            trajectories,
            events,
            start,
        } => {
            let cfg = WalkConfig {
                duration: *duration,
                trajectories: *trajectories,
                seed: cli.seed.unwrap_or(0),
                start: *start,
                max_events: *events,
                ..WalkConfig::default()
            };
            cmd_walk(cli, cfg, &mut warnings)
        }
        Command::Liebmattis { n } => cmd_liebmattis(cli, *n),
        Command::Groundstate { energy_a, coupling } => cmd_groundstate(cli, *energy_a, *coupling, &mut warnings),
        Command::WeightsValidate { path } => cmd_weights_validate(cli, path),
    };
    let mut out = Output::default();
    for w in warnings {
        let _ = writeln!(out.stderr, "warning: {w}");
    }
    match result {
        Ok(rendered) => {
            for w in rendered.warnings {
                let _ = writeln!(out.stderr, "{w}");
            }
            out.code = rendered.code;
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &rendered.body) {
                        let _ = writeln!(out.stderr, "error: cannot write {}: {e}", path.display());
                        out.code = EXIT_USAGE;
                    }
                }
                None => out.stdout = rendered.body,
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(out.stderr, "error: {msg}");
            out.code = EXIT_USAGE;
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(out.stderr, "error: {msg}");
            out.code = EXIT_COMPUTE;
        }
    }
    out
}

/// Table-mode number: twelve decimals with trailing zeros dropped.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn parse_mixture(cli: &Cli, warnings: &mut Vec<String>) -> std::result::Result<Partition, Failure> {
    let text = cli
        .mixture
        .as_deref()
        .ok_or_else(|| Failure::Usage("--mixture is required".into()))?;
    let parts = text
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("mixture '{text}': {e}")))?;
    let (nu, changed) = Partition::normalized(parts)?;
    if changed {
        warnings.push(format!("mixture '{text}' normalized to {nu}"));
    }
    Ok(nu)
}

/// Builds the weight set for `n` particles from the `--weights` source;
/// `uniform:1` when absent.
fn weights_for(cli: &Cli, n: usize) -> std::result::Result<WeightSet, Failure> {
    let spec = cli.weights.as_deref().unwrap_or("uniform:1");
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("weights '{spec}': expected kind:value")))?;
    let number = |what: &str| -> std::result::Result<f64, Failure> {
        arg.parse::<f64>()
            .map_err(|_| Failure::Usage(format!("weights '{spec}': {what} must be a number")))
    };
    if n < 2 && kind != "file" {
        return Ok(WeightSet::single_particle());
    }
    match kind {
        "uniform" => Ok(uniform_weights(n, number("alpha")?)?),
        "box" => Ok(box_weights(n, number("length")?)?),
        "random" => {
            let seed = arg
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("weights '{spec}': seed must be an integer")))?;
            Ok(random_weights(n, seed, DEFAULT_RANDOM_RANGE)?)
        }
        "file" => {
            let path = arg.replace("{N}", &n.to_string()).replace("{n}", &n.to_string());
            let w = load_weights(&path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            if w.n() != n {
                return Err(Failure::Usage(format!("{path} holds weights for N = {}, need N = {n}", w.n())));
            }
            Ok(w)
        }
        other => Err(Failure::Usage(format!("unknown weight source '{other}'"))),
    }
}

fn mixture_and_weights(cli: &Cli, warnings: &mut Vec<String>) -> std::result::Result<(Partition, WeightSet), Failure> {
    let nu = parse_mixture(cli, warnings)?;
    let w = weights_for(cli, nu.n())?;
    Ok((nu, w))
}

fn build(nu: &Partition, w: &WeightSet) -> std::result::Result<SchreierGraph, Failure> {
    SchreierGraph::build(nu, w).map_err(Failure::from)
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let pad = widths[i] - c.chars().count();
                s.push_str(c);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn cmd_spectrum(cli: &Cli, warnings: &mut Vec<String>) -> CmdResult {
    let (nu, w) = mixture_and_weights(cli, warnings)?;
    let spectrum = mixture_spectrum_by_symmetry(&nu, &w)?;
    let labels = spectrum.labels().expect("block spectra are labelled");
    let mut code = EXIT_OK;
    let mut notes = Vec::new();
    let oracle = if cli.oracle {
        let rtol = cli.tolerance.unwrap_or(1e-9);
        if rtol.is_nan() || rtol < 0.0 || rtol.is_infinite() {
            return Err(Failure::Usage(format!("tolerance {rtol} must be a nonnegative number")));
        }
        let tol = rtol * w.scale();
        let dense = full_spectrum(&build(&nu, &w)?)?;
        let deviation = spectrum.max_deviation(&dense);
        let passed = deviation <= tol;
        if !passed {
            code = EXIT_MISMATCH;
            notes.push(format!(
                "oracle mismatch: block and dense spectra differ by {deviation:e} (tolerance {tol:e})"
            ));
        }
        Some(json!({ "max_deviation": deviation, "tolerance": tol, "passed": passed }))
    } else {
        None
    };
    let body = match cli.format.unwrap_or(Format::Table) {
        Format::Table => table(
            &["eigenvalue", "class"],
            &spectrum
                .values()
                .iter()
                .zip(labels)
                .map(|(v, l)| vec![fmt_num(*v), l.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_text(
            &["eigenvalue", "class"],
            spectrum.values().iter().zip(labels).map(|(v, l)| vec![v.to_string(), l.to_string()]),
        ),
        Format::Json => to_json(&json!({
            "mixture": nu,
            "weights": w.alphas(),
            "eigenvalues": spectrum
                .values()
                .iter()
                .zip(labels)
                .map(|(v, l)| json!({ "value": v, "class": l.to_string() }))
                .collect::<Vec<_>>(),
            "oracle": oracle,
        })),
        Format::Dot => return Err(Failure::Usage("spectrum has no dot output".into())),
    };
    Ok(Rendered {
        body,
        warnings: notes,
        code,
    })
}

fn parse_range(text: &str) -> std::result::Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--n '{text}': expected N or A..B"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (text, text),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    if lo < 2 {
        return Err(Failure::Usage("the spectral gap needs N >= 2".into()));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct GapRow {
    n: usize,
    k2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<f64>,
}

fn cmd_gap(cli: &Cli, range: &str) -> CmdResult {
    let (lo, hi) = parse_range(range)?;
    let box_length = cli
        .weights
        .as_deref()
        .and_then(|s| s.strip_prefix("box:"))
        .and_then(|l| l.parse::<f64>().ok());
    let mut rows = Vec::new();
    for n in lo..=hi {
        let w = weights_for(cli, n)?;
        let k2 = spectral_gap(&w)?;
        let closed_form = box_length.map(|l| box_gap(n, l)).transpose()?;
        rows.push(GapRow { n, k2, closed_form });
    }
    let increasing = rows.windows(2).all(|p| p[1].k2 > p[0].k2);
    let decreasing = rows.windows(2).all(|p| p[1].k2 < p[0].k2);
    let body = match cli.format.unwrap_or(Format::Table) {
        Format::Table => {
            let mut header = vec!["N", "K2"];
            if box_length.is_some() {
                header.push("closed_form");
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.n.to_string(), fmt_num(r.k2)];
                    if let Some(c) = r.closed_form {
                        row.push(fmt_num(c));
                    }
                    row
                })
                .collect();
            table(&header, &cells)
        }
        Format::Csv => {
            let mut header = vec!["n", "k2"];
            if box_length.is_some() {
                header.push("closed_form");
            }
            csv_text(
                &header,
                rows.iter().map(|r| {
                    let mut row = vec![r.n.to_string(), r.k2.to_string()];
                    if let Some(c) = r.closed_form {
                        row.push(c.to_string());
                    }
                    row
                }),
            )
        }
        Format::Json => to_json(&json!({
            "weights": cli.weights.as_deref().unwrap_or("uniform:1"),
            "rows": rows,
            "monotone_increasing": increasing,
            "monotone_decreasing": decreasing,
        })),
        Format::Dot => return Err(Failure::Usage("gap has no dot output".into())),
    };
    Ok(Rendered::ok(body))
}

fn cmd_graph(cli: &Cli, warnings: &mut Vec<String>) -> CmdResult {
    let (nu, w) = mixture_and_weights(cli, warnings)?;
    let g = build(&nu, &w)?;
    let format = match cli.format.unwrap_or(Format::Dot) {
        Format::Dot => ExportFormat::Dot,
        Format::Json => ExportFormat::Json,
        other => return Err(Failure::Usage(format!("graph exports dot or json, not {other:?}"))),
    };
    let body = String::from_utf8(export_graph(&g, format)).expect("exports are utf-8");
    Ok(Rendered::ok(body))
}

fn cmd_walk(cli: &Cli, cfg: WalkConfig, warnings: &mut Vec<String>) -> CmdResult {
    let (nu, w) = mixture_and_weights(cli, warnings)?;
    let g = build(&nu, &w)?;
    let stats = interchange_walk(&g, &cfg)?;
    let words: Vec<String> = g.graph().labels().to_vec();
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "mixture": nu,
            "weights": w.alphas(),
            "seed": cfg.seed,
            "snippets": words,
            "stats": stats,
        })),
        Format::Table => {
            let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), fmt_num);
            let mut s = String::new();
            let _ = writeln!(s, "trajectories  {}", stats.trajectories);
            let _ = writeln!(s, "duration      {}", fmt_num(stats.duration));
            let _ = writeln!(s, "events        {}", stats.events);
            let _ = writeln!(s, "relaxation    {}", opt(stats.relaxation_rate));
            let _ = writeln!(s, "gap           {}", opt(stats.reference_gap));
            let _ = writeln!(s, "sign decay    {}", opt(stats.sign_decay_rate));
            let _ = writeln!(s, "tv(uniform)   {}", fmt_num(stats.occupancy_tv_from_uniform()));
            s.push('\n');
            let rows: Vec<Vec<String>> = words
                .iter()
                .enumerate()
                .map(|(i, word)| {
                    vec![
                        word.clone(),
                        fmt_num(stats.occupancy[i]),
                        stats.final_histogram[i].to_string(),
                    ]
                })
                .collect();
            s.push_str(&table(&["snippet", "occupancy", "final"], &rows));
            s
        }
        Format::Csv => csv_text(
            &["snippet", "occupancy", "final"],
            words.iter().enumerate().map(|(i, word)| {
                vec![
                    word.clone(),
                    stats.occupancy[i].to_string(),
                    stats.final_histogram[i].to_string(),
                ]
            }),
        ),
        Format::Dot => return Err(Failure::Usage("walk has no dot output".into())),
    };
    Ok(Rendered::ok(body))
}

fn cmd_liebmattis(cli: &Cli, n: usize) -> CmdResult {
    if n < 2 {
        return Err(Failure::Usage("liebmattis needs N >= 2".into()));
    }
    let w = weights_for(cli, n)?;
    let t = lieb_mattis_table(n, &w)?;
    let code = if t.violations == 0 { EXIT_OK } else { EXIT_MISMATCH };
    let mut notes = Vec::new();
    if t.violations > 0 {
        notes.push(format!("{} ordering violations among comparable pairs", t.violations));
    }
    let body = match cli.format.unwrap_or(Format::Table) {
        Format::Json => to_json(&t),
        Format::Csv => csv_text(
            &["class", "dimension", "k_max"],
            t.classes
                .iter()
                .map(|c| vec![c.shape.to_string(), c.dimension.to_string(), c.k_max.to_string()]),
        ),
        Format::Table => {
            let rows: Vec<Vec<String>> = t
                .classes
                .iter()
                .map(|c| vec![c.shape.to_string(), c.dimension.to_string(), fmt_num(c.k_max)])
                .collect();
            let mut s = table(&["class", "dim", "K_max"], &rows);
            let _ = writeln!(
                s,
                "\ncomparable pairs: {}, violations: {}",
                t.comparable_pairs(),
                t.violations
            );
            let incomparable: Vec<_> = t.comparisons.iter().filter(|c| !c.comparable).collect();
            if !incomparable.is_empty() {
                let _ = writeln!(s, "incomparable pairs:");
                let rows: Vec<Vec<String>> = incomparable
                    .iter()
                    .map(|c| vec![c.upper.to_string(), c.lower.to_string(), fmt_num(c.difference)])
                    .collect();
                s.push_str(&table(&["upper", "lower", "K_upper - K_lower"], &rows));
            }
            s
        }
        Format::Dot => return Err(Failure::Usage("liebmattis has no dot output".into())),
    };
    Ok(Rendered {
        body,
        warnings: notes,
        code,
    })
}

fn cmd_groundstate(
    cli: &Cli,
    energy_a: Option<f64>,
    coupling: Option<f64>,
    warnings: &mut Vec<String>,
) -> CmdResult {
    let (nu, w) = mixture_and_weights(cli, warnings)?;
    let g = build(&nu, &w)?;
    let report = ground_state_of(&g)?;
    let energy = match (energy_a, coupling) {
        (Some(e), Some(c)) => Some(energy_at(&report, e, c)?),
        (None, None) => None,
        _ => return Err(Failure::Usage("--energy-a and --coupling go together".into())),
    };
    let class = report
        .symmetry
        .candidates()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" | ");
    let words = g.graph().labels();
    let body = match cli.format.unwrap_or(Format::Table) {
        Format::Json => to_json(&json!({
            "report": report,
            "snippets": words,
            "energy_formula": report.energy_formula(),
            "energy": energy,
        })),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "mixture   {nu}");
            let _ = writeln!(s, "K_max     {}", fmt_num(report.k_max));
            let _ = writeln!(s, "class     {class}");
            let method = match report.method {
                SolveMethod::Dense => "dense",
                SolveMethod::Lanczos => "lanczos",
            };
            let _ = writeln!(s, "method    {method}");
            let _ = writeln!(s, "residual  {:e}", report.residual);
            let _ = writeln!(s, "energy    {}", report.energy_formula());
            if let Some(e) = energy {
                let _ = writeln!(s, "E         {}", fmt_num(e));
            }
            s.push('\n');
            let rows: Vec<Vec<String>> = words
                .iter()
                .zip(&report.eigenvector)
                .map(|(word, a)| vec![word.clone(), fmt_num(*a)])
                .collect();
            s.push_str(&table(&["snippet", "amplitude"], &rows));
            s
        }
        Format::Csv => csv_text(
            &["snippet", "amplitude"],
            words.iter().zip(&report.eigenvector).map(|(word, a)| vec![word.clone(), a.to_string()]),
        ),
        Format::Dot => return Err(Failure::Usage("groundstate has no dot output".into())),
    };
    Ok(Rendered::ok(body))
}

fn cmd_weights_validate(cli: &Cli, path: &Path) -> CmdResult {
    let w = load_weights(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let min = w.alphas().iter().copied().fold(f64::INFINITY, f64::min);
    let max = w.alphas().iter().copied().fold(0.0, f64::max);
    let body = match cli.format.unwrap_or(Format::Table) {
        Format::Json => to_json(&json!({
            "path": path.display().to_string(),
            "n": w.n(),
            "alphas": w.alphas(),
            "d": w.total(),
            "min": min,
            "max": max,
            "provenance": w.provenance(),
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "valid   {}", path.display());
            let _ = writeln!(s, "N       {}", w.n());
            let _ = writeln!(s, "d       {}", fmt_num(w.total()));
            let _ = writeln!(s, "min     {}", fmt_num(min));
            let _ = writeln!(s, "max     {}", fmt_num(max));
            s
        }
    };
    Ok(Rendered::ok(body))
}
