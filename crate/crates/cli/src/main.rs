use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use lineperc::bounds::{big_m_r_bounds, big_t_r_bounds, critical_p, m_r_bounds, PlaneClass};
use lineperc::constructions::{
    broom_result, dual_hyperoval_union, hyperoval_complement, hyperoval_result,
    min_percolating_from_general_position, minimal_t3_set, oval_result, slow_percolating_set,
    ChoicePolicy, ConstructionResult,
};
use lineperc::percolation::{closure, is_minimal_percolating};
use lineperc::random_models::{
    bottleneck_csv_row, bottleneck_trials, threshold_scan, uniform_percolation_probability,
    Estimate, BOTTLENECK_CSV_HEADER, RNG_ALGORITHM,
};
use lineperc::search::{
    find_max_nonpercolating, find_max_time, find_min_percolating, Budget, Strategy,
};
use lineperc::{table, Error, IncidencePlane, Result};

#[derive(Parser, Debug)]
#[command(
    name = "lineperc",
    version,
    about = "Line percolation on finite projective planes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
enum Command {
    /// Build PG(2,q) and write it as a plane file.
    Plane(PlaneCmd),
    /// Run the dynamic from a given point set.
    Percolate(PercolateCmd),
    /// Build and verify a named configuration.
    Construct(ConstructCmd),
    /// Known bounds on m_r, M_r and T_r.
    Bounds(BoundsCmd),
    /// Search for extremal point sets.
    Search(SearchCmd),
    /// Monte Carlo experiments on random point sets.
    Mc(McCmd),
    /// Recompute the table of largest percolation times.
    Table(TableCmd),
}

#[derive(Args, Debug, Serialize)]
struct PlaneSource {
    /// Order of PG(2,q).
    #[arg(long, required_unless_present = "plane", conflicts_with = "plane")]
    q: Option<u64>,
    /// Plane file to load instead of building PG(2,q).
    #[arg(long)]
    plane: Option<PathBuf>,
}

impl PlaneSource {
    fn load(&self) -> Result<IncidencePlane> {
        match (&self.plane, self.q) {
            (Some(path), _) => IncidencePlane::load(path),
            (None, Some(q)) => IncidencePlane::pg2_of_order(q),
            (None, None) => Err(Error::Parse("either --q or --plane is required".into())),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Serialize)]
struct PlaneCmd {
    #[arg(long)]
    q: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct PercolateCmd {
    #[command(flatten)]
    #[serde(flatten)]
    source: PlaneSource,
    #[arg(long)]
    r: usize,
    /// Comma-separated point indices.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    points: Vec<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConstructionName {
    /// r lines through point 0.
    Broom,
    Oval,
    Hyperoval,
    /// Smallest percolating set from lines in general position.
    MinPerc,
    /// Minimal percolating set with time 3.
    T3,
    /// Percolating set with time r+1.
    Slow,
    /// Union of dual hyperoval lines (even q).
    DualHyperovalUnion,
    /// Complement of a hyperoval (even q).
    HyperovalComplement,
}

#[derive(Args, Debug, Serialize)]
struct ConstructCmd {
    #[arg(value_enum)]
    name: ConstructionName,
    #[command(flatten)]
    #[serde(flatten)]
    source: PlaneSource,
    #[arg(long)]
    r: Option<usize>,
    /// Resolve free choices by a seeded shuffle instead of lowest index.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ClassArg {
    Arbitrary,
    Desarguesian,
}

#[derive(Args, Debug, Serialize)]
struct BoundsCmd {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u64,
    #[arg(long, value_enum, default_value = "desarguesian")]
    class: ClassArg,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TargetArg {
    /// Smallest percolating set.
    Min,
    /// Largest non-percolating set.
    Max,
    /// Largest percolation time.
    Time,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Exact,
    Random,
    Hillclimb,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exact => Strategy::Exact,
            StrategyArg::Random => Strategy::Random,
            StrategyArg::Hillclimb => Strategy::Hillclimb,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct BudgetArgs {
    /// Node limit (closures for the heuristics).
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Search the whole tree instead of fixing the first point.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget> {
        let mut b = Budget::default().with_threads(self.threads);
        b.max_nodes = self.max_nodes;
        if let Some(s) = self.max_seconds {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::BadRange(format!(
                    "--max-seconds must be positive, got {s}"
                )));
            }
            b = b.with_time(Duration::from_secs_f64(s));
        }
        if self.no_symmetry {
            b = b.without_symmetry();
        }
        Ok(b)
    }
}

#[derive(Args, Debug, Serialize)]
struct SearchCmd {
    #[arg(value_enum)]
    target: TargetArg,
    #[command(flatten)]
    #[serde(flatten)]
    source: PlaneSource,
    #[arg(long)]
    r: usize,
    #[arg(long, value_enum, default_value = "exact")]
    strategy: StrategyArg,
    /// Required for the random and hillclimb strategies.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum McMode {
    /// Percolation probability of Bernoulli sets over a grid of p.
    Threshold,
    /// Percolation probability of uniform m-subsets.
    Uniform,
    /// tau_r against tau_perc along random orderings.
    Bottleneck,
}

#[derive(Args, Debug, Serialize)]
struct McCmd {
    #[arg(value_enum)]
    mode: McMode,
    #[command(flatten)]
    #[serde(flatten)]
    source: PlaneSource,
    #[arg(long)]
    r: usize,
    /// Comma-separated inclusion probabilities (threshold mode).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    grid: Vec<f64>,
    /// Read the grid as multiples of the critical probability q^(-(r+2)/r).
    #[arg(long)]
    relative: bool,
    /// Subset size (uniform mode).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct TableCmd {
    /// Largest order to include: 3, 5 or 7.
    #[arg(long)]
    qmax: usize,
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: u64,
    #[arg(long, default_value_t = 60.0)]
    max_seconds: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let config = serde_json::to_value(&cli.command)?;
    match &cli.command {
        Command::Plane(c) => cmd_plane(c, config),
        Command::Percolate(c) => cmd_percolate(c, config),
        Command::Construct(c) => cmd_construct(c, config),
        Command::Bounds(c) => cmd_bounds(c, config),
        Command::Search(c) => cmd_search(c, config),
        Command::Mc(c) => cmd_mc(c, config),
        Command::Table(c) => cmd_table(c, config),
    }
}

/// Writes `text` to the output file, or stdout.
fn write_out(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// The result object with the resolved configuration under "config".
fn with_config(config: Value, body: impl Serialize) -> Result<String> {
    let mut map = match serde_json::to_value(body)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("config".into(), config);
    let mut text = serde_json::to_string_pretty(&Value::Object(map))?;
    text.push('\n');
    Ok(text)
}

/// "# key=value" lines for each configuration entry.
fn csv_preamble(config: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = config {
        for (k, v) in map {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k}={v}\n"));
        }
    }
    out
}

fn cmd_plane(c: &PlaneCmd, config: Value) -> Result<()> {
    let plane = IncidencePlane::pg2_of_order(c.q)?;
    let report = plane.validate();
    if !report.is_plane() {
        return Err(Error::VerificationFailed {
            name: format!("PG(2,{})", c.q),
            check: "plane axioms".into(),
        });
    }
    let file = plane.to_file();
    match &c.output.out {
        Some(path) => {
            plane.save(path)?;
            let summary = json!({
                "points": file.points,
                "lines": file.lines.len(),
                "axioms": report.checks,
                "written": path,
            });
            write_out(&Output { out: None }, &with_config(config, summary)?)
        }
        None => {
            let mut text = serde_json::to_string(&file)?;
            text.push('\n');
            write_out(&c.output, &text)
        }
    }
}

fn parse_points(plane: &IncidencePlane, points: &[usize]) -> Result<lineperc::PointSet> {
    if let Some(&bad) = points.iter().find(|&&x| x >= plane.size()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            size: plane.size(),
        });
    }
    Ok(plane.point_set(points.iter().copied()))
}

fn check_r(plane: &IncidencePlane, r: usize) -> Result<()> {
    if r == 0 || r > plane.order() + 1 {
        return Err(Error::BadRange(format!(
            "r = {r} outside 1..={}",
            plane.order() + 1
        )));
    }
    Ok(())
}

fn cmd_percolate(c: &PercolateCmd, config: Value) -> Result<()> {
    let plane = c.source.load()?;
    check_r(&plane, c.r)?;
    let set = parse_points(&plane, &c.points)?;
    let trace = closure(&plane, &set, c.r);
    let mut body = serde_json::to_value(&trace)?;
    body["time"] = json!(trace.time());
    body["closure_size"] = json!(trace.closure.len());
    body["minimal"] = json!(trace.percolates && is_minimal_percolating(&plane, &set, c.r));
    write_out(&c.output, &with_config(config, body)?)
}

fn construct(plane: &IncidencePlane, c: &ConstructCmd) -> Result<ConstructionResult> {
    let policy = c
        .seed
        .map_or(ChoicePolicy::LowestIndex, ChoicePolicy::Seeded);
    let need_r = || {
        c.r.ok_or_else(|| Error::BadRange("this construction needs --r".into()))
    };
    match c.name {
        ConstructionName::Broom => {
            let r = need_r()?;
            broom_result(plane, 0, r, r)
        }
        ConstructionName::Oval => oval_result(plane),
        ConstructionName::Hyperoval => hyperoval_result(plane),
        ConstructionName::MinPerc => {
            min_percolating_from_general_position(plane, need_r()?, policy)
        }
        ConstructionName::T3 => minimal_t3_set(plane, need_r()?, policy),
        ConstructionName::Slow => slow_percolating_set(plane, need_r()?, policy),
        ConstructionName::DualHyperovalUnion => dual_hyperoval_union(plane, c.r),
        ConstructionName::HyperovalComplement => hyperoval_complement(plane, c.r),
    }
}

fn cmd_construct(c: &ConstructCmd, config: Value) -> Result<()> {
    let plane = c.source.load()?;
    let result = construct(&plane, c)?;
    let mut body = serde_json::to_value(&result)?;
    body["size"] = json!(result.point_indices.len());
    if let Some(r) = result.r {
        let set = result.points(&plane);
        let trace = closure(&plane, &set, r);
        body["percolates"] = json!(trace.percolates);
        body["time"] = json!(trace.time());
        body["minimal"] = json!(trace.percolates && is_minimal_percolating(&plane, &set, r));
    }
    let params: Map<String, Value> = result
        .parameters
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    body["parameters"] = Value::Object(params);
    write_out(&c.output, &with_config(config, body)?)
}

fn cmd_bounds(c: &BoundsCmd, config: Value) -> Result<()> {
    let class = match c.class {
        ClassArg::Arbitrary => PlaneClass::Arbitrary,
        ClassArg::Desarguesian => PlaneClass::Desarguesian,
    };
    let body = json!({
        "m_r": m_r_bounds(c.q, c.r, class)?,
        "M_r": big_m_r_bounds(c.q, c.r, class)?,
        "T_r": big_t_r_bounds(c.q, c.r, class)?,
    });
    write_out(&c.output, &with_config(config, body)?)
}

fn cmd_search(c: &SearchCmd, config: Value) -> Result<()> {
    let plane = c.source.load()?;
    let budget = c.budget.budget()?;
    let outcome = match c.target {
        TargetArg::Min | TargetArg::Max if c.strategy != StrategyArg::Exact => {
            return Err(Error::BadRange(
                "only --strategy exact applies to min and max".into(),
            ))
        }
        TargetArg::Min => find_min_percolating(&plane, c.r, &budget)?,
        TargetArg::Max => find_max_nonpercolating(&plane, c.r, &budget)?,
        TargetArg::Time => {
            let seed = match (c.strategy, c.seed) {
                (StrategyArg::Exact, s) => s.unwrap_or(0),
                (_, Some(s)) => s,
                (_, None) => {
                    return Err(Error::BadRange("heuristic search requires --seed".into()))
                }
            };
            find_max_time(&plane, c.r, c.strategy.into(), &budget, seed)?
        }
    };
    write_out(&c.output, &with_config(config, outcome)?)
}

fn cmd_mc(c: &McCmd, config: Value) -> Result<()> {
    if c.format == Format::Text {
        return Err(Error::BadRange("mc writes csv or json".into()));
    }
    let plane = c.source.load()?;
    check_r(&plane, c.r)?;
    let mut config = config;
    config["rng"] = json!(RNG_ALGORITHM);
    let text = match c.mode {
        McMode::Threshold | McMode::Uniform => {
            let curve: Vec<Estimate> = if let McMode::Uniform = c.mode {
                let m =
                    c.m.ok_or_else(|| Error::BadRange("uniform mode needs --m".into()))?;
                vec![uniform_percolation_probability(
                    &plane, c.r, m, c.trials, c.seed, c.threads,
                )?]
            } else {
                if c.grid.is_empty() {
                    return Err(Error::BadRange("threshold mode needs --grid".into()));
                }
                let scale = if c.relative {
                    let p_star = critical_p(plane.order() as u64, c.r as u64);
                    config["critical_p"] = json!(p_star);
                    p_star
                } else {
                    1.0
                };
                let grid: Vec<f64> = c.grid.iter().map(|g| g * scale).collect();
                threshold_scan(&plane, c.r, &grid, c.trials, c.seed, c.threads)?
            };
            match c.format {
                Format::Csv => {
                    let mut out = csv_preamble(&config);
                    out.push_str(Estimate::CSV_HEADER);
                    out.push('\n');
                    for e in &curve {
                        out.push_str(&e.csv_row());
                        out.push('\n');
                    }
                    out
                }
                _ => with_config(config, json!({ "estimates": curve }))?,
            }
        }
        McMode::Bottleneck => {
            let records = bottleneck_trials(&plane, c.r, c.trials, c.seed, c.threads)?;
            match c.format {
                Format::Csv => {
                    let mut out = csv_preamble(&config);
                    out.push_str(BOTTLENECK_CSV_HEADER);
                    out.push('\n');
                    for t in &records {
                        out.push_str(&bottleneck_csv_row(t));
                        out.push('\n');
                    }
                    out
                }
                _ => {
                    let equal = records.iter().filter(|t| t.tau_r == t.tau_perc).count();
                    with_config(config, json!({ "trials": records, "equal": equal }))?
                }
            }
        }
    };
    write_out(&c.output, &text)
}

fn cmd_table(c: &TableCmd, config: Value) -> Result<()> {
    if !(c.max_seconds > 0.0 && c.max_seconds.is_finite()) {
        return Err(Error::BadRange(format!(
            "--max-seconds must be positive, got {}",
            c.max_seconds
        )));
    }
    let budget = Budget::nodes(c.max_nodes)
        .with_time(Duration::from_secs_f64(c.max_seconds))
        .with_threads(c.threads);
    let cells = table::time_table(c.qmax, &budget, c.seed)?;
    let text = match c.format {
        Format::Text => table::render_text(&cells),
        Format::Csv => {
            let mut out = csv_preamble(&config);
            out.push_str(table::CSV_HEADER);
            out.push('\n');
            for cell in &cells {
                out.push_str(&table::csv_row(cell));
                out.push('\n');
            }
            out
        }
        Format::Json => with_config(config, json!({ "cells": cells }))?,
    };
    write_out(&c.output, &text)
}
