use std::collections::BTreeMap;

use clap::{Args, Subcommand};
use mzi_coherence::eventgraph::{
    classical_vertices, enumerate_cycles, named_functionals, EventGraph,
};
use mzi_coherence::geometry::{l1_distance, membership, violation_lower_bound};
use mzi_coherence::interrogation::{advantage_scan, analytic_report, simulate};
use mzi_coherence::optics::{prepare, sequential_triple};
use mzi_coherence::presets::{HScanSpec, ParallelPreset, ScanPreset};
use mzi_coherence::qstate::PureState;
use mzi_coherence::scan::{Axis, ScanResult};
use mzi_coherence::scenario::{
    build_lsss, verify_operational_equivalences, PerpLabels, PrepareMeasureScenario,
};
use serde::Serialize;
use serde_json::json;

use crate::angle::parse_angle;
use crate::graphdoc::{load_graph, load_weights};
use crate::output::{emit, fmt_g12, to_json, Format, Table};
use crate::{CliError, OutputArgs};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn write_table<T: Serialize>(
    out: &OutputArgs,
    default: Format,
    table: &Table,
    json: &T,
) -> Result<(), CliError> {
    let bytes = match out.format.unwrap_or(default) {
        Format::Csv => table.to_csv()?,
        Format::Json => to_json(json),
    };
    emit(&bytes, out.out.as_deref())
}

fn parse_angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s)
}

fn parse_step(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("step {s} must be positive"));
    }
    Ok(v)
}

/// `start:end[:step]`, or a single angle for a fixed value.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeArg {
    start: f64,
    end: f64,
    step: Option<f64>,
}

fn parse_range(s: &str) -> Result<RangeArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => {
            let v = parse_angle(v)?;
            Ok(RangeArg {
                start: v,
                end: v,
                step: None,
            })
        }
        [a, b] => Ok(RangeArg {
            start: parse_angle(a)?,
            end: parse_angle(b)?,
            step: None,
        }),
        [a, b, c] => Ok(RangeArg {
            start: parse_angle(a)?,
            end: parse_angle(b)?,
            step: Some(parse_step(c)?),
        }),
        _ => Err(format!("{s:?}: expected start:end[:step]")),
    }
}

fn axis(name: &str, range: &RangeArg, step: f64) -> Result<Axis, CliError> {
    Axis::new(name, range.start, range.end, range.step.unwrap_or(step))
        .map_err(|e| usage(e.to_string()))
}

fn scan_table(result: &ScanResult, value_name: &str) -> Table {
    let mut table = Table::new(
        result
            .parameters
            .iter()
            .cloned()
            .chain([value_name.to_string(), "violation".into()]),
    );
    for row in &result.rows {
        table.push(
            row.params
                .iter()
                .chain([&row.value, &row.violation])
                .map(|x| fmt_g12(*x))
                .collect(),
        );
    }
    table
}

fn report_summary(label: &str, result: &ScanResult) {
    let s = &result.summary;
    let at: Vec<String> = result
        .parameters
        .iter()
        .zip(&s.argmax)
        .map(|(name, v)| format!("{name}={}", fmt_g12(*v)))
        .collect();
    eprintln!(
        "max {label} = {} at {}; {} of {} points exceed {}",
        fmt_g12(s.max_value),
        at.join(", "),
        s.violating,
        s.points,
        fmt_g12(s.bound)
    );
}

#[derive(Debug, Args)]
pub struct ScanHArgs {
    /// fig4-symmetric, fig4-max or fig5c.
    #[arg(long)]
    preset: Option<String>,
    /// θ₁ as start:end[:step] or a single angle (default 0:pi).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    theta1: Option<RangeArg>,
    /// φ₁ as start:end[:step] or a single angle (default 0:2pi).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    phi1: Option<RangeArg>,
    /// First-stage angle θ₀ of a general input.
    #[arg(long, value_parser = parse_angle_arg, allow_hyphen_values = true, requires = "phi0")]
    theta0: Option<f64>,
    /// First-stage phase φ₀ of a general input.
    #[arg(long, value_parser = parse_angle_arg, allow_hyphen_values = true, requires = "theta0")]
    phi0: Option<f64>,
    /// Grid step for axes without their own (default 0.01, or the preset's).
    #[arg(long, value_parser = parse_step)]
    step: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn scan_h(args: ScanHArgs) -> Result<(), CliError> {
    let spec = match &args.preset {
        Some(name) => {
            if args.theta1.is_some() || args.phi1.is_some() || args.theta0.is_some() {
                return Err(usage(
                    "--preset fixes the grid; drop --theta1/--phi1/--theta0/--phi0",
                ));
            }
            ScanPreset::from_name(name)
                .map_err(|e| usage(e.to_string()))?
                .spec(args.step)
                .map_err(|e| usage(e.to_string()))?
        }
        None => {
            let step = args.step.unwrap_or(0.01);
            let full_theta = RangeArg {
                start: 0.0,
                end: std::f64::consts::PI,
                step: None,
            };
            let full_phi = RangeArg {
                start: 0.0,
                end: std::f64::consts::TAU,
                step: None,
            };
            HScanSpec {
                theta1: axis("theta1", args.theta1.as_ref().unwrap_or(&full_theta), step)?,
                phi1: axis("phi1", args.phi1.as_ref().unwrap_or(&full_phi), step)?,
                input: args.theta0.zip(args.phi0),
            }
        }
    };
    let result = spec.run();
    report_summary("h", &result);
    write_table(&args.out, Format::Csv, &scan_table(&result, "h"), &result)
}

#[derive(Debug, Args)]
pub struct ParallelArgs {
    /// fig3b, fig3c or k5-equator.
    #[arg(long)]
    preset: String,
    /// Phase grid step (default 0.01).
    #[arg(long, value_parser = parse_step)]
    step: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn parallel(args: ParallelArgs) -> Result<(), CliError> {
    let preset = ParallelPreset::from_name(&args.preset).map_err(|e| usage(e.to_string()))?;
    let result = preset.run(args.step).map_err(|e| usage(e.to_string()))?;
    report_summary("value", &result);
    write_table(
        &args.out,
        Format::Csv,
        &scan_table(&result, "value"),
        &result,
    )
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Classical vertex set: 0/1 edge assignments passing every cycle.
    Vertices(GraphArgs),
    /// Simple cycles, shortest first.
    Cycles(GraphArgs),
    /// Whether the weights lie in the classical polytope.
    Membership(WeightedGraphArgs),
    /// L1 distance from the weights to the classical polytope.
    Distance(WeightedGraphArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph document path, or C<n> / K<n>.
    graph: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WeightedGraphArgs {
    /// Graph document path, or C<n> / K<n>.
    graph: String,
    /// Weights document path, or inline `1-2=0.5,1-3=0.5,...`.
    #[arg(long)]
    weights: String,
    #[command(flatten)]
    out: OutputArgs,
}

fn edge_keys(graph: &EventGraph) -> Vec<String> {
    graph.edges().iter().map(ToString::to_string).collect()
}

pub fn graph(cmd: GraphCommand) -> Result<(), CliError> {
    match cmd {
        GraphCommand::Vertices(args) => {
            let g = load_graph(&args.graph)?;
            let verts = classical_vertices(&g)?;
            let mut table = Table::new(edge_keys(&g));
            for a in verts.assignments() {
                table.push(a.iter().map(ToString::to_string).collect());
            }
            eprintln!(
                "{} classical vertices over {} edges",
                verts.len(),
                g.edge_count()
            );
            let doc = json!({ "edges": edge_keys(&g), "vertices": verts.assignments() });
            write_table(&args.out, Format::Csv, &table, &doc)
        }
        GraphCommand::Cycles(args) => {
            let g = load_graph(&args.graph)?;
            let cycles = enumerate_cycles(&g)?;
            let mut table = Table::new(["length", "vertices", "edges"]);
            for c in &cycles {
                let vs: Vec<String> = c.vertices.iter().map(ToString::to_string).collect();
                let es: Vec<String> = c.edges.iter().map(ToString::to_string).collect();
                table.push(vec![c.len().to_string(), vs.join(" "), es.join(" ")]);
            }
            eprintln!("{} cycles", cycles.len());
            let doc = json!({ "count": cycles.len(), "cycles": cycles });
            write_table(&args.out, Format::Csv, &table, &doc)
        }
        GraphCommand::Membership(args) => {
            let g = load_graph(&args.graph)?;
            let r = load_weights(&args.weights, &g)?;
            let verts = classical_vertices(&g)?;
            let res = membership(&r, &verts)?;
            let mut lower = 0.0f64;
            for f in named_functionals(&g)? {
                lower = lower.max(violation_lower_bound(&f, &r)?);
            }
            let mut table = Table::new(["inside", "distance_lower_bound"]);
            table.push(vec![res.inside.to_string(), fmt_g12(lower)]);
            let doc = json!({
                "inside": res.inside,
                "distance_lower_bound": lower,
                "certificate": res.certificate,
                "max_violation_found": res.max_violation_found,
            });
            write_table(&args.out, Format::Csv, &table, &doc)
        }
        GraphCommand::Distance(args) => {
            let g = load_graph(&args.graph)?;
            let r = load_weights(&args.weights, &g)?;
            let res = l1_distance(&r, &classical_vertices(&g)?)?;
            let mut table =
                Table::new(std::iter::once("distance".to_string()).chain(edge_keys(&g)));
            table.push(
                std::iter::once(res.distance)
                    .chain(res.nearest_point.values())
                    .map(fmt_g12)
                    .collect(),
            );
            write_table(&args.out, Format::Csv, &table, &res)
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum InterrogateCommand {
    /// Efficiency, noncontextual bound and gap at one operating point.
    Analytic(AnalyticArgs),
    /// η and η_NC over r ∈ [0, 1].
    Scan(InterrogateScanArgs),
    /// Monte-Carlo run of the protocol with an active bomb.
    Mc(McArgs),
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Overlap r_θ0 = cos²θ in [0, 1].
    #[arg(long, conflicts_with = "theta", required_unless_present = "theta")]
    r: Option<f64>,
    /// Beam-splitter angle; sets r = cos²θ.
    #[arg(long, value_parser = parse_angle_arg, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InterrogateScanArgs {
    /// Grid step in (0, 0.01].
    #[arg(long, default_value = "0.001", value_parser = parse_step)]
    step: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value = "pi/4", value_parser = parse_angle_arg, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn interrogate(cmd: InterrogateCommand) -> Result<(), CliError> {
    match cmd {
        InterrogateCommand::Analytic(args) => {
            let r = match (args.r, args.theta) {
                (Some(r), _) => r,
                (None, Some(theta)) => theta.cos().powi(2),
                (None, None) => return Err(usage("give --r or --theta")),
            };
            let rep = analytic_report(r).map_err(|e| usage(e.to_string()))?;
            let mut table = Table::new([
                "r",
                "p_succ",
                "p_bomb",
                "eta",
                "eta_nc",
                "gap",
                "degenerate",
            ]);
            let mut row: Vec<String> = [
                rep.r_theta0,
                rep.p_succ,
                rep.p_bomb,
                rep.eta,
                rep.eta_nc,
                rep.gap,
            ]
            .into_iter()
            .map(fmt_g12)
            .collect();
            row.push(rep.degenerate.to_string());
            table.push(row);
            write_table(&args.out, Format::Csv, &table, &rep)
        }
        InterrogateCommand::Scan(args) => {
            let scan = advantage_scan(args.step).map_err(|e| usage(e.to_string()))?;
            let mut table = Table::new(["r", "eta", "eta_nc", "gap"]);
            for row in &scan.rows {
                table.push(
                    [row.r, row.eta, row.eta_nc, row.gap]
                        .into_iter()
                        .map(fmt_g12)
                        .collect(),
                );
            }
            eprintln!(
                "max gap = {} at r = {}",
                fmt_g12(scan.max_gap),
                fmt_g12(scan.argmax_r)
            );
            write_table(&args.out, Format::Csv, &table, &scan)
        }
        InterrogateCommand::Mc(args) => {
            let rep =
                simulate(args.theta, args.trials, args.seed).map_err(|e| usage(e.to_string()))?;
            let opt = |x: Option<f64>| x.map_or_else(|| "nan".to_string(), fmt_g12);
            let mut table = Table::new([
                "theta",
                "trials",
                "seed",
                "successes",
                "explosions",
                "inconclusive",
                "p_succ",
                "p_bomb",
                "eta",
                "eta_std_err",
                "eta_analytic",
            ]);
            table.push(vec![
                fmt_g12(rep.theta),
                rep.trials.to_string(),
                rep.seed.to_string(),
                rep.successes.to_string(),
                rep.explosions.to_string(),
                rep.inconclusive.to_string(),
                fmt_g12(rep.p_succ),
                fmt_g12(rep.p_bomb),
                opt(rep.eta),
                opt(rep.eta_std_err),
                fmt_g12(rep.eta_analytic),
            ]);
            eprintln!(
                "seed {}: eta = {} ± {}",
                rep.seed,
                opt(rep.eta),
                opt(rep.eta_std_err)
            );
            write_table(&args.out, Format::Json, &table, &rep)
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// Emit the scenario document for a graph.
    Build(BuildArgs),
    /// Check the equivalences of a scenario on qubit states.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Graph document path, or C<n> / K<n>.
    #[arg(long)]
    graph: String,
    /// Comma-separated ε_v per vertex (default all zero).
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    /// One orthogonal preparation per vertex instead of one per (vertex, edge).
    #[arg(long)]
    merged: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Scenario document written by `scenario build`.
    #[arg(long)]
    scenario: String,
    /// Vertex states ψ(θ, φ) as `θ,φ;θ,φ;...`.
    #[arg(
        long,
        conflicts_with = "sequential",
        required_unless_present = "sequential",
        allow_hyphen_values = true
    )]
    states: Option<String>,
    /// Use the sequential triple of one interferometer, `θ₁,φ₁`.
    #[arg(long, allow_hyphen_values = true)]
    sequential: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_pair(s: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("{s:?}: expected θ,φ")))?;
    Ok((
        parse_angle(a).map_err(usage)?,
        parse_angle(b).map_err(usage)?,
    ))
}

pub fn scenario(cmd: ScenarioCommand) -> Result<(), CliError> {
    match cmd {
        ScenarioCommand::Build(args) => {
            let g = load_graph(&args.graph)?;
            let eps = args.epsilons.unwrap_or_else(|| vec![0.0; g.vertex_count()]);
            let mode = if args.merged {
                PerpLabels::Merged
            } else {
                PerpLabels::PerEdge
            };
            let s = build_lsss(&g, &eps, mode).map_err(|e| usage(e.to_string()))?;
            if args.out.format == Some(Format::Csv) {
                return Err(usage("scenario documents are JSON only"));
            }
            emit(&to_json(&s), args.out.out.as_deref())
        }
        ScenarioCommand::Verify(args) => {
            let text = std::fs::read_to_string(&args.scenario)
                .map_err(|e| usage(format!("cannot read scenario {:?}: {e}", args.scenario)))?;
            let s = PrepareMeasureScenario::from_json(&text).map_err(|e| CliError::Field {
                origin: args.scenario.clone(),
                field: "document".into(),
                message: e.to_string(),
            })?;
            let states: Vec<PureState> = match (&args.states, &args.sequential) {
                (Some(list), _) => list
                    .split(';')
                    .map(|p| parse_pair(p).map(|(t, f)| prepare(t, f)))
                    .collect::<Result<_, _>>()?,
                (None, Some(pair)) => {
                    let (t, f) = parse_pair(pair)?;
                    sequential_triple(t, f)
                        .states()
                        .into_iter()
                        .cloned()
                        .collect()
                }
                (None, None) => return Err(usage("give --states or --sequential")),
            };
            let rho = s
                .qubit_realization(&states)
                .map_err(|e| usage(e.to_string()))?;
            let report = verify_operational_equivalences(&s, &rho)?;
            let mut table = Table::new(["edge", "deviation"]);
            for c in &report.checks {
                table.push(vec![c.edge.to_string(), fmt_g12(c.deviation)]);
            }
            eprintln!(
                "equivalences {}: max deviation {}",
                if report.holds { "hold" } else { "FAIL" },
                fmt_g12(report.max_deviation)
            );
            let doc: BTreeMap<&str, serde_json::Value> = [
                ("holds", json!(report.holds)),
                ("max_deviation", json!(report.max_deviation)),
                (
                    "max_deviation_from_maximally_mixed",
                    json!(report.max_deviation_from_maximally_mixed),
                ),
                ("checks", json!(report.checks)),
            ]
            .into_iter()
            .collect();
            write_table(&args.out, Format::Csv, &table, &doc)
        }
    }
}
