//! Command-line surface for the rooksum library.
//!
//! Every subcommand reads one input source (a file path, `-` for stdin, or
//! an `--inline` literal), prints a single self-describing document, and
//! exits with 0 for a positive decision or construction, 1 for a negative
//! decision (a certificate is part of the document), and 2 for malformed
//! input. Negative decisions are not errors: pipelines branch on the exit
//! status to distinguish "no" from "broken".

mod report;

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rooksum::decomp::{self, Decomposition2, NormReport, Obstruction2};
use rooksum::game::{self, GameCertificate, Winner};
use rooksum::graphs::{self, FiniteGraph, PlaneDecision, PlaneObstruction, RnDecision};
use rooksum::io as fmtio;
use rooksum::rat::{parse_rat, Rat};
use rooksum::rook::{self, Array2, PointSet2};
use rooksum::sequences::{self, ArraySource};
use report::{join_list, Report};

#[derive(Parser)]
#[command(name = "rooksum", version, about = "Additive decompositions, rook games, and basic embeddability of finite sets and graphs", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output mode: prose or a structured key/value document.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Human)]
    output: OutputMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Human,
    Record,
}

#[derive(Args)]
struct InputArg {
    /// Input file; `-` reads stdin.
    path: Option<PathBuf>,
    /// Inline input; `;` separates lines.
    #[arg(long, value_name = "TEXT", conflicts_with = "path")]
    inline: Option<String>,
}

impl InputArg {
    fn read(&self) -> Result<String, CliError> {
        match (&self.path, &self.inline) {
            (Some(path), None) if path.as_os_str() == "-" => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| CliError(format!("reading stdin: {e}")))?;
                Ok(buf)
            }
            (Some(path), None) => std::fs::read_to_string(path)
                .map_err(|e| CliError(format!("reading {}: {e}", path.display()))),
            (None, Some(text)) => Ok(text.replace(';', "\n")),
            (None, None) => Err(CliError("no input: pass a file path or --inline".into())),
            (Some(_), Some(_)) => unreachable!("clap rejects both"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Peeling trace, closed-array search, and the basicness verdict for a
    /// plane point set.
    Analyze(InputArg),
    /// Decompose a valued set `x y : v` exactly, by peeling, with minimal
    /// sup norms, or by best sup-norm approximation.
    Decompose {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, group = "method")]
        exact: bool,
        #[arg(long, group = "method")]
        peel: bool,
        #[arg(long = "min-norm", group = "method")]
        min_norm: bool,
        #[arg(long, group = "method")]
        approx: bool,
    },
    /// Decide the rook game on marked cells (2D combinatorial, nD
    /// algebraic).
    Game {
        #[command(flatten)]
        input: InputArg,
        /// Force the algebraic (zero-marginal kernel) route in 2D too.
        #[arg(long)]
        kernel: bool,
    },
    /// Graph criteria: plane embeddability, the R_n search, the R x T_n
    /// criterion, or the defect count.
    Graph {
        #[command(flatten)]
        input: InputArg,
        /// Forbidden-shape criterion for the plane.
        #[arg(long, group = "check")]
        plane: bool,
        /// Embedding search into R_1 … R_n.
        #[arg(long, value_name = "NMAX", group = "check")]
        rn: Option<u32>,
        /// Criterion for R × T_n with an n-od, n ≥ 3.
        #[arg(long, value_name = "N", group = "check")]
        strip: Option<u32>,
        /// Defect and vertex classification.
        #[arg(long, group = "check")]
        defect: bool,
    },
    /// Sequence diagnostics for completed arrays.
    Seq {
        #[command(subcommand)]
        diag: SeqCommand,
    },
    /// Generate fixture families in their text formats.
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Geometric,
    Power,
    Custom,
}

#[derive(Subcommand)]
enum SeqCommand {
    /// Alternating partial sums of a value rule along an array.
    Sums {
        #[arg(long, value_enum, default_value_t = FamilyArg::Power)]
        family: FamilyArg,
        /// Value rule: `alt-harmonic`, `geometric`, or `const:<v>`.
        #[arg(long, default_value = "alt-harmonic")]
        rule: String,
        #[arg(long, default_value_t = 1000)]
        terms: usize,
        /// Ordered array file (`n x y` lines) for `--family custom`.
        #[arg(long, value_name = "FILE")]
        array: Option<PathBuf>,
    },
    /// Truncated tail ratios of the point norms.
    Tails {
        #[arg(long, value_enum, default_value_t = FamilyArg::Geometric)]
        family: FamilyArg,
        #[arg(long = "k-max", default_value_t = 50)]
        k_max: usize,
        #[arg(long, default_value_t = 4000)]
        terms: usize,
        #[arg(long, value_name = "FILE")]
        array: Option<PathBuf>,
    },
    /// Alternating-series decomposition of a rule on the geometric family.
    Gdecomp {
        /// Value rule: `sum` (x+y), `product` (xy), or `zero`.
        #[arg(long, default_value = "sum")]
        rule: String,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Exact area under the spike train on [0, x].
    Area {
        /// Upper limit, a rational in [0, 1].
        x: String,
    },
    /// Exact cross increment sum against the (4d)^(3/4)/2 bound.
    Cross {
        /// Offset, a rational with 0 < d < 1/4.
        d: String,
        #[arg(long, default_value_t = 30)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Alternating staircase on 2m+4 points with values ±1 (valued-set
    /// format).
    Alternating { m: u32 },
    /// Nested doubling layers with values ±2^{-k} (valued-set format).
    Layers { i: u32 },
    /// The tree F_n (graph format).
    F { n: u32 },
    /// The tree R_n (graph format).
    R { n: u32 },
}

struct CliError(String);

impl From<fmtio::ParseError> for CliError {
    fn from(e: fmtio::ParseError) -> Self {
        CliError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, code)) => {
            print!("{doc}");
            ExitCode::from(code)
        }
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, u8), CliError> {
    let mode = cli.output;
    match &cli.command {
        Command::Analyze(input) => analyze(&input.read()?, mode),
        Command::Decompose { input, peel, min_norm, approx, .. } => {
            let method = if *peel {
                Method::Peel
            } else if *min_norm {
                Method::MinNorm
            } else if *approx {
                Method::Approx
            } else {
                Method::Exact
            };
            decompose(&input.read()?, method, mode)
        }
        Command::Game { input, kernel } => game_cmd(&input.read()?, *kernel, mode),
        Command::Graph { input, plane: _, rn, strip, defect } => {
            let src = input.read()?;
            let g = fmtio::parse_graph(&src)?;
            if let Some(n_max) = rn {
                graph_rn(&g, *n_max, mode)
            } else if let Some(arms) = strip {
                graph_strip(&g, *arms, mode)
            } else if *defect {
                graph_defect(&g, mode)
            } else {
                graph_plane(&g, mode)
            }
        }
        Command::Seq { diag } => seq_cmd(diag, mode),
        Command::Gen { family } => gen_cmd(family),
    }
}

fn points_line(points: &[rooksum::rook::Point2]) -> String {
    join_list(points.iter())
}

fn peel_trace(set: &PointSet2) -> (Vec<usize>, bool) {
    let iterates = rook::peel_iterates(set);
    let sizes: Vec<usize> = iterates.iter().map(|s| s.len()).collect();
    let vanishes = iterates.last().unwrap().is_empty();
    (sizes, vanishes)
}

fn analyze(src: &str, mode: OutputMode) -> Result<(String, u8), CliError> {
    let set = fmtio::parse_point_set(src)?;
    let decision = rook::is_discontinuously_basic(&set);
    let (trace, vanishes) = peel_trace(&set);
    let depth = rook::peel_depth(&set);
    let code = if decision.basic { 0 } else { 1 };
    if mode == OutputMode::Human {
        let mut out = String::new();
        writeln!(
            out,
            "{} points, {} distinct x-values, {} distinct y-values.",
            set.len(),
            set.xs().len(),
            set.ys().len()
        )
        .unwrap();
        let trace_str = join_list(trace.iter());
        match depth {
            rook::PeelOutcome::Vanishes { steps } => {
                writeln!(out, "Peeling trace {trace_str}: empty after {steps} steps.").unwrap()
            }
            rook::PeelOutcome::Core(core) => {
                writeln!(out, "Peeling trace {trace_str}: stabilizes on a {}-point core.", core.len())
                    .unwrap()
            }
        }
        match &decision.certificate {
            rook::BasicCertificate::ClosedArray(cycle) => writeln!(
                out,
                "Closed array found: {} — not every function splits as g(x) + h(y).",
                points_line(cycle.points())
            )
            .unwrap(),
            rook::BasicCertificate::PeelingOrder(_) => writeln!(
                out,
                "No closed array: every function splits as g(x) + h(y)."
            )
            .unwrap(),
        }
        return Ok((out, code));
    }
    let mut r = Report::new("analyze");
    r.field("points", set.len());
    r.field("distinct-x", set.xs().len());
    r.field("distinct-y", set.ys().len());
    r.field("peel-trace", join_list(trace.iter()));
    match depth {
        rook::PeelOutcome::Vanishes { steps } => r.field("peel-depth", steps),
        rook::PeelOutcome::Core(core) => {
            r.field("peel-depth", "core");
            r.field("core-size", core.len());
        }
    }
    r.field("closed-array", if vanishes { "absent" } else { "present" });
    r.field("discontinuously-basic", if decision.basic { "yes" } else { "no" });
    r.block("certificate");
    match &decision.certificate {
        rook::BasicCertificate::ClosedArray(cycle) => {
            r.field("kind", "closed-array");
            r.field("cycle", points_line(cycle.points()));
        }
        rook::BasicCertificate::PeelingOrder(order) => {
            r.field("kind", "peeling-order");
            for (i, stage) in order.iter().enumerate() {
                r.field(&format!("stage-{i}"), points_line(stage.points()));
            }
        }
    }
    r.end_block();
    Ok((r.render(), code))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Method {
    Exact,
    Peel,
    MinNorm,
    Approx,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Peel => "peel",
            Method::MinNorm => "min-norm",
            Method::Approx => "approx",
        }
    }
}

fn render_decomposition(r: &mut Report, d: &Decomposition2, norms: &NormReport) {
    r.block("g");
    for (x, v) in &d.g {
        r.raw(format!("{x} -> {v}"));
    }
    r.end_block();
    r.block("h");
    for (y, v) in &d.h {
        r.raw(format!("{y} -> {v}"));
    }
    r.end_block();
    render_norms(r, norms);
}

fn render_norms(r: &mut Report, norms: &NormReport) {
    r.block("norms");
    r.field("sup-g", &norms.sup_g);
    r.field("sup-h", &norms.sup_h);
    r.field("sup-f", &norms.sup_f);
    r.field("residual", &norms.residual);
    r.end_block();
}

fn decomposition_tables(d: &Decomposition2, norms: &NormReport) -> String {
    let mut out = String::new();
    out.push_str("g:\n");
    for (x, v) in &d.g {
        writeln!(out, "  {x} -> {v}").unwrap();
    }
    out.push_str("h:\n");
    for (y, v) in &d.h {
        writeln!(out, "  {y} -> {v}").unwrap();
    }
    out.push_str("norms:\n");
    writeln!(out, "  sup-g: {}", norms.sup_g).unwrap();
    writeln!(out, "  sup-h: {}", norms.sup_h).unwrap();
    writeln!(out, "  sup-f: {}", norms.sup_f).unwrap();
    writeln!(out, "  residual: {}", norms.residual).unwrap();
    out
}

fn render_obstruction_human(o: &Obstruction2) -> String {
    format!(
        "No decomposition: the closed array {} has alternating sum {} ≠ 0.\n",
        points_line(o.cycle.points()),
        o.alternating_sum
    )
}

fn render_obstruction(r: &mut Report, o: &Obstruction2) {
    r.field("outcome", "obstructed");
    r.block("obstruction");
    r.field("cycle", points_line(o.cycle.points()));
    r.field("alternating-sum", &o.alternating_sum);
    r.end_block();
}

fn decompose(src: &str, method: Method, mode: OutputMode) -> Result<(String, u8), CliError> {
    let kf = fmtio::parse_valued_set(src)?;
    let outcome: Result<(Decomposition2, NormReport, Option<Rat>), DecomposeFailure> = match method
    {
        Method::Exact => decomp::decompose_exact(&kf)
            .map(|d| {
                let norms = decomp::verify(&kf, &d).expect("total");
                (d, norms, None)
            })
            .map_err(DecomposeFailure::Obstruction),
        Method::Peel => match decomp::peel_decompose(&kf) {
            Ok(d) => {
                let norms = decomp::verify(&kf, &d).expect("total");
                Ok((d, norms, None))
            }
            Err(decomp::PeelDecomposeError::CoreRemains { core }) => {
                Err(DecomposeFailure::Core(core))
            }
        },
        Method::MinNorm => decomp::min_norm_exact(&kf)
            .map(|m| {
                let objective = m.objective.clone();
                (m.decomposition, m.report, Some(objective))
            })
            .map_err(DecomposeFailure::Obstruction),
        Method::Approx => {
            let a = decomp::best_sup_approx(&kf);
            Ok((a.decomposition, a.report, None))
        }
    };
    match outcome {
        Ok((d, norms, objective)) => {
            if mode == OutputMode::Human {
                let mut out = format!(
                    "Decomposed {} points ({} method), residual {}.\n",
                    kf.len(),
                    method.name(),
                    norms.residual
                );
                if let Some(obj) = &objective {
                    writeln!(out, "objective: {obj}").unwrap();
                }
                out.push_str(&decomposition_tables(&d, &norms));
                Ok((out, 0))
            } else {
                let mut r = Report::new("decompose");
                r.field("method", method.name());
                r.field("points", kf.len());
                r.field("outcome", "decomposed");
                if let Some(obj) = &objective {
                    r.field("objective", obj);
                }
                render_decomposition(&mut r, &d, &norms);
                Ok((r.render(), 0))
            }
        }
        Err(DecomposeFailure::Obstruction(o)) => {
            if mode == OutputMode::Human {
                Ok((render_obstruction_human(&o), 1))
            } else {
                let mut r = Report::new("decompose");
                r.field("method", method.name());
                r.field("points", kf.len());
                render_obstruction(&mut r, &o);
                Ok((r.render(), 1))
            }
        }
        Err(DecomposeFailure::Core(core)) => {
            if mode == OutputMode::Human {
                Ok((
                    format!(
                        "Peeling is inapplicable: a {}-point core remains ({}). Use --exact.\n",
                        core.len(),
                        points_line(core.points())
                    ),
                    1,
                ))
            } else {
                let mut r = Report::new("decompose");
                r.field("method", "peel");
                r.field("points", kf.len());
                r.field("outcome", "peel-inapplicable");
                r.field("core", points_line(core.points()));
                Ok((r.render(), 1))
            }
        }
    }
}

enum DecomposeFailure {
    Obstruction(Obstruction2),
    Core(PointSet2),
}

fn game_cmd(src: &str, force_kernel: bool, mode: OutputMode) -> Result<(String, u8), CliError> {
    let set = fmtio::parse_point_set_nd(src)?;
    let verdict = if set.dim() == 2 && !force_kernel {
        let planar: PointSet2 = set
            .iter()
            .map(|p| rooksum::rook::Point2::new(p.coords[0].clone(), p.coords[1].clone()))
            .collect();
        game::winner_2d(&planar)
    } else {
        game::winner_nd(&set)
    };
    let code = match verdict.winner {
        Winner::Decomposer => 0,
        Winner::Spoiler => 1,
    };
    if mode == OutputMode::Human {
        let mut out = format!(
            "{} cells in dimension {}: the {} wins.\n",
            set.len(),
            set.dim(),
            match verdict.winner {
                Winner::Decomposer => "decomposer (weights always exist)",
                Winner::Spoiler => "spoiler (an undecomposable move exists)",
            }
        );
        match &verdict.certificate {
            GameCertificate::RookRoute(route) => {
                writeln!(out, "Closed rook route: {}.", points_line(route.points())).unwrap()
            }
            GameCertificate::PeelingOrder(order) => {
                writeln!(out, "Peeling empties the cells in {} steps.", order.len() - 1).unwrap()
            }
            GameCertificate::ZeroMarginalVector { weights, .. } => writeln!(
                out,
                "Zero-marginal weights: {}.",
                join_list(weights.iter())
            )
            .unwrap(),
            GameCertificate::DecompositionScheme(s) => writeln!(
                out,
                "Decomposition scheme solved for all {} unit impulses.",
                s.point_order.len()
            )
            .unwrap(),
        }
        return Ok((out, code));
    }
    let mut r = Report::new("game");
    r.field("dimension", set.dim());
    r.field("cells", set.len());
    r.field(
        "winner",
        match verdict.winner {
            Winner::Decomposer => "decomposer",
            Winner::Spoiler => "spoiler",
        },
    );
    r.block("certificate");
    match &verdict.certificate {
        GameCertificate::RookRoute(route) => {
            r.field("kind", "rook-route");
            r.field("cycle", points_line(route.points()));
        }
        GameCertificate::PeelingOrder(order) => {
            r.field("kind", "peeling-order");
            for (i, stage) in order.iter().enumerate() {
                r.field(&format!("stage-{i}"), points_line(stage.points()));
            }
        }
        GameCertificate::ZeroMarginalVector { point_order, weights } => {
            r.field("kind", "zero-marginal-vector");
            r.field("points", join_list(point_order.iter()));
            r.field("weights", join_list(weights.iter()));
        }
        GameCertificate::DecompositionScheme(s) => {
            r.field("kind", "decomposition-scheme");
            for (p, funcs) in s.point_order.iter().zip(&s.per_delta) {
                r.block(&format!("delta {p}"));
                for (t, axis) in funcs.axes.iter().enumerate() {
                    let entries: Vec<String> =
                        axis.iter().map(|(v, g)| format!("{v}->{g}")).collect();
                    r.field(&format!("axis-{}", t + 1), entries.join(" "));
                }
                r.end_block();
            }
        }
    }
    r.end_block();
    Ok((r.render(), code))
}

fn graph_summary(r: &mut Report, g: &FiniteGraph) {
    r.field("vertices", g.vertex_count());
    r.field("edges", g.edge_count());
}

fn graph_plane(g: &FiniteGraph, mode: OutputMode) -> Result<(String, u8), CliError> {
    let decision = graphs::basic_in_plane(g);
    let code = if decision.is_basic() { 0 } else { 1 };
    if mode == OutputMode::Human {
        let out = match &decision {
            PlaneDecision::Basic => "Basically embeddable into the plane.\n".to_string(),
            PlaneDecision::NotBasic(PlaneObstruction::Cycle(c)) => {
                format!("Not basic: contains the cycle {}.\n", join_list(c.iter()))
            }
            PlaneDecision::NotBasic(PlaneObstruction::FiveStar(v)) => {
                format!("Not basic: vertex {v} has degree 5 or more (a five-pointed star).\n")
            }
            PlaneDecision::NotBasic(PlaneObstruction::BranchedCross(w)) => format!(
                "Not basic: branched cross at vertex {} with branch vertices {}.\n",
                w.center,
                join_list(w.branch_vertices.iter())
            ),
        };
        return Ok((out, code));
    }
    let mut r = Report::new("graph");
    r.field("check", "plane");
    graph_summary(&mut r, g);
    r.field("decision", if decision.is_basic() { "basic" } else { "not-basic" });
    if let PlaneDecision::NotBasic(w) = &decision {
        r.block("witness");
        match w {
            PlaneObstruction::Cycle(c) => {
                r.field("kind", "cycle");
                r.field("vertices", join_list(c.iter()));
            }
            PlaneObstruction::FiveStar(v) => {
                r.field("kind", "five-star");
                r.field("vertex", v);
            }
            PlaneObstruction::BranchedCross(cw) => {
                r.field("kind", "branched-cross");
                r.field("center", cw.center);
                r.field("branch-vertices", join_list(cw.branch_vertices.iter()));
            }
        }
        r.end_block();
    }
    Ok((r.render(), code))
}

fn graph_rn(g: &FiniteGraph, n_max: u32, mode: OutputMode) -> Result<(String, u8), CliError> {
    let decision = graphs::basic_in_plane_via_rn(g, n_max)
        .map_err(|e| CliError(e.to_string()))?;
    let (text, field, code) = match &decision {
        RnDecision::EmbedsAt(n) => (
            format!("Embeds topologically in R_{n}.\n"),
            format!("embeds-at {n}"),
            0u8,
        ),
        RnDecision::NotBasic => (
            "No embedding, and the structural criterion also rejects the tree.\n".to_string(),
            "not-basic".to_string(),
            1,
        ),
        RnDecision::Inconclusive => (
            format!("Inconclusive: no embedding up to R_{n_max}, but the structural criterion accepts the tree; raise --rn.\n"),
            "inconclusive".to_string(),
            1,
        ),
    };
    if mode == OutputMode::Human {
        return Ok((text, code));
    }
    let mut r = Report::new("graph");
    r.field("check", "rn");
    graph_summary(&mut r, g);
    r.field("n-max", n_max);
    r.field("decision", field);
    Ok((r.render(), code))
}

fn graph_strip(g: &FiniteGraph, arms: u32, mode: OutputMode) -> Result<(String, u8), CliError> {
    let basic = graphs::basic_in_r_times_t(g, arms).map_err(|e| CliError(e.to_string()))?;
    let (_, delta) = graphs::defect(g);
    let code = if basic { 0 } else { 1 };
    if mode == OutputMode::Human {
        return Ok((
            format!(
                "Defect {delta}: {} embeddable into the line times a {arms}-od.\n",
                if basic { "basically" } else { "not basically" }
            ),
            code,
        ));
    }
    let mut r = Report::new("graph");
    r.field("check", "strip");
    graph_summary(&mut r, g);
    r.field("arms", arms);
    r.field("defect", delta);
    r.field("decision", if basic { "basic" } else { "not-basic" });
    Ok((r.render(), code))
}

fn graph_defect(g: &FiniteGraph, mode: OutputMode) -> Result<(String, u8), CliError> {
    let (class, delta) = graphs::defect(g);
    if mode == OutputMode::Human {
        return Ok((
            format!(
                "Defect {delta}; horrible vertices: {}; awful vertices: {}.\n",
                join_list(class.horrible.iter()),
                join_list(class.awful.iter())
            ),
            0,
        ));
    }
    let mut r = Report::new("graph");
    r.field("check", "defect");
    graph_summary(&mut r, g);
    r.field("defect", delta);
    r.field("horrible-vertices", join_list(class.horrible.iter()));
    r.field("awful-vertices", join_list(class.awful.iter()));
    Ok((r.render(), 0))
}

fn parse_rule(spec: &str) -> Result<Box<dyn Fn(usize, (f64, f64)) -> f64>, CliError> {
    if spec == "alt-harmonic" {
        return Ok(Box::new(|n, _| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / n as f64
        }));
    }
    if spec == "geometric" {
        return Ok(Box::new(|n, _| 0.5f64.powi(n as i32)));
    }
    if let Some(v) = spec.strip_prefix("const:") {
        let c: f64 = v
            .parse()
            .map_err(|_| CliError(format!("bad constant in rule {spec:?}")))?;
        return Ok(Box::new(move |_, _| c));
    }
    Err(CliError(format!(
        "unknown rule {spec:?}: expected alt-harmonic, geometric, or const:<v>"
    )))
}

fn load_source(family: FamilyArg, array: &Option<PathBuf>) -> Result<ArraySource, CliError> {
    match family {
        FamilyArg::Geometric => Ok(ArraySource::Geometric),
        FamilyArg::Power => Ok(ArraySource::Power),
        FamilyArg::Custom => {
            let Some(path) = array else {
                return Err(CliError("--family custom needs --array FILE".into()));
            };
            let src = std::fs::read_to_string(path)
                .map_err(|e| CliError(format!("reading {}: {e}", path.display())))?;
            let points = fmtio::parse_ordered_array(&src)?;
            Array2::detect(points.clone())
                .map_err(|e| CliError(format!("not an array: {e}")))?;
            Ok(ArraySource::Custom(
                points
                    .iter()
                    .map(|p| (rooksum::rat::to_f64(&p.x), rooksum::rat::to_f64(&p.y)))
                    .collect(),
            ))
        }
    }
}

fn family_name(family: FamilyArg) -> &'static str {
    match family {
        FamilyArg::Geometric => "geometric",
        FamilyArg::Power => "power",
        FamilyArg::Custom => "custom",
    }
}

fn seq_cmd(diag: &SeqCommand, mode: OutputMode) -> Result<(String, u8), CliError> {
    match diag {
        SeqCommand::Sums { family, rule, terms, array } => {
            let source = load_source(*family, array)?;
            let value = parse_rule(rule)?;
            let report = sequences::alternating_sums(&source, value, *terms);
            if mode == OutputMode::Human {
                return Ok((
                    format!(
                        "{} terms on the {} family: max |partial sum| {:.6}, {}.\n",
                        report.terms,
                        family_name(*family),
                        report.max_abs_partial,
                        if report.converged {
                            "converged"
                        } else if report.diverging() {
                            "diverging"
                        } else {
                            "not converged"
                        }
                    ),
                    0,
                ));
            }
            let mut r = Report::new("seq-sums");
            r.field("family", family_name(*family));
            r.field("rule", rule);
            r.field("terms", report.terms);
            r.field("max-abs-partial", report.max_abs_partial);
            r.field("last-partial", report.partials.last().copied().unwrap_or(0.0));
            r.field("converged", if report.converged { "yes" } else { "no" });
            r.field("diverging", if report.diverging() { "yes" } else { "no" });
            r.field("tolerance", report.tolerance);
            Ok((r.render(), 0))
        }
        SeqCommand::Tails { family, k_max, terms, array } => {
            let source = load_source(*family, array)?;
            let report = sequences::tail_ratios(&source, *k_max, *terms);
            if mode == OutputMode::Human {
                return Ok((
                    format!(
                        "Tail ratios up to k = {} at {} terms: max {:.6} (heuristic, truncated).\n",
                        report.k_max, report.terms, report.max_ratio
                    ),
                    0,
                ));
            }
            let mut r = Report::new("seq-tails");
            r.field("family", family_name(*family));
            r.field("k-max", report.k_max);
            r.field("terms", report.terms);
            r.field("max-ratio", report.max_ratio);
            r.field("verdict", "heuristic-truncated");
            r.block("ratios");
            let start = source.start_index();
            for (i, ratio) in report.ratios.iter().enumerate() {
                r.field(&format!("k-{}", start + i), ratio);
            }
            r.end_block();
            Ok((r.render(), 0))
        }
        SeqCommand::Gdecomp { rule, depth, tol } => {
            let f: Box<dyn Fn(f64, f64) -> f64> = match rule.as_str() {
                "sum" => Box::new(|x, y| x + y),
                "product" => Box::new(|x, y| x * y),
                "zero" => Box::new(|_, _| 0.0),
                other => {
                    return Err(CliError(format!(
                        "unknown rule {other:?}: expected sum, product, or zero"
                    )))
                }
            };
            match sequences::geometric_decompose(f, *depth, *tol) {
                Ok(report) => {
                    if mode == OutputMode::Human {
                        return Ok((
                            format!(
                                "Residual {:.3e} at depth {} (tolerance {:.1e}); last quotients g {:.6}, h {:.6}.\n",
                                report.residual,
                                report.depth,
                                report.tolerance,
                                report.g_quotients.last().unwrap(),
                                report.h_quotients.last().unwrap()
                            ),
                            0,
                        ));
                    }
                    let mut r = Report::new("seq-gdecomp");
                    r.field("rule", rule);
                    r.field("depth", report.depth);
                    r.field("tolerance", report.tolerance);
                    r.field("residual", report.residual);
                    r.field("remainder-estimate", report.remainder_estimate);
                    r.field("outcome", "ok");
                    r.field("g-quotient-last", report.g_quotients.last().unwrap());
                    r.field("h-quotient-last", report.h_quotients.last().unwrap());
                    Ok((r.render(), 0))
                }
                Err(failure) => {
                    if mode == OutputMode::Human {
                        return Ok((format!("{failure}.\n"), 1));
                    }
                    let mut r = Report::new("seq-gdecomp");
                    r.field("rule", rule);
                    r.field("depth", failure.report.depth);
                    r.field("tolerance", failure.tolerance);
                    r.field("residual", failure.residual);
                    r.field("outcome", "residual-exceeded");
                    r.field(
                        "worst-point",
                        format!("{},{}", failure.worst_point.0, failure.worst_point.1),
                    );
                    Ok((r.render(), 1))
                }
            }
        }
        SeqCommand::Area { x } => {
            let x = parse_rat(x).ok_or_else(|| CliError(format!("bad rational {x:?}")))?;
            let area = sequences::spike_area(&x).map_err(|e| CliError(e.to_string()))?;
            if mode == OutputMode::Human {
                return Ok((format!("Area under the spike train on [0, {x}]: {area}.\n"), 0));
            }
            let mut r = Report::new("seq-area");
            r.field("x", x);
            r.field("area", area);
            Ok((r.render(), 0))
        }
        SeqCommand::Cross { d, depth } => {
            let d = parse_rat(d).ok_or_else(|| CliError(format!("bad rational {d:?}")))?;
            let c = sequences::cross_increment(&d, *depth).map_err(|e| CliError(e.to_string()))?;
            let code = if c.holds { 0 } else { 1 };
            if mode == OutputMode::Human {
                return Ok((
                    format!(
                        "Increment sum {} (≈ {:.6}) vs bound (4d)^(3/4)/2 ≈ {:.6}: {}.\n",
                        c.sum,
                        rooksum::rat::to_f64(&c.sum),
                        c.bound,
                        if c.holds { "holds" } else { "fails" }
                    ),
                    code,
                ));
            }
            let mut r = Report::new("seq-cross");
            r.field("d", d);
            r.field("depth", c.depth);
            r.field("sum", &c.sum);
            r.field("sum-approx", rooksum::rat::to_f64(&c.sum));
            r.field("bound", c.bound);
            r.field("holds", if c.holds { "yes" } else { "no" });
            Ok((r.render(), code))
        }
    }
}

fn gen_cmd(family: &GenCommand) -> Result<(String, u8), CliError> {
    match family {
        GenCommand::Alternating { m } => {
            if *m < 1 {
                return Err(CliError("m must be at least 1".into()));
            }
            let kf = decomp::alternating_staircase(*m);
            let mut out = format!("# alternating staircase, m = {m}\n");
            out.push_str(&fmtio::render_valued_set(&kf));
            Ok((out, 0))
        }
        GenCommand::Layers { i } => {
            if *i < 1 {
                return Err(CliError("i must be at least 1".into()));
            }
            let kf = decomp::layered_instance(*i);
            let mut out = format!("# doubling layers, i = {i}\n");
            out.push_str(&fmtio::render_valued_set(&kf));
            Ok((out, 0))
        }
        GenCommand::F { n } => {
            if *n < 1 {
                return Err(CliError("n must be at least 1".into()));
            }
            let g = graphs::gen_f(*n).map_err(|e| CliError(e.to_string()))?;
            Ok((format!("# F_{n}\n{}", fmtio::render_graph(&g)), 0))
        }
        GenCommand::R { n } => {
            if *n < 1 {
                return Err(CliError("n must be at least 1".into()));
            }
            let g = graphs::gen_r(*n).map_err(|e| CliError(e.to_string()))?;
            Ok((format!("# R_{n}\n{}", fmtio::render_graph(&g)), 0))
        }
    }
}
