mod config;
mod scenes;
mod svg;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::{
    check_length, check_range, check_rank, read_input, resolve_tolerance, usage, write_svg,
    Output, UsageError, MAX_DEPTH, MAX_SAMPLES, MAX_STEPS,
};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use weldlab_core::bowen_series::{self as bs, BowenSeriesMap};
use weldlab_core::correspondence_model as corr;
use weldlab_core::fuchsian::{self, GroupPreset, PairingCase};
use weldlab_core::hyperbolic::MobiusMap;
use weldlab_core::mating_schema::{self as mate, MatingSchema};
use weldlab_core::welding;

#[derive(Parser, Debug)]
#[command(name = "weldlab", version, about = "Side-pairing groups, Bowen-Series maps, mating schemas and welded surfaces")]
struct Cli {
    /// Geometric tolerance; overrides WELDLAB_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON report to FILE instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Side-pairing groups Γ_{n,p}.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Bowen-Series circle maps.
    #[command(subcommand)]
    Bs(BsCmd),
    /// Mating schemas and boundary complexes.
    #[command(subcommand)]
    Mate(MateCmd),
    /// Welded surfaces.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Correspondence model on 𝔻 × {1..p}.
    #[command(subcommand)]
    Corr(CorrCmd),
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value = "I")]
    case: PairingCase,
}

impl GroupArgs {
    fn build(&self) -> Result<GroupPreset> {
        if self.n == 0 || self.p == 0 {
            return usage("--n and --p must be positive");
        }
        Ok(fuchsian::build_group(self.n, self.p, self.case)?)
    }
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Use the factor map under z ↦ zⁿ.
    #[arg(long)]
    factor: bool,
}

impl MapArgs {
    fn build(&self) -> Result<BowenSeriesMap> {
        Ok(BowenSeriesMap::new(self.group.build()?, self.factor)?)
    }
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Signature, side pairing and generator matrices.
    Info {
        #[command(flatten)]
        group: GroupArgs,
        /// Render Π with its pockets.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Side-pairing and Poincaré cycle checks; exit status 1 on failure.
    Check {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Subcommand, Debug)]
enum BsCmd {
    /// Evaluate the map at angles.
    Eval {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true)]
        theta: Vec<f64>,
    },
    /// Forward orbit of an angle.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Markov partition and transition counts.
    Partition {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Conjugacy with z^d at uniform sample angles or given angles.
    Conjugacy {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Tiles up to a rank.
    Tiles {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum MateCmd {
    /// Assemble the boundary complex of a schema.
    Build {
        schema: PathBuf,
        /// Render the hole diagram.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Faces, fixed points and degree bookkeeping of a schema.
    Report { schema: PathBuf },
    /// Verify registry polynomials (all of them when no name is given).
    VerifyPoly { name: Option<String> },
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Components, genera and η data of the welded surface.
    Report { schema: PathBuf },
    /// The welding graph.
    Graph {
        schema: PathBuf,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// The zipped quotient.
    Zip { schema: PathBuf },
}

#[derive(Subcommand, Debug)]
enum CorrCmd {
    /// The fiber of the model map through a point.
    Fibers {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        im: f64,
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
    /// Branch words of the model correspondence.
    Branches {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Tiling by reduced words up to a length.
    Tiling {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 3)]
        len: usize,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Recover the group generators as words in τ and η.
    Recover {
        #[command(flatten)]
        group: GroupArgs,
    },
}

fn load_schema(path: &PathBuf) -> Result<MatingSchema> {
    let text = read_input(path)?;
    MatingSchema::from_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
}

#[derive(Serialize)]
struct Generator {
    s: usize,
    paired_with: usize,
    matrix: MobiusMap,
}

#[derive(Serialize)]
struct GroupInfo {
    label: String,
    n: usize,
    p: usize,
    case: PairingCase,
    sigma: Vec<usize>,
    vertex_angles: Vec<f64>,
    signature: fuchsian::OrbifoldSignature,
    extended_signature: Option<fuchsian::OrbifoldSignature>,
    generators: Vec<Generator>,
    rotation: MobiusMap,
}

#[derive(Serialize)]
struct GroupCheck {
    label: String,
    tolerance: f64,
    side_pairing: fuchsian::SidePairingReport,
    cycles: fuchsian::CycleReport,
    signature_matches_formula: bool,
    passed: bool,
}

#[derive(Serialize)]
struct EvalPoint {
    theta: f64,
    image: f64,
    lifts: Vec<f64>,
}

#[derive(Serialize)]
struct OrbitReport {
    theta: f64,
    steps: usize,
    orbit: Vec<f64>,
}

#[derive(Serialize)]
struct ConjugacyPoint {
    theta: f64,
    h: bs::ConjugacyValue,
}

#[derive(Serialize)]
struct ConjugacyReport {
    depth: usize,
    degree: usize,
    values: Vec<ConjugacyPoint>,
}

#[derive(Serialize)]
struct TilesReport {
    rank: usize,
    count: usize,
    tiles: Vec<bs::Tile>,
}

#[derive(Serialize)]
struct MateReport {
    name: Option<String>,
    holes: usize,
    faces: usize,
    boundary_counts: Vec<usize>,
    map_components: Vec<Vec<usize>>,
    regular_fixed_points: usize,
    order_two_points: usize,
    degrees: mate::DegreeReport,
    polynomial: Option<mate::PolynomialReport>,
}

#[derive(Serialize)]
struct SurfaceSummary {
    name: Option<String>,
    genera: Vec<usize>,
    cellular_counts: (usize, usize, usize),
    surface: welding::SurfaceReport,
    crosscheck: Option<welding::Crosscheck>,
}

#[derive(Serialize)]
struct FiberReport {
    point: corr::ModelPoint,
    value: C64,
    fiber: Vec<corr::ModelPoint>,
}

fn run(cli: Cli) -> Result<()> {
    let tol = resolve_tolerance(cli.tol)?;
    let out = Output { path: cli.output };
    match cli.command {
        Command::Group(cmd) => group(cmd, tol, &out),
        Command::Bs(cmd) => bowen_series(cmd, &out),
        Command::Mate(cmd) => mating(cmd, &out),
        Command::Surface(cmd) => surface(cmd, &out),
        Command::Corr(cmd) => correspondence(cmd, &out),
    }
}

fn group(cmd: GroupCmd, tol: f64, out: &Output) -> Result<()> {
    match cmd {
        GroupCmd::Info { group, svg } => {
            let g = group.build()?;
            let info = GroupInfo {
                label: g.label(),
                n: g.n,
                p: g.p,
                case: g.case,
                sigma: g.sigma.clone(),
                vertex_angles: (0..g.side_count()).map(|k| g.vertex_angle(k)).collect(),
                signature: fuchsian::orbifold_signature(&g, false),
                extended_signature: (g.n > 1).then(|| fuchsian::orbifold_signature(&g, true)),
                generators: (1..=g.p)
                    .map(|s| Generator {
                        s,
                        paired_with: g.sigma[s - 1],
                        matrix: g.first_sector[s - 1],
                    })
                    .collect(),
                rotation: g.rotation,
            };
            if let Some(path) = svg {
                write_svg(&path, &svg::render_svg(&scenes::polygon_scene(&g)))?;
            }
            out.emit("group info", &info)
        }
        GroupCmd::Check { group } => {
            let g = group.build()?;
            let side_pairing = fuchsian::side_pairing_check(&g)?;
            let cycles = fuchsian::poincare_check(&g)?;
            let extended = g.n > 1;
            let signature_matches_formula = fuchsian::orbifold_signature(&g, extended)
                == fuchsian::orbifold_signature_formula(g.n, g.p, g.case);
            let passed = signature_matches_formula && side_pairing.max_residual <= tol.max(1e-12);
            let report = GroupCheck {
                label: g.label(),
                tolerance: tol,
                side_pairing,
                cycles,
                signature_matches_formula,
                passed,
            };
            out.emit("group check", &report)?;
            if !passed {
                bail!("{} failed its checks", report.label);
            }
            Ok(())
        }
    }
}

fn bowen_series(cmd: BsCmd, out: &Output) -> Result<()> {
    match cmd {
        BsCmd::Eval { map, theta } => {
            let m = map.build()?;
            let lifts = if m.factor { m.preset.n } else { 1 };
            let points = theta
                .iter()
                .map(|&t| {
                    Ok(EvalPoint {
                        theta: t,
                        image: bs::eval_circle(&m, t)?,
                        lifts: (0..lifts)
                            .map(|l| bs::eval_circle_lift(&m, t, l))
                            .collect::<Result<_, _>>()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.emit("bs eval", &points)
        }
        BsCmd::Orbit { map, theta, steps } => {
            let steps = check_range("steps", steps, 0, MAX_STEPS)?;
            let m = map.build()?;
            let orbit = bs::orbit(&m, theta, steps);
            out.emit("bs orbit", &OrbitReport { theta, steps, orbit })
        }
        BsCmd::Partition { map } => {
            let m = map.build()?;
            out.emit("bs partition", &bs::markov_partition(&m)?)
        }
        BsCmd::Conjugacy {
            map,
            depth,
            theta,
            samples,
        } => {
            let depth = check_range("depth", depth, 1, MAX_DEPTH)?;
            let samples = check_range("samples", samples, 1, MAX_SAMPLES)?;
            let m = map.build()?;
            let h = bs::Conjugacy::new(&m)?;
            let angles: Vec<f64> = if theta.is_empty() {
                (0..samples)
                    .map(|k| std::f64::consts::TAU * k as f64 / samples as f64)
                    .collect()
            } else {
                theta
            };
            let values = angles
                .into_iter()
                .map(|t| Ok(ConjugacyPoint { theta: t, h: h.eval(t, depth)? }))
                .collect::<Result<Vec<_>>>()?;
            let report = ConjugacyReport {
                depth,
                degree: m.expected_degree(),
                values,
            };
            out.emit("bs conjugacy", &report)
        }
        BsCmd::Tiles { map, rank, svg } => {
            let rank = check_rank(rank)?;
            let m = map.build()?;
            let tiles = bs::tiles(&m, rank)?;
            if let Some(path) = svg {
                write_svg(&path, &svg::render_svg(&scenes::tile_scene(&m.preset, &tiles)))?;
            }
            let report = TilesReport {
                rank,
                count: tiles.len(),
                tiles,
            };
            out.emit("bs tiles", &report)
        }
    }
}

fn mating(cmd: MateCmd, out: &Output) -> Result<()> {
    match cmd {
        MateCmd::Build { schema, svg } => {
            let s = load_schema(&schema)?;
            let bc = mate::assemble_schema(&s)?;
            if let Some(path) = svg {
                write_svg(&path, &svg::render_svg(&scenes::hole_scene(&bc)))?;
            }
            out.emit("mate build", &bc)
        }
        MateCmd::Report { schema } => {
            let s = load_schema(&schema)?;
            let bc = mate::assemble_schema(&s)?;
            let degrees = mate::validate_degrees(&s.slots, s.host)?;
            let polynomial = match &s.polynomial {
                Some(name) => Some(mate::verify_polynomial(&mate::polynomial_by_name(name)?)?),
                None => None,
            };
            let report = MateReport {
                name: s.name.clone(),
                holes: bc.holes.len(),
                faces: bc.face_count(),
                boundary_counts: (0..bc.face_count()).map(|f| bc.boundary_count(f)).collect(),
                map_components: bc.map_components.clone(),
                regular_fixed_points: bc.regular_fixed_points(),
                order_two_points: bc.order_two_points(),
                degrees,
                polynomial,
            };
            out.emit("mate report", &report)
        }
        MateCmd::VerifyPoly { name } => {
            let entries = match name {
                Some(n) => vec![mate::polynomial_by_name(&n)?],
                None => mate::registry()?,
            };
            let reports = entries
                .iter()
                .map(mate::verify_polynomial)
                .collect::<Result<Vec<_>, _>>()?;
            out.emit("mate verify-poly", &reports)
        }
    }
}

fn surface(cmd: SurfaceCmd, out: &Output) -> Result<()> {
    match cmd {
        SurfaceCmd::Report { schema } => {
            let s = load_schema(&schema)?;
            let bc = mate::assemble_schema(&s)?;
            let wc = welding::weld(&bc)?;
            let sr = welding::surface_report(&wc)?;
            let crosscheck = if sr.connected {
                Some(welding::genus_crosscheck(&sr, &bc)?)
            } else {
                None
            };
            let summary = SurfaceSummary {
                name: s.name.clone(),
                genera: sr.genera(),
                cellular_counts: wc.cellular_counts(),
                surface: sr,
                crosscheck,
            };
            out.emit("surface report", &summary)
        }
        SurfaceCmd::Graph { schema, svg } => {
            let s = load_schema(&schema)?;
            let g = welding::welding_graph(&mate::assemble_schema(&s)?);
            if let Some(path) = svg {
                write_svg(&path, &svg::render_svg(&scenes::welding_graph_scene(&g)))?;
            }
            out.emit("surface graph", &g)
        }
        SurfaceCmd::Zip { schema } => {
            let s = load_schema(&schema)?;
            out.emit("surface zip", &welding::zipped_report(&mate::assemble_schema(&s)?)?)
        }
    }
}

fn model(group: &GroupArgs) -> Result<corr::ModelTilingSet> {
    if group.n == 0 || group.p == 0 {
        return usage("--n and --p must be positive");
    }
    Ok(corr::ModelTilingSet::new(group.n, group.p, group.case)?)
}

fn correspondence(cmd: CorrCmd, out: &Output) -> Result<()> {
    match cmd {
        CorrCmd::Fibers { group, re, im, j } => {
            let m = model(&group)?;
            if !(1..=m.p).contains(&j) {
                return usage(format!("--j {j} outside [1, {}]", m.p));
            }
            let point = corr::ModelPoint::new(C64::new(re, im), j);
            let fiber = corr::fiber(&m, point)?;
            let report = FiberReport {
                point,
                value: m.r_model(point),
                fiber,
            };
            out.emit("corr fibers", &report)
        }
        CorrCmd::Branches { group } => {
            let m = model(&group)?;
            out.emit("corr branches", &corr::branch_words(&m))
        }
        CorrCmd::Tiling { group, len, svg } => {
            let len = check_length(len)?;
            let g = group.build()?;
            let report = corr::group_tiling(&g, len)?;
            if let Some(path) = svg {
                write_svg(&path, &svg::render_svg(&scenes::model_tile_scene(&report.tiles)))?;
            }
            out.emit("corr tiling", &report)
        }
        CorrCmd::Recover { group } => {
            let m = model(&group)?;
            out.emit("corr recover", &corr::recover_representation(&m)?)
        }
    }
}

/// One-line diagnostic: the error chain joined with ": ".
fn diagnostic(e: &anyhow::Error) -> String {
    format!("{e:#}").replace('\n', " ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let detail: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            let detail = detail.join(" ");
            let detail = detail.trim_start_matches("error: ");
            eprintln!("weldlab: usage error: {detail}");
            return ExitCode::from(2);
        }
    };
    match run(cli).context("weldlab") {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let usage = e.chain().any(|c| c.downcast_ref::<UsageError>().is_some());
            if usage {
                eprintln!("{}", diagnostic(&e).replacen("weldlab: ", "weldlab: usage error: ", 1));
                ExitCode::from(2)
            } else {
                eprintln!("{}", diagnostic(&e));
                ExitCode::from(1)
            }
        }
    }
}
