//! The `fpforge` command line.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on bad flags or parameters.

mod config;

pub use config::Config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffusion::{
    ddim_sample, forward_noise, linear_schedule, strided_timesteps, AnalyticPredictor, DiffusionError, LatentGrid,
    NoiseSchedule, DEFAULT_BETA_END, DEFAULT_BETA_START,
};
use crate::finger3d::{io::read_cloud, rectify_pose, unfold_cloud, uvmap, GeometryError};
use crate::imagecore::{pgm, ImageError};
use crate::pipeline::{
    load_batch_input, run_batch, BatchSpec, CommandQualityHook, PipelineError, QualityHook, WORKERS_ENV,
};
use crate::poseproject::{render_pose, Canvas, ProjectError, RollPose};
use crate::sauvola::{binarize, estimate_foreground, SauvolaParams, DEFAULT_FG_BLOCK, DEFAULT_FG_STD};

/// Printed by `--version`.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format 1)");

#[derive(Debug, Parser)]
#[command(name = "fpforge", version = VERSION, about = "Contactless fingerprint synthesis toolkit")]
struct Cli {
    /// JSON config file; flags given explicitly override its values
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,
    /// Emit log lines as JSON objects on stderr
    #[arg(long, global = true)]
    json_log: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sauvola binarization of a PGM into an identity anchor
    Binarize(BinarizeArgs),
    /// Rectify and unfold a point cloud into a UV map
    Unfold(UnfoldArgs),
    /// Render one roll pose of a textured finger
    Project(ProjectArgs),
    /// Filter identities and render their roll sweeps
    Sweep(SweepArgs),
    /// Run the DDIM reverse pass with the exact noise predictor
    DdimDemo(DdimArgs),
}

#[derive(Debug, Args)]
struct BinarizeArgs {
    /// Input grayscale PGM
    #[arg(long = "in", value_name = "PGM")]
    input: PathBuf,
    /// Output binary PGM (ridges 0, background 255)
    #[arg(long, value_name = "PGM")]
    out: PathBuf,
    /// Foreground mask PGM (0 = foreground); estimated when absent
    #[arg(long, value_name = "PGM")]
    mask: Option<PathBuf>,
    /// Odd window side, pixels
    #[arg(long, default_value_t = 11)]
    window: usize,
    /// Sauvola sensitivity
    #[arg(long, default_value_t = 0.007, allow_negative_numbers = true)]
    k: f64,
    /// Dynamic range of the standard deviation
    #[arg(long, default_value_t = 128.0)]
    range: f64,
}

#[derive(Debug, Args)]
struct UnfoldArgs {
    /// Point cloud (.ply or .xyz), millimetres
    #[arg(long, value_name = "FILE")]
    cloud: PathBuf,
    /// Output UV map file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Cross-section slab width, mm
    #[arg(long, default_value_t = 0.25)]
    slab: f64,
    /// Output resolution, pixels per inch
    #[arg(long, default_value_t = 500.0)]
    ppi: f64,
    /// The cloud is already in the finger frame; skip PCA rectification
    #[arg(long)]
    rectified: bool,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    /// Point cloud (.ply or .xyz), millimetres
    #[arg(long, value_name = "FILE")]
    cloud: PathBuf,
    /// Unrolled texture PGM at 500 ppi
    #[arg(long, value_name = "PGM")]
    texture: PathBuf,
    /// Roll angle in degrees, within [-60, 60]
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Output PGM; a JSON sidecar is written next to it
    #[arg(long, value_name = "PGM")]
    out: PathBuf,
    /// Square canvas side, pixels
    #[arg(long, default_value_t = 512)]
    canvas: usize,
    /// Cross-section slab width, mm
    #[arg(long, default_value_t = 0.25)]
    slab: f64,
    /// The cloud is already in the finger frame; skip PCA rectification
    #[arg(long)]
    rectified: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Batch description: {"identities": [{identity_id, texture_path, cloud_path}]}
    #[arg(long = "manifest-in", value_name = "JSON")]
    manifest_in: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Seed for the roll-angle draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parallel identity jobs [default: $FPFORGE_WORKERS, else 1]
    #[arg(long)]
    workers: Option<usize>,
    /// Identities need a foreground ratio strictly above this
    #[arg(long = "fg-threshold", default_value_t = 0.6)]
    fg_threshold: f64,
    /// Quality scorer: called with a PGM path, prints a score on stdout
    #[arg(long = "quality-cmd", value_name = "PATH")]
    quality_cmd: Option<PathBuf>,
    /// Square canvas side, pixels
    #[arg(long, default_value_t = 512)]
    canvas: usize,
}

#[derive(Debug, Args)]
struct DdimArgs {
    /// Reverse steps, strided over the schedule
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Latent grid as CxHxW
    #[arg(long, default_value = "3x16x16")]
    grid: String,
    /// Seed for z0 and the noise
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Length of the linear noise schedule
    #[arg(long = "schedule-steps", default_value_t = 1000)]
    schedule_steps: usize,
}

/// Command failure, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, parameters or input contents: exit 2.
    Usage(String),
    /// Files that cannot be read or written: exit 1.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<ImageError> for Failure {
    fn from(e: ImageError) -> Self {
        match e {
            ImageError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ProjectError> for Failure {
    fn from(e: ProjectError) -> Self {
        match e {
            ProjectError::Geometry(g) => g.into(),
            ProjectError::Image(i) => i.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Io { .. } => Failure::Io(e.to_string()),
            PipelineError::Image(i) => i.into(),
            PipelineError::Geometry(g) => g.into(),
            PipelineError::Project(p) => p.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<DiffusionError> for Failure {
    fn from(e: DiffusionError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn init_logging(json: bool) {
    let env = env_logger::Env::default().default_filter_or("info");
    let mut b = env_logger::Builder::from_env(env);
    b.target(env_logger::Target::Stderr);
    if json {
        b.format(|buf, record| {
            let line = serde_json::json!({
                "level": record.level().as_str(),
                "target": record.target(),
                "msg": record.args().to_string(),
            });
            writeln!(buf, "{line}")
        });
    }
    // a second call within one process keeps the first logger
    let _ = b.try_init();
}

/// True when `id` was typed on the command line rather than defaulted.
fn explicit(m: &ArgMatches, id: &str) -> bool {
    m.value_source(id) == Some(ValueSource::CommandLine)
}

fn pick<T>(m: &ArgMatches, id: &str, flag: T, configured: T) -> T {
    if explicit(m, id) {
        flag
    } else {
        configured
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    init_logging(cli.json_log);
    let sub = matches.subcommand().map(|(_, m)| m).expect("subcommand is required");
    match dispatch(&cli, sub) {
        Ok(()) => 0,
        Err(f) => {
            log::error!("{}", f.message());
            f.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, m: &ArgMatches) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Binarize(a) => cmd_binarize(a, m, &config),
        Command::Unfold(a) => cmd_unfold(a, m, &config),
        Command::Project(a) => cmd_project(a, m, &config),
        Command::Sweep(a) => cmd_sweep(a, m, &config),
        Command::DdimDemo(a) => cmd_ddim(a),
    }
}

fn cmd_binarize(a: &BinarizeArgs, m: &ArgMatches, cfg: &Config) -> Result<(), Failure> {
    let params = SauvolaParams {
        window: pick(m, "window", a.window, cfg.sauvola.window),
        k: pick(m, "k", a.k, cfg.sauvola.k),
        range: pick(m, "range", a.range, cfg.sauvola.range),
    };
    params.validate()?;
    let img = pgm::read_gray(&a.input)?;
    let mask = match &a.mask {
        Some(p) => {
            let bm = pgm::read_binary(p)?;
            if bm.dims() != img.dims() {
                return Err(Failure::Usage(format!(
                    "mask is {:?} but image is {:?}",
                    bm.dims(),
                    img.dims()
                )));
            }
            bm.to_mask()
        }
        None => estimate_foreground(&img, DEFAULT_FG_BLOCK, DEFAULT_FG_STD)?,
    };
    let anchor = binarize(&img, &mask, &params)?;
    pgm::write_binary(&a.out, &anchor)?;
    info!(
        "binarized {} ({} ridge pixels) -> {}",
        a.input.display(),
        anchor.foreground_count(),
        a.out.display()
    );
    Ok(())
}

fn load_rectified(path: &Path, rectified: bool) -> Result<crate::finger3d::FingerPointCloud, Failure> {
    let cloud = read_cloud(path)?;
    Ok(if rectified { cloud } else { rectify_pose(&cloud)? })
}

fn cmd_unfold(a: &UnfoldArgs, m: &ArgMatches, cfg: &Config) -> Result<(), Failure> {
    let slab = pick(m, "slab", a.slab, cfg.slab_mm);
    let ppi = pick(m, "ppi", a.ppi, cfg.ppi);
    let cloud = load_rectified(&a.cloud, a.rectified)?;
    let surface = unfold_cloud(&cloud, slab, ppi)?;
    uvmap::write_uvmap(&a.out, &surface)?;
    info!(
        "unfolded {} of {} points over {} sections -> {}",
        surface.mapped_count(),
        cloud.len(),
        surface.sections.len(),
        a.out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct ProjectSidecar {
    theta: f64,
    delta_u_px: f64,
    rendered_pixel_count: usize,
}

fn cmd_project(a: &ProjectArgs, m: &ArgMatches, cfg: &Config) -> Result<(), Failure> {
    let pose = RollPose::new(a.theta)?;
    let canvas = Canvas::square(pick(m, "canvas", a.canvas, cfg.canvas));
    let slab = pick(m, "slab", a.slab, cfg.slab_mm);
    let tex = pgm::read_gray(&a.texture)?;
    let cloud = load_rectified(&a.cloud, a.rectified)?;
    let surface = unfold_cloud(&cloud, slab, tex.ppi())?;
    let out = render_pose(&surface, &tex, pose, canvas)?;
    pgm::write_gray(&a.out, &out.img)?;
    let sidecar = ProjectSidecar {
        theta: pose.degrees(),
        delta_u_px: out.delta_u,
        rendered_pixel_count: out.rendered_count,
    };
    let path = a.out.with_extension("json");
    let text = serde_json::to_string_pretty(&sidecar).expect("sidecar serialises");
    std::fs::write(&path, text + "\n").map_err(|e| io_failure(&path, e))?;
    info!(
        "theta {} deg: delta_u {:.3} px, {} pixels rendered",
        pose.degrees(),
        out.delta_u,
        out.rendered_count
    );
    Ok(())
}

fn workers_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(None),
    }
}

fn cmd_sweep(a: &SweepArgs, m: &ArgMatches, cfg: &Config) -> Result<(), Failure> {
    let workers = match a.workers.or(cfg.workers) {
        Some(w) => w,
        None => workers_from_env()?.unwrap_or(1),
    };
    let spec = BatchSpec {
        sweep: cfg.sweep,
        seed: a.seed,
        fg_threshold: pick(m, "fg_threshold", a.fg_threshold, cfg.fg_threshold),
        canvas: Canvas::square(pick(m, "canvas", a.canvas, cfg.canvas)),
        slab_mm: cfg.slab_mm,
        workers,
    };
    let hook_path = a.quality_cmd.clone().or_else(|| cfg.quality_cmd.clone());
    let hook = hook_path.map(|program| CommandQualityHook { program });
    let input = load_batch_input(&a.manifest_in)?;
    let manifest = run_batch(
        &input.identities,
        &spec,
        &a.out,
        hook.as_ref().map(|h| h as &dyn QualityHook),
    )?;
    println!(
        "{} identities: {} passed, {} filtered, {} failed; {} images in {}",
        manifest.counts.identities,
        manifest.counts.passed,
        manifest.counts.filtered,
        manifest.counts.failed,
        manifest.counts.images,
        a.out.display()
    );
    Ok(())
}

fn parse_grid(s: &str) -> Result<(usize, usize, usize), Failure> {
    let dims: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("grid {s:?} is not CxHxW")))?;
    match dims[..] {
        [c, h, w] if c > 0 && h > 0 && w > 0 => Ok((c, h, w)),
        _ => Err(Failure::Usage(format!("grid {s:?} is not CxHxW with positive sizes"))),
    }
}

fn cmd_ddim(a: &DdimArgs) -> Result<(), Failure> {
    let (c, h, w) = parse_grid(&a.grid)?;
    let sched: NoiseSchedule = linear_schedule(a.schedule_steps, DEFAULT_BETA_START, DEFAULT_BETA_END)?;
    let timesteps = strided_timesteps(sched.steps(), a.steps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let z0 = LatentGrid::standard_normal(c, h, w, &mut rng)?;
    let eps = LatentGrid::standard_normal(c, h, w, &mut rng)?;
    let t_start = timesteps[0];
    let z_t = forward_noise(&z0, t_start, &eps, &sched)?;
    let oracle = AnalyticPredictor {
        z0: &z0,
        schedule: &sched,
    };
    let out = ddim_sample(&z_t, &timesteps, &oracle, None, &sched)?;
    let err = out.max_abs_diff(&z0)?;
    println!("generator: ChaCha8 (rand_chacha), seed {}", a.seed);
    println!(
        "grid {c}x{h}x{w}, {} reverse steps over a {}-step linear schedule, start t = {t_start}",
        timesteps.len(),
        sched.steps()
    );
    println!("max reconstruction error: {err:.3e}");
    Ok(())
}
