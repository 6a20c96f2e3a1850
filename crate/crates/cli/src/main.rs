//! `gfd`: deblurring, degradation and benchmark commands.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gfd_core::bench::{
    bsnr, degrade, fmt_g6, isnr, parse_grid, rho_sweep, run_scenarios, write_rho_sweep_csv, write_scenarios_csv,
    write_trace_csv, PsfSpec, Scenario, PRNG_ID,
};
use gfd_core::io::{encode_pgm, read_image, write_image, PgmEncoding, RunConfig};
use gfd_core::pipeline::{FilterSettings, SigmaMode};
use gfd_core::{run_gfd, GfdConfig, GfdError, Image, WindowSpec};

#[derive(Parser)]
#[command(name = "gfd", version, about = "Guided-filter image deconvolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Restore a blurred, noisy image.
    Deblur(DeblurArgs),
    /// Blur and add noise to a clean image under a benchmark scenario.
    Degrade(DegradeArgs),
    /// Report ISNR (and BSNR with --sigma) of a restoration.
    Evaluate(EvaluateArgs),
    /// ISNR against forced rho at one or more BSNR levels.
    SweepRho(SweepArgs),
    /// Degrade and restore every image of a directory under all five scenarios.
    RunScenarios(ScenarioArgs),
}

#[derive(Args)]
struct DeblurArgs {
    /// Plain-text `key = value` settings; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// boxcar:N, gaussian:N:STD, rational:R, binomial5, file:PATH
    #[arg(long)]
    psf: Option<PsfSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Known noise standard deviation.
    #[arg(long, conflicts_with = "estimate_sigma")]
    sigma: Option<f64>,
    #[arg(long)]
    estimate_sigma: bool,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    gf_w: Option<usize>,
    #[arg(long)]
    gf_eps: Option<f64>,
    /// Per-iteration CSV (k, lambda, rho, residual, isnr_db).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Clean image; enables ISNR reporting.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
}

#[derive(Args)]
struct DegradeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    scenario: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    clean: PathBuf,
    #[arg(long)]
    observed: PathBuf,
    #[arg(long)]
    restored: PathBuf,
    /// Noise standard deviation of the observation.
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    psf: PsfSpec,
    /// BSNR levels in dB, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    bsnr: Vec<f64>,
    /// start:step:end
    #[arg(long, default_value = "0.1:0.05:1.0")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    iters: Option<usize>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Directory of `.pgm` images; the file stem names each image.
    #[arg(long)]
    images: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Give the pipeline the true noise level instead of estimating it.
    #[arg(long)]
    known_sigma: bool,
    #[arg(long)]
    iters: Option<usize>,
}

enum Failure {
    Usage(String),
    Run(GfdError),
}

impl From<GfdError> for Failure {
    fn from(e: GfdError) -> Self {
        Failure::Run(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.into())
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("gfd: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Deblur(a) => deblur(a),
        Command::Degrade(a) => degrade_cmd(a),
        Command::Evaluate(a) => evaluate(a),
        Command::SweepRho(a) => sweep(a),
        Command::RunScenarios(a) => scenarios(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("gfd: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("gfd: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn load_image(path: &Path) -> CliResult<Image<f64>> {
    read_image(path).map_err(|e| Failure::Run(with_path(path, e)))
}

fn with_path(path: &Path, e: GfdError) -> GfdError {
    match e {
        GfdError::Io(io) => GfdError::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        GfdError::Parse { offset, message } => GfdError::Parse {
            offset,
            message: format!("{message} ({})", path.display()),
        },
        other => other,
    }
}

fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| Failure::Usage(format!("missing {flag} (give the flag or set it in --config)")))
}

fn with_iters(mut cfg: GfdConfig<f64>, iters: Option<usize>) -> GfdConfig<f64> {
    if let Some(n) = iters {
        cfg.iterations = n;
    }
    cfg
}

fn deblur(a: DeblurArgs) -> CliResult {
    let mut run = match &a.config {
        Some(p) => RunConfig::load(p).map_err(|e| with_path(p, e))?,
        None => RunConfig::default(),
    };
    let input = required(a.input.or(run.input.take()), "--in")?;
    let psf_spec = required(a.psf.or(run.psf.take()), "--psf")?;
    let out = required(a.out.or(run.output.take()), "--out")?;
    let trace_path = a.trace.or(run.trace.take());
    let ref_path = a.reference.or(run.reference.take());

    let mut cfg = with_iters(run.gfd, a.iters);
    if let Some(s) = a.sigma {
        cfg.sigma_mode = SigmaMode::Known(s);
    } else if a.estimate_sigma {
        cfg.sigma_mode = SigmaMode::Estimate;
    }
    if a.gf_w.is_some() || a.gf_eps.is_some() {
        let window = match a.gf_w {
            Some(w) => WindowSpec::new(w)?,
            None => cfg.gf_main.window,
        };
        cfg.gf_main = FilterSettings {
            window,
            eps: a.gf_eps.or(cfg.gf_main.eps),
        };
    }

    let g = load_image(&input)?;
    let psf = psf_spec.build()?;
    if let Some(p) = &ref_path {
        cfg.reference = Some(load_image(p)?);
    }
    let (restored, trace) = run_gfd(&g, &psf, &cfg)?;
    write_image(&out, &restored)?;
    if let Some(p) = &trace_path {
        let mut w = BufWriter::new(File::create(p)?);
        write_trace_csv(&mut w, &trace)?;
        w.flush()?;
    }
    if let Some(clean) = &cfg.reference {
        println!("isnr_db={}", fmt_g6(isnr(clean, &g, &restored)?));
    }
    Ok(())
}

fn degrade_cmd(a: DegradeArgs) -> CliResult {
    let clean = load_image(&a.input)?;
    let scn = Scenario::builtin(a.scenario)?;
    let pair = degrade(&clean, &scn, a.seed)?;
    // 16-bit samples keep quantization error well below the scenario noise.
    std::fs::write(&a.out, encode_pgm(&pair.observed, PgmEncoding::Binary, 65535)?)?;
    if let Some(p) = &a.meta {
        let text = format!(
            "scenario={}\npsf={}\nkernel={}\nsigma={}\nsigma_sq={}\nseed={}\nprng={}\n",
            scn.id,
            scn.psf,
            scn.psf.describe(),
            fmt_g6(pair.sigma),
            fmt_g6(scn.sigma_sq),
            a.seed,
            PRNG_ID
        );
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> CliResult {
    let clean = load_image(&a.clean)?;
    let observed = load_image(&a.observed)?;
    let restored = load_image(&a.restored)?;
    println!("isnr_db={}", fmt_g6(isnr(&clean, &observed, &restored)?));
    if let Some(s) = a.sigma {
        println!("bsnr_db={}", fmt_g6(bsnr(&observed, s * s)?));
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> CliResult {
    let clean = load_image(&a.input)?;
    let psf = a.psf.build()?;
    let grid = parse_grid(&a.grid)?;
    let cfg = with_iters(GfdConfig::default(), a.iters);
    let name = stem(&a.input);
    let mut rows = Vec::new();
    for &level in &a.bsnr {
        rows.extend(rho_sweep(&name, &clean, &psf, level, &grid, &cfg, a.seed)?);
    }
    let mut w = BufWriter::new(File::create(&a.out)?);
    write_rho_sweep_csv(&mut w, &rows)?;
    w.flush()?;
    Ok(())
}

fn scenarios(a: ScenarioArgs) -> CliResult {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&a.images)
        .map_err(|e| with_path(&a.images, e.into()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(GfdError::DegenerateInput(format!("no .pgm files in {}", a.images.display())).into());
    }
    let images = paths
        .iter()
        .map(|p| Ok((stem(p), load_image(p)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let cfg = with_iters(GfdConfig::default(), a.iters);
    let rows = run_scenarios(&images, &Scenario::all(), &cfg, a.known_sigma, a.seed)?;
    let mut w = BufWriter::new(File::create(&a.out)?);
    write_scenarios_csv(&mut w, &rows)?;
    w.flush()?;
    Ok(())
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
