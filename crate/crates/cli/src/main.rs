mod commands;
mod config;
mod error;
mod report;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::SigmaChoice;
use config::RunConfig;
use error::CliError;
use report::Report;

/// Periodic Evans function analysis of small-amplitude deep-water Stokes waves.
#[derive(Parser, Debug)]
#[command(name = "deepwater-evans", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    kappa: Option<f64>,
    #[arg(long, global = true)]
    g: Option<f64>,
    /// Stokes expansion order.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Highest power of δ kept.
    #[arg(long, global = true)]
    mmax: Option<usize>,
    /// Highest power of ε kept.
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Directory for report and CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print w and A of the reduction in the series text syntax.
    #[arg(long, global = true)]
    dump_reduction: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stokes profiles and a sampled surface.
    Stokes {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
    /// Dispersion branches and root tables.
    Dispersion {
        #[arg(long, default_value_t = 161)]
        steps: usize,
    },
    /// Eigenfunctions and adjoint eigenfunctions.
    Basis {
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
    },
    /// Monodromy coefficient and Evans tables.
    Coeffs {
        /// A frequency, or `resonance:N`.
        #[arg(long, default_value = "0")]
        sigma: SigmaChoice,
    },
    /// Benjamin–Feir branch coefficients.
    Bf,
    /// Resonance locations and leading Evans coefficients.
    Resonance {
        #[arg(long = "N")]
        n: Option<u32>,
    },
    /// The ε²-order resonance index.
    Ind2 {
        #[arg(long = "N", default_value_t = 2)]
        n: u32,
    },
    /// Track both eigenvalues near the origin over a γ grid.
    Trace {
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 0.002)]
        gamma_min: f64,
        #[arg(long, default_value_t = 0.01)]
        gamma_max: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Run the acceptance suite.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Stokes { .. } => "stokes",
            Command::Dispersion { .. } => "dispersion",
            Command::Basis { .. } => "basis",
            Command::Coeffs { .. } => "coeffs",
            Command::Bf => "bf",
            Command::Resonance { .. } => "resonance",
            Command::Ind2 { .. } => "ind2",
            Command::Trace { .. } => "trace",
            Command::Verify => "verify",
        }
    }
}

fn config(args: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cfg.kappa = args.kappa.unwrap_or(cfg.kappa);
    cfg.g = args.g.unwrap_or(cfg.g);
    cfg.stokes_order = args.order.unwrap_or(cfg.stokes_order);
    cfg.m_max = args.mmax.unwrap_or(cfg.m_max);
    cfg.n_max = args.nmax.unwrap_or(cfg.n_max);
    if args.out.is_some() {
        cfg.out.clone_from(&args.out);
    }
    cfg.dump_reduction |= args.dump_reduction;
    cfg.params()?;
    Ok(cfg)
}

fn thread_pool() -> Result<(), CliError> {
    let Ok(v) = std::env::var("EVANS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("EVANS_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match *cmd {
        Command::Stokes { eps, steps } => commands::stokes(cfg, eps, steps),
        Command::Dispersion { steps } => commands::dispersion_table(cfg, steps),
        Command::Basis { sigma } => commands::basis(cfg, sigma),
        Command::Coeffs { sigma } => commands::coeffs(cfg, sigma),
        Command::Bf => commands::bf(cfg),
        Command::Resonance { n } => commands::resonance(cfg, n),
        Command::Ind2 { n } => commands::ind2_report(cfg, n),
        Command::Trace { eps, gamma_min, gamma_max, steps } => commands::trace(cfg, eps, gamma_min, gamma_max, steps),
        Command::Verify => verify::run(cfg),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    thread_pool()?;
    let cfg = config(&cli.global)?;
    let rep = dispatch(&cli.command, &cfg)?;
    print!("{}", rep.text);
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    if !rep.files.is_empty() || cfg.out.is_some() {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(format!("{}.txt", cli.command.name())), &rep.text)?;
        for (name, contents) in &rep.files {
            fs::write(dir.join(name), contents)?;
            println!("wrote {}", dir.join(name).display());
        }
    }
    if rep.failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Checks(rep.failed))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("deepwater-evans: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
