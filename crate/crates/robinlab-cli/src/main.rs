use clap::{Args, Parser, Subcommand, ValueEnum};
use robinlab_cli::config::{Command, DomainKind, Mode, RunConfig};
use robinlab_cli::{commands, init_workers, Result};
use std::path::PathBuf;
use std::process::ExitCode;

/// Robin-Laplacian spectra, nodal domains and spectral inequalities.
///
/// Worker threads are capped by the ROBINLAB_WORKERS environment variable.
#[derive(Parser)]
#[command(name = "robinlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Analytic or FEM spectrum as CSV (and JSON with --out).
    Spectrum(Common),
    /// FEM nodal report: counts, Courant-sharpness, Pleijel ratios, nodal Rayleigh check.
    Nodal(Common),
    /// Pleijel ratio series with the gamma(2) reference row.
    Pleijel(Common),
    /// Courant-sharp index set and bound comparison.
    CourantSharp(Common),
    /// Table of every bound with its scale self-check.
    Bounds(Common),
    /// Seeded isoperimetric corpus run.
    Isoperimetric(Common),
    /// Polya-Szego checks on Dirichlet FEM eigenfunctions.
    PolyaSzego(Common),
    /// Full acceptance suite.
    Verify(Common),
    /// Run a JSON RunConfig.
    Run {
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Disk,
    Square,
    Rectangle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Robin,
    Neumann,
    Dirichlet,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "disk")]
    domain: DomainArg,
    /// Disk radius or square side.
    #[arg(long, default_value_t = 1.0)]
    size: f64,
    /// Second rectangle side.
    #[arg(long, default_value_t = 0.72)]
    b: f64,
    /// DomainSpec JSON file; overrides --domain.
    #[arg(long)]
    domain_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "robin")]
    mode: ModeArg,
    /// Robin parameter (robin mode).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    h: f64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 200)]
    kmax: usize,
    /// Use the finite element solver (spectrum).
    #[arg(long)]
    fem: bool,
    #[arg(long, default_value_t = 0.03)]
    target_h: f64,
    /// Output directory for all artifacts; otherwise the main table goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    corpus_size: usize,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = robinlab::asymmetry::DEFAULT_C1)]
    c1: f64,
    /// Constant for the Courant-sharp bound families.
    #[arg(long, default_value_t = 1.0)]
    cs_constant: f64,
    /// Print the equivalent RunConfig JSON and exit.
    #[arg(long)]
    print_config: bool,
}

impl Common {
    fn config(&self, command: Command) -> RunConfig {
        let mut c = RunConfig::new(command);
        c.domain = match self.domain {
            DomainArg::Disk => DomainKind::Disk,
            DomainArg::Square => DomainKind::Square,
            DomainArg::Rectangle => DomainKind::Rectangle,
        };
        c.size = self.size;
        c.b = self.b;
        c.domain_file = self.domain_file.clone();
        c.mode = match self.mode {
            ModeArg::Robin => Mode::Robin,
            ModeArg::Neumann => Mode::Neumann,
            ModeArg::Dirichlet => Mode::Dirichlet,
        };
        c.h = self.h;
        c.count = self.count;
        c.k_max = self.kmax;
        c.fem = self.fem;
        c.target_h = self.target_h;
        c.out_dir = self.out.clone();
        c.seed = self.seed;
        c.corpus_size = self.corpus_size;
        c.eps = self.eps;
        c.c1 = self.c1;
        c.cs_constant = self.cs_constant;
        c
    }
}

fn execute(cli: Cli) -> Result<bool> {
    init_workers()?;
    let (common, command) = match cli.command {
        Sub::Run { config, out } => {
            let mut cfg = RunConfig::from_path(&config)?;
            if out.is_some() {
                cfg.out_dir = out;
            }
            let art = commands::run(&cfg)?;
            art.emit(cfg.out_dir.as_deref())?;
            return Ok(art.pass);
        }
        Sub::Spectrum(c) => (c, Command::Spectrum),
        Sub::Nodal(c) => (c, Command::Nodal),
        Sub::Pleijel(c) => (c, Command::Pleijel),
        Sub::CourantSharp(c) => (c, Command::CourantSharp),
        Sub::Bounds(c) => (c, Command::Bounds),
        Sub::Isoperimetric(c) => (c, Command::Isoperimetric),
        Sub::PolyaSzego(c) => (c, Command::PolyaSzego),
        Sub::Verify(c) => (c, Command::Verify),
    };
    let cfg = common.config(command);
    if common.print_config {
        println!("{}", cfg.to_json());
        return Ok(true);
    }
    let art = commands::run(&cfg)?;
    art.emit(cfg.out_dir.as_deref())?;
    Ok(art.pass)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("assertions failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
