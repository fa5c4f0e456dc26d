use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use innerkit_cli::commands::{self, CritArgs, Criterion};
use innerkit_cli::report::{emit, write_report_dir};
use innerkit_cli::{error_code, run_suite, usage, Config, Format, Layer, SuiteId};

/// Numerical workbench for inner functions, jets and zero-sequence geometry.
#[derive(Parser)]
#[command(name = "innerkit", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Settings shared by every subcommand. Flags beat `--config`, which beats
/// the built-in defaults.
#[derive(Args)]
struct Common {
    /// Sequence kind: spiral, radial or custom (custom reads --input).
    #[arg(long, global = true)]
    seq: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Truncation length.
    #[arg(long = "J", global = true)]
    j: Option<usize>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Dyadic arc scan depth.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Interior grid levels.
    #[arg(long = "grid-q", global = true)]
    grid_q: Option<u32>,
    /// Seed for randomized corpora (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of randomized cases in a suite.
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Sequence JSON for --seq custom.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file, or directory for `suite`; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// JSON config file with the same keys as the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a zero sequence.
    Gen,
    /// Geometry report: gaps, separation, Carleson constant, arcs, entropy.
    Geom,
    /// Evaluate an inner function's jet at a point, or sample a sublevel set.
    Inner {
        /// Inner function JSON; defaults to the Blaschke product over the sequence.
        #[arg(long)]
        theta: Option<PathBuf>,
        /// Point as re,im.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Sample {|theta| < eps} on the interior grid instead.
        #[arg(long)]
        sample: bool,
    },
    /// Admissibility of a jet on a finite set (delta-jets by default).
    Jets {
        /// Jet data JSON instead of the sequence delta-jet.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        gate: Option<f64>,
    },
    /// The matrix M(k, n), its exact determinant and optional Cramer solve.
    Matrix {
        /// Allow k, n outside n/2 < k <= n.
        #[arg(long)]
        explore: bool,
        /// Comma-separated rational right-hand side.
        #[arg(long, allow_hyphen_values = true)]
        rhs: Option<String>,
    },
    /// Run one criterion estimator.
    Crit {
        #[arg(value_enum)]
        criterion: Criterion,
        /// Expression JSON for f; defaults to (1 - z)^2.
        #[arg(long)]
        f: Option<PathBuf>,
        /// Inner function JSON; defaults to the unit atom at 1.
        #[arg(long)]
        theta: Option<PathBuf>,
        /// Second factor for `covering`.
        #[arg(long)]
        theta2: Option<PathBuf>,
        #[arg(long = "N", default_value_t = 1)]
        big_n: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 1.0)]
        exponent: f64,
        /// Boundary grid points.
        #[arg(long, default_value_t = 1 << 14)]
        count: usize,
        /// Also run the next coarser grid and report a refinement verdict.
        #[arg(long)]
        refine: bool,
    },
    /// Run a check suite; exits 1 when any check fails.
    Suite { id: String },
    /// Re-export a saved report.
    Export {
        /// Report JSON written by `suite`.
        #[arg(long)]
        report: PathBuf,
    },
}

fn layer(c: &Common) -> anyhow::Result<Layer> {
    let flags = Layer {
        seq: c.seq.clone(),
        a: c.a,
        b: c.b,
        j: c.j,
        alpha: c.alpha,
        k: c.k,
        n: c.n,
        eps: c.eps,
        depth: c.depth,
        grid_q: c.grid_q,
        seed: c.seed,
        cases: c.cases,
        input: c.input.clone(),
    };
    let file = match &c.config {
        Some(p) => Layer::from_file(p)?,
        None => Layer::default(),
    };
    Ok(flags.over(file))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let format: Format = usage(cli.common.format.parse())?;
    let cfg = usage(layer(&cli.common).and_then(Config::resolve))?;
    let out = cli.common.out.as_deref();
    let doc = match cli.cmd {
        Cmd::Gen => commands::gen(&cfg)?,
        Cmd::Geom => commands::geom(&cfg)?,
        Cmd::Inner { theta, z, order, sample } => commands::inner(&cfg, theta.as_deref(), z.as_deref(), order, sample)?,
        Cmd::Jets { data, gate } => commands::jets(&cfg, data.as_deref(), gate)?,
        Cmd::Matrix { explore, rhs } => commands::matrix(&cfg, explore, rhs.as_deref())?,
        Cmd::Crit { criterion, f, theta, theta2, big_n, l, exponent, count, refine } => {
            let args = CritArgs { criterion, f, theta, theta2, big_n, l, exponent, count, refine };
            commands::crit(&cfg, &args)?
        }
        Cmd::Suite { id } => {
            let id: SuiteId = usage(id.parse())?;
            if id.is_randomized() {
                eprintln!("seed: {}", cfg.seed);
            }
            let report = run_suite(id, &cfg)?;
            match out {
                Some(dir) => write_report_dir(&report, dir)?,
                None => emit(&render_report(&report, format)?, None)?,
            }
            let s = report.summary;
            eprintln!("{}: {} pass, {} fail, {} info", report.suite, s.pass, s.fail, s.info);
            return Ok(report.exit_code());
        }
        Cmd::Export { report } => {
            emit(&commands::export(&report, format)?, out)?;
            return Ok(0);
        }
    };
    emit(&usage(doc.render(format))?, out)?;
    Ok(0)
}

fn render_report(r: &innerkit_cli::Report, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e) as u8)
        }
    }
}
