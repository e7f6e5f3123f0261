//! Command-line front end: parses arguments, runs checks, prints verdicts and writes
//! report files. Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! invalid input.

pub mod commands;
pub mod error;
pub mod report;
pub mod spec;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use chowlab::sympow::SymPowMode;
use clap::{Args, Parser, Subcommand};

use crate::commands::{CheckName, CheckParams};
use crate::error::{CliError, CliResult};
use crate::report::{emit, to_pretty_json, write_file, Format, Outcome};

#[derive(Debug, Parser)]
#[command(name = "chowlab", version, about = "Exact Hard Lefschetz checks on finite Chow-ring models")]
struct Cli {
    /// Directory for report files.
    #[arg(long, global = true, env = "CHOWLAB_OUT")]
    out: Option<PathBuf>,
    /// Console output: one line per verdict, or one JSON report per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Injectivity and isomorphism checks on a model.
    Check(CheckArgs),
    /// Symmetric products of a curve.
    #[command(subcommand)]
    Sympow(SympowCommand),
    /// Blow-ups of projective space along linear centers.
    #[command(subcommand)]
    Blowup(BlowupCommand),
    /// Projective bundles over a model.
    #[command(subcommand)]
    Bundle(BundleCommand),
    /// The product of a model with projective space.
    Product {
        #[arg(long)]
        model: String,
        /// Dimension of the projective factor.
        #[arg(long)]
        pm: u32,
    },
    /// Inspect a model; `--format structured` prints it as a model file.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Run a grid of checks from a config file or a preset.
    Sweep {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<sweep::Preset>,
        /// Largest genus for a preset.
        #[arg(long, requires = "preset")]
        max_g: Option<u32>,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    check: CheckName,
    /// Model spec, e.g. `theta:g=2`, `sympow:g=3,mode=theta` or `file:model.json`.
    #[arg(long)]
    model: String,
    #[arg(long)]
    p: Option<u32>,
    /// Beauville index for `kunnemann`.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    /// Cohomological degree for `hl` on a cohomology model (same as --p).
    #[arg(long, conflicts_with = "p")]
    k: Option<u32>,
    /// Divisor expression; defaults to the model's ample class.
    #[arg(long, allow_hyphen_values = true)]
    divisor: Option<String>,
}

#[derive(Debug, Subcommand)]
enum SympowCommand {
    /// The minimal equation of z and its normal form.
    MinimalEq {
        #[arg(long)]
        g: u32,
        #[arg(long, default_value = "theta")]
        mode: String,
    },
    /// The linear system on the coefficients of a class killed by the embedding.
    ExtractSystem {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u32,
    },
    /// The square coefficient matrix of the theta-specialised system and its determinant.
    Pbig {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u32,
    },
    /// Injectivity of multiplication by z^{2g-n} in codimension p.
    Stability {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Subcommand)]
enum BlowupCommand {
    /// Injectivity of powers of f^*L + mE on the blow-up.
    Check {
        /// Ambient space, `projective:n=N`.
        #[arg(long)]
        x: String,
        /// Linear center, `projective:n=D`.
        #[arg(long)]
        center: String,
        /// Rank minus one of the normal bundle; checked against the center if given.
        #[arg(long)]
        r: Option<u32>,
        /// Divisor on the ambient space.
        #[arg(long = "L", default_value = "H")]
        l: String,
        /// Negative rational coefficient of E.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Subcommand)]
enum BundleCommand {
    /// P(E) for a bundle of rank r+1 with the given Chern classes.
    Build {
        #[arg(long)]
        model: String,
        /// Chern classes c1, c2, ... in order (repeat the flag).
        #[arg(long, allow_hyphen_values = true)]
        chern: Vec<String>,
        #[arg(long)]
        r: u32,
        /// Ample class of the bundle, in terms of xi and the base generators.
        #[arg(long)]
        ample: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    Show {
        #[arg(long)]
        model: String,
    },
}

fn execute(cli: &Cli) -> CliResult<bool> {
    let out = cli.out.as_deref();
    let single = |o: CliResult<Outcome>| -> CliResult<bool> {
        let o = o?;
        emit(&o, cli.format, out)?;
        Ok(o.passed)
    };
    match &cli.command {
        Command::Check(a) => {
            let model = spec::resolve(&a.model)?;
            let params = CheckParams {
                p: a.p.or(a.k),
                s: a.s,
                divisor: a.divisor.clone(),
            };
            single(commands::run_check(a.check, &model, &params))
        }
        Command::Sympow(cmd) => single(match cmd {
            SympowCommand::MinimalEq { g, mode } => {
                let mode: SymPowMode = mode.parse()?;
                commands::minimal_equation(*g, mode)
            }
            SympowCommand::ExtractSystem { g, p } => commands::system(*g, *p),
            SympowCommand::Pbig { g, p } => commands::pbig(*g, *p),
            SympowCommand::Stability { g, n, p } => commands::stability(*g, *n, *p),
        }),
        Command::Blowup(BlowupCommand::Check { x, center, r, l, m, p }) => {
            single(commands::blowup_check(&commands::BlowupArgs {
                x,
                center,
                r: *r,
                l,
                m,
                p: *p,
            }))
        }
        Command::Bundle(BundleCommand::Build { model, chern, r, ample }) => {
            let base = spec::resolve(model)?;
            single(commands::bundle(&base, chern, *r, ample.as_deref()))
        }
        Command::Product { model, pm } => {
            let base = spec::resolve(model)?;
            single(commands::product(&base, *pm))
        }
        Command::Model(ModelCommand::Show { model }) => single(Ok(commands::show(&spec::resolve(model)?))),
        Command::Sweep { config, preset, max_g } => {
            let config = match (config, preset) {
                (Some(path), _) => sweep::load(path)?,
                (None, Some(p)) => p.config(*max_g),
                (None, None) => return Err(CliError::Usage("sweep needs --config or --preset".into())),
            };
            let summary = sweep::run(&config)?;
            match cli.format {
                Format::Text => print!("{}", sweep::table(&summary)),
                Format::Structured => println!("{}", serde_json::to_string(&summary).expect("summaries serialize")),
            }
            if let Some(dir) = out {
                write_file(dir, "sweep.json", &to_pretty_json(&summary))?;
            }
            Ok(summary.failed == 0)
        }
    }
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match std::panic::catch_unwind(|| execute(&cli)) {
        Ok(Ok(true)) => 0,
        Ok(Ok(false)) => 1,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal failure while processing the input");
            2
        }
    }
}
