mod batch;
mod options;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use manifold_uncertainty::output::{self, Format};
use manifold_uncertainty::Result;

use options::RunOptions;
use run::Outcome;

/// Environment variable naming the default output directory.
const OUTPUT_DIR_VAR: &str = "MUP_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "mup", version, about = "Numerical checks of uncertainty principles on model spaces")]
struct Cli {
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Output file; defaults to `$MUP_OUTPUT_DIR/<command>.<format>`, then stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List basis elements up to a cutoff.
    Basis(RunOptions),
    /// Eigenvalue counts and local counts at points.
    Weyl(RunOptions),
    /// Pointwise constancy of level sums.
    Homogeneity(RunOptions),
    /// Concentration eigenvalues and top eigenvectors.
    Concentrate(RunOptions),
    /// Evaluate one inequality.
    Check(RunOptions),
    /// Estimate the q-orthogonality constant of a subset.
    LambdaQ(RunOptions),
    /// Random half split of a bounded system.
    Gmpt(RunOptions),
    /// Support product on a finite group.
    DonohoStark(RunOptions),
    /// Run a TOML manifest of `[[run]]` entries.
    Batch {
        #[arg(long)]
        config: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Basis(_) => "basis",
            Command::Weyl(_) => "weyl",
            Command::Homogeneity(_) => "homogeneity",
            Command::Concentrate(_) => "concentrate",
            Command::Check(_) => "check",
            Command::LambdaQ(_) => "lambda-q",
            Command::Gmpt(_) => "gmpt",
            Command::DonohoStark(_) => "donoho-stark",
            Command::Batch { .. } => "batch",
        }
    }
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Basis(o) => run::basis(o),
        Command::Weyl(o) => run::weyl(o),
        Command::Homogeneity(o) => run::homogeneity(o),
        Command::Concentrate(o) => run::concentrate(o),
        Command::Check(o) => Ok(Outcome::from_reports(&run::check(o)?)),
        Command::LambdaQ(o) => run::lambda_q(o),
        Command::Gmpt(o) => run::gmpt(o),
        Command::DonohoStark(o) => Ok(Outcome::from_reports(&run::donoho_stark(o)?)),
        Command::Batch { config } => Ok(Outcome::from_reports(&batch::run(&batch::load(config)?)?)),
    }
}

fn destination(cli: &Cli, format: &str) -> Option<PathBuf> {
    cli.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(format!("{}.{format}", cli.command.name())))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let format: Format = cli.format.parse().expect("clap restricts the format");
    let result = execute(&cli.command).and_then(|out| {
        output::emit(&out.table, format, destination(&cli, &cli.format).as_deref())?;
        Ok(out)
    });
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Ok(out) if !out.blocked.is_empty() => {
            for b in &out.blocked {
                eprintln!("blocked: {b}");
            }
            ExitCode::from(1)
        }
        Ok(out) if out.failures > 0 => {
            eprintln!("{} check(s) failed", out.failures);
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
    }
}
