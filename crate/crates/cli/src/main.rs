use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatspace_cli::{run, CliError, Model, Preset, Scenario};

#[derive(Parser)]
#[command(name = "flatspace", version, about = "Gravitation on flat space with warped time: scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a bound orbit; trajectory table plus precession.
    Orbit(Common),
    /// Perihelion advance per orbit and per century.
    Precession(Common),
    /// Light deflection by three routes.
    LightDeflect(Common),
    /// Radar echo delay past the body.
    EchoDelay(Common),
    /// Gyroscope spin transport on a circular orbit.
    Gyro(Common),
    /// Radial energy carrier profile.
    Density {
        #[command(flatten)]
        common: Common,
        /// Radii in units of r_o, comma separated.
        #[arg(long, value_delimiter = ',')]
        r_over_ro: Vec<f64>,
    },
    /// Electric carrier analog.
    Electric {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        r_over_ro: Vec<f64>,
    },
    /// All classic observables under every model.
    Compare(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Named preset: solar, mercury, earth, electron, strong-field.
    #[arg(long)]
    preset: Option<String>,
    /// Scenario JSON file (a saved report.json also works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for report.json, results.csv and table CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format printed to stdout.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    orbits: Option<usize>,
    /// flatspace-weber, schwarzschild or newtonian.
    #[arg(long)]
    model: Option<String>,
}

impl Common {
    fn scenario(&self, r_over_ro: &[f64]) -> Result<Scenario, CliError> {
        let mut s = match (&self.config, &self.preset) {
            (Some(path), None) => Scenario::load(path)?,
            (None, preset) => preset.as_deref().unwrap_or("solar").parse::<Preset>()?.scenario(),
            (Some(_), Some(_)) => return Err(CliError::Config("use either --preset or --config".into())),
        };
        if let Some(t) = self.tol {
            s.tol = t;
        }
        if let Some(n) = self.orbits {
            s.n_orbits = n;
        }
        if let Some(m) = &self.model {
            s.model = m.parse::<Model>()?;
        }
        if !r_over_ro.is_empty() {
            s.r_over_ro = r_over_ro.to_vec();
        }
        s.validate()?;
        Ok(s)
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (name, common, radii): (&str, &Common, &[f64]) = match &cli.command {
        Command::Orbit(c) => ("orbit", c, &[]),
        Command::Precession(c) => ("precession", c, &[]),
        Command::LightDeflect(c) => ("light-deflect", c, &[]),
        Command::EchoDelay(c) => ("echo-delay", c, &[]),
        Command::Gyro(c) => ("gyro", c, &[]),
        Command::Density { common, r_over_ro } => ("density", common, r_over_ro),
        Command::Electric { common, r_over_ro } => ("electric", common, r_over_ro),
        Command::Compare(c) => ("compare", c, &[]),
    };
    let scenario = common.scenario(radii)?;
    let report = run(name, &scenario)?;
    if let Some(dir) = &common.out {
        report.write_dir(dir)?;
    }
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.results_csv()?,
    };
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flatspace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
