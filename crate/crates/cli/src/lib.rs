//! Scenario runner for the flat-space gravitation library: presets,
//! a Schwarzschild baseline, and CSV/JSON reports.

pub mod baseline;
pub mod commands;
pub mod report;
pub mod scenario;

use flatspace_core::carrier::CarrierError;
use flatspace_core::geodesic::GeodesicError;
use flatspace_core::photon::PhotonError;
use flatspace_core::spin::SpinError;
use thiserror::Error;

pub use report::{ReportRow, RunReport, Table};
pub use scenario::{Model, Preset, Scenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported quantity: {0}")]
    UnsupportedQuantity(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnsupportedQuantity(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<GeodesicError> for CliError {
    fn from(e: GeodesicError) -> Self {
        match e {
            GeodesicError::UnboundOrbit(_) | GeodesicError::InvalidElements(_) | GeodesicError::NonPositiveRadius(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<PhotonError> for CliError {
    fn from(e: PhotonError) -> Self {
        match e {
            PhotonError::NonPositiveRadius(_) | PhotonError::GeometryInvalid(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        match e {
            SpinError::NonPositiveRadius(_) | SpinError::InvalidPlane => CliError::Config(e.to_string()),
            SpinError::Geodesic(g) => g.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<CarrierError> for CliError {
    fn from(e: CarrierError) -> Self {
        match e {
            CarrierError::NonPositiveRadius(_) | CarrierError::InvalidParameter(_) => CliError::Config(e.to_string()),
            CarrierError::Quadrature(_) => CliError::Numerical(e.to_string()),
        }
    }
}

/// Subcommand names, in help order.
pub const COMMANDS: [&str; 8] = [
    "orbit", "precession", "light-deflect", "echo-delay", "gyro", "density", "electric", "compare",
];

/// Runs one subcommand on a validated scenario.
pub fn run(command: &str, s: &Scenario) -> Result<RunReport, CliError> {
    s.validate()?;
    let report = match command {
        "orbit" => commands::orbit(s),
        "precession" => commands::precession(s),
        "light-deflect" => commands::light_deflect(s),
        "echo-delay" => commands::echo_delay(s),
        "gyro" => commands::gyro(s),
        "density" => commands::density(s),
        "electric" => commands::electric(s),
        "compare" => commands::compare(s),
        other => Err(CliError::Config(format!("unknown command '{other}'"))),
    }?;
    report.check_finite()?;
    Ok(report)
}
