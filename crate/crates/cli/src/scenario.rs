//! Scenario files and named presets.
//!
//! All lengths are metres, angles radians, times as noted per field.
//! Internally `c = 1`; SI constants below are applied only when values
//! leave the program.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Newton's constant (m³ kg⁻¹ s⁻²).
pub const G_SI: f64 = 6.674e-11;
/// Speed of light (m/s).
pub const C_SI: f64 = 2.998e8;
pub const ARCSEC: f64 = std::f64::consts::PI / (180.0 * 3600.0);
pub const DAYS_PER_CENTURY: f64 = 36525.0;
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "flatspace-weber")]
    FlatspaceWeber,
    #[serde(rename = "schwarzschild")]
    Schwarzschild,
    #[serde(rename = "newtonian")]
    Newtonian,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::FlatspaceWeber, Model::Schwarzschild, Model::Newtonian];

    pub fn name(self) -> &'static str {
        match self {
            Model::FlatspaceWeber => "flatspace-weber",
            Model::Schwarzschild => "schwarzschild",
            Model::Newtonian => "newtonian",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitPlane {
    Polar,
    Equatorial,
}

/// One run configuration. Presets fill every field; a config file may
/// override any subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub model: Model,
    /// Energy radius `G E_M/c⁴` of the central body (m).
    pub r_o: f64,
    /// Body radius, also the ray's closest approach (m).
    pub body_radius: f64,
    /// Orbit semi-major axis (m).
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    /// Orbital period (days), for century rates.
    pub period_days: f64,
    /// Radar echo: Earth–body distance (m).
    pub earth_distance: f64,
    /// Radar echo: planet–body distance (m).
    pub planet_distance: f64,
    /// Body spin about +z (rad/s).
    pub spin_rate: f64,
    /// Gyroscope circular orbit radius (m).
    pub orbit_radius: f64,
    pub orbit_plane: OrbitPlane,
    /// Carrier charge in elementary charges.
    pub charge: f64,
    /// Electromagnetic radius (m).
    pub r_e: f64,
    /// Radii for density tables, in units of `r_o`.
    pub r_over_ro: Vec<f64>,
    pub n_orbits: usize,
    /// Integration tolerance.
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Solar,
    Mercury,
    Earth,
    Electron,
    StrongField,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Solar,
        Preset::Mercury,
        Preset::Earth,
        Preset::Electron,
        Preset::StrongField,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Solar => "solar",
            Preset::Mercury => "mercury",
            Preset::Earth => "earth",
            Preset::Electron => "electron",
            Preset::StrongField => "strong-field",
        }
    }

    pub fn scenario(self) -> Scenario {
        // Mercury ephemeris elements: a = 0.387 AU, e = 0.2056, P = 87.969 d
        let mercury = (5.79e10, 0.2056, 87.969);
        let sun = Scenario {
            name: self.name().into(),
            model: Model::FlatspaceWeber,
            r_o: 1480.0,
            body_radius: 0.7e9,
            semi_major_axis: mercury.0,
            eccentricity: mercury.1,
            period_days: mercury.2,
            earth_distance: 149.5e9,
            planet_distance: 57.9e9,
            spin_rate: 2.865e-6,
            orbit_radius: 0.7e9 * 1.1,
            orbit_plane: OrbitPlane::Polar,
            charge: 0.0,
            r_e: 1.0,
            r_over_ro: vec![1.0],
            n_orbits: 10,
            tol: 1e-10,
        };
        match self {
            Preset::Solar => sun,
            // GM_sun/c² = 1476.6 m
            Preset::Mercury => Scenario { r_o: 1476.6, ..sun },
            Preset::Earth => Scenario {
                name: self.name().into(),
                // GM_earth/c² = 4.435 mm
                r_o: 4.435e-3,
                body_radius: 6.371e6,
                semi_major_axis: 7.027e6,
                eccentricity: 0.0,
                period_days: 97.6 / 1440.0,
                earth_distance: 3.844e8,
                planet_distance: 3.844e8,
                spin_rate: 7.292e-5,
                orbit_radius: 7.027e6,
                n_orbits: 1,
                ..sun
            },
            Preset::Electron => Scenario {
                name: self.name().into(),
                r_o: 7e-58,
                body_radius: 7e-58,
                charge: -1.0,
                r_e: 7e-58,
                r_over_ro: vec![0.1, 1.0, 2.0, 9.0, 100.0],
                ..sun
            },
            Preset::StrongField => Scenario {
                name: self.name().into(),
                // r_min = a(1 − e) = 20 r_o
                r_o: 1.0,
                body_radius: 20.0,
                semi_major_axis: 25.0,
                eccentricity: 0.2,
                period_days: 1.0,
                earth_distance: 1e3,
                planet_distance: 8e2,
                orbit_radius: 40.0,
                spin_rate: 0.0,
                ..sun
            },
        }
    }
}

impl FromStr for Preset {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown preset '{s}'")))
    }
}

impl Scenario {
    /// Checks ranges: every length and tolerance positive, `0 ≤ e < 1`.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("r_o", self.r_o),
            ("body_radius", self.body_radius),
            ("semi_major_axis", self.semi_major_axis),
            ("period_days", self.period_days),
            ("earth_distance", self.earth_distance),
            ("planet_distance", self.planet_distance),
            ("orbit_radius", self.orbit_radius),
            ("r_e", self.r_e),
            ("tol", self.tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.eccentricity) {
            return Err(CliError::Config(format!("eccentricity must lie in [0, 1), got {}", self.eccentricity)));
        }
        if !self.spin_rate.is_finite() || !self.charge.is_finite() {
            return Err(CliError::Config("spin_rate and charge must be finite".into()));
        }
        if self.r_over_ro.is_empty() || self.r_over_ro.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(CliError::Config("r_over_ro needs positive finite entries".into()));
        }
        if self.n_orbits == 0 {
            return Err(CliError::Config("n_orbits must be at least 1".into()));
        }
        if self.tol >= 1e-2 {
            return Err(CliError::Config(format!("tol {} is too coarse", self.tol)));
        }
        Ok(())
    }

    /// Loads a scenario file. A saved run report is accepted as well: its
    /// `config` echo is used.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
        if let Some(echo) = value.get_mut("config") {
            value = echo.take();
        }
        // a partial file starts from its preset, or from solar
        let base = match value.get("preset").and_then(|p| p.as_str()) {
            Some(name) => name.parse::<Preset>()?.scenario(),
            None => Preset::Solar.scenario(),
        };
        let mut merged = serde_json::to_value(&base).expect("scenario serializes");
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::Config("config must be a JSON object".into()))?;
        for (k, v) in obj {
            if k != "preset" {
                merged[k] = v.clone();
            }
        }
        let s: Scenario =
            serde_json::from_value(merged).map_err(|e| CliError::Config(format!("config does not match schema: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn orbits_per_century(&self) -> f64 {
        DAYS_PER_CENTURY / self.period_days
    }

    /// Body spin in rad per metre of light travel.
    pub fn spin_per_length(&self) -> f64 {
        self.spin_rate / C_SI
    }
}
