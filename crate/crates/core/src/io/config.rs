//! Scenario configuration files.
//!
//! `key = value` pairs in `[beam]`, `[wire]`, `[geometry]`, `[model]`,
//! `[scan]` and `[output]` sections (TOML syntax), all values SI. Missing
//! keys take the reference-scenario defaults; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interferometer::PhaseMethod;
use crate::limits::{LambdaGrid, MassCoupling, ModelFamily, ScanSpec};
use crate::model::{
    BeamParams, InterferometerGeometry, PhysicalConstants, PotentialModel, Scenario, WireParams,
};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "WIREPHASE_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_owned(),
        reason: reason.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Newtonian,
    Yukawa,
    Extradim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Yukawa,
    Extradim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Closed,
    Numerical,
}

impl From<MethodKind> for PhaseMethod {
    fn from(m: MethodKind) -> Self {
        match m {
            MethodKind::Closed => PhaseMethod::ClosedForm,
            MethodKind::Numerical => PhaseMethod::Numerical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamSection {
    pub atom_mass: f64,
    pub speed: f64,
}

impl Default for BeamSection {
    fn default() -> Self {
        let b = BeamParams::slow_cesium();
        Self {
            atom_mass: b.atom_mass(),
            speed: b.speed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WireSection {
    pub length: f64,
    pub density: f64,
    pub cross_side: f64,
    pub distance: f64,
}

impl Default for WireSection {
    fn default() -> Self {
        let w = WireParams::reference();
        Self {
            length: w.length(),
            density: w.density(),
            cross_side: w.cross_side(),
            distance: w.distance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub grating_spacing: f64,
    pub beam_separation: f64,
}

impl Default for GeometrySection {
    fn default() -> Self {
        let g = InterferometerGeometry::reference();
        Self {
            grating_spacing: g.grating_spacing(),
            beam_separation: g.beam_separation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub alpha: f64,
    pub lambda: f64,
    /// Number of extra dimensions; only read for `kind = "extradim"`.
    pub n: u32,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            kind: ModelKind::Yukawa,
            alpha: 1.0,
            lambda: 1e-4,
            n: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
    pub family: FamilyKind,
    pub n: u32,
    /// Wire distance for the scan; the `[wire]` distance when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    pub mass_coupling: String,
    pub method: MethodKind,
    pub detection_limit: f64,
}

impl Default for ScanSection {
    fn default() -> Self {
        let grid = LambdaGrid::default();
        Self {
            lambda_min: grid.min(),
            lambda_max: grid.max(),
            points: grid.len(),
            family: FamilyKind::Yukawa,
            n: 2,
            distance: None,
            mass_coupling: MassCoupling::TracksDistance.to_string(),
            method: MethodKind::Closed,
            detection_limit: Scenario::DEFAULT_DETECTION_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Directory for relative output paths; falls back to
    /// `$WIREPHASE_OUTPUT_DIR`, then the working directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    pub curve: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: None,
            curve: PathBuf::from("curve.csv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub beam: BeamSection,
    pub wire: WireSection,
    pub geometry: GeometrySection,
    pub model: ModelSection,
    pub scan: ScanSection,
    pub output: OutputSection,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Renders the full configuration, defaults included.
    pub fn dump(&self) -> String {
        toml::to_string(self).expect("config sections serialize to TOML")
    }

    pub fn potential_model(&self) -> Result<PotentialModel, ConfigError> {
        let m = &self.model;
        match m.kind {
            ModelKind::Newtonian => Ok(PotentialModel::Newtonian),
            ModelKind::Yukawa => {
                PotentialModel::yukawa(m.alpha, m.lambda).map_err(|e| invalid("model", e))
            }
            ModelKind::Extradim => {
                PotentialModel::extra_dim(m.n, m.alpha, m.lambda).map_err(|e| invalid("model", e))
            }
        }
    }

    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        let beam = BeamParams::new(self.beam.atom_mass, self.beam.speed)
            .map_err(|e| invalid(param_key(&e, "beam"), e))?;
        let w = &self.wire;
        let wire = WireParams::new(w.length, w.density, w.cross_side, w.distance)
            .map_err(|e| invalid(param_key(&e, "wire"), e))?;
        let g = &self.geometry;
        let geometry = InterferometerGeometry::new(g.grating_spacing, g.beam_separation)
            .map_err(|e| invalid(param_key(&e, "geometry"), e))?;
        Scenario::new(
            PhysicalConstants::CODATA_2018,
            beam,
            wire,
            geometry,
            self.potential_model()?,
            self.scan.detection_limit,
        )
        .map_err(|e| invalid("scan.detection_limit", e))
    }

    pub fn family(&self) -> ModelFamily {
        match self.scan.family {
            FamilyKind::Yukawa => ModelFamily::Yukawa,
            FamilyKind::Extradim => ModelFamily::ExtraDim(self.scan.n),
        }
    }

    pub fn scan_spec(&self) -> Result<ScanSpec, ConfigError> {
        let s = &self.scan;
        let grid = LambdaGrid::new(s.lambda_min, s.lambda_max, s.points)
            .map_err(|e| invalid("scan.lambda_min/lambda_max/points", e))?;
        if s.family == FamilyKind::Extradim && s.n == 0 {
            return Err(invalid("scan.n", "extra-dimension scans need n >= 1"));
        }
        let distance = s.distance.unwrap_or(self.wire.distance);
        if !(distance > 0.0 && distance.is_finite()) {
            return Err(invalid(
                "scan.distance",
                "must be finite and strictly positive",
            ));
        }
        let mass_coupling = s
            .mass_coupling
            .parse()
            .map_err(|e: String| invalid("scan.mass_coupling", e))?;
        Ok(ScanSpec {
            grid,
            family: self.family(),
            distance,
            mass_coupling,
            method: s.method.into(),
        })
    }

    /// Resolves a relative output path against the configured directory,
    /// `$WIREPHASE_OUTPUT_DIR`, or the working directory, in that order.
    pub fn resolve_output(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            return path.to_owned();
        }
        let dir = self
            .output
            .directory
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from));
        match dir {
            Some(dir) => dir.join(path),
            None => path.to_owned(),
        }
    }
}

// "beam.speed" from an InvalidParameter error, else the section name
fn param_key(err: &crate::Error, section: &'static str) -> &'static str {
    match err {
        crate::Error::InvalidParameter { name, .. } => name,
        _ => section,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference_scenario() {
        let c = Config::parse("").unwrap();
        assert_eq!(c.scenario().unwrap(), Scenario::reference());
        assert_eq!(c.scan_spec().unwrap().grid, LambdaGrid::default());
    }

    #[test]
    fn partial_sections_fill_defaults() {
        let c = Config::parse("[wire]\ndistance = 1e-5\n\n[model]\nkind = \"extradim\"\nn = 3\n")
            .unwrap();
        let s = c.scenario().unwrap();
        assert_eq!(s.wire().distance(), 1e-5);
        assert_eq!(s.wire().cross_side(), 1e-4);
        assert_eq!(*s.model(), PotentialModel::extra_dim(3, 1.0, 1e-4).unwrap());
    }

    #[test]
    fn integers_are_accepted_for_reals() {
        let c = Config::parse("[beam]\nspeed = 1000\n").unwrap();
        assert_eq!(c.beam.speed, 1000.0);
    }

    #[test]
    fn unknown_key_names_line() {
        let err = Config::parse("[beam]\nspeed = 10.0\nvelocity = 3\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("velocity"), "{msg}");
    }

    #[test]
    fn zero_speed_names_key() {
        let c = Config::parse("[beam]\nspeed = 0\n").unwrap();
        let msg = c.scenario().unwrap_err().to_string();
        assert!(msg.contains("beam.speed"), "{msg}");
    }

    #[test]
    fn dump_round_trips() {
        let c = Config::parse(
            "[model]\nkind = \"extradim\"\nn = 1\nlambda = 3.3e-5\n[scan]\ndistance = 2.5e-5\n",
        )
        .unwrap();
        let again = Config::parse(&c.dump()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.scenario().unwrap(), c.scenario().unwrap());
    }

    #[test]
    fn bad_mass_coupling() {
        let c = Config::parse("[scan]\nmass_coupling = \"heavy\"\n").unwrap();
        assert!(c
            .scan_spec()
            .unwrap_err()
            .to_string()
            .contains("scan.mass_coupling"));
    }

    #[test]
    fn configured_directory_wins() {
        let mut c = Config::default();
        c.output.directory = Some(PathBuf::from("/tmp/out"));
        assert_eq!(
            c.resolve_output(Path::new("a.csv")),
            PathBuf::from("/tmp/out/a.csv")
        );
        assert_eq!(
            c.resolve_output(Path::new("/x/a.csv")),
            PathBuf::from("/x/a.csv")
        );
    }
}
