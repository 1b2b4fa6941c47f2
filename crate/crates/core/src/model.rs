//! Physical constants, beam and wire parameters, and the scenario that ties
//! them to a potential model. Everything is SI.
//!
//! All types are immutable once built; the `with_*` methods return validated
//! copies.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// Gravitational constant and reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    g: f64,
    hbar: f64,
}

impl PhysicalConstants {
    /// CODATA 2018.
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        g: 6.674_30e-11,
        hbar: 1.054_571_817e-34,
    };

    pub fn new(g: f64, hbar: f64) -> Result<Self> {
        Ok(Self {
            g: positive("G", g)?,
            hbar: positive("hbar", hbar)?,
        })
    }

    /// m³·kg⁻¹·s⁻²
    pub fn g(&self) -> f64 {
        self.g
    }

    /// J·s
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Planck constant h = 2πħ.
    pub fn h(&self) -> f64 {
        2.0 * PI * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Probe atom: mass and forward speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    atom_mass: f64,
    speed: f64,
}

impl BeamParams {
    pub fn new(atom_mass: f64, speed: f64) -> Result<Self> {
        Ok(Self {
            atom_mass: positive("beam.atom_mass", atom_mass)?,
            speed: positive("beam.speed", speed)?,
        })
    }

    /// Slowed cesium beam, M = 2e-25 kg at 10 m/s.
    pub fn slow_cesium() -> Self {
        Self {
            atom_mass: 2e-25,
            speed: 10.0,
        }
    }

    /// Seeded supersonic sodium beam, M = 3.82e-26 kg at 1000 m/s.
    pub fn supersonic_sodium() -> Self {
        Self {
            atom_mass: 3.82e-26,
            speed: 1000.0,
        }
    }

    pub fn atom_mass(&self) -> f64 {
        self.atom_mass
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn with_speed(self, speed: f64) -> Result<Self> {
        Self::new(self.atom_mass, speed)
    }

    pub fn with_atom_mass(self, atom_mass: f64) -> Result<Self> {
        Self::new(atom_mass, self.speed)
    }
}

/// de Broglie wavelength h / (M v).
pub fn de_broglie_wavelength(constants: &PhysicalConstants, beam: &BeamParams) -> f64 {
    constants.h() / (beam.atom_mass * beam.speed)
}

/// Wire test mass with a square cross-section, parallel to the lower arm at
/// distance `distance` from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireParams {
    length: f64,
    density: f64,
    cross_side: f64,
    distance: f64,
}

impl WireParams {
    pub fn new(length: f64, density: f64, cross_side: f64, distance: f64) -> Result<Self> {
        Ok(Self {
            length: positive("wire.length", length)?,
            density: positive("wire.density", density)?,
            cross_side: positive("wire.cross_side", cross_side)?,
            distance: positive("wire.distance", distance)?,
        })
    }

    /// Wire whose cross-section side equals its distance to the beam.
    pub fn touching(length: f64, density: f64, distance: f64) -> Result<Self> {
        Self::new(length, density, distance, distance)
    }

    /// 1 m of 100 µm × 100 µm wire at relative density 20, 100 µm from the beam.
    pub fn reference() -> Self {
        Self {
            length: 1.0,
            density: 20_000.0,
            cross_side: 1e-4,
            distance: 1e-4,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn cross_side(&self) -> f64 {
        self.cross_side
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// µ = ρ a², kg/m.
    pub fn linear_density(&self) -> f64 {
        self.density * self.cross_side * self.cross_side
    }

    /// m = µ L.
    pub fn mass(&self) -> f64 {
        self.linear_density() * self.length
    }

    /// Moves the wire, keeping its cross-section (and mass).
    pub fn with_distance(self, distance: f64) -> Result<Self> {
        Self::new(self.length, self.density, self.cross_side, distance)
    }

    /// Moves the wire and resizes it so the side still equals the distance
    /// (mass scales as d²).
    pub fn with_tracking_distance(self, distance: f64) -> Result<Self> {
        Self::new(self.length, self.density, distance, distance)
    }
}

/// Grating spacing `L` and maximum arm separation `e`.
///
/// Between the first two gratings (z ∈ [−L, 0]) the lower arm runs along
/// x = 0 and the upper arm along x = e (1 + z/L).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerGeometry {
    grating_spacing: f64,
    beam_separation: f64,
}

impl InterferometerGeometry {
    pub fn new(grating_spacing: f64, beam_separation: f64) -> Result<Self> {
        Ok(Self {
            grating_spacing: positive("geometry.grating_spacing", grating_spacing)?,
            beam_separation: positive("geometry.beam_separation", beam_separation)?,
        })
    }

    /// L = 1 m (the wire length), e = 1 mm.
    pub fn reference() -> Self {
        Self {
            grating_spacing: 1.0,
            beam_separation: 1e-3,
        }
    }

    pub fn grating_spacing(&self) -> f64 {
        self.grating_spacing
    }

    pub fn beam_separation(&self) -> f64 {
        self.beam_separation
    }

    pub fn with_beam_separation(self, beam_separation: f64) -> Result<Self> {
        Self::new(self.grating_spacing, beam_separation)
    }

    pub fn lower_path(&self) -> LinearPath {
        LinearPath {
            x_start: 0.0,
            x_end: 0.0,
        }
    }

    pub fn upper_path(&self) -> LinearPath {
        LinearPath {
            x_start: 0.0,
            x_end: self.beam_separation,
        }
    }
}

/// Straight path between the first grating (z = −L, x = `x_start`) and the
/// second (z = 0, x = `x_end`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPath {
    pub x_start: f64,
    pub x_end: f64,
}

impl LinearPath {
    /// Transverse offset at longitudinal position z ∈ [−L, 0].
    pub fn offset(&self, z: f64, grating_spacing: f64) -> f64 {
        let t = 1.0 + z / grating_spacing;
        self.x_start + (self.x_end - self.x_start) * t
    }

    pub fn is_constant(&self) -> bool {
        self.x_start == self.x_end
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Yukawa {
    pub strength: f64,
    pub range: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtraDim {
    pub dimensions: u32,
    pub strength: f64,
    pub range: f64,
}

/// Force law added to (or replacing) Newtonian gravity.
///
/// Point-particle forms: `V = -G M m / r · (1 + α e^{-r/λ})` for Yukawa and
/// `V = -G M m / r · α (λ/r)^n` for n compact extra dimensions (r < λ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialModel {
    Newtonian,
    Yukawa(Yukawa),
    ExtraDim(ExtraDim),
}

impl PotentialModel {
    pub fn yukawa(strength: f64, range: f64) -> Result<Self> {
        Ok(Self::Yukawa(Yukawa {
            strength: finite("model.alpha", strength)?,
            range: positive("model.lambda", range)?,
        }))
    }

    pub fn extra_dim(dimensions: u32, strength: f64, range: f64) -> Result<Self> {
        if dimensions == 0 {
            return Err(Error::InvalidParameter {
                name: "model.n",
                value: 0.0,
                reason: "n = 0 is the Newtonian model",
            });
        }
        Ok(Self::ExtraDim(ExtraDim {
            dimensions,
            strength: finite("model.alpha", strength)?,
            range: positive("model.lambda", range)?,
        }))
    }

    pub fn strength(&self) -> Option<f64> {
        match self {
            Self::Newtonian => None,
            Self::Yukawa(y) => Some(y.strength),
            Self::ExtraDim(x) => Some(x.strength),
        }
    }

    pub fn range(&self) -> Option<f64> {
        match self {
            Self::Newtonian => None,
            Self::Yukawa(y) => Some(y.range),
            Self::ExtraDim(x) => Some(x.range),
        }
    }

    /// Same model with a different strength. Newtonian is returned as is.
    pub fn with_strength(self, strength: f64) -> Self {
        match self {
            Self::Newtonian => self,
            Self::Yukawa(y) => Self::Yukawa(Yukawa { strength, ..y }),
            Self::ExtraDim(x) => Self::ExtraDim(ExtraDim { strength, ..x }),
        }
    }
}

/// Everything needed to compute a phase difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    constants: PhysicalConstants,
    beam: BeamParams,
    wire: WireParams,
    geometry: InterferometerGeometry,
    model: PotentialModel,
    detection_limit: f64,
}

impl Scenario {
    pub const DEFAULT_DETECTION_LIMIT: f64 = 1e-3;

    pub fn new(
        constants: PhysicalConstants,
        beam: BeamParams,
        wire: WireParams,
        geometry: InterferometerGeometry,
        model: PotentialModel,
        detection_limit: f64,
    ) -> Result<Self> {
        Ok(Self {
            constants,
            beam,
            wire,
            geometry,
            model,
            detection_limit: positive("scan.detection_limit", detection_limit)?,
        })
    }

    /// Slow cesium beam, reference wire at d = 100 µm, e = 1 mm,
    /// Yukawa α = 1, λ = 100 µm, δφ_min = 1 mrad.
    pub fn reference() -> Self {
        Self {
            constants: PhysicalConstants::CODATA_2018,
            beam: BeamParams::slow_cesium(),
            wire: WireParams::reference(),
            geometry: InterferometerGeometry::reference(),
            model: PotentialModel::Yukawa(Yukawa {
                strength: 1.0,
                range: 1e-4,
            }),
            detection_limit: Self::DEFAULT_DETECTION_LIMIT,
        }
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn beam(&self) -> &BeamParams {
        &self.beam
    }

    pub fn wire(&self) -> &WireParams {
        &self.wire
    }

    pub fn geometry(&self) -> &InterferometerGeometry {
        &self.geometry
    }

    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    pub fn detection_limit(&self) -> f64 {
        self.detection_limit
    }

    pub fn with_constants(self, constants: PhysicalConstants) -> Self {
        Self { constants, ..self }
    }

    pub fn with_beam(self, beam: BeamParams) -> Self {
        Self { beam, ..self }
    }

    pub fn with_wire(self, wire: WireParams) -> Self {
        Self { wire, ..self }
    }

    pub fn with_geometry(self, geometry: InterferometerGeometry) -> Self {
        Self { geometry, ..self }
    }

    pub fn with_model(self, model: PotentialModel) -> Self {
        Self { model, ..self }
    }

    pub fn with_detection_limit(self, detection_limit: f64) -> Result<Self> {
        Ok(Self {
            detection_limit: positive("scan.detection_limit", detection_limit)?,
            ..self
        })
    }

    /// G M m / (ħ v): the phase scale multiplying every geometric factor.
    pub fn prefactor(&self) -> f64 {
        self.constants.g * self.beam.atom_mass * self.wire.mass()
            / (self.constants.hbar * self.beam.speed)
    }

    /// G M µ, the energy scale of the wire potentials.
    pub fn coupling_energy(&self) -> f64 {
        self.constants.g * self.beam.atom_mass * self.wire.linear_density()
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Self::reference()
    }
}

/// Validity flag attached to a result computed outside the regime its
/// approximations assume. Computation still proceeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// Atom–wire separation exceeds the extra-dimension compactification
    /// radius, where the power law no longer holds.
    SeparationBeyondRange { separation: f64, range: f64 },
    /// Beam separation e < 5λ: the upper arm is not negligible and the
    /// closed forms overestimate the phase. Use the numerical method.
    NarrowBeamSeparation { separation: f64, range: f64 },
    /// K0(d/λ) is below the double-precision range; the phase is zero.
    PhaseUnderflow { distance: f64, range: f64 },
    /// Grating spacing differs from the wire length; closed forms use the
    /// wire mass, path integrals the grating spacing.
    LengthMismatch {
        wire_length: f64,
        grating_spacing: f64,
    },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SeparationBeyondRange { separation, range } => write!(
                f,
                "separation {separation:e} m exceeds extra-dimension range {range:e} m"
            ),
            Self::NarrowBeamSeparation { separation, range } => write!(
                f,
                "beam separation {separation:e} m < 5 lambda ({range:e} m): upper arm not negligible, prefer --method numerical"
            ),
            Self::PhaseUnderflow { distance, range } => write!(
                f,
                "K0(d/lambda) underflows for d = {distance:e} m, lambda = {range:e} m"
            ),
            Self::LengthMismatch {
                wire_length,
                grating_spacing,
            } => write!(
                f,
                "wire length {wire_length} m differs from grating spacing {grating_spacing} m"
            ),
        }
    }
}

/// A value with the validity flags raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Flagged<T> {
    pub fn clean(value: T) -> Self {
        Self {
            value,
            warnings: Vec::new(),
        }
    }

    pub fn warn_if(mut self, condition: bool, warning: Warning) -> Self {
        if condition {
            self.warnings.push(warning);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_wire_mass() {
        let wire = WireParams::reference();
        assert_relative_eq!(wire.mass(), 2e-4, max_relative = 1e-15);
        assert_eq!(
            wire.mass(),
            wire.density() * wire.cross_side().powi(2) * wire.length()
        );
    }

    #[test]
    fn reference_prefactor_is_some_micro_radian() {
        // G M m / (ħ v), evaluated by hand: 6.6743e-11 * 2e-25 * 2e-4 / (1.054571817e-34 * 10)
        let expected = 6.674_30e-11 * 2e-25 * 2e-4 / (1.054_571_817e-34 * 10.0);
        let p = Scenario::reference().prefactor();
        assert_relative_eq!(p, expected, max_relative = 1e-14);
        assert_relative_eq!(p, 2.53e-6, max_relative = 2e-3);
    }

    #[test]
    fn prefactor_scaling() {
        let s = Scenario::reference();
        let p = s.prefactor();
        let heavier = s.with_beam(s.beam().with_atom_mass(4e-25).unwrap());
        assert_relative_eq!(heavier.prefactor(), 2.0 * p, max_relative = 1e-15);
        let faster = s.with_beam(s.beam().with_speed(100.0).unwrap());
        assert_relative_eq!(faster.prefactor(), p / 10.0, max_relative = 1e-15);
    }

    #[test]
    fn de_broglie_examples() {
        let c = PhysicalConstants::CODATA_2018;
        let na = de_broglie_wavelength(&c, &BeamParams::supersonic_sodium());
        assert!((na - 16e-12).abs() / 16e-12 < 0.1, "{na}");
        let cs = de_broglie_wavelength(&c, &BeamParams::slow_cesium());
        // h / (M v) = 6.62607015e-34 / 2e-24
        assert_relative_eq!(cs, 6.626_070_15e-34 / 2e-24, max_relative = 1e-9);
        let fast = de_broglie_wavelength(&c, &BeamParams::slow_cesium().with_speed(20.0).unwrap());
        assert_relative_eq!(fast, cs / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_non_positive_quantities() {
        assert!(BeamParams::new(2e-25, 0.0).is_err());
        assert!(BeamParams::new(-1.0, 10.0).is_err());
        assert!(WireParams::new(1.0, 2e4, 0.0, 1e-4).is_err());
        assert!(WireParams::new(1.0, 2e4, 1e-4, f64::NAN).is_err());
        assert!(InterferometerGeometry::new(1.0, -1e-3).is_err());
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(PotentialModel::yukawa(1.0, 0.0).is_err());
        assert!(PotentialModel::extra_dim(0, 1.0, 1e-4).is_err());
        assert!(Scenario::reference().with_detection_limit(0.0).is_err());
    }

    #[test]
    fn upper_path_opens_linearly() {
        let g = InterferometerGeometry::reference();
        let up = g.upper_path();
        assert_eq!(up.offset(-1.0, 1.0), 0.0);
        assert_eq!(up.offset(0.0, 1.0), 1e-3);
        assert_relative_eq!(up.offset(-0.5, 1.0), 5e-4);
        assert!(g.lower_path().is_constant());
    }

    #[test]
    fn tracking_distance_resizes_wire() {
        let w = WireParams::reference()
            .with_tracking_distance(1e-5)
            .unwrap();
        assert_relative_eq!(w.mass(), 2e-6, max_relative = 1e-14);
        let w = WireParams::reference().with_distance(1e-5).unwrap();
        assert_relative_eq!(w.mass(), 2e-4, max_relative = 1e-14);
    }
}
