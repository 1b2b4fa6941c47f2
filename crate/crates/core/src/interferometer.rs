//! Semiclassical phases along the unperturbed arms and the two-arm phase
//! difference.
//!
//! The phase accumulated on a straight path through the static potential `V`
//! is `φ = -(1/ħv) ∫ V(x(z)) dz` over the G₁→G₂ segment z ∈ [−L, 0]; the
//! G₂→G₃ half carries no wire. The sign makes an attractive potential on the
//! lower arm give a positive phase, and `δφ = φ_lower − φ_upper`.

use std::fmt;

use crate::error::Result;
use crate::model::{Flagged, LinearPath, PotentialModel, Scenario, Warning};
use crate::potentials::{
    extradim_wire_potential, newtonian_wire_potential, yukawa_wire_potential, Coupling,
};
use crate::quadrature::{integrate, QuadratureSettings};
use crate::specfun::{bessel_k0, bessel_k0_underflows, hyp2f1_half, EULER_GAMMA};

/// Closed forms need e ≥ this many interaction ranges.
pub const NARROW_BEAM_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PhaseMethod {
    /// Infinite-wire closed forms with the upper arm neglected.
    #[default]
    ClosedForm,
    /// Both arms integrated numerically along their straight paths.
    Numerical,
}

impl fmt::Display for PhaseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ClosedForm => "closed",
            Self::Numerical => "numerical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub delta_phi: f64,
    pub phi_lower: f64,
    pub phi_upper: f64,
    pub method: PhaseMethod,
    pub warnings: Vec<Warning>,
}

impl PhaseResult {
    fn new(phi_lower: f64, phi_upper: f64, method: PhaseMethod, warnings: Vec<Warning>) -> Self {
        Self {
            delta_phi: phi_lower - phi_upper,
            phi_lower,
            phi_upper,
            method,
            warnings,
        }
    }
}

fn push_unique(warnings: &mut Vec<Warning>, w: Warning) {
    let same_kind = |a: &Warning| std::mem::discriminant(a) == std::mem::discriminant(&w);
    if !warnings.iter().any(same_kind) {
        warnings.push(w);
    }
}

fn narrow_beam(scenario: &Scenario) -> Option<Warning> {
    let e = scenario.geometry().beam_separation();
    let range = scenario.model().range()?;
    (e < NARROW_BEAM_FACTOR * range).then_some(Warning::NarrowBeamSeparation {
        separation: e,
        range,
    })
}

/// Wire potential at transverse offset `x` from the lower path.
fn potential_at(x: f64, scenario: &Scenario) -> Result<Flagged<f64>> {
    let d = scenario.wire().distance();
    let coupling = Coupling::of(scenario);
    match scenario.model() {
        PotentialModel::Newtonian => Ok(Flagged::clean(newtonian_wire_potential(x, d, coupling)?)),
        PotentialModel::Yukawa(y) => Ok(Flagged::clean(yukawa_wire_potential(d + x, y, coupling)?)),
        PotentialModel::ExtraDim(m) => extradim_wire_potential(d + x, m, coupling),
    }
}

/// Phase accumulated along a straight path between the first two gratings.
pub fn path_phase(
    path: &LinearPath,
    scenario: &Scenario,
    settings: &QuadratureSettings,
) -> Result<Flagged<f64>> {
    let length = scenario.geometry().grating_spacing();
    let scale = -1.0 / (scenario.constants().hbar() * scenario.beam().speed());
    // the path is straight, so checking its ends rules out touching the wire
    let start = potential_at(path.x_start, scenario)?;
    let end = potential_at(path.x_end, scenario)?;
    if path.is_constant() {
        return Ok(Flagged {
            value: scale * length * start.value,
            warnings: start.warnings,
        });
    }
    let mut warnings = start.warnings;
    for w in end.warnings {
        push_unique(&mut warnings, w);
    }
    let integrand = |z: f64| {
        potential_at(path.offset(z, length), scenario)
            .map(|v| v.value)
            .unwrap_or(f64::NAN)
    };
    let integral = integrate(integrand, -length, 0.0, settings)?.value;
    Ok(Flagged {
        value: scale * integral,
        warnings,
    })
}

/// Phase difference from the infinite-wire closed forms, neglecting the
/// upper arm for the short-range models:
///
/// - Yukawa: `P · 2α K0(d/λ)`
/// - extra dimensions: `P · 2α (λ/d)^{n+1} 2F1(1/2, (n+1)/2; 3/2; -(λ/d)²)`
/// - Newtonian: `P · 2 ln(1 + e/d)`
///
/// with `P = G M m / (ħ v)`.
pub fn phase_difference_closed(scenario: &Scenario) -> Result<PhaseResult> {
    let prefactor = scenario.prefactor();
    let d = scenario.wire().distance();
    let mut warnings = Vec::new();
    let result = match scenario.model() {
        PotentialModel::Newtonian => {
            let e = scenario.geometry().beam_separation();
            let delta = prefactor * 2.0 * (e / d).ln_1p();
            PhaseResult::new(0.0, -delta, PhaseMethod::ClosedForm, warnings)
        }
        PotentialModel::Yukawa(y) => {
            let x = d / y.range;
            if bessel_k0_underflows(x) {
                warnings.push(Warning::PhaseUnderflow {
                    distance: d,
                    range: y.range,
                });
            }
            warnings.extend(narrow_beam(scenario));
            let phi = prefactor * 2.0 * y.strength * bessel_k0(x)?;
            PhaseResult::new(phi, 0.0, PhaseMethod::ClosedForm, warnings)
        }
        PotentialModel::ExtraDim(m) => {
            let ratio = m.range / d;
            if d > m.range {
                warnings.push(Warning::SeparationBeyondRange {
                    separation: d,
                    range: m.range,
                });
            }
            warnings.extend(narrow_beam(scenario));
            let shape = ratio.powi(m.dimensions as i32 + 1) * hyp2f1_half(m.dimensions, ratio)?;
            let phi = prefactor * 2.0 * m.strength * shape;
            PhaseResult::new(phi, 0.0, PhaseMethod::ClosedForm, warnings)
        }
    };
    Ok(result)
}

/// Phase difference with both arms integrated along their straight paths.
pub fn phase_difference_numerical(
    scenario: &Scenario,
    settings: &QuadratureSettings,
) -> Result<PhaseResult> {
    let geometry = scenario.geometry();
    let lower = path_phase(&geometry.lower_path(), scenario, settings)?;
    let upper = path_phase(&geometry.upper_path(), scenario, settings)?;
    let mut warnings = lower.warnings;
    for w in upper.warnings {
        push_unique(&mut warnings, w);
    }
    if let PotentialModel::Yukawa(y) = scenario.model() {
        let d = scenario.wire().distance();
        if bessel_k0_underflows(d / y.range) {
            warnings.push(Warning::PhaseUnderflow {
                distance: d,
                range: y.range,
            });
        }
    }
    warnings.extend(narrow_beam(scenario));
    let (wire_length, spacing) = (scenario.wire().length(), geometry.grating_spacing());
    if (wire_length - spacing).abs() > 1e-12 * wire_length.max(spacing) {
        warnings.push(Warning::LengthMismatch {
            wire_length,
            grating_spacing: spacing,
        });
    }
    Ok(PhaseResult::new(
        lower.value,
        upper.value,
        PhaseMethod::Numerical,
        warnings,
    ))
}

pub fn phase_difference(
    scenario: &Scenario,
    method: PhaseMethod,
    settings: &QuadratureSettings,
) -> Result<PhaseResult> {
    match method {
        PhaseMethod::ClosedForm => phase_difference_closed(scenario),
        PhaseMethod::Numerical => phase_difference_numerical(scenario, settings),
    }
}

/// Exact straight-path Newtonian phase difference, `P · 2[(1 + d/e) ln(1 + e/d) − 1]`.
pub fn newtonian_exact_phase(scenario: &Scenario) -> f64 {
    let d = scenario.wire().distance();
    let e = scenario.geometry().beam_separation();
    scenario.prefactor() * 2.0 * ((1.0 + d / e) * (e / d).ln_1p() - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YukawaRegime {
    /// λ/d ≤ 0.1: `2K0(d/λ) ≈ √(2π) √(λ/d) e^{−d/λ}`.
    DeepYukawa,
    /// λ/d ≥ 10: `2K0(d/λ) ≈ 2(ln(2λ/d) − γ)`.
    Logarithmic,
    /// In between; the estimate carries no accuracy guarantee.
    Crossover,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub regime: YukawaRegime,
    /// Estimate of the geometric factor `2 K0(d/λ)`.
    pub factor: f64,
}

/// Leading asymptotic form of the Yukawa geometric factor `2 K0(d/λ)`.
pub fn yukawa_phase_asymptotics(d: f64, lambda: f64) -> AsymptoticEstimate {
    let ratio = lambda / d;
    let deep = || 2.0 * (std::f64::consts::FRAC_PI_2 * ratio).sqrt() * (-1.0 / ratio).exp();
    let log = || 2.0 * ((2.0 * ratio).ln() - EULER_GAMMA);
    if ratio <= 0.1 {
        AsymptoticEstimate {
            regime: YukawaRegime::DeepYukawa,
            factor: deep(),
        }
    } else if ratio >= 10.0 {
        AsymptoticEstimate {
            regime: YukawaRegime::Logarithmic,
            factor: log(),
        }
    } else {
        AsymptoticEstimate {
            regime: YukawaRegime::Crossover,
            factor: if ratio <= 1.0 { deep() } else { log() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InterferometerGeometry, WireParams};
    use approx::assert_relative_eq;

    const K0_AT_1: f64 = 0.421_024_438_240_708_23;

    fn reference() -> Scenario {
        Scenario::reference()
    }

    #[test]
    fn zero_strength_gives_zero_phase() {
        let s = reference().with_model(PotentialModel::yukawa(0.0, 1e-4).unwrap());
        let q = QuadratureSettings::default();
        assert_eq!(
            path_phase(&s.geometry().upper_path(), &s, &q)
                .unwrap()
                .value,
            0.0
        );
        let n = phase_difference_numerical(&s, &q).unwrap();
        assert_eq!((n.phi_lower, n.phi_upper, n.delta_phi), (0.0, 0.0, 0.0));
        assert_eq!(phase_difference_closed(&s).unwrap().delta_phi, 0.0);
    }

    #[test]
    fn lower_path_is_constant_integrand() {
        let s = reference();
        let q = QuadratureSettings::default();
        let phi = path_phase(&s.geometry().lower_path(), &s, &q)
            .unwrap()
            .value;
        let PotentialModel::Yukawa(y) = s.model() else {
            unreachable!()
        };
        let v = yukawa_wire_potential(1e-4, y, Coupling::of(&s)).unwrap();
        let l = s.geometry().grating_spacing();
        assert_eq!(phi, -(l / (s.constants().hbar() * s.beam().speed())) * v);
    }

    #[test]
    fn newtonian_upper_path_matches_analytic_average() {
        let s = reference()
            .with_model(PotentialModel::Newtonian)
            .with_wire(WireParams::reference().with_distance(1e-5).unwrap());
        let q = QuadratureSettings::default();
        let phi = path_phase(&s.geometry().upper_path(), &s, &q)
            .unwrap()
            .value;
        let (d, e): (f64, f64) = (1e-5, 1e-3);
        let expected = -s.prefactor() * 2.0 * ((1.0 + d / e) * (1.0 + e / d).ln() - 1.0);
        assert_relative_eq!(phi, expected, max_relative = 1e-9);
    }

    #[test]
    fn closed_yukawa_reference() {
        let r = phase_difference_closed(&reference()).unwrap();
        assert_relative_eq!(
            r.delta_phi,
            reference().prefactor() * 2.0 * K0_AT_1,
            max_relative = 1e-12
        );
        assert_relative_eq!(r.delta_phi, 2.13e-6, max_relative = 1e-3);
        assert_eq!(r.phi_upper, 0.0);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn closed_newtonian_reference() {
        let s = reference()
            .with_model(PotentialModel::Newtonian)
            .with_wire(WireParams::reference().with_distance(1e-5).unwrap());
        let r = phase_difference_closed(&s).unwrap();
        assert_relative_eq!(
            r.delta_phi,
            s.prefactor() * 2.0 * 101f64.ln(),
            max_relative = 1e-14
        );
        assert!(r.delta_phi < 1e-3);
        assert_eq!(r.delta_phi, r.phi_lower - r.phi_upper);
    }

    #[test]
    fn closed_extradim_n2_at_range() {
        let s = reference().with_model(PotentialModel::extra_dim(2, 1.0, 1e-4).unwrap());
        let r = phase_difference_closed(&s).unwrap();
        assert_relative_eq!(
            r.delta_phi,
            s.prefactor() * 2.0 / 2f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn narrow_beam_reduces_numerical_phase() {
        let s = reference().with_geometry(InterferometerGeometry::new(1.0, 2e-4).unwrap());
        let q = QuadratureSettings::default();
        let closed = phase_difference_closed(&s).unwrap();
        let numerical = phase_difference_numerical(&s, &q).unwrap();
        assert!(numerical.delta_phi.abs() < closed.delta_phi.abs());
        for r in [&closed, &numerical] {
            assert!(r
                .warnings
                .iter()
                .any(|w| matches!(w, Warning::NarrowBeamSeparation { .. })));
        }
    }

    #[test]
    fn numerical_newtonian_is_exact_path_average() {
        let s = reference()
            .with_model(PotentialModel::Newtonian)
            .with_wire(WireParams::reference().with_distance(1e-5).unwrap());
        let q = QuadratureSettings::default();
        let r = phase_difference_numerical(&s, &q).unwrap();
        assert_relative_eq!(r.delta_phi, newtonian_exact_phase(&s), max_relative = 1e-9);
        assert_eq!(r.phi_lower, 0.0);
    }

    #[test]
    fn path_touching_wire_is_rejected() {
        let s = reference();
        let q = QuadratureSettings::default();
        let bad = LinearPath {
            x_start: 0.0,
            x_end: -2e-4,
        };
        assert!(path_phase(&bad, &s, &q).is_err());
    }

    #[test]
    fn asymptotic_regimes() {
        let deep = yukawa_phase_asymptotics(50.0, 1.0);
        assert_eq!(deep.regime, YukawaRegime::DeepYukawa);
        let exact = 2.0 * bessel_k0(50.0).unwrap();
        assert!((deep.factor / exact - 1.0).abs() < 0.01);

        let log = yukawa_phase_asymptotics(1.0, 1e3);
        assert_eq!(log.regime, YukawaRegime::Logarithmic);
        let exact = 2.0 * bessel_k0(1e-3).unwrap();
        assert!((log.factor / exact - 1.0).abs() < 1e-3);

        assert_eq!(
            yukawa_phase_asymptotics(1.0, 1.0).regime,
            YukawaRegime::Crossover
        );
    }

    #[test]
    fn far_wire_flags_underflow() {
        let s = reference().with_model(PotentialModel::yukawa(1.0, 1e-7).unwrap());
        let r = phase_difference_closed(&s).unwrap();
        assert_eq!(r.delta_phi, 0.0);
        assert!(r
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::PhaseUnderflow { .. })));
    }
}
