//! Exclusion limits on the coupling strength α.
//!
//! Phases are linear in α, so a null measurement at threshold δφ_min bounds
//! `|α| ≤ δφ_min / δφ(α = 1)`. Scans evaluate this over a log grid of ranges λ.
//!
//! Extra-dimension laws only hold inside the compactification radius. Where a
//! scan point has λ < d the Yukawa closed form with the same (α, λ) is used
//! instead and the point is flagged [`Regime::YukawaExtrapolated`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interferometer::{phase_difference, PhaseMethod};
use crate::model::{PotentialModel, Scenario, Warning};
use crate::quadrature::QuadratureSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    Yukawa,
    ExtraDim(u32),
}

impl ModelFamily {
    /// Unit-strength model of this family at range λ.
    pub fn unit_model(&self, lambda: f64) -> Result<PotentialModel> {
        match *self {
            Self::Yukawa => PotentialModel::yukawa(1.0, lambda),
            Self::ExtraDim(n) => PotentialModel::extra_dim(n, 1.0, lambda),
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Yukawa => f.write_str("yukawa"),
            Self::ExtraDim(n) => write!(f, "extradim(n={n})"),
        }
    }
}

/// How the wire changes when the scan moves it to distance d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MassCoupling {
    /// Cross-section (and mass) unchanged.
    FixedMass,
    /// Side equals d, so m = ρ L d².
    #[default]
    TracksDistance,
}

impl FromStr for MassCoupling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fixed_mass" => Ok(Self::FixedMass),
            "mass_tracks_d" => Ok(Self::TracksDistance),
            other => Err(format!(
                "unknown mass coupling `{other}` (expected fixed_mass or mass_tracks_d)"
            )),
        }
    }
}

impl fmt::Display for MassCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FixedMass => "fixed_mass",
            Self::TracksDistance => "mass_tracks_d",
        })
    }
}

/// Log-spaced grid of ranges λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGrid {
    min: f64,
    max: f64,
    points: usize,
}

impl LambdaGrid {
    /// Accepts `min == max` (a degenerate grid of repeated points).
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min > 0.0 && max.is_finite() && min <= max) {
            return Err(Error::Range {
                min,
                max,
                reason: "lambda grid needs 0 < min <= max",
            });
        }
        if points < 2 {
            return Err(Error::InvalidParameter {
                name: "scan.points",
                value: points as f64,
                reason: "need at least 2 grid points",
            });
        }
        Ok(Self { min, max, points })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        log_space(self.min, self.max, self.points)
    }
}

impl Default for LambdaGrid {
    /// 61 points over [10 µm, 1 mm].
    fn default() -> Self {
        Self {
            min: 1e-5,
            max: 1e-3,
            points: 61,
        }
    }
}

pub(crate) fn log_space(min: f64, max: f64, points: usize) -> Vec<f64> {
    let (a, b) = (min.ln(), max.ln());
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| match i {
            0 => min,
            i if i == points - 1 => max,
            i => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub grid: LambdaGrid,
    pub family: ModelFamily,
    /// Wire–beam distance d.
    pub distance: f64,
    pub mass_coupling: MassCoupling,
    pub method: PhaseMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Native,
    YukawaExtrapolated,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Native => "native",
            Self::YukawaExtrapolated => "yukawa_extrapolated",
        })
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "native" => Ok(Self::Native),
            "yukawa_extrapolated" => Ok(Self::YukawaExtrapolated),
            other => Err(format!("unknown regime `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub lambda: f64,
    pub alpha_limit: f64,
    pub regime: Regime,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure {
    pub lambda: f64,
    pub error: Error,
}

/// α bounds in ascending λ, plus grid points that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExclusionCurve {
    pub points: Vec<CurvePoint>,
    pub failures: Vec<ScanFailure>,
}

/// `δφ_min / δφ(α = 1)` for the scenario's model.
pub fn alpha_limit(
    scenario: &Scenario,
    method: PhaseMethod,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let model = match scenario.model() {
        PotentialModel::Newtonian => {
            return Err(Error::UnsupportedModel(
                "the Newtonian model has no strength to bound",
            ))
        }
        m => m.with_strength(1.0),
    };
    let unit = scenario.with_model(model);
    let phase = phase_difference(&unit, method, settings)?.delta_phi;
    if !(phase > 0.0 && phase.is_finite()) {
        return Err(Error::DegenerateSignal {
            lambda: model.range().unwrap_or(f64::NAN),
            phase,
        });
    }
    Ok(scenario.detection_limit() / phase)
}

/// Unit-strength model used for a limit at (family, λ, d), applying the
/// Yukawa extrapolation when an extra-dimension range lies inside d.
pub fn limit_model(
    family: ModelFamily,
    lambda: f64,
    distance: f64,
) -> Result<(PotentialModel, Regime)> {
    match family {
        ModelFamily::ExtraDim(_) if lambda < distance => Ok((
            ModelFamily::Yukawa.unit_model(lambda)?,
            Regime::YukawaExtrapolated,
        )),
        f => Ok((f.unit_model(lambda)?, Regime::Native)),
    }
}

fn place_wire(base: &Scenario, distance: f64, coupling: MassCoupling) -> Result<Scenario> {
    let wire = match coupling {
        MassCoupling::FixedMass => base.wire().with_distance(distance)?,
        MassCoupling::TracksDistance => base.wire().with_tracking_distance(distance)?,
    };
    Ok(base.with_wire(wire))
}

fn limit_point(
    family: ModelFamily,
    lambda: f64,
    placed: &Scenario,
    method: PhaseMethod,
    settings: &QuadratureSettings,
) -> Result<CurvePoint> {
    let (model, regime) = limit_model(family, lambda, placed.wire().distance())?;
    let scenario = placed.with_model(model);
    let alpha = alpha_limit(&scenario, method, settings)?;
    let warnings = phase_difference(&scenario, method, settings)?.warnings;
    Ok(CurvePoint {
        lambda,
        alpha_limit: alpha,
        regime,
        warnings,
    })
}

/// Exclusion curve over the spec's λ grid. Points are evaluated in parallel;
/// output order depends only on the grid.
pub fn scan(
    spec: &ScanSpec,
    base: &Scenario,
    settings: &QuadratureSettings,
) -> Result<ExclusionCurve> {
    let placed = place_wire(base, spec.distance, spec.mass_coupling)?;
    let lambdas = spec.grid.values();
    let mut evaluated: Vec<(usize, f64, Result<CurvePoint>)> = lambdas
        .par_iter()
        .enumerate()
        .map(|(i, &lambda)| {
            (
                i,
                lambda,
                limit_point(spec.family, lambda, &placed, spec.method, settings),
            )
        })
        .collect();
    evaluated.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut curve = ExclusionCurve::default();
    for (_, lambda, outcome) in evaluated {
        match outcome {
            Ok(point) => curve.points.push(point),
            Err(error) => curve.failures.push(ScanFailure { lambda, error }),
        }
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceOptimum {
    pub distance: f64,
    pub alpha_limit: f64,
    pub regime: Regime,
    /// max/min of α_lim over a log grid spanning the search range.
    pub flatness: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const FLATNESS_POINTS: usize = 41;

/// Wire distance minimising α_lim at fixed λ, with the wire resized as d
/// changes (m ∝ d²). Golden-section search in ln d, converged to 0.1% in d,
/// then compared against both range ends.
pub fn optimize_distance(
    family: ModelFamily,
    lambda: f64,
    base: &Scenario,
    d_range: (f64, f64),
    settings: &QuadratureSettings,
) -> Result<DistanceOptimum> {
    let (lo, hi) = d_range;
    if !(lo > 0.0 && hi.is_finite() && lo < hi) {
        return Err(Error::Range {
            min: lo,
            max: hi,
            reason: "distance range needs 0 < min < max",
        });
    }
    let objective = |d: f64| -> Result<(f64, Regime)> {
        let placed = place_wire(base, d, MassCoupling::TracksDistance)?;
        let p = limit_point(family, lambda, &placed, PhaseMethod::ClosedForm, settings)?;
        Ok((p.alpha_limit, p.regime))
    };
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = objective(c.exp())?.0;
    let mut fd = objective(d.exp())?.0;
    while b - a > 1e-3 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = objective(c.exp())?.0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = objective(d.exp())?.0;
        }
    }
    let interior = (0.5 * (a + b)).exp();
    let mut best = (interior, objective(interior)?);
    for edge in [lo, hi] {
        let value = objective(edge)?;
        if value.0 < best.1 .0 {
            best = (edge, value);
        }
    }
    let grid: Vec<f64> = log_space(lo, hi, FLATNESS_POINTS)
        .into_iter()
        .map(|d| objective(d).map(|v| v.0))
        .collect::<Result<_>>()?;
    let max = grid.iter().cloned().fold(f64::MIN, f64::max);
    let min = grid.iter().cloned().fold(f64::MAX, f64::min);
    Ok(DistanceOptimum {
        distance: best.0,
        alpha_limit: best.1 .0,
        regime: best.1 .1,
        flatness: max / min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const K0_AT_1: f64 = 0.421_024_438_240_708_23;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn yukawa_reference_limit() {
        let s = Scenario::reference();
        let a = alpha_limit(&s, PhaseMethod::ClosedForm, &q()).unwrap();
        assert_relative_eq!(
            a,
            1e-3 / (s.prefactor() * 2.0 * K0_AT_1),
            max_relative = 1e-12
        );
        assert_relative_eq!(a, 469.1, max_relative = 1e-3);
    }

    #[test]
    fn limit_is_linear_in_threshold_and_ignores_strength() {
        let s = Scenario::reference();
        let a = alpha_limit(&s, PhaseMethod::ClosedForm, &q()).unwrap();
        let doubled = s.with_detection_limit(2e-3).unwrap();
        assert_relative_eq!(
            alpha_limit(&doubled, PhaseMethod::ClosedForm, &q()).unwrap(),
            2.0 * a,
            max_relative = 1e-15
        );
        let strong = s.with_model(PotentialModel::yukawa(7.0, 1e-4).unwrap());
        assert_eq!(
            alpha_limit(&strong, PhaseMethod::ClosedForm, &q()).unwrap(),
            a
        );
    }

    #[test]
    fn extradim_n2_limit_at_range() {
        let s = Scenario::reference().with_model(PotentialModel::extra_dim(2, 1.0, 1e-4).unwrap());
        let a = alpha_limit(&s, PhaseMethod::ClosedForm, &q()).unwrap();
        assert_relative_eq!(
            a,
            1e-3 * 2f64.sqrt() / (2.0 * s.prefactor()),
            max_relative = 1e-14
        );
    }

    #[test]
    fn degenerate_and_unsupported() {
        let far = Scenario::reference().with_model(PotentialModel::yukawa(1.0, 1e-7).unwrap());
        assert!(matches!(
            alpha_limit(&far, PhaseMethod::ClosedForm, &q()),
            Err(Error::DegenerateSignal { .. })
        ));
        let newton = Scenario::reference().with_model(PotentialModel::Newtonian);
        assert!(alpha_limit(&newton, PhaseMethod::ClosedForm, &q()).is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = LambdaGrid::default().values();
        assert_eq!(g.len(), 61);
        assert_eq!(g[0], 1e-5);
        assert_eq!(g[60], 1e-3);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_relative_eq!(g[30], 1e-4, max_relative = 1e-14);
        assert!(LambdaGrid::new(1e-3, 1e-5, 10).is_err());
        assert!(LambdaGrid::new(1e-5, 1e-3, 1).is_err());
    }

    #[test]
    fn degenerate_grid_repeats_point() {
        let spec = ScanSpec {
            grid: LambdaGrid::new(1e-4, 1e-4, 2).unwrap(),
            family: ModelFamily::Yukawa,
            distance: 1e-5,
            mass_coupling: MassCoupling::TracksDistance,
            method: PhaseMethod::ClosedForm,
        };
        let c = scan(&spec, &Scenario::reference(), &q()).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.points[0], c.points[1]);
    }

    #[test]
    fn scan_failures_are_recorded() {
        let spec = ScanSpec {
            grid: LambdaGrid::new(1e-8, 1e-4, 5).unwrap(),
            family: ModelFamily::Yukawa,
            distance: 1e-4,
            mass_coupling: MassCoupling::FixedMass,
            method: PhaseMethod::ClosedForm,
        };
        let c = scan(&spec, &Scenario::reference(), &q()).unwrap();
        assert_eq!(c.points.len() + c.failures.len(), 5);
        assert!(!c.failures.is_empty());
        assert_eq!(c.failures[0].lambda, 1e-8);
    }

    #[test]
    fn extradim_scan_extrapolates_inside_wire_distance() {
        let spec = ScanSpec {
            grid: LambdaGrid::default(),
            family: ModelFamily::ExtraDim(2),
            distance: 1e-4,
            mass_coupling: MassCoupling::TracksDistance,
            method: PhaseMethod::ClosedForm,
        };
        let c = scan(&spec, &Scenario::reference(), &q()).unwrap();
        for p in &c.points {
            let expected = if p.lambda < 1e-4 {
                Regime::YukawaExtrapolated
            } else {
                Regime::Native
            };
            assert_eq!(p.regime, expected, "lambda = {}", p.lambda);
        }
    }

    #[test]
    fn optimizer_rejects_bad_ranges() {
        let s = Scenario::reference();
        assert!(optimize_distance(ModelFamily::Yukawa, 1e-4, &s, (1e-3, 1e-6), &q()).is_err());
        assert!(optimize_distance(ModelFamily::Yukawa, 1e-4, &s, (1e-4, 1e-4), &q()).is_err());
        assert!(optimize_distance(ModelFamily::Yukawa, 1e-4, &s, (0.0, 1e-4), &q()).is_err());
    }

    #[test]
    fn optimizer_n3_goes_to_lower_bound() {
        let s = Scenario::reference();
        let o = optimize_distance(ModelFamily::ExtraDim(3), 1e-4, &s, (1e-6, 1e-3), &q()).unwrap();
        assert_eq!(o.distance, 1e-6);
    }

    #[test]
    fn optimizer_n1_goes_to_upper_bound_inside_range() {
        let s = Scenario::reference();
        let o = optimize_distance(ModelFamily::ExtraDim(1), 1e-4, &s, (1e-6, 1e-4), &q()).unwrap();
        assert_eq!(o.distance, 1e-4);
    }
}
