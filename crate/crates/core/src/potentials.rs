//! Potential energy of the probe atom at transverse separation `s = d + x`
//! from the wire, for each force law.
//!
//! The infinite-wire closed forms are what the phase formulas use; the
//! quadrature versions integrate the point-particle law along the wire and
//! serve as their oracles.

use crate::error::{Error, Result};
use crate::model::{ExtraDim, Flagged, Warning, WireParams, Yukawa};
use crate::quadrature::{integrate_pieces, QuadratureSettings};
use crate::specfun::{bessel_k0, hyp2f1_half};

/// Energy scale `G M µ` (joules) shared by all wire potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling(pub f64);

impl Coupling {
    pub fn of(scenario: &crate::model::Scenario) -> Self {
        Self(scenario.coupling_energy())
    }
}

/// Position of the atom relative to the lower path: transverse offset `x`
/// and longitudinal position `z` (the wire spans z ∈ [−L, 0]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub x: f64,
    pub z: f64,
}

// exp(-745) is below the smallest subnormal double
const UNDERFLOW_EXPONENT: f64 = 745.0;

fn check_separation(function: &'static str, s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: s,
            reason: "atom-wire separation must be strictly positive",
        })
    }
}

/// Infinite-wire Yukawa potential `-2 α G M µ K0(s/λ)`.
pub fn yukawa_wire_potential(s: f64, model: &Yukawa, coupling: Coupling) -> Result<f64> {
    check_separation("yukawa_wire_potential", s)?;
    if model.strength == 0.0 {
        return Ok(0.0);
    }
    Ok(-2.0 * model.strength * coupling.0 * bessel_k0(s / model.range)?)
}

/// Yukawa potential of a wire of finite length, integrating
/// `-α G M µ exp(-r/λ)/r` over the wire, `r = √((d+x)² + u²)`,
/// `u ∈ [−L−z, −z]`.
///
/// `z` is not restricted to the wire's extent, so points past its ends can
/// be probed.
pub fn yukawa_wire_potential_finite(
    point: FieldPoint,
    model: &Yukawa,
    wire: &WireParams,
    coupling: Coupling,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let s = wire.distance() + point.x;
    check_separation("yukawa_wire_potential_finite", s)?;
    if model.strength == 0.0 {
        return Ok(0.0);
    }
    let lambda = model.range;
    // beyond |u| = 745 λ the integrand is exactly zero
    let cut = UNDERFLOW_EXPONENT * lambda;
    let lo = (-wire.length() - point.z).max(-cut);
    let hi = (-point.z).min(cut);
    if lo >= hi {
        return Ok(0.0);
    }
    let integrand = |u: f64| {
        let r = s.hypot(u);
        (-r / lambda).exp() / r
    };
    let mut points = vec![lo];
    if lo < 0.0 && hi > 0.0 {
        points.push(0.0);
    }
    points.push(hi);
    let integral = integrate_pieces(integrand, &points, settings)?.value;
    Ok(-model.strength * coupling.0 * integral)
}

/// Extra-dimension potential of an infinite wire with the interaction cut
/// sharply at ±λ along the wire:
/// `-2 α G M µ (λ/s)^{n+1} 2F1(1/2, (n+1)/2; 3/2; -(λ/s)²)`.
///
/// Flags [`Warning::SeparationBeyondRange`] when `s > λ`.
pub fn extradim_wire_potential(
    s: f64,
    model: &ExtraDim,
    coupling: Coupling,
) -> Result<Flagged<f64>> {
    check_separation("extradim_wire_potential", s)?;
    let flag = Warning::SeparationBeyondRange {
        separation: s,
        range: model.range,
    };
    let beyond = s > model.range;
    if model.strength == 0.0 {
        return Ok(Flagged::clean(0.0).warn_if(beyond, flag));
    }
    let ratio = model.range / s;
    let shape = ratio.powi(model.dimensions as i32 + 1) * hyp2f1_half(model.dimensions, ratio)?;
    Ok(Flagged::clean(-2.0 * model.strength * coupling.0 * shape).warn_if(beyond, flag))
}

/// `∫_{−λ}^{+λ} (λ/r)^n / r du` in units of λ: `∫_{−1}^{1} (σ² + v²)^{-(n+1)/2} dv`
/// with `σ = s/λ`.
fn extradim_integrand(n: u32, sigma: f64) -> impl Fn(f64) -> f64 {
    let p = -0.5 * (n as f64 + 1.0);
    let s2 = sigma * sigma;
    move |v: f64| (s2 + v * v).powf(p)
}

/// Direct quadrature of the cut-off extra-dimension wire integral.
pub fn extradim_wire_potential_oracle(
    s: f64,
    model: &ExtraDim,
    coupling: Coupling,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_separation("extradim_wire_potential_oracle", s)?;
    if model.strength == 0.0 {
        return Ok(0.0);
    }
    let sigma = s / model.range;
    let integral = integrate_pieces(
        extradim_integrand(model.dimensions, sigma),
        &[-1.0, 0.0, 1.0],
        settings,
    )?
    .value;
    // (λ/r)^n / r du = λ^{-1} (σ²+v²)^{-(n+1)/2} λ dv, so the λ factors cancel
    Ok(-model.strength * coupling.0 * integral)
}

/// Newtonian potential of an infinite wire, `2 G M µ ln(1 + x/d)`, gauged to
/// vanish on the lower path.
pub fn newtonian_wire_potential(x: f64, d: f64, coupling: Coupling) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain {
            function: "newtonian_wire_potential",
            value: d,
            reason: "wire distance must be strictly positive",
        });
    }
    check_separation("newtonian_wire_potential", d + x)?;
    Ok(2.0 * coupling.0 * (x / d).ln_1p())
}
