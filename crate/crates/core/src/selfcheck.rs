//! Oracle sweeps: every closed-form or series evaluation against its
//! quadrature counterpart, plus the asymptotic-regime ratio checks.

use rayon::prelude::*;

use crate::error::Result;
use crate::interferometer::{newtonian_exact_phase, phase_difference_numerical};
use crate::limits::log_space;
use crate::model::{ExtraDim, PotentialModel, Scenario, WireParams, Yukawa};
use crate::potentials::{
    extradim_wire_potential, extradim_wire_potential_oracle, yukawa_wire_potential,
    yukawa_wire_potential_finite, Coupling, FieldPoint,
};
use crate::quadrature::QuadratureSettings;
use crate::specfun::{
    bessel_k0, bessel_k0_oracle, hyp2f1_half, hyp2f1_half_oracle, k0_large_x, k0_small_x,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub name: &'static str,
    /// Largest relative deviation seen across the sweep.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn sweep<T: Sync>(
    name: &'static str,
    tolerance: f64,
    inputs: &[T],
    pair: impl Fn(&T) -> Result<(f64, f64)> + Sync,
) -> Result<SweepReport> {
    let deviations: Vec<f64> = inputs
        .par_iter()
        .map(|x| pair(x).map(|(a, b)| relative(a, b)))
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        name,
        max_deviation: deviations.iter().cloned().fold(0.0, f64::max),
        tolerance,
        samples: inputs.len(),
    })
}

/// 100 log-spaced x ∈ [1e-3, 100].
pub fn k0_sweep(settings: &QuadratureSettings, tolerance: f64) -> Result<SweepReport> {
    let xs = log_space(1e-3, 100.0, 100);
    sweep("k0_vs_quadrature", tolerance, &xs, |&x| {
        Ok((bessel_k0(x)?, bessel_k0_oracle(x, settings)?))
    })
}

/// 50 log-spaced z ∈ [1e-3, 1e3] for each n.
pub fn hyp_sweep(
    name: &'static str,
    ns: &[u32],
    settings: &QuadratureSettings,
    tolerance: f64,
) -> Result<SweepReport> {
    let inputs: Vec<(u32, f64)> = ns
        .iter()
        .flat_map(|&n| log_space(1e-3, 1e3, 50).into_iter().map(move |z| (n, z)))
        .collect();
    sweep(name, tolerance, &inputs, |&(n, z)| {
        Ok((hyp2f1_half(n, z)?, hyp2f1_half_oracle(n, z, settings)?))
    })
}

fn potential_grid() -> Vec<(f64, f64)> {
    let ratios = log_space(1e-2, 30.0, 20);
    let ranges = log_space(1e-6, 1e-2, 20);
    ranges
        .iter()
        .flat_map(|&l| ratios.iter().map(move |&r| (r, l)))
        .collect()
}

/// Infinite-wire K0 form against the finite-wire quadrature at mid-wire,
/// wire length 10⁶ λ, over a 20×20 grid of (s/λ, λ).
pub fn yukawa_potential_sweep(
    settings: &QuadratureSettings,
    tolerance: f64,
) -> Result<SweepReport> {
    let coupling = Coupling(1.0);
    sweep(
        "yukawa_wire_vs_quadrature",
        tolerance,
        &potential_grid(),
        |&(ratio, lambda)| {
            let model = Yukawa {
                strength: 1.0,
                range: lambda,
            };
            let s = ratio * lambda;
            let wire = WireParams::new(1e6 * lambda, 1.0, 1.0, s)?;
            let mid = FieldPoint {
                x: 0.0,
                z: -0.5 * wire.length(),
            };
            Ok((
                yukawa_wire_potential(s, &model, coupling)?,
                yukawa_wire_potential_finite(mid, &model, &wire, coupling, settings)?,
            ))
        },
    )
}

/// `2F1` form of the cut-off extra-dimension potential against direct
/// quadrature, n ∈ {1, 2, 3}, 20×20 grid of (s/λ, λ) with s/λ ∈ [1e-4, 1].
pub fn extradim_potential_sweep(
    settings: &QuadratureSettings,
    tolerance: f64,
) -> Result<SweepReport> {
    let coupling = Coupling(1.0);
    let ratios = log_space(1e-4, 1.0, 20);
    let ranges = log_space(1e-6, 1e-2, 20);
    let inputs: Vec<(u32, f64, f64)> = (1..=3)
        .flat_map(|n| {
            let ratios = ratios.clone();
            ranges
                .clone()
                .into_iter()
                .flat_map(move |l| ratios.clone().into_iter().map(move |r| (n, r, l)))
        })
        .collect();
    sweep(
        "extradim_wire_vs_quadrature",
        tolerance,
        &inputs,
        |&(n, ratio, lambda)| {
            let model = ExtraDim {
                dimensions: n,
                strength: 1.0,
                range: lambda,
            };
            let s = ratio * lambda;
            Ok((
                extradim_wire_potential(s, &model, coupling)?.value,
                extradim_wire_potential_oracle(s, &model, coupling, settings)?,
            ))
        },
    )
}

/// Numerical Newtonian phase against the analytic straight-path average,
/// e/d ∈ [1, 10⁴].
pub fn newtonian_path_sweep(settings: &QuadratureSettings, tolerance: f64) -> Result<SweepReport> {
    let ds = log_space(1e-7, 1e-3, 9);
    sweep("newtonian_path_vs_analytic", tolerance, &ds, |&d| {
        let s = Scenario::reference()
            .with_model(PotentialModel::Newtonian)
            .with_wire(WireParams::reference().with_distance(d)?);
        Ok((
            phase_difference_numerical(&s, settings)?.delta_phi,
            newtonian_exact_phase(&s),
        ))
    })
}

/// K0 against its leading large-x law at x = 50 (1%) and small-x law at
/// x = 1e-3 (0.1%).
pub fn asymptotic_checks() -> Result<Vec<SweepReport>> {
    Ok(vec![
        SweepReport {
            name: "k0_large_x_ratio@50",
            max_deviation: relative(bessel_k0(50.0)?, k0_large_x(50.0)),
            tolerance: 1e-2,
            samples: 1,
        },
        SweepReport {
            name: "k0_small_x_ratio@1e-3",
            max_deviation: relative(bessel_k0(1e-3)?, k0_small_x(1e-3)),
            tolerance: 1e-3,
            samples: 1,
        },
    ])
}

/// Runs every sweep. `override_tolerance` replaces the oracle-sweep
/// tolerances (the asymptotic checks keep theirs).
pub fn run_all(
    settings: &QuadratureSettings,
    override_tolerance: Option<f64>,
) -> Result<Vec<SweepReport>> {
    let tol = |stated: f64| override_tolerance.unwrap_or(stated);
    let mut reports = vec![
        k0_sweep(settings, tol(1e-8))?,
        hyp_sweep(
            "hyp2f1_closed_forms_vs_quadrature",
            &[1, 2, 3],
            settings,
            tol(1e-9),
        )?,
        hyp_sweep(
            "hyp2f1_series_vs_quadrature",
            &[4, 5, 6],
            settings,
            tol(1e-8),
        )?,
        yukawa_potential_sweep(settings, tol(1e-8))?,
        extradim_potential_sweep(settings, tol(1e-8))?,
        newtonian_path_sweep(settings, tol(1e-6))?,
    ];
    reports.extend(asymptotic_checks()?);
    Ok(reports)
}
