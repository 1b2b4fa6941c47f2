//! C ABI over `wirephase`.
//!
//! Scenarios and exclusion curves are opaque heap handles, created and freed
//! through this API only. Every fallible call returns a [`WpStatus`]; on
//! anything but `WP_STATUS_OK` the message is available from
//! [`wp_last_error_message`] on the same thread. Output pointers are written
//! only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wirephase::interferometer::phase_difference;
use wirephase::limits::{optimize_distance, scan, LambdaGrid, MassCoupling, Regime};
use wirephase::specfun::{bessel_k0, hyp2f1_half};
use wirephase::{
    BeamParams, Error, ExclusionCurve, InterferometerGeometry, ModelFamily, PhaseMethod,
    PhysicalConstants, PotentialModel, QuadratureSettings, ScanSpec, Scenario, WireParams,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    NonConvergence = 4,
    DegenerateSignal = 5,
    Range = 6,
    UnsupportedModel = 7,
    IndexOutOfBounds = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpMethod {
    ClosedForm = 0,
    Numerical = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpMassCoupling {
    FixedMass = 0,
    TracksDistance = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpRegime {
    Native = 0,
    YukawaExtrapolated = 1,
}

/// Phase difference and the two arm phases, in radians.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WpPhase {
    pub delta_phi: f64,
    pub phi_lower: f64,
    pub phi_upper: f64,
    /// Number of warnings raised; the texts are not exposed.
    pub warning_count: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WpDistanceOptimum {
    pub distance: f64,
    pub alpha_limit: f64,
    pub flatness: f64,
    pub regime: u32,
}

/// Opaque scenario handle.
pub struct WpScenario {
    inner: Scenario,
    settings: QuadratureSettings,
}

/// Opaque exclusion-curve handle.
pub struct WpCurve {
    inner: ExclusionCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WpStatus {
    match e {
        Error::InvalidParameter { .. } => WpStatus::InvalidParameter,
        Error::Domain { .. } => WpStatus::Domain,
        Error::NonConvergence { .. } => WpStatus::NonConvergence,
        Error::DegenerateSignal { .. } => WpStatus::DegenerateSignal,
        Error::Range { .. } => WpStatus::Range,
        Error::UnsupportedModel(_) => WpStatus::UnsupportedModel,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (WpStatus, String)>) -> WpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WpStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_owned());
            WpStatus::Panic
        }
    }
}

fn lift(e: Error) -> (WpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (WpStatus, String) {
    (
        WpStatus::NullPointer,
        format!("null pointer passed for `{what}`"),
    )
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (WpStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, what: &str, value: T) -> Result<(), (WpStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn method(m: WpMethod) -> PhaseMethod {
    match m {
        WpMethod::ClosedForm => PhaseMethod::ClosedForm,
        WpMethod::Numerical => PhaseMethod::Numerical,
    }
}

fn regime(r: Regime) -> WpRegime {
    match r {
        Regime::Native => WpRegime::Native,
        Regime::YukawaExtrapolated => WpRegime::YukawaExtrapolated,
    }
}

/// `n = 0` selects Yukawa, `n >= 1` the extra-dimension family with n dimensions.
fn family(n: u32) -> ModelFamily {
    match n {
        0 => ModelFamily::Yukawa,
        n => ModelFamily::ExtraDim(n),
    }
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// excluding the terminator, or 0 if there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn wp_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Reference scenario: slow cesium beam, 1 m tungsten-density wire of
/// 100 µm side at d = 100 µm, e = 1 mm, Yukawa α = 1, λ = 100 µm,
/// threshold 1 mrad.
#[no_mangle]
pub extern "C" fn wp_scenario_reference() -> *mut WpScenario {
    Box::into_raw(Box::new(WpScenario {
        inner: Scenario::reference(),
        settings: QuadratureSettings::default(),
    }))
}

/// Builds a Newtonian scenario from SI parameters; pick the model with the
/// `wp_scenario_set_*` calls.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_new(
    atom_mass: f64,
    speed: f64,
    wire_length: f64,
    wire_density: f64,
    wire_side: f64,
    distance: f64,
    grating_spacing: f64,
    beam_separation: f64,
    detection_limit: f64,
    out: *mut *mut WpScenario,
) -> WpStatus {
    guard(|| {
        let scenario = Scenario::new(
            PhysicalConstants::CODATA_2018,
            BeamParams::new(atom_mass, speed).map_err(lift)?,
            WireParams::new(wire_length, wire_density, wire_side, distance).map_err(lift)?,
            InterferometerGeometry::new(grating_spacing, beam_separation).map_err(lift)?,
            PotentialModel::Newtonian,
            detection_limit,
        )
        .map_err(lift)?;
        let handle = Box::into_raw(Box::new(WpScenario {
            inner: scenario,
            settings: QuadratureSettings::default(),
        }));
        write(out, "out", handle).inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `scenario` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_free(scenario: *mut WpScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

unsafe fn with_scenario(
    scenario: *mut WpScenario,
    f: impl FnOnce(&mut WpScenario) -> Result<(), (WpStatus, String)>,
) -> WpStatus {
    guard(|| f(scenario.as_mut().ok_or_else(|| null("scenario"))?))
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_set_newtonian(scenario: *mut WpScenario) -> WpStatus {
    with_scenario(scenario, |s| {
        s.inner = s.inner.with_model(PotentialModel::Newtonian);
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_set_yukawa(
    scenario: *mut WpScenario,
    alpha: f64,
    lambda: f64,
) -> WpStatus {
    with_scenario(scenario, |s| {
        s.inner = s
            .inner
            .with_model(PotentialModel::yukawa(alpha, lambda).map_err(lift)?);
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_set_extradim(
    scenario: *mut WpScenario,
    n: u32,
    alpha: f64,
    lambda: f64,
) -> WpStatus {
    with_scenario(scenario, |s| {
        s.inner = s
            .inner
            .with_model(PotentialModel::extra_dim(n, alpha, lambda).map_err(lift)?);
        Ok(())
    })
}

/// Moves the wire to `distance`, keeping its mass.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_set_distance(
    scenario: *mut WpScenario,
    distance: f64,
) -> WpStatus {
    with_scenario(scenario, |s| {
        s.inner = s
            .inner
            .with_wire(s.inner.wire().with_distance(distance).map_err(lift)?);
        Ok(())
    })
}

/// Quadrature tolerance and subdivision budget used by numerical methods.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_set_quadrature(
    scenario: *mut WpScenario,
    relative_tolerance: f64,
    max_subdivisions: usize,
) -> WpStatus {
    with_scenario(scenario, |s| {
        s.settings = QuadratureSettings::new(relative_tolerance, max_subdivisions).map_err(lift)?;
        Ok(())
    })
}

/// `G M m / (ħ v)` in radians.
///
/// # Safety
/// `scenario` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_scenario_prefactor(
    scenario: *const WpScenario,
    out: *mut f64,
) -> WpStatus {
    guard(|| {
        let s = deref(scenario, "scenario")?;
        write(out, "out", s.inner.prefactor())
    })
}

/// # Safety
/// `scenario` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_phase_difference(
    scenario: *const WpScenario,
    phase_method: WpMethod,
    out: *mut WpPhase,
) -> WpStatus {
    guard(|| {
        let s = deref(scenario, "scenario")?;
        let r = phase_difference(&s.inner, method(phase_method), &s.settings).map_err(lift)?;
        write(
            out,
            "out",
            WpPhase {
                delta_phi: r.delta_phi,
                phi_lower: r.phi_lower,
                phi_upper: r.phi_upper,
                warning_count: r.warnings.len() as u32,
            },
        )
    })
}

/// Smallest excluded strength for the scenario's model and range.
///
/// # Safety
/// `scenario` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_alpha_limit(
    scenario: *const WpScenario,
    phase_method: WpMethod,
    out: *mut f64,
) -> WpStatus {
    guard(|| {
        let s = deref(scenario, "scenario")?;
        let a = wirephase::limits::alpha_limit(&s.inner, method(phase_method), &s.settings)
            .map_err(lift)?;
        write(out, "out", a)
    })
}

/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_bessel_k0(x: f64, out: *mut f64) -> WpStatus {
    guard(|| write(out, "out", bessel_k0(x).map_err(lift)?))
}

/// `2F1(1/2, (n+1)/2; 3/2; -z^2)`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_hyp2f1_half(n: u32, z: f64, out: *mut f64) -> WpStatus {
    guard(|| write(out, "out", hyp2f1_half(n, z).map_err(lift)?))
}

/// Exclusion curve over `points` log-spaced ranges. `n = 0` scans Yukawa,
/// `n >= 1` the extra-dimension family. The curve is returned in `out` and
/// must be released with [`wp_curve_free`].
///
/// # Safety
/// `scenario` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_scan(
    scenario: *const WpScenario,
    n: u32,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    distance: f64,
    mass_coupling: WpMassCoupling,
    phase_method: WpMethod,
    out: *mut *mut WpCurve,
) -> WpStatus {
    guard(|| {
        let s = deref(scenario, "scenario")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ScanSpec {
            grid: LambdaGrid::new(lambda_min, lambda_max, points).map_err(lift)?,
            family: family(n),
            distance,
            mass_coupling: match mass_coupling {
                WpMassCoupling::FixedMass => MassCoupling::FixedMass,
                WpMassCoupling::TracksDistance => MassCoupling::TracksDistance,
            },
            method: method(phase_method),
        };
        let curve = scan(&spec, &s.inner, &s.settings).map_err(lift)?;
        write(
            out,
            "out",
            Box::into_raw(Box::new(WpCurve { inner: curve })),
        )
    })
}

/// Number of evaluated points (failed grid points are not counted).
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_curve_len(curve: *const WpCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.inner.points.len())
}

/// Number of grid points that could not be evaluated.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_curve_failures(curve: *const WpCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.inner.failures.len())
}

/// # Safety
/// `curve` must be a live handle; the out pointers valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_curve_point(
    curve: *const WpCurve,
    index: usize,
    lambda: *mut f64,
    alpha_limit: *mut f64,
    point_regime: *mut WpRegime,
) -> WpStatus {
    guard(|| {
        let c = deref(curve, "curve")?;
        let p = c.inner.points.get(index).ok_or_else(|| {
            (
                WpStatus::IndexOutOfBounds,
                format!(
                    "index {index} out of bounds for curve of {} points",
                    c.inner.points.len()
                ),
            )
        })?;
        if lambda.is_null() || alpha_limit.is_null() || point_regime.is_null() {
            return Err(null("lambda/alpha_limit/regime"));
        }
        write(lambda, "lambda", p.lambda)?;
        write(alpha_limit, "alpha_limit", p.alpha_limit)?;
        write(point_regime, "regime", regime(p.regime))
    })
}

/// # Safety
/// `curve` must be null or a handle from [`wp_scan`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wp_curve_free(curve: *mut WpCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Wire distance in `[d_min, d_max]` minimising the limit at `lambda`, with
/// the wire side tracking the distance. `n` selects the family as in
/// [`wp_scan`]; `regime` in the result holds a [`WpRegime`] value.
///
/// # Safety
/// `scenario` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wp_optimize_distance(
    scenario: *const WpScenario,
    n: u32,
    lambda: f64,
    d_min: f64,
    d_max: f64,
    out: *mut WpDistanceOptimum,
) -> WpStatus {
    guard(|| {
        let s = deref(scenario, "scenario")?;
        let best = optimize_distance(family(n), lambda, &s.inner, (d_min, d_max), &s.settings)
            .map_err(lift)?;
        write(
            out,
            "out",
            WpDistanceOptimum {
                distance: best.distance,
                alpha_limit: best.alpha_limit,
                flatness: best.flatness,
                regime: regime(best.regime) as u32,
            },
        )
    })
}
