//! Modified Bessel function `K0` and the hypergeometric family
//! `2F1(1/2, (n+1)/2; 3/2; -z^2)`, each with an independent quadrature oracle.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_pieces, QuadratureSettings};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

const SERIES_LIMIT: f64 = 2.0;
// ln(f64::MIN_POSITIVE); K0 below this is reported as exactly zero.
const LN_MIN_POSITIVE: f64 = -708.396_418_532_264_1;

fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: x,
            reason: "argument must be strictly positive",
        })
    }
}

/// K0(x) for x ≤ 2 from the ascending series
/// `-(ln(x/2) + γ) I0(x) + Σ (x²/4)^k / (k!)² H_k`.
fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let log_term = -((0.5 * x).ln() + EULER_GAMMA);
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-17 * tail {
            break;
        }
    }
    log_term * i0 + tail
}

/// e^x K0(x) for x > 2 by Steed's evaluation of the continued fraction for
/// K1/K0 together with the normalisation sum (Temme), order zero.
fn k0_scaled_cf(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 0.5 * f64::EPSILON {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() / s
}

/// e^x K0(x).
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    check_positive("bessel_k0_scaled", x)?;
    Ok(if x <= SERIES_LIMIT {
        x.exp() * k0_series(x)
    } else {
        k0_scaled_cf(x)
    })
}

/// True when K0(x) is below the smallest normal double and [`bessel_k0`]
/// returns exactly zero.
pub fn bessel_k0_underflows(x: f64) -> bool {
    x > SERIES_LIMIT && k0_scaled_cf(x).ln() - x < LN_MIN_POSITIVE
}

/// Modified Bessel function of the second kind, order zero:
/// `K0(x) = ∫₀^∞ exp(-x cosh w) dw`.
///
/// Returns exactly `0.0` once the value drops below the normal range.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check_positive("bessel_k0", x)?;
    if x <= SERIES_LIMIT {
        return Ok(k0_series(x));
    }
    let log_value = k0_scaled_cf(x).ln() - x;
    Ok(if log_value < LN_MIN_POSITIVE {
        0.0
    } else {
        log_value.exp()
    })
}

/// K0 by direct quadrature of `∫₀^w_max exp(-x cosh w) dw`.
///
/// The integrand is evaluated as `exp(-x (cosh w - 1))` and rescaled, and the
/// range is cut where the exponent passes the double-precision underflow
/// limit.
pub fn bessel_k0_oracle(x: f64, settings: &QuadratureSettings) -> Result<f64> {
    check_positive("bessel_k0_oracle", x)?;
    // x (cosh w - 1) = 2 x sinh²(w/2) reaches 745 here
    let w_max = 2.0 * (745.0 / (2.0 * x)).sqrt().asinh();
    let integrand = |w: f64| {
        let sh = (0.5 * w).sinh();
        (-2.0 * x * sh * sh).exp()
    };
    // the integrand is flat up to w ≈ ln(2/x), then falls off double-exponentially
    let knee = (2.0 / x).ln();
    let points: Vec<f64> = if knee > 0.0 && knee < w_max {
        vec![0.0, knee, w_max]
    } else {
        vec![0.0, w_max]
    };
    let scaled = integrate_pieces(integrand, &points, settings)?.value;
    let log_value = scaled.ln() - x;
    Ok(if log_value < LN_MIN_POSITIVE {
        0.0
    } else {
        log_value.exp()
    })
}

fn check_hyp_args(function: &'static str, n: u32, z: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain {
            function,
            value: n as f64,
            reason: "n must be at least 1",
        });
    }
    if z.is_nan() || z < 0.0 || z.is_infinite() {
        return Err(Error::Domain {
            function,
            value: z,
            reason: "z must be finite and non-negative",
        });
    }
    Ok(())
}

fn hyp_gauss_series(n: u32, z: f64) -> f64 {
    let b = 0.5 * (n as f64 + 1.0);
    let w = -z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..500 {
        let kf = k as f64;
        term *= (0.5 + kf) * (b + kf) / ((1.5 + kf) * (kf + 1.0)) * w;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `∫₀^z (1+v²)^{-(n+1)/2} dv` via the reduction
/// `I_{k+2} = z / ((k+1) (1+z²)^{(k+1)/2}) + k/(k+1) · I_k`, seeded by
/// `I_1 = atan z` and `I_2 = z / √(1+z²)`.
fn reduced_integral(n: u32, z: f64) -> f64 {
    let h = 1f64.hypot(z);
    let (mut k, mut acc) = if n % 2 == 1 {
        (1u32, z.atan())
    } else {
        (2u32, z / h)
    };
    while k < n {
        let kf = k as f64;
        acc = z / ((kf + 1.0) * h.powi(k as i32 + 1)) + kf / (kf + 1.0) * acc;
        k += 2;
    }
    acc
}

/// `2F1(1/2, (n+1)/2; 3/2; -z²) = (1/z) ∫₀^z (1+v²)^{-(n+1)/2} dv`.
///
/// Closed forms for n = 1, 2, 3; Gauss series for small z and an exact
/// reduction recurrence otherwise.
pub fn hyp2f1_half(n: u32, z: f64) -> Result<f64> {
    check_hyp_args("hyp2f1_half", n, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    Ok(match n {
        1 => z.atan() / z,
        2 => 1.0 / 1f64.hypot(z),
        3 => {
            // z/(1+z²) written to survive z² overflow
            let ratio = 1.0 / (z + 1.0 / z);
            (ratio + z.atan()) / (2.0 * z)
        }
        _ if z < 0.5 => hyp_gauss_series(n, z),
        _ => reduced_integral(n, z) / z,
    })
}

/// `hyp2f1_half` by quadrature of the defining integral.
pub fn hyp2f1_half_oracle(n: u32, z: f64, settings: &QuadratureSettings) -> Result<f64> {
    check_hyp_args("hyp2f1_half_oracle", n, z)?;
    if z == 0.0 {
        return Err(Error::Domain {
            function: "hyp2f1_half_oracle",
            value: z,
            reason: "z must be strictly positive",
        });
    }
    let p = -0.5 * (n as f64 + 1.0);
    let integrand = |v: f64| (1.0 + v * v).powf(p);
    // decade break points beyond v = 1 where the integrand turns into a power tail
    let mut points = vec![0.0];
    let mut edge = 1.0;
    while edge < z {
        points.push(edge);
        edge *= 10.0;
    }
    points.push(z);
    Ok(integrate_pieces(integrand, &points, settings)?.value / z)
}

/// Leading large-argument behaviour `√(π / 2x) e^{-x}`.
pub fn k0_large_x(x: f64) -> f64 {
    (FRAC_PI_2 / x).sqrt() * (-x).exp()
}

/// Leading small-argument behaviour `-ln(x/2) - γ`.
pub fn k0_small_x(x: f64) -> f64 {
    -(0.5 * x).ln() - EULER_GAMMA
}
