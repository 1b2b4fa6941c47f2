//! Globally adaptive 15-point Gauss-Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate falls below `relative_tolerance · |integral|` (or reaches the
//! round-off floor), or the subdivision budget is spent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    relative_tolerance: f64,
    max_subdivisions: usize,
}

impl QuadratureSettings {
    pub const MAX_TOLERANCE: f64 = 1e-3;
    pub const MIN_SUBDIVISIONS: usize = 10;

    pub fn new(relative_tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        if !(relative_tolerance > 0.0 && relative_tolerance <= Self::MAX_TOLERANCE) {
            return Err(Error::InvalidParameter {
                name: "relative_tolerance",
                value: relative_tolerance,
                reason: "must lie in (0, 1e-3]",
            });
        }
        if max_subdivisions < Self::MIN_SUBDIVISIONS {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: max_subdivisions as f64,
                reason: "must be at least 10",
            });
        }
        Ok(Self {
            relative_tolerance,
            max_subdivisions,
        })
    }

    pub fn relative_tolerance(&self) -> f64 {
        self.relative_tolerance
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            max_subdivisions: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

// Kronrod abscissae on [-1, 1] (positive half) and weights; every other node
// is a Gauss-Legendre node of the embedded 7-point rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_value = WGK[7] * fc.abs();
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += w * (f1 + f2);
        abs_value += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    Segment {
        a,
        b,
        value,
        error: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * half.abs(),
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    integrate_pieces(f, &[a, b], settings)
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the given
/// break points (kinks, peaks) as the initial partition.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap: BinaryHeap<Segment> = points
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| kronrod(&f, w[0], w[1]))
        .collect();
    let (mut value, mut error, mut abs_value) = heap.iter().fold((0.0, 0.0, 0.0), |acc, s| {
        (acc.0 + s.value, acc.1 + s.error, acc.2 + s.abs_value)
    });
    let mut subdivisions = 0;
    loop {
        let target =
            (settings.relative_tolerance * value.abs()).max(50.0 * f64::EPSILON * abs_value);
        if error <= target {
            return Ok(Estimate {
                value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::NonConvergence {
                subdivisions,
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("non-empty partition");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval no longer divisible in floating point
            return Err(Error::NonConvergence {
                subdivisions,
                estimate: value,
                error,
            });
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        error = (error + left.error + right.error - worst.error).max(0.0);
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomials_are_exact() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, &s).unwrap();
        // [x^6/6 - x^3 + x] from -1 to 2
        assert_relative_eq!(
            r.value,
            (64.0 / 6.0 - 8.0 + 2.0) - (1.0 / 6.0 + 1.0 - 1.0),
            max_relative = 1e-14
        );
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn peaked_integrand() {
        let s = QuadratureSettings::default();
        let w = 1e-4;
        let r = integrate(|x| w / (x * x + w * w), -1.0, 1.0, &s).unwrap();
        assert_relative_eq!(r.value, 2.0 * (1.0 / w).atan(), max_relative = 1e-10);
    }

    #[test]
    fn break_points_are_respected() {
        let s = QuadratureSettings::default();
        let r = integrate_pieces(|x: f64| x.abs(), &[-1.0, 0.0, 3.0], &s).unwrap();
        assert_relative_eq!(r.value, 0.5 + 4.5, max_relative = 1e-14);
    }

    #[test]
    fn zero_integrand_converges() {
        let r = integrate(|_| 0.0, 0.0, 1.0, &QuadratureSettings::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s = QuadratureSettings::new(1e-10, 10).unwrap();
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-9, 1.0, &s).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::new(0.0, 100).is_err());
        assert!(QuadratureSettings::new(1e-2, 100).is_err());
        assert!(QuadratureSettings::new(1e-8, 5).is_err());
        assert!(QuadratureSettings::new(1e-3, 10).is_ok());
    }
}
