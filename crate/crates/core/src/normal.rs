//! Standard normal distribution: density, distribution function and quantile.
//!
//! The distribution function is evaluated through `erfc`, which keeps the
//! absolute error near machine precision on the whole real line and the
//! relative error small in the lower tail. The quantile has no closed form
//! here; it is found by a bracketed Halley iteration on the distribution
//! function itself, so every threshold in the crate inherits the accuracy of
//! [`std_cdf`] and nothing else.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);
    pub const HALF: Probability = Probability(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(domain(format!("probability must lie in [0, 1], got {value}")))
        }
    }

    /// Clamps rounding spill-over back into `[0, 1]`.
    pub(crate) fn saturating(value: f64) -> Self {
        Probability(value.clamp(0.0, 1.0))
    }

    pub const fn get(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A finite standard-normal deviate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZScore(f64);

impl ZScore {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(ZScore(value))
        } else {
            Err(invalid(format!("z-score must be finite, got {value}")))
        }
    }

    pub const fn get(self) -> f64 {
        self.0
    }
}

impl From<ZScore> for f64 {
    fn from(z: ZScore) -> f64 {
        z.0
    }
}

impl fmt::Display for ZScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Density `exp(-z^2 / 2) / sqrt(2 pi)`.
pub fn std_pdf(z: f64) -> Result<f64> {
    Ok(pdf(ZScore::new(z)?.get()))
}

/// Distribution function `P[Z <= z]`.
pub fn std_cdf(z: f64) -> Result<Probability> {
    Ok(Probability(cdf(ZScore::new(z)?.get())))
}

/// Inverse of [`std_cdf`] on the open interval `(0, 1)`.
pub fn std_quantile(p: f64) -> Result<ZScore> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("quantile needs 0 < p < 1, got {p}")));
    }
    Ok(ZScore(quantile(p)))
}

pub(crate) fn pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// `P[Z <= z]`; accepts infinities.
pub(crate) fn cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// `P[Z >= z]`, accurate in the upper tail; accepts infinities.
pub(crate) fn sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// `P[a <= Z <= b]` for `a <= b`, computed from whichever tail avoids
/// cancellation.
pub(crate) fn mass(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b, "mass({a}, {b})");
    let m = if a >= 0.0 {
        sf(a) - sf(b)
    } else if b <= 0.0 {
        cdf(b) - cdf(a)
    } else {
        1.0 - sf(b) - cdf(a)
    };
    m.max(0.0)
}

/// Quantile for `p` in `(0, 1)`; callers validate.
pub(crate) fn quantile(p: f64) -> f64 {
    // 1 - p is exact for p >= 1/2, so the upper half reduces to the lower
    // tail without losing digits.
    if p > 0.5 {
        -lower_quantile(1.0 - p)
    } else {
        lower_quantile(p)
    }
}

/// Solves `cdf(z) = q` for `0 < q <= 1/2`, so `z <= 0`.
fn lower_quantile(q: f64) -> f64 {
    if q == 0.5 {
        return 0.0;
    }
    let mut lo = -40.0_f64;
    let mut hi = 0.0_f64;
    // Crude tail start; the iteration below does all the work.
    let mut z = -(-2.0 * q.ln()).sqrt().max(0.5);
    for _ in 0..200 {
        let f = cdf(z) - q;
        if f == 0.0 {
            return z;
        }
        if f < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let d = pdf(z);
        // Halley step: f' = pdf, f'' = -z pdf.
        let newton = f / d;
        let step = newton / (1.0 + 0.5 * z * newton);
        let mut next = z - step;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0) || hi - lo <= f64::EPSILON {
            return next;
        }
        z = next;
    }
    z
}
