//! One-sided z-test for the mean of unit-variance Gaussian measurements.
//!
//! Under the null the sample mean of `n` measurements is `N(0, 1/n)`; the
//! test rejects when `xbar >= q / sqrt(n)` with `q` the `1 - alpha` quantile.
//! A sample mean exactly on the threshold counts as positive, which is the
//! same as rejecting when `p <= alpha`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::normal::{self, Probability};

/// Sufficient statistic of an experiment: the measurement count and the
/// empirical mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    n: u64,
    xbar: f64,
}

impl SampleSummary {
    pub fn new(n: u64, xbar: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("sample count n must be at least 1"));
        }
        if !xbar.is_finite() {
            return Err(invalid(format!("sample mean must be finite, got {xbar}")));
        }
        Ok(SampleSummary { n, xbar })
    }

    pub fn from_measurements(xs: &[f64]) -> Result<Self> {
        let sum: f64 = xs.iter().sum();
        SampleSummary::new(xs.len() as u64, sum / xs.len() as f64)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn xbar(&self) -> f64 {
        self.xbar
    }

    /// `sqrt(n) * xbar`, standard normal under the null.
    pub fn z(&self) -> f64 {
        (self.n as f64).sqrt() * self.xbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestOutcome {
    Positive,
    Negative,
}

impl TestOutcome {
    pub fn is_positive(self) -> bool {
        self == TestOutcome::Positive
    }
}

impl fmt::Display for TestOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestOutcome::Positive => "positive",
            TestOutcome::Negative => "negative",
        })
    }
}

/// A one-sided test at significance level `alpha` on `n` measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianZTest {
    alpha: Probability,
    n: u64,
}

impl GaussianZTest {
    pub fn new(alpha: f64, n: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!("significance level must lie in (0, 1), got {alpha}")));
        }
        if n == 0 {
            return Err(invalid("sample count n must be at least 1"));
        }
        Ok(GaussianZTest { alpha: Probability::new(alpha)?, n })
    }

    pub fn alpha(&self) -> Probability {
        self.alpha
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Critical value on the standard-normal scale, `Phi^-1(1 - alpha)`.
    pub fn critical_z(&self) -> f64 {
        normal::quantile(1.0 - self.alpha.get())
    }

    /// Smallest sample mean that rejects the null.
    pub fn rejection_threshold(&self) -> f64 {
        self.critical_z() / (self.n as f64).sqrt()
    }

    pub fn decide(&self, s: &SampleSummary) -> Result<TestOutcome> {
        if s.n != self.n {
            return Err(invalid(format!("sample has n = {} but the test was designed for n = {}", s.n, self.n)));
        }
        Ok(self.decide_xbar(s.xbar))
    }

    /// Decision on a raw sample mean; the caller guarantees it came from
    /// `self.n()` measurements.
    pub(crate) fn decide_xbar(&self, xbar: f64) -> TestOutcome {
        if xbar >= self.rejection_threshold() {
            TestOutcome::Positive
        } else {
            TestOutcome::Negative
        }
    }
}

/// Upper-tail p-value `1 - Phi(sqrt(n) xbar)`.
pub fn p_value(s: &SampleSummary) -> Probability {
    Probability::saturating(normal::sf(s.z()))
}

/// Two-sided interval `xbar -/+ q / sqrt(n)` with `q = Phi^-1((1 + level) / 2)`,
/// for measurements whose standard deviation is at most 1.
pub fn confidence_interval(s: &SampleSummary, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain(format!("confidence level must lie in (0, 1), got {level}")));
    }
    let half = normal::quantile(0.5 * (1.0 + level)) / (s.n as f64).sqrt();
    Ok((s.xbar - half, s.xbar + half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thresholds() {
        let t = GaussianZTest::new(0.05, 100).unwrap();
        assert!((t.rejection_threshold() - 0.164_485_4).abs() < 1e-6);
        let t1 = GaussianZTest::new(0.05, 1).unwrap();
        assert!((t1.rejection_threshold() - 1.644_854).abs() < 1e-6);
        assert!((t1.rejection_threshold() - 1.65).abs() < 0.01);
        assert_eq!(GaussianZTest::new(0.5, 1).unwrap().rejection_threshold(), 0.0);
    }

    #[test]
    fn threshold_monotone() {
        let a = GaussianZTest::new(0.05, 10).unwrap().rejection_threshold();
        let b = GaussianZTest::new(0.05, 20).unwrap().rejection_threshold();
        let c = GaussianZTest::new(0.10, 10).unwrap().rejection_threshold();
        assert!(b < a && c < a);
    }

    #[test]
    fn invalid_designs() {
        assert!(GaussianZTest::new(0.0, 10).is_err());
        assert!(GaussianZTest::new(1.0, 10).is_err());
        assert!(GaussianZTest::new(0.05, 0).is_err());
        assert!(SampleSummary::new(0, 0.0).is_err());
        assert!(SampleSummary::new(3, f64::NAN).is_err());
    }

    #[test]
    fn decisions() {
        let t = GaussianZTest::new(0.05, 100).unwrap();
        let pos = SampleSummary::new(100, 0.2).unwrap();
        assert_eq!(t.decide(&pos).unwrap(), TestOutcome::Positive);
        let neg = SampleSummary::new(100, 0.0).unwrap();
        assert_eq!(t.decide(&neg).unwrap(), TestOutcome::Negative);
        let edge = SampleSummary::new(100, t.rejection_threshold()).unwrap();
        assert_eq!(t.decide(&edge).unwrap(), TestOutcome::Positive);
        let wrong_n = SampleSummary::new(99, 0.2).unwrap();
        assert!(matches!(t.decide(&wrong_n), Err(crate::Error::InvalidArgument(_))));
    }

    #[test]
    fn p_values() {
        assert_eq!(p_value(&SampleSummary::new(7, 0.0).unwrap()).get(), 0.5);
        let s = SampleSummary::new(25, 1.644_854 / 5.0).unwrap();
        assert!((p_value(&s).get() - 0.05).abs() < 1e-6);
        let s = SampleSummary::new(100, 2.348_53 / 10.0).unwrap();
        assert!((p_value(&s).get() - 0.0094).abs() < 2e-4);
    }

    #[test]
    fn intervals() {
        let (lo, hi) = confidence_interval(&SampleSummary::new(100, 0.0).unwrap(), 0.95).unwrap();
        assert!((lo + 0.196).abs() < 1e-4 && (hi - 0.196).abs() < 1e-4);
        let (lo, hi) = confidence_interval(&SampleSummary::new(100, 0.3).unwrap(), 0.95).unwrap();
        assert!((lo - 0.104).abs() < 1e-4 && (hi - 0.496).abs() < 1e-4);
        let (lo, hi) = confidence_interval(&SampleSummary::new(1, 0.0).unwrap(), 0.5).unwrap();
        assert!((lo + 0.6745).abs() < 1e-3 && (hi - 0.6745).abs() < 1e-3);
        let s = SampleSummary::new(1, 0.0).unwrap();
        assert!(matches!(confidence_interval(&s, 1.0), Err(crate::Error::Domain(_))));
        assert!(matches!(confidence_interval(&s, 0.0), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn size_is_alpha() {
        for alpha in [0.2, 0.1, 0.05, 0.01, 0.005, 0.001] {
            for n in [1, 4, 30, 100, 10_000] {
                let t = GaussianZTest::new(alpha, n).unwrap();
                let z = (n as f64).sqrt() * t.rejection_threshold();
                let reject = 1.0 - normal::cdf(z);
                assert!((reject - alpha).abs() <= 1e-10, "alpha {alpha} n {n}");
            }
        }
    }

    #[test]
    fn summary_from_measurements() {
        let s = SampleSummary::from_measurements(&[1.0, 2.0, 3.0, 6.0]).unwrap();
        assert_eq!((s.n(), s.xbar()), (4, 3.0));
        assert!(SampleSummary::from_measurements(&[]).is_err());
    }

    proptest! {
        #[test]
        fn decision_matches_p_value(alpha in 0.001f64..0.5, n in 1u64..5000, xbar in -2.0f64..2.0) {
            let t = GaussianZTest::new(alpha, n).unwrap();
            let s = SampleSummary::new(n, xbar).unwrap();
            let positive = t.decide(&s).unwrap().is_positive();
            prop_assert_eq!(positive, p_value(&s).get() <= alpha);
        }
    }
}
