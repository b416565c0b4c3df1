//! Bayes factors under the two-point prior: with probability 1/2 the
//! measurements are `N(0, 1)`, otherwise `N(mu, 1)`.
//!
//! With `n` measurements the Bayes factor depends on the data only through
//! the sample mean, `BF = exp(n (2 mu xbar - mu^2) / 2)`, so every event
//! `{BF in [a, b]}` is an interval of sample means and its probability is a
//! difference of normal tails. Bayes factors are carried on the natural-log
//! scale throughout; values such as `10^714` are routine for large means.
//!
//! The UMPBT alternative `mu(gamma, n) = sqrt(2 ln(gamma) / n)` makes
//! `{BF >= gamma}` coincide with `{xbar >= sqrt(2 ln(gamma) / n)}`, which is
//! the one-sided z-test at level `alpha` exactly when
//! `gamma = exp(z_alpha^2 / 2)` ([`gamma_star`]).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::normal::{self, Probability};
use crate::ztest::SampleSummary;

/// Two-point prior: `H0` (mean 0) and `H_mu` (mean `mu`), each with
/// probability 1/2, unit variance, `n` measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BhPrior {
    mu: f64,
    n: u64,
}

impl BhPrior {
    pub fn new(mu: f64, n: u64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain(format!("alternative mean must be positive and finite, got {mu}")));
        }
        if n == 0 {
            return Err(invalid("sample count n must be at least 1"));
        }
        Ok(BhPrior { mu, n })
    }

    /// Prior whose alternative is the UMPBT mean for evidence threshold `gamma`.
    pub fn umpbt(gamma: f64, n: u64) -> Result<Self> {
        BhPrior::new(umpbt_mu(gamma, n)?, n)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    fn sqrt_n(&self) -> f64 {
        (self.n as f64).sqrt()
    }

    /// Standardized separation `sqrt(n) mu` between the two hypotheses.
    fn separation(&self) -> f64 {
        self.sqrt_n() * self.mu
    }

    /// Sample mean at which `ln BF` equals `log_bf`. Infinite inputs map to
    /// infinite means.
    fn xbar_at(&self, log_bf: f64) -> f64 {
        log_bf / (self.n as f64 * self.mu) + 0.5 * self.mu
    }

    /// Probability masses of `{BF in interval}` under `H0` and under `H_mu`.
    fn conditional_masses(&self, interval: &BfInterval) -> (f64, f64) {
        let a = self.sqrt_n() * self.xbar_at(interval.lo.ln());
        let b = self.sqrt_n() * self.xbar_at(interval.hi.ln());
        let d = self.separation();
        (normal::mass(a, b), normal::mass(a - d, b - d))
    }
}

/// Natural logarithm of a Bayes factor.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogBayesFactor(f64);

impl LogBayesFactor {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(invalid("log Bayes factor is NaN"));
        }
        Ok(LogBayesFactor(value))
    }

    pub fn from_bayes_factor(bf: f64) -> Result<Self> {
        if !(bf > 0.0) {
            return Err(domain(format!("Bayes factor must be positive, got {bf}")));
        }
        LogBayesFactor::new(bf.ln())
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }
}

impl fmt::Display for LogBayesFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A range `[lo, hi]` of Bayes factor values; `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BfInterval {
    lo: f64,
    hi: f64,
}

impl BfInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && lo.is_finite()) {
            return Err(invalid(format!("interval lower edge must be finite and >= 0, got {lo}")));
        }
        if !(hi > lo) {
            return Err(invalid(format!("interval needs lo < hi, got [{lo:?}, {hi:?}]")));
        }
        Ok(BfInterval { lo, hi })
    }

    pub fn at_least(lo: f64) -> Result<Self> {
        BfInterval::new(lo, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// How [`h0_given_bf_in`] evaluates the conditional probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadMethod {
    /// `P[H0 and BF in I] / P[BF in I]` from normal tail masses.
    Ratio,
    /// `E[1 / (1 + BF) | BF in I]` integrated against the mixture density.
    Quadrature,
}

/// One bin of the Bayes factor table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JohnsonTableRow {
    pub interval: BfInterval,
    /// p-value at the lower Bayes factor edge.
    pub p_lo: Probability,
    /// p-value at the upper Bayes factor edge (0 for an open-ended bin).
    pub p_hi: Probability,
    /// `P[BF in interval]` under the prior.
    pub prob_bin: Probability,
    /// `P[H0 | BF in interval]`.
    pub prob_h0_given_bin: Probability,
}

pub fn log_bayes_factor(prior: &BhPrior, s: &SampleSummary) -> Result<LogBayesFactor> {
    if s.n() != prior.n {
        return Err(invalid(format!("sample has n = {} but the prior was built for n = {}", s.n(), prior.n)));
    }
    Ok(LogBayesFactor(log_bf_at(prior, s.xbar())))
}

/// `ln BF = n mu (xbar - mu / 2)`.
pub(crate) fn log_bf_at(prior: &BhPrior, xbar: f64) -> f64 {
    prior.n as f64 * prior.mu * (xbar - 0.5 * prior.mu)
}

/// `P[H0 | x] = 1 / (1 + BF)`.
pub fn posterior_h0(lbf: LogBayesFactor) -> Probability {
    Probability::saturating(logistic(-lbf.0))
}

/// `P[H_mu | x] = 1 / (1 + 1 / BF)`.
pub fn posterior_hmu(lbf: LogBayesFactor) -> Probability {
    Probability::saturating(logistic(lbf.0))
}

/// `1 / (1 + exp(-x))` without overflow.
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Evidence threshold matching a one-sided level-`alpha` z-test:
/// `exp(z^2 / 2)` with `z = Phi^-1(1 - alpha)`.
pub fn gamma_star(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(domain(format!("gamma_star needs 0 < alpha < 0.5, got {alpha}")));
    }
    let z = normal::quantile(1.0 - alpha);
    Ok((0.5 * z * z).exp())
}

/// Replaces `gamma` by `gamma_star(alpha)` when it is that value rounded to
/// three significant digits (so `3.87` means `3.868...` at `alpha = 0.05`).
pub fn snap_to_gamma_star(gamma: f64, alpha: f64) -> Result<f64> {
    let exact = gamma_star(alpha)?;
    let half_unit = 0.5 * 10f64.powf(exact.log10().floor() - 2.0);
    Ok(if (gamma - exact).abs() <= half_unit { exact } else { gamma })
}

/// UMPBT alternative mean `sqrt(2 ln(gamma) / n)`.
pub fn umpbt_mu(gamma: f64, n: u64) -> Result<f64> {
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(domain(format!("UMPBT mean needs gamma > 1, got {gamma}")));
    }
    if n == 0 {
        return Err(invalid("sample count n must be at least 1"));
    }
    Ok((2.0 * gamma.ln() / n as f64).sqrt())
}

/// Sample mean `t` with `BF(t) = gamma`: `ln(gamma) / (n mu) + mu / 2`.
pub fn bf_threshold_in_xbar(prior: &BhPrior, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(prior.xbar_at(gamma.ln()))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("evidence threshold must be positive and finite, got {gamma}")))
    }
}

/// `P[BF >= gamma]` under the prior.
pub fn positive_prob(prior: &BhPrior, gamma: f64) -> Result<Probability> {
    check_gamma(gamma)?;
    let (h0, h1) = prior.conditional_masses(&BfInterval::at_least(gamma)?);
    Ok(Probability::saturating(0.5 * (h0 + h1)))
}

/// `P[BF >= gamma and H0] = P[BF >= gamma | H0] / 2`.
pub fn false_positive_prob(prior: &BhPrior, gamma: f64) -> Result<Probability> {
    check_gamma(gamma)?;
    let (h0, _) = prior.conditional_masses(&BfInterval::at_least(gamma)?);
    Ok(Probability::saturating(0.5 * h0))
}

/// `P[BF in interval]` under the prior.
pub fn bin_prob(prior: &BhPrior, interval: &BfInterval) -> Probability {
    let (h0, h1) = prior.conditional_masses(interval);
    Probability::saturating(0.5 * (h0 + h1))
}

/// `P[H0 | BF in interval]`.
///
/// The ratio method is exact up to the normal tails. The quadrature method
/// averages the posterior `1 / (1 + BF)` over the mixture density of the
/// standardized mean restricted to the interval, on unit-width panels over
/// `[-10, sqrt(n) mu + 10]`.
pub fn h0_given_bf_in(prior: &BhPrior, interval: &BfInterval, method: QuadMethod) -> Result<Probability> {
    let (num, den) = match method {
        QuadMethod::Ratio => {
            let (h0, h1) = prior.conditional_masses(interval);
            (0.5 * h0, 0.5 * (h0 + h1))
        }
        QuadMethod::Quadrature => quadrature_masses(prior, interval),
    };
    if !(den > 0.0) {
        return Err(Error::DegenerateConditioning(format!(
            "P[BF in [{:?}, {:?}]] is zero under the prior",
            interval.lo, interval.hi
        )));
    }
    Ok(Probability::saturating(num / den))
}

const QUAD_TRUNCATION: f64 = 10.0;
const QUAD_TOLERANCE: f64 = 1e-10;

fn quadrature_masses(prior: &BhPrior, interval: &BfInterval) -> (f64, f64) {
    let sqrt_n = prior.sqrt_n();
    let d = prior.separation();
    let a = (sqrt_n * prior.xbar_at(interval.lo.ln())).max(-QUAD_TRUNCATION);
    let b = (sqrt_n * prior.xbar_at(interval.hi.ln())).min(d + QUAD_TRUNCATION);
    if !(a < b) {
        return (0.0, 0.0);
    }
    // Standardized mean u = sqrt(n) xbar; ln BF = d (u - d / 2).
    let mixture = |u: f64| 0.5 * (normal::pdf(u) + normal::pdf(u - d));
    let weighted = |u: f64| logistic(-d * (u - 0.5 * d)) * mixture(u);

    let panels = ((b - a).ceil() as usize).max(1);
    let width = (b - a) / panels as f64;
    let tol = QUAD_TOLERANCE / panels as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        num += quadrature::integrate(weighted, lo, hi, tol).integral;
        den += quadrature::integrate(mixture, lo, hi, tol).integral;
    }
    (num, den)
}

/// Bins `[e_0, e_1), ..., [e_last, inf)` of the Bayes factor under the UMPBT
/// prior for level `alpha`, with edge p-values, bin probabilities and
/// conditional null probabilities.
///
/// A first edge equal to `gamma_star(alpha)` rounded to three significant
/// digits is replaced by the exact value.
pub fn johnson_table(alpha: f64, n: u64, bf_edges: &[f64]) -> Result<Vec<JohnsonTableRow>> {
    let gamma = gamma_star(alpha)?;
    let prior = BhPrior::umpbt(gamma, n)?;
    let Some((&first, rest)) = bf_edges.split_first() else {
        return Err(invalid("at least one Bayes factor edge is required"));
    };
    let mut edges = Vec::with_capacity(bf_edges.len() + 1);
    edges.push(snap_to_gamma_star(first, alpha)?);
    edges.extend_from_slice(rest);
    if !(edges[0] > 0.0) || edges.iter().any(|e| !e.is_finite()) {
        return Err(invalid("Bayes factor edges must be positive and finite"));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("Bayes factor edges must be strictly increasing"));
    }
    edges.push(f64::INFINITY);

    let p_at =
        |bf: f64| -> Probability { Probability::saturating(normal::sf(prior.sqrt_n() * prior.xbar_at(bf.ln()))) };
    edges
        .windows(2)
        .map(|w| {
            let interval = BfInterval::new(w[0], w[1])?;
            Ok(JohnsonTableRow {
                interval,
                p_lo: p_at(w[0]),
                p_hi: p_at(w[1]),
                prob_bin: bin_prob(&prior, &interval),
                prob_h0_given_bin: h0_given_bf_in(&prior, &interval, QuadMethod::Ratio)?,
            })
        })
        .collect()
}

/// `sum P[E] P[H0 | E]` over the rows: the false-positive probability of
/// rejecting whenever the Bayes factor reaches the first edge.
pub fn false_positive_total(rows: &[JohnsonTableRow]) -> f64 {
    rows.iter().map(|r| r.prob_bin.get() * r.prob_h0_given_bin.get()).sum()
}
