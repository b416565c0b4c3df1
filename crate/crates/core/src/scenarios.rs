//! Three situations in which the UMPBT alternative `mu(gamma, n)` behaves
//! badly as a prior: an absurd Bayes factor when the data are far from both
//! hypotheses, analysts with different thresholds "supporting" different
//! alternatives from the same data, and pooled data supporting yet another
//! alternative.

use serde::{Deserialize, Serialize};

use crate::bayes::{self, BhPrior, LogBayesFactor};
use crate::error::{domain, Error, Result};
use crate::ztest::SampleSummary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioId {
    ExtremeBf,
    GammaDependence,
    Pooling,
}

impl ScenarioId {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::ExtremeBf => "extreme-bf",
            ScenarioId::GammaDependence => "gamma-dependence",
            ScenarioId::Pooling => "pooling",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub label: String,
    pub value: f64,
}

/// Up to four decimals, trailing zeros dropped, for narratives.
fn short(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn finding(label: &str, value: f64) -> Finding {
    Finding { label: label.to_string(), value }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario_id: ScenarioId,
    pub inputs: Vec<Finding>,
    pub findings: Vec<Finding>,
    pub narrative: String,
}

impl ScenarioReport {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.findings.iter().find(|f| f.label == label).map(|f| f.value)
    }
}

/// Bayes factor of the UMPBT alternative for data whose mean is far from
/// both hypotheses.
pub fn extreme_bf(gamma: f64, n: u64, xbar: f64) -> Result<ScenarioReport> {
    let prior = BhPrior::umpbt(gamma, n)?;
    let s = SampleSummary::new(n, xbar)?;
    let lbf = bayes::log_bayes_factor(&prior, &s)?;
    let mu = prior.mu();
    let findings = vec![
        finding("mu", mu),
        finding("log_bf", lbf.get()),
        finding("log10_bf", lbf.log10()),
        finding("posterior_hmu", bayes::posterior_hmu(lbf).get()),
        finding("log10_posterior_h0", log10_posterior_h0(lbf)),
        finding("distance_xbar_mu", (xbar - mu).abs()),
    ];
    let narrative = format!(
        "With gamma = {} and n = {n} the alternative is mu = {mu:.4}. A sample mean of {xbar} \
         gives BF = 10^{:.1} in favour of mean {mu:.4}, although the data sit {:.4} away from it.",
        short(gamma),
        lbf.log10(),
        (xbar - mu).abs()
    );
    Ok(ScenarioReport {
        scenario_id: ScenarioId::ExtremeBf,
        inputs: vec![finding("gamma", gamma), finding("n", n as f64), finding("xbar", xbar)],
        findings,
        narrative,
    })
}

/// `log10(1 / (1 + BF))` without underflow.
fn log10_posterior_h0(lbf: LogBayesFactor) -> f64 {
    let l = lbf.get();
    // -ln(1 + e^l) = -(max(l, 0) + ln(1 + e^-|l|))
    -(l.max(0.0) + (-l.abs()).exp().ln_1p()) / std::f64::consts::LN_10
}

/// Two evidence thresholds yield two different "supported" alternatives.
/// Under the UMPBT prior `BF >= gamma` is `xbar >= mu(gamma, n)`, so any
/// mean above the larger of the two lets both analysts claim support.
pub fn gamma_dependence(gamma1: f64, gamma2: f64, n: u64) -> Result<ScenarioReport> {
    if gamma1 == gamma2 {
        return Err(Error::DegenerateComparison(format!("both thresholds equal {gamma1}")));
    }
    if !(gamma1 < gamma2) {
        return Err(domain(format!("need gamma1 < gamma2, got {gamma1} and {gamma2}")));
    }
    let p1 = BhPrior::umpbt(gamma1, n)?;
    let p2 = BhPrior::umpbt(gamma2, n)?;
    let t1 = bayes::bf_threshold_in_xbar(&p1, gamma1)?;
    let t2 = bayes::bf_threshold_in_xbar(&p2, gamma2)?;
    let both_from = t1.max(t2);
    let narrative = format!(
        "Thresholds {} and {} on n = {n} measurements select alternatives \
         mu1 = {:.4} and mu2 = {:.4}. Every sample mean >= {both_from:.4} gives both analysts \
         strong support, each for a different mean.",
        short(gamma1),
        short(gamma2),
        p1.mu(),
        p2.mu()
    );
    Ok(ScenarioReport {
        scenario_id: ScenarioId::GammaDependence,
        inputs: vec![finding("gamma1", gamma1), finding("gamma2", gamma2), finding("n", n as f64)],
        findings: vec![
            finding("mu1", p1.mu()),
            finding("mu2", p2.mu()),
            finding("xbar_threshold1", t1),
            finding("xbar_threshold2", t2),
            finding("both_supported_from", both_from),
        ],
        narrative,
    })
}

/// Pooling two identical experiments moves the alternative from
/// `mu(gamma, n)` to `mu(gamma, 2n) = mu(gamma, n) / sqrt(2)`.
pub fn pooling_inconsistency(gamma: f64, n: u64) -> Result<ScenarioReport> {
    let single = bayes::umpbt_mu(gamma, n)?;
    let pooled = bayes::umpbt_mu(gamma, 2 * n)?;
    let narrative = format!(
        "Each of two experiments with n = {n} supports mu = {single:.5}; pooled as one experiment \
         with n = {} the same threshold supports mu = {pooled:.5}, a factor {:.6} apart.",
        2 * n,
        single / pooled
    );
    Ok(ScenarioReport {
        scenario_id: ScenarioId::Pooling,
        inputs: vec![finding("gamma", gamma), finding("n", n as f64)],
        findings: vec![finding("mu_single", single), finding("mu_pooled", pooled), finding("ratio", single / pooled)],
        narrative,
    })
}
