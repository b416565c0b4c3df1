//! Simulated worlds of many independent experiments.
//!
//! Each experiment `i` draws from its own ChaCha stream keyed by
//! `(seed, i)`, so a report depends only on the configuration: the work can
//! be split across any number of threads and the tallies, being integer
//! sums, merge to the same totals. Normal variates come from the inverse
//! distribution function in [`crate::normal`].

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{self, BhPrior};
use crate::error::{invalid, Error, Result};
use crate::normal::{self, Probability};
use crate::positivity::{self, PositivityScenario};
use crate::ztest::{self, GaussianZTest, SampleSummary};

/// Experiments with a mix of true and false nulls, all tested at level `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub k: u64,
    pub eta: f64,
    pub mu_alt: f64,
    pub n: u64,
    pub alpha: f64,
    pub seed: u64,
}

impl WorldConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("number of experiments k must be at least 1"));
        }
        Probability::new(self.eta)?;
        if !(self.mu_alt > 0.0 && self.mu_alt.is_finite()) {
            return Err(invalid(format!("alternative mean must be positive, got {}", self.mu_alt)));
        }
        GaussianZTest::new(self.alpha, self.n)?;
        Ok(())
    }

    fn test(&self) -> GaussianZTest {
        GaussianZTest::new(self.alpha, self.n).expect("validated")
    }

    /// Probability of a positive result when the null is false.
    pub fn power(&self) -> f64 {
        normal::sf(self.test().critical_z() - (self.n as f64).sqrt() * self.mu_alt)
    }
}

/// Experiments drawn from the two-point prior, judged by `BF >= gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BhWorldConfig {
    pub k: u64,
    pub prior: BhPrior,
    pub gamma: f64,
    pub bf_edges: Vec<f64>,
    pub seed: u64,
}

impl BhWorldConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("number of experiments k must be at least 1"));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(invalid(format!("evidence threshold must be positive, got {}", self.gamma)));
        }
        if self.bf_edges.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(invalid("Bayes factor edges must be positive and finite"));
        }
        if self.bf_edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("Bayes factor edges must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tallies {
    pub fp: u64,
    pub tn: u64,
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Tallies {
    pub fn total(&self) -> u64 {
        self.fp + self.tn + self.tp + self.fn_
    }

    pub fn positives(&self) -> u64 {
        self.fp + self.tp
    }

    fn record(&mut self, null_true: bool, positive: bool) {
        match (null_true, positive) {
            (true, true) => self.fp += 1,
            (true, false) => self.tn += 1,
            (false, true) => self.tp += 1,
            (false, false) => self.fn_ += 1,
        }
    }

    fn merge(mut self, other: Tallies) -> Tallies {
        self.fp += other.fp;
        self.tn += other.tn;
        self.tp += other.tp;
        self.fn_ += other.fn_;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Positivity ratio `K+ / K`.
    pub r: f64,
    /// `FP / K+`; absent when there are no positives.
    pub fp_among_positives: Option<f64>,
    /// `FP / K`.
    pub fp_among_all: f64,
}

/// Binomial standard errors `sqrt(p (1 - p) / N)` of the rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub r: f64,
    pub fp_among_positives: Option<f64>,
    pub fp_among_all: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub k: u64,
    pub k_positive: u64,
    pub tallies: Tallies,
    pub rates: Rates,
    pub stderr: StdErrors,
}

impl SimulationReport {
    fn from_tallies(tallies: Tallies) -> Self {
        let k = tallies.total();
        let k_positive = tallies.positives();
        let frac = |num: u64, den: u64| num as f64 / den as f64;
        let se = |p: f64, den: u64| (p * (1.0 - p) / den as f64).sqrt();
        let r = frac(k_positive, k);
        let fp_all = frac(tallies.fp, k);
        let fp_pos = (k_positive > 0).then(|| frac(tallies.fp, k_positive));
        SimulationReport {
            k,
            k_positive,
            tallies,
            rates: Rates { r, fp_among_positives: fp_pos, fp_among_all: fp_all },
            stderr: StdErrors {
                r: se(r, k),
                fp_among_positives: fp_pos.map(|p| se(p, k_positive)),
                fp_among_all: se(fp_all, k),
            },
        }
    }
}

/// Per-bin counts of positive results, bins `[e_0, e_1), ..., [e_last, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub false_positives: Vec<u64>,
}

impl BinHistogram {
    fn empty(edges: &[f64]) -> Self {
        BinHistogram { edges: edges.to_vec(), counts: vec![0; edges.len()], false_positives: vec![0; edges.len()] }
    }

    fn merge(mut self, other: BinHistogram) -> Self {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.false_positives.iter_mut().zip(&other.false_positives) {
            *a += b;
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Result of checking an empirical share of false positives against the
/// bound evaluated at the empirical positivity ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// `min(1, fp_bound(alpha, r_empirical))`.
    pub value: f64,
    pub holds: bool,
    /// `value - fp_among_positives`; negative when the empirical share sits
    /// above the bound.
    pub slack: f64,
    /// Allowed excess: 4 standard errors of the difference.
    pub tolerance: f64,
}

/// Number of standard errors accepted by [`verify_bound`].
pub const SE_BAND: f64 = 4.0;

/// Experiment streams are keyed by index, so this only sets the granularity
/// of work stealing.
const CHUNK: u64 = 4096;

struct ExperimentRng(ChaCha8Rng);

impl ExperimentRng {
    fn new(key: [u8; 32], index: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        ExperimentRng(rng)
    }

    /// Uniform on the open interval `(0, 1)`.
    fn uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    fn standard_normal(&mut self) -> f64 {
        normal::quantile(self.uniform())
    }
}

fn stream_key(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

fn chunks(k: u64) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    let count = k.div_ceil(CHUNK) as usize;
    (0..count).into_par_iter().map(move |c| {
        let start = c as u64 * CHUNK;
        start..(start + CHUNK).min(k)
    })
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

pub fn simulate_world(cfg: &WorldConfig) -> Result<SimulationReport> {
    simulate_world_with_workers(cfg, None)
}

/// [`simulate_world`] on a dedicated pool of `workers` threads (the global
/// pool when `None`). The report does not depend on the worker count.
pub fn simulate_world_with_workers(cfg: &WorldConfig, workers: Option<usize>) -> Result<SimulationReport> {
    cfg.validate()?;
    let test = cfg.test();
    let key = stream_key(cfg.seed);
    let sd = 1.0 / (cfg.n as f64).sqrt();
    let tallies = run_in_pool(workers, || {
        chunks(cfg.k)
            .map(|range| {
                let mut t = Tallies::default();
                for i in range {
                    let mut rng = ExperimentRng::new(key, i);
                    let null_true = rng.uniform() < cfg.eta;
                    let mean = if null_true { 0.0 } else { cfg.mu_alt };
                    let xbar = mean + sd * rng.standard_normal();
                    t.record(null_true, test.decide_xbar(xbar).is_positive());
                }
                t
            })
            .reduce(Tallies::default, Tallies::merge)
    })?;
    Ok(SimulationReport::from_tallies(tallies))
}

pub fn simulate_bh(cfg: &BhWorldConfig) -> Result<(SimulationReport, BinHistogram)> {
    simulate_bh_with_workers(cfg, None)
}

pub fn simulate_bh_with_workers(
    cfg: &BhWorldConfig,
    workers: Option<usize>,
) -> Result<(SimulationReport, BinHistogram)> {
    cfg.validate()?;
    let key = stream_key(cfg.seed);
    let prior = cfg.prior;
    let sd = 1.0 / (prior.n() as f64).sqrt();
    let log_gamma = cfg.gamma.ln();
    let log_edges: Vec<f64> = cfg.bf_edges.iter().map(|e| e.ln()).collect();
    let (tallies, hist) = run_in_pool(workers, || {
        chunks(cfg.k)
            .map(|range| {
                let mut t = Tallies::default();
                let mut h = BinHistogram::empty(&cfg.bf_edges);
                for i in range {
                    let mut rng = ExperimentRng::new(key, i);
                    let null_true = rng.uniform() < 0.5;
                    let mean = if null_true { 0.0 } else { prior.mu() };
                    let xbar = mean + sd * rng.standard_normal();
                    let lbf = bayes::log_bf_at(&prior, xbar);
                    t.record(null_true, lbf >= log_gamma);
                    // Last edge not exceeding lbf.
                    let bin = log_edges.partition_point(|&e| e <= lbf);
                    if bin > 0 {
                        h.counts[bin - 1] += 1;
                        if null_true {
                            h.false_positives[bin - 1] += 1;
                        }
                    }
                }
                (t, h)
            })
            .reduce(
                || (Tallies::default(), BinHistogram::empty(&cfg.bf_edges)),
                |(ta, ha), (tb, hb)| (ta.merge(tb), ha.merge(hb)),
            )
    })?;
    Ok((SimulationReport::from_tallies(tallies), hist))
}

/// Compares the empirical share of false positives with
/// `min(1, fp_bound(alpha, r_empirical))`.
///
/// The allowed excess is [`SE_BAND`] standard errors of the difference,
/// combining the binomial error of the share with the error of the bound
/// propagated from the error of `r`.
pub fn verify_bound(report: &SimulationReport, alpha: f64) -> Result<BoundCheck> {
    if report.k_positive == 0 {
        return Err(Error::DegenerateReport("no positive results to check".into()));
    }
    let r = report.rates.r;
    let raw = positivity::fp_bound(alpha, r)?;
    let value = positivity::capped(raw);
    let share = report.rates.fp_among_positives.unwrap_or(0.0);
    let se_share = report.stderr.fp_among_positives.unwrap_or(0.0);
    let slope = if raw < 1.0 { alpha / ((1.0 - alpha) * r * r) } else { 0.0 };
    let se = (se_share.powi(2) + (slope * report.stderr.r).powi(2)).sqrt();
    let tolerance = SE_BAND * se;
    let slack = value - share;
    Ok(BoundCheck { value, holds: share <= value + tolerance, slack, tolerance })
}

/// Empirical coverage of the z confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub k: u64,
    pub covered: u64,
    pub rate: f64,
    pub stderr: f64,
}

/// Draws `k` sample means of `n` unit-variance measurements around
/// `true_mean` and counts how often the level-`level` interval contains it.
pub fn simulate_coverage(true_mean: f64, n: u64, level: f64, k: u64, seed: u64) -> Result<CoverageReport> {
    if k == 0 {
        return Err(invalid("number of experiments k must be at least 1"));
    }
    if !true_mean.is_finite() {
        return Err(invalid(format!("true mean must be finite, got {true_mean}")));
    }
    let probe = SampleSummary::new(n, true_mean)?;
    ztest::confidence_interval(&probe, level)?;
    let key = stream_key(seed);
    let sd = 1.0 / (n as f64).sqrt();
    let covered: u64 = chunks(k)
        .map(|range| {
            let mut hits = 0u64;
            for i in range {
                let mut rng = ExperimentRng::new(key, i);
                let s = SampleSummary::new(n, true_mean + sd * rng.standard_normal()).expect("finite draw");
                let (lo, hi) = ztest::confidence_interval(&s, level).expect("validated level");
                hits += u64::from(lo <= true_mean && true_mean <= hi);
            }
            hits
        })
        .sum();
    let rate = covered as f64 / k as f64;
    Ok(CoverageReport { k, covered, rate, stderr: (rate * (1.0 - rate) / k as f64).sqrt() })
}

/// Closed-form rates for a world, through the positivity decomposition with
/// `beta = 1 - power`.
pub fn analytic_rates(cfg: &WorldConfig) -> Result<Rates> {
    cfg.validate()?;
    let sc = PositivityScenario::new(cfg.alpha, cfg.eta, 1.0 - cfg.power())?;
    let d = positivity::decompose(&sc);
    let r = positivity::positivity_ratio(&sc).get();
    Ok(Rates {
        r,
        fp_among_positives: positivity::fp_among_positives(&sc).ok().map(Probability::get),
        fp_among_all: d.false_positive.get(),
    })
}

/// Expected results whose p-value falls in `[p_floor, alpha]`, the
/// "marginally significant" band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalBand {
    pub expected_count: f64,
    pub expected_false_positives: f64,
    pub fp_share: f64,
}

pub fn expected_marginal_band(cfg: &WorldConfig, p_floor: f64) -> Result<MarginalBand> {
    cfg.validate()?;
    if !(p_floor > 0.0 && p_floor < cfg.alpha) {
        return Err(invalid(format!("band floor must lie in (0, alpha), got {p_floor}")));
    }
    let z_hi = normal::quantile(1.0 - p_floor);
    let z_lo = cfg.test().critical_z();
    let shift = (cfg.n as f64).sqrt() * cfg.mu_alt;
    let null_mass = normal::mass(z_lo, z_hi);
    let alt_mass = normal::mass(z_lo - shift, z_hi - shift);
    let k = cfg.k as f64;
    let fp = k * cfg.eta * null_mass;
    let count = fp + k * (1.0 - cfg.eta) * alt_mass;
    Ok(MarginalBand {
        expected_count: count,
        expected_false_positives: fp,
        fp_share: if count > 0.0 { fp / count } else { 0.0 },
    })
}
