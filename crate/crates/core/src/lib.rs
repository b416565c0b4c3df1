//! Numerics for reasoning about false positives in one-sided Gaussian
//! hypothesis testing.
//!
//! * [`normal`]: standard-normal pdf, cdf and quantile.
//! * [`ztest`]: the one-sided z-test on a sample mean, p-values and
//!   confidence intervals.
//! * [`bayes`]: Bayes factors and posteriors under the two-point prior
//!   (mean 0 vs mean `mu`, each with probability 1/2), the UMPBT choice of
//!   `mu`, and the binned "Bayes factor vs false positive" table.
//! * [`positivity`]: the bound `alpha (1 - r) / (r (1 - alpha))` on the share
//!   of false positives among positive results, given the positivity ratio `r`.
//! * [`montecarlo`]: deterministic, parallel simulation of many experiments
//!   checking the analytic values above.
//! * [`scenarios`]: worked demonstrations of why UMPBT alternatives are
//!   incoherent as priors.

// Range checks are written `!(x > 0.0)` so that NaN fails them as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
mod error;
pub mod montecarlo;
pub mod normal;
pub mod positivity;
pub mod scenarios;
pub mod ztest;

pub use bayes::{BfInterval, BhPrior, JohnsonTableRow, LogBayesFactor, QuadMethod};
pub use error::{Error, Result};
pub use montecarlo::{BhWorldConfig, BinHistogram, SimulationReport, WorldConfig};
pub use normal::{Probability, ZScore};
pub use positivity::{BoundTable, CaseDecomposition, PositivityScenario};
pub use scenarios::ScenarioReport;
pub use ztest::{GaussianZTest, SampleSummary, TestOutcome};
