//! False positives among positive results, controlled by the positivity ratio.
//!
//! Out of all experiments a fraction `eta` have a true null. A level-`alpha`
//! test turns `eta * alpha` of all experiments into false positives, and
//! misses a fraction `beta` of the experiments whose null is false. The
//! positivity ratio `r = eta * alpha + (1 - eta) (1 - beta)` is observable;
//! since `r <= eta * alpha + 1 - eta`, we get `eta <= (1 - r) / (1 - alpha)`
//! and hence the share of false positives among positives is at most
//! `alpha (1 - r) / (r (1 - alpha))`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::normal::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityScenario {
    alpha: Probability,
    eta: Probability,
    beta: Probability,
}

impl PositivityScenario {
    pub fn new(alpha: f64, eta: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PositivityScenario {
            alpha: Probability::new(alpha)?,
            eta: Probability::new(eta)?,
            beta: Probability::new(beta)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.get()
    }

    pub fn eta(&self) -> f64 {
        self.eta.get()
    }

    pub fn beta(&self) -> f64 {
        self.beta.get()
    }
}

/// Proportions of the four test/truth cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseDecomposition {
    pub false_positive: Probability,
    pub true_negative: Probability,
    pub true_positive: Probability,
    pub false_negative: Probability,
}

impl CaseDecomposition {
    pub fn positive_mass(&self) -> f64 {
        self.false_positive.get() + self.true_positive.get()
    }

    pub fn total(&self) -> f64 {
        self.false_positive.get() + self.true_negative.get() + self.true_positive.get() + self.false_negative.get()
    }
}

/// Bound values indexed `cells[ratio][alpha]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub alphas: Vec<f64>,
    pub ratios: Vec<f64>,
    pub cells: Vec<Vec<f64>>,
}

impl BoundTable {
    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty() || self.ratios.is_empty()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("significance level must lie in (0, 1), got {alpha}")))
    }
}

/// Largest possible share of false positives among positive results,
/// `alpha (1 - r) / (r (1 - alpha))`. Returned uncapped; see [`capped`].
pub fn fp_bound(alpha: f64, r: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if r == 0.0 {
        return Err(domain("positivity ratio r must be > 0; with no positive results the bound diverges"));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain(format!("positivity ratio must lie in (0, 1], got {r}")));
    }
    Ok(alpha * (1.0 - r) / (r * (1.0 - alpha)))
}

/// A bound value as a proportion, at most 1.
pub fn capped(bound: f64) -> f64 {
    bound.min(1.0)
}

/// `r = eta alpha + (1 - eta)(1 - beta)`.
pub fn positivity_ratio(sc: &PositivityScenario) -> Probability {
    let (a, e, b) = (sc.alpha(), sc.eta(), sc.beta());
    Probability::saturating(e * a + (1.0 - e) * (1.0 - b))
}

/// Actual share of false positives among positives, `eta alpha / r`.
pub fn fp_among_positives(sc: &PositivityScenario) -> Result<Probability> {
    let r = positivity_ratio(sc).get();
    if r == 0.0 {
        return Err(Error::DegenerateScenario("no positive results (r = 0)".into()));
    }
    Ok(Probability::saturating(sc.eta() * sc.alpha() / r))
}

pub fn decompose(sc: &PositivityScenario) -> CaseDecomposition {
    let (a, e, b) = (sc.alpha(), sc.eta(), sc.beta());
    CaseDecomposition {
        false_positive: Probability::saturating(e * a),
        true_negative: Probability::saturating(e * (1.0 - a)),
        true_positive: Probability::saturating((1.0 - e) * (1.0 - b)),
        false_negative: Probability::saturating((1.0 - e) * b),
    }
}

/// Largest null fraction compatible with an observed ratio,
/// `min(1, (1 - r) / (1 - alpha))`.
pub fn eta_upper_bound(alpha: f64, r: f64) -> Result<Probability> {
    check_alpha(alpha)?;
    let r = Probability::new(r)?.get();
    Ok(Probability::saturating((1.0 - r) / (1.0 - alpha)))
}

/// Smallest `r` with `fp_bound(alpha, r) <= target`:
/// `alpha / (alpha + target (1 - alpha))`.
pub fn min_ratio_for_target(alpha: f64, target: f64) -> Result<Probability> {
    check_alpha(alpha)?;
    if !(target > 0.0) || target.is_nan() {
        return Err(domain(format!("target share must be positive, got {target}")));
    }
    Ok(Probability::saturating(alpha / (alpha + target * (1.0 - alpha))))
}

pub fn bound_table(alphas: &[f64], ratios: &[f64]) -> Result<BoundTable> {
    for &r in ratios {
        if !(r > 0.0 && r < 1.0) {
            return Err(domain(format!("table ratios must lie in (0, 1), got {r}")));
        }
    }
    let cells = ratios
        .iter()
        .map(|&r| alphas.iter().map(|&a| fp_bound(a, r)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundTable { alphas: alphas.to_vec(), ratios: ratios.to_vec(), cells })
}

/// A target share of false positives among positives and the positivity
/// ratio needed to guarantee it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidanceStep {
    pub target: f64,
    pub min_ratio: Probability,
}

pub fn guidance(alpha: f64, targets: &[f64]) -> Result<Vec<GuidanceStep>> {
    if targets.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("guidance targets must be sorted ascending"));
    }
    targets.iter().map(|&t| Ok(GuidanceStep { target: t, min_ratio: min_ratio_for_target(alpha, t)? })).collect()
}

/// Percentage with two significant digits and at most one decimal place,
/// capped at 100%: `0.2105 -> "21%"`, `0.0526 -> "5.3%"`, `0.005 -> "0.5%"`.
/// Shares below 0.1% keep two significant digits.
pub fn format_percent(share: f64) -> String {
    let pct = capped(share) * 100.0;
    if pct == 0.0 {
        return "0%".to_string();
    }
    if pct < 0.1 {
        let decimals = (1 - pct.log10().floor() as i32).max(0) as usize;
        return format!("{pct:.decimals$}%");
    }
    let one_decimal = (pct * 10.0).round() / 10.0;
    if one_decimal >= 10.0 {
        format!("{:.0}%", pct)
    } else {
        format!("{one_decimal:.1}%")
    }
}
