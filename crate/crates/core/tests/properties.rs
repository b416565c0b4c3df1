use fpbound::bayes::{self, BfInterval, BhPrior, LogBayesFactor, QuadMethod};
use fpbound::normal::{std_cdf, std_quantile};
use fpbound::positivity::{self, PositivityScenario};
use proptest::prelude::*;

proptest! {
    #[test]
    fn quantile_inverts_cdf(p in 0.001f64..0.999) {
        let z = std_quantile(p).unwrap().get();
        prop_assert!((std_cdf(z).unwrap().get() - p).abs() <= 1e-10);
    }

    #[test]
    fn quantile_strictly_increasing(p in 0.0001f64..0.99, dp in 1e-6f64..0.009) {
        prop_assert!(std_quantile(p).unwrap() < std_quantile(p + dp).unwrap());
    }

    #[test]
    fn cdf_monotone_and_symmetric(z in -8.0f64..8.0, dz in 0.0f64..1.0) {
        let a = std_cdf(z).unwrap().get();
        prop_assert!(a <= std_cdf(z + dz).unwrap().get());
        prop_assert!((a + std_cdf(-z).unwrap().get() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bound_dominates_actual_share(alpha in 0.001f64..0.999, eta in 0.0f64..=1.0, beta in 0.0f64..=1.0) {
        let sc = PositivityScenario::new(alpha, eta, beta).unwrap();
        let r = positivity::positivity_ratio(&sc).get();
        prop_assume!(r > 0.0);
        let actual = positivity::fp_among_positives(&sc).unwrap().get();
        let bound = positivity::capped(positivity::fp_bound(alpha, r).unwrap());
        prop_assert!(actual <= bound + 1e-12);
        prop_assert!(eta <= positivity::eta_upper_bound(alpha, r).unwrap().get() + 1e-12);
    }

    #[test]
    fn decomposition_closes(alpha in 0.001f64..0.999, eta in 0.0f64..=1.0, beta in 0.0f64..=1.0) {
        let sc = PositivityScenario::new(alpha, eta, beta).unwrap();
        let d = positivity::decompose(&sc);
        prop_assert!((d.total() - 1.0).abs() <= 1e-12);
        prop_assert!((d.positive_mass() - positivity::positivity_ratio(&sc).get()).abs() <= 1e-12);
    }

    #[test]
    fn bound_tight_without_misses(alpha in 0.001f64..0.999, eta in 0.001f64..0.999) {
        let sc = PositivityScenario::new(alpha, eta, 0.0).unwrap();
        let r = positivity::positivity_ratio(&sc).get();
        let actual = positivity::fp_among_positives(&sc).unwrap().get();
        prop_assert!((actual - positivity::fp_bound(alpha, r).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn bound_monotone(alpha in 0.001f64..0.99, r in 0.001f64..0.99, d in 1e-4f64..0.009) {
        let b = positivity::fp_bound(alpha, r).unwrap();
        prop_assert!(positivity::fp_bound(alpha, r + d).unwrap() < b);
        prop_assert!(positivity::fp_bound(alpha + d, r).unwrap() > b);
    }

    #[test]
    fn min_ratio_inverts_bound(alpha in 0.001f64..0.5, target in 0.001f64..5.0) {
        let r = positivity::min_ratio_for_target(alpha, target).unwrap().get();
        prop_assert!((positivity::fp_bound(alpha, r).unwrap() - target).abs() <= 1e-9 * target.max(1.0));
    }

    #[test]
    fn posteriors_sum_to_one(l in -700.0f64..700.0) {
        let lbf = LogBayesFactor::new(l).unwrap();
        prop_assert!((bayes::posterior_h0(lbf).get() + bayes::posterior_hmu(lbf).get() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn posterior_decreasing(l in -30.0f64..50.0, d in 1e-3f64..1.0) {
        let a = bayes::posterior_h0(LogBayesFactor::new(l).unwrap());
        let b = bayes::posterior_h0(LogBayesFactor::new(l + d).unwrap());
        prop_assert!(b < a);
    }

    #[test]
    fn methods_agree_on_random_bins(mu in 0.05f64..1.0, n in 1u64..400, lo in 0.2f64..10.0, width in 0.5f64..20.0) {
        let prior = BhPrior::new(mu, n).unwrap();
        let bin = BfInterval::new(lo, lo + width).unwrap();
        prop_assume!(bayes::bin_prob(&prior, &bin).get() > 1e-4);
        let r = bayes::h0_given_bf_in(&prior, &bin, QuadMethod::Ratio).unwrap().get();
        let q = bayes::h0_given_bf_in(&prior, &bin, QuadMethod::Quadrature).unwrap().get();
        prop_assert!((r - q).abs() <= 1e-6, "{} vs {}", r, q);
    }

    #[test]
    fn larger_gamma_larger_mu(g1 in 1.01f64..100.0, dg in 0.01f64..100.0, n in 1u64..1000) {
        prop_assert!(bayes::umpbt_mu(g1 + dg, n).unwrap() > bayes::umpbt_mu(g1, n).unwrap());
    }
}
