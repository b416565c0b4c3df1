use fpbound::bayes::{self, BfInterval, BhPrior, QuadMethod};
use fpbound::montecarlo::{self, BhWorldConfig, WorldConfig};

const K: u64 = 1_000_000;

fn within_se(empirical: f64, expected: f64, n: u64, bands: f64) -> bool {
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    (empirical - expected).abs() <= bands * se.max(1e-12)
}

#[test]
fn worlds_match_closed_forms() {
    let grid = [
        (1.0, 0.5, 100, 0.05),
        (0.5, 0.5, 100, 0.05),
        (0.0, 0.2, 30, 0.05),
        (0.8, 0.3, 50, 0.01),
        (0.3, 0.1, 200, 0.1),
        (0.6, 0.25, 100, 0.005),
    ];
    for (i, &(eta, mu_alt, n, alpha)) in grid.iter().enumerate() {
        let cfg = WorldConfig { k: K, eta, mu_alt, n, alpha, seed: 100 + i as u64 };
        let rep = montecarlo::simulate_world(&cfg).unwrap();
        let want = montecarlo::analytic_rates(&cfg).unwrap();
        assert!(within_se(rep.rates.r, want.r, K, 4.0), "r, config {cfg:?}");
        assert!(within_se(rep.rates.fp_among_all, want.fp_among_all, K, 4.0), "fp_all, config {cfg:?}");
        if let (Some(got), Some(exp)) = (rep.rates.fp_among_positives, want.fp_among_positives) {
            assert!(within_se(got, exp, rep.k_positive, 4.0), "fp_pos, config {cfg:?}");
        }
        assert!(montecarlo::verify_bound(&rep, alpha).unwrap().holds);
    }
}

#[test]
fn bh_world_matches_bins() {
    let gamma = bayes::gamma_star(0.05).unwrap();
    let prior = BhPrior::umpbt(gamma, 100).unwrap();
    let edges = vec![gamma, 5.44, 7.92, 12.31, 21.77];
    let cfg = BhWorldConfig { k: K, prior, gamma, bf_edges: edges.clone(), seed: 77 };
    let (rep, hist) = montecarlo::simulate_bh(&cfg).unwrap();
    assert!(within_se(rep.rates.r, 0.275, K, 4.0));
    assert!(within_se(rep.rates.fp_among_all, 0.025, K, 4.0));
    for (i, &lo) in edges.iter().enumerate() {
        let hi = edges.get(i + 1).copied().unwrap_or(f64::INFINITY);
        let bin = BfInterval::new(lo, hi).unwrap();
        let p = bayes::bin_prob(&prior, &bin).get();
        assert!(within_se(hist.counts[i] as f64 / K as f64, p, K, 4.0), "bin {i}");
        let h0 = bayes::h0_given_bf_in(&prior, &bin, QuadMethod::Ratio).unwrap().get();
        let share = hist.false_positives[i] as f64 / hist.counts[i] as f64;
        assert!(within_se(share, h0, hist.counts[i], 4.0), "bin {i} share {share} vs {h0}");
    }
}

#[test]
fn confidence_interval_coverage() {
    for (mu0, n, level) in [(0.0, 100, 0.95), (0.3, 10, 0.9), (-2.0, 1, 0.5)] {
        let c = montecarlo::simulate_coverage(mu0, n, level, 200_000, 3).unwrap();
        assert!(within_se(c.rate, level, c.k, 4.0), "{mu0} {n} {level}: {}", c.rate);
    }
}

#[test]
fn sparse_world_with_few_false_positives() {
    // About 102 results, 3 expected false positives, and about one in five
    // of the results with p in [0.01, 0.05] false.
    let cfg = WorldConfig { k: 102, eta: 0.6, mu_alt: 0.25, n: 100, alpha: 0.05, seed: 0 };
    let expected_fp = cfg.k as f64 * montecarlo::analytic_rates(&cfg).unwrap().fp_among_all;
    assert!((expected_fp - 3.0).abs() < 0.5, "{expected_fp}");
    let band = montecarlo::expected_marginal_band(&cfg, 0.01).unwrap();
    assert!((band.fp_share - 0.2).abs() < 0.02, "{}", band.fp_share);
    let positives = cfg.k as f64 * montecarlo::analytic_rates(&cfg).unwrap().r;
    assert!(band.expected_count < positives);
}
