//! `fpbound` command-line front end.
//!
//! Every subcommand delegates to one library operation and renders the
//! result as text, CSV or JSON (and SVG for the two tables). Exit codes:
//! 0 on success, 2 for bad arguments or inputs outside an operation's
//! domain, 3 when the numerics fail (conditioning on a zero-probability
//! event, a scenario without positive results).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fpbound::bayes::{self, BhPrior};
use fpbound::montecarlo::{self, BhWorldConfig, WorldConfig};
use fpbound::positivity;
use fpbound::scenarios;
use fpbound::ztest::{self, GaussianZTest, SampleSummary};
use fpbound::{BfInterval, QuadMethod, ScenarioReport};
use serde::Serialize;

mod config;
pub mod render;

pub use render::{render_table, OutputFormat, TablePayload};

/// Bayes factor edges of the standard five-bin table.
pub const DEFAULT_BF_EDGES: [f64; 5] = [3.87, 5.44, 7.92, 12.31, 21.77];

/// A failure carrying the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }

    /// Serialization or I/O failures that are neither the user's input nor
    /// the numerics; reported with the argument-error code.
    pub(crate) fn internal(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<fpbound::Error> for CliError {
    fn from(e: fpbound::Error) -> Self {
        if e.is_numeric() {
            CliError::numeric(e.to_string())
        } else {
            CliError::usage(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fpbound", version, about = "Bounds and simulations for false positives among significant results")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// JSON file of default flag values; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper bound on the share of false positives among positives.
    Bound {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Positivity ratio: the fraction of experiments reported positive.
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
    },
    /// Grid of bounds over significance levels and positivity ratios.
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05, 0.01, 0.005])]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.2, 0.1])]
        ratios: Vec<f64>,
    },
    /// Smallest positivity ratio that keeps the bound at or below a target.
    MinRatio {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        target: f64,
    },
    /// Target shares and the positivity ratios that guarantee them.
    Guide {
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5])]
        targets: Vec<f64>,
    },
    /// Bayes factor bins of the UMPBT prior matched to a z-test.
    Johnson {
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_BF_EDGES)]
        edges: Vec<f64>,
        /// Cross-check the conditional null probabilities by quadrature.
        #[arg(long)]
        check: bool,
    },
    /// One-sided p-value of a sample mean of unit-variance measurements.
    Pvalue {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        xbar: f64,
        /// Also report the decision at this level.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Rejection threshold of the one-sided z-test on the sample mean.
    Threshold {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: u64,
    },
    /// Two-sided confidence interval for the mean.
    Ci {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        xbar: f64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Simulate a world of z-tests with a mix of true and false nulls.
    Simulate(SimulateArgs),
    /// Simulate experiments drawn from the two-point prior, judged by Bayes factor.
    SimulateBh(SimulateBhArgs),
    /// Worked examples where the UMPBT alternative misbehaves.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 1_000_000)]
    k: u64,
    /// Fraction of experiments whose null hypothesis is true.
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    /// Mean under a false null.
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    #[arg(long, default_value_t = 100)]
    n: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; the output does not depend on this.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateBhArgs {
    #[arg(long, default_value_t = 1_000_000)]
    k: u64,
    /// Evidence threshold; a rounded value of the level-matched threshold
    /// (3.87 at alpha 0.05) is replaced by the exact one.
    #[arg(long, default_value_t = 3.87)]
    gamma: f64,
    #[arg(long, default_value_t = 100)]
    n: u64,
    /// Level used to interpret a rounded gamma.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_BF_EDGES)]
    edges: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    /// Bayes factor for data far from both hypotheses.
    ExtremeBf {
        #[arg(long, default_value_t = 3.87)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
        xbar: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Two thresholds supporting two different alternatives.
    GammaDependence {
        #[arg(long, default_value_t = 3.87)]
        gamma1: f64,
        #[arg(long, default_value_t = 20.0)]
        gamma2: f64,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Pooling two experiments changes the supported alternative.
    Pooling {
        #[arg(long, default_value_t = 3.87)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

/// Result of a command before rendering.
enum Output {
    Bound(fpbound::BoundTable),
    Johnson { rows: Vec<fpbound::JohnsonTableRow>, footer: String },
    Report(Report),
}

/// A non-tabular result: text for people, CSV and JSON for machines.
struct Report {
    text: String,
    csv_header: Vec<String>,
    csv_rows: Vec<Vec<String>>,
    json: String,
}

impl Report {
    fn new<T: Serialize>(
        text: String,
        csv_header: &[&str],
        csv_rows: Vec<Vec<String>>,
        json: &T,
    ) -> Result<Self, CliError> {
        Ok(Report {
            text,
            csv_header: csv_header.iter().map(|s| s.to_string()).collect(),
            csv_rows,
            json: render::to_json(json)?,
        })
    }
}

fn cells(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

/// Runs the program on `argv` (including the program name), printing to the
/// process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match execute(argv.into_iter().map(Into::into).collect(), out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(argv: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let argv = config::merge(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{}", e.render()).map_err(|e| CliError::internal(e.to_string()))
            } else {
                let _ = write!(err, "{}", e.render());
                Err(CliError::usage("invalid command line"))
            };
        }
    };
    let output = dispatch(cli.command)?;
    let bytes = render(output, cli.format)?;
    match cli.out {
        Some(path) => {
            std::fs::write(&path, bytes).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => out.write_all(bytes.as_bytes()).map_err(|e| CliError::internal(e.to_string())),
    }
}

fn render(output: Output, fmt: OutputFormat) -> Result<String, CliError> {
    match output {
        Output::Bound(table) => render_table(TablePayload::Bound(&table), fmt),
        Output::Johnson { rows, footer } => {
            let mut s = render_table(TablePayload::Johnson(&rows), fmt)?;
            if fmt == OutputFormat::Text {
                s.push_str(&footer);
            }
            Ok(s)
        }
        Output::Report(report) => match fmt {
            OutputFormat::Text => Ok(report.text),
            OutputFormat::Csv => render::to_csv(&report.csv_header, &report.csv_rows),
            OutputFormat::Json => Ok(report.json),
            OutputFormat::Svg => Err(CliError::usage("svg output is only available for `table` and `johnson`")),
        },
    }
}

fn dispatch(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Bound { alpha, r } => bound(alpha, r),
        Command::Table { alphas, ratios } => Ok(Output::Bound(positivity::bound_table(&alphas, &ratios)?)),
        Command::MinRatio { alpha, target } => min_ratio(alpha, target),
        Command::Guide { alpha, targets } => guide(alpha, &targets),
        Command::Johnson { alpha, n, edges, check } => johnson(alpha, n, &edges, check),
        Command::Pvalue { n, xbar, alpha } => pvalue(n, xbar, alpha),
        Command::Threshold { alpha, n } => threshold(alpha, n),
        Command::Ci { n, xbar, level } => ci(n, xbar, level),
        Command::Simulate(args) => simulate(&args),
        Command::SimulateBh(args) => simulate_bh(&args),
        Command::Scenario(s) => scenario(s),
    }
}

fn bound(alpha: f64, r: f64) -> Result<Output, CliError> {
    let raw = positivity::fp_bound(alpha, r)?;
    let eta_max = positivity::eta_upper_bound(alpha, r)?.get();
    #[derive(Serialize)]
    struct Json {
        alpha: f64,
        r: f64,
        bound: f64,
        capped: f64,
        percent: String,
        eta_max: f64,
    }
    let capped = positivity::capped(raw);
    let percent = positivity::format_percent(raw);
    let text = format!(
        "alpha = {alpha}, r = {r}\n\
         bound on false positives among positives: {capped:.6} ({percent})\n\
         largest compatible fraction of true nulls: {eta_max:.6}\n"
    );
    let json = Json { alpha, r, bound: raw, capped, percent, eta_max };
    Ok(Output::Report(Report::new(
        text,
        &["alpha", "r", "bound", "capped", "eta_max"],
        vec![cells(&[alpha, r, raw, capped, eta_max])],
        &json,
    )?))
}

fn min_ratio(alpha: f64, target: f64) -> Result<Output, CliError> {
    let ratio = positivity::min_ratio_for_target(alpha, target)?.get();
    #[derive(Serialize)]
    struct Json {
        alpha: f64,
        target: f64,
        min_ratio: f64,
    }
    let text = format!(
        "alpha = {alpha}: a positivity ratio of at least {ratio:.6} keeps false positives at or below {} of positives\n",
        positivity::format_percent(target)
    );
    Ok(Output::Report(Report::new(
        text,
        &["alpha", "target", "min_ratio"],
        vec![cells(&[alpha, target, ratio])],
        &Json { alpha, target, min_ratio: ratio },
    )?))
}

fn guide(alpha: f64, targets: &[f64]) -> Result<Output, CliError> {
    let steps = positivity::guidance(alpha, targets)?;
    let mut rows = vec![vec!["target share".to_string(), "min ratio r".to_string()]];
    rows.extend(steps.iter().map(|s| vec![positivity::format_percent(s.target), render::sig(s.min_ratio.get(), 3)]));
    let text = format!(
        "alpha = {alpha}: with positivity ratio r at least the value shown, at most the target share of \
         positive results are false\n{}",
        render::align(&rows)
    );
    #[derive(Serialize)]
    struct Json<'a> {
        alpha: f64,
        steps: &'a [positivity::GuidanceStep],
    }
    Ok(Output::Report(Report::new(
        text,
        &["alpha", "target", "min_ratio"],
        steps.iter().map(|s| cells(&[alpha, s.target, s.min_ratio.get()])).collect(),
        &Json { alpha, steps: &steps },
    )?))
}

fn johnson(alpha: f64, n: u64, edges: &[f64], check: bool) -> Result<Output, CliError> {
    let rows = bayes::johnson_table(alpha, n, edges)?;
    let gamma = rows[0].interval.lo();
    let prior = BhPrior::umpbt(gamma, n)?;
    let mut footer = format!(
        "gamma = {}, mu = {}, P[BF >= gamma] = {}, P[H0 | BF >= gamma] = {}\n",
        render::sig(gamma, 6),
        render::sig(prior.mu(), 6),
        render::sig(bayes::positive_prob(&prior, gamma)?.get(), 4),
        render::sig(bayes::h0_given_bf_in(&prior, &BfInterval::at_least(gamma)?, QuadMethod::Ratio)?.get(), 4),
    );
    if check {
        let worst = rows
            .iter()
            .map(|row| {
                let quad = bayes::h0_given_bf_in(&prior, &row.interval, QuadMethod::Quadrature)?;
                Ok((quad.get() - row.prob_h0_given_bin.get()).abs())
            })
            .collect::<Result<Vec<f64>, fpbound::Error>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let _ = writeln!(footer, "largest ratio/quadrature difference in P[H0|E]: {worst:.2e}");
    }
    Ok(Output::Johnson { rows, footer })
}

fn pvalue(n: u64, xbar: f64, alpha: Option<f64>) -> Result<Output, CliError> {
    let s = SampleSummary::new(n, xbar)?;
    let p = ztest::p_value(&s).get();
    let decision =
        alpha.map(|a| -> Result<_, CliError> { Ok((a, GaussianZTest::new(a, n)?.decide(&s)?)) }).transpose()?;
    let mut text = format!("n = {n}, xbar = {xbar}, z = {:.6}\np-value: {}\n", s.z(), render::sig(p, 6));
    if let Some((a, outcome)) = decision {
        let _ = writeln!(text, "decision at alpha = {a}: {outcome}");
    }
    #[derive(Serialize)]
    struct Json {
        n: u64,
        xbar: f64,
        z: f64,
        p_value: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        decision: Option<ztest::TestOutcome>,
    }
    let mut row = vec![n.to_string(), xbar.to_string(), s.z().to_string(), p.to_string()];
    row.push(decision.map(|(a, _)| a.to_string()).unwrap_or_default());
    row.push(decision.map(|(_, o)| o.to_string()).unwrap_or_default());
    Ok(Output::Report(Report::new(
        text,
        &["n", "xbar", "z", "p_value", "alpha", "decision"],
        vec![row],
        &Json { n, xbar, z: s.z(), p_value: p, alpha: decision.map(|d| d.0), decision: decision.map(|d| d.1) },
    )?))
}

fn threshold(alpha: f64, n: u64) -> Result<Output, CliError> {
    let test = GaussianZTest::new(alpha, n)?;
    let (z, t) = (test.critical_z(), test.rejection_threshold());
    #[derive(Serialize)]
    struct Json {
        alpha: f64,
        n: u64,
        critical_z: f64,
        xbar_threshold: f64,
    }
    let text = format!("alpha = {alpha}, n = {n}: reject when z >= {z:.6}, i.e. sample mean >= {t:.6}\n");
    Ok(Output::Report(Report::new(
        text,
        &["alpha", "n", "critical_z", "xbar_threshold"],
        vec![vec![alpha.to_string(), n.to_string(), z.to_string(), t.to_string()]],
        &Json { alpha, n, critical_z: z, xbar_threshold: t },
    )?))
}

fn ci(n: u64, xbar: f64, level: f64) -> Result<Output, CliError> {
    let s = SampleSummary::new(n, xbar)?;
    let (lo, hi) = ztest::confidence_interval(&s, level)?;
    #[derive(Serialize)]
    struct Json {
        n: u64,
        xbar: f64,
        level: f64,
        lo: f64,
        hi: f64,
    }
    let text = format!("{}% confidence interval for the mean: [{lo:.6}, {hi:.6}]\n", level * 100.0);
    Ok(Output::Report(Report::new(
        text,
        &["n", "xbar", "level", "lo", "hi"],
        vec![vec![n.to_string(), xbar.to_string(), level.to_string(), lo.to_string(), hi.to_string()]],
        &Json { n, xbar, level, lo, hi },
    )?))
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_sig(v: Option<f64>) -> String {
    v.map(|v| render::sig(v, 5)).unwrap_or_else(|| "n/a".into())
}

fn simulate(args: &SimulateArgs) -> Result<Output, CliError> {
    let cfg = WorldConfig { k: args.k, eta: args.eta, mu_alt: args.mu, n: args.n, alpha: args.alpha, seed: args.seed };
    let report = montecarlo::simulate_world_with_workers(&cfg, args.workers)?;
    let analytic = montecarlo::analytic_rates(&cfg)?;
    let bound = match montecarlo::verify_bound(&report, cfg.alpha) {
        Ok(check) => Some(check),
        Err(fpbound::Error::DegenerateReport(_)) => None,
        Err(e) => return Err(e.into()),
    };

    #[derive(Serialize)]
    struct Json<'a> {
        config: &'a WorldConfig,
        k_positive: u64,
        tallies: montecarlo::Tallies,
        rates: montecarlo::Rates,
        stderr: montecarlo::StdErrors,
        /// `null` when no experiment came out positive.
        bound: Option<montecarlo::BoundCheck>,
        analytic: montecarlo::Rates,
    }
    let json = Json {
        config: &cfg,
        k_positive: report.k_positive,
        tallies: report.tallies,
        rates: report.rates,
        stderr: report.stderr,
        bound,
        analytic,
    };

    let t = &report.tallies;
    let mut text = format!(
        "k = {}, eta = {}, mu = {}, n = {}, alpha = {}, seed = {}\n\
         false positives {}, true negatives {}, true positives {}, false negatives {}\n\
         positivity ratio r:         {} (expected {})\n\
         false positives / positives: {} (expected {})\n\
         false positives / all:       {} (expected {})\n",
        cfg.k,
        cfg.eta,
        cfg.mu_alt,
        cfg.n,
        cfg.alpha,
        cfg.seed,
        t.fp,
        t.tn,
        t.tp,
        t.fn_,
        render::sig(report.rates.r, 5),
        render::sig(analytic.r, 5),
        opt_sig(report.rates.fp_among_positives),
        opt_sig(analytic.fp_among_positives),
        render::sig(report.rates.fp_among_all, 5),
        render::sig(analytic.fp_among_all, 5),
    );
    match bound {
        Some(b) => {
            let _ = writeln!(
                text,
                "bound at observed r:         {} ({})",
                render::sig(b.value, 5),
                if b.holds { "holds" } else { "VIOLATED" }
            );
        }
        None => text.push_str("bound: not applicable, no positive results\n"),
    }
    let row = vec![
        cfg.k.to_string(),
        report.k_positive.to_string(),
        t.fp.to_string(),
        t.tn.to_string(),
        t.tp.to_string(),
        t.fn_.to_string(),
        report.rates.r.to_string(),
        opt_cell(report.rates.fp_among_positives),
        report.rates.fp_among_all.to_string(),
        opt_cell(bound.map(|b| b.value)),
        bound.map(|b| b.holds.to_string()).unwrap_or_default(),
    ];
    Ok(Output::Report(Report::new(
        text,
        &["k", "k_positive", "fp", "tn", "tp", "fn", "r", "fp_among_positives", "fp_among_all", "bound", "holds"],
        vec![row],
        &json,
    )?))
}

fn simulate_bh(args: &SimulateBhArgs) -> Result<Output, CliError> {
    let gamma = bayes::snap_to_gamma_star(args.gamma, args.alpha)?;
    let prior = BhPrior::umpbt(gamma, args.n)?;
    let mut edges = args.edges.clone();
    if let Some(first) = edges.first_mut() {
        *first = bayes::snap_to_gamma_star(*first, args.alpha)?;
    }
    let cfg = BhWorldConfig { k: args.k, prior, gamma, bf_edges: edges.clone(), seed: args.seed };
    let (report, hist) = montecarlo::simulate_bh_with_workers(&cfg, args.workers)?;

    #[derive(Serialize)]
    struct Config {
        k: u64,
        gamma: f64,
        n: u64,
        mu: f64,
        seed: u64,
    }
    #[derive(Serialize)]
    struct Bin {
        bf_lo: f64,
        bf_hi: Option<f64>,
        count: u64,
        false_positives: u64,
        prob_bin: f64,
        prob_bin_expected: f64,
        fp_share: Option<f64>,
        fp_share_expected: Option<f64>,
    }
    #[derive(Serialize)]
    struct Expected {
        positive_prob: f64,
        false_positive_prob: f64,
        h0_given_positive: f64,
    }
    #[derive(Serialize)]
    struct Json {
        config: Config,
        k_positive: u64,
        tallies: montecarlo::Tallies,
        rates: montecarlo::Rates,
        stderr: montecarlo::StdErrors,
        expected: Expected,
        bins: Vec<Bin>,
    }

    let mut bins = Vec::with_capacity(edges.len());
    for (i, &lo) in edges.iter().enumerate() {
        let hi = edges.get(i + 1).copied().unwrap_or(f64::INFINITY);
        let interval = BfInterval::new(lo, hi)?;
        let count = hist.counts[i];
        let fps = hist.false_positives[i];
        bins.push(Bin {
            bf_lo: lo,
            bf_hi: hi.is_finite().then_some(hi),
            count,
            false_positives: fps,
            prob_bin: count as f64 / report.k as f64,
            prob_bin_expected: bayes::bin_prob(&prior, &interval).get(),
            fp_share: (count > 0).then(|| fps as f64 / count as f64),
            fp_share_expected: bayes::h0_given_bf_in(&prior, &interval, QuadMethod::Ratio).ok().map(|p| p.get()),
        });
    }
    let expected = Expected {
        positive_prob: bayes::positive_prob(&prior, gamma)?.get(),
        false_positive_prob: bayes::false_positive_prob(&prior, gamma)?.get(),
        h0_given_positive: bayes::h0_given_bf_in(&prior, &BfInterval::at_least(gamma)?, QuadMethod::Ratio)?.get(),
    };

    let mut text = format!(
        "k = {}, gamma = {}, n = {}, mu = {}, seed = {}\n\
         positive fraction:            {} (expected {})\n\
         false positives / positives:  {} (expected {})\n",
        cfg.k,
        render::sig(gamma, 6),
        args.n,
        render::sig(prior.mu(), 6),
        cfg.seed,
        render::sig(report.rates.r, 5),
        render::sig(expected.positive_prob, 5),
        opt_sig(report.rates.fp_among_positives),
        render::sig(expected.h0_given_positive, 5),
    );
    let mut table =
        vec![["Bayes factor", "count", "P[E]", "expected", "P[H0|E]", "expected"].map(String::from).to_vec()];
    for b in &bins {
        let label = match b.bf_hi {
            Some(hi) => format!("{} - {}", render::sig(b.bf_lo, 3), render::sig(hi, 3)),
            None => format!(">= {}", render::sig(b.bf_lo, 3)),
        };
        table.push(vec![
            label,
            b.count.to_string(),
            render::sig(b.prob_bin, 4),
            render::sig(b.prob_bin_expected, 4),
            opt_sig(b.fp_share),
            opt_sig(b.fp_share_expected),
        ]);
    }
    text.push_str(&render::align(&table));

    let csv_rows = bins
        .iter()
        .map(|b| {
            vec![
                b.bf_lo.to_string(),
                b.bf_hi.unwrap_or(f64::INFINITY).to_string(),
                b.count.to_string(),
                b.false_positives.to_string(),
                b.prob_bin.to_string(),
                b.prob_bin_expected.to_string(),
                opt_cell(b.fp_share),
                opt_cell(b.fp_share_expected),
            ]
        })
        .collect();
    let json = Json {
        config: Config { k: cfg.k, gamma, n: args.n, mu: prior.mu(), seed: cfg.seed },
        k_positive: report.k_positive,
        tallies: report.tallies,
        rates: report.rates,
        stderr: report.stderr,
        expected,
        bins,
    };
    Ok(Output::Report(Report::new(
        text,
        &[
            "bf_lo",
            "bf_hi",
            "count",
            "false_positives",
            "prob_bin",
            "prob_bin_expected",
            "fp_share",
            "fp_share_expected",
        ],
        csv_rows,
        &json,
    )?))
}

fn scenario(cmd: ScenarioCommand) -> Result<Output, CliError> {
    let report = match cmd {
        ScenarioCommand::ExtremeBf { gamma, n, xbar, alpha } => {
            scenarios::extreme_bf(bayes::snap_to_gamma_star(gamma, alpha)?, n, xbar)?
        }
        ScenarioCommand::GammaDependence { gamma1, gamma2, n, alpha } => scenarios::gamma_dependence(
            bayes::snap_to_gamma_star(gamma1, alpha)?,
            bayes::snap_to_gamma_star(gamma2, alpha)?,
            n,
        )?,
        ScenarioCommand::Pooling { gamma, n, alpha } => {
            scenarios::pooling_inconsistency(bayes::snap_to_gamma_star(gamma, alpha)?, n)?
        }
    };
    scenario_output(&report)
}

fn scenario_output(report: &ScenarioReport) -> Result<Output, CliError> {
    let mut text = format!("scenario {}\n", report.scenario_id.as_str());
    let rows: Vec<Vec<String>> = report
        .inputs
        .iter()
        .chain(&report.findings)
        .map(|f| {
            let value = if f.value.fract() == 0.0 && f.value.abs() < 1e15 {
                format!("{}", f.value)
            } else {
                render::sig(f.value, 6)
            };
            vec![format!("{}:", f.label), value]
        })
        .collect();
    text.push_str(&render::align(&rows));
    text.push_str(&report.narrative);
    text.push('\n');
    let csv_rows = report
        .inputs
        .iter()
        .map(|f| vec!["input".to_string(), f.label.clone(), f.value.to_string()])
        .chain(report.findings.iter().map(|f| vec!["finding".to_string(), f.label.clone(), f.value.to_string()]))
        .collect();
    Ok(Output::Report(Report::new(text, &["kind", "label", "value"], csv_rows, report)?))
}
