//! `amo`: numerical experiments for quasi-periodic Schrödinger operators.

use std::io::Write;
use std::process::ExitCode;

use amo_core::arithmetic::{continued_fraction, diophantine_constants, theta_resonances};
use amo_core::experiments::spectrum::{REFERENCE_K, REFERENCE_THETA_GRID};
use amo_core::experiments::{
    box_eigenproblem, craig_simon_check, decay_rate_fit_with_gamma, phase_sweep, verify_suite, SweepConfig,
    ToleranceConfig, SUITES, SWEEP_HEADER,
};
use amo_core::green::{classify_point, green_cramer_signed, RegularityConfig};
use amo_core::lyapunov::lyapunov_estimate;
use amo_core::report::{report_document, to_csv, to_json_bytes};
use amo_core::{Check, Error, IntervalZ, OperatorParams, Verdict, GOLDEN_OMEGA, SQRT2_MINUS_1};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "amo", version, about = "Almost Mathieu operator experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Coupling constant.
    #[arg(long, global = true, default_value_t = 3.0)]
    lambda: f64,
    /// Frequency: a number in (0, 1), `golden` or `sqrt2m1`.
    #[arg(long, global = true, default_value = "golden", value_parser = parse_omega)]
    omega: f64,
    #[arg(long, global = true, default_value_t = 0.3)]
    theta: f64,
    /// A single energy `E` or a grid `a:b:n`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_energy)]
    energy: Option<EnergySpec>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "AMO_THREADS")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
enum EnergySpec {
    Single(f64),
    Grid { a: f64, b: f64, n: usize },
}

impl EnergySpec {
    fn points(&self) -> Vec<f64> {
        match *self {
            EnergySpec::Single(e) => vec![e],
            EnergySpec::Grid { a, b, n: 1 } => vec![0.5 * (a + b)],
            EnergySpec::Grid { a, b, n } => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    fn to_json(&self) -> Value {
        match *self {
            EnergySpec::Single(e) => json!(e),
            EnergySpec::Grid { a, b, n } => json!({"from": a, "to": b, "points": n}),
        }
    }
}

fn parse_omega(s: &str) -> Result<f64, String> {
    let w = match s {
        "golden" => GOLDEN_OMEGA,
        "sqrt2m1" => SQRT2_MINUS_1,
        _ => s.parse::<f64>().map_err(|e| format!("{s}: {e}"))?,
    };
    if w > 0.0 && w < 1.0 {
        Ok(w)
    } else {
        Err(format!("omega must lie in (0, 1), got {w}"))
    }
}

fn parse_energy(s: &str) -> Result<EnergySpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t}: {e}"));
    match parts.as_slice() {
        [e] => Ok(EnergySpec::Single(num(e)?)),
        [a, b, n] => {
            let n: usize = n.parse().map_err(|e| format!("{n}: {e}"))?;
            if n == 0 {
                return Err("energy grid needs at least one point".into());
            }
            Ok(EnergySpec::Grid { a: num(a)?, b: num(b)?, n })
        }
        _ => Err(format!("expected `E` or `a:b:n`, got {s}")),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `a:b`, got {s}"))?;
    let a: usize = a.parse().map_err(|e| format!("{a}: {e}"))?;
    let b: usize = b.parse().map_err(|e| format!("{b}: {e}"))?;
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("empty range {s}"))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lyapunov exponents on an energy grid.
    Lyapunov {
        /// Largest product length on the doubling ladder.
        #[arg(long, default_value_t = 1024)]
        k: usize,
        #[arg(long, default_value_t = 1024)]
        theta_grid: usize,
    },
    /// Green's function edge entries on an interval, optionally with a regularity test.
    Green {
        #[arg(long, default_value_t = 0)]
        x1: i64,
        #[arg(long, default_value_t = 50)]
        len: usize,
        /// Site `y`; defaults to the interval midpoint.
        #[arg(long)]
        site: Option<i64>,
        /// Decay rate `m` for the `(m, len)`-regularity test at the site.
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Box eigenvectors and their exponential decay rates against the Lyapunov exponent.
    Localize {
        /// Half-width `N` of the box `[−N, N]`.
        #[arg(long = "box", default_value_t = 1500)]
        n_half: usize,
        #[arg(long, default_value = "100:1000", value_parser = parse_range)]
        fit_range: (usize, usize),
        /// Largest number of eigenpairs to fit.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
    },
    /// Lyapunov exponents and eigenvector statistics across coupling constants.
    Sweep {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 3.0, 4.0])]
        lambdas: Vec<f64>,
        #[arg(long = "box", default_value_t = 500)]
        n_half: usize,
        #[arg(long, default_value = "20:200", value_parser = parse_range)]
        fit_range: (usize, usize),
    },
    /// Scales `k` at which the phase is resonant.
    Resonances {
        #[arg(long, default_value_t = 1.01)]
        r: f64,
        #[arg(long, default_value_t = 100_000)]
        k_max: u64,
    },
    /// Continued fraction and Diophantine constant of the frequency.
    Diophantine {
        #[arg(long, default_value_t = 1.01)]
        r: f64,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        j_max: u64,
    },
    /// Run a seeded verification suite, or `all`.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Scale `k` for the scan suites.
        #[arg(long, default_value_t = 50)]
        k: usize,
    },
}

struct Output {
    params: Value,
    results: Vec<Value>,
    checks: Vec<Check>,
    csv: Option<(Vec<&'static str>, Vec<Vec<f64>>)>,
    failed: bool,
}

impl Output {
    fn new(params: Value) -> Self {
        Self { params, results: Vec::new(), checks: Vec::new(), csv: None, failed: false }
    }
}

fn common_params(c: &Common) -> Value {
    json!({
        "lambda": c.lambda,
        "omega": c.omega,
        "theta": c.theta,
        "energy": c.energy.as_ref().map(EnergySpec::to_json),
        "seed": c.seed,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn energies(c: &Common, default: EnergySpec) -> Vec<f64> {
    c.energy.clone().unwrap_or(default).points()
}

fn run(cli: &Cli) -> amo_core::Result<(&'static str, Output)> {
    let c = &cli.common;
    let params = OperatorParams::almost_mathieu(c.lambda, c.omega, c.theta);
    let base = common_params(c);
    match &cli.command {
        Command::Lyapunov { k, theta_grid } => {
            let mut out = Output::new(merge(base, json!({"k": k, "theta_grid": theta_grid})));
            let mut rows = Vec::new();
            for e in energies(c, EnergySpec::Grid { a: -4.0, b: 4.0, n: 17 }) {
                let est = lyapunov_estimate(&params, e, *k, *theta_grid);
                rows.push(vec![e, est.gamma]);
                out.results.push(serde_json::to_value(&est).expect("serialisable"));
            }
            out.csv = Some((vec!["energy", "gamma"], rows));
            Ok(("lyapunov", out))
        }
        Command::Green { x1, len, site, rate } => {
            let interval = IntervalZ::with_len(*x1, *len);
            let y = site.unwrap_or(x1 + (*len as i64 - 1) / 2);
            if !interval.contains(y) {
                return Err(Error::Precondition(format!("site {y} outside {interval}")));
            }
            let mut out = Output::new(merge(base, json!({"x1": x1, "len": len, "site": y, "rate": rate})));
            let mut rows = Vec::new();
            for e in energies(c, EnergySpec::Single(0.0)) {
                let mut row = json!({"energy": e, "interval": interval, "site": y});
                match green_cramer_signed(&params, interval, e, y) {
                    Ok((left, right)) => {
                        row["ln_abs_g_left"] = json!(left.ln_abs);
                        row["sign_g_left"] = json!(left.sign);
                        row["ln_abs_g_right"] = json!(right.ln_abs);
                        row["sign_g_right"] = json!(right.sign);
                        rows.push(vec![e, left.ln_abs, right.ln_abs]);
                    }
                    Err(Error::SingularEnergy { .. }) => row["singular_energy"] = json!(true),
                    Err(err) => return Err(err),
                }
                if let Some(m) = rate {
                    let verdict = classify_point(&params, e, y, *m, *len, &RegularityConfig::default());
                    row["regularity"] = match verdict {
                        Ok(v) => serde_json::to_value(v).expect("serialisable"),
                        Err(err) => json!({"error": err.to_string()}),
                    };
                }
                out.results.push(row);
            }
            out.csv = Some((vec!["energy", "ln_abs_g_left", "ln_abs_g_right"], rows));
            Ok(("green", out))
        }
        Command::Localize { n_half, fit_range, pairs } => {
            let window = match c.energy {
                Some(EnergySpec::Grid { a, b, .. }) => (a, b),
                Some(EnergySpec::Single(e)) => (e - 1e-9, e + 1e-9),
                None => (-0.5, 0.5),
            };
            let mut out = Output::new(merge(
                base,
                json!({"box": n_half, "fit_range": fit_range, "pairs": pairs, "window": window}),
            ));
            localize(&params, *n_half, window, *fit_range, *pairs, &mut out)?;
            Ok(("localize", out))
        }
        Command::Sweep { lambdas, n_half, fit_range } => {
            let cfg = SweepConfig { n_half: *n_half, fit_range: *fit_range, ..SweepConfig::default() };
            let grid = energies(c, EnergySpec::Grid { a: -3.0, b: 3.0, n: 13 });
            let rows = phase_sweep(c.omega, c.theta, lambdas, &grid, &cfg)?;
            let mut out = Output::new(merge(base, json!({"lambdas": lambdas, "box": n_half, "fit_range": fit_range})));
            out.results = rows.iter().map(|r| serde_json::to_value(r).expect("serialisable")).collect();
            out.csv = Some((SWEEP_HEADER.to_vec(), rows.iter().map(|r| r.to_vec()).collect()));
            Ok(("sweep", out))
        }
        Command::Resonances { r, k_max } => {
            let rep = theta_resonances(c.theta, c.omega, *r, *k_max);
            let mut out = Output::new(merge(base, json!({"r": r, "k_max": k_max})));
            out.csv = Some((vec!["k"], rep.resonant_k.iter().map(|k| vec![*k as f64]).collect()));
            out.results.push(serde_json::to_value(&rep).expect("serialisable"));
            Ok(("resonances", out))
        }
        Command::Diophantine { r, depth, j_max } => {
            let cf = continued_fraction(c.omega, *depth);
            let mut out = Output::new(merge(base, json!({"r": r, "depth": depth, "j_max": j_max})));
            out.csv = Some((
                vec!["a", "p", "q"],
                cf.partial_quotients
                    .iter()
                    .zip(&cf.convergents)
                    .map(|(a, (p, q))| vec![*a as f64, *p as f64, *q as f64])
                    .collect(),
            ));
            out.results.push(serde_json::to_value(&cf).expect("serialisable"));
            match diophantine_constants(c.omega, *r, *j_max) {
                Ok(cert) => out.results.push(serde_json::to_value(&cert).expect("serialisable")),
                Err(Error::NotDiophantine { j }) => out.results.push(json!({"not_diophantine_at": j})),
                Err(err) => return Err(err),
            }
            Ok(("diophantine", out))
        }
        Command::Verify { suite, trials, k } => {
            let cfg = ToleranceConfig {
                seed: c.seed,
                trials: *trials,
                lambda: c.lambda,
                omega: c.omega,
                theta: c.theta,
                energy: match c.energy {
                    Some(EnergySpec::Single(e)) => e,
                    _ => 0.0,
                },
                k: *k,
                ..ToleranceConfig::default()
            };
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut out = Output::new(merge(
                base,
                json!({"suite": suite, "trials": trials, "k": k, "config": serde_json::to_value(&cfg).expect("serialisable")}),
            ));
            let mut rows = Vec::new();
            for name in names {
                let report = verify_suite(name, &cfg)?;
                out.failed |= report.verdict == Verdict::Fail;
                for check in report.all_checks() {
                    rows.push(vec![check.measured, check.bound, f64::from(u8::from(check.passed))]);
                    out.checks.push(Check { name: format!("{name}/{}", check.name), ..check });
                }
                out.results.push(serde_json::to_value(&report).expect("serialisable"));
            }
            out.csv = Some((vec!["measured", "bound", "passed"], rows));
            Ok(("verify", out))
        }
    }
}

fn localize(
    params: &OperatorParams,
    n_half: usize,
    window: (f64, f64),
    fit_range: (usize, usize),
    pairs: usize,
    out: &mut Output,
) -> amo_core::Result<()> {
    use rayon::prelude::*;
    let spectrum = box_eigenproblem(params, n_half, Some(window))?;
    // states centred inside the fit range carry their weight in it
    let mut chosen: Vec<f64> = spectrum
        .pairs
        .iter()
        .filter(|p| (p.center.unsigned_abs() as usize) < fit_range.0)
        .map(|p| p.energy)
        .collect();
    let mid = 0.5 * (window.0 + window.1);
    chosen.sort_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()).then(a.total_cmp(b)));
    chosen.truncate(pairs);
    chosen.sort_by(f64::total_cmp);
    let gammas: Vec<f64> = chosen
        .par_iter()
        .map(|e| lyapunov_estimate(params, *e, REFERENCE_K, REFERENCE_THETA_GRID).gamma)
        .collect();
    let mut rows = Vec::new();
    for (e, gamma) in chosen.iter().zip(gammas) {
        let fit = decay_rate_fit_with_gamma(&spectrum, *e, fit_range, gamma)?;
        let cs = craig_simon_check(&spectrum, *e, fit_range, gamma)?;
        let tol = 0.1 * gamma;
        out.checks.push(Check::at_most(format!("slope_vs_gamma@{e:.6}"), (fit.slope + gamma).abs(), tol));
        out.checks.push(Check::at_most(
            format!("two_sided@{e:.6}"),
            (fit.left_slope - fit.right_slope).abs(),
            tol,
        ));
        out.checks.push(Check::at_least(format!("lower_limit@{e:.6}"), cs.measured, cs.bound));
        rows.push(vec![fit.energy, fit.slope, fit.left_slope, fit.right_slope, gamma]);
        out.results.push(json!({"fit": fit, "lower_limit": cs}));
    }
    out.checks.push(Check::at_least("fitted_pairs", chosen.len() as f64, pairs.min(10) as f64));
    out.results.push(json!({
        "eigenvalues": spectrum.eigenvalues.len(),
        "window_pairs": spectrum.pairs.len(),
        "rejected_by_residual": spectrum.rejected,
    }));
    out.failed = out.checks.iter().any(|c| !c.passed);
    out.csv = Some((vec!["energy", "slope", "left_slope", "right_slope", "gamma"], rows));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("amo: {err}");
            return ExitCode::from(2);
        }
    }
    let (command, out) = match run(&cli) {
        Ok(v) => v,
        Err(err @ Error::UnknownSuite(_)) => {
            eprintln!("amo: {err}; known suites: all, {}", SUITES.join(", "));
            return ExitCode::from(2);
        }
        Err(err) => {
            eprintln!("amo: {err}");
            return ExitCode::FAILURE;
        }
    };
    let bytes = match (cli.common.out, &out.csv) {
        (OutFormat::Csv, Some((header, rows))) => to_csv(header, rows).into_bytes(),
        _ => to_json_bytes(&report_document(command, out.params, out.results, &out.checks)),
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = stdout.write_all(&bytes).and_then(|_| stdout.flush()) {
        eprintln!("amo: {err}");
        return ExitCode::FAILURE;
    }
    if out.failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
