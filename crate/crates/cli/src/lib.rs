//! Command-line front end for `ghzcomm`.
//!
//! Every subcommand validates its configuration, computes a report, renders it
//! completely into memory, and only then writes it out. A validation failure
//! therefore never leaves partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use ghzcomm::analysis::{noise_sweep, table1_reproduce, MAX_THRESHOLD_SENDERS};
use ghzcomm::checks::{run_invariant_suite, SuiteOptions};
use ghzcomm::quantum::{ghz_property_report, run_protocol_exact, run_protocol_sampled, GhzSign, MAX_PROPERTY_QUBITS};
use ghzcomm::report::{ClassicalReport, QuantumReport, SweepReport, Table1Dto, VerifyReport};
use ghzcomm::strategy::{classical_optimum, exhaustive_search_cc2, MAX_SEARCH_SENDERS};
use ghzcomm::task::{MAX_SENDERS, MIN_SENDERS};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// An inclusive noise grid `start:stop:steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let i = i as f64;
                // Weighted form so both endpoints come out exactly.
                (self.start * (last - i) + self.stop * i) / last
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts[..] else {
            return Err(format!("grid `{s}` must have the form start:stop:steps"));
        };
        let start: f64 = start.trim().parse().map_err(|_| format!("bad grid start `{start}`"))?;
        let stop: f64 = stop.trim().parse().map_err(|_| format!("bad grid stop `{stop}`"))?;
        let steps: usize = steps.trim().parse().map_err(|_| format!("bad grid step count `{steps}`"))?;
        for p in [start, stop] {
            check_probability(p)?;
        }
        if steps == 0 {
            return Err("grid needs at least one step".into());
        }
        if start > stop {
            return Err(format!("grid start {start} exceeds stop {stop}"));
        }
        if steps == 1 && start != stop {
            return Err("a one-point grid needs start equal to stop".into());
        }
        Ok(Self { start, stop, steps })
    }
}

fn check_probability(p: f64) -> Result<f64, String> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("noise parameter {p} outside [0, 1]"))
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    check_probability(p)
}

#[derive(Debug, Parser)]
#[command(name = "ghzcomm", version, about = "GHZ-assisted communication complexity experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    pub format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for the searches and sampling. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and sampled success of the entanglement-assisted protocol.
    Quantum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0, value_parser = parse_probability)]
        p: f64,
        /// Monte-Carlo shots; 0 skips sampling.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact classical optimum with one-bit messages.
    Classical {
        #[arg(long)]
        n: usize,
    },
    /// Quantum success, advantage and entanglement class over a noise grid.
    Sweep {
        #[arg(long)]
        n: usize,
        /// Inclusive grid `start:stop:steps`.
        #[arg(long, conflicts_with = "p")]
        p_grid: Option<Grid>,
        /// A single noise value.
        #[arg(long, value_parser = parse_probability)]
        p: Option<f64>,
    },
    /// Reproduces the 8x8 even-encoding table for two senders.
    Table1,
    /// Runs the invariant suite.
    Verify {
        /// Also print the GHZ phase table for this many qubits.
        #[arg(long)]
        ghz_k: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// A rendered report plus the exit status it implies.
struct Rendered {
    text: String,
    status: u8,
    diagnostics: Vec<String>,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self {
            text,
            status: EXIT_OK,
            diagnostics: Vec::new(),
        }
    }
}

fn check_range(what: &str, value: usize, min: usize, max: usize) -> Result<(), String> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(format!("{what} must be between {min} and {max}, got {value}"))
    }
}

/// Checks everything that can be checked without computing.
pub fn validate(cli: &Cli) -> Result<(), String> {
    if cli.threads == Some(0) {
        return Err("--threads must be at least 1".into());
    }
    match &cli.command {
        Command::Quantum { n, p, .. } => {
            check_range("--n", *n, MIN_SENDERS, MAX_SENDERS)?;
            check_probability(*p)?;
        }
        Command::Classical { n } => check_range("--n", *n, MIN_SENDERS, MAX_SEARCH_SENDERS)?,
        Command::Sweep { n, p_grid, p } => {
            check_range("--n", *n, MIN_SENDERS, MAX_THRESHOLD_SENDERS)?;
            if p_grid.is_none() && p.is_none() {
                return Err("sweep needs --p-grid or --p".into());
            }
        }
        Command::Table1 => {}
        Command::Verify { ghz_k, .. } => {
            if let Some(k) = ghz_k {
                check_range("--ghz-k", *k, 1, MAX_PROPERTY_QUBITS)?;
            }
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn quantum(n: usize, p: f64, shots: u64, seed: u64, format: Format) -> Result<Rendered, String> {
    let exact = run_protocol_exact(n, p).map_err(|e| e.to_string())?;
    let sampled = if shots > 0 {
        Some(run_protocol_sampled(n, p, shots, seed).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let report = QuantumReport::new(n, p, exact, sampled);
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let s = report.sampled.as_ref();
            let opt = |f: &dyn Fn(&ghzcomm::quantum::SampledEstimate) -> String| s.map(f).unwrap_or_default();
            csv_table(
                &["n", "p", "exact_success", "shots", "seed", "successes", "sampled_mean", "std_error"],
                vec![vec![
                    n.to_string(),
                    p.to_string(),
                    exact.to_string(),
                    shots.to_string(),
                    opt(&|e| e.seed.to_string()),
                    opt(&|e| e.successes.to_string()),
                    opt(&|e| e.mean.to_string()),
                    opt(&|e| e.std_error.to_string()),
                ]],
            )?
        }
        Format::Pretty => {
            let mut t = format!("n = {n}, p = {p}\nexact success: {exact}\n");
            if let Some(e) = &report.sampled {
                let _ = writeln!(
                    t,
                    "sampled: {} ± {} ({} of {} shots, seed {})",
                    e.mean, e.std_error, e.successes, e.shots, e.seed
                );
            }
            t
        }
    };
    Ok(Rendered::ok(text))
}

fn classical(n: usize, format: Format) -> Result<Rendered, String> {
    let report = if n == 2 {
        ClassicalReport::new(n, "all-strategies", &exhaustive_search_cc2(false))
    } else {
        let search = classical_optimum(n).map_err(|e| e.to_string())?;
        ClassicalReport::new(n, "even-encodings-majority-decoding", &search)
    }
    .map_err(|e| e.to_string())?;
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => csv_table(
            &[
                "n",
                "search",
                "optimum",
                "optimum_decimal",
                "perfect_strategy_found",
                "strategies_examined",
                "optimal_count",
                "lower_bound",
                "upper_bound",
            ],
            vec![vec![
                n.to_string(),
                report.search.clone(),
                report.optimum.fraction.clone(),
                report.optimum.decimal.to_string(),
                report.perfect_strategy_found.to_string(),
                report.strategies_examined.to_string(),
                report.optimal_count.to_string(),
                report.lower_bound.fraction.clone(),
                report.upper_bound.fraction.clone(),
            ]],
        )?,
        Format::Pretty => {
            let mut t = String::new();
            let _ = writeln!(t, "n = {n} ({})", report.search);
            let _ = writeln!(t, "optimum: {} ({})", report.optimum.fraction, report.optimum.decimal);
            let _ = writeln!(t, "perfect strategy found: {}", report.perfect_strategy_found);
            let _ = writeln!(
                t,
                "strategies examined: {}, optimal: {}",
                report.strategies_examined, report.optimal_count
            );
            let _ = writeln!(
                t,
                "bounds: {} <= optimum <= {}",
                report.lower_bound.fraction, report.upper_bound.fraction
            );
            let shown = report.witnesses.len().min(8);
            let _ = writeln!(t, "witnesses ({} kept, first {shown}):", report.witnesses.len());
            for w in &report.witnesses[..shown] {
                let enc: Vec<String> = w.encodings.iter().map(|m| format!("g^{m}")).collect();
                match w.decoders {
                    Some([d0, d1]) => {
                        let _ = writeln!(t, "  E = ({}), D0 = g^{d0}, D1 = g^{d1}", enc.join(", "));
                    }
                    None => {
                        let _ = writeln!(t, "  E = ({}), D0 = {}, D1 = {}", enc.join(", "), w.tables[0], w.tables[1]);
                    }
                }
            }
            t
        }
    };
    Ok(Rendered::ok(text))
}

fn sweep(n: usize, grid: Vec<f64>, format: Format) -> Result<Rendered, String> {
    let rows = noise_sweep(n, &grid).map_err(|e| e.to_string())?;
    let report = SweepReport::new(n, &rows).map_err(|e| e.to_string())?;
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => csv_table(
            &["n", "p", "quantum_success", "classical_upper", "advantage", "entanglement_class"],
            report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.p.to_string(),
                        r.quantum_success.to_string(),
                        r.classical_upper.fraction.clone(),
                        r.advantage.to_string(),
                        r.entanglement_class.clone(),
                    ]
                })
                .collect(),
        )?,
        Format::Pretty => {
            let mut t = format!(
                "n = {n}; genuine below p = {}, fully separable from p = {}\n",
                report.genuine_threshold.fraction, report.full_separable_threshold.fraction
            );
            let _ = writeln!(t, "{:>8} {:>10} {:>9} {:>11}  class", "p", "P_Q", "advantage", "vs-optimum");
            for r in &report.rows {
                let vs = r.advantage_vs_optimum.map_or("-".to_string(), |b| b.to_string());
                let _ = writeln!(
                    t,
                    "{:>8} {:>10} {:>9} {:>11}  {}",
                    r.p, r.quantum_success, r.advantage, vs, r.entanglement_class
                );
            }
            t
        }
    };
    Ok(Rendered::ok(text))
}

fn table1(format: Format) -> Result<Rendered, String> {
    let table = table1_reproduce().map_err(|e| e.to_string())?;
    let dto = Table1Dto::from(&table);
    let text = match format {
        Format::Json => json(&dto)?,
        Format::Csv => csv_table(
            &["e1", "e2", "d0", "d1", "success", "expected", "highlight", "matches"],
            dto.rows
                .iter()
                .flatten()
                .map(|c| {
                    vec![
                        c.e1.to_string(),
                        c.e2.to_string(),
                        c.d0.to_string(),
                        c.d1.to_string(),
                        c.success.fraction.clone(),
                        c.expected.fraction.clone(),
                        c.highlight.to_string(),
                        c.matches.to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Pretty => {
            let mut t = String::from("rows E1, columns E2; cell = success [D0,D1], * = 3/4\n       ");
            for m in &dto.order {
                let _ = write!(t, "{:>14}", format!("g^{m}"));
            }
            t.push('\n');
            for (m, row) in dto.order.iter().zip(&dto.rows) {
                let _ = write!(t, "{:>7}", format!("g^{m}"));
                for c in row {
                    let mark = if c.highlight { "*" } else { " " };
                    let _ = write!(t, "{:>14}", format!("{}{mark}[{},{}]", c.success.fraction, c.d0, c.d1));
                }
                t.push('\n');
            }
            let _ = writeln!(t, "all cells match: {}", dto.all_match);
            t
        }
    };
    let diagnostics: Vec<String> = table
        .mismatches()
        .iter()
        .map(|c| {
            format!(
                "mismatch at (g^{}, g^{}): computed {}, expected {}",
                c.e1.index(),
                c.e2.index(),
                c.success,
                c.expected
            )
        })
        .collect();
    Ok(Rendered {
        text,
        status: if diagnostics.is_empty() { EXIT_OK } else { EXIT_MISMATCH },
        diagnostics,
    })
}

fn sign(s: Option<GhzSign>) -> &'static str {
    match s {
        Some(GhzSign::Plus) => "G+",
        Some(GhzSign::Minus) => "G-",
        None => "none",
    }
}

fn phase((re, im): (f64, f64)) -> String {
    // Phases are ±1 or ±i; print them symbolically when they are.
    let close = |a: f64, b: f64| (a - b).abs() < 1e-10;
    match () {
        _ if close(re, 1.0) && close(im, 0.0) => "+1".into(),
        _ if close(re, -1.0) && close(im, 0.0) => "-1".into(),
        _ if close(re, 0.0) && close(im, 1.0) => "+i".into(),
        _ if close(re, 0.0) && close(im, -1.0) => "-i".into(),
        _ => format!("{re}{im:+}i"),
    }
}

fn verify(ghz_k: Option<usize>, inject_fault: bool, format: Format) -> Result<Rendered, String> {
    let checks = run_invariant_suite(SuiteOptions { inject_fault });
    let ghz_table = ghz_k
        .map(|k| ghz_property_report(k).map_err(|e| e.to_string()))
        .transpose()?;
    let report = VerifyReport::new(checks, ghz_table);
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut t = csv_table(
                &["name", "passed", "detail"],
                report
                    .checks
                    .iter()
                    .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                    .collect(),
            )?;
            if let Some(rows) = &report.ghz_table {
                // Second table, separated by a blank line.
                t.push('\n');
                t.push_str(&csv_table(
                    &["setting", "y_count", "observed_image", "observed_phase", "expected_image", "expected_phase", "matches"],
                    rows.iter()
                        .map(|r| {
                            vec![
                                r.setting.to_string(),
                                r.y_count.to_string(),
                                sign(r.observed_image).into(),
                                phase(r.observed_phase),
                                sign(Some(r.expected_image)).into(),
                                phase(r.expected_phase),
                                r.matches.to_string(),
                            ]
                        })
                        .collect(),
                )?);
            }
            t
        }
        Format::Pretty => {
            let mut t = String::new();
            if let Some(rows) = &report.ghz_table {
                let _ = writeln!(t, "GHZ phase table (K = {}):", ghz_k.unwrap_or_default());
                for r in rows {
                    let _ = writeln!(
                        t,
                        "  {}  k={}  -> {} {}  (expected {} {})  {}",
                        r.setting,
                        r.y_count,
                        phase(r.observed_phase),
                        sign(r.observed_image),
                        phase(r.expected_phase),
                        sign(Some(r.expected_image)),
                        if r.matches { "ok" } else { "MISMATCH" }
                    );
                }
            }
            for c in &report.checks {
                let _ = writeln!(t, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let _ = writeln!(t, "{}", if report.passed { "all checks passed" } else { "some checks failed" });
            t
        }
    };
    let mut diagnostics: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("failed check {}: {}", c.name, c.detail))
        .collect();
    if let Some(rows) = &report.ghz_table {
        diagnostics.extend(rows.iter().filter(|r| !r.matches).map(|r| format!("phase mismatch for {}", r.setting)));
    }
    Ok(Rendered {
        text,
        status: if diagnostics.is_empty() { EXIT_OK } else { EXIT_MISMATCH },
        diagnostics,
    })
}

fn render(cli: &Cli) -> Result<Rendered, String> {
    match &cli.command {
        Command::Quantum { n, p, shots, seed } => quantum(*n, *p, *shots, *seed, cli.format),
        Command::Classical { n } => classical(*n, cli.format),
        Command::Sweep { n, p_grid, p } => {
            let grid = match (p_grid, p) {
                (Some(g), _) => g.points(),
                (None, Some(p)) => vec![*p],
                (None, None) => unreachable!("validated"),
            };
            sweep(*n, grid, cli.format)
        }
        Command::Table1 => table1(cli.format),
        Command::Verify { ghz_k, inject_fault } => verify(*ghz_k, *inject_fault, cli.format),
    }
}

/// Validates, computes and renders, returning the text and the exit status.
/// Diagnostics go to `err`; nothing is written to `out` on validation failure.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Err(msg) = validate(cli) {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_VALIDATION;
    }
    let rendered = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| render(cli)),
            Err(e) => Err(format!("cannot start thread pool: {e}")),
        },
        None => render(cli),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_VALIDATION;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &rendered.text),
        None => out.write_all(rendered.text.as_bytes()).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_VALIDATION;
    }
    for d in &rendered.diagnostics {
        let _ = writeln!(err, "{d}");
    }
    rendered.status
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let status = execute(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g: Grid = "0:1:11".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[10], 1.0);
        assert_eq!(pts[5], 0.5);
        assert_eq!(pts[3], 0.3);
    }

    #[test]
    fn one_point_grid() {
        let g: Grid = "0.5:0.5:1".parse().unwrap();
        assert_eq!(g.points(), vec![0.5]);
        assert!("0.2:0.5:1".parse::<Grid>().is_err());
    }

    #[test]
    fn bad_grids_are_rejected() {
        for s in ["", "0:1", "0:1:0", "1:0:3", "0:1.5:3", "-0.1:1:3", "a:1:3", "0:1:2:3"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }

    #[test]
    fn phases_print_symbolically() {
        assert_eq!(phase((1.0, 0.0)), "+1");
        assert_eq!(phase((0.0, -1.0)), "-i");
    }

    fn run(args: &[&str]) -> (u8, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("ghzcomm").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let status = execute(&cli, &mut out, &mut err);
        (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn validation_failure_writes_nothing() {
        let (status, out, err) = run(&["classical", "--n", "7"]);
        assert_eq!(status, EXIT_VALIDATION);
        assert!(out.is_empty());
        assert!(err.contains("--n"));
    }

    #[test]
    fn injected_fault_exits_with_mismatch() {
        let (status, out, err) = run(&["verify", "--inject-fault", "--format", "csv"]);
        assert_eq!(status, EXIT_MISMATCH);
        assert!(out.contains("injected-fault,false"));
        assert!(err.contains("injected-fault"));
    }
}
