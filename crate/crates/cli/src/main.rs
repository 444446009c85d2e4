use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qmachine_core::groverperm::GroupTable;
use qmachine_core::report::{build_report, ReportConfig, Section, VerificationReport};

#[derive(Parser, Debug)]
#[command(
    name = "qmachine",
    version,
    about = "Simulate quantum cloners, discriminators and programmable processors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo trials per stochastic entry.
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: usize,

    /// Print the report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Program dimension of the shift-group processor.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Target rotation angle in radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    theta: Option<f64>,

    /// Phase-gate angle in radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Overlap |<psi1|psi2>| in [0, 1].
    #[arg(long, global = true)]
    overlap: Option<f64>,

    /// Cayley table for the conjugacy search.
    #[arg(long, global = true)]
    group_file: Option<PathBuf>,

    /// Element g1 of the conjugacy problem h g1 h^-1 = g2.
    #[arg(long, global = true, requires = "g2")]
    g1: Option<usize>,

    /// Element g2 of the conjugacy problem.
    #[arg(long, global = true, requires = "g1")]
    g2: Option<usize>,

    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Universal, anti- and probabilistic cloning.
    Clone,
    /// Minimum-error and unambiguous discrimination of two states.
    Discriminate,
    /// Channels implemented by the two-qubit-program processor.
    Channels,
    /// Probabilistic execution of I - 2|phi><phi|.
    AGate,
    /// Process fidelity of the shift-group processor.
    Procfid,
    /// Probabilistic phase gate.
    PhaseGate,
    /// Programmable unambiguous discriminator.
    Progdisc,
    /// Grover search over processor programs and group conjugacy.
    Grover,
    /// Every section.
    ReportAll,
}

impl Command {
    fn sections(self) -> Vec<Section> {
        match self {
            Command::Clone => vec![Section::Clone],
            Command::Discriminate => vec![Section::Discriminate],
            Command::Channels => vec![Section::Channels],
            Command::AGate => vec![Section::AGate],
            Command::Procfid => vec![Section::Procfid],
            Command::PhaseGate => vec![Section::PhaseGate],
            Command::Progdisc => vec![Section::Progdisc],
            Command::Grover => vec![Section::Grover],
            Command::ReportAll => Section::ALL.to_vec(),
        }
    }
}

fn config(cli: &Cli) -> Result<ReportConfig, String> {
    if let Some(s) = cli.overlap {
        if !(0.0..=1.0).contains(&s) {
            return Err(format!("--overlap must lie in [0, 1], got {s}"));
        }
    }
    let group = match &cli.group_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            Some(GroupTable::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?)
        }
        None => None,
    };
    Ok(ReportConfig {
        seed: cli.seed,
        trials: cli.trials,
        n: cli.n,
        theta: cli.theta,
        alpha: cli.alpha,
        overlap: cli.overlap,
        group,
        g1: cli.g1,
        g2: cli.g2,
    })
}

fn render_table(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed {}  trials {}", report.seed, report.trials);
    for e in &report.entries {
        let status = if e.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status}  {}\n      expected {:.10}  observed {:.10}  tolerance {:.3e}",
            e.name, e.expected, e.observed, e.tolerance
        );
        if let Some(note) = &e.note {
            let _ = writeln!(out, "      {note}");
        }
    }
    let failed = report.failures().count();
    let _ = writeln!(
        out,
        "{} entries, {} passed, {failed} failed",
        report.entries.len(),
        report.entries.len() - failed
    );
    if let Some(t) = report.wall_time_s {
        let _ = writeln!(out, "wall time {t:.3} s");
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let mut report = match build_report(&cli.command.sections(), &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let text = if cli.json {
        report.to_json() + "\n"
    } else {
        render_table(&report)
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().write_all(text.as_bytes());
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
