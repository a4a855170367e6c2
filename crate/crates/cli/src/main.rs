use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use defzero_core::abelian::abelian_invariants;
use defzero_core::coset::{enumerate_group, EnumerationLimits, Strategy};
use defzero_core::multiplier::multiplier_is_trivial;
use defzero_core::pipeline::{emit_report, run_dataset, Expectations, ReportFormat, RunConfig};
use defzero_core::pquotient::p_quotient;
use defzero_core::Presentation;

#[derive(Parser, Debug)]
#[command(
    name = "defzero",
    version,
    about = "Verify orders and Schur multipliers of finitely presented 2-groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every check on each record of a dataset.
    Verify(VerifyArgs),
    /// Order of a group by coset enumeration.
    Order {
        presentation: String,
        #[command(flatten)]
        enumeration: EnumerationArgs,
    },
    /// Invariants of the abelianisation; 0 stands for Z.
    Abelian { presentation: String },
    /// Power-commutator presentation of the largest p-quotient.
    Pq {
        presentation: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 64)]
        max_class: usize,
    },
    /// Decide whether the Schur multiplier of a finite p-group is trivial.
    Multiplier {
        presentation: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
}

#[derive(Args, Debug)]
struct EnumerationArgs {
    /// felsch, hlt or hlt-lookahead.
    #[arg(long, default_value = "felsch")]
    strategy: Strategy,
    #[arg(long, default_value_t = 1_000_000)]
    max_cosets: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Dataset file: `id <tab> provenance <tab> presentation` per line.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    enumeration: EnumerationArgs,
    #[arg(long)]
    skip_kb: bool,
    #[arg(long)]
    skip_multiplier: bool,
    #[arg(long, default_value_t = 20_000)]
    max_rules: usize,
    #[arg(long, default_value_t = 64)]
    max_class: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Report file; without it the report goes to standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// jsonl or tsv.
    #[arg(long, default_value = "jsonl")]
    format: ReportFormat,
    /// File of expected properties to check every record against.
    #[arg(long)]
    expect: Option<PathBuf>,
}

/// Exit status 2: bad input or I/O failure.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_presentation(text: &str) -> Result<Presentation, UsageError> {
    Presentation::parse(text).map_err(|e| UsageError(format!("presentation: {e}")))
}

fn verify(args: VerifyArgs) -> Result<bool, UsageError> {
    if args.enumeration.max_cosets == 0 || args.max_rules == 0 || args.max_class == 0 {
        return Err(UsageError("limits must be positive".into()));
    }
    let expectations = match &args.expect {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            Some(Expectations::parse(&text)?)
        }
        None => None,
    };
    let mut cfg = RunConfig {
        skip_kb: args.skip_kb,
        skip_multiplier: args.skip_multiplier,
        max_class: args.max_class,
        jobs: args.jobs,
        expectations,
        report: args.report.clone().map(|p| (p, args.format)),
        ..RunConfig::default()
    };
    cfg.enumeration = EnumerationLimits {
        max_cosets: args.enumeration.max_cosets,
        strategy: args.enumeration.strategy,
    };
    cfg.completion.max_rules = args.max_rules;
    let run = run_dataset(&args.input, &cfg)?;
    if args.report.is_none() {
        let mut out = std::io::stdout().lock();
        emit_report(&run.reports, args.format, &mut out)?;
    }
    for e in &run.errors {
        eprintln!("error: {e}");
    }
    eprintln!("{}", run.summary);
    Ok(run.summary.success())
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Order {
            presentation,
            enumeration,
        } => {
            let p = parse_presentation(&presentation)?;
            let limits = EnumerationLimits {
                max_cosets: enumeration.max_cosets,
                strategy: enumeration.strategy,
            };
            let table = enumerate_group(&p, &limits)?;
            if table.is_closed() {
                writeln!(out, "{}", table.live_count())?;
                Ok(true)
            } else {
                writeln!(out, "exceeded")?;
                Ok(false)
            }
        }
        Command::Abelian { presentation } => {
            let p = parse_presentation(&presentation)?;
            let inv: Vec<String> = abelian_invariants(&p)
                .iter()
                .map(ToString::to_string)
                .collect();
            writeln!(out, "{}", inv.join(" "))?;
            Ok(true)
        }
        Command::Pq {
            presentation,
            p,
            max_class,
        } => {
            let pres = parse_presentation(&presentation)?;
            let res = p_quotient(&pres, p, max_class)?;
            write!(out, "{}", res.pc.dump())?;
            let orders: Vec<String> = res
                .series_orders()
                .iter()
                .map(ToString::to_string)
                .collect();
            writeln!(out, "order {}", res.order())?;
            writeln!(out, "series {}", orders.join(" "))?;
            writeln!(out, "complete {}", res.complete)?;
            Ok(true)
        }
        Command::Multiplier { presentation, p } => {
            let pres = parse_presentation(&presentation)?;
            let v = multiplier_is_trivial(&pres, p)?;
            writeln!(
                out,
                "{} (multiplicator rank {}, d {})",
                if v.trivial { "trivial" } else { "nontrivial" },
                v.multiplicator_rank,
                v.d
            )?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("defzero: {msg}");
            ExitCode::from(2)
        }
    }
}
