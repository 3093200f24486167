use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use structshift::{
    compare_pair, compare_series, emit_plot_data, emit_series_plot_data, parse_table,
    render_report, render_series, CriticalValueSource, CriticalValueTable, CvPolicy, InputMode,
    McConfig, OutputFormat, SourceKind, TableFormat, TestSettings,
};

/// Structure similarity and distinctive structural changes in frequency tables.
#[derive(Debug, Parser)]
#[command(name = "structshift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare a baseline population with one or all other populations.
    Compare(CompareArgs),
    /// Print the critical value of the similarity test and its provenance.
    CriticalValue(CriticalValueArgs),
}

#[derive(Debug, clap::Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: InputFormat,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    baseline: String,
    /// Compare only this population; all others when omitted.
    #[arg(long)]
    against: Option<String>,
    #[command(flatten)]
    test: TestArgs,
    #[arg(long, value_enum, default_value = "json")]
    out: Output,
    /// Also write plot data (differences, S and 3S bands, flags) as JSON.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct TestArgs {
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "embedded")]
    cv_policy: Policy,
    #[arg(long, default_value_t = 1_000_000)]
    mc_replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

impl TestArgs {
    fn mc(&self) -> McConfig {
        McConfig {
            replicates: self.mc_replicates,
            seed: self.seed,
            threads: self.threads,
        }
    }
}

#[derive(Debug, clap::Args)]
struct CriticalValueArgs {
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    test: TestArgs,
    #[arg(long, value_enum, default_value = "text")]
    out: ProvenanceOutput,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Counts,
    Shares,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Policy {
    Embedded,
    EmbeddedThenMc,
    Mc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProvenanceOutput {
    Json,
    Text,
}

impl From<Policy> for CvPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Embedded => CvPolicy::EmbeddedOnly,
            Policy::EmbeddedThenMc => CvPolicy::EmbeddedThenMc,
            Policy::Mc => CvPolicy::McOnly,
        }
    }
}

/// Exit status: 1 for usage errors, 2 for data errors.
enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<structshift::Error> for Failure {
    fn from(e: structshift::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Compare(args) => compare(args),
        Command::CriticalValue(args) => critical_value(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn check_alpha(alpha: f64) -> Result<(), Failure> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

fn check_replicates(args: &TestArgs) -> Result<(), Failure> {
    if args.mc_replicates == 0 {
        return Err(Failure::Usage("--mc-replicates must be positive".into()));
    }
    if args.threads == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    Ok(())
}

fn settings(args: &TestArgs) -> Result<TestSettings, Failure> {
    check_alpha(args.alpha)?;
    check_replicates(args)?;
    let table = CriticalValueTable::from_env().context("loading critical-value table")?;
    Ok(TestSettings {
        alpha: args.alpha,
        policy: args.cv_policy.into(),
        mc: args.mc(),
        table,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Data)
}

fn compare(args: CompareArgs) -> Result<(), Failure> {
    let settings = settings(&args.test)?;
    let bytes =
        fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let format = match args.format {
        InputFormat::Csv => TableFormat::CsvWide,
        InputFormat::Json => TableFormat::Json,
    };
    let mode = match args.mode {
        Mode::Counts => InputMode::Counts,
        Mode::Shares => InputMode::Shares,
    };
    let table = parse_table(&bytes, format, mode)
        .with_context(|| format!("parsing {}", args.input.display()))?;
    let out = match args.out {
        Output::Json => OutputFormat::Json,
        Output::Csv => OutputFormat::Csv,
        Output::Text => OutputFormat::Text,
    };

    let (rendered, plot) = match &args.against {
        Some(against) => {
            let report = compare_pair(&table, &args.baseline, against, &settings)?;
            (render_report(&report, out), emit_plot_data(&report))
        }
        None => {
            let series = compare_series(&table, &args.baseline, &settings)?;
            (render_series(&series, out), emit_series_plot_data(&series))
        }
    };
    if let Some(path) = &args.plot_data {
        write_file(path, &plot)?;
    }
    print!("{rendered}");
    Ok(())
}

fn critical_value(args: CriticalValueArgs) -> Result<(), Failure> {
    let settings = settings(&args.test)?;
    if args.k < 2 {
        return Err(Failure::Usage(format!(
            "--k must be at least 2, got {}",
            args.k
        )));
    }
    let source =
        settings
            .table
            .critical_value(settings.alpha, args.k, settings.policy, &settings.mc)?;
    match args.out {
        ProvenanceOutput::Json => {
            let json = serde_json::to_string_pretty(&source).context("serializing")?;
            println!("{json}");
        }
        ProvenanceOutput::Text => println!("{}", describe(&source)),
    }
    Ok(())
}

fn describe(source: &CriticalValueSource) -> String {
    let provenance = match source.kind {
        SourceKind::Embedded => match &source.table {
            Some(t) => format!(
                "tabulated, table {} version {}",
                t.origin,
                t.version.as_deref().unwrap_or("unversioned")
            ),
            None => "tabulated".to_string(),
        },
        SourceKind::MonteCarlo => match &source.monte_carlo {
            Some(mc) => format!(
                "Monte Carlo, null model {}, {} replicates, seed {}",
                mc.null_model, mc.replicates, mc.seed
            ),
            None => "Monte Carlo".to_string(),
        },
    };
    format!(
        "{}\talpha={} k={} source: {}",
        source.value, source.alpha, source.k, provenance
    )
}
