use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leftorder_cli::{emit, verify_report, DemoOptions, DemoRegistry, Format, Report};
use leftorder_core::pattern::{build_free_chain_pattern, build_kb_depth2, PatternInstance};

#[derive(Parser)]
#[command(
    name = "leftorder",
    version,
    about = "Certified computations in left-ordered groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the available demos.
    List,
    /// Run one demo.
    Demo {
        name: String,
        #[command(flatten)]
        opts: DemoArgs,
    },
    /// Run every demo with default settings.
    All {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a pattern instance as JSON.
    Pattern {
        #[arg(value_enum)]
        kind: PatternKind,
        /// Rows (free patterns only; the generators are x_0 .. x_(depth-1)).
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Columns per row.
        #[arg(long, default_value_t = 4)]
        cols: usize,
    },
    /// Verify a pattern instance read from a JSON file.
    Verify {
        file: PathBuf,
        /// The verdict that counts as success.
        #[arg(long, value_enum, default_value_t = Expect::Verified)]
        expect: Expect,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long)]
    depth: Option<u64>,
    #[arg(long)]
    cols: Option<u64>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include elapsed time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternKind {
    Kb,
    Free,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Verified,
    Refuted,
    Unknown,
}

impl Expect {
    fn as_str(self) -> &'static str {
        match self {
            Expect::Verified => "verified",
            Expect::Refuted => "refuted",
            Expect::Unknown => "unknown",
        }
    }
}

fn finish(report: &Report, format: Format) -> ExitCode {
    print!("{}", emit(report, format));
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let registry = DemoRegistry::builtin();
    match cli.command {
        Command::List => {
            for d in registry.iter() {
                println!("{:<15} {}", d.name(), d.describe());
            }
            ExitCode::SUCCESS
        }
        Command::Demo { name, opts } => {
            let options = DemoOptions {
                depth: opts.depth,
                cols: opts.cols,
                bound: opts.bound,
                cap: opts.cap,
                seed: opts.seed,
                timing: opts.timing,
            };
            match registry.run(&name, &options) {
                Ok(report) => finish(&report, opts.format),
                Err(e) => fail(e),
            }
        }
        Command::All { format, seed } => {
            let options = DemoOptions {
                seed,
                ..DemoOptions::default()
            };
            let mut all_passed = true;
            for name in registry.names() {
                match registry.run(name, &options) {
                    Ok(report) => {
                        all_passed &= report.passed;
                        print!("{}", emit(&report, format));
                        if format == Format::Table {
                            println!();
                        }
                    }
                    Err(e) => {
                        all_passed = false;
                        eprintln!("error in {name}: {e}");
                    }
                }
            }
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Pattern { kind, depth, cols } => {
            let built = match kind {
                PatternKind::Kb => build_kb_depth2(cols as u64, cols as u64),
                PatternKind::Free => build_free_chain_pattern(depth.saturating_sub(1), cols),
            };
            match built {
                Ok(p) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&p).expect("patterns serialize")
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Verify {
            file,
            expect,
            format,
        } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", file.display())),
            };
            let pattern: PatternInstance = match serde_json::from_str(&text) {
                Ok(p) => p,
                Err(e) => return fail(format!("{}: {e}", file.display())),
            };
            let report = verify_report(&pattern, expect.as_str(), &file.display().to_string());
            finish(&report, format)
        }
    }
}
