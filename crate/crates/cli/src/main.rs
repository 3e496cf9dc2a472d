use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wcomm_cli::checks::{run_check, select};
use wcomm_cli::{parse_problem, run_problem, to_json_string, Overrides};

#[derive(Parser)]
#[command(name = "wcomm", version, about = "Weak commensurability, genericity and B/C twin invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores). Reports do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one problem file.
    Run(RunArgs),
    /// Run the bundled acceptance checks.
    Selftest {
        /// Run only checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Write the structured JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    precision_bits: Option<u32>,
    #[arg(long)]
    exponent_bound: Option<i64>,
    #[arg(long)]
    prime_budget: Option<u64>,
    #[arg(long)]
    word_length: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Add wall-clock timings to the report.
    #[arg(long)]
    timings: bool,
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Self {
            color: !no_color && std::io::stdout().is_terminal(),
        }
    }

    fn paint(&self, s: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

fn run(args: RunArgs, style: &Style) -> ExitCode {
    let src = match std::fs::read_to_string(&args.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.file.display());
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        exponent_bound: args.exponent_bound,
        prime_budget: args.prime_budget,
        word_length: args.word_length,
        precision_bits: args.precision_bits,
        seed: args.seed,
    };
    let problem = match parse_problem(&src, &overrides) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}: {}: {e}", style.paint("error", "31"), args.file.display());
            return ExitCode::from(2);
        }
    };
    let outcome = match run_problem(&problem, &src, args.timings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}: analysis failed: {e}", style.paint("error", "31"));
            return ExitCode::from(1);
        }
    };
    println!("{} {}", style.paint(problem.task.name(), "1"), args.file.display());
    println!("{}", outcome.text);
    if let Some(out) = args.out {
        if let Err(e) = std::fs::write(&out, to_json_string(&outcome.report)) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}

fn selftest(filter: Option<String>, style: &Style) -> ExitCode {
    let checks = select(filter.as_deref());
    if checks.is_empty() {
        eprintln!(
            "{}: no checks match {:?}; 0 run",
            style.paint("warning", "33"),
            filter.unwrap_or_default()
        );
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    for c in &checks {
        let r = run_check(c);
        let line = r.line();
        let (head, rest) = line.split_at(4);
        println!("{}{rest}", style.paint(head, if r.passed { "32" } else { "31" }));
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let style = Style::detect();
    match cli.command {
        Command::Run(args) => run(args, &style),
        Command::Selftest { filter } => selftest(filter, &style),
    }
}
