use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ordab::Budget;
use ordab_cli::commands::{run, CommandError, Options, PREDICATES, SWEEPS, VERBS};
use ordab_cli::lang::{parse_workspace, LangError, Pos, Workspace};

const USAGE_EXIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ordab", version, about = "Exact checks on preordered abelian groups and their V-valued analogues")]
struct Cli {
    /// Definition file; may be given several times, later files see the names of earlier ones.
    #[arg(short = 'w', long = "defs", value_name = "FILE")]
    defs: Vec<PathBuf>,
    /// Solver node budget for the whole command.
    #[arg(long, value_name = "N")]
    budget: Option<u64>,
    /// Enumeration bound for sweeps and bounded checks.
    #[arg(long, value_name = "K")]
    bound: Option<u64>,
    /// Read rali/lali against the ambient product cone instead of the total object's own cone.
    #[arg(long)]
    ambient_order: bool,
    /// Write the JSON report here and print a text summary instead.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for random-instance suites.
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// One of the verbs listed below.
    verb: String,
    args: Vec<String>,
}

fn help_tail() -> String {
    format!("verbs: {}\npredicates for check: {}\nsweeps: {}", VERBS.join(", "), PREDICATES.join(", "), SWEEPS.join(", "))
}

/// Concatenates the files, then maps a diagnostic back to the file it
/// came from.
fn load(defs: &[PathBuf], budget: &Budget) -> Result<Workspace, String> {
    let mut text = String::new();
    let mut starts = Vec::new();
    for path in defs {
        let body = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
        starts.push((text.lines().count(), path));
        text.push_str(&body);
        if !body.ends_with('\n') {
            text.push('\n');
        }
    }
    parse_workspace(&text, budget).map_err(|e: LangError| {
        let (offset, path) = starts.iter().rev().find(|(s, _)| *s < e.pos.line).copied().unwrap_or((0, &defs[0]));
        let pos = Pos { line: e.pos.line - offset, col: e.pos.col };
        format!("{}: {}: {}", path.display(), pos, e.message)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            println!("\n{}", help_tail());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("{}", help_tail());
            return ExitCode::from(USAGE_EXIT);
        }
    };
    let mut opts = Options { bound: cli.bound, ambient: cli.ambient_order, seed: cli.seed, ..Options::default() };
    if let Some(b) = cli.budget {
        opts.budget = b;
    }
    let ws = if cli.defs.is_empty() {
        Workspace::default()
    } else {
        match load(&cli.defs, &Budget::new(opts.budget)) {
            Ok(ws) => ws,
            Err(m) => {
                eprintln!("error: {}", m);
                return ExitCode::from(USAGE_EXIT);
            }
        }
    };
    let report = match run(&cli.verb, &cli.args, &ws, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            if matches!(e, CommandError::Usage(_)) {
                eprintln!("{}", help_tail());
            }
            return ExitCode::from(USAGE_EXIT);
        }
    };
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: {}: {}", path.display(), e);
                return ExitCode::from(USAGE_EXIT);
            }
            print!("{}", report.text());
        }
        None => print!("{}", json),
    }
    ExitCode::from(report.exit_code as u8)
}
