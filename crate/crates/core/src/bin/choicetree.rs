use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use choicetree::harness::emit::format_real;
use choicetree::harness::{self, ExperimentKind, ExperimentOutput, ExperimentSpec};
use choicetree::{Error, SpecError};

/// Max/min-choice preferential attachment trees.
#[derive(Debug, Parser)]
#[command(name = "choicetree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow trees for every seed and record M, L and the leader at each checkpoint.
    Grow {
        #[command(flatten)]
        common: Common,
        /// Write the first seed's final tree as a tab-separated edge list.
        #[arg(long, value_name = "PATH")]
        export_tree: Option<PathBuf>,
    },
    /// Run the two-colour multi-draw urn.
    Urn(Common),
    /// Solve 1 - (1 - x/2)^d = x for the limit of M_n / n.
    Xstar(Common),
    /// Exact law of the degree multiset and of M for small n (steps <= 12).
    Exact(Common),
    /// Median maximum degree for preferential/uniform x max/none/min.
    Table1(Common),
    /// Leader persistence across checkpoints.
    Hub(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Experiment spec file (`key = value` lines); flags override its values.
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,
    #[arg(long)]
    d: Option<String>,
    /// max, min or none
    #[arg(long)]
    rule: Option<String>,
    /// preferential or uniform
    #[arg(long)]
    attachment: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// `a,b,c` or `geometric:start,factor`
    #[arg(long)]
    checkpoints: Option<String>,
    /// `a..b`, `base+count` or `a,b,c`
    #[arg(long)]
    seeds: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Do not print the result table.
    #[arg(long)]
    quiet: bool,
}

enum Failure {
    Spec(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Spec(s) => Failure::Spec(s.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Spec(msg)) => {
            eprintln!("spec error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (kind, common, export_tree) = match cli.command {
        Command::Grow { common, export_tree } => (ExperimentKind::Grow, common, export_tree),
        Command::Urn(c) => (ExperimentKind::Urn, c, None),
        Command::Xstar(c) => (ExperimentKind::XStar, c, None),
        Command::Exact(c) => (ExperimentKind::Exact, c, None),
        Command::Table1(c) => (ExperimentKind::Table1, c, None),
        Command::Hub(c) => (ExperimentKind::Hub, c, None),
    };
    let spec = load_spec(kind, &common)?;

    let output = if let Some(path) = &export_tree {
        let report = harness::run_grow(&spec, true)?;
        let tree = report.first_tree.as_ref().expect("first tree kept");
        let file = fs::File::create(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        tree.write_edge_list(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
        ExperimentOutput::Grow(report)
    } else {
        harness::run_experiment(&spec)?
    };

    for path in harness::write_outputs(&output, &spec.out)? {
        eprintln!("wrote {}", path.display());
    }
    if !common.quiet {
        print_result(&spec, &output);
    }
    Ok(())
}

fn load_spec(kind: ExperimentKind, common: &Common) -> Result<ExperimentSpec, Failure> {
    let text = match &common.spec {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        if let Some((k, v)) = content.split_once('=') {
            if k.trim().eq_ignore_ascii_case("kind") && v.trim() != kind.to_string() {
                return Err(Failure::Spec(format!(
                    "spec file declares kind `{}` but subcommand is `{kind}`",
                    v.trim()
                )));
            }
        }
    }
    let mut overrides: Vec<(&str, String)> = vec![("kind", kind.to_string())];
    let flags = [
        ("d", &common.d),
        ("rule", &common.rule),
        ("attachment", &common.attachment),
        ("steps", &common.steps),
        ("checkpoints", &common.checkpoints),
        ("seeds", &common.seeds),
        ("out", &common.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            overrides.push((key, v.clone()));
        }
    }
    Ok(harness::parse_spec_with_overrides(&text, &overrides)?)
}

fn print_result(spec: &ExperimentSpec, output: &ExperimentOutput) {
    match output {
        ExperimentOutput::Grow(r) => {
            println!(
                "{} seeds, d = {}, rule = {}, attachment = {}",
                r.summaries.len(),
                spec.model.d,
                spec.model.rule,
                spec.model.attachment
            );
            println!("{:>12} {:>14} {:>14} {:>14}", "n", "median", "min", "max");
            for row in &r.aggregate {
                println!(
                    "{:>12} {:>14} {:>14} {:>14}",
                    row.n,
                    format_real(row.median),
                    format_real(row.min),
                    format_real(row.max)
                );
            }
        }
        ExperimentOutput::Urn(r) => {
            println!("{:>12} {:>14} {:>14} {:>14}", "steps", "median black/steps", "min", "max");
            for row in &r.aggregate {
                println!(
                    "{:>12} {:>14} {:>14} {:>14}",
                    row.n,
                    format_real(row.median),
                    format_real(row.min),
                    format_real(row.max)
                );
            }
        }
        ExperimentOutput::XStar(r) => {
            println!(
                "d = {}: x* = {}  residual = {}  q'(x*) = {}",
                r.d,
                format_real(r.x_star),
                format_real(r.residual),
                format_real(r.derivative)
            );
        }
        ExperimentOutput::Exact(dist) => {
            println!("law of M on P_{}:", dist.n_target);
            for (m, p) in dist.max_law_f64() {
                println!("  M = {m:>3}  {}", format_real(p));
            }
        }
        ExperimentOutput::Table1(t) => {
            println!("median max degree at n = {}, d = {}", t.n_steps, t.d);
            println!("{:<13} {:<5} {:>12} {:>22} {:>14}", "attachment", "rule", "median M", "order", "leading term");
            for cell in &t.cells {
                println!(
                    "{:<13} {:<5} {:>12} {:>22} {:>14}",
                    cell.attachment.to_string(),
                    cell.rule.to_string(),
                    format_real(cell.final_row().median),
                    cell.predicted_order,
                    format_real(cell.predicted_leading)
                );
            }
        }
        ExperimentOutput::Hub(h) => {
            println!("{:>12} {:>16}", "n", "fraction stable");
            for (n, f) in h.checkpoints.iter().zip(&h.fraction_stable) {
                println!("{:>12} {:>16}", n, format_real(*f));
            }
        }
    }
}
