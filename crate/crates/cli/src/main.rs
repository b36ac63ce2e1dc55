//! `milnor`: Milnor invariants of welded links and cut-diagrams.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 property violation.

mod fuzz;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use milnor_core::cut2d::{tube_from_diagram, CutDiagram, NuTable};
use milnor_core::gauss::{arc_table, BasedDiagram};
use milnor_core::milnor::{
    chen_series, chen_words, longitude_words, nilpotent_presentation, EngineError, MilnorTable, WordGuard,
};

use input::{load, load_diagram, Input};
use report::{Cell, RunReport, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Parser)]
#[command(name = "milnor", version, about = "Milnor invariants of welded links and surface-link cut-diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Word,
    Series,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// mu / Delta / mu-bar table (or m / Delta / nu for a .cutd file).
    Invariants {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Also print the nilpotent presentation.
        #[arg(long)]
        present: bool,
        /// Also print the Magnus coloring of every arc.
        #[arg(long)]
        color: bool,
        /// Order for --present and --color (defaults to --max-len).
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// m / Delta / nu table of a cut-diagram (a link diagram is replaced by its tube).
    Nu {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Presentation of the q-th nilpotent quotient of the link group.
    Present {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        q: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Magnus series of the Chen-Milnor image of every arc.
    Color {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        q: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Randomized invariance campaign.
    Fuzz {
        #[arg(long, value_enum)]
        check: fuzz::Check,
        #[arg(long, default_value_t = 100)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// First iteration index, for replaying a reported violation.
        #[arg(long, default_value_t = 0)]
        start: u64,
        /// Tree degree for wk / selfwk (cycled over a default range when absent).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Time the word engine against the series engine.
    Bench {
        file: PathBuf,
        #[arg(long, value_enum)]
        engine: Engine,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: Output,
    },
}

fn command_line() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("milnor {}", args.join(" "))
}

fn check_order(q: usize) -> Result<(), CliError> {
    if q == 0 {
        Err(CliError::Input("order must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn mu_table(d: &BasedDiagram, max_len: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["I", "mu", "Delta", "mubar", "r"], 4);
    for r in MilnorTable::new(d, max_len)?.records() {
        t.rows.push(vec![
            Cell::Seq(r.seq),
            Cell::int(r.mu),
            Cell::int(r.delta),
            Cell::int(r.mubar),
            Cell::int(r.r),
        ]);
    }
    Ok(t)
}

fn nu_table(c: &CutDiagram, max_len: usize) -> Table {
    let mut t = Table::new(&["I", "m", "Delta", "nu"], 4);
    for r in NuTable::new(c, max_len).records() {
        t.rows.push(vec![Cell::Seq(r.seq), Cell::int(r.m), Cell::int(r.delta), Cell::int(r.nu)]);
    }
    t
}

fn presentation_lines(d: &BasedDiagram, q: usize) -> Result<Vec<String>, CliError> {
    Ok(vec![nilpotent_presentation(d, q, WordGuard::from_env())?.to_string()])
}

fn coloring_table(d: &BasedDiagram, q: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["arc", "series"], 2);
    for (a, s) in chen_series(d, q)?.iter() {
        t.rows.push(vec![
            Cell::Text(format!("a{}_{}", a.comp + 1, a.index)),
            Cell::Text(s.to_string()),
        ]);
    }
    Ok(t)
}

fn run(cli: Cli) -> Result<(RunReport, Format, bool), CliError> {
    let start = Instant::now();
    let cmd = command_line();
    let (mut report, format, violated) = match cli.command {
        Command::Invariants {
            file,
            max_len,
            present,
            color,
            q,
            out,
        } => {
            check_order(max_len)?;
            let loaded = load(&file)?;
            let mut r = RunReport::new(cmd, "series");
            r.input_sha256 = Some(loaded.sha256);
            let q = q.unwrap_or(max_len);
            match loaded.input {
                Input::Diagram(d) => {
                    r.tables.push((String::new(), mu_table(&d, max_len)?));
                    if present {
                        r.text.extend(presentation_lines(&d, q)?);
                    }
                    if color {
                        r.tables.push(("coloring".into(), coloring_table(&d, q)?));
                    }
                }
                Input::Cut(c) => {
                    if present || color {
                        return Err(CliError::Input("--present and --color need a link diagram".into()));
                    }
                    r.tables.push((String::new(), nu_table(&c, max_len)));
                }
            }
            (r, out.format, false)
        }
        Command::Nu { file, max_len, out } => {
            check_order(max_len)?;
            let loaded = load(&file)?;
            let mut r = RunReport::new(cmd, "series");
            r.input_sha256 = Some(loaded.sha256);
            let c = match loaded.input {
                Input::Cut(c) => c,
                Input::Diagram(d) => {
                    r.field("input", Cell::Text("tube of link diagram".into()));
                    tube_from_diagram(&d)
                }
            };
            r.tables.push((String::new(), nu_table(&c, max_len)));
            (r, out.format, false)
        }
        Command::Present { file, q, out } => {
            check_order(q)?;
            let (d, sha) = load_diagram(&file)?;
            let mut r = RunReport::new(cmd, "word");
            r.input_sha256 = Some(sha);
            r.text = presentation_lines(&d, q)?;
            (r, out.format, false)
        }
        Command::Color { file, q, out } => {
            check_order(q)?;
            let (d, sha) = load_diagram(&file)?;
            let mut r = RunReport::new(cmd, "series");
            r.input_sha256 = Some(sha);
            r.tables.push((String::new(), coloring_table(&d, q)?));
            (r, out.format, false)
        }
        Command::Fuzz {
            check,
            iters,
            seed,
            start,
            k,
            out,
        } => {
            if matches!(check, fuzz::Check::Moves | fuzz::Check::Homotopy) && k.is_some() {
                return Err(CliError::Input(format!("--k does not apply to --check {}", check.name())));
            }
            if k == Some(0) {
                return Err(CliError::Input("--k must be at least 1".into()));
            }
            let mut r = RunReport::new(cmd, "series");
            r.seed = Some(seed);
            let violations = fuzz::run(&fuzz::Campaign {
                check,
                seed,
                start,
                iters,
                k,
            });
            r.field("check", Cell::Text(check.name().into()));
            r.field("iterations", Cell::int(iters));
            r.field("violations", Cell::int(violations.len()));
            let bad = !violations.is_empty();
            r.violations = violations;
            (r, out.format, bad)
        }
        Command::Bench { file, engine, q, out } => {
            check_order(q)?;
            let (d, sha) = load_diagram(&file)?;
            let mut r = RunReport::new(cmd, if engine == Engine::Word { "word" } else { "series" });
            r.input_sha256 = Some(sha);
            r.field("q", Cell::int(q));
            bench(&mut r, &d, engine, q)?;
            (r, out.format, false)
        }
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((report, format, violated))
}

fn bench(r: &mut RunReport, d: &BasedDiagram, engine: Engine, q: usize) -> Result<(), CliError> {
    match engine {
        Engine::Word => {
            let guard = WordGuard::from_env();
            r.field("guard", Cell::int(guard.0));
            let result = chen_words(d, q, guard).and_then(|t| {
                longitude_words(d, q, guard)?;
                Ok(t)
            });
            match result {
                Ok(t) => {
                    r.field("outcome", Cell::Text("finished".into()));
                    r.field("peak_word_length", Cell::int(t.peak_literal_len()));
                    r.field("peak_reduced_length", Cell::int(t.peak_len));
                }
                Err(EngineError::Guard(g)) => {
                    r.field("outcome", Cell::Text("guard exceeded".into()));
                    r.field("needed_length", Cell::int(g.needed));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Engine::Series => {
            let t = chen_series(d, q)?;
            let n = d.component_count() as u128;
            let bound: u128 = (0..=q as u32).map(|s| n.saturating_pow(s)).fold(0, u128::saturating_add);
            r.field("outcome", Cell::Text("finished".into()));
            r.field("arcs", Cell::int(arc_table(d).arcs().count()));
            r.field("max_monomials", Cell::int(t.max_terms()));
            r.field("total_monomials", Cell::int(t.total_terms()));
            r.field("monomial_bound_per_arc", Cell::int(bound));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((report, format, violated)) => {
            let text = match format {
                Format::Tsv => report.to_tsv(),
                Format::Json => report.to_json(),
            };
            print!("{text}");
            ExitCode::from(if violated { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
