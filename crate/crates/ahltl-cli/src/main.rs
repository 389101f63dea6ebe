mod bench;
mod inputs;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ahltl::automata::{dpa_to_hoa, DeterminizeOptions};
use ahltl::game::{game_to_dot, BuildOptions, MAX_Z};
use ahltl::spec::{classify_fragment, print_ltl, AhltlFormula, Ltl};
use ahltl::ts::{termination_info, TransitionSystem};
use ahltl::verify::{extract_witness, verify_admissible_fast, Outcome, Pipeline, RefuterScript, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use inputs::{bind_systems, load_formula, read, CliResult, Failure, FormulaArgs, SystemArgs};

#[derive(Parser, Debug)]
#[command(name = "ahltl", version, about = "Game-based verification of forall-exists asynchronous hyperproperties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a formula against systems.
    Check(CheckArgs),
    /// Report the fragments a formula belongs to.
    Classify(ClassifyArgs),
    /// Run a directory of case manifests.
    Bench(BenchArgs),
    /// Write the strategy graph, the game, the automaton or a witness.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Budget {
    /// Largest game to build.
    #[arg(long, default_value_t = BuildOptions::default().max_vertices)]
    max_vertices: usize,
    /// Largest parity automaton to build.
    #[arg(long, default_value_t = DeterminizeOptions::default().max_states)]
    max_automaton_states: usize,
    /// Worker threads for game construction.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl Budget {
    fn options(&self) -> CliResult<VerifyOptions> {
        if self.max_vertices == 0 || self.max_automaton_states == 0 || self.threads == 0 {
            return Err(Failure::Input("budgets and thread counts must be positive".into()));
        }
        Ok(VerifyOptions {
            build: BuildOptions { max_vertices: self.max_vertices, threads: self.threads },
            determinize: DeterminizeOptions { max_states: self.max_automaton_states, ..Default::default() },
        })
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    #[command(flatten)]
    systems: SystemArgs,
    #[command(flatten)]
    budget: Budget,
    /// Window bound.
    #[arg(short = 'Z', long = "z", default_value_t = 1)]
    z: usize,
    /// Try increasing window bounds `LO..HI` until the verifier wins.
    #[arg(long, value_name = "LO..HI", conflicts_with = "z")]
    sweep_z: Option<String>,
    /// Decide an admissible formula through the canonical strategy only.
    #[arg(long)]
    fast: bool,
    #[arg(long, value_enum, default_value = "text")]
    output: Format,
    /// Write the strategy-restricted game as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    #[command(flatten)]
    systems: SystemArgs,
    #[arg(long, value_enum, default_value = "text")]
    output: Format,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of `.case` manifests.
    dir: PathBuf,
    #[command(flatten)]
    budget: Budget,
    #[arg(long, value_enum, default_value = "text")]
    output: Format,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    #[command(flatten)]
    systems: SystemArgs,
    #[command(flatten)]
    budget: Budget,
    #[arg(short = 'Z', long = "z", default_value_t = 1)]
    z: usize,
    /// Strategy-restricted game as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Whole game as DOT.
    #[arg(long)]
    full_dot: Option<PathBuf>,
    /// Parity automaton in HOA format.
    #[arg(long)]
    hoa: Option<PathBuf>,
    /// Refuter script (JSON) to play against the strategy.
    #[arg(long, requires = "witness")]
    script: Option<PathBuf>,
    /// Where to write the witness extracted with `--script`.
    #[arg(long, requires = "script")]
    witness: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Classify(a) => classify(a),
        Command::Bench(a) => run_bench(a),
        Command::Export(a) => export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn parse_range(s: &str) -> CliResult<(usize, usize)> {
    let bad = || Failure::Input(format!("`{s}` is not a range LO..HI"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let lo: usize = a.trim().parse().map_err(|_| bad())?;
    let hi: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn check_z(z: usize) -> CliResult<()> {
    if z == 0 || z > MAX_Z {
        return Err(Failure::Input(format!("window bound must be in 1..={MAX_Z}")));
    }
    Ok(())
}

/// Suggests the termination depth when a smaller bound leaves a loss inconclusive.
fn depth_hint(f: &AhltlFormula, systems: &[&TransitionSystem], z: usize) -> Option<String> {
    let r = classify_fragment(f, systems);
    match r.terminating_complete {
        Some(d) if z < d && r.complete_for(z).is_none() => {
            Some(format!("every system terminates within {d} steps; -Z {d} makes a loss conclusive"))
        }
        _ => None,
    }
}

fn check(a: CheckArgs) -> CliResult<u8> {
    let opts = a.budget.options()?;
    let f = load_formula(&a.formula.formula, a.formula.dialect)?;
    let owned = bind_systems(&f, &a.systems, None)?;
    let systems: Vec<&TransitionSystem> = owned.iter().collect();
    let names: Vec<String> = owned.iter().map(|s| s.name().to_string()).collect();
    let (lo, hi) = match &a.sweep_z {
        Some(r) => parse_range(r)?,
        None => (a.z, a.z),
    };
    check_z(lo)?;
    check_z(hi)?;

    let mut runs = Vec::new();
    if a.fast {
        if a.dot.is_some() {
            return Err(Failure::Input("--dot needs the full game; drop --fast".into()));
        }
        runs.push(verify_admissible_fast(&systems, &f, &opts)?);
    } else {
        let pipeline = Pipeline::new(&systems, &f, &opts)?;
        for z in lo..=hi {
            let solved = pipeline.solve(z)?;
            let done = solved.verdict.outcome == Outcome::Verified;
            if let (true, Some(path)) = (done || z == hi, &a.dot) {
                write(path, &game_to_dot(&solved.game, &solved.ctx, Some(&solved.result)))?;
            }
            if a.output == Format::Text && a.sweep_z.is_some() {
                eprintln!("Z={z}: {}", solved.verdict.outcome.name());
            }
            runs.push(solved.verdict);
            if done {
                break;
            }
        }
    }
    let last = runs.last().expect("one run");
    let hint = depth_hint(&f, &systems, last.z);
    match a.output {
        Format::Json => {
            let j = report::check_json(&f, &names, &runs, a.timings, hint);
            emit(&format!("{}\n", serde_json::to_string_pretty(&j).expect("json")));
        }
        Format::Text => {
            emit(&report::verdict_text(last, a.timings));
            if let Some(h) = hint {
                eprintln!("note: {h}");
            }
        }
    }
    Ok(report::exit_code(last.outcome))
}

fn classify(a: ClassifyArgs) -> CliResult<u8> {
    let f = load_formula(&a.formula.formula, a.formula.dialect)?;
    let with_systems = a.systems.system.is_some() || !a.systems.binds.is_empty();
    let owned = if with_systems { bind_systems(&f, &a.systems, None)? } else { Vec::new() };
    let systems: Vec<&TransitionSystem> = owned.iter().collect();
    let r = classify_fragment(&f, &systems);
    let depths: Vec<(String, Option<usize>)> =
        f.traces.iter().zip(&systems).map(|(t, s)| (t.name.clone(), termination_info(s).depth)).collect();
    match a.output {
        Format::Json => {
            let j = json!({
                "schema": report::SCHEMA,
                "formula": ahltl::spec::print_formula(&f),
                "fragment": r,
                "summary": report::fragment_summary(&r),
                "terminationDepth": depths.iter().map(|(t, d)| (t.clone(), json!(d))).collect::<serde_json::Map<_, _>>(),
            });
            emit(&format!("{}\n", serde_json::to_string_pretty(&j).expect("json")));
        }
        Format::Text => emit(&report::classify_text(&f, &r, &depths)),
    }
    Ok(0)
}

fn run_bench(a: BenchArgs) -> CliResult<u8> {
    let opts = a.budget.options()?;
    let rows = bench::run(&a.dir, &opts.build)?;
    match a.output {
        Format::Json => {
            let j = json!({ "schema": report::SCHEMA, "cases": rows });
            emit(&format!("{}\n", serde_json::to_string_pretty(&j).expect("json")));
        }
        Format::Text => emit(&bench::table(&rows)),
    }
    Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn export(a: ExportArgs) -> CliResult<u8> {
    let opts = a.budget.options()?;
    check_z(a.z)?;
    let f = load_formula(&a.formula.formula, a.formula.dialect)?;
    let owned = bind_systems(&f, &a.systems, None)?;
    let systems: Vec<&TransitionSystem> = owned.iter().collect();
    let pipeline = Pipeline::new(&systems, &f, &opts)?;
    if let Some(path) = &a.hoa {
        let mut aps: Vec<String> = (0..f.atoms.len()).map(|i| print_ltl(&Ltl::Atom(i), &f)).collect();
        aps.extend((0..f.stutters.len()).map(|j| print_ltl(&Ltl::Moved(j), &f)));
        write(path, &dpa_to_hoa(pipeline.dpa(), "psi_mod", &aps))?;
    }
    if a.dot.is_none() && a.full_dot.is_none() && a.script.is_none() {
        return Ok(0);
    }
    let solved = pipeline.solve(a.z)?;
    if let Some(path) = &a.full_dot {
        write(path, &game_to_dot(&solved.game, &solved.ctx, None))?;
    }
    let won = solved.verdict.outcome == Outcome::Verified;
    if (a.dot.is_some() || a.script.is_some()) && !won {
        eprintln!("error: {}", ahltl::Error::NotWinning);
        return Ok(report::exit_code(solved.verdict.outcome));
    }
    if let Some(path) = &a.dot {
        write(path, &game_to_dot(&solved.game, &solved.ctx, Some(&solved.result)))?;
    }
    if let (Some(script), Some(out)) = (&a.script, &a.witness) {
        let script = RefuterScript::parse(&read(script)?)?;
        let w = extract_witness(&solved.ctx, &solved.game, &solved.result, &script)?;
        let name = |i: usize, ids: &[u32]| ids.iter().map(|&s| owned[i].state_name(s).to_string()).collect::<Vec<_>>();
        let traces: serde_json::Map<String, serde_json::Value> = f
            .traces
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let l = &w.traces[&t.name];
                (t.name.clone(), json!({ "prefix": name(i, &l.prefix), "loop": name(i, &l.cycle) }))
            })
            .collect();
        let j = json!({ "schema": report::SCHEMA, "complete": w.complete, "traces": traces, "stutters": w.stutters });
        write(out, &format!("{}\n", serde_json::to_string_pretty(&j).expect("json")))?;
    }
    Ok(0)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}
