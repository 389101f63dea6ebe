use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ahltl::spec::{from_trajectory_form, parse_formula, AhltlFormula};
use ahltl::ts::{parse_system, TransitionSystem};
use ahltl::Error;
use clap::{Args, ValueEnum};

/// Failure of a command, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::CapacityExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dialect {
    Stuttering,
    Trajectory,
}

#[derive(Args, Debug, Clone)]
pub struct FormulaArgs {
    /// Formula file (`.ahq`).
    #[arg(long, short = 'f')]
    pub formula: PathBuf,
    #[arg(long, value_enum, default_value = "stuttering")]
    pub dialect: Dialect,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SystemArgs {
    /// System bound to every trace without an explicit binding.
    #[arg(long, short = 's')]
    pub system: Option<PathBuf>,
    /// Binds one trace to a system, as `NAME=PATH`. Repeatable.
    #[arg(long = "bind", value_name = "NAME=PATH")]
    pub binds: Vec<String>,
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_formula(path: &Path, dialect: Dialect) -> CliResult<AhltlFormula> {
    let text = read(path)?;
    let parsed = match dialect {
        Dialect::Stuttering => parse_formula(&text),
        Dialect::Trajectory => from_trajectory_form(&text),
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> CliResult<TransitionSystem> {
    parse_system(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// One system per trace of `f`, in trace order.
pub fn bind_systems(f: &AhltlFormula, args: &SystemArgs, base: Option<&Path>) -> CliResult<Vec<TransitionSystem>> {
    let mut explicit: BTreeMap<String, PathBuf> = BTreeMap::new();
    for b in &args.binds {
        let (name, path) = b
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("binding `{b}` is not of the form NAME=PATH")))?;
        if !f.traces.iter().any(|t| t.name == name) {
            return Err(Failure::Input(format!("binding for unknown trace `{name}`")));
        }
        explicit.insert(name.to_string(), PathBuf::from(path));
    }
    let resolve = |p: &Path| match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    };
    let mut cache: BTreeMap<PathBuf, TransitionSystem> = BTreeMap::new();
    let mut out = Vec::new();
    for t in &f.traces {
        let path = explicit
            .get(&t.name)
            .or(args.system.as_ref())
            .map(|p| resolve(p))
            .ok_or_else(|| Failure::Input(format!("no system for trace `{}`; use --system or --bind", t.name)))?;
        if !cache.contains_key(&path) {
            let ts = load_system(&path)?;
            cache.insert(path.clone(), ts);
        }
        out.push(cache[&path].clone());
    }
    Ok(out)
}
