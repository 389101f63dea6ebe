//! Runs a directory of case manifests.
//!
//! A manifest is a `.case` file of `key=value` lines: `system`, `formula`,
//! `z`, `expect` (verified, violated or unknown), optionally `dialect` and
//! `bind.NAME` for per-trace systems. Paths are relative to the manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ahltl::game::BuildOptions;
use ahltl::verify::{verify, VerifyOptions};
use serde::Serialize;

use crate::inputs::{bind_systems, load_formula, read, CliResult, Dialect, Failure, SystemArgs};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub case: String,
    pub expect: String,
    pub outcome: String,
    pub vertices: usize,
    pub edges: usize,
    pub t_construct: f64,
    pub t_solve: f64,
    pub t_total: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn parse_manifest(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("line {}: expected key=value", no + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn run_case(path: &Path, build: &BuildOptions) -> CliResult<(String, ahltl::verify::Verdict)> {
    let m = parse_manifest(&read(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let get = |k: &str| m.get(k).cloned().ok_or_else(|| Failure::Input(format!("{}: missing `{k}`", path.display())));
    let expect = get("expect")?;
    let dialect = match m.get("dialect").map(String::as_str) {
        None | Some("stuttering") => Dialect::Stuttering,
        Some("trajectory") => Dialect::Trajectory,
        Some(d) => return Err(Failure::Input(format!("{}: unknown dialect `{d}`", path.display()))),
    };
    let f = load_formula(&base.join(get("formula")?), dialect)?;
    let z: usize = get("z")?.parse().map_err(|_| Failure::Input(format!("{}: `z` is not a number", path.display())))?;
    let args = SystemArgs {
        system: m.get("system").map(PathBuf::from),
        binds: m
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("bind.").map(|t| format!("{t}={v}")))
            .collect(),
    };
    let owned = bind_systems(&f, &args, Some(base))?;
    let systems: Vec<_> = owned.iter().collect();
    let opts = VerifyOptions { build: build.clone(), ..Default::default() };
    Ok((expect, verify(&systems, &f, z, &opts)?))
}

/// Runs every `.case` file in `dir`, in name order, isolating failures per case.
pub fn run(dir: &Path, build: &BuildOptions) -> CliResult<Vec<Row>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Input(format!("cannot read {}: {e}", dir.display())))?;
    let mut cases: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "case"))
        .collect();
    cases.sort();
    let mut rows = Vec::new();
    for path in cases {
        let case = path.file_stem().unwrap().to_string_lossy().into_owned();
        let row = match run_case(&path, build) {
            Ok((expect, v)) => Row {
                case,
                pass: v.outcome.name() == expect,
                expect,
                outcome: v.outcome.name().into(),
                vertices: v.stats.vertices,
                edges: v.stats.edges,
                t_construct: v.timings.construct,
                t_solve: v.timings.solve,
                t_total: v.timings.total,
                error: None,
            },
            Err(e) => Row {
                case,
                expect: String::new(),
                outcome: "error".into(),
                vertices: 0,
                edges: 0,
                t_construct: 0.0,
                t_solve: 0.0,
                t_total: 0.0,
                pass: false,
                error: Some(e.message().to_string()),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn table(rows: &[Row]) -> String {
    let mut out = format!(
        "{:<20} {:<9} {:<9} {:>9} {:>9} {:>9} {:>9} {:>9}  result\n",
        "case", "expect", "outcome", "vertices", "edges", "t_const", "t_solve", "t_total"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<20} {:<9} {:<9} {:>9} {:>9} {:>9.3} {:>9.3} {:>9.3}  {}\n",
            r.case,
            r.expect,
            r.outcome,
            r.vertices,
            r.edges,
            r.t_construct,
            r.t_solve,
            r.t_total,
            if r.pass { "PASS" } else { "FAIL" }
        ));
        if let Some(e) = &r.error {
            out.push_str(&format!("  {e}\n"));
        }
    }
    out
}
