use std::fmt::Write;

use ahltl::spec::{AhltlFormula, FragmentReport};
use ahltl::verify::{Outcome, Reason, Verdict};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

pub fn exit_code(o: Outcome) -> u8 {
    match o {
        Outcome::Verified => 0,
        Outcome::Violated => 1,
        Outcome::Unknown => 2,
    }
}

pub fn reason_text(r: &Reason) -> String {
    match r {
        Reason::WinFromAllInitials => "the verifier wins from every initial vertex".into(),
        Reason::LossInCompleteFragment { fragment, z } => {
            format!("lost in the {} fragment, complete at Z={z}", fragment.name())
        }
        Reason::LossIncomplete => "lost, but no completeness fragment applies at this Z".into(),
    }
}

pub fn fragment_summary(r: &FragmentReport) -> String {
    match (r.complete_via, r.complete_at_z) {
        (Some(tag), Some(z)) => format!("{}, complete at Z={z}", tag.name()),
        _ if r.is_forall_exists => "forall-exists; no completeness fragment applies".into(),
        _ => "not forall-exists".into(),
    }
}

pub fn verdict_json(v: &Verdict, timings: bool) -> Value {
    let mut j = serde_json::to_value(v).expect("verdict serializes");
    j["completeAtZ"] = json!(v.fragment.complete_at_z);
    if timings {
        j["timings"] = serde_json::to_value(&v.timings).expect("timings serialize");
    }
    j
}

pub fn check_json(f: &AhltlFormula, names: &[String], runs: &[Verdict], timings: bool, hint: Option<String>) -> Value {
    let last = runs.last().expect("at least one run");
    let mut j = verdict_json(last, timings);
    j["schema"] = json!(SCHEMA);
    j["formula"] = json!(ahltl::spec::print_formula(f));
    let bind: serde_json::Map<String, Value> =
        f.traces.iter().zip(names).map(|(t, n)| (t.name.clone(), json!(n))).collect();
    j["bindings"] = Value::Object(bind);
    if runs.len() > 1 {
        j["sweep"] = json!(runs.iter().map(|r| json!({"z": r.z, "outcome": r.outcome})).collect::<Vec<_>>());
    }
    if let Some(h) = hint {
        j["hint"] = json!(h);
    }
    j
}

pub fn verdict_text(v: &Verdict, timings: bool) -> String {
    let s = &v.stats;
    let mut out = String::new();
    writeln!(out, "outcome    {} at Z={}", v.outcome.name(), v.z).unwrap();
    writeln!(out, "reason     {}", reason_text(&v.reason)).unwrap();
    writeln!(out, "fragment   {}", fragment_summary(&v.fragment)).unwrap();
    writeln!(
        out,
        "game       {} vertices, {} edges, {} initial ({} won), {} priorities",
        s.vertices, s.edges, s.initials, s.initials_won, s.priorities
    )
    .unwrap();
    writeln!(out, "automaton  {} NBA states, {} DPA states, {} priorities", s.nba_states, s.dpa_states, s.dpa_priorities)
        .unwrap();
    if timings {
        let t = &v.timings;
        writeln!(
            out,
            "time       automaton {:.3}s, construct {:.3}s, solve {:.3}s, total {:.3}s",
            t.automaton, t.construct, t.solve, t.total
        )
        .unwrap();
    }
    out
}

pub fn classify_text(f: &AhltlFormula, r: &FragmentReport, depths: &[(String, Option<usize>)]) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    writeln!(out, "formula           {}", ahltl::spec::print_formula(f)).unwrap();
    writeln!(out, "forall-exists     {}", yes(r.is_forall_exists)).unwrap();
    let per: Vec<String> = r.stutters_per_trace.iter().map(|(t, n)| format!("{t}:{n}")).collect();
    writeln!(out, "stutterings       {}", per.join(" ")).unwrap();
    writeln!(out, "universal         {}", r.universal_stutter_count).unwrap();
    writeln!(out, "alternation-free  {}", yes(r.alternation_free)).unwrap();
    match &r.admissible {
        Some(info) => {
            let colors: Vec<String> = info
                .color_sets
                .iter()
                .map(|c| {
                    let vars: Vec<&str> = c.vars.iter().map(String::as_str).collect();
                    format!("{}~{}:{{{}}}", f.traces[c.i].name, f.traces[c.j].name, vars.join(","))
                })
                .collect();
            writeln!(out, "admissible        yes {}", colors.join(" ")).unwrap();
        }
        None => writeln!(out, "admissible        no").unwrap(),
    }
    writeln!(out, "rectangle-closed  {}", yes(r.rectangle_closed)).unwrap();
    for (t, d) in depths {
        match d {
            Some(d) => writeln!(out, "termination       {t}: depth {d}").unwrap(),
            None => writeln!(out, "termination       {t}: does not terminate").unwrap(),
        }
    }
    writeln!(out, "summary           {}", fragment_summary(r)).unwrap();
    out
}
