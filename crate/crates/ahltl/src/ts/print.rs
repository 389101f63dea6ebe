use std::fmt::Write;

use super::TransitionSystem;

/// Renders a system in the `.ats` format accepted by [`super::parse_system`].
pub fn print_system(ts: &TransitionSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system {}", ts.name());
    for d in ts.decls() {
        let _ = writeln!(out, "var {} : {}", d.name, d.sort);
    }
    for s in ts.states() {
        let label: Vec<String> = ts
            .decls()
            .iter()
            .zip(ts.label(s))
            .map(|(d, v)| format!("{} = {v}", d.name))
            .collect();
        let init = if s == ts.init() { " init" } else { "" };
        if label.is_empty() {
            let _ = writeln!(out, "state {} {{}}{init}", ts.state_name(s));
        } else {
            let _ = writeln!(out, "state {} {{ {} }}{init}", ts.state_name(s), label.join(", "));
        }
    }
    for s in ts.states() {
        let targets: Vec<&str> = ts.succ(s).iter().map(|&t| ts.state_name(t)).collect();
        let _ = writeln!(out, "trans {} -> {}", ts.state_name(s), targets.join(", "));
    }
    out
}
