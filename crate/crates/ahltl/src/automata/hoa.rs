use std::fmt::Write;

use super::{Cube, DetParityAutomaton, NondetBuchiAutomaton};

fn header(out: &mut String, name: &str, states: usize, init: u32, aps: &[String]) {
    let _ = writeln!(out, "HOA: v1");
    let _ = writeln!(out, "name: \"{}\"", name.replace('"', "'"));
    let _ = writeln!(out, "States: {states}");
    let _ = writeln!(out, "Start: {init}");
    let quoted: Vec<String> = aps.iter().map(|a| format!("\"{}\"", a.replace('"', "'"))).collect();
    let _ = writeln!(out, "AP: {} {}", aps.len(), quoted.join(" "));
}

fn cube_label(c: Cube, bits: usize) -> String {
    let lits: Vec<String> = (0..bits)
        .filter_map(|b| {
            if c.pos >> b & 1 == 1 {
                Some(b.to_string())
            } else if c.neg >> b & 1 == 1 {
                Some(format!("!{b}"))
            } else {
                None
            }
        })
        .collect();
    if lits.is_empty() {
        "t".into()
    } else {
        lits.join("&")
    }
}

/// `aps[b]` names letter bit `b`.
pub fn nba_to_hoa(nba: &NondetBuchiAutomaton, name: &str, aps: &[String]) -> String {
    let mut out = String::new();
    header(&mut out, name, nba.num_states(), nba.init(), aps);
    let _ = writeln!(out, "acc-name: Buchi");
    let _ = writeln!(out, "Acceptance: 1 Inf(0)");
    let _ = writeln!(out, "--BODY--");
    for q in 0..nba.num_states() as u32 {
        let acc = if nba.is_accepting(q) { " {0}" } else { "" };
        let _ = writeln!(out, "State: {q}{acc}");
        for &(c, t) in nba.edges(q) {
            let _ = writeln!(out, "[{}] {t}", cube_label(c, nba.bits()));
        }
    }
    let _ = writeln!(out, "--END--");
    out
}

/// Parity min even with one explicit edge per letter.
pub fn dpa_to_hoa(dpa: &DetParityAutomaton, name: &str, aps: &[String]) -> String {
    let mut out = String::new();
    header(&mut out, name, dpa.num_states(), dpa.init(), aps);
    let k = dpa.priorities().iter().max().map_or(1, |m| m + 1);
    let mut cond = String::new();
    for p in (0..k).rev() {
        cond = match (p % 2 == 0, cond.is_empty()) {
            (true, true) => format!("Inf({p})"),
            (false, true) => format!("Fin({p})"),
            (true, false) => format!("Inf({p}) | ({cond})"),
            (false, false) => format!("Fin({p}) & ({cond})"),
        };
    }
    let _ = writeln!(out, "acc-name: parity min even {k}");
    let _ = writeln!(out, "Acceptance: {k} {cond}");
    let _ = writeln!(out, "properties: deterministic complete state-acc");
    let _ = writeln!(out, "--BODY--");
    let bits = dpa.bits();
    let full = if bits == 32 { u32::MAX } else { (1u32 << bits) - 1 };
    for q in 0..dpa.num_states() as u32 {
        let _ = writeln!(out, "State: {q} {{{}}}", dpa.priority(q));
        for l in 0..dpa.num_letters() as u32 {
            let c = Cube { pos: l, neg: !l & full };
            let _ = writeln!(out, "[{}] {}", cube_label(c, bits), dpa.step(q, l));
        }
    }
    let _ = writeln!(out, "--END--");
    out
}

#[cfg(test)]
mod tests {
    use super::super::{determinize, ltl_to_nba, DeterminizeOptions};
    use super::*;
    use crate::spec::Ltl;

    #[test]
    fn shape() {
        let nba = ltl_to_nba(&Ltl::finally(Ltl::globally(Ltl::Atom(0))), 1, 1);
        let dpa = determinize(&nba, &DeterminizeOptions::default()).unwrap();
        let aps = vec!["p".to_string()];
        let h = dpa_to_hoa(&dpa, "FG p", &aps);
        assert!(h.starts_with("HOA: v1\n"));
        assert!(h.contains("AP: 1 \"p\""));
        assert_eq!(h.matches("State:").count(), dpa.num_states());
        let n = nba_to_hoa(&nba, "FG p", &aps);
        assert!(n.contains("Acceptance: 1 Inf(0)") && n.ends_with("--END--\n"));
    }
}
