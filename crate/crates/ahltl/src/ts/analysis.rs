use serde::Serialize;

use super::{StateId, SystemBuilder, TransitionSystem};
use crate::graph;

/// Whether every path from init reaches a self-looping sink, and after how many steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TerminationInfo {
    pub terminating: bool,
    pub depth: Option<usize>,
}

/// Longest path from init through non-sink states; `None` if a reachable cycle avoids sinks.
pub fn termination_info(ts: &TransitionSystem) -> TerminationInfo {
    let n = ts.num_states();
    let seen = graph::reachable(n, [ts.init() as usize], |v| {
        ts.succ(v as StateId).iter().map(|&s| s as usize).collect::<Vec<_>>()
    });
    // sinks are cut off so that only cycles among non-sink states remain
    let sccs = graph::sccs(n, [ts.init() as usize], |v| {
        if ts.is_sink(v as StateId) {
            Vec::new()
        } else {
            ts.succ(v as StateId).iter().map(|&s| s as usize).collect()
        }
    });
    if (0..n).any(|v| seen[v] && sccs.on_cycle(v)) {
        return TerminationInfo {
            terminating: false,
            depth: None,
        };
    }
    // Tarjan numbers components in reverse topological order
    let mut order: Vec<usize> = (0..n).filter(|&v| seen[v]).collect();
    order.sort_by_key(|&v| sccs.comp[v]);
    let mut depth = vec![0usize; n];
    for v in order {
        let s = v as StateId;
        if !ts.is_sink(s) {
            depth[v] = 1 + ts.succ(s).iter().map(|&t| depth[t as usize]).max().unwrap_or(0);
        }
    }
    TerminationInfo {
        terminating: true,
        depth: Some(depth[ts.init() as usize]),
    }
}

/// Subsystem induced by the states reachable from init, keeping their relative order.
pub fn restrict_reachable(ts: &TransitionSystem) -> TransitionSystem {
    let n = ts.num_states();
    let seen = graph::reachable(n, [ts.init() as usize], |v| {
        ts.succ(v as StateId).iter().map(|&s| s as usize).collect::<Vec<_>>()
    });
    if seen.iter().all(|&b| b) {
        return ts.clone();
    }
    let mut b = SystemBuilder::new(ts.name());
    for d in ts.decls() {
        b.var(d.name.clone(), d.sort);
    }
    let mut map = vec![None; n];
    for s in ts.states().filter(|&s| seen[s as usize]) {
        let label: Vec<(&str, _)> = ts
            .decls()
            .iter()
            .map(|d| d.name.as_str())
            .zip(ts.label(s).iter().copied())
            .collect();
        map[s as usize] = Some(b.state(ts.state_name(s), &label));
    }
    for s in ts.states().filter(|&s| seen[s as usize]) {
        for &t in ts.succ(s) {
            b.edge(map[s as usize].unwrap(), map[t as usize].unwrap());
        }
    }
    b.init(map[ts.init() as usize].unwrap());
    b.build().expect("a reachable restriction of a valid system is valid")
}
