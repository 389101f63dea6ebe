//! Bounded search for counterexamples, sound for refutation only.
//!
//! Universal traces are enumerated as lassos up to a length bound and
//! universal stutterings as short progress lassos. Existential traces are
//! enumerated exhaustively, which needs their systems to terminate.
//! Existential stutterings are decided exactly by an emptiness check on the
//! product of the body automaton with the aligned positions.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::witness::{PathLasso, StutterSchedule};
use crate::automata::{ltl_to_nba, NondetBuchiAutomaton};
use crate::error::{Error, Result};
use crate::game::product;
use crate::graph;
use crate::spec::{check_bindings, compile_atoms, AhltlFormula, CompiledAtom, Quant};
use crate::ts::{termination_info, StateId, TransitionSystem, Value};

#[derive(Clone, Debug)]
pub struct RefuteOptions {
    /// Longest universal trace lasso, counted in states.
    pub max_lasso: usize,
    /// Longest prefix of a universal progress schedule.
    pub max_schedule_prefix: usize,
    /// Budget on the number of product emptiness checks.
    pub max_cases: usize,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions {
            max_lasso: 6,
            max_schedule_prefix: 3,
            max_cases: 200_000,
        }
    }
}

/// Universal traces under which no existential choice satisfies the body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub traces: BTreeMap<String, PathLasso>,
    /// Product emptiness checks performed.
    pub cases: usize,
}

/// Looks for universal traces that defeat every existential response.
///
/// `Ok(None)` means no counterexample exists within the bounds, which proves
/// nothing. A returned refutation is a genuine violation.
pub fn refute_bounded(
    systems: &[&TransitionSystem],
    f: &AhltlFormula,
    opts: &RefuteOptions,
) -> Result<Option<Refutation>> {
    if !f.is_forall_exists() {
        return Err(Error::NotForallExists("a universal quantifier follows an existential one".into()));
    }
    check_bindings(f, systems)?;
    let forall = f.traces_with(Quant::Forall);
    let exists = f.traces_with(Quant::Exists);
    for &i in &exists {
        if !termination_info(systems[i]).terminating {
            return Err(Error::Unsupported(format!(
                "existential trace `{}` ranges over a non-terminating system",
                f.traces[i].name
            )));
        }
        if !f.stutters_on(i).iter().all(|&j| f.stutters[j].quant == Quant::Exists) {
            return Err(Error::Unsupported("universal stuttering of an existential trace".into()));
        }
    }
    let atoms = compile_atoms(f, systems)?;
    let nba = ltl_to_nba(&f.body, atoms.len(), atoms.len());
    let search = Search { systems, f, atoms: &atoms, nba: &nba };

    let forall_choices: Vec<Vec<PathLasso>> = forall.iter().map(|&i| lassos(systems[i], opts.max_lasso)).collect();
    let exists_choices: Vec<Vec<PathLasso>> = exists.iter().map(|&i| maximal_paths(systems[i])).collect();
    let univ_stutters = f.stutters_with(Quant::Forall);
    let schedules = schedules(opts.max_schedule_prefix);
    let mut cases = 0usize;

    for a in product(&forall_choices) {
        let defeated = product(&exists_choices).into_iter().all(|e| {
            let mut traces: Vec<Option<&PathLasso>> = vec![None; f.traces.len()];
            for (k, &i) in forall.iter().enumerate() {
                traces[i] = Some(&a[k]);
            }
            for (k, &i) in exists.iter().enumerate() {
                traces[i] = Some(&e[k]);
            }
            let traces: Vec<&PathLasso> = traces.into_iter().map(|t| t.unwrap()).collect();
            let per: Vec<Vec<usize>> = univ_stutters.iter().map(|_| (0..schedules.len()).collect()).collect();
            product(&per).into_iter().any(|pick| {
                cases += 1;
                let sched: Vec<&StutterSchedule> = pick.iter().map(|&s| &schedules[s]).collect();
                !search.satisfiable(&traces, &univ_stutters, &sched)
            })
        });
        if cases > opts.max_cases {
            return Err(Error::CapacityExceeded {
                phase: "refutation",
                what: "cases",
                limit: opts.max_cases,
            });
        }
        if defeated {
            let traces = forall.iter().zip(a).map(|(&i, l)| (f.traces[i].name.clone(), l)).collect();
            return Ok(Some(Refutation { traces, cases }));
        }
    }
    Ok(None)
}

struct Search<'a> {
    systems: &'a [&'a TransitionSystem],
    f: &'a AhltlFormula,
    atoms: &'a [CompiledAtom],
    nba: &'a NondetBuchiAutomaton,
}

impl Search<'_> {
    /// Whether fair existential stutterings make the body true, with all
    /// traces and the universal schedules fixed.
    fn satisfiable(&self, traces: &[&PathLasso], univ: &[usize], sched: &[&StutterSchedule]) -> bool {
        let f = self.f;
        let m = f.stutters.len();
        let ex: Vec<usize> = (0..m).filter(|j| !univ.contains(j)).collect();
        // node: positions of every stuttering, schedule cursors, automaton state
        let mut ids: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut nodes: Vec<Vec<u32>> = Vec::new();
        let mut edges: Vec<Vec<(usize, u32)>> = Vec::new();
        let mut start = vec![0u32; m + univ.len()];
        start.push(self.nba.init());
        ids.insert(start.clone(), 0);
        nodes.push(start);
        let mut k = 0;
        while k < nodes.len() {
            let node = nodes[k].clone();
            let labels: Vec<&[Value]> = (0..m)
                .map(|j| {
                    let b = f.stutters[j].base;
                    self.systems[b].label(traces[b].at(node[j] as usize))
                })
                .collect();
            let mut letter = 0u32;
            for (a, atom) in self.atoms.iter().enumerate() {
                if atom.eval(&labels) {
                    letter |= 1 << a;
                }
            }
            let mut base = node.clone();
            for (u, &j) in univ.iter().enumerate() {
                let c = node[m + u] as usize;
                if sched[u].at(c) {
                    base[j] = traces[f.stutters[j].base].next(node[j] as usize) as u32;
                }
                base[m + u] = sched[u].next(c) as u32;
            }
            let mut out = Vec::new();
            for moved in 0u32..1 << ex.len() {
                let mut n = base.clone();
                for (e, &j) in ex.iter().enumerate() {
                    if moved >> e & 1 == 1 {
                        n[j] = traces[f.stutters[j].base].next(node[j] as usize) as u32;
                    }
                }
                for q in self.nba.successors(node[m + univ.len()], letter) {
                    let mut t = n.clone();
                    *t.last_mut().unwrap() = q;
                    let id = *ids.entry(t.clone()).or_insert_with(|| {
                        nodes.push(t);
                        nodes.len() - 1
                    });
                    out.push((id, moved));
                }
            }
            edges.push(out);
            k += 1;
        }
        let n = nodes.len();
        let sccs = graph::sccs(n, [0], |v| edges[v].iter().map(|e| e.0).collect::<Vec<_>>());
        let full = (1u32 << ex.len()) - 1;
        let mut moved = vec![0u32; sccs.count()];
        let mut accepting = vec![false; sccs.count()];
        for v in 0..n {
            let c = sccs.comp[v] as usize;
            if self.nba.is_accepting(*nodes[v].last().unwrap()) {
                accepting[c] = true;
            }
            for &(w, b) in &edges[v] {
                if sccs.comp[w] as usize == c {
                    moved[c] |= b;
                }
            }
        }
        (0..sccs.count()).any(|c| sccs.cyclic[c] && accepting[c] && moved[c] == full)
    }
}

/// Every lasso path from init with at most `max` states in total.
fn lassos(ts: &TransitionSystem, max: usize) -> Vec<PathLasso> {
    let mut out = Vec::new();
    let mut stack = vec![vec![ts.init()]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        for &s in ts.succ(last) {
            if let Some(j) = path.iter().position(|&x| x == s) {
                out.push(PathLasso { prefix: path[..j].to_vec(), cycle: path[j..].to_vec() });
            } else if path.len() < max {
                let mut p = path.clone();
                p.push(s);
                stack.push(p);
            }
        }
    }
    out.sort_by(|a, b| (a.prefix.len() + a.cycle.len()).cmp(&(b.prefix.len() + b.cycle.len())).then(a.cmp(b)));
    out
}

/// All paths of a terminating system, each ending in its sink's self-loop.
fn maximal_paths(ts: &TransitionSystem) -> Vec<PathLasso> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<StateId>> = vec![vec![ts.init()]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if ts.is_sink(last) {
            out.push(PathLasso { prefix: path[..path.len() - 1].to_vec(), cycle: vec![last] });
            continue;
        }
        for &s in ts.succ(last) {
            let mut p = path.clone();
            p.push(s);
            stack.push(p);
        }
    }
    out.sort();
    out
}

/// Fair progress schedules: a prefix of up to `max` steps, then `1` or `01` forever.
fn schedules(max: usize) -> Vec<StutterSchedule> {
    let mut out = Vec::new();
    for len in 0..=max {
        for bits in 0u32..1 << len {
            let prefix: Vec<bool> = (0..len).map(|i| bits >> i & 1 == 1).collect();
            for cycle in [vec![true], vec![false, true]] {
                out.push(StutterSchedule { prefix: prefix.clone(), cycle });
            }
        }
    }
    out
}
