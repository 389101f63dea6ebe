//! Playing the verifier's strategy against a scripted refuter and reading the
//! existential traces and stutterings off the resulting play.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::automata::{ltl_lasso_eval, LassoWord};
use crate::error::{Error, Result};
use crate::game::{GameContext, GameGraph, Position, Stage};
use crate::solver::SolveResult;
use crate::spec::{compile_atoms, AhltlFormula, Quant};
use crate::ts::{StateId, TransitionSystem, Value};

/// An ultimately periodic path. An empty loop marks a play cut short.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathLasso {
    pub prefix: Vec<StateId>,
    #[serde(rename = "loop")]
    pub cycle: Vec<StateId>,
}

impl PathLasso {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn at(&self, i: usize) -> StateId {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[i - self.prefix.len()]
        }
    }

    pub fn next(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Starts at init, follows edges and closes its loop.
    pub fn is_path(&self, ts: &TransitionSystem) -> bool {
        if self.cycle.is_empty() || self.at(0) != ts.init() {
            return false;
        }
        (0..self.len()).all(|i| ts.succ(self.at(i)).contains(&self.at(self.next(i))))
    }
}

/// Entry `t` is true when the stuttering advances between steps `t` and `t + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StutterSchedule {
    pub prefix: Vec<bool>,
    #[serde(rename = "loop")]
    pub cycle: Vec<bool>,
}

impl StutterSchedule {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn at(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[i - self.prefix.len()]
        }
    }

    pub fn next(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Advances infinitely often.
    pub fn is_fair(&self) -> bool {
        self.cycle.contains(&true)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceAssignmentLasso {
    pub traces: BTreeMap<String, PathLasso>,
    pub stutters: BTreeMap<String, StutterSchedule>,
    /// False when the script ran out before the play closed a loop.
    pub complete: bool,
}

/// One refuter round: next states of universal traces and advanced universal stutterings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptRound {
    #[serde(default)]
    pub states: BTreeMap<String, String>,
    #[serde(default)]
    pub sched: Vec<String>,
}

/// Named path with an optional loop, used by the path form of a script.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPath {
    pub prefix: Vec<String>,
    #[serde(rename = "loop", default)]
    pub cycle: Vec<String>,
}

/// Refuter choices for [`extract_witness`].
///
/// Round scripts for window bound `z` spend their first `z - 1` rounds on
/// the initial windows. The path form fixes each universal trace as a lasso
/// and advances every universal stuttering each round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RefuterScript {
    Rounds(Vec<ScriptRound>),
    Lasso {
        prefix: Vec<ScriptRound>,
        #[serde(rename = "loop")]
        cycle: Vec<ScriptRound>,
    },
    Paths { paths: BTreeMap<String, NamedPath> },
}

impl RefuterScript {
    pub fn parse(text: &str) -> Result<RefuterScript> {
        serde_json::from_str(text).map_err(|e| Error::ScriptInvalid(e.to_string()))
    }
}

/// A resolved round: successor per universal trace, schedule mask.
type Round = (Vec<StateId>, u32);

enum Driver {
    Rounds { rounds: Vec<Round>, cycle: usize },
    /// `front[k]` is the path position at the front of the window.
    Paths { paths: Vec<PathLasso>, front: Vec<usize> },
}

impl Driver {
    /// Cursor state, for detecting repeated positions of the play.
    fn key(&self, cursor: usize) -> Vec<usize> {
        match self {
            Driver::Rounds { .. } => vec![cursor],
            Driver::Paths { front, .. } => front.clone(),
        }
    }
}

fn resolve(ctx: &GameContext, script: &RefuterScript) -> Result<(Driver, Vec<Vec<StateId>>)> {
    let f = ctx.formula();
    let forall = f.traces_with(Quant::Forall);
    let z = ctx.z();
    let state = |i: usize, name: &str| {
        ctx.system(i).state_id(name).ok_or_else(|| {
            Error::ScriptInvalid(format!("no state `{name}` in system `{}`", ctx.system(i).name()))
        })
    };
    let round = |r: &ScriptRound| -> Result<Round> {
        for k in r.states.keys() {
            if !forall.iter().any(|&i| f.traces[i].name == *k) {
                return Err(Error::ScriptInvalid(format!("`{k}` is not a universal trace")));
            }
        }
        let next = forall
            .iter()
            .map(|&i| {
                let name = &f.traces[i].name;
                r.states
                    .get(name)
                    .ok_or_else(|| Error::ScriptInvalid(format!("round lacks a state for `{name}`")))
                    .and_then(|s| state(i, s))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sched = 0u32;
        for b in &r.sched {
            match f.stutters.iter().position(|s| s.name == *b) {
                Some(j) if f.stutters[j].quant == Quant::Forall => sched |= 1 << j,
                _ => return Err(Error::ScriptInvalid(format!("`{b}` is not a universal stuttering"))),
            }
        }
        Ok((next, sched))
    };
    let mut starts: Vec<Vec<StateId>> = forall.iter().map(|&i| vec![ctx.system(i).init()]).collect();
    match script {
        RefuterScript::Rounds(_) | RefuterScript::Lasso { .. } => {
            let (prefix, cycle) = match script {
                RefuterScript::Rounds(r) => (r.as_slice(), &[][..]),
                RefuterScript::Lasso { prefix, cycle } => (prefix.as_slice(), cycle.as_slice()),
                RefuterScript::Paths { .. } => unreachable!(),
            };
            let mut rounds = prefix.iter().chain(cycle).map(round).collect::<Result<Vec<_>>>()?;
            let head = if forall.is_empty() { 0 } else { z - 1 };
            if prefix.len() < head {
                return Err(Error::ScriptInvalid(format!("window bound {z} needs {head} opening rounds")));
            }
            for (next, sched) in rounds.drain(..head) {
                if sched != 0 {
                    return Err(Error::ScriptInvalid("opening rounds carry no schedule".into()));
                }
                for (k, s) in next.into_iter().enumerate() {
                    starts[k].push(s);
                }
            }
            let cycle_start = if cycle.is_empty() { usize::MAX } else { prefix.len() - head };
            Ok((Driver::Rounds { rounds, cycle: cycle_start }, starts))
        }
        RefuterScript::Paths { paths } => {
            for k in paths.keys() {
                if !forall.iter().any(|&i| f.traces[i].name == *k) {
                    return Err(Error::ScriptInvalid(format!("`{k}` is not a universal trace")));
                }
            }
            let mut out = Vec::new();
            for &i in &forall {
                let name = &f.traces[i].name;
                let p = paths.get(name).ok_or_else(|| Error::ScriptInvalid(format!("no path for `{name}`")))?;
                let lasso = PathLasso {
                    prefix: p.prefix.iter().map(|s| state(i, s)).collect::<Result<_>>()?,
                    cycle: p.cycle.iter().map(|s| state(i, s)).collect::<Result<_>>()?,
                };
                if !lasso.is_path(ctx.system(i)) {
                    return Err(Error::ScriptInvalid(format!("the path for `{name}` is not a lasso of its system")));
                }
                out.push(lasso);
            }
            for (k, l) in out.iter().enumerate() {
                let mut at = 0;
                for _ in 1..z {
                    at = l.next(at);
                    starts[k].push(l.at(at));
                }
            }
            let front = vec![0; out.len()];
            Ok((Driver::Paths { paths: out, front }, starts))
        }
    }
}

/// Plays the strategy in `result` against the script from the matching initial vertex.
pub fn extract_witness(
    ctx: &GameContext,
    g: &GameGraph,
    result: &SolveResult,
    script: &RefuterScript,
) -> Result<TraceAssignmentLasso> {
    let f = ctx.formula();
    let forall = f.traces_with(Quant::Forall);
    let (mut driver, starts) = resolve(ctx, script)?;
    let start = g
        .initials()
        .iter()
        .copied()
        .find(|&v| {
            let p = g.vertex(v).position().expect("initial vertex");
            forall.iter().enumerate().all(|(k, &i)| p.windows[i].as_slice() == starts[k].as_slice())
        })
        .ok_or_else(|| Error::ScriptInvalid("the opening states do not form an initial window".into()))?;
    if !result.verifier_wins(start) {
        return Err(Error::NotWinning);
    }

    let n = f.traces.len();
    let mut drops: Vec<Vec<Option<StateId>>> = vec![Vec::new(); n];
    let mut progress: Vec<u32> = Vec::new();
    let mut seen: HashMap<(u32, Vec<usize>), usize> = HashMap::new();
    let mut cursor = 0usize;
    let mut v = start;
    let mut closed = None;
    loop {
        let p = g.vertex(v).position().ok_or(Error::NotWinning)?.clone();
        match p.stage {
            Stage::Update => {
                let t = progress.len();
                if let Some(&m) = seen.get(&(v, driver.key(cursor))) {
                    closed = Some(m);
                    break;
                }
                seen.insert((v, driver.key(cursor)), t);
                progress.push(p.progressed);
                let next = g.succ(v)[0];
                for i in 0..n {
                    // mirrors the trim rule: the front goes once every stuttering has left it
                    let moved_on = f.stutters_on(i).iter().all(|&j| p.pointers[j] != 0) && p.windows[i].len() > 1;
                    drops[i].push(moved_on.then(|| p.windows[i][0]));
                    if let (true, Driver::Paths { paths, front }) = (moved_on, &mut driver) {
                        if let Some(k) = forall.iter().position(|&x| x == i) {
                            front[k] = paths[k].next(front[k]);
                        }
                    }
                }
                v = next;
            }
            Stage::Exists => {
                v = result.strategy(g.arena(), v).ok_or(Error::NotWinning)?;
            }
            Stage::Forall => {
                let choice = match &mut driver {
                    Driver::Rounds { rounds, cycle } => {
                        if cursor < rounds.len() {
                            let r = rounds[cursor].clone();
                            cursor += 1;
                            if cursor == rounds.len() && *cycle != usize::MAX {
                                cursor = *cycle;
                            }
                            Some(r)
                        } else {
                            None
                        }
                    }
                    Driver::Paths { paths, front } => {
                        let next = forall
                            .iter()
                            .enumerate()
                            .map(|(k, &i)| {
                                let l = &paths[k];
                                l.at((0..p.windows[i].len()).fold(front[k], |a, _| l.next(a)))
                            })
                            .collect();
                        Some((next, ctx.forall_mask()))
                    }
                };
                v = match choice {
                    Some((next, sched)) => {
                        let w = ctx
                            .apply_move(&p, &next, sched)
                            .ok_or_else(|| Error::ScriptInvalid(format!("illegal move in round {}", progress.len())))?;
                        g.id_of(&w).expect("successor is in the game")
                    }
                    None if g.succ(v).len() == 1 => g.succ(v)[0],
                    None => break,
                };
            }
        }
    }

    let mut out = TraceAssignmentLasso { complete: closed.is_some(), ..Default::default() };
    let last = g.vertex(v).position().cloned();
    let split = closed.unwrap_or(progress.len());
    for i in 0..n {
        let take = |r: std::ops::Range<usize>| -> Vec<StateId> { drops[i][r].iter().flatten().copied().collect() };
        let mut lasso = PathLasso { prefix: take(0..split), cycle: take(split..drops[i].len()) };
        if closed.is_some() && lasso.cycle.is_empty() {
            // a trace frozen inside the loop only happens under an unfair universal schedule
            return Err(Error::ScriptInvalid(format!("trace `{}` never advances in the loop", f.traces[i].name)));
        }
        if closed.is_none() {
            lasso.prefix.extend(last.as_ref().map(|p: &Position| p.windows[i].to_vec()).unwrap_or_default());
        }
        out.traces.insert(f.traces[i].name.clone(), lasso);
    }
    // progress recorded at update t+1 is the step from t to t+1
    let steps: Vec<u32> = progress.iter().skip(1).copied().chain(closed.map(|m| progress[m])).collect();
    for (j, s) in f.stutters.iter().enumerate() {
        let bit = |r: &[u32]| r.iter().map(|&m| m >> j & 1 == 1).collect::<Vec<_>>();
        let (pre, cyc) = if closed.is_some() {
            (bit(&steps[..split]), bit(&steps[split..]))
        } else {
            (bit(&steps[..steps.len().min(progress.len().saturating_sub(1))]), Vec::new())
        };
        out.stutters.insert(s.name.clone(), StutterSchedule { prefix: pre, cycle: cyc });
    }
    Ok(out)
}

/// Recomputes the aligned word from an assignment and evaluates the body on it.
///
/// True iff every path is a lasso of its system, every schedule is fair and
/// the body holds.
pub fn replay_witness(systems: &[&TransitionSystem], f: &AhltlFormula, w: &TraceAssignmentLasso) -> Result<bool> {
    let atoms = compile_atoms(f, systems)?;
    let missing = |what: &str, name: &str| Error::ScriptInvalid(format!("no {what} for `{name}`"));
    let traces: Vec<&PathLasso> = f
        .traces
        .iter()
        .map(|t| w.traces.get(&t.name).ok_or_else(|| missing("path", &t.name)))
        .collect::<Result<_>>()?;
    let scheds: Vec<&StutterSchedule> = f
        .stutters
        .iter()
        .map(|s| w.stutters.get(&s.name).ok_or_else(|| missing("schedule", &s.name)))
        .collect::<Result<_>>()?;
    if !traces.iter().enumerate().all(|(i, l)| l.is_path(systems[i])) || !scheds.iter().all(|s| s.is_fair()) {
        return Ok(false);
    }
    // joint state: position on the base path and cursor in the schedule, per stuttering
    let m = f.stutters.len();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut letters = Vec::new();
    let mut state = vec![0usize; 2 * m];
    let start = loop {
        if let Some(&t) = seen.get(&state) {
            break t;
        }
        seen.insert(state.clone(), letters.len());
        let labels: Vec<&[Value]> =
            (0..m).map(|j| systems[f.stutters[j].base].label(traces[f.stutters[j].base].at(state[j]))).collect();
        let mut l = 0u32;
        for (a, atom) in atoms.iter().enumerate() {
            if atom.eval(&labels) {
                l |= 1 << a;
            }
        }
        letters.push(l);
        for j in 0..m {
            if scheds[j].at(state[m + j]) {
                state[j] = traces[f.stutters[j].base].next(state[j]);
            }
            state[m + j] = scheds[j].next(state[m + j]);
        }
    };
    let cycle = letters.split_off(start);
    Ok(ltl_lasso_eval(&f.body, atoms.len(), &LassoWord::new(letters, cycle)))
}
