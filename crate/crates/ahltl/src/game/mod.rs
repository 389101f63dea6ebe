//! The stuttering-aware verification game.
//!
//! A round has three stages: the refuter extends the universal traces and
//! advances universal stutterings, the verifier does the same for the
//! existential side, and an update stage feeds the letter under the current
//! pointers to the parity automaton and slides the windows.

mod build;
mod dot;

use serde::Serialize;
use smallvec::SmallVec;

use crate::automata::{DetParityAutomaton, Letter};
use crate::error::{Error, Result};
use crate::solver::Player;
use crate::spec::{compile_atoms, AhltlFormula, CompiledAtom, Quant};
use crate::ts::{StateId, TransitionSystem, Value};

pub use build::{build_game, BuildOptions, BuildStats, GameGraph};
pub use dot::game_to_dot;

/// Largest supported window bound; pointers are stored in a byte.
pub const MAX_Z: usize = 254;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stage {
    Update,
    Forall,
    Exists,
}

impl Stage {
    pub fn symbol(self) -> &'static str {
        match self {
            Stage::Update => "U",
            Stage::Forall => "∀",
            Stage::Exists => "∃",
        }
    }
}

pub type Window = SmallVec<[StateId; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub stage: Stage,
    /// One window per trace variable.
    pub windows: SmallVec<[Window; 4]>,
    /// Offset of each stuttering into the window of its trace.
    pub pointers: SmallVec<[u8; 8]>,
    /// Bit `j` set when stuttering `j` progressed in this round.
    pub progressed: u32,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameVertex {
    Error,
    Play(Position),
}

impl GameVertex {
    pub fn position(&self) -> Option<&Position> {
        match self {
            GameVertex::Error => None,
            GameVertex::Play(p) => Some(p),
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, GameVertex::Error)
    }

    pub fn stage(&self) -> Option<Stage> {
        self.position().map(|p| p.stage)
    }

    pub fn owner(&self) -> Player {
        match self.stage() {
            Some(Stage::Exists) => Player::Verifier,
            _ => Player::Refuter,
        }
    }
}

/// Everything the successor rules need, resolved once.
pub struct GameContext<'a> {
    systems: Vec<&'a TransitionSystem>,
    formula: &'a AhltlFormula,
    atoms: Vec<CompiledAtom>,
    dpa: &'a DetParityAutomaton,
    z: usize,
    forall_traces: Vec<usize>,
    exists_traces: Vec<usize>,
    forall_mask: u32,
    exists_mask: u32,
    stutters_on: Vec<Vec<usize>>,
}

impl<'a> GameContext<'a> {
    /// `systems[i]` is the system bound to trace `i`.
    pub fn new(
        systems: &[&'a TransitionSystem],
        formula: &'a AhltlFormula,
        dpa: &'a DetParityAutomaton,
        z: usize,
    ) -> Result<GameContext<'a>> {
        if !formula.is_forall_exists() {
            return Err(Error::NotForallExists(
                "a universal quantifier follows an existential one".into(),
            ));
        }
        if z == 0 || z > MAX_Z {
            return Err(Error::Semantic(format!("window bound must be in 1..={MAX_Z}, got {z}")));
        }
        if formula.stutters.len() > 32 {
            return Err(Error::Unsupported("more than 32 stutterings".into()));
        }
        if dpa.bits() != formula.letter_bits() {
            return Err(Error::Semantic(format!(
                "automaton reads {} letter bits but the formula has {}",
                dpa.bits(),
                formula.letter_bits()
            )));
        }
        let atoms = compile_atoms(formula, systems)?;
        let mask = |q: Quant| formula.stutters_with(q).iter().fold(0u32, |m, &j| m | 1 << j);
        Ok(GameContext {
            systems: systems.to_vec(),
            formula,
            atoms,
            dpa,
            z,
            forall_traces: formula.traces_with(Quant::Forall),
            exists_traces: formula.traces_with(Quant::Exists),
            forall_mask: mask(Quant::Forall),
            exists_mask: mask(Quant::Exists),
            stutters_on: (0..formula.traces.len()).map(|i| formula.stutters_on(i)).collect(),
        })
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn formula(&self) -> &AhltlFormula {
        self.formula
    }

    pub fn system(&self, trace: usize) -> &TransitionSystem {
        self.systems[trace]
    }

    pub fn systems(&self) -> &[&'a TransitionSystem] {
        &self.systems
    }

    pub fn dpa(&self) -> &DetParityAutomaton {
        self.dpa
    }

    pub fn forall_mask(&self) -> u32 {
        self.forall_mask
    }

    pub fn exists_mask(&self) -> u32 {
        self.exists_mask
    }

    pub fn priority(&self, v: &GameVertex) -> u32 {
        match v {
            GameVertex::Error => 1,
            GameVertex::Play(p) => self.dpa.priority(p.q),
        }
    }

    pub fn initial_vertices(&self) -> Vec<GameVertex> {
        let init = |i: usize| self.systems[i].init();
        let per_trace: Vec<Vec<Window>> = (0..self.formula.traces.len())
            .map(|i| {
                if self.formula.traces[i].quant == Quant::Exists {
                    vec![SmallVec::from_slice(&[init(i)])]
                } else {
                    paths(self.systems[i], init(i), self.z)
                }
            })
            .collect();
        let mut out = Vec::new();
        for windows in product(&per_trace) {
            out.push(GameVertex::Play(Position {
                stage: Stage::Update,
                windows: windows.into_iter().collect(),
                pointers: SmallVec::from_elem(0, self.formula.stutters.len()),
                progressed: 0,
                q: self.dpa.init(),
            }));
        }
        out
    }

    /// Successors in a fixed order: state tuples lexicographically, then
    /// schedules in descending submask order.
    pub fn successors(&self, v: &GameVertex) -> Vec<GameVertex> {
        match v {
            GameVertex::Error => vec![GameVertex::Error],
            GameVertex::Play(p) => match p.stage {
                Stage::Forall => self.extend(p, &self.forall_traces, self.forall_mask, Stage::Exists),
                Stage::Exists => self.extend(p, &self.exists_traces, self.exists_mask, Stage::Update),
                Stage::Update => vec![self.update_successor(p)],
            },
        }
    }

    pub fn forall_successors(&self, p: &Position) -> Vec<GameVertex> {
        self.extend(p, &self.forall_traces, self.forall_mask, Stage::Exists)
    }

    pub fn exists_successors(&self, p: &Position) -> Vec<GameVertex> {
        self.extend(p, &self.exists_traces, self.exists_mask, Stage::Update)
    }

    /// The successor obtained from one particular choice, checked for legality.
    pub fn apply_move(&self, p: &Position, next: &[StateId], sched: u32) -> Option<GameVertex> {
        let (traces, mask, to) = match p.stage {
            Stage::Forall => (&self.forall_traces, self.forall_mask, Stage::Exists),
            Stage::Exists => (&self.exists_traces, self.exists_mask, Stage::Update),
            Stage::Update => return None,
        };
        if next.len() != traces.len() || sched & !mask != 0 {
            return None;
        }
        for (k, &i) in traces.iter().enumerate() {
            let last = *p.windows[i].last().unwrap();
            if !self.systems[i].succ(last).contains(&next[k]) {
                return None;
            }
        }
        Some(GameVertex::Play(self.step(p, traces, next, sched, to)))
    }

    fn extend(&self, p: &Position, traces: &[usize], mask: u32, to: Stage) -> Vec<GameVertex> {
        let choices: Vec<Vec<StateId>> = traces
            .iter()
            .map(|&i| self.systems[i].succ(*p.windows[i].last().unwrap()).to_vec())
            .collect();
        let mut out = Vec::new();
        for next in product(&choices) {
            let mut sub = mask;
            loop {
                out.push(GameVertex::Play(self.step(p, traces, &next, sub, to)));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        out
    }

    fn step(&self, p: &Position, traces: &[usize], next: &[StateId], sched: u32, to: Stage) -> Position {
        let mut n = p.clone();
        n.stage = to;
        for (k, &i) in traces.iter().enumerate() {
            n.windows[i].push(next[k]);
        }
        for j in bits(sched) {
            n.pointers[j] += 1;
        }
        n.progressed |= sched;
        n
    }

    /// The letter read in an update-stage position.
    pub fn letter(&self, p: &Position) -> Letter {
        let labels: SmallVec<[&[Value]; 8]> = (0..self.formula.stutters.len())
            .map(|j| {
                let i = self.formula.stutters[j].base;
                self.systems[i].label(p.windows[i][p.pointers[j] as usize])
            })
            .collect();
        let mut l: Letter = 0;
        for (a, atom) in self.atoms.iter().enumerate() {
            if atom.eval(&labels) {
                l |= 1 << a;
            }
        }
        l | (p.progressed << self.atoms.len())
    }

    pub fn update_successor(&self, p: &Position) -> GameVertex {
        debug_assert_eq!(p.stage, Stage::Update);
        let z = self.z;
        for on in &self.stutters_on {
            for (x, &a) in on.iter().enumerate() {
                for &b in &on[x + 1..] {
                    if (p.pointers[a] as usize).abs_diff(p.pointers[b] as usize) >= z {
                        return GameVertex::Error;
                    }
                }
            }
        }
        let q = self.dpa.step(p.q, self.letter(p));
        let mut windows: SmallVec<[Window; 4]> = SmallVec::with_capacity(p.windows.len());
        let mut pointers = p.pointers.clone();
        for (i, w) in p.windows.iter().enumerate() {
            // Vacuous for traces without stutterings; those keep at least one state.
            let moved_on = self.stutters_on[i].iter().all(|&j| p.pointers[j] != 0) && w.len() > 1;
            let (lo, hi) = if moved_on { (1, z + 1) } else { (0, z) };
            let hi = hi.min(w.len());
            windows.push(SmallVec::from_slice(&w[lo..hi]));
            if moved_on {
                for &j in &self.stutters_on[i] {
                    pointers[j] -= 1;
                }
            }
        }
        GameVertex::Play(Position {
            stage: Stage::Forall,
            windows,
            pointers,
            progressed: 0,
            q,
        })
    }
}

pub(crate) fn bits(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&j| m >> j & 1 == 1)
}

/// Every path of `len` states starting at `from`.
fn paths(ts: &TransitionSystem, from: StateId, len: usize) -> Vec<Window> {
    let mut out: Vec<Window> = vec![SmallVec::from_slice(&[from])];
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                ts.succ(*w.last().unwrap()).iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Cartesian product, first factor most significant.
pub(crate) fn product<T: Clone>(factors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for f in factors {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                f.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests;
