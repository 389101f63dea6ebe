//! End-to-end verification and the verdict logic.
//!
//! A win for the verifier from every initial vertex proves the formula. A loss
//! proves a violation only when the formula lies in a fragment that is
//! complete for the window bound used; otherwise the answer is unknown.

mod admissible;
mod refute;
mod witness;

use std::time::Instant;

use serde::Serialize;

use crate::automata::{determinize, ltl_to_nba, DetParityAutomaton, DeterminizeOptions};
use crate::error::{Error, Result};
use crate::game::{build_game, BuildOptions, BuildStats, GameContext, GameGraph};
use crate::solver::{solve_parity, SolveResult};
use crate::spec::{build_psi_mod, classify_fragment, AhltlFormula, CompletenessTag, FragmentReport};
use crate::ts::TransitionSystem;

pub use admissible::{oracle_check_admissible, sigma_max_step, verify_admissible_fast};
pub use refute::{refute_bounded, RefuteOptions, Refutation};
pub use witness::{
    extract_witness, replay_witness, PathLasso, RefuterScript, ScriptRound, StutterSchedule, TraceAssignmentLasso,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Outcome {
    Verified,
    Violated,
    Unknown,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Verified => "verified",
            Outcome::Violated => "violated",
            Outcome::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Reason {
    WinFromAllInitials,
    LossInCompleteFragment { fragment: CompletenessTag, z: usize },
    LossIncomplete,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub nba_states: usize,
    pub dpa_states: usize,
    pub dpa_priorities: usize,
    pub vertices: usize,
    pub edges: usize,
    pub initials: usize,
    pub priorities: usize,
    pub error_reachable: bool,
    pub initials_won: usize,
}

/// Wall-clock seconds per phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Timings {
    pub automaton: f64,
    pub construct: f64,
    pub solve: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: Reason,
    pub z: usize,
    pub fragment: FragmentReport,
    pub stats: Stats,
    #[serde(skip)]
    pub timings: Timings,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub build: BuildOptions,
    pub determinize: DeterminizeOptions,
}

/// The automaton and classification of one formula over fixed systems,
/// reusable across window bounds.
pub struct Pipeline<'a> {
    systems: Vec<&'a TransitionSystem>,
    formula: &'a AhltlFormula,
    dpa: DetParityAutomaton,
    fragment: FragmentReport,
    nba_states: usize,
    automaton_time: f64,
    opts: VerifyOptions,
}

/// A built and solved game together with its verdict.
pub struct Solved<'p> {
    pub ctx: GameContext<'p>,
    pub game: GameGraph,
    pub result: SolveResult,
    pub verdict: Verdict,
}

impl<'a> Pipeline<'a> {
    /// `systems[i]` is bound to trace `i`.
    pub fn new(systems: &[&'a TransitionSystem], formula: &'a AhltlFormula, opts: &VerifyOptions) -> Result<Pipeline<'a>> {
        if !formula.is_forall_exists() {
            return Err(Error::NotForallExists(
                "a universal quantifier occurs after an existential one".into(),
            ));
        }
        crate::spec::check_bindings(formula, systems)?;
        let t = Instant::now();
        let psi = build_psi_mod(formula);
        let nba = ltl_to_nba(&psi, formula.atoms.len(), formula.letter_bits());
        let dpa = determinize(&nba, &opts.determinize)?;
        Ok(Pipeline {
            systems: systems.to_vec(),
            formula,
            nba_states: nba.num_states(),
            dpa,
            fragment: classify_fragment(formula, systems),
            automaton_time: t.elapsed().as_secs_f64(),
            opts: opts.clone(),
        })
    }

    pub fn dpa(&self) -> &DetParityAutomaton {
        &self.dpa
    }

    pub fn fragment(&self) -> &FragmentReport {
        &self.fragment
    }

    pub fn formula(&self) -> &AhltlFormula {
        self.formula
    }

    pub fn context(&self, z: usize) -> Result<GameContext<'_>> {
        GameContext::new(&self.systems, self.formula, &self.dpa, z)
    }

    pub fn solve(&self, z: usize) -> Result<Solved<'_>> {
        let start = Instant::now();
        let ctx = self.context(z)?;
        let game = build_game(&ctx, &self.opts.build)?;
        let construct = start.elapsed().as_secs_f64();
        let t = Instant::now();
        let result = solve_parity(game.arena());
        let solve = t.elapsed().as_secs_f64();
        let won = game.initials().iter().filter(|&&v| result.verifier_wins(v)).count();
        let (outcome, reason) = self.judge(won == game.initials().len(), z);
        let stats = self.stats(game.stats(), won);
        let verdict = Verdict {
            outcome,
            reason,
            z,
            fragment: self.fragment.clone(),
            stats,
            timings: Timings {
                automaton: self.automaton_time,
                construct,
                solve,
                total: self.automaton_time + construct + solve,
            },
        };
        Ok(Solved { ctx, game, result, verdict })
    }

    pub(crate) fn judge(&self, won: bool, z: usize) -> (Outcome, Reason) {
        if won {
            (Outcome::Verified, Reason::WinFromAllInitials)
        } else if let Some(tag) = self.fragment.complete_for(z) {
            (Outcome::Violated, Reason::LossInCompleteFragment { fragment: tag, z })
        } else {
            (Outcome::Unknown, Reason::LossIncomplete)
        }
    }

    pub(crate) fn stats(&self, b: &BuildStats, won: usize) -> Stats {
        Stats {
            nba_states: self.nba_states,
            dpa_states: self.dpa.num_states(),
            dpa_priorities: self.dpa.num_priorities(),
            vertices: b.vertices,
            edges: b.edges,
            initials: b.initials,
            priorities: b.priorities,
            error_reachable: b.error_reachable,
            initials_won: won,
        }
    }
}

/// Builds and solves the game at window bound `z`.
pub fn verify(systems: &[&TransitionSystem], f: &AhltlFormula, z: usize, opts: &VerifyOptions) -> Result<Verdict> {
    Ok(Pipeline::new(systems, f, opts)?.solve(z)?.verdict)
}
