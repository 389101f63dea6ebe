//! Explicit-state verification of `forall*exists*` asynchronous HyperLTL.
//!
//! A formula quantifies over traces of finite transition systems and over
//! fair stutterings of those traces. Verification builds a finite game in
//! which the refuter plays the universal traces and stutterings and the
//! verifier answers with the existential ones, step by step, inside bounded
//! state windows. A win for the verifier proves the property. A loss proves
//! a violation only inside the fragments for which the game is complete.
//!
//! The crate is layered bottom-up:
//!
//! * [`ts`]: transition systems, the `.ats` format, termination depth.
//! * [`spec`]: formulas, the `.ahq` format, trajectory translation,
//!   fairness strengthening and fragment classification.
//! * [`automata`]: LTL to Büchi to deterministic parity automata.
//! * [`game`]: the verification game arena.
//! * [`solver`]: parity and Büchi game solving.
//! * [`verify`]: verdicts, the admissible fast path, oracles and witnesses.

pub mod automata;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod solver;
pub mod spec;
pub mod ts;
pub mod verify;

pub use error::{Error, Result};
