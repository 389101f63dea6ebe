//! LTL to nondeterministic Büchi automata, determinization to parity automata,
//! and lasso-word membership for all three representations.
//!
//! Letters are bitsets: bit `i` is atom `i` of the formula, bit `|atoms| + j`
//! is `moved` of stuttering `j`.

mod dpa;
mod hoa;
mod lasso;
mod nba;
mod nnf;

use serde::{Deserialize, Serialize};

pub use dpa::{determinize, dpa_run_step, DetParityAutomaton, DeterminizeOptions};
pub use hoa::{dpa_to_hoa, nba_to_hoa};
pub use lasso::{dpa_accepts_lasso, ltl_lasso_eval, nba_accepts_lasso};
pub use nba::{ltl_to_nba, NondetBuchiAutomaton};
pub use nnf::Nnf;

pub type Letter = u32;

/// Alphabet widths above this are refused.
pub const MAX_LETTER_BITS: usize = 32;

/// Conjunction of literals: `pos` bits must be set, `neg` bits clear.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub pos: u32,
    pub neg: u32,
}

impl Cube {
    pub const TOP: Cube = Cube { pos: 0, neg: 0 };

    pub fn matches(self, l: Letter) -> bool {
        l & self.pos == self.pos && l & self.neg == 0
    }

    pub fn and(self, o: Cube) -> Option<Cube> {
        let c = Cube {
            pos: self.pos | o.pos,
            neg: self.neg | o.neg,
        };
        (c.pos & c.neg == 0).then_some(c)
    }

    /// Every letter matching `self` matches `o`.
    pub fn implies(self, o: Cube) -> bool {
        o.pos & !self.pos == 0 && o.neg & !self.neg == 0
    }

    pub fn intersects(self, o: Cube) -> bool {
        self.and(o).is_some()
    }
}

/// Ultimately periodic word `prefix . loop^omega`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    #[serde(rename = "loop")]
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> LassoWord {
        assert!(!cycle.is_empty(), "lasso loop must be non-empty");
        LassoWord { prefix, cycle }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[i - self.prefix.len()]
        }
    }

    /// Successor position in the folded word of `len()` positions.
    pub fn next(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}
