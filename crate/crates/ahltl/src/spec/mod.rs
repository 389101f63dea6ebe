//! Formula syntax: quantifier prefixes, atoms over indexed variables and LTL bodies.

mod eval;
mod fragment;
mod lexer;
mod parse;
mod print;
mod psi;
mod trajectory;

use std::collections::BTreeSet;

use serde::Serialize;

pub use eval::{check_bindings, compile_atoms, eval_atom, CompiledAtom, Env};
pub use fragment::{
    classify_fragment, AdmissibleInfo, ColorSet, CompletenessTag, FragmentReport, InvariantShape, Skeleton,
};
pub use parse::parse_formula;
pub use print::{print_formula, print_ltl};
pub use psi::build_psi_mod;
pub use trajectory::{from_trajectory_form, to_trajectory_form};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quant {
    Forall,
    Exists,
}

impl Quant {
    pub fn keyword(self) -> &'static str {
        match self {
            Quant::Forall => "forall",
            Quant::Exists => "exists",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceQuantifier {
    pub quant: Quant,
    pub name: String,
}

/// `Q b ~ pi`, with `base` the index of `pi` in the trace prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StutterQuantifier {
    pub quant: Quant,
    pub name: String,
    pub base: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// First-order term of an atom. `Var` reads system variable `var` under stuttering `stutter`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Var { var: String, stutter: usize },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    /// Stuttering variables mentioned in the term.
    pub fn stutters(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |_, s| {
            out.insert(s);
        });
        out
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(&str, usize)) {
        match self {
            Expr::Bool(_) | Expr::Int(_) => {}
            Expr::Var { var, stutter } => f(var, *stutter),
            Expr::Not(a) | Expr::Neg(a) => a.visit_vars(f),
            Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Implies(a, b)
            | Expr::Iff(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }
}

/// A boolean-sorted term; the letters of the automaton alphabet are sets of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub expr: Expr,
}

/// LTL over atom indices and the fairness propositions `moved_b`.
///
/// `F` and `G` are primitives with their usual meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ltl {
    True,
    False,
    /// Index into the formula's atom table.
    Atom(usize),
    /// `moved_b` for the stuttering with this index.
    Moved(usize),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Finally(Box<Ltl>),
    Globally(Box<Ltl>),
}

impl Ltl {
    pub fn not(a: Ltl) -> Ltl {
        Ltl::Not(Box::new(a))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn finally(a: Ltl) -> Ltl {
        Ltl::Finally(Box::new(a))
    }

    pub fn globally(a: Ltl) -> Ltl {
        Ltl::Globally(Box::new(a))
    }

    /// Conjunction of a list; `true` when empty.
    pub fn all(parts: impl IntoIterator<Item = Ltl>) -> Ltl {
        parts.into_iter().reduce(Ltl::and).unwrap_or(Ltl::True)
    }

    pub fn is_temporal(&self) -> bool {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) | Ltl::Moved(_) => false,
            Ltl::Next(_) | Ltl::Until(..) | Ltl::Finally(_) | Ltl::Globally(_) => true,
            Ltl::Not(a) => a.is_temporal(),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Iff(a, b) => {
                a.is_temporal() || b.is_temporal()
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) | Ltl::Moved(_) => 1,
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Finally(a) | Ltl::Globally(a) => 1 + a.size(),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Visits every `Moved` index, once per occurrence.
    pub fn moved_occurrences(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn go(l: &Ltl, out: &mut Vec<usize>) {
            match l {
                Ltl::Moved(j) => out.push(*j),
                Ltl::True | Ltl::False | Ltl::Atom(_) => {}
                Ltl::Not(a) | Ltl::Next(a) | Ltl::Finally(a) | Ltl::Globally(a) => go(a, out),
                Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

/// `Q pi_1 ... Q pi_n. Q b_1 ~ pi_l1 ... Q b_m ~ pi_lm. body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhltlFormula {
    pub traces: Vec<TraceQuantifier>,
    pub stutters: Vec<StutterQuantifier>,
    pub body: Ltl,
    /// Distinct atoms of the body, in order of first occurrence.
    pub atoms: Vec<Atom>,
}

impl AhltlFormula {
    pub fn trace_index(&self, name: &str) -> Option<usize> {
        self.traces.iter().position(|t| t.name == name)
    }

    pub fn stutter_index(&self, name: &str) -> Option<usize> {
        self.stutters.iter().position(|s| s.name == name)
    }

    pub fn stutters_on(&self, trace: usize) -> Vec<usize> {
        (0..self.stutters.len()).filter(|&j| self.stutters[j].base == trace).collect()
    }

    pub fn traces_with(&self, q: Quant) -> Vec<usize> {
        (0..self.traces.len()).filter(|&i| self.traces[i].quant == q).collect()
    }

    pub fn stutters_with(&self, q: Quant) -> Vec<usize> {
        (0..self.stutters.len()).filter(|&j| self.stutters[j].quant == q).collect()
    }

    /// No universal quantifier occurs after an existential one in the combined prefix.
    pub fn is_forall_exists(&self) -> bool {
        let mut seen_exists = false;
        let quants = self.traces.iter().map(|t| t.quant).chain(self.stutters.iter().map(|s| s.quant));
        for q in quants {
            match q {
                Quant::Exists => seen_exists = true,
                Quant::Forall if seen_exists => return false,
                Quant::Forall => {}
            }
        }
        true
    }

    /// Width of the automaton alphabet: one bit per atom and one per stuttering.
    pub fn letter_bits(&self) -> usize {
        self.atoms.len() + self.stutters.len()
    }
}
