//! Finite transition systems with labelled states.

mod analysis;
mod parse;
mod print;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use analysis::{restrict_reachable, termination_info, TerminationInfo};
pub use parse::parse_system;
pub use print::print_system;

/// Dense state index, assigned in declaration order.
pub type StateId = u32;

/// A value of the background theory: a boolean or a bounded integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

/// Sort of a system variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    /// Inclusive integer range.
    Int { lo: i64, hi: i64 },
}

impl Sort {
    pub fn admits(&self, v: Value) -> bool {
        match (self, v) {
            (Sort::Bool, Value::Bool(_)) => true,
            (Sort::Int { lo, hi }, Value::Int(n)) => *lo <= n && n <= *hi,
            _ => false,
        }
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Sort::Bool)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "bool"),
            Sort::Int { lo, hi } => write!(f, "int({lo}..{hi})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub sort: Sort,
}

/// `T = (S, s0, succ, label)` with a total, non-empty successor relation.
///
/// Immutable once built; construct through [`SystemBuilder`] or [`parse_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    name: String,
    decls: Vec<VarDecl>,
    state_names: Vec<String>,
    init: StateId,
    succ: Vec<Vec<StateId>>,
    labels: Vec<Vec<Value>>,
}

impl TransitionSystem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decls(&self) -> &[VarDecl] {
        &self.decls
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn succ(&self, s: StateId) -> &[StateId] {
        &self.succ[s as usize]
    }

    /// Values of all declared variables at `s`, in declaration order.
    pub fn label(&self, s: StateId) -> &[Value] {
        &self.labels[s as usize]
    }

    pub fn value(&self, s: StateId, var: usize) -> Value {
        self.labels[s as usize][var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.decls.iter().position(|d| d.name == name)
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.decls.iter().find(|d| d.name == name).map(|d| d.sort)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s as usize]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(|i| i as StateId)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.num_states() as StateId
    }

    /// A state whose only successor is itself.
    pub fn is_sink(&self, s: StateId) -> bool {
        self.succ(s) == [s]
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// Incremental constructor that validates on [`SystemBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    name: String,
    decls: Vec<VarDecl>,
    states: Vec<(String, Vec<(String, Value)>)>,
    inits: Vec<StateId>,
    edges: Vec<(StateId, StateId)>,
}

impl SystemBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn var(&mut self, name: impl Into<String>, sort: Sort) -> &mut Self {
        self.decls.push(VarDecl {
            name: name.into(),
            sort,
        });
        self
    }

    /// Adds a state and returns its id; ids follow insertion order.
    pub fn state(&mut self, name: impl Into<String>, label: &[(&str, Value)]) -> StateId {
        let id = self.states.len() as StateId;
        let label = label.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self.states.push((name.into(), label));
        id
    }

    pub fn init(&mut self, s: StateId) -> &mut Self {
        self.inits.push(s);
        self
    }

    pub fn edge(&mut self, from: StateId, to: StateId) -> &mut Self {
        self.edges.push((from, to));
        self
    }

    pub fn build(&self) -> Result<TransitionSystem> {
        let mut seen = HashMap::new();
        for d in &self.decls {
            if seen.insert(d.name.as_str(), ()).is_some() {
                return Err(Error::Semantic(format!("duplicate variable `{}`", d.name)));
            }
            if let Sort::Int { lo, hi } = d.sort {
                if lo > hi {
                    return Err(Error::Semantic(format!(
                        "empty range {lo}..{hi} for variable `{}`",
                        d.name
                    )));
                }
            }
        }
        let mut names = HashMap::new();
        let mut labels = Vec::with_capacity(self.states.len());
        for (name, label) in &self.states {
            if names.insert(name.as_str(), ()).is_some() {
                return Err(Error::Semantic(format!("duplicate state `{name}`")));
            }
            let mut row: Vec<Option<Value>> = vec![None; self.decls.len()];
            for (var, v) in label {
                let Some(i) = self.decls.iter().position(|d| &d.name == var) else {
                    return Err(Error::Semantic(format!(
                        "state `{name}` assigns undeclared variable `{var}`"
                    )));
                };
                if row[i].is_some() {
                    return Err(Error::Semantic(format!(
                        "state `{name}` assigns `{var}` twice"
                    )));
                }
                if !self.decls[i].sort.admits(*v) {
                    return Err(Error::Semantic(format!(
                        "value {v} of `{var}` in state `{name}` is outside {}",
                        self.decls[i].sort
                    )));
                }
                row[i] = Some(*v);
            }
            let mut full = Vec::with_capacity(row.len());
            for (i, v) in row.into_iter().enumerate() {
                match v {
                    Some(v) => full.push(v),
                    None => {
                        return Err(Error::Semantic(format!(
                            "state `{name}` misses variable `{}` in its label",
                            self.decls[i].name
                        )))
                    }
                }
            }
            labels.push(full);
        }
        let n = self.states.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Semantic(format!("edge {a} -> {b} names an unknown state")));
            }
            succ[a as usize].push(b);
        }
        for (s, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(Error::Semantic(format!(
                    "state without successor: `{}`",
                    self.states[s].0
                )));
            }
        }
        let init = match self.inits.as_slice() {
            [s] if (*s as usize) < n => *s,
            [] => return Err(Error::Semantic("no init state".into())),
            [_] => return Err(Error::Semantic("init state out of range".into())),
            _ => return Err(Error::Semantic("multiple init states".into())),
        };
        Ok(TransitionSystem {
            name: self.name.clone(),
            decls: self.decls.clone(),
            state_names: self.states.iter().map(|(n, _)| n.clone()).collect(),
            init,
            succ,
            labels,
        })
    }
}
