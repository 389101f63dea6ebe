use std::collections::HashMap;

use super::{AhltlFormula, Atom, CmpOp, Expr};
use crate::error::{Error, Result};
use crate::ts::{Sort, TransitionSystem, Value};

/// Values of indexed variables `x@b`, keyed by variable name and stuttering index.
#[derive(Clone, Debug, Default)]
pub struct Env {
    vals: HashMap<(String, usize), Value>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn set(&mut self, var: impl Into<String>, stutter: usize, v: Value) -> &mut Env {
        self.vals.insert((var.into(), stutter), v);
        self
    }

    pub fn get(&self, var: &str, stutter: usize) -> Option<Value> {
        self.vals.get(&(var.to_string(), stutter)).copied()
    }
}

pub fn eval_atom(theta: &Atom, env: &Env) -> Result<bool> {
    match eval(&theta.expr, env)? {
        Value::Bool(b) => Ok(b),
        Value::Int(_) => Err(Error::Sort("atom evaluates to an integer".into())),
    }
}

fn eval(e: &Expr, env: &Env) -> Result<Value> {
    let b = |e: &Expr| -> Result<bool> {
        match eval(e, env)? {
            Value::Bool(b) => Ok(b),
            Value::Int(_) => Err(Error::Sort("integer where a boolean is expected".into())),
        }
    };
    let n = |e: &Expr| -> Result<i64> {
        match eval(e, env)? {
            Value::Int(n) => Ok(n),
            Value::Bool(_) => Err(Error::Sort("boolean where an integer is expected".into())),
        }
    };
    Ok(match e {
        Expr::Bool(v) => Value::Bool(*v),
        Expr::Int(v) => Value::Int(*v),
        Expr::Var { var, stutter } => env
            .get(var, *stutter)
            .ok_or_else(|| Error::MissingBinding(format!("{var}@#{stutter}")))?,
        Expr::Not(a) => Value::Bool(!b(a)?),
        Expr::And(x, y) => Value::Bool(b(x)? && b(y)?),
        Expr::Or(x, y) => Value::Bool(b(x)? || b(y)?),
        Expr::Implies(x, y) => Value::Bool(!b(x)? || b(y)?),
        Expr::Iff(x, y) => Value::Bool(b(x)? == b(y)?),
        Expr::Add(x, y) => Value::Int(n(x)?.wrapping_add(n(y)?)),
        Expr::Sub(x, y) => Value::Int(n(x)?.wrapping_sub(n(y)?)),
        Expr::Neg(x) => Value::Int(n(x)?.wrapping_neg()),
        Expr::Cmp(op, x, y) => {
            let (x, y) = (eval(x, env)?, eval(y, env)?);
            Value::Bool(compare(*op, x, y)?)
        }
    })
}

fn compare(op: CmpOp, x: Value, y: Value) -> Result<bool> {
    Ok(match (x, y) {
        (Value::Int(x), Value::Int(y)) => match op {
            CmpOp::Eq => x == y,
            CmpOp::Ne => x != y,
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
        },
        (Value::Bool(x), Value::Bool(y)) => match op {
            CmpOp::Eq => x == y,
            CmpOp::Ne => x != y,
            _ => return Err(Error::Sort(format!("`{}` on booleans", op.symbol()))),
        },
        _ => return Err(Error::Sort(format!("`{}` between a boolean and an integer", op.symbol()))),
    })
}

/// An atom whose variables are resolved to label positions in the bound systems.
#[derive(Clone, Debug)]
pub struct CompiledAtom {
    expr: CExpr,
}

#[derive(Clone, Debug)]
enum CExpr {
    Bool(bool),
    Int(i64),
    Var { stutter: usize, slot: usize },
    Not(Box<CExpr>),
    And(Box<CExpr>, Box<CExpr>),
    Or(Box<CExpr>, Box<CExpr>),
    Implies(Box<CExpr>, Box<CExpr>),
    Iff(Box<CExpr>, Box<CExpr>),
    Cmp(CmpOp, Box<CExpr>, Box<CExpr>),
    Add(Box<CExpr>, Box<CExpr>),
    Sub(Box<CExpr>, Box<CExpr>),
    Neg(Box<CExpr>),
}

impl CompiledAtom {
    /// `labels[j]` is the label of the state that stuttering `j` currently points to.
    pub fn eval(&self, labels: &[&[Value]]) -> bool {
        matches!(ceval(&self.expr, labels), Value::Bool(true))
    }
}

fn ceval(e: &CExpr, l: &[&[Value]]) -> Value {
    let b = |e: &CExpr| matches!(ceval(e, l), Value::Bool(true));
    let n = |e: &CExpr| match ceval(e, l) {
        Value::Int(n) => n,
        Value::Bool(b) => b as i64,
    };
    match e {
        CExpr::Bool(v) => Value::Bool(*v),
        CExpr::Int(v) => Value::Int(*v),
        CExpr::Var { stutter, slot } => l[*stutter][*slot],
        CExpr::Not(a) => Value::Bool(!b(a)),
        CExpr::And(x, y) => Value::Bool(b(x) && b(y)),
        CExpr::Or(x, y) => Value::Bool(b(x) || b(y)),
        CExpr::Implies(x, y) => Value::Bool(!b(x) || b(y)),
        CExpr::Iff(x, y) => Value::Bool(b(x) == b(y)),
        CExpr::Add(x, y) => Value::Int(n(x).wrapping_add(n(y))),
        CExpr::Sub(x, y) => Value::Int(n(x).wrapping_sub(n(y))),
        CExpr::Neg(x) => Value::Int(n(x).wrapping_neg()),
        CExpr::Cmp(op, x, y) => Value::Bool(compare(*op, ceval(x, l), ceval(y, l)).unwrap_or(false)),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Ty {
    Bool,
    Int,
}

/// Checks that every trace is bound, every variable is declared and every atom is well-sorted.
pub fn check_bindings(f: &AhltlFormula, systems: &[&TransitionSystem]) -> Result<()> {
    compile_atoms(f, systems).map(|_| ())
}

/// Resolves atoms against `systems[i]`, the system bound to trace `i`.
pub fn compile_atoms(f: &AhltlFormula, systems: &[&TransitionSystem]) -> Result<Vec<CompiledAtom>> {
    if systems.len() != f.traces.len() {
        return Err(Error::Semantic(format!(
            "{} trace variables but {} bound systems",
            f.traces.len(),
            systems.len()
        )));
    }
    let mut out = Vec::with_capacity(f.atoms.len());
    for atom in &f.atoms {
        let mut sorts: HashMap<String, (Sort, usize)> = HashMap::new();
        let mut err = None;
        atom.expr.visit_vars(&mut |v, j| {
            if err.is_some() {
                return;
            }
            let trace = f.stutters[j].base;
            let Some(sort) = systems[trace].sort_of(v) else {
                err = Some(Error::Semantic(format!(
                    "variable `{v}` is not declared in system `{}` bound to `{}`",
                    systems[trace].name(),
                    f.traces[trace].name
                )));
                return;
            };
            if let Some((prev, t)) = sorts.get(v) {
                if prev.is_bool() != sort.is_bool() {
                    err = Some(Error::Semantic(format!(
                        "variable `{v}` is {prev} in `{}` but {sort} in `{}`",
                        systems[*t].name(),
                        systems[trace].name()
                    )));
                }
            } else {
                sorts.insert(v.to_string(), (sort, trace));
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let (expr, ty) = compile(&atom.expr, f, systems)?;
        if ty != Ty::Bool {
            return Err(Error::Sort("atom is integer-sorted".into()));
        }
        out.push(CompiledAtom { expr });
    }
    Ok(out)
}

fn compile(e: &Expr, f: &AhltlFormula, systems: &[&TransitionSystem]) -> Result<(CExpr, Ty)> {
    let want = |t: Ty, w: Ty, what: &str| {
        if t == w {
            Ok(())
        } else {
            Err(Error::Sort(format!(
                "{what} expects {} operands",
                if w == Ty::Bool { "boolean" } else { "integer" }
            )))
        }
    };
    let sub = |x: &Expr| compile(x, f, systems);
    Ok(match e {
        Expr::Bool(b) => (CExpr::Bool(*b), Ty::Bool),
        Expr::Int(n) => (CExpr::Int(*n), Ty::Int),
        Expr::Var { var, stutter } => {
            let sys = systems[f.stutters[*stutter].base];
            let slot = sys.var_index(var).expect("declaration checked");
            let ty = if sys.decls()[slot].sort.is_bool() { Ty::Bool } else { Ty::Int };
            (CExpr::Var { stutter: *stutter, slot }, ty)
        }
        Expr::Not(a) => {
            let (a, t) = sub(a)?;
            want(t, Ty::Bool, "`!`")?;
            (CExpr::Not(Box::new(a)), Ty::Bool)
        }
        Expr::Neg(a) => {
            let (a, t) = sub(a)?;
            want(t, Ty::Int, "unary `-`")?;
            (CExpr::Neg(Box::new(a)), Ty::Int)
        }
        Expr::And(x, y) | Expr::Or(x, y) | Expr::Implies(x, y) | Expr::Iff(x, y) => {
            let (x, tx) = sub(x)?;
            let (y, ty) = sub(y)?;
            want(tx, Ty::Bool, "a boolean connective")?;
            want(ty, Ty::Bool, "a boolean connective")?;
            let (x, y) = (Box::new(x), Box::new(y));
            let c = match e {
                Expr::And(..) => CExpr::And(x, y),
                Expr::Or(..) => CExpr::Or(x, y),
                Expr::Implies(..) => CExpr::Implies(x, y),
                _ => CExpr::Iff(x, y),
            };
            (c, Ty::Bool)
        }
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            let (x, tx) = sub(x)?;
            let (y, ty) = sub(y)?;
            want(tx, Ty::Int, "arithmetic")?;
            want(ty, Ty::Int, "arithmetic")?;
            let (x, y) = (Box::new(x), Box::new(y));
            let c = if matches!(e, Expr::Add(..)) { CExpr::Add(x, y) } else { CExpr::Sub(x, y) };
            (c, Ty::Int)
        }
        Expr::Cmp(op, x, y) => {
            let (x, tx) = sub(x)?;
            let (y, ty) = sub(y)?;
            match op {
                CmpOp::Eq | CmpOp::Ne if tx == ty => {}
                CmpOp::Eq | CmpOp::Ne => {
                    return Err(Error::Sort(format!("`{}` between a boolean and an integer", op.symbol())))
                }
                _ => {
                    want(tx, Ty::Int, "an ordering comparison")?;
                    want(ty, Ty::Int, "an ordering comparison")?;
                }
            }
            (CExpr::Cmp(*op, Box::new(x), Box::new(y)), Ty::Bool)
        }
    })
}
