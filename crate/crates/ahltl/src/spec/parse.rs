//! Recursive-descent parser for `.ahq` formulas.
//!
//! Precedence from loosest to tightest: `<->`, `->` (right), `|`, `&`,
//! `U` (right), unary `! X F G`, comparisons, `+ -`, unary `-`, primaries.

use std::collections::HashMap;

use super::lexer::{lex, Tok, Token};
use super::{AhltlFormula, Atom, CmpOp, Expr, Ltl, Quant, StutterQuantifier, TraceQuantifier};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dialect {
    Stuttering,
    Trajectory,
}

#[derive(Clone, Debug)]
pub(crate) enum PrefixItem {
    Trace { quant: Quant, name: String },
    Stutter { quant: Quant, name: String, base: String, line: usize, col: usize },
    Traj { quant: Quant, name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum UnOp {
    Not,
    Neg,
    Next,
    Finally,
    Globally,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinOp {
    Iff,
    Implies,
    Or,
    And,
    Until,
    Cmp(CmpOp),
    Add,
    Sub,
}

/// Parse tree before name resolution and the atom/formula split.
#[derive(Clone, Debug)]
pub(crate) enum Surf {
    Bool(bool),
    Int(i64),
    Var { var: String, index: String, traj: Option<String>, line: usize, col: usize },
    Un(UnOp, Box<Surf>),
    Bin(BinOp, Box<Surf>, Box<Surf>),
}

pub(crate) struct SurfFormula {
    pub prefix: Vec<PrefixItem>,
    pub body: Surf,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn error(&self, expected: &str) -> Error {
        let (line, col) = self.here();
        Error::Syntax {
            line,
            col,
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(&format!("`{s}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn prefix(&mut self) -> Result<Vec<PrefixItem>> {
        let mut items = Vec::new();
        loop {
            let (line, col) = self.here();
            let kw = match self.peek() {
                Tok::Ident(s) if matches!(s.as_str(), "forall" | "exists" | "Etau" | "Atau") => s.clone(),
                _ => break,
            };
            self.pos += 1;
            match kw.as_str() {
                "forall" | "exists" => {
                    let quant = if kw == "forall" { Quant::Forall } else { Quant::Exists };
                    let name = self.ident("variable name")?;
                    if self.eat("~") {
                        if self.dialect == Dialect::Trajectory {
                            return Err(Error::Syntax {
                                line,
                                col,
                                expected: "trace or trajectory quantifier".into(),
                                found: "stuttering quantifier in the trajectory dialect".into(),
                            });
                        }
                        let base = self.ident("trace name")?;
                        items.push(PrefixItem::Stutter { quant, name, base, line, col });
                    } else {
                        items.push(PrefixItem::Trace { quant, name });
                    }
                }
                _ => {
                    if self.dialect == Dialect::Stuttering {
                        return Err(Error::Syntax {
                            line,
                            col,
                            expected: "`forall` or `exists`".into(),
                            found: format!("`{kw}` (trajectory quantifiers need the trajectory dialect)"),
                        });
                    }
                    let quant = if kw == "Atau" { Quant::Forall } else { Quant::Exists };
                    let name = self.ident("trajectory name")?;
                    items.push(PrefixItem::Traj { quant, name });
                }
            }
            self.expect(".")?;
        }
        Ok(items)
    }

    fn iff(&mut self) -> Result<Surf> {
        let mut lhs = self.implies()?;
        while self.eat("<->") {
            let rhs = self.implies()?;
            lhs = Surf::Bin(BinOp::Iff, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Surf> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.implies()?;
            return Ok(Surf::Bin(BinOp::Implies, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Surf> {
        let mut lhs = self.and()?;
        while self.eat("|") {
            let rhs = self.and()?;
            lhs = Surf::Bin(BinOp::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Surf> {
        let mut lhs = self.until()?;
        while self.eat("&") {
            let rhs = self.until()?;
            lhs = Surf::Bin(BinOp::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Surf> {
        let lhs = self.unary()?;
        if self.eat("U") {
            let rhs = self.until()?;
            return Ok(Surf::Bin(BinOp::Until, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Surf> {
        let op = match self.peek() {
            Tok::Sym("!") => UnOp::Not,
            Tok::Sym("X") => UnOp::Next,
            Tok::Sym("F") => UnOp::Finally,
            Tok::Sym("G") => UnOp::Globally,
            _ => return self.comparison(),
        };
        self.pos += 1;
        Ok(Surf::Un(op, Box::new(self.unary()?)))
    }

    fn comparison(&mut self) -> Result<Surf> {
        let lhs = self.sum()?;
        let op = match self.peek() {
            Tok::Sym("=") => CmpOp::Eq,
            Tok::Sym("!=") => CmpOp::Ne,
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym(">") => CmpOp::Gt,
            Tok::Sym(">=") => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.sum()?;
        Ok(Surf::Bin(BinOp::Cmp(op), Box::new(lhs), Box::new(rhs)))
    }

    fn sum(&mut self) -> Result<Surf> {
        let mut lhs = self.negation()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.negation()?;
            lhs = Surf::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn negation(&mut self) -> Result<Surf> {
        if self.eat("-") {
            return Ok(Surf::Un(UnOp::Neg, Box::new(self.negation()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Surf> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Surf::Int(n))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.pos += 1;
                Ok(Surf::Bool(s == "true"))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.pos += 1;
                if !matches!(self.peek(), Tok::Sym("@")) {
                    return Err(self.error("`@` after a variable name"));
                }
                self.pos += 1;
                let index = self.ident("stuttering or trace name after `@`")?;
                let traj = if self.eat(":") {
                    if self.dialect == Dialect::Stuttering {
                        return Err(Error::Syntax {
                            line,
                            col,
                            expected: "`var@stuttering`".into(),
                            found: "a trajectory index (use the trajectory dialect)".into(),
                        });
                    }
                    Some(self.ident("trajectory name")?)
                } else {
                    None
                };
                Ok(Surf::Var { var: s, index, traj, line, col })
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.iff()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "Etau" | "Atau" | "true" | "false")
}

pub(crate) fn parse_surface(text: &str, dialect: Dialect) -> Result<SurfFormula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, dialect };
    let prefix = p.prefix()?;
    let body = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(SurfFormula { prefix, body })
}

/// Checks the prefix and resolves names. Trajectory items must already be translated away.
pub(crate) fn resolve(items: &[PrefixItem], body: &Surf) -> Result<AhltlFormula> {
    let mut traces: Vec<TraceQuantifier> = Vec::new();
    let mut stutters: Vec<StutterQuantifier> = Vec::new();
    let mut names: HashMap<String, ()> = HashMap::new();
    for item in items {
        match item {
            PrefixItem::Trace { quant, name } => {
                if !stutters.is_empty() {
                    return Err(Error::Binding(format!(
                        "trace `{name}` is quantified after a stuttering quantifier"
                    )));
                }
                if names.insert(name.clone(), ()).is_some() {
                    return Err(Error::Binding(format!("`{name}` is quantified twice")));
                }
                traces.push(TraceQuantifier { quant: *quant, name: name.clone() });
            }
            PrefixItem::Stutter { quant, name, base, line, col } => {
                if names.insert(name.clone(), ()).is_some() {
                    return Err(Error::Binding(format!("`{name}` is quantified twice")));
                }
                let Some(b) = traces.iter().position(|t| &t.name == base) else {
                    return Err(Error::Binding(format!(
                        "stuttering `{name}` at {line}:{col} is based on `{base}`, which is not a quantified trace"
                    )));
                };
                stutters.push(StutterQuantifier { quant: *quant, name: name.clone(), base: b });
            }
            PrefixItem::Traj { name, .. } => {
                return Err(Error::Binding(format!("untranslated trajectory `{name}`")));
            }
        }
    }
    let index: HashMap<&str, usize> = stutters.iter().enumerate().map(|(j, s)| (s.name.as_str(), j)).collect();
    let mut conv = Converter {
        stutters: &index,
        traces: &traces,
        atoms: Vec::new(),
        atom_ids: HashMap::new(),
    };
    let body = conv.ltl(body)?;
    let atoms = conv.atoms;
    drop(index);
    Ok(AhltlFormula { traces, stutters, body, atoms })
}

/// Parses a formula in the stuttering dialect.
pub fn parse_formula(text: &str) -> Result<AhltlFormula> {
    let surf = parse_surface(text, Dialect::Stuttering)?;
    resolve(&surf.prefix, &surf.body)
}

struct Converter<'a> {
    stutters: &'a HashMap<&'a str, usize>,
    traces: &'a [TraceQuantifier],
    atoms: Vec<Atom>,
    atom_ids: HashMap<Expr, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Bool,
    Int,
    Unknown,
}

impl Converter<'_> {
    fn atom(&mut self, e: Expr) -> Ltl {
        if let Some(&i) = self.atom_ids.get(&e) {
            return Ltl::Atom(i);
        }
        let i = self.atoms.len();
        self.atom_ids.insert(e.clone(), i);
        self.atoms.push(Atom { expr: e });
        Ltl::Atom(i)
    }

    fn ltl(&mut self, s: &Surf) -> Result<Ltl> {
        Ok(match s {
            Surf::Bool(true) => Ltl::True,
            Surf::Bool(false) => Ltl::False,
            Surf::Un(UnOp::Not, a) => Ltl::not(self.ltl(a)?),
            Surf::Un(UnOp::Next, a) => Ltl::next(self.ltl(a)?),
            Surf::Un(UnOp::Finally, a) => Ltl::finally(self.ltl(a)?),
            Surf::Un(UnOp::Globally, a) => Ltl::globally(self.ltl(a)?),
            Surf::Bin(BinOp::And, a, b) => Ltl::and(self.ltl(a)?, self.ltl(b)?),
            Surf::Bin(BinOp::Or, a, b) => Ltl::or(self.ltl(a)?, self.ltl(b)?),
            Surf::Bin(BinOp::Implies, a, b) => Ltl::implies(self.ltl(a)?, self.ltl(b)?),
            Surf::Bin(BinOp::Iff, a, b) => Ltl::iff(self.ltl(a)?, self.ltl(b)?),
            Surf::Bin(BinOp::Until, a, b) => Ltl::until(self.ltl(a)?, self.ltl(b)?),
            Surf::Var { .. } | Surf::Bin(BinOp::Cmp(_), ..) => {
                let e = fold(self.expr(s)?);
                let ty = infer(&e)?;
                if ty == Ty::Int {
                    return Err(Error::Sort("integer term used as a formula".into()));
                }
                match e {
                    Expr::Bool(true) => Ltl::True,
                    Expr::Bool(false) => Ltl::False,
                    e => self.atom(e),
                }
            }
            Surf::Int(_) | Surf::Un(UnOp::Neg, _) | Surf::Bin(BinOp::Add | BinOp::Sub, ..) => {
                return Err(Error::Sort("integer term used as a formula".into()))
            }
        })
    }

    fn expr(&self, s: &Surf) -> Result<Expr> {
        let bx = |e: Expr| Box::new(e);
        Ok(match s {
            Surf::Bool(b) => Expr::Bool(*b),
            Surf::Int(n) => Expr::Int(*n),
            Surf::Var { var, index, traj, line, col } => {
                if traj.is_some() {
                    return Err(Error::Binding(format!("trajectory index in `{var}@{index}`")));
                }
                match self.stutters.get(index.as_str()) {
                    Some(&j) => Expr::Var { var: var.clone(), stutter: j },
                    None if self.traces.iter().any(|t| &t.name == index) => {
                        return Err(Error::Binding(format!(
                            "`{var}@{index}` at {line}:{col} indexes a trace; atoms are indexed by stutterings"
                        )))
                    }
                    None => {
                        return Err(Error::Binding(format!(
                            "unbound stuttering variable `{index}` at {line}:{col}"
                        )))
                    }
                }
            }
            Surf::Un(UnOp::Not, a) => Expr::Not(bx(self.expr(a)?)),
            Surf::Un(UnOp::Neg, a) => Expr::Neg(bx(self.expr(a)?)),
            Surf::Un(_, _) | Surf::Bin(BinOp::Until, ..) => {
                return Err(Error::Sort("temporal operator inside an atom".into()))
            }
            Surf::Bin(op, a, b) => {
                let (a, b) = (bx(self.expr(a)?), bx(self.expr(b)?));
                match op {
                    BinOp::And => Expr::And(a, b),
                    BinOp::Or => Expr::Or(a, b),
                    BinOp::Implies => Expr::Implies(a, b),
                    BinOp::Iff => Expr::Iff(a, b),
                    BinOp::Cmp(c) => Expr::Cmp(*c, a, b),
                    BinOp::Add => Expr::Add(a, b),
                    BinOp::Sub => Expr::Sub(a, b),
                    BinOp::Until => unreachable!(),
                }
            }
        })
    }
}

fn infer(e: &Expr) -> Result<Ty> {
    let want = |t: Ty, w: Ty, what: &str| {
        if t == Ty::Unknown || t == w {
            Ok(())
        } else {
            Err(Error::Sort(format!("{what} expects {} operands", if w == Ty::Bool { "boolean" } else { "integer" })))
        }
    };
    Ok(match e {
        Expr::Bool(_) => Ty::Bool,
        Expr::Int(_) => Ty::Int,
        Expr::Var { .. } => Ty::Unknown,
        Expr::Not(a) => {
            want(infer(a)?, Ty::Bool, "`!`")?;
            Ty::Bool
        }
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) | Expr::Iff(a, b) => {
            want(infer(a)?, Ty::Bool, "a boolean connective")?;
            want(infer(b)?, Ty::Bool, "a boolean connective")?;
            Ty::Bool
        }
        Expr::Cmp(op, a, b) => {
            let (ta, tb) = (infer(a)?, infer(b)?);
            match op {
                CmpOp::Eq | CmpOp::Ne => {
                    if ta != Ty::Unknown && tb != Ty::Unknown && ta != tb {
                        return Err(Error::Sort(format!("`{}` compares a boolean with an integer", op.symbol())));
                    }
                }
                _ => {
                    want(ta, Ty::Int, "an ordering comparison")?;
                    want(tb, Ty::Int, "an ordering comparison")?;
                }
            }
            Ty::Bool
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            want(infer(a)?, Ty::Int, "arithmetic")?;
            want(infer(b)?, Ty::Int, "arithmetic")?;
            Ty::Int
        }
        Expr::Neg(a) => {
            want(infer(a)?, Ty::Int, "unary `-`")?;
            Ty::Int
        }
    })
}

/// Folds literal-only subterms; sorts were checked by [`infer`] beforehand on the raw term,
/// so mismatched literal operands never reach the arithmetic here.
pub(crate) fn fold(e: Expr) -> Expr {
    use Expr::*;
    match e {
        Not(a) => match fold(*a) {
            Bool(b) => Bool(!b),
            a => Not(Box::new(a)),
        },
        Neg(a) => match fold(*a) {
            Int(n) => Int(n.wrapping_neg()),
            a => Neg(Box::new(a)),
        },
        And(a, b) => bin(fold(*a), fold(*b), And, |x, y| bools(x, y).map(|(x, y)| Bool(x && y))),
        Or(a, b) => bin(fold(*a), fold(*b), Or, |x, y| bools(x, y).map(|(x, y)| Bool(x || y))),
        Implies(a, b) => bin(fold(*a), fold(*b), Implies, |x, y| bools(x, y).map(|(x, y)| Bool(!x || y))),
        Iff(a, b) => bin(fold(*a), fold(*b), Iff, |x, y| bools(x, y).map(|(x, y)| Bool(x == y))),
        Add(a, b) => bin(fold(*a), fold(*b), Add, |x, y| ints(x, y).map(|(x, y)| Int(x.wrapping_add(y)))),
        Sub(a, b) => bin(fold(*a), fold(*b), Sub, |x, y| ints(x, y).map(|(x, y)| Int(x.wrapping_sub(y)))),
        Cmp(op, a, b) => {
            let (a, b) = (fold(*a), fold(*b));
            let v = match (&a, &b) {
                (Int(x), Int(y)) => Some(match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                }),
                (Bool(x), Bool(y)) => match op {
                    CmpOp::Eq => Some(x == y),
                    CmpOp::Ne => Some(x != y),
                    _ => None,
                },
                _ => None,
            };
            match v {
                Some(v) => Bool(v),
                None => Cmp(op, Box::new(a), Box::new(b)),
            }
        }
        e => e,
    }
}

fn bin(a: Expr, b: Expr, mk: fn(Box<Expr>, Box<Expr>) -> Expr, f: impl Fn(&Expr, &Expr) -> Option<Expr>) -> Expr {
    f(&a, &b).unwrap_or_else(|| mk(Box::new(a), Box::new(b)))
}

fn bools(a: &Expr, b: &Expr) -> Option<(bool, bool)> {
    match (a, b) {
        (Expr::Bool(x), Expr::Bool(y)) => Some((*x, *y)),
        _ => None,
    }
}

fn ints(a: &Expr, b: &Expr) -> Option<(i64, i64)> {
    match (a, b) {
        (Expr::Int(x), Expr::Int(y)) => Some((*x, *y)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const OD: &str = "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. (l@b1 = l@b2) -> G (o@b1 = o@b2)";

    #[test]
    fn observational_determinism() {
        let f = parse_formula(OD).unwrap();
        assert_eq!(f.traces.len(), 2);
        assert_eq!(f.stutters[1].base, 1);
        assert_eq!(f.atoms.len(), 2);
        let var = |v: &str, s| Box::new(Expr::Var { var: v.into(), stutter: s });
        assert_eq!(f.atoms[0].expr, Expr::Cmp(CmpOp::Eq, var("l", 0), var("l", 1)));
        assert_eq!(f.atoms[1].expr, Expr::Cmp(CmpOp::Eq, var("o", 0), var("o", 1)));
        assert_eq!(f.body, Ltl::implies(Ltl::Atom(0), Ltl::globally(Ltl::Atom(1))));
    }

    #[test]
    fn constants_fold_away() {
        let f = parse_formula("exists p. exists b ~ p. G true").unwrap();
        assert!(f.atoms.is_empty());
        assert_eq!(f.body, Ltl::globally(Ltl::True));
        let g = parse_formula("exists p. exists b ~ p. G (1 + 1 = 2) & F (x@b < 2 - 3)").unwrap();
        assert_eq!(g.atoms.len(), 1);
        assert_eq!(g.body, Ltl::and(Ltl::globally(Ltl::True), Ltl::finally(Ltl::Atom(0))));
    }

    #[test]
    fn atoms_are_deduplicated() {
        let f = parse_formula("exists p. exists b ~ p. G (a@b = 1) & F (a@b = 1) & X !(a@b = 1)").unwrap();
        assert_eq!(f.atoms.len(), 1);
    }

    #[test]
    fn binding_errors() {
        assert!(matches!(parse_formula("forall p. exists b ~ q. G (a@b = 0)"), Err(Error::Binding(_))));
        assert!(matches!(parse_formula("forall p. exists b ~ p. G (a@c = 0)"), Err(Error::Binding(_))));
        assert!(matches!(parse_formula("forall p. exists b ~ p. G (a@p = 0)"), Err(Error::Binding(_))));
        assert!(matches!(parse_formula("forall p. exists p ~ p. true"), Err(Error::Binding(_))));
        assert!(matches!(parse_formula("forall p. exists b ~ p. forall q. true"), Err(Error::Binding(_))));
    }

    #[test]
    fn sort_errors() {
        assert!(matches!(parse_formula("exists p. exists b ~ p. G (a@b + true = 1)"), Err(Error::Sort(_))));
        assert!(matches!(parse_formula("exists p. exists b ~ p. (a@b < true)"), Err(Error::Sort(_))));
        assert!(matches!(parse_formula("exists p. exists b ~ p. a@b + 1"), Err(Error::Sort(_))));
        assert!(matches!(parse_formula("exists p. exists b ~ p. (G a@b) = true"), Err(Error::Sort(_))));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_formula("forall p exists"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_formula("forall p. (a@p"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_formula("forall p. Etau t. true"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("exists p. exists b ~ p. a@b U c@b U d@b -> e@b | f@b & g@b").unwrap();
        let (a, c, d, e, ff, g) = (0, 1, 2, 3, 4, 5);
        let at = Ltl::Atom;
        assert_eq!(
            f.body,
            Ltl::implies(
                Ltl::until(at(a), Ltl::until(at(c), at(d))),
                Ltl::or(at(e), Ltl::and(at(ff), at(g)))
            )
        );
        let h = parse_formula("exists p. exists b ~ p. ! x@b = 1").unwrap();
        assert_eq!(h.body, Ltl::not(Ltl::Atom(0)));
    }

    #[test]
    fn bool_connectives_inside_comparisons_stay_in_the_atom() {
        let f = parse_formula(
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. G ((w1@b1 | w2@b1) = (w1@b2 | w2@b2))",
        )
        .unwrap();
        assert_eq!(f.atoms.len(), 1);
        assert!(matches!(f.atoms[0].expr, Expr::Cmp(CmpOp::Eq, ..)));
    }

    #[test]
    fn bases_precede_stutterings() {
        let f = parse_formula(OD).unwrap();
        for (j, s) in f.stutters.iter().enumerate() {
            assert!(s.base < f.traces.len(), "stuttering {j}");
        }
    }
}
