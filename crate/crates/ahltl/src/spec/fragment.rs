//! Syntactic classification into the fragments where a lost game certifies a violation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{AhltlFormula, CmpOp, Expr, Ltl, Quant};
use crate::ts::{termination_info, TransitionSystem};

/// Variables whose values the stutterings of traces `i < j` must keep equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColorSet {
    pub i: usize,
    pub j: usize,
    pub vars: BTreeSet<String>,
}

/// Boolean structure of a body over state formulas and its single phase/invariant formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Skeleton {
    Const(bool),
    /// A temporal-free subformula, evaluated at position 0.
    State(Ltl),
    And(Vec<Skeleton>),
    Or(Vec<Skeleton>),
    Phase,
}

impl Skeleton {
    pub fn eval(&self, state: &mut impl FnMut(&Ltl) -> bool, phase: bool) -> bool {
        match self {
            Skeleton::Const(b) => *b,
            Skeleton::State(l) => state(l),
            Skeleton::And(xs) => xs.iter().all(|x| x.eval(state, phase)),
            Skeleton::Or(xs) => xs.iter().any(|x| x.eval(state, phase)),
            Skeleton::Phase => phase,
        }
    }

    fn state_leaves<'a>(&'a self, out: &mut Vec<&'a Ltl>) {
        match self {
            Skeleton::State(l) => out.push(l),
            Skeleton::And(xs) | Skeleton::Or(xs) => xs.iter().for_each(|x| x.state_leaves(out)),
            Skeleton::Const(_) | Skeleton::Phase => {}
        }
    }
}

/// A body of the form "boolean combination of state formulas and one positive `G (/\ atoms)`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantShape {
    /// Atoms conjoined under the invariant.
    pub atoms: Vec<usize>,
    /// `stutter_of[i]` is the only stuttering on trace `i`.
    pub stutter_of: Vec<usize>,
    #[serde(skip)]
    pub skeleton: Skeleton,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdmissibleInfo {
    /// One entry per trace pair `i < j`, possibly with no variables.
    pub color_sets: Vec<ColorSet>,
    #[serde(skip)]
    pub state_formulas: Vec<Ltl>,
    pub phase_polarity_ok: bool,
}

impl AdmissibleInfo {
    pub fn colors(&self, i: usize, j: usize) -> &BTreeSet<String> {
        let (i, j) = (i.min(j), i.max(j));
        &self.color_sets.iter().find(|c| c.i == i && c.j == j).expect("pair present").vars
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletenessTag {
    Admissible,
    RectangleClosed,
    AlternationFree,
    Terminating,
}

impl CompletenessTag {
    pub fn name(self) -> &'static str {
        match self {
            CompletenessTag::Admissible => "admissible",
            CompletenessTag::RectangleClosed => "rectangle-closed",
            CompletenessTag::AlternationFree => "alternation-free",
            CompletenessTag::Terminating => "terminating",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FragmentReport {
    pub is_forall_exists: bool,
    pub stutters_per_trace: BTreeMap<String, usize>,
    pub universal_stutter_count: usize,
    pub alternation_free: bool,
    pub admissible: Option<AdmissibleInfo>,
    pub rectangle_closed: bool,
    #[serde(skip)]
    pub invariant: Option<InvariantShape>,
    /// Maximum depth over the bound systems, when all of them terminate.
    pub terminating_complete: Option<usize>,
    pub complete_at_z: Option<usize>,
    /// The fragment that yields `complete_at_z`.
    pub complete_via: Option<CompletenessTag>,
}

impl FragmentReport {
    /// Whether a loss at window `z` certifies a violation.
    pub fn complete_for(&self, z: usize) -> Option<CompletenessTag> {
        match self.complete_at_z {
            Some(c) if c <= z => self.complete_via,
            _ => None,
        }
    }
}

/// `systems` may be empty, in which case termination is not considered.
pub fn classify_fragment(f: &AhltlFormula, systems: &[&TransitionSystem]) -> FragmentReport {
    let is_forall_exists = f.is_forall_exists();
    let stutters_per_trace: BTreeMap<String, usize> =
        f.traces.iter().enumerate().map(|(i, t)| (t.name.clone(), f.stutters_on(i).len())).collect();
    let universal_stutter_count = f.stutters_with(Quant::Forall).len();
    let one_per_trace = stutters_per_trace.values().all(|&c| c <= 1);
    let quants: Vec<Quant> = f.traces.iter().map(|t| t.quant).chain(f.stutters.iter().map(|s| s.quant)).collect();
    let alternation_free = one_per_trace && (quants.iter().all(|&q| q == Quant::Forall) || quants.iter().all(|&q| q == Quant::Exists));

    let invariant = invariant_shape(f);
    let admissible = invariant.as_ref().and_then(|inv| admissible_info(f, inv));
    let rectangle_closed = invariant.is_some();

    let terminating_complete = if systems.is_empty() {
        None
    } else {
        systems
            .iter()
            .map(|ts| termination_info(ts).depth)
            .try_fold(0usize, |acc, d| d.map(|d| acc.max(d)))
    };

    let mut candidates = Vec::new();
    if is_forall_exists {
        if admissible.is_some() {
            candidates.push((1, CompletenessTag::Admissible));
        }
        if rectangle_closed {
            candidates.push((1, CompletenessTag::RectangleClosed));
        }
        if alternation_free {
            candidates.push((1, CompletenessTag::AlternationFree));
        }
        if let Some(d) = terminating_complete {
            candidates.push((d.max(1), CompletenessTag::Terminating));
        }
    }
    let best = candidates.into_iter().min();
    FragmentReport {
        is_forall_exists,
        stutters_per_trace,
        universal_stutter_count,
        alternation_free,
        admissible,
        rectangle_closed,
        invariant,
        terminating_complete,
        complete_at_z: best.map(|b| b.0),
        complete_via: best.map(|b| b.1),
    }
}

/// Body in negation normal form, with temporal-free subtrees kept whole.
#[derive(Clone, Debug)]
enum Node {
    State(Ltl),
    And(Vec<Node>),
    Or(Vec<Node>),
    /// Positive `G` over a conjunction of positive atoms.
    Invariant(Vec<usize>),
    /// Any other temporal subformula.
    Other,
}

fn nnf(l: &Ltl, pos: bool) -> Node {
    if !l.is_temporal() {
        return Node::State(if pos { l.clone() } else { Ltl::not(l.clone()) });
    }
    let join = |conj: bool, a: Node, b: Node| {
        let mut out = Vec::new();
        for x in [a, b] {
            match x {
                Node::And(xs) if conj => out.extend(xs),
                Node::Or(xs) if !conj => out.extend(xs),
                x => out.push(x),
            }
        }
        if conj {
            Node::And(out)
        } else {
            Node::Or(out)
        }
    };
    match l {
        Ltl::Not(a) => nnf(a, !pos),
        Ltl::And(a, b) => join(pos, nnf(a, pos), nnf(b, pos)),
        Ltl::Or(a, b) => join(!pos, nnf(a, pos), nnf(b, pos)),
        Ltl::Implies(a, b) => join(!pos, nnf(a, !pos), nnf(b, pos)),
        Ltl::Iff(a, b) => {
            let both = join(true, nnf(a, true), nnf(b, pos));
            let neither = join(true, nnf(a, false), nnf(b, !pos));
            join(false, both, neither)
        }
        Ltl::Globally(g) if pos => match positive_conjunction(g) {
            Some(atoms) => Node::Invariant(atoms),
            None => Node::Other,
        },
        _ => Node::Other,
    }
}

fn positive_conjunction(l: &Ltl) -> Option<Vec<usize>> {
    match l {
        Ltl::True => Some(Vec::new()),
        Ltl::Atom(i) => Some(vec![*i]),
        Ltl::And(a, b) => {
            let mut v = positive_conjunction(a)?;
            v.extend(positive_conjunction(b)?);
            Some(v)
        }
        _ => None,
    }
}

/// Counts invariant leaves; rejects formulas with any other temporal leaf.
fn count_leaves(n: &Node) -> Option<usize> {
    match n {
        Node::State(_) => Some(0),
        Node::Invariant(_) => Some(1),
        Node::Other => None,
        Node::And(xs) | Node::Or(xs) => xs.iter().try_fold(0, |acc, x| Some(acc + count_leaves(x)?)),
    }
}

/// Turns the NNF tree into a skeleton, merging the invariant leaves into one `Phase`.
/// The leaves must be siblings under a single conjunction.
fn skeleton(n: &Node, atoms: &mut Vec<usize>) -> Option<Skeleton> {
    match n {
        Node::State(Ltl::True) => Some(Skeleton::Const(true)),
        Node::State(Ltl::False) => Some(Skeleton::Const(false)),
        Node::State(l) => Some(Skeleton::State(l.clone())),
        Node::Invariant(a) => {
            atoms.extend(a);
            Some(Skeleton::Phase)
        }
        Node::Other => None,
        Node::And(xs) => {
            let leaves = xs.iter().filter(|x| matches!(x, Node::Invariant(_))).count();
            let mut out = Vec::new();
            for x in xs {
                match x {
                    Node::Invariant(a) => atoms.extend(a),
                    x => {
                        if leaves > 0 && count_leaves(x)? > 0 {
                            return None;
                        }
                        out.push(skeleton(x, atoms)?);
                    }
                }
            }
            if leaves > 0 {
                out.push(Skeleton::Phase);
            }
            Some(Skeleton::And(out))
        }
        Node::Or(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.push(skeleton(x, atoms)?);
            }
            Some(Skeleton::Or(out))
        }
    }
}

fn invariant_shape(f: &AhltlFormula) -> Option<InvariantShape> {
    if f.traces.is_empty() || f.traces.iter().any(|t| t.quant != Quant::Forall) {
        return None;
    }
    if f.stutters.len() != f.traces.len() || f.stutters.iter().any(|s| s.quant != Quant::Exists) {
        return None;
    }
    let mut stutter_of = vec![usize::MAX; f.traces.len()];
    for (j, s) in f.stutters.iter().enumerate() {
        if stutter_of[s.base] != usize::MAX {
            return None;
        }
        stutter_of[s.base] = j;
    }
    let tree = nnf(&f.body, true);
    if count_leaves(&tree)? > 1 && !matches!(tree, Node::And(_)) {
        return None;
    }
    let mut atoms = Vec::new();
    let skeleton = skeleton(&tree, &mut atoms)?;
    let mut seen = BTreeSet::new();
    atoms.retain(|a| seen.insert(*a));
    for &a in &atoms {
        if !rectangle_closed_atom(&f.atoms[a].expr) {
            return None;
        }
    }
    Some(InvariantShape { atoms, stutter_of, skeleton })
}

/// `e1 = e2` where each side mentions at most one stuttering.
fn rectangle_closed_atom(e: &Expr) -> bool {
    match e {
        Expr::Cmp(CmpOp::Eq, a, b) => a.stutters().len() <= 1 && b.stutters().len() <= 1,
        _ => false,
    }
}

fn admissible_info(f: &AhltlFormula, inv: &InvariantShape) -> Option<AdmissibleInfo> {
    let n = f.traces.len();
    let mut sets: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            sets.insert((i, j), BTreeSet::new());
        }
    }
    for &a in &inv.atoms {
        let Expr::Cmp(CmpOp::Eq, l, r) = &f.atoms[a].expr else {
            return None;
        };
        let (Expr::Var { var: x, stutter: s }, Expr::Var { var: y, stutter: t }) = (&**l, &**r) else {
            return None;
        };
        let (bi, bj) = (f.stutters[*s].base, f.stutters[*t].base);
        if x != y || bi == bj {
            return None;
        }
        sets.get_mut(&(bi.min(bj), bi.max(bj))).unwrap().insert(x.clone());
    }
    let mut leaves = Vec::new();
    inv.skeleton.state_leaves(&mut leaves);
    Some(AdmissibleInfo {
        color_sets: sets.into_iter().map(|((i, j), vars)| ColorSet { i, j, vars }).collect(),
        state_formulas: leaves.into_iter().cloned().collect(),
        phase_polarity_ok: true,
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;
    use crate::ts::parse_system;

    const OD: &str = "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. (l@b1 = l@b2) -> G (o@b1 = o@b2)";
    const FAIR: &str = "forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. X G (a@b1 != a@b2)";

    #[test]
    fn observational_determinism_is_admissible() {
        let r = classify_fragment(&parse_formula(OD).unwrap(), &[]);
        let adm = r.admissible.as_ref().unwrap();
        assert_eq!(adm.colors(0, 1).iter().cloned().collect::<Vec<_>>(), vec!["o".to_string()]);
        assert_eq!(adm.state_formulas.len(), 1);
        assert!(r.rectangle_closed);
        assert_eq!(r.complete_at_z, Some(1));
        assert_eq!(r.complete_via, Some(CompletenessTag::Admissible));
        let skel = &r.invariant.as_ref().unwrap().skeleton;
        assert_eq!(skel, &Skeleton::Or(vec![Skeleton::State(Ltl::not(Ltl::Atom(0))), Skeleton::Phase]));
    }

    #[test]
    fn fair_formula_has_no_fragment() {
        let fig4 = parse_system(
            "system fig4\nvar a : int(0..1)\nstate s0 { a = 0 } init\nstate s1 { a = 1 }\nstate s2 { a = 1 }\n\
             trans s0 -> s0, s1\ntrans s1 -> s2\ntrans s2 -> s1, s0\n",
        )
        .unwrap();
        let r = classify_fragment(&parse_formula(FAIR).unwrap(), &[&fig4, &fig4]);
        assert!(r.is_forall_exists);
        assert!(r.admissible.is_none());
        assert!(!r.alternation_free);
        assert_eq!(r.terminating_complete, None);
        assert_eq!(r.complete_at_z, None);
    }

    #[test]
    fn probing_attack_is_rectangle_closed_only() {
        let f = parse_formula(
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. \
             (l@b1 = l@b2) -> G ((w1@b1 | w2@b1 | w3@b1) = (w1@b2 | w2@b2 | w3@b2))",
        )
        .unwrap();
        let r = classify_fragment(&f, &[]);
        assert!(r.rectangle_closed);
        assert!(r.admissible.is_none());
        assert_eq!(r.complete_at_z, Some(1));
        assert_eq!(r.complete_via, Some(CompletenessTag::RectangleClosed));
    }

    #[test]
    fn shapes_that_do_not_match() {
        for text in [
            // phase formula under negation
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. !G (o@b1 = o@b2)",
            // two occurrences in different branches
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. G (o@b1 = o@b2) | G (l@b1 = l@b2)",
            // not an invariant
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. F (o@b1 = o@b2)",
            // disequality
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. G (o@b1 != o@b2)",
            // two stutterings on one trace
            "forall p1. exists b1 ~ p1. exists b2 ~ p1. G (o@b1 = o@b2)",
            // existential trace
            "forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. G (o@b1 = o@b2)",
        ] {
            let r = classify_fragment(&parse_formula(text).unwrap(), &[]);
            assert!(!r.rectangle_closed, "{text}");
            assert!(r.admissible.is_none(), "{text}");
        }
    }

    #[test]
    fn sibling_invariants_merge() {
        let f = parse_formula(
            "forall p1. forall p2. forall p3. exists b1 ~ p1. exists b2 ~ p2. exists b3 ~ p3. \
             G (o@b1 = o@b2) & (x@b1 = 0) & G (o@b2 = o@b3 & y@b1 = y@b3)",
        )
        .unwrap();
        let r = classify_fragment(&f, &[]);
        let adm = r.admissible.unwrap();
        assert_eq!(adm.colors(0, 1).len(), 1);
        assert_eq!(adm.colors(1, 2).len(), 1);
        assert_eq!(adm.colors(0, 2).iter().next().unwrap(), "y");
    }

    #[test]
    fn cross_variable_equality_is_rectangle_closed() {
        let f = parse_formula("forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. G (a@b1 = b@b2 + c@b2)").unwrap();
        let r = classify_fragment(&f, &[]);
        assert!(r.rectangle_closed && r.admissible.is_none());
    }

    #[test]
    fn alternation_free_and_terminating() {
        let chain = parse_system(
            "system c\nvar x : bool\nstate a { x = true } init\nstate b { x = false }\nstate c { x = true }\n\
             trans a -> b\ntrans b -> c\ntrans c -> c\n",
        )
        .unwrap();
        let f = parse_formula("exists p. exists q. exists b ~ p. exists c ~ q. F (x@b != x@c)").unwrap();
        let r = classify_fragment(&f, &[&chain, &chain]);
        assert!(r.alternation_free);
        assert_eq!(r.terminating_complete, Some(2));
        assert_eq!(r.complete_at_z, Some(1));
        assert_eq!(r.complete_via, Some(CompletenessTag::AlternationFree));
        let g = parse_formula("forall p. exists q. exists b ~ p. exists c ~ q. exists d ~ q. F (x@b != x@c)").unwrap();
        let r = classify_fragment(&g, &[&chain, &chain]);
        assert_eq!(r.complete_at_z, Some(2));
        assert_eq!(r.complete_via, Some(CompletenessTag::Terminating));
        let h = parse_formula("exists p. forall q. exists b ~ p. exists c ~ q. F (x@b != x@c)").unwrap();
        let r = classify_fragment(&h, &[&chain, &chain]);
        assert!(!r.is_forall_exists);
        assert_eq!(r.complete_at_z, None);
    }
}
