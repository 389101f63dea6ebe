use std::collections::HashMap;

use super::{DetParityAutomaton, LassoWord, NondetBuchiAutomaton};
use crate::graph;
use crate::spec::Ltl;

/// Direct LTL semantics on the `len()` distinct positions of a lasso.
///
/// Bit `i` of a letter is atom `i`; bit `n_atoms + j` is `moved` of stuttering `j`.
pub fn ltl_lasso_eval(body: &Ltl, n_atoms: usize, w: &LassoWord) -> bool {
    eval(body, n_atoms, w)[0]
}

fn eval(f: &Ltl, na: usize, w: &LassoWord) -> Vec<bool> {
    let n = w.len();
    let bit = |b: usize| (0..n).map(|i| w.at(i) >> b & 1 == 1).collect::<Vec<_>>();
    let pointwise = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect::<Vec<_>>()
    };
    match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Atom(i) => bit(*i),
        Ltl::Moved(j) => bit(na + *j),
        Ltl::Not(a) => eval(a, na, w).into_iter().map(|x| !x).collect(),
        Ltl::And(a, b) => pointwise(eval(a, na, w), eval(b, na, w), |x, y| x && y),
        Ltl::Or(a, b) => pointwise(eval(a, na, w), eval(b, na, w), |x, y| x || y),
        Ltl::Implies(a, b) => pointwise(eval(a, na, w), eval(b, na, w), |x, y| !x || y),
        Ltl::Iff(a, b) => pointwise(eval(a, na, w), eval(b, na, w), |x, y| x == y),
        Ltl::Next(a) => {
            let a = eval(a, na, w);
            (0..n).map(|i| a[w.next(i)]).collect()
        }
        Ltl::Until(a, b) => {
            let (a, b) = (eval(a, na, w), eval(b, na, w));
            fixpoint(w, false, |i, nx| b[i] || (a[i] && nx))
        }
        Ltl::Finally(a) => {
            let a = eval(a, na, w);
            fixpoint(w, false, |i, nx| a[i] || nx)
        }
        Ltl::Globally(a) => {
            let a = eval(a, na, w);
            fixpoint(w, true, |i, nx| a[i] && nx)
        }
    }
}

/// Iterates `x[i] = step(i, x[next(i)])` from the constant `start` until stable.
fn fixpoint(w: &LassoWord, start: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = w.len();
    let mut x = vec![start; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = step(i, x[w.next(i)]);
            if v != x[i] {
                x[i] = v;
                changed = true;
            }
        }
        if !changed {
            return x;
        }
    }
}

/// Membership through the product of the automaton with the lasso positions.
pub fn nba_accepts_lasso(nba: &NondetBuchiAutomaton, w: &LassoWord) -> bool {
    let len = w.len();
    let n = nba.num_states() * len;
    let node = |q: u32, i: usize| q as usize * len + i;
    let succ = |v: usize| {
        let (q, i) = ((v / len) as u32, v % len);
        nba.successors(q, w.at(i)).map(|t| node(t, w.next(i))).collect::<Vec<_>>()
    };
    let sccs = graph::sccs(n, [node(nba.init(), 0)], succ);
    (0..n).any(|v| sccs.on_cycle(v) && nba.is_accepting((v / len) as u32))
}

/// Runs the prefix, then whole loop iterations until the state at the loop start repeats.
pub fn dpa_accepts_lasso(dpa: &DetParityAutomaton, w: &LassoWord) -> bool {
    let mut q = dpa.init();
    for &l in &w.prefix {
        q = dpa.step(q, l);
    }
    let mut starts: HashMap<u32, usize> = HashMap::new();
    let mut mins: Vec<u32> = Vec::new();
    loop {
        if let Some(&k) = starts.get(&q) {
            return mins[k..].iter().min().unwrap().is_multiple_of(2);
        }
        starts.insert(q, mins.len());
        let mut m = u32::MAX;
        for &l in &w.cycle {
            q = dpa.step(q, l);
            m = m.min(dpa.priority(q));
        }
        mins.push(m);
    }
}
