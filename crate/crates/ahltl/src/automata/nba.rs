//! Translation through very weak alternating automata and generalized Büchi
//! automata, degeneralized with a counter.

use std::collections::{HashMap, VecDeque};

use super::{Cube, Letter, Nnf};
use crate::graph;
use crate::spec::Ltl;

/// State-based Büchi automaton over [`Cube`]-labelled edges. A letter with no matching edge rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondetBuchiAutomaton {
    bits: usize,
    init: u32,
    edges: Vec<Vec<(Cube, u32)>>,
    accepting: Vec<bool>,
}

impl NondetBuchiAutomaton {
    pub fn from_parts(bits: usize, init: u32, edges: Vec<Vec<(Cube, u32)>>, accepting: Vec<bool>) -> Self {
        assert_eq!(edges.len(), accepting.len());
        assert!((init as usize) < edges.len());
        NondetBuchiAutomaton { bits, init, edges, accepting }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn init(&self) -> u32 {
        self.init
    }

    pub fn edges(&self, q: u32) -> &[(Cube, u32)] {
        &self.edges[q as usize]
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn successors(&self, q: u32, l: Letter) -> impl Iterator<Item = u32> + '_ {
        self.edges(q).iter().filter(move |(c, _)| c.matches(l)).map(|&(_, t)| t)
    }

    /// At most one target per state and letter.
    pub fn is_deterministic(&self) -> bool {
        self.edges.iter().all(|es| {
            es.iter()
                .enumerate()
                .all(|(i, a)| es[i + 1..].iter().all(|b| a.1 == b.1 || !a.0.intersects(b.0)))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Tr {
    cube: Cube,
    next: Vec<u32>,
    /// Until-formulas whose chosen alternative discharged the obligation.
    ful: u64,
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn product(xs: &[Tr], ys: &[Tr]) -> Vec<Tr> {
    let mut out = Vec::new();
    for x in xs {
        for y in ys {
            if let Some(cube) = x.cube.and(y.cube) {
                out.push(Tr { cube, next: union(&x.next, &y.next), ful: x.ful | y.ful });
            }
        }
    }
    prune(out)
}

/// Drops transitions that another one dominates: weaker guard, fewer obligations, more discharges.
fn prune(mut ts: Vec<Tr>) -> Vec<Tr> {
    ts.sort_by(|a, b| (a.next.len(), a.cube, &a.next, a.ful).cmp(&(b.next.len(), b.cube, &b.next, b.ful)));
    ts.dedup();
    let mut keep: Vec<Tr> = Vec::with_capacity(ts.len());
    for t in ts {
        let dominated = keep
            .iter()
            .any(|k| t.cube.implies(k.cube) && subset(&k.next, &t.next) && k.ful & t.ful == t.ful);
        if !dominated {
            keep.retain(|k| !(k.cube.implies(t.cube) && subset(&t.next, &k.next) && t.ful & k.ful == k.ful));
            keep.push(t);
        }
    }
    keep
}

struct Builder {
    forms: Vec<Nnf>,
    ids: HashMap<Nnf, u32>,
    /// Acceptance index of each until-formula, by formula id.
    until_index: HashMap<u32, u32>,
    deltas: HashMap<u32, Vec<Tr>>,
}

impl Builder {
    fn id(&mut self, f: &Nnf) -> u32 {
        if let Some(&i) = self.ids.get(f) {
            return i;
        }
        let i = self.forms.len() as u32;
        self.forms.push(f.clone());
        self.ids.insert(f.clone(), i);
        if matches!(f, Nnf::U(..)) {
            let k = self.until_index.len() as u32;
            assert!(k < 64, "more than 64 until-subformulas");
            self.until_index.insert(i, k);
        }
        i
    }

    /// Disjunctive normal form over the temporal and literal subformulas.
    fn bar(&mut self, f: &Nnf) -> Vec<Vec<u32>> {
        match f {
            Nnf::True => vec![vec![]],
            Nnf::False => vec![],
            Nnf::And(xs) => {
                let mut acc = vec![vec![]];
                for x in xs {
                    let b = self.bar(x);
                    let mut next = Vec::new();
                    for a in &acc {
                        for c in &b {
                            next.push(union(a, c));
                        }
                    }
                    next.sort();
                    next.dedup();
                    acc = next;
                }
                acc
            }
            Nnf::Or(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(self.bar(x));
                }
                out.sort();
                out.dedup();
                out
            }
            f => vec![vec![self.id(f)]],
        }
    }

    fn delta_of(&mut self, f: &Nnf) -> Vec<Tr> {
        match f {
            Nnf::True => vec![Tr { cube: Cube::TOP, next: vec![], ful: 0 }],
            Nnf::False => vec![],
            Nnf::Lit { bit, pos } => {
                let m = 1u32 << bit;
                let cube = if *pos { Cube { pos: m, neg: 0 } } else { Cube { pos: 0, neg: m } };
                vec![Tr { cube, next: vec![], ful: 0 }]
            }
            Nnf::And(xs) => {
                let mut acc = vec![Tr { cube: Cube::TOP, next: vec![], ful: 0 }];
                for x in xs {
                    let d = self.delta_of(x);
                    acc = product(&acc, &d);
                }
                acc
            }
            Nnf::Or(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(self.delta_of(x));
                }
                prune(out)
            }
            _ => {
                let id = self.id(f);
                self.delta(id)
            }
        }
    }

    fn delta(&mut self, id: u32) -> Vec<Tr> {
        if let Some(d) = self.deltas.get(&id) {
            return d.clone();
        }
        let f = self.forms[id as usize].clone();
        let stay = vec![Tr { cube: Cube::TOP, next: vec![id], ful: 0 }];
        let d = match &f {
            Nnf::X(g) => self
                .bar(g)
                .into_iter()
                .map(|next| Tr { cube: Cube::TOP, next, ful: 0 })
                .collect(),
            Nnf::U(a, b) => {
                let bit = 1u64 << self.until_index[&id];
                let mut out: Vec<Tr> = self
                    .delta_of(b)
                    .into_iter()
                    .map(|t| Tr { ful: t.ful | bit, ..t })
                    .collect();
                let da = self.delta_of(a);
                out.extend(product(&da, &stay));
                prune(out)
            }
            Nnf::R(a, b) => {
                let db = self.delta_of(b);
                let mut alt = self.delta_of(a);
                alt.extend(stay);
                product(&db, &prune(alt))
            }
            lit => self.delta_of(lit),
        };
        self.deltas.insert(id, d.clone());
        d
    }
}

/// Builds a Büchi automaton for `body` where atom `i` is bit `i` and `moved` of
/// stuttering `j` is bit `n_atoms + j`; `bits` is the alphabet width.
pub fn ltl_to_nba(body: &Ltl, n_atoms: usize, bits: usize) -> NondetBuchiAutomaton {
    let root = Nnf::from_ltl(body, n_atoms);
    let mut b = Builder {
        forms: Vec::new(),
        ids: HashMap::new(),
        until_index: HashMap::new(),
        deltas: HashMap::new(),
    };
    let starts = b.bar(&root);

    // generalized automaton over obligation sets
    let mut sets: Vec<Vec<u32>> = Vec::new();
    let mut set_ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut gedges: Vec<Vec<(Cube, u32, Vec<u32>)>> = Vec::new();
    let mut queue = VecDeque::new();
    let intern = |s: Vec<u32>, sets: &mut Vec<Vec<u32>>, ids: &mut HashMap<Vec<u32>, u32>, q: &mut VecDeque<u32>| {
        if let Some(&i) = ids.get(&s) {
            return i;
        }
        let i = sets.len() as u32;
        ids.insert(s.clone(), i);
        sets.push(s);
        q.push_back(i);
        i
    };
    let start_ids: Vec<u32> = starts
        .into_iter()
        .map(|s| intern(s, &mut sets, &mut set_ids, &mut queue))
        .collect();
    while let Some(i) = queue.pop_front() {
        let set = sets[i as usize].clone();
        let mut trs = vec![Tr { cube: Cube::TOP, next: vec![], ful: 0 }];
        for &s in &set {
            let d = b.delta(s);
            trs = product(&trs, &d);
        }
        let mut out = Vec::new();
        for t in trs {
            let mut acc = Vec::new();
            for (&u, &k) in &b.until_index {
                if t.next.binary_search(&u).is_err() || t.ful >> k & 1 == 1 {
                    acc.push(k);
                }
            }
            acc.sort_unstable();
            let target = intern(t.next, &mut sets, &mut set_ids, &mut queue);
            out.push((t.cube, target, acc));
        }
        while gedges.len() <= i as usize {
            gedges.push(Vec::new());
        }
        gedges[i as usize] = out;
    }
    gedges.resize(sets.len(), Vec::new());
    let k = b.until_index.len() as u32;
    degeneralize(bits, &start_ids, &gedges, k)
}

fn degeneralize(bits: usize, starts: &[u32], gedges: &[Vec<(Cube, u32, Vec<u32>)>], k: u32) -> NondetBuchiAutomaton {
    // state 0 is a fresh initial state; (set, counter) pairs follow
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut keys: Vec<(u32, u32)> = vec![(u32::MAX, 0)];
    let mut edges: Vec<Vec<(Cube, u32)>> = vec![Vec::new()];
    let mut queue = VecDeque::new();
    let step = |c: u32, acc: &[u32]| {
        let mut c = if c == k { 0 } else { c };
        while c < k && acc.binary_search(&c).is_ok() {
            c += 1;
        }
        c
    };
    let mut intern = |key: (u32, u32), keys: &mut Vec<(u32, u32)>, edges: &mut Vec<Vec<(Cube, u32)>>, q: &mut VecDeque<u32>| {
        *ids.entry(key).or_insert_with(|| {
            keys.push(key);
            edges.push(Vec::new());
            q.push_back(keys.len() as u32 - 1);
            keys.len() as u32 - 1
        })
    };
    let mut init_edges = Vec::new();
    for &s in starts {
        for (cube, t, acc) in &gedges[s as usize] {
            let target = intern((*t, step(0, acc)), &mut keys, &mut edges, &mut queue);
            init_edges.push((*cube, target));
        }
    }
    edges[0] = init_edges;
    while let Some(q) = queue.pop_front() {
        let (s, c) = keys[q as usize];
        let mut out = Vec::new();
        for (cube, t, acc) in &gedges[s as usize] {
            let target = intern((*t, step(c, acc)), &mut keys, &mut edges, &mut queue);
            out.push((*cube, target));
        }
        edges[q as usize] = out;
    }
    let accepting: Vec<bool> = keys.iter().enumerate().map(|(i, &(_, c))| i > 0 && c == k).collect();
    prune_dead(NondetBuchiAutomaton { bits, init: 0, edges, accepting })
}

/// Keeps the initial state and the states that can still reach an accepting cycle.
fn prune_dead(a: NondetBuchiAutomaton) -> NondetBuchiAutomaton {
    let n = a.num_states();
    let succ = |v: usize| a.edges[v].iter().map(|&(_, t)| t as usize).collect::<Vec<_>>();
    let sccs = graph::sccs(n, 0..n, succ);
    let mut good_comp = vec![false; sccs.count()];
    for v in 0..n {
        if a.accepting[v] && sccs.on_cycle(v) {
            good_comp[sccs.comp[v] as usize] = true;
        }
    }
    // components come out in reverse topological order, so successors are final before predecessors
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| sccs.comp[v]);
    let mut live = vec![false; n];
    for &v in &order {
        live[v] = good_comp[sccs.comp[v] as usize];
    }
    let mut changed = true;
    while changed {
        changed = false;
        for &v in &order {
            if !live[v] && a.edges[v].iter().any(|&(_, t)| live[t as usize]) {
                live[v] = true;
                changed = true;
            }
        }
    }
    live[a.init as usize] = true;
    let reach = graph::reachable(n, [a.init as usize], |v| {
        a.edges[v].iter().filter(|&&(_, t)| live[t as usize]).map(|&(_, t)| t as usize).collect::<Vec<_>>()
    });
    let mut map = vec![u32::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if reach[v] {
            map[v] = next;
            next += 1;
        }
    }
    let mut edges = vec![Vec::new(); next as usize];
    let mut accepting = vec![false; next as usize];
    for v in 0..n {
        if !reach[v] {
            continue;
        }
        let m = map[v] as usize;
        accepting[m] = a.accepting[v];
        let mut es: Vec<(Cube, u32)> = a.edges[v]
            .iter()
            .filter(|&&(_, t)| reach[t as usize])
            .map(|&(c, t)| (c, map[t as usize]))
            .collect();
        es.sort();
        es.dedup();
        edges[m] = es;
    }
    NondetBuchiAutomaton { bits: a.bits, init: map[a.init as usize], edges, accepting }
}
