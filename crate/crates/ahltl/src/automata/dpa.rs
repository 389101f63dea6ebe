//! Safra–Piterman determinization into a state-based min-even parity automaton.

use std::collections::{HashMap, VecDeque};

use super::{Letter, NondetBuchiAutomaton};
use crate::error::{Error, Result};
use crate::graph;

/// Deterministic parity automaton with a total, explicit transition table.
///
/// A run accepts iff the least priority of the states it visits infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetParityAutomaton {
    bits: usize,
    init: u32,
    delta: Vec<u32>,
    priority: Vec<u32>,
}

pub fn dpa_run_step(dpa: &DetParityAutomaton, q: u32, letter: Letter) -> u32 {
    dpa.step(q, letter)
}

impl DetParityAutomaton {
    /// `delta[q << bits | letter]` is the successor of `q` under `letter`.
    pub fn from_parts(bits: usize, init: u32, delta: Vec<u32>, priority: Vec<u32>) -> Self {
        assert_eq!(delta.len(), priority.len() << bits);
        DetParityAutomaton { bits, init, delta, priority }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn num_states(&self) -> usize {
        self.priority.len()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.bits
    }

    pub fn init(&self) -> u32 {
        self.init
    }

    pub fn step(&self, q: u32, letter: Letter) -> u32 {
        self.delta[(q as usize) << self.bits | letter as usize]
    }

    pub fn priority(&self, q: u32) -> u32 {
        self.priority[q as usize]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    /// Number of distinct priorities in use.
    pub fn num_priorities(&self) -> usize {
        let mut p = self.priority.clone();
        p.sort_unstable();
        p.dedup();
        p.len()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DeterminizeOptions {
    pub max_states: usize,
    /// Widest alphabet for which the explicit table is built.
    pub max_bits: usize,
}

impl Default for DeterminizeOptions {
    fn default() -> Self {
        DeterminizeOptions { max_states: 200_000, max_bits: 16 }
    }
}

type Bits = Vec<u64>;

fn bits_new(n: usize) -> Bits {
    vec![0; n.div_ceil(64).max(1)]
}

fn bits_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn bits_iter(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |i| w >> i & 1 == 1).map(move |i| k * 64 + i))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    name: u32,
    label: Bits,
    children: Vec<Node>,
}

struct Ctx<'a> {
    nba: &'a NondetBuchiAutomaton,
    accepting: Bits,
}

impl Ctx<'_> {
    fn succ(&self, label: &Bits, l: Letter) -> Bits {
        let mut out = bits_new(self.nba.num_states());
        for q in bits_iter(label) {
            for t in self.nba.successors(q as u32, l) {
                bits_set(&mut out, t as usize);
            }
        }
        out
    }

    fn relabel(&self, n: &mut Node, l: Letter) {
        n.label = self.succ(&n.label, l);
        for c in &mut n.children {
            self.relabel(c, l);
        }
    }

    fn spawn(&self, n: &mut Node, fresh: &mut u32) {
        for c in &mut n.children {
            self.spawn(c, fresh);
        }
        let acc: Bits = n.label.iter().zip(&self.accepting).map(|(a, b)| a & b).collect();
        if !bits_empty(&acc) {
            n.children.push(Node { name: *fresh, label: acc, children: Vec::new() });
            *fresh += 1;
        }
    }
}

fn max_name(n: &Node) -> u32 {
    n.children.iter().map(max_name).max().unwrap_or(0).max(n.name)
}

fn remove_states(n: &mut Node, drop: &Bits) {
    for (w, d) in n.label.iter_mut().zip(drop) {
        *w &= !d;
    }
    for c in &mut n.children {
        remove_states(c, drop);
    }
}

/// A state stays only in the oldest sibling subtree that holds it.
fn horizontal_merge(n: &mut Node) {
    let mut seen = bits_new(n.label.len() * 64);
    for c in &mut n.children {
        remove_states(c, &seen);
        for (s, w) in seen.iter_mut().zip(&c.label) {
            *s |= w;
        }
        horizontal_merge(c);
    }
}

fn remove_empty(n: &mut Node, removed: &mut u32) {
    n.children.retain(|c| {
        if bits_empty(&c.label) {
            *removed = (*removed).min(min_name(c));
            false
        } else {
            true
        }
    });
    for c in &mut n.children {
        remove_empty(c, removed);
    }
}

fn min_name(n: &Node) -> u32 {
    n.children.iter().map(min_name).min().unwrap_or(u32::MAX).min(n.name)
}

fn vertical_merge(n: &mut Node, green: &mut u32, removed: &mut u32) {
    if n.children.is_empty() {
        return;
    }
    let mut union = bits_new(n.label.len() * 64);
    for c in &n.children {
        for (u, w) in union.iter_mut().zip(&c.label) {
            *u |= w;
        }
    }
    if union == n.label {
        *green = (*green).min(n.name);
        for c in &n.children {
            *removed = (*removed).min(min_name(c));
        }
        n.children.clear();
    } else {
        for c in &mut n.children {
            vertical_merge(c, green, removed);
        }
    }
}

fn collect_names(n: &Node, out: &mut Vec<u32>) {
    out.push(n.name);
    for c in &n.children {
        collect_names(c, out);
    }
}

fn rename(n: &mut Node, map: &HashMap<u32, u32>) {
    n.name = map[&n.name];
    for c in &mut n.children {
        rename(c, map);
    }
}

/// Successor tree and the priority of the transition; `None` is the empty tree.
fn safra_step(ctx: &Ctx, tree: &Option<Node>, l: Letter, neutral: u32) -> (Option<Node>, u32) {
    let Some(t) = tree else {
        return (None, neutral);
    };
    let mut t = t.clone();
    ctx.relabel(&mut t, l);
    let mut fresh = max_name(&t) + 1;
    ctx.spawn(&mut t, &mut fresh);
    horizontal_merge(&mut t);
    let mut removed = u32::MAX;
    if bits_empty(&t.label) {
        return (None, 1);
    }
    remove_empty(&mut t, &mut removed);
    let mut green = u32::MAX;
    vertical_merge(&mut t, &mut green, &mut removed);
    let mut names = Vec::new();
    collect_names(&t, &mut names);
    names.sort_unstable();
    let map: HashMap<u32, u32> = names.iter().enumerate().map(|(i, &n)| (n, i as u32 + 1)).collect();
    rename(&mut t, &map);
    let p = match (green, removed) {
        (u32::MAX, u32::MAX) => neutral,
        (g, e) => (2 * g as u64).min(2 * e as u64 - 1).min(neutral as u64) as u32,
    };
    (Some(t), p)
}

pub fn determinize(nba: &NondetBuchiAutomaton, opts: &DeterminizeOptions) -> Result<DetParityAutomaton> {
    let bits = nba.bits();
    if bits > opts.max_bits {
        return Err(Error::CapacityExceeded { phase: "automaton", what: "letter bits", limit: opts.max_bits });
    }
    let raw = if nba.is_deterministic() {
        complete_deterministic(nba)
    } else {
        safra(nba, opts)?
    };
    Ok(normalize(raw))
}

fn complete_deterministic(nba: &NondetBuchiAutomaton) -> DetParityAutomaton {
    let n = nba.num_states();
    let sink = n as u32;
    let letters = 1usize << nba.bits();
    let mut delta = Vec::with_capacity((n + 1) * letters);
    for q in 0..n as u32 {
        for l in 0..letters as Letter {
            delta.push(nba.successors(q, l).next().unwrap_or(sink));
        }
    }
    delta.extend(std::iter::repeat_n(sink, letters));
    let mut priority: Vec<u32> = (0..n as u32).map(|q| if nba.is_accepting(q) { 0 } else { 1 }).collect();
    priority.push(1);
    DetParityAutomaton { bits: nba.bits(), init: nba.init(), delta, priority }
}

fn safra(nba: &NondetBuchiAutomaton, opts: &DeterminizeOptions) -> Result<DetParityAutomaton> {
    let n = nba.num_states();
    let mut accepting = bits_new(n);
    for q in 0..n {
        if nba.is_accepting(q as u32) {
            bits_set(&mut accepting, q);
        }
    }
    let ctx = Ctx { nba, accepting };
    let neutral = 4 * n as u32 + 1;
    let mut init_label = bits_new(n);
    bits_set(&mut init_label, nba.init() as usize);
    let start = (Some(Node { name: 1, label: init_label, children: Vec::new() }), neutral);

    let letters = 1usize << nba.bits();
    let mut ids: HashMap<(Option<Node>, u32), u32> = HashMap::new();
    let mut keys: Vec<(Option<Node>, u32)> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(start.clone(), 0);
    keys.push(start);
    queue.push_back(0u32);
    let mut delta: Vec<u32> = Vec::new();
    // successors depend only on the tree, so they are cached per tree
    let mut by_tree: HashMap<Option<Node>, Vec<(Option<Node>, u32)>> = HashMap::new();
    while let Some(q) = queue.pop_front() {
        let tree = keys[q as usize].0.clone();
        let succs = by_tree
            .entry(tree.clone())
            .or_insert_with(|| (0..letters as Letter).map(|l| safra_step(&ctx, &tree, l, neutral)).collect())
            .clone();
        let row_start = q as usize * letters;
        if delta.len() < row_start + letters {
            delta.resize(row_start + letters, 0);
        }
        for (l, key) in succs.into_iter().enumerate() {
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    if keys.len() >= opts.max_states {
                        return Err(Error::CapacityExceeded {
                            phase: "automaton",
                            what: "parity automaton states",
                            limit: opts.max_states,
                        });
                    }
                    let id = keys.len() as u32;
                    ids.insert(key.clone(), id);
                    keys.push(key);
                    queue.push_back(id);
                    id
                }
            };
            delta[row_start + l] = id;
        }
    }
    delta.resize(keys.len() * letters, 0);
    let priority = keys.iter().map(|k| k.1).collect();
    Ok(DetParityAutomaton { bits: nba.bits(), init: 0, delta, priority })
}

/// Compacts priorities without gaps or changing parity order, then merges states
/// whose successor rows and priorities coincide until nothing changes.
fn normalize(mut a: DetParityAutomaton) -> DetParityAutomaton {
    // States off every cycle are seen finitely often; give them a successor's
    // priority so that they can merge with it below.
    let letters = 1usize << a.bits;
    let n = a.priority.len();
    let sccs = graph::sccs(n, [a.init as usize], |q| (0..letters).map(move |l| q * letters + l).map(|e| a.delta[e] as usize).collect::<Vec<_>>());
    let mut order: Vec<usize> = (0..n).filter(|&q| sccs.reached(q) && !sccs.on_cycle(q)).collect();
    order.sort_by_key(|&q| sccs.comp[q]);
    for q in order {
        a.priority[q] = a.priority[a.delta[q * letters] as usize];
    }
    let mut used = a.priority.clone();
    used.sort_unstable();
    used.dedup();
    let mut map = HashMap::new();
    let mut cur: Option<u32> = None;
    for &p in &used {
        let v = match cur {
            None => p % 2,
            Some(c) if c % 2 == p % 2 => c,
            Some(c) => c + 1,
        };
        map.insert(p, v);
        cur = Some(v);
    }
    let priority: Vec<u32> = a.priority.iter().map(|p| map[p]).collect();

    // partition refinement starting from the priority classes
    let mut class: Vec<u32> = priority.clone();
    loop {
        let mut sig_ids: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
        let mut next = vec![0u32; n];
        for q in 0..n {
            let row: Vec<u32> = (0..letters).map(|l| class[a.delta[q * letters + l] as usize]).collect();
            let k = sig_ids.len() as u32;
            next[q] = *sig_ids.entry((class[q], row)).or_insert(k);
        }
        let count = sig_ids.len();
        let before = {
            let mut c = class.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        class = next;
        if count == before {
            break;
        }
    }
    // renumber classes in order of first reach from the initial state
    let mut ren: HashMap<u32, u32> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([a.init as usize]);
    ren.insert(class[a.init as usize], 0);
    reps.push(a.init as usize);
    while let Some(q) = queue.pop_front() {
        for l in 0..letters {
            let t = a.delta[q * letters + l] as usize;
            if let std::collections::hash_map::Entry::Vacant(e) = ren.entry(class[t]) {
                e.insert(reps.len() as u32);
                reps.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut delta = Vec::with_capacity(reps.len() * letters);
    for &q in &reps {
        for l in 0..letters {
            delta.push(ren[&class[a.delta[q * letters + l] as usize]]);
        }
    }
    let priority = reps.iter().map(|&q| priority[q]).collect();
    DetParityAutomaton { bits: a.bits, init: 0, delta, priority }
}
