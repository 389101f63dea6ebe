//! Parity and Büchi games in min-parity convention: the verifier wins a play
//! iff the least priority seen infinitely often is even.

mod attractor;

use serde::Serialize;

use crate::graph;
use attractor::{attract, Preds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Player {
    Verifier,
    Refuter,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Verifier => Player::Refuter,
            Player::Refuter => Player::Verifier,
        }
    }

    /// The player favoured by priority `p`.
    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Verifier
        } else {
            Player::Refuter
        }
    }
}

/// Explicit game graph with CSR successor lists.
#[derive(Clone, Debug, Default)]
pub struct Arena {
    owner: Vec<Player>,
    priority: Vec<u32>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Arena {
    /// Panics if some vertex has no successor or an edge leaves the vertex range.
    pub fn new(owner: Vec<Player>, priority: Vec<u32>, succ: Vec<Vec<u32>>) -> Arena {
        let n = owner.len();
        assert_eq!(priority.len(), n);
        assert_eq!(succ.len(), n);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (v, s) in succ.into_iter().enumerate() {
            assert!(!s.is_empty(), "vertex {v} has no successor");
            assert!(s.iter().all(|&t| (t as usize) < n));
            targets.extend(s);
            offsets.push(targets.len() as u32);
        }
        Arena { owner, priority, offsets, targets }
    }

    pub(crate) fn from_csr(owner: Vec<Player>, priority: Vec<u32>, offsets: Vec<u32>, targets: Vec<u32>) -> Arena {
        debug_assert_eq!(offsets.len(), owner.len() + 1);
        Arena { owner, priority, offsets, targets }
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn owner(&self, v: u32) -> Player {
        self.owner[v as usize]
    }

    pub fn priority(&self, v: u32) -> u32 {
        self.priority[v as usize]
    }

    pub fn succ(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn has_edge(&self, v: u32, t: u32) -> bool {
        self.succ(v).contains(&t)
    }

    pub fn num_priorities(&self) -> usize {
        let mut ps = self.priority.clone();
        ps.sort_unstable();
        ps.dedup();
        ps.len()
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }
}

pub const NO_MOVE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    verifier_wins: Vec<bool>,
    /// Chosen successor at vertices owned by the player winning them.
    strategy: Vec<u32>,
}

impl SolveResult {
    pub fn from_parts(verifier_wins: Vec<bool>, strategy: Vec<u32>) -> SolveResult {
        assert_eq!(verifier_wins.len(), strategy.len());
        SolveResult { verifier_wins, strategy }
    }

    pub fn num_vertices(&self) -> usize {
        self.verifier_wins.len()
    }

    pub fn winner(&self, v: u32) -> Player {
        if self.verifier_wins[v as usize] {
            Player::Verifier
        } else {
            Player::Refuter
        }
    }

    pub fn verifier_wins(&self, v: u32) -> bool {
        self.verifier_wins[v as usize]
    }

    pub fn verifier_region(&self) -> Vec<u32> {
        (0..self.num_vertices() as u32).filter(|&v| self.verifier_wins(v)).collect()
    }

    pub fn refuter_region(&self) -> Vec<u32> {
        (0..self.num_vertices() as u32).filter(|&v| !self.verifier_wins(v)).collect()
    }

    /// Verifier move at a verifier-won verifier vertex.
    pub fn strategy(&self, g: &Arena, v: u32) -> Option<u32> {
        self.move_of(g, v, Player::Verifier)
    }

    /// Refuter move at a refuter-won refuter vertex.
    pub fn refuter_strategy(&self, g: &Arena, v: u32) -> Option<u32> {
        self.move_of(g, v, Player::Refuter)
    }

    fn move_of(&self, g: &Arena, v: u32, p: Player) -> Option<u32> {
        let m = self.strategy[v as usize];
        (g.owner(v) == p && self.winner(v) == p && m != NO_MOVE).then_some(m)
    }

    pub fn set_move(&mut self, v: u32, t: u32) {
        self.strategy[v as usize] = t;
    }
}

/// Zielonka's recursive algorithm; the second recursive call is a loop, so the
/// recursion depth is bounded by the number of distinct priorities.
pub fn solve_parity(g: &Arena) -> SolveResult {
    let n = g.num_vertices();
    let preds = Preds::new(g);
    let mut win = vec![Player::Refuter; n];
    let mut strategy = vec![NO_MOVE; n];
    let alive = vec![true; n];
    let members: Vec<u32> = (0..n as u32).collect();
    zielonka(g, &preds, alive, members, &mut win, &mut strategy);
    SolveResult {
        verifier_wins: win.iter().map(|&p| p == Player::Verifier).collect(),
        strategy,
    }
}

fn zielonka(
    g: &Arena,
    preds: &Preds,
    mut alive: Vec<bool>,
    mut members: Vec<u32>,
    win: &mut [Player],
    strategy: &mut [u32],
) {
    loop {
        if members.is_empty() {
            return;
        }
        let p = members.iter().map(|&v| g.priority(v)).min().unwrap();
        let i = Player::of_priority(p);
        let top: Vec<u32> = members.iter().copied().filter(|&v| g.priority(v) == p).collect();
        let a = attract(g, preds, &alive, &top, i, strategy);
        let mut sub_alive = alive.clone();
        for &v in &a {
            sub_alive[v as usize] = false;
        }
        let sub_members: Vec<u32> = members.iter().copied().filter(|&v| sub_alive[v as usize]).collect();
        zielonka(g, preds, sub_alive, sub_members.clone(), win, strategy);
        let lost: Vec<u32> = sub_members.iter().copied().filter(|&v| win[v as usize] != i).collect();
        if lost.is_empty() {
            for &v in &members {
                win[v as usize] = i;
            }
            for &v in &top {
                if g.owner(v) == i {
                    strategy[v as usize] = g.succ(v).iter().copied().filter(|&t| alive[t as usize]).min().unwrap();
                }
            }
            return;
        }
        let b = attract(g, preds, &alive, &lost, i.opponent(), strategy);
        for &v in &b {
            win[v as usize] = i.opponent();
            alive[v as usize] = false;
        }
        members.retain(|&v| alive[v as usize]);
    }
}

/// Repeated-attractor algorithm for priorities in {0, 1}.
pub fn solve_buchi(g: &Arena) -> SolveResult {
    let n = g.num_vertices();
    assert!(g.priority.iter().all(|&p| p <= 1), "solve_buchi needs priorities in {{0, 1}}");
    let preds = Preds::new(g);
    let mut alive = vec![true; n];
    let mut strategy = vec![NO_MOVE; n];
    let mut verifier_wins = vec![true; n];
    loop {
        let accepting: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize] && g.priority(v) == 0).collect();
        let mut scratch = strategy.clone();
        let reach = attract(g, &preds, &alive, &accepting, Player::Verifier, &mut scratch);
        let mut in_reach = vec![false; n];
        for &v in &reach {
            in_reach[v as usize] = true;
        }
        let trap: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize] && !in_reach[v as usize]).collect();
        if trap.is_empty() {
            strategy = scratch;
            for &v in &accepting {
                if g.owner(v) == Player::Verifier {
                    strategy[v as usize] = g.succ(v).iter().copied().filter(|&t| alive[t as usize]).min().unwrap();
                }
            }
            return SolveResult { verifier_wins, strategy };
        }
        for &v in &trap {
            if g.owner(v) == Player::Refuter {
                strategy[v as usize] = g.succ(v)
                    .iter()
                    .copied()
                    .filter(|&t| alive[t as usize] && !in_reach[t as usize])
                    .min()
                    .unwrap();
            }
        }
        let lost = attract(g, &preds, &alive, &trap, Player::Refuter, &mut strategy);
        for &v in &lost {
            alive[v as usize] = false;
            verifier_wins[v as usize] = false;
        }
    }
}

/// Independent certificate check of both players' strategies on their regions.
pub fn check_strategy(g: &Arena, r: &SolveResult) -> bool {
    if r.num_vertices() != g.num_vertices() {
        return false;
    }
    [Player::Verifier, Player::Refuter].into_iter().all(|p| certifies(g, r, p))
}

fn certifies(g: &Arena, r: &SolveResult, p: Player) -> bool {
    let n = g.num_vertices();
    let mine = |v: u32| r.winner(v) == p;
    let mut restricted: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n as u32 {
        if !mine(v) {
            continue;
        }
        if g.owner(v) == p {
            let m = r.strategy[v as usize];
            if m == NO_MOVE || !g.has_edge(v, m) || !mine(m) {
                return false;
            }
            restricted[v as usize].push(m);
        } else {
            if !g.succ(v).iter().all(|&t| mine(t)) {
                return false;
            }
            restricted[v as usize].extend_from_slice(g.succ(v));
        }
    }
    // A cycle with least priority `q` of the wrong parity lives in an SCC of
    // the vertices with priority >= q that contains a q-vertex.
    let mut ps: Vec<u32> = (0..n as u32).filter(|&v| mine(v)).map(|v| g.priority(v)).collect();
    ps.sort_unstable();
    ps.dedup();
    for q in ps.into_iter().filter(|&q| Player::of_priority(q) != p) {
        let keep = |v: u32| g.priority(v) >= q;
        let roots: Vec<usize> = (0..n).filter(|&v| mine(v as u32) && g.priority(v as u32) == q).collect();
        let sccs = graph::sccs(n, roots.iter().copied(), |v| {
            restricted[v].iter().copied().filter(|&t| keep(t)).map(|t| t as usize).collect::<Vec<_>>()
        });
        if roots.iter().any(|&v| sccs.on_cycle(v)) {
            return false;
        }
    }
    true
}
