use ahltl::solver::{Arena, Player};
use rand::Rng;

/// Random game whose verifier has at most `max_strategies` positional strategies.
pub fn random_game(rng: &mut impl Rng, n: usize, priorities: u32, max_strategies: usize) -> Arena {
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    let mut budget = max_strategies;
    for _ in 0..n {
        let o = if rng.gen_bool(0.5) { Player::Verifier } else { Player::Refuter };
        let mut deg = rng.gen_range(1..=3usize);
        if o == Player::Verifier {
            while deg > 1 && budget / deg == 0 {
                deg -= 1;
            }
            budget /= deg;
        }
        let mut s: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..n as u32)).collect();
        s.sort_unstable();
        s.dedup();
        owner.push(o);
        priority.push(rng.gen_range(0..priorities));
        succ.push(s);
    }
    Arena::new(owner, priority, succ)
}

/// Verifier region as the union, over all positional verifier strategies, of
/// the vertices from which no reachable cycle has odd least priority.
pub fn enumerate_strategies(g: &Arena) -> Vec<bool> {
    let n = g.num_vertices();
    let choice: Vec<u32> = (0..n as u32).filter(|&v| g.owner(v) == Player::Verifier && g.succ(v).len() > 1).collect();
    let mut pick = vec![0usize; choice.len()];
    let mut wins = vec![false; n];
    loop {
        let edges = |v: u32| -> Vec<u32> {
            match choice.iter().position(|&c| c == v) {
                Some(k) => vec![g.succ(v)[pick[k]]],
                None => g.succ(v).to_vec(),
            }
        };
        // u is bad when it returns to itself through vertices of priority >= its own, and that priority is odd.
        let bad: Vec<bool> = (0..n as u32)
            .map(|u| {
                let p = g.priority(u);
                p % 2 == 1 && reaches(n, u, u, |v| edges(v).into_iter().filter(|&t| g.priority(t) >= p).collect())
            })
            .collect();
        for v in 0..n as u32 {
            if !wins[v as usize] && !(0..n as u32).any(|u| bad[u as usize] && (u == v || reaches(n, v, u, edges))) {
                wins[v as usize] = true;
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return wins;
            }
            pick[k] += 1;
            if pick[k] < g.succ(choice[k]).len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Path of length >= 1 from `from` to `to`.
fn reaches(n: usize, from: u32, to: u32, edges: impl Fn(u32) -> Vec<u32>) -> bool {
    let mut seen = vec![false; n];
    let mut stack = edges(from);
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if !std::mem::replace(&mut seen[v as usize], true) {
            stack.extend(edges(v));
        }
    }
    false
}

/// Alternating fixpoint `nu Z0. mu Z1. nu Z2 ...` of `U_p (P_p & CPre(Z_p))`.
pub fn fixpoint_parity(g: &Arena) -> Vec<bool> {
    let d = g.max_priority() as usize + 1;
    let mut zs = vec![Vec::new(); d];
    nest(g, 0, &mut zs)
}

fn nest(g: &Arena, level: usize, zs: &mut Vec<Vec<bool>>) -> Vec<bool> {
    let n = g.num_vertices();
    if level == zs.len() {
        return (0..n as u32)
            .map(|v| {
                let z = &zs[g.priority(v) as usize];
                match g.owner(v) {
                    Player::Verifier => g.succ(v).iter().any(|&t| z[t as usize]),
                    Player::Refuter => g.succ(v).iter().all(|&t| z[t as usize]),
                }
            })
            .collect();
    }
    let mut z = vec![level.is_multiple_of(2); n];
    loop {
        zs[level] = z.clone();
        let next = nest(g, level + 1, zs);
        if next == z {
            return z;
        }
        z = next;
    }
}
