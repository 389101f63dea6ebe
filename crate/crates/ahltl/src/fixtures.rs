//! Small systems and formulas used by the tests, the corpus and the docs.

use crate::spec::{parse_formula, AhltlFormula};
use crate::ts::{Sort, SystemBuilder, TransitionSystem, Value};

pub const PHI_FAIR: &str = "forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. X G (a@b1 != a@b2)";

pub const PHI_TWO_STUTTER: &str = "exists p. exists b1 ~ p. exists b2 ~ p. X G (a@b1 != a@b2)";

pub const PHI_OD: &str = "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. (l@b1 = l@b2) -> G (o@b1 = o@b2)";

pub const PHI_NI: &str = "forall p1. forall p2. forall b1 ~ p1. forall b2 ~ p2. exists b3 ~ p1. exists b4 ~ p2. \
                          G (l@b1 = l@b2) -> G (o@b3 = o@b4)";

pub fn formula(text: &str) -> AhltlFormula {
    parse_formula(text).expect("fixture formula parses")
}

fn int(n: i64) -> Value {
    Value::Int(n)
}

/// Three states over `a`: `s0 -> s0, s1`, `s1 -> s2`, `s2 -> s1, s0`.
pub fn fig4() -> TransitionSystem {
    let mut b = SystemBuilder::new("fig4");
    b.var("a", Sort::Int { lo: 0, hi: 1 });
    let s0 = b.state("s0", &[("a", int(0))]);
    let s1 = b.state("s1", &[("a", int(1))]);
    let s2 = b.state("s2", &[("a", int(1))]);
    b.init(s0).edge(s0, s0).edge(s0, s1).edge(s1, s2).edge(s2, s1).edge(s2, s0);
    b.build().unwrap()
}

/// The cycle `s0 -> s1 -> ... -> sz -> s0` with `a = 0` only at `s0`.
///
/// Under [`PHI_TWO_STUTTER`] the game is lost at window `z` and won at `z + 1`.
pub fn window_family(z: usize) -> TransitionSystem {
    assert!(z >= 1);
    let mut b = SystemBuilder::new(format!("cycle{}", z + 1));
    b.var("a", Sort::Int { lo: 0, hi: 1 });
    let ids: Vec<_> = (0..=z)
        .map(|i| b.state(format!("s{i}"), &[("a", int((i != 0) as i64))]))
        .collect();
    b.init(ids[0]);
    for i in 0..=z {
        b.edge(ids[i], ids[(i + 1) % (z + 1)]);
    }
    b.build().unwrap()
}

/// Two states over `a` with all four edges.
pub fn clairvoyance_system() -> TransitionSystem {
    let mut b = SystemBuilder::new("flip");
    b.var("a", Sort::Int { lo: 0, hi: 1 });
    let s0 = b.state("s0", &[("a", int(0))]);
    let s1 = b.state("s1", &[("a", int(1))]);
    b.init(s0).edge(s0, s0).edge(s0, s1).edge(s1, s0).edge(s1, s1);
    b.build().unwrap()
}

/// The second trace predicts the first `n` steps ahead.
pub fn clairvoyance_formula(n: usize) -> String {
    let mut ahead = "(a@b1 = 0)".to_string();
    for _ in 0..n {
        ahead = format!("X {ahead}");
    }
    format!("forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. X G ((a@b2 = 0) <-> {ahead})")
}

/// The branching xor program over `bits`-bit integers with the low input fixed to `l`.
///
/// Line numbers are program counters: 1 `o = 0`, 2 `repeat`, 3 `h = read`,
/// 4 `if h`, 5 `t = o xor l`, 6 `o = t`, 8 `o = o xor l`.
pub fn fig2_program(bits: u32, l: i64) -> TransitionSystem {
    let max = (1i64 << bits) - 1;
    assert!((0..=max).contains(&l));
    let mut b = SystemBuilder::new(format!("xor{bits}_l{l}"));
    b.var("l", Sort::Int { lo: 0, hi: max })
        .var("o", Sort::Int { lo: 0, hi: max })
        .var("t", Sort::Int { lo: 0, hi: max })
        .var("h", Sort::Bool);
    type Key = (u8, bool, i64, i64);
    let mut ids: std::collections::HashMap<Key, u32> = std::collections::HashMap::new();
    let mut order: Vec<Key> = Vec::new();
    let mut edges: Vec<(Key, Key)> = Vec::new();
    let start: Key = (1, false, 0, 0);
    let mut stack = vec![start];
    let mut seen = std::collections::HashSet::from([start]);
    while let Some(k) = stack.pop() {
        order.push(k);
        let (pc, h, o, t) = k;
        let next: Vec<Key> = match pc {
            1 => vec![(2, h, 0, t)],
            2 => vec![(3, h, o, t)],
            3 => vec![(4, false, o, t), (4, true, o, t)],
            4 => vec![if h { (5, h, o, t) } else { (8, h, o, t) }],
            5 => vec![(6, h, o, o ^ l)],
            6 => vec![(2, h, t, t)],
            8 => vec![(2, h, o ^ l, t)],
            _ => unreachable!(),
        };
        for n in next {
            edges.push((k, n));
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    order.sort();
    order.retain(|k| *k != start);
    order.insert(0, start);
    for &(pc, h, o, t) in &order {
        let name = format!("L{pc}_h{}_o{o}_t{t}", h as u8);
        let id = b.state(name, &[("l", int(l)), ("o", int(o)), ("t", int(t)), ("h", Value::Bool(h))]);
        ids.insert((pc, h, o, t), id);
    }
    b.init(ids[&start]);
    for (a, c) in edges {
        b.edge(ids[&a], ids[&c]);
    }
    b.build().unwrap()
}

/// Copies the low input to the output in the same step; the input may change every step.
pub fn buffer(values: i64) -> TransitionSystem {
    let mut b = SystemBuilder::new("buffer");
    b.var("l", Sort::Int { lo: 0, hi: values - 1 })
        .var("o", Sort::Int { lo: 0, hi: values - 1 });
    let ids: Vec<_> = (0..values).map(|v| b.state(format!("v{v}"), &[("l", int(v)), ("o", int(v))])).collect();
    b.init(ids[0]);
    for &x in &ids {
        for &y in &ids {
            b.edge(x, y);
        }
    }
    b.build().unwrap()
}

/// Equal low input, outputs `0 1 1 ...` versus `0 2 2 ...`.
pub fn diverging_outputs() -> TransitionSystem {
    let mut b = SystemBuilder::new("diverge");
    b.var("l", Sort::Int { lo: 0, hi: 1 }).var("o", Sort::Int { lo: 0, hi: 2 });
    let s0 = b.state("s0", &[("l", int(0)), ("o", int(0))]);
    let s1 = b.state("s1", &[("l", int(0)), ("o", int(1))]);
    let s2 = b.state("s2", &[("l", int(0)), ("o", int(2))]);
    b.init(s0).edge(s0, s1).edge(s0, s2).edge(s1, s1).edge(s2, s2);
    b.build().unwrap()
}

/// One state with a self-loop over a boolean `x`.
pub fn single_loop() -> TransitionSystem {
    let mut b = SystemBuilder::new("loop");
    b.var("x", Sort::Bool);
    let s = b.state("s", &[("x", Value::Bool(false))]);
    b.init(s).edge(s, s);
    b.build().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(fig4().num_states(), 3);
        assert_eq!(window_family(3).num_states(), 4);
        let p = fig2_program(2, 1);
        assert!(p.states().all(|s| !p.succ(s).is_empty()));
        assert_eq!(p.state_name(p.init()), "L1_h0_o0_t0");
        assert_eq!(buffer(2).num_edges(), 4);
        for f in [PHI_FAIR, PHI_TWO_STUTTER, PHI_OD, PHI_NI] {
            assert!(formula(f).is_forall_exists());
        }
        assert!(formula(&clairvoyance_formula(2)).is_forall_exists());
    }
}
