use ahltl::ts::{Sort, SystemBuilder, TransitionSystem, Value};
use rand::seq::SliceRandom;
use rand::Rng;

/// `n` states over `l` in `0..=1` and `o` in `0..=2`, each with one or two successors.
pub fn random_system(rng: &mut impl Rng, n: usize) -> TransitionSystem {
    let mut b = SystemBuilder::new("rand");
    b.var("l", Sort::Int { lo: 0, hi: 1 }).var("o", Sort::Int { lo: 0, hi: 2 });
    let ids: Vec<_> = (0..n)
        .map(|i| {
            let l = Value::Int(rng.gen_range(0..=1));
            let o = Value::Int(rng.gen_range(0..=2));
            b.state(format!("s{i}"), &[("l", l), ("o", o)])
        })
        .collect();
    b.init(ids[0]);
    for &s in &ids {
        let k = rng.gen_range(1..=2);
        for &t in ids.choose_multiple(rng, k) {
            b.edge(s, t);
        }
    }
    b.build().unwrap()
}

/// A layered acyclic system over `x` in `0..=1` whose paths end in self-looping
/// sinks after at most `max_depth` steps.
pub fn random_terminating(rng: &mut impl Rng, max_depth: usize) -> TransitionSystem {
    let depth = rng.gen_range(0..=max_depth);
    let mut b = SystemBuilder::new("term");
    b.var("x", Sort::Int { lo: 0, hi: 1 });
    let mut levels: Vec<Vec<u32>> = Vec::new();
    let mut count = 0;
    for k in 0..=depth {
        let width = if k == 0 { 1 } else { rng.gen_range(1..=2) };
        let level = (0..width)
            .map(|_| {
                count += 1;
                b.state(format!("s{}", count - 1), &[("x", Value::Int(rng.gen_range(0..=1)))])
            })
            .collect();
        levels.push(level);
    }
    b.init(levels[0][0]);
    for k in 0..=depth {
        for &s in &levels[k] {
            if k == depth {
                b.edge(s, s);
                continue;
            }
            let later: Vec<u32> = levels[k + 1..].iter().flatten().copied().collect();
            b.edge(s, *levels[k + 1].choose(rng).unwrap());
            if rng.gen_bool(0.4) {
                b.edge(s, *later.choose(rng).unwrap());
            }
        }
    }
    b.build().unwrap()
}

/// Random admissible two-trace formula over `l` and `o`.
pub fn random_admissible(rng: &mut impl Rng) -> String {
    let state = [
        "l@b1 = l@b2",
        "l@b1 != l@b2",
        "o@b1 = 0",
        "l@b2 = 1",
        "o@b1 = o@b2",
    ];
    let phase = [
        "G (o@b1 = o@b2)",
        "G (l@b1 = l@b2)",
        "G (o@b1 = o@b2 & l@b1 = l@b2)",
    ];
    let s = *state.choose(rng).unwrap();
    let t = *state.choose(rng).unwrap();
    let p = *phase.choose(rng).unwrap();
    let body = match rng.gen_range(0..5) {
        0 => p.to_string(),
        1 => format!("({s}) -> {p}"),
        2 => format!("({s}) | {p}"),
        3 => format!("({s}) & {p}"),
        _ => format!("({s} & {t}) -> {p}"),
    };
    format!("forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. {body}")
}

/// Random LTL body in surface syntax over the given atoms.
pub fn random_body(rng: &mut impl Rng, atoms: &[String], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return format!("({})", atoms.choose(rng).unwrap());
    }
    let sub = |rng: &mut _| random_body(rng, atoms, depth - 1);
    match rng.gen_range(0..8) {
        0 => format!("!{}", sub(rng)),
        1 => format!("({} & {})", sub(rng), sub(rng)),
        2 => format!("({} | {})", sub(rng), sub(rng)),
        3 => format!("X {}", sub(rng)),
        4 => format!("({} U {})", sub(rng), sub(rng)),
        5 => format!("F {}", sub(rng)),
        _ => format!("G {}", sub(rng)),
    }
}

/// Random `forall*exists*` formula over `x` with at most two stutterings,
/// together with its number of traces.
pub fn random_forall_exists(rng: &mut impl Rng) -> (String, usize) {
    let prefixes: [(&str, &[&str], usize); 6] = [
        ("forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2.", &["b1", "b2"], 2),
        ("forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2.", &["b1", "b2"], 2),
        ("forall p1. forall p2. forall b1 ~ p1. exists b2 ~ p2.", &["b1", "b2"], 2),
        ("forall p. forall b1 ~ p. exists b2 ~ p.", &["b1", "b2"], 1),
        ("forall p. exists b1 ~ p. exists b2 ~ p.", &["b1", "b2"], 1),
        ("exists p. exists b1 ~ p.", &["b1"], 1),
    ];
    let (prefix, stutters, traces) = *prefixes.choose(rng).unwrap();
    let mut atoms: Vec<String> = Vec::new();
    for s in stutters {
        atoms.push(format!("x@{s} = 0"));
        atoms.push(format!("x@{s} = 1"));
    }
    if stutters.len() == 2 {
        atoms.push("x@b1 = x@b2".into());
        atoms.push("x@b1 != x@b2".into());
    }
    (format!("{prefix} {}", random_body(rng, &atoms, 3)), traces)
}
