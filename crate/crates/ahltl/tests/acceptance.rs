//! One check per acceptance criterion, each reported as a PASS or FAIL line.
//!
//! Set `AHLTL_LONG_TESTS=1` to include the 8-bit xor program.

mod common;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ahltl::automata::{determinize, dpa_accepts_lasso, ltl_lasso_eval, ltl_to_nba, nba_accepts_lasso, DeterminizeOptions};
use ahltl::fixtures;
use ahltl::game::{game_to_dot, GameGraph, Stage};
use ahltl::solver::{check_strategy, solve_buchi, solve_parity, SolveResult};
use ahltl::spec::{build_psi_mod, parse_formula, Ltl};
use ahltl::ts::{parse_system, termination_info, StateId, TransitionSystem};
use ahltl::verify::{
    extract_witness, oracle_check_admissible, refute_bounded, replay_witness, verify, verify_admissible_fast, Outcome,
    Pipeline, RefuteOptions, RefuterScript, VerifyOptions,
};
use common::games::{enumerate_strategies, fixpoint_parity, random_game};
use common::ltl::random_lasso;
use common::systems::{random_admissible, random_forall_exists, random_system, random_terminating};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn outcome(systems: &[&TransitionSystem], f: &str, z: usize) -> std::result::Result<Outcome, String> {
    let f = parse_formula(f).map_err(|e| e.to_string())?;
    verify(systems, &f, z, &opts()).map(|v| v.outcome).map_err(|e| e.to_string())
}

/// Ids of the vertices matching a position given by stage, windows and pointers.
fn ids(g: &GameGraph, stage: Stage, windows: &[&[StateId]], pointers: &[u8]) -> Vec<u32> {
    g.vertices()
        .filter(|(_, v)| {
            v.position().is_some_and(|p| {
                p.stage == stage
                    && p.pointers.as_slice() == pointers
                    && p.windows.len() == windows.len()
                    && p.windows.iter().zip(windows).all(|(a, b)| a.as_slice() == *b)
            })
        })
        .map(|(i, _)| i)
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let ts = fixtures::fig4();
    let f = fixtures::formula(fixtures::PHI_FAIR);
    let p = Pipeline::new(&[&ts, &ts], &f, &opts()).map_err(|e| e.to_string())?;
    let s = p.solve(1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(s.verdict.outcome == Outcome::Verified, || format!("outcome {:?}", s.verdict.outcome))?;
    let dot = game_to_dot(&s.game, &s.ctx, Some(&s.result));
    let g = &s.game;
    let v0 = ids(g, Stage::Update, &[&[0], &[0]], &[0, 0]);
    let v1 = ids(g, Stage::Forall, &[&[0], &[0]], &[0, 0]);
    let v2 = ids(g, Stage::Exists, &[&[0, 0], &[0]], &[0, 0]);
    let v8 = ids(g, Stage::Exists, &[&[0, 1], &[0]], &[0, 0]);
    let v9 = ids(g, Stage::Exists, &[&[0, 1], &[1]], &[0, 0]);
    let v14 = ids(g, Stage::Update, &[&[0, 1], &[1, 2]], &[0, 1]);
    let v15 = ids(g, Stage::Forall, &[&[0], &[2]], &[0, 0]);
    let edge = |a: &[u32], b: &[u32]| a.iter().any(|x| b.iter().any(|y| dot.contains(&format!("n{x} -> n{y};"))));
    for (name, a, b) in [
        ("v0->v1", &v0, &v1),
        ("v1->v2", &v1, &v2),
        ("v1->v8", &v1, &v8),
        ("v9->v14", &v9, &v14),
        ("v14->v15", &v14, &v15),
    ] {
        ensure(edge(a, b), || format!("strategy DOT lacks {name}"))?;
    }
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("Verified at Z=1 in {:.3}s, {} vertices, strategy edges present", elapsed.as_secs_f64(), g.num_vertices()))
}

fn criterion_2() -> Check {
    for z in 1..=3 {
        let ts = fixtures::window_family(z);
        let lo = outcome(&[&ts], fixtures::PHI_TWO_STUTTER, z)?;
        let hi = outcome(&[&ts], fixtures::PHI_TWO_STUTTER, z + 1)?;
        ensure(lo != Outcome::Verified && hi == Outcome::Verified, || {
            format!("T_{z}: {lo:?} at Z={z}, {hi:?} at Z={}", z + 1)
        })?;
    }
    let formulas = [
        "exists p. exists b1 ~ p. exists b2 ~ p. X G (o@b1 != o@b2)",
        "forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. X G (o@b1 != o@b2)",
        "forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. G (o@b1 = o@b2) & F (l@b2 = 1)",
        "forall p. exists b1 ~ p. exists b2 ~ p. G F (o@b1 = 0 & o@b2 != 0)",
        "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. G (o@b1 = o@b2)",
        "exists p. exists b1 ~ p. exists b2 ~ p. G ((o@b1 = 0) <-> X (o@b2 = 0))",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut wins = 0;
    for k in 0..100 {
        let n = rng.gen_range(2..=3);
        let ts = random_system(&mut rng, n);
        let text = formulas[k % formulas.len()];
        let f = parse_formula(text).unwrap();
        let p = Pipeline::new(&vec![&ts; f.traces.len()], &f, &opts()).map_err(|e| e.to_string())?;
        let z = rng.gen_range(1..=2);
        let a = p.solve(z).map_err(|e| e.to_string())?.verdict.outcome;
        let b = p.solve(z + 1).map_err(|e| e.to_string())?.verdict.outcome;
        ensure(a != Outcome::Verified || b == Outcome::Verified, || {
            format!("instance {k}: Verified at Z={z} but {b:?} at Z={}", z + 1)
        })?;
        wins += (a == Outcome::Verified) as usize;
    }
    Ok(format!("T_1..T_3 strict; 100 random instances monotone ({wins} verified at the lower bound)"))
}

fn criterion_3() -> Check {
    let f = fixtures::formula(fixtures::PHI_OD);
    let mut widths = vec![2u32, 4];
    if std::env::var_os("AHLTL_LONG_TESTS").is_some() {
        widths.push(8);
    }
    let mut runs = 0;
    for &bits in &widths {
        for l in 0..1i64 << bits {
            let ts = fixtures::fig2_program(bits, l);
            let v = verify(&[&ts, &ts], &f, 1, &opts()).map_err(|e| e.to_string())?;
            ensure(v.outcome == Outcome::Verified, || format!("{bits} bits, l={l}: {:?}", v.outcome))?;
            runs += 1;
        }
    }
    Ok(format!("Verified for every low input at widths {widths:?} ({runs} systems)"))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut held = 0;
    for k in 0..120 {
        let n = rng.gen_range(2..=4);
        let a = random_system(&mut rng, n);
        let m = rng.gen_range(2..=4);
        let b = if rng.gen_bool(0.5) { a.clone() } else { random_system(&mut rng, m) };
        let text = random_admissible(&mut rng);
        let f = parse_formula(&text).unwrap();
        let sys = [&a, &b];
        let game = verify(&sys, &f, 1, &opts()).map_err(|e| e.to_string())?.outcome;
        let fast = verify_admissible_fast(&sys, &f, &opts()).map_err(|e| format!("{text}: {e}"))?.outcome;
        let oracle = oracle_check_admissible(&sys, &f).map_err(|e| e.to_string())?;
        let want = if oracle { Outcome::Verified } else { Outcome::Violated };
        ensure(game == want && fast == want, || {
            format!("instance {k} `{text}`: game {game:?}, fast {fast:?}, oracle {oracle}")
        })?;
        held += oracle as usize;
    }
    Ok(format!("120 instances agree three ways ({held} satisfied)"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut violated, mut verified) = (0, 0);
    for k in 0..100 {
        let (text, n) = random_forall_exists(&mut rng);
        let f = parse_formula(&text).map_err(|e| format!("{text}: {e}"))?;
        let owned: Vec<TransitionSystem> = (0..n).map(|_| random_terminating(&mut rng, 4)).collect();
        let sys: Vec<&TransitionSystem> = owned.iter().collect();
        let d = sys.iter().map(|t| termination_info(t).depth.unwrap()).max().unwrap().max(1);
        let v = verify(&sys, &f, d, &opts()).map_err(|e| e.to_string())?;
        ensure(v.outcome != Outcome::Unknown, || format!("instance {k} `{text}` Unknown at Z={d}"))?;
        let r = refute_bounded(&sys, &f, &RefuteOptions::default()).map_err(|e| e.to_string())?;
        match v.outcome {
            Outcome::Violated => {
                ensure(r.is_some(), || format!("instance {k} `{text}`: Violated but no refutation found"))?;
                violated += 1;
            }
            _ => {
                ensure(r.is_none(), || format!("instance {k} `{text}`: Verified yet refuted by {r:?}"))?;
                verified += 1;
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 120.0, || format!("took {t:.1}s"))?;
    Ok(format!("100 instances decided at Z=D ({verified} verified, {violated} violated and refuted) in {t:.1}s"))
}

fn criterion_6() -> Check {
    let mut bodies: Vec<(String, Ltl, usize, usize)> = Vec::new();
    for (name, text) in [("fair", fixtures::PHI_FAIR), ("od", fixtures::PHI_OD), ("ni", fixtures::PHI_NI)] {
        let f = parse_formula(text).unwrap();
        bodies.push((format!("psi_mod({name})"), build_psi_mod(&f), f.atoms.len(), f.letter_bits()));
    }
    let a = || Ltl::Atom(0);
    let b = || Ltl::Atom(1);
    let c = || Ltl::Atom(2);
    bodies.extend([
        ("G F a".to_string(), Ltl::globally(Ltl::finally(a())), 3, 3),
        ("F G a".to_string(), Ltl::finally(Ltl::globally(a())), 3, 3),
        ("a U b".to_string(), Ltl::until(a(), b()), 3, 3),
        ("X X a".to_string(), Ltl::next(Ltl::next(a())), 3, 3),
        ("G (a -> F b)".to_string(), Ltl::globally(Ltl::implies(a(), Ltl::finally(b()))), 3, 3),
        ("(a U b) | G c".to_string(), Ltl::or(Ltl::until(a(), b()), Ltl::globally(c())), 3, 3),
        ("G F a -> G F b".to_string(), Ltl::implies(Ltl::globally(Ltl::finally(a())), Ltl::globally(Ltl::finally(b()))), 3, 3),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, body, atoms, bits) in &bodies {
        let bits = *bits;
        let nba = ltl_to_nba(body, *atoms, bits);
        let dpa = determinize(&nba, &DeterminizeOptions::default()).map_err(|e| e.to_string())?;
        for _ in 0..500 {
            let w = random_lasso(&mut rng, bits, 6);
            let want = ltl_lasso_eval(body, *atoms, &w);
            ensure(nba_accepts_lasso(&nba, &w) == want && dpa_accepts_lasso(&dpa, &w) == want, || {
                format!("{name} disagrees on {w:?}")
            })?;
        }
    }
    Ok(format!("{} bodies x 500 lassos: NBA = DPA = evaluator", bodies.len()))
}

fn criterion_7() -> Check {
    let region = |r: &SolveResult| (0..r.num_vertices() as u32).map(|v| r.verifier_wins(v)).collect::<Vec<_>>();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let n = rng.gen_range(1..=50);
        let g = random_game(&mut rng, n, 2, 256);
        let r = solve_buchi(&g);
        ensure(region(&r) == enumerate_strategies(&g), || format!("Büchi game {k} differs from enumeration"))?;
        ensure(check_strategy(&g, &r), || format!("Büchi game {k}: certificate rejected"))?;
    }
    for k in 0..200 {
        let n = rng.gen_range(1..=50);
        let g = random_game(&mut rng, n, 4, usize::MAX);
        let r = solve_parity(&g);
        ensure(region(&r) == fixpoint_parity(&g), || format!("parity game {k} differs from the fixpoint"))?;
        ensure(check_strategy(&g, &r), || format!("parity game {k}: certificate rejected"))?;
    }
    Ok("200 Büchi and 200 parity games match their oracles; strategies certified".into())
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../ahltl-cli/corpus")
}

fn criterion_8() -> Check {
    let dir = corpus_dir();
    let mut cases: Vec<PathBuf> = std::fs::read_dir(dir.join("cases"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    cases.sort();
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    let mut checked = 0;
    for case in &cases {
        let text = read(case)?;
        let get = |k: &str| {
            text.lines()
                .filter_map(|l| l.split_once('='))
                .find(|(a, _)| a.trim() == k)
                .map(|(_, b)| b.trim().to_string())
                .ok_or_else(|| format!("{}: no `{k}`", case.display()))
        };
        let base = case.parent().unwrap();
        let ts = parse_system(&read(&base.join(get("system")?))?).map_err(|e| e.to_string())?;
        let f = parse_formula(&read(&base.join(get("formula")?))?).map_err(|e| e.to_string())?;
        let z: usize = get("z")?.parse().map_err(|_| "bad z".to_string())?;
        let sys = vec![&ts; f.traces.len()];
        let v = verify(&sys, &f, z, &opts()).map_err(|e| e.to_string())?;
        let expect = get("expect")?;
        ensure(v.outcome.name() == expect, || format!("{}: {} but expected {expect}", case.display(), v.outcome.name()))?;
        if v.outcome == Outcome::Violated {
            let r = refute_bounded(&sys, &f, &RefuteOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.is_some(), || format!("{}: no refutation", case.display()))?;
        }
        if let Ok(held) = oracle_check_admissible(&sys, &f) {
            ensure(held == (v.outcome == Outcome::Verified), || format!("{}: oracle says {held}", case.display()))?;
        }
        checked += 1;
    }
    ensure(checked >= 18, || format!("only {checked} corpus cases"))?;
    let buf = fixtures::buffer(2);
    ensure(outcome(&[&buf, &buf], fixtures::PHI_OD, 1)? == Outcome::Violated, || "buffer under OD".into())?;
    ensure(outcome(&[&buf, &buf], fixtures::PHI_NI, 1)? == Outcome::Verified, || "buffer under NI".into())?;
    Ok(format!("{checked} corpus cases match; buffer violates OD and satisfies NI"))
}

/// A random lasso path of the system, closed at the first revisit the walk accepts.
fn random_path(rng: &mut impl Rng, ts: &TransitionSystem) -> (Vec<StateId>, Vec<StateId>) {
    let mut path = vec![ts.init()];
    loop {
        let s = *ts.succ(*path.last().unwrap()).choose(rng).unwrap();
        if let Some(j) = path.iter().rposition(|&x| x == s) {
            if path.len() >= 6 || rng.gen_bool(0.5) {
                return (path[..j].to_vec(), path[j..].to_vec());
            }
        }
        path.push(s);
    }
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let ts = fixtures::fig4();
    let f = fixtures::formula(fixtures::PHI_FAIR);
    let p = Pipeline::new(&[&ts, &ts], &f, &opts()).map_err(|e| e.to_string())?;
    let s = p.solve(1).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..50 {
        let (prefix, cycle) = random_path(&mut rng, &ts);
        let names = |v: &[StateId]| v.iter().map(|&x| format!("\"{}\"", ts.state_name(x))).collect::<Vec<_>>().join(",");
        let json = format!(r#"{{"paths":{{"p1":{{"prefix":[{}],"loop":[{}]}}}}}}"#, names(&prefix), names(&cycle));
        let script = RefuterScript::parse(&json).map_err(|e| e.to_string())?;
        let w = extract_witness(&s.ctx, &s.game, &s.result, &script).map_err(|e| format!("script {k}: {e}"))?;
        ensure(w.complete, || format!("script {k}: play did not close"))?;
        let p1 = &w.traces["p1"];
        let scripted = ahltl::verify::PathLasso { prefix, cycle };
        ensure((0..24).all(|i| unroll(p1, i) == unroll(&scripted, i)), || format!("script {k}: p1 deviates"))?;
        ensure(w.stutters.values().all(|b| b.is_fair()), || format!("script {k}: unfair schedule"))?;
        ensure(replay_witness(&[&ts, &ts], &f, &w).map_err(|e| e.to_string())?, || {
            format!("script {k}: replay falsifies the body")
        })?;
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 10.0, || format!("took {t:.1}s"))?;
    Ok(format!("50 scripted plays replay to the body with fair schedules in {t:.2}s"))
}

fn unroll(l: &ahltl::verify::PathLasso, i: usize) -> StateId {
    let mut at = 0;
    for _ in 0..i {
        at = l.next(at);
    }
    l.at(at)
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("fig4 fairness game and strategy", criterion_1),
        ("window-bound family and monotonicity", criterion_2),
        ("xor program under observational determinism", criterion_3),
        ("admissible three-way agreement", criterion_4),
        ("terminating completeness", criterion_5),
        ("automata agreement", criterion_6),
        ("game solvers against oracles", criterion_7),
        ("bundled corpus", criterion_8),
        ("witness replay", criterion_9),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => writeln!(out, "PASS criterion {}: {name}: {detail}", i + 1).unwrap(),
            Err(why) => {
                writeln!(out, "FAIL criterion {}: {name}: {why}", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
