use super::*;
use crate::automata::{determinize, ltl_to_nba, DeterminizeOptions};
use crate::fixtures;
use crate::spec::build_psi_mod;

fn dpa_for(f: &AhltlFormula) -> DetParityAutomaton {
    let psi = build_psi_mod(f);
    let nba = ltl_to_nba(&psi, f.atoms.len(), f.letter_bits());
    determinize(&nba, &DeterminizeOptions::default()).unwrap()
}

fn pos(stage: Stage, windows: &[&[u32]], pointers: &[u8], progressed: u32, q: u32) -> Position {
    Position {
        stage,
        windows: windows.iter().map(|w| SmallVec::from_slice(w)).collect(),
        pointers: SmallVec::from_slice(pointers),
        progressed,
        q,
    }
}

fn same_but_q(v: &GameVertex, p: &Position) -> bool {
    v.position().is_some_and(|x| Position { q: p.q, ..x.clone() } == *p)
}

#[test]
fn fig4_initials() {
    let ts = fixtures::fig4();
    let f = fixtures::formula(fixtures::PHI_FAIR);
    let dpa = dpa_for(&f);
    let ctx = GameContext::new(&[&ts, &ts], &f, &dpa, 1).unwrap();
    let init = ctx.initial_vertices();
    assert_eq!(init, vec![GameVertex::Play(pos(Stage::Update, &[&[0], &[0]], &[0, 0], 0, dpa.init()))]);
    let ctx2 = GameContext::new(&[&ts, &ts], &f, &dpa, 2).unwrap();
    let windows: Vec<_> = ctx2.initial_vertices().iter().map(|v| v.position().unwrap().windows[0].to_vec()).collect();
    assert_eq!(windows, vec![vec![0, 0], vec![0, 1]]);
}

#[test]
fn fig4_round() {
    let ts = fixtures::fig4();
    let f = fixtures::formula(fixtures::PHI_FAIR);
    let dpa = dpa_for(&f);
    let ctx = GameContext::new(&[&ts, &ts], &f, &dpa, 1).unwrap();
    let v1 = pos(Stage::Forall, &[&[0], &[0]], &[0, 0], 0, 0);
    let s = ctx.forall_successors(&v1);
    assert_eq!(s.len(), 2);
    assert!(same_but_q(&s[0], &pos(Stage::Exists, &[&[0, 0], &[0]], &[0, 0], 0, 0)));
    assert!(same_but_q(&s[1], &pos(Stage::Exists, &[&[0, 1], &[0]], &[0, 0], 0, 0)));

    let v9 = pos(Stage::Exists, &[&[0, 1], &[1]], &[0, 0], 0, 0);
    let s = ctx.exists_successors(&v9);
    assert_eq!(s.len(), 4);
    let v14 = pos(Stage::Update, &[&[0, 1], &[1, 2]], &[0, 1], 0b10, 0);
    assert!(s.contains(&GameVertex::Play(v14.clone())));

    let letter = ctx.letter(&v14);
    assert_eq!(letter, 0b101, "a@b1 != a@b2 holds and only b2 moved");
    let v15 = ctx.update_successor(&v14);
    assert_eq!(v15, GameVertex::Play(pos(Stage::Forall, &[&[0], &[2]], &[0, 0], 0, dpa.step(0, letter))));
}

#[test]
fn pointer_gap_is_error() {
    let ts = fixtures::window_family(2);
    let f = fixtures::formula(fixtures::PHI_TWO_STUTTER);
    let dpa = dpa_for(&f);
    let ctx = GameContext::new(&[&ts], &f, &dpa, 2).unwrap();
    let p = pos(Stage::Update, &[&[0, 1, 2]], &[0, 2], 0b10, 0);
    assert_eq!(ctx.update_successor(&p), GameVertex::Error);
    let p = pos(Stage::Update, &[&[0, 1, 2]], &[0, 1], 0b10, 0);
    assert!(!ctx.update_successor(&p).is_error());
}

#[test]
fn pass_through_stage() {
    let ts = fixtures::single_loop();
    let f = fixtures::formula("exists p. G true");
    let dpa = dpa_for(&f);
    let ctx = GameContext::new(&[&ts], &f, &dpa, 1).unwrap();
    let g = build_game(&ctx, &BuildOptions::default()).unwrap();
    assert_eq!(dpa.num_states(), 1);
    // The entry vertex holds a one-state window and leads into a three-vertex cycle.
    assert_eq!(g.num_vertices(), 4);
    assert_eq!(g.stats().edges, 4);
    let stages: Vec<_> = g.vertices().map(|(_, v)| v.stage().unwrap()).collect();
    assert_eq!(stages, vec![Stage::Update, Stage::Forall, Stage::Exists, Stage::Update]);
    assert_eq!(g.succ(3), &[1]);
}

#[test]
fn fig4_game_contains_fig3() {
    let ts = fixtures::fig4();
    let f = fixtures::formula(fixtures::PHI_FAIR);
    let dpa = dpa_for(&f);
    let ctx = GameContext::new(&[&ts, &ts], &f, &dpa, 1).unwrap();
    let g = build_game(&ctx, &BuildOptions::default()).unwrap();
    assert!(!g.stats().error_reachable);
    let find = |p: Position| -> Vec<u32> { g.vertices().filter(|(_, v)| same_but_q(v, &p)).map(|(i, _)| i).collect() };
    let fig3 = [
        pos(Stage::Update, &[&[0], &[0]], &[0, 0], 0, 0),
        pos(Stage::Forall, &[&[0], &[0]], &[0, 0], 0, 0),
        pos(Stage::Exists, &[&[0, 0], &[0]], &[0, 0], 0, 0),
        pos(Stage::Update, &[&[0, 0], &[0, 1]], &[1, 1], 0b11, 0),
        pos(Stage::Forall, &[&[0], &[1]], &[0, 0], 0, 0),
        pos(Stage::Exists, &[&[0, 1], &[1]], &[0, 0], 0, 0),
        pos(Stage::Update, &[&[0, 1], &[1, 2]], &[0, 1], 0b10, 0),
        pos(Stage::Forall, &[&[0], &[2]], &[0, 0], 0, 0),
    ];
    let ids: Vec<Vec<u32>> = fig3.iter().cloned().map(find).collect();
    assert!(ids.iter().all(|x| !x.is_empty()));
    for w in ids.windows(2) {
        assert!(w[0].iter().any(|&a| w[1].iter().any(|&b| g.succ(a).contains(&b))));
    }
    for (_, v) in g.vertices() {
        let p = v.position().unwrap();
        for (i, w) in p.windows.iter().enumerate() {
            assert!(w.windows(2).all(|e| ts.succ(e[0]).contains(&e[1])));
            assert!(f.stutters_on(i).iter().all(|&j| (p.pointers[j] as usize) < w.len()));
        }
    }
}

#[test]
fn threads_do_not_change_ids() {
    let ts = fixtures::fig4();
    let f = fixtures::formula(fixtures::PHI_FAIR);
    let dpa = dpa_for(&f);
    let ctx = GameContext::new(&[&ts, &ts], &f, &dpa, 2).unwrap();
    let a = build_game(&ctx, &BuildOptions::default()).unwrap();
    let b = build_game(&ctx, &BuildOptions { threads: 4, ..Default::default() }).unwrap();
    assert_eq!(a.num_vertices(), b.num_vertices());
    assert!(a.vertices().zip(b.vertices()).all(|(x, y)| x == y));
    let small = BuildOptions { max_vertices: 10, threads: 1 };
    assert!(matches!(build_game(&ctx, &small), Err(Error::CapacityExceeded { .. })));
}
