mod common;

use ahltl::solver::{check_strategy, solve_buchi, solve_parity};
use common::games::{enumerate_strategies, fixpoint_parity, random_game};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn region(r: &ahltl::solver::SolveResult) -> Vec<bool> {
    (0..r.num_vertices() as u32).map(|v| r.verifier_wins(v)).collect()
}

#[test]
fn buchi_matches_strategy_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=50);
        let g = random_game(&mut rng, n, 2, 256);
        let r = solve_buchi(&g);
        assert_eq!(region(&r), enumerate_strategies(&g));
        assert!(check_strategy(&g, &r));
        assert_eq!(region(&solve_parity(&g)), region(&r));
    }
}

#[test]
fn parity_matches_fixpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.gen_range(1..=50);
        let g = random_game(&mut rng, n, 4, usize::MAX);
        let r = solve_parity(&g);
        assert_eq!(region(&r), fixpoint_parity(&g));
        assert!(check_strategy(&g, &r));
    }
}

#[test]
fn parity_matches_enumeration_on_small_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let g = random_game(&mut rng, n, 5, 128);
        assert_eq!(region(&solve_parity(&g)), enumerate_strategies(&g));
    }
}

proptest! {
    #[test]
    fn certificates_validate(seed in any::<u64>(), n in 1usize..40, d in 1u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_game(&mut rng, n, d, usize::MAX);
        let r = solve_parity(&g);
        prop_assert!(check_strategy(&g, &r));
        let w = r.verifier_region();
        let l = r.refuter_region();
        prop_assert_eq!(w.len() + l.len(), n);
    }
}
