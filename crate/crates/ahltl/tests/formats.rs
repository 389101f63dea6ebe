mod common;

use ahltl::spec::{from_trajectory_form, parse_formula, print_formula};
use ahltl::ts::{parse_system, print_system};
use common::systems::{random_admissible, random_forall_exists, random_system, random_terminating};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn formulas_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = if rng.gen_bool(0.5) { random_forall_exists(&mut rng).0 } else { random_admissible(&mut rng) };
        let f = parse_formula(&text).unwrap();
        let printed = print_formula(&f);
        prop_assert_eq!(parse_formula(&printed).unwrap(), f, "{}", printed);
    }

    #[test]
    fn systems_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ts = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=6);
            random_system(&mut rng, n)
        } else {
            random_terminating(&mut rng, 4)
        };
        let printed = print_system(&ts);
        let back = parse_system(&printed).unwrap();
        prop_assert_eq!(print_system(&back), printed);
        prop_assert_eq!(back.num_states(), ts.num_states());
    }

    #[test]
    fn parsers_never_panic(text in "[a-z0-9@~.:=!&|<>() \n{}-]{0,60}") {
        let _ = parse_formula(&text);
        let _ = from_trajectory_form(&text);
        let _ = parse_system(&text);
    }
}
