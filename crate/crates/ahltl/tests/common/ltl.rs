use ahltl::automata::LassoWord;
use ahltl::spec::Ltl;
use rand::Rng;

pub fn random_ltl(rng: &mut impl Rng, bits: usize, depth: usize) -> Ltl {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Ltl::True,
            1 => Ltl::False,
            _ => Ltl::Atom(rng.gen_range(0..bits)),
        };
    }
    let sub = |rng: &mut _| random_ltl(rng, bits, depth - 1);
    match rng.gen_range(0..11) {
        0 => Ltl::not(sub(rng)),
        1 => Ltl::and(sub(rng), sub(rng)),
        2 => Ltl::or(sub(rng), sub(rng)),
        3 => Ltl::implies(sub(rng), sub(rng)),
        4 => Ltl::iff(sub(rng), sub(rng)),
        5 => Ltl::next(sub(rng)),
        6 | 7 => Ltl::until(sub(rng), sub(rng)),
        8 => Ltl::finally(sub(rng)),
        _ => Ltl::globally(sub(rng)),
    }
}

pub fn random_lasso(rng: &mut impl Rng, bits: usize, max: usize) -> LassoWord {
    let p = rng.gen_range(0..=max);
    let l = rng.gen_range(1..=max);
    let mut letter = || rng.gen_range(0..1u32 << bits);
    LassoWord::new((0..p).map(|_| letter()).collect(), (0..l).map(|_| letter()).collect())
}
