use crate::spec::Ltl;

/// LTL in negation normal form over letter bits, with `F a = true U a` and `G a = false R a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nnf {
    True,
    False,
    Lit { bit: u32, pos: bool },
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    X(Box<Nnf>),
    U(Box<Nnf>, Box<Nnf>),
    R(Box<Nnf>, Box<Nnf>),
}

impl Nnf {
    /// `Atom(i)` reads bit `i`; `Moved(j)` reads bit `n_atoms + j`.
    pub fn from_ltl(l: &Ltl, n_atoms: usize) -> Nnf {
        convert(l, true, n_atoms as u32)
    }

    pub fn and(parts: Vec<Nnf>) -> Nnf {
        junction(parts, true)
    }

    pub fn or(parts: Vec<Nnf>) -> Nnf {
        junction(parts, false)
    }

    pub fn next(a: Nnf) -> Nnf {
        match a {
            Nnf::True | Nnf::False => a,
            a => Nnf::X(Box::new(a)),
        }
    }

    pub fn until(a: Nnf, b: Nnf) -> Nnf {
        match (a, b) {
            (_, b @ (Nnf::True | Nnf::False)) => b,
            (Nnf::False, b) => b,
            (a, b) if a == b => b,
            // F F b = F b
            (Nnf::True, Nnf::U(x, y)) if *x == Nnf::True => Nnf::U(x, y),
            (a, b) => Nnf::U(Box::new(a), Box::new(b)),
        }
    }

    pub fn release(a: Nnf, b: Nnf) -> Nnf {
        match (a, b) {
            (_, b @ (Nnf::True | Nnf::False)) => b,
            (Nnf::True, b) => b,
            (a, b) if a == b => b,
            // G G b = G b
            (Nnf::False, Nnf::R(x, y)) if *x == Nnf::False => Nnf::R(x, y),
            (a, b) => Nnf::R(Box::new(a), Box::new(b)),
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self, Nnf::X(_) | Nnf::U(..) | Nnf::R(..))
    }

    pub fn size(&self) -> usize {
        match self {
            Nnf::True | Nnf::False | Nnf::Lit { .. } => 1,
            Nnf::And(xs) | Nnf::Or(xs) => 1 + xs.iter().map(Nnf::size).sum::<usize>(),
            Nnf::X(a) => 1 + a.size(),
            Nnf::U(a, b) | Nnf::R(a, b) => 1 + a.size() + b.size(),
        }
    }
}

fn junction(parts: Vec<Nnf>, conj: bool) -> Nnf {
    let (unit, zero) = if conj { (Nnf::True, Nnf::False) } else { (Nnf::False, Nnf::True) };
    let mut flat = Vec::new();
    for p in parts {
        match p {
            p if p == unit => {}
            p if p == zero => return zero,
            Nnf::And(xs) if conj => flat.extend(xs),
            Nnf::Or(xs) if !conj => flat.extend(xs),
            p => flat.push(p),
        }
    }
    flat.sort();
    flat.dedup();
    for w in flat.windows(2) {
        if let (Nnf::Lit { bit: a, .. }, Nnf::Lit { bit: b, .. }) = (&w[0], &w[1]) {
            if a == b {
                return zero;
            }
        }
    }
    match flat.len() {
        0 => unit,
        1 => flat.pop().unwrap(),
        _ if conj => Nnf::And(flat),
        _ => Nnf::Or(flat),
    }
}

fn convert(l: &Ltl, pos: bool, na: u32) -> Nnf {
    let go = |x: &Ltl, p: bool| convert(x, p, na);
    match l {
        Ltl::True => {
            if pos {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        Ltl::False => go(&Ltl::True, !pos),
        Ltl::Atom(i) => Nnf::Lit { bit: *i as u32, pos },
        Ltl::Moved(j) => Nnf::Lit { bit: na + *j as u32, pos },
        Ltl::Not(a) => go(a, !pos),
        Ltl::And(a, b) if pos => Nnf::and(vec![go(a, true), go(b, true)]),
        Ltl::And(a, b) => Nnf::or(vec![go(a, false), go(b, false)]),
        Ltl::Or(a, b) if pos => Nnf::or(vec![go(a, true), go(b, true)]),
        Ltl::Or(a, b) => Nnf::and(vec![go(a, false), go(b, false)]),
        Ltl::Implies(a, b) if pos => Nnf::or(vec![go(a, false), go(b, true)]),
        Ltl::Implies(a, b) => Nnf::and(vec![go(a, true), go(b, false)]),
        Ltl::Iff(a, b) => Nnf::or(vec![
            Nnf::and(vec![go(a, true), go(b, pos)]),
            Nnf::and(vec![go(a, false), go(b, !pos)]),
        ]),
        Ltl::Next(a) => Nnf::next(go(a, pos)),
        Ltl::Until(a, b) if pos => Nnf::until(go(a, true), go(b, true)),
        Ltl::Until(a, b) => Nnf::release(go(a, false), go(b, false)),
        Ltl::Finally(a) if pos => Nnf::until(Nnf::True, go(a, true)),
        Ltl::Finally(a) => Nnf::release(Nnf::False, go(a, false)),
        Ltl::Globally(a) if pos => Nnf::release(Nnf::False, go(a, true)),
        Ltl::Globally(a) => Nnf::until(Nnf::True, go(a, false)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplifies() {
        let g = Ltl::globally(Ltl::globally(Ltl::Atom(0)));
        let n = Nnf::from_ltl(&g, 1);
        assert_eq!(
            n,
            Nnf::R(Box::new(Nnf::False), Box::new(Nnf::Lit { bit: 0, pos: true }))
        );
        assert_eq!(Nnf::from_ltl(&Ltl::and(Ltl::Atom(0), Ltl::not(Ltl::Atom(0))), 1), Nnf::False);
        assert_eq!(Nnf::from_ltl(&Ltl::next(Ltl::True), 1), Nnf::True);
        assert_eq!(Nnf::from_ltl(&Ltl::Moved(1), 3), Nnf::Lit { bit: 4, pos: true });
        assert_eq!(
            Nnf::from_ltl(&Ltl::not(Ltl::finally(Ltl::Atom(0))), 1),
            Nnf::R(Box::new(Nnf::False), Box::new(Nnf::Lit { bit: 0, pos: false }))
        );
    }
}
