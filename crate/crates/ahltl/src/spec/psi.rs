use super::{AhltlFormula, Ltl, Quant};

/// `(/\ GF moved_b for universal b) -> ((/\ GF moved_b for existential b) & body)`,
/// with empty sides dropped rather than rendered as `true`.
pub fn build_psi_mod(f: &AhltlFormula) -> Ltl {
    let fair = |q| {
        let parts: Vec<Ltl> = f
            .stutters_with(q)
            .into_iter()
            .map(|j| Ltl::globally(Ltl::finally(Ltl::Moved(j))))
            .collect();
        (!parts.is_empty()).then(|| Ltl::all(parts))
    };
    let conclusion = match fair(Quant::Exists) {
        Some(e) => Ltl::and(e, f.body.clone()),
        None => f.body.clone(),
    };
    match fair(Quant::Forall) {
        Some(a) => Ltl::implies(a, conclusion),
        None => conclusion,
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    fn gf(j: usize) -> Ltl {
        Ltl::globally(Ltl::finally(Ltl::Moved(j)))
    }

    #[test]
    fn fair_formula() {
        let f = parse_formula("forall p1. exists p2. exists b1 ~ p1. exists b2 ~ p2. X G (a@b1 != a@b2)").unwrap();
        assert_eq!(build_psi_mod(&f), Ltl::and(Ltl::and(gf(0), gf(1)), f.body.clone()));
    }

    #[test]
    fn non_inference_shape() {
        let f = parse_formula(
            "forall p1. forall p2. forall b1 ~ p1. forall b2 ~ p2. exists b3 ~ p1. exists b4 ~ p2. \
             G (l@b1 = l@b2) -> G (o@b3 = o@b4)",
        )
        .unwrap();
        let psi = build_psi_mod(&f);
        assert_eq!(
            psi,
            Ltl::implies(Ltl::and(gf(0), gf(1)), Ltl::and(Ltl::and(gf(2), gf(3)), f.body.clone()))
        );
        let mut moved = psi.moved_occurrences();
        moved.sort();
        assert_eq!(moved, vec![0, 1, 2, 3]);
    }

    #[test]
    fn degenerate_sides() {
        let f = parse_formula("exists p. G (a@p = a@p)").err();
        assert!(f.is_some());
        let g = parse_formula("forall p. true").unwrap();
        assert_eq!(build_psi_mod(&g), Ltl::True);
        let h = parse_formula("forall p. forall b ~ p. G x@b").unwrap();
        assert_eq!(build_psi_mod(&h), Ltl::implies(gf(0), h.body.clone()));
    }
}
