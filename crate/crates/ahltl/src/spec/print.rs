use super::{AhltlFormula, Atom, Expr, Ltl};

/// Renders a formula in the stuttering dialect; [`super::parse_formula`] reads it back unchanged.
pub fn print_formula(f: &AhltlFormula) -> String {
    let mut out = String::new();
    for t in &f.traces {
        out.push_str(&format!("{} {}. ", t.quant.keyword(), t.name));
    }
    for s in &f.stutters {
        out.push_str(&format!("{} {} ~ {}. ", s.quant.keyword(), s.name, f.traces[s.base].name));
    }
    out.push_str(&print_ltl(&f.body, f));
    out
}

/// Renders an LTL body over the atoms and stutterings of `f`. `Moved` prints as `moved(b)`.
pub fn print_ltl(l: &Ltl, f: &AhltlFormula) -> String {
    render_ltl(
        l,
        &f.atoms,
        &|v, j| format!("{v}@{}", f.stutters[j].name),
        &|j| format!("moved({})", f.stutters[j].name),
    )
}

pub(crate) fn render_ltl(
    l: &Ltl,
    atoms: &[Atom],
    var: &dyn Fn(&str, usize) -> String,
    moved: &dyn Fn(usize) -> String,
) -> String {
    let go = |x: &Ltl| render_ltl(x, atoms, var, moved);
    match l {
        Ltl::True => "true".into(),
        Ltl::False => "false".into(),
        Ltl::Atom(i) => render_atom(&atoms[*i].expr, var),
        Ltl::Moved(j) => moved(*j),
        Ltl::Not(a) => format!("!{}", go(a)),
        Ltl::Next(a) => format!("X {}", go(a)),
        Ltl::Finally(a) => format!("F {}", go(a)),
        Ltl::Globally(a) => format!("G {}", go(a)),
        Ltl::And(a, b) => format!("({} & {})", go(a), go(b)),
        Ltl::Or(a, b) => format!("({} | {})", go(a), go(b)),
        Ltl::Implies(a, b) => format!("({} -> {})", go(a), go(b)),
        Ltl::Iff(a, b) => format!("({} <-> {})", go(a), go(b)),
        Ltl::Until(a, b) => format!("({} U {})", go(a), go(b)),
    }
}

fn render_atom(e: &Expr, var: &dyn Fn(&str, usize) -> String) -> String {
    match e {
        Expr::Var { var: v, stutter } => var(v, *stutter),
        e => render_expr(e, var),
    }
}

fn render_expr(e: &Expr, var: &dyn Fn(&str, usize) -> String) -> String {
    let go = |x: &Expr| render_expr(x, var);
    match e {
        Expr::Bool(b) => b.to_string(),
        Expr::Int(n) if *n < 0 => format!("(-{})", n.unsigned_abs()),
        Expr::Int(n) => n.to_string(),
        Expr::Var { var: v, stutter } => var(v, *stutter),
        Expr::Not(a) => format!("(!{})", go(a)),
        Expr::Neg(a) => format!("(-{})", go(a)),
        Expr::And(a, b) => format!("({} & {})", go(a), go(b)),
        Expr::Or(a, b) => format!("({} | {})", go(a), go(b)),
        Expr::Implies(a, b) => format!("({} -> {})", go(a), go(b)),
        Expr::Iff(a, b) => format!("({} <-> {})", go(a), go(b)),
        Expr::Cmp(op, a, b) => format!("({} {} {})", go(a), op.symbol(), go(b)),
        Expr::Add(a, b) => format!("({} + {})", go(a), go(b)),
        Expr::Sub(a, b) => format!("({} - {})", go(a), go(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    #[test]
    fn round_trips() {
        for text in [
            "forall p1. forall p2. exists b1 ~ p1. exists b2 ~ p2. (l@b1 = l@b2) -> G (o@b1 = o@b2)",
            "forall p1. forall p2. forall b1 ~ p1. forall b2 ~ p2. exists b3 ~ p1. exists b4 ~ p2. \
             G (l@b1 = l@b2) -> G (o@b3 = o@b4)",
            "exists p. exists b ~ p. x@b - -3 < 2 U !(y@b <-> !z@b = false)",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = print_formula(&f);
            assert_eq!(parse_formula(&printed).unwrap(), f, "{printed}");
        }
    }
}
