use super::{Formula, QuantifiedFormula};

// Binding strength used to decide where parentheses are needed.
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const TEMPORAL: u8 = 5;
const UNARY: u8 = 6;
const ATOMIC: u8 = 7;

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => ATOMIC,
        Formula::Not(_) | Formula::Next(_) | Formula::Eventually(_) | Formula::Globally(_) => UNARY,
        Formula::Until(..) | Formula::Release(..) => TEMPORAL,
        Formula::And(..) => AND,
        Formula::Or(..) => OR,
        Formula::Implies(..) => IMPLIES,
        Formula::Iff(..) => IFF,
    }
}

/// Renders a quantified formula in the surface syntax; `parse` inverts it.
pub fn render(q: &QuantifiedFormula) -> String {
    format!("{} {}", q.quantifier.keyword(), render_formula(&q.body))
}

/// Renders a quantifier-free formula with the fewest parentheses that
/// still parse back to the same tree.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write_child(child: &Formula, min_strength: u8, out: &mut String) {
    if strength(child) < min_strength {
        out.push('(');
        write(child, out);
        out.push(')');
    } else {
        write(child, out);
    }
}

fn write_unary(op: &str, child: &Formula, out: &mut String) {
    out.push_str(op);
    if strength(child) < UNARY {
        out.push_str(" (");
        write(child, out);
        out.push(')');
    } else {
        out.push(' ');
        write(child, out);
    }
}

fn write_binary(op: &str, l: &Formula, r: &Formula, own: u8, right_assoc: bool, out: &mut String) {
    let (lmin, rmin) = if right_assoc { (own + 1, own) } else { (own, own + 1) };
    write_child(l, lmin, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(r, rmin, out);
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(name) => out.push_str(name),
        Formula::Not(c) => {
            out.push('!');
            write_child(c, UNARY, out);
        }
        Formula::Next(c) => write_unary("X", c, out),
        Formula::Eventually(c) => write_unary("F", c, out),
        Formula::Globally(c) => write_unary("G", c, out),
        Formula::Until(l, r) => write_binary("U", l, r, TEMPORAL, true, out),
        Formula::Release(l, r) => write_binary("R", l, r, TEMPORAL, true, out),
        Formula::And(l, r) => write_binary("&", l, r, AND, false, out),
        Formula::Or(l, r) => write_binary("|", l, r, OR, false, out),
        Formula::Implies(l, r) => write_binary("->", l, r, IMPLIES, true, out),
        Formula::Iff(l, r) => write_binary("<->", l, r, IFF, false, out),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_formula};
    use super::*;

    #[test]
    fn renders_examples() {
        assert_eq!(
            render(&parse("forall G (a -> X a)").unwrap()),
            "forall G (a -> X a)"
        );
        assert_eq!(render(&parse("exists F X a").unwrap()), "exists F X a");
    }

    #[test]
    fn parenthesises_by_associativity() {
        for text in [
            "a & (b & c)",
            "(a -> b) -> c",
            "(a U b) U c",
            "!(a | b)",
            "!!a",
            "X (a U b)",
            "a <-> (b <-> c)",
            "F (!l U (a | b))",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(render_formula(&f), text);
        }
        assert_eq!(render_formula(&parse_formula("((a & b) & c)").unwrap()), "a & b & c");
    }
}
