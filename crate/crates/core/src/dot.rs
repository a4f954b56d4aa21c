//! Graphviz output for machines and Cayley graphs.

use std::fmt::Write as _;

use crate::algebra::{element, AlgebraError, SemigroupResult};
use crate::invert::format_generator_word;
use crate::machine::{Machine, StateId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state in declaration order, one arc `a/b` per transition.
/// The start state, if given, is drawn with a double border.
pub fn machine_dot(m: &Machine, start: Option<StateId>) -> String {
    let mut out = format!(
        "digraph {} {{\n  rankdir=LR;\n  node [shape=circle];\n",
        quote(m.name())
    );
    for q in m.states() {
        let extra = if Some(q) == start {
            " [peripheries=2]"
        } else {
            ""
        };
        let _ = writeln!(out, "  {}{extra};", quote(m.state_name(q)));
    }
    for (q, a, t, b) in m.transitions() {
        let label = format!("{}/{}", m.input().symbol(a), m.output().symbol(b));
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(m.state_name(q)),
            quote(m.state_name(t)),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

/// Left-multiplication Cayley graph: an arc `x → g·x` labeled `g` for every
/// listed element `x` and generator `g`, where `g·x` applies `g` first.
/// Arcs whose target was not enumerated are omitted.
pub fn cayley_dot(m: &Machine, result: &SemigroupResult) -> Result<String, AlgebraError> {
    let mut out = format!("digraph {} {{\n", quote(&format!("cayley {}", m.name())));
    for (i, e) in result.elements.iter().enumerate() {
        let _ = writeln!(
            out,
            "  e{i} [label={}];",
            quote(&format_generator_word(m, &e.witness))
        );
    }
    let gens = result
        .generators
        .iter()
        .map(|&g| element(m, &[g]).map(|e| (g, e.form)))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, x) in result.elements.iter().enumerate() {
        for (g, form) in &gens {
            if let Some(j) = result.position(&form.then(&x.form)) {
                let _ = writeln!(
                    out,
                    "  e{i} -> e{j} [label={}];",
                    quote(&format_generator_word(m, &[*g]))
                );
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate, EnumBounds};
    use crate::catalog;
    use crate::words::Alphabet;

    fn arcs(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("->")).count()
    }

    fn nodes(dot: &str) -> usize {
        dot.lines()
            .filter(|l| (l.starts_with("  \"") || l.starts_with("  e")) && !l.contains("->"))
            .count()
    }

    #[test]
    fn identity_machine() {
        let dot = machine_dot(&Machine::identity(Alphabet::binary()), None);
        assert_eq!(
            dot,
            "digraph \"I\" {\n  rankdir=LR;\n  node [shape=circle];\n  \"e\";\n  \"e\" -> \"e\" [label=\"0/0\"];\n  \"e\" -> \"e\" [label=\"1/1\"];\n}\n"
        );
    }

    #[test]
    fn v12_machine() {
        let dot = machine_dot(&catalog::v12(), Some(StateId(0)));
        assert_eq!(nodes(&dot), 2);
        assert_eq!(arcs(&dot), 4);
        assert!(dot.contains("\"q0\" [peripheries=2];"));
        assert!(dot.contains("\"q0\" -> \"q1\" [label=\"0/1\"];"));
    }

    #[test]
    fn klein_cayley_graph() {
        let v20 = catalog::v20();
        let r = enumerate(
            &v20,
            EnumBounds {
                max_elems: 100,
                max_len: 10,
            },
            false,
        )
        .unwrap();
        let dot = cayley_dot(&v20, &r).unwrap();
        assert_eq!(nodes(&dot), 4);
        assert_eq!(arcs(&dot), 8);
        // p·p is the identity pp
        assert!(dot.contains("e0 -> e2 [label=\"p\"];"));
        assert_eq!(dot, cayley_dot(&v20, &r).unwrap());
    }
}
