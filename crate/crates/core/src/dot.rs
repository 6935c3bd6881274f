//! Graphviz export in the style of skew-lattice diagrams: solid segments for
//! covers of the natural partial order, dashed segments joining D-related
//! elements, each D-class on one rank.

use std::fmt::Write as _;

use crate::error::Result;
use crate::format::AlgebraFile;
use crate::green::{green_relations, natural_order};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(f: &AlgebraFile) -> Result<String> {
    let a = &f.algebra;
    let order = natural_order(a)?;
    let d = green_relations(a)?.d;
    let name = |x| quote(&f.label(x));
    let mut out = String::new();
    out.push_str("graph skew_lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
    for x in a.elements() {
        writeln!(out, "  {};", name(x)).unwrap();
    }
    for block in d.blocks().iter().filter(|b| b.len() > 1) {
        let members: Vec<String> = block.iter().map(|&x| name(x)).collect();
        writeln!(out, "  {{ rank=same; {}; }}", members.join("; ")).unwrap();
    }
    for (lo, hi) in order.covers() {
        writeln!(out, "  {} -- {};", name(lo), name(hi)).unwrap();
    }
    for block in d.blocks() {
        for w in block.windows(2) {
            writeln!(out, "  {} -- {} [style=dashed];", name(w[0]), name(w[1])).unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f4r, FOUR_NAMES};

    #[test]
    fn f4r_diagram() {
        let f = AlgebraFile { algebra: f4r(), names: Some(FOUR_NAMES.iter().map(|s| s.to_string()).collect()) };
        let dot = to_dot(&f).unwrap();
        let solid: Vec<&str> = dot.lines().filter(|l| l.contains("--") && !l.contains("dashed")).collect();
        assert_eq!(
            solid,
            vec!["  \"0\" -- \"a\";", "  \"0\" -- \"b\";", "  \"a\" -- \"1\";", "  \"b\" -- \"1\";"]
        );
        let dashed: Vec<&str> = dot.lines().filter(|l| l.contains("dashed")).collect();
        assert_eq!(dashed, vec!["  \"a\" -- \"b\" [style=dashed];"]);
    }
}
