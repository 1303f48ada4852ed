//! Text formats for lattices and tolerances, and Graphviz export.
//!
//! Lattice files hold the element count on the first line and one cover pair
//! `i j` (meaning `i ≺ j`) per following line. Tolerance files hold one
//! off-diagonal pair `i j` per line; the diagonal and the reversed pairs are
//! implied. In both, `#` starts a comment and blank lines are ignored.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::tolerance::{two_uniform_blocks, BinaryRelation};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_pair(line: usize, body: &str, n: usize) -> Result<(ElementId, ElementId)> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    let [a, b] = fields[..] else {
        return Err(parse_error(line, format!("expected two indices, found {:?}", body)));
    };
    let parse = |s: &str| -> Result<ElementId> {
        let x: ElementId = s.parse().map_err(|_| parse_error(line, format!("invalid index {s:?}")))?;
        if x >= n {
            return Err(parse_error(line, format!("index {x} out of range for {n} elements")));
        }
        Ok(x)
    };
    Ok((parse(a)?, parse(b)?))
}

pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| parse_error(1, "missing element count"))?;
    let n: usize =
        first.parse().map_err(|_| parse_error(line, format!("invalid element count {first:?}")))?;
    let covers = lines.map(|(line, body)| parse_pair(line, body, n)).collect::<Result<Vec<_>>>()?;
    Lattice::from_covers(n, &covers)
}

pub fn write_lattice(lattice: &Lattice) -> String {
    let mut out = format!("{}\n", lattice.len());
    for &(lo, hi) in lattice.cover_pairs() {
        let _ = writeln!(out, "{lo} {hi}");
    }
    out
}

/// Parses a tolerance file for a host lattice with `n` elements.
pub fn parse_relation(text: &str, n: usize) -> Result<BinaryRelation> {
    let pairs =
        content_lines(text).map(|(line, body)| parse_pair(line, body, n)).collect::<Result<Vec<_>>>()?;
    BinaryRelation::from_pairs(n, &pairs)
}

pub fn write_relation(rel: &BinaryRelation) -> String {
    let mut out = String::new();
    for (x, y) in rel.edges() {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

/// Hasse diagram drawn bottom-up, one rank per height level. Blocks of `t`
/// are outlined in solid grey and blocks of `s` in dotted black, each as a
/// wide band along the block's cover edge. Both relations are expected to be
/// 2-uniform tolerances.
pub fn to_dot(lattice: &Lattice, t: Option<&BinaryRelation>, s: Option<&BinaryRelation>) -> String {
    let mut out = String::new();
    out.push_str("digraph lattice {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle, width=0.35, fixedsize=true, fontsize=10];\n");
    out.push_str("  edge [arrowhead=none];\n");
    for level in 0..=lattice.height() {
        let members: Vec<String> =
            lattice.elements().filter(|&x| lattice.rank(x) == level).map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", members.join("; "));
    }
    for &(lo, hi) in lattice.cover_pairs() {
        let _ = writeln!(out, "  {lo} -> {hi};");
    }
    let styles =
        [(t, "T", "style=solid, color=grey, penwidth=10"), (s, "S", "style=dotted, color=black, penwidth=3")];
    for (rel, name, style) in styles {
        let Some(rel) = rel else { continue };
        for block in two_uniform_blocks(rel) {
            let (x, y) = (block.elements()[0], block.elements()[1]);
            let (lo, hi) = if lattice.leq(x, y) { (x, y) } else { (y, x) };
            let _ = writeln!(
                out,
                "  {lo} -> {hi} [{style}, constraint=false, tooltip=\"{name}-block {block}\"];"
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments_and_blanks() {
        let text = "# square\n4\n\n0 1\n0 2 # left\n1 3\n2 3\n";
        let l = parse_lattice(text).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.join(1, 2), 3);
        assert_eq!(parse_lattice(&write_lattice(&l)).unwrap(), l);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_lattice("3\n0 1\n1 x\n").unwrap_err(),
            Error::Parse { line: 3, message: "invalid index \"x\"".into() }
        );
        assert!(matches!(parse_lattice("2\n0 1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_lattice("2\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_lattice("# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_lattice("4\n0 1\n0 2\n"), Err(Error::NotALattice { .. })));
    }

    #[test]
    fn relation_round_trip() {
        let r = parse_relation("0 1\n3 2\n", 4).unwrap();
        assert!(r.contains(2, 3) && r.contains(3, 2) && r.contains(1, 1));
        assert_eq!(write_relation(&r), "0 1\n2 3\n");
        assert!(matches!(parse_relation("0 4\n", 4), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn dot_export() {
        let l = Lattice::chain(3).unwrap();
        let t = BinaryRelation::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let dot = to_dot(&l, Some(&t), None);
        assert!(dot.starts_with("digraph lattice {\n  rankdir=BT;"));
        assert!(dot.contains("{ rank=same; 1; }"));
        assert!(dot.contains("0 -> 1 [style=solid, color=grey"));
        assert_eq!(dot, to_dot(&l, Some(&t), None));
    }
}
