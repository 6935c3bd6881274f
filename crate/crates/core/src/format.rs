//! The `.skw` text format and catalog files.
//!
//! ```text
//! skw 1
//! 2
//! 0 1
//! 0 1
//!
//! 0 0
//! 1 1
//! names:
//! 0 p
//! 1 q
//! ```
//!
//! `#` starts a comment anywhere on a line. Catalogs are `.skw` records
//! separated by `---` lines, preceded by a `# catalog: <query>` header.

use std::fmt::Write as _;

use crate::algebra::{Algebra, Elem, Op};
use crate::error::{Error, Result};
use crate::search::Catalog;

/// A parsed `.skw` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub algebra: Algebra,
    pub names: Option<Vec<String>>,
}

impl AlgebraFile {
    pub fn new(algebra: Algebra) -> AlgebraFile {
        AlgebraFile { algebra, names: None }
    }

    /// Display name of element `x`: its label if one is given, else its
    /// index.
    pub fn label(&self, x: Elem) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.algebra.elements().map(|x| self.label(x)).collect()
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn strip(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Parses one record; `eof_line` is reported when input ends early.
fn parse_lines(lines: &[(usize, &str)], eof_line: usize) -> Result<AlgebraFile> {
    let mut it = lines.iter().map(|&(no, l)| (no, strip(l))).filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| it.next().ok_or_else(|| err(eof_line, format!("unexpected end of input, expected {what}")));

    let (no, header) = next("`skw 1`")?;
    if header != "skw 1" {
        return Err(err(no, format!("expected `skw 1`, found `{header}`")));
    }
    let (no, size) = next("the carrier size")?;
    let n: usize = size.parse().map_err(|_| err(no, format!("bad carrier size `{size}`")))?;
    if n == 0 {
        return Err(err(no, "carrier size must be positive"));
    }
    let mut read_table = |what: &str| -> Result<Vec<Vec<Elem>>> {
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let (no, line) = next(&format!("row {r} of the {what} table"))?;
            let row: Vec<Elem> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(no, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(err(no, format!("{what} row has {} entries, expected {n}", row.len())));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(err(no, format!("entry {v} out of range for size {n}")));
            }
            rows.push(row);
        }
        Ok(rows)
    };
    let meet = read_table("meet")?;
    let join = read_table("join")?;
    let mut names = None;
    if let Some((no, line)) = next("").ok() {
        if line != "names:" {
            return Err(err(no, format!("unexpected `{line}` after the join table")));
        }
        let mut given: Vec<Option<String>> = vec![None; n];
        while let Ok((no, line)) = next("") {
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(name), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(no, "expected `index name`"));
            };
            let i: usize = idx.parse().map_err(|_| err(no, format!("bad index `{idx}`")))?;
            if i >= n {
                return Err(err(no, format!("index {i} out of range")));
            }
            if given[i].is_some() {
                return Err(err(no, format!("element {i} named twice")));
            }
            given[i] = Some(name.to_string());
        }
        let all: Vec<String> = given
            .into_iter()
            .enumerate()
            .map(|(i, g)| g.unwrap_or_else(|| i.to_string()))
            .collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(err(eof_line, "element names are not distinct"));
        }
        names = Some(all);
    }
    let algebra = Algebra::new(n, meet, join)?;
    Ok(AlgebraFile { algebra, names })
}

pub fn parse_skw(text: &str) -> Result<AlgebraFile> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    parse_lines(&lines, lines.len().max(1))
}

fn write_table(out: &mut String, a: &Algebra, op: Op) {
    for row in a.rows(op) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn write_skw(f: &AlgebraFile) -> String {
    let a = &f.algebra;
    let mut out = String::new();
    writeln!(out, "skw 1\n{}", a.size()).unwrap();
    write_table(&mut out, a, Op::Meet);
    out.push('\n');
    write_table(&mut out, a, Op::Join);
    if let Some(names) = &f.names {
        out.push_str("names:\n");
        for (i, name) in names.iter().enumerate() {
            writeln!(out, "{i} {name}").unwrap();
        }
    }
    out
}

pub fn write_algebra(a: &Algebra) -> String {
    write_skw(&AlgebraFile::new(a.clone()))
}

pub fn write_catalog(c: &Catalog) -> String {
    let mut out = String::new();
    writeln!(out, "# catalog: {}", c.query).unwrap();
    writeln!(out, "# models: {}", c.len()).unwrap();
    for (i, e) in c.entries.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        writeln!(out, "# model {}: {}", i + 1, e.profile).unwrap();
        out.push_str(&write_algebra(&e.algebra));
    }
    out
}

/// Reads a catalog file: the query from its header and every record.
pub fn read_catalog(text: &str) -> Result<(String, Vec<Algebra>)> {
    let query = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("# catalog:"))
        .map(|q| q.trim().to_string())
        .ok_or_else(|| err(1, "missing `# catalog:` header"))?;
    let mut records: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, line) in text.lines().enumerate() {
        if strip(line) == "---" {
            records.push(Vec::new());
        } else {
            records.last_mut().unwrap().push((i + 1, line));
        }
    }
    let mut out = Vec::new();
    for rec in records {
        if rec.iter().all(|(_, l)| strip(l).is_empty()) {
            continue;
        }
        let end = rec.last().map_or(1, |r| r.0);
        out.push(parse_lines(&rec, end)?.algebra);
    }
    Ok((query, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f4r, rr2};

    #[test]
    fn round_trip() {
        let f = AlgebraFile { algebra: f4r(), names: Some(vec!["0".into(), "a".into(), "b".into(), "1".into()]) };
        let text = write_skw(&f);
        let back = parse_skw(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(write_skw(&back), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# right rectangular\nskw 1 # version\n2\n0 1\n0 1 # x ^ y = y\n\n\n0 0\n1 1\n";
        assert_eq!(parse_skw(text).unwrap().algebra, rr2());
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "skw 1\n2\n0 1\n0 2\n\n0 0\n1 1\n";
        assert_eq!(parse_skw(bad).unwrap_err(), Error::Format { line: 4, msg: "entry 2 out of range for size 2".into() });
        let short = "skw 1\n2\n0 1\n";
        assert!(matches!(parse_skw(short), Err(Error::Format { .. })));
        assert!(matches!(parse_skw("skw 2\n1\n0\n0\n"), Err(Error::Format { line: 1, .. })));
        let dup = "skw 1\n1\n0\n\n0\nnames:\n0 a\n0 b\n";
        assert!(matches!(parse_skw(dup), Err(Error::Format { line: 8, .. })));
    }

    #[test]
    fn catalog_round_trip() {
        let c = Catalog::from_algebras("test", vec![rr2(), f4r()]).unwrap();
        let text = write_catalog(&c);
        let (q, algebras) = read_catalog(&text).unwrap();
        assert_eq!(q, "test");
        assert_eq!(algebras, c.algebras().cloned().collect::<Vec<_>>());
    }
}
