//! Named identities of the skew-lattice literature.

use std::sync::OnceLock;

use super::term::{parse_identity, Identity};
use crate::error::{Error, Result};

const TABLE: &[(&str, &str)] = &[
    ("S1", "x ^ (y ^ z) = (x ^ y) ^ z"),
    ("S2", "x v (y v z) = (x v y) v z"),
    ("S3", "(y ^ x) v x = x"),
    ("S4", "x ^ (x v y) = x"),
    ("S5", "(y v x) ^ x = x"),
    ("S6", "x v (x ^ y) = x"),
    ("S7", "x ^ y = y ^ x"),
    ("S8", "x v y = y v x"),
    ("S9", "(x ^ y) v x = x"),
    ("S10", "x ^ (y v x) = x"),
    ("S11", "(x v y) ^ x = x"),
    ("S12", "x v (y ^ x) = x"),
    ("S13", "x ^ y ^ (x v y v x) = (x v y v x) ^ y ^ x"),
    ("S14", "x v y v (x ^ y ^ x) = (x ^ y ^ x) v y v x"),
    ("S15", "x ^ y ^ x = y ^ x"),
    ("S16", "x v y v x = x v y"),
    ("S17", "x ^ y ^ x = x ^ y"),
    ("S18", "x v y v x = y v x"),
    ("S19", "x ^ (y v z) ^ x = (x ^ y ^ x) v (x ^ z ^ x)"),
    ("S20", "x v (y ^ z) v x = (x v y v x) ^ (x v z v x)"),
    ("S21", "x ^ (y v z) = (x ^ y) v (x ^ z)"),
    ("S22", "(x v y) ^ z = (x ^ z) v (y ^ z)"),
    ("S23", "x v (y ^ z) = (x v y) ^ (x v z)"),
    ("S24", "(x ^ y) v z = (x v z) ^ (y v z)"),
    ("S25", "x ^ y ^ z ^ w = x ^ z ^ y ^ w"),
    ("S26", "x v y v z v w = x v z v y v w"),
    ("REG^", "x ^ y ^ x ^ z ^ x = x ^ y ^ z ^ x"),
    ("REGv", "x v y v x v z v x = x v y v z v x"),
    ("RECT", "x ^ y ^ x = x"),
];

fn all() -> &'static Vec<Identity> {
    static CATALOG: OnceLock<Vec<Identity>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        TABLE
            .iter()
            .map(|&(code, text)| parse_identity(text).expect("catalog entry parses").with_code(code))
            .collect()
    })
}

fn single(code: &str) -> Option<&'static Identity> {
    all().iter().find(|id| id.code.as_deref() == Some(code))
}

/// Identity `S<k>`.
pub fn s(k: usize) -> Identity {
    single(&format!("S{k}")).cloned().unwrap_or_else(|| panic!("no identity S{k}"))
}

/// `S<lo>` through `S<hi>` inclusive.
pub fn range(lo: usize, hi: usize) -> Vec<Identity> {
    (lo..=hi).map(s).collect()
}

pub fn skew_lattice_axioms() -> Vec<Identity> {
    range(1, 6)
}

pub fn lattice_axioms() -> Vec<Identity> {
    range(1, 8)
}

pub fn regularity() -> Vec<Identity> {
    vec![single("REG^").unwrap().clone(), single("REGv").unwrap().clone()]
}

pub fn rect() -> Identity {
    single("RECT").unwrap().clone()
}

/// Every numbered identity `S1..S26`.
pub fn numbered() -> Vec<Identity> {
    range(1, 26)
}

/// Resolves a tag (`S19`, `REG`, `RECT`), a range (`S1-S6`) or an inline
/// identity (`"x ^ y = y ^ x"`).
pub fn lookup(tag: &str) -> Result<Vec<Identity>> {
    let tag = tag.trim();
    if tag.contains('=') || tag.contains('≈') {
        return Ok(vec![parse_identity(tag)?]);
    }
    let upper = tag.to_ascii_uppercase();
    if upper == "REG" {
        return Ok(regularity());
    }
    if let Some((lo, hi)) = upper.split_once('-') {
        let num = |s: &str| s.strip_prefix('S').and_then(|d| d.parse::<usize>().ok());
        return match (num(lo), num(hi)) {
            (Some(a), Some(b)) if (1..=26).contains(&a) && (1..=26).contains(&b) && a <= b => {
                Ok(range(a, b))
            }
            _ => Err(Error::UnknownTag(tag.to_string())),
        };
    }
    single(&upper)
        .map(|id| vec![id.clone()])
        .ok_or_else(|| Error::UnknownTag(tag.to_string()))
}

/// Resolves a comma-separated list of tags, ranges and inline identities.
pub fn lookup_list(tags: &str) -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for part in tags.split(',').filter(|p| !p.trim().is_empty()) {
        out.extend(lookup(part)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_parse_with_expected_arity() {
        let arity = |k| s(k).arity();
        assert_eq!(arity(1), 3);
        assert_eq!(arity(3), 2);
        assert_eq!(arity(19), 3);
        assert_eq!(arity(25), 4);
        assert_eq!(rect().arity(), 2);
        assert_eq!(regularity()[0].arity(), 3);
    }

    #[test]
    fn vertical_duals_pair_up() {
        // S3/S5 and S4/S6 swap under term duality, as do the odd/even pairs
        assert_eq!(s(3).dual().lhs, s(5).lhs);
        assert_eq!(s(4).dual().lhs, s(6).lhs);
        for (a, b) in [(1, 2), (7, 8), (13, 14), (19, 20), (21, 23), (22, 24), (25, 26)] {
            let d = s(a).dual();
            assert_eq!((d.lhs, d.rhs), (s(b).lhs, s(b).rhs), "S{a} vs S{b}");
        }
    }

    #[test]
    fn lookup_forms() {
        assert_eq!(lookup("S1-S6").unwrap().len(), 6);
        assert_eq!(lookup("s19").unwrap()[0].code.as_deref(), Some("S19"));
        assert_eq!(lookup("REG").unwrap().len(), 2);
        assert_eq!(lookup("x ^ y = y ^ x").unwrap()[0], parse_identity("x ^ y = y ^ x").unwrap());
        assert_eq!(lookup("S27"), Err(Error::UnknownTag("S27".into())));
        assert_eq!(lookup("S6-S1"), Err(Error::UnknownTag("S6-S1".into())));
        assert_eq!(lookup_list("S1-S6,S19").unwrap().len(), 7);
    }
}
