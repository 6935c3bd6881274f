//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code with both output streams, so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 property fails or model absent, 2 usage or
//! parse error, 3 search budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{are_isomorphic, Elem};
use crate::congruence::{commutativity_congruence, quotient};
use crate::cosets::{
    coset_system, is_categorical, order_from_cosets, reconstruct_operations, shape, ChainWitness, ClassOrder,
    Categoricity,
};
use crate::decompose::{decompose, DecompositionKind};
use crate::dot::to_dot;
use crate::error::{Error, Result};
use crate::format::{parse_skw, write_catalog, write_skw, AlgebraFile};
use crate::green::{components, green_relations, natural_order, Green};
use crate::identities::{catalog, center, check_identity, classify, first_failure, var_name, Identity, Verdict};
use crate::partition::Partition;
use crate::search::{enumerate_models, find_model, ModelQuery, Skeleton, Structural};

#[derive(Parser, Debug)]
#[command(name = "skewlat", version, about = "Finite skew lattice workbench")]
struct Cli {
    /// Worker threads for `enumerate` and `find`; 0 uses the global pool.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Variety memberships and structural properties.
    Check {
        file: PathBuf,
        /// Extra identities to report on; any failure exits 1.
        #[arg(long)]
        identities: Option<String>,
    },
    /// Green's relations R, L, D, H.
    Green { file: PathBuf },
    /// Natural partial order, preorder classes and components.
    Order { file: PathBuf },
    /// Quotient by a Green's relation or the commutativity congruence.
    Quotient {
        file: PathBuf,
        #[arg(long, value_enum)]
        by: By,
    },
    /// First, component or second decomposition with its parts.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Coset partitions and coset bijections between comparable D-classes.
    Cosets {
        file: PathBuf,
        /// Upper and lower D-class indices.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Categoricity verdict; exits 1 when neither.
    Categorical { file: PathBuf },
    /// Exits 1 when the two algebras are not isomorphic.
    Iso { first: PathBuf, second: PathBuf },
    /// Graphviz diagram.
    Dot { file: PathBuf },
    /// All models of a size up to isomorphism.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "S1-S6")]
        satisfy: String,
        #[arg(long)]
        falsify: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First model meeting the query; exits 1 when there is none.
    Find {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "S1-S6")]
        satisfy: String,
        #[arg(long)]
        falsify: Option<String>,
        /// D-class sizes by level, top first: `2>4>2` for a chain, `1;2,2;1`
        /// for a diamond; `chains` or `lattices` tries every one.
        #[arg(long)]
        skeleton: Option<String>,
        /// `categorical` or `noncategorical`.
        #[arg(long)]
        require: Vec<String>,
        /// Seconds before giving up with exit code 3.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum By {
    #[value(name = "D")]
    D,
    #[value(name = "L")]
    L,
    #[value(name = "R")]
    R,
    Commutativity,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    First,
    Component,
    Second,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded => 3,
        Error::Format { .. }
        | Error::Io(_)
        | Error::Syntax { .. }
        | Error::UnknownTag(_)
        | Error::UnboundVariable(_)
        | Error::InvalidQuery(_)
        | Error::NotComparable(..)
        | Error::BadShape(_)
        | Error::OutOfRangeEntry { .. }
        | Error::IndexOutOfRange(..)
        | Error::SizeLimit(..) => 2,
        _ => 1,
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(code) => Output { code, stdout: out, stderr: String::new() },
        Err(e) => Output { code: exit_code(&e), stdout: out, stderr: format!("error: {e}\n") },
    }
}

fn load(path: &PathBuf) -> Result<AlgebraFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_skw(&text).map_err(|e| match e {
        Error::Format { line, msg } => Error::Format { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn save(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn set(f: &AlgebraFile, xs: &[Elem]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| f.label(x)).collect();
    format!("{{{}}}", items.join(","))
}

fn blocks(f: &AlgebraFile, p: &Partition) -> String {
    let items: Vec<String> = p.blocks().iter().map(|b| set(f, b)).collect();
    format!("{{{}}}", items.join(", "))
}

fn pairs(f: &AlgebraFile, ps: &[(Elem, Elem)]) -> String {
    if ps.is_empty() {
        return "(empty)".into();
    }
    let items: Vec<String> = ps.iter().map(|&(x, y)| format!("{}->{}", f.label(x), f.label(y))).collect();
    items.join(" ")
}

fn assignment(f: &AlgebraFile, asg: &[Elem]) -> String {
    let items: Vec<String> = asg.iter().enumerate().map(|(i, &v)| format!("{}={}", var_name(i), f.label(v))).collect();
    items.join(", ")
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

fn identities(tags: &Option<String>) -> Result<Vec<Identity>> {
    tags.as_deref().map_or(Ok(Vec::new()), catalog::lookup_list)
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32> {
    match &cli.command {
        Command::Check { file, identities: extra } => check(&load(file)?, &identities(extra)?, out),
        Command::Green { file } => green_cmd(&load(file)?, out),
        Command::Order { file } => order_cmd(&load(file)?, out),
        Command::Quotient { file, by } => quotient_cmd(&load(file)?, *by, out),
        Command::Decompose { file, kind } => decompose_cmd(&load(file)?, *kind, out),
        Command::Cosets { file, pair } => cosets_cmd(&load(file)?, pair.as_deref(), out),
        Command::Categorical { file } => categorical_cmd(&load(file)?, out),
        Command::Iso { first, second } => {
            let (f, g) = (load(first)?, load(second)?);
            match are_isomorphic(&f.algebra, &g.algebra) {
                Some(map) => {
                    let ps: Vec<String> =
                        map.iter().enumerate().map(|(x, &y)| format!("{}->{}", f.label(x), g.label(y))).collect();
                    writeln!(out, "isomorphic: {}", ps.join(" ")).unwrap();
                    Ok(0)
                }
                None => {
                    writeln!(out, "not isomorphic").unwrap();
                    Ok(1)
                }
            }
        }
        Command::Dot { file } => {
            out.push_str(&to_dot(&load(file)?)?);
            Ok(0)
        }
        Command::Enumerate { size, satisfy, falsify, out: path } => {
            let q = ModelQuery::new(*size, catalog::lookup_list(satisfy)?)
                .falsify(identities(falsify)?)
                .workers(cli.workers);
            let c = enumerate_models(&q)?;
            let text = write_catalog(&c);
            match path {
                Some(p) => {
                    save(p, &text)?;
                    writeln!(out, "{} models written to {}", c.len(), p.display()).unwrap();
                }
                None => out.push_str(&text),
            }
            Ok(0)
        }
        Command::Find { size, satisfy, falsify, skeleton, require, budget, out: path } => {
            let mut q = ModelQuery::new(*size, catalog::lookup_list(satisfy)?)
                .falsify(identities(falsify)?)
                .workers(cli.workers);
            if let Some(s) = skeleton {
                q = q.skeleton(s.parse::<Skeleton>()?);
            }
            for r in require {
                q = q.require(r.parse::<Structural>()?);
            }
            if let Some(b) = budget {
                let d = Duration::try_from_secs_f64(*b)
                    .map_err(|_| Error::InvalidQuery(format!("bad budget `{b}`")))?;
                q = q.budget(d);
            }
            match find_model(&q)? {
                None => {
                    writeln!(out, "# query: {q}\n# no model").unwrap();
                    Ok(1)
                }
                Some(found) => {
                    let mut text = String::new();
                    writeln!(text, "# query: {q}").unwrap();
                    if !found.seed.is_empty() {
                        writeln!(text, "# seed: {}", found.seed).unwrap();
                    }
                    writeln!(text, "# profile: {}", classify(&found.algebra)).unwrap();
                    text.push_str(&write_skw(&AlgebraFile::new(found.algebra)));
                    match path {
                        Some(p) => {
                            save(p, &text)?;
                            writeln!(out, "model written to {}", p.display()).unwrap();
                        }
                        None => out.push_str(&text),
                    }
                    Ok(0)
                }
            }
        }
    }
}

fn check(f: &AlgebraFile, extra: &[Identity], out: &mut String) -> Result<i32> {
    let a = &f.algebra;
    let profile = classify(a);
    let with_axioms = |ids: Vec<Identity>| {
        let mut all = catalog::skew_lattice_axioms();
        all.extend(ids);
        all
    };
    let s = |k| vec![catalog::s(k)];
    let rows: Vec<(&str, Vec<Identity>, bool)> = vec![
        ("skew lattice (S1-S6)", catalog::skew_lattice_axioms(), profile.skew_lattice),
        ("lattice (S1-S8)", catalog::lattice_axioms(), profile.lattice),
        ("right-handed (S15,S16)", with_axioms(catalog::range(15, 16)), profile.right_handed),
        ("left-handed (S17,S18)", with_axioms(catalog::range(17, 18)), profile.left_handed),
        ("lower symmetric (S13)", with_axioms(s(13)), profile.lower_symmetric),
        ("upper symmetric (S14)", with_axioms(s(14)), profile.upper_symmetric),
        ("symmetric (S13,S14)", with_axioms(catalog::range(13, 14)), profile.symmetric),
        ("middle distributive (S19,S20)", with_axioms(catalog::range(19, 20)), profile.middle_distributive),
        ("bidistributive (S21-S24)", with_axioms(catalog::range(21, 24)), profile.bidistributive),
        ("normal (S25)", with_axioms(s(25)), profile.normal),
        ("conormal (S26)", with_axioms(s(26)), profile.conormal),
        ("regular (REG)", with_axioms(catalog::regularity()), profile.regular),
        ("rectangular (RECT)", with_axioms(vec![catalog::rect()]), profile.rectangular),
        ("skew* (S1,S2,S9-S12)", with_axioms(catalog::range(9, 12)), profile.skew_star),
    ];
    let width = 32;
    writeln!(out, "size {}", a.size()).unwrap();
    for (name, ids, flag) in rows {
        match first_failure(a, &ids) {
            None => {
                debug_assert!(flag);
                writeln!(out, "{name:<width$}✓").unwrap();
            }
            Some((id, asg)) => {
                debug_assert!(!flag);
                writeln!(out, "{name:<width$}✗  {} fails at {}", id.label(), assignment(f, &asg)).unwrap();
            }
        }
    }
    if profile.skew_lattice {
        let cat = is_categorical(a)?.verdict;
        writeln!(out, "{:<width$}{}", "categorical", mark(cat != Categoricity::Neither)).unwrap();
        writeln!(out, "{:<width$}{}", "strictly categorical", mark(cat == Categoricity::StrictlyCategorical))
            .unwrap();
        writeln!(out, "{:<width$}{}", "connected", mark(profile.connected)).unwrap();
        writeln!(out, "{:<width$}{}", "shape", shape(a)?).unwrap();
        let z: Vec<Elem> = center(a)?.into_iter().collect();
        writeln!(out, "{:<width$}{}", "center", set(f, &z)).unwrap();
    } else {
        writeln!(out, "structural properties need a skew lattice").unwrap();
    }
    let mut code = 0;
    for id in extra {
        match check_identity(a, id) {
            Verdict::Holds => writeln!(out, "{:<width$}✓", id.label()).unwrap(),
            Verdict::Fails(asg) => {
                code = 1;
                writeln!(out, "{:<width$}✗  fails at {}", id.label(), assignment(f, &asg)).unwrap();
            }
        }
    }
    Ok(code)
}

fn green_cmd(f: &AlgebraFile, out: &mut String) -> Result<i32> {
    let g = green_relations(&f.algebra)?;
    for which in [Green::R, Green::L, Green::D, Green::H] {
        writeln!(out, "{which:?}  {}", blocks(f, g.get(which))).unwrap();
    }
    Ok(0)
}

fn order_cmd(f: &AlgebraFile, out: &mut String) -> Result<i32> {
    let a = &f.algebra;
    let order = natural_order(a)?;
    let less: Vec<String> = a
        .elements()
        .flat_map(|x| a.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| order.less(x, y))
        .map(|(x, y)| format!("{}<{}", f.label(x), f.label(y)))
        .collect();
    let covers: Vec<String> =
        order.covers().iter().map(|&(x, y)| format!("{}<{}", f.label(x), f.label(y))).collect();
    writeln!(out, "order       {}", less.join(" ")).unwrap();
    writeln!(out, "covers      {}", covers.join(" ")).unwrap();
    writeln!(out, "preorder    {}", blocks(f, &green_relations(a)?.d)).unwrap();
    writeln!(out, "graph       {} edges", order.graph_edges.len()).unwrap();
    writeln!(out, "components  {}", blocks(f, &components(a)?)).unwrap();
    Ok(0)
}

fn quotient_cmd(f: &AlgebraFile, by: By, out: &mut String) -> Result<i32> {
    let a = &f.algebra;
    let g = green_relations(a)?;
    let (name, p) = match by {
        By::D => ("D", g.d),
        By::L => ("L", g.l),
        By::R => ("R", g.r),
        By::Commutativity => ("commutativity", commutativity_congruence(a)?.into_partition()),
    };
    let (q, proj) = quotient(a, &p)?;
    writeln!(out, "# quotient by {name}: {}", blocks(f, &p)).unwrap();
    let map: Vec<String> = a.elements().map(|x| format!("{}->{}", f.label(x), proj.apply(x))).collect();
    writeln!(out, "# projection: {}", map.join(" ")).unwrap();
    out.push_str(&write_skw(&AlgebraFile::new(q)));
    Ok(0)
}

fn decompose_cmd(f: &AlgebraFile, kind: Kind, out: &mut String) -> Result<i32> {
    let kind = match kind {
        Kind::First => DecompositionKind::First,
        Kind::Component => DecompositionKind::Component,
        Kind::Second => DecompositionKind::Second,
    };
    let d = decompose(&f.algebra, kind)?;
    writeln!(out, "kind        {}", d.kind).unwrap();
    writeln!(out, "congruence  {}", blocks(f, &d.congruence)).unwrap();
    for (i, part) in d.parts.iter().enumerate() {
        writeln!(out, "part {i}      {} ({})", set(f, &part.elements), classify(&part.algebra)).unwrap();
    }
    if let Some(fac) = &d.factors {
        let right = fac.right_factor.target().size();
        let left = fac.left_factor.target().size();
        writeln!(out, "a/L         {right} elements, right-handed factor").unwrap();
        writeln!(out, "a/R         {left} elements, left-handed factor").unwrap();
        writeln!(out, "a/D         {} elements", d.quotient.size()).unwrap();
        let map: Vec<String> = fac
            .witness
            .iter()
            .enumerate()
            .map(|(x, &i)| {
                let (l, r) = fac.product.pairs[i];
                format!("{}->({l},{r})", f.label(x))
            })
            .collect();
        writeln!(out, "pair map    {}", map.join(" ")).unwrap();
    }
    writeln!(out, "quotient    {} elements ({})", d.quotient.size(), d.quotient_profile).unwrap();
    out.push_str(&write_skw(&AlgebraFile::new(d.quotient)));
    Ok(0)
}

fn cosets_cmd(f: &AlgebraFile, pair: Option<&[usize]>, out: &mut String) -> Result<i32> {
    let a = &f.algebra;
    let order = ClassOrder::new(a)?;
    let classes: Vec<String> = (0..order.num_classes()).map(|i| format!("{i}={}", set(f, order.class(i)))).collect();
    writeln!(out, "classes {}", classes.join(" ")).unwrap();
    let selected = match pair {
        Some(&[i, j]) => vec![order.pair(i, j)?],
        Some(_) => return Err(Error::InvalidQuery("--pair takes two class indices".into())),
        None => order.comparable_pairs(),
    };
    for p in selected {
        let sys = coset_system(a, p)?;
        writeln!(out, "pair {} > {}: {} > {}", p.upper, p.lower, set(f, &sys.upper), set(f, &sys.lower)).unwrap();
        let cosets = |cs: &[Vec<Elem>]| cs.iter().map(|c| set(f, c)).collect::<Vec<_>>().join(" ");
        writeln!(out, "  cosets in upper  {}", cosets(&sys.upper_cosets)).unwrap();
        writeln!(out, "  cosets in lower  {}", cosets(&sys.lower_cosets)).unwrap();
        for b in &sys.bijections {
            writeln!(
                out,
                "  {} -> {}: {}",
                set(f, &b.upper_coset),
                set(f, &b.lower_coset),
                pairs(f, &b.map.pairs)
            )
            .unwrap();
        }
        order_from_cosets(a, p)?;
        let rebuilt = reconstruct_operations(a, p)?;
        writeln!(out, "  order from cosets  ✓").unwrap();
        writeln!(out, "  reconstruction     {}", mark(rebuilt.matches)).unwrap();
    }
    Ok(0)
}

fn witness(f: &AlgebraFile, w: &ChainWitness, out: &mut String) {
    let (a, b, c) = w.classes;
    writeln!(out, "  classes    {a} > {b} > {c}").unwrap();
    writeln!(out, "  first      {} -> {}", set(f, &w.upper_coset), set(f, &w.middle_from_upper)).unwrap();
    writeln!(out, "  second     {} -> {}", set(f, &w.middle_from_lower), set(f, &w.lower_coset)).unwrap();
    writeln!(out, "  composite  {}", pairs(f, &w.composite)).unwrap();
    writeln!(out, "  enclosing  {}", pairs(f, &w.enclosing)).unwrap();
}

fn categorical_cmd(f: &AlgebraFile, out: &mut String) -> Result<i32> {
    let report = is_categorical(&f.algebra)?;
    writeln!(out, "{}", report.verdict).unwrap();
    if let Some(w) = &report.witness {
        writeln!(out, "composite is not a coset bijection:").unwrap();
        witness(f, w, out);
    }
    if let Some(w) = &report.empty_composite {
        writeln!(out, "empty composite:").unwrap();
        witness(f, w, out);
    }
    Ok(if report.verdict == Categoricity::Neither { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["skewlat"]).code, 2);
        assert_eq!(run(["skewlat", "check", "/nonexistent.skw"]).code, 2);
        assert_eq!(run(["skewlat", "find", "--size", "3", "--satisfy", "S99"]).code, 2);
        assert_eq!(run(["skewlat", "--help"]).code, 0);
    }

    #[test]
    fn find_absent_and_budget() {
        let absent = run(["skewlat", "find", "--size", "2", "--satisfy", "S1-S8", "--falsify", "S7"]);
        assert_eq!(absent.code, 1, "{absent:?}");
        let tight = run(["skewlat", "find", "--size", "8", "--falsify", "S1-S6", "--budget", "0"]);
        assert_eq!(tight.code, 3, "{tight:?}");
    }
}
