//! Finite model enumeration and search.

mod canon;
mod engine;

pub use canon::{canonical_form, canonical_labeling, table_bytes, CANON_LIMIT};
pub use engine::ENGINE_LIMIT;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::algebra::{Algebra, Op};
use crate::cosets::{is_categorical, Categoricity};
use crate::error::{Error, Result};
use crate::identities::{catalog, classify, satisfies, satisfies_all, Identity, PropertyProfile};
use engine::{Cancel, Canonicity, Engine, Flow, Problem};

/// D-class sizes of a skew chain, top class first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainSkeleton(pub Vec<usize>);

impl ChainSkeleton {
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for ChainSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(">"))
    }
}

impl FromStr for ChainSkeleton {
    type Err = Error;

    fn from_str(s: &str) -> Result<ChainSkeleton> {
        let sizes: Option<Vec<usize>> = s.split('>').map(|p| p.trim().parse().ok().filter(|&k| k > 0)).collect();
        match sizes {
            Some(v) if !v.is_empty() => Ok(ChainSkeleton(v)),
            _ => Err(Error::InvalidQuery(format!("bad skeleton `{s}`"))),
        }
    }
}

/// D-class sizes over an arbitrary lattice of classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSkeleton {
    /// The class lattice `a/D`, listed by decreasing height so that class 0
    /// is the top.
    pub lattice: Algebra,
    pub sizes: Vec<usize>,
}

impl LatticeSkeleton {
    pub fn size(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn chain(c: &ChainSkeleton) -> LatticeSkeleton {
        let k = c.0.len();
        // class 0 on top
        let lattice = Algebra::from_fn(k, |x, y| x.max(y), |x, y| x.min(y)).expect("chain tables");
        LatticeSkeleton { lattice, sizes: c.0.clone() }
    }

    /// Classes grouped by height, top level first, when the lattice is the
    /// vertical sum of those levels.
    fn levels(&self) -> Option<Vec<Vec<usize>>> {
        let l = &self.lattice;
        let h = heights(l);
        let top = *h.iter().max()?;
        let levels: Vec<Vec<usize>> = (0..=top).rev().map(|t| (0..l.size()).filter(|&x| h[x] == t).collect()).collect();
        let level_of = |x: usize| top - h[x];
        let vertical_sum = l.elements().all(|x| {
            l.elements().all(|y| {
                let below = l.meet(x, y) == y;
                below == (x == y || level_of(x) < level_of(y))
            })
        });
        vertical_sum.then_some(levels)
    }
}

/// Length of the longest chain below each element of a lattice.
fn heights(l: &Algebra) -> Vec<usize> {
    let n = l.size();
    let below = |x: usize, y: usize| x != y && l.meet(x, y) == x;
    let mut h = vec![0; n];
    // at most n rounds of relaxation
    for _ in 0..n {
        for y in 0..n {
            for x in 0..n {
                if below(x, y) && h[y] < h[x] + 1 {
                    h[y] = h[x] + 1;
                }
            }
        }
    }
    h
}

impl fmt::Display for LatticeSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.levels() {
            Some(levels) => {
                let text: Vec<String> = levels
                    .iter()
                    .map(|lv| lv.iter().map(|&c| self.sizes[c].to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                let sep = if levels.iter().all(|lv| lv.len() == 1) { ">" } else { ";" };
                f.write_str(&text.join(sep))
            }
            None => {
                let sizes: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
                let l = &self.lattice;
                let covers: Vec<String> = l
                    .elements()
                    .flat_map(|x| l.elements().map(move |y| (x, y)))
                    .filter(|&(x, y)| {
                        let lt = |a: usize, b: usize| a != b && l.meet(a, b) == a;
                        lt(x, y) && !l.elements().any(|z| lt(x, z) && lt(z, y))
                    })
                    .map(|(x, y)| format!("{x}<{y}"))
                    .collect();
                write!(f, "{} over {}", sizes.join(","), covers.join(" "))
            }
        }
    }
}

impl FromStr for LatticeSkeleton {
    type Err = Error;

    /// Levels from the top separated by `;`, classes within a level by `,`:
    /// `1;2,2;1` is a diamond whose classes have sizes 1, 2, 2, 1.
    fn from_str(s: &str) -> Result<LatticeSkeleton> {
        let bad = || Error::InvalidQuery(format!("bad skeleton `{s}`"));
        let levels: Vec<Vec<usize>> = s
            .split(';')
            .map(|lv| lv.split(',').map(|p| p.trim().parse().ok().filter(|&k| k > 0)).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        let (first, last) = (levels.first().ok_or_else(bad)?, levels.last().ok_or_else(bad)?);
        let wide_neighbours = levels.windows(2).any(|w| w[0].len() > 1 && w[1].len() > 1);
        if first.len() != 1 || last.len() != 1 || wide_neighbours {
            return Err(Error::InvalidQuery(format!("skeleton `{s}` does not describe a lattice")));
        }
        let level_of: Vec<usize> = levels.iter().enumerate().flat_map(|(i, lv)| lv.iter().map(move |_| i)).collect();
        let first_of: Vec<usize> = levels
            .iter()
            .scan(0, |acc, lv| {
                let start = *acc;
                *acc += lv.len();
                Some(start)
            })
            .collect();
        // incomparable classes share a level whose neighbours are single
        let meet = |x: usize, y: usize| match level_of[x].cmp(&level_of[y]) {
            _ if x == y => x,
            std::cmp::Ordering::Less => y,
            std::cmp::Ordering::Greater => x,
            std::cmp::Ordering::Equal => first_of[level_of[x] + 1],
        };
        let join = |x: usize, y: usize| match level_of[x].cmp(&level_of[y]) {
            _ if x == y => x,
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Greater => y,
            std::cmp::Ordering::Equal => first_of[level_of[x] - 1],
        };
        let lattice = Algebra::from_fn(level_of.len(), meet, join)?;
        Ok(LatticeSkeleton { lattice, sizes: levels.concat() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Skeleton {
    Chain(ChainSkeleton),
    /// Every chain skeleton with at least two classes summing to `n`.
    AllChains,
    Lattice(LatticeSkeleton),
    /// Every lattice of at least two classes satisfying the query's
    /// identities, with every assignment of class sizes summing to `n`.
    AllLattices,
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::Chain(c) => c.fmt(f),
            Skeleton::AllChains => f.write_str("chains"),
            Skeleton::Lattice(l) => l.fmt(f),
            Skeleton::AllLattices => f.write_str("lattices"),
        }
    }
}

impl FromStr for Skeleton {
    type Err = Error;

    fn from_str(s: &str) -> Result<Skeleton> {
        match s.trim() {
            "chains" => return Ok(Skeleton::AllChains),
            "lattices" => return Ok(Skeleton::AllLattices),
            _ => {}
        }
        if s.contains(';') {
            let l: LatticeSkeleton = s.parse()?;
            if l.sizes.len() == l.levels().map_or(0, |lv| lv.len()) {
                return Ok(Skeleton::Chain(ChainSkeleton(l.sizes)));
            }
            return Ok(Skeleton::Lattice(l));
        }
        s.parse().map(Skeleton::Chain)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structural {
    Categorical,
    NonCategorical,
}

impl fmt::Display for Structural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structural::Categorical => "categorical",
            Structural::NonCategorical => "noncategorical",
        })
    }
}

impl FromStr for Structural {
    type Err = Error;

    fn from_str(s: &str) -> Result<Structural> {
        match s.trim() {
            "categorical" => Ok(Structural::Categorical),
            "noncategorical" | "non-categorical" => Ok(Structural::NonCategorical),
            other => Err(Error::InvalidQuery(format!("unknown structural requirement `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelQuery {
    pub n: usize,
    pub satisfy: Vec<Identity>,
    pub falsify: Vec<Identity>,
    pub skeleton: Option<Skeleton>,
    pub structural: Vec<Structural>,
    pub limit: Option<usize>,
    pub budget: Option<Duration>,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Unit propagation of identity instances. Off only for cross-checks.
    pub propagate: bool,
    /// Pre-fill `x ^ x = x = x v x` when S3–S6 are among the constraints.
    pub prefill_idempotents: bool,
}

impl ModelQuery {
    pub fn new(n: usize, satisfy: Vec<Identity>) -> ModelQuery {
        ModelQuery {
            n,
            satisfy,
            falsify: Vec::new(),
            skeleton: None,
            structural: Vec::new(),
            limit: None,
            budget: None,
            workers: 0,
            propagate: true,
            prefill_idempotents: true,
        }
    }

    pub fn falsify(mut self, ids: Vec<Identity>) -> ModelQuery {
        self.falsify = ids;
        self
    }

    pub fn skeleton(mut self, s: Skeleton) -> ModelQuery {
        self.skeleton = Some(s);
        self
    }

    pub fn require(mut self, s: Structural) -> ModelQuery {
        self.structural.push(s);
        self
    }

    pub fn budget(mut self, d: Duration) -> ModelQuery {
        self.budget = Some(d);
        self
    }

    pub fn workers(mut self, w: usize) -> ModelQuery {
        self.workers = w;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > ENGINE_LIMIT {
            return Err(Error::InvalidQuery(format!("size {} outside 1..={ENGINE_LIMIT}", self.n)));
        }
        let fixed_size = match &self.skeleton {
            Some(Skeleton::Chain(c)) => Some(c.size()),
            Some(Skeleton::Lattice(l)) => Some(l.size()),
            _ => None,
        };
        if let Some(size) = fixed_size.filter(|&s| s != self.n) {
            let sk = self.skeleton.as_ref().unwrap();
            return Err(Error::InvalidQuery(format!("skeleton {sk} has {size} elements, not {}", self.n)));
        }
        if self.skeleton.is_some() && !self.has_skew_axioms() {
            return Err(Error::InvalidQuery("skeletons require S1-S6 among the constraints".into()));
        }
        Ok(())
    }

    fn has_skew_axioms(&self) -> bool {
        catalog::skew_lattice_axioms().iter().all(|ax| {
            self.satisfy.iter().any(|id| id.lhs == ax.lhs && id.rhs == ax.rhs)
        })
    }

    fn has_absorption(&self) -> bool {
        catalog::range(3, 6).iter().all(|ax| {
            self.satisfy.iter().any(|id| id.lhs == ax.lhs && id.rhs == ax.rhs)
        })
    }

    /// Whether a complete model passes the falsify and structural filters.
    fn accepts(&self, a: &Algebra) -> bool {
        if !self.falsify.iter().all(|id| !satisfies(a, id)) {
            return false;
        }
        self.structural.iter().all(|s| {
            let verdict = is_categorical(a).map(|r| r.verdict);
            match (s, verdict) {
                (Structural::Categorical, Ok(v)) => v != Categoricity::Neither,
                (Structural::NonCategorical, Ok(v)) => v == Categoricity::Neither,
                (_, Err(_)) => false,
            }
        })
    }

    fn base_problem(&self) -> Problem {
        let mut p = Problem::new(self.n, self.satisfy.clone());
        p.propagate = self.propagate;
        if self.prefill_idempotents && self.has_absorption() {
            for x in 0..self.n {
                p.fixed.push((p.cell(Op::Meet, x, x), x as u8));
                p.fixed.push((p.cell(Op::Join, x, x), x as u8));
            }
        }
        p
    }

    /// One problem per skeleton and choice of rectangular shapes, in
    /// search order.
    fn problems(&self) -> Result<Vec<(String, Problem)>> {
        Ok(match &self.skeleton {
            None => {
                let mut p = self.base_problem();
                p.canonicity = Canonicity::weak(self.n);
                vec![(String::new(), p)]
            }
            Some(Skeleton::Chain(c)) => seeded_problems(self, &LatticeSkeleton::chain(c)),
            Some(Skeleton::AllChains) => chain_skeletons(self.n)
                .iter()
                .flat_map(|c| seeded_problems(self, &LatticeSkeleton::chain(c)))
                .collect(),
            Some(Skeleton::Lattice(l)) => seeded_problems(self, l),
            Some(Skeleton::AllLattices) => lattice_skeletons(self.n, &self.satisfy)?
                .iter()
                .flat_map(|l| seeded_problems(self, l))
                .collect(),
        })
    }
}

impl fmt::Display for ModelQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = |ids: &[Identity]| ids.iter().map(|i| i.label()).collect::<Vec<_>>().join(",");
        write!(f, "n={} satisfy={}", self.n, labels(&self.satisfy))?;
        if !self.falsify.is_empty() {
            write!(f, " falsify={}", labels(&self.falsify))?;
        }
        if let Some(s) = &self.skeleton {
            write!(f, " skeleton={s}")?;
        }
        for s in &self.structural {
            write!(f, " require={s}")?;
        }
        if let Some(l) = self.limit {
            write!(f, " limit={l}")?;
        }
        Ok(())
    }
}

/// Chain skeletons of `n` with at least two classes: by number of classes,
/// then lexicographically.
pub fn chain_skeletons(n: usize) -> Vec<ChainSkeleton> {
    fn compositions(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            compositions(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    compositions(n, &mut Vec::new(), &mut all);
    all.retain(|c| c.len() >= 2);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter().map(ChainSkeleton).collect()
}

fn factorizations(m: usize) -> Vec<(usize, usize)> {
    (1..=m).filter(|r| m % r == 0).map(|r| (r, m / r)).collect()
}

/// Lattice skeletons for `n` elements: by number of classes, then lattice
/// (chains first, then canonical order), then class sizes. Only lattices
/// satisfying `satisfy` qualify, since `a/D` is a homomorphic image; size
/// assignments are taken up to automorphisms of the lattice.
pub fn lattice_skeletons(n: usize, satisfy: &[Identity]) -> Result<Vec<LatticeSkeleton>> {
    let mut ids = catalog::lattice_axioms();
    for id in satisfy {
        if !ids.iter().any(|x| x.lhs == id.lhs && x.rhs == id.rhs) {
            ids.push(id.clone());
        }
    }
    let mut out = Vec::new();
    let mut level = vec![Algebra::from_flat(1, vec![0], vec![0])?];
    for k in 2..=n {
        level = lattices_above(&level)?;
        let mut lattices: Vec<Algebra> =
            level.iter().filter(|l| satisfies_all(l, &ids)).map(top_first).collect();
        // a chain has one class per height
        lattices.sort_by_key(|l| heights(l).iter().max() != Some(&(k - 1)));
        for l in lattices {
            let autos = automorphisms(&l);
            let mut sizes = Vec::new();
            compositions(n, k, &mut Vec::new(), &mut sizes);
            for s in sizes {
                let minimal = autos.iter().all(|p| {
                    let image: Vec<usize> = (0..k).map(|c| s[p[c]]).collect();
                    image >= s
                });
                if minimal {
                    out.push(LatticeSkeleton { lattice: l.clone(), sizes: s });
                }
            }
        }
    }
    Ok(out)
}

/// Lattices one element larger than those given, up to isomorphism: every
/// finite lattice minus an atom is again a lattice, so each one arises by
/// adding a new atom under some up-set of a smaller lattice.
fn lattices_above(smaller: &[Algebra]) -> Result<Vec<Algebra>> {
    let mut seen = BTreeMap::new();
    for m in smaller {
        let k = m.size();
        let bottom = (0..k).find(|&x| (0..k).all(|y| m.meet(x, y) == x)).expect("finite lattice has a bottom");
        for mask in 0u32..1 << k {
            let up = |x: usize| mask >> x & 1 == 1;
            if up(bottom) || !(0..k).all(|x| !up(x) || (0..k).all(|y| m.meet(x, y) != x || up(y))) {
                continue;
            }
            // element k is the new atom
            let leq = |x: usize, y: usize| match (x == k, y == k) {
                (true, true) => true,
                (true, false) => up(y),
                (false, true) => x == bottom,
                (false, false) => m.meet(x, y) == x,
            };
            if let Some(l) = lattice_of_order(k + 1, &leq)? {
                let c = canonical_form(&l)?;
                seen.entry(table_bytes(&c)).or_insert(c);
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// The lattice of a partial order, when every pair has a least upper bound.
fn lattice_of_order(n: usize, leq: &impl Fn(usize, usize) -> bool) -> Result<Option<Algebra>> {
    let bound = |x: usize, y: usize, above: bool| {
        let ok = |z: usize| if above { leq(x, z) && leq(y, z) } else { leq(z, x) && leq(z, y) };
        let cands: Vec<usize> = (0..n).filter(|&z| ok(z)).collect();
        cands.iter().copied().find(|&z| cands.iter().all(|&w| if above { leq(z, w) } else { leq(w, z) }))
    };
    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            match (bound(x, y, false), bound(x, y, true)) {
                (Some(m), Some(j)) => {
                    meet.push(m);
                    join.push(j);
                }
                _ => return Ok(None),
            }
        }
    }
    Algebra::from_flat(n, meet, join).map(Some)
}

fn compositions(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for k in 1..=rest.saturating_sub(parts - 1) {
        cur.push(k);
        compositions(rest - k, parts - 1, cur, out);
        cur.pop();
    }
}

/// Relabels a lattice by decreasing height, ties by index.
fn top_first(l: &Algebra) -> Algebra {
    let h = heights(l);
    let mut order: Vec<usize> = l.elements().collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(h[x]), x));
    let mut perm = vec![0; l.size()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    l.relabel(&perm)
}

/// Automorphisms of a small algebra by backtracking, as image vectors.
fn automorphisms(a: &Algebra) -> Vec<Vec<usize>> {
    fn extend(a: &Algebra, map: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let k = map.len();
        let n = a.size();
        if k == n {
            out.push(map.clone());
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            map.push(v);
            let ok = (0..=k).all(|x| {
                (0..=k).all(|y| {
                    let (m, j) = (a.meet(x, y), a.join(x, y));
                    (m > k || a.meet(map[x], map[y]) == map[m]) && (j > k || a.join(map[x], map[y]) == map[j])
                })
            });
            if ok {
                used[v] = true;
                extend(a, map, used, out);
                used[v] = false;
            }
            map.pop();
        }
    }
    let mut out = Vec::new();
    extend(a, &mut Vec::new(), &mut vec![false; a.size()], &mut out);
    out
}

/// Relabelings that permute rows and columns inside each rectangular class:
/// the whole group when it is small, otherwise its transpositions.
fn block_symmetries(n: usize, starts: &[usize], shapes: &[(usize, usize)]) -> Vec<Vec<u8>> {
    const FULL_GROUP_LIMIT: usize = 2000;
    let fact = |m: usize| (1..=m).product::<usize>();
    let order: usize = shapes.iter().map(|&(r, c)| fact(r).saturating_mul(fact(c))).fold(1, usize::saturating_mul);
    let identity: Vec<u8> = (0..n as u8).collect();
    // each class contributes relabelings (row perm, col perm)
    let class_moves = |k: usize, full: bool| -> Vec<Vec<u8>> {
        let (r, c) = shapes[k];
        let perms_of = |m: usize| -> Vec<Vec<u8>> {
            if full {
                let mut out = Vec::new();
                engine::permutations(&mut (0..m as u8).collect(), 0, &mut out);
                out
            } else {
                let mut out = vec![(0..m as u8).collect::<Vec<u8>>()];
                for i in 0..m {
                    for j in i + 1..m {
                        let mut p: Vec<u8> = (0..m as u8).collect();
                        p.swap(i, j);
                        out.push(p);
                    }
                }
                out
            }
        };
        let mut out = Vec::new();
        for rp in perms_of(r) {
            for cp in perms_of(c) {
                if !full && rp.iter().enumerate().any(|(i, &v)| i != v as usize)
                    && cp.iter().enumerate().any(|(i, &v)| i != v as usize)
                {
                    continue;
                }
                let mut p = identity.clone();
                for i in 0..r {
                    for j in 0..c {
                        p[starts[k] + i * c + j] = (starts[k] + rp[i] as usize * c + cp[j] as usize) as u8;
                    }
                }
                out.push(p);
            }
        }
        out
    };
    let mut group = vec![identity.clone()];
    if order <= FULL_GROUP_LIMIT {
        for k in 0..shapes.len() {
            let moves = class_moves(k, true);
            group = group
                .iter()
                .flat_map(|g| moves.iter().map(move |m| g.iter().map(|&x| m[x as usize]).collect::<Vec<u8>>()))
                .collect();
        }
    } else {
        for k in 0..shapes.len() {
            group.extend(class_moves(k, false));
        }
    }
    group.retain(|p| *p != identity);
    group.sort();
    group.dedup();
    group
}

/// Problems for one skeleton: classes are consecutive blocks in class
/// order; each class is a rectangular `rows x cols` skew lattice with
/// `(i, j) ^ (k, l) = (i, l)` and `x v y = y ^ x`; a mixed product lies in
/// the class given by the lattice of classes.
fn seeded_problems(q: &ModelQuery, sk: &LatticeSkeleton) -> Vec<(String, Problem)> {
    let n = q.n;
    let sizes = &sk.sizes;
    let mut starts = Vec::new();
    let mut acc = 0;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    let class_of: Vec<usize> = (0..n).map(|x| starts.iter().rposition(|&s| s <= x).unwrap()).collect();
    let mask = |k: usize| -> u32 { (starts[k]..starts[k] + sizes[k]).fold(0, |m, x| m | (1 << x)) };

    let shapes: Vec<Vec<(usize, usize)>> = sizes.iter().map(|&s| factorizations(s)).collect();
    let mut combos: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for opts in &shapes {
        combos = combos
            .into_iter()
            .flat_map(|pre| {
                opts.iter().map(move |&o| {
                    let mut v = pre.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }

    combos
        .into_iter()
        .map(|shape| {
            let mut p = Problem::new(n, q.satisfy.clone());
            p.propagate = q.propagate;
            for x in 0..n {
                for y in 0..n {
                    let (cx, cy) = (class_of[x], class_of[y]);
                    if cx == cy {
                        let cols = shape[cx].1;
                        let (ix, jx) = ((x - starts[cx]) / cols, (x - starts[cx]) % cols);
                        let (iy, jy) = ((y - starts[cx]) / cols, (y - starts[cx]) % cols);
                        let meet = starts[cx] + ix * cols + jy;
                        let join = starts[cx] + iy * cols + jx;
                        p.fixed.push((p.cell(Op::Meet, x, y), meet as u8));
                        p.fixed.push((p.cell(Op::Join, x, y), join as u8));
                    } else {
                        let mc = p.cell(Op::Meet, x, y);
                        let jc = p.cell(Op::Join, x, y);
                        p.domains[mc] = mask(sk.lattice.meet(cx, cy));
                        p.domains[jc] = mask(sk.lattice.join(cx, cy));
                    }
                }
            }
            p.canonicity = Canonicity::Weak(Arc::new(block_symmetries(n, &starts, &shape)));
            let shape_s: Vec<String> = shape.iter().map(|(r, k)| format!("{r}x{k}")).collect();
            (format!("{sk} [{}]", shape_s.join(",")), p)
        })
        .collect()
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub algebra: Algebra,
    pub profile: PropertyProfile,
    pub provenance: String,
}

/// Pairwise non-isomorphic models in canonical form, sorted by size and
/// table bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub query: String,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn algebras(&self) -> impl Iterator<Item = &Algebra> {
        self.entries.iter().map(|e| &e.algebra)
    }

    pub fn from_algebras(query: impl Into<String>, algebras: Vec<Algebra>) -> Result<Catalog> {
        let query = query.into();
        let mut by_key: BTreeMap<(usize, Vec<u8>), Algebra> = BTreeMap::new();
        for a in algebras {
            let c = canonical_form(&a)?;
            by_key.entry((c.size(), table_bytes(&c))).or_insert(c);
        }
        let entries = by_key
            .into_values()
            .map(|algebra| CatalogEntry { profile: classify(&algebra), algebra, provenance: query.clone() })
            .collect();
        Ok(Catalog { query, entries })
    }
}

/// Every model of `q.satisfy` of size `q.n` passing the filters, up to
/// isomorphism.
pub fn enumerate_models(q: &ModelQuery) -> Result<Catalog> {
    q.validate()?;
    let deadline = q.budget.map(|b| Instant::now() + b);
    let problems = q.problems()?;
    let found = with_pool(q.workers, || -> Result<Vec<(usize, Vec<u8>)>> {
        let mut all = Vec::new();
        let mut tasks: Vec<(usize, Vec<(u32, u8)>)> = Vec::new();
        let mut roots = Vec::new();
        for (k, (_, p)) in problems.iter().enumerate() {
            let Some(mut root) = Engine::new(p)? else {
                roots.push(None);
                continue;
            };
            root.set_deadline(deadline);
            let depth = if q.n >= 4 { 3 } else { 0 };
            let mut paths = Vec::new();
            // models completed by propagation above the split depth
            let mut shallow = Vec::new();
            root.search(
                &mut |e| {
                    shallow.push(e.to_algebra());
                    Flow::Continue
                },
                Some((depth, &mut |path: &[(u32, u8)]| paths.push(path.to_vec()))),
            )?;
            for a in shallow.into_iter().filter(|a| q.accepts(a)) {
                let c = canonical_form(&a)?;
                all.push((c.size(), table_bytes(&c)));
            }
            tasks.extend(paths.into_iter().map(|path| (k, path)));
            roots.push(Some(root));
        }
        let results: Vec<Result<Vec<(usize, Vec<u8>)>>> = tasks
            .par_iter()
            .map(|(k, path)| {
                let mut e = roots[*k].clone().expect("task has a root");
                let mut out = Vec::new();
                for &(cell, v) in path {
                    if !e.decide(cell, v) {
                        return Ok(out);
                    }
                }
                let mut err = None;
                e.search(
                    &mut |e| {
                        let a = e.to_algebra();
                        if q.accepts(&a) {
                            match canonical_form(&a) {
                                Ok(c) => out.push((c.size(), table_bytes(&c))),
                                Err(x) => {
                                    err = Some(x);
                                    return Flow::Stop;
                                }
                            }
                        }
                        Flow::Continue
                    },
                    None,
                )?;
                match err {
                    Some(x) => Err(x),
                    None => Ok(out),
                }
            })
            .collect();
        for r in results {
            all.extend(r?);
        }
        Ok(all)
    })??;
    let mut keys = found;
    keys.sort();
    keys.dedup();
    if let Some(l) = q.limit {
        keys.truncate(l);
    }
    let n = q.n;
    let algebras = keys
        .into_iter()
        .map(|(_, bytes)| {
            let nn = n * n;
            let meet = bytes[..nn].iter().map(|&v| v as usize).collect();
            let join = bytes[nn..].iter().map(|&v| v as usize).collect();
            Algebra::from_flat(n, meet, join)
        })
        .collect::<Result<Vec<_>>>()?;
    for a in &algebras {
        if !satisfies_all(a, &q.satisfy) {
            return Err(Error::Inconsistent("emitted model fails a constraint".into()));
        }
    }
    Catalog::from_algebras(q.to_string(), algebras)
}

/// A successful search: the model and the skeleton task that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub algebra: Algebra,
    /// Skeleton and class shapes, empty for unseeded search.
    pub seed: String,
}

/// The first model in search order meeting the query. `Ok(None)` means the
/// search space was exhausted; running out of budget is an error.
pub fn find_model(q: &ModelQuery) -> Result<Option<Found>> {
    q.validate()?;
    let deadline = q.budget.map(|b| Instant::now() + b);
    let problems = q.problems()?;
    let first_hit = Arc::new(AtomicUsize::new(usize::MAX));
    let outcome = with_pool(q.workers, || {
        problems.par_iter().enumerate().find_map_first(|(index, (seed, p))| {
            if first_hit.load(Ordering::Relaxed) < index {
                return None;
            }
            let engine = match Engine::new(p) {
                Ok(Some(e)) => e,
                Ok(None) => return None,
                Err(e) => return Some(Err(e)),
            };
            let mut engine = engine;
            engine.set_deadline(deadline);
            engine.set_cancel(Some(Cancel { first_hit: Arc::clone(&first_hit), index }));
            let mut hit = None;
            let r = engine.search(
                &mut |e| {
                    let a = e.to_algebra();
                    if q.accepts(&a) {
                        hit = Some(a);
                        Flow::Stop
                    } else {
                        Flow::Continue
                    }
                },
                None,
            );
            match (r, hit) {
                (_, Some(a)) => {
                    first_hit.fetch_min(index, Ordering::Relaxed);
                    Some(Ok(Found { algebra: a, seed: seed.clone() }))
                }
                (Err(e), None) => Some(Err(e)),
                (Ok(_), None) => None,
            }
        })
    })?;
    match outcome {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(found)) => {
            if !satisfies_all(&found.algebra, &q.satisfy) || !q.accepts(&found.algebra) {
                return Err(Error::Inconsistent("found model fails re-verification".into()));
            }
            Ok(Some(found))
        }
    }
}
