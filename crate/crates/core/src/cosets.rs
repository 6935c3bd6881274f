//! Coset structure between comparable D-classes.
//!
//! For D-classes `A > B`, the cosets of `A` in `B` are the sets
//! `A ^ b ^ A = {a ^ b ^ a : a ∈ A}` and the cosets of `B` in `A` are
//! `B v a v B`. Both families partition their class, and between any coset
//! of `B` in `A` and any coset of `A` in `B` the natural order restricts to
//! a bijection. Composites of these bijections along chains `A > B > C`
//! decide whether the skew lattice is categorical.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Algebra, Elem};
use crate::congruence::quotient;
use crate::error::{Error, Result};
use crate::green::{green_relations, natural_order};
use crate::identities::{catalog, require_skew_lattice, satisfies};
use crate::partition::Partition;

/// D-classes of a skew lattice with the order of `a/D`.
#[derive(Clone, Debug)]
pub struct ClassOrder {
    pub d: Partition,
    pub lattice: Algebra,
}

impl ClassOrder {
    pub fn new(a: &Algebra) -> Result<ClassOrder> {
        let d = green_relations(a)?.d;
        let (lattice, _) = quotient(a, &d)?;
        Ok(ClassOrder { d, lattice })
    }

    pub fn num_classes(&self) -> usize {
        self.d.num_blocks()
    }

    pub fn class(&self, i: usize) -> &[Elem] {
        self.d.block(i)
    }

    /// `i >= j` in `a/D`.
    pub fn geq(&self, i: usize, j: usize) -> bool {
        self.lattice.meet(i, j) == j
    }

    pub fn greater(&self, i: usize, j: usize) -> bool {
        i != j && self.geq(i, j)
    }

    /// All pairs `A > B`, sorted.
    pub fn comparable_pairs(&self) -> Vec<ClassPair> {
        let k = self.num_classes();
        let mut out = Vec::new();
        for upper in 0..k {
            for lower in 0..k {
                if self.greater(upper, lower) {
                    out.push(ClassPair { upper, lower });
                }
            }
        }
        out
    }

    /// All chains `A > B > C`, sorted.
    pub fn chains(&self) -> Vec<(usize, usize, usize)> {
        let k = self.num_classes();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if !self.greater(a, b) {
                    continue;
                }
                for c in 0..k {
                    if self.greater(b, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }
}

/// Comparable D-classes `upper > lower`, named by block id of D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassPair {
    pub upper: usize,
    pub lower: usize,
}

impl ClassPair {
    pub fn new(a: &Algebra, upper: usize, lower: usize) -> Result<ClassPair> {
        let order = ClassOrder::new(a)?;
        order.pair(upper, lower)
    }
}

impl ClassOrder {
    pub fn pair(&self, upper: usize, lower: usize) -> Result<ClassPair> {
        let k = self.num_classes();
        if upper >= k || lower >= k || !self.greater(upper, lower) {
            return Err(Error::NotComparable(upper, lower));
        }
        Ok(ClassPair { upper, lower })
    }
}

/// A partial bijection between two classes, as sorted `(upper, lower)`
/// pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialBijection {
    pub upper_class: usize,
    pub lower_class: usize,
    pub pairs: Vec<(Elem, Elem)>,
}

impl PartialBijection {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn domain(&self) -> Vec<Elem> {
        let mut d: Vec<Elem> = self.pairs.iter().map(|p| p.0).collect();
        d.sort_unstable();
        d
    }

    pub fn range(&self) -> Vec<Elem> {
        let mut r: Vec<Elem> = self.pairs.iter().map(|p| p.1).collect();
        r.sort_unstable();
        r
    }

    pub fn is_subset_of(&self, other: &PartialBijection) -> bool {
        self.pairs.iter().all(|p| other.pairs.binary_search(p).is_ok())
    }

    pub fn inverse_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut inv: Vec<_> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        inv.sort_unstable();
        inv
    }
}

/// The order-induced bijection between a coset of the lower class in the
/// upper class and a coset of the upper class in the lower class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetBijection {
    pub upper_coset: Vec<Elem>,
    pub lower_coset: Vec<Elem>,
    pub map: PartialBijection,
}

impl CosetBijection {
    /// Identity on a whole class.
    pub fn identity(class: usize, elements: &[Elem]) -> CosetBijection {
        CosetBijection {
            upper_coset: elements.to_vec(),
            lower_coset: elements.to_vec(),
            map: PartialBijection {
                upper_class: class,
                lower_class: class,
                pairs: elements.iter().map(|&x| (x, x)).collect(),
            },
        }
    }
}

/// `g ∘ f`: first `f` from level A to level B, then `g` from B to C.
pub fn compose_bijections(f: &PartialBijection, g: &PartialBijection) -> Result<PartialBijection> {
    if f.lower_class != g.upper_class {
        return Err(Error::LevelMismatch(format!(
            "first map ends in class {} but second starts in class {}",
            f.lower_class, g.upper_class
        )));
    }
    let mut pairs = Vec::new();
    for &(x, y) in &f.pairs {
        for &(y2, z) in &g.pairs {
            if y == y2 {
                pairs.push((x, z));
            }
        }
    }
    pairs.sort_unstable();
    Ok(PartialBijection { upper_class: f.upper_class, lower_class: g.lower_class, pairs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSystem {
    pub pair: ClassPair,
    pub upper: Vec<Elem>,
    pub lower: Vec<Elem>,
    /// Cosets `A ^ b ^ A` partitioning the lower class, by least element.
    pub lower_cosets: Vec<Vec<Elem>>,
    /// Cosets `B v a v B` partitioning the upper class, by least element.
    pub upper_cosets: Vec<Vec<Elem>>,
    /// One bijection per (upper coset, lower coset), row-major in that order.
    pub bijections: Vec<CosetBijection>,
    /// For each upper element `a`, `{b ∈ B : b <= a}`.
    pub upper_images: BTreeMap<Elem, Vec<Elem>>,
    /// For each lower element `b`, `{a ∈ A : b <= a}`.
    pub lower_images: BTreeMap<Elem, Vec<Elem>>,
}

impl CosetSystem {
    pub fn bijection(&self, upper_coset: usize, lower_coset: usize) -> &CosetBijection {
        &self.bijections[upper_coset * self.lower_cosets.len() + lower_coset]
    }

    pub fn lower_coset_of(&self, b: Elem) -> usize {
        self.lower_cosets.iter().position(|c| c.contains(&b)).expect("cosets cover the class")
    }

    pub fn upper_coset_of(&self, x: Elem) -> usize {
        self.upper_cosets.iter().position(|c| c.contains(&x)).expect("cosets cover the class")
    }

    /// Bijection containing the pair `(x, y)` with `x >= y`.
    pub fn bijection_through(&self, x: Elem, y: Elem) -> &CosetBijection {
        self.bijection(self.upper_coset_of(x), self.lower_coset_of(y))
    }
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Collects the distinct cosets and checks that they partition `class`.
fn coset_partition(class: &[Elem], coset: impl Fn(Elem) -> Vec<Elem>, what: &str) -> Result<Vec<Vec<Elem>>> {
    let mut cosets: Vec<Vec<Elem>> = Vec::new();
    for &e in class {
        let c = coset(e);
        if !c.contains(&e) {
            return Err(Error::PartitionFailure(format!("{e} is not in its own {what} coset {c:?}")));
        }
        if !cosets.contains(&c) {
            for other in &cosets {
                if other.iter().any(|x| c.contains(x)) {
                    return Err(Error::PartitionFailure(format!(
                        "{what} cosets {other:?} and {c:?} overlap"
                    )));
                }
            }
            cosets.push(c);
        }
    }
    cosets.sort();
    Ok(cosets)
}

fn is_transversal(set: &[Elem], cosets: &[Vec<Elem>]) -> bool {
    set.len() == cosets.len()
        && cosets
            .iter()
            .all(|c| set.iter().filter(|x| c.contains(x)).count() == 1)
}

pub fn coset_system(a: &Algebra, pair: ClassPair) -> Result<CosetSystem> {
    let order = ClassOrder::new(a)?;
    coset_system_in(a, &order, pair)
}

pub(crate) fn coset_system_in(a: &Algebra, order: &ClassOrder, pair: ClassPair) -> Result<CosetSystem> {
    let pair = order.pair(pair.upper, pair.lower)?;
    let upper = order.class(pair.upper).to_vec();
    let lower = order.class(pair.lower).to_vec();
    let geq = |x: Elem, y: Elem| a.meet(x, y) == y && a.meet(y, x) == y;

    let sandwich_m = |x: Elem, y: Elem| a.meet(a.meet(x, y), x);
    let sandwich_j = |x: Elem, y: Elem| a.join(a.join(x, y), x);

    let lower_cosets = coset_partition(
        &lower,
        |b| sorted(upper.iter().map(|&x| sandwich_m(x, b)).collect()),
        "lower",
    )?;
    let upper_cosets = coset_partition(
        &upper,
        |x| sorted(lower.iter().map(|&b| sandwich_j(b, x)).collect()),
        "upper",
    )?;

    // the three equivalent ways of saying two elements share a coset
    for &y in &lower {
        for &y2 in &lower {
            let same = lower_cosets.iter().any(|c| c.contains(&y) && c.contains(&y2));
            let all = upper.iter().all(|&x| sandwich_m(x, y) == sandwich_m(x, y2));
            let some = upper.iter().any(|&x| sandwich_m(x, y) == sandwich_m(x, y2));
            if same != all || same != some {
                return Err(Error::PartitionFailure(format!(
                    "coset criteria disagree on lower elements {y}, {y2}"
                )));
            }
        }
    }
    for &x in &upper {
        for &x2 in &upper {
            let same = upper_cosets.iter().any(|c| c.contains(&x) && c.contains(&x2));
            let all = lower.iter().all(|&y| sandwich_j(y, x) == sandwich_j(y, x2));
            let some = lower.iter().any(|&y| sandwich_j(y, x) == sandwich_j(y, x2));
            if same != all || same != some {
                return Err(Error::PartitionFailure(format!(
                    "coset criteria disagree on upper elements {x}, {x2}"
                )));
            }
        }
    }

    let mut upper_images = BTreeMap::new();
    for &x in &upper {
        let below: Vec<Elem> = lower.iter().copied().filter(|&b| geq(x, b)).collect();
        let sandwiches = sorted(lower.iter().map(|&b| sandwich_m(x, b)).collect());
        if below != sandwiches || !is_transversal(&below, &lower_cosets) {
            return Err(Error::PartitionFailure(format!(
                "image of {x} is not a transversal of the lower cosets"
            )));
        }
        upper_images.insert(x, below);
    }
    let mut lower_images = BTreeMap::new();
    for &b in &lower {
        let above: Vec<Elem> = upper.iter().copied().filter(|&x| geq(x, b)).collect();
        let sandwiches = sorted(upper.iter().map(|&x| sandwich_j(b, x)).collect());
        if above != sandwiches || !is_transversal(&above, &upper_cosets) {
            return Err(Error::PartitionFailure(format!(
                "image of {b} is not a transversal of the upper cosets"
            )));
        }
        lower_images.insert(b, above);
    }

    let mut bijections = Vec::with_capacity(upper_cosets.len() * lower_cosets.len());
    for uc in &upper_cosets {
        for lc in &lower_cosets {
            let pairs: Vec<(Elem, Elem)> = uc
                .iter()
                .flat_map(|&x| lc.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| geq(x, y))
                .collect();
            let total = uc.iter().all(|x| pairs.iter().filter(|p| p.0 == *x).count() == 1)
                && lc.iter().all(|y| pairs.iter().filter(|p| p.1 == *y).count() == 1);
            if !total {
                return Err(Error::PartitionFailure(format!(
                    "order between cosets {uc:?} and {lc:?} is not a bijection"
                )));
            }
            // forward map x ↦ x ^ b ^ x, inverse y ↦ y v a v y
            for &(x, y) in &pairs {
                if sandwich_m(x, lc[0]) != y || sandwich_j(y, uc[0]) != x {
                    return Err(Error::PartitionFailure(format!(
                        "coset bijection pair ({x}, {y}) disagrees with the sandwich formulas"
                    )));
                }
            }
            bijections.push(CosetBijection {
                upper_coset: uc.clone(),
                lower_coset: lc.clone(),
                map: PartialBijection { upper_class: pair.upper, lower_class: pair.lower, pairs },
            });
        }
    }

    Ok(CosetSystem {
        pair,
        upper,
        lower,
        lower_cosets,
        upper_cosets,
        bijections,
        upper_images,
        lower_images,
    })
}

/// Every coset system of `a`, keyed by class pair.
pub fn all_coset_systems(a: &Algebra) -> Result<(ClassOrder, BTreeMap<ClassPair, CosetSystem>)> {
    let order = ClassOrder::new(a)?;
    let mut systems = BTreeMap::new();
    for pair in order.comparable_pairs() {
        systems.insert(pair, coset_system_in(a, &order, pair)?);
    }
    Ok((order, systems))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Categoricity {
    StrictlyCategorical,
    Categorical,
    Neither,
}

impl fmt::Display for Categoricity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Categoricity::StrictlyCategorical => "strictly categorical",
            Categoricity::Categorical => "categorical",
            Categoricity::Neither => "neither",
        })
    }
}

/// Cosets along a chain `A > B > C` whose composite bijection misbehaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainWitness {
    pub classes: (usize, usize, usize),
    /// Domain of the first bijection (a coset of B in A).
    pub upper_coset: Vec<Elem>,
    /// Range of the first bijection (a coset of A in B).
    pub middle_from_upper: Vec<Elem>,
    /// Domain of the second bijection (a coset of C in B).
    pub middle_from_lower: Vec<Elem>,
    /// Range of the second bijection (a coset of B in C).
    pub lower_coset: Vec<Elem>,
    pub composite: Vec<(Elem, Elem)>,
    /// The coset bijection from A to C containing the composite.
    pub enclosing: Vec<(Elem, Elem)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoricalReport {
    pub verdict: Categoricity,
    /// First nonempty composite that is not a full coset bijection.
    pub witness: Option<ChainWitness>,
    /// First empty composite, if any.
    pub empty_composite: Option<ChainWitness>,
}

/// Decides whether nonempty composites of coset bijections are coset
/// bijections, and whether composites are ever empty.
pub fn is_categorical(a: &Algebra) -> Result<CategoricalReport> {
    require_skew_lattice(a)?;
    let (order, systems) = all_coset_systems(a)?;
    let mut witness = None;
    let mut empty_composite = None;
    for (ca, cb, cc) in order.chains() {
        let ab = &systems[&ClassPair { upper: ca, lower: cb }];
        let bc = &systems[&ClassPair { upper: cb, lower: cc }];
        let ac = &systems[&ClassPair { upper: ca, lower: cc }];
        for phi in &ab.bijections {
            for psi in &bc.bijections {
                let comp = compose_bijections(&phi.map, &psi.map)?;
                let mk = |enclosing: Vec<(Elem, Elem)>| ChainWitness {
                    classes: (ca, cb, cc),
                    upper_coset: phi.upper_coset.clone(),
                    middle_from_upper: phi.lower_coset.clone(),
                    middle_from_lower: psi.upper_coset.clone(),
                    lower_coset: psi.lower_coset.clone(),
                    composite: comp.pairs.clone(),
                    enclosing,
                };
                if comp.is_empty() {
                    if empty_composite.is_none() {
                        empty_composite = Some(mk(Vec::new()));
                    }
                    continue;
                }
                let (x, z) = comp.pairs[0];
                let chi = ac.bijection_through(x, z);
                if !comp.is_subset_of(&chi.map) {
                    return Err(Error::Inconsistent(format!(
                        "composite {:?} is not contained in a coset bijection",
                        comp.pairs
                    )));
                }
                if comp.pairs != chi.map.pairs && witness.is_none() {
                    witness = Some(mk(chi.map.pairs.clone()));
                }
            }
        }
    }
    let verdict = match (&witness, &empty_composite) {
        (Some(_), _) => Categoricity::Neither,
        (None, Some(_)) => Categoricity::Categorical,
        (None, None) => Categoricity::StrictlyCategorical,
    };
    Ok(CategoricalReport { verdict, witness, empty_composite })
}

/// For chains `A > B > C`: `A ^ c ^ A ⊆ B ^ c ^ B` for `c ∈ C`, and
/// `C v a v C ⊆ B v a v B` for `a ∈ A`.
pub fn check_coset_inclusions(a: &Algebra) -> Result<()> {
    require_skew_lattice(a)?;
    let order = ClassOrder::new(a)?;
    let lower_coset = |class: &[Elem], c: Elem| -> Vec<Elem> {
        sorted(class.iter().map(|&x| a.meet(a.meet(x, c), x)).collect())
    };
    let upper_coset = |class: &[Elem], x: Elem| -> Vec<Elem> {
        sorted(class.iter().map(|&y| a.join(a.join(y, x), y)).collect())
    };
    for (ca, cb, cc) in order.chains() {
        let (ea, eb, ec) = (order.class(ca), order.class(cb), order.class(cc));
        for &c in ec {
            let small = lower_coset(ea, c);
            let big = lower_coset(eb, c);
            if !small.iter().all(|x| big.contains(x)) {
                return Err(Error::Inconsistent(format!(
                    "A-coset {small:?} not inside B-coset {big:?}"
                )));
            }
        }
        for &x in ea {
            let small = upper_coset(ec, x);
            let big = upper_coset(eb, x);
            if !small.iter().all(|y| big.contains(y)) {
                return Err(Error::Inconsistent(format!(
                    "C-coset {small:?} not inside B-coset {big:?}"
                )));
            }
        }
    }
    Ok(())
}

/// Structural normality: every element of an upper class lies above
/// exactly one element of each lower class. Cross-checked against the
/// normality identity.
pub fn normality_cover_check(a: &Algebra) -> Result<bool> {
    require_skew_lattice(a)?;
    let order = ClassOrder::new(a)?;
    let geq = |x: Elem, y: Elem| a.meet(x, y) == y && a.meet(y, x) == y;
    let structural = order.comparable_pairs().iter().all(|p| {
        order.class(p.upper).iter().all(|&x| {
            order.class(p.lower).iter().filter(|&&y| geq(x, y)).count() == 1
        })
    });
    let equational = satisfies(a, &catalog::s(25));
    if structural != equational {
        return Err(Error::Inconsistent(format!(
            "covering normality {structural} disagrees with the normality identity {equational}"
        )));
    }
    Ok(structural)
}

/// Union of all coset bijections between the pair, checked against the
/// natural order restricted to `A x B`.
pub fn order_from_cosets(a: &Algebra, pair: ClassPair) -> Result<Vec<(Elem, Elem)>> {
    let sys = coset_system(a, pair)?;
    let mut union: Vec<(Elem, Elem)> = sys.bijections.iter().flat_map(|b| b.map.pairs.clone()).collect();
    union.sort_unstable();
    let order = natural_order(a)?;
    let mut expected = Vec::new();
    for &x in &sys.upper {
        for &y in &sys.lower {
            if order.leq.get(y, x) {
                expected.push((x, y));
            }
        }
    }
    if union != expected {
        return Err(Error::Inconsistent(format!(
            "coset bijections {union:?} differ from the order {expected:?}"
        )));
    }
    Ok(union)
}

/// Operations on `A ∪ B` rebuilt from the two rectangular classes and the
/// coset bijections alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    /// Sorted elements of `A ∪ B`; tables are indexed by position here.
    pub elements: Vec<Elem>,
    pub meet: Vec<Vec<Elem>>,
    pub join: Vec<Vec<Elem>>,
    pub matches: bool,
}

pub fn reconstruct_operations(a: &Algebra, pair: ClassPair) -> Result<Reconstruction> {
    let sys = coset_system(a, pair)?;
    let in_upper = |x: Elem| sys.upper.contains(&x);
    // only intra-class entries are read from the tables
    let class_meet = |x: Elem, y: Elem| {
        debug_assert_eq!(in_upper(x), in_upper(y));
        a.meet(x, y)
    };
    let class_join = |x: Elem, y: Elem| {
        debug_assert_eq!(in_upper(x), in_upper(y));
        a.join(x, y)
    };
    // the element of y's coset below x, and of x's coset above y
    let below = |x: Elem, y: Elem| -> Elem {
        let bij = &sys.bijection(sys.upper_coset_of(x), sys.lower_coset_of(y)).map;
        bij.pairs.iter().find(|p| p.0 == x).unwrap().1
    };
    let above = |x: Elem, y: Elem| -> Elem {
        let bij = &sys.bijection(sys.upper_coset_of(x), sys.lower_coset_of(y)).map;
        bij.pairs.iter().find(|p| p.1 == y).unwrap().0
    };
    let meet = |x: Elem, y: Elem| -> Elem {
        match (in_upper(x), in_upper(y)) {
            (true, true) | (false, false) => class_meet(x, y),
            (true, false) => class_meet(below(x, y), y),
            (false, true) => class_meet(x, below(y, x)),
        }
    };
    let join = |x: Elem, y: Elem| -> Elem {
        match (in_upper(x), in_upper(y)) {
            (true, true) | (false, false) => class_join(x, y),
            (true, false) => class_join(x, above(x, y)),
            (false, true) => class_join(above(y, x), y),
        }
    };
    let mut elements: Vec<Elem> = sys.upper.iter().chain(&sys.lower).copied().collect();
    elements.sort_unstable();
    let table = |f: &dyn Fn(Elem, Elem) -> Elem| -> Vec<Vec<Elem>> {
        elements.iter().map(|&x| elements.iter().map(|&y| f(x, y)).collect()).collect()
    };
    let meet_t = table(&meet);
    let join_t = table(&join);
    let matches = elements.iter().enumerate().all(|(i, &x)| {
        elements
            .iter()
            .enumerate()
            .all(|(j, &y)| meet_t[i][j] == a.meet(x, y) && join_t[i][j] == a.join(x, y))
    });
    Ok(Reconstruction { elements, meet: meet_t, join: join_t, matches })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Primitive,
    SkewChain,
    Diamond,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Primitive => "primitive",
            Shape::SkewChain => "skew chain",
            Shape::Diamond => "diamond",
            Shape::Other => "other",
        })
    }
}

/// Shape of `a/D`: two comparable classes, a chain of three or more, or
/// the four-class diamond.
pub fn shape(a: &Algebra) -> Result<Shape> {
    require_skew_lattice(a)?;
    let order = ClassOrder::new(a)?;
    let k = order.num_classes();
    let is_chain = (0..k).all(|i| (0..k).all(|j| order.geq(i, j) || order.geq(j, i)));
    Ok(match k {
        1 => Shape::Other,
        2 if is_chain => Shape::Primitive,
        _ if is_chain => Shape::SkewChain,
        4 => {
            let incomparable: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| !order.geq(i, j) && !order.geq(j, i))
                .collect();
            if incomparable.len() == 1 {
                Shape::Diamond
            } else {
                Shape::Other
            }
        }
        _ => Shape::Other,
    })
}

/// The coset category of a categorical skew lattice: D-classes as objects,
/// coset bijections as arrows between comparable classes.
#[derive(Clone, Debug)]
pub struct CosetCategory {
    pub order: ClassOrder,
    pub systems: BTreeMap<ClassPair, CosetSystem>,
    pub strict: bool,
}

impl CosetCategory {
    /// Arrows from `upper` to `lower`: identities on the diagonal, coset
    /// bijections for comparable pairs, otherwise only the empty map.
    pub fn hom(&self, upper: usize, lower: usize) -> Vec<PartialBijection> {
        if upper == lower {
            return vec![CosetBijection::identity(upper, self.order.class(upper)).map];
        }
        match self.systems.get(&ClassPair { upper, lower }) {
            Some(sys) => {
                let mut arrows: Vec<PartialBijection> = sys.bijections.iter().map(|b| b.map.clone()).collect();
                if !self.strict {
                    arrows.push(PartialBijection { upper_class: upper, lower_class: lower, pairs: vec![] });
                }
                arrows
            }
            None => vec![PartialBijection { upper_class: upper, lower_class: lower, pairs: vec![] }],
        }
    }

    pub fn compose(&self, f: &PartialBijection, g: &PartialBijection) -> Result<PartialBijection> {
        compose_bijections(f, g)
    }
}

/// Materializes the coset category, or `None` for non-categorical input.
pub fn coset_category(a: &Algebra) -> Result<Option<CosetCategory>> {
    let report = is_categorical(a)?;
    if report.verdict == Categoricity::Neither {
        return Ok(None);
    }
    let (order, systems) = all_coset_systems(a)?;
    Ok(Some(CosetCategory {
        order,
        systems,
        strict: report.verdict == Categoricity::StrictlyCategorical,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, f4r, l2, m2, rr2};

    fn pair(a: &Algebra, u: usize, l: usize) -> ClassPair {
        ClassPair::new(a, u, l).unwrap()
    }

    #[test]
    fn f4r_top_over_middle() {
        // classes of F4R: 0 = {0}, 1 = {a, b}, 2 = {1}
        let a = f4r();
        let sys = coset_system(&a, pair(&a, 2, 1)).unwrap();
        assert_eq!(sys.lower_cosets, vec![vec![1], vec![2]]);
        assert_eq!(sys.upper_cosets, vec![vec![3]]);
        let maps: Vec<_> = sys.bijections.iter().map(|b| b.map.pairs.clone()).collect();
        assert_eq!(maps, vec![vec![(3, 1)], vec![(3, 2)]]);
        assert_eq!(sys.upper_images[&3], vec![1, 2]);
    }

    #[test]
    fn f4r_middle_over_bottom() {
        let a = f4r();
        let sys = coset_system(&a, pair(&a, 1, 0)).unwrap();
        assert_eq!(sys.lower_cosets, vec![vec![0]]);
        assert_eq!(sys.upper_cosets, vec![vec![1], vec![2]]);
    }

    #[test]
    fn lattice_pairs_are_singletons() {
        let a = m2();
        for p in ClassOrder::new(&a).unwrap().comparable_pairs() {
            let sys = coset_system(&a, p).unwrap();
            assert_eq!(sys.lower_cosets.len(), 1);
            assert_eq!(sys.upper_cosets.len(), 1);
            assert_eq!(sys.bijections[0].map.pairs.len(), 1);
        }
    }

    #[test]
    fn incomparable_pairs_are_rejected() {
        let a = m2();
        assert_eq!(ClassPair::new(&a, 1, 2), Err(Error::NotComparable(1, 2)));
        assert_eq!(ClassPair::new(&a, 0, 3), Err(Error::NotComparable(0, 3)));
    }

    #[test]
    fn composition_examples() {
        let a = f4r();
        let top = coset_system(&a, pair(&a, 2, 1)).unwrap();
        let mid = coset_system(&a, pair(&a, 1, 0)).unwrap();
        let to_a = &top.bijection(0, 0).map;
        let a_to_0 = &mid.bijection(0, 0).map;
        let b_to_0 = &mid.bijection(1, 0).map;
        let c = compose_bijections(to_a, a_to_0).unwrap();
        assert_eq!(c.pairs, vec![(3, 0)]);
        assert_eq!((c.upper_class, c.lower_class), (2, 0));
        assert!(compose_bijections(to_a, b_to_0).unwrap().is_empty());

        let id = CosetBijection::identity(2, &[3]).map;
        assert_eq!(compose_bijections(&id, to_a).unwrap(), *to_a);
        assert!(matches!(compose_bijections(a_to_0, to_a), Err(Error::LevelMismatch(_))));
    }

    #[test]
    fn categoricity_of_fixtures() {
        // F4R composes {1}->{a} with {b}->{0} emptily, so it is categorical
        // without being strictly so
        let r = is_categorical(&f4r()).unwrap();
        assert_eq!(r.verdict, Categoricity::Categorical);
        let e = r.empty_composite.unwrap();
        assert_eq!((e.middle_from_upper, e.middle_from_lower), (vec![1], vec![2]));
        for a in [l2(), m2(), fixtures::chain(3)] {
            assert_eq!(is_categorical(&a).unwrap().verdict, Categoricity::StrictlyCategorical);
        }
    }

    #[test]
    fn normality_examples() {
        assert!(normality_cover_check(&l2()).unwrap());
        assert!(!normality_cover_check(&f4r()).unwrap());
        assert!(normality_cover_check(&rr2()).unwrap());
    }

    #[test]
    fn order_and_reconstruction_on_f4r() {
        let a = f4r();
        assert_eq!(order_from_cosets(&a, pair(&a, 2, 1)).unwrap(), vec![(3, 1), (3, 2)]);
        assert_eq!(order_from_cosets(&a, pair(&a, 2, 0)).unwrap(), vec![(3, 0)]);
        for p in ClassOrder::new(&a).unwrap().comparable_pairs() {
            assert!(reconstruct_operations(&a, p).unwrap().matches);
        }
        let m = m2();
        assert!(reconstruct_operations(&m, pair(&m, 3, 0)).unwrap().matches);
    }

    #[test]
    fn shapes() {
        assert_eq!(shape(&f4r()).unwrap(), Shape::SkewChain);
        assert_eq!(shape(&m2()).unwrap(), Shape::Diamond);
        assert_eq!(shape(&rr2()).unwrap(), Shape::Other);
        assert_eq!(shape(&l2()).unwrap(), Shape::Primitive);
    }

    #[test]
    fn inclusions_hold_on_fixtures() {
        for a in fixtures::all() {
            check_coset_inclusions(&a).unwrap();
        }
    }
}
