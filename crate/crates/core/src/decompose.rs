//! The three structural decompositions of a skew lattice: into D-classes,
//! into components of the natural graph, and as a fibered product of its
//! left- and right-handed images.

use std::fmt;

use crate::algebra::{Algebra, Elem, Morphism};
use crate::congruence::{is_congruence, quotient};
use crate::error::{Error, Result};
use crate::green::{components, green_relations};
use crate::identities::{catalog, classify, first_failure, require_skew_lattice, satisfies, PropertyProfile};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    First,
    Component,
    Second,
}

impl fmt::Display for DecompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompositionKind::First => "first",
            DecompositionKind::Component => "component",
            DecompositionKind::Second => "second",
        })
    }
}

/// A subalgebra together with its embedding: `algebra` element `i` is
/// `elements[i]` in the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub elements: Vec<Elem>,
    pub algebra: Algebra,
}

/// `a/L` and `a/R` over `a/D`, their fibered product and the pair map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedFactors {
    /// `a/L`, the maximal right-handed image.
    pub right_factor: Morphism,
    /// `a/R`, the maximal left-handed image.
    pub left_factor: Morphism,
    pub product: FiberedProduct,
    /// Image of each element of `a` in `product`.
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    pub parts: Vec<Part>,
    pub congruence: Partition,
    pub quotient: Algebra,
    pub quotient_profile: PropertyProfile,
    pub factors: Option<FiberedFactors>,
}

fn parts_of(a: &Algebra, p: &Partition) -> Option<Vec<Part>> {
    p.blocks()
        .iter()
        .map(|b| a.restrict(b).map(|algebra| Part { elements: b.clone(), algebra }))
        .collect()
}

/// D-classes as maximal rectangular subalgebras over the lattice `a/D`.
pub fn first_decomposition(a: &Algebra) -> Result<Decomposition> {
    require_skew_lattice(a)?;
    let d = green_relations(a)?.d;
    let parts = parts_of(a, &d)
        .ok_or_else(|| Error::RectangularityFailure("a D-class is not a subalgebra".into()))?;
    let rect = catalog::rect();
    for part in &parts {
        if !satisfies(&part.algebra, &rect) {
            return Err(Error::RectangularityFailure(format!(
                "class {:?} is not rectangular",
                part.elements
            )));
        }
    }
    // adding any outside element breaks rectangularity: it is not
    // D-related to the class members
    for part in &parts {
        let x = part.elements[0];
        for y in a.elements().filter(|y| !part.elements.contains(y)) {
            if a.meet(a.meet(x, y), x) == x && a.meet(a.meet(y, x), y) == y {
                return Err(Error::RectangularityFailure(format!(
                    "class {:?} extends to {y}",
                    part.elements
                )));
            }
        }
    }
    let (q, _) = quotient(a, &d)?;
    if let Some((id, _)) = first_failure(&q, &catalog::lattice_axioms()) {
        return Err(Error::RectangularityFailure(format!("a/D fails {}", id.label())));
    }
    let quotient_profile = classify(&q);
    Ok(Decomposition {
        kind: DecompositionKind::First,
        parts,
        congruence: d,
        quotient: q,
        quotient_profile,
        factors: None,
    })
}

/// Components of the natural graph as maximal connected subalgebras over
/// the rectangular image.
pub fn component_decomposition(a: &Algebra) -> Result<Decomposition> {
    let comps = components(a)?;
    if let Some(v) = is_congruence(a, &comps) {
        return Err(Error::ComponentNotCongruence(v.to_string()));
    }
    let parts = parts_of(a, &comps)
        .ok_or_else(|| Error::ComponentNotCongruence("a component is not a subalgebra".into()))?;
    let (q, _) = quotient(a, &comps)?;
    let mut axioms = catalog::skew_lattice_axioms();
    axioms.push(catalog::rect());
    if let Some((id, _)) = first_failure(&q, &axioms) {
        return Err(Error::ComponentNotCongruence(format!(
            "component quotient fails {}",
            id.label()
        )));
    }
    let quotient_profile = classify(&q);
    Ok(Decomposition {
        kind: DecompositionKind::Component,
        parts,
        congruence: comps,
        quotient: q,
        quotient_profile,
        factors: None,
    })
}

/// `{(x, y) : p(x) = q(y)}` with componentwise operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedProduct {
    pub algebra: Algebra,
    /// Element `i` of `algebra` is `pairs[i]`, in lexicographic order.
    pub pairs: Vec<(Elem, Elem)>,
}

impl FiberedProduct {
    pub fn index_of(&self, pair: (Elem, Elem)) -> Option<Elem> {
        self.pairs.binary_search(&pair).ok()
    }
}

pub fn fibered_product(p: &Morphism, q: &Morphism) -> Result<FiberedProduct> {
    if p.target() != q.target() {
        return Err(Error::TargetMismatch);
    }
    for f in [p, q] {
        if let Some((op, x, y)) = f.source().homomorphism_violation(f.target(), f.map()) {
            return Err(Error::NotAHomomorphism { op, x, y });
        }
    }
    let (b, c) = (p.source(), q.source());
    let pairs: Vec<(Elem, Elem)> = b
        .elements()
        .flat_map(|x| c.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| p.apply(x) == q.apply(y))
        .collect();
    let index = |pair: (Elem, Elem)| pairs.binary_search(&pair).expect("fibered product is closed");
    let algebra = Algebra::from_fn(
        pairs.len(),
        |i, j| {
            let ((x, y), (u, v)) = (pairs[i], pairs[j]);
            index((b.meet(x, u), c.meet(y, v)))
        },
        |i, j| {
            let ((x, y), (u, v)) = (pairs[i], pairs[j]);
            index((b.join(x, u), c.join(y, v)))
        },
    )?;
    Ok(FiberedProduct { algebra, pairs })
}

/// `a ≅ a/L ×_{a/D} a/R` via `x ↦ (class_L(x), class_R(x))`.
pub fn second_decomposition(a: &Algebra) -> Result<Decomposition> {
    let g = green_relations(a)?;
    let (al, to_al) = quotient(a, &g.l)?;
    let (ar, to_ar) = quotient(a, &g.r)?;
    let (ad, _) = quotient(a, &g.d)?;
    let induced = |p: &Partition, q: Algebra| -> Result<Morphism> {
        let map = p.blocks().iter().map(|b| g.d.block_of(b[0])).collect();
        Morphism::new(q, ad.clone(), map)
    };
    let pl = induced(&g.l, al)?;
    let pr = induced(&g.r, ar)?;
    let product = fibered_product(&pl, &pr)?;
    let witness: Vec<Elem> = a
        .elements()
        .map(|x| {
            product
                .index_of((g.l.block_of(x), g.r.block_of(x)))
                .expect("pair map lands in the fibered product")
        })
        .collect();
    if product.algebra.size() != a.size() {
        return Err(Error::GreenMismatch(format!(
            "fibered product has {} elements, expected {}",
            product.algebra.size(),
            a.size()
        )));
    }
    let iso = Morphism::new(a.clone(), product.algebra.clone(), witness.clone())?;
    if !iso.is_injective() {
        return Err(Error::GreenMismatch("pair map is not injective".into()));
    }
    let quotient_profile = classify(&ad);
    Ok(Decomposition {
        kind: DecompositionKind::Second,
        parts: Vec::new(),
        congruence: g.d,
        quotient: ad,
        quotient_profile,
        factors: Some(FiberedFactors { right_factor: to_al, left_factor: to_ar, product, witness }),
    })
}

pub fn decompose(a: &Algebra, kind: DecompositionKind) -> Result<Decomposition> {
    match kind {
        DecompositionKind::First => first_decomposition(a),
        DecompositionKind::Component => component_decomposition(a),
        DecompositionKind::Second => second_decomposition(a),
    }
}
