//! Green's relations, the natural partial order and preorder, and the
//! natural graph of a skew lattice.

use std::fmt;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::identities::require_skew_lattice;
use crate::partition::{Partition, Relation, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Green {
    R,
    L,
    D,
    H,
}

impl fmt::Display for Green {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Green::R => "R",
            Green::L => "L",
            Green::D => "D",
            Green::H => "H",
        };
        f.write_str(s)
    }
}

/// All four Green's relations of one skew lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenRelations {
    pub r: Partition,
    pub l: Partition,
    pub d: Partition,
    pub h: Partition,
}

impl GreenRelations {
    pub fn get(&self, which: Green) -> &Partition {
        match which {
            Green::R => &self.r,
            Green::L => &self.l,
            Green::D => &self.d,
            Green::H => &self.h,
        }
    }
}

fn equivalence(a: &Algebra, rel: Relation, what: &str) -> Result<Partition> {
    Partition::from_relation(&rel)
        .ok_or_else(|| Error::GreenMismatch(format!("{what} is not an equivalence on {:?}", a.name())))
}

/// Computes R, L, D and H, checking that the meet-side and join-side
/// characterizations agree.
pub fn green_relations(a: &Algebra) -> Result<GreenRelations> {
    require_skew_lattice(a)?;
    let n = a.size();
    let r_meet = Relation::from_fn(n, |x, y| a.meet(x, y) == y && a.meet(y, x) == x);
    let l_join = Relation::from_fn(n, |x, y| a.join(x, y) == x && a.join(y, x) == y);
    let l_meet = Relation::from_fn(n, |x, y| a.meet(x, y) == x && a.meet(y, x) == y);
    let r_join = Relation::from_fn(n, |x, y| a.join(x, y) == y && a.join(y, x) == x);
    let d_meet = Relation::from_fn(n, |x, y| {
        a.meet(a.meet(x, y), x) == x && a.meet(a.meet(y, x), y) == y
    });
    let d_join = Relation::from_fn(n, |x, y| {
        a.join(a.join(x, y), x) == x && a.join(a.join(y, x), y) == y
    });
    if r_meet != l_join {
        return Err(Error::GreenMismatch("R from meet differs from L from join".into()));
    }
    if l_meet != r_join {
        return Err(Error::GreenMismatch("L from meet differs from R from join".into()));
    }
    if d_meet != d_join {
        return Err(Error::GreenMismatch("D from meet differs from D from join".into()));
    }
    let r = equivalence(a, r_meet, "R")?;
    let l = equivalence(a, l_meet, "L")?;
    let d = equivalence(a, d_meet, "D")?;
    let h = r.intersect(&l);
    Ok(GreenRelations { r, l, d, h })
}

pub fn green(a: &Algebra, which: Green) -> Result<Partition> {
    Ok(green_relations(a)?.get(which).clone())
}

/// The natural partial order, natural preorder and natural graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderStructure {
    /// `leq.get(x, y)` iff `x <= y`, i.e. `y ^ x = x = x ^ y`.
    pub leq: Relation,
    /// `preceq.get(x, y)` iff `x ⪯ y`, i.e. `x ^ y ^ x = x`.
    pub preceq: Relation,
    /// Unordered strictly comparable pairs `(x, y)` with `x < y` as indices.
    pub graph_edges: Vec<(Elem, Elem)>,
}

impl OrderStructure {
    pub fn less(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq.get(x, y)
    }

    /// Covering pairs `(lower, upper)` of the partial order, sorted.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let n = self.leq.size();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.less(x, y) && !(0..n).any(|z| self.less(x, z) && self.less(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

pub fn natural_order(a: &Algebra) -> Result<OrderStructure> {
    require_skew_lattice(a)?;
    let n = a.size();
    let leq = Relation::from_fn(n, |x, y| a.meet(y, x) == x && a.meet(x, y) == x);
    let leq_join = Relation::from_fn(n, |x, y| a.join(x, y) == y && a.join(y, x) == y);
    // x <= y iff x = y ^ x ^ y iff y = x v y v x
    let leq_sandwich = Relation::from_fn(n, |x, y| a.meet(a.meet(y, x), y) == x);
    let leq_sandwich_join = Relation::from_fn(n, |x, y| a.join(a.join(x, y), x) == y);
    if leq != leq_join || leq != leq_sandwich || leq != leq_sandwich_join {
        return Err(Error::GreenMismatch("characterizations of the natural order disagree".into()));
    }
    let preceq = Relation::from_fn(n, |x, y| a.meet(a.meet(x, y), x) == x);
    let preceq_join = Relation::from_fn(n, |x, y| a.join(a.join(y, x), y) == y);
    if preceq != preceq_join {
        return Err(Error::GreenMismatch("characterizations of the natural preorder disagree".into()));
    }
    if !leq.is_reflexive() || !leq.is_antisymmetric() || !leq.is_transitive() {
        return Err(Error::GreenMismatch("natural order is not a partial order".into()));
    }
    if !preceq.is_reflexive() || !preceq.is_transitive() || !leq.is_subset(&preceq) {
        return Err(Error::GreenMismatch("natural preorder is not an admissible preorder".into()));
    }
    let mut graph_edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if leq.get(x, y) || leq.get(y, x) {
                graph_edges.push((x, y));
            }
        }
    }
    Ok(OrderStructure { leq, preceq, graph_edges })
}

/// Connected components of the natural graph.
pub fn components(a: &Algebra) -> Result<Partition> {
    let order = natural_order(a)?;
    let d = green(a, Green::D)?;
    let mut uf = UnionFind::new(a.size());
    for &(x, y) in &order.graph_edges {
        uf.union(x, y);
    }
    let comps = uf.partition();
    for comp in comps.blocks() {
        for class in d.blocks() {
            if !class.iter().any(|x| comp.contains(x)) {
                return Err(Error::GreenMismatch(format!(
                    "component {comp:?} misses D-class {class:?}"
                )));
            }
        }
    }
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, f4r, l2, m2, rr2};
    use crate::identities::{catalog, satisfies_all};

    #[test]
    fn green_examples() {
        assert_eq!(green(&l2(), Green::D).unwrap(), Partition::discrete(2));
        assert_eq!(green(&rr2(), Green::D).unwrap(), Partition::full(2));
        assert_eq!(green(&rr2(), Green::R).unwrap(), Partition::full(2));
        assert_eq!(green(&rr2(), Green::L).unwrap(), Partition::discrete(2));
        assert_eq!(
            green(&f4r(), Green::D).unwrap().blocks(),
            &[vec![0], vec![1, 2], vec![3]]
        );
        let bad = Algebra::from_fn(2, |_, _| 0, |_, _| 0).unwrap();
        assert!(matches!(green(&bad, Green::D), Err(Error::NotASkewLattice(_))));
    }

    #[test]
    fn order_examples() {
        let rr = natural_order(&rr2()).unwrap();
        assert!(!rr.leq.get(0, 1) && !rr.leq.get(1, 0));
        assert!(rr.preceq.get(0, 1) && rr.preceq.get(1, 0));
        let f = natural_order(&f4r()).unwrap();
        assert!(f.leq.get(1, 3) && f.leq.get(0, 1));
        assert!(!f.leq.get(1, 2) && !f.leq.get(2, 1));
        assert_eq!(f.covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        // M2 and F4R carry the same partial order on the same labels
        assert_eq!(natural_order(&m2()).unwrap().leq, f.leq);
    }

    #[test]
    fn component_examples() {
        assert_eq!(components(&l2()).unwrap().num_blocks(), 1);
        assert_eq!(components(&rr2()).unwrap(), Partition::discrete(2));
        assert_eq!(components(&f4r()).unwrap().num_blocks(), 1);
    }

    #[test]
    fn handedness_matches_green() {
        for a in fixtures::all() {
            let g = green_relations(&a).unwrap();
            assert_eq!(satisfies_all(&a, &catalog::range(15, 16)), g.r == g.d);
            assert_eq!(satisfies_all(&a, &catalog::range(17, 18)), g.l == g.d);
        }
    }
}
