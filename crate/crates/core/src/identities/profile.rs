use std::fmt;

use super::{catalog, is_lattice, is_skew_lattice, satisfies, satisfies_all};
use crate::algebra::Algebra;
use crate::cosets::{is_categorical, shape, Categoricity, Shape};
use crate::green::{components, green_relations};

/// Variety memberships and structural flags of one algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PropertyProfile {
    pub skew_lattice: bool,
    pub lattice: bool,
    pub right_handed: bool,
    pub left_handed: bool,
    pub lower_symmetric: bool,
    pub upper_symmetric: bool,
    pub symmetric: bool,
    pub middle_distributive: bool,
    pub bidistributive: bool,
    pub normal: bool,
    pub conormal: bool,
    pub regular: bool,
    pub rectangular: bool,
    pub skew_star: bool,
    pub categorical: bool,
    pub strictly_categorical: bool,
    pub connected: bool,
    pub primitive: bool,
    pub skew_chain: bool,
    pub diamond: bool,
}

impl PropertyProfile {
    /// `(name, value)` for every flag, in declaration order.
    pub fn flags(&self) -> [(&'static str, bool); 20] {
        [
            ("skew lattice", self.skew_lattice),
            ("lattice", self.lattice),
            ("right-handed", self.right_handed),
            ("left-handed", self.left_handed),
            ("lower symmetric", self.lower_symmetric),
            ("upper symmetric", self.upper_symmetric),
            ("symmetric", self.symmetric),
            ("middle distributive", self.middle_distributive),
            ("bidistributive", self.bidistributive),
            ("normal", self.normal),
            ("conormal", self.conormal),
            ("regular", self.regular),
            ("rectangular", self.rectangular),
            ("skew*", self.skew_star),
            ("categorical", self.categorical),
            ("strictly categorical", self.strictly_categorical),
            ("connected", self.connected),
            ("primitive", self.primitive),
            ("skew chain", self.skew_chain),
            ("diamond", self.diamond),
        ]
    }
}

impl fmt::Display for PropertyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let on: Vec<&str> = self.flags().iter().filter(|p| p.1).map(|p| p.0).collect();
        write!(f, "{}", on.join(", "))
    }
}

/// Fills every flag. Equational flags are exhaustive identity checks;
/// structural flags are left false unless `a` is a skew lattice.
pub fn classify(a: &Algebra) -> PropertyProfile {
    let sat = |k: usize| satisfies(a, &catalog::s(k));
    let both = |i: usize, j: usize| sat(i) && sat(j);
    let skew_lattice = is_skew_lattice(a);
    let mut p = PropertyProfile {
        skew_lattice,
        lattice: skew_lattice && is_lattice(a),
        right_handed: skew_lattice && both(15, 16),
        left_handed: skew_lattice && both(17, 18),
        lower_symmetric: skew_lattice && sat(13),
        upper_symmetric: skew_lattice && sat(14),
        middle_distributive: skew_lattice && both(19, 20),
        bidistributive: skew_lattice && satisfies_all(a, &catalog::range(21, 24)),
        normal: skew_lattice && sat(25),
        conormal: skew_lattice && sat(26),
        regular: skew_lattice && satisfies_all(a, &catalog::regularity()),
        rectangular: skew_lattice && satisfies(a, &catalog::rect()),
        skew_star: skew_lattice && both(1, 2) && satisfies_all(a, &catalog::range(9, 12)),
        ..PropertyProfile::default()
    };
    p.symmetric = p.lower_symmetric && p.upper_symmetric;
    if !skew_lattice {
        return p;
    }

    let g = green_relations(a).expect("skew lattices have consistent Green's relations");
    assert_eq!(p.right_handed, g.r == g.d, "right-handedness disagrees with R = D");
    assert_eq!(p.left_handed, g.l == g.d, "left-handedness disagrees with L = D");

    let cat = is_categorical(a).expect("skew lattice").verdict;
    p.categorical = cat != Categoricity::Neither;
    p.strictly_categorical = cat == Categoricity::StrictlyCategorical;
    p.connected = components(a).expect("skew lattice").num_blocks() == 1;
    match shape(a).expect("skew lattice") {
        Shape::Primitive => p.primitive = true,
        Shape::SkewChain => p.skew_chain = true,
        Shape::Diamond => p.diamond = true,
        Shape::Other => {}
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, f4r, m2, rr2};

    #[test]
    fn profile_examples() {
        let p = classify(&rr2());
        assert!(p.skew_lattice && p.right_handed && p.rectangular && p.regular);
        assert!(!p.lattice && !p.left_handed);

        let p = classify(&m2());
        assert!(p.lattice && p.symmetric && p.normal && p.diamond);
        // the four-element diamond is the Boolean lattice 2 x 2
        assert!(p.middle_distributive && p.bidistributive);

        let p = classify(&f4r());
        assert!(p.skew_lattice && p.right_handed && p.symmetric && p.skew_chain);
        assert!(!p.lattice && !p.normal);
        assert!(p.categorical && !p.strictly_categorical);
    }

    #[test]
    fn profile_implications_on_fixtures() {
        for a in fixtures::all() {
            let p = classify(&a);
            assert!(!p.lattice || p.skew_lattice);
            assert!(!(p.right_handed && p.left_handed) || p.lattice);
            assert!(!p.skew_star || p.lattice);
            assert!(!p.strictly_categorical || p.categorical);
        }
    }

    #[test]
    fn non_skew_lattices_have_no_structural_flags() {
        let bad = Algebra::from_fn(2, |_, _| 0, |_, _| 0).unwrap();
        let p = classify(&bad);
        assert!(!p.skew_lattice && !p.categorical && !p.connected);
    }
}
