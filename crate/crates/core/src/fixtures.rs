//! Named twists used by tests, benchmarks and examples.

use std::sync::Arc;

use crate::finring::{make_gf, make_zmod, Elem, FiniteRing};
use crate::groupoid::{FiniteGroup, FiniteGroupoid};
use crate::twist::Cocycle;

/// A twist with a human-readable name.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub cocycle: Cocycle,
}

fn field(q: usize) -> Arc<FiniteRing> {
    Arc::new(make_gf(q, 1, None).expect("prime"))
}

/// The trivial twist over the full equivalence relation on `n` points, whose algebra is `M_n(GF(q))`.
pub fn matrix(n: usize, q: usize) -> Cocycle {
    Cocycle::trivial(field(q), Arc::new(FiniteGroupoid::full_relation(n)))
}

/// A twist over a group given by `(a, b, c(a, b))` entries; unlisted pairs get 1.
pub fn group_twist(ring: Arc<FiniteRing>, group: &FiniteGroup, entries: &[(usize, usize, Elem)]) -> Cocycle {
    let g = Arc::new(FiniteGroupoid::group_as_groupoid(group));
    Cocycle::from_entries(ring, g, entries).expect("valid group cocycle")
}

/// `R[ℤ/2]` with `c(g, g) = t` (and `c = 1` elsewhere).
pub fn z2(ring: FiniteRing, t: Elem) -> Cocycle {
    group_twist(Arc::new(ring), &FiniteGroup::cyclic(2), &[(1, 1, t)])
}

/// The fixture list: principal and non-principal groupoids, trivial and
/// nontrivial cocycles, fields and non-fields.
pub fn all() -> Vec<Fixture> {
    let fx = |name: &str, cocycle: Cocycle| Fixture { name: name.to_string(), cocycle };
    let f3 = || make_gf(3, 1, None).unwrap();
    let rel2 = Arc::new(FiniteGroupoid::full_relation(2));
    let mixed = Arc::new(FiniteGroupoid::disjoint_union(
        &FiniteGroupoid::full_relation(2),
        &FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)),
    ));
    // In the union the ℤ/2 generator is the last arrow.
    let g = mixed.num_arrows() - 1;
    vec![
        fx("M2 over GF(2)", matrix(2, 2)),
        fx("M3 over GF(2)", matrix(3, 2)),
        fx("M2 over GF(3), coboundary", Cocycle::coboundary(field(3), rel2.clone(), &[1, 2, 2, 1]).unwrap()),
        fx("M2 over Z/4", Cocycle::trivial(Arc::new(make_zmod(4).unwrap()), rel2)),
        fx("Z/2 over GF(3)", z2(f3(), 1)),
        fx("Z/2 over GF(3), c(g,g)=2", z2(f3(), 2)),
        fx("Z/2 over GF(5), c(g,g)=4", z2(make_gf(5, 1, None).unwrap(), 4)),
        fx("Z/2 over GF(2)", z2(make_gf(2, 1, None).unwrap(), 1)),
        fx("Z/2 over Z/4", z2(make_zmod(4).unwrap(), 1)),
        fx("Z/3 over GF(2)", group_twist(field(2), &FiniteGroup::cyclic(3), &[])),
        fx("V4 over GF(3)", group_twist(field(3), &FiniteGroup::klein4(), &[])),
        fx("M2 + Z/2 over GF(3)", Cocycle::trivial(field(3), mixed.clone())),
        fx("M2 + Z/2 over GF(3), twisted", Cocycle::from_entries(field(3), mixed, &[(g, g, 2)]).unwrap()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid_and_varied() {
        let all = all();
        assert!(all.len() >= 8);
        for f in &all {
            assert!(f.cocycle.check().is_ok(), "{}", f.name);
        }
        assert!(all.iter().any(|f| f.cocycle.groupoid().is_principal()));
        assert!(all.iter().any(|f| !f.cocycle.groupoid().is_principal()));
        assert!(all.iter().any(|f| !f.cocycle.is_trivial()));
        assert!(all.iter().any(|f| !f.cocycle.ring().is_field()));
    }
}
