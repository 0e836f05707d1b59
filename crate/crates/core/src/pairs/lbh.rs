//! The local bisection hypothesis for Steinberg pairs.

use std::sync::Arc;

use crate::error::Result;
use crate::finring::Elem;
use crate::grouprings::TwistedGroupRing;
use crate::twist::{restrict_to_fibre, Cocycle};

use super::normaliser::{enumerate_normalisers, Mode};
use super::{pair_from_twist, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbhReport {
    pub holds: bool,
    /// Object whose isotropy ring has a nontrivial unit, and that unit extended by zero to all of G.
    pub witness: Option<(usize, Vector)>,
    /// Unit and nontrivial-unit counts of each fibre's twisted group ring.
    pub fibre_units: Vec<(usize, usize)>,
}

/// Checks the hypothesis fibre by fibre.
///
/// A unit `u` of `R(I_x, c_x)` extended by zero is a normaliser of the
/// diagonal with `u^† = u^{-1}`; its support is a bisection exactly when `u`
/// is trivial. Conversely, if every fibre ring has only trivial units then
/// every normaliser has bisection support. So the hypothesis holds iff all
/// isotropy rings have only trivial units.
pub fn check_lbh(c: &Cocycle, cap: u64) -> Result<LbhReport> {
    let g = c.groupoid();
    let mut witness = None;
    let mut fibre_units = Vec::with_capacity(g.num_objects());
    for x in 0..g.num_objects() {
        let fibre = restrict_to_fibre(c, x);
        let ring = TwistedGroupRing::new(fibre.group.clone(), fibre.cocycle.clone())?;
        let units = ring.enumerate_units(cap)?;
        fibre_units.push((units.total(), units.nontrivial.len()));
        if witness.is_none() {
            if let Some(u) = units.nontrivial.first() {
                let mut n = vec![c.ring().zero(); g.num_arrows()];
                for (i, &a) in fibre.arrows.iter().enumerate() {
                    n[a] = u[i];
                }
                witness = Some((x, n));
            }
        }
    }
    Ok(LbhReport { holds: witness.is_none(), witness, fibre_units })
}

/// The hypothesis by definition: every normaliser has G-support a bisection.
pub fn lbh_by_definition(c: &Cocycle, cap: u64) -> Result<bool> {
    let p = pair_from_twist(c, cap)?;
    let g = Arc::clone(c.groupoid());
    let zero: Elem = c.ring().zero();
    let full = enumerate_normalisers(&p, Mode::Full)?;
    Ok(full.iter().all(|n| {
        let support: Vec<usize> = (0..n.n.len()).filter(|&i| n.n[i] != zero).collect();
        g.is_bisection(&support)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::pairs::normaliser::dagger_of;

    fn z2(ring: crate::FiniteRing) -> Cocycle {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        Cocycle::trivial(Arc::new(ring), g)
    }

    #[test]
    fn examples() {
        let cap = 1 << 20;
        for n in 1..=3 {
            let g = Arc::new(FiniteGroupoid::full_relation(n));
            let c = Cocycle::trivial(Arc::new(make_zmod(4).unwrap()), g);
            assert!(check_lbh(&c, cap).unwrap().holds);
        }
        assert!(check_lbh(&z2(make_gf(3, 1, None).unwrap()), cap).unwrap().holds);
        let rep = check_lbh(&z2(make_zmod(4).unwrap()), cap).unwrap();
        assert!(!rep.holds);
        let (_, w) = rep.witness.unwrap();
        let p = pair_from_twist(&z2(make_zmod(4).unwrap()), cap).unwrap();
        assert!(dagger_of(&p, &w).unwrap().is_some());
    }

    #[test]
    fn agrees_with_definition() {
        let cap = 1 << 20;
        let z2g = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2));
        let mixed = Arc::new(FiniteGroupoid::disjoint_union(&FiniteGroupoid::full_relation(2), &z2g));
        let cases = vec![
            z2(make_gf(3, 1, None).unwrap()),
            z2(make_zmod(4).unwrap()),
            z2(make_gf(2, 2, None).unwrap()),
            Cocycle::trivial(Arc::new(make_gf(3, 1, None).unwrap()), mixed),
        ];
        for c in cases {
            assert_eq!(check_lbh(&c, cap).unwrap().holds, lbh_by_definition(&c, cap).unwrap());
        }
    }
}
