//! Twisted group rings `R(H, c)` of finite groups and unique products in groups.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{check_cap, pow_size, Error, Result};
use crate::finring::{for_each_vector, solve_linear, Elem, FiniteRing, LinearRow};
use crate::groupoid::{FiniteGroup, FiniteGroupoid};
use crate::twist::{check_cocycle, Cocycle};

/// `R(H, c)` with `(f*g)(β) = Σ_α c(α, α^{-1}β) f(α) g(α^{-1}β)`.
#[derive(Clone, Debug)]
pub struct TwistedGroupRing {
    ring: Arc<FiniteRing>,
    group: FiniteGroup,
    cocycle: Cocycle,
}

/// Units of a twisted group ring, split into `t·δ_g` and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitReport {
    pub trivial: Vec<Vec<Elem>>,
    pub nontrivial: Vec<Vec<Elem>>,
}

impl UnitReport {
    pub fn total(&self) -> usize {
        self.trivial.len() + self.nontrivial.len()
    }
}

impl TwistedGroupRing {
    /// `cocycle` must live on `group_as_groupoid(group)`.
    pub fn new(group: FiniteGroup, cocycle: Cocycle) -> Result<Self> {
        check_cocycle(&cocycle)?;
        if **cocycle.groupoid() != FiniteGroupoid::group_as_groupoid(&group) {
            return Err(Error::InvalidArgument("cocycle is not defined on this group".into()));
        }
        Ok(TwistedGroupRing { ring: cocycle.ring().clone(), group, cocycle })
    }

    pub fn untwisted(ring: Arc<FiniteRing>, group: FiniteGroup) -> Self {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&group));
        let cocycle = Cocycle::trivial(ring.clone(), g);
        TwistedGroupRing { ring, group, cocycle }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![self.ring.zero(); self.group.order()]
    }

    /// `t·δ_g`.
    pub fn delta(&self, g: usize, t: Elem) -> Vec<Elem> {
        let mut v = self.zero();
        v[g] = t;
        v
    }

    pub fn one(&self) -> Vec<Elem> {
        self.delta(self.group.identity(), self.ring.one())
    }

    pub fn mul(&self, f: &[Elem], g: &[Elem]) -> Vec<Elem> {
        let r = &*self.ring;
        let h = &self.group;
        (0..h.order())
            .map(|beta| {
                let mut acc = r.zero();
                for alpha in 0..h.order() {
                    let rest = h.mul(h.inv(alpha), beta);
                    let term = r.mul(self.cocycle.value(alpha, rest), r.mul(f[alpha], g[rest]));
                    acc = r.add(acc, term);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, f: &[Elem], g: &[Elem]) -> Vec<Elem> {
        f.iter().zip(g).map(|(&a, &b)| self.ring.add(a, b)).collect()
    }

    /// Support of size one with a unit coefficient.
    pub fn is_trivial_unit(&self, f: &[Elem]) -> bool {
        let support: Vec<usize> = (0..f.len()).filter(|&i| f[i] != self.ring.zero()).collect();
        support.len() == 1 && self.ring.is_unit(f[support[0]])
    }

    /// The two-sided inverse of `f`, found by solving `f * x = 1` and checking `x * f = 1`.
    pub fn inverse(&self, f: &[Elem], cap: u64) -> Result<Option<Vec<Elem>>> {
        let n = self.group.order();
        let one = self.one();
        let cols: Vec<Vec<Elem>> = (0..n).map(|i| self.mul(f, &self.delta(i, self.ring.one()))).collect();
        let rows: Vec<LinearRow> =
            (0..n).map(|l| LinearRow::new(cols.iter().map(|c| c[l]).collect(), one[l])).collect();
        let sols = solve_linear(&self.ring, n, &rows, cap)?;
        Ok(sols.first().filter(|x| self.mul(x, f) == one))
    }

    /// Every unit, scanning all `|R|^|H|` elements in odometer order.
    pub fn enumerate_units(&self, cap: u64) -> Result<UnitReport> {
        let n = self.group.order();
        check_cap("unit enumeration", pow_size(self.ring.size(), n), cap)?;
        let mut report = UnitReport { trivial: Vec::new(), nontrivial: Vec::new() };
        let mut err = None;
        for_each_vector(&self.ring, n, |f| {
            if err.is_some() {
                return;
            }
            match self.inverse(f, cap) {
                Ok(Some(_)) => {
                    if self.is_trivial_unit(f) {
                        report.trivial.push(f.to_vec());
                    } else {
                        report.nontrivial.push(f.to_vec());
                    }
                }
                Ok(None) => {}
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(report),
        }
    }

    /// Units by checking every product pair; the independent check for [`enumerate_units`](Self::enumerate_units).
    pub fn enumerate_units_pairwise(&self, cap: u64) -> Result<Vec<Vec<Elem>>> {
        let n = self.group.order();
        let size = pow_size(self.ring.size(), n);
        check_cap("pairwise unit scan", size.saturating_mul(size), cap)?;
        let mut all = Vec::new();
        for_each_vector(&self.ring, n, |f| all.push(f.to_vec()));
        let one = self.one();
        Ok(all
            .iter()
            .filter(|f| all.iter().any(|g| self.mul(f, g) == one && self.mul(g, f) == one))
            .cloned()
            .collect())
    }

    /// `a = fδ_e + (1-f)δ_g` with inverse `fδ_e + (1-f)c(g,g^{-1})^{-1}δ_{g^{-1}}`.
    pub fn decomposable_unit(&self, f: Elem, g: usize) -> Result<(Vec<Elem>, Vec<Elem>)> {
        let r = &*self.ring;
        let h = &self.group;
        if r.is_indecomposable() {
            return Err(Error::NotApplicable(format!("{} has no nontrivial idempotent", r.name())));
        }
        if r.mul(f, f) != f || f == r.zero() || f == r.one() {
            return Err(Error::InvalidArgument(format!("{} is not a nontrivial idempotent", r.label(f))));
        }
        if g == h.identity() {
            return Err(Error::InvalidArgument("group element must not be the identity".into()));
        }
        let e = h.identity();
        let cf = r.sub(r.one(), f);
        let a = self.add(&self.delta(e, f), &self.delta(g, cf));
        let cinv = r.inv(self.cocycle.value(g, h.inv(g))).expect("cocycle values are units");
        let b = self.add(&self.delta(e, f), &self.delta(h.inv(g), r.mul(cf, cinv)));
        let one = self.one();
        assert!(self.mul(&a, &b) == one && self.mul(&b, &a) == one, "decomposable unit inverse");
        assert!(!self.is_trivial_unit(&a));
        Ok((a, b))
    }

    /// `a = δ_e - nδ_g` with its inverse `Σ_k (nδ_g)^k`.
    ///
    /// The third component is `true` when `n^2 ≠ 0`, where the series has more
    /// than the two terms of the square-zero formula.
    pub fn nonreduced_unit(&self, n: Elem, g: usize) -> Result<(Vec<Elem>, Vec<Elem>, bool)> {
        let r = &*self.ring;
        let h = &self.group;
        if r.is_reduced() {
            return Err(Error::NotApplicable(format!("{} has no nonzero nilpotent", r.name())));
        }
        if n == r.zero() || !r.nilpotents().contains(&n) {
            return Err(Error::InvalidArgument(format!("{} is not a nonzero nilpotent", r.label(n))));
        }
        if g == h.identity() {
            return Err(Error::InvalidArgument("group element must not be the identity".into()));
        }
        let x = self.delta(g, n);
        let one = self.one();
        let a = self.add(&one, &self.delta(g, r.neg(n)));
        let mut inv = one.clone();
        let mut term = one.clone();
        loop {
            term = self.mul(&term, &x);
            if term.iter().all(|&c| c == r.zero()) {
                break;
            }
            inv = self.add(&inv, &term);
        }
        assert!(self.mul(&a, &inv) == one && self.mul(&inv, &a) == one, "geometric series inverse");
        Ok((a, inv, r.mul(n, n) != r.zero()))
    }
}

/// Elements of `AB` in a finite group with exactly one factorisation `ab`, in index order.
pub fn unique_products_in_group(h: &FiniteGroup, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in a {
        for &y in b {
            *counts.entry(h.mul(x, y)).or_default() += 1;
        }
    }
    counts.into_iter().filter(|&(_, c)| c == 1).map(|(g, _)| g).collect()
}

/// Elements of `A + B` in `Z^k` with exactly one decomposition, in lexicographic order.
pub fn unique_products_free_abelian(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut counts: HashMap<Vec<i64>, usize> = HashMap::new();
    for x in a {
        for y in b {
            let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            *counts.entry(s).or_default() += 1;
        }
    }
    let mut out: Vec<Vec<i64>> = counts.into_iter().filter(|&(_, c)| c == 1).map(|(g, _)| g).collect();
    out.sort();
    out
}

/// `max A + max B` and `min A + min B` under the lexicographic order.
///
/// `Z^k` is ordered compatibly with addition, so both sums have exactly one
/// decomposition; they coincide only when `|A| = |B| = 1`.
pub fn lex_extreme_witnesses(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<(Vec<i64>, Vec<i64>)> {
    let add = |x: &Vec<i64>, y: &Vec<i64>| x.iter().zip(y).map(|(p, q)| p + q).collect::<Vec<i64>>();
    let hi = add(a.iter().max()?, b.iter().max()?);
    let lo = add(a.iter().min()?, b.iter().min()?);
    Some((hi, lo))
}

/// A group and two finite subsets, as accepted by [`unique_product_search`].
#[derive(Clone, Debug)]
pub enum ProductInput<'a> {
    Finite { group: &'a FiniteGroup, a: &'a [usize], b: &'a [usize] },
    FreeAbelian { a: &'a [Vec<i64>], b: &'a [Vec<i64>] },
}

/// An element of `AB` with a unique factorisation, rendered as a string, or `None` if there is none.
///
/// Free abelian inputs take the lexicographic fast path, which is checked
/// against the factorisation count.
pub fn unique_product_search(input: &ProductInput) -> Option<String> {
    match input {
        ProductInput::Finite { group, a, b } => {
            unique_products_in_group(group, a, b).first().map(|&g| group.name(g).to_string())
        }
        ProductInput::FreeAbelian { a, b } => {
            let counted = unique_products_free_abelian(a, b);
            let fast = lex_extreme_witnesses(a, b);
            if let Some((hi, lo)) = &fast {
                assert!(counted.contains(hi) && counted.contains(lo), "ordered extremes are unique products");
            }
            fast.map(|(hi, _)| format!("{hi:?}"))
        }
    }
}

/// Whether `AB` has two distinct elements with unique factorisations.
///
/// `None` when `|A| + |B| <= 2`, where the property does not apply.
pub fn strojnowski_check(input: &ProductInput) -> Option<bool> {
    match input {
        ProductInput::Finite { group, a, b } => {
            (a.len() + b.len() > 2).then(|| unique_products_in_group(group, a, b).len() >= 2)
        }
        ProductInput::FreeAbelian { a, b } => {
            (a.len() + b.len() > 2).then(|| unique_products_free_abelian(a, b).len() >= 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::steinberg::SteinbergAlgebra;
    use proptest::prelude::*;

    fn z2_ring(r: FiniteRing) -> TwistedGroupRing {
        TwistedGroupRing::untwisted(Arc::new(r), FiniteGroup::cyclic(2))
    }

    #[test]
    fn unit_counts() {
        let cap = 1 << 20;
        let gf3 = z2_ring(make_gf(3, 1, None).unwrap()).enumerate_units(cap).unwrap();
        assert_eq!((gf3.total(), gf3.nontrivial.len()), (4, 0));
        let z4 = z2_ring(make_zmod(4).unwrap()).enumerate_units(cap).unwrap();
        assert_eq!((z4.total(), z4.nontrivial.len()), (8, 4));
        let gf4 = z2_ring(make_gf(2, 2, None).unwrap()).enumerate_units(cap).unwrap();
        assert_eq!((gf4.total(), gf4.nontrivial.len()), (12, 6));
    }

    #[test]
    fn unit_scan_matches_pairwise_oracle() {
        for r in [make_gf(3, 1, None).unwrap(), make_zmod(4).unwrap(), make_gf(2, 2, None).unwrap(), make_zmod(6).unwrap()] {
            let t = z2_ring(r);
            let rep = t.enumerate_units(1 << 20).unwrap();
            let mut fast: Vec<Vec<Elem>> = rep.trivial.iter().chain(&rep.nontrivial).cloned().collect();
            fast.sort();
            let mut slow = t.enumerate_units_pairwise(1 << 20).unwrap();
            slow.sort();
            assert_eq!(fast, slow);
        }
        let t = TwistedGroupRing::untwisted(Arc::new(make_gf(2, 1, None).unwrap()), FiniteGroup::cyclic(3));
        assert!(t.enumerate_units(1000).unwrap().nontrivial.is_empty());
        let t = TwistedGroupRing::untwisted(Arc::new(make_gf(3, 1, None).unwrap()), FiniteGroup::klein4());
        assert!(!t.enumerate_units(1000).unwrap().nontrivial.is_empty());
    }

    #[test]
    fn twisted_field_extension_has_trivial_units() {
        // c(g,g) = 2 over GF(3) gives GF(3)[x]/(x^2 - 2) = GF(9).
        let h = FiniteGroup::cyclic(2);
        let ring = Arc::new(make_gf(3, 1, None).unwrap());
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&h));
        let c = Cocycle::from_entries(ring, g, &[(1, 1, 2)]).unwrap();
        let t = TwistedGroupRing::new(h, c).unwrap();
        let rep = t.enumerate_units(1000).unwrap();
        assert_eq!(rep.total(), 8);
        assert_eq!(rep.nontrivial.len(), 4);
    }

    #[test]
    fn decomposable_units() {
        let t = z2_ring(make_zmod(6).unwrap());
        let (a, b) = t.decomposable_unit(3, 1).unwrap();
        assert_eq!(a, vec![3, 4]);
        assert_eq!(t.mul(&a, &a), t.one());
        assert_eq!(b, vec![3, 4]);
        let (a, _) = t.decomposable_unit(4, 1).unwrap();
        assert_eq!(a, vec![4, 3]);
        assert!(z2_ring(make_gf(3, 1, None).unwrap()).decomposable_unit(1, 1).is_err());
    }

    #[test]
    fn nonreduced_units() {
        let t = z2_ring(make_zmod(4).unwrap());
        let (a, inv, extended) = t.nonreduced_unit(2, 1).unwrap();
        assert_eq!(a, vec![1, 2]);
        assert_eq!(inv, vec![1, 2]);
        assert!(!extended);
        let t8 = z2_ring(make_zmod(8).unwrap());
        let (a, inv, extended) = t8.nonreduced_unit(2, 1).unwrap();
        assert_eq!(a, vec![1, 6]);
        assert!(extended);
        assert_eq!(t8.mul(&a, &inv), t8.one());
        assert!(z2_ring(make_gf(5, 1, None).unwrap()).nonreduced_unit(1, 1).is_err());
    }

    #[test]
    fn unique_product_examples() {
        let z = |xs: &[i64]| xs.iter().map(|&x| vec![x]).collect::<Vec<_>>();
        assert_eq!(unique_products_free_abelian(&z(&[0, 1]), &z(&[0, 1])), vec![vec![0], vec![2]]);
        let a = z(&[0, 1]);
        let b = z(&[0, 1, 2]);
        let input = ProductInput::FreeAbelian { a: &a, b: &b };
        assert_eq!(strojnowski_check(&input), Some(true));
        assert_eq!(unique_products_free_abelian(&a, &b), vec![vec![0], vec![3]]);
        let s = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        assert!(unique_products_free_abelian(&s, &s).len() >= 2);
        let h = FiniteGroup::cyclic(2);
        let all = [0, 1];
        let fin = ProductInput::Finite { group: &h, a: &all, b: &all };
        assert_eq!(unique_product_search(&fin), None);
        let single = [1];
        let one = ProductInput::Finite { group: &h, a: &single, b: &single };
        assert_eq!(unique_product_search(&one), Some("e".to_string()));
        assert_eq!(strojnowski_check(&one), None);
    }

    #[test]
    fn matches_steinberg_convolution() {
        let h = FiniteGroup::klein4();
        let ring = Arc::new(make_gf(3, 1, None).unwrap());
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&h));
        // The coboundary of b = (1, 2, 1, 2) is a nontrivial-looking cocycle.
        let c = Cocycle::coboundary(ring, g, &[1, 2, 1, 2]).unwrap();
        let t = TwistedGroupRing::new(h, c.clone()).unwrap();
        let s = SteinbergAlgebra::new(c).unwrap();
        let mut all = Vec::new();
        for_each_vector(t.ring(), 4, |v| all.push(v.to_vec()));
        for f in all.iter().step_by(7) {
            for g in all.iter().step_by(5) {
                assert_eq!(t.mul(f, g), s.convolve_coeffs(f, g));
            }
        }
    }

    proptest! {
        #[test]
        fn units_form_a_group(idx in 0usize..4) {
            let rings = [make_gf(3, 1, None).unwrap(), make_zmod(4).unwrap(), make_gf(2, 2, None).unwrap(), make_gf(5, 1, None).unwrap()];
            let t = z2_ring(rings[idx].clone());
            let rep = t.enumerate_units(1 << 20).unwrap();
            let units: Vec<Vec<Elem>> = rep.trivial.iter().chain(&rep.nontrivial).cloned().collect();
            prop_assert!(units.contains(&t.one()));
            for u in &units {
                for v in &units {
                    prop_assert!(units.contains(&t.mul(u, v)));
                }
            }
            if rep.nontrivial.is_empty() {
                prop_assert_eq!(rep.trivial.len(), t.ring().units().len() * 2);
            }
        }

        #[test]
        fn free_abelian_always_has_unique_products(
            a in prop::collection::btree_set(prop::collection::vec(-5i64..5, 2), 1..6),
            b in prop::collection::btree_set(prop::collection::vec(-5i64..5, 2), 1..6),
        ) {
            let a: Vec<Vec<i64>> = a.into_iter().collect();
            let b: Vec<Vec<i64>> = b.into_iter().collect();
            let input = ProductInput::FreeAbelian { a: &a, b: &b };
            prop_assert!(unique_product_search(&input).is_some());
            if let Some(two) = strojnowski_check(&input) {
                prop_assert!(two);
            }
        }
    }
}
