//! Finite groupoids.
//!
//! Composition follows the convention that `αβ` is defined exactly when
//! `s(α) = r(β)`. Every subset of a finite discrete groupoid is compact and
//! open, so bisections are just arrow sets on which `s` and `r` are injective.

mod group;

pub use group::FiniteGroup;

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    rng: Vec<usize>,
    compose: Vec<Option<usize>>,
    inv: Vec<usize>,
    unit_at: Vec<usize>,
}

/// The isotropy arrows, grouped by the object they sit over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropySet {
    pub arrows: Vec<usize>,
    pub fibres: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from complete tables and validates it.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        rng: Vec<usize>,
        compose: Vec<Option<usize>>,
        inv: Vec<usize>,
        unit_at: Vec<usize>,
    ) -> Result<Self> {
        let g = FiniteGroupoid::new_unchecked(objects, arrows, src, rng, compose, inv, unit_at);
        g.validate().map_err(Error::Groupoid)?;
        Ok(g)
    }

    /// Assembles a groupoid without checking anything; pair with [`validate`](Self::validate).
    pub fn new_unchecked(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        rng: Vec<usize>,
        compose: Vec<Option<usize>>,
        inv: Vec<usize>,
        unit_at: Vec<usize>,
    ) -> Self {
        FiniteGroupoid { objects, arrows, src, rng, compose, inv, unit_at }
    }

    /// Builds from arrows and a composition table, deriving units and inverses.
    ///
    /// The unit at `x` is the idempotent arrow over `x`; inverses are found by search.
    pub fn from_composition(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        rng: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<Self> {
        let k = arrows.len();
        if src.len() != k || rng.len() != k || compose.len() != k * k {
            return Err(Error::Groupoid(Violation::new("table sizes", Vec::<String>::new())));
        }
        let mut unit_at = Vec::with_capacity(objects.len());
        for x in 0..objects.len() {
            let u = (0..k)
                .find(|&a| src[a] == x && rng[a] == x && compose[a * k + a] == Some(a))
                .ok_or_else(|| Error::Groupoid(Violation::new("unit exists", [objects[x].clone()])))?;
            unit_at.push(u);
        }
        let mut inv = Vec::with_capacity(k);
        for a in 0..k {
            let b = (0..k)
                .find(|&b| {
                    compose[b * k + a] == Some(unit_at[src[a]]) && compose[a * k + b] == Some(unit_at[rng[a]])
                })
                .ok_or_else(|| Error::Groupoid(Violation::new("inverse exists", [arrows[a].clone()])))?;
            inv.push(b);
        }
        FiniteGroupoid::new(objects, arrows, src, rng, compose, inv, unit_at)
    }

    /// Checks every groupoid axiom and reports the first failure with witnesses.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let k = self.arrows.len();
        let no = self.objects.len();
        if self.src.len() != k
            || self.rng.len() != k
            || self.inv.len() != k
            || self.compose.len() != k * k
            || self.unit_at.len() != no
        {
            return Err(Violation::new("table sizes", Vec::<String>::new()));
        }
        if let Some(a) = (0..k).find(|&a| self.src[a] >= no || self.rng[a] >= no || self.inv[a] >= k) {
            return Err(Violation::new("references in range", [self.arrows[a].clone()]));
        }
        if let Some(x) = (0..no).find(|&x| self.unit_at[x] >= k) {
            return Err(Violation::new("references in range", [self.objects[x].clone()]));
        }
        let name = |a: usize| self.arrows[a].clone();
        for a in 0..k {
            for b in 0..k {
                let composable = self.src[a] == self.rng[b];
                match self.compose[a * k + b] {
                    Some(_) if !composable => {
                        return Err(Violation::new("composition defined only on composable pairs", [name(a), name(b)]))
                    }
                    None if composable => {
                        return Err(Violation::new("composition defined on composable pairs", [name(a), name(b)]))
                    }
                    Some(c) if c >= k => return Err(Violation::new("references in range", [name(a), name(b)])),
                    Some(c) if self.src[c] != self.src[b] || self.rng[c] != self.rng[a] => {
                        return Err(Violation::new("source and range of a product", [name(a), name(b)]))
                    }
                    _ => {}
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                let Some(ab) = self.compose[a * k + b] else { continue };
                for c in 0..k {
                    let Some(bc) = self.compose[b * k + c] else { continue };
                    if self.compose[ab * k + c] != self.compose[a * k + bc] {
                        return Err(Violation::new("associativity", [name(a), name(b), name(c)]));
                    }
                }
            }
        }
        for x in 0..no {
            let u = self.unit_at[x];
            if self.src[u] != x || self.rng[u] != x {
                return Err(Violation::new("unit sits over its object", [self.objects[x].clone()]));
            }
        }
        for a in 0..k {
            let (s, r) = (self.unit_at[self.src[a]], self.unit_at[self.rng[a]]);
            if self.compose[r * k + a] != Some(a) || self.compose[a * k + s] != Some(a) {
                return Err(Violation::new("units are identities", [name(a)]));
            }
            let b = self.inv[a];
            if self.compose[b * k + a] != Some(s) || self.compose[a * k + b] != Some(r) {
                return Err(Violation::new("inverse", [name(a)]));
            }
        }
        Ok(())
    }

    /// The pair groupoid on `{1..n}`: arrow `(i,j)` goes from `j` to `i`.
    pub fn full_relation(n: usize) -> Self {
        assert!(n >= 1, "full_relation needs n >= 1");
        let objects = (1..=n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::with_capacity(n * n);
        let mut src = Vec::with_capacity(n * n);
        let mut rng = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                arrows.push(format!("({},{})", i + 1, j + 1));
                src.push(j);
                rng.push(i);
            }
        }
        let k = n * n;
        let mut compose = vec![None; k * k];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    compose[(i * n + j) * k + (j * n + l)] = Some(i * n + l);
                }
            }
        }
        let inv = (0..k).map(|a| (a % n) * n + a / n).collect();
        let unit_at = (0..n).map(|i| i * n + i).collect();
        FiniteGroupoid::new(objects, arrows, src, rng, compose, inv, unit_at).expect("pair groupoid is valid")
    }

    /// A group as a one-object groupoid. Arrow indices match group indices.
    pub fn group_as_groupoid(h: &FiniteGroup) -> Self {
        let k = h.order();
        let compose = (0..k * k).map(|i| Some(h.mul(i / k, i % k))).collect();
        FiniteGroupoid::new(
            vec!["*".to_string()],
            h.names().to_vec(),
            vec![0; k],
            vec![0; k],
            compose,
            (0..k).map(|a| h.inv(a)).collect(),
            vec![h.identity()],
        )
        .expect("group is a groupoid")
    }

    pub fn empty() -> Self {
        FiniteGroupoid::new_unchecked(vec![], vec![], vec![], vec![], vec![], vec![], vec![])
    }

    /// Disjoint union; names get a `#1`/`#2` suffix only where they would collide.
    pub fn disjoint_union(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Self {
        fn tagged(a: &[String], b: &[String]) -> (Vec<String>, Vec<String>) {
            let sa: HashSet<&String> = a.iter().collect();
            if b.iter().any(|x| sa.contains(x)) {
                (a.iter().map(|x| format!("{x}#1")).collect(), b.iter().map(|x| format!("{x}#2")).collect())
            } else {
                (a.to_vec(), b.to_vec())
            }
        }
        let (o1, o2) = tagged(&g1.objects, &g2.objects);
        let (a1, a2) = tagged(&g1.arrows, &g2.arrows);
        let (n1, k1, k2) = (g1.objects.len(), g1.arrows.len(), g2.arrows.len());
        let k = k1 + k2;
        let mut compose = vec![None; k * k];
        for a in 0..k1 {
            for b in 0..k1 {
                compose[a * k + b] = g1.compose(a, b);
            }
        }
        for a in 0..k2 {
            for b in 0..k2 {
                compose[(a + k1) * k + b + k1] = g2.compose(a, b).map(|c| c + k1);
            }
        }
        FiniteGroupoid::new(
            o1.into_iter().chain(o2).collect(),
            a1.into_iter().chain(a2).collect(),
            g1.src.iter().copied().chain(g2.src.iter().map(|&x| x + n1)).collect(),
            g1.rng.iter().copied().chain(g2.rng.iter().map(|&x| x + n1)).collect(),
            compose,
            g1.inv.iter().copied().chain(g2.inv.iter().map(|&a| a + k1)).collect(),
            g1.unit_at.iter().copied().chain(g2.unit_at.iter().map(|&a| a + k1)).collect(),
        )
        .expect("disjoint union of groupoids is a groupoid")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    #[inline]
    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    #[inline]
    pub fn rng(&self, a: usize) -> usize {
        self.rng[a]
    }

    #[inline]
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.arrows.len() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn unit_at(&self, x: usize) -> usize {
        self.unit_at[x]
    }

    pub fn is_unit_arrow(&self, a: usize) -> bool {
        self.unit_at[self.src[a]] == a
    }

    pub fn units(&self) -> Vec<usize> {
        self.unit_at.clone()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.arrows[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a == name.trim())
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|a| a == name.trim())
    }

    /// All `(α, β, αβ)`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize, usize)> {
        let k = self.num_arrows();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if let Some(c) = self.compose(a, b) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    pub fn isotropy(&self) -> IsotropySet {
        let arrows: Vec<usize> = (0..self.num_arrows()).filter(|&a| self.src[a] == self.rng[a]).collect();
        let mut fibres = vec![Vec::new(); self.num_objects()];
        for &a in &arrows {
            fibres[self.src[a]].push(a);
        }
        for fibre in &fibres {
            let set: HashSet<usize> = fibre.iter().copied().collect();
            for &a in fibre {
                assert!(set.contains(&self.inv[a]), "isotropy fibre closed under inverse");
                for &b in fibre {
                    let c = self.compose(a, b).expect("isotropy arrows over one object compose");
                    assert!(set.contains(&c), "isotropy fibre closed under composition");
                }
            }
        }
        IsotropySet { arrows, fibres }
    }

    /// The isotropy group at `x`, with the arrow each group element stands for.
    pub fn fibre_group(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let mut fibre = self.isotropy().fibres[x].clone();
        // Put the unit first so the group identity is element 0.
        fibre.sort_by_key(|&a| (a != self.unit_at[x], a));
        let n = fibre.len();
        let pos = |a: usize| fibre.iter().position(|&b| b == a).expect("closed fibre");
        let mut table = Vec::with_capacity(n * n);
        for &a in &fibre {
            for &b in &fibre {
                table.push(pos(self.compose(a, b).expect("fibre composes")));
            }
        }
        let names = fibre.iter().map(|&a| self.arrows[a].clone()).collect();
        (FiniteGroup::from_table(names, table).expect("isotropy fibre is a group"), fibre)
    }

    /// Isotropy equals the unit space.
    pub fn is_principal(&self) -> bool {
        self.isotropy().arrows.iter().all(|&a| self.is_unit_arrow(a))
    }

    /// The interior of the isotropy equals the unit space.
    ///
    /// Finite groupoids carry the discrete topology, so this agrees with
    /// [`is_principal`](Self::is_principal); it is computed separately so that
    /// agreement is something tests check rather than assume.
    pub fn is_effective(&self) -> bool {
        let iso: BTreeSet<usize> = self.isotropy().arrows.into_iter().collect();
        let interior = discrete_interior(&iso);
        let units: BTreeSet<usize> = self.unit_at.iter().copied().collect();
        interior == units
    }

    /// `s` and `r` are both injective on `set`.
    pub fn is_bisection(&self, set: &[usize]) -> bool {
        let mut ss = HashSet::new();
        let mut rs = HashSet::new();
        let distinct: BTreeSet<usize> = set.iter().copied().collect();
        distinct.iter().all(|&a| ss.insert(self.src[a]) && rs.insert(self.rng[a]))
    }

    /// The product set `UV = {αβ : α ∈ U, β ∈ V, s(α) = r(β)}`.
    pub fn product_set(&self, u: &[usize], v: &[usize]) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &a in u {
            for &b in v {
                if let Some(c) = self.compose(a, b) {
                    out.insert(c);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Union of the basic open sets (singletons) contained in `set`.
fn discrete_interior(set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut interior = BTreeSet::new();
    for &a in set {
        let basic = [a];
        if basic.iter().all(|x| set.contains(x)) {
            interior.extend(basic);
        }
    }
    interior
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn samples() -> Vec<FiniteGroupoid> {
        let z2 = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2));
        vec![
            FiniteGroupoid::full_relation(1),
            FiniteGroupoid::full_relation(2),
            FiniteGroupoid::full_relation(3),
            z2.clone(),
            FiniteGroupoid::group_as_groupoid(&FiniteGroup::klein4()),
            FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(3)),
            FiniteGroupoid::disjoint_union(&FiniteGroupoid::full_relation(2), &z2),
            FiniteGroupoid::disjoint_union(&z2, &z2),
        ]
    }

    #[test]
    fn full_relation_shape() {
        let g1 = FiniteGroupoid::full_relation(1);
        assert_eq!((g1.num_objects(), g1.num_arrows()), (1, 1));
        let g3 = FiniteGroupoid::full_relation(3);
        assert_eq!(g3.num_arrows(), 9);
        assert!(g3.is_principal());
        assert!(g3.isotropy().fibres.iter().all(|f| f.len() == 1));
        let g2 = FiniteGroupoid::full_relation(2);
        let a = g2.arrow_index("(1,2)").unwrap();
        assert_eq!(g2.arrow_name(g2.inv(a)), "(2,1)");
        assert_eq!(g2.src(a), 1);
        assert_eq!(g2.rng(a), 0);
    }

    #[test]
    fn group_groupoids() {
        let z2 = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2));
        assert_eq!((z2.num_objects(), z2.num_arrows()), (1, 2));
        assert_eq!(z2.isotropy().arrows.len(), 2);
        assert!(!z2.is_principal());
        assert!(!z2.is_effective());
        let triv = FiniteGroupoid::group_as_groupoid(&FiniteGroup::trivial());
        assert_eq!((triv.num_objects(), triv.num_arrows()), (1, 1));
        let v4 = FiniteGroupoid::group_as_groupoid(&FiniteGroup::klein4());
        assert_eq!((v4.num_objects(), v4.num_arrows()), (1, 4));
    }

    #[test]
    fn disjoint_unions() {
        let z2 = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2));
        let g = FiniteGroupoid::disjoint_union(&FiniteGroupoid::full_relation(2), &z2);
        assert_eq!((g.num_objects(), g.num_arrows()), (3, 6));
        assert!(!g.is_principal());
        let sizes: Vec<usize> = g.isotropy().fibres.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 1, 2]);
        let same = FiniteGroupoid::disjoint_union(&z2, &FiniteGroupoid::empty());
        assert_eq!(same, z2);
        let twice = FiniteGroupoid::disjoint_union(&z2, &z2);
        assert_eq!(twice.arrow_names()[2], "e#2");
    }

    #[test]
    fn validate_reports_defects() {
        let g = FiniteGroupoid::full_relation(2);
        let mut broken = g.clone();
        // (1,1).(1,2) should be (1,2); redirect to (1,1).
        broken.compose[0 * 4 + 1] = Some(0);
        let v = broken.validate().unwrap_err();
        assert!(v.axiom.contains("source and range"), "{v}");

        let mut broken = g.clone();
        broken.inv[1] = 1;
        assert_eq!(broken.validate().unwrap_err().axiom, "inverse");

        // Associativity: swap two products in Z/3 so only associativity breaks.
        let z3 = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(3));
        let mut broken = z3.clone();
        broken.compose[1 * 3 + 1] = Some(0);
        broken.compose[2 * 3 + 2] = Some(2);
        assert!(broken.validate().is_err());
    }

    #[test]
    fn from_composition_derives_units_and_inverses() {
        let g = FiniteGroupoid::full_relation(3);
        let rebuilt = FiniteGroupoid::from_composition(
            g.objects.clone(),
            g.arrows.clone(),
            g.src.clone(),
            g.rng.clone(),
            g.compose.clone(),
        )
        .unwrap();
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn principal_and_effective_agree() {
        for g in samples() {
            assert!(g.validate().is_ok());
            assert_eq!(g.is_principal(), g.is_effective());
            if g.is_principal() {
                assert!(g.is_effective());
            }
        }
    }

    #[test]
    fn bisections() {
        let g = FiniteGroupoid::full_relation(2);
        assert!(g.is_bisection(&[1, 2]));
        assert!(!g.is_bisection(&[0, 1]));
        assert!(g.is_bisection(&[]));
    }

    proptest! {
        #[test]
        fn inverse_laws(idx in 0usize..8) {
            let g = &samples()[idx];
            for a in 0..g.num_arrows() {
                prop_assert_eq!(g.inv(g.inv(a)), a);
                for b in 0..g.num_arrows() {
                    if let Some(c) = g.compose(a, b) {
                        prop_assert_eq!(g.compose(g.inv(b), g.inv(a)), Some(g.inv(c)));
                    }
                }
            }
        }
    }
}
