//! Discrete `R`-twists: normalised 2-cocycles and explicit central extensions.
//!
//! The cocycle form is the working representation. [`ExplicitTwist`] spells
//! out the extension `G^(0) × R^× → Σ → G` as actual groupoids so the twist
//! axioms can be checked directly and so reconstructed twists can be compared.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::finring::{Elem, FiniteRing};
use crate::groupoid::{FiniteGroup, FiniteGroupoid};

/// A map `G^(2) → R^×`, stored as a full `k × k` table whose non-composable entries are `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    ring: Arc<FiniteRing>,
    groupoid: Arc<FiniteGroupoid>,
    values: Vec<Elem>,
}

impl Cocycle {
    pub fn trivial(ring: Arc<FiniteRing>, groupoid: Arc<FiniteGroupoid>) -> Self {
        let k = groupoid.num_arrows();
        let one = ring.one();
        Cocycle { ring, groupoid, values: vec![one; k * k] }
    }

    /// Starts from the trivial cocycle and overrides the listed pairs. Nothing is checked
    /// beyond composability; call [`check`](Self::check) afterwards.
    pub fn from_entries(
        ring: Arc<FiniteRing>,
        groupoid: Arc<FiniteGroupoid>,
        entries: &[(usize, usize, Elem)],
    ) -> Result<Self> {
        let mut c = Cocycle::trivial(ring, groupoid);
        for &(a, b, v) in entries {
            if c.groupoid.compose(a, b).is_none() {
                return Err(Error::Cocycle(Violation::new(
                    "value on a non-composable pair",
                    [c.groupoid.arrow_name(a).to_string(), c.groupoid.arrow_name(b).to_string()],
                )));
            }
            let k = c.groupoid.num_arrows();
            c.values[a * k + b] = v;
        }
        Ok(c)
    }

    /// `δb(α,β) = b(α) b(β) b(αβ)^{-1}` for `b: G → R^×`.
    pub fn coboundary(ring: Arc<FiniteRing>, groupoid: Arc<FiniteGroupoid>, b: &[Elem]) -> Result<Self> {
        if b.len() != groupoid.num_arrows() || b.iter().any(|&x| !ring.is_unit(x)) {
            return Err(Error::InvalidArgument("coboundary needs one unit per arrow".into()));
        }
        let mut c = Cocycle::trivial(ring, groupoid);
        let k = c.groupoid.num_arrows();
        for (a, bb, ab) in c.groupoid.composable_pairs() {
            let r = &c.ring;
            c.values[a * k + bb] = r.mul(r.mul(b[a], b[bb]), r.inv(b[ab]).expect("unit"));
        }
        Ok(c)
    }

    /// Pointwise product, the group operation on cocycles.
    pub fn times(&self, other: &Cocycle) -> Result<Cocycle> {
        if self.groupoid != other.groupoid || self.ring != other.ring {
            return Err(Error::MismatchedTwists);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| self.ring.mul(a, b)).collect();
        Ok(Cocycle { ring: self.ring.clone(), groupoid: self.groupoid.clone(), values })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> Elem {
        self.values[a * self.groupoid.num_arrows() + b]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == self.ring.one())
    }

    /// Unit values, the cocycle identity on every composable triple, and normalisation.
    pub fn check(&self) -> std::result::Result<(), Violation> {
        let g = &*self.groupoid;
        let r = &*self.ring;
        let name = |a: usize| g.arrow_name(a).to_string();
        let pairs = g.composable_pairs();
        if let Some(&(a, b, _)) = pairs.iter().find(|&&(a, b, _)| !r.is_unit(self.value(a, b))) {
            return Err(Violation::new("values are units", [name(a), name(b)]));
        }
        for a in 0..g.num_arrows() {
            let (ra, sa) = (g.unit_at(g.rng(a)), g.unit_at(g.src(a)));
            if self.value(ra, a) != r.one() {
                return Err(Violation::new("normalised", [name(ra), name(a)]));
            }
            if self.value(a, sa) != r.one() {
                return Err(Violation::new("normalised", [name(a), name(sa)]));
            }
        }
        for &(a, b, ab) in &pairs {
            for c in 0..g.num_arrows() {
                let Some(bc) = g.compose(b, c) else { continue };
                let lhs = r.mul(self.value(a, b), self.value(ab, c));
                let rhs = r.mul(self.value(a, bc), self.value(b, c));
                if lhs != rhs {
                    return Err(Violation::new("2-cocycle identity", [name(a), name(b), name(c)]));
                }
            }
        }
        Ok(())
    }
}

/// Runs [`Cocycle::check`], wrapping failures as [`Error::Cocycle`].
pub fn check_cocycle(c: &Cocycle) -> Result<()> {
    c.check().map_err(Error::Cocycle)
}

/// The ring's units with `1` first; fibre points of a twist are listed in this order.
pub fn ordered_units(ring: &FiniteRing) -> Vec<Elem> {
    let mut u = ring.units();
    u.sort_by_key(|&t| (t != ring.one(), t));
    u
}

/// A central extension `G^(0) × R^× → Σ → G` given by explicit groupoids and maps.
#[derive(Clone, Debug)]
pub struct ExplicitTwist {
    pub ring: Arc<FiniteRing>,
    pub total: FiniteGroupoid,
    pub base: Arc<FiniteGroupoid>,
    /// `units[i]` is the scalar used in the `i`-th slot of `inj`.
    pub units: Vec<Elem>,
    /// `inj[x * units.len() + i]` is the arrow `i(x, units[i])` of Σ.
    pub inj: Vec<usize>,
    /// Arrow of Σ to arrow of G.
    pub proj: Vec<usize>,
}

impl ExplicitTwist {
    fn unit_slot(&self, t: Elem) -> usize {
        self.units.iter().position(|&u| u == t).expect("scalar is a ring unit")
    }

    /// `i(x, t)`.
    pub fn inj(&self, x: usize, t: Elem) -> usize {
        self.inj[x * self.units.len() + self.unit_slot(t)]
    }

    /// The object of G under the Σ-object `y`.
    pub fn object_below(&self, y: usize) -> usize {
        self.base.src(self.proj[self.total.unit_at(y)])
    }

    /// `t · σ = i(r(σ), t) σ`.
    pub fn act(&self, t: Elem, sigma: usize) -> usize {
        let x = self.object_below(self.total.rng(sigma));
        self.total.compose(self.inj(x, t), sigma).expect("i(r(σ), t) composes with σ")
    }

    /// `q^{-1}(γ)`, in arrow order.
    pub fn fibre(&self, gamma: usize) -> Vec<usize> {
        (0..self.total.num_arrows()).filter(|&s| self.proj[s] == gamma).collect()
    }

    /// The section picking the Σ-unit over each unit arrow and the least-index point elsewhere.
    pub fn canonical_section(&self) -> Vec<usize> {
        (0..self.base.num_arrows())
            .map(|g| {
                let fibre = self.fibre(g);
                if self.base.is_unit_arrow(g) {
                    *fibre.iter().find(|&&s| self.total.is_unit_arrow(s)).unwrap_or(&fibre[0])
                } else {
                    fibre[0]
                }
            })
            .collect()
    }
}

/// `Σ = G × R^×` with `(α,t)(β,u) = (αβ, c(α,β)tu)`. Arrow `(γ,t)` has index
/// `γ·|R^×| + i` where `t` is the `i`-th entry of [`ordered_units`].
pub fn twist_from_cocycle(c: &Cocycle) -> Result<ExplicitTwist> {
    check_cocycle(c)?;
    let r = &*c.ring;
    let g = &*c.groupoid;
    let units = ordered_units(r);
    let m = units.len();
    let slot = |t: Elem| units.iter().position(|&u| u == t).expect("unit");
    let k = g.num_arrows();
    let n = k * m;
    let mut arrows = Vec::with_capacity(n);
    let mut src = Vec::with_capacity(n);
    let mut rng = Vec::with_capacity(n);
    let mut inv = Vec::with_capacity(n);
    for a in 0..k {
        for &t in &units {
            arrows.push(format!("({},{})", g.arrow_name(a), r.label(t)));
            src.push(g.src(a));
            rng.push(g.rng(a));
            let ai = g.inv(a);
            let ti = r.mul(r.inv(c.value(a, ai)).expect("unit"), r.inv(t).expect("unit"));
            inv.push(ai * m + slot(ti));
        }
    }
    let mut compose = vec![None; n * n];
    for (a, b, ab) in g.composable_pairs() {
        for (i, &t) in units.iter().enumerate() {
            for (j, &u) in units.iter().enumerate() {
                let v = r.mul(c.value(a, b), r.mul(t, u));
                compose[(a * m + i) * n + b * m + j] = Some(ab * m + slot(v));
            }
        }
    }
    let unit_at = (0..g.num_objects()).map(|x| g.unit_at(x) * m).collect();
    let total = FiniteGroupoid::new(g.object_names().to_vec(), arrows, src, rng, compose, inv, unit_at)?;
    let inj = (0..g.num_objects()).flat_map(|x| (0..m).map(move |i| g.unit_at(x) * m + i)).collect();
    let proj = (0..n).map(|s| s / m).collect();
    Ok(ExplicitTwist { ring: c.ring.clone(), total, base: c.groupoid.clone(), units, inj, proj })
}

/// Verifies the homomorphism, exactness, centrality and fibre-size conditions.
pub fn check_twist_axioms(t: &ExplicitTwist) -> std::result::Result<(), Violation> {
    let sig = &t.total;
    let g = &*t.base;
    let r = &*t.ring;
    sig.validate()?;
    g.validate()?;
    let m = t.units.len();
    let expected: HashSet<Elem> = r.units().into_iter().collect();
    if t.units.iter().copied().collect::<HashSet<_>>() != expected || t.units.len() != expected.len() {
        return Err(Violation::new("scalar slots are the ring units", Vec::<String>::new()));
    }
    if t.proj.len() != sig.num_arrows() || t.inj.len() != g.num_objects() * m {
        return Err(Violation::new("map sizes", Vec::<String>::new()));
    }
    if t.proj.iter().any(|&p| p >= g.num_arrows()) || t.inj.iter().any(|&i| i >= sig.num_arrows()) {
        return Err(Violation::new("map references in range", Vec::<String>::new()));
    }
    let sname = |s: usize| sig.arrow_name(s).to_string();
    // q is a homomorphism restricting to a bijection of unit spaces.
    for (a, b, ab) in sig.composable_pairs() {
        if g.compose(t.proj[a], t.proj[b]) != Some(t.proj[ab]) {
            return Err(Violation::new("q is a homomorphism", [sname(a), sname(b)]));
        }
    }
    let mut seen = HashSet::new();
    for y in 0..sig.num_objects() {
        let p = t.proj[sig.unit_at(y)];
        if !g.is_unit_arrow(p) || !seen.insert(p) {
            return Err(Violation::new("q is a bijection of unit spaces", [sig.object_name(y).to_string()]));
        }
    }
    if seen.len() != g.num_objects() {
        return Err(Violation::new("q is a bijection of unit spaces", Vec::<String>::new()));
    }
    let below: Vec<usize> = (0..sig.num_objects()).map(|y| t.object_below(y)).collect();
    let mut hit = vec![false; g.num_arrows()];
    for &p in &t.proj {
        hit[p] = true;
    }
    if let Some(a) = hit.iter().position(|&h| !h) {
        return Err(Violation::new("q is surjective", [g.arrow_name(a).to_string()]));
    }
    // i is an injective homomorphism from G^(0) × R^×.
    let inj_set: HashSet<usize> = t.inj.iter().copied().collect();
    if inj_set.len() != t.inj.len() {
        return Err(Violation::new("i is injective", Vec::<String>::new()));
    }
    for x in 0..g.num_objects() {
        for (i, &a) in t.units.iter().enumerate() {
            for (j, &b) in t.units.iter().enumerate() {
                let ab = r.mul(a, b);
                let k = t.units.iter().position(|&u| u == ab).expect("units closed");
                let (si, sj) = (t.inj[x * m + i], t.inj[x * m + j]);
                if sig.compose(si, sj) != Some(t.inj[x * m + k]) {
                    return Err(Violation::new("i is a homomorphism", [sname(si), sname(sj)]));
                }
            }
        }
        // Exactness: the image of {x} × R^× is the fibre over the unit at x.
        let image: HashSet<usize> = t.inj[x * m..(x + 1) * m].iter().copied().collect();
        let fibre: HashSet<usize> = t.fibre(g.unit_at(x)).into_iter().collect();
        if image != fibre {
            return Err(Violation::new("exactness at the unit space", [g.object_name(x).to_string()]));
        }
        if t.inj[x * m..(x + 1) * m].iter().any(|&s| below[sig.src(s)] != x) {
            return Err(Violation::new("i covers the identity on objects", [g.object_name(x).to_string()]));
        }
    }
    // Centrality.
    for s in 0..sig.num_arrows() {
        for (i, _) in t.units.iter().enumerate() {
            let left = sig.compose(t.inj[below[sig.rng(s)] * m + i], s);
            let right = sig.compose(s, t.inj[below[sig.src(s)] * m + i]);
            if left.is_none() || left != right {
                return Err(Violation::new("image of i is central", [sname(s), r.label(t.units[i]).to_string()]));
            }
        }
    }
    for a in 0..g.num_arrows() {
        if t.fibre(a).len() != m {
            return Err(Violation::new("fibres have |R^×| points", [g.arrow_name(a).to_string()]));
        }
    }
    Ok(())
}

/// The cocycle `c` with `ζ(α)ζ(β) = c(α,β)·ζ(αβ)`.
pub fn cocycle_from_section(t: &ExplicitTwist, zeta: &[usize]) -> Result<Cocycle> {
    let g = &*t.base;
    let sig = &t.total;
    if zeta.len() != g.num_arrows() {
        return Err(Error::InvalidArgument("section must assign one point per arrow".into()));
    }
    for (a, &s) in zeta.iter().enumerate() {
        if s >= sig.num_arrows() || t.proj[s] != a {
            return Err(Error::InvalidArgument(format!("section is not a lift at {}", g.arrow_name(a))));
        }
        if g.is_unit_arrow(a) && !sig.is_unit_arrow(s) {
            return Err(Error::InvalidArgument(format!("section does not preserve the unit {}", g.arrow_name(a))));
        }
    }
    let mut entries = Vec::new();
    for (a, b, ab) in g.composable_pairs() {
        let prod = sig.compose(zeta[a], zeta[b]).expect("lifts of composable arrows compose");
        let v = t
            .units
            .iter()
            .copied()
            .find(|&u| t.act(u, zeta[ab]) == prod)
            .ok_or_else(|| Error::Twist(Violation::new("fibres are R^×-orbits", [g.arrow_name(ab).to_string()])))?;
        entries.push((a, b, v));
    }
    let c = Cocycle::from_entries(t.ring.clone(), t.base.clone(), &entries)?;
    check_cocycle(&c)?;
    Ok(c)
}

/// The restriction of a twist's cocycle to the isotropy group at one object.
#[derive(Clone, Debug)]
pub struct FibreCocycle {
    pub group: FiniteGroup,
    /// The arrow of G each group element stands for.
    pub arrows: Vec<usize>,
    /// A cocycle on the one-object groupoid of `group`.
    pub cocycle: Cocycle,
}

/// The cocycle on `I_x` obtained from the canonical section.
pub fn fibre_cocycle(t: &ExplicitTwist, x: usize) -> Result<FibreCocycle> {
    let c = cocycle_from_section(t, &t.canonical_section())?;
    Ok(restrict_to_fibre(&c, x))
}

/// Restricts `c` to the isotropy group at `x`.
pub fn restrict_to_fibre(c: &Cocycle, x: usize) -> FibreCocycle {
    let (group, arrows) = c.groupoid().fibre_group(x);
    let hg = Arc::new(FiniteGroupoid::group_as_groupoid(&group));
    let mut entries = Vec::new();
    for (i, &a) in arrows.iter().enumerate() {
        for (j, &b) in arrows.iter().enumerate() {
            entries.push((i, j, c.value(a, b)));
        }
    }
    let cocycle = Cocycle::from_entries(c.ring().clone(), hg, &entries).expect("group pairs compose");
    FibreCocycle { group, arrows, cocycle }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use proptest::prelude::*;

    fn z2_over(ring: FiniteRing, cgg: Elem) -> Cocycle {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        Cocycle::from_entries(Arc::new(ring), g, &[(1, 1, cgg)]).unwrap()
    }

    #[test]
    fn cocycle_checks() {
        let c = z2_over(make_gf(5, 1, None).unwrap(), 4);
        assert!(c.check().is_ok());
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        let bad = Cocycle::from_entries(Arc::new(make_gf(5, 1, None).unwrap()), g.clone(), &[(0, 1, 2)]).unwrap();
        let v = bad.check().unwrap_err();
        assert_eq!(v.axiom, "normalised");
        assert_eq!(v.witnesses, vec!["e", "g"]);
        let nonunit = Cocycle::from_entries(Arc::new(make_zmod(4).unwrap()), g, &[(1, 1, 2)]).unwrap();
        assert_eq!(nonunit.check().unwrap_err().axiom, "values are units");
    }

    #[test]
    fn explicit_twist_from_cocycle() {
        let g = Arc::new(FiniteGroupoid::full_relation(2));
        let c = Cocycle::trivial(Arc::new(make_gf(3, 1, None).unwrap()), g);
        let t = twist_from_cocycle(&c).unwrap();
        assert_eq!(t.total.num_arrows(), 8);
        assert!(check_twist_axioms(&t).is_ok());
        for x in 0..2 {
            for &u in &t.units {
                let p = t.proj[t.inj(x, u)];
                assert_eq!(p, t.base.unit_at(x));
            }
        }

        let c = z2_over(make_gf(5, 1, None).unwrap(), 4);
        let t = twist_from_cocycle(&c).unwrap();
        let m = t.units.len();
        let g1 = 1 * m;
        let sq = t.total.compose(g1, g1).unwrap();
        assert_eq!(t.proj[sq], 0);
        assert_eq!(t.units[sq % m], 4);
    }

    #[test]
    fn mutated_twists_fail() {
        let c = z2_over(make_gf(3, 1, None).unwrap(), 2);
        let t = twist_from_cocycle(&c).unwrap();
        let mut bad = t.clone();
        bad.proj[3] = 0;
        assert!(check_twist_axioms(&bad).is_err());

        let mut bad = t.clone();
        let n = bad.total.num_arrows();
        let mut compose: Vec<Option<usize>> = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                compose.push(bad.total.compose(a, b));
            }
        }
        compose[2 * n + 2] = Some(0);
        bad.total = FiniteGroupoid::new_unchecked(
            bad.total.object_names().to_vec(),
            bad.total.arrow_names().to_vec(),
            (0..n).map(|a| t.total.src(a)).collect(),
            (0..n).map(|a| t.total.rng(a)).collect(),
            compose,
            (0..n).map(|a| t.total.inv(a)).collect(),
            t.total.units(),
        );
        assert!(check_twist_axioms(&bad).is_err());
    }

    #[test]
    fn section_round_trip_and_shift() {
        let ring = Arc::new(make_gf(5, 1, None).unwrap());
        let g = Arc::new(FiniteGroupoid::full_relation(2));
        let c = Cocycle::trivial(ring.clone(), g.clone());
        let t = twist_from_cocycle(&c).unwrap();
        assert_eq!(cocycle_from_section(&t, &t.canonical_section()).unwrap(), c);
        // Shift the section by b and recover δb.
        let b: Vec<Elem> = vec![1, 2, 3, 1];
        let zeta: Vec<usize> = (0..4).map(|a| t.act(b[a], t.canonical_section()[a])).collect();
        let shifted = cocycle_from_section(&t, &zeta).unwrap();
        assert_eq!(shifted, Cocycle::coboundary(ring, g, &b).unwrap());
    }

    #[test]
    fn fibre_cocycles() {
        let c = z2_over(make_gf(5, 1, None).unwrap(), 4);
        let t = twist_from_cocycle(&c).unwrap();
        let f = fibre_cocycle(&t, 0).unwrap();
        assert_eq!(f.cocycle.value(1, 1), 4);
        let g = Arc::new(FiniteGroupoid::full_relation(3));
        let c = Cocycle::trivial(Arc::new(make_gf(2, 1, None).unwrap()), g);
        let t = twist_from_cocycle(&c).unwrap();
        for x in 0..3 {
            let f = fibre_cocycle(&t, x).unwrap();
            assert_eq!(f.group.order(), 1);
            assert!(f.cocycle.is_trivial());
        }
    }

    proptest! {
        #[test]
        fn coboundaries_are_cocycles_and_actions_free(seed in prop::collection::vec(0usize..4, 9)) {
            let ring = Arc::new(make_gf(5, 1, None).unwrap());
            let g = Arc::new(FiniteGroupoid::full_relation(3));
            let mut b: Vec<Elem> = seed.iter().map(|&i| (i + 1) as Elem).collect();
            for x in 0..3 {
                b[g.unit_at(x)] = 1;
            }
            let c = Cocycle::coboundary(ring, g, &b).unwrap();
            prop_assert!(c.check().is_ok());
            let t = twist_from_cocycle(&c).unwrap();
            prop_assert!(check_twist_axioms(&t).is_ok());
            prop_assert_eq!(cocycle_from_section(&t, &t.canonical_section()).unwrap(), c);
            for s in 0..t.total.num_arrows() {
                for &u in &t.units {
                    if t.act(u, s) == s {
                        prop_assert_eq!(u, t.ring.one());
                    }
                }
            }
        }
    }
}
