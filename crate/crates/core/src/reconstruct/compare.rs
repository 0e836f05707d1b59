use std::collections::HashSet;

use crate::error::{check_cap, pow_size, Error, Result};
use crate::finring::{solve_linear, Elem, LinearRow};
use crate::grouprings::TwistedGroupRing;
use crate::pairs::{Pair, Vector};
use crate::steinberg::SteinbergAlgebra;
use crate::twist::{cocycle_from_section, restrict_to_fibre, Cocycle, ExplicitTwist};

/// An isomorphism of twists `Σ1 → Σ2` over an isomorphism `G1 → G2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistIso {
    /// Objects of G1 to objects of G2.
    pub object_map: Vec<usize>,
    /// Arrows of G1 to arrows of G2.
    pub arrow_map: Vec<usize>,
    /// `ψ(t·ζ1(α)) = (b(α)t)·ζ2(φ(α))` for the canonical sections ζ1, ζ2.
    pub scalars: Vec<Elem>,
    /// Arrows of Σ1 to arrows of Σ2.
    pub sigma_map: Vec<usize>,
}

type Invariant = (usize, usize, Vec<usize>, bool, Option<usize>);

/// Fibre sizes, isotropy shape and unit count of the fibre twisted group ring.
fn object_invariants(t: &ExplicitTwist, c: &Cocycle) -> Result<Vec<Invariant>> {
    let g = &*t.base;
    let r = &*t.ring;
    (0..g.num_objects())
        .map(|x| {
            let out = (0..g.num_arrows()).filter(|&a| g.src(a) == x).count();
            let inc = (0..g.num_arrows()).filter(|&a| g.rng(a) == x).count();
            let fc = restrict_to_fibre(c, x);
            let units = if pow_size(r.size(), fc.group.order()) <= 4096 {
                let ring = TwistedGroupRing::new(fc.group.clone(), fc.cocycle.clone())?;
                Some(ring.enumerate_units(4096)?.total())
            } else {
                None
            };
            Ok((out, inc, fc.group.order_profile(), fc.group.is_abelian(), units))
        })
        .collect()
}

struct Search<'a> {
    t1: &'a ExplicitTwist,
    t2: &'a ExplicitTwist,
    c1: Cocycle,
    c2: Cocycle,
    zeta1: Vec<usize>,
    zeta2: Vec<usize>,
    /// Composable triples `(a, b, ab)` of G1 that mention each arrow.
    triples: Vec<Vec<(usize, usize, usize)>>,
    cap: u64,
    steps: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        check_cap("twist isomorphism search", self.steps as u128, self.cap)
    }

    fn objects(&mut self, inv1: &[Invariant], inv2: &[Invariant], pi: &mut Vec<usize>, used: &mut [bool]) -> Result<Option<TwistIso>> {
        let x = pi.len();
        if x == inv1.len() {
            let n = self.t1.base.num_arrows();
            let mut phi = vec![usize::MAX; n];
            let mut used_arrows = vec![false; n];
            return self.arrows(pi, &mut phi, &mut used_arrows, 0);
        }
        for y in 0..inv2.len() {
            if used[y] || inv1[x] != inv2[y] {
                continue;
            }
            self.tick()?;
            used[y] = true;
            pi.push(y);
            if let Some(found) = self.objects(inv1, inv2, pi, used)? {
                return Ok(Some(found));
            }
            pi.pop();
            used[y] = false;
        }
        Ok(None)
    }

    fn arrows(&mut self, pi: &[usize], phi: &mut [usize], used: &mut [bool], a: usize) -> Result<Option<TwistIso>> {
        let (g1, g2) = (&*self.t1.base, &*self.t2.base);
        if a == phi.len() {
            let mut b = vec![Elem::MAX; phi.len()];
            return self.scalars(pi, phi, &mut b, 0);
        }
        let candidates: Vec<usize> = if g1.is_unit_arrow(a) {
            vec![g2.unit_at(pi[g1.src(a)])]
        } else {
            (0..g2.num_arrows())
                .filter(|&b| !g2.is_unit_arrow(b) && g2.src(b) == pi[g1.src(a)] && g2.rng(b) == pi[g1.rng(a)])
                .collect()
        };
        for b in candidates {
            if used[b] {
                continue;
            }
            self.tick()?;
            phi[a] = b;
            let consistent = self.triples[a].iter().all(|&(x, y, xy)| {
                [x, y, xy].iter().any(|&z| phi[z] == usize::MAX) || g2.compose(phi[x], phi[y]) == Some(phi[xy])
            });
            if consistent {
                used[b] = true;
                if let Some(found) = self.arrows(pi, phi, used, a + 1)? {
                    return Ok(Some(found));
                }
                used[b] = false;
            }
            phi[a] = usize::MAX;
        }
        Ok(None)
    }

    fn scalars(&mut self, pi: &[usize], phi: &[usize], b: &mut [Elem], a: usize) -> Result<Option<TwistIso>> {
        let r = self.t1.ring.clone();
        if a == b.len() {
            let iso = self.assemble(pi, phi, b);
            return Ok(verify_twist_iso(self.t1, self.t2, &iso).then_some(iso));
        }
        let candidates = if self.t1.base.is_unit_arrow(a) { vec![r.one()] } else { self.t1.units.clone() };
        for t in candidates {
            self.tick()?;
            b[a] = t;
            let consistent = self.triples[a].iter().all(|&(x, y, xy)| {
                [x, y, xy].iter().any(|&z| b[z] == Elem::MAX)
                    || r.mul(self.c2.value(phi[x], phi[y]), r.mul(b[x], b[y])) == r.mul(self.c1.value(x, y), b[xy])
            });
            if consistent {
                if let Some(found) = self.scalars(pi, phi, b, a + 1)? {
                    return Ok(Some(found));
                }
            }
            b[a] = Elem::MAX;
        }
        Ok(None)
    }

    fn assemble(&self, pi: &[usize], phi: &[usize], b: &[Elem]) -> TwistIso {
        let (t1, t2) = (self.t1, self.t2);
        let r = &*t1.ring;
        let sigma_map = (0..t1.total.num_arrows())
            .map(|s| {
                let a = t1.proj[s];
                let t = *t1.units.iter().find(|&&t| t1.act(t, self.zeta1[a]) == s).expect("fibre is an orbit");
                t2.act(r.mul(b[a], t), self.zeta2[phi[a]])
            })
            .collect();
        TwistIso { object_map: pi.to_vec(), arrow_map: phi.to_vec(), scalars: b.to_vec(), sigma_map }
    }
}

/// Searches for an isomorphism of twists. Objects may be permuted freely;
/// candidates are pruned by per-object invariants before the search.
pub fn compare_twists(t1: &ExplicitTwist, t2: &ExplicitTwist, cap: u64) -> Result<Option<TwistIso>> {
    let (g1, g2) = (&*t1.base, &*t2.base);
    if t1.ring != t2.ring {
        return Err(Error::MismatchedTwists);
    }
    if g1.num_objects() != g2.num_objects()
        || g1.num_arrows() != g2.num_arrows()
        || t1.total.num_arrows() != t2.total.num_arrows()
    {
        return Ok(None);
    }
    let zeta1 = t1.canonical_section();
    let zeta2 = t2.canonical_section();
    let c1 = cocycle_from_section(t1, &zeta1)?;
    let c2 = cocycle_from_section(t2, &zeta2)?;
    let inv1 = object_invariants(t1, &c1)?;
    let inv2 = object_invariants(t2, &c2)?;
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let mut triples = vec![Vec::new(); g1.num_arrows()];
    for (a, b, ab) in g1.composable_pairs() {
        for z in [a, b, ab] {
            if !triples[z].contains(&(a, b, ab)) {
                triples[z].push((a, b, ab));
            }
        }
    }
    let mut search = Search { t1, t2, c1, c2, zeta1, zeta2, triples, cap, steps: 0 };
    let mut used = vec![false; g2.num_objects()];
    search.objects(&inv1, &inv2, &mut Vec::new(), &mut used)
}

/// Checks that `iso` is a bijective, equivariant homomorphism compatible with both extensions.
pub fn verify_twist_iso(t1: &ExplicitTwist, t2: &ExplicitTwist, iso: &TwistIso) -> bool {
    let psi = &iso.sigma_map;
    let n = t1.total.num_arrows();
    if psi.len() != n || n != t2.total.num_arrows() || iso.arrow_map.len() != t1.base.num_arrows() {
        return false;
    }
    let distinct: HashSet<usize> = psi.iter().copied().collect();
    let base_distinct: HashSet<usize> = iso.arrow_map.iter().copied().collect();
    distinct.len() == n
        && base_distinct.len() == iso.arrow_map.len()
        && t1.total.composable_pairs().into_iter().all(|(a, b, ab)| t2.total.compose(psi[a], psi[b]) == Some(psi[ab]))
        && (0..n).all(|s| t1.units.iter().all(|&t| psi[t1.act(t, s)] == t2.act(t, psi[s])))
        && (0..n).all(|s| t2.proj[psi[s]] == iso.arrow_map[t1.proj[s]])
        && (0..t1.base.num_objects())
            .all(|x| t1.units.iter().all(|&t| psi[t1.inj(x, t)] == t2.inj(iso.object_map[x], t)))
}

/// The induced map `A_R(G1;Σ1) → A_R(G2;Σ2)` and its checks.
#[derive(Clone, Debug)]
pub struct AlgebraIsoReport {
    /// Image of `δ_α` for each arrow α of G1, in the section coordinates of Σ2.
    pub images: Vec<Vector>,
    pub multiplicative: bool,
    pub bijective: bool,
    pub diagonal_preserving: bool,
}

impl AlgebraIsoReport {
    pub fn all_hold(&self) -> bool {
        self.multiplicative && self.bijective && self.diagonal_preserving
    }
}

/// `f ↦ f ∘ ψ⁻¹`, which sends `δ_α` to `b(α)·δ_{φ(α)}`.
pub fn algebra_iso_from_twist_iso(t1: &ExplicitTwist, t2: &ExplicitTwist, iso: &TwistIso) -> Result<AlgebraIsoReport> {
    let r = t1.ring.clone();
    let a1 = SteinbergAlgebra::new(cocycle_from_section(t1, &t1.canonical_section())?)?;
    let a2 = SteinbergAlgebra::new(cocycle_from_section(t2, &t2.canonical_section())?)?;
    let k = a1.dim();
    let images: Vec<Vector> = (0..k)
        .map(|a| {
            let mut v = vec![r.zero(); a2.dim()];
            v[iso.arrow_map[a]] = iso.scalars[a];
            v
        })
        .collect();
    let apply = |f: &[Elem]| -> Vector {
        let mut out = vec![r.zero(); a2.dim()];
        for (a, &x) in f.iter().enumerate() {
            for (slot, &y) in out.iter_mut().zip(&images[a]) {
                *slot = r.add(*slot, r.mul(x, y));
            }
        }
        out
    };
    let multiplicative = (0..k).all(|x| {
        (0..k).all(|y| {
            let (dx, dy) = (a1.delta(x).coeffs, a1.delta(y).coeffs);
            apply(&a1.convolve_coeffs(&dx, &dy)) == a2.convolve_coeffs(&apply(&dx), &apply(&dy))
        })
    });
    let rows: Vec<LinearRow> =
        (0..a2.dim()).map(|c| LinearRow::new(images.iter().map(|im| im[c]).collect(), r.zero())).collect();
    let bijective = k == a2.dim() && solve_linear(&r, k, &rows, u64::MAX)?.count(&r) == 1;
    let (g1, g2) = (a1.groupoid(), a2.groupoid());
    let diagonal_preserving = (0..k).all(|a| g1.is_unit_arrow(a) == g2.is_unit_arrow(iso.arrow_map[a]));
    Ok(AlgebraIsoReport { images, multiplicative, bijective, diagonal_preserving })
}

/// Every basis image is tried: the independent check that a diagonal-preserving
/// algebra isomorphism exists. Returns images of the basis of `p1`.
pub fn diagonal_preserving_iso_brute(p1: &Pair, p2: &Pair, cap: u64) -> Result<Option<Vec<Vector>>> {
    let (a1, a2) = (p1.algebra(), p2.algebra());
    if a1.ring() != a2.ring() || a1.dim() != a2.dim() || p1.b_elements().len() != p2.b_elements().len() {
        return Ok(None);
    }
    let d = a1.dim();
    check_cap("diagonal-preserving isomorphism search", a2.size().saturating_mul(d as u128), cap)?;
    let all2 = a2.elements(cap)?;
    let basis: Vec<Vector> = (0..d).map(|i| a1.basis(i)).collect();
    let candidates: Vec<Vec<usize>> = basis
        .iter()
        .map(|x| {
            let in_b = p1.in_b(x);
            let idem = a1.mul(x, x) == *x;
            (0..all2.len())
                .filter(|&j| !a2.is_zero(&all2[j]))
                .filter(|&j| !in_b || p2.in_b(&all2[j]))
                .filter(|&j| !idem || a2.mul(&all2[j], &all2[j]) == all2[j])
                .collect()
        })
        .collect();
    // Products of basis vectors, checked once every index they involve is assigned.
    let mut checks = vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            let prod = a1.mul(&basis[i], &basis[j]);
            let last = prod
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != a1.ring().zero())
                .map(|(k, _)| k)
                .chain([i, j])
                .max()
                .unwrap();
            checks[last].push((i, j, prod));
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut steps = 0u64;
    fn go(
        p1: &Pair,
        p2: &Pair,
        all2: &[Vector],
        candidates: &[Vec<usize>],
        checks: &[Vec<(usize, usize, Vector)>],
        chosen: &mut Vec<usize>,
        steps: &mut u64,
        cap: u64,
    ) -> Result<Option<Vec<Vector>>> {
        let (a1, a2) = (p1.algebra(), p2.algebra());
        let i = chosen.len();
        if i == candidates.len() {
            let images: Vec<Vector> = chosen.iter().map(|&j| all2[j].clone()).collect();
            let r = a1.ring();
            let rows: Vec<LinearRow> = (0..a2.dim())
                .map(|c| LinearRow::new(images.iter().map(|im| im[c]).collect(), r.zero()))
                .collect();
            if solve_linear(r, images.len(), &rows, cap)?.count(r) != 1 {
                return Ok(None);
            }
            let image_of_b: HashSet<Vector> = p1.b_elements().iter().map(|b| a1.combination(b, &images)).collect();
            let onto_b = image_of_b.iter().all(|v| p2.in_b(v)) && image_of_b.len() == p2.b_elements().len();
            return Ok(onto_b.then_some(images));
        }
        for &j in &candidates[i] {
            *steps += 1;
            check_cap("diagonal-preserving isomorphism search", *steps as u128, cap)?;
            chosen.push(j);
            let images: Vec<&Vector> = chosen.iter().map(|&k| &all2[k]).collect();
            let ok = checks[i].iter().all(|(x, y, prod)| {
                let lhs: Vector = prod.iter().enumerate().fold(a2.zero(), |acc, (k, &v)| {
                    if v == a1.ring().zero() {
                        acc
                    } else {
                        a2.add(&acc, &a2.scale(v, images[k]))
                    }
                });
                lhs == a2.mul(images[*x], images[*y])
            });
            if ok {
                if let Some(found) = go(p1, p2, all2, candidates, checks, chosen, steps, cap)? {
                    return Ok(Some(found));
                }
            }
            chosen.pop();
        }
        Ok(None)
    }
    go(p1, p2, &all2, &candidates, &checks, &mut chosen, &mut steps, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_gf;
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::pairs::pair_from_twist;
    use crate::twist::twist_from_cocycle;
    use std::sync::Arc;

    fn z2(q: usize, c: Elem) -> Cocycle {
        let r = Arc::new(make_gf(q, 1, None).unwrap());
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        Cocycle::from_entries(r, g, &[(1, 1, c)]).unwrap()
    }

    #[test]
    fn identity_is_found() {
        let r = Arc::new(make_gf(3, 1, None).unwrap());
        let c = Cocycle::trivial(r, Arc::new(FiniteGroupoid::full_relation(3)));
        let t = twist_from_cocycle(&c).unwrap();
        let iso = compare_twists(&t, &t, crate::DEFAULT_CAP).unwrap().unwrap();
        assert!(verify_twist_iso(&t, &t, &iso));
        assert!(algebra_iso_from_twist_iso(&t, &t, &iso).unwrap().all_hold());
    }

    #[test]
    fn coboundary_is_isomorphic() {
        let r = Arc::new(make_gf(5, 1, None).unwrap());
        let g = Arc::new(FiniteGroupoid::full_relation(2));
        let c = Cocycle::coboundary(r.clone(), g.clone(), &[1, 2, 3, 1]).unwrap();
        let t1 = twist_from_cocycle(&Cocycle::trivial(r, g)).unwrap();
        let t2 = twist_from_cocycle(&c).unwrap();
        assert!(compare_twists(&t1, &t2, crate::DEFAULT_CAP).unwrap().is_some());
    }

    #[test]
    fn search_agrees_with_algebra_oracle() {
        // Over GF(5), 4 is a square, so c(g,g) = 4 is a coboundary; over GF(3), 2 is not.
        for (q, c) in [(5, 4), (3, 2), (5, 2)] {
            let triv = z2(q, 1);
            let tw = z2(q, c);
            let found = compare_twists(&twist_from_cocycle(&triv).unwrap(), &twist_from_cocycle(&tw).unwrap(), 1_000_000)
                .unwrap()
                .is_some();
            let p1 = pair_from_twist(&triv, 1_000_000).unwrap();
            let p2 = pair_from_twist(&tw, 1_000_000).unwrap();
            let oracle = diagonal_preserving_iso_brute(&p1, &p2, 1_000_000).unwrap().is_some();
            assert_eq!(found, oracle, "q = {q}, c = {c}");
        }
        assert!(compare_twists(&twist_from_cocycle(&z2(5, 1)).unwrap(), &twist_from_cocycle(&z2(5, 4)).unwrap(), 1_000_000)
            .unwrap()
            .is_some());
        assert!(compare_twists(&twist_from_cocycle(&z2(3, 1)).unwrap(), &twist_from_cocycle(&z2(3, 2)).unwrap(), 1_000_000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let t = twist_from_cocycle(&z2(5, 1)).unwrap();
        assert!(matches!(compare_twists(&t, &t, 1), Err(Error::CapExceeded { .. })));
    }
}
