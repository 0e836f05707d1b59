//! Twisted Steinberg algebras of finite groupoids.
//!
//! An element is an `R^×`-contravariant function on Σ; it is stored by its
//! values on the canonical section `γ ↦ (γ, 1)`, so `f(γ, t) = t^{-1} f(γ, 1)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use crate::groupoid::FiniteGroupoid;
use crate::pairs::AbstractAlgebra;
use crate::twist::{check_cocycle, Cocycle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub twist: Arc<Cocycle>,
    pub coeffs: Vec<Elem>,
}

impl AlgebraElement {
    /// The value at the Σ-point `(γ, t)`.
    pub fn value_at(&self, gamma: usize, t: Elem) -> Elem {
        let r = self.twist.ring();
        r.mul(r.inv(t).expect("scalar is a unit"), self.coeffs[gamma])
    }

    /// Arrows of G where the element is nonzero.
    pub fn support(&self) -> Vec<usize> {
        let zero = self.twist.ring().zero();
        (0..self.coeffs.len()).filter(|&a| self.coeffs[a] != zero).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }
}

/// `A_R(G;Σ)` together with its precomputed factorisation table.
#[derive(Clone, Debug)]
pub struct SteinbergAlgebra {
    twist: Arc<Cocycle>,
    /// For each arrow `γ`, every `(α, β)` with `αβ = γ`.
    factorisations: Vec<Vec<(usize, usize)>>,
}

impl SteinbergAlgebra {
    pub fn new(twist: Cocycle) -> Result<Self> {
        check_cocycle(&twist)?;
        let g = twist.groupoid();
        let mut factorisations = vec![Vec::new(); g.num_arrows()];
        for (a, b, ab) in g.composable_pairs() {
            factorisations[ab].push((a, b));
        }
        Ok(SteinbergAlgebra { twist: Arc::new(twist), factorisations })
    }

    pub fn twist(&self) -> &Arc<Cocycle> {
        &self.twist
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.twist.ring()
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        self.twist.groupoid()
    }

    pub fn dim(&self) -> usize {
        self.groupoid().num_arrows()
    }

    pub fn element(&self, coeffs: Vec<Elem>) -> AlgebraElement {
        assert_eq!(coeffs.len(), self.dim(), "one coefficient per arrow");
        AlgebraElement { twist: self.twist.clone(), coeffs }
    }

    pub fn zero(&self) -> AlgebraElement {
        self.element(vec![self.ring().zero(); self.dim()])
    }

    /// The point mass `δ_γ`, equal to `1̃` of the singleton `{(γ, 1)}`.
    pub fn delta(&self, gamma: usize) -> AlgebraElement {
        let mut f = self.zero();
        f.coeffs[gamma] = self.ring().one();
        f
    }

    /// `1̃_X` for the bisection `X = {(γ, t_γ)}` of Σ.
    ///
    /// The arrows must form a bisection of G and the scalars must be units.
    pub fn indicator_tilde(&self, points: &[(usize, Elem)]) -> Result<AlgebraElement> {
        let arrows: Vec<usize> = points.iter().map(|&(a, _)| a).collect();
        let mut distinct = arrows.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != arrows.len() || !self.groupoid().is_bisection(&arrows) {
            return Err(Error::InvalidArgument("indicator support is not a bisection".into()));
        }
        let mut f = self.zero();
        for &(a, t) in points {
            if !self.ring().is_unit(t) {
                return Err(Error::InvalidArgument(format!("{} is not a unit", self.ring().label(t))));
            }
            f.coeffs[a] = t;
        }
        Ok(f)
    }

    /// Raw coefficient convolution `(f*g)(γ) = Σ_{αβ=γ} c(α,β) f(α) g(β)`.
    pub fn convolve_coeffs(&self, f: &[Elem], g: &[Elem]) -> Vec<Elem> {
        let r = self.ring();
        let zero = r.zero();
        self.factorisations
            .iter()
            .map(|facs| {
                let mut acc = zero;
                for &(a, b) in facs {
                    if f[a] != zero && g[b] != zero {
                        acc = r.add(acc, r.mul(self.twist.value(a, b), r.mul(f[a], g[b])));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn convolve(&self, f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement> {
        if *f.twist != *self.twist || *g.twist != *self.twist {
            return Err(Error::MismatchedTwists);
        }
        Ok(self.element(self.convolve_coeffs(&f.coeffs, &g.coeffs)))
    }

    pub fn add(&self, f: &AlgebraElement, g: &AlgebraElement) -> AlgebraElement {
        let r = self.ring();
        self.element(f.coeffs.iter().zip(&g.coeffs).map(|(&a, &b)| r.add(a, b)).collect())
    }

    pub fn scale(&self, t: Elem, f: &AlgebraElement) -> AlgebraElement {
        let r = self.ring();
        self.element(f.coeffs.iter().map(|&a| r.mul(t, a)).collect())
    }

    /// The diagonal subalgebra of elements supported on unit arrows.
    pub fn diagonal(&self) -> DiagonalSubalgebra {
        DiagonalSubalgebra { algebra: self.clone(), units: self.groupoid().units() }
    }

    /// Keeps coefficients on unit arrows and zeroes the rest.
    pub fn restriction_expectation(&self, f: &AlgebraElement) -> AlgebraElement {
        let g = self.groupoid();
        let zero = self.ring().zero();
        let coeffs = f.coeffs.iter().enumerate().map(|(a, &v)| if g.is_unit_arrow(a) { v } else { zero }).collect();
        self.element(coeffs)
    }

    /// Writes `f = Σ r_U 1̃_U` with the `U` having disjoint G-supports.
    ///
    /// Unit coefficients are absorbed into the indicators (`r_U = 1`) and packed
    /// first-fit into bisections; each non-unit value `v` gets its own
    /// bisections with `r_U = v` and `U` sitting at `t = 1`.
    pub fn decompose_as_bisections(&self, f: &AlgebraElement) -> Vec<(Elem, AlgebraElement)> {
        let r = self.ring();
        let g = self.groupoid();
        let mut classes: Vec<(Elem, Vec<Vec<(usize, Elem)>>)> = Vec::new();
        for a in f.support() {
            let v = f.coeffs[a];
            let (key, point) = if r.is_unit(v) { (r.one(), (a, v)) } else { (v, (a, r.one())) };
            let idx = match classes.iter().position(|(k, _)| *k == key) {
                Some(i) => i,
                None => {
                    classes.push((key, Vec::new()));
                    classes.len() - 1
                }
            };
            let bins = &mut classes[idx].1;
            let fits = |bin: &Vec<(usize, Elem)>| bin.iter().all(|&(b, _)| g.src(b) != g.src(a) && g.rng(b) != g.rng(a));
            match bins.iter().position(fits) {
                Some(i) => bins[i].push(point),
                None => bins.push(vec![point]),
            }
        }
        let mut out = Vec::new();
        for (key, bins) in classes {
            for bin in bins {
                out.push((key, self.indicator_tilde(&bin).expect("bins are bisections")));
            }
        }
        out
    }

    /// The same algebra as structure constants on the basis `δ_γ`.
    pub fn to_abstract(&self) -> AbstractAlgebra {
        let g = self.groupoid();
        let k = g.num_arrows();
        let mut products = vec![Vec::new(); k * k];
        for (a, b, ab) in g.composable_pairs() {
            products[a * k + b].push((ab, self.twist.value(a, b)));
        }
        let labels = (0..k).map(|a| format!("d{}", g.arrow_name(a))).collect();
        AbstractAlgebra::new(self.ring().clone(), labels, products).expect("twisted convolution is associative")
    }
}

/// `B`, the functions supported on the unit space.
#[derive(Clone, Debug)]
pub struct DiagonalSubalgebra {
    algebra: SteinbergAlgebra,
    units: Vec<usize>,
}

impl DiagonalSubalgebra {
    /// `δ_x` for each unit `x`, in object order.
    pub fn basis(&self) -> Vec<AlgebraElement> {
        self.units.iter().map(|&u| self.algebra.delta(u)).collect()
    }

    pub fn contains(&self, f: &AlgebraElement) -> bool {
        f.support().iter().all(|&a| self.algebra.groupoid().is_unit_arrow(a))
    }

    /// The element of B with value `vals[x]` at object `x`.
    pub fn from_function(&self, vals: &[Elem]) -> AlgebraElement {
        let mut f = self.algebra.zero();
        for (&u, &v) in self.units.iter().zip(vals) {
            f.coeffs[u] = v;
        }
        f
    }

    /// Indicators of subsets of the unit space, indexed by bitmask over objects.
    pub fn unit_set_indicators(&self) -> Vec<AlgebraElement> {
        let n = self.units.len();
        assert!(n < 20, "too many objects to list subsets");
        let one = self.algebra.ring().one();
        let zero = self.algebra.ring().zero();
        (0..1usize << n)
            .map(|mask| {
                let vals: Vec<Elem> = (0..n).map(|i| if mask >> i & 1 == 1 { one } else { zero }).collect();
                self.from_function(&vals)
            })
            .collect()
    }

    /// Every idempotent of B, by scanning all `|R|^|G^(0)|` elements.
    pub fn idempotents(&self) -> Vec<AlgebraElement> {
        let r = self.algebra.ring();
        let mut out = Vec::new();
        crate::finring::for_each_vector(r, self.units.len(), |vals| {
            let f = self.from_function(vals);
            if self.algebra.convolve_coeffs(&f.coeffs, &f.coeffs) == f.coeffs {
                out.push(f);
            }
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::groupoid::FiniteGroup;
    use proptest::prelude::*;

    fn matrix_algebra(n: usize, ring: FiniteRing) -> SteinbergAlgebra {
        let g = Arc::new(FiniteGroupoid::full_relation(n));
        SteinbergAlgebra::new(Cocycle::trivial(Arc::new(ring), g)).unwrap()
    }

    fn matmul(r: &FiniteRing, n: usize, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let mut out = vec![r.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    out[i * n + l] = r.add(out[i * n + l], r.mul(x[i * n + j], y[j * n + l]));
                }
            }
        }
        out
    }

    #[test]
    fn matrix_dictionary() {
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            let alg = matrix_algebra(n, make_gf(q, 1, None).unwrap());
            let r = alg.ring().clone();
            // Matrix unit E_12 is the indicator of {((1,2), 1)}.
            let e12 = alg.indicator_tilde(&[(1, r.one())]).unwrap();
            assert_eq!(e12.coeffs[1], r.one());
            for a in 0..alg.dim() {
                for b in 0..alg.dim() {
                    let (da, db) = (alg.delta(a), alg.delta(b));
                    let prod = alg.convolve(&da, &db).unwrap();
                    assert_eq!(prod.coeffs, matmul(&r, n, &da.coeffs, &db.coeffs));
                }
            }
        }
    }

    #[test]
    fn twisted_group_square() {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        let ring = Arc::new(make_gf(5, 1, None).unwrap());
        let c = Cocycle::from_entries(ring, g, &[(1, 1, 4)]).unwrap();
        let alg = SteinbergAlgebra::new(c).unwrap();
        let sq = alg.convolve(&alg.delta(1), &alg.delta(1)).unwrap();
        assert_eq!(sq.coeffs, vec![4, 0]);
    }

    #[test]
    fn indicators_and_values() {
        let alg = matrix_algebra(2, make_gf(3, 1, None).unwrap());
        let units: Vec<(usize, Elem)> = alg.groupoid().units().into_iter().map(|u| (u, 1)).collect();
        let one = alg.indicator_tilde(&units).unwrap();
        for a in 0..alg.dim() {
            let d = alg.delta(a);
            assert_eq!(alg.convolve(&one, &d).unwrap(), d);
            assert_eq!(alg.convolve(&d, &one).unwrap(), d);
        }
        let x = alg.indicator_tilde(&[(1, 2)]).unwrap();
        assert_eq!(x.value_at(1, 2), 1);
        assert_eq!(x.value_at(1, 1), 2);
        assert!(alg.indicator_tilde(&[(0, 1), (1, 1)]).is_err());
    }

    #[test]
    fn expectation_and_diagonal() {
        let alg = matrix_algebra(2, make_gf(3, 1, None).unwrap());
        let f = alg.element(vec![1, 2, 2, 1]);
        assert_eq!(alg.restriction_expectation(&f).coeffs, vec![1, 0, 0, 1]);
        let diag = alg.diagonal();
        let p = alg.restriction_expectation(&f);
        assert!(diag.contains(&p));
        assert_eq!(alg.restriction_expectation(&p), p);

        let alg3 = matrix_algebra(3, make_gf(2, 1, None).unwrap());
        let idem = alg3.diagonal().idempotents();
        assert_eq!(idem.len(), 8);
        let mut subsets = alg3.diagonal().unit_set_indicators();
        subsets.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        let mut idem = idem;
        idem.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        assert_eq!(idem, subsets);

        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        let alg = SteinbergAlgebra::new(Cocycle::trivial(Arc::new(make_gf(3, 1, None).unwrap()), g)).unwrap();
        let idem: Vec<Vec<Elem>> = alg.diagonal().idempotents().into_iter().map(|f| f.coeffs).collect();
        assert_eq!(idem, vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn decomposition_examples() {
        let alg = matrix_algebra(2, make_gf(3, 1, None).unwrap());
        let f = alg.element(vec![1, 2, 0, 0]);
        let parts = alg.decompose_as_bisections(&f);
        assert_eq!(parts.len(), 2);
        let x = alg.indicator_tilde(&[(1, 2), (2, 1)]).unwrap();
        assert_eq!(alg.decompose_as_bisections(&x).len(), 1);
        assert!(alg.decompose_as_bisections(&alg.zero()).is_empty());
    }

    #[test]
    fn mismatched_twists_rejected() {
        let a = matrix_algebra(2, make_gf(3, 1, None).unwrap());
        let b = matrix_algebra(2, make_gf(2, 1, None).unwrap());
        assert!(matches!(a.convolve(&a.delta(0), &b.delta(0)), Err(Error::MismatchedTwists)));
    }

    fn reassemble(alg: &SteinbergAlgebra, parts: &[(Elem, AlgebraElement)]) -> AlgebraElement {
        parts.iter().fold(alg.zero(), |acc, (r, u)| alg.add(&acc, &alg.scale(*r, u)))
    }

    proptest! {
        #[test]
        fn decomposition_reassembles(coeffs in prop::collection::vec(0u8..4, 6)) {
            let z2 = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2));
            let g = Arc::new(FiniteGroupoid::disjoint_union(&FiniteGroupoid::full_relation(2), &z2));
            let alg = SteinbergAlgebra::new(Cocycle::trivial(Arc::new(make_zmod(4).unwrap()), g.clone())).unwrap();
            let f = alg.element(coeffs);
            let parts = alg.decompose_as_bisections(&f);
            prop_assert_eq!(reassemble(&alg, &parts), f.clone());
            let mut seen = std::collections::HashSet::new();
            for (_, u) in &parts {
                prop_assert!(g.is_bisection(&u.support()));
                for a in u.support() {
                    prop_assert!(seen.insert(a));
                }
            }
            prop_assert_eq!(seen.len(), f.support().len());
        }

        #[test]
        fn diagonal_acts_by_range_and_source(vals in prop::collection::vec(0u8..3, 2), coeffs in prop::collection::vec(0u8..3, 4)) {
            let alg = matrix_algebra(2, make_gf(3, 1, None).unwrap());
            let g = alg.groupoid().clone();
            let r = alg.ring().clone();
            let b = alg.diagonal().from_function(&vals);
            let a = alg.element(coeffs);
            let left = alg.convolve(&b, &a).unwrap();
            let right = alg.convolve(&a, &b).unwrap();
            for s in 0..4 {
                prop_assert_eq!(left.coeffs[s], r.mul(vals[g.rng(s)], a.coeffs[s]));
                prop_assert_eq!(right.coeffs[s], r.mul(a.coeffs[s], vals[g.src(s)]));
            }
        }
    }
}
