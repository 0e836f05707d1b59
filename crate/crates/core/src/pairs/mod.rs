//! Algebras with a distinguished commutative subalgebra.
//!
//! This is the abstract side of the correspondence: nothing here knows about
//! groupoids except [`pair_from_twist`]. Elements are coordinate vectors in a
//! fixed basis of the algebra.

mod algebra;
pub mod classify;
pub mod expectation;
pub mod lbh;
pub mod normaliser;

pub use algebra::{AbstractAlgebra, Vector};
pub use classify::{classify_pair, ClassifyReport};
pub use expectation::{canonical_expectation, enumerate_expectations, Expectation};
pub use lbh::{check_lbh, lbh_by_definition, LbhReport};
pub use normaliser::{dagger_brute_force, dagger_of, enumerate_normalisers, Mode, Normaliser};

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finring::{span, Elem};
use crate::steinberg::SteinbergAlgebra;
use crate::twist::Cocycle;

/// `(A, B)` with `B` given by a spanning set; `B` itself, `I(B)` and its atoms are precomputed.
#[derive(Clone, Debug)]
pub struct Pair {
    algebra: Arc<AbstractAlgebra>,
    sub_basis: Vec<Vector>,
    b_elements: Vec<Vector>,
    b_index: HashSet<Vector>,
    idempotents: Vec<Vector>,
    atoms: Vec<Vector>,
    cap: u64,
}

impl Pair {
    /// Checks that `span(sub_basis)` is a commutative subalgebra with at most `cap` elements.
    pub fn new(algebra: Arc<AbstractAlgebra>, sub_basis: Vec<Vector>, cap: u64) -> Result<Self> {
        let d = algebra.dim();
        if sub_basis.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidAlgebra("sub_basis vectors must have one coordinate per basis element".into()));
        }
        let b_elements = span(algebra.ring(), d, &sub_basis, cap)?;
        let b_index: HashSet<Vector> = b_elements.iter().cloned().collect();
        for x in &sub_basis {
            for y in &sub_basis {
                let xy = algebra.mul(x, y);
                if !b_index.contains(&xy) {
                    return Err(Error::InvalidAlgebra(format!(
                        "B is not closed: {} * {} = {}",
                        algebra.format(x),
                        algebra.format(y),
                        algebra.format(&xy)
                    )));
                }
                if xy != algebra.mul(y, x) {
                    return Err(Error::InvalidAlgebra(format!(
                        "B is not commutative: {} and {}",
                        algebra.format(x),
                        algebra.format(y)
                    )));
                }
            }
        }
        let idempotents: Vec<Vector> = b_elements.iter().filter(|e| algebra.mul(e, e) == **e).cloned().collect();
        let nonzero: Vec<&Vector> = idempotents.iter().filter(|e| !algebra.is_zero(e)).collect();
        let mut atoms: Vec<Vector> = nonzero
            .iter()
            .filter(|e| nonzero.iter().all(|f| *f == **e || algebra.mul(f, e) != **f))
            .map(|e| (*e).clone())
            .collect();
        atoms.sort();
        Ok(Pair { algebra, sub_basis, b_elements, b_index, idempotents, atoms, cap })
    }

    pub fn algebra(&self) -> &Arc<AbstractAlgebra> {
        &self.algebra
    }

    pub fn sub_basis(&self) -> &[Vector] {
        &self.sub_basis
    }

    /// Every element of B.
    pub fn b_elements(&self) -> &[Vector] {
        &self.b_elements
    }

    pub fn in_b(&self, x: &[Elem]) -> bool {
        self.b_index.contains(x)
    }

    /// `I(B)`.
    pub fn idempotents(&self) -> &[Vector] {
        &self.idempotents
    }

    /// Minimal nonzero idempotents, sorted.
    pub fn atoms(&self) -> &[Vector] {
        &self.atoms
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// `te = 0` with `e ∈ I(B) \ {0}` forces `t = 0`. Vacuously true when `I(B) = {0}`.
    pub fn weakly_torsion_free(&self) -> bool {
        let r = self.algebra.ring();
        self.idempotents.iter().filter(|e| !self.algebra.is_zero(e)).all(|e| {
            r.elements().all(|t| t == r.zero() || !self.algebra.is_zero(&self.algebra.scale(t, e)))
        })
    }

    /// An idempotent of B acting as a two-sided identity on every basis vector.
    ///
    /// With finitely many basis vectors this is the same as `I(B)` being a set of local units.
    pub fn local_unit(&self) -> Option<Vector> {
        let a = &*self.algebra;
        let basis: Vec<Vector> = (0..a.dim()).map(|i| a.basis(i)).collect();
        self.idempotents
            .iter()
            .find(|e| basis.iter().all(|b| a.mul(e, b) == *b && a.mul(b, e) == *b))
            .cloned()
    }

    /// `B = span(I(B))`.
    pub fn b_spanned_by_idempotents(&self) -> Result<bool> {
        let s = span(self.algebra.ring(), self.algebra.dim(), &self.idempotents, self.cap)?;
        Ok(s.len() == self.b_elements.len())
    }

    /// Index of the atom equal to `e`.
    pub fn atom_index(&self, e: &[Elem]) -> Option<usize> {
        self.atoms.iter().position(|a| a.as_slice() == e)
    }

    /// `φ(b)(a)`: the scalar `λ` with `b·a = λ·a` for the atom `a`. Unique under (WT).
    pub fn evaluate_at_atom(&self, b: &[Elem], atom: usize) -> Option<Elem> {
        let a = &self.atoms[atom];
        let ba = self.algebra.mul(b, a);
        self.algebra.ring().elements().find(|&t| self.algebra.scale(t, a) == ba)
    }
}

/// The Steinberg pair `(A_R(G;Σ), B)` with `B` spanned by the unit point masses.
pub fn pair_from_twist(c: &Cocycle, cap: u64) -> Result<Pair> {
    let alg = SteinbergAlgebra::new(c.clone())?;
    let abs = Arc::new(alg.to_abstract());
    let sub_basis = c.groupoid().units().into_iter().map(|u| abs.basis(u)).collect();
    Pair::new(abs, sub_basis, cap)
}

/// Position lookup for a list of vectors.
pub(crate) fn index_map(xs: &[Vector]) -> HashMap<Vector, usize> {
    xs.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};

    pub(crate) fn matrix_pair(n: usize, q: usize) -> Pair {
        let r = Arc::new(make_gf(q, 1, None).unwrap());
        let a = Arc::new(AbstractAlgebra::matrix(r, n));
        let sub = (0..n).map(|i| a.basis(i * n + i)).collect();
        Pair::new(a, sub, crate::DEFAULT_CAP).unwrap()
    }

    #[test]
    fn matrix_idempotents() {
        let p = matrix_pair(2, 2);
        assert_eq!(p.idempotents().len(), 4);
        assert_eq!(p.atoms(), &[vec![0, 0, 0, 1], vec![1, 0, 0, 0]]);
        assert!(p.weakly_torsion_free());
        assert_eq!(p.local_unit(), Some(vec![1, 0, 0, 1]));
        assert!(p.b_spanned_by_idempotents().unwrap());
    }

    #[test]
    fn group_ring_idempotents() {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        let c = Cocycle::trivial(Arc::new(make_gf(3, 1, None).unwrap()), g);
        let p = pair_from_twist(&c, 1000).unwrap();
        assert_eq!(p.idempotents(), &[vec![0, 0], vec![1, 0]]);
        assert_eq!(p.atoms().len(), 1);
    }

    #[test]
    fn steinberg_idempotents_are_unit_sets() {
        let g = Arc::new(FiniteGroupoid::full_relation(3));
        let c = Cocycle::trivial(Arc::new(make_gf(2, 1, None).unwrap()), g);
        let p = pair_from_twist(&c, 1000).unwrap();
        assert_eq!(p.idempotents().len(), 8);
        assert_eq!(p.atoms().len(), 3);
    }

    #[test]
    fn torsion_condition() {
        // B = Z/4 · 2E11 has no nonzero idempotents: vacuous.
        let r = Arc::new(make_zmod(4).unwrap());
        let a = Arc::new(AbstractAlgebra::matrix(r.clone(), 1));
        let p = Pair::new(a.clone(), vec![vec![2]], 100).unwrap();
        assert_eq!(p.idempotents().len(), 1);
        assert!(p.weakly_torsion_free());
        let r6 = Arc::new(make_zmod(6).unwrap());
        let a6 = Arc::new(AbstractAlgebra::matrix(r6, 1));
        let p6 = Pair::new(a6, vec![vec![1]], 100).unwrap();
        // Idempotents 3 and 4 are killed by 2 and 3 respectively.
        assert!(!p6.weakly_torsion_free());
    }

    #[test]
    fn rejects_non_subalgebras() {
        let p = matrix_pair(2, 2);
        let a = p.algebra().clone();
        assert!(Pair::new(a.clone(), vec![a.basis(1), a.basis(2)], 100).is_err());
        assert!(Pair::new(a.clone(), vec![a.basis(0), a.basis(1)], 100).is_err());
        assert!(Pair::new(a.clone(), vec![a.basis(1)], 100).is_ok());
    }
}
