//! Deciding which kind of algebraic pair `(A, B)` is.

use crate::error::{Error, Result};
use crate::finring::{solve_linear, spans_all, LinearRow};

use super::expectation::{canonical_expectation, enumerate_expectations};
use super::normaliser::{enumerate_normalisers, Mode};
use super::{Pair, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyReport {
    pub wt: bool,
    pub local_units: bool,
    pub b_spanned_by_idempotents: bool,
    pub a_spanned_by_normalisers: bool,
    /// `None` when the expectation family was too large to search.
    pub faithful_ce_exists: Option<bool>,
    pub b_maximal_commutative: bool,
    pub a_spanned_by_free_normalisers: bool,
    pub canonical_ce: bool,
    pub adp: bool,
    pub acp: bool,
    pub aqp: bool,
    pub warnings: Vec<String>,
}

impl ClassifyReport {
    fn base(&self) -> bool {
        self.wt
            && self.local_units
            && self.b_spanned_by_idempotents
            && self.a_spanned_by_normalisers
            && self.faithful_ce_exists == Some(true)
    }
}

/// `{a : a s = s a for every s in B}`, compared with B by size.
fn b_is_maximal_commutative(p: &Pair) -> Result<bool> {
    let a = p.algebra();
    let d = a.dim();
    let mut rows = Vec::new();
    for s in p.sub_basis() {
        let cols: Vec<Vector> = (0..d).map(|i| a.sub(&a.mul(&a.basis(i), s), &a.mul(s, &a.basis(i)))).collect();
        for l in 0..d {
            rows.push(LinearRow::new(cols.iter().map(|c| c[l]).collect(), a.ring().zero()));
        }
    }
    let sols = solve_linear(a.ring(), d, &rows, p.cap())?;
    Ok(sols.count(a.ring()) == p.b_elements().len() as u128)
}

/// Computes every flag from its definition and asserts `ADP ⟹ ACP ⟹ AQP`.
///
/// Returns [`Error::NotApplicable`] if the implication chain fails, which
/// would mean a bug rather than an unusual input.
pub fn classify_pair(p: &Pair) -> Result<ClassifyReport> {
    let a = p.algebra();
    let mut warnings = Vec::new();
    let nonzero_idempotents = p.idempotents().iter().any(|e| !a.is_zero(e));
    if !nonzero_idempotents {
        warnings.push("I(B) = {0}: (WT) holds vacuously".to_string());
    }
    let wt = p.weakly_torsion_free();
    let local_units = p.local_unit().is_some();
    let b_spanned_by_idempotents = p.b_spanned_by_idempotents()?;
    let b_maximal_commutative = b_is_maximal_commutative(p)?;

    let (mut a_spanned_by_normalisers, mut a_spanned_by_free_normalisers) = (false, false);
    let mut canonical = None;
    if local_units {
        let minimal = enumerate_normalisers(p, Mode::Minimal)?;
        let all: Vec<Vector> = minimal.iter().map(|n| n.n.clone()).collect();
        let free: Vec<Vector> = minimal.iter().filter(|n| n.is_free(p)).map(|n| n.n.clone()).collect();
        a_spanned_by_normalisers = spans_all(a.ring(), a.dim(), &all, p.cap())?;
        a_spanned_by_free_normalisers = spans_all(a.ring(), a.dim(), &free, p.cap())?;
        canonical = canonical_expectation(p)?;
    } else {
        warnings.push("I(B) is not a set of local units; normalisers are not analysed".to_string());
    }

    let canonical_ce = canonical.as_ref().is_some_and(|c| c.faithful && c.implemented_by_idempotents);
    let faithful_ce_exists = if canonical.as_ref().is_some_and(|c| c.faithful) {
        Some(true)
    } else if !local_units {
        Some(false)
    } else {
        match enumerate_expectations(p) {
            Ok(family) => {
                let minimal = enumerate_normalisers(p, Mode::Minimal)?;
                let mut found = false;
                for e in &family {
                    if e.is_faithful(p, &minimal)? {
                        found = true;
                        break;
                    }
                }
                Some(found)
            }
            Err(Error::CapExceeded { attempted, .. }) => {
                warnings.push(format!("expectation family too large to search ({attempted} candidates)"));
                None
            }
            Err(e) => return Err(e),
        }
    };

    let mut report = ClassifyReport {
        wt,
        local_units,
        b_spanned_by_idempotents,
        a_spanned_by_normalisers,
        faithful_ce_exists,
        b_maximal_commutative,
        a_spanned_by_free_normalisers,
        canonical_ce,
        adp: false,
        acp: false,
        aqp: false,
        warnings,
    };
    let base = report.base();
    report.adp = base && a_spanned_by_free_normalisers;
    report.acp = base && b_maximal_commutative;
    report.aqp = base && canonical_ce;
    if (report.adp && !report.acp) || (report.acp && !report.aqp) {
        return Err(Error::NotApplicable(format!(
            "implication chain violated: ADP={} ACP={} AQP={}",
            report.adp, report.acp, report.aqp
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::pairs::{pair_from_twist, AbstractAlgebra};
    use crate::twist::Cocycle;
    use std::sync::Arc;

    fn matrix_pair(n: usize, q: usize) -> Pair {
        let r = Arc::new(make_gf(q, 1, None).unwrap());
        let a = Arc::new(AbstractAlgebra::matrix(r, n));
        let sub = (0..n).map(|i| a.basis(i * n + i)).collect();
        Pair::new(a, sub, crate::DEFAULT_CAP).unwrap()
    }

    fn z2_pair(ring: crate::FiniteRing) -> Pair {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        pair_from_twist(&Cocycle::trivial(Arc::new(ring), g), crate::DEFAULT_CAP).unwrap()
    }

    #[test]
    fn matrices_are_diagonal_pairs() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let r = classify_pair(&matrix_pair(n, q)).unwrap();
            assert!(r.adp && r.acp && r.aqp, "M_{n}(GF({q})): {r:?}");
        }
    }

    #[test]
    fn group_ring_over_gf3_is_only_quasi_cartan() {
        let r = classify_pair(&z2_pair(make_gf(3, 1, None).unwrap())).unwrap();
        assert!(r.aqp);
        assert!(!r.acp);
        assert!(!r.adp);
    }

    #[test]
    fn group_ring_over_z4_is_not_quasi_cartan() {
        let r = classify_pair(&z2_pair(make_zmod(4).unwrap())).unwrap();
        assert!(!r.aqp);
        assert!(!r.acp);
    }

    #[test]
    fn zero_subalgebra_warns() {
        let r4 = Arc::new(make_zmod(4).unwrap());
        let a = Arc::new(AbstractAlgebra::matrix(r4, 1));
        let p = Pair::new(a, vec![vec![2]], 100).unwrap();
        let r = classify_pair(&p).unwrap();
        assert!(r.wt);
        assert!(!r.local_units);
        assert!(r.warnings.iter().any(|w| w.contains("vacuously")));
    }
}
