use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::finring::{solve_linear, Elem, LinearRow};
use crate::pairs::expectation::canonical_expectation;
use crate::pairs::{classify_pair, Pair, Vector};
use crate::steinberg::SteinbergAlgebra;
use crate::twist::{cocycle_from_section, Cocycle};

use super::UltraGroupoid;

/// The map `â: A → A_R(G'; Σ')` and the results of checking it.
///
/// Elements of the target are stored through the canonical section of Σ' → G':
/// coefficient `C` is the value at the section point over the class `C`.
#[derive(Clone, Debug)]
pub struct AhatReport {
    pub rebuilt: UltraGroupoid,
    /// The cocycle of Σ' read off the canonical section.
    pub cocycle: Cocycle,
    /// `â` of each basis vector of A.
    pub images: Vec<Vector>,
    /// Values are defined at every point and `â(a)(t·U) = t⁻¹·â(a)(U)`.
    pub well_defined: bool,
    pub linear: bool,
    pub multiplicative: bool,
    pub bijective: bool,
    /// `â(B)` is exactly the diagonal of the rebuilt algebra.
    pub diagonal_to_diagonal: bool,
    /// Linearity and multiplicativity were checked on every element (pair) of A.
    pub exhaustive: bool,
}

impl AhatReport {
    pub fn all_hold(&self) -> bool {
        self.well_defined && self.linear && self.multiplicative && self.bijective && self.diagonal_to_diagonal
    }

    /// `â(x)` in the coordinates of [`cocycle`](Self::cocycle).
    pub fn apply(&self, p: &Pair, x: &[Elem]) -> Vector {
        p.algebra().combination(x, &self.images)
    }
}

/// Builds `â(a)(U) = φ(P(n^†a))(s(U))` with `n` the minimum of `U` and `P` the
/// canonical expectation, then checks it is a diagonal-preserving isomorphism.
pub fn ahat_iso(p: &Pair) -> Result<AhatReport> {
    let report = classify_pair(p)?;
    if !report.aqp {
        return Err(Error::NotApplicable("the pair is not algebraic quasi-Cartan".into()));
    }
    let ce = canonical_expectation(p)?
        .ok_or_else(|| Error::NotApplicable("no canonical conditional expectation".into()))?;
    let ug = UltraGroupoid::build(p)?;
    let a = p.algebra();
    let r = a.ring().clone();
    let zeta = ug.twist.canonical_section();
    let cocycle = cocycle_from_section(&ug.twist, &zeta)?;
    let target = SteinbergAlgebra::new(cocycle.clone())?;

    // Value at every point, or None where φ is undefined.
    let at_point = |x: &[Elem], u: usize| -> Option<Elem> {
        let m = &ug.points[u];
        let px = ce.expectation.apply(p, &a.mul(&m.dagger, x));
        p.evaluate_at_atom(&px, ug.point_src[u])
    };
    let formula = |x: &[Elem]| -> Option<Vector> { zeta.iter().map(|&u| at_point(x, u)).collect() };

    let mut well_defined = true;
    let mut images = Vec::with_capacity(a.dim());
    for i in 0..a.dim() {
        let b = a.basis(i);
        for u in 0..ug.num_points() {
            let Some(v) = at_point(&b, u) else {
                well_defined = false;
                continue;
            };
            for &t in &ug.twist.units {
                let tu = ug.twist.act(t, u);
                let expected = r.mul(r.inv(t).expect("unit"), v);
                if at_point(&b, tu) != Some(expected) {
                    well_defined = false;
                }
            }
        }
        images.push(formula(&b).unwrap_or_else(|| vec![r.zero(); ug.num_classes()]));
    }
    let combine = |x: &[Elem]| a.combination(x, &images);

    let size = a.size();
    let exhaustive = size.saturating_mul(size) <= p.cap() as u128;
    let (linear, multiplicative) = if exhaustive {
        let all = a.elements(p.cap())?;
        let mapped: Vec<Vector> = all.iter().map(|x| combine(x)).collect();
        let linear = all.iter().zip(&mapped).all(|(x, fx)| formula(x).as_ref() == Some(fx));
        let multiplicative = all.iter().zip(&mapped).all(|(x, fx)| {
            all.iter()
                .zip(&mapped)
                .all(|(y, fy)| combine(&a.mul(x, y)) == target.convolve_coeffs(fx, fy))
        });
        (linear, multiplicative)
    } else {
        let basis: Vec<Vector> = (0..a.dim()).map(|i| a.basis(i)).collect();
        let mut samples = basis.clone();
        for i in 0..basis.len() {
            for j in i..basis.len() {
                samples.push(a.add(&basis[i], &basis[j]));
            }
        }
        let linear = samples.iter().all(|x| formula(x) == Some(combine(x)));
        let multiplicative = basis.iter().all(|x| {
            basis.iter().all(|y| combine(&a.mul(x, y)) == target.convolve_coeffs(&combine(x), &combine(y)))
        });
        (linear, multiplicative)
    };

    let bijective = a.dim() == ug.num_classes() && {
        let rows: Vec<LinearRow> = (0..ug.num_classes())
            .map(|c| LinearRow::new(images.iter().map(|im| im[c]).collect(), r.zero()))
            .collect();
        solve_linear(&r, a.dim(), &rows, p.cap())?.count(&r) == 1
    };

    let g2 = target.groupoid();
    let mut diagonal_images = HashSet::new();
    let mut diagonal_to_diagonal = true;
    for b in p.b_elements() {
        let fb = combine(b);
        if fb.iter().enumerate().any(|(c, &v)| v != r.zero() && !g2.is_unit_arrow(c)) {
            diagonal_to_diagonal = false;
        }
        diagonal_images.insert(fb);
    }
    let diagonal_size = (r.size() as u128).checked_pow(g2.num_objects() as u32);
    diagonal_to_diagonal &= diagonal_size == Some(diagonal_images.len() as u128);

    Ok(AhatReport {
        rebuilt: ug,
        cocycle,
        images,
        well_defined,
        linear,
        multiplicative,
        bijective,
        diagonal_to_diagonal,
        exhaustive,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_gf;
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::pairs::{pair_from_twist, AbstractAlgebra};
    use std::sync::Arc;

    #[test]
    fn matrix_algebra() {
        let r = Arc::new(make_gf(3, 1, None).unwrap());
        let a = Arc::new(AbstractAlgebra::matrix(r, 2));
        let p = Pair::new(a.clone(), vec![a.basis(0), a.basis(3)], crate::DEFAULT_CAP).unwrap();
        let rep = ahat_iso(&p).unwrap();
        assert!(rep.all_hold() && rep.exhaustive);
        assert_eq!(rep.images.len(), 4);
    }

    #[test]
    fn idempotents_go_to_indicators() {
        let r = Arc::new(make_gf(3, 1, None).unwrap());
        let a = Arc::new(AbstractAlgebra::matrix(r.clone(), 2));
        let p = Pair::new(a.clone(), vec![a.basis(0), a.basis(3)], crate::DEFAULT_CAP).unwrap();
        let rep = ahat_iso(&p).unwrap();
        let g2 = rep.rebuilt.twist.base.clone();
        for e in p.idempotents() {
            let img = rep.apply(&p, e);
            for x in 0..g2.num_objects() {
                let inside = a.mul(e, &p.atoms()[x]) == p.atoms()[x];
                let expected = if inside { r.one() } else { r.zero() };
                assert_eq!(img[g2.unit_at(x)], expected);
            }
        }
    }

    #[test]
    fn rejects_non_quasi_cartan() {
        let r = Arc::new(crate::finring::make_zmod(4).unwrap());
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        let p = pair_from_twist(&Cocycle::trivial(r, g), crate::DEFAULT_CAP).unwrap();
        assert!(matches!(ahat_iso(&p), Err(Error::NotApplicable(_))));
    }
}
