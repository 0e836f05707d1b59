//! Rebuilding a twist from an algebraic pair.
//!
//! Every ultrafilter of the finite poset `N(B) \ {0}` is the up-set of a
//! unique minimal element, so the ultrafilter groupoid is represented by the
//! minimal nonzero normalisers themselves: `m·n` is defined when
//! `m^†m = nn^†`, inverses are daggers, and `R^×` acts by scalars.

mod ahat;
mod compare;
pub mod filters;
mod phi;

pub use ahat::{ahat_iso, AhatReport};
pub use compare::{
    algebra_iso_from_twist_iso, compare_twists, diagonal_preserving_iso_brute, verify_twist_iso, AlgebraIsoReport, TwistIso,
};
pub use phi::{phi_map, verify_reconstruction_theorem, PhiReport, ReconstructionReport};

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::pairs::{enumerate_normalisers, index_map, Mode, Normaliser, Pair, Vector};
use crate::twist::{check_twist_axioms, ordered_units, ExplicitTwist};

/// The rebuilt twist `Σ' → G'`.
#[derive(Clone, Debug)]
pub struct UltraGroupoid {
    /// Minimal nonzero normalisers, sorted by coordinates.
    pub points: Vec<Normaliser>,
    /// Atom index of `m^†m` and of `mm^†` for each point.
    pub point_src: Vec<usize>,
    pub point_rng: Vec<usize>,
    /// `R^×`-orbits of points; the first entry of each is its representative.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Σ' as a groupoid on the points, G' on the classes, and the maps between them.
    pub twist: ExplicitTwist,
    index: HashMap<Vector, usize>,
}

impl UltraGroupoid {
    /// Builds Σ' and G' and checks the twist axioms on the result.
    pub fn build(p: &Pair) -> Result<Self> {
        if !p.weakly_torsion_free() {
            return Err(Error::NotApplicable("B fails the torsion condition".into()));
        }
        if p.local_unit().is_none() {
            return Err(Error::NotApplicable("I(B) is not a set of local units".into()));
        }
        let a = p.algebra();
        let ring = a.ring().clone();
        let mut points = enumerate_normalisers(p, Mode::Minimal)?;
        points.sort_by(|x, y| x.n.cmp(&y.n));
        let index = index_map(&points.iter().map(|m| m.n.clone()).collect::<Vec<_>>());
        let atom_of = |v: Vector| p.atom_index(&v).expect("minimal normalisers have atomic source and range");
        let point_src: Vec<usize> = points.iter().map(|m| atom_of(m.source(p))).collect();
        let point_rng: Vec<usize> = points.iter().map(|m| atom_of(m.range(p))).collect();
        let np = points.len();

        let mut compose = vec![None; np * np];
        for i in 0..np {
            for j in 0..np {
                if point_src[i] == point_rng[j] {
                    let prod = a.mul(&points[i].n, &points[j].n);
                    compose[i * np + j] = Some(*index.get(&prod).ok_or_else(|| {
                        Error::NotApplicable(format!("product {} is not a minimal normaliser", a.format(&prod)))
                    })?);
                }
            }
        }
        let inv: Vec<usize> = points.iter().map(|m| index[&m.dagger]).collect();
        let atoms = p.atoms();
        let unit_at: Vec<usize> = atoms.iter().map(|e| index[e]).collect();
        let object_names: Vec<String> = atoms.iter().map(|e| a.format(e)).collect();
        let arrow_names: Vec<String> = points.iter().map(|m| a.format(&m.n)).collect();
        let total = FiniteGroupoid::new(
            object_names.clone(),
            arrow_names.clone(),
            point_src.clone(),
            point_rng.clone(),
            compose,
            inv.clone(),
            unit_at.clone(),
        )?;

        let units = ordered_units(&ring);
        let mut class_of = vec![usize::MAX; np];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..np {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> =
                units.iter().map(|&t| index[&a.scale(t, &points[i].n)]).collect();
            members.sort_unstable();
            members.dedup();
            if let Some(pos) = members.iter().position(|m| unit_at.contains(m)) {
                members.swap(0, pos);
            }
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        let nc = classes.len();
        let rep = |c: usize| classes[c][0];
        let mut base_compose = vec![None; nc * nc];
        for c in 0..nc {
            for d in 0..nc {
                if point_src[rep(c)] == point_rng[rep(d)] {
                    base_compose[c * nc + d] = total.compose(rep(c), rep(d)).map(|x| class_of[x]);
                }
            }
        }
        let base = FiniteGroupoid::new(
            object_names,
            (0..nc).map(|c| format!("[{}]", arrow_names[rep(c)])).collect(),
            (0..nc).map(|c| point_src[rep(c)]).collect(),
            (0..nc).map(|c| point_rng[rep(c)]).collect(),
            base_compose,
            (0..nc).map(|c| class_of[inv[rep(c)]]).collect(),
            unit_at.iter().map(|&u| class_of[u]).collect(),
        )?;
        let inj = (0..atoms.len())
            .flat_map(|x| units.iter().map(move |&t| (x, t)))
            .map(|(x, t)| index[&a.scale(t, &atoms[x])])
            .collect();
        let twist = ExplicitTwist { ring, total, base: Arc::new(base), units, inj, proj: class_of.clone() };
        check_twist_axioms(&twist).map_err(Error::Twist)?;
        Ok(UltraGroupoid { points, point_src, point_rng, classes, class_of, twist, index })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn point_index(&self, n: &[crate::finring::Elem]) -> Option<usize> {
        self.index.get(n).copied()
    }

    /// Points of the form `t·e` with `e` an atom.
    pub fn unit_points(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.twist.base.num_objects())
            .flat_map(|x| self.classes[self.twist.base.unit_at(x)].clone())
            .collect();
        v.sort_unstable();
        v
    }
}
