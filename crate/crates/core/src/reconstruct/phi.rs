use crate::error::Result;
use crate::pairs::{check_lbh, classify_pair, pair_from_twist, LbhReport};
use crate::twist::{twist_from_cocycle, Cocycle, ExplicitTwist};

use super::UltraGroupoid;

/// The comparison map `Σ → Σ'`, `(γ, t) ↦ t·δ_γ`.
#[derive(Clone, Debug)]
pub struct PhiReport {
    /// Image point of each arrow of Σ, or `None` if `t·δ_γ` is not a minimal normaliser.
    pub map: Vec<Option<usize>>,
    pub injective: bool,
    pub surjective: bool,
    pub homomorphism: bool,
    pub equivariant: bool,
    /// Units of Σ go bijectively onto units of Σ'.
    pub unit_bijection: bool,
    pub sigma_size: usize,
    pub rebuilt_size: usize,
}

/// Computes Φ for the Steinberg pair of `c`, whose rebuilt twist is `ug`.
pub fn phi_map(c: &Cocycle, ug: &UltraGroupoid) -> Result<PhiReport> {
    let sigma = twist_from_cocycle(c)?;
    Ok(phi_on(&sigma, ug))
}

fn phi_on(sigma: &ExplicitTwist, ug: &UltraGroupoid) -> PhiReport {
    let r = &*sigma.ring;
    let dim = sigma.base.num_arrows();
    let m = sigma.units.len();
    let n = sigma.total.num_arrows();
    let map: Vec<Option<usize>> = (0..n)
        .map(|s| {
            let mut v = vec![r.zero(); dim];
            v[s / m] = sigma.units[s % m];
            ug.point_index(&v)
        })
        .collect();
    let np = ug.num_points();
    let mut hit = vec![0usize; np];
    for &x in map.iter().flatten() {
        hit[x] += 1;
    }
    let total_ok = map.iter().all(Option::is_some);
    let injective = total_ok && hit.iter().all(|&h| h <= 1);
    let surjective = hit.iter().all(|&h| h >= 1);
    let sig = &sigma.total;
    let rebuilt = &ug.twist.total;
    let homomorphism = total_ok
        && sig.composable_pairs().into_iter().all(|(a, b, ab)| {
            rebuilt.compose(map[a].unwrap(), map[b].unwrap()) == map[ab]
        });
    let equivariant = total_ok
        && (0..n).all(|s| {
            sigma.units.iter().all(|&t| map[sigma.act(t, s)] == Some(ug.twist.act(t, map[s].unwrap())))
        });
    let mut unit_images: Vec<Option<usize>> = sig.units().into_iter().map(|u| map[u]).collect();
    unit_images.sort_unstable();
    let mut rebuilt_units: Vec<Option<usize>> = rebuilt.units().into_iter().map(Some).collect();
    rebuilt_units.sort_unstable();
    let unit_bijection = unit_images == rebuilt_units;
    PhiReport { map, injective, surjective, homomorphism, equivariant, unit_bijection, sigma_size: n, rebuilt_size: np }
}

/// The three-way comparison of the algebraic, unit-theoretic and groupoid sides.
#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    pub aqp: bool,
    pub lbh: LbhReport,
    pub phi: PhiReport,
    pub sigma_points: usize,
    pub rebuilt_points: usize,
    pub rebuilt_classes: usize,
    /// `aqp`, `lbh.holds` and `phi.surjective` agree.
    pub equivalence_holds: bool,
    /// When Φ is onto: Φ is an isomorphism of twists over an isomorphism of groupoids.
    pub diagram_commutes: Option<bool>,
}

/// Builds the Steinberg pair of `c`, rebuilds the twist, and compares all three sides.
pub fn verify_reconstruction_theorem(c: &Cocycle, cap: u64) -> Result<ReconstructionReport> {
    let pair = pair_from_twist(c, cap)?;
    let report = classify_pair(&pair)?;
    let lbh = check_lbh(c, cap)?;
    let ug = UltraGroupoid::build(&pair)?;
    let sigma = twist_from_cocycle(c)?;
    let phi = phi_on(&sigma, &ug);
    let equivalence_holds = report.aqp == lbh.holds && lbh.holds == phi.surjective;
    let diagram_commutes = phi.surjective.then(|| diagram_commutes(&sigma, &ug, &phi));
    Ok(ReconstructionReport {
        aqp: report.aqp,
        lbh,
        sigma_points: phi.sigma_size,
        rebuilt_points: ug.num_points(),
        rebuilt_classes: ug.num_classes(),
        phi,
        equivalence_holds,
        diagram_commutes,
    })
}

fn diagram_commutes(sigma: &ExplicitTwist, ug: &UltraGroupoid, phi: &PhiReport) -> bool {
    if !(phi.injective && phi.surjective && phi.homomorphism && phi.equivariant) {
        return false;
    }
    let map: Vec<usize> = phi.map.iter().map(|x| x.unwrap()).collect();
    let g = &*sigma.base;
    let g2 = &*ug.twist.base;
    let m = sigma.units.len();
    // Slot 0 holds the scalar one.
    let base_map: Vec<usize> = (0..g.num_arrows()).map(|a| ug.class_of[map[a * m]]).collect();
    let mut seen = vec![false; g2.num_arrows()];
    for &b in &base_map {
        if std::mem::replace(&mut seen[b], true) {
            return false;
        }
    }
    if base_map.len() != g2.num_arrows() {
        return false;
    }
    let base_hom = g.composable_pairs().into_iter().all(|(a, b, ab)| g2.compose(base_map[a], base_map[b]) == Some(base_map[ab]));
    let projections = (0..sigma.total.num_arrows()).all(|s| ug.twist.proj[map[s]] == base_map[sigma.proj[s]]);
    let inclusions = (0..g.num_objects()).all(|x| {
        let y = g2.src(base_map[g.unit_at(x)]);
        sigma.units.iter().all(|&t| map[sigma.inj(x, t)] == ug.twist.inj(y, t))
    });
    base_hom && projections && inclusions
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use std::sync::Arc;

    fn cyclic(n: usize) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(n)))
    }

    #[test]
    fn matrix_twist_is_rebuilt() {
        let r = Arc::new(make_gf(3, 1, None).unwrap());
        let c = Cocycle::trivial(r, Arc::new(FiniteGroupoid::full_relation(2)));
        let rep = verify_reconstruction_theorem(&c, crate::DEFAULT_CAP).unwrap();
        assert!(rep.aqp && rep.lbh.holds && rep.phi.surjective && rep.equivalence_holds);
        assert_eq!(rep.diagram_commutes, Some(true));
        assert_eq!((rep.sigma_points, rep.rebuilt_points, rep.rebuilt_classes), (8, 8, 4));
    }

    #[test]
    fn nonreduced_ring_breaks_surjectivity() {
        let r = Arc::new(make_zmod(4).unwrap());
        let c = Cocycle::trivial(r, cyclic(2));
        let rep = verify_reconstruction_theorem(&c, crate::DEFAULT_CAP).unwrap();
        assert!(!rep.aqp && !rep.lbh.holds && !rep.phi.surjective && rep.equivalence_holds);
        assert!(rep.phi.injective && rep.phi.homomorphism && rep.phi.equivariant && rep.phi.unit_bijection);
        assert!(rep.rebuilt_points > rep.sigma_points);
        assert_eq!(rep.diagram_commutes, None);
    }

    #[test]
    fn field_group_ring_with_extra_idempotents() {
        // GF(3)[Z/2] ≅ GF(3)², so there are extra units and normalisers.
        let r = Arc::new(make_gf(3, 1, None).unwrap());
        let rep = verify_reconstruction_theorem(&Cocycle::trivial(r, cyclic(2)), crate::DEFAULT_CAP).unwrap();
        assert!(rep.equivalence_holds);
        assert_eq!(rep.aqp, rep.phi.surjective);
    }
}
