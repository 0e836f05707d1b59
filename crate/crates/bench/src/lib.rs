//! Workloads shared by the benchmarks.

use std::sync::Arc;

use twistpair::finring::make_gf;
use twistpair::grouprings::TwistedGroupRing;
use twistpair::pairs::pair_from_twist;
use twistpair::{Cocycle, FiniteGroup, FiniteGroupoid, Pair, SteinbergAlgebra};

/// The trivially twisted algebra of the full relation on `n` points over `GF(q)`.
pub fn matrix_algebra(n: usize, q: usize) -> SteinbergAlgebra {
    let r = Arc::new(make_gf(q, 1, None).unwrap());
    let c = Cocycle::trivial(r, Arc::new(FiniteGroupoid::full_relation(n)));
    SteinbergAlgebra::new(c).unwrap()
}

pub fn matrix_pair(n: usize, q: usize) -> Pair {
    pair_from_twist(matrix_algebra(n, q).twist(), u64::MAX).unwrap()
}

/// `GF(p^k)[Z/m]`.
pub fn cyclic_group_ring(p: usize, k: usize, m: usize) -> TwistedGroupRing {
    let r = Arc::new(make_gf(p, k, None).unwrap());
    TwistedGroupRing::untwisted(r, FiniteGroup::cyclic(m))
}
