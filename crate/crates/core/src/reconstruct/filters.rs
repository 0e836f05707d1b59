//! Direct search for maximal filters of `N(B) \ {0}`, used to confirm that
//! ultrafilters are exactly the up-sets of minimal nonzero normalisers.

use crate::error::{Error, Result};
use crate::pairs::{enumerate_normalisers, Mode, Normaliser, Pair};

/// Largest poset the filter search accepts.
pub const MAX_FILTER_POSET: usize = 64;

/// The nonzero normalisers with their order relation.
pub struct NormaliserPoset {
    pub elements: Vec<Normaliser>,
    /// `le[i][j]` iff `elements[i] ≤ elements[j]`.
    pub le: Vec<Vec<bool>>,
}

impl NormaliserPoset {
    pub fn new(p: &Pair) -> Result<Self> {
        let a = p.algebra();
        let elements: Vec<Normaliser> =
            enumerate_normalisers(p, Mode::Full)?.into_iter().filter(|n| !a.is_zero(&n.n)).collect();
        let le = elements.iter().map(|x| elements.iter().map(|y| x.leq(p, y)).collect()).collect();
        Ok(NormaliserPoset { elements, le })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Indices of the elements above `i`, sorted.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.le[i][j]).collect()
    }

    /// Elements with nothing strictly below them.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (0..self.len()).all(|j| j == i || !self.le[j][i])).collect()
    }
}

/// Every maximal filter (nonempty, up-closed, downward directed), as sorted index lists.
///
/// Elements are decided from the top down; an element may join only once
/// everything above it has, and a branch is abandoned as soon as no remaining
/// candidate could serve as a common lower bound of the chosen elements.
pub fn maximal_filters(poset: &NormaliserPoset) -> Result<Vec<Vec<usize>>> {
    let n = poset.len();
    if n > MAX_FILTER_POSET {
        return Err(Error::CapExceeded { what: "filter search poset".into(), attempted: n as u128, cap: MAX_FILTER_POSET as u64 });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (poset.up_set(i).len(), i));
    let mut state: Vec<Option<bool>> = vec![None; n];
    let mut filters = Vec::new();
    search(poset, &order, 0, &mut state, &mut filters);
    let maximal = filters
        .iter()
        .filter(|f| !filters.iter().any(|g| g.len() > f.len() && f.iter().all(|x| g.contains(x))))
        .cloned()
        .collect();
    Ok(maximal)
}

fn has_lower_bound(poset: &NormaliserPoset, state: &[Option<bool>]) -> bool {
    let chosen: Vec<usize> = (0..state.len()).filter(|&i| state[i] == Some(true)).collect();
    (0..state.len()).any(|z| state[z] != Some(false) && chosen.iter().all(|&c| poset.le[z][c]))
}

fn search(
    poset: &NormaliserPoset,
    order: &[usize],
    pos: usize,
    state: &mut Vec<Option<bool>>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == order.len() {
        let chosen: Vec<usize> = (0..state.len()).filter(|&i| state[i] == Some(true)).collect();
        let directed = chosen
            .iter()
            .all(|&a| chosen.iter().all(|&b| chosen.iter().any(|&c| poset.le[c][a] && poset.le[c][b])));
        if !chosen.is_empty() && directed {
            out.push(chosen);
        }
        return;
    }
    let x = order[pos];
    let uppers_in = (0..state.len()).all(|y| y == x || !poset.le[x][y] || state[y] == Some(true));
    if uppers_in {
        state[x] = Some(true);
        if has_lower_bound(poset, state) {
            search(poset, order, pos + 1, state, out);
        }
    }
    state[x] = Some(false);
    if has_lower_bound(poset, state) {
        search(poset, order, pos + 1, state, out);
    }
    state[x] = None;
}

/// Whether the maximal filters are exactly the up-sets of minimal elements.
pub fn ultrafilters_are_minimal_up_sets(p: &Pair) -> Result<bool> {
    let poset = NormaliserPoset::new(p)?;
    let mut found = maximal_filters(&poset)?;
    let mut expected: Vec<Vec<usize>> = poset.minimal().into_iter().map(|m| poset.up_set(m)).collect();
    found.sort();
    expected.sort();
    Ok(found == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::pairs::pair_from_twist;
    use crate::twist::Cocycle;
    use std::sync::Arc;

    fn z2(r: crate::FiniteRing) -> Pair {
        let g = Arc::new(FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2)));
        pair_from_twist(&Cocycle::trivial(Arc::new(r), g), crate::DEFAULT_CAP).unwrap()
    }

    #[test]
    fn agrees_on_small_pairs() {
        for p in [z2(make_gf(3, 1, None).unwrap()), z2(make_zmod(4).unwrap()), z2(make_gf(2, 1, None).unwrap())] {
            assert!(ultrafilters_are_minimal_up_sets(&p).unwrap());
        }
        let r = Arc::new(make_gf(2, 1, None).unwrap());
        let p = pair_from_twist(&Cocycle::trivial(r, Arc::new(FiniteGroupoid::full_relation(2))), 1 << 20).unwrap();
        assert!(ultrafilters_are_minimal_up_sets(&p).unwrap());
    }

    #[test]
    fn partition_property() {
        // For n in the up-set of a minimal m and n = Σ n·e_i over atoms e_i ≤ n^†n,
        // exactly one n·e_i is again in the up-set.
        let p = z2(make_gf(3, 1, None).unwrap());
        let a = p.algebra();
        let poset = NormaliserPoset::new(&p).unwrap();
        for m in poset.minimal() {
            for j in poset.up_set(m) {
                let n = &poset.elements[j];
                let src = n.source(&p);
                let pieces: Vec<_> = p
                    .atoms()
                    .iter()
                    .filter(|e| a.mul(&src, e) == **e)
                    .map(|e| a.mul(&n.n, e))
                    .collect();
                let inside = pieces
                    .iter()
                    .filter(|v| poset.up_set(m).iter().any(|&k| poset.elements[k].n == **v))
                    .count();
                assert_eq!(inside, 1);
            }
        }
    }
}
