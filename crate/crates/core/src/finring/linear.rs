//! Linear systems over a finite commutative ring.
//!
//! Elimination only ever pivots on units, which is sound over any
//! commutative ring. Over a field that is plain Gauss-Jordan and the
//! solution set comes back as an affine space; otherwise the columns that
//! never received a unit pivot are enumerated.

use std::collections::HashSet;

use super::{Elem, FiniteRing};
use crate::error::{check_cap, pow_size, Error, Result};

/// One equation `sum_j coeffs[j] * x_j = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRow {
    pub coeffs: Vec<Elem>,
    pub rhs: Elem,
}

impl LinearRow {
    pub fn new(coeffs: Vec<Elem>, rhs: Elem) -> Self {
        LinearRow { coeffs, rhs }
    }

    pub fn holds(&self, ring: &FiniteRing, x: &[Elem]) -> bool {
        let mut acc = ring.zero();
        for (&a, &v) in self.coeffs.iter().zip(x) {
            acc = ring.add(acc, ring.mul(a, v));
        }
        acc == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    /// Every solution, listed explicitly.
    Listed(Vec<Vec<Elem>>),
    /// `particular + span(kernel)`, with `kernel` linearly independent. Only produced over fields.
    Affine { particular: Vec<Elem>, kernel: Vec<Vec<Elem>> },
}

impl SolutionSet {
    pub fn empty() -> Self {
        SolutionSet::Listed(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Listed(v) if v.is_empty())
    }

    pub fn count(&self, ring: &FiniteRing) -> u128 {
        match self {
            SolutionSet::Listed(v) => v.len() as u128,
            SolutionSet::Affine { kernel, .. } => pow_size(ring.size(), kernel.len()),
        }
    }

    pub fn first(&self) -> Option<Vec<Elem>> {
        match self {
            SolutionSet::Listed(v) => v.first().cloned(),
            SolutionSet::Affine { particular, .. } => Some(particular.clone()),
        }
    }

    /// All solutions, failing if there are more than `cap`.
    pub fn enumerate(&self, ring: &FiniteRing, cap: u64) -> Result<Vec<Vec<Elem>>> {
        match self {
            SolutionSet::Listed(v) => Ok(v.clone()),
            SolutionSet::Affine { particular, kernel } => {
                check_cap("solution enumeration", self.count(ring), cap)?;
                let mut out = Vec::new();
                for_each_vector(ring, kernel.len(), |ts| {
                    let mut x = particular.clone();
                    for (t, k) in ts.iter().zip(kernel) {
                        for (xi, &ki) in x.iter_mut().zip(k) {
                            *xi = ring.add(*xi, ring.mul(*t, ki));
                        }
                    }
                    out.push(x);
                });
                Ok(out)
            }
        }
    }
}

/// Calls `f` on every vector in `R^len`, in odometer order.
pub fn for_each_vector(ring: &FiniteRing, len: usize, mut f: impl FnMut(&[Elem])) {
    let q = ring.size();
    let mut v = vec![0 as Elem; len];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if (v[i] as usize) + 1 < q {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Solves the system in `nvars` unknowns.
///
/// Over a non-field the unknowns without a unit pivot are enumerated, which
/// requires `|R|^free <= cap`; otherwise [`Error::CapExceeded`] carries the
/// attempted size.
pub fn solve_linear(ring: &FiniteRing, nvars: usize, rows: &[LinearRow], cap: u64) -> Result<SolutionSet> {
    if let Some(r) = rows.iter().find(|r| r.coeffs.len() != nvars) {
        return Err(Error::InvalidArgument(format!(
            "equation has {} coefficients, expected {nvars}",
            r.coeffs.len()
        )));
    }
    let mut m: Vec<LinearRow> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(i) = (r..m.len()).find(|&i| ring.is_unit(m[i].coeffs[col])) else {
            continue;
        };
        m.swap(r, i);
        let inv = ring.inv(m[r].coeffs[col]).expect("pivot is a unit");
        for c in m[r].coeffs.iter_mut() {
            *c = ring.mul(*c, inv);
        }
        m[r].rhs = ring.mul(m[r].rhs, inv);
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let a = row.coeffs[col];
            if a == ring.zero() {
                continue;
            }
            for (c, &p) in row.coeffs.iter_mut().zip(&pivot_row.coeffs) {
                *c = ring.sub(*c, ring.mul(a, p));
            }
            row.rhs = ring.sub(row.rhs, ring.mul(a, pivot_row.rhs));
        }
        pivots.push(col);
        r += 1;
    }
    let residual = &m[r..];
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();

    let solve_pivots = |x: &mut Vec<Elem>| {
        for (i, &pc) in pivots.iter().enumerate() {
            let mut v = m[i].rhs;
            for &f in &free {
                v = ring.sub(v, ring.mul(m[i].coeffs[f], x[f]));
            }
            x[pc] = v;
        }
    };

    if ring.is_field() {
        if residual.iter().any(|row| row.rhs != ring.zero()) {
            return Ok(SolutionSet::empty());
        }
        let mut particular = vec![ring.zero(); nvars];
        solve_pivots(&mut particular);
        let kernel = free
            .iter()
            .map(|&f| {
                let mut k = vec![ring.zero(); nvars];
                k[f] = ring.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    k[pc] = ring.neg(m[i].coeffs[f]);
                }
                k
            })
            .collect();
        return Ok(SolutionSet::Affine { particular, kernel });
    }

    // Residual rows only involve free unknowns, and their values range over
    // the ideal generated by their coefficients.
    if residual.iter().any(|row| !ideal_contains(ring, &row.coeffs, row.rhs)) {
        return Ok(SolutionSet::Listed(Vec::new()));
    }
    check_cap("linear solve over a non-field", pow_size(ring.size(), free.len()), cap)?;
    // Each residual row is tested as soon as its last free unknown is assigned.
    let mut due: Vec<Vec<&LinearRow>> = vec![Vec::new(); free.len() + 1];
    for row in residual {
        let last = free.iter().rposition(|&f| row.coeffs[f] != ring.zero()).map_or(0, |i| i + 1);
        due[last].push(row);
    }
    let mut out = Vec::new();
    let mut x = vec![ring.zero(); nvars];
    if due[0].iter().all(|row| row.holds(ring, &x)) {
        assign_free(ring, &free, &due, 0, &mut x, &mut |x| {
            let mut y = x.to_vec();
            solve_pivots(&mut y);
            out.push(y);
        });
    }
    Ok(SolutionSet::Listed(out))
}

fn assign_free(
    ring: &FiniteRing,
    free: &[usize],
    due: &[Vec<&LinearRow>],
    i: usize,
    x: &mut Vec<Elem>,
    emit: &mut dyn FnMut(&[Elem]),
) {
    if i == free.len() {
        emit(x);
        return;
    }
    for v in ring.elements() {
        x[free[i]] = v;
        if due[i + 1].iter().all(|row| row.holds(ring, x)) {
            assign_free(ring, free, due, i + 1, x, emit);
        }
    }
    x[free[i]] = ring.zero();
}

/// Whether `target` lies in the ideal generated by `gens`.
fn ideal_contains(ring: &FiniteRing, gens: &[Elem], target: Elem) -> bool {
    let mut ideal = vec![false; ring.size()];
    ideal[ring.zero() as usize] = true;
    let mut frontier = vec![ring.zero()];
    while let Some(x) = frontier.pop() {
        for &g in gens.iter().filter(|&&g| g != ring.zero()) {
            for r in ring.elements() {
                let y = ring.add(x, ring.mul(g, r));
                if !ideal[y as usize] {
                    ideal[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
    }
    ideal[target as usize]
}

/// Whether `gens` span all of `R^dim`, by solving for each standard basis vector.
///
/// Unit multiples of earlier generators are dropped first since they add nothing to the span.
pub fn spans_all(ring: &FiniteRing, dim: usize, gens: &[Vec<Elem>], cap: u64) -> Result<bool> {
    let units = ring.units();
    let mut kept: Vec<&Vec<Elem>> = Vec::new();
    for g in gens {
        let redundant = kept.iter().any(|k| {
            units.iter().any(|&t| k.iter().zip(g.iter()).all(|(&x, &y)| ring.mul(t, x) == y))
        });
        if !redundant {
            kept.push(g);
        }
    }
    for i in 0..dim {
        let rows: Vec<LinearRow> = (0..dim)
            .map(|l| LinearRow::new(kept.iter().map(|g| g[l]).collect(), if l == i { ring.one() } else { ring.zero() }))
            .collect();
        if solve_linear(ring, kept.len(), &rows, cap)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `R`-submodule of `R^dim` generated by `gens`, in discovery order, `0` first.
pub fn span(ring: &FiniteRing, dim: usize, gens: &[Vec<Elem>], cap: u64) -> Result<Vec<Vec<Elem>>> {
    let zero = vec![ring.zero(); dim];
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([zero.clone()]);
    let mut out = vec![zero];
    for g in gens {
        if g.iter().all(|&c| c == ring.zero()) {
            continue;
        }
        let current = out.clone();
        for s in &current {
            for t in ring.elements() {
                let v: Vec<Elem> = s.iter().zip(g).map(|(&a, &b)| ring.add(a, ring.mul(t, b))).collect();
                if seen.insert(v.clone()) {
                    out.push(v);
                    check_cap("submodule span", out.len() as u128, cap)?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{make_gf, make_zmod};
    use proptest::prelude::*;

    fn brute(ring: &FiniteRing, nvars: usize, rows: &[LinearRow]) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for_each_vector(ring, nvars, |x| {
            if rows.iter().all(|r| r.holds(ring, x)) {
                out.push(x.to_vec());
            }
        });
        out.sort();
        out
    }

    fn solved(ring: &FiniteRing, nvars: usize, rows: &[LinearRow]) -> Vec<Vec<Elem>> {
        let mut s = solve_linear(ring, nvars, rows, 1 << 20).unwrap().enumerate(ring, 1 << 20).unwrap();
        s.sort();
        s
    }

    #[test]
    fn documented_examples() {
        let gf3 = make_gf(3, 1, None).unwrap();
        assert_eq!(solved(&gf3, 1, &[LinearRow::new(vec![2], 1)]), vec![vec![2]]);
        let z4 = make_zmod(4).unwrap();
        assert_eq!(solved(&z4, 1, &[LinearRow::new(vec![2], 0)]), vec![vec![0], vec![2]]);
        let gf2 = make_gf(2, 1, None).unwrap();
        let rows = [LinearRow::new(vec![1, 1], 1), LinearRow::new(vec![1, 1], 0)];
        assert!(solve_linear(&gf2, 2, &rows, 100).unwrap().is_empty());
    }

    #[test]
    fn cap_is_reported() {
        let z4 = make_zmod(4).unwrap();
        let rows = [LinearRow::new(vec![2; 12], 0)];
        match solve_linear(&z4, 12, &rows, 1000) {
            Err(Error::CapExceeded { attempted, .. }) => assert_eq!(attempted, 4u128.pow(12)),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn span_of_zero_divisor() {
        let z4 = make_zmod(4).unwrap();
        let s = span(&z4, 2, &[vec![2, 0], vec![0, 1]], 100).unwrap();
        assert_eq!(s.len(), 8);
    }

    fn ring_strategy() -> impl Strategy<Value = FiniteRing> {
        prop_oneof![
            Just(make_zmod(4).unwrap()),
            Just(make_zmod(6).unwrap()),
            Just(make_gf(3, 1, None).unwrap()),
            Just(make_gf(2, 2, None).unwrap()),
            Just(make_zmod(8).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(
            ring in ring_strategy(),
            nvars in 1usize..4,
            raw in prop::collection::vec(prop::collection::vec(0u8..=255, 5), 0..5),
        ) {
            let q = ring.size() as u8;
            let rows: Vec<LinearRow> = raw
                .iter()
                .map(|r| LinearRow::new(r[..nvars].iter().map(|c| c % q).collect(), r[4] % q))
                .collect();
            prop_assert_eq!(solved(&ring, nvars, &rows), brute(&ring, nvars, &rows));
        }

        #[test]
        fn spanning_test_matches_closure(
            ring in ring_strategy(),
            dim in 1usize..4,
            raw in prop::collection::vec(prop::collection::vec(0u8..=255, 3), 0..5),
        ) {
            let q = ring.size() as u8;
            let gens: Vec<Vec<Elem>> = raw.iter().map(|g| g[..dim].iter().map(|c| c % q).collect()).collect();
            let full = (ring.size() as u128).pow(dim as u32);
            let closure = span(&ring, dim, &gens, 1 << 20).unwrap().len() as u128;
            prop_assert_eq!(spans_all(&ring, dim, &gens, 1 << 20).unwrap(), closure == full);
        }
    }
}
