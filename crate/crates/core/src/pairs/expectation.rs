//! Conditional expectations `P: A → B`.

use crate::error::{check_cap, Result};
use crate::finring::{solve_linear, Elem, LinearRow};

use super::normaliser::{enumerate_normalisers, Mode, Normaliser};
use super::{Pair, Vector};

/// An `R`-linear map `A → B`, stored by its values on the basis of A.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expectation {
    pub images: Vec<Vector>,
}

impl Expectation {
    pub fn apply(&self, p: &Pair, x: &[Elem]) -> Vector {
        p.algebra().combination(x, &self.images)
    }

    /// `P` is the identity on B, lands in B, and `P(s a s') = s P(a) s'`.
    pub fn is_conditional_expectation(&self, p: &Pair) -> bool {
        let a = p.algebra();
        if self.images.iter().any(|v| !p.in_b(v)) {
            return false;
        }
        if p.sub_basis().iter().any(|s| self.apply(p, s) != *s) {
            return false;
        }
        for s in p.sub_basis() {
            for t in p.sub_basis() {
                for i in 0..a.dim() {
                    let b = a.basis(i);
                    if self.apply(p, &a.mul3(s, &b, t)) != a.mul3(s, &self.images[i], t) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// For every nonzero `a` some normaliser `n` has `P(na) ≠ 0`.
    ///
    /// `normalisers` must span the algebra as a left multiplier set; the
    /// minimal normalisers do, since every normaliser is a sum of minimal ones.
    /// The check is that `a ↦ (P(n a))_n` has trivial kernel.
    pub fn is_faithful(&self, p: &Pair, normalisers: &[Normaliser]) -> Result<bool> {
        let a = p.algebra();
        let d = a.dim();
        let mut rows = Vec::new();
        for n in normalisers {
            let cols: Vec<Vector> = (0..d).map(|i| self.apply(p, &a.mul(&n.n, &a.basis(i)))).collect();
            for l in 0..d {
                rows.push(LinearRow::new(cols.iter().map(|c| c[l]).collect(), a.ring().zero()));
            }
        }
        let sols = solve_linear(a.ring(), d, &rows, p.cap())?;
        Ok(sols.count(a.ring()) == 1)
    }

    /// Every listed normaliser has `P(n) = en = ne` for some `e ∈ I(B)`.
    pub fn implemented_by_idempotents(&self, p: &Pair, normalisers: &[Normaliser]) -> bool {
        let a = p.algebra();
        normalisers.iter().all(|n| {
            let pn = self.apply(p, &n.n);
            p.idempotents().iter().any(|e| a.mul(&n.n, e) == pn && a.mul(e, &n.n) == pn)
        })
    }
}

/// Outcome of building the expectation `P(n) = n·e(n)`.
#[derive(Clone, Debug)]
pub struct CanonicalExpectation {
    pub expectation: Expectation,
    pub minimal: Vec<Normaliser>,
    pub faithful: bool,
    /// Checked on the minimal normalisers, and on all of `N(B)` when A is small enough to list.
    pub implemented_by_idempotents: bool,
    pub checked_on_full_normalisers: bool,
}

/// Largest algebra on which implemented-by-idempotents is rechecked over all of `N(B)`.
pub const FULL_SCAN_LIMIT: u128 = 1 << 16;

/// Builds the canonical expectation, or `None` when it does not exist.
///
/// On a minimal normaliser `n` the join `e(n)` of atoms `a ≤ n^†n` with `na ∈ B`
/// is `n^†n` or `0`, so `P(n)` is `n` when `n ∈ B` and `0` otherwise. Those
/// values are extended linearly through a decomposition of each basis vector
/// into minimal normalisers; the extension is kept only if it reproduces the
/// prescribed value on every minimal normaliser and is a conditional expectation.
/// `None` also covers A not being spanned by normalisers.
pub fn canonical_expectation(p: &Pair) -> Result<Option<CanonicalExpectation>> {
    let a = p.algebra();
    let d = a.dim();
    let minimal = enumerate_normalisers(p, Mode::Minimal)?;
    let target = |n: &Normaliser| if p.in_b(&n.n) { n.n.clone() } else { a.zero() };
    let m = minimal.len();
    let mut images = Vec::with_capacity(d);
    for i in 0..d {
        let b = a.basis(i);
        let rows: Vec<LinearRow> = (0..d)
            .map(|l| LinearRow::new(minimal.iter().map(|n| n.n[l]).collect(), b[l]))
            .collect();
        let Some(y) = solve_linear(a.ring(), m, &rows, p.cap())?.first() else { return Ok(None) };
        let targets: Vec<Vector> = minimal.iter().map(target).collect();
        images.push(a.combination(&y, &targets));
    }
    let expectation = Expectation { images };
    if minimal.iter().any(|n| expectation.apply(p, &n.n) != target(n)) {
        return Ok(None);
    }
    if !expectation.is_conditional_expectation(p) {
        return Ok(None);
    }
    let faithful = expectation.is_faithful(p, &minimal)?;
    let mut implemented = expectation.implemented_by_idempotents(p, &minimal);
    let mut checked_on_full = false;
    if implemented && a.size() <= FULL_SCAN_LIMIT.min(p.cap() as u128) {
        let full = enumerate_normalisers(p, Mode::Full)?;
        implemented = expectation.implemented_by_idempotents(p, &full);
        checked_on_full = true;
    }
    Ok(Some(CanonicalExpectation {
        expectation,
        minimal,
        faithful,
        implemented_by_idempotents: implemented,
        checked_on_full_normalisers: checked_on_full,
    }))
}

/// Every conditional expectation `A → B`.
///
/// Writing `P(b_j) = Σ_l y_{jl} s_l` over the spanning set `s_l` of B turns
/// the axioms into linear equations in `y`; solutions are enumerated up to the cap.
pub fn enumerate_expectations(p: &Pair) -> Result<Vec<Expectation>> {
    let a = p.algebra();
    let r = a.ring();
    let d = a.dim();
    let s = p.sub_basis();
    let k = s.len();
    let nvars = d * k;
    // Coordinates of P(x) as linear forms in y: P(x)_l = Σ_{j,m} x_j y_{jm} s_m[l].
    let forms = |x: &[Elem]| -> Vec<Vec<Elem>> {
        (0..d)
            .map(|l| {
                let mut row = vec![r.zero(); nvars];
                for j in 0..d {
                    for m in 0..k {
                        row[j * k + m] = r.mul(x[j], s[m][l]);
                    }
                }
                row
            })
            .collect()
    };
    let mut rows = Vec::new();
    for sv in s {
        for (l, f) in forms(sv).into_iter().enumerate() {
            rows.push(LinearRow::new(f, sv[l]));
        }
    }
    for sv in s {
        for tv in s {
            for j in 0..d {
                let lhs = forms(&a.mul3(sv, &a.basis(j), tv));
                // s P(b_j) t = Σ_m y_{jm} s s_m t.
                let conj: Vec<Vector> = s.iter().map(|sm| a.mul3(sv, sm, tv)).collect();
                for l in 0..d {
                    let mut row = lhs[l].clone();
                    for m in 0..k {
                        row[j * k + m] = r.sub(row[j * k + m], conj[m][l]);
                    }
                    rows.push(LinearRow::new(row, r.zero()));
                }
            }
        }
    }
    let sols = solve_linear(r, nvars, &rows, p.cap())?;
    check_cap("expectation enumeration", sols.count(r), p.cap())?;
    let mut out: Vec<Expectation> = sols
        .enumerate(r, p.cap())?
        .into_iter()
        .map(|y| Expectation {
            images: (0..d).map(|j| a.combination(&y[j * k..(j + 1) * k], s)).collect(),
        })
        .collect();
    out.sort_by(|x, y| x.images.cmp(&y.images));
    out.dedup();
    Ok(out)
}
