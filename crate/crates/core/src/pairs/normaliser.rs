//! The normaliser inverse semigroup `N(B)`.

use crate::error::{check_cap, Result};
use crate::finring::{for_each_vector, solve_linear, span, Elem, LinearRow};

use super::{Pair, Vector};

/// `n ∈ N(B)` together with its unique generalised inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Normaliser {
    pub n: Vector,
    pub dagger: Vector,
}

impl Normaliser {
    /// `n^† n`.
    pub fn source(&self, p: &Pair) -> Vector {
        p.algebra().mul(&self.dagger, &self.n)
    }

    /// `n n^†`.
    pub fn range(&self, p: &Pair) -> Vector {
        p.algebra().mul(&self.n, &self.dagger)
    }

    pub fn star(&self) -> Normaliser {
        Normaliser { n: self.dagger.clone(), dagger: self.n.clone() }
    }

    /// `(mn)^† = n^† m^†`.
    pub fn compose(&self, p: &Pair, other: &Normaliser) -> Normaliser {
        let a = p.algebra();
        Normaliser { n: a.mul(&self.n, &other.n), dagger: a.mul(&other.dagger, &self.dagger) }
    }

    /// `t·n`, with dagger `t^{-1} n^†`. Panics unless `t` is a unit.
    pub fn scale(&self, p: &Pair, t: Elem) -> Normaliser {
        let a = p.algebra();
        let ti = a.ring().inv(t).expect("scalar is a unit");
        Normaliser { n: a.scale(t, &self.n), dagger: a.scale(ti, &self.dagger) }
    }

    /// `self ≤ other`, i.e. `m = m m^† n`.
    pub fn leq(&self, p: &Pair, other: &Normaliser) -> bool {
        let a = p.algebra();
        a.mul3(&self.n, &self.dagger, &other.n) == self.n
    }

    /// `n ∈ B` or `(n^†n)(nn^†) = 0`.
    pub fn is_free(&self, p: &Pair) -> bool {
        p.in_b(&self.n) || p.algebra().is_zero(&p.algebra().mul(&self.source(p), &self.range(p)))
    }
}

/// Whether `k` witnesses `n ∈ N(B)` by the definition.
pub fn is_dagger(p: &Pair, n: &[Elem], k: &[Elem]) -> bool {
    let a = p.algebra();
    if a.mul3(k, n, k) != k || a.mul3(n, k, n) != n {
        return false;
    }
    p.sub_basis()
        .iter()
        .all(|b| p.in_b(&a.mul3(k, b, n)) && p.in_b(&a.mul3(n, b, k)))
}

/// The least idempotent `g ∈ I(B)` with `n g = n` (`right`) or `g n = n`, if any.
fn least_absorbing_idempotent(p: &Pair, n: &[Elem], right: bool) -> Option<Vector> {
    let a = p.algebra();
    let mut acc: Option<Vector> = None;
    for g in p.idempotents() {
        let fixes = if right { a.mul(n, g) == n } else { a.mul(g, n) == n };
        if fixes {
            acc = Some(match acc {
                None => g.clone(),
                Some(h) => a.mul(&h, g),
            });
        }
    }
    acc
}

/// Decides `n ∈ N(B)` and returns `n^†`.
///
/// If `n` is a normaliser then `n^†n` is the least idempotent `e` with
/// `ne = n`, and `nn^†` the least `f` with `fn = n`. Any solution `k` of the
/// linear system `kn = e`, `nk = f` then satisfies `ekf = n^†`, so one solve
/// followed by a definitional check settles membership.
pub fn dagger_of(p: &Pair, n: &[Elem]) -> Result<Option<Normaliser>> {
    let a = p.algebra();
    if a.is_zero(n) {
        return Ok(Some(Normaliser { n: n.to_vec(), dagger: a.zero() }));
    }
    let Some(e) = least_absorbing_idempotent(p, n, true) else { return Ok(None) };
    let Some(f) = least_absorbing_idempotent(p, n, false) else { return Ok(None) };
    let d = a.dim();
    let left: Vec<Vector> = (0..d).map(|i| a.mul(&a.basis(i), n)).collect();
    let right: Vec<Vector> = (0..d).map(|i| a.mul(n, &a.basis(i))).collect();
    let mut rows = Vec::with_capacity(2 * d);
    for l in 0..d {
        rows.push(LinearRow::new(left.iter().map(|v| v[l]).collect(), e[l]));
        rows.push(LinearRow::new(right.iter().map(|v| v[l]).collect(), f[l]));
    }
    let Some(k) = solve_linear(a.ring(), d, &rows, p.cap())?.first() else { return Ok(None) };
    let k = a.mul3(&e, &k, &f);
    Ok(is_dagger(p, n, &k).then(|| Normaliser { n: n.to_vec(), dagger: k }))
}

/// Every `k ∈ A` satisfying the normaliser definition for `n`, by scanning all of A.
pub fn dagger_brute_force(p: &Pair, n: &[Elem]) -> Result<Vec<Vector>> {
    let a = p.algebra();
    check_cap("dagger brute force", a.size(), p.cap())?;
    let mut out = Vec::new();
    for_each_vector(a.ring(), a.dim(), |k| {
        if is_dagger(p, n, k) {
            out.push(k.to_vec());
        }
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// All of `N(B)`, by testing every element of A.
    Full,
    /// The minimal nonzero normalisers: those with `n^†n` an atom.
    Minimal,
}

/// Enumerates normalisers.
///
/// Minimal mode walks the corners `f·A·e` for atoms `e`, `f`; every nonzero
/// normaliser there has `n^†n = e`, and every minimal one lies in exactly one corner.
pub fn enumerate_normalisers(p: &Pair, mode: Mode) -> Result<Vec<Normaliser>> {
    let a = p.algebra();
    let mut out = Vec::new();
    match mode {
        Mode::Full => {
            check_cap("normaliser enumeration", a.size(), p.cap())?;
            let mut err = None;
            for_each_vector(a.ring(), a.dim(), |n| {
                if err.is_some() {
                    return;
                }
                match dagger_of(p, n) {
                    Ok(Some(nm)) => out.push(nm),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Mode::Minimal => {
            let basis: Vec<Vector> = (0..a.dim()).map(|i| a.basis(i)).collect();
            for e in p.atoms() {
                for f in p.atoms() {
                    let gens: Vec<Vector> = basis.iter().map(|b| a.mul3(f, b, e)).collect();
                    for n in span(a.ring(), a.dim(), &gens, p.cap())? {
                        if a.is_zero(&n) {
                            continue;
                        }
                        if let Some(nm) = dagger_of(p, &n)? {
                            out.push(nm);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
