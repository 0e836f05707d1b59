use std::fmt::Write;
use std::sync::Arc;

use crate::error::{check_cap, pow_size, Error, Result};
use crate::finring::{for_each_vector, Elem, FiniteRing};

/// Coordinates of an algebra element in the basis.
pub type Vector = Vec<Elem>;

/// A finite-rank free `R`-algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractAlgebra {
    ring: Arc<FiniteRing>,
    labels: Vec<String>,
    /// `products[i * dim + j]` lists `(k, c)` with `b_i b_j = Σ c b_k`.
    products: Vec<Vec<(usize, Elem)>>,
}

impl AbstractAlgebra {
    /// Checks associativity on every basis triple.
    pub fn new(ring: Arc<FiniteRing>, labels: Vec<String>, products: Vec<Vec<(usize, Elem)>>) -> Result<Self> {
        let d = labels.len();
        if products.len() != d * d {
            return Err(Error::InvalidAlgebra(format!("expected {} products, got {}", d * d, products.len())));
        }
        if products.iter().flatten().any(|&(k, c)| k >= d || c as usize >= ring.size()) {
            return Err(Error::InvalidAlgebra("structure constant out of range".into()));
        }
        let alg = AbstractAlgebra { ring, labels, products };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (bi, bj, bk) = (alg.basis(i), alg.basis(j), alg.basis(k));
                    if alg.mul(&alg.mul(&bi, &bj), &bk) != alg.mul(&bi, &alg.mul(&bj, &bk)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            alg.labels[i], alg.labels[j], alg.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// `M_n(R)` on the matrix units `E_ij`, with `E_ij` at index `i*n + j`.
    pub fn matrix(ring: Arc<FiniteRing>, n: usize) -> Self {
        let d = n * n;
        let mut products = vec![Vec::new(); d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    products[(i * n + j) * d + j * n + l].push((i * n + l, ring.one()));
                }
            }
        }
        let labels = (0..d).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
        AbstractAlgebra::new(ring, labels, products).expect("matrix algebra is associative")
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name.trim())
    }

    /// Number of elements, `|R|^dim`, saturating.
    pub fn size(&self) -> u128 {
        pow_size(self.ring.size(), self.dim())
    }

    pub fn zero(&self) -> Vector {
        vec![self.ring.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.ring.one();
        v
    }

    pub fn is_zero(&self, x: &[Elem]) -> bool {
        x.iter().all(|&c| c == self.ring.zero())
    }

    pub fn add(&self, x: &[Elem], y: &[Elem]) -> Vector {
        x.iter().zip(y).map(|(&a, &b)| self.ring.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[Elem], y: &[Elem]) -> Vector {
        x.iter().zip(y).map(|(&a, &b)| self.ring.sub(a, b)).collect()
    }

    pub fn scale(&self, t: Elem, x: &[Elem]) -> Vector {
        x.iter().map(|&a| self.ring.mul(t, a)).collect()
    }

    /// `Σ coeffs[i] xs[i]`.
    pub fn combination(&self, coeffs: &[Elem], xs: &[Vector]) -> Vector {
        let mut out = self.zero();
        for (&c, x) in coeffs.iter().zip(xs) {
            if c != self.ring.zero() {
                for (o, &v) in out.iter_mut().zip(x) {
                    *o = self.ring.add(*o, self.ring.mul(c, v));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vector {
        let r = &*self.ring;
        let d = self.dim();
        let zero = r.zero();
        let mut out = vec![zero; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == zero {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == zero {
                    continue;
                }
                let s = r.mul(xi, yj);
                for &(k, c) in &self.products[i * d + j] {
                    out[k] = r.add(out[k], r.mul(s, c));
                }
            }
        }
        out
    }

    pub fn mul3(&self, x: &[Elem], y: &[Elem], z: &[Elem]) -> Vector {
        self.mul(&self.mul(x, y), z)
    }

    /// Every element of the algebra, if there are at most `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vector>> {
        check_cap("algebra enumeration", self.size(), cap)?;
        let mut out = Vec::with_capacity(self.size() as usize);
        for_each_vector(&self.ring, self.dim(), |v| out.push(v.to_vec()));
        Ok(out)
    }

    /// A two-sided identity, if one exists.
    pub fn identity(&self) -> Option<Vector> {
        // The identity u satisfies u b_i = b_i = b_i u, which is linear in u.
        let d = self.dim();
        let mut rows = Vec::new();
        for i in 0..d {
            let bi = self.basis(i);
            for side in 0..2 {
                let cols: Vec<Vector> = (0..d)
                    .map(|j| if side == 0 { self.mul(&self.basis(j), &bi) } else { self.mul(&bi, &self.basis(j)) })
                    .collect();
                for l in 0..d {
                    rows.push(crate::finring::LinearRow::new(cols.iter().map(|c| c[l]).collect(), bi[l]));
                }
            }
        }
        crate::finring::solve_linear(&self.ring, d, &rows, crate::DEFAULT_CAP).ok()?.first()
    }

    /// Human-readable form such as `2*E12 + E21`.
    pub fn format(&self, x: &[Elem]) -> String {
        let mut s = String::new();
        for (i, &c) in x.iter().enumerate() {
            if c == self.ring.zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            if c == self.ring.one() {
                s.push_str(&self.labels[i]);
            } else {
                let _ = write!(s, "{}*{}", self.ring.label(c), self.labels[i]);
            }
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}
