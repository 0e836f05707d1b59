//! Finite commutative unital rings stored as explicit operation tables.

mod linear;

pub use linear::{for_each_vector, solve_linear, span, spans_all, LinearRow, SolutionSet};

use std::fmt;

use crate::error::{Error, Result};

/// Index of an element inside its ring's tables.
pub type Elem = u8;

/// A finite commutative ring with identity, `0 != 1`.
///
/// Elements are the indices `0..size()`; `labels` gives their display names.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    name: String,
    labels: Vec<String>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Option<Elem>>,
    zero: Elem,
    one: Elem,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.name)
    }
}

impl FiniteRing {
    /// Builds a ring from row-major tables and checks every ring axiom exhaustively.
    pub fn from_tables(
        name: impl Into<String>,
        labels: Vec<String>,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        zero: Elem,
        one: Elem,
    ) -> Result<Self> {
        let n = labels.len();
        if !(2..=256).contains(&n) {
            return Err(Error::InvalidRing(format!("ring must have between 2 and 256 elements, got {n}")));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(Error::InvalidRing("tables must be n x n".into()));
        }
        if add.iter().chain(mul.iter()).any(|&x| x as usize >= n) {
            return Err(Error::InvalidRing("table entry out of range".into()));
        }
        if zero as usize >= n || one as usize >= n || zero == one {
            return Err(Error::InvalidRing("zero and one must be distinct elements".into()));
        }
        let mut neg = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| add[a * n + b] == zero) {
                Some(b) => neg[a] = b as Elem,
                None => return Err(Error::InvalidRing(format!("{} has no additive inverse", labels[a]))),
            }
        }
        let mut ring = FiniteRing { name: name.into(), labels, add, mul, neg, inv: vec![None; n], zero, one };
        ring.check_axioms()?;
        for a in 0..n {
            ring.inv[a] = (0..n).find(|&b| ring.mul[a * n + b] == one).map(|b| b as Elem);
        }
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.size();
        let fail = |what: &str, xs: &[usize]| {
            let w: Vec<&str> = xs.iter().map(|&x| self.labels[x].as_str()).collect();
            Err(Error::InvalidRing(format!("{what} fails at ({})", w.join(", "))))
        };
        for a in 0..n {
            let e = a as Elem;
            if self.add(e, self.zero) != e {
                return fail("additive identity", &[a]);
            }
            if self.mul(e, self.one) != e {
                return fail("multiplicative identity", &[a]);
            }
            for b in 0..n {
                let f = b as Elem;
                if self.add(e, f) != self.add(f, e) {
                    return fail("additive commutativity", &[a, b]);
                }
                if self.mul(e, f) != self.mul(f, e) {
                    return fail("multiplicative commutativity", &[a, b]);
                }
                for c in 0..n {
                    let g = c as Elem;
                    if self.add(self.add(e, f), g) != self.add(e, self.add(f, g)) {
                        return fail("additive associativity", &[a, b, c]);
                    }
                    if self.mul(self.mul(e, f), g) != self.mul(e, self.mul(f, g)) {
                        return fail("multiplicative associativity", &[a, b, c]);
                    }
                    if self.mul(e, self.add(f, g)) != self.add(self.mul(e, f), self.mul(e, g)) {
                        return fail("distributivity", &[a, b, c]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size()).map(|x| x as Elem)
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks an element up by label, falling back to a decimal table index.
    pub fn parse_elem(&self, s: &str) -> Option<Elem> {
        let s = s.trim();
        if let Some(i) = self.labels.iter().position(|l| l == s) {
            return Some(i as Elem);
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(i) = self.labels.iter().position(|l| *l == compact) {
            return Some(i as Elem);
        }
        s.parse::<usize>().ok().filter(|&i| i < self.size()).map(|i| i as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse, if `a` is a unit.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.inv[a as usize]
    }

    #[inline]
    pub fn is_unit(&self, a: Elem) -> bool {
        self.inv[a as usize].is_some()
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The image of the integer `k` under `Z -> R`.
    pub fn from_int(&self, k: i64) -> Elem {
        let mut acc = self.zero;
        for _ in 0..k.unsigned_abs() {
            acc = self.add(acc, self.one);
        }
        if k < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.mul(a, a) == a).collect()
    }

    pub fn nilpotents(&self) -> Vec<Elem> {
        let n = self.size() as u64;
        self.elements().filter(|&a| self.pow(a, n) == self.zero).collect()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.idempotents().iter().all(|&e| e == self.zero || e == self.one)
    }

    /// No nonzero nilpotents. `x^|R| = 0` for any nilpotent `x`, so one power suffices.
    pub fn is_reduced(&self) -> bool {
        self.nilpotents().iter().all(|&x| x == self.zero)
    }

    pub fn is_field(&self) -> bool {
        self.units().len() == self.size() - 1
    }
}

/// `Z/nZ` with elements labelled `0..n-1`.
pub fn make_zmod(n: usize) -> Result<FiniteRing> {
    if n < 2 {
        return Err(Error::InvalidRing(format!("zmod needs n >= 2, got {n}")));
    }
    if n > 256 {
        return Err(Error::InvalidRing(format!("zmod({n}) exceeds 256 elements")));
    }
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            add.push(((a + b) % n) as Elem);
            mul.push(((a * b) % n) as Elem);
        }
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteRing::from_tables(format!("Z/{n}"), labels, add, mul, 0, 1)
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Polynomial over GF(p), low-degree coefficient first, trimmed.
type Poly = Vec<usize>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Poly {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = (1..p).find(|&x| x * m[dm] % p == 1).expect("leading coefficient is a unit");
    while r.len() > dm {
        let dr = r.len() - 1;
        let q = r[dr] * lead_inv % p;
        for i in 0..=dm {
            let t = q * m[i] % p;
            r[dr - dm + i] = (r[dr - dm + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

/// All monic polynomials of the given degree, in lexicographic order of the low coefficients.
fn monics(p: usize, deg: usize) -> impl Iterator<Item = Poly> {
    let count = p.pow(deg as u32);
    (0..count).map(move |mut code| {
        let mut poly = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            poly.push(code % p);
            code /= p;
        }
        poly.push(1);
        poly
    })
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let deg = m.len() - 1;
    (1..=deg / 2).all(|d| monics(p, d).all(|f| !poly_rem(m, &f, p).is_empty()))
}

fn poly_label(coeffs: &[usize]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => var,
            _ => format!("{c}{var}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// `GF(p^k)` as `GF(p)[a]/(modulus)`.
///
/// `modulus` is monic, low coefficient first, of length `k + 1`. Without one,
/// `k <= 3` uses the first monic root-free polynomial of degree `k`.
pub fn make_gf(p: usize, k: usize, modulus: Option<&[usize]>) -> Result<FiniteRing> {
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidRing("gf needs k >= 1".into()));
    }
    let size = (p as u128).checked_pow(k as u32).filter(|&s| s <= 256);
    let Some(size) = size else {
        return Err(Error::InvalidRing(format!("GF({p}^{k}) exceeds 256 elements")));
    };
    let size = size as usize;
    if k == 1 && modulus.is_none() {
        let mut r = make_zmod(p)?;
        r.name = format!("GF({p})");
        return Ok(r);
    }
    let m: Poly = match modulus {
        Some(m) => {
            if m.len() != k + 1 || m[k] != 1 || m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidRing(format!(
                    "modulus must be monic of degree {k} with coefficients below {p}, low coefficient first"
                )));
            }
            if !is_irreducible(m, p) {
                return Err(Error::InvalidRing(format!("modulus {m:?} is reducible over GF({p})")));
            }
            m.to_vec()
        }
        None => {
            if k > 3 {
                return Err(Error::InvalidRing(format!("no default modulus for k = {k}; supply one")));
            }
            monics(p, k)
                .find(|f| is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        }
    };
    let decode = |mut x: usize| -> Poly {
        let mut c = Vec::with_capacity(k);
        for _ in 0..k {
            c.push(x % p);
            x /= p;
        }
        c
    };
    let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for a in 0..size {
        let pa = decode(a);
        for b in 0..size {
            let pb = decode(b);
            let s: Poly = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
            add.push(encode(&s) as Elem);
            let mut prod = vec![0; 2 * k - 1];
            for (i, x) in pa.iter().enumerate() {
                for (j, y) in pb.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(&prod, &m, p);
            r.resize(k, 0);
            mul.push(encode(&r) as Elem);
        }
    }
    let labels = (0..size).map(|x| poly_label(&decode(x))).collect();
    let name = if k == 1 { format!("GF({p})") } else { format!("GF({}^{k})", p) };
    FiniteRing::from_tables(name, labels, add, mul, 0, 1)
}
