//! The finite field `F_q`, `q = p^r`, with dense operation tables.
//!
//! Elements are canonical indices: the element with coefficient vector
//! `(c_0, ..., c_{r-1})` in the power basis over `F_p` has index
//! `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`. Everything is precomputed at
//! construction time, so the hot paths (orbit walks, character sums) are
//! table lookups.

use crate::{Error, Result};

/// Largest supported field size. Everything in this crate is desk scale;
/// the cap keeps the q^2-sized tables small.
const MAX_Q: u64 = 512;

/// An element of `F_q`, valid only together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Field descriptor plus dense add/mul/neg/inv/trace tables.
#[derive(Debug, Clone)]
pub struct Field {
    p: u64,
    r: u32,
    q: u64,
    /// Monic modulus of degree r over F_p, low degree first; present iff r > 1.
    modulus: Option<Vec<u64>>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u16>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over F_p (dense, low degree first).
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let deg_m = m.len() - 1;
    let mut rem: Vec<u64> = a.to_vec();
    while rem.len() > deg_m {
        let lead = *rem.last().unwrap() % p;
        let shift = rem.len() - 1 - deg_m;
        if lead != 0 {
            for k in 0..deg_m {
                let sub = (lead * m[k]) % p;
                rem[shift + k] = (rem[shift + k] + p - sub) % p;
            }
        }
        rem.pop();
    }
    while rem.len() > 1 && *rem.last().unwrap() == 0 {
        rem.pop();
    }
    if rem.is_empty() {
        rem.push(0);
    }
    rem
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Monic polynomials of the given degree over F_p, in lexicographic order of
/// the coefficient tuple `(a_{d-1}, ..., a_1, a_0)`.
fn monic_polys(p: u64, deg: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = (p as u128).pow(deg as u32);
    (0..count).map(move |mut code| {
        let mut coeffs = vec![0u64; deg + 1];
        coeffs[deg] = 1;
        // low digits of `code` are the low-order coefficients, so iterating
        // codes in order walks the tuple (a_{deg-1}, ..., a_0) lexicographically
        for k in 0..deg {
            coeffs[k] = (code % p as u128) as u64;
            code /= p as u128;
        }
        coeffs
    })
}

fn poly_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(p, d) {
            if poly_is_zero(&poly_rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree r over F_p,
/// comparing coefficient tuples from the highest degree down.
fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    monic_polys(p, r as usize)
        .find(|f| poly_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists over F_p")
}

impl Field {
    /// Build `F_{p^r}`, rejecting `p < n_hint` (the standing hypothesis
    /// `p >= n` of everything downstream).
    pub fn new(p: u64, r: u32, n_hint: usize) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if r < 1 {
            return Err(Error::InvalidField("r must be >= 1".into()));
        }
        if (p as u128) < n_hint as u128 {
            return Err(Error::InvalidField(format!(
                "p = {p} < n = {n_hint}; the construction requires p >= n"
            )));
        }
        let q = (p as u128).pow(r);
        if q > MAX_Q as u128 {
            return Err(Error::InvalidField(format!(
                "q = p^r = {q} exceeds the supported maximum {MAX_Q}"
            )));
        }
        let q = q as u64;
        let modulus = if r > 1 {
            Some(smallest_irreducible(p, r))
        } else {
            None
        };
        let mut field = Field {
            p,
            r,
            q,
            modulus,
            add: vec![],
            mul: vec![],
            neg: vec![],
            inv: vec![],
            trace: vec![],
        };
        field.build_tables();
        Ok(field)
    }

    fn idx_to_coeffs(&self, idx: u64) -> Vec<u64> {
        let mut c = vec![0u64; self.r as usize];
        let mut v = idx;
        for ck in c.iter_mut() {
            *ck = v % self.p;
            v /= self.p;
        }
        c
    }

    fn coeffs_to_idx(&self, c: &[u64]) -> u64 {
        let mut idx = 0u64;
        for &ck in c.iter().rev() {
            idx = idx * self.p + ck % self.p;
        }
        idx
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p;
        self.add = vec![0; q * q];
        self.mul = vec![0; q * q];
        self.neg = vec![0; q];
        self.inv = vec![0; q];
        for a in 0..q as u64 {
            let ca = self.idx_to_coeffs(a);
            let cneg: Vec<u64> = ca.iter().map(|&x| (p - x) % p).collect();
            self.neg[a as usize] = self.coeffs_to_idx(&cneg) as u16;
            for b in 0..q as u64 {
                let cb = self.idx_to_coeffs(b);
                let csum: Vec<u64> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % p).collect();
                self.add[(a * self.q + b) as usize] = self.coeffs_to_idx(&csum) as u16;
                let prod = match &self.modulus {
                    None => vec![(ca[0] * cb[0]) % p],
                    Some(m) => {
                        let mut full = poly_mul(&ca, &cb, p);
                        full = poly_rem(&full, m, p);
                        full.resize(self.r as usize, 0);
                        full
                    }
                };
                self.mul[(a * self.q + b) as usize] = self.coeffs_to_idx(&prod) as u16;
            }
        }
        for a in 1..q as u64 {
            for b in 1..q as u64 {
                if self.mul[(a * self.q + b) as usize] == 1 {
                    self.inv[a as usize] = b as u16;
                    break;
                }
            }
            debug_assert!(self.inv[a as usize] != 0, "nonzero element has an inverse");
        }
        // Tr(x) = x + x^p + ... + x^{p^{r-1}}, landing in the prime subfield.
        self.trace = (0..q as u64)
            .map(|a| {
                let mut acc = Fq(a as u16);
                let mut term = Fq(a as u16);
                for _ in 1..self.r {
                    term = self.pow(term, p);
                    acc = self.addf(acc, term);
                }
                debug_assert!((acc.0 as u64) < p, "trace lies in the prime subfield");
                acc.0
            })
            .collect();
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn same_field(&self, other: &Field) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    pub fn one(&self) -> Fq {
        Fq(1)
    }

    /// Embed an integer through the prime subfield.
    pub fn from_int(&self, v: i64) -> Fq {
        let m = v.rem_euclid(self.p as i64) as u64;
        Fq(m as u16)
    }

    pub fn element(&self, idx: u64) -> Result<Fq> {
        if idx < self.q {
            Ok(Fq(idx as u16))
        } else {
            Err(Error::InvalidArgument(format!(
                "element index {idx} out of range for q = {}",
                self.q
            )))
        }
    }

    /// Coefficient vector in the power basis (length r, each in `[0, p)`).
    pub fn coeffs(&self, a: Fq) -> Vec<u64> {
        self.idx_to_coeffs(a.0 as u64)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<Fq> {
        if c.len() != self.r as usize {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                self.r,
                c.len()
            )));
        }
        if c.iter().any(|&x| x >= self.p) {
            return Err(Error::Parse("coefficient out of range".into()));
        }
        Ok(Fq(self.coeffs_to_idx(c) as u16))
    }

    #[inline]
    pub fn addf(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn mulf(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn negf(&self, a: Fq) -> Fq {
        Fq(self.neg[a.index()])
    }

    #[inline]
    pub fn subf(&self, a: Fq, b: Fq) -> Fq {
        self.addf(a, self.negf(b))
    }

    pub fn invf(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            Err(Error::InvalidArgument("division by zero".into()))
        } else {
            Ok(Fq(self.inv[a.index()]))
        }
    }

    pub fn divf(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mulf(a, self.invf(b)?))
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulf(acc, base);
            }
            base = self.mulf(base, base);
            e >>= 1;
        }
        acc
    }

    /// Tr_{F_q / F_p}(a), returned as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, a: Fq) -> u64 {
        self.trace[a.index()] as u64
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q as u16).map(Fq)
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> {
        (1..self.q as u16).map(Fq)
    }
}
