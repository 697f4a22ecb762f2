//! Exact values in `Z[zeta_p]` scaled by powers of `q`.
//!
//! A value is `numerator / q^e` where the numerator is an integer vector in
//! the basis `1, zeta, ..., zeta^{p-2}` (reduction by
//! `1 + zeta + ... + zeta^{p-1} = 0`). The exponent is kept minimal, so
//! equality is plain component-wise comparison. Every character value this
//! crate produces lives here; nothing is ever rounded.

use crate::field::{Field, Fq};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloValue {
    p: u64,
    q: u64,
    /// Coordinates of the numerator in the basis 1, zeta, ..., zeta^{p-2}.
    coeffs: Vec<i64>,
    /// The value is coeffs / q^qexp, with qexp minimal.
    qexp: u32,
}

impl CycloValue {
    pub fn zero(p: u64, q: u64) -> CycloValue {
        CycloValue {
            p,
            q,
            coeffs: vec![0; (p - 1) as usize],
            qexp: 0,
        }
    }

    pub fn one(p: u64, q: u64) -> CycloValue {
        CycloValue::from_integer(p, q, 1)
    }

    pub fn from_integer(p: u64, q: u64, v: i64) -> CycloValue {
        let mut coeffs = vec![0i64; (p - 1) as usize];
        coeffs[0] = v;
        CycloValue {
            p,
            q,
            coeffs,
            qexp: 0,
        }
    }

    /// `zeta_p^k` for any integer exponent.
    pub fn root_of_unity(p: u64, q: u64, k: i64) -> CycloValue {
        let e = k.rem_euclid(p as i64) as u64;
        let mut raw = vec![0i64; p as usize];
        raw[e as usize] = 1;
        CycloValue::from_raw(p, q, raw, 0)
    }

    /// Build from coordinates over exponents `0..p` (length p), folding
    /// `zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})`.
    fn from_raw(p: u64, q: u64, raw: Vec<i64>, qexp: u32) -> CycloValue {
        debug_assert_eq!(raw.len(), p as usize);
        let top = raw[(p - 1) as usize];
        let coeffs = raw[..(p - 1) as usize]
            .iter()
            .map(|&c| c - top)
            .collect();
        let mut v = CycloValue { p, q, coeffs, qexp };
        v.normalize();
        v
    }

    /// Weighted sum of roots of unity: `sum counts[t] * zeta^t`.
    /// This is the fast path for orbit character sums.
    pub fn from_exponent_counts(p: u64, q: u64, counts: &[i64]) -> CycloValue {
        debug_assert_eq!(counts.len(), p as usize);
        CycloValue::from_raw(p, q, counts.to_vec(), 0)
    }

    fn normalize(&mut self) {
        if self.coeffs.iter().all(|&c| c == 0) {
            self.qexp = 0;
            return;
        }
        let q = self.q as i64;
        while self.qexp > 0 && self.coeffs.iter().all(|&c| c % q == 0) {
            for c in self.coeffs.iter_mut() {
                *c /= q;
            }
            self.qexp -= 1;
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_exponent(&self) -> u32 {
        self.qexp
    }

    pub fn numerator(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &CycloValue) -> Result<()> {
        if self.p != other.p || self.q != other.q {
            return Err(Error::FieldMismatch(format!(
                "cyclotomic values over (p, q) = ({}, {}) and ({}, {})",
                self.p, self.q, other.p, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &CycloValue) -> Result<CycloValue> {
        self.check_compatible(other)?;
        let e = self.qexp.max(other.qexp);
        let qa = (self.q as i64).pow(e - self.qexp);
        let qb = (self.q as i64).pow(e - other.qexp);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a * qa + b * qb)
            .collect();
        let mut v = CycloValue {
            p: self.p,
            q: self.q,
            coeffs,
            qexp: e,
        };
        v.normalize();
        Ok(v)
    }

    pub fn neg(&self) -> CycloValue {
        CycloValue {
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
            qexp: self.qexp,
        }
    }

    pub fn sub(&self, other: &CycloValue) -> Result<CycloValue> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycloValue) -> Result<CycloValue> {
        self.check_compatible(other)?;
        let p = self.p as usize;
        let mut raw = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                raw[(i + j) % p] += a * b;
            }
        }
        Ok(CycloValue::from_raw(
            self.p,
            self.q,
            raw,
            self.qexp + other.qexp,
        ))
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> CycloValue {
        let p = self.p as usize;
        let mut raw = vec![0i64; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            raw[(p - k) % p] += c;
        }
        CycloValue::from_raw(self.p, self.q, raw, self.qexp)
    }

    /// Multiply by `q^k` (negative `k` divides).
    pub fn scale_q_pow(&self, k: i32) -> CycloValue {
        let mut v = self.clone();
        if k >= 0 {
            let k = k as u32;
            if v.qexp >= k {
                v.qexp -= k;
            } else {
                let factor = (v.q as i64).pow(k - v.qexp);
                for c in v.coeffs.iter_mut() {
                    *c *= factor;
                }
                v.qexp = 0;
            }
        } else {
            v.qexp += (-k) as u32;
        }
        v.normalize();
        v
    }

    /// Exact integer value of `q^k` as a cyclotomic constant.
    pub fn q_power(p: u64, q: u64, k: i32) -> CycloValue {
        CycloValue::one(p, q).scale_q_pow(k)
    }
}

/// The fixed additive character `theta(x) = zeta_p^{Tr(x)}`.
pub fn theta(field: &Field, x: Fq) -> CycloValue {
    CycloValue::root_of_unity(field.p(), field.q(), field.trace(x) as i64)
}
