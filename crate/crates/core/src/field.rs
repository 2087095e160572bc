//! Arithmetic in the prime field `F_p` and its quadratic extension.
//!
//! Residues are always stored in canonical form `[0, p)`. The modulus is
//! bounded by `2^31`, so every product of two residues fits in a `u64`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exclusive upper bound on the modulus.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Largest `p` for which dense `p x p` operators are built unless overridden.
pub const DEFAULT_DENSE_CAP: u64 = 1499;

/// A residue modulo the field's prime, in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(pub(crate) u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_p` for an odd prime `p < 2^31`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    dense_cap: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Self {
            p,
            dense_cap: DEFAULT_DENSE_CAP,
        })
    }

    pub fn with_dense_cap(mut self, cap: u64) -> Self {
        self.dense_cap = cap;
        self
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.p as usize
    }

    pub fn dense_cap(&self) -> u64 {
        self.dense_cap
    }

    /// Fails unless `p` is small enough for dense `p x p` matrices.
    pub fn require_dense(&self) -> Result<()> {
        if self.p > self.dense_cap {
            Err(Error::DenseCapExceeded {
                p: self.p,
                cap: self.dense_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn elem(&self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    pub fn from_u64(&self, v: u64) -> Fp {
        Fp(v % self.p)
    }

    /// Iterates over all residues `0, 1, ..., p - 1`.
    pub fn elements(&self) -> impl Iterator<Item = Fp> {
        (0..self.p).map(Fp)
    }

    /// Iterates over the nonzero residues `1, ..., p - 1`.
    pub fn units(&self) -> impl Iterator<Item = Fp> {
        (1..self.p).map(Fp)
    }

    #[inline]
    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 + b.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        Fp(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fp) -> Fp {
        Fp(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        Fp(a.0 * b.0 % self.p)
    }

    pub fn pow(&self, a: Fp, mut e: u64) -> Fp {
        let mut base = a.0;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Fp(acc)
    }

    pub fn inv(&self, a: Fp) -> Result<Fp> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: Fp, b: Fp) -> Result<Fp> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `1/2`, which exists because `p` is odd.
    pub fn half(&self) -> Fp {
        Fp(self.p.div_ceil(2))
    }

    /// Legendre symbol: `0` at zero, `1` on nonzero squares, `-1` otherwise.
    pub fn legendre(&self, a: Fp) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2).0 == 1 {
            1
        } else {
            -1
        }
    }

    /// The additive character `psi(z) = exp(2 pi i z / p)`.
    #[inline]
    pub fn psi(&self, z: Fp) -> Complex64 {
        Complex64::from_polar(1.0, TAU * z.0 as f64 / self.p as f64)
    }

    /// Table of `psi(z)` for every `z`, for dense loops.
    pub fn psi_table(&self) -> Vec<Complex64> {
        self.elements().map(|z| self.psi(z)).collect()
    }

    /// The smaller of the two square roots of `a`, if `a` is a square.
    pub fn sqrt(&self, a: Fp) -> Option<Fp> {
        if a.is_zero() {
            return Some(Fp::ZERO);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p;
        let root = if p % 4 == 3 {
            self.pow(a, (p + 1) / 4)
        } else {
            // Tonelli-Shanks.
            let mut q = p - 1;
            let mut s = 0u32;
            while q.is_multiple_of(2) {
                q /= 2;
                s += 1;
            }
            let z = self.nonresidue();
            let mut m = s;
            let mut c = self.pow(z, q);
            let mut t = self.pow(a, q);
            let mut r = self.pow(a, q.div_ceil(2));
            while t != Fp::ONE {
                let mut i = 0u32;
                let mut t2 = t;
                while t2 != Fp::ONE {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let b = self.pow(c, 1u64 << (m - i - 1));
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        Some(root.min(self.neg(root)))
    }

    /// The smallest `eps` in `[1, p)` with `eps^2 = -1`.
    pub fn sqrt_neg_one(&self) -> Result<Fp> {
        if self.p % 4 != 1 {
            return Err(Error::MinusOneNonResidue(self.p));
        }
        Ok(self
            .sqrt(self.neg(Fp::ONE))
            .expect("-1 is a square when p = 1 mod 4"))
    }

    /// The smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> Fp {
        if self.p == 3 {
            return Fp(2);
        }
        let n = self.p - 1;
        let factors = prime_factors(n);
        (2..self.p)
            .map(Fp)
            .find(|&r| factors.iter().all(|&q| self.pow(r, n / q) != Fp::ONE))
            .expect("F_p^x is cyclic")
    }

    /// The smallest quadratic non-residue in `[2, p)`.
    pub fn nonresidue(&self) -> Fp {
        (2..self.p)
            .map(Fp)
            .find(|&d| self.legendre(d) == -1)
            .expect("odd prime fields have non-residues")
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for q in SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

/// `F_{p^2}` modelled as `x + y sqrt(delta)` with `delta` a fixed non-residue.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    field: PrimeField,
    delta: Fp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtElement {
    pub x: Fp,
    pub y: Fp,
}

impl QuadraticExtension {
    pub fn new(field: &PrimeField) -> Self {
        Self {
            field: field.clone(),
            delta: field.nonresidue(),
        }
    }

    pub fn delta(&self) -> Fp {
        self.delta
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn one(&self) -> QuadExtElement {
        QuadExtElement {
            x: Fp::ONE,
            y: Fp::ZERO,
        }
    }

    pub fn mul(&self, u: QuadExtElement, v: QuadExtElement) -> QuadExtElement {
        let f = &self.field;
        let yy = f.mul(self.delta, f.mul(u.y, v.y));
        QuadExtElement {
            x: f.add(f.mul(u.x, v.x), yy),
            y: f.add(f.mul(u.x, v.y), f.mul(u.y, v.x)),
        }
    }

    /// `x^2 - delta y^2`, the determinant of multiplication by the element.
    pub fn norm(&self, u: QuadExtElement) -> Fp {
        let f = &self.field;
        f.sub(f.mul(u.x, u.x), f.mul(self.delta, f.mul(u.y, u.y)))
    }
}
