//! Arithmetic in GF(p^k) for q = p^k <= 2^16.
//!
//! An element is an index in `0..q` whose base-p digits are the coefficients
//! of a polynomial in the field generator `t`, lowest degree in the lowest
//! digit. For k = 1 the index is simply the residue mod p.

use alloc::{sync::Arc, vec, vec::Vec};
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A field element, stored as its index.
pub type Fe = u16;

pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Extension fields up to this order get full addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// Shipped moduli (Conway polynomials), coefficients of `t^0..t^{k-1}`; the
/// leading `t^k` is implicit.
const SHIPPED_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (3, 6, &[2, 2, 1, 0, 2, 0]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (5, 4, &[2, 4, 4, 0]),
    (7, 2, &[3, 6]),
    (7, 3, &[4, 0, 6]),
    (7, 4, &[3, 4, 5, 0]),
    (11, 2, &[2, 7]),
    (13, 2, &[2, 12]),
];

/// The six operations exposed through [`Field::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^b` with `b` read as a non-negative integer.
    Pow,
    /// `a^(p^b)`.
    Frobenius,
}

enum Arith {
    Prime,
    Table { add: Vec<Fe>, mul: Vec<Fe> },
    Zech { zech: Vec<u32> },
}

pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, `k + 1` coefficients lowest first. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)` so that sums of two logs need no reduction.
    exp: Vec<Fe>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<Fe>,
    arith: Arith,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u32, k: u32) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Parameter("extension degree must be at least 1".into()));
    }
    let mut q: u64 = 1;
    for _ in 0..k {
        q *= p as u64;
        if q > MAX_FIELD_ORDER as u64 {
            return Err(Error::FieldTooLarge { p, k });
        }
    }
    Ok(q as u32)
}

/// Shipped modulus for GF(p^k), if the table has one.
pub fn shipped_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    SHIPPED_MODULI
        .iter()
        .find(|(pp, kk, _)| *pp == p && *kk == k)
        .map(|(_, _, low)| {
            let mut m = low.to_vec();
            m.push(1);
            m
        })
}

impl Field {
    /// GF(p^k) with the shipped modulus, or the least primitive monic
    /// polynomial (ordered by the integer its low coefficients encode) when
    /// none is shipped.
    pub fn new(p: u32, k: u32) -> Result<Arc<Field>> {
        checked_order(p, k)?;
        if k == 1 {
            return Self::with_modulus(p, 1, &[0, 1]);
        }
        if let Some(m) = shipped_modulus(p, k) {
            return Self::with_modulus(p, k, &m);
        }
        let prime = Self::with_modulus(p, 1, &[0, 1])?;
        let count = p.pow(k);
        for code in 0..count {
            let mut m = digits(code, p, k);
            m.push(1);
            let f = Poly::from_u32(&prime, &m);
            if m[0] != 0 && f.is_irreducible() && f.is_primitive() {
                return Self::with_modulus(p, k, &m);
            }
        }
        Err(Error::BadModulus(k))
    }

    /// GF(p^k) = GF(p)[t]/(modulus). `modulus` lists `k + 1` coefficients,
    /// lowest first, and must be monic and irreducible.
    pub fn with_modulus(p: u32, k: u32, modulus: &[u32]) -> Result<Arc<Field>> {
        let q = checked_order(p, k)?;
        if modulus.len() != k as usize + 1
            || modulus[k as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::BadModulus(k));
        }
        if k > 1 {
            let prime = Self::with_modulus(p, 1, &[0, 1])?;
            if !Poly::from_u32(&prime, modulus).is_irreducible() {
                return Err(Error::BadModulus(k));
            }
        }
        let modulus = if k == 1 { vec![0, 1] } else { modulus.to_vec() };
        let ring = DigitRing { p, k, modulus: &modulus };

        let gen = ring.primitive_element(q);
        let n = (q - 1) as usize;
        let mut exp = vec![0 as Fe; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x as Fe;
            exp[i + n] = x as Fe;
            log[x as usize] = i as u32;
            x = ring.mul(x, gen);
        }
        if q == 2 {
            exp = vec![1, 1];
        }
        let neg: Vec<Fe> = (0..q).map(|a| ring.neg(a) as Fe).collect();

        let arith = if k == 1 {
            Arith::Prime
        } else if q <= TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0 as Fe; qs * qs];
            let mut mul = vec![0 as Fe; qs * qs];
            for a in 0..qs {
                for b in 0..qs {
                    add[a * qs + b] = ring.add(a as u32, b as u32) as Fe;
                    mul[a * qs + b] = if a == 0 || b == 0 {
                        0
                    } else {
                        exp[(log[a] + log[b]) as usize]
                    };
                }
            }
            Arith::Table { add, mul }
        } else {
            // zech[i] = log(1 + g^i), or u32::MAX when 1 + g^i = 0.
            let zech = (0..n)
                .map(|i| {
                    let s = ring.add(1, exp[i] as u32);
                    if s == 0 {
                        u32::MAX
                    } else {
                        log[s as usize]
                    }
                })
                .collect();
            Arith::Zech { zech }
        };

        Ok(Arc::new(Field { p, k, q, modulus, exp, log, neg, arith }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Same field up to representation (characteristic, degree, modulus).
    pub fn same(&self, other: &Field) -> bool {
        core::ptr::eq(self, other)
            || (self.p == other.p && self.k == other.k && self.modulus == other.modulus)
    }

    pub fn primitive(&self) -> Fe {
        self.exp[if self.q == 2 { 0 } else { 1 }]
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.arith {
            Arith::Prime => ((a as u32 + b as u32) % self.p) as Fe,
            Arith::Table { add, .. } => add[a as usize * self.q as usize + b as usize],
            Arith::Zech { zech } => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let n = self.q - 1;
                let la = self.log[a as usize];
                let lb = self.log[b as usize];
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = zech[d as usize];
                if z == u32::MAX {
                    0
                } else {
                    self.exp[(la + z) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.arith {
            Arith::Prime => ((a as u32 * b as u32) % self.p) as Fe,
            Arith::Table { mul, .. } => mul[a as usize * self.q as usize + b as usize],
            Arith::Zech { .. } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
                }
            }
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Ok(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// `a^(p^i)`; `i` is reduced mod k.
    pub fn frobenius_pow(&self, a: Fe, i: u32) -> Fe {
        (0..i % self.k).fold(a, |x, _| self.frobenius(x))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Ok(n / gcd(n, l))
    }

    pub fn log(&self, a: Fe) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn apply(&self, op: ArithOp, a: Fe, b: Fe) -> Result<Fe> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Pow => self.pow(a, b as u64),
            ArithOp::Frobenius => self.frobenius_pow(a, b as u32),
        })
    }

    /// Reduce an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as Fe
    }

    /// Interpret an integer as an element index; negative values denote the
    /// additive inverse of the element with index `|n|`.
    pub fn from_index(&self, n: i64) -> Result<Fe> {
        let a = n.unsigned_abs();
        if a >= self.q as u64 {
            return Err(Error::ElementOutOfRange { value: n, q: self.q });
        }
        Ok(if n < 0 { self.neg(a as Fe) } else { a as Fe })
    }

    /// Element from coefficients of `t^0, t^1, ...` (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Fe> {
        if coeffs.len() > self.k as usize {
            return Err(Error::Dimension("too many coefficients for field element".into()));
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c.rem_euclid(self.p as i64) as u32;
        }
        Ok(idx as Fe)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a as u32, self.p, self.k)
    }

    /// The element `t` (the class of the indeterminate); for prime fields 0.
    pub fn generator_t(&self) -> Fe {
        if self.k == 1 {
            0
        } else {
            self.p as Fe
        }
    }

    /// Images of all elements under an embedding into `big`, which must be
    /// GF(p^{km}). The image of `t` is the least-index root of the modulus.
    pub fn embedding_into(&self, big: &Field) -> Result<Vec<Fe>> {
        if big.p != self.p || !big.k.is_multiple_of(self.k) {
            return Err(Error::FieldMismatch);
        }
        let beta = if self.k == 1 {
            0
        } else {
            (0..big.q as Fe)
                .find(|&x| {
                    let mut acc: Fe = 0;
                    for &c in self.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, x), c as Fe);
                    }
                    acc == 0
                })
                .ok_or(Error::FieldMismatch)?
        };
        let mut powers = vec![1 as Fe; self.k as usize];
        for i in 1..self.k as usize {
            powers[i] = big.mul(powers[i - 1], beta);
        }
        Ok((0..self.q)
            .map(|a| {
                digits(a, self.p, self.k)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&c, &b)| big.add(acc, big.mul(c as Fe, b)))
            })
            .collect())
    }

    // ---- vector kernels -------------------------------------------------

    /// `y += c * x`.
    pub fn axpy(&self, y: &mut [Fe], c: Fe, x: &[Fe]) {
        debug_assert_eq!(y.len(), x.len());
        if c == 0 {
            return;
        }
        match &self.arith {
            Arith::Prime => {
                let p = self.p;
                let c = c as u32;
                for (yi, &xi) in y.iter_mut().zip(x) {
                    *yi = ((*yi as u32 + c * xi as u32) % p) as Fe;
                }
            }
            Arith::Table { add, mul } => {
                let q = self.q as usize;
                let mrow = &mul[c as usize * q..(c as usize + 1) * q];
                for (yi, &xi) in y.iter_mut().zip(x) {
                    *yi = add[*yi as usize * q + mrow[xi as usize] as usize];
                }
            }
            Arith::Zech { .. } => {
                for (yi, &xi) in y.iter_mut().zip(x) {
                    *yi = self.add(*yi, self.mul(c, xi));
                }
            }
        }
    }

    /// `y -= c * x`.
    #[inline]
    pub fn axmy(&self, y: &mut [Fe], c: Fe, x: &[Fe]) {
        self.axpy(y, self.neg(c), x)
    }

    pub fn scale(&self, y: &mut [Fe], c: Fe) {
        for yi in y.iter_mut() {
            *yi = self.mul(*yi, c);
        }
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        debug_assert_eq!(a.len(), b.len());
        match &self.arith {
            Arith::Prime => {
                let acc: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
                (acc % self.p as u64) as Fe
            }
            Arith::Table { add, mul } => {
                let q = self.q as usize;
                a.iter().zip(b).fold(0 as Fe, |acc, (&x, &y)| {
                    add[acc as usize * q + mul[x as usize * q + y as usize] as usize]
                })
            }
            Arith::Zech { .. } => a
                .iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y))),
        }
    }

    /// Row-major product of an `n x m` and an `m x l` block, written into `out`.
    pub(crate) fn matmul_into(&self, a: &[Fe], b: &[Fe], n: usize, m: usize, l: usize, out: &mut [Fe]) {
        debug_assert_eq!(a.len(), n * m);
        debug_assert_eq!(b.len(), m * l);
        debug_assert_eq!(out.len(), n * l);
        match &self.arith {
            Arith::Prime => {
                let p = self.p as u64;
                let mut acc = vec![0u64; l];
                for i in 0..n {
                    acc.iter_mut().for_each(|x| *x = 0);
                    for (kk, &aik) in a[i * m..(i + 1) * m].iter().enumerate() {
                        if aik == 0 {
                            continue;
                        }
                        let aik = aik as u64;
                        for (x, &bkj) in acc.iter_mut().zip(&b[kk * l..(kk + 1) * l]) {
                            *x += aik * bkj as u64;
                        }
                    }
                    for (o, &x) in out[i * l..(i + 1) * l].iter_mut().zip(&acc) {
                        *o = (x % p) as Fe;
                    }
                }
            }
            _ => {
                out.iter_mut().for_each(|x| *x = 0);
                for i in 0..n {
                    let (row_out, _) = out[i * l..].split_at_mut(l);
                    for kk in 0..m {
                        self.axpy(row_out, a[i * m + kk], &b[kk * l..(kk + 1) * l]);
                    }
                }
            }
        }
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = vec![0u32; k as usize];
    for x in d.iter_mut() {
        *x = a % p;
        a /= p;
    }
    d
}

/// GF(p)[t]/(modulus) on digit-encoded indices; only used to build tables.
struct DigitRing<'a> {
    p: u32,
    k: u32,
    modulus: &'a [u32],
}

impl DigitRing<'_> {
    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = digits(a, self.p, self.k)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.encode(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, k) = (self.p as u64, self.k as usize);
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let sub = c * self.modulus[j] as u64 % p;
                prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        let d: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
        self.encode(&d)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `t` when it is primitive, otherwise the least-index primitive element.
    fn primitive_element(&self, q: u32) -> u32 {
        let n = q - 1;
        if n == 1 {
            return 1;
        }
        let primes = prime_factors(n as u64);
        let is_prim = |g: u32| g != 0 && primes.iter().all(|&r| self.pow(g, (n as u64) / r) != 1);
        let t = if self.k == 1 { 2 } else { self.p };
        if is_prim(t) {
            return t;
        }
        (2..q).find(|&g| is_prim(g)).expect("a finite field has a primitive element")
    }
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
