//! Univariate polynomials over a [`Field`], with Berlekamp factorization.

use alloc::{sync::Arc, vec, vec::Vec};
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{prime_factors, Fe, Field};

/// Coefficients lowest degree first; trailing zeros are always trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &Arc<Field>, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_u32(field: &Arc<Field>, coeffs: &[u32]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| c as Fe).collect())
    }

    pub fn zero(field: &Arc<Field>) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Arc<Field>, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn one(field: &Arc<Field>) -> Poly {
        Poly::constant(field, 1)
    }

    /// `t^n`.
    pub fn monomial(field: &Arc<Field>, n: usize) -> Poly {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        Poly { field: field.clone(), coeffs: c }
    }

    /// `t - a`.
    pub fn linear(field: &Arc<Field>, a: Fe) -> Poly {
        Poly::new(field, vec![field.neg(a), 1])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            f.axpy(&mut c[i..i + other.coeffs.len()], a, &other.coeffs);
        }
        Poly::new(f, c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if self.deg() < d.deg() || self.is_zero() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(d.lead())?;
        let dn = d.deg();
        let mut r = self.coeffs.clone();
        let mut q = vec![0; r.len() - dn];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dn], inv);
            q[i] = c;
            if c != 0 {
                f.axmy(&mut r[i..i + dn + 1], c, &d.coeffs);
            }
        }
        r.truncate(dn);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; panics in debug builds if the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        self.mul(other).div_exact(&self.gcd(other)).monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
            .collect();
        Poly::new(f, c)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_one()
    }

    /// Rabin's test over the coefficient field GF(q).
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.order() as u128;
        let f = self.monic();
        let x = Poly::monomial(&self.field, 1);
        // x^{q^j} mod f for j = 0..=n
        let mut frob = vec![x.rem(&f).unwrap()];
        for j in 0..n {
            let next = frob[j].pow_mod(q, &f).unwrap();
            frob.push(next);
        }
        if frob[n] != x.rem(&f).unwrap() {
            return false;
        }
        prime_factors(n as u64).iter().all(|&r| {
            let h = frob[n / r as usize].sub(&x);
            h.gcd(&f).is_one()
        })
    }

    /// `t` generates the multiplicative group of GF(q)[t]/(self). Assumes
    /// irreducibility.
    pub fn is_primitive(&self) -> bool {
        let n = match self.degree() {
            Some(n) if n >= 1 => n as u32,
            _ => return false,
        };
        let q = self.field.order() as u128;
        let order = match q.checked_pow(n) {
            Some(v) => v - 1,
            None => return false,
        };
        if order > u64::MAX as u128 {
            return false;
        }
        let x = Poly::monomial(&self.field, 1);
        let f = self.monic();
        if x.rem(&f).unwrap().is_zero() {
            return false;
        }
        prime_factors(order as u64)
            .iter()
            .all(|&r| !x.pow_mod(order / r as u128, &f).unwrap().is_one())
    }

    /// `g` with `g^p = self`; requires every exponent with nonzero
    /// coefficient to be divisible by p.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let k = f.degree();
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&a| f.frobenius_pow(a, k - 1))
            .collect();
        Poly::new(f, c)
    }

    /// Squarefree decomposition of a monic polynomial.
    fn squarefree_parts(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            for (g, m) in self.pth_root().squarefree_parts() {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.div_exact(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_exact(&y);
            if z.deg() > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w);
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_parts() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Berlekamp splitting of a monic squarefree polynomial.
    fn berlekamp(&self) -> Vec<Poly> {
        let f = &self.field;
        let n = self.deg();
        if n <= 1 {
            return vec![self.clone()];
        }
        let q = f.order() as u128;
        // Row i of Q holds t^{qi} mod self; fixed vectors of Q are the
        // Berlekamp subalgebra.
        let xq = Poly::monomial(f, 1).pow_mod(q, self).unwrap();
        let mut rows: Vec<Vec<Fe>> = Vec::with_capacity(n);
        let mut cur = Poly::one(f);
        for _ in 0..n {
            let mut r = cur.coeffs.clone();
            r.resize(n, 0);
            rows.push(r);
            cur = cur.mul(&xq).rem(self).unwrap();
        }
        // Solve v (Q - I) = 0, i.e. (Q - I)^T v^T = 0.
        let mut m = crate::mat::Mat::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let mut x = rows[i][j];
                if i == j {
                    x = f.sub(x, 1);
                }
                m.set(j, i, x);
            }
        }
        let basis = m.nullspace();
        let r = basis.len();
        if r == 1 {
            return vec![self.clone()];
        }
        let mut factors = vec![self.clone()];
        for v in basis.iter() {
            let v = Poly::new(f, v.clone());
            if v.deg() == 0 {
                continue;
            }
            let mut next = Vec::new();
            for h in factors.into_iter() {
                if h.deg() <= 1 {
                    next.push(h);
                    continue;
                }
                let mut rest = h;
                for c in 0..f.order() as Fe {
                    if rest.deg() <= 1 {
                        break;
                    }
                    let g = rest.gcd(&v.sub(&Poly::constant(f, c)));
                    if g.deg() > 0 && g.deg() < rest.deg() {
                        rest = rest.div_exact(&g).monic();
                        next.push(g);
                    }
                }
                next.push(rest);
            }
            factors = next;
            if factors.len() == r {
                break;
            }
        }
        factors
    }

    /// Irreducible monic factors with multiplicities, sorted by degree and
    /// then coefficients. The leading coefficient is dropped.
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (g, m) in self.monic().squarefree_parts() {
            for h in g.berlekamp() {
                let h = h.monic();
                match out.iter_mut().find(|(x, _)| *x == h) {
                    Some(e) => e.1 += m,
                    None => out.push((h, m)),
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.deg()
                .cmp(&b.0.deg())
                .then_with(|| a.0.coeffs.iter().rev().cmp(b.0.coeffs.iter().rev()))
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &Arc<Field>, c: &[u32]) -> Poly {
        Poly::from_u32(f, c)
    }

    #[test]
    fn t2_plus_1_splits_over_gf5() {
        let f = Field::new(5, 1).unwrap();
        let fac = p(&f, &[1, 0, 1]).factor().unwrap();
        // 2^2 = 3^2 = -1 mod 5, so t^2 + 1 = (t - 2)(t - 3) = (t + 3)(t + 2)
        assert_eq!(fac, vec![(p(&f, &[2, 1]), 1), (p(&f, &[3, 1]), 1)]);
    }

    #[test]
    fn repeated_linear_factor() {
        let f = Field::new(5, 1).unwrap();
        let t_minus_1 = Poly::linear(&f, 1);
        let sq = t_minus_1.mul(&t_minus_1);
        assert_eq!(sq.factor().unwrap(), vec![(t_minus_1, 2)]);
    }

    #[test]
    fn t2_plus_1_irreducible_over_gf3() {
        let f = Field::new(3, 1).unwrap();
        let g = p(&f, &[1, 0, 1]);
        assert!((0..3).all(|x| g.eval(x) != 0));
        assert!(g.is_irreducible());
        assert_eq!(g.factor().unwrap(), vec![(g, 1)]);
    }

    #[test]
    fn zero_polynomial_errors() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(Poly::zero(&f).factor(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn pth_power_factorization() {
        let f = Field::new(3, 2).unwrap();
        // (t^2 + 1)^3 (t + 5)^2 over GF(9); t^2 + 1 splits there.
        let a = p(&f, &[1, 0, 1]);
        let b = Poly::linear(&f, 5);
        let g = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fac = g.factor().unwrap();
        let total: usize = fac.iter().map(|(h, m)| h.deg() * m).sum();
        assert_eq!(total, 8);
        let prod = fac.iter().fold(Poly::one(&f), |acc, (h, m)| {
            (0..*m).fold(acc, |x, _| x.mul(h))
        });
        assert_eq!(prod, g);
    }

    #[test]
    fn divrem_reconstructs() {
        let f = Field::new(7, 1).unwrap();
        let a = p(&f, &[3, 1, 4, 1, 5, 6]);
        let b = p(&f, &[2, 0, 3]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < 2);
    }
}
