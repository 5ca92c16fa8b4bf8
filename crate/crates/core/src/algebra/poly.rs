//! The polynomial ring A = F_q[T].

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Elem, Fq};
use super::kernel;
use super::Valuation;
use crate::error::{Error, Result};

/// Dense polynomial over F_q in the variable T, constant coefficient first.
///
/// Canonical form has no trailing zeros; the zero polynomial has an empty
/// coefficient vector and degree `None` (standing for −∞).
#[derive(Clone)]
pub struct PolyA {
    field: Fq,
    coeffs: Vec<Elem>,
}

impl PartialEq for PolyA {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for PolyA {}

/// A deterministic total order (degree first, then coefficients from the top);
/// used only for canonical sorting.
impl Ord for PolyA {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for PolyA {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for PolyA {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PolyA {
    pub fn from_coeffs(field: &Fq, mut coeffs: Vec<Elem>) -> PolyA {
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        kernel::trim(&mut coeffs);
        PolyA { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Fq) -> PolyA {
        PolyA { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Fq) -> PolyA {
        PolyA::constant(field, 1)
    }

    pub fn constant(field: &Fq, c: Elem) -> PolyA {
        PolyA::from_coeffs(field, vec![c])
    }

    /// The image of an integer in the prime field, as a constant polynomial.
    pub fn from_int(field: &Fq, n: i64) -> PolyA {
        PolyA::constant(field, field.from_int(n))
    }

    /// The variable T.
    pub fn t(field: &Fq) -> PolyA {
        PolyA::monomial(field, 1, 1)
    }

    /// `c * T^e`.
    pub fn monomial(field: &Fq, c: Elem, e: usize) -> PolyA {
        if c == 0 {
            return PolyA::zero(field);
        }
        let mut v = vec![0; e + 1];
        v[e] = c;
        PolyA { field: field.clone(), coeffs: v }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    /// Coefficient of T^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Number of nonzero terms.
    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Scales to a monic polynomial; zero stays zero.
    pub fn monic(&self) -> PolyA {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&l) => self.scale(self.field.inv(l)),
        }
    }

    pub fn scale(&self, c: Elem) -> PolyA {
        PolyA { field: self.field.clone(), coeffs: kernel::scale(&self.field, &self.coeffs, c) }
    }

    /// Multiplies by T^k.
    pub fn shift(&self, k: usize) -> PolyA {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        PolyA { field: self.field.clone(), coeffs: v }
    }

    pub fn pow(&self, mut e: u64) -> PolyA {
        let mut base = self.clone();
        let mut acc = PolyA::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(T)^(p^k)` computed coefficientwise, using that raising to the
    /// p-th power is a ring endomorphism in characteristic p.
    pub fn frobenius_pow(&self, k: u32) -> PolyA {
        let f = &self.field;
        let step = (f.p() as usize).pow(k);
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; (self.coeffs.len() - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut x = c;
            for _ in 0..k {
                x = f.frobenius(x);
            }
            v[i * step] = x;
        }
        PolyA { field: f.clone(), coeffs: v }
    }

    /// `self^q`.
    pub fn pow_q(&self) -> PolyA {
        // Coefficients lie in F_q, so only the exponents move.
        let q = self.field.q() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; (self.coeffs.len() - 1) * q + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * q] = c;
        }
        PolyA { field: self.field.clone(), coeffs: v }
    }

    /// Quotient and remainder; panics on division by zero (a caller bug).
    pub fn divrem(&self, m: &PolyA) -> (PolyA, PolyA) {
        let (qt, r) = kernel::divrem(&self.field, &self.coeffs, &m.coeffs);
        (
            PolyA { field: self.field.clone(), coeffs: qt },
            PolyA { field: self.field.clone(), coeffs: r },
        )
    }

    pub fn rem(&self, m: &PolyA) -> PolyA {
        self.divrem(m).1
    }

    /// Exact quotient, `None` if `m` does not divide `self`.
    pub fn div_exact(&self, m: &PolyA) -> Option<PolyA> {
        let (qt, r) = self.divrem(m);
        r.is_zero().then_some(qt)
    }

    pub fn divides(&self, other: &PolyA) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &PolyA) -> PolyA {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn xgcd(&self, other: &PolyA) -> (PolyA, PolyA, PolyA) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyA::one(f), PolyA::zero(f));
        let (mut t0, mut t1) = (PolyA::zero(f), PolyA::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qt * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&qt * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = f.inv(r0.leading());
        (r0.scale(l), s0.scale(l), t0.scale(l))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        kernel::eval(&self.field, &self.coeffs, x)
    }

    /// Largest e with π^e | self; +∞ for zero.
    pub fn ord_at(&self, pi: &PrimePi) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let mut e = 0;
        let mut cur = self.clone();
        loop {
            let (qt, r) = cur.divrem(&pi.pi);
            if !r.is_zero() {
                return Valuation::Finite(e);
            }
            cur = qt;
            e += 1;
        }
    }

    /// Splits off the exact power of π: returns (e, self / π^e). Zero input
    /// returns (0, 0).
    pub fn split_pi(&self, pi: &PrimePi) -> (i64, PolyA) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let mut e = 0;
        let mut cur = self.clone();
        loop {
            let (qt, r) = cur.divrem(&pi.pi);
            if !r.is_zero() {
                return (e, cur);
            }
            cur = qt;
            e += 1;
        }
    }

    /// Every monic polynomial of degree exactly `deg`, ordered
    /// lexicographically on the coefficient tuple read from T^(deg-1) down
    /// to the constant coefficient.
    pub fn monics_of_degree(field: &Fq, deg: usize) -> Vec<PolyA> {
        let q = field.q() as u64;
        let count = q.pow(deg as u32);
        (0..count)
            .map(|mut enc| {
                let mut v = vec![0; deg + 1];
                v[deg] = 1;
                // The least significant digit is the constant coefficient,
                // which therefore varies fastest.
                for c in v.iter_mut().take(deg) {
                    *c = (enc % q) as Elem;
                    enc /= q;
                }
                PolyA { field: field.clone(), coeffs: v }
            })
            .collect()
    }
}

impl Add for &PolyA {
    type Output = PolyA;
    fn add(self, rhs: &PolyA) -> PolyA {
        PolyA { field: self.field.clone(), coeffs: kernel::add(&self.field, &self.coeffs, &rhs.coeffs) }
    }
}

impl Sub for &PolyA {
    type Output = PolyA;
    fn sub(self, rhs: &PolyA) -> PolyA {
        PolyA { field: self.field.clone(), coeffs: kernel::sub(&self.field, &self.coeffs, &rhs.coeffs) }
    }
}

impl Mul for &PolyA {
    type Output = PolyA;
    fn mul(self, rhs: &PolyA) -> PolyA {
        PolyA { field: self.field.clone(), coeffs: kernel::mul(&self.field, &self.coeffs, &rhs.coeffs) }
    }
}

impl Neg for &PolyA {
    type Output = PolyA;
    fn neg(self) -> PolyA {
        PolyA { field: self.field.clone(), coeffs: kernel::neg(&self.field, &self.coeffs) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyA {
            type Output = PolyA;
            fn $m(self, rhs: PolyA) -> PolyA {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A monic irreducible polynomial π of degree d ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePi {
    pi: PolyA,
    d: usize,
}

impl PrimePi {
    /// Validates monicity and irreducibility (trial division by every monic
    /// polynomial of degree at most d/2).
    pub fn new(pi: PolyA) -> Result<PrimePi> {
        let d = match pi.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidPrime(format!("{pi} has degree < 1"))),
        };
        if !pi.is_monic() {
            return Err(Error::InvalidPrime(format!("{pi} is not monic")));
        }
        for k in 1..=d / 2 {
            for g in PolyA::monics_of_degree(pi.field(), k) {
                if g.divides(&pi) {
                    return Err(Error::InvalidPrime(format!("{pi} is reducible (divisible by {g})")));
                }
            }
        }
        Ok(PrimePi { pi, d })
    }

    pub fn poly(&self) -> &PolyA {
        &self.pi
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Fq {
        self.pi.field()
    }

    /// Order q^d of the residue field A/π.
    pub fn norm(&self) -> u64 {
        (self.field().q() as u64).pow(self.d as u32)
    }
}

impl fmt::Display for PrimePi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pi)
    }
}
