//! The residue field A/π ≅ F_{q^d} and series over it.

use std::fmt;

use super::field::{Elem, Fq};
use super::kernel;
use super::poly::{PolyA, PrimePi};

/// Element of A/π: a reduced polynomial of degree < d (coefficients
/// constant first, trimmed).
pub type ResElem = Vec<Elem>;

/// Arithmetic in A/π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResField {
    pi: PrimePi,
}

impl ResField {
    pub fn new(pi: PrimePi) -> ResField {
        ResField { pi }
    }

    pub fn pi(&self) -> &PrimePi {
        &self.pi
    }

    pub fn base(&self) -> &Fq {
        self.pi.field()
    }

    pub fn zero(&self) -> ResElem {
        Vec::new()
    }

    pub fn one(&self) -> ResElem {
        vec![1]
    }

    pub fn is_zero(&self, a: &ResElem) -> bool {
        a.is_empty()
    }

    pub fn reduce(&self, a: &PolyA) -> ResElem {
        if a.degree().map_or(true, |d| d < self.pi.degree()) {
            return a.coeffs().to_vec();
        }
        kernel::divrem(self.base(), a.coeffs(), self.pi.poly().coeffs()).1
    }

    pub fn from_elem(&self, c: Elem) -> ResElem {
        let mut v = vec![c];
        kernel::trim(&mut v);
        v
    }

    pub fn add(&self, a: &ResElem, b: &ResElem) -> ResElem {
        kernel::add(self.base(), a, b)
    }

    pub fn sub(&self, a: &ResElem, b: &ResElem) -> ResElem {
        kernel::sub(self.base(), a, b)
    }

    pub fn neg(&self, a: &ResElem) -> ResElem {
        kernel::neg(self.base(), a)
    }

    pub fn mul(&self, a: &ResElem, b: &ResElem) -> ResElem {
        let prod = kernel::mul(self.base(), a, b);
        if prod.len() <= self.pi.degree() {
            return prod;
        }
        kernel::divrem(self.base(), &prod, self.pi.poly().coeffs()).1
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: &ResElem) -> Option<ResElem> {
        if a.is_empty() {
            return None;
        }
        let f = self.base();
        let x = PolyA::from_coeffs(f, a.clone());
        let (g, s, _) = x.xgcd(self.pi.poly());
        debug_assert!(g.is_one());
        Some(self.reduce(&s))
    }

    pub fn pow(&self, a: &ResElem, mut e: u64) -> ResElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn to_poly(&self, a: &ResElem) -> PolyA {
        PolyA::from_coeffs(self.base(), a.clone())
    }

    /// Every element of A/π, in encoding order.
    pub fn elements(&self) -> Vec<ResElem> {
        let q = self.base().q() as u64;
        let d = self.pi.degree();
        (0..q.pow(d as u32))
            .map(|mut enc| {
                let mut v: Vec<Elem> = (0..d)
                    .map(|_| {
                        let c = (enc % q) as Elem;
                        enc /= q;
                        c
                    })
                    .collect();
                kernel::trim(&mut v);
                v
            })
            .collect()
    }

    pub fn elem_to_string(&self, a: &ResElem) -> String {
        self.to_poly(a).to_string()
    }
}

/// A power series over A/π known modulo u^prec.
#[derive(Clone, PartialEq, Eq)]
pub struct ResSeries {
    field: ResField,
    coeffs: Vec<ResElem>,
    prec: usize,
}

impl fmt::Debug for ResSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .take(6)
            .map(|(i, c)| format!("({})*u^{}", self.field.elem_to_string(c), i))
            .collect();
        write!(f, "[mod {}] {} + O(u^{})", self.field.pi(), terms.join(" + "), self.prec)
    }
}

impl ResSeries {
    pub fn new(field: ResField, mut coeffs: Vec<ResElem>, prec: usize) -> ResSeries {
        coeffs.resize(prec, Vec::new());
        ResSeries { field, coeffs, prec }
    }

    pub fn field(&self) -> &ResField {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeff(&self, i: usize) -> &ResElem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[ResElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_empty())
    }

    /// True when the series is the constant 1 to its precision.
    pub fn is_one(&self) -> bool {
        self.prec > 0 && self.coeffs[0] == [1] && self.coeffs[1..].iter().all(|c| c.is_empty())
    }

    /// First index below the common precision where the series differ.
    pub fn first_difference(&self, other: &ResSeries) -> Option<usize> {
        let n = self.prec.min(other.prec);
        (0..n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }
}
