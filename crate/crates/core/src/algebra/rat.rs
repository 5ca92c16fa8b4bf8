//! The rational function field K = F_q(T).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::{Elem, Fq};
use super::poly::{PolyA, PrimePi};
use super::Valuation;

/// A reduced fraction num/den with den monic and gcd(num, den) = 1.
/// Ordering is by (den, num) and serves canonical sorting only.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatK {
    den: PolyA,
    num: PolyA,
}

impl fmt::Debug for RatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl RatK {
    /// Builds num/den in canonical form. Panics if den is zero (caller bug).
    pub fn new(num: PolyA, den: PolyA) -> RatK {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let f = num.field().clone();
            return RatK { num, den: PolyA::one(&f) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let l = den.leading();
        if l == 1 {
            RatK { num, den }
        } else {
            let li = num.field().inv(l);
            RatK { num: num.scale(li), den: den.scale(li) }
        }
    }

    pub fn from_poly(num: PolyA) -> RatK {
        let f = num.field().clone();
        RatK { num, den: PolyA::one(&f) }
    }

    pub fn zero(field: &Fq) -> RatK {
        RatK::from_poly(PolyA::zero(field))
    }

    pub fn one(field: &Fq) -> RatK {
        RatK::from_poly(PolyA::one(field))
    }

    pub fn constant(field: &Fq, c: Elem) -> RatK {
        RatK::from_poly(PolyA::constant(field, c))
    }

    pub fn from_int(field: &Fq, n: i64) -> RatK {
        RatK::from_poly(PolyA::from_int(field, n))
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(poly)` when the denominator is 1.
    pub fn as_poly(&self) -> Option<&PolyA> {
        self.den.is_one().then_some(&self.num)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<RatK> {
        if self.is_zero() {
            return None;
        }
        Some(RatK::new(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: Elem) -> RatK {
        if c == 0 {
            return RatK::zero(self.field());
        }
        RatK { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> RatK {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        RatK { num: self.num.pow(e as u64), den: self.den.pow(e as u64) }
    }

    /// `self^q`, computed by spreading exponents.
    pub fn pow_q(&self) -> RatK {
        RatK { num: self.num.pow_q(), den: self.den.pow_q() }
    }

    /// π-adic valuation: ord(num) − ord(den), +∞ for zero.
    pub fn vpi(&self, pi: &PrimePi) -> Valuation {
        match self.num.ord_at(pi) {
            Valuation::Infinity => Valuation::Infinity,
            Valuation::Finite(a) => {
                let b = self.den.ord_at(pi).finite().expect("denominator is nonzero");
                Valuation::Finite(a - b)
            }
        }
    }
}

impl Add for &RatK {
    type Output = RatK;
    fn add(self, rhs: &RatK) -> RatK {
        if self.den == rhs.den {
            return RatK::new(&self.num + &rhs.num, self.den.clone());
        }
        RatK::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatK {
    type Output = RatK;
    fn sub(self, rhs: &RatK) -> RatK {
        self + &(-rhs)
    }
}

impl Neg for &RatK {
    type Output = RatK;
    fn neg(self) -> RatK {
        RatK { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatK {
    type Output = RatK;
    fn mul(self, rhs: &RatK) -> RatK {
        // Cross-cancel first to keep the products small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap_or_else(|| self.num.clone());
        let d2 = rhs.den.div_exact(&g1).unwrap_or_else(|| rhs.den.clone());
        let n2 = rhs.num.div_exact(&g2).unwrap_or_else(|| rhs.num.clone());
        let d1 = self.den.div_exact(&g2).unwrap_or_else(|| self.den.clone());
        if n1.is_zero() || n2.is_zero() {
            return RatK::zero(self.field());
        }
        RatK::new(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RatK {
    type Output = RatK;
    fn div(self, rhs: &RatK) -> RatK {
        self * &rhs.inv().expect("division by zero in K")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatK {
            type Output = RatK;
            fn $m(self, rhs: RatK) -> RatK {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    fn p(field: &Fq, c: &[u32]) -> PolyA {
        PolyA::from_coeffs(field, c.to_vec())
    }

    #[test]
    fn canonical_form() {
        let f = f3();
        // (2T^2 + 2T) / (2T + 1) = (T^2 + T)/(T + 2)
        let x = RatK::new(p(&f, &[0, 2, 2]), p(&f, &[1, 2]));
        assert!(x.den().is_monic());
        assert_eq!(x.num(), &p(&f, &[0, 1, 1]));
        // T(T+1) / (T (T+2)) = (T+1)/(T+2)
        let y = RatK::new(p(&f, &[0, 1, 1]), p(&f, &[0, 2, 1]));
        assert_eq!(y, RatK::new(p(&f, &[1, 1]), p(&f, &[2, 1])));
    }

    #[test]
    fn valuation_examples() {
        let f = f3();
        let t = PrimePi::new(PolyA::t(&f)).unwrap();
        assert_eq!(RatK::new(p(&f, &[0, 1, 1]), p(&f, &[2, 1])).vpi(&t), Valuation::Finite(1));
        assert_eq!(RatK::new(PolyA::one(&f), PolyA::t(&f)).vpi(&t), Valuation::Finite(-1));
        assert_eq!(RatK::constant(&f, 2).vpi(&t), Valuation::Finite(0));
        assert_eq!(RatK::zero(&f).vpi(&t), Valuation::Infinity);
    }

    #[test]
    fn field_operations() {
        let f = f3();
        let a = RatK::new(p(&f, &[1, 1]), p(&f, &[0, 0, 1]));
        let b = RatK::new(p(&f, &[2, 0, 1]), p(&f, &[1, 2, 1]));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert!((&a - &a).is_zero());
        assert_eq!(a.pow(3), a.pow_q());
        assert!((&a * &a.inv().unwrap()).is_one());
    }
}
