//! Truncated power series in u over K = F_q(T).
//!
//! A series is stored in common-denominator form: numerators in A for every
//! known coefficient plus one monic denominator, kept coprime to the
//! numerators as a whole. Level-one forms have A-integral expansions, so the
//! denominator is usually 1 and every product is a plain A-bilinear
//! convolution.

use std::fmt;

use super::field::{Elem, Fq};
use super::kernel::{self, MulAcc};
use super::poly::{PolyA, PrimePi};
use super::rat::RatK;
use super::residue::{ResField, ResSeries};
use super::Valuation;
use crate::error::{Error, Result};

/// A power series Σ a_i u^i known modulo u^prec.
#[derive(Clone)]
pub struct USeries {
    field: Fq,
    /// Numerators of the coefficients; `num.len() == prec`.
    num: Vec<Vec<Elem>>,
    den: PolyA,
    prec: usize,
}

impl PartialEq for USeries {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.den == other.den && self.num == other.num
    }
}

impl Eq for USeries {}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..self.prec {
            if !self.num[i].is_empty() {
                terms.push(format!("({})*u^{}", self.coeff(i), i));
            }
            if terms.len() >= 6 {
                terms.push("...".into());
                break;
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(u^{})", terms.join(" + "), self.prec)
    }
}

impl USeries {
    /// Builds a series from raw numerators and a nonzero denominator; the
    /// numerator vector is truncated or zero-padded to `prec`.
    pub fn from_raw(field: &Fq, mut num: Vec<Vec<Elem>>, den: PolyA, prec: usize) -> USeries {
        num.resize(prec, Vec::new());
        for c in num.iter_mut() {
            kernel::trim(c);
        }
        let mut s = USeries { field: field.clone(), num, den, prec };
        s.normalize();
        s
    }

    pub fn from_polys(field: &Fq, coeffs: Vec<PolyA>, prec: usize) -> USeries {
        let num = coeffs.into_iter().map(PolyA::into_coeffs).collect();
        USeries::from_raw(field, num, PolyA::one(field), prec)
    }

    /// Series with the given K-coefficients (missing ones are zero).
    pub fn from_rats(field: &Fq, coeffs: &[RatK], prec: usize) -> USeries {
        let mut den = PolyA::one(field);
        for c in coeffs.iter().take(prec) {
            if !c.den().is_one() {
                let g = den.gcd(c.den());
                den = &den * &c.den().div_exact(&g).expect("gcd divides");
            }
        }
        let num = coeffs
            .iter()
            .take(prec)
            .map(|c| {
                let m = den.div_exact(c.den()).expect("common denominator");
                (c.num() * &m).into_coeffs()
            })
            .collect();
        USeries::from_raw(field, num, den, prec)
    }

    pub fn zero(field: &Fq, prec: usize) -> USeries {
        USeries::from_raw(field, Vec::new(), PolyA::one(field), prec)
    }

    /// The constant series c.
    pub fn constant(c: &RatK, prec: usize) -> USeries {
        USeries::monomial(c, 0, prec)
    }

    pub fn one(field: &Fq, prec: usize) -> USeries {
        USeries::constant(&RatK::one(field), prec)
    }

    /// c·u^e modulo u^prec.
    pub fn monomial(c: &RatK, e: usize, prec: usize) -> USeries {
        let field = c.field().clone();
        let mut num = vec![Vec::new(); prec];
        if e < prec {
            num[e] = c.num().coeffs().to_vec();
        }
        USeries::from_raw(&field, num, c.den().clone(), prec)
    }

    /// The uniformizer u itself.
    pub fn u(field: &Fq, prec: usize) -> USeries {
        USeries::monomial(&RatK::one(field), 1, prec)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Common denominator of all coefficients (monic).
    pub fn den(&self) -> &PolyA {
        &self.den
    }

    /// Numerator of the u^i coefficient relative to [`Self::den`].
    pub fn num(&self, i: usize) -> &[Elem] {
        &self.num[i]
    }

    pub fn nums(&self) -> &[Vec<Elem>] {
        &self.num
    }

    /// Coefficient of u^i; panics if i is beyond the precision.
    pub fn coeff(&self, i: usize) -> RatK {
        assert!(i < self.prec, "coefficient {i} requested beyond precision {}", self.prec);
        RatK::new(PolyA::from_coeffs(&self.field, self.num[i].clone()), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<RatK> {
        (0..self.prec).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff_is_zero(&self, i: usize) -> bool {
        self.num[i].is_empty()
    }

    /// Index of the first nonzero known coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.num.iter().position(|c| !c.is_empty())
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.ord().is_none()
    }

    /// Greatest common divisor of the differences between indices of
    /// nonzero coefficients (0 if there are fewer than two).
    pub fn support_stride(&self) -> usize {
        let mut it = self.num.iter().enumerate().filter(|(_, c)| !c.is_empty()).map(|(i, _)| i);
        let first = match it.next() {
            Some(i) => i,
            None => return 0,
        };
        it.fold(0, |g, i| gcd(g, i - first))
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.prec).filter(|&i| !self.num[i].is_empty()).collect()
    }

    /// Largest T-degree among the numerators.
    pub fn max_num_degree(&self) -> usize {
        self.num.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_empty()) {
            self.den = PolyA::one(&self.field);
            return;
        }
        if !self.den.is_monic() {
            let li = self.field.inv(self.den.leading());
            self.den = self.den.scale(li);
            for c in self.num.iter_mut() {
                *c = kernel::scale(&self.field, c, li);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if c.is_empty() {
                continue;
            }
            g = g.gcd(&PolyA::from_coeffs(&self.field, c.clone()));
            if g.is_one() {
                return;
            }
        }
        self.den = self.den.div_exact(&g).expect("gcd divides");
        for c in self.num.iter_mut() {
            if !c.is_empty() {
                *c = kernel::divrem(&self.field, c, g.coeffs()).0;
            }
        }
    }

    /// Reduces the precision to `min(prec, n)`.
    pub fn truncate(&self, n: usize) -> USeries {
        if n >= self.prec {
            return self.clone();
        }
        USeries::from_raw(&self.field, self.num[..n].to_vec(), self.den.clone(), n)
    }

    /// Rewrites numerators over a multiple `new_den` of the denominator.
    fn nums_over(&self, new_den: &PolyA) -> Vec<Vec<Elem>> {
        let m = new_den.div_exact(&self.den).expect("denominator multiple");
        if m.is_one() {
            return self.num.clone();
        }
        self.num.iter().map(|c| kernel::mul(&self.field, c, m.coeffs())).collect()
    }

    fn combine(&self, other: &USeries, negate: bool) -> USeries {
        let prec = self.prec.min(other.prec);
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            let g = self.den.gcd(&other.den);
            &self.den * &other.den.div_exact(&g).expect("gcd divides")
        };
        let a = self.truncate(prec).nums_over(&den);
        let b = other.truncate(prec).nums_over(&den);
        let f = &self.field;
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| if negate { kernel::sub(f, x, y) } else { kernel::add(f, x, y) })
            .collect();
        USeries::from_raw(f, num, den, prec)
    }

    /// Sum; precision is the minimum of the two.
    pub fn add(&self, other: &USeries) -> USeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &USeries) -> USeries {
        self.combine(other, true)
    }

    pub fn neg(&self) -> USeries {
        USeries {
            field: self.field.clone(),
            num: self.num.iter().map(|c| kernel::neg(&self.field, c)).collect(),
            den: self.den.clone(),
            prec: self.prec,
        }
    }

    pub fn scale_elem(&self, c: Elem) -> USeries {
        if c == 0 {
            return USeries::zero(&self.field, self.prec);
        }
        USeries {
            field: self.field.clone(),
            num: self.num.iter().map(|x| kernel::scale(&self.field, x, c)).collect(),
            den: self.den.clone(),
            prec: self.prec,
        }
    }

    pub fn scale_int(&self, n: i64) -> USeries {
        self.scale_elem(self.field.from_int(n))
    }

    pub fn scale(&self, c: &RatK) -> USeries {
        if c.is_zero() {
            return USeries::zero(&self.field, self.prec);
        }
        let num = if c.num().is_one() {
            self.num.clone()
        } else {
            self.num.iter().map(|x| kernel::mul(&self.field, x, c.num().coeffs())).collect()
        };
        USeries::from_raw(&self.field, num, &self.den * c.den(), self.prec)
    }

    pub fn scale_poly(&self, c: &PolyA) -> USeries {
        self.scale(&RatK::from_poly(c.clone()))
    }

    /// Multiplies by u^k; precision grows by k.
    pub fn shift_up(&self, k: usize) -> USeries {
        let mut num = vec![Vec::new(); k];
        num.extend(self.num.iter().cloned());
        USeries { field: self.field.clone(), num, den: self.den.clone(), prec: self.prec + k }
    }

    /// Divides by u^k; the first k coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<USeries> {
        if k > self.prec || self.num[..k].iter().any(|c| !c.is_empty()) {
            return Err(Error::InvalidArgument(format!("series is not divisible by u^{k}")));
        }
        Ok(USeries {
            field: self.field.clone(),
            num: self.num[k..].to_vec(),
            den: self.den.clone(),
            prec: self.prec - k,
        })
    }

    /// Product. Precision: min(prec_f + ord_g, prec_g + ord_f), where ord is
    /// the index of the first nonzero known coefficient (0 if none).
    pub fn mul(&self, other: &USeries) -> USeries {
        let of = self.ord().unwrap_or(0);
        let og = other.ord().unwrap_or(0);
        let prec = (self.prec + og).min(other.prec + of);
        self.mul_trunc(other, prec)
    }

    /// Product computed only below u^n (n is capped by the natural precision).
    pub fn mul_trunc(&self, other: &USeries, n: usize) -> USeries {
        let of = self.ord().unwrap_or(0);
        let og = other.ord().unwrap_or(0);
        let prec = n.min((self.prec + og).min(other.prec + of));
        let num = convolve(&self.field, &self.num, &other.num, prec);
        USeries::from_raw(&self.field, num, &self.den * &other.den, prec)
    }

    pub fn square(&self) -> USeries {
        self.mul(self)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, e: u64) -> USeries {
        if e == 0 {
            return USeries::one(&self.field, self.prec);
        }
        let mut base = self.clone();
        let mut acc: Option<USeries> = None;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square();
        }
        acc.expect("e > 0")
    }

    /// Power truncated to precision n at every step.
    pub fn pow_trunc(&self, e: u64, n: usize) -> USeries {
        if e == 0 {
            return USeries::one(&self.field, self.prec.min(n));
        }
        let mut base = self.truncate(n);
        let mut acc: Option<USeries> = None;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_trunc(&base, n),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_trunc(&base, n);
        }
        acc.expect("e > 0")
    }

    /// `self^(p^k)` via the Frobenius: coefficients are raised to the p^k-th
    /// power and exponents multiplied by p^k. The result is known modulo
    /// u^(p^k·prec), capped at `cap`.
    pub fn frobenius_pow(&self, k: u32, cap: usize) -> USeries {
        let step = (self.field.p() as usize).pow(k);
        let prec = (self.prec * step).min(cap);
        let mut num = vec![Vec::new(); prec];
        for (i, c) in self.num.iter().enumerate() {
            if i * step >= prec {
                break;
            }
            if !c.is_empty() {
                num[i * step] = PolyA::from_coeffs(&self.field, c.clone()).frobenius_pow(k).into_coeffs();
            }
        }
        USeries::from_raw(&self.field, num, self.den.frobenius_pow(k), prec)
    }

    /// `self^q`, capped at precision `cap`.
    pub fn pow_q(&self, cap: usize) -> USeries {
        self.frobenius_pow(self.field.r(), cap)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inv(&self) -> Result<USeries> {
        if self.prec == 0 {
            return Ok(self.clone());
        }
        if self.num[0].is_empty() {
            return Err(Error::NonUnitSeries("constant coefficient is zero".into()));
        }
        let f = &self.field;
        let n = self.prec;
        let c0 = &self.num[0];
        if c0.len() == 1 {
            // Constant term in F_q^×: g_k = -c0^{-1} Σ_{i≥1} a_i g_{k-i}, with
            // the series numerators; then multiply back by the denominator.
            let ci = f.inv(c0[0]);
            let nci = f.neg(ci);
            let mut g: Vec<Vec<Elem>> = Vec::with_capacity(n);
            g.push(vec![ci]);
            let mut acc = MulAcc::new(f);
            for k in 1..n {
                for i in 1..=k {
                    acc.add_product(&self.num[i], &g[k - i]);
                }
                let s = acc.finish();
                g.push(kernel::scale(f, &s, nci));
            }
            let g = g.into_iter().map(|c| kernel::mul(f, &c, self.den.coeffs())).collect();
            return Ok(USeries::from_raw(f, g, PolyA::one(f), n));
        }
        // General constant term F_0 ∈ A: with G_0 = 1 and
        // G_k = -Σ_{i=1}^{k} F_i F_0^{i-1} G_{k-i}, 1/F = Σ G_k / F_0^{k+1} u^k.
        let f0 = PolyA::from_coeffs(f, c0.clone());
        let mut f0_pows = vec![PolyA::one(f)];
        for _ in 0..n {
            let last = f0_pows.last().expect("nonempty");
            f0_pows.push(last * &f0);
        }
        let mut gs: Vec<Vec<Elem>> = vec![vec![1]];
        let mut acc = MulAcc::new(f);
        for k in 1..n {
            for i in 1..=k {
                if self.num[i].is_empty() || gs[k - i].is_empty() {
                    continue;
                }
                let t = kernel::mul(f, &self.num[i], f0_pows[i - 1].coeffs());
                acc.add_product(&t, &gs[k - i]);
            }
            let s = acc.finish();
            gs.push(kernel::neg(f, &s));
        }
        let num = gs
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let t = kernel::mul(f, g, f0_pows[n - 1 - k].coeffs());
                kernel::mul(f, &t, self.den.coeffs())
            })
            .collect();
        Ok(USeries::from_raw(f, num, f0_pows[n].clone(), n))
    }

    /// Quotient self / other for a unit `other`.
    pub fn div(&self, other: &USeries) -> Result<USeries> {
        Ok(self.mul(&other.inv()?))
    }

    /// Composition self∘s for s with zero constant term and order m ≥ 1.
    /// Precision: min(prec_self·m, prec_s) (prec_self·m alone when s is
    /// known that far).
    pub fn compose(&self, s: &USeries) -> Result<USeries> {
        if s.prec == 0 || !s.num[0].is_empty() {
            return Err(Error::CompositionNotSupported(
                "inner series must have zero constant term".into(),
            ));
        }
        let f = &self.field;
        let m = match s.ord() {
            Some(m) => m,
            None => {
                // s vanishes to its precision: only a_0 survives.
                let prec = if self.prec > 1 { s.prec } else { self.prec * s.prec };
                let prec = prec.max(self.prec.min(1));
                let c = if self.prec > 0 { self.coeff(0) } else { RatK::zero(f) };
                return Ok(USeries::constant(&c, prec));
            }
        };
        let prec = if self.prec <= 1 { self.prec * m } else { (self.prec * m).min(s.prec) };
        if prec == 0 {
            return Ok(USeries::zero(f, 0));
        }
        // Horner over the coefficients that can reach below u^prec.
        let top = ((prec - 1) / m).min(self.prec - 1);
        let s = s.truncate(prec);
        let mut acc = USeries::constant(&self.coeff(top), prec);
        for j in (0..top).rev() {
            acc = acc.mul_trunc(&s, prec);
            acc = acc.add(&USeries::constant(&self.coeff(j), prec));
        }
        Ok(acc.truncate(prec))
    }

    /// Composition with u ↦ u^Q / P(u), where P = 1 + Σ c_e u^e (e ≥ 1) is
    /// sparse with A-coefficients. Only coefficients below `cap` are produced.
    pub fn compose_sparse_quotient(&self, q_exp: usize, p_terms: &[(usize, PolyA)], cap: usize) -> USeries {
        let f = &self.field;
        let prec = (self.prec * q_exp).min(cap);
        let top = if prec == 0 { 0 } else { ((prec - 1) / q_exp).min(self.prec.saturating_sub(1)) };
        let nums = horner_sparse_quotient(f, &self.num[..=top.min(self.prec.saturating_sub(1))], q_exp, p_terms, prec);
        USeries::from_raw(f, nums, self.den.clone(), prec)
    }

    /// The unique n-th root with constant term 1, for f(0) = 1 and p ∤ n.
    pub fn root(&self, n: u64) -> Result<USeries> {
        let f = &self.field;
        if n == 0 || n % f.p() as u64 == 0 {
            return Err(Error::RootObstruction(format!("root index {n} is divisible by the characteristic")));
        }
        if self.prec == 0 {
            return Ok(self.clone());
        }
        if !self.coeff(0).is_one() {
            return Err(Error::RootObstruction("constant coefficient must be 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        // Newton iteration for y = f^(-1/n): y <- y + y(1 - f y^n)/n.
        let n_inv = f.inv(f.from_int((n % f.p() as u64) as i64));
        let mut y = USeries::one(f, 1);
        let mut cur = 1;
        while cur < self.prec {
            cur = (2 * cur).min(self.prec);
            let y_ext = USeries::from_raw(f, y.num.clone(), y.den.clone(), cur);
            let fy = self.truncate(cur).mul_trunc(&y_ext.pow_trunc(n, cur), cur);
            let err = USeries::one(f, cur).sub(&fy);
            y = y_ext.add(&y_ext.mul_trunc(&err, cur).scale_elem(n_inv));
        }
        Ok(self.mul_trunc(&y.pow_trunc(n - 1, self.prec), self.prec))
    }

    /// Θ = −u² d/du: Σ a_n u^n ↦ −Σ n a_n u^{n+1}; precision grows by one.
    pub fn theta(&self) -> USeries {
        let f = &self.field;
        let mut num = vec![Vec::new(); self.prec + 1];
        for (n, c) in self.num.iter().enumerate() {
            let k = f.neg(f.from_int(n as i64));
            num[n + 1] = kernel::scale(f, c, k);
        }
        USeries::from_raw(f, num, self.den.clone(), self.prec + 1)
    }

    /// min over known coefficients of the π-adic valuation; +∞ if all vanish.
    pub fn vpi(&self, pi: &PrimePi) -> Valuation {
        let mut best = Valuation::Infinity;
        for c in &self.num {
            if c.is_empty() {
                continue;
            }
            let v = PolyA::from_coeffs(&self.field, c.clone()).ord_at(pi);
            if v < best {
                best = v;
                if best == Valuation::Finite(0) {
                    break;
                }
            }
        }
        match best {
            Valuation::Infinity => Valuation::Infinity,
            Valuation::Finite(v) => Valuation::Finite(v - self.den.ord_at(pi).finite().expect("den ≠ 0")),
        }
    }

    /// Coefficientwise reduction into A/π.
    pub fn reduce_mod_pi(&self, pi: &PrimePi) -> Result<ResSeries> {
        let res = ResField::new(pi.clone());
        let den_red = res.reduce(&self.den);
        if res.is_zero(&den_red) && !self.is_zero() {
            let i = self.ord().expect("nonzero");
            return Err(Error::NotPiIntegral(format!(
                "coefficient of u^{} is {} with negative valuation",
                self.first_negative_index(pi).unwrap_or(i),
                self.coeff(self.first_negative_index(pi).unwrap_or(i))
            )));
        }
        let den_inv = if self.is_zero() { res.one() } else { res.inv(&den_red).expect("unit") };
        let coeffs = self
            .num
            .iter()
            .map(|c| {
                let r = res.reduce(&PolyA::from_coeffs(&self.field, c.clone()));
                res.mul(&r, &den_inv)
            })
            .collect();
        Ok(ResSeries::new(res, coeffs, self.prec))
    }

    fn first_negative_index(&self, pi: &PrimePi) -> Option<usize> {
        (0..self.prec).find(|&i| !self.num[i].is_empty() && self.coeff(i).vpi(pi) < Valuation::Finite(0))
    }

    /// First index (below the common precision) where the series differ.
    pub fn first_difference(&self, other: &USeries) -> Option<usize> {
        let n = self.prec.min(other.prec);
        if self.den == other.den {
            return (0..n).find(|&i| self.num[i] != other.num[i]);
        }
        (0..n).find(|&i| self.coeff(i) != other.coeff(i))
    }

    /// Equality of all coefficients below the common precision.
    pub fn agrees_with(&self, other: &USeries) -> bool {
        self.first_difference(other).is_none()
    }

    /// Sets the precision to `n` by padding with zeros. This asserts that the
    /// omitted coefficients vanish, so callers must know that they do.
    pub fn with_known_zeros(&self, n: usize) -> USeries {
        USeries::from_raw(&self.field, self.num.clone(), self.den.clone(), n)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Truncated convolution of coefficient vectors over A, below `prec`.
pub(crate) fn convolve(f: &Fq, a: &[Vec<Elem>], b: &[Vec<Elem>], prec: usize) -> Vec<Vec<Elem>> {
    let sa: Vec<usize> = (0..a.len().min(prec)).filter(|&i| !a[i].is_empty()).collect();
    let sb: Vec<usize> = (0..b.len().min(prec)).filter(|&i| !b[i].is_empty()).collect();
    let mut out = vec![Vec::new(); prec];
    if sa.is_empty() || sb.is_empty() {
        return out;
    }
    let mut acc = MulAcc::new(f);
    for (n, slot) in out.iter_mut().enumerate() {
        let mut any = false;
        for &i in &sa {
            if i > n {
                break;
            }
            let j = n - i;
            if j < b.len() && !b[j].is_empty() {
                acc.add_product(&a[i], &b[j]);
                any = true;
            }
        }
        if any {
            *slot = acc.finish();
        }
    }
    out
}

/// Numerators of Σ_j a_j (u^Q/P)^j below `prec`, via
/// S_j = S_{j-1}·P + a_j u^{jQ} followed by J sparse divisions by P.
pub(crate) fn horner_sparse_quotient(
    f: &Fq,
    a: &[Vec<Elem>],
    q_exp: usize,
    p_terms: &[(usize, PolyA)],
    prec: usize,
) -> Vec<Vec<Elem>> {
    let mut s: Vec<Vec<Elem>> = vec![Vec::new(); prec];
    let top = match a.iter().rposition(|c| !c.is_empty()) {
        Some(t) => t,
        None => return s,
    };
    let start = a.iter().position(|c| !c.is_empty()).expect("nonempty");
    let low = start * q_exp;
    let mut acc = MulAcc::new(f);
    for j in start..=top {
        if j > start {
            mul_by_sparse_unit(f, &mut s, p_terms, low, &mut acc);
        }
        let e = j * q_exp;
        if e < prec && !a[j].is_empty() {
            s[e] = kernel::add(f, &s[e], &a[j]);
        }
    }
    // S_top = Σ_j a_j u^{jQ} P^{top-j}; divide by P^top.
    for _ in 0..top {
        div_by_sparse_unit(f, &mut s, p_terms, low, &mut acc);
    }
    s
}

/// In place: s ← s·P for P = 1 + Σ c_e u^e; entries below `low` are zero.
fn mul_by_sparse_unit(f: &Fq, s: &mut [Vec<Elem>], p_terms: &[(usize, PolyA)], low: usize, acc: &mut MulAcc) {
    let n = s.len();
    for k in (low..n).rev() {
        let mut any = false;
        for (e, c) in p_terms {
            if *e > k || k - e < low {
                continue;
            }
            let src = &s[k - e];
            if !src.is_empty() {
                acc.add_product(src, c.coeffs());
                any = true;
            }
        }
        if any {
            let add = acc.finish();
            s[k] = kernel::add(f, &s[k], &add);
        }
    }
}

/// In place: s ← s / P for P = 1 + Σ c_e u^e; entries below `low` are zero.
fn div_by_sparse_unit(f: &Fq, s: &mut [Vec<Elem>], p_terms: &[(usize, PolyA)], low: usize, acc: &mut MulAcc) {
    let n = s.len();
    for k in low..n {
        let mut any = false;
        for (e, c) in p_terms {
            if *e > k || k - e < low {
                continue;
            }
            let src = &s[k - e];
            if !src.is_empty() {
                acc.add_product(src, c.coeffs());
                any = true;
            }
        }
        if any {
            let sub = acc.finish();
            s[k] = kernel::sub(f, &s[k], &sub);
        }
    }
}
