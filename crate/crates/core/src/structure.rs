//! Level-one structure theory: every level-one form is an isobaric
//! polynomial in g_1 and h. This module identifies that polynomial from a
//! u-expansion, reduces it modulo π, and computes the mod-π weight
//! filtration by dividing out powers of Ā_d.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::field::Fq;
use crate::algebra::residue::{ResElem, ResField, ResSeries};
use crate::algebra::{PolyA, PrimePi, RatK, USeries};
use crate::error::{Error, Result};
use crate::forms::{g_series, gd_series, Generator, Level, SeriesForm};
use crate::operators::partial;

/// Extra coefficients demanded beyond the largest h-exponent when solving.
pub const SOLVE_MARGIN: usize = 8;

/// All (i, j) with (q−1)i + (q+1)j = k, i, j ≥ 0 and j ≡ l (mod q−1),
/// sorted by j ascending.
pub fn enumerate_monomials(q: usize, k: usize, l: usize) -> Vec<(usize, usize)> {
    let m = q - 1;
    let l = l % m;
    (0..=k / (q + 1))
        .filter(|&j| j % m == l && (k - (q + 1) * j) % m == 0)
        .map(|j| ((k - (q + 1) * j) / m, j))
        .collect()
}

/// Σ c_{ij} X^i Y^j with every monomial of weight (q−1)i + (q+1)j = k.
#[derive(Clone, PartialEq, Eq)]
pub struct IsobarPoly {
    field: Fq,
    pub weight: usize,
    pub typ: usize,
    terms: BTreeMap<(usize, usize), RatK>,
}

impl fmt::Debug for IsobarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IsobarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), c)| format!("({c})*X^{i}*Y^{j}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One isobaric term for serialization: [i, j, coefficient text].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IsobarTerm(pub usize, pub usize, pub String);

impl IsobarPoly {
    pub fn new(field: &Fq, weight: usize, typ: usize) -> IsobarPoly {
        IsobarPoly { field: field.clone(), weight, typ: typ % (field.q() as usize - 1), terms: BTreeMap::new() }
    }

    /// Adds c·X^i·Y^j, checking isobaricity.
    pub fn add_term(&mut self, i: usize, j: usize, c: RatK) -> Result<()> {
        let q = self.field.q() as usize;
        if (q - 1) * i + (q + 1) * j != self.weight || j % (q - 1) != self.typ {
            return Err(Error::InvalidArgument(format!(
                "monomial X^{i}Y^{j} does not have weight {} and type {}",
                self.weight, self.typ
            )));
        }
        let entry = self.terms.entry((i, j)).or_insert_with(|| RatK::zero(&self.field));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), RatK> {
        &self.terms
    }

    pub fn coeff(&self, i: usize, j: usize) -> RatK {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| RatK::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_terms(&self) -> Vec<IsobarTerm> {
        self.terms.iter().map(|((i, j), c)| IsobarTerm(*i, *j, c.to_string())).collect()
    }

    pub fn mul(&self, other: &IsobarPoly) -> IsobarPoly {
        let mut out = IsobarPoly::new(&self.field, self.weight + other.weight, self.typ + other.typ);
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2).expect("weights add");
            }
        }
        out
    }

    /// φ(g_1, h) modulo u^n.
    pub fn expand(&self, n: usize) -> Result<USeries> {
        let g1 = g_series(&self.field, 1, n)?;
        let h = Generator::H.series(&self.field, n)?;
        let mut acc = USeries::zero(&self.field, n);
        for ((i, j), c) in &self.terms {
            let m = g1.pow_trunc(*i as u64, n).mul_trunc(&h.pow_trunc(*j as u64, n), n);
            acc = acc.add(&m.scale(c));
        }
        Ok(acc)
    }
}

/// Monomial series g_1^i h^j for the given monomials, modulo u^n.
fn monomial_series(field: &Fq, monos: &[(usize, usize)], n: usize) -> Result<Vec<USeries>> {
    let g1 = g_series(field, 1, n)?;
    let h = Generator::H.series(field, n)?;
    let mut out = Vec::with_capacity(monos.len());
    for &(i, j) in monos {
        out.push(g1.pow_trunc(i as u64, n).mul_trunc(&h.pow_trunc(j as u64, n), n));
    }
    Ok(out)
}

/// Solves series = φ(g_1, h) for an isobaric φ of weight k and type l by the
/// triangular elimination in increasing j (ord_u(g_1^i h^j) = j, leading
/// coefficient (−1)^j).
pub fn isobaric_solve_series(series: &USeries, k: usize, l: usize) -> Result<IsobarPoly> {
    let field = series.field();
    let q = field.q() as usize;
    let monos = enumerate_monomials(q, k, l);
    let n = series.prec();
    let max_j = monos.last().map_or(0, |m| m.1);
    if n < max_j + SOLVE_MARGIN {
        return Err(Error::InsufficientPrecision(format!(
            "isobaric solve in weight {k} needs precision ≥ {}, have {n}",
            max_j + SOLVE_MARGIN
        )));
    }
    let basis = monomial_series(field, &monos, n)?;
    let mut residual = series.clone();
    let mut phi = IsobarPoly::new(field, k, l);
    for (&(i, j), b) in monos.iter().zip(&basis) {
        let c = residual.coeff(j);
        if c.is_zero() {
            continue;
        }
        let c = if j % 2 == 1 { -&c } else { c };
        residual = residual.sub(&b.scale(&c));
        phi.add_term(i, j, c)?;
    }
    if let Some(idx) = residual.ord() {
        return Err(Error::NotInSpan(format!(
            "residual coefficient of u^{idx} is {} after eliminating weight {k} type {l}",
            residual.coeff(idx)
        )));
    }
    Ok(phi)
}

/// The isobaric polynomial of a level-one form.
pub fn isobaric_solve(f: &SeriesForm) -> Result<IsobarPoly> {
    if f.level != Level::One {
        return Err(Error::InvalidArgument("isobaric polynomials exist only at level one".into()));
    }
    isobaric_solve_series(&f.series, f.weight, f.typ)
}

/// Working precision for isobaric solves of weight up to k.
pub fn solve_prec(q: usize, k: usize) -> usize {
    k / (q + 1) + SOLVE_MARGIN + 1
}

/// (A_d, B_d): the isobaric polynomials of g_d and ∂_{q^d−1}(g_d).
pub fn ad_bd(pi: &PrimePi) -> Result<(IsobarPoly, IsobarPoly)> {
    let f = pi.field();
    let q = f.q() as usize;
    let k = q.pow(pi.degree() as u32) - 1;
    let n = solve_prec(q, k + 2) + 1;
    let g = gd_series(pi, n)?;
    let a = isobaric_solve(&g)?;
    let dg = partial(&g)?;
    let b = isobaric_solve(&dg)?;
    Ok((a, b))
}

/// An isobaric polynomial with coefficients in A/π.
#[derive(Clone, PartialEq, Eq)]
pub struct ResIsobarPoly {
    res: ResField,
    pub weight: usize,
    pub typ: usize,
    terms: BTreeMap<(usize, usize), ResElem>,
}

impl fmt::Debug for ResIsobarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), c)| format!("({})*X^{i}*Y^{j}", self.res.elem_to_string(c)))
            .collect();
        write!(f, "[mod {}] {}", self.res.pi(), if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl ResIsobarPoly {
    pub fn new(res: &ResField, weight: usize, typ: usize, terms: BTreeMap<(usize, usize), ResElem>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_empty()).collect();
        ResIsobarPoly { res: res.clone(), weight, typ, terms }
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), ResElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn field(&self) -> &ResField {
        &self.res
    }

    /// Splits φ = X^α Y^β Φ(X^{q+1}, Y^{q−1}) and returns (α, β, Φ(1, y))
    /// with Φ(1, y) having nonzero constant term. Zero input gives None.
    fn decompose(&self) -> Option<(usize, usize, Vec<ResElem>)> {
        let q = self.res.base().q() as usize;
        let alpha = self.terms.keys().map(|k| k.0).min()?;
        let beta = self.terms.keys().map(|k| k.1).min()?;
        let s_max = self.terms.keys().map(|k| (k.1 - beta) / (q - 1)).max()?;
        let mut v = vec![Vec::new(); s_max + 1];
        for ((_, j), c) in &self.terms {
            v[(j - beta) / (q - 1)] = c.clone();
        }
        Some((alpha, beta, v))
    }

    /// Largest e with a^e | self (None standing for +∞ when self = 0),
    /// together with the quotient self / a^e.
    pub fn divide_power(&self, a: &ResIsobarPoly) -> Result<DividePower> {
        let (pa, pb, pphi) = match self.decompose() {
            Some(d) => d,
            None => return Ok(DividePower::ZeroClass),
        };
        let (aa, ab, aphi) = a
            .decompose()
            .ok_or_else(|| Error::InvalidArgument("cannot divide by the zero polynomial".into()))?;
        let res = &self.res;
        let mut e = 0usize;
        let mut cur = pphi;
        let (mut alpha, mut beta) = (pa, pb);
        loop {
            if alpha < aa || beta < ab {
                break;
            }
            match res_poly_div_exact(res, &cur, &aphi) {
                Some(qt) => {
                    cur = qt;
                    alpha -= aa;
                    beta -= ab;
                    e += 1;
                }
                None => break,
            }
            if aa == 0 && ab == 0 && aphi.len() == 1 {
                return Err(Error::InvalidArgument("divisor is a unit".into()));
            }
        }
        let q = res.base().q() as usize;
        let weight = self.weight - e * a.weight;
        let mut terms = BTreeMap::new();
        let s_max = cur.len().saturating_sub(1);
        for (s, c) in cur.into_iter().enumerate() {
            if !c.is_empty() {
                let j = beta + (q - 1) * s;
                let i = alpha + (q + 1) * (s_max - s);
                terms.insert((i, j), c);
            }
        }
        let typ = if weight == 0 { 0 } else { self.typ };
        Ok(DividePower::Finite { e, quotient: ResIsobarPoly::new(res, weight, typ, terms) })
    }

    /// True when self and other share no nonconstant common factor.
    pub fn coprime_with(&self, other: &ResIsobarPoly) -> Result<bool> {
        let (a1, b1, p1) = self.decompose().ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
        let (a2, b2, p2) = other.decompose().ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
        if (a1 > 0 && a2 > 0) || (b1 > 0 && b2 > 0) {
            return Ok(false);
        }
        Ok(res_poly_gcd(&self.res, &p1, &p2).len() == 1)
    }
}

/// Result of dividing out the largest power of a divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DividePower {
    /// The dividend was zero: every power divides it.
    ZeroClass,
    Finite { e: usize, quotient: ResIsobarPoly },
}

fn trim_res(v: &mut Vec<ResElem>) {
    while v.last().is_some_and(|c| c.is_empty()) {
        v.pop();
    }
}

fn res_poly_divrem(res: &ResField, a: &[ResElem], b: &[ResElem]) -> (Vec<ResElem>, Vec<ResElem>) {
    let mut r: Vec<ResElem> = a.to_vec();
    trim_res(&mut r);
    let mut b = b.to_vec();
    trim_res(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lead_inv = res.inv(&b[db]).expect("nonzero leading coefficient");
    let mut qt = vec![Vec::new(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_empty() {
            continue;
        }
        let c = res.mul(&r[k], &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            let t = res.mul(&c, bi);
            r[k - db + i] = res.sub(&r[k - db + i], &t);
        }
        qt[k - db] = c;
    }
    r.truncate(db);
    trim_res(&mut r);
    trim_res(&mut qt);
    (qt, r)
}

fn res_poly_div_exact(res: &ResField, a: &[ResElem], b: &[ResElem]) -> Option<Vec<ResElem>> {
    let (qt, r) = res_poly_divrem(res, a, b);
    r.is_empty().then_some(qt)
}

fn res_poly_gcd(res: &ResField, a: &[ResElem], b: &[ResElem]) -> Vec<ResElem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim_res(&mut x);
    trim_res(&mut y);
    while !y.is_empty() {
        let r = res_poly_divrem(res, &x, &y).1;
        x = y;
        y = r;
    }
    x
}

/// Coefficientwise reduction modulo π.
pub fn reduce_isobaric(phi: &IsobarPoly, pi: &PrimePi) -> Result<ResIsobarPoly> {
    let res = ResField::new(pi.clone());
    let mut terms = BTreeMap::new();
    for ((i, j), c) in phi.terms() {
        if c.vpi(pi) < crate::algebra::Valuation::Finite(0) {
            return Err(Error::NotPiIntegral(format!("coefficient {c} of X^{i}Y^{j}")));
        }
        let num = res.reduce(c.num());
        let den = res.inv(&res.reduce(c.den())).expect("π ∤ den");
        terms.insert((*i, *j), res.mul(&num, &den));
    }
    Ok(ResIsobarPoly::new(&res, phi.weight, phi.typ, terms))
}

/// A weight filtration value: a weight or −∞ for the zero class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Filtration {
    MinusInfinity,
    Weight(usize),
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filtration::MinusInfinity => write!(f, "-inf"),
            Filtration::Weight(w) => write!(f, "{w}"),
        }
    }
}

impl Serialize for Filtration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Filtration::MinusInfinity => s.serialize_str("-inf"),
            Filtration::Weight(w) => s.serialize_u64(*w as u64),
        }
    }
}

/// Filtration result with the data behind it.
#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub filtration: Filtration,
    pub isobaric: IsobarPoly,
    pub reduced: ResIsobarPoly,
    /// Power of Ā_d dividing the reduction (None for the zero class).
    pub drop: Option<usize>,
}

/// w(f̄) = k − e(q^d − 1) with e the exact power of Ā_d dividing φ̄, or −∞.
pub fn filtration(f: &SeriesForm, pi: &PrimePi) -> Result<FiltrationReport> {
    let phi = isobaric_solve(f)?;
    filtration_of_isobaric(&phi, pi)
}

pub fn filtration_of_isobaric(phi: &IsobarPoly, pi: &PrimePi) -> Result<FiltrationReport> {
    let reduced = reduce_isobaric(phi, pi)?;
    if reduced.is_zero() {
        return Ok(FiltrationReport {
            filtration: Filtration::MinusInfinity,
            isobaric: phi.clone(),
            reduced,
            drop: None,
        });
    }
    let (a, _) = ad_bd(pi)?;
    let a_bar = reduce_isobaric(&a, pi)?;
    match reduced.divide_power(&a_bar)? {
        DividePower::ZeroClass => unreachable!("nonzero class"),
        DividePower::Finite { e, .. } => Ok(FiltrationReport {
            filtration: Filtration::Weight(phi.weight - e * a.weight),
            isobaric: phi.clone(),
            reduced,
            drop: Some(e),
        }),
    }
}

/// Independent filtration oracle: the least admissible weight k₀ ≤ k such
/// that some isobaric form of weight k₀ (same type) is congruent to f mod π,
/// found by triangular solves over A/π.
pub fn brute_force_filtration(f: &SeriesForm, pi: &PrimePi) -> Result<Filtration> {
    let field = f.field();
    let q = field.q() as usize;
    let target = f.series.reduce_mod_pi(pi)?;
    if target.is_zero() {
        return Ok(Filtration::MinusInfinity);
    }
    let n = target.prec();
    let res = target.field().clone();
    for k0 in 0..=f.weight {
        if k0 % (q - 1) != (2 * f.typ) % (q - 1) {
            continue;
        }
        let monos = enumerate_monomials(q, k0, f.typ);
        if monos.is_empty() {
            continue;
        }
        let basis: Vec<ResSeries> = monomial_series(field, &monos, n)?
            .iter()
            .map(|s| s.reduce_mod_pi(pi))
            .collect::<Result<_>>()?;
        if residue_solve(&res, &target, &monos, &basis) {
            return Ok(Filtration::Weight(k0));
        }
    }
    Err(Error::NotInSpan("no weight ≤ k realizes the class".into()))
}

fn residue_solve(res: &ResField, target: &ResSeries, monos: &[(usize, usize)], basis: &[ResSeries]) -> bool {
    let n = target.prec();
    let mut r: Vec<ResElem> = target.coeffs().to_vec();
    for (&(_, j), b) in monos.iter().zip(basis) {
        if j >= n {
            break;
        }
        let lead = b.coeff(j);
        let c = match res.inv(lead) {
            Some(li) => res.mul(&r[j], &li),
            None => continue,
        };
        if c.is_empty() {
            continue;
        }
        for (idx, slot) in r.iter_mut().enumerate() {
            let t = res.mul(&c, b.coeff(idx));
            *slot = res.sub(slot, &t);
        }
    }
    r.iter().all(|c| c.is_empty())
}

/// Convenience: ζ-free check that a polynomial in A reduces to a unit mod π.
pub fn is_unit_mod(p: &PolyA, pi: &PrimePi) -> bool {
    !p.rem(pi.poly()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_poly;
    use crate::forms::{delta_series, h_series};

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn monomial_enumeration_examples() {
        assert_eq!(enumerate_monomials(3, 2, 0), vec![(1, 0)]);
        assert!(enumerate_monomials(3, 2, 1).is_empty());
        assert_eq!(enumerate_monomials(3, 4, 1), vec![(0, 1)]);
        assert_eq!(enumerate_monomials(3, 8, 0), vec![(4, 0), (0, 2)]);
    }

    #[test]
    fn solve_generators() {
        let f = f3();
        let n = 30;
        let h = h_series(&f, n).unwrap();
        let phi = isobaric_solve(&h).unwrap();
        assert_eq!(phi.terms().len(), 1);
        assert!(phi.coeff(0, 1).is_one());
        let d = delta_series(&f, n).unwrap();
        let phi = isobaric_solve(&d).unwrap();
        assert_eq!(phi.terms().len(), 1);
        assert_eq!(phi.coeff(0, 2), RatK::from_int(&f, -1));
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let g = gd_series(&pi, n).unwrap();
        let phi = isobaric_solve(&g).unwrap();
        assert!(phi.coeff(1, 0).is_one() && phi.terms().len() == 1);
    }

    #[test]
    fn non_modular_input_is_rejected() {
        let f = f3();
        let e = crate::forms::e_series(&f, 30).unwrap();
        // E has weight 2 type 1, and M_{2,1} = 0; E itself is nonzero.
        assert!(matches!(isobaric_solve_series(&e, 2, 1), Err(Error::NotInSpan(_))));
    }

    #[test]
    fn filtration_examples() {
        let f = f3();
        let n = 30;
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let d = delta_series(&f, n).unwrap();
        assert_eq!(filtration(&d, &pi).unwrap().filtration, Filtration::Weight(8));
        let g = gd_series(&pi, n).unwrap();
        assert_eq!(filtration(&g, &pi).unwrap().filtration, Filtration::Weight(0));
        let h = h_series(&f, n).unwrap();
        let pih = SeriesForm::new(h.series.scale_poly(pi.poly()), 4, 1, Level::One).unwrap();
        assert_eq!(filtration(&pih, &pi).unwrap().filtration, Filtration::MinusInfinity);
    }

    #[test]
    fn divide_power_examples() {
        let f = f3();
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let res = ResField::new(pi);
        let mk = |w: usize, t: usize, terms: &[((usize, usize), u32)]| {
            let m = terms.iter().map(|&(k, c)| (k, vec![c])).collect();
            ResIsobarPoly::new(&res, w, t, m)
        };
        let x = mk(2, 0, &[((1, 0), 1)]);
        let y2 = mk(8, 0, &[((0, 2), 2)]);
        match y2.divide_power(&x).unwrap() {
            DividePower::Finite { e, .. } => assert_eq!(e, 0),
            _ => panic!(),
        }
        let x2y = mk(8, 1, &[((2, 1), 1)]);
        match x2y.divide_power(&x).unwrap() {
            DividePower::Finite { e, quotient } => {
                assert_eq!(e, 2);
                assert_eq!(quotient.terms().keys().copied().collect::<Vec<_>>(), vec![(0, 1)]);
            }
            _ => panic!(),
        }
        let zero = mk(8, 0, &[]);
        assert_eq!(zero.divide_power(&x).unwrap(), DividePower::ZeroClass);
    }

    #[test]
    fn ad_bd_degree_two() {
        let f = f3();
        let pi = PrimePi::new(parse_poly(&f, "T^2+1").unwrap()).unwrap();
        let (a, b) = ad_bd(&pi).unwrap();
        assert_eq!(a.weight, 8);
        assert_eq!(b.weight, 10);
        let ab = reduce_isobaric(&a, &pi).unwrap();
        let bb = reduce_isobaric(&b, &pi).unwrap();
        assert!(ab.coprime_with(&bb).unwrap());
    }
}
