//! Symbolic level-π oldforms: K-linear combinations of monomials in
//! level-one atoms f and their rescalings ι(f)(z) = f(πz), on which the
//! Atkin–Lehner involution acts exactly:
//!
//!   f ↦ π^{k/2}·ι(f),   ι(f) ↦ π^{−k/2}·f,
//!
//! extended multiplicatively and linearly. A formal atom ∂(F, α) stands for
//! ∂_k F of an eigenform F with eigenvalue α and transforms by
//! ∂(F, α) ↦ α·(∂(F, α) − k·E*·F).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::{Fq, PolyA, PrimePi, RatK, USeries};
use crate::error::{Error, Result};
use crate::forms::{compose_t_pi, pre_image_prec, Generator};

use super::partial_series;

/// A factor of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// A level-one generator f.
    Plain(Generator),
    /// z ↦ f(πz) for a level-one generator f.
    Iota(Generator),
    /// ∂_k F for a W-eigenform F with eigenvalue ±1.
    Del { of: Box<OldPoly>, alpha: i8 },
}

impl Atom {
    fn weight(&self, q: usize) -> usize {
        match self {
            Atom::Plain(g) | Atom::Iota(g) => g.weight(q),
            Atom::Del { of, .. } => of.weight() + 2,
        }
    }

    fn typ(&self, q: usize) -> usize {
        match self {
            Atom::Plain(g) | Atom::Iota(g) => g.typ(q),
            Atom::Del { of, .. } => of.typ() + 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Plain(g) => write!(f, "{g}"),
            Atom::Iota(g) => write!(f, "iota({g})"),
            Atom::Del { of, alpha } => write!(f, "del[{alpha:+}]({of})"),
        }
    }
}

/// Atoms with positive exponents, sorted and merged.
pub type Monomial = Vec<(Atom, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<Atom, u32> = BTreeMap::new();
    for (x, e) in a.iter().chain(b) {
        *map.entry(x.clone()).or_insert(0) += e;
    }
    map.into_iter().collect()
}

/// A homogeneous K-linear combination of monomials.
#[derive(Clone)]
pub struct OldPoly {
    field: Fq,
    pi: PrimePi,
    weight: usize,
    typ: usize,
    terms: BTreeMap<Monomial, RatK>,
}

impl PartialEq for OldPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.terms.is_empty() || (self.weight, self.typ) == (other.weight, other.typ))
    }
}

impl Eq for OldPoly {}

impl Ord for OldPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.weight, self.typ).cmp(&(other.weight, other.typ)).then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for OldPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for OldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = format!("({c})");
                for (a, e) in m {
                    if *e == 1 {
                        s.push_str(&format!("*{a}"));
                    } else {
                        s.push_str(&format!("*{a}^{e}"));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl OldPoly {
    pub fn zero(pi: &PrimePi, weight: usize, typ: usize) -> OldPoly {
        let field = pi.field().clone();
        let typ = typ % (field.q() as usize - 1);
        OldPoly { field, pi: pi.clone(), weight, typ, terms: BTreeMap::new() }
    }

    pub fn constant(pi: &PrimePi, c: RatK) -> OldPoly {
        let mut p = OldPoly::zero(pi, 0, 0);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    fn from_atom(pi: &PrimePi, a: Atom) -> OldPoly {
        let q = pi.field().q() as usize;
        let mut p = OldPoly::zero(pi, a.weight(q), a.typ(q));
        p.terms.insert(vec![(a, 1)], RatK::one(pi.field()));
        p
    }

    /// The level-one generator g viewed at level π.
    pub fn plain(pi: &PrimePi, g: Generator) -> OldPoly {
        OldPoly::from_atom(pi, Atom::Plain(g))
    }

    /// z ↦ g(πz).
    pub fn iota_of(pi: &PrimePi, g: Generator) -> OldPoly {
        OldPoly::from_atom(pi, Atom::Iota(g))
    }

    /// The formal atom ∂_k F for an eigenform F with eigenvalue α.
    pub fn del(of: &OldPoly, alpha: i8) -> Result<OldPoly> {
        if alpha != 1 && alpha != -1 {
            return Err(Error::InvalidArgument(format!("eigenvalue {alpha} is not ±1")));
        }
        Ok(OldPoly::from_atom(&of.pi, Atom::Del { of: Box::new(of.clone()), alpha }))
    }

    /// E* = E − π·ι(E).
    pub fn e_star(pi: &PrimePi) -> OldPoly {
        let e = OldPoly::plain(pi, Generator::E);
        let ie = OldPoly::iota_of(pi, Generator::E).scale(&RatK::from_poly(pi.poly().clone()));
        e.sub(&ie).expect("same weight")
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn pi(&self) -> &PrimePi {
        &self.pi
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn typ(&self) -> usize {
        self.typ
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, RatK> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn pi_power(&self, e: i64) -> RatK {
        RatK::from_poly(self.pi.poly().clone()).pow(e)
    }

    fn check_compatible(&self, other: &OldPoly) -> Result<()> {
        if self.pi != other.pi {
            return Err(Error::InvalidArgument("oldforms at different primes".into()));
        }
        if !self.is_zero() && !other.is_zero() && (self.weight, self.typ) != (other.weight, other.typ) {
            return Err(Error::InvalidArgument(format!(
                "cannot add weight {} type {} to weight {} type {}",
                self.weight, self.typ, other.weight, other.typ
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &OldPoly) -> Result<OldPoly> {
        self.check_compatible(other)?;
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        let src = if self.is_zero() { &BTreeMap::new() } else { &other.terms };
        for (m, c) in src {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OldPoly) -> Result<OldPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OldPoly {
        self.scale(&RatK::from_int(&self.field, -1))
    }

    pub fn scale(&self, c: &RatK) -> OldPoly {
        let mut out = OldPoly { terms: BTreeMap::new(), ..self.clone() };
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x * c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: RatK) {
        let slot = self.terms.entry(m.clone()).or_insert_with(|| RatK::zero(&self.field));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn mul(&self, other: &OldPoly) -> Result<OldPoly> {
        if self.pi != other.pi {
            return Err(Error::InvalidArgument("oldforms at different primes".into()));
        }
        let q = self.field.q() as usize;
        let mut out = OldPoly::zero(&self.pi, self.weight + other.weight, (self.typ + other.typ) % (q - 1));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> OldPoly {
        let mut acc = OldPoly::constant(&self.pi, RatK::one(&self.field));
        for _ in 0..e {
            acc = acc.mul(self).expect("same prime");
        }
        acc
    }

    /// Replaces every plain atom by its rescaling (z ↦ πz); the input must
    /// be built from plain level-one atoms only.
    pub fn iota(&self) -> Result<OldPoly> {
        let mut out = OldPoly { terms: BTreeMap::new(), ..self.clone() };
        for (m, c) in &self.terms {
            let mut nm = Vec::with_capacity(m.len());
            for (a, e) in m {
                match a {
                    Atom::Plain(g) => nm.push((Atom::Iota(*g), *e)),
                    _ => return Err(Error::InvalidArgument(format!("iota of non-level-one atom {a}"))),
                }
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// The Lemma-type eigenvectors f ± π^{k/2}·ι(f) for a level-one f.
    pub fn pair(&self, sign: i8) -> Result<OldPoly> {
        if self.weight % 2 == 1 {
            return Err(Error::OddWeightUnsupported(format!("weight {}", self.weight)));
        }
        let s = self.pi_power(self.weight as i64 / 2).scale(if sign < 0 { self.field.from_int(-1) } else { 1 });
        self.add(&self.iota()?.scale(&s))
    }

    /// Image of a single atom under W_π.
    fn w_atom(&self, a: &Atom) -> Result<OldPoly> {
        let q = self.field.q() as usize;
        let k = a.weight(q);
        if k % 2 == 1 {
            return Err(Error::OddWeightUnsupported(format!("atom {a} has weight {k}")));
        }
        let half = (k / 2) as i64;
        Ok(match a {
            Atom::Plain(g) => OldPoly::iota_of(&self.pi, *g).scale(&self.pi_power(half)),
            Atom::Iota(g) => OldPoly::plain(&self.pi, *g).scale(&self.pi_power(-half)),
            Atom::Del { of, alpha } => {
                let kf = of.weight();
                let del = OldPoly::from_atom(&self.pi, a.clone());
                let corr = OldPoly::e_star(&self.pi).mul(of)?.scale(&RatK::from_int(&self.field, kf as i64));
                del.sub(&corr)?.scale(&RatK::from_int(&self.field, *alpha as i64))
            }
        })
    }

    /// The Atkin–Lehner involution W_π.
    pub fn w_action(&self) -> Result<OldPoly> {
        if self.weight % 2 == 1 {
            return Err(Error::OddWeightUnsupported(format!("weight {}", self.weight)));
        }
        let mut images: BTreeMap<&Atom, OldPoly> = BTreeMap::new();
        for m in self.terms.keys() {
            for (a, _) in m {
                if !images.contains_key(a) {
                    images.insert(a, self.w_atom(a)?);
                }
            }
        }
        let mut out = OldPoly::zero(&self.pi, self.weight, self.typ);
        for (m, c) in &self.terms {
            let mut prod = OldPoly::constant(&self.pi, c.clone());
            for (a, e) in m {
                prod = prod.mul(&images[a].pow(*e))?;
            }
            out = out.add(&prod)?;
        }
        Ok(OldPoly { weight: self.weight, typ: self.typ, ..out })
    }

    /// Some(±1) when W(self) = ±self, None otherwise.
    pub fn eigenvalue(&self) -> Result<Option<i8>> {
        let w = self.w_action()?;
        if w == *self {
            Ok(Some(1))
        } else if w == self.neg() {
            Ok(Some(-1))
        } else {
            Ok(None)
        }
    }

    fn atom_series(&self, a: &Atom, n: usize) -> Result<USeries> {
        match a {
            Atom::Plain(g) => g.series(&self.field, n),
            Atom::Iota(g) => {
                let base = g.series(&self.field, pre_image_prec(&self.pi, n))?;
                compose_t_pi(&base, &self.pi, n)
            }
            Atom::Del { of, .. } => partial_series(&of.flatten(n)?, of.weight()),
        }
    }

    /// The u-series modulo u^n obtained by substituting every atom.
    pub fn flatten(&self, n: usize) -> Result<USeries> {
        let mut powers: BTreeMap<(Atom, u32), USeries> = BTreeMap::new();
        let mut base: BTreeMap<Atom, USeries> = BTreeMap::new();
        for m in self.terms.keys() {
            for (a, e) in m {
                if !base.contains_key(a) {
                    base.insert(a.clone(), self.atom_series(a, n)?);
                }
                if !powers.contains_key(&(a.clone(), *e)) {
                    let p = base[a].pow_trunc(*e as u64, n);
                    powers.insert((a.clone(), *e), p);
                }
            }
        }
        let field = &self.field;
        let parts: Vec<USeries> = self
            .terms
            .par_iter()
            .map(|(m, c)| {
                let mut s = USeries::constant(c, n);
                for (a, e) in m {
                    s = s.mul_trunc(&powers[&(a.clone(), *e)], n);
                }
                s.truncate(n)
            })
            .collect();
        let mut acc = USeries::zero(field, n);
        for p in parts {
            acc = acc.add(&p);
        }
        Ok(acc)
    }

    /// The scalar value when the polynomial has no atoms.
    pub fn as_constant(&self) -> Option<RatK> {
        match self.terms.len() {
            0 => Some(RatK::zero(&self.field)),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// True when only plain modular generators occur (a level-one form).
    pub fn is_level_one(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.iter().all(|(a, _)| matches!(a, Atom::Plain(g) if g.is_modular())))
    }

    /// Multiplies by a polynomial scalar.
    pub fn scale_poly(&self, c: &PolyA) -> OldPoly {
        self.scale(&RatK::from_poly(c.clone()))
    }
}
