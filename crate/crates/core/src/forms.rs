//! u-expansions of the named forms: normalized Eisenstein series g_d, the
//! discriminant Δ, the cusp form h, the false Eisenstein series E and its
//! level-π correction E*.
//!
//! Everything is π̃-normalized so that all coefficients lie in K. Level-one
//! generators are memoized per field at the largest precision requested so
//! far; a request at lower precision is served by truncation, which is exact
//! because every construction here is precision-stable.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use crate::algebra::field::{Elem, FieldSpec, Fq};
use crate::algebra::kernel;
use crate::algebra::series::horner_sparse_quotient;
use crate::algebra::{PolyA, PrimePi, RatK, USeries};
use crate::carlitz::{bracket, goss_poly, l_poly, t_param, zeta_ratio};
use crate::error::{Error, Result};

/// Level tag of a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    One,
    Pi(PrimePi),
}

/// A u-series tagged with weight, type and level.
#[derive(Clone, Debug)]
pub struct SeriesForm {
    pub series: USeries,
    pub weight: usize,
    /// Type l, reduced modulo q − 1.
    pub typ: usize,
    pub level: Level,
}

impl SeriesForm {
    /// Checks k ≡ 2l (mod q−1) and the type-l coefficient support.
    pub fn new(series: USeries, weight: usize, typ: usize, level: Level) -> Result<SeriesForm> {
        let m = series.field().q() as usize - 1;
        let typ = typ % m;
        if weight % m != (2 * typ) % m {
            return Err(Error::InvalidArgument(format!(
                "weight {weight} and type {typ} violate k ≡ 2l (mod {m})"
            )));
        }
        if let Some(i) = series.support().into_iter().find(|i| i % m != typ) {
            return Err(Error::InvalidArgument(format!(
                "coefficient of u^{i} is nonzero for a form of type {typ}"
            )));
        }
        Ok(SeriesForm { series, weight, typ, level })
    }

    pub fn field(&self) -> &Fq {
        self.series.field()
    }
}

/// The level-one generators that can appear as atoms of symbolic forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// g_d for d ≥ 1.
    G(u32),
    H,
    Delta,
    /// The false Eisenstein series: weight 2, type 1, not modular.
    E,
}

impl Generator {
    pub fn weight(self, q: usize) -> usize {
        match self {
            Generator::G(d) => q.pow(d) - 1,
            Generator::H => q + 1,
            Generator::Delta => q * q - 1,
            Generator::E => 2,
        }
    }

    pub fn typ(self, q: usize) -> usize {
        match self {
            Generator::G(_) | Generator::Delta => 0,
            Generator::H | Generator::E => 1 % (q - 1),
        }
    }

    pub fn is_modular(self) -> bool {
        !matches!(self, Generator::E)
    }

    pub fn name(self) -> String {
        match self {
            Generator::G(d) => format!("g{d}"),
            Generator::H => "h".into(),
            Generator::Delta => "delta".into(),
            Generator::E => "e".into(),
        }
    }

    /// u-series modulo u^n.
    pub fn series(self, field: &Fq, n: usize) -> Result<USeries> {
        match self {
            Generator::G(d) => g_series(field, d, n),
            Generator::H => h_plain(field, n),
            Generator::Delta => delta_plain(field, n),
            Generator::E => e_series(field, n),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

type CacheKey = (FieldSpec, String);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<USeries>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<USeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized computation: `build(n)` must be precision-stable.
pub(crate) fn cached(field: &Fq, name: &str, n: usize, build: impl FnOnce(usize) -> Result<USeries>) -> Result<USeries> {
    let key = (field.spec(), name.to_string());
    if let Some(s) = cache().read().expect("cache lock").get(&key) {
        if s.prec() >= n {
            return Ok(s.truncate(n));
        }
    }
    let s = build(n)?;
    let mut w = cache().write().expect("cache lock");
    let keep = match w.get(&key) {
        Some(old) => old.prec() < s.prec(),
        None => true,
    };
    if keep {
        w.insert(key, Arc::new(s.clone()));
    }
    Ok(s)
}

/// Monic polynomials a with q^{deg a} < n, by degree then lexicographically.
fn monics_below(field: &Fq, n: usize) -> Vec<PolyA> {
    let q = field.q() as usize;
    let mut out = Vec::new();
    let mut deg = 0usize;
    while q.pow(deg as u32) < n {
        out.extend(PolyA::monics_of_degree(field, deg));
        deg += 1;
    }
    out
}

/// Adds `b` into `acc` coefficientwise.
fn add_raw(f: &Fq, acc: &mut [Vec<Elem>], b: &[Vec<Elem>]) {
    for (x, y) in acc.iter_mut().zip(b) {
        if !y.is_empty() {
            *x = kernel::add(f, x, y);
        }
    }
}

/// Σ_a Σ_j c_j t_a^j below u^n for the given numerator coefficients c_j
/// (indexed by j), summed over monic a with q^{deg a}·(lowest j) < n.
fn sum_over_monics(field: &Fq, c: &[Vec<Elem>], n: usize) -> Result<Vec<Vec<Elem>>> {
    let jmin = match c.iter().position(|x| !x.is_empty()) {
        Some(j) => j.max(1),
        None => return Ok(vec![Vec::new(); n]),
    };
    let monics: Vec<PolyA> = monics_below(field, n.div_ceil(jmin));
    let parts: Vec<Result<Vec<Vec<Elem>>>> = monics
        .par_iter()
        .map(|a| {
            let tp = t_param(a)?;
            let top = ((n - 1) / tp.q_exp).min(c.len() - 1);
            Ok(horner_sparse_quotient(field, &c[..=top], tp.q_exp, &tp.p_terms, n))
        })
        .collect();
    let mut acc = vec![Vec::new(); n];
    for p in parts {
        add_raw(field, &mut acc, &p?);
    }
    Ok(acc)
}

/// Ẽ_k = π̃^{−k} E_k = −ζ_A(k)/π̃^k − Σ_{a monic} Σ_{(q−1)|j} g_{k,j} t_a^j,
/// where G_k = Σ g_{k,j} t^j is the k-th Goss polynomial.
pub fn eisenstein_tilde(field: &Fq, k: usize, n: usize) -> Result<USeries> {
    let q = field.q() as usize;
    let zeta = zeta_ratio(field, k)?;
    cached(field, &format!("etilde{k}"), n, |n| {
        let gk = goss_poly(field, k).unit_average(q);
        let mut den = PolyA::one(field);
        for c in &gk {
            if !c.den().is_one() {
                let g = den.gcd(c.den());
                den = &den * &c.den().div_exact(&g).expect("gcd divides");
            }
        }
        let nums: Vec<Vec<Elem>> = gk
            .iter()
            .map(|c| (c.num() * &den.div_exact(c.den()).expect("common den")).into_coeffs())
            .collect();
        let sum = sum_over_monics(field, &nums, n)?;
        let lattice = USeries::from_raw(field, sum, den, n);
        Ok(USeries::constant(&zeta, n).add(&lattice).neg())
    })
}

/// g_d = (−1)^{d+1} L_d Ẽ_{q^d−1}: weight q^d − 1, type 0.
pub fn g_series(field: &Fq, d: u32, n: usize) -> Result<USeries> {
    if d == 0 {
        return Err(Error::InvalidArgument("g_d needs d ≥ 1".into()));
    }
    cached(field, &format!("g{d}"), n, |n| {
        let q = field.q() as usize;
        let e = eisenstein_tilde(field, q.pow(d) - 1, n)?;
        let s = e.scale_poly(&l_poly(field, d));
        Ok(if d % 2 == 0 { s.neg() } else { s })
    })
}

/// g_d for the degree of π, as a level-one form.
pub fn gd_series(pi: &PrimePi, n: usize) -> Result<SeriesForm> {
    let f = pi.field();
    let d = pi.degree() as u32;
    let s = g_series(f, d, n)?;
    SeriesForm::new(s, Generator::G(d).weight(f.q() as usize), 0, Level::One)
}

/// Δ = [2]·Ẽ_{q²−1} + [1]^q·Ẽ_{q−1}^{q+1}.
fn delta_plain(field: &Fq, n: usize) -> Result<USeries> {
    cached(field, "delta", n, |n| {
        let q = field.q() as usize;
        let e2 = eisenstein_tilde(field, q * q - 1, n)?;
        let e1 = eisenstein_tilde(field, q - 1, n)?;
        let e1_pow = e1.pow_q(n).mul(&e1);
        let b1q = bracket(field, 1).pow_q();
        Ok(e2.scale_poly(&bracket(field, 2)).add(&e1_pow.scale_poly(&b1q)).truncate(n))
    })
}

/// Δ as a level-one cusp form of weight q² − 1, type 0.
pub fn delta_series(field: &Fq, n: usize) -> Result<SeriesForm> {
    let q = field.q() as usize;
    SeriesForm::new(delta_plain(field, n)?, q * q - 1, 0, Level::One)
}

/// h = −u·R with R the (q−1)-th root of −Δ/u^{q−1} normalized by R(0) = 1.
fn h_plain(field: &Fq, n: usize) -> Result<USeries> {
    cached(field, "h", n, |n| {
        let q = field.q() as usize;
        let delta = delta_plain(field, n + q - 2)?;
        let r = delta.neg().shift_down(q - 1)?.root(q as u64 - 1)?;
        Ok(r.shift_up(1).neg().truncate(n))
    })
}

/// h as a level-one cusp form of weight q + 1, type 1.
pub fn h_series(field: &Fq, n: usize) -> Result<SeriesForm> {
    let q = field.q() as usize;
    SeriesForm::new(h_plain(field, n)?, q + 1, 1, Level::One)
}

/// E = Σ_{a monic} a·t_a (weight 2, type 1, not modular).
pub fn e_series(field: &Fq, n: usize) -> Result<USeries> {
    cached(field, "e", n, |n| {
        let monics = monics_below(field, n);
        let parts: Vec<Result<Vec<Vec<Elem>>>> = monics
            .par_iter()
            .map(|a| {
                let tp = t_param(a)?;
                let c = vec![Vec::new(), a.coeffs().to_vec()];
                Ok(horner_sparse_quotient(field, &c, tp.q_exp, &tp.p_terms, n))
            })
            .collect();
        let mut acc = vec![Vec::new(); n];
        for p in parts {
            add_raw(field, &mut acc, &p?);
        }
        Ok(USeries::from_raw(field, acc, PolyA::one(field), n))
    })
}

/// f∘t_π modulo u^n (the series of z ↦ f(πz)); f is needed only modulo
/// u^⌈n/q^d⌉.
pub fn compose_t_pi(f: &USeries, pi: &PrimePi, n: usize) -> Result<USeries> {
    let tp = t_param(pi.poly())?;
    Ok(f.compose_sparse_quotient(tp.q_exp, &tp.p_terms, n))
}

/// Precision of f needed for f∘t_π modulo u^n.
pub fn pre_image_prec(pi: &PrimePi, n: usize) -> usize {
    let big_q = pi.norm() as usize;
    n.div_ceil(big_q).max(1)
}

/// E* = E − π·E(πz) (weight 2, type 1, level π).
pub fn e_star_plain(pi: &PrimePi, n: usize) -> Result<USeries> {
    let f = pi.field();
    cached(f, &format!("estar[{}]", pi), n, |n| {
        let e = e_series(f, n)?;
        let ev = compose_t_pi(&e.truncate(pre_image_prec(pi, n)), pi, n)?;
        Ok(e.sub(&ev.scale_poly(pi.poly())))
    })
}

pub fn e_star_series(pi: &PrimePi, n: usize) -> Result<SeriesForm> {
    SeriesForm::new(e_star_plain(pi, n)?, 2, 1, Level::Pi(pi.clone()))
}

/// The u^0 coefficient of Ẽ_k as predicted by the zeta ratio.
pub fn eisenstein_constant(field: &Fq, k: usize) -> Result<RatK> {
    Ok(-&zeta_ratio(field, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::{parse_poly, parse_rat};

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn eisenstein_constant_and_gap() {
        let f = f3();
        let e = eisenstein_tilde(&f, 2, 30).unwrap();
        assert_eq!(e.coeff(0), parse_rat(&f, "1/(T^3-T)").unwrap());
        let e8 = eisenstein_tilde(&f, 8, 30).unwrap();
        assert!(e8.coeff(1).is_zero());
        let f5 = Fq::prime(5).unwrap();
        let e4 = eisenstein_tilde(&f5, 4, 30).unwrap();
        assert!((1..4).all(|j| e4.coeff(j).is_zero()));
    }

    #[test]
    fn truncation_invariance() {
        let f = Fq::prime(7).unwrap();
        // Fresh field (q = 7) keeps this test independent of cached entries.
        let a = eisenstein_tilde(&f, 6, 60).unwrap();
        let b = eisenstein_tilde(&f, 6, 120).unwrap();
        assert_eq!(a, b.truncate(60));
    }

    #[test]
    fn g_constant_terms_and_congruences() {
        let f = f3();
        for (d, pis) in [(1u32, vec!["T", "T+1"]), (2, vec!["T^2+1"])] {
            let g = g_series(&f, d, 60).unwrap();
            assert!(g.coeff(0).is_one(), "constant of g_{d}");
            for p in pis {
                let pi = PrimePi::new(parse_poly(&f, p).unwrap()).unwrap();
                assert!(g.reduce_mod_pi(&pi).unwrap().is_one(), "g_{d} mod {p}");
            }
        }
    }

    #[test]
    fn delta_and_h_leading_terms() {
        let f = f3();
        let d = delta_series(&f, 40).unwrap();
        assert!(d.series.coeff(0).is_zero());
        assert!(d.series.coeff(1).is_zero());
        assert_eq!(d.series.coeff(2), RatK::from_int(&f, -1));
        let h = h_series(&f, 40).unwrap();
        assert_eq!(h.series.ord(), Some(1));
        assert_eq!(h.series.coeff(1), RatK::from_int(&f, -1));
        assert!(h.series.pow(2).neg().agrees_with(&d.series));
    }

    #[test]
    fn e_low_coefficients() {
        let f = f3();
        let e = e_series(&f, 40).unwrap();
        assert!(e.coeff(1).is_one());
        assert!(e.coeff(3).is_zero());
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let es = e_star_series(&pi, 40).unwrap();
        assert!(es.series.coeff(1).is_one());
        assert_eq!(es.series.vpi(&pi), crate::algebra::Valuation::Finite(0));
    }
}
