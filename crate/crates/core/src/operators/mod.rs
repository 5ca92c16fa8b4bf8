//! The operator calculus on u-series: Θ, ∂_k, the degeneracy operators
//! U_π and V_π, congruence testing, and (in submodules) the symbolic
//! oldform algebra with its Atkin–Lehner action, the trace to level one,
//! g_(k), and the replay of the filtration argument.

mod oldpoly;
mod trace;

pub use oldpoly::{Atom, Monomial, OldPoly};
pub use trace::{gk_form, proof_trace, trace_level_one, ProofTrace, TraceOutcome};

use serde::Serialize;

use crate::algebra::{PrimePi, USeries, Valuation};
use crate::carlitz::rho_power_rows;
use crate::algebra::kernel::MulAcc;
use crate::error::Result;
use crate::forms::{compose_t_pi, e_series, SeriesForm};

/// Θ = −u² d/du; precision grows by one.
pub fn theta(f: &USeries) -> USeries {
    f.theta()
}

/// ∂_k f = Θf + k·E·f on a bare series of weight k, modulo u^prec(f).
pub fn partial_series(f: &USeries, k: usize) -> Result<USeries> {
    let n = f.prec();
    let e = e_series(f.field(), n)?;
    let ef = e.mul_trunc(f, n).scale_int(k as i64);
    Ok(theta(f).truncate(n).add(&ef))
}

/// ∂_k on a form: weight k+2, type l+1, same level.
pub fn partial(f: &SeriesForm) -> Result<SeriesForm> {
    let s = partial_series(&f.series, f.weight)?;
    SeriesForm::new(s, f.weight + 2, f.typ + 1, f.level.clone())
}

/// f|V_π = f(πz) = f∘t_π, with precision prec(f)·q^d.
pub fn v_operator(f: &USeries, pi: &PrimePi) -> Result<USeries> {
    compose_t_pi(f, pi, f.prec() * pi.norm() as usize)
}

/// f|U_π = (1/π)·Σ_{n≥1} a_n s_n, evaluated as
/// (f|U)_i = Σ_m a_{m+1}·[t^m]ρ_π(t)^{i−1} for i ≥ 1 (the u^0 term vanishes
/// because q^d = 0 in characteristic p). Precision ⌈N/q^d⌉.
pub fn u_operator(f: &USeries, pi: &PrimePi) -> USeries {
    let field = f.field();
    let n = f.prec();
    let big_q = pi.norm() as usize;
    let out_prec = n.div_ceil(big_q);
    let tdeg = n.saturating_sub(1);
    let rows = rho_power_rows(pi, out_prec.saturating_sub(1), tdeg);
    let mut num = vec![Vec::new(); out_prec];
    let mut acc = MulAcc::new(field);
    for (i, slot) in num.iter_mut().enumerate().skip(1) {
        let row = &rows[i - 1];
        let mut any = false;
        for (m, c) in row.iter().enumerate() {
            let a = f.num(m + 1);
            if !c.is_empty() && !a.is_empty() {
                acc.add_product(a, c);
                any = true;
            }
        }
        if any {
            *slot = acc.finish();
        }
    }
    USeries::from_raw(field, num, f.den().clone(), out_prec)
}

/// Outcome of comparing two series modulo π^e.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CongruenceReport {
    pub left: String,
    pub right: String,
    pub pi: String,
    pub order: i64,
    pub verdict: bool,
    /// v_π(left − right) over the compared range.
    pub valuation: Valuation,
    /// Number of coefficients compared.
    pub compared: usize,
    /// First u-exponent whose coefficient difference has v_π < order.
    pub first_failure: Option<usize>,
    /// The offending coefficient difference, in canonical text.
    pub offending: Option<String>,
}

/// Decides v_π(f − g) ≥ e over the common precision.
pub fn congruent(left: &str, f: &USeries, right: &str, g: &USeries, pi: &PrimePi, e: i64) -> CongruenceReport {
    let diff = f.sub(g);
    let valuation = diff.vpi(pi);
    let verdict = valuation >= Valuation::Finite(e);
    let first_failure = if verdict {
        None
    } else {
        (0..diff.prec()).find(|&i| {
            !diff.coeff_is_zero(i) && diff.coeff(i).vpi(pi) < Valuation::Finite(e)
        })
    };
    CongruenceReport {
        left: left.to_string(),
        right: right.to_string(),
        pi: pi.to_string(),
        order: e,
        verdict,
        valuation,
        compared: diff.prec(),
        offending: first_failure.map(|i| diff.coeff(i).to_string()),
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fq, PolyA, RatK};
    use crate::forms::{delta_series, e_star_plain, g_series};

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn theta_examples() {
        let f = f3();
        let one = USeries::one(&f, 5);
        assert!(theta(&one).is_zero());
        let u = USeries::u(&f, 5);
        let tu = theta(&u);
        assert_eq!(tu.coeff(2), RatK::from_int(&f, -1));
        assert_eq!(tu.support(), vec![2]);
        let u3 = USeries::monomial(&RatK::one(&f), 3, 6);
        assert!(theta(&u3).is_zero());
    }

    #[test]
    fn partial_kills_delta() {
        let f = f3();
        let d = delta_series(&f, 60).unwrap();
        let pd = partial(&d).unwrap();
        assert!(pd.series.is_zero());
        assert_eq!(pd.weight, 10);
        assert_eq!(pd.typ, 1);
    }

    #[test]
    fn v_operator_of_u_is_t_pi() {
        let f = f3();
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let u = USeries::u(&f, 10);
        let v = v_operator(&u, &pi).unwrap();
        assert_eq!(v.prec(), 30);
        let t = crate::carlitz::t_series(pi.poly(), 30).unwrap();
        assert_eq!(v, t);
        let g = g_series(&f, 1, 10).unwrap().sub(&USeries::one(&f, 10));
        let vg = v_operator(&g, &pi).unwrap();
        assert_eq!(vg.ord(), g.ord().map(|o| 3 * o));
    }

    #[test]
    fn u_annihilates_v_images() {
        let f = f3();
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let g = g_series(&f, 1, 20).unwrap();
        let uv = u_operator(&v_operator(&g, &pi).unwrap(), &pi);
        assert_eq!(uv.prec(), 20);
        assert!(uv.is_zero());
    }

    #[test]
    fn u_fixes_e_star() {
        let f = f3();
        for s in ["T", "T^2+1"] {
            let pi = PrimePi::new(crate::algebra::text::parse_poly(&f, s).unwrap()).unwrap();
            let es = e_star_plain(&pi, 120).unwrap();
            let ue = u_operator(&es, &pi);
            assert!(ue.agrees_with(&es), "U(E*) ≠ E* for π = {s}");
        }
    }

    #[test]
    fn congruence_report_witness() {
        let f = f3();
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let u = USeries::u(&f, 4);
        let inv_t = RatK::from_poly(PolyA::t(&f)).inv().unwrap();
        let g = u.add(&USeries::monomial(&inv_t, 2, 4));
        let r = congruent("u", &u, "u+u^2/T", &g, &pi, 1);
        assert!(!r.verdict);
        assert_eq!(r.first_failure, Some(2));
        let r = congruent("u", &u, "u", &u, &pi, 1);
        assert!(r.verdict);
        assert_eq!(r.valuation, Valuation::Infinity);
    }
}
