//! Trace to level one, the forms g_(k), and the mechanical replay of the
//! filtration argument for a pair of eigenforms f, g with Θf ≡ g (mod π).

use serde::Serialize;

use crate::algebra::{PrimePi, RatK, Valuation};
use crate::error::{Error, Result};
use crate::forms::{gd_series, Generator, Level, SeriesForm};
use crate::structure::{filtration, Filtration, SOLVE_MARGIN};

use super::{congruent, partial, theta, u_operator, CongruenceReport, OldPoly};

fn pi_power(pi: &PrimePi, e: i64) -> RatK {
    RatK::from_poly(pi.poly().clone()).pow(e)
}

/// Tr(f) = f + π^{1−k/2}·(f|W_π)|U_π as a level-one form modulo u^n.
pub fn trace_level_one(f: &OldPoly, n: usize) -> Result<SeriesForm> {
    let k = f.weight();
    if k % 2 == 1 {
        return Err(Error::OddWeightUnsupported(format!("trace of weight {k}")));
    }
    let pi = f.pi();
    let big_q = pi.norm() as usize;
    let w = f.w_action()?;
    let direct = f.flatten(n)?;
    let from_w = u_operator(&w.flatten(n * big_q)?, pi);
    let s = direct.add(&from_w.scale(&pi_power(pi, 1 - (k / 2) as i64))).truncate(n);
    SeriesForm::new(s, k, f.typ(), Level::One)
}

/// g_(k) = (g_d − π^{q^d−1}·ι(g_d))^{k−1}, where d = deg π.
pub fn gk_form(k: usize, pi: &PrimePi) -> Result<OldPoly> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("g_(k) needs k ≥ 2, got {k}")));
    }
    let g = Generator::G(pi.degree() as u32);
    let big_q = pi.norm() as i64;
    let base = OldPoly::plain(pi, g).sub(&OldPoly::iota_of(pi, g).scale(&pi_power(pi, big_q - 1)))?;
    Ok(base.pow((k - 1) as u32))
}

/// How the replayed argument ends.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TraceOutcome {
    /// α = −β: the theorem's conclusion holds outright.
    OppositeEigenvalues,
    /// α = β with maximal w(F̄): the chain yields the contradiction.
    Contradiction,
    /// α = β but w(F̄) dropped, so the hypothesis fails and no
    /// contradiction arises.
    FiltrationDrop,
}

/// Every intermediate quantity and verdict of the replay.
#[derive(Clone, Debug, Serialize)]
pub struct ProofTrace {
    pub pi: String,
    pub k: usize,
    /// k ≡ 0 (mod p), in which case F ≡ kf ≡ 0.
    pub k_divisible_by_p: bool,
    pub alpha: i8,
    pub beta: i8,
    /// Precision of the traces F and H.
    pub trace_prec: usize,
    /// Θf ≡ g (mod π).
    pub premise: CongruenceReport,
    /// v_π of h := (g − ∂f + kE*f)/π; integral means the first step holds.
    pub h_valuation: Valuation,
    pub h_integral: bool,
    /// W(g − ∂f + kE*f) = βg − α∂f after flattening.
    pub w_relation: bool,
    /// F := Tr(k·f·g_(k)) ≡ k·f (mod π).
    pub f_congruence: CongruenceReport,
    /// H := Tr((g − ∂f)·g_(k)) ≡ −k·E*·f (mod π).
    pub h_congruence: CongruenceReport,
    /// H ≡ ∂(g_d)·F (mod π).
    pub h_vs_dgd_f: CongruenceReport,
    pub weight_f: usize,
    pub weight_h: usize,
    pub filtration_f: Filtration,
    pub filtration_h: Filtration,
    /// w(H̄) ≤ (k−1)q^d + 3.
    pub filtration_h_bound: usize,
    pub filtration_h_ok: bool,
    /// The maximal value (k−1)(q^d−1) + k assumed by the theorem.
    pub hypothesis_weight: usize,
    pub hypothesis_holds: bool,
    pub outcome: TraceOutcome,
}

impl ProofTrace {
    /// True when every congruence of the chain holds.
    pub fn chain_holds(&self) -> bool {
        self.premise.verdict
            && self.h_integral
            && self.w_relation
            && self.f_congruence.verdict
            && (self.alpha != self.beta || (self.h_congruence.verdict && self.h_vs_dgd_f.verdict))
            && self.filtration_h_ok
    }
}

fn eigen(f: &OldPoly, name: &str) -> Result<i8> {
    f.eigenvalue()?
        .ok_or_else(|| Error::InvalidArgument(format!("{name} is not a W-eigenform")))
}

/// Replays the filtration argument for eigenforms f (weight k, eigenvalue α)
/// and g (weight k+2, eigenvalue β) with Θf ≡ g (mod π); n is the precision
/// of the direct (non-trace) checks.
pub fn proof_trace(f: &OldPoly, g: &OldPoly, n: usize) -> Result<ProofTrace> {
    let pi = f.pi().clone();
    let field = f.field().clone();
    let q = field.q() as usize;
    let big_q = pi.norm() as usize;
    let k = f.weight();
    if g.weight() != k + 2 {
        return Err(Error::InvalidArgument(format!("g has weight {}, expected {}", g.weight(), k + 2)));
    }
    let kk = RatK::from_int(&field, k as i64);

    let ff = f.flatten(n)?;
    let gf = g.flatten(n)?;
    let premise = congruent("theta(f)", &theta(&ff).truncate(n), "g", &gf, &pi, 1);
    if !premise.verdict {
        return Err(Error::PremiseViolated(format!(
            "Θf ≢ g (mod {pi}) at u^{}",
            premise.first_failure.unwrap_or(0)
        )));
    }
    let alpha = eigen(f, "f")?;
    let beta = eigen(g, "g")?;

    let del = OldPoly::del(f, alpha)?;
    let e_star = OldPoly::e_star(&pi);
    let e_star_f = e_star.mul(f)?;
    let g_minus_del = g.sub(&del)?;
    let pi_h = g_minus_del.add(&e_star_f.scale(&kk))?;
    let h_series = pi_h.flatten(n)?.scale(&pi_power(&pi, -1));
    let h_valuation = h_series.vpi(&pi);
    let h_integral = h_valuation >= Valuation::Finite(0);

    let lhs = pi_h.w_action()?.flatten(n)?;
    let rhs = g.scale(&RatK::from_int(&field, beta as i64)).sub(&del.scale(&RatK::from_int(&field, alpha as i64)))?;
    let w_relation = lhs == rhs.flatten(n)?;

    let gk = gk_form(k, &pi)?;
    let weight_f = k + (k - 1) * (big_q - 1);
    let weight_h = weight_f + 2;
    let trace_prec = weight_h / (q + 1) + SOLVE_MARGIN + 1;

    let f_in = f.mul(&gk)?.scale(&kk);
    let big_f = trace_level_one(&f_in, trace_prec)?;
    let kf = f.flatten(trace_prec)?.scale(&kk);
    let f_congruence = congruent("F", &big_f.series, "k*f", &kf, &pi, 1);

    let h_in = g_minus_del.mul(&gk)?;
    let big_h = trace_level_one(&h_in, trace_prec)?;
    let target = e_star_f.flatten(trace_prec)?.scale(&-&kk);
    let h_congruence = congruent("H", &big_h.series, "-k*E*f", &target, &pi, 1);

    let dgd = partial(&gd_series(&pi, trace_prec)?)?;
    let dgd_f = dgd.series.mul_trunc(&big_f.series, trace_prec);
    let h_vs_dgd_f = congruent("H", &big_h.series, "del(g_d)*F", &dgd_f, &pi, 1);

    let filtration_f = filtration(&big_f, &pi)?.filtration;
    let filtration_h = filtration(&big_h, &pi)?.filtration;
    let filtration_h_bound = (k - 1) * big_q + 3;
    let filtration_h_ok = filtration_h <= Filtration::Weight(filtration_h_bound);
    let hypothesis_weight = weight_f;
    let hypothesis_holds = filtration_f == Filtration::Weight(hypothesis_weight);
    let outcome = if alpha != beta {
        TraceOutcome::OppositeEigenvalues
    } else if hypothesis_holds {
        TraceOutcome::Contradiction
    } else {
        TraceOutcome::FiltrationDrop
    };
    Ok(ProofTrace {
        pi: pi.to_string(),
        k,
        k_divisible_by_p: k % field.p() as usize == 0,
        alpha,
        beta,
        trace_prec,
        premise,
        h_valuation,
        h_integral,
        w_relation,
        f_congruence,
        h_congruence,
        h_vs_dgd_f,
        weight_f,
        weight_h,
        filtration_f,
        filtration_h,
        filtration_h_bound,
        filtration_h_ok,
        hypothesis_weight,
        hypothesis_holds,
        outcome,
    })
}
