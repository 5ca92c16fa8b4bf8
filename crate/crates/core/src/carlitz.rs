//! The Carlitz module and the quantities derived from it: brackets, the
//! parameters t_a, the inverse of the Carlitz exponential, zeta ratios,
//! Goss polynomials and the inverse-root power sums behind U_π.

use crate::algebra::field::{Elem, Fq};
use crate::algebra::kernel::{self, MulAcc};
use crate::algebra::{PolyA, PrimePi, RatK, USeries};
use crate::error::{Error, Result};

/// [i] = T^{q^i} − T.
pub fn bracket(field: &Fq, i: u32) -> PolyA {
    let q = field.q() as usize;
    let e = q.pow(i);
    &PolyA::monomial(field, 1, e) - &PolyA::t(field)
}

/// D_i = [i]·D_{i−1}^q with D_0 = 1 (the product of all monic polynomials of
/// degree i).
pub fn d_poly(field: &Fq, i: u32) -> PolyA {
    (1..=i).fold(PolyA::one(field), |acc, j| &bracket(field, j) * &acc.pow_q())
}

/// L_i = [1][2]⋯[i] (the lcm of all monic polynomials of degree i).
pub fn l_poly(field: &Fq, i: u32) -> PolyA {
    (1..=i).fold(PolyA::one(field), |acc, j| &acc * &bracket(field, j))
}

/// ([i], D_i, L_i).
pub fn bracket_d_l(field: &Fq, i: u32) -> Result<(PolyA, PolyA, PolyA)> {
    if i == 0 {
        return Err(Error::InvalidArgument("bracket index must be positive".into()));
    }
    Ok((bracket(field, i), d_poly(field, i), l_poly(field, i)))
}

/// An F_q-linear polynomial Σ c_i X^{q^i} with coefficients in A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePoly {
    coeffs: Vec<PolyA>,
}

impl AdditivePoly {
    pub fn new(mut coeffs: Vec<PolyA>) -> AdditivePoly {
        while coeffs.len() > 1 && coeffs.last().is_some_and(PolyA::is_zero) {
            coeffs.pop();
        }
        AdditivePoly { coeffs }
    }

    /// c_i, the coefficient of X^{q^i}.
    pub fn coeffs(&self) -> &[PolyA] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&PolyA> {
        self.coeffs.get(i)
    }

    /// Composition self ∘ other: Σ a_i (Σ b_j X^{q^j})^{q^i} = Σ a_i b_j^{q^i} X^{q^{i+j}}.
    pub fn compose(&self, other: &AdditivePoly) -> AdditivePoly {
        let f = self.coeffs[0].field();
        let mut out = vec![PolyA::zero(f); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let mut bq = b.clone();
                for _ in 0..i {
                    bq = bq.pow_q();
                }
                out[i + j] = &out[i + j] + &(a * &bq);
            }
        }
        AdditivePoly::new(out)
    }

    pub fn add(&self, other: &AdditivePoly) -> AdditivePoly {
        let f = self.coeffs[0].field();
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = PolyA::zero(f);
        let v = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        AdditivePoly::new(v)
    }

    /// Evaluates at an element of A.
    pub fn eval(&self, x: &PolyA) -> PolyA {
        let mut xp = x.clone();
        let mut acc = PolyA::zero(x.field());
        for c in &self.coeffs {
            acc = &acc + &(c * &xp);
            xp = xp.pow_q();
        }
        acc
    }
}

/// Coefficients of ρ_a, built from ρ_{T^{n+1}} = T·ρ_{T^n} + (ρ_{T^n})^q and
/// F_q-linearity in a.
pub fn carlitz_coeffs(a: &PolyA) -> AdditivePoly {
    let f = a.field();
    if a.is_zero() {
        return AdditivePoly::new(vec![PolyA::zero(f)]);
    }
    let t = PolyA::t(f);
    let mut rho_tn = vec![PolyA::one(f)]; // ρ_{T^0} = X
    let mut total = vec![PolyA::zero(f); a.coeffs().len()];
    for (n, &an) in a.coeffs().iter().enumerate() {
        if n > 0 {
            let mut next = vec![PolyA::zero(f); rho_tn.len() + 1];
            for (i, c) in rho_tn.iter().enumerate() {
                next[i] = &next[i] + &(&t * c);
                next[i + 1] = &next[i + 1] + &c.pow_q();
            }
            rho_tn = next;
        }
        if an != 0 {
            for (i, c) in rho_tn.iter().enumerate() {
                total[i] = &total[i] + &c.scale(an);
            }
        }
    }
    AdditivePoly::new(total)
}

/// The data of t_a = u^Q / P_a(u) with Q = q^{deg a} and
/// P_a(u) = u^Q ρ_a(1/u) = 1 + Σ_{i<deg a} c_i u^{Q − q^i}.
#[derive(Clone, Debug)]
pub struct TParam {
    pub q_exp: usize,
    /// The nonconstant terms (exponent, coefficient) of P_a.
    pub p_terms: Vec<(usize, PolyA)>,
}

/// Denominator data for t_a (a monic).
pub fn t_param(a: &PolyA) -> Result<TParam> {
    if !a.is_monic() {
        return Err(Error::InvalidArgument(format!("t_a requires a monic a, got {a}")));
    }
    let f = a.field();
    let rho = carlitz_coeffs(a);
    let delta = a.degree().expect("monic");
    let q = f.q() as usize;
    let big_q = q.pow(delta as u32);
    let mut p_terms = Vec::new();
    for (i, c) in rho.coeffs().iter().enumerate().take(delta) {
        if !c.is_zero() {
            p_terms.push((big_q - q.pow(i as u32), c.clone()));
        }
    }
    p_terms.sort_by_key(|(e, _)| *e);
    Ok(TParam { q_exp: big_q, p_terms })
}

/// t_a = 1/ρ_a(1/u) as a series modulo u^n.
pub fn t_series(a: &PolyA, n: usize) -> Result<USeries> {
    let tp = t_param(a)?;
    let u = USeries::u(a.field(), n.max(2));
    Ok(u.compose_sparse_quotient(tp.q_exp, &tp.p_terms, n))
}

/// c_j for 0 ≤ j < m, where 1/e_C(z) − 1/z = Σ c_j z^j and
/// e_C(z) = Σ_{i≥0} z^{q^i}/D_i.
pub fn inv_exp_coeffs(field: &Fq, m: usize) -> Vec<RatK> {
    // z/e_C(z) = 1/(1 + Σ_{i≥1} z^{q^i − 1}/D_i) = Σ b_n z^n; c_j = b_{j+1}.
    let q = field.q() as usize;
    let mut sparse: Vec<(usize, RatK)> = Vec::new();
    let mut i = 1u32;
    while q.pow(i) - 1 <= m {
        let d = d_poly(field, i);
        sparse.push((q.pow(i) - 1, RatK::new(PolyA::one(field), d)));
        i += 1;
    }
    let mut b: Vec<RatK> = vec![RatK::one(field)];
    for n in 1..=m {
        let mut acc = RatK::zero(field);
        for (e, c) in &sparse {
            if *e > n {
                break;
            }
            if !b[n - e].is_zero() {
                acc = &acc + &(c * &b[n - e]);
            }
        }
        b.push(-&acc);
    }
    b.into_iter().skip(1).collect()
}

/// ζ_A(k)/π̃^k for (q−1) | k, where ζ_A(k) = Σ_{b monic} b^{−k}.
pub fn zeta_ratio(field: &Fq, k: usize) -> Result<RatK> {
    let q = field.q() as usize;
    if k == 0 || k % (q - 1) != 0 {
        return Err(Error::NotEvenWeight(format!("zeta ratio needs (q-1) | k, got k = {k}")));
    }
    Ok(inv_exp_coeffs(field, k).pop().expect("k ≥ 1"))
}

/// Goss polynomial G_k(t) = Σ_{j=1}^{k} g_j t^j of the Carlitz lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GossPoly {
    pub k: usize,
    /// `coeffs[j]` is the coefficient of t^j; `coeffs[0] = 0`.
    pub coeffs: Vec<RatK>,
}

impl GossPoly {
    /// Σ_{ζ∈F_q^×} G_k(ζ^{-1} t) = −Σ_{(q−1)|j} g_j t^j, returned as the
    /// coefficient list of −(that sum) = Σ_{(q−1)|j} g_j t^j.
    pub fn unit_average(&self, q: usize) -> Vec<RatK> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j % (q - 1) == 0 { c.clone() } else { RatK::zero(c.field()) })
            .collect()
    }
}

/// G_0 = 0, G_1 = t, G_k = t·(G_{k−1} + Σ_{i≥1} G_{k−q^i}/D_i) for k ≥ 2.
pub fn goss_poly(field: &Fq, k: usize) -> GossPoly {
    goss_polys(field, k).pop().expect("k + 1 entries")
}

/// G_0, …, G_k.
pub fn goss_polys(field: &Fq, k: usize) -> Vec<GossPoly> {
    let q = field.q() as usize;
    let mut inv_d = Vec::new();
    let mut i = 1u32;
    while q.pow(i) <= k.max(1) {
        inv_d.push((q.pow(i), RatK::new(PolyA::one(field), d_poly(field, i))));
        i += 1;
    }
    let zero = RatK::zero(field);
    let mut all: Vec<GossPoly> = vec![GossPoly { k: 0, coeffs: vec![zero.clone()] }];
    for n in 1..=k {
        let mut inner: Vec<RatK> = vec![zero.clone(); n];
        if n == 1 {
            inner[0] = RatK::one(field);
        } else {
            for (j, c) in all[n - 1].coeffs.iter().enumerate() {
                inner[j] = &inner[j] + c;
            }
            for (qi, dinv) in &inv_d {
                if *qi > n {
                    break;
                }
                for (j, c) in all[n - qi].coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        inner[j] = &inner[j] + &(c * dinv);
                    }
                }
            }
        }
        let mut coeffs = vec![zero.clone()];
        coeffs.extend(inner);
        all.push(GossPoly { k: n, coeffs });
    }
    all
}

/// Rows ρ_π(t)^j for j < rows, each truncated below t^tdeg; row entries are
/// A-coefficients (raw) indexed by the power of t.
pub fn rho_power_rows(pi: &PrimePi, rows: usize, tdeg: usize) -> Vec<Vec<Vec<Elem>>> {
    let f = pi.field();
    let q = f.q() as usize;
    let rho = carlitz_coeffs(pi.poly());
    let terms: Vec<(usize, &PolyA)> = rho
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (q.pow(i as u32), c))
        .collect();
    let mut out = Vec::with_capacity(rows);
    if rows == 0 {
        return out;
    }
    let mut cur: Vec<Vec<Elem>> = vec![Vec::new(); tdeg];
    if tdeg > 0 {
        cur[0] = vec![1];
    }
    let mut acc = MulAcc::new(f);
    out.push(cur.clone());
    for _ in 1..rows {
        let mut next = vec![Vec::new(); tdeg];
        for (m, slot) in next.iter_mut().enumerate() {
            let mut any = false;
            for &(e, c) in &terms {
                if e > m {
                    break;
                }
                let src = &cur[m - e];
                if !src.is_empty() {
                    acc.add_product(src, c.coeffs());
                    any = true;
                }
            }
            if any {
                *slot = acc.finish();
            }
        }
        cur = next;
        out.push(cur.clone());
    }
    out
}

/// s_n = Σ_λ u((z+λ)/π)^n for 1 ≤ n < N as exact polynomials in u.
#[derive(Clone, Debug)]
pub struct PowerSums {
    pub pi: PrimePi,
    /// `sums[n]` for n in 1..N (index 0 is the zero series).
    pub sums: Vec<USeries>,
}

impl PowerSums {
    pub fn max_index(&self) -> usize {
        self.sums.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> &USeries {
        &self.sums[n]
    }
}

/// s_n = π·Σ_{j≥0} u^{j+1}·[t^{n−1}] ρ_π(t)^j, from the logarithmic derivative
/// of ρ_π(t) − 1/u (no division by n, so it is valid in characteristic p).
pub fn inverse_root_power_sums(pi: &PrimePi, n_max: usize) -> PowerSums {
    let f = pi.field();
    let rows = rho_power_rows(pi, n_max.saturating_sub(1), n_max.saturating_sub(1));
    let mut sums = vec![USeries::zero(f, 1)];
    for n in 1..n_max {
        let mut num = vec![Vec::new(); n + 1];
        for (j, row) in rows.iter().enumerate().take(n) {
            let c = &row[n - 1];
            if !c.is_empty() {
                num[j + 1] = kernel::mul(f, c, pi.poly().coeffs());
            }
        }
        sums.push(USeries::from_raw(f, num, PolyA::one(f), n + 1));
    }
    PowerSums { pi: pi.clone(), sums }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::{parse_poly, parse_rat};

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn brackets_and_products() {
        let f = f3();
        let (b1, d1, l1) = bracket_d_l(&f, 1).unwrap();
        let tq = parse_poly(&f, "T^3-T").unwrap();
        assert_eq!((b1, d1, l1), (tq.clone(), tq.clone(), tq.clone()));
        let (b2, d2, l2) = bracket_d_l(&f, 2).unwrap();
        assert_eq!(l2, &tq * &b2);
        assert_eq!(d2, &b2 * &tq.pow(3));
        // D_2 is the product of the nine monic quadratics.
        let prod = PolyA::monics_of_degree(&f, 2).iter().fold(PolyA::one(&f), |a, b| &a * b);
        assert_eq!(d2, prod);
    }

    #[test]
    fn carlitz_examples() {
        let f = f3();
        let t = PolyA::t(&f);
        let rt = carlitz_coeffs(&t);
        assert_eq!(rt.coeffs(), &[t.clone(), PolyA::one(&f)]);
        assert_eq!(carlitz_coeffs(&PolyA::one(&f)).coeffs(), &[PolyA::one(&f)]);
        let t2 = parse_poly(&f, "T^2").unwrap();
        let expected = vec![t2.clone(), parse_poly(&f, "T^3+T").unwrap(), PolyA::one(&f)];
        assert_eq!(carlitz_coeffs(&t2).coeffs(), expected.as_slice());
        assert_eq!(rt.compose(&rt), carlitz_coeffs(&t2));
    }

    #[test]
    fn t_series_for_t_over_f3() {
        let f = f3();
        let s = t_series(&PolyA::t(&f), 10).unwrap();
        let expect: Vec<RatK> = ["0", "0", "0", "1", "0", "-T", "0", "T^2", "0", "-T^3"]
            .iter()
            .map(|x| parse_rat(&f, x).unwrap())
            .collect();
        assert_eq!(s, USeries::from_rats(&f, &expect, 10));
        assert_eq!(t_series(&PolyA::one(&f), 6).unwrap(), USeries::u(&f, 6));
        for a in ["T", "T^2", "T+1"] {
            let a = parse_poly(&f, a).unwrap();
            let q = 3usize.pow(a.degree().unwrap() as u32);
            assert_eq!(t_series(&a, 40).unwrap().ord(), Some(q));
        }
    }

    #[test]
    fn inv_exp_low_terms() {
        let f = f3();
        let c = inv_exp_coeffs(&f, 4);
        assert!(c[0].is_zero());
        assert_eq!(c[1], parse_rat(&f, "-1/(T^3-T)").unwrap());
        assert_eq!(zeta_ratio(&f, 2).unwrap(), parse_rat(&f, "-1/(T^3-T)").unwrap());
        assert!(zeta_ratio(&f, 3).is_err());
        let f5 = Fq::prime(5).unwrap();
        let c5 = inv_exp_coeffs(&f5, 4);
        assert!(c5[..3].iter().all(RatK::is_zero));
        assert_eq!(c5[3], parse_rat(&f5, "-1/(T^5-T)").unwrap());
    }

    #[test]
    fn goss_examples() {
        let f = f3();
        let g = goss_polys(&f, 13);
        assert_eq!(g[2].coeffs[2], RatK::one(&f));
        assert!(g[2].coeffs[1].is_zero());
        assert_eq!(g[3].coeffs.iter().filter(|c| !c.is_zero()).count(), 1);
        assert!(g[3].coeffs[3].is_one());
        let g4 = &g[4].coeffs;
        assert!(g4[4].is_one());
        assert_eq!(g4[2], parse_rat(&f, "1/(T^3-T)").unwrap());
        for gk in &g[1..] {
            assert!(gk.coeffs[gk.k].is_one(), "leading coefficient of G_{}", gk.k);
            assert!(gk.coeffs[0].is_zero());
        }
    }

    #[test]
    fn power_sum_examples() {
        let f = f3();
        let pi = PrimePi::new(PolyA::t(&f)).unwrap();
        let s = inverse_root_power_sums(&pi, 12);
        let t = RatK::from_poly(PolyA::t(&f));
        assert_eq!(s.get(1), &USeries::monomial(&t, 1, 2));
        assert_eq!(s.get(2), &USeries::monomial(&t.pow(2), 2, 3));
        for n in 1..12 {
            let ord = s.get(n).ord().unwrap();
            assert!(ord >= n.div_ceil(3), "ord s_{n} = {ord}");
        }
    }
}
