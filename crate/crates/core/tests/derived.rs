//! Derived quantities checked against oracles written independently of the
//! library code paths: direct products over monic polynomials, naive
//! Carlitz evaluation, naive series inversion and generating functions.

use dmf_core::algebra::{Fq, PolyA, RatK, USeries};
use dmf_core::carlitz::{bracket, carlitz_coeffs, d_poly, goss_poly, inv_exp_coeffs, l_poly, t_series, zeta_ratio};
use dmf_core::forms::{delta_series, e_series, eisenstein_tilde, g_series, h_series, SeriesForm, Level};
use dmf_core::operators::partial;

fn field(q: u32) -> Fq {
    Fq::prime(q).unwrap()
}

fn t(f: &Fq) -> PolyA {
    PolyA::t(f)
}

/// All monic polynomials of degree d, by counting in base q.
fn monics(f: &Fq, d: usize) -> Vec<PolyA> {
    let q = f.q() as usize;
    (0..q.pow(d as u32))
        .map(|mut n| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((n % q) as u32);
                n /= q;
            }
            c.push(1);
            PolyA::from_coeffs(f, c)
        })
        .collect()
}

fn product(f: &Fq, ps: &[PolyA]) -> PolyA {
    ps.iter().fold(PolyA::one(f), |acc, p| &acc * p)
}

#[test]
fn d_i_is_the_product_of_monics_of_degree_i() {
    for q in [3, 5] {
        let f = field(q);
        for i in 1..=2 {
            assert_eq!(d_poly(&f, i), product(&f, &monics(&f, i as usize)), "q={q} i={i}");
        }
    }
}

#[test]
fn l_i_is_the_lcm_of_monics_of_degree_i() {
    let f = field(3);
    for i in 1..=3u32 {
        let lcm = monics(&f, i as usize).iter().fold(PolyA::one(&f), |acc, m| {
            let g = acc.gcd(m);
            &acc * &m.div_exact(&g).unwrap()
        });
        assert_eq!(l_poly(&f, i).monic(), lcm, "i={i}");
    }
}

#[test]
fn bracket_is_t_to_the_q_i_minus_t() {
    let f = field(5);
    assert_eq!(bracket(&f, 1), &t(&f).pow(5) - &t(&f));
    assert_eq!(bracket(&f, 2), &t(&f).pow(25) - &t(&f));
}

/// ρ_a as τ-coefficients, by Horner's rule in ρ_T = T + τ.
fn carlitz_oracle(a: &PolyA) -> Vec<PolyA> {
    let f = a.field();
    let mut acc: Vec<PolyA> = vec![PolyA::zero(f)];
    for c in a.coeffs().iter().rev() {
        // acc ← ρ_T ∘ acc + c
        let mut next = vec![PolyA::zero(f); acc.len() + 1];
        for (i, p) in acc.iter().enumerate() {
            next[i] = &next[i] + &(&t(f) * p);
            next[i + 1] = &next[i + 1] + &p.pow(f.q() as u64);
        }
        next[0] = &next[0] + &PolyA::constant(f, *c);
        while next.len() > 1 && next.last().unwrap().is_zero() {
            next.pop();
        }
        acc = next;
    }
    acc
}

#[test]
fn carlitz_module_matches_horner_oracle() {
    let f = field(3);
    for src in [vec![0, 0, 1], vec![1, 1], vec![2, 0, 1, 1], vec![1, 2, 0, 1]] {
        let a = PolyA::from_coeffs(&f, src);
        assert_eq!(carlitz_coeffs(&a).coeffs(), carlitz_oracle(&a).as_slice(), "a={a}");
    }
}

/// Naive power-series inverse over A of a series with constant term 1.
fn inv_series(f: &Fq, s: &[PolyA], n: usize) -> Vec<PolyA> {
    assert!(s[0].is_one());
    let mut out = vec![PolyA::one(f)];
    for k in 1..n {
        let mut acc = PolyA::zero(f);
        for j in 1..=k.min(s.len() - 1) {
            acc = &acc + &(&s[j] * &out[k - j]);
        }
        out.push(-&acc);
    }
    out
}

/// t_a = 1/ρ_a(1/u) = u^Q / (Σ_i c_i u^{Q−q^i}), computed by naive
/// inversion of the reversed Carlitz polynomial.
fn t_oracle(a: &PolyA, n: usize) -> Vec<PolyA> {
    let f = a.field();
    let rho = carlitz_oracle(a);
    let q = f.q() as usize;
    let d = rho.len() - 1;
    let big_q = q.pow(d as u32);
    let mut den = vec![PolyA::zero(f); big_q];
    for (i, c) in rho.iter().enumerate() {
        den[big_q - q.pow(i as u32)] = c.clone();
    }
    let inv = inv_series(f, &den, n);
    let mut out = vec![PolyA::zero(f); n];
    for (k, c) in inv.into_iter().enumerate() {
        if k + big_q < n {
            out[k + big_q] = c;
        }
    }
    out
}

#[test]
fn t_series_matches_naive_inversion() {
    let f = field(3);
    let n = 40;
    for a in [t(&f), &t(&f) + &PolyA::one(&f), &t(&f).pow(2) + &PolyA::one(&f)] {
        let expect = USeries::from_polys(&f, t_oracle(&a, n), n);
        assert_eq!(t_series(&a, n).unwrap(), expect, "a={a}");
    }
    // t_T = Σ_k (−T)^k u^{q+k(q−1)} explicitly.
    let t3 = t_series(&t(&f), 12).unwrap();
    assert_eq!(t3.coeff(3), RatK::one(&f));
    assert_eq!(t3.coeff(5), RatK::from_poly(-&t(&f)));
    assert_eq!(t3.coeff(7), RatK::from_poly(t(&f).pow(2)));
    assert!(t3.coeff(4).is_zero() && t3.coeff(6).is_zero());
}

#[test]
fn e_matches_sum_of_a_times_t_a() {
    let f = field(3);
    let n = 30;
    let mut acc = vec![PolyA::zero(&f); n];
    for d in 0..=3 {
        for a in monics(&f, d) {
            for (i, c) in t_oracle(&a, n).iter().enumerate() {
                acc[i] = &acc[i] + &(&a * c);
            }
        }
    }
    assert_eq!(e_series(&f, n).unwrap(), USeries::from_polys(&f, acc, n));
}

#[test]
fn first_inverse_exponential_coefficient_is_minus_one_over_d1() {
    for q in [3, 5, 7] {
        let f = field(q);
        let c = inv_exp_coeffs(&f, q as usize - 1);
        let expect = -&RatK::new(PolyA::one(&f), d_poly(&f, 1));
        assert_eq!(c[q as usize - 2], expect);
        assert_eq!(zeta_ratio(&f, q as usize - 1).unwrap(), expect);
        for (j, cj) in c.iter().enumerate().take(q as usize - 2) {
            assert!(cj.is_zero(), "c_{j} should vanish");
        }
    }
}

/// Truncated power series in x = 1/T over F_p, as residues 0..p.
struct Laurent {
    p: i64,
    n: usize,
}

impl Laurent {
    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(self.n - i.min(self.n)) {
                if i + j < self.n {
                    out[i + j] = (out[i + j] + x * y).rem_euclid(self.p);
                }
            }
        }
        out
    }

    fn inv(&self, a: &[i64]) -> Vec<i64> {
        assert_eq!(a[0], 1);
        let mut out = vec![0; self.n];
        out[0] = 1;
        for k in 1..self.n {
            let s: i64 = (1..=k).map(|j| a.get(j).copied().unwrap_or(0) * out[k - j]).sum();
            out[k] = (-s).rem_euclid(self.p);
        }
        out
    }

    fn pow(&self, a: &[i64], e: u32) -> Vec<i64> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn one(&self) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[0] = 1;
        v
    }

    fn monomial(&self, e: usize) -> Vec<i64> {
        let mut v = vec![0; self.n];
        if e < self.n {
            v[e] = 1;
        }
        v
    }
}

/// In K_∞ = F_q((1/T)): Σ_{a monic} a^{1−q} = Π_{i≥1}(1 − [i]/[i+1])^{q−1}.
/// This is ζ_A(q−1) = −π̃^{q−1}/[1], i.e. ζ_A(q−1)/π̃^{q−1} = −1/[1].
#[test]
fn zeta_at_q_minus_one_matches_carlitz_product() {
    let q = 3u32;
    let f = field(q);
    let qq = q as usize;
    let max_deg = 4;
    let n = max_deg * (qq - 1) + 1;
    let l = Laurent { p: q as i64, n };

    // a = T^d·(1 + ε) with ε ∈ x·F_q[x]; a^{1−q} = x^{d(q−1)}·(1+ε)^{1−q}.
    let mut sum = vec![0i64; n];
    for d in 0..=max_deg {
        for a in monics(&f, d) {
            let mut one_eps = vec![0i64; n];
            for (i, c) in a.coeffs().iter().enumerate() {
                if d - i < n {
                    one_eps[d - i] = *c as i64;
                }
            }
            let term = l.mul(&l.pow(&l.inv(&one_eps), q - 1), &l.monomial(d * (qq - 1)));
            for i in 0..n {
                sum[i] = (sum[i] + term[i]).rem_euclid(l.p);
            }
        }
    }

    // [i]/[i+1] = x^{q^{i+1}−q^i}·(1 − x^{q^i−1})/(1 − x^{q^{i+1}−1}).
    let mut prod = l.one();
    let mut i = 1u32;
    while qq.pow(i + 1) - qq.pow(i) < n {
        let one_minus = |e: usize| {
            let mut v = l.one();
            if e < n {
                v[e] = l.p - 1;
            }
            v
        };
        let num = one_minus(qq.pow(i) - 1);
        let den = one_minus(qq.pow(i + 1) - 1);
        let ratio = l.mul(&l.mul(&num, &l.inv(&den)), &l.monomial(qq.pow(i + 1) - qq.pow(i)));
        let mut factor = l.one();
        for (j, r) in ratio.iter().enumerate() {
            factor[j] = (factor[j] - r).rem_euclid(l.p);
        }
        prod = l.mul(&prod, &l.pow(&factor, q - 1));
        i += 1;
    }
    assert_eq!(sum, prod);
    let expect = -&RatK::new(PolyA::one(&f), bracket(&f, 1));
    assert_eq!(zeta_ratio(&f, qq - 1).unwrap(), expect);
}

/// Σ_k G_k(t) x^k = t·x / (1 − t·e_C(x)), expanded by powers of e_C.
fn goss_oracle(f: &Fq, kmax: usize) -> Vec<Vec<RatK>> {
    let q = f.q() as usize;
    let zero = RatK::zero(f);
    let mut e = vec![zero.clone(); kmax + 1];
    let mut i = 0u32;
    while q.pow(i) <= kmax {
        e[q.pow(i)] = RatK::new(PolyA::one(f), d_poly(f, i));
        i += 1;
    }
    let mul = |a: &[RatK], b: &[RatK]| {
        let mut out = vec![zero.clone(); kmax + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= kmax && !x.is_zero() && !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        out
    };
    // g[k][m] = coefficient of t^m in G_k = [x^{k−1}] e(x)^{m−1}.
    let mut g = vec![vec![zero.clone(); kmax + 2]; kmax + 1];
    let mut e_pow = vec![zero.clone(); kmax + 1];
    e_pow[0] = RatK::one(f);
    for m in 1..=kmax {
        for k in 1..=kmax {
            g[k][m] = e_pow[k - 1].clone();
        }
        e_pow = mul(&e_pow, &e);
    }
    g
}

#[test]
fn goss_polynomials_match_generating_function() {
    let f = field(3);
    let kmax = 20;
    let oracle = goss_oracle(&f, kmax);
    for (k, expect) in oracle.iter().enumerate().skip(1) {
        let g = goss_poly(&f, k);
        for j in 0..=kmax {
            let got = g.coeffs.get(j).cloned().unwrap_or_else(|| RatK::zero(&f));
            assert_eq!(got, expect[j], "G_{k}, t^{j}");
        }
    }
    // G_{q+1} = t^{q+1} + t²/D_1.
    let g4 = goss_poly(&f, 4);
    assert_eq!(g4.coeffs[4], RatK::one(&f));
    assert_eq!(g4.coeffs[2], RatK::new(PolyA::one(&f), d_poly(&f, 1)));
}

#[test]
fn eisenstein_constant_term_is_minus_zeta_ratio() {
    let f = field(3);
    for k in [2, 4, 8, 26] {
        let e = eisenstein_tilde(&f, k, 5).unwrap();
        assert_eq!(e.coeff(0), -&zeta_ratio(&f, k).unwrap(), "k={k}");
    }
}

#[test]
fn g_d_is_one_at_the_cusp() {
    for q in [3, 5] {
        let f = field(q);
        for d in 1..=2 {
            let g = g_series(&f, d, 10).unwrap();
            assert!(g.coeff(0).is_one(), "q={q} d={d}");
        }
    }
}

#[test]
fn delta_leads_with_minus_u_to_the_q_minus_one() {
    for q in [3u32, 5] {
        let f = field(q);
        let d = delta_series(&f, 30).unwrap().series;
        assert_eq!(d.ord(), Some(q as usize - 1));
        assert_eq!(d.coeff(q as usize - 1), RatK::from_int(&f, -1));
    }
}

#[test]
fn h_to_the_q_minus_one_is_minus_delta() {
    for q in [3u32, 5] {
        let f = field(q);
        let n = 60;
        let h = h_series(&f, n).unwrap().series;
        let d = delta_series(&f, n).unwrap().series;
        assert_eq!(h.pow_trunc(q as u64 - 1, n), d.neg());
        assert_eq!(h.coeff(1), RatK::from_int(&f, -1));
    }
}

#[test]
fn derivative_of_g1_is_a_multiple_of_h() {
    for q in [3u32, 5] {
        let f = field(q);
        let n = 40;
        let g1 = SeriesForm::new(g_series(&f, 1, n).unwrap(), q as usize - 1, 0, Level::One).unwrap();
        let dg = partial(&g1).unwrap().series;
        let h = h_series(&f, n).unwrap().series;
        let c = &dg.coeff(1) / &h.coeff(1);
        assert!(!c.is_zero());
        assert_eq!(dg, h.scale(&c), "q={q}");
    }
}

#[test]
fn theta_is_minus_u_squared_d_du() {
    let f = field(5);
    let s = USeries::from_rats(&f, &[RatK::from_int(&f, 1), RatK::from_int(&f, 2), RatK::from_int(&f, 3)], 3);
    let th = s.theta();
    assert!(th.coeff(0).is_zero());
    assert!(th.coeff(1).is_zero());
    // 1 + 2u + 3u² ↦ −2u² − 6u³.
    assert_eq!(th.coeff(2), RatK::from_int(&f, -2));
    assert_eq!(th.coeff(3), RatK::from_int(&f, -6));
}
