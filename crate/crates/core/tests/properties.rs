//! Algebraic invariants over randomly generated inputs.

use proptest::prelude::*;

use dmf_core::algebra::{FieldSpec, Fq, PolyA, PrimePi, RatK, USeries, Valuation};
use dmf_core::carlitz::carlitz_coeffs;
use dmf_core::forms::Generator;
use dmf_core::operators::OldPoly;
use dmf_core::structure::{enumerate_monomials, IsobarPoly};

fn f3() -> Fq {
    Fq::prime(3).unwrap()
}

fn f9() -> Fq {
    Fq::new(&FieldSpec::from_q(9).unwrap()).unwrap()
}

fn poly(f: &Fq, c: &[u32]) -> PolyA {
    PolyA::from_coeffs(f, c.iter().map(|x| x % f.q()).collect())
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..9, 0..=max_len)
}

fn nonzero_coeffs(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    coeffs(max_len).prop_filter("nonzero", |v| v.iter().any(|c| c % 3 != 0))
}

fn pi_t() -> PrimePi {
    PrimePi::new(PolyA::t(&f3())).unwrap()
}

fn series(f: &Fq, rows: &[Vec<u32>], prec: usize) -> USeries {
    USeries::from_polys(f, rows.iter().map(|c| poly(f, c)).collect(), prec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let f = f9();
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        prop_assert_eq!(f.pow(a, 9), a);
    }

    #[test]
    fn polynomial_ring_axioms(a in coeffs(6), b in coeffs(6), c in nonzero_coeffs(4)) {
        let f = f3();
        let (a, b, c) = (poly(&f, &a), poly(&f, &b), poly(&f, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let (quo, rem) = a.divrem(&c);
        prop_assert_eq!(&(&quo * &c) + &rem, a.clone());
        prop_assert!(rem.degree().map_or(true, |d| d < c.degree().unwrap()));
        let g = a.gcd(&c);
        prop_assert!(g.divides(&a) && g.divides(&c));
    }

    #[test]
    fn rational_field_axioms(a in coeffs(4), b in nonzero_coeffs(4), c in nonzero_coeffs(4), d in nonzero_coeffs(4)) {
        let f = f3();
        let x = RatK::new(poly(&f, &a), poly(&f, &b));
        let y = RatK::new(poly(&f, &c), poly(&f, &d));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if let Some(inv) = x.inv() {
            prop_assert!((&x * &inv).is_one());
        }
    }

    #[test]
    fn pi_adic_valuation_is_additive(a in nonzero_coeffs(5), b in nonzero_coeffs(5), c in nonzero_coeffs(3)) {
        let f = f3();
        let pi = PrimePi::new(poly(&f, &[1, 0, 1])).unwrap();
        let x = RatK::new(poly(&f, &a), poly(&f, &c));
        let y = RatK::from_poly(poly(&f, &b));
        prop_assert_eq!((&x * &y).vpi(&pi), x.vpi(&pi) + y.vpi(&pi));
        prop_assert_eq!(x.inv().unwrap().vpi(&pi), Valuation::Finite(-x.vpi(&pi).finite().unwrap()));
    }

    #[test]
    fn series_inverse(rows in prop::collection::vec(coeffs(3), 1..12), c0 in 1u32..3) {
        let f = f3();
        let mut rows = rows;
        rows[0] = vec![c0];
        let n = rows.len();
        let s = series(&f, &rows, n);
        let inv = s.inv().unwrap();
        prop_assert_eq!(s.mul_trunc(&inv, n), USeries::one(&f, n));
    }

    #[test]
    fn composition_is_multiplicative(
        a in prop::collection::vec(coeffs(2), 6),
        b in prop::collection::vec(coeffs(2), 6),
        s in prop::collection::vec(coeffs(2), 1..12),
    ) {
        let f = f3();
        let n = 6;
        let (fa, fb) = (series(&f, &a, n), series(&f, &b, n));
        let mut s_rows = vec![Vec::new()];
        s_rows.push(vec![1]);
        s_rows.extend(s.into_iter());
        let s = series(&f, &s_rows, n);
        let lhs = fa.mul(&fb).compose(&s).unwrap();
        let rhs = fa.compose(&s).unwrap().mul(&fb.compose(&s).unwrap());
        let m = lhs.prec().min(rhs.prec());
        prop_assert_eq!(lhs.truncate(m), rhs.truncate(m));
    }

    #[test]
    fn reduction_vanishes_iff_divisible_by_pi(rows in prop::collection::vec(coeffs(4), 1..10)) {
        let f = f3();
        let pi = PrimePi::new(poly(&f, &[1, 1])).unwrap();
        let n = rows.len();
        let s = series(&f, &rows, n);
        let red = s.reduce_mod_pi(&pi).unwrap();
        prop_assert_eq!(red.is_zero(), s.vpi(&pi).at_least(1));
        prop_assert!(s.scale_poly(pi.poly()).reduce_mod_pi(&pi).unwrap().is_zero());
    }

    #[test]
    fn carlitz_action_is_a_ring_homomorphism(a in nonzero_coeffs(3), b in nonzero_coeffs(3)) {
        let f = f3();
        let (a, b) = (poly(&f, &a), poly(&f, &b));
        let (ra, rb) = (carlitz_coeffs(&a), carlitz_coeffs(&b));
        prop_assert_eq!(carlitz_coeffs(&(&a * &b)), ra.compose(&rb));
        prop_assert_eq!(carlitz_coeffs(&(&a + &b)), ra.add(&rb));
        let x = poly(&f, &[2, 1, 1]);
        prop_assert_eq!(carlitz_coeffs(&(&a * &b)).eval(&x), ra.eval(&rb.eval(&x)));
    }

    #[test]
    fn w_is_an_involution_and_multiplicative(
        fa in prop::collection::vec((0usize..3, any::<bool>()), 1..4),
        fb in prop::collection::vec((0usize..3, any::<bool>()), 1..4),
    ) {
        let pi = pi_t();
        let build = |atoms: &[(usize, bool)]| {
            atoms.iter().fold(OldPoly::constant(&pi, RatK::one(pi.field())), |acc, &(g, iota)| {
                let g = [Generator::G(1), Generator::H, Generator::Delta][g];
                let atom = if iota { OldPoly::iota_of(&pi, g) } else { OldPoly::plain(&pi, g) };
                acc.mul(&atom).unwrap()
            })
        };
        let (a, b) = (build(&fa), build(&fb));
        let wa = a.w_action().unwrap();
        prop_assert_eq!(wa.w_action().unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().w_action().unwrap(), wa.mul(&b.w_action().unwrap()).unwrap());
        let n = 12;
        prop_assert_eq!(
            a.mul(&b).unwrap().flatten(n).unwrap(),
            a.flatten(n).unwrap().mul_trunc(&b.flatten(n).unwrap(), n)
        );
    }

    #[test]
    fn isobaric_expansion_is_multiplicative(
        ca in prop::collection::vec(1u32..3, 4),
        cb in prop::collection::vec(1u32..3, 4),
        ka in 1usize..4,
        kb in 1usize..4,
    ) {
        let f = f3();
        let make = |k: usize, cs: &[u32]| {
            let mut p = IsobarPoly::new(&f, 4 * k, 0);
            for ((i, j), c) in enumerate_monomials(3, 4 * k, 0).into_iter().zip(cs) {
                p.add_term(i, j, RatK::from_int(&f, *c as i64)).unwrap();
            }
            p
        };
        let (a, b) = (make(ka, &ca), make(kb, &cb));
        let n = 20;
        prop_assert_eq!(
            a.mul(&b).expand(n).unwrap(),
            a.expand(n).unwrap().mul_trunc(&b.expand(n).unwrap(), n)
        );
    }
}
