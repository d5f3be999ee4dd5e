use std::collections::BTreeMap;

use picentral::builders::kappa;
use picentral::{parse_poly, reduce_poly, Field, GrassmannAlgebra, GrassmannElement, Mode, Polynomial, Word};
use proptest::prelude::*;

fn poly_terms(max_var: u32, max_len: usize) -> impl Strategy<Value = Vec<(Vec<u32>, u32)>> {
    prop::collection::vec((prop::collection::vec(1..=max_var, 1..=max_len), 0u32..5), 0..5)
}

fn poly(p: u32, mode: Mode, terms: &[(Vec<u32>, u32)]) -> Polynomial {
    let f = Field::new(p).unwrap();
    Polynomial::from_terms(f, mode, terms.iter().map(|(w, c)| (Word::new(w.clone()), *c))).unwrap()
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5u32), Just(7u32)]
}

fn nf_zero(f: &Polynomial) -> bool {
    reduce_poly(f).unwrap().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(p in prime(), a in poly_terms(3, 3), b in poly_terms(3, 3), c in poly_terms(3, 3)) {
        let (a, b, c) = (poly(p, Mode::Unital, &a), poly(p, Mode::Unital, &b), poly(p, Mode::Unital, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        let one = Polynomial::one(a.field());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&one * &a, a);
    }

    #[test]
    fn commutator_expansions_are_exact(p in prime(), u in poly_terms(4, 2), v in poly_terms(4, 2), w in poly_terms(4, 2)) {
        let (u, v, w) = (poly(p, Mode::Nonunital, &u), poly(p, Mode::Nonunital, &v), poly(p, Mode::Nonunital, &w));
        let c = |x: &Polynomial, y: &Polynomial| x.commutator(y).unwrap();
        let vw = &v * &w;
        prop_assert_eq!(c(&u, &vw), &(&c(&u, &v) * &w) + &(&v * &c(&u, &w)));
        prop_assert_eq!(c(&u, &vw), &(&(&c(&u, &v) * &w) + &(&c(&u, &w) * &v)) + &c(&v, &c(&u, &w)));
    }

    #[test]
    fn kappa_scales_linearly(p in prime(), u in poly_terms(2, 2), v in poly_terms(2, 2), s in 1u32..7) {
        let f = Field::new(p).unwrap();
        let (u, v) = (poly(p, Mode::Nonunital, &u), poly(p, Mode::Nonunital, &v));
        let s = f.reduce(s as u64);
        // (s u)^(p-1) = s^(p-1) u^(p-1) = u^(p-1) for s != 0
        prop_assert_eq!(kappa(&u.scale(s), &v).unwrap(), kappa(&u, &v).unwrap().scale(s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn display_round_trips(p in prime(), unital in any::<bool>(), t in poly_terms(9, 5), c in 0u32..7) {
        let mode = if unital { Mode::Unital } else { Mode::Nonunital };
        let mut f = poly(p, mode, &t);
        if unital {
            f = &f + &Polynomial::constant(f.field(), c);
        }
        prop_assert_eq!(parse_poly(&f.to_string(), f.field(), mode).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pth_powers_vanish_mod_tg0(u in poly_terms(3, 2), v in poly_terms(3, 2)) {
        let (u, v) = (poly(3, Mode::Nonunital, &u), poly(3, Mode::Nonunital, &v));
        prop_assert!(nf_zero(&u.pow(3).unwrap()));
        let dream = &(&(&u + &v).pow(3).unwrap() - &u.pow(3).unwrap()) - &v.pow(3).unwrap();
        prop_assert!(nf_zero(&dream));
    }

    #[test]
    fn commutators_are_central_mod_t3(u in poly_terms(4, 2), v in poly_terms(4, 2), w in poly_terms(4, 2)) {
        let (u, v, w) = (poly(5, Mode::Nonunital, &u), poly(5, Mode::Nonunital, &v), poly(5, Mode::Nonunital, &w));
        let c = u.commutator(&v).unwrap();
        prop_assert!(nf_zero(&c.commutator(&w).unwrap()));
    }

    #[test]
    fn normal_form_reconstruction(p in prop_oneof![Just(3u32), Just(5u32)], t in poly_terms(3, 5)) {
        let f = poly(p, Mode::Nonunital, &t);
        let nf = reduce_poly(&f).unwrap();
        let back = nf.reconstruct();
        prop_assert!(nf_zero(&(&f - &back)));
        prop_assert_eq!(reduce_poly(&back).unwrap(), nf);
    }
}

fn element(alg: GrassmannAlgebra, terms: &[(u64, u32)]) -> GrassmannElement {
    alg.element(terms.iter().copied()).unwrap()
}

fn blades(n: u32) -> impl Strategy<Value = Vec<(u64, u32)>> {
    prop::collection::vec((0u64..(1u64 << n), 0u32..5), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn grassmann_generators_anticommute(i in 1u32..=8, j in 1u32..=8) {
        let alg = GrassmannAlgebra::new(Field::new(3).unwrap(), 8, Mode::Unital).unwrap();
        let (ei, ej) = (alg.generator(i).unwrap(), alg.generator(j).unwrap());
        prop_assert_eq!(ei.mul(&ej), ej.mul(&ei).scale(2));
        if i == j {
            prop_assert!(ei.mul(&ei).is_zero());
        }
    }

    #[test]
    fn grassmann_product_is_associative(a in blades(6), b in blades(6), c in blades(6)) {
        let alg = GrassmannAlgebra::new(Field::new(5).unwrap(), 6, Mode::Unital).unwrap();
        let (a, b, c) = (element(alg, &a), element(alg, &b), element(alg, &c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_a_homomorphism(f in poly_terms(3, 3), g in poly_terms(3, 3), vals in prop::collection::vec(blades(7), 3)) {
        let field = Field::new(3).unwrap();
        let alg = GrassmannAlgebra::new(field, 7, Mode::Unital).unwrap();
        let (f, g) = (poly(3, Mode::Unital, &f), poly(3, Mode::Unital, &g));
        let asg: BTreeMap<u32, GrassmannElement> =
            vals.iter().enumerate().map(|(i, b)| (i as u32 + 1, element(alg, b))).collect();
        let ev = |h: &Polynomial| alg.evaluate(h, &asg).unwrap();
        prop_assert_eq!(ev(&(&f * &g)), ev(&f).mul(&ev(&g)));
        prop_assert_eq!(ev(&(&f + &g)), ev(&f).add(&ev(&g)));
    }
}

#[test]
fn grassmann_relations_spot_checks() {
    let alg = GrassmannAlgebra::new(Field::new(3).unwrap(), 4, Mode::Unital).unwrap();
    let x = GrassmannElement::parse(alg, "e1 + e2e3").unwrap();
    // x^2 = 2 e1e2e3, x^3 = 0
    assert_eq!(x.pow(2).to_string(), "2*e1e2e3");
    assert!(x.pow(3).is_zero());
    assert!(GrassmannElement::parse(alg, "e1e2 + e3e4").unwrap().is_central());
    assert!(!GrassmannElement::parse(alg, "e1").unwrap().is_central());
}
