mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{a1, random_complex, random_model, random_one_sign_model, random_twisted_units, rng, xy};
use thetastrat::baric::baric_truncate;
use thetastrat::charkit::{sym_series, BigradedCharacter, Cocharacter, GradedGen, Weight};
use thetastrat::kloc::{chi_chains, chi_series, verify_localization, LocalizationOptions};
use thetastrat::strat::git_stratify;

fn character(rank: usize) -> impl Strategy<Value = BigradedCharacter> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -2i64..=2, -3i64..=3), 0..5).prop_map(move |ts| {
        let mut c = BigradedCharacter::zero(rank);
        for (w, d, k) in ts {
            c.add_term(Weight(w), d, BigInt::from(k));
        }
        c
    })
}

fn gen() -> impl Strategy<Value = GradedGen> {
    prop_oneof![
        (-3i64..=-1, prop::sample::select(vec![-2i64, 0, 2])).prop_map(|(w, d)| (Weight(vec![w]), d)),
        (-2i64..=2, prop::sample::select(vec![-1i64, 1])).prop_map(|(w, d)| (Weight(vec![w]), d)),
    ]
}

fn lam() -> Cocharacter {
    Cocharacter::primitive(vec![1]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in character(2), b in character(2), c in character(2)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&BigradedCharacter::one(2)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn euler_specialization_is_a_ring_map(a in character(1), b in character(1)) {
        let e = |x: &BigradedCharacter| x.euler_specialize();
        prop_assert_eq!(e(&a.mul(&b).unwrap()), e(&a).mul(&e(&b)).unwrap());
        prop_assert_eq!(e(&a.add(&b).unwrap()), e(&a).add(&e(&b)).unwrap());
    }

    #[test]
    fn twist_and_dual_are_compatible(a in character(1), b in character(1), w in -3i64..=3, d in -2i64..=2) {
        let w = Weight(vec![w]);
        prop_assert_eq!(a.mul(&b).unwrap().twist(&w, d), a.twist(&w, d).mul(&b).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().dual(), a.dual().mul(&b.dual()).unwrap());
        prop_assert_eq!(a.dual().dual(), a.clone());
    }

    #[test]
    fn sym_is_multiplicative(xs in prop::collection::vec(gen(), 0..4), ys in prop::collection::vec(gen(), 0..4), cutoff in -8i64..=-1) {
        let l = lam();
        let mut both = xs.clone();
        both.extend(ys.iter().cloned());
        let joint = sym_series(&both, &l, cutoff).unwrap();
        let prod = sym_series(&xs, &l, cutoff).unwrap().mul(&sym_series(&ys, &l, cutoff).unwrap()).unwrap();
        prop_assert!(joint.agrees_with(&prod).unwrap());
    }

    #[test]
    fn baric_truncation_is_exhaustive_and_idempotent(seed in any::<u64>(), w in -3i64..=3) {
        let mut r = rng(seed);
        let m = random_model(&mut r);
        for s in git_stratify(&m).unwrap() {
            let f = random_complex(&mut r, &s.a);
            let (geq, lt) = baric_truncate(&f, &s.lambda, w).unwrap();
            prop_assert_eq!(
                geq.generator_character().add(&lt.generator_character()).unwrap(),
                f.generator_character()
            );
            let (again, rest) = baric_truncate(&geq, &s.lambda, w).unwrap();
            prop_assert!(rest.is_zero());
            prop_assert_eq!(again.generator_character(), geq.generator_character());
            let (none, same) = baric_truncate(&lt, &s.lambda, w).unwrap();
            prop_assert!(none.is_zero());
            prop_assert_eq!(same.generator_character(), lt.generator_character());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn series_and_chains_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_one_sign_model(&mut r);
        let f = random_complex(&mut r, m.cdga());
        let series = chi_series(&m, &f).unwrap();
        let (chains, stable) = chi_chains(&m, &f, 14).unwrap();
        prop_assume!(stable);
        prop_assert_eq!(series, chains);
    }

    #[test]
    fn localization_terms_are_additive(seed in any::<u64>(), which in 0usize..3) {
        let mut r = rng(seed);
        let m = [a1(-1), a1(1), xy()][which].clone();
        let f = random_twisted_units(&mut r, m.cdga());
        let g = random_twisted_units(&mut r, m.cdga());
        let opts = LocalizationOptions::default();
        let rf = verify_localization(&m, &f, opts).unwrap();
        let rg = verify_localization(&m, &g, opts).unwrap();
        let rs = verify_localization(&m, &f.direct_sum(&g.shift(1)).unwrap(), opts).unwrap();
        let diff = |a: Option<i64>, b: Option<i64>| a.zip(b).map(|(a, b)| a - b);
        prop_assert_eq!(rs.lhs.value, diff(rf.lhs.value, rg.lhs.value));
        prop_assert_eq!(rs.semistable.value, diff(rf.semistable.value, rg.semistable.value));
        for ((s, a), b) in rs.corrections.iter().zip(&rf.corrections).zip(&rg.corrections) {
            prop_assert_eq!(s.term.value, diff(a.term.value, b.term.value));
        }
    }
}
