//! Randomized invariants of the polynomial, cohomology and series layers.

mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::{all_builtins, binom};
use toric_chow::builtins::Builtin;
use toric_chow::cohomology::{self, orbit_class_table, orbit_monomial};
use toric_chow::fan::{enumerate_cones, f_vector};
use toric_chow::polyring::{buchberger, normal_form};
use toric_chow::series::{euler_from_classes, find_positive_functional};
use toric_chow::{CohomologyPresentation, Cone, MonoidElement, Monomial, Polynomial, WeightFunctional};

fn presentations() -> &'static [(Builtin, CohomologyPresentation)] {
    static CACHE: OnceLock<Vec<(Builtin, CohomologyPresentation)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Builtin::small()
            .into_iter()
            .map(|b| (b, cohomology::build_presentation(&b.build().unwrap()).unwrap()))
            .collect()
    })
}

fn poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -4i64..=4), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)))
    })
}

/// A builtin presentation together with three random polynomials in its ring.
fn ring_triple() -> impl Strategy<Value = (usize, Polynomial, Polynomial, Polynomial)> {
    (0..presentations().len()).prop_flat_map(|i| {
        let k = presentations()[i].1.nvars();
        (Just(i), poly(k, 2), poly(k, 2), poly(k, 2))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent_linear_and_multiplicative((i, f, g, h) in ring_triple(), c in -3i64..=3) {
        let gb = presentations()[i].1.groebner_basis();
        let nf = |p: &Polynomial| normal_form(p, gb).unwrap();
        prop_assert_eq!(nf(&nf(&f)), nf(&f));
        let c = BigRational::from_integer(c.into());
        prop_assert_eq!(nf(&(&f + &g.scale(&c))), &nf(&f) + &nf(&g).scale(&c));
        prop_assert_eq!(nf(&(&f * &g)), nf(&(&nf(&f) * &nf(&g))));
        // every term of a normal form is standard
        for (m, _) in nf(&h).terms() {
            prop_assert!(gb.is_standard(m));
        }
    }

    #[test]
    fn ring_arithmetic_laws((_, f, g, h) in ring_triple()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn buchberger_ignores_generator_order(
        (i, order) in (0..presentations().len()).prop_flat_map(|i| {
            let (_, pres) = &presentations()[i];
            let n = pres.sr_generators().len() + pres.linear_generators().len();
            (Just(i), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let pres = &presentations()[i].1;
        let gens: Vec<Polynomial> = pres.sr_generators().iter().chain(pres.linear_generators()).cloned().collect();
        let shuffled: Vec<Polynomial> = order.iter().map(|&j| gens[j].clone()).collect();
        prop_assert_eq!(&buchberger(&shuffled), pres.groebner_basis());
    }

    #[test]
    fn weights_are_linear(
        w in prop::collection::vec(-5i64..=5, 3),
        a in prop::collection::vec(-9i64..=9, 3),
        b in prop::collection::vec(-9i64..=9, 3),
        k in -4i64..=4,
    ) {
        let ell = WeightFunctional::new(w);
        let (a, b) = (MonoidElement::new(a), MonoidElement::new(b));
        prop_assert_eq!(ell.eval(&a.add(&b)), ell.eval(&a) + ell.eval(&b));
        prop_assert_eq!(ell.eval(&a.scaled(k)), k * ell.eval(&a));
    }

    #[test]
    fn found_functional_is_positive(gens in prop::collection::vec(prop::collection::vec(0i64..=3, 2), 1..5)) {
        // Nonzero vectors in the closed positive quadrant always admit one.
        let gens: Vec<MonoidElement> = gens
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .map(MonoidElement::new)
            .collect();
        prop_assume!(!gens.is_empty());
        let ell = find_positive_functional(&gens).unwrap();
        prop_assert!(gens.iter().all(|g| ell.eval(g) >= 1));
    }
}

#[test]
fn cones_are_closed_under_faces_and_deterministic() {
    for b in all_builtins() {
        let fan = b.build().unwrap();
        for p in 1..=fan.dim() {
            let cones = enumerate_cones(&fan, p).unwrap();
            assert_eq!(cones, enumerate_cones(&fan, p).unwrap(), "{b} p={p}");
            let below: BTreeSet<Cone> = enumerate_cones(&fan, p - 1).unwrap().into_iter().collect();
            for c in &cones {
                for drop in c.rays() {
                    let face = Cone::new(c.rays().iter().copied().filter(|r| r != drop));
                    assert!(below.contains(&face), "{b}: face {face} of {c} missing");
                }
            }
        }
    }
}

#[test]
fn ranks_are_palindromic() {
    for (b, pres) in presentations() {
        let n = pres.dim();
        let ranks: Vec<usize> = (0..=n).map(|p| cohomology::cohomology_rank(pres, p).unwrap()).collect();
        let reversed: Vec<usize> = ranks.iter().rev().copied().collect();
        assert_eq!(ranks, reversed, "{b}");
        assert_eq!(ranks[0], 1);
        assert_eq!(ranks.iter().sum::<usize>(), pres.fan().max_cones().len(), "{b}: total rank is χ");
    }
}

#[test]
fn equivariant_monomials_are_distinct() {
    for (b, pres) in presentations() {
        for p in 0..=pres.dim() {
            let cones = enumerate_cones(pres.fan(), p).unwrap();
            let monomials: BTreeSet<Monomial> = cones.iter().map(|c| orbit_monomial(pres, c)).collect();
            assert_eq!(monomials.len(), cones.len(), "{b} p={p}");
        }
    }
}

#[test]
fn multiplicities_count_cones() {
    for (b, pres) in presentations() {
        let f = f_vector(pres.fan());
        for p in 0..=pres.dim() {
            let table = orbit_class_table(pres, p).unwrap();
            assert_eq!(table.grouped.values().sum::<usize>(), f[p], "{b} p={p}");
            let expr = euler_from_classes(&table.grouped).unwrap();
            assert_eq!(expr.num_factors(), f[p] as u64);
        }
    }
}

#[test]
fn single_class_series_is_stars_and_bars() {
    // Zero-cycles: one class with multiplicity χ, so the weight-d coefficient is C(χ+d-1, d).
    for (b, pres) in presentations() {
        let n = pres.dim();
        let table = orbit_class_table(pres, n).unwrap();
        let chi = pres.fan().max_cones().len() as i64;
        let expr = euler_from_classes(&table.grouped).unwrap();
        let ell = find_positive_functional(&expr.generators()).unwrap();
        let s = expr.expand(&ell, 5).unwrap();
        for d in 0..=5 {
            assert_eq!(s.get(&MonoidElement::new(vec![d])), BigInt::from(binom(chi + d - 1, d)), "{b} d={d}");
        }
    }
}
