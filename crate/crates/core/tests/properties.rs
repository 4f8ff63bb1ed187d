//! Property tests: algebraic identities the exact layer must satisfy on
//! randomly generated inputs, not just on the worked examples.

use proptest::prelude::*;

use resform::formlang::{parse_form, parse_poly, ParseOptions};
use resform::forms::{DiffForm, PolyVectorField, RationalFunction};
use resform::poly::Polynomial;
use resform::quasihomog::{
    order_of_monomial_form, primitive, spectrum_brieskorn_pham, WeightComponent,
};
use resform::residue::{chart_residue, verify_leray_identity, MeroTopForm, ResidueError};
use resform::scalar::GaussianRational;
use resform::weights::{infer_weights, WeightSystem};

type Q = GaussianRational;
type P = Polynomial<Q>;

fn rat() -> impl Strategy<Value = Q> {
    ((-9i64..=9), (1i64..=9), (-9i64..=9), (1i64..=9)).prop_map(|(a, b, c, d)| {
        GaussianRational::from_ratio(a, b) + GaussianRational::i() * GaussianRational::from_ratio(c, d)
    })
}

fn poly(nvars: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = P> {
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_deg, nvars), rat()),
        0..=max_terms,
    )
    .prop_map(move |terms| Polynomial::from_terms(nvars, terms))
}

fn one_form(nvars: usize) -> impl Strategy<Value = DiffForm<Q>> {
    proptest::collection::vec(poly(nvars, 3, 2), nvars).prop_map(move |coeffs| {
        DiffForm::from_terms(
            nvars,
            1,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, p)| (vec![i], RationalFunction::from_poly(p))),
        )
    })
}

fn weight_vec(nvars: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1i64..=4, nvars)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        p in poly(2, 4, 3),
        q in poly(2, 4, 3),
        point in proptest::collection::vec(rat(), 2),
    ) {
        let lhs = p.mul(&q).evaluate(&point);
        let rhs = p.evaluate(&point) * q.evaluate(&point);
        prop_assert_eq!(lhs, rhs);
        let lhs = p.add(&q).evaluate(&point);
        let rhs = p.evaluate(&point) + q.evaluate(&point);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_is_a_derivation(
        p in poly(3, 4, 3),
        q in poly(3, 4, 3),
        i in 0usize..3,
    ) {
        let lhs = p.mul(&q).partial(i);
        let rhs = p.partial(i).mul(&q).add(&p.mul(&q.partial(i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_decomposition_reconstructs(
        p in poly(3, 5, 4),
        weights in weight_vec(3),
    ) {
        let parts = p.weight_decompose(&weights);
        let mut sum = Polynomial::zero(3);
        let mut last = i64::MIN;
        for (w, part) in &parts {
            prop_assert!(*w > last, "weights must be strictly ascending");
            last = *w;
            prop_assert!(!part.is_zero());
            for (m, _) in part.terms() {
                prop_assert_eq!(m.weight(&weights), *w);
            }
            sum = sum.add(part);
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn exterior_derivative_squares_to_zero(alpha in one_form(3)) {
        let dd = alpha.exterior_derivative().exterior_derivative();
        prop_assert!(dd.is_zero(), "d(d(alpha)) = {}", dd);
    }

    #[test]
    fn wedge_is_antisymmetric_on_one_forms(
        alpha in one_form(3),
        beta in one_form(3),
    ) {
        let ab = alpha.wedge(&beta).unwrap();
        let ba = beta.wedge(&alpha).unwrap();
        prop_assert_eq!(ab, ba.neg());
        prop_assert!(alpha.wedge(&alpha).unwrap().is_zero());
    }

    #[test]
    fn interior_product_is_an_antiderivation(
        alpha in one_form(3),
        beta in one_form(3),
        weights in weight_vec(3),
    ) {
        let degree = weights.iter().sum();
        let ws = WeightSystem::new(weights, degree).unwrap();
        let e = PolyVectorField::euler(&ws);
        let lhs = alpha.wedge(&beta).unwrap().interior_product(&e);
        let rhs = alpha
            .interior_product(&e)
            .wedge(&beta)
            .unwrap()
            .sub(&alpha.wedge(&beta.interior_product(&e)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rendered_polynomials_reparse_to_the_same_value(p in poly(3, 5, 4)) {
        let text = p.to_string();
        let opts = ParseOptions {
            nvars: Some(3),
            ..ParseOptions::default()
        };
        let back = parse_poly(&text, &opts).unwrap().value;
        prop_assert_eq!(back, p, "text was {}", text);
    }

    #[test]
    fn rendered_forms_reparse_to_the_same_value(
        alpha in one_form(3),
        den in poly(3, 2, 2).prop_filter("nonzero denominator", |p| !p.is_zero()),
    ) {
        let quotient = alpha.scale_rf(
            &RationalFunction::new(Polynomial::one(3), den).unwrap(),
        );
        for form in [alpha, quotient] {
            let text = form.to_string();
            let opts = ParseOptions {
                nvars: Some(3),
                ..ParseOptions::default()
            };
            let back = parse_form(&text, &opts).unwrap().value;
            if form.is_zero() {
                // "0" carries no degree, so only zero-ness survives.
                prop_assert!(back.is_zero());
            } else {
                prop_assert_eq!(back, form, "text was {}", text);
            }
        }
    }

    #[test]
    fn order_times_degree_recovers_the_weight(
        exponents in proptest::collection::vec(0u32..=6, 3),
        weights in weight_vec(3),
        multiple in 1i64..=6,
    ) {
        let g = weights.iter().fold(0i64, |acc, &a| num_integer::gcd(acc, a));
        let ws = WeightSystem::new(weights, multiple * g).unwrap();
        let order = order_of_monomial_form(&exponents, &ws);
        // (order + 1)·d = Σ (mᵢ + 1)·aᵢ, exactly.
        let lhs = (order + 1) * ws.degree();
        let rhs = ws.monomial_weight(&exponents) + ws.total();
        prop_assert_eq!(lhs, num_rational::Rational64::from_integer(rhs));
    }

    #[test]
    fn inferred_weights_grade_the_support(p in poly(3, 4, 5)) {
        if let Some(ws) = infer_weights(&p) {
            for (m, _) in p.terms() {
                prop_assert_eq!(ws.monomial_weight(m.exponents()), ws.degree());
            }
        }
    }

    #[test]
    fn spectrum_is_symmetric_with_milnor_cardinality(
        exponents in proptest::collection::vec(2u32..=5, 2..=3),
    ) {
        let spec = spectrum_brieskorn_pham(&exponents);
        let mu: usize = exponents.iter().map(|&b| (b - 1) as usize).product();
        prop_assert_eq!(spec.len(), mu);
        let center = num_rational::Rational64::from_integer(exponents.len() as i64 - 2);
        for k in 0..mu {
            prop_assert_eq!(spec[k] + spec[mu - 1 - k], center);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn leray_identity_holds_in_every_valid_chart(
        g in poly(3, 3, 3),
        s in poly(3, 4, 3).prop_filter("surface must be nonconstant", |p| {
            !p.is_zero() && !p.is_constant()
        }),
    ) {
        let omega = MeroTopForm::new(g, s).unwrap();
        let mut checked = 0;
        for i in 0..3 {
            match chart_residue(&omega, i) {
                Ok(_) => {
                    let check = verify_leray_identity(&omega, i).unwrap();
                    prop_assert!(check.pass, "chart {} failed: {:?}", i, check.witness);
                    checked += 1;
                }
                Err(ResidueError::ChartDegenerate { .. }) => continue,
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }
        prop_assert!(checked > 0, "a nonconstant surface has a valid chart");
    }

    #[test]
    fn primitive_differentiates_back_to_the_component(
        exponents in proptest::collection::vec(2u32..=4, 3),
        numerator in proptest::collection::vec(0u32..=4, 3),
        coeff in rat().prop_filter("nonzero numerator", |c| {
            !num_traits::Zero::is_zero(c)
        }),
    ) {
        // Brieskorn-Pham surface: weights d/bᵢ with d = lcm of the bᵢ.
        let d = exponents.iter().fold(1i64, |acc, &b| {
            num_integer::lcm(acc, b as i64)
        });
        let weights: Vec<i64> = exponents.iter().map(|&b| d / b as i64).collect();
        let s = Polynomial::from_terms(
            3,
            exponents.iter().enumerate().map(|(i, &b)| {
                let mut e = vec![0u32; 3];
                e[i] = b;
                (e, Q::from_integer(1))
            }),
        );
        let ws = WeightSystem::new(weights, d).unwrap();
        let g = Polynomial::from_terms(3, [(numerator, coeff)]);
        let omega = MeroTopForm::new(g, s).unwrap();
        let component = WeightComponent::new(omega, &ws).unwrap();
        if component.weight() == 0 {
            return Ok(());
        }
        let eta = primitive(&component).unwrap();
        prop_assert_eq!(eta.exterior_derivative(), component.form().as_form());
    }
}
