use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;
use tderiv::random::{self, rng};
use tderiv::series_models::{check_compatibility, germ_sign, Germ, GERM_VAR};
use tderiv::{Rational, TruncatedSeries};

fn series(r: &mut impl rand::Rng, p: usize, order: i32, skip_first: bool) -> TruncatedSeries {
    let terms: Vec<(Vec<u32>, Rational)> = tderiv::theta::enumerate(p, order as u32)
        .into_iter()
        .filter(|t| !(skip_first && t.exps()[0] > 0))
        .map(|t| (t.exps().to_vec(), random::rational(r, 4)))
        .collect();
    TruncatedSeries::from_terms(p, order, terms)
}

fn germ(seed: u64) -> Germ {
    random::ratfunc(&mut rng(seed), &[GERM_VAR.to_string()], 3)
}

/// Sign at a huge sample point; leading terms dominate for the small
/// coefficients the generator produces.
fn sign_far_out(g: &Germ) -> Ordering {
    let s = Rational::from_integer(10i64.pow(12).into());
    let v = g.eval(&|_: &String| Some(s.clone())).unwrap();
    v.cmp(&Rational::zero())
}

#[test]
fn compatibility_on_random_points() {
    let vars = ["u", "v", "w"];
    for seed in 0..300u64 {
        let mut r = rng(seed);
        let p = 1 + (seed % 2) as usize;
        let f = random::ratfunc(&mut r, &vars, 3);
        let point: BTreeMap<&str, TruncatedSeries> = vars.iter().map(|v| (*v, series(&mut r, p, 6, false))).collect();
        for i in 0..p {
            assert_eq!(check_compatibility(&f, &point, p, 6, i), Ok(true), "seed {seed}: {f}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn constants_form_a_subfield(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = series(&mut r, 2, 5, true);
        let mut b = series(&mut r, 2, 5, true);
        if b.constant_coeff().is_zero() {
            b = b.add(&TruncatedSeries::one(2, 5));
        }
        prop_assert!(a.derivative(0).is_zero() && b.derivative(0).is_zero());
        prop_assert!(a.add(&b).derivative(0).is_zero());
        prop_assert!(a.mul(&b).derivative(0).is_zero());
        prop_assert!(a.div(&b).unwrap().derivative(0).is_zero());
    }

    #[test]
    fn germ_order_is_compatible_with_the_field(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (g, h, k) = (germ(s1), germ(s2), germ(s3));
        let sign = |x: &Germ| germ_sign(x) as i8;
        prop_assert_eq!(germ_sign(&g), sign_far_out(&g));
        prop_assert_eq!(sign(&(&g * &h)), sign(&g) * sign(&h));
        prop_assert_eq!(sign(&-&g), -sign(&g));
        if sign(&g) > 0 && sign(&h) > 0 {
            prop_assert!(sign(&(&g + &h)) > 0);
        }
        // Transitivity of g > h > k.
        if sign(&(&g - &h)) > 0 && sign(&(&h - &k)) > 0 {
            prop_assert!(sign(&(&g - &k)) > 0);
        }
        // Translation invariance.
        prop_assert_eq!(sign(&(&(&g + &k) - &(&h + &k))), sign(&(&g - &h)));
    }
}
