use proptest::prelude::*;
use tderiv::matroid::{
    check_closure_axioms, check_exchange, check_quasi_endomorphism, delta_rank, in_delta_closure, AlgebraicMatroid,
    LinearEndo, LinearMatroid, RankOracle,
};
use tderiv::random::{self, rng};
use tderiv::{MultiPoly, Rational, RationalFunction};

fn delta_closure<'a>(s: &'a LinearEndo, universe: &'a [Vec<Rational>]) -> impl Fn(usize, &[usize]) -> bool + Sync + 'a {
    move |x, base| {
        let b: Vec<Vec<Rational>> = base.iter().map(|&i| universe[i].clone()).collect();
        in_delta_closure(s, &universe[x], &b, 4).is_some()
    }
}

#[test]
fn random_linear_systems_give_matroids() {
    for seed in 0..20 {
        let (s, universe) = random::linear_system(&mut rng(seed), 4, 5);
        assert_eq!(check_quasi_endomorphism(&s, &universe), None, "seed {seed}");
        let cl = delta_closure(&s, &universe);
        assert_eq!(check_exchange(universe.len(), &cl), None, "seed {seed}");
        assert_eq!(check_closure_axioms(universe.len(), &cl), None, "seed {seed}");
        for a in &universe {
            let dr = delta_rank(&s, std::slice::from_ref(a), &[], 8, 3).unwrap();
            assert!(dr.increments.windows(2).all(|w| w[0] >= w[1]), "seed {seed}");
            assert!(dr.stabilized);
        }
    }
}

#[test]
fn shift_example() {
    let s = LinearEndo::shift(4);
    let e1: Vec<Rational> = [1, 0, 0, 0].iter().map(|&x| Rational::from_integer(x.into())).collect();
    let dr = delta_rank(&s, &[e1.clone()], &[], 8, 3).unwrap();
    assert_eq!(dr.value, 0);
    assert!(dr.stabilized);
    assert_eq!(&dr.increments[..4], &[1, 1, 1, 1]);
    assert_eq!(in_delta_closure(&s, &e1, &[], 6), Some(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Linear forms in the ambient indeterminates have Jacobian rows equal
    /// to their coefficient vectors.
    #[test]
    fn algebraic_rank_agrees_on_linear_forms(seed in any::<u64>()) {
        let (_, vs) = random::linear_system(&mut rng(seed), 4, 5);
        let vars = ["t1", "t2", "t3", "t4"];
        let form = |v: &Vec<Rational>| {
            let mut p = MultiPoly::zero();
            for (c, x) in v.iter().zip(vars) {
                p = &p + &MultiPoly::var(x).scale(c);
            }
            RationalFunction::from(p)
        };
        let fs: Vec<_> = vs.iter().map(form).collect();
        let alg = AlgebraicMatroid::new(vars.to_vec());
        let lin = LinearMatroid { dim: 4 };
        for mask in 0..32usize {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..5).partition(|i| mask >> i & 1 == 1);
            let pick_f = |s: &[usize]| s.iter().map(|&i| fs[i].clone()).collect::<Vec<_>>();
            let pick_v = |s: &[usize]| s.iter().map(|&i| vs[i].clone()).collect::<Vec<_>>();
            prop_assert_eq!(alg.rank(&pick_f(&a), &pick_f(&b)), lin.rank(&pick_v(&a), &pick_v(&b)));
        }
    }
}
