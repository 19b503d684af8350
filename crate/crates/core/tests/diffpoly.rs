use std::collections::BTreeMap;

use proptest::prelude::*;
use tderiv::diffpoly::{free_derive, free_derive_poly, PolyDerivation};
use tderiv::random::{self, rng};
use tderiv::{DiffRational, DiffVar, RationalFunction};

fn f_delta_composed(f: &DiffRational, gs: &BTreeMap<DiffVar, DiffRational>, i: usize) -> DiffRational {
    let mut map = gs.clone();
    for (y, g) in gs {
        map.insert(y.shift(i), free_derive(g, i));
    }
    free_derive(f, i).substitute(&map).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn f_delta_symmetry(seed in any::<u64>(), p in 2usize..4) {
        let mut r = rng(seed);
        let f = random::diff_ratfunc(&mut r, &["y1", "y2", "y3"], p, 1, 3);
        let (i, j) = (0, p - 1);
        prop_assert_eq!(free_derive(&free_derive(&f, i), j), free_derive(&free_derive(&f, j), i));
    }

    #[test]
    fn free_derive_poly_commutes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random::diff_ratfunc(&mut r, &["y", "z"], 3, 2, 3);
        let f = f.num().clone();
        prop_assert_eq!(free_derive_poly(&free_derive_poly(&f, 0), 2), free_derive_poly(&free_derive_poly(&f, 2), 0));
    }

    #[test]
    fn f_delta_composition(seed in any::<u64>(), p in 1usize..4) {
        let mut r = rng(seed);
        let ys = random::base_vars(2, p);
        let xs: Vec<DiffVar> = (1..=3).map(|k| DiffVar::base(format!("x{k}"), p)).collect();
        let f = random::ratfunc(&mut r, &ys, 3);
        let gs: BTreeMap<DiffVar, DiffRational> = ys.iter().map(|y| (y.clone(), random::ratfunc(&mut r, &xs, 2))).collect();
        let h = f.substitute(&gs).unwrap();
        let i = p - 1;
        prop_assert_eq!(free_derive(&h, i), f_delta_composed(&f, &gs, i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn apply_is_a_derivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = ["u", "v", "w"];
        let d = random::derivation(&mut r, &vars, 2);
        let f = random::ratfunc(&mut r, &vars, 2);
        let g = random::ratfunc(&mut r, &vars, 2);
        prop_assert_eq!(d.apply(&(&f * &g)).unwrap(), &(&f * &d.apply(&g).unwrap()) + &(&g * &d.apply(&f).unwrap()));
        prop_assert_eq!(d.apply(&(&f + &g)).unwrap(), &d.apply(&f).unwrap() + &d.apply(&g).unwrap());
    }

    #[test]
    fn lie_bracket_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = ["u", "v", "w"];
        let d = random::derivation(&mut r, &vars, 2);
        let e = random::derivation(&mut r, &vars, 2);
        let g = random::derivation(&mut r, &vars, 2);
        let one = RationalFunction::one();
        let de = d.lie_bracket(&e).unwrap();
        let ed = e.lie_bracket(&d).unwrap();
        prop_assert!(PolyDerivation::linear_combination(&one, &de, &one, &ed).unwrap().is_zero());
        let j1 = d.lie_bracket(&e.lie_bracket(&g).unwrap()).unwrap();
        let j2 = e.lie_bracket(&g.lie_bracket(&d).unwrap()).unwrap();
        let j3 = g.lie_bracket(&de).unwrap();
        let s = PolyDerivation::linear_combination(&one, &j1, &one, &j2).unwrap();
        prop_assert!(PolyDerivation::linear_combination(&one, &s, &one, &j3).unwrap().is_zero());
        // Leibniz for the bracket on a product.
        let f = random::ratfunc(&mut r, &vars, 2);
        let h = random::ratfunc(&mut r, &vars, 2);
        let lhs = de.apply(&(&f * &h)).unwrap();
        let rhs = &(&f * &de.apply(&h).unwrap()) + &(&h * &de.apply(&f).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
