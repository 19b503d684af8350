use proptest::prelude::*;
use tderiv::parse::{parse_formula, parse_term};
use tderiv::random::{self, rng};

fn round_trip(seed: u64, p: usize) {
    let t = random::diff_term(&mut rng(seed), 5, &["x", "y", "z"], p);
    let s1 = t.to_string();
    let t1 = parse_term(&s1).unwrap_or_else(|e| panic!("seed {seed}: `{s1}`: {e}"));
    // Parsing folds signs into constants, so compare after one parse.
    let s2 = t1.to_string();
    let t2 = parse_term(&s2).unwrap_or_else(|e| panic!("seed {seed}: `{s2}`: {e}"));
    assert_eq!(t1, t2, "seed {seed}: `{s1}`");
    assert_eq!(s2, t2.to_string(), "seed {seed}");
}

#[test]
fn two_hundred_random_terms() {
    for seed in 0..200 {
        round_trip(seed, 1 + (seed % 3) as usize);
    }
}

proptest! {
    #[test]
    fn random_terms_round_trip(seed in any::<u64>(), p in 1usize..4) {
        round_trip(seed, p);
    }

    #[test]
    fn atoms_round_trip(s1 in any::<u64>(), s2 in any::<u64>(), k in 0usize..6) {
        let ops = ["=", "!=", "<", "<=", ">", ">="];
        let a = random::diff_term(&mut rng(s1), 3, &["x"], 1);
        let b = random::diff_term(&mut rng(s2), 3, &["x"], 1);
        let src = format!("{a} {} {b}", ops[k]);
        let f = parse_formula(&src).unwrap();
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}
