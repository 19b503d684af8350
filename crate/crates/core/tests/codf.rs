use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use tderiv::codf::{
    check_singer_premise, count_roots, delta_type, from_unipoly, jet_at_zero, jet_box_witness, parse_singer,
    singer_residual, solve_singer_formal, sturm_decide, CellTypeMatrix, Decision, SatWitness, UniPoly, XVar,
};
use tderiv::jet::Cmp;
use tderiv::random::{self, rng};
use tderiv::{rat, MultiPoly, Rational};

#[path = "support/descartes.rs"]
mod descartes;

use descartes::{oracle, roots_in};

fn factorial(k: u32) -> Rational {
    Rational::from_integer((1..=k).map(num_bigint::BigInt::from).product())
}

#[test]
fn exponential_to_twenty() {
    let s = parse_singer("n = 1\nP = X1 - X0\na = (1, 1)").unwrap();
    let b = solve_singer_formal(&s, 20).unwrap();
    for k in 0..=20 {
        assert_eq!(b.coeff(&[k]), Rational::one() / factorial(k), "k = {k}");
    }
}

#[test]
fn rosenlicht() {
    let s = parse_singer("n = 1\nP = X1 - X0^3 + X0^2\na = (2, 4)").unwrap();
    let b = solve_singer_formal(&s, 6).unwrap();
    // b'' = (3b^2 - 2b) b' at b = 2, b' = 4.
    let (b0, b1) = (rat(2, 1), rat(4, 1));
    let expected = (rat(3, 1) * &b0 * &b0 - rat(2, 1) * &b0) * b1;
    assert_eq!(expected, rat(32, 1));
    assert_eq!(b.coeff(&[2]) * factorial(2), expected);
}

#[test]
fn random_premised_instances() {
    let big_n = 12;
    for seed in 0..50 {
        let s = random::singer_instance(&mut rng(seed), 3, 2);
        assert!(check_singer_premise(&s).holds(), "seed {seed}");
        let b = solve_singer_formal(&s, big_n).unwrap();
        // The jet at 0 is the prescribed point.
        let jet: Vec<Rational> = (0..=s.n).map(|k| b.coeff(&[k as u32]) * factorial(k as u32)).collect();
        assert_eq!(jet, s.a, "seed {seed}");
        let res = singer_residual(&s, &b);
        for k in 0..=(big_n - s.n) as u32 {
            assert!(res.coeff(&[k]).is_zero(), "seed {seed}: t^{k}");
        }
        let at0 = |v: &XVar| jet.get(v.0).cloned();
        for q in &s.qs {
            assert!(q.eval(&at0).unwrap().is_positive(), "seed {seed}");
        }
    }
}

fn holds_at(cs: &[(UniPoly, Cmp)], x: &Rational) -> bool {
    cs.iter().all(|(u, c)| c.holds(u.sign_at(x)))
}

fn check_witness(d: &Decision, cs: &[(UniPoly, Cmp)]) {
    match d {
        Decision::Sat(SatWitness::Point(q)) => assert!(holds_at(cs, q)),
        Decision::Sat(SatWitness::Root { poly, lo, hi }) => {
            assert!(lo < hi);
            assert_eq!(count_roots(poly, Some(lo), Some(hi)), 1);
        }
        Decision::Unsat => {}
    }
}

fn as_poly(u: &UniPoly) -> MultiPoly<String> {
    from_unipoly(u, "x".to_string())
}

#[test]
fn sturm_matches_subdivision() {
    let cmps = [Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge];
    for seed in 0..100 {
        let mut r = rng(seed);
        let f = random::unipoly(&mut r, 6, 10);
        if f.degree() == Some(0) {
            continue;
        }
        let o = oracle(f.coeffs());
        assert_eq!(count_roots(&f, None, None), o.roots, "seed {seed}: {f}");
        let (a, b) = (random::rational(&mut r, 5), random::rational(&mut r, 5));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo < hi {
            assert_eq!(count_roots(&f, Some(&lo), Some(&hi)), roots_in(f.coeffs(), &lo, &hi), "seed {seed}: {f}");
        }
        // Single sign conditions: the sign is constant between samples.
        for cmp in cmps {
            let expected = match cmp {
                Cmp::Eq => o.roots > 0,
                Cmp::Ne => true,
                Cmp::Le | Cmp::Ge if o.roots > 0 => true,
                _ => o.samples.iter().any(|x| cmp.holds(f.sign_at(x))),
            };
            let cs = [(f.clone(), cmp)];
            let d = sturm_decide(&[(as_poly(&f), cmp)]).unwrap();
            assert_eq!(d.is_sat(), expected, "seed {seed}: {f} {cmp:?}");
            check_witness(&d, &cs);
        }
        // Two strict conditions define an open set, so samples of the
        // product suffice.
        let g = random::unipoly(&mut r, 4, 10);
        if g.degree() == Some(0) {
            continue;
        }
        let (c1, c2) = (cmps[r.gen_range(2..6)], cmps[r.gen_range(2..6)]);
        let (c1, c2) = (strict(c1), strict(c2));
        let cs = [(f.clone(), c1), (g.clone(), c2)];
        let samples = oracle(f.mul(&g).coeffs()).samples;
        let expected = samples.iter().any(|x| holds_at(&cs, x));
        let d = sturm_decide(&[(as_poly(&f), c1), (as_poly(&g), c2)]).unwrap();
        assert_eq!(d.is_sat(), expected, "seed {seed}: {f} {c1:?}, {g} {c2:?}");
        check_witness(&d, &cs);
    }
}

fn strict(c: Cmp) -> Cmp {
    match c {
        Cmp::Le => Cmp::Lt,
        Cmp::Ge => Cmp::Gt,
        c => c,
    }
}

#[test]
fn spec_systems() {
    let x = || MultiPoly::var("x".to_string());
    let two = MultiPoly::from_int(2);
    let sq = &(&x() * &x()) - &two;
    let d = sturm_decide(&[(sq, Cmp::Gt), (x(), Cmp::Gt), (&x() - &two, Cmp::Lt)]).unwrap();
    let Decision::Sat(SatWitness::Point(q)) = d else { panic!("{d}") };
    assert!(&q * &q > rat(2, 1) && q < rat(2, 1));
    let d = sturm_decide(&[(&(&x() * &x()) + &MultiPoly::one(), Cmp::Eq)]).unwrap();
    assert_eq!(d, Decision::Unsat);
}

#[test]
fn source_cell_of_the_constants() {
    let t = delta_type(&"1,0".parse().unwrap());
    assert_eq!((t.bold, t.dim), (vec![0], 0));
}

proptest! {
    #[test]
    fn delta_dimension_is_monotone(rows in 1usize..5, cols in 1usize..5, bits in any::<u32>(), flip in any::<usize>()) {
        let m: Vec<Vec<bool>> = (0..rows).map(|i| (0..cols).map(|j| bits >> ((i * cols + j) % 32) & 1 == 1).collect()).collect();
        let ones: Vec<(usize, usize)> = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).filter(|&(i, j)| m[i][j]).collect();
        prop_assume!(!ones.is_empty());
        let (i, j) = ones[flip % ones.len()];
        let mut lowered = m.clone();
        lowered[i][j] = false;
        let before = delta_type(&CellTypeMatrix::new(m).unwrap()).dim;
        let after = delta_type(&CellTypeMatrix::new(lowered).unwrap()).dim;
        prop_assert!(after <= before);
    }

    #[test]
    fn box_witness_is_inside(seed in any::<u64>(), n in 0usize..6) {
        let mut r = rng(seed);
        let bx: Vec<(Rational, Rational)> = (0..=n)
            .map(|_| {
                let lo = random::rational(&mut r, 5);
                let w = Rational::new(r.gen_range(1i64..=9).into(), r.gen_range(1i64..=4).into());
                (lo.clone(), lo + w)
            })
            .collect();
        let a = jet_box_witness(&bx).unwrap();
        let jet = jet_at_zero(&a, n);
        for (v, (lo, hi)) in jet.iter().zip(&bx) {
            prop_assert!(lo < v && v < hi);
        }
    }
}
