//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p tderiv-cli --test acceptance`.

mod common;
#[path = "../../core/tests/support/descartes.rs"]
mod descartes;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use tderiv::codf::{
    check_singer_premise, count_roots, delta_type, from_unipoly, parse_singer, singer_residual, solve_singer_formal,
    sturm_decide, Decision,
};
use tderiv::coherence::{
    check_trivfact, is_coherent, parse_condition, solve_condition_series, strong_coherence_probe, verify_solution,
};
use tderiv::diffpoly::free_derive;
use tderiv::jet::{rewrite_term, Cmp};
use tderiv::matroid::{
    check_closure_axioms, check_exchange, check_quasi_endomorphism, delta_rank, in_delta_closure, LinearEndo,
};
use tderiv::parse::parse_term;
use tderiv::random::{self, rng};
use tderiv::series_models::{eval_diff_term, eval_jet_function};
use tderiv::{rat, DiffRational, DiffVar, MultiPoly, PolyDerivation, Rational, RationalFunction};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: u64) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < Duration::from_secs(limit), || format!("took {e:.1?}, limit {limit} s"))
}

fn chain_rule() -> Outcome {
    let t = Instant::now();
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let p = 1 + (seed % 3) as usize;
        let f = random::diff_ratfunc(&mut r, &["y1", "y2", "y3"], p, 1, 3);
        let (i, j) = (0, p - 1);
        ensure(free_derive(&free_derive(&f, i), j) == free_derive(&free_derive(&f, j), i), || {
            format!("symmetry fails for seed {seed}")
        })?;
        let ys = random::base_vars(2, p);
        let xs: Vec<DiffVar> = (1..=3).map(|k| DiffVar::base(format!("x{k}"), p)).collect();
        let f = random::ratfunc(&mut r, &ys, 3);
        let gs: BTreeMap<DiffVar, DiffRational> = ys.iter().map(|y| (y.clone(), random::ratfunc(&mut r, &xs, 2))).collect();
        let h = f.substitute(&gs).unwrap();
        let mut map = gs.clone();
        for (y, g) in &gs {
            map.insert(y.shift(j), free_derive(g, j));
        }
        let composed = free_derive(&f, j).substitute(&map).unwrap();
        ensure(free_derive(&h, j) == composed, || format!("composition fails for seed {seed}"))?;
    }
    within(t, 60)?;
    Ok(format!("200 functions, {:.1?}", t.elapsed()))
}

fn lie_algebra() -> Outcome {
    let vars = ["u", "v", "w"];
    let one = RationalFunction::one();
    let sum = |a: &PolyDerivation<_>, b: &PolyDerivation<_>| PolyDerivation::linear_combination(&one, a, &one, b).unwrap();
    for seed in 0..100u64 {
        let mut r = rng(seed);
        let d = random::derivation(&mut r, &vars, 2);
        let e = random::derivation(&mut r, &vars, 2);
        let g = random::derivation(&mut r, &vars, 2);
        let de = d.lie_bracket(&e).unwrap();
        let (f, h) = (random::ratfunc(&mut r, &vars, 2), random::ratfunc(&mut r, &vars, 2));
        let leibniz = de.apply(&(&f * &h)).unwrap() == &(&f * &de.apply(&h).unwrap()) + &(&h * &de.apply(&f).unwrap());
        ensure(leibniz, || format!("Leibniz fails for seed {seed}"))?;
        ensure(sum(&de, &e.lie_bracket(&d).unwrap()).is_zero(), || format!("antisymmetry fails for seed {seed}"))?;
        let j1 = d.lie_bracket(&e.lie_bracket(&g).unwrap()).unwrap();
        let j2 = e.lie_bracket(&g.lie_bracket(&d).unwrap()).unwrap();
        let j3 = g.lie_bracket(&de).unwrap();
        ensure(sum(&sum(&j1, &j2), &j3).is_zero(), || format!("Jacobi fails for seed {seed}"))?;
    }
    Ok("100 products, 100 triples".into())
}

fn jet_rewriter() -> Outcome {
    let t = Instant::now();
    for seed in 0..500u64 {
        let mut r = rng(seed);
        let term = random::diff_term(&mut r, 5, &["x", "y"], 1);
        let pt = random::series_point(&mut r, &["x", "y"], 1, 12);
        let direct = eval_diff_term(&term, &pt).map_err(|e| format!("seed {seed}: {e}"))?;
        let jt = rewrite_term(&term, 1).map_err(|e| format!("seed {seed}: {e}"))?;
        let via = eval_jet_function(&jt.value, &pt).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(direct.eq_mod_truncation(&via), || format!("seed {seed}: {term}"))?;
    }
    within(t, 120)?;
    Ok(format!("500 terms, {:.1?}", t.elapsed()))
}

fn matroid_layer() -> Outcome {
    for seed in 0..20u64 {
        let (s, universe) = random::linear_system(&mut rng(seed), 4, 5);
        ensure(check_quasi_endomorphism(&s, &universe).is_none(), || format!("quasi-endomorphism fails, seed {seed}"))?;
        let cl = |x: usize, base: &[usize]| {
            let b: Vec<Vec<Rational>> = base.iter().map(|&i| universe[i].clone()).collect();
            in_delta_closure(&s, &universe[x], &b, 4).is_some()
        };
        ensure(check_exchange(universe.len(), &cl).is_none(), || format!("exchange fails, seed {seed}"))?;
        ensure(check_closure_axioms(universe.len(), &cl).is_none(), || format!("closure axioms fail, seed {seed}"))?;
        for a in &universe {
            let dr = delta_rank(&s, std::slice::from_ref(a), &[], 8, 3).map_err(|e| e.to_string())?;
            ensure(dr.increments.windows(2).all(|w| w[0] >= w[1]), || format!("increments increase, seed {seed}"))?;
        }
    }
    let e1: Vec<Rational> = [1, 0, 0, 0].iter().map(|&x| rat(x, 1)).collect();
    let dr = delta_rank(&LinearEndo::shift(4), &[e1], &[], 8, 3).map_err(|e| e.to_string())?;
    ensure(dr.value == 0 && dr.stabilized, || format!("shift example gives {dr:?}"))?;
    Ok(format!("20 systems; shift increments {:?}", dr.increments))
}

fn coherence() -> Outcome {
    let good = parse_condition("p = 2\nbeta [1,0] := z\nbeta [0,1] := z\n").unwrap();
    ensure(is_coherent(&good).unwrap().coherent, || "exponential pair rejected".into())?;
    let bad = parse_condition("p = 2\nbeta [1,0] := z\nbeta [0,1] := 1\n").unwrap();
    let conf = is_coherent(&bad).unwrap().conflict.ok_or("incoherent pair accepted")?;
    let cert = (conf.theta.exps().to_vec(), conf.phi1.exps().to_vec(), conf.phi2.exps().to_vec());
    ensure(cert == (vec![1, 1], vec![1, 0], vec![0, 1]), || format!("certificate {conf}"))?;
    let t = Instant::now();
    for seed in 0..20u64 {
        let c = random::coherent_condition(&mut rng(seed), 1 + (seed % 3) as usize, 2, 2);
        ensure(strong_coherence_probe(&c, 5).unwrap().is_none(), || format!("probe fails, seed {seed}"))?;
        ensure(check_trivfact(&c, 3).unwrap().is_none(), || format!("trivfact fails, seed {seed}"))?;
    }
    Ok(format!("20 systems to ord 5, {:.1?}", t.elapsed()))
}

fn fact(k: u32) -> Rational {
    (1..=k as i64).map(|j| rat(j, 1)).fold(Rational::one(), |a, b| a * b)
}

fn riquier() -> Outcome {
    let c = parse_condition("p = 2\nbeta [1,0] := z\nbeta [0,1] := z\ninit z[0,0] = 1\n").unwrap();
    let a = solve_condition_series(&c, 8).map_err(|e| e.to_string())?;
    for i in 0..=8u32 {
        for j in 0..=8 - i {
            ensure(a.coeff(&[i, j]) == Rational::one() / (fact(i) * fact(j)), || format!("coefficient [{i},{j}]"))?;
        }
    }
    ensure(verify_solution(&c, &a).is_none(), || "exponential fails to verify".into())?;
    for seed in 0..20u64 {
        let c = random::coherent_condition(&mut rng(seed), 1 + (seed % 3) as usize, 2, 2);
        let a = solve_condition_series(&c, 8).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(verify_solution(&c, &a).is_none(), || format!("round trip fails, seed {seed}"))?;
    }
    Ok("exponential to degree 8; 20 round trips".into())
}

fn singer() -> Outcome {
    let s = parse_singer("n = 1\nP = X1 - X0\na = (1, 1)").unwrap();
    let b = solve_singer_formal(&s, 20).map_err(|e| e.to_string())?;
    for k in 0..=20 {
        ensure(b.coeff(&[k]) == Rational::one() / fact(k), || format!("1/{k}! wrong"))?;
    }
    let s = parse_singer("n = 1\nP = X1 - X0^3 + X0^2\na = (2, 4)").unwrap();
    let b = solve_singer_formal(&s, 4).map_err(|e| e.to_string())?;
    let b2 = b.coeff(&[2]) * fact(2);
    ensure(b2 == rat(32, 1), || format!("b''(0) = {b2}"))?;
    for seed in 0..50u64 {
        let s = random::singer_instance(&mut rng(seed), 3, 2);
        ensure(check_singer_premise(&s).holds(), || format!("premise, seed {seed}"))?;
        let b = solve_singer_formal(&s, 12).map_err(|e| e.to_string())?;
        let res = singer_residual(&s, &b);
        ensure((0..=(12 - s.n) as u32).all(|k| res.coeff(&[k]).is_zero()), || format!("residual, seed {seed}"))?;
    }
    Ok("1/k! to 20, b''(0) = 32, 50 residuals".into())
}

fn sturm() -> Outcome {
    let cmps = [Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge];
    for seed in 0..100u64 {
        let mut r = rng(seed);
        let f = random::unipoly(&mut r, 6, 10);
        if f.degree() == Some(0) {
            continue;
        }
        let o = descartes::oracle(f.coeffs());
        ensure(count_roots(&f, None, None) == o.roots, || format!("root count, seed {seed}: {f}"))?;
        let (a, b) = (random::rational(&mut r, 5), random::rational(&mut r, 5));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo < hi {
            let n = count_roots(&f, Some(&lo), Some(&hi));
            ensure(n == descartes::roots_in(f.coeffs(), &lo, &hi), || format!("roots in ({lo}, {hi}], seed {seed}: {f}"))?;
        }
        for cmp in cmps {
            let expected = match cmp {
                Cmp::Eq => o.roots > 0,
                Cmp::Ne => true,
                Cmp::Le | Cmp::Ge if o.roots > 0 => true,
                _ => o.samples.iter().any(|x| cmp.holds(f.sign_at(x))),
            };
            let d = sturm_decide(&[(from_unipoly(&f, "x".to_string()), cmp)]).map_err(|e| e.to_string())?;
            ensure(d.is_sat() == expected, || format!("verdict, seed {seed}: {f} {cmp:?}"))?;
        }
    }
    let x = || MultiPoly::var("x".to_string());
    let two = MultiPoly::from_int(2);
    let sat = sturm_decide(&[(&(&x() * &x()) - &two, Cmp::Gt), (x(), Cmp::Gt), (&x() - &two, Cmp::Lt)]).unwrap();
    ensure(sat.is_sat(), || "x^2 - 2 > 0, 0 < x < 2 is sat".into())?;
    let unsat = sturm_decide(&[(&(&x() * &x()) + &MultiPoly::one(), Cmp::Eq)]).unwrap();
    ensure(unsat == Decision::Unsat, || "x^2 + 1 = 0 is unsat".into())?;
    Ok("100 polynomials".into())
}

fn delta_types() -> Outcome {
    let t = delta_type(&"1,0".parse().unwrap());
    ensure(t.bold == vec![0] && t.dim == 0, || format!("got {t}"))?;
    Ok(t.to_string())
}

fn cli() -> Outcome {
    for json in [false, true] {
        for c in common::CASES {
            common::check_golden(c, json)?;
        }
    }
    for seed in 0..200u64 {
        let s = random::diff_term(&mut rng(seed), 5, &["x", "y", "z"], 1 + (seed % 3) as usize).to_string();
        let t1 = parse_term(&s).map_err(|e| format!("`{s}`: {e}"))?;
        let t2 = parse_term(&t1.to_string()).map_err(|e| format!("`{t1}`: {e}"))?;
        ensure(t1 == t2, || format!("round trip of `{s}`"))?;
    }
    let expect = [
        (&["theta", "enum"][..], 0),
        (&["rewrite", "d(x^2"][..], 1),
        (&["coherence", "check", "-f", "data/missing.cond"][..], 1),
        (&["no-such-command"][..], 1),
        (&["singer", "solve", "-f", "data/bad_premise.singer"][..], 2),
        (&["coherence", "solve", "-f", "data/incoherent.cond"][..], 2),
    ];
    for (args, code) in expect {
        let got = common::run(args, false).code;
        ensure(got == code, || format!("{args:?} exits {got}, expected {code}"))?;
    }
    Ok(format!("{} golden cases x 2 modes, 200 round trips", common::CASES.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("chain-rule calculus", chain_rule),
        ("Lie algebra", lie_algebra),
        ("jet rewriter round trip", jet_rewriter),
        ("matroid layer", matroid_layer),
        ("coherence", coherence),
        ("series solver", riquier),
        ("Singer solver", singer),
        ("Sturm backend", sturm),
        ("delta-type arithmetic", delta_types),
        ("CLI", cli),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
