//! Seeded generators for randomized checks, benchmarks and CLI demos.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Monomial, MultiPoly, Rational, RationalFunction, Variable};
use crate::codf::{SingerInstance, UniPoly, XVar};
use crate::coherence::Condition;
use crate::diffpoly::{DiffRational, DiffVar, PolyDerivation};
use crate::jet::DiffTerm;
use crate::matroid::LinearEndo;
use crate::series_models::SeriesPoint;
use crate::theta::{self, Theta};
use crate::TruncatedSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut impl Rng, height: i64) -> Rational {
    let n = rng.gen_range(-height..=height);
    let d = rng.gen_range(1..=height.max(1));
    Rational::new(n.into(), d.into())
}

pub fn nonzero_rational(rng: &mut impl Rng, height: i64) -> Rational {
    loop {
        let q = rational(rng, height);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Up to `max_terms` terms of total degree at most `deg`.
pub fn poly<V: Variable>(rng: &mut impl Rng, vars: &[V], deg: u32, max_terms: usize) -> MultiPoly<V> {
    let n = rng.gen_range(1..=max_terms.max(1));
    MultiPoly::from_terms((0..n).map(|_| {
        let d = rng.gen_range(0..=deg);
        let mut powers = Vec::new();
        for _ in 0..d {
            if let Some(v) = vars.choose(rng) {
                powers.push((v.clone(), 1));
            }
        }
        (Monomial::from_powers(powers), nonzero_rational(rng, 5))
    }))
}

/// `p / (1 + q^2)`, so the denominator has no real zeros; `q` is absent
/// half of the time.
pub fn ratfunc<V: Variable>(rng: &mut impl Rng, vars: &[V], deg: u32) -> RationalFunction<V> {
    let num = poly(rng, vars, deg, 4);
    if rng.gen_bool(0.5) {
        return RationalFunction::from(num);
    }
    let q = poly(rng, vars, (deg / 2).max(1), 2);
    let den = &MultiPoly::one() + &(&q * &q);
    RationalFunction::new(num, den).expect("1 + q^2 is nonzero")
}

/// Base variables `y1..yn` in `p` derivations.
pub fn base_vars(n: usize, p: usize) -> Vec<DiffVar> {
    (1..=n).map(|k| DiffVar::base(format!("y{k}"), p)).collect()
}

/// Random rational function in jet variables of order at most `max_ord`.
pub fn diff_ratfunc(rng: &mut impl Rng, names: &[&str], p: usize, max_ord: u32, deg: u32) -> DiffRational {
    let thetas = theta::enumerate(p, max_ord);
    let vars: Vec<DiffVar> = (0..4)
        .map(|_| DiffVar::new(*names.choose(rng).unwrap(), thetas.choose(rng).unwrap().clone()))
        .collect();
    ratfunc(rng, &vars, deg)
}

/// A derivation on `vars` with random polynomial images.
pub fn derivation<V: Variable>(rng: &mut impl Rng, vars: &[V], deg: u32) -> PolyDerivation<V> {
    PolyDerivation::from_pairs(vars.iter().map(|v| (v.clone(), RationalFunction::from(poly(rng, vars, deg, 3)))))
}

/// Random term of depth at most `depth` in base variables `names`, with
/// derivations `d1..dp`. Quotients have the form `a / (1 + b^2)`, so they
/// stay defined at every rational series point.
pub fn diff_term(rng: &mut impl Rng, depth: u32, names: &[&str], p: usize) -> DiffTerm {
    if depth <= 1 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.6) {
            DiffTerm::var(names.choose(rng).unwrap())
        } else {
            DiffTerm::Const(rational(rng, 4))
        };
    }
    let sub = |rng: &mut ChaCha8Rng, d: u32| diff_term(rng, d, names, p);
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    match rng.gen_range(0..7) {
        0 => DiffTerm::add(sub(&mut r, depth - 1), sub(&mut r, depth - 1)),
        1 => DiffTerm::sub(sub(&mut r, depth - 1), sub(&mut r, depth - 1)),
        2 => DiffTerm::mul(sub(&mut r, depth - 1), sub(&mut r, depth - 1)),
        3 if depth >= 3 => {
            let b = sub(&mut r, depth - 2);
            DiffTerm::div(sub(&mut r, depth - 1), DiffTerm::add(DiffTerm::int(1), DiffTerm::pow(b, 2)))
        }
        4 => DiffTerm::pow(sub(&mut r, depth - 1), rng.gen_range(2..=3)),
        5 => DiffTerm::Neg(Box::new(sub(&mut r, depth - 1))),
        _ => DiffTerm::d(rng.gen_range(0..p), sub(&mut r, depth - 1)),
    }
}

/// Assigns each name a random series in `p` variables with small rational
/// coefficients.
pub fn series_point(rng: &mut impl Rng, names: &[&str], p: usize, order: i32) -> SeriesPoint {
    let mut pt = SeriesPoint::new(p, order);
    for name in names {
        let terms: Vec<(Vec<u32>, Rational)> = theta::enumerate(p, order.max(0) as u32)
            .into_iter()
            .map(|t| (t.exps().to_vec(), rational(rng, 3)))
            .collect();
        pt.insert(name, TruncatedSeries::from_terms(p, order, terms)).expect("arity matches");
    }
    pt
}

/// Random integer matrix on `Q^dim` and `size` random vectors.
pub fn linear_system(rng: &mut impl Rng, dim: usize, size: usize) -> (LinearEndo, Vec<Vec<Rational>>) {
    let int = |rng: &mut dyn rand::RngCore| Rational::from_integer(rng.gen_range(-2i64..=2).into());
    let matrix = (0..dim).map(|_| (0..dim).map(|_| int(rng)).collect()).collect();
    let universe = (0..size).map(|_| (0..dim).map(|_| int(rng)).collect()).collect();
    (LinearEndo::new(matrix), universe)
}

/// Single-beta condition (hence coherent) with `f_beta` a random rational
/// function in variables below `beta`, and random initial data.
pub fn coherent_condition(rng: &mut impl Rng, p: usize, max_ord: u32, deg: u32) -> Condition {
    let ord = rng.gen_range(1..=max_ord);
    let beta = theta::of_order(p, ord).choose(rng).unwrap().clone();
    let below: Vec<Theta> = theta::enumerate(p, ord).into_iter().filter(|t| *t < beta).collect();
    let c = Condition::new(p, "z");
    let vars: Vec<DiffVar> = below.iter().map(|t| c.var(t.clone())).collect();
    let mut c = c.with_beta(beta.clone(), ratfunc(rng, &vars, deg));
    for t in theta::enumerate(p, 2) {
        if !beta.divides(&t) {
            c.init.insert(t, rational(rng, 3));
        }
    }
    c
}

/// Instance satisfying the premise: `P = R - R(a) + c (X_n - a_n)` with `c`
/// chosen so the separant is nonzero, and `Q = S - S(a) + r` with `r > 0`.
pub fn singer_instance(rng: &mut impl Rng, max_n: usize, deg: u32) -> SingerInstance {
    let n = rng.gen_range(1..=max_n);
    let a: Vec<Rational> = (0..=n).map(|_| rational(rng, 3)).collect();
    let at = |q: &MultiPoly<XVar>| q.eval(&|v: &XVar| a.get(v.0).cloned()).unwrap();
    let xs: Vec<XVar> = (0..=n).map(XVar).collect();
    let r = poly(rng, &xs, deg, 4);
    let top = &MultiPoly::var(XVar(n)) - &MultiPoly::constant(a[n].clone());
    let sep = at(&r.partial(&XVar(n)));
    let c = if sep == Rational::from_integer((-1).into()) { 2 } else { 1 };
    let p = &(&r - &MultiPoly::constant(at(&r))) + &top.scale(&Rational::from_integer(c.into()));
    let qs = (0..rng.gen_range(0..=2))
        .map(|_| {
            let s = poly(rng, &xs[..n], deg, 3);
            let shift = Rational::from_integer(rng.gen_range(1i64..=3).into()) - at(&s);
            &s + &MultiPoly::constant(shift)
        })
        .collect();
    SingerInstance { n, p, qs, a }
}

/// Degree at most `deg`, integer coefficients of absolute value at most
/// `height`; never the zero polynomial.
pub fn unipoly(rng: &mut impl Rng, deg: usize, height: i64) -> UniPoly {
    loop {
        let d = rng.gen_range(1..=deg.max(1));
        let c: Vec<Rational> = (0..=d).map(|_| Rational::from_integer(rng.gen_range(-height..=height).into())).collect();
        let u = UniPoly::new(c);
        if !u.is_zero() {
            return u;
        }
    }
}
