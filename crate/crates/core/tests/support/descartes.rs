//! Independent real root counting: Descartes' rule of signs with bisection,
//! on exact rationals.

use num_traits::{One, Signed, Zero};
use tderiv::Rational;

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let q = r.last().unwrap() / b.last().unwrap();
        let off = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[off + i] -= &q * c;
        }
        r = trim(r);
    }
    r
}

fn quo(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() {
        let c = r.last().unwrap() / b.last().unwrap();
        let off = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[off + i] -= &c * bc;
        }
        q[off] = c;
        r = trim(r);
    }
    q
}

fn squarefree(p: &[Rational]) -> Vec<Rational> {
    let d: Vec<Rational> = p.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(k.into())).collect();
    let (mut a, mut b) = (p.to_vec(), trim(d));
    while !b.is_empty() {
        (a, b) = (b.clone(), rem(&a, &b));
    }
    quo(p, &a)
}

/// `p(lo + (hi - lo) x)` mapped to `(1 + y)^d p(lo + (hi - lo) / (1 + y))`.
fn descartes(p: &[Rational], lo: &Rational, hi: &Rational) -> usize {
    let n = p.len();
    let shift = |q: &mut Vec<Rational>, c: &Rational| {
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &q[j + 1] * c;
                q[j] += t;
            }
        }
    };
    let mut q = p.to_vec();
    shift(&mut q, lo);
    let w = hi - lo;
    let mut s = Rational::one();
    for c in q.iter_mut() {
        *c *= &s;
        s *= &w;
    }
    q.reverse();
    shift(&mut q, &Rational::one());
    let signs: Vec<bool> = q.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Isolates the roots of squarefree `p` in the open interval; returns the
/// root count and the interval endpoints used, none of which is a root.
fn isolate(p: &[Rational], lo: Rational, hi: Rational, cuts: &mut Vec<Rational>) -> usize {
    match descartes(p, &lo, &hi) {
        0 => 0,
        1 => 1,
        _ => {
            let mut k = 2;
            let mid = loop {
                let m = &lo + (&hi - &lo) / Rational::from_integer(k.into());
                if !eval(p, &m).is_zero() {
                    break m;
                }
                k += 1;
            };
            cuts.push(mid.clone());
            isolate(p, lo, mid.clone(), cuts) + isolate(p, mid, hi, cuts)
        }
    }
}

pub struct Oracle {
    pub roots: usize,
    pub samples: Vec<Rational>,
}

pub fn oracle(p: &[Rational]) -> Oracle {
    let sf = squarefree(p);
    let lead = sf.last().unwrap();
    let bound = Rational::one() + sf.iter().map(|c| (c / lead).abs()).max().unwrap();
    let mut cuts = vec![-bound.clone(), bound.clone()];
    let roots = isolate(&sf, -bound.clone(), bound, &mut cuts);
    Oracle { roots, samples: cuts }
}

pub fn roots_in(p: &[Rational], lo: &Rational, hi: &Rational) -> usize {
    let sf = squarefree(p);
    let mut cuts = Vec::new();
    isolate(&sf, lo.clone(), hi.clone(), &mut cuts) + eval(&sf, hi).is_zero() as usize
}
