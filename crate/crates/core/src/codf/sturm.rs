//! Exact real roots of univariate rational polynomials: Sturm chains,
//! bisection isolation, and simplest rationals between consecutive roots.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{fmt_rational, Rational, UniPoly};

/// Sturm chain of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain(Vec<UniPoly>);

impl SturmChain {
    pub fn new(f: &UniPoly) -> Self {
        assert!(!f.is_zero(), "Sturm chain of the zero polynomial");
        let mut chain = vec![f.clone(), f.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            chain.push(r);
        }
        chain.pop();
        SturmChain(chain)
    }

    fn changes(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut prev = Ordering::Equal;
        let mut n = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if prev != Ordering::Equal && s != prev {
                n += 1;
            }
            prev = s;
        }
        n
    }

    fn changes_at(&self, x: &Rational) -> usize {
        Self::changes(self.0.iter().map(|p| p.sign_at(x)))
    }

    fn changes_at_infinity(&self, positive: bool) -> usize {
        Self::changes(self.0.iter().map(|p| {
            let s = p.leading().cmp(&Rational::zero());
            if !positive && p.degree().unwrap_or(0) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in `(lo, hi]`; `None` stands for infinity.
    pub fn count(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        let a = lo.map_or_else(|| self.changes_at_infinity(false), |x| self.changes_at(x));
        let b = hi.map_or_else(|| self.changes_at_infinity(true), |x| self.changes_at(x));
        a - b
    }
}

/// A real root: either rational or isolated in an open interval whose
/// rational endpoints are not roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Rational(Rational),
    Isolated { lo: Rational, hi: Rational },
}

impl fmt::Display for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealRoot::Rational(q) => write!(f, "{}", fmt_rational(q)),
            RealRoot::Isolated { lo, hi } => write!(f, "({}, {})", fmt_rational(lo), fmt_rational(hi)),
        }
    }
}

/// Squarefree polynomial together with its Sturm chain.
pub struct RootSolver {
    pub poly: UniPoly,
    chain: SturmChain,
}

impl RootSolver {
    pub fn new(f: &UniPoly) -> Self {
        let poly = f.squarefree();
        RootSolver { chain: SturmChain::new(&poly), poly }
    }

    pub fn count(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        self.chain.count(lo, hi)
    }

    /// All real roots in increasing order.
    pub fn roots(&self) -> Vec<RealRoot> {
        if self.poly.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let b = self.poly.root_bound();
        let mut out = Vec::new();
        let n = self.count(Some(&-b.clone()), Some(&b));
        self.isolate(-b.clone(), b, n, &mut out);
        out.into_iter().map(|r| self.exactify(r)).collect()
    }

    fn isolate(&self, lo: Rational, hi: Rational, n: usize, out: &mut Vec<RealRoot>) {
        match n {
            0 => {}
            1 => out.push(RealRoot::Isolated { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                if self.poly.eval(&mid).is_zero() {
                    let mut eps = (&hi - &lo) / Rational::from_integer(4.into());
                    loop {
                        let (a, b) = (&mid - &eps, &mid + &eps);
                        if !self.poly.eval(&a).is_zero()
                            && !self.poly.eval(&b).is_zero()
                            && self.count(Some(&a), Some(&b)) == 1
                        {
                            let left = self.count(Some(&lo), Some(&a));
                            self.isolate(lo, a.clone(), left, out);
                            out.push(RealRoot::Rational(mid));
                            let right = self.count(Some(&b), Some(&hi));
                            self.isolate(b, hi, right, out);
                            return;
                        }
                        eps /= Rational::from_integer(2.into());
                    }
                }
                let left = self.count(Some(&lo), Some(&mid));
                self.isolate(lo, mid.clone(), left, out);
                self.isolate(mid, hi, n - left, out);
            }
        }
    }

    /// Halves an isolating interval, or returns the root if it is the midpoint.
    pub fn bisect(&self, lo: &Rational, hi: &Rational) -> RealRoot {
        let mid = (lo + hi) / Rational::from_integer(2.into());
        if self.poly.eval(&mid).is_zero() {
            RealRoot::Rational(mid)
        } else if self.count(Some(lo), Some(&mid)) == 1 {
            RealRoot::Isolated { lo: lo.clone(), hi: mid }
        } else {
            RealRoot::Isolated { lo: mid, hi: hi.clone() }
        }
    }

    /// Detects rational roots: once the interval is narrower than `1/D^2`,
    /// where `D` bounds the denominators of rational roots, the only
    /// candidate is the simplest rational inside.
    fn exactify(&self, r: RealRoot) -> RealRoot {
        let RealRoot::Isolated { mut lo, mut hi } = r else { return r };
        let d = Rational::from_integer(self.poly.root_denominator_bound());
        let target = Rational::one() / (&d * &d);
        while &hi - &lo >= target {
            match self.bisect(&lo, &hi) {
                RealRoot::Rational(q) => return RealRoot::Rational(q),
                RealRoot::Isolated { lo: a, hi: b } => (lo, hi) = (a, b),
            }
        }
        let q = simplest_in_open(&lo, &hi);
        if self.poly.eval(&q).is_zero() {
            RealRoot::Rational(q)
        } else {
            RealRoot::Isolated { lo, hi }
        }
    }

    /// Index of the gap containing `x`, counting roots `<= x`; `None` if `x`
    /// is a root.
    fn gap_of(&self, x: &Rational) -> Option<usize> {
        if self.poly.eval(x).is_zero() {
            None
        } else {
            Some(self.count(None, Some(x)))
        }
    }

    /// Simplest rational strictly between the `i`-th and `(i+1)`-th roots
    /// (roots indexed from 1, with the outer gaps unbounded).
    pub fn simplest_in_gap(&self, i: usize) -> Rational {
        let cmp = |q: &Rational| match self.gap_of(q) {
            Some(g) => g.cmp(&i),
            // A root equal to q: the gap lies above it iff it is root i or lower.
            None => {
                if self.count(None, Some(q)) <= i {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        };
        simplest_by(&cmp)
    }
}

/// Simplest rational in the open interval `(lo, hi)`, `lo < hi`.
pub fn simplest_in_open(lo: &Rational, hi: &Rational) -> Rational {
    simplest_by(&|q: &Rational| {
        if q <= lo {
            Ordering::Less
        } else if q >= hi {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Stern-Brocot search for the simplest rational `q` with `cmp(q) == Equal`,
/// where `cmp` describes a nonempty open interval: `Less` below, `Greater`
/// above. Runs of equal moves are taken by galloping.
fn simplest_by(cmp: &dyn Fn(&Rational) -> Ordering) -> Rational {
    let zero = Rational::zero();
    match cmp(&zero) {
        Ordering::Equal => zero,
        Ordering::Less => simplest_positive(cmp),
        Ordering::Greater => -simplest_positive(&|q: &Rational| cmp(&-q).reverse()),
    }
}

fn simplest_positive(cmp: &dyn Fn(&Rational) -> Ordering) -> Rational {
    // Fractions as (numerator, denominator); right starts at 1/0.
    let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
    let (mut rn, mut rd) = (BigInt::one(), BigInt::zero());
    let frac = |n: &BigInt, d: &BigInt| Rational::new(n.clone(), d.clone());
    loop {
        let (mn, md) = (&ln + &rn, &ld + &rd);
        match cmp(&frac(&mn, &md)) {
            Ordering::Equal => return frac(&mn, &md),
            Ordering::Less => {
                // Largest k with (l + k r) still below the interval.
                let below = |k: &BigInt| cmp(&frac(&(&ln + k * &rn), &(&ld + k * &rd))) == Ordering::Less;
                let k = gallop(&below);
                ln += &k * &rn;
                ld += &k * &rd;
            }
            Ordering::Greater => {
                let above = |k: &BigInt| cmp(&frac(&(k * &ln + &rn), &(k * &ld + &rd))) == Ordering::Greater;
                let k = gallop(&above);
                rn += &k * &ln;
                rd += &k * &ld;
            }
        }
    }
}

/// Largest `k >= 1` with `pred(k)`, given `pred(1)` and monotonicity.
fn gallop(pred: &dyn Fn(&BigInt) -> bool) -> BigInt {
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while pred(&hi) {
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if pred(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Roots of `f` in increasing order; the zero polynomial has none reported.
pub fn real_roots(f: &UniPoly) -> Vec<RealRoot> {
    if f.is_zero() {
        return Vec::new();
    }
    RootSolver::new(f).roots()
}

/// Number of distinct real roots in `(lo, hi]`, `None` meaning infinity.
pub fn count_roots(f: &UniPoly, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
    if f.is_zero() {
        return 0;
    }
    RootSolver::new(f).count(lo, hi)
}
