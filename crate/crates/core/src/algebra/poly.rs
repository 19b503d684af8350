//! Sparse multivariate polynomials over the rationals.
//!
//! Monomials are stored as sorted `(variable, exponent)` lists so that
//! polynomials over different variable sets can be combined without first
//! aligning a dense exponent layout. Terms are kept in a `BTreeMap` ordered
//! by the graded-lexicographic monomial order, which fixes the notion of a
//! leading term used throughout the crate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Anything usable as a polynomial indeterminate.
pub trait Variable: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {}

impl<T> Variable for T where T: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {}

/// A power product `v1^e1 * ... * vk^ek` with all `ei > 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial<V> {
    powers: Vec<(V, u32)>,
}

impl<V: Variable> Monomial<V> {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(v: V) -> Self {
        Monomial { powers: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_powers(powers: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            powers: map.into_iter().filter(|(_, e)| *e > 0).collect(),
        }
    }

    pub fn powers(&self) -> &[(V, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        match self.powers.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => self.powers[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, ea) = &self.powers[i];
            let (b, eb) = &other.powers[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.powers[i..]);
        out.extend_from_slice(&other.powers[j..]);
        Monomial { powers: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.powers.len());
        let mut j = 0;
        for (v, e) in &self.powers {
            if j < other.powers.len() && other.powers[j].0 < *v {
                return None;
            }
            if j < other.powers.len() && other.powers[j].0 == *v {
                let f = other.powers[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.powers.len() {
            return None;
        }
        Some(Monomial { powers: out })
    }

    /// Splits off the power of `v`: returns `(e, m)` with `self = v^e * m`.
    pub fn split(&self, v: &V) -> (u32, Self) {
        match self.powers.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let mut rest = self.powers.clone();
                let (_, e) = rest.remove(i);
                (e, Monomial { powers: rest })
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn map_vars<W: Variable>(&self, f: &impl Fn(&V) -> W) -> Monomial<W> {
        Monomial::from_powers(self.powers.iter().map(|(v, e)| (f(v), *e)))
    }
}

impl<V: Variable> PartialOrd for Monomial<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order; among variables, the `Ord`-smallest one is
/// the most significant.
impl<V: Variable> Ord for Monomial<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for ((a, ea), (b, eb)) in self.powers.iter().zip(&other.powers) {
            match a.cmp(b) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
        self.powers.len().cmp(&other.powers.len())
    }
}

impl<V: Variable> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.powers.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<V: Variable> {
    terms: BTreeMap<Monomial<V>, Rational>,
}

impl<V: Variable> Default for MultiPoly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variable> MultiPoly<V> {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: V) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial<V>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, Rational)>) -> Self {
        let mut acc: HashMap<Monomial<V>, Rational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial<V>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (`Some(0)` for the zero polynomial).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, m: &Monomial<V>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial<V>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<V> {
        self.terms
            .keys()
            .flat_map(|m| m.powers.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn contains_var(&self, v: &V) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial<V>, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: &V) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == 0 {
                continue;
            }
            let mono = rest.mul(&Monomial::from_powers([(v.clone(), e - 1)]));
            terms.insert(mono, c * Rational::from_integer(e.into()));
        }
        MultiPoly { terms }
    }

    /// Views `self` as a univariate polynomial in `v` and returns its
    /// coefficients keyed by exponent.
    pub fn coefficients_in(&self, v: &V) -> BTreeMap<u32, MultiPoly<V>> {
        let mut out: BTreeMap<u32, BTreeMap<Monomial<V>, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e).or_default().insert(rest, c.clone());
        }
        out.into_iter()
            .map(|(e, terms)| (e, MultiPoly { terms }))
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(v: &V, coeffs: &BTreeMap<u32, MultiPoly<V>>) -> Self {
        let mut terms = BTreeMap::new();
        for (e, p) in coeffs {
            let vm = Monomial::from_powers([(v.clone(), *e)]);
            for (m, c) in &p.terms {
                terms.insert(m.mul(&vm), c.clone());
            }
        }
        MultiPoly { terms }
    }

    /// Exact evaluation at a rational point; `None` if a variable is unassigned.
    pub fn eval(&self, assign: &impl Fn(&V) -> Option<Rational>) -> Option<Rational> {
        let mut cache: HashMap<V, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.powers {
                let x = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assign(v)?;
                        cache.insert(v.clone(), x.clone());
                        x
                    }
                };
                t *= num_traits::pow(x, *e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Evaluates with a map-based assignment.
    pub fn eval_map(&self, assign: &BTreeMap<V, Rational>) -> Option<Rational> {
        self.eval(&|v| assign.get(v).cloned())
    }

    /// Substitutes polynomials for some variables; unmapped variables stay.
    pub fn substitute(&self, map: &BTreeMap<V, MultiPoly<V>>) -> Self {
        let mut power_cache: HashMap<(V, u32), MultiPoly<V>> = HashMap::new();
        let mut acc: HashMap<Monomial<V>, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut prod = MultiPoly::one();
            for (v, e) in &m.powers {
                match map.get(v) {
                    Some(p) => {
                        let pe = power_cache
                            .entry((v.clone(), *e))
                            .or_insert_with(|| p.pow(*e))
                            .clone();
                        prod = &prod * &pe;
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let kept = Monomial { powers: kept };
            for (pm, pc) in prod.terms {
                *acc.entry(pm.mul(&kept)).or_insert_with(Rational::zero) += pc * c;
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn map_vars<W: Variable>(&self, f: impl Fn(&V) -> W) -> MultiPoly<W> {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Exact quotient `self / b`, or `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        assert!(!b.is_zero(), "division by the zero polynomial");
        if let Some(c) = b.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = b.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back() {
            let qm = rm.div(&lm)?;
            let qc = rc / &lc;
            for (m, c) in &b.terms {
                let key = m.mul(&qm);
                let d = c * &qc;
                match rem.get_mut(&key) {
                    Some(a) => {
                        *a -= d;
                        if a.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -d);
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Some(MultiPoly { terms: quot })
    }

    /// Returns `(c, q)` with `self = c * q`, where `q` has coprime integer
    /// coefficients and positive leading coefficient.
    pub fn integer_normalized(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (Rational::one(), Self::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        let q = self.scale(&content.recip());
        (content, q)
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }
}

impl<V: Variable> From<Rational> for MultiPoly<V> {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl<'a, V: Variable> Add<&'a MultiPoly<V>> for &'a MultiPoly<V> {
    type Output = MultiPoly<V>;
    fn add(self, rhs: &'a MultiPoly<V>) -> MultiPoly<V> {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a += c;
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        MultiPoly { terms }
    }
}

impl<'a, V: Variable> Sub<&'a MultiPoly<V>> for &'a MultiPoly<V> {
    type Output = MultiPoly<V>;
    fn sub(self, rhs: &'a MultiPoly<V>) -> MultiPoly<V> {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a -= c;
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), -c.clone());
                }
            }
        }
        MultiPoly { terms }
    }
}

impl<'a, V: Variable> Mul<&'a MultiPoly<V>> for &'a MultiPoly<V> {
    type Output = MultiPoly<V>;
    fn mul(self, rhs: &'a MultiPoly<V>) -> MultiPoly<V> {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial<V>, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl<V: Variable> Neg for &MultiPoly<V> {
    type Output = MultiPoly<V>;
    fn neg(self) -> MultiPoly<V> {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($ty:ident, $tr:ident, $method:ident) => {
        impl<V: Variable> $tr<$ty<V>> for $ty<V> {
            type Output = $ty<V>;
            fn $method(self, rhs: $ty<V>) -> $ty<V> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, V: Variable> $tr<&'a $ty<V>> for $ty<V> {
            type Output = $ty<V>;
            fn $method(self, rhs: &'a $ty<V>) -> $ty<V> {
                (&self).$method(rhs)
            }
        }
    };
}
pub(crate) use forward_owned_binop;

forward_owned_binop!(MultiPoly, Add, add);
forward_owned_binop!(MultiPoly, Sub, sub);
forward_owned_binop!(MultiPoly, Mul, mul);

impl<V: Variable> Neg for MultiPoly<V> {
    type Output = MultiPoly<V>;
    fn neg(self) -> MultiPoly<V> {
        -&self
    }
}

/// Writes a rational in the term grammar (`3`, `-1/2`).
pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl<V: Variable> fmt::Display for MultiPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x() -> MultiPoly<&'static str> {
        MultiPoly::var("x")
    }

    fn y() -> MultiPoly<&'static str> {
        MultiPoly::var("y")
    }

    #[test]
    fn difference_of_squares() {
        let one = MultiPoly::one();
        let p = (x() + &one) * (x() - &one);
        assert_eq!(p, x() * x() - one);
        assert_eq!(p.to_string(), "x^2 - 1");
    }

    #[test]
    fn adding_zero_is_identity() {
        let p = x() * y() + MultiPoly::from_int(3);
        assert_eq!(&p + &MultiPoly::zero(), p);
    }

    /// Naive term-by-term expansion over dense exponent pairs.
    fn naive_square(terms: &[((u32, u32), i64)]) -> BTreeMap<(u32, u32), i64> {
        let mut out = BTreeMap::new();
        for ((a1, b1), c1) in terms {
            for ((a2, b2), c2) in terms {
                *out.entry((a1 + a2, b1 + b2)).or_insert(0) += c1 * c2;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn binomial_square_matches_naive_expansion() {
        let expected = naive_square(&[((1, 0), 1), ((0, 1), 1)]);
        let p = (x() + y()).pow(2);
        let got: BTreeMap<(u32, u32), i64> = p
            .terms()
            .map(|(m, c)| {
                (
                    (m.degree_in(&"x"), m.degree_in(&"y")),
                    c.to_integer().try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(got, expected);
        assert_eq!(p.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn grlex_order() {
        let m = |a: u32, b: u32| Monomial::from_powers([("x", a), ("y", b)]);
        assert!(m(2, 0) > m(1, 1));
        assert!(m(1, 1) > m(0, 2));
        assert!(m(0, 3) > m(2, 0));
        assert!(m(1, 0) > m(0, 1));
        assert!(m(0, 0) < m(0, 1));
    }

    #[test]
    fn exact_division() {
        let p = (x() + y()) * (x() - y() + MultiPoly::from_int(2));
        assert_eq!(p.div_exact(&(x() + y())), Some(x() - y() + MultiPoly::from_int(2)));
        assert_eq!((x() * x() + MultiPoly::one()).div_exact(&(x() + y())), None);
    }

    #[test]
    fn partial_and_eval() {
        let p = x() * x() * y();
        assert_eq!(p.partial(&"x"), (x() * y()).scale(&q(2)));
        let v = p.eval(&|v| Some(if *v == "x" { q(3) } else { q(-2) }));
        assert_eq!(v, Some(q(-18)));
    }

    #[test]
    fn substitution() {
        let p = x() * x() + y();
        let mut map = BTreeMap::new();
        map.insert("x", y() + MultiPoly::one());
        let got = p.substitute(&map);
        assert_eq!(got, y() * y() + y().scale(&q(3)) + MultiPoly::one());
    }

    #[test]
    fn integer_normalization() {
        let p = x().scale(&Rational::new((-3).into(), 4.into())) + MultiPoly::constant(Rational::new(1.into(), 2.into()));
        let (c, n) = p.integer_normalized();
        assert_eq!(n, x().scale(&q(3)) - MultiPoly::from_int(2));
        assert_eq!(n.scale(&c), p);
    }
}
