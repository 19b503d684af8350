//! Rational functions in canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::{gcd, gcd_free_basis};
use super::poly::{forward_owned_binop, Monomial, MultiPoly, Variable};
use super::series::TruncatedSeries;
use super::{AlgebraError, Rational};

/// `num / den` with `gcd(num, den) = 1` and `den` monic under graded-lex
/// order, so two rational functions are equal iff their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction<V: Variable> {
    num: MultiPoly<V>,
    den: MultiPoly<V>,
}

impl<V: Variable> Default for RationalFunction<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variable> RationalFunction<V> {
    pub fn zero() -> Self {
        RationalFunction {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction {
            num: MultiPoly::constant(c),
            den: MultiPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(c))
    }

    pub fn var(v: V) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn from_poly(p: MultiPoly<V>) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    /// Builds `num / den` and reduces it to canonical form.
    pub fn new(num: MultiPoly<V>, den: MultiPoly<V>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MultiPoly<V>, den: MultiPoly<V>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return RationalFunction {
                num: num.scale(&c.recip()),
                den: MultiPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn num(&self) -> &MultiPoly<V> {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly<V> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly<V>> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<V> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs
    }

    pub fn contains_var(&self, v: &V) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: if c.is_zero() {
                MultiPoly::one()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        // Powers of a reduced fraction stay reduced.
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Formal partial derivative (quotient rule).
    pub fn partial(&self, v: &V) -> Self {
        let dn = self.num.partial(v);
        if self.is_polynomial() {
            return Self::from_poly(dn);
        }
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, self.den.pow(2))
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, assign: &impl Fn(&V) -> Option<Rational>) -> Result<Rational, AlgebraError> {
        let missing = |p: &MultiPoly<V>| {
            p.variables()
                .into_iter()
                .find(|v| assign(v).is_none())
                .map(|v| AlgebraError::UnassignedVariable(v.to_string()))
                .unwrap_or(AlgebraError::ZeroDenominator)
        };
        let n = self.num.eval(assign).ok_or_else(|| missing(&self.num))?;
        let d = self.den.eval(assign).ok_or_else(|| missing(&self.den))?;
        if d.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        Ok(n / d)
    }

    pub fn eval_map(&self, assign: &BTreeMap<V, Rational>) -> Result<Rational, AlgebraError> {
        self.eval(&|v| assign.get(v).cloned())
    }

    /// Substitutes truncated series in `t_1..t_nvars` for every variable;
    /// the denominator must evaluate to a unit series.
    pub fn eval_series(
        &self,
        nvars: usize,
        order: i32,
        assign: &impl Fn(&V) -> Option<TruncatedSeries>,
    ) -> Result<TruncatedSeries, AlgebraError> {
        let n = TruncatedSeries::eval_poly(&self.num, nvars, order, assign)?;
        let d = TruncatedSeries::eval_poly(&self.den, nvars, order, assign)?;
        if d.constant_coeff().is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        n.div(&d)
    }

    /// Substitutes rational functions for some variables; unmapped variables stay.
    pub fn substitute(&self, map: &BTreeMap<V, RationalFunction<V>>) -> Result<Self, AlgebraError> {
        if !self.variables().iter().any(|v| map.contains_key(v)) {
            return Ok(self.clone());
        }
        // Denominators are expressed over a coprime basis so that the common
        // denominator is an lcm rather than a product.
        let rational: Vec<&V> = map
            .iter()
            .filter(|(v, r)| !r.is_polynomial() && (self.num.contains_var(v) || self.den.contains_var(v)))
            .map(|(v, _)| v)
            .collect();
        let dens: Vec<&MultiPoly<V>> = rational.iter().map(|v| &map[*v].den).collect();
        let (basis, exps) = gcd_free_basis(&dens);
        // Each denominator is a constant times its basis product; the
        // constant moves to the numerator.
        let nums: BTreeMap<&V, MultiPoly<V>> = map
            .iter()
            .map(|(v, r)| match rational.iter().position(|w| *w == v) {
                None => (v, r.num.clone()),
                Some(i) => {
                    let lc: Rational = basis.iter().zip(&exps[i]).map(|(b, k)| num_traits::pow(b.leading_coeff(), *k as usize)).product();
                    (v, r.num.scale(&(lc / r.den.leading_coeff())))
                }
            })
            .collect();
        let den_exps: BTreeMap<&V, &Vec<u32>> = rational.into_iter().zip(&exps).collect();
        let sub = Substitution { map, nums, basis: &basis, den_exps };
        let (nn, ln) = sub.apply(&self.num);
        let (dn, ld) = sub.apply(&self.den);
        let mut num = nn;
        let mut den = dn;
        for (j, b) in basis.iter().enumerate() {
            let m = ln[j].min(ld[j]);
            num = &num * &b.pow(ld[j] - m);
            den = &den * &b.pow(ln[j] - m);
            while !den.is_zero() {
                match (num.div_exact(b), den.div_exact(b)) {
                    (Some(x), Some(y)) => (num, den) = (x, y),
                    _ => break,
                }
            }
        }
        Self::new(num, den)
    }

    pub fn map_vars<W: Variable>(&self, f: impl Fn(&V) -> W) -> RationalFunction<W> {
        RationalFunction::reduce(self.num.map_vars(&f), self.den.map_vars(&f))
    }
}

/// Simultaneous substitution into a polynomial without reducing: returns
/// an unreduced `(numerator, denominator)` pair over the common denominator
/// `prod b_v^(deg_v p)`.
struct Substitution<'a, V: Variable> {
    map: &'a BTreeMap<V, RationalFunction<V>>,
    nums: BTreeMap<&'a V, MultiPoly<V>>,
    basis: &'a [MultiPoly<V>],
    den_exps: BTreeMap<&'a V, &'a Vec<u32>>,
}

impl<V: Variable> Substitution<'_, V> {
    /// Returns `(q, l)` with `p` after substitution equal to
    /// `q / prod basis[j]^l[j]`.
    fn apply(&self, p: &MultiPoly<V>) -> (MultiPoly<V>, Vec<u32>) {
        // Terms sharing the same powers of substituted variables share one
        // product; the rest of each term is collected into a cofactor.
        let mut groups: BTreeMap<Vec<(V, u32)>, Vec<(Monomial<V>, Rational)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let (subst, kept): (Vec<(V, u32)>, Vec<(V, u32)>) =
                m.powers().iter().cloned().partition(|(v, _)| self.map.contains_key(v));
            groups.entry(subst).or_default().push((Monomial::from_powers(kept), c.clone()));
        }
        let nb = self.basis.len();
        let den_of = |subst: &[(V, u32)]| -> Vec<u32> {
            let mut t = vec![0; nb];
            for (v, e) in subst {
                if let Some(a) = self.den_exps.get(v) {
                    for j in 0..nb {
                        t[j] += a[j] * e;
                    }
                }
            }
            t
        };
        let mut l = vec![0; nb];
        for subst in groups.keys() {
            for (lj, tj) in l.iter_mut().zip(den_of(subst)) {
                *lj = (*lj).max(tj);
            }
        }
        let mut num_pows: BTreeMap<(V, u32), MultiPoly<V>> = BTreeMap::new();
        let mut basis_pows: BTreeMap<(usize, u32), MultiPoly<V>> = BTreeMap::new();
        let mut out = MultiPoly::zero();
        for (subst, rest) in groups {
            let mut t = MultiPoly::from_terms(rest);
            for (v, e) in &subst {
                let pw = num_pows.entry((v.clone(), *e)).or_insert_with(|| self.nums[v].pow(*e));
                t = &t * pw;
            }
            for (j, tj) in den_of(&subst).into_iter().enumerate() {
                let k = l[j] - tj;
                if k > 0 {
                    let pw = basis_pows.entry((j, k)).or_insert_with(|| self.basis[j].pow(k));
                    t = &t * pw;
                }
            }
            out = &out + &t;
        }
        (out, l)
    }
}

impl<V: Variable> From<MultiPoly<V>> for RationalFunction<V> {
    fn from(p: MultiPoly<V>) -> Self {
        Self::from_poly(p)
    }
}

impl<'a, V: Variable> Add<&'a RationalFunction<V>> for &'a RationalFunction<V> {
    type Output = RationalFunction<V>;
    fn add(self, rhs: &'a RationalFunction<V>) -> RationalFunction<V> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.is_polynomial() {
                return RationalFunction::from_poly(&self.num + &rhs.num);
            }
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_polynomial() {
            // a + c/d = (a d + c) / d, already coprime to d
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RationalFunction::reduce_coprime(num, rhs.den.clone());
        }
        if rhs.is_polynomial() {
            let num = &(&rhs.num * &self.den) + &self.num;
            return RationalFunction::reduce_coprime(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RationalFunction::reduce_coprime(num, &self.den * &rhs.den);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        RationalFunction::reduce(num, &(&b1 * &d1) * &g)
    }
}

impl<V: Variable> RationalFunction<V> {
    /// `num / den` for coprime `num`, `den`; only the scaling is normalized.
    pub fn from_coprime(num: MultiPoly<V>, den: MultiPoly<V>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::reduce_coprime(num, den)
    }

    /// Canonicalizes a fraction already known to be reduced.
    fn reduce_coprime(num: MultiPoly<V>, den: MultiPoly<V>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let lc = den.leading_coeff().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
}

impl<'a, V: Variable> Sub<&'a RationalFunction<V>> for &'a RationalFunction<V> {
    type Output = RationalFunction<V>;
    fn sub(self, rhs: &'a RationalFunction<V>) -> RationalFunction<V> {
        self + &(-rhs)
    }
}

impl<'a, V: Variable> Mul<&'a RationalFunction<V>> for &'a RationalFunction<V> {
    type Output = RationalFunction<V>;
    fn mul(self, rhs: &'a RationalFunction<V>) -> RationalFunction<V> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // (a/b)(c/d) with cross cancellation of gcd(a, d) and gcd(c, b)
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = rhs.den.div_exact(&g1).unwrap();
        let c = rhs.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        RationalFunction::reduce_coprime(&a * &c, &b * &d)
    }
}

impl<V: Variable> Neg for &RationalFunction<V> {
    type Output = RationalFunction<V>;
    fn neg(self) -> RationalFunction<V> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<V: Variable> Neg for RationalFunction<V> {
    type Output = RationalFunction<V>;
    fn neg(self) -> RationalFunction<V> {
        -&self
    }
}

forward_owned_binop!(RationalFunction, Add, add);
forward_owned_binop!(RationalFunction, Sub, sub);
forward_owned_binop!(RationalFunction, Mul, mul);

fn needs_parens<V: Variable>(p: &MultiPoly<V>) -> bool {
    p.num_terms() > 1
        || p
            .terms()
            .next()
            .is_some_and(|(m, c)| !m.is_one() && !(c.is_one() || *c == -Rational::one()))
}

impl<V: Variable> fmt::Display for RationalFunction<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den = if needs_parens(&self.den) {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = RationalFunction<&'static str>;

    fn v(s: &'static str) -> R {
        R::var(s)
    }

    fn c(n: i64) -> R {
        R::from_int(n)
    }

    #[test]
    fn cancels_common_factor() {
        let f = (&(&v("x") * &v("x")) - &c(1)).checked_div(&(&v("x") - &c(1))).unwrap();
        assert_eq!(f, &v("x") + &c(1));
        let at3 = f.eval(&|_| Some(Rational::from_integer(3.into()))).unwrap();
        assert_eq!(at3, Rational::from_integer(4.into()));
    }

    #[test]
    fn reciprocal_at_zero_vanishes() {
        let f = c(1).checked_div(&v("x")).unwrap();
        let err = f.eval(&|_| Some(Rational::zero())).unwrap_err();
        assert_eq!(err, AlgebraError::DenominatorVanishes);
    }

    #[test]
    fn partial_of_monomial() {
        let f = &(&v("x") * &v("x")) * &v("y");
        assert_eq!(f.partial(&"x"), &(&c(2) * &v("x")) * &v("y"));
    }

    #[test]
    fn partial_of_reciprocal() {
        let f = c(1).checked_div(&v("x")).unwrap();
        let expected = c(-1).checked_div(&v("x").pow(2)).unwrap();
        assert_eq!(f.partial(&"x"), expected);
        assert_eq!(f.partial(&"x").to_string(), "-1/x^2");
    }

    #[test]
    fn partial_quotient_rule_by_hand() {
        // d/dy [x/(x+y)] = -x/(x+y)^2
        let s = &v("x") + &v("y");
        let f = v("x").checked_div(&s).unwrap();
        let expected = (-v("x")).checked_div(&s.pow(2)).unwrap();
        assert_eq!(f.partial(&"y"), expected);
    }

    #[test]
    fn canonical_forms_agree() {
        let a = v("x").checked_div(&(&c(2) * &v("y"))).unwrap();
        let b = (&v("x") * &R::constant(Rational::new(1.into(), 2.into())))
            .checked_div(&v("y"))
            .unwrap();
        assert_eq!(a, b);
        let sum = &a + &a;
        assert_eq!(sum, v("x").checked_div(&v("y")).unwrap());
    }

    #[test]
    fn substitution_of_fractions() {
        // x^2 + 1 at x = 1/y  ->  (1 + y^2)/y^2
        let f = &v("x").pow(2) + &c(1);
        let map = [("x", c(1).checked_div(&v("y")).unwrap())].into_iter().collect();
        let got = f.substitute(&map).unwrap();
        let expected = (&v("y").pow(2) + &c(1)).checked_div(&v("y").pow(2)).unwrap();
        assert_eq!(got, expected);
    }
}
