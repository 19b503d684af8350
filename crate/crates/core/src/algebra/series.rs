//! Multivariate formal power series truncated by total degree.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{fmt_rational, MultiPoly, Variable};
use super::{AlgebraError, Rational};

/// A power series in `t_1..t_p` known up to total degree `order`.
///
/// `order < 0` means no coefficient is known (the result of differentiating
/// an order-0 series). Arithmetic results carry the smaller operand order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    order: i32,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

fn deg(e: &[u32]) -> i32 {
    e.iter().sum::<u32>() as i32
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, order: i32) -> Self {
        TruncatedSeries {
            nvars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: i32, c: Rational) -> Self {
        let mut s = Self::zero(nvars, order);
        s.set_coeff(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, order: i32) -> Self {
        Self::constant(nvars, order, Rational::one())
    }

    /// The coordinate series `t_i` (zero-based `i`).
    pub fn var(nvars: usize, order: i32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut s = Self::zero(nvars, order);
        s.set_coeff(e, Rational::one());
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs, dropping terms
    /// above the truncation order.
    pub fn from_terms(
        nvars: usize,
        order: i32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut s = Self::zero(nvars, order);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector of wrong length");
            let cur = s.coeff(&e);
            s.set_coeff(e, cur + c);
        }
        s
    }

    /// Univariate series from a dense coefficient list `c0, c1, ...`.
    pub fn univariate(order: i32, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        Self::from_terms(
            1,
            order,
            coeffs.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_coeff(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn set_coeff(&mut self, e: Vec<u32>, c: Rational) {
        if deg(&e) > self.order || c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            nvars: self.nvars,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| deg(e) <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "series over different variable counts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.truncate(self.order.min(other.order));
        for (e, c) in &other.coeffs {
            if deg(e) <= out.order {
                let cur = out.coeff(e);
                out.set_coeff(e.clone(), cur + c);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        if !c.is_zero() {
            for (e, a) in &self.coeffs {
                out.coeffs.insert(e.clone(), a * c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            let da = deg(ea);
            if da > order {
                continue;
            }
            for (eb, cb) in &other.coeffs {
                if da + deg(eb) > order {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries {
            nvars: self.nvars,
            order,
            coeffs: acc,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let c0 = self.constant_coeff();
        if c0.is_zero() {
            return Err(AlgebraError::DivisionByNonUnit);
        }
        let inv0 = c0.recip();
        // 1/b = (1/c0) * sum_k (-u)^k with u = b/c0 - 1
        let mut minus_u = self.scale(&-inv0.clone());
        minus_u.set_coeff(vec![0; self.nvars], Rational::zero());
        let mut acc = Self::one(self.nvars, self.order);
        let mut term = acc.clone();
        for _ in 0..self.order.max(0) {
            term = term.mul(&minus_u);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc.scale(&inv0))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Formal partial derivative in `t_i`; one order of precision is lost.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order - 1);
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.set_coeff(f, c * Rational::from_integer(e[i].into()));
        }
        out
    }

    /// Applies the derivative operator with exponent vector `theta`.
    pub fn derivative_multi(&self, theta: &[u32]) -> Self {
        let mut s = self.clone();
        for (i, k) in theta.iter().enumerate() {
            for _ in 0..*k {
                s = s.derivative(i);
            }
        }
        s
    }

    /// Equality of all coefficients up to the smaller valid order.
    pub fn eq_mod_truncation(&self, other: &Self) -> bool {
        self.nvars == other.nvars && {
            let o = self.order.min(other.order);
            self.truncate(o).coeffs == other.truncate(o).coeffs
        }
    }

    /// Evaluates a polynomial at series arguments. Constants are embedded at
    /// the given `(nvars, order)`; the result order is the minimum over the
    /// arguments actually used.
    pub fn eval_poly<V: Variable>(
        p: &MultiPoly<V>,
        nvars: usize,
        order: i32,
        assign: &impl Fn(&V) -> Option<TruncatedSeries>,
    ) -> Result<TruncatedSeries, AlgebraError> {
        let mut args: BTreeMap<V, TruncatedSeries> = BTreeMap::new();
        let mut order = order;
        for v in p.variables() {
            let s = assign(&v).ok_or_else(|| AlgebraError::UnassignedVariable(v.to_string()))?;
            assert_eq!(s.nvars, nvars, "series argument over wrong variable count");
            order = order.min(s.order);
            args.insert(v, s);
        }
        let mut powers: BTreeMap<(V, u32), TruncatedSeries> = BTreeMap::new();
        let mut acc = Self::zero(nvars, order);
        for (m, c) in p.terms() {
            let mut t = Self::constant(nvars, order, c.clone());
            for (v, e) in m.powers() {
                let pw = powers
                    .entry((v.clone(), *e))
                    .or_insert_with(|| args[v].truncate(order).pow(*e));
                t = t.mul(pw);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |i: usize| {
            if self.nvars == 1 {
                "t".to_string()
            } else {
                format!("t{}", i + 1)
            }
        };
        let mut terms: Vec<(&Vec<u32>, &Rational)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| deg(a.0).cmp(&deg(b.0)).then_with(|| b.0.cmp(a.0)));
        let mut first = true;
        for (e, c) in terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { var(i) } else { format!("{}^{k}", var(i)) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        let tail = if self.nvars == 1 {
            format!("t^{}", self.order + 1)
        } else {
            format!("|t|^{}", self.order + 1)
        };
        write!(f, " + O({tail})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn uni(order: i32, cs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::univariate(order, cs.iter().map(|c| q(*c)))
    }

    #[test]
    fn product_of_conjugates() {
        let a = uni(5, &[1, 1]);
        let b = uni(5, &[1, -1]);
        assert_eq!(a.mul(&b), uni(5, &[1, 0, -1]));
    }

    #[test]
    fn geometric_series() {
        let one = TruncatedSeries::one(1, 3);
        let d = uni(3, &[1, -1]);
        assert_eq!(one.div(&d).unwrap(), uni(3, &[1, 1, 1, 1]));
    }

    #[test]
    fn self_division_is_one() {
        let a = uni(6, &[1, 1]);
        assert_eq!(a.div(&a).unwrap(), TruncatedSeries::one(1, 6));
    }

    #[test]
    fn division_by_non_unit() {
        let a = uni(4, &[1]);
        let t = uni(4, &[0, 1]);
        assert_eq!(a.div(&t), Err(AlgebraError::DivisionByNonUnit));
    }

    #[test]
    fn derivative_loses_one_order() {
        let a = uni(4, &[1, 2, 3, 4, 5]);
        let d = a.derivative(0);
        assert_eq!(d.order(), 3);
        assert_eq!(d, uni(3, &[2, 6, 12, 20]));
    }

    #[test]
    fn multivariate_product_truncates_total_degree() {
        let t1 = TruncatedSeries::var(2, 2, 0);
        let t2 = TruncatedSeries::var(2, 2, 1);
        let s = t1.add(&t2).pow(3);
        assert!(s.is_zero());
        let s = t1.add(&t2).pow(2);
        assert_eq!(s.coeff(&[1, 1]), q(2));
    }

    #[test]
    fn polynomial_at_series() {
        // x*y at x = t, y = 1 + t
        let p = MultiPoly::var("x") * MultiPoly::var("y");
        let x = uni(4, &[0, 1]);
        let y = uni(4, &[1, 1]);
        let got = TruncatedSeries::eval_poly(&p, 1, 4, &|v| Some(if *v == "x" { x.clone() } else { y.clone() }))
            .unwrap();
        assert_eq!(got, uni(4, &[0, 1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(uni(3, &[1, -1, 0, 2]).to_string(), "1 - t + 2*t^3 + O(t^4)");
    }
}
