//! Concrete differential fields used as evaluation oracles: truncated power
//! series in `t_1..t_p` with `d/dt_i`, and rational germs at `+inf` with `d/ds`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Signed;

use crate::algebra::{AlgebraError, MultiPoly, Rational, RationalFunction, TruncatedSeries, Variable};
use crate::diffpoly::{DiffRational, DiffVar};
use crate::jet::{DiffFormula, DiffTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("no value assigned to {0}")]
    UnassignedVariable(String),
    #[error("division by a series with zero constant term")]
    DivisionByNonUnit,
    #[error("division by the zero germ")]
    DivisionByZero,
    #[error("the germ model has a single derivation; found d{0}")]
    HigherDerivationInGermModel(usize),
    #[error("derivation index {index} out of range for p = {p}")]
    DerivationOutOfRange { index: usize, p: usize },
    #[error("series for {name} has {found} variables, expected {expected}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("quantified formulas are not supported")]
    QuantifierUnsupported,
}

impl From<AlgebraError> for ModelError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::UnassignedVariable(v) => ModelError::UnassignedVariable(v),
            AlgebraError::ZeroDenominator => ModelError::DivisionByZero,
            AlgebraError::DenominatorVanishes | AlgebraError::DivisionByNonUnit => ModelError::DivisionByNonUnit,
        }
    }
}

/// An assignment of truncated series to base variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoint {
    p: usize,
    order: i32,
    values: BTreeMap<String, TruncatedSeries>,
}

impl SeriesPoint {
    pub fn new(p: usize, order: i32) -> Self {
        SeriesPoint { p, order, values: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, s: TruncatedSeries) -> Result<Self, ModelError> {
        self.insert(name, s)?;
        Ok(self)
    }

    pub fn insert(&mut self, name: &str, s: TruncatedSeries) -> Result<(), ModelError> {
        if s.nvars() != self.p {
            return Err(ModelError::ArityMismatch { name: name.into(), expected: self.p, found: s.nvars() });
        }
        self.values.insert(name.to_string(), s);
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn get(&self, name: &str) -> Result<&TruncatedSeries, ModelError> {
        self.values.get(name).ok_or_else(|| ModelError::UnassignedVariable(name.to_string()))
    }

    /// Value of the jet variable `name^theta`: the theta-partial of the series.
    pub fn jet(&self, v: &DiffVar) -> Result<TruncatedSeries, ModelError> {
        if v.theta.p() != self.p {
            return Err(ModelError::ArityMismatch { name: v.to_string(), expected: self.p, found: v.theta.p() });
        }
        Ok(self.get(&v.name)?.derivative_multi(v.theta.exps()))
    }
}

/// Evaluates a differential term, reading `d_i` as `d/dt_i`.
pub fn eval_diff_term(t: &DiffTerm, pt: &SeriesPoint) -> Result<TruncatedSeries, ModelError> {
    use DiffTerm::*;
    Ok(match t {
        Const(c) => TruncatedSeries::constant(pt.p, pt.order, c.clone()),
        Var(n) => pt.get(n)?.clone(),
        Jet(v) => pt.jet(v)?,
        Neg(a) => eval_diff_term(a, pt)?.neg(),
        Add(a, b) => eval_diff_term(a, pt)?.add(&eval_diff_term(b, pt)?),
        Sub(a, b) => eval_diff_term(a, pt)?.sub(&eval_diff_term(b, pt)?),
        Mul(a, b) => eval_diff_term(a, pt)?.mul(&eval_diff_term(b, pt)?),
        Div(a, b) => eval_diff_term(a, pt)?.div(&eval_diff_term(b, pt)?)?,
        Pow(a, e) => eval_diff_term(a, pt)?.pow(*e),
        Apply(i, a) => {
            if *i >= pt.p {
                return Err(ModelError::DerivationOutOfRange { index: *i, p: pt.p });
            }
            eval_diff_term(a, pt)?.derivative(*i)
        }
    })
}

/// Evaluates a jet-variable rational function with `y^theta` read as the
/// theta-partial of the series assigned to `y`.
pub fn eval_jet_function(f: &DiffRational, pt: &SeriesPoint) -> Result<TruncatedSeries, ModelError> {
    let mut jets = BTreeMap::new();
    for v in f.variables() {
        let s = pt.jet(&v)?;
        jets.insert(v, s);
    }
    Ok(f.eval_series(pt.p, pt.order, &|v| jets.get(v).cloned())?)
}

/// Checks `d_i f(u) = sum_k df/dy_k(u) * d_i u_k` at a series point.
pub fn check_compatibility<V: Variable>(
    f: &RationalFunction<V>,
    point: &BTreeMap<V, TruncatedSeries>,
    nvars: usize,
    order: i32,
    i: usize,
) -> Result<bool, ModelError> {
    let assign = |v: &V| point.get(v).cloned();
    let lhs = f.eval_series(nvars, order, &assign)?.derivative(i);
    let mut rhs = TruncatedSeries::zero(nvars, order);
    for v in f.variables() {
        let partial = f.partial(&v).eval_series(nvars, order, &assign)?;
        rhs = rhs.add(&partial.mul(&point[&v].derivative(i)));
    }
    Ok(lhs.eq_mod_truncation(&rhs))
}

/// The germ variable.
pub const GERM_VAR: &str = "s";

pub type Germ = RationalFunction<String>;

/// An assignment of rational functions in `s` to base variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GermPoint {
    values: BTreeMap<String, Germ>,
}

impl GermPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, g: Germ) -> Self {
        self.values.insert(name.to_string(), g);
        self
    }

    pub fn get(&self, name: &str) -> Result<&Germ, ModelError> {
        self.values.get(name).ok_or_else(|| ModelError::UnassignedVariable(name.to_string()))
    }
}

fn leading_in_s(p: &MultiPoly<String>) -> Rational {
    p.leading_coeff()
}

/// Eventual sign of `g(s)` as `s -> +inf`.
pub fn germ_sign(g: &Germ) -> Ordering {
    if g.is_zero() {
        return Ordering::Equal;
    }
    let lc = leading_in_s(g.num()) * leading_in_s(g.den());
    if lc.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn germ_derivative(g: &Germ) -> Germ {
    g.partial(&GERM_VAR.to_string())
}

/// Evaluates a term in the germ model with `d` read as `d/ds`.
pub fn eval_germ_term(t: &DiffTerm, pt: &GermPoint) -> Result<Germ, ModelError> {
    use DiffTerm::*;
    Ok(match t {
        Const(c) => Germ::constant(c.clone()),
        Var(n) => pt.get(n)?.clone(),
        Jet(v) => {
            let [k] = v.theta.exps() else {
                return Err(ModelError::HigherDerivationInGermModel(v.theta.p()));
            };
            let mut g = pt.get(&v.name)?.clone();
            for _ in 0..*k {
                g = germ_derivative(&g);
            }
            g
        }
        Neg(a) => -eval_germ_term(a, pt)?,
        Add(a, b) => &eval_germ_term(a, pt)? + &eval_germ_term(b, pt)?,
        Sub(a, b) => &eval_germ_term(a, pt)? - &eval_germ_term(b, pt)?,
        Mul(a, b) => &eval_germ_term(a, pt)? * &eval_germ_term(b, pt)?,
        Div(a, b) => eval_germ_term(a, pt)?
            .checked_div(&eval_germ_term(b, pt)?)
            .map_err(|_| ModelError::DivisionByZero)?,
        Pow(a, e) => eval_germ_term(a, pt)?.pow(*e),
        Apply(i, a) => {
            if *i > 0 {
                return Err(ModelError::HigherDerivationInGermModel(i + 1));
            }
            germ_derivative(&eval_germ_term(a, pt)?)
        }
    })
}

/// Truth value of a quantifier-free formula at a germ point.
pub fn eval_formula(phi: &DiffFormula, pt: &GermPoint) -> Result<bool, ModelError> {
    Ok(match phi {
        DiffFormula::Bool(b) => *b,
        DiffFormula::Atom { lhs, cmp, rhs } => {
            let g = &eval_germ_term(lhs, pt)? - &eval_germ_term(rhs, pt)?;
            cmp.holds(germ_sign(&g))
        }
        DiffFormula::Not(a) => !eval_formula(a, pt)?,
        DiffFormula::And(xs) => {
            let mut all = true;
            for x in xs {
                all &= eval_formula(x, pt)?;
            }
            all
        }
        DiffFormula::Or(xs) => {
            let mut any = false;
            for x in xs {
                any |= eval_formula(x, pt)?;
            }
            any
        }
        DiffFormula::Quant { .. } => return Err(ModelError::QuantifierUnsupported),
    })
}
