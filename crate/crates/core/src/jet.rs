//! Differential terms and quantifier-free formulas, and their rewriting into
//! derivation-free form over jet variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{fmt_rational, MultiPoly, Rational, RationalFunction};
use crate::diffpoly::{free_derive, DiffPoly, DiffRational, DiffVar};
use crate::theta::{self, Theta};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("division by a term that normalizes to zero")]
    ZeroDenominator,
    #[error("quantified formulas are not supported")]
    QuantifierUnsupported,
    #[error("derivation index {index} out of range for p = {p}")]
    DerivationOutOfRange { index: usize, p: usize },
    #[error("jet variable {var} has arity {found}, expected {expected}")]
    ArityMismatch { var: String, expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffTerm {
    Const(Rational),
    Var(String),
    /// An already-differentiated variable such as `x''` or `z[1,0]`.
    Jet(DiffVar),
    Neg(Box<DiffTerm>),
    Add(Box<DiffTerm>, Box<DiffTerm>),
    Sub(Box<DiffTerm>, Box<DiffTerm>),
    Mul(Box<DiffTerm>, Box<DiffTerm>),
    Div(Box<DiffTerm>, Box<DiffTerm>),
    Pow(Box<DiffTerm>, u32),
    /// `d_i` applied to a subterm (0-based index).
    Apply(usize, Box<DiffTerm>),
}

impl DiffTerm {
    pub fn int(n: i64) -> Self {
        DiffTerm::Const(Rational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        DiffTerm::Var(name.to_string())
    }

    pub fn d(i: usize, t: DiffTerm) -> Self {
        DiffTerm::Apply(i, Box::new(t))
    }

    pub fn add(a: DiffTerm, b: DiffTerm) -> Self {
        DiffTerm::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: DiffTerm, b: DiffTerm) -> Self {
        DiffTerm::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: DiffTerm, b: DiffTerm) -> Self {
        DiffTerm::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: DiffTerm, b: DiffTerm) -> Self {
        DiffTerm::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: DiffTerm, e: u32) -> Self {
        DiffTerm::Pow(Box::new(a), e)
    }

    /// Smallest number of derivations the term needs.
    pub fn min_arity(&self) -> usize {
        use DiffTerm::*;
        match self {
            Const(_) | Var(_) => 0,
            Jet(v) => v.theta.p(),
            Neg(a) | Pow(a, _) => a.min_arity(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.min_arity().max(b.min_arity()),
            Apply(i, a) => (i + 1).max(a.min_arity()),
        }
    }

    /// Base variable names, sorted.
    pub fn base_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        use DiffTerm::*;
        match self {
            Const(_) => {}
            Var(n) => {
                out.insert(n.clone());
            }
            Jet(v) => {
                out.insert(v.name.clone());
            }
            Neg(a) | Pow(a, _) | Apply(_, a) => a.collect_names(out),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        use DiffTerm::*;
        match self {
            Const(_) | Var(_) | Jet(_) => 0,
            Neg(a) | Pow(a, _) | Apply(_, a) => 1 + a.depth(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn prec(&self) -> u8 {
        use DiffTerm::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            Const(c) if c.is_negative() => 3,
            Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        use DiffTerm::*;
        match self {
            Const(c) => write!(f, "{}", fmt_rational(c)),
            Var(n) => write!(f, "{n}"),
            Jet(v) => write!(f, "{v}"),
            Neg(a) => {
                write!(f, "-")?;
                a.write_prec(f, 3)
            }
            Add(a, b) | Sub(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, "{}", if matches!(self, Add(..)) { " + " } else { " - " })?;
                b.write_prec(f, 2)
            }
            Mul(a, b) | Div(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "{}", if matches!(self, Mul(..)) { "*" } else { "/" })?;
                b.write_prec(f, 3)
            }
            Pow(a, e) => {
                // A fraction literal would swallow the exponent's base otherwise.
                let needs_parens = matches!(&**a, Const(c) if !c.is_integer());
                if needs_parens {
                    write!(f, "(")?;
                    a.write_prec(f, 0)?;
                    write!(f, ")")?;
                } else {
                    a.write_prec(f, 5)?;
                }
                write!(f, "^{e}")
            }
            Apply(i, a) => {
                if *i == 0 {
                    write!(f, "d(")?;
                } else {
                    write!(f, "d{}(", i + 1)?;
                }
                a.write_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for DiffTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    /// The comparison obtained after multiplying both sides by a negative.
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Lt => Cmp::Gt,
            Cmp::Le => Cmp::Ge,
            Cmp::Gt => Cmp::Lt,
            Cmp::Ge => Cmp::Le,
            c => c,
        }
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Cmp::Eq => ord == Equal,
            Cmp::Ne => ord != Equal,
            Cmp::Lt => ord == Less,
            Cmp::Le => ord != Greater,
            Cmp::Gt => ord == Greater,
            Cmp::Ge => ord != Less,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffFormula {
    Bool(bool),
    Atom { lhs: DiffTerm, cmp: Cmp, rhs: DiffTerm },
    Not(Box<DiffFormula>),
    And(Vec<DiffFormula>),
    Or(Vec<DiffFormula>),
    Quant { q: Quantifier, var: String, body: Box<DiffFormula> },
}

impl DiffFormula {
    pub fn atom(lhs: DiffTerm, cmp: Cmp, rhs: DiffTerm) -> Self {
        DiffFormula::Atom { lhs, cmp, rhs }
    }

    pub fn min_arity(&self) -> usize {
        match self {
            DiffFormula::Bool(_) => 0,
            DiffFormula::Atom { lhs, rhs, .. } => lhs.min_arity().max(rhs.min_arity()),
            DiffFormula::Not(a) => a.min_arity(),
            DiffFormula::And(xs) | DiffFormula::Or(xs) => xs.iter().map(Self::min_arity).max().unwrap_or(0),
            DiffFormula::Quant { body, .. } => body.min_arity(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            DiffFormula::Quant { .. } => 0,
            DiffFormula::Or(_) => 1,
            DiffFormula::And(_) => 2,
            _ => 3,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            DiffFormula::Bool(b) => write!(f, "{b}"),
            DiffFormula::Atom { lhs, cmp, rhs } => write!(f, "{lhs} {} {rhs}", cmp.symbol()),
            DiffFormula::Not(a) => {
                write!(f, "!(")?;
                a.write_prec(f, 0)?;
                write!(f, ")")
            }
            DiffFormula::And(xs) | DiffFormula::Or(xs) => {
                let (sep, inner) = if matches!(self, DiffFormula::And(_)) { (" & ", 3) } else { (" | ", 2) };
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{sep}")?;
                    }
                    x.write_prec(f, inner)?;
                }
                Ok(())
            }
            DiffFormula::Quant { q, var, body } => {
                let kw = match q {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                };
                write!(f, "{kw} {var}. ")?;
                body.write_prec(f, 0)
            }
        }
    }
}

impl fmt::Display for DiffFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

/// A derivation-free term over jet variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetTerm {
    pub value: DiffRational,
    pub support: BTreeSet<Theta>,
}

impl JetTerm {
    fn from_value(value: DiffRational) -> Self {
        let support = value.variables().into_iter().map(|v| v.theta).collect();
        JetTerm { value, support }
    }

    /// Highest jet order per base variable.
    pub fn depth(&self) -> BTreeMap<String, u32> {
        depth_of(self.value.variables())
    }

    pub fn max_depth(&self) -> u32 {
        self.depth().values().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for JetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn depth_of(vars: impl IntoIterator<Item = DiffVar>) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for v in vars {
        let e = out.entry(v.name).or_insert(0);
        *e = (*e).max(v.theta.ord());
    }
    out
}

/// Eliminates every derivation application in `t`, working with `p`
/// commuting derivations.
pub fn rewrite_term(t: &DiffTerm, p: usize) -> Result<JetTerm, JetError> {
    rewrite_value(t, p).map(JetTerm::from_value)
}

fn rewrite_value(t: &DiffTerm, p: usize) -> Result<DiffRational, JetError> {
    use DiffTerm::*;
    Ok(match t {
        Const(c) => RationalFunction::constant(c.clone()),
        Var(n) => RationalFunction::var(DiffVar::base(n.clone(), p)),
        Jet(v) => {
            if v.theta.p() != p {
                return Err(JetError::ArityMismatch { var: v.to_string(), expected: p, found: v.theta.p() });
            }
            RationalFunction::var(v.clone())
        }
        Neg(a) => -rewrite_value(a, p)?,
        Add(a, b) => &rewrite_value(a, p)? + &rewrite_value(b, p)?,
        Sub(a, b) => &rewrite_value(a, p)? - &rewrite_value(b, p)?,
        Mul(a, b) => &rewrite_value(a, p)? * &rewrite_value(b, p)?,
        Div(a, b) => {
            let d = rewrite_value(b, p)?;
            rewrite_value(a, p)?.checked_div(&d).map_err(|_| JetError::ZeroDenominator)?
        }
        Pow(a, e) => rewrite_value(a, p)?.pow(*e),
        Apply(i, a) => {
            if *i >= p {
                return Err(JetError::DerivationOutOfRange { index: *i, p });
            }
            free_derive(&rewrite_value(a, p)?, *i)
        }
    })
}

/// A polynomial sign condition `poly ⋈ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetAtom {
    pub poly: DiffPoly,
    pub cmp: Cmp,
}

impl fmt::Display for JetAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.poly.constant_term();
        let rest = &self.poly - &MultiPoly::constant(c.clone());
        write!(f, "{} {} {}", rest, self.cmp.symbol(), fmt_rational(&-c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JetFormula {
    Bool(bool),
    Atom(JetAtom),
    Not(Box<JetFormula>),
    And(Vec<JetFormula>),
    Or(Vec<JetFormula>),
}

impl JetFormula {
    fn atom(mut poly: DiffPoly, cmp: Cmp) -> Self {
        if matches!(cmp, Cmp::Eq | Cmp::Ne) && poly.leading_coeff().is_negative() {
            poly = -poly;
        }
        match poly.constant_value() {
            Some(c) => JetFormula::Bool(cmp.holds(c.cmp(&Rational::zero()))),
            None => JetFormula::Atom(JetAtom { poly, cmp }),
        }
    }

    fn and(xs: Vec<JetFormula>) -> Self {
        let mut out = Vec::new();
        for x in xs {
            match x {
                JetFormula::Bool(true) => {}
                JetFormula::Bool(false) => return JetFormula::Bool(false),
                JetFormula::And(inner) => out.extend(inner),
                x => out.push(x),
            }
        }
        match out.len() {
            0 => JetFormula::Bool(true),
            1 => out.pop().unwrap(),
            _ => JetFormula::And(out),
        }
    }

    fn or(xs: Vec<JetFormula>) -> Self {
        let mut out = Vec::new();
        for x in xs {
            match x {
                JetFormula::Bool(false) => {}
                JetFormula::Bool(true) => return JetFormula::Bool(true),
                JetFormula::Or(inner) => out.extend(inner),
                x => out.push(x),
            }
        }
        match out.len() {
            0 => JetFormula::Bool(false),
            1 => out.pop().unwrap(),
            _ => JetFormula::Or(out),
        }
    }

    fn not(x: JetFormula) -> Self {
        match x {
            JetFormula::Bool(b) => JetFormula::Bool(!b),
            x => JetFormula::Not(Box::new(x)),
        }
    }

    pub fn atoms(&self) -> Vec<&JetAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a JetAtom>) {
        match self {
            JetFormula::Bool(_) => {}
            JetFormula::Atom(a) => out.push(a),
            JetFormula::Not(x) => x.collect_atoms(out),
            JetFormula::And(xs) | JetFormula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
        }
    }

    /// Highest jet order per base variable over all atoms.
    pub fn depth(&self) -> BTreeMap<String, u32> {
        depth_of(self.atoms().into_iter().flat_map(|a| a.poly.variables()))
    }

    /// Truth value at an exact point assigning every jet variable.
    pub fn eval(&self, point: &impl Fn(&DiffVar) -> Option<Rational>) -> Option<bool> {
        Some(match self {
            JetFormula::Bool(b) => *b,
            JetFormula::Atom(a) => a.cmp.holds(a.poly.eval(point)?.cmp(&Rational::zero())),
            JetFormula::Not(x) => !x.eval(point)?,
            JetFormula::And(xs) => {
                let mut all = true;
                for x in xs {
                    all &= x.eval(point)?;
                }
                all
            }
            JetFormula::Or(xs) => {
                let mut any = false;
                for x in xs {
                    any |= x.eval(point)?;
                }
                any
            }
        })
    }

    fn prec(&self) -> u8 {
        match self {
            JetFormula::Or(_) => 1,
            JetFormula::And(_) => 2,
            _ => 3,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            JetFormula::Bool(b) => write!(f, "{b}"),
            JetFormula::Atom(a) => write!(f, "{a}"),
            JetFormula::Not(x) => {
                write!(f, "!(")?;
                x.write_prec(f, 0)?;
                write!(f, ")")
            }
            JetFormula::And(xs) | JetFormula::Or(xs) => {
                let (sep, inner) = if matches!(self, JetFormula::And(_)) { (" & ", 3) } else { (" | ", 2) };
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{sep}")?;
                    }
                    x.write_prec(f, inner)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for JetFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewrittenFormula {
    pub formula: JetFormula,
    pub depth: BTreeMap<String, u32>,
}

impl RewrittenFormula {
    pub fn max_depth(&self) -> u32 {
        self.depth.values().copied().max().unwrap_or(0)
    }
}

/// Rewrites every atom into polynomial sign conditions over jet variables.
/// Denominators are cleared by splitting on their sign.
pub fn rewrite_formula(phi: &DiffFormula, p: usize) -> Result<RewrittenFormula, JetError> {
    let formula = rewrite_formula_inner(phi, p)?;
    let depth = formula.depth();
    Ok(RewrittenFormula { formula, depth })
}

fn rewrite_formula_inner(phi: &DiffFormula, p: usize) -> Result<JetFormula, JetError> {
    Ok(match phi {
        DiffFormula::Bool(b) => JetFormula::Bool(*b),
        DiffFormula::Atom { lhs, cmp, rhs } => {
            let v = &rewrite_value(lhs, p)? - &rewrite_value(rhs, p)?;
            clear_atom(v, *cmp)
        }
        DiffFormula::Not(a) => JetFormula::not(rewrite_formula_inner(a, p)?),
        DiffFormula::And(xs) => {
            JetFormula::and(xs.iter().map(|x| rewrite_formula_inner(x, p)).collect::<Result<_, _>>()?)
        }
        DiffFormula::Or(xs) => JetFormula::or(xs.iter().map(|x| rewrite_formula_inner(x, p)).collect::<Result<_, _>>()?),
        DiffFormula::Quant { .. } => return Err(JetError::QuantifierUnsupported),
    })
}

fn clear_atom(v: DiffRational, cmp: Cmp) -> JetFormula {
    let (num, den) = (v.num().clone(), v.den().clone());
    if den.is_constant() {
        return JetFormula::atom(num, cmp);
    }
    let den_nonzero = JetFormula::atom(den.clone(), Cmp::Ne);
    match cmp {
        Cmp::Eq | Cmp::Ne => JetFormula::and(vec![JetFormula::atom(num, cmp), den_nonzero]),
        _ => JetFormula::or(vec![
            JetFormula::and(vec![JetFormula::atom(den.clone(), Cmp::Gt), JetFormula::atom(num.clone(), cmp)]),
            JetFormula::and(vec![JetFormula::atom(den, Cmp::Lt), JetFormula::atom(num, cmp.flip())]),
        ]),
    }
}

/// The jet tuple of `name` up to order `n`, in increasing theta order.
pub fn jet_expand(name: &str, p: usize, n: u32) -> Vec<DiffVar> {
    theta::enumerate(p, n).into_iter().map(|t| DiffVar::new(name, t)).collect()
}
