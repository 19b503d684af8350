//! Conditions `(P, U, (f_beta))` for several commuting derivations, the
//! recursion producing `Omega_theta` and `g_theta`, coherence checks, and a
//! truncated power-series solver for coherent conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{fmt_rational, Rational, RationalFunction, TruncatedSeries};
use crate::diffpoly::{free_derive, DiffPoly, DiffRational, DiffVar};
use crate::jet::rewrite_term;
use crate::parse::{offset_in, parse_rational, parse_term, ParseError};
use crate::theta::{self, Antichain, Theta, ThetaError, ThetaPartition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoherenceError {
    #[error("P is not an antichain: {0} divides {1}")]
    NotAntichain(Theta, Theta),
    #[error("P contains the identity")]
    IdentityInP,
    #[error("f_{0} depends on z^{1}, but {1} is not below {0}")]
    DependenceViolation(Theta, Theta),
    #[error("variable z^{0} lies in B")]
    VariableInB(Theta),
    #[error("variable {0} does not belong to the condition")]
    ForeignVariable(String),
    #[error("witness fails: {0}")]
    WitnessFails(String),
    #[error("condition is not coherent: {0}")]
    NotCoherent(Conflict),
    #[error("a denominator vanishes at the initial data (at {0})")]
    SingularInitialData(Theta),
    #[error("arity mismatch: {0}")]
    Arity(String),
}

impl From<ThetaError> for CoherenceError {
    fn from(e: ThetaError) -> Self {
        match e {
            ThetaError::NotAntichain(a, b) => CoherenceError::NotAntichain(a, b),
            ThetaError::IdentityInGenerators => CoherenceError::IdentityInP,
            other => CoherenceError::Arity(other.to_string()),
        }
    }
}

/// A condition on a single unknown `name`, with `z^theta` rendered as the
/// differential variable `name^theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub p: usize,
    pub name: String,
    /// `beta -> f_beta`.
    pub f: BTreeMap<Theta, DiffRational>,
    /// Polynomials required to be strictly positive.
    pub ineqs: Vec<DiffPoly>,
    pub witness: BTreeMap<Theta, Rational>,
    pub init: BTreeMap<Theta, Rational>,
}

impl Condition {
    pub fn new(p: usize, name: &str) -> Self {
        Condition {
            p,
            name: name.to_string(),
            f: BTreeMap::new(),
            ineqs: Vec::new(),
            witness: BTreeMap::new(),
            init: BTreeMap::new(),
        }
    }

    pub fn with_beta(mut self, beta: Theta, f: DiffRational) -> Self {
        self.f.insert(beta, f);
        self
    }

    pub fn var(&self, theta: Theta) -> DiffVar {
        DiffVar::new(self.name.clone(), theta)
    }

    pub fn z(&self, theta: &[u32]) -> DiffRational {
        RationalFunction::var(self.var(Theta::new(theta.to_vec())))
    }

    pub fn antichain(&self) -> Result<Antichain, CoherenceError> {
        Ok(Antichain::new(self.p, self.f.keys().cloned().collect())?)
    }

    pub fn partition(&self) -> Result<ThetaPartition, CoherenceError> {
        Ok(ThetaPartition::new(self.antichain()?))
    }

    fn thetas_of(&self, vars: BTreeSet<DiffVar>) -> Result<Vec<Theta>, CoherenceError> {
        vars.into_iter()
            .map(|v| {
                if v.name != self.name {
                    Err(CoherenceError::ForeignVariable(v.to_string()))
                } else if v.theta.p() != self.p {
                    Err(CoherenceError::Arity(format!("{v} has {} indices, expected {}", v.theta.p(), self.p)))
                } else {
                    Ok(v.theta)
                }
            })
            .collect()
    }

    /// Checks the antichain property, the dependence constraint, membership
    /// of every used variable in `I`, and the witness when one is given.
    pub fn validate(&self) -> Result<(), CoherenceError> {
        let part = self.partition()?;
        for (beta, f) in &self.f {
            for t in self.thetas_of(f.variables())? {
                if t >= *beta {
                    return Err(CoherenceError::DependenceViolation(beta.clone(), t));
                }
                if part.in_b(&t) {
                    return Err(CoherenceError::VariableInB(t));
                }
            }
        }
        for q in &self.ineqs {
            for t in self.thetas_of(q.variables())? {
                if part.in_b(&t) {
                    return Err(CoherenceError::VariableInB(t));
                }
            }
        }
        for t in self.witness.keys().chain(self.init.keys()) {
            if t.p() != self.p {
                return Err(CoherenceError::Arity(format!("{t} has {} indices, expected {}", t.p(), self.p)));
            }
        }
        if !self.witness.is_empty() {
            self.check_witness()?;
        }
        Ok(())
    }

    fn check_witness(&self) -> Result<(), CoherenceError> {
        let value = |v: &DiffVar| Some(self.witness.get(&v.theta).cloned().unwrap_or_else(Rational::zero));
        for q in &self.ineqs {
            let x = q.eval(&value).expect("every variable has a value");
            if !x.is_positive() {
                return Err(CoherenceError::WitnessFails(format!("{q} > 0 evaluates to {}", fmt_rational(&x))));
            }
        }
        for (beta, f) in &self.f {
            if f.den().eval(&value).expect("every variable has a value").is_zero() {
                return Err(CoherenceError::WitnessFails(format!("denominator of f_{beta} vanishes")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}", self.p)?;
        for (beta, g) in &self.f {
            writeln!(f, "beta {beta} := {g}")?;
        }
        for q in &self.ineqs {
            writeln!(f, "ineq {q} > 0")?;
        }
        for (t, r) in &self.witness {
            writeln!(f, "witness {} = {}", self.var(t.clone()), fmt_rational(r))?;
        }
        for (t, r) in &self.init {
            writeln!(f, "init {} = {}", self.var(t.clone()), fmt_rational(r))?;
        }
        Ok(())
    }
}

/// Parses the line-oriented condition format:
///
/// ```text
/// p = 2
/// beta [1,0] := z
/// ineq z > 0
/// witness z[0,0] = 1
/// init z[0,0] = 1
/// ```
pub fn parse_condition(src: &str) -> Result<Condition, ParseError> {
    let mut p: Option<usize> = None;
    let mut betas: Vec<(Theta, &str)> = Vec::new();
    let mut ineqs: Vec<&str> = Vec::new();
    let mut assigns: Vec<(bool, &str, &str)> = Vec::new();
    for raw in src.split('\n') {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |sub: &str, msg: String| {
            let off = offset_in(src, sub);
            ParseError::at(src, (off, off + sub.len().max(1)), msg)
        };
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "p" => match rest.strip_prefix('=').map(str::trim).and_then(|v| v.parse::<usize>().ok()) {
                Some(v) if v > 0 => p = Some(v),
                _ => return Err(err(line, "expected `p = <positive integer>`".into())),
            },
            "beta" => {
                let Some((th, body)) = rest.split_once(":=") else {
                    return Err(err(line, "expected `beta [e1,...] := <term>`".into()));
                };
                let th = th.trim();
                let theta = crate::parse::parse_theta(th).map_err(|e| e.within(src, th))?;
                betas.push((theta, body.trim()));
            }
            "ineq" => {
                let body = rest.strip_suffix('0').map(str::trim_end).and_then(|b| b.strip_suffix('>'));
                match body {
                    Some(b) => ineqs.push(b.trim()),
                    None => return Err(err(line, "expected `ineq <term> > 0`".into())),
                }
            }
            "witness" | "init" => {
                let Some((lhs, rhs)) = rest.split_once('=') else {
                    return Err(err(line, format!("expected `{kw} z[...] = <rational>`")));
                };
                assigns.push((kw == "witness", lhs.trim(), rhs.trim()));
            }
            other => return Err(err(other, format!("unknown directive `{other}`"))),
        }
    }
    let p = p.ok_or_else(|| ParseError::at(src, (0, 0), "missing `p = <n>` line"))?;
    let at = |sub: &str, msg: String| {
        let off = offset_in(src, sub);
        ParseError::at(src, (off, off + sub.len()), msg)
    };
    let term = |sub: &str| -> Result<(DiffRational, BTreeSet<String>), ParseError> {
        let t = parse_term(sub).map_err(|e| e.within(src, sub))?;
        let j = rewrite_term(&t, p).map_err(|e| at(sub, e.to_string()))?;
        Ok((j.value, t.base_names()))
    };
    let mut names = BTreeSet::new();
    let mut c = Condition::new(p, "z");
    for (theta, body) in betas {
        let (f, n) = term(body)?;
        names.extend(n);
        if c.f.insert(theta.clone(), f).is_some() {
            return Err(at(body, format!("duplicate beta {theta}")));
        }
    }
    for body in ineqs {
        let (f, n) = term(body)?;
        names.extend(n);
        match f.as_polynomial() {
            Some(q) => c.ineqs.push(q.clone()),
            None => return Err(at(body, "inequality must be polynomial".into())),
        }
    }
    for (is_witness, lhs, rhs) in assigns {
        let (f, _) = term(lhs)?;
        let vars = f.variables();
        let v = match vars.iter().next() {
            Some(v) if vars.len() == 1 && f == RationalFunction::var(v.clone()) => v.clone(),
            _ => return Err(at(lhs, "expected a single variable".into())),
        };
        names.insert(v.name.clone());
        let r = parse_rational(rhs).map_err(|e| e.within(src, rhs))?;
        if is_witness {
            c.witness.insert(v.theta, r);
        } else {
            c.init.insert(v.theta, r);
        }
    }
    if names.len() > 1 {
        let list: Vec<_> = names.into_iter().collect();
        return Err(ParseError::at(src, (0, 0), format!("a condition has one unknown; found {}", list.join(", "))));
    }
    if let Some(n) = names.into_iter().next() {
        c.name = n;
    }
    Ok(c)
}

/// Two members of `Omega_theta` that disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub theta: Theta,
    /// The larger predecessor and the value obtained through it.
    pub phi1: Theta,
    pub value1: DiffRational,
    /// The smaller predecessor (the one defining `g_theta`).
    pub phi2: Theta,
    pub value2: DiffRational,
}

impl Conflict {
    pub fn difference(&self) -> DiffRational {
        &self.value1 - &self.value2
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "conflict at {}: via {} gives {}, via {} gives {}",
            self.theta, self.phi1, self.value1, self.phi2, self.value2
        )
    }
}

/// One member of `Omega_theta` with the predecessor it came from
/// (`None` for cases (1) and (2)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEntry {
    pub via: Option<Theta>,
    pub value: DiffRational,
}

#[derive(Debug, Clone, Default)]
pub struct DerivedSystem {
    pub omega: BTreeMap<Theta, Vec<OmegaEntry>>,
    pub g: BTreeMap<Theta, DiffRational>,
    /// Denominators that must not vanish.
    pub domain: Vec<DiffPoly>,
}

impl DerivedSystem {
    /// Distinct values of `Omega_theta`.
    pub fn distinct(&self, theta: &Theta) -> Vec<&DiffRational> {
        let mut out: Vec<&DiffRational> = Vec::new();
        for e in &self.omega[theta] {
            if !out.contains(&&e.value) {
                out.push(&e.value);
            }
        }
        out
    }

    /// First non-singleton `Omega_theta` in increasing order.
    pub fn first_conflict(&self) -> Option<Conflict> {
        self.omega.iter().find_map(|(t, entries)| conflict_in(t, entries))
    }
}

fn conflict_in(theta: &Theta, entries: &[OmegaEntry]) -> Option<Conflict> {
    let first = entries.first()?;
    let other = entries.iter().find(|e| e.value != first.value)?;
    Some(Conflict {
        theta: theta.clone(),
        phi1: other.via.clone()?,
        value1: other.value.clone(),
        phi2: first.via.clone()?,
        value2: first.value.clone(),
    })
}

struct Deriver<'a> {
    c: &'a Condition,
    part: ThetaPartition,
    sys: DerivedSystem,
}

impl<'a> Deriver<'a> {
    fn new(c: &'a Condition) -> Result<Self, CoherenceError> {
        c.validate()?;
        Ok(Deriver { c, part: c.partition()?, sys: DerivedSystem::default() })
    }

    /// `g_phi^delta` with every `z^chi`, `chi` in `B`, replaced by `g_chi`.
    fn lift(&self, phi: &Theta, i: usize) -> DiffRational {
        let d = free_derive(&self.sys.g[phi], i);
        let map: BTreeMap<DiffVar, DiffRational> = d
            .variables()
            .into_iter()
            .filter(|v| self.part.in_b(&v.theta))
            .map(|v| {
                let g = self.sys.g[&v.theta].clone();
                (v, g)
            })
            .collect();
        if map.is_empty() {
            d
        } else {
            d.substitute(&map).expect("substituted denominators are nonzero")
        }
    }

    fn step(&mut self, theta: &Theta) {
        let entries = if self.part.in_i(theta) {
            vec![OmegaEntry { via: None, value: RationalFunction::var(self.c.var(theta.clone())) }]
        } else if self.part.in_p(theta) {
            vec![OmegaEntry { via: None, value: self.c.f[theta].clone() }]
        } else {
            theta
                .predecessors()
                .into_iter()
                .filter(|phi| self.part.in_b(phi))
                .map(|phi| {
                    let i = theta.step_from(&phi).unwrap();
                    OmegaEntry { value: self.lift(&phi, i), via: Some(phi) }
                })
                .collect()
        };
        let g = entries[0].value.clone();
        if !g.den().is_constant() && !self.sys.domain.contains(g.den()) {
            self.sys.domain.push(g.den().clone());
        }
        self.sys.g.insert(theta.clone(), g);
        self.sys.omega.insert(theta.clone(), entries);
    }

    /// Processes all theta up to `last` (inclusive) in increasing order,
    /// stopping at the first conflict when `stop_on_conflict`.
    fn run(&mut self, last: &Theta, stop_on_conflict: bool) -> Option<Conflict> {
        for t in theta::enumerate(self.c.p, last.ord()) {
            if t > *last {
                break;
            }
            if self.sys.g.contains_key(&t) {
                continue;
            }
            self.step(&t);
            if let Some(conf) = conflict_in(&t, &self.sys.omega[&t]) {
                if stop_on_conflict {
                    return Some(conf);
                }
            }
        }
        None
    }
}

fn last_of_order(p: usize, k: u32) -> Theta {
    // The lexicographically largest exponent of total degree k.
    let mut e = vec![0; p];
    e[0] = k;
    Theta::new(e)
}

/// `Omega_theta` and `g_theta` for every theta with `ord(theta) <= ord_bound`.
pub fn derive_system(c: &Condition, ord_bound: u32) -> Result<DerivedSystem, CoherenceError> {
    let mut d = Deriver::new(c)?;
    d.run(&last_of_order(c.p, ord_bound), false);
    Ok(d.sys)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    pub coherent: bool,
    pub conflict: Option<Conflict>,
}

/// Coherence: `Omega_theta` is a singleton for every `theta <= join(P)`.
pub fn is_coherent(c: &Condition) -> Result<CoherenceReport, CoherenceError> {
    let mut d = Deriver::new(c)?;
    let Some(join) = d.part.antichain.join() else {
        return Ok(CoherenceReport { coherent: true, conflict: None });
    };
    let conflict = d.run(&join, true);
    Ok(CoherenceReport { coherent: conflict.is_none(), conflict })
}

/// Checks the singleton property for all theta with ord at most `ord_bound`.
pub fn strong_coherence_probe(c: &Condition, ord_bound: u32) -> Result<Option<Conflict>, CoherenceError> {
    let mut d = Deriver::new(c)?;
    Ok(d.run(&last_of_order(c.p, ord_bound), true))
}

/// Checks `g_(d theta) = g_theta^d(z^I, g_(d I)(z^I))` for every theta with
/// ord at most `ord_bound` and every derivation; returns the first failure.
pub fn check_trivfact(c: &Condition, ord_bound: u32) -> Result<Option<(Theta, usize)>, CoherenceError> {
    let mut d = Deriver::new(c)?;
    d.run(&last_of_order(c.p, ord_bound + 1), false);
    for t in theta::enumerate(c.p, ord_bound) {
        for i in 0..c.p {
            let lifted = d.lift(&t, i);
            if lifted != d.sys.g[&t.shift(i)] {
                return Ok(Some((t, i)));
            }
        }
    }
    Ok(None)
}

/// Formal solution in `Q[[t_1..t_p]]` truncated at total degree `n`, with
/// `theta`-jet at 0 equal to `init(theta)` on `I` (default 0) and to
/// `g_theta(init)` on `B`. Coefficient of `t^e` is the jet value over `e!`.
pub fn solve_condition_series(c: &Condition, n: u32) -> Result<TruncatedSeries, CoherenceError> {
    let report = is_coherent(c)?;
    if let Some(conf) = report.conflict {
        return Err(CoherenceError::NotCoherent(conf));
    }
    let part = c.partition()?;
    let p = c.p;
    let order = n as i32;
    let mut a = TruncatedSeries::zero(p, order);
    // Jets are fixed in increasing order of theta. The coefficient at psi of
    // f_beta(a) only involves jets of a below psi*beta, since f_beta only
    // involves jets below beta and the order is multiplicative.
    for k in 0..=n {
        let mut ts = theta::of_order(p, k);
        ts.sort();
        for t in ts {
            let jet = if part.in_i(&t) {
                c.init.get(&t).cloned().unwrap_or_else(Rational::zero)
            } else {
                let beta = part.antichain.elements().iter().find(|b| b.divides(&t)).unwrap().clone();
                let psi = beta.quotient(&t).unwrap();
                let fb = eval_f(c, &beta, &a, psi.ord() as i32)
                    .map_err(|_| CoherenceError::SingularInitialData(beta.clone()))?;
                fb.coeff(psi.exps()) * Rational::from_integer(psi.factorial())
            };
            a.set_coeff(t.exps().to_vec(), jet / Rational::from_integer(t.factorial()));
        }
    }
    Ok(a)
}

/// `f_beta` evaluated at the partials of `a`, truncated at `order`.
fn eval_f(c: &Condition, beta: &Theta, a: &TruncatedSeries, order: i32) -> Result<TruncatedSeries, crate::AlgebraError> {
    let f = &c.f[beta];
    let mut jets = BTreeMap::new();
    for v in f.variables() {
        jets.insert(v.clone(), a.derivative_multi(v.theta.exps()).truncate(order));
    }
    f.eval_series(c.p, order, &|v| jets.get(v).cloned())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    Beta(Theta),
    Inequality(usize),
    Singular(Theta),
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::Beta(b) => write!(f, "relation for beta {b} fails"),
            VerifyFailure::Inequality(k) => write!(f, "inequality #{} fails at t = 0", k + 1),
            VerifyFailure::Singular(b) => write!(f, "f_{b} is singular at the series"),
        }
    }
}

/// Checks `beta a = f_beta(a^I)` for every beta (modulo truncation) and the
/// inequalities at `t = 0`. `None` means the series satisfies the condition.
pub fn verify_solution(c: &Condition, a: &TruncatedSeries) -> Option<VerifyFailure> {
    for beta in c.f.keys() {
        let lhs = a.derivative_multi(beta.exps());
        let rhs = match eval_f(c, beta, a, a.order()) {
            Ok(s) => s,
            Err(_) => return Some(VerifyFailure::Singular(beta.clone())),
        };
        if !lhs.eq_mod_truncation(&rhs) {
            return Some(VerifyFailure::Beta(beta.clone()));
        }
    }
    let jet0 = |v: &DiffVar| Some(a.coeff(v.theta.exps()) * Rational::from_integer(v.theta.factorial()));
    for (k, q) in c.ineqs.iter().enumerate() {
        if !q.eval(&jet0).is_some_and(|x| x.is_positive()) {
            return Some(VerifyFailure::Inequality(k));
        }
    }
    None
}
