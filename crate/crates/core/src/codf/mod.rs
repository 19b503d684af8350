//! Singer axiom instances and their formal witnesses, the translation to the
//! geometric form of the axiom, delta-types of cells, and an exact decision
//! procedure for one-variable sign conditions.

mod sturm;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{fmt_rational, Monomial, MultiPoly, Rational, TruncatedSeries, Variable};
use crate::jet::{Cmp, DiffTerm};
use crate::parse::{offset_in, parse_rational_list, parse_term, term_to_poly, ParseError};

pub use crate::algebra::UniPoly;
pub use sturm::{count_roots, real_roots, simplest_in_open, RealRoot, RootSolver, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodfError {
    #[error("premise fails: {0}")]
    PremiseFails(PremiseReport),
    #[error("constraint #{0} asks a strict sign of the zero polynomial")]
    ZeroPolynomialWithStrictSign(usize),
    #[error("constraints use more than one variable: {0}")]
    NotUnivariate(String),
    #[error("interval #{0} is empty")]
    EmptyInterval(usize),
    #[error("invalid cell type matrix: {0}")]
    BadMatrix(String),
}

/// Jet coordinate `X_k`, standing for the `k`-th derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XVar(pub usize);

impl fmt::Display for XVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// `P(X_0..X_n)`, inequalities `Q_i(X_0..X_{n-1}) > 0` and a point `a` in
/// `Q^(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingerInstance {
    pub n: usize,
    pub p: MultiPoly<XVar>,
    pub qs: Vec<MultiPoly<XVar>>,
    pub a: Vec<Rational>,
}

impl SingerInstance {
    pub fn separant(&self) -> MultiPoly<XVar> {
        self.p.partial(&XVar(self.n))
    }

    fn at_a(&self, q: &MultiPoly<XVar>) -> Option<Rational> {
        q.eval(&|v: &XVar| self.a.get(v.0).cloned())
    }
}

impl fmt::Display for SingerInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "P = {}", self.p)?;
        for q in &self.qs {
            writeln!(f, "Q = {q}")?;
        }
        let a: Vec<String> = self.a.iter().map(fmt_rational).collect();
        writeln!(f, "a = ({})", a.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PremiseFailure {
    WrongLength { expected: usize, found: usize },
    VariableOutOfRange(String),
    QUsesTopVariable(usize),
    PNonzero(Rational),
    SeparantVanishes,
    QNotPositive(usize, Rational),
}

impl fmt::Display for PremiseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PremiseFailure::WrongLength { expected, found } => {
                write!(f, "a has {found} entries, expected {expected}")
            }
            PremiseFailure::VariableOutOfRange(v) => write!(f, "variable {v} is out of range"),
            PremiseFailure::QUsesTopVariable(i) => write!(f, "Q{} mentions the top variable", i + 1),
            PremiseFailure::PNonzero(v) => write!(f, "P(a) = {} is not 0", fmt_rational(v)),
            PremiseFailure::SeparantVanishes => write!(f, "dP/dXn vanishes at a"),
            PremiseFailure::QNotPositive(i, v) => write!(f, "Q{}(a) = {} is not positive", i + 1, fmt_rational(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremiseReport {
    pub failures: Vec<PremiseFailure>,
}

impl PremiseReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PremiseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "premise holds");
        }
        let parts: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Exact check of `P(a) = 0`, `dP/dX_n(a) != 0` and `Q_i(a) > 0`.
pub fn check_singer_premise(s: &SingerInstance) -> PremiseReport {
    let mut failures = Vec::new();
    if s.a.len() != s.n + 1 {
        failures.push(PremiseFailure::WrongLength { expected: s.n + 1, found: s.a.len() });
        return PremiseReport { failures };
    }
    let all_vars = s.qs.iter().chain([&s.p]).flat_map(|q| q.variables());
    if let Some(v) = all_vars.into_iter().find(|v| v.0 > s.n) {
        failures.push(PremiseFailure::VariableOutOfRange(v.to_string()));
        return PremiseReport { failures };
    }
    let pa = s.at_a(&s.p).unwrap();
    if !pa.is_zero() {
        failures.push(PremiseFailure::PNonzero(pa));
    }
    if s.at_a(&s.separant()).unwrap().is_zero() {
        failures.push(PremiseFailure::SeparantVanishes);
    }
    for (i, q) in s.qs.iter().enumerate() {
        if q.contains_var(&XVar(s.n)) {
            failures.push(PremiseFailure::QUsesTopVariable(i));
            continue;
        }
        let v = s.at_a(q).unwrap();
        if !v.is_positive() {
            failures.push(PremiseFailure::QNotPositive(i, v));
        }
    }
    PremiseReport { failures }
}

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |acc, j| acc * j))
}

/// `P(b, b', ..., b^(n))` truncated at the order `b` supports.
pub fn singer_residual(s: &SingerInstance, b: &TruncatedSeries) -> TruncatedSeries {
    let mut jets = vec![b.clone()];
    for k in 1..=s.n {
        jets.push(jets[k - 1].derivative(0));
    }
    let order = b.order() - s.n as i32;
    TruncatedSeries::eval_poly(&s.p, 1, order, &|v: &XVar| jets.get(v.0).cloned())
        .expect("every jet variable is assigned")
}

/// Formal solution `b` in `Q[[t]]` truncated at degree `big_n`, with
/// `b^(k)(0) = a_k` for `k <= n` and `P(b, .., b^(n)) = 0` up to
/// `t^(big_n - n)`.
pub fn solve_singer_formal(s: &SingerInstance, big_n: usize) -> Result<TruncatedSeries, CodfError> {
    let report = check_singer_premise(s);
    if !report.holds() {
        return Err(CodfError::PremiseFails(report));
    }
    let n = s.n;
    let order = big_n.max(n) as i32;
    let mut b = TruncatedSeries::zero(1, order);
    for (k, ak) in s.a.iter().enumerate() {
        b.set_coeff(vec![k as u32], ak / factorial(k));
    }
    let sep = s.at_a(&s.separant()).unwrap();
    for m in n + 1..=big_n {
        // With c_m = 0, the t^(m-n) coefficient of the residual misses
        // exactly sep * c_m * m!/(m-n)!.
        let r = singer_residual(s, &b.truncate(m as i32)).coeff(&[(m - n) as u32]);
        let scale = &sep * factorial(m) / factorial(m - n);
        b.set_coeff(vec![m as u32], -r / scale);
    }
    Ok(b.truncate(big_n as i32))
}

/// Parses `n = ..`, `P = ..`, `Q = ..` (any number) and `a = (..)` lines.
pub fn parse_singer(src: &str) -> Result<SingerInstance, ParseError> {
    let mut n = None;
    let mut p = None;
    let mut qs = Vec::new();
    let mut a = None;
    for raw in src.split('\n') {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |sub: &str, msg: String| {
            let off = offset_in(src, sub);
            ParseError::at(src, (off, off + sub.len().max(1)), msg)
        };
        let Some((key, val)) = line.split_once('=') else {
            return Err(err(line, "expected `<key> = <value>`".into()));
        };
        let (key, val) = (key.trim(), val.trim());
        match key {
            "n" => n = Some(val.parse::<usize>().map_err(|_| err(val, "expected a natural number".into()))?),
            "P" => p = Some(val),
            "Q" => qs.push(val),
            "a" => a = Some((val, parse_rational_list(val).map_err(|e| e.within(src, val))?)),
            _ => return Err(err(key, format!("unknown key `{key}`"))),
        }
    }
    let missing = |what: &str| ParseError::at(src, (src.len(), src.len()), format!("missing `{what} = ...` line"));
    let n = n.ok_or_else(|| missing("n"))?;
    let (a_src, a) = a.ok_or_else(|| missing("a"))?;
    let p_src = p.ok_or_else(|| missing("P"))?;
    if a.len() != n + 1 {
        let off = offset_in(src, a_src);
        return Err(ParseError::at(src, (off, off + a_src.len()), format!("a needs {} entries, found {}", n + 1, a.len())));
    }
    let poly = |sub: &str, top: usize| -> Result<MultiPoly<XVar>, ParseError> {
        let t = parse_term(sub).map_err(|e| e.within(src, sub))?;
        let off = offset_in(src, sub);
        term_to_poly(&t, &|v: &DiffTerm| match v {
            DiffTerm::Var(name) => name.strip_prefix('X')?.parse::<usize>().ok().filter(|k| *k <= top).map(XVar),
            _ => None,
        })
        .map_err(|m| ParseError::at(src, (off, off + sub.len()), format!("{m} (allowed: X0..X{top})")))
    };
    let p = poly(p_src, n)?;
    let qs = qs
        .into_iter()
        .map(|q| if n == 0 { Err(ParseError::at(src, (0, 0), "n = 0 admits no Q")) } else { poly(q, n - 1) })
        .collect::<Result<_, _>>()?;
    Ok(SingerInstance { n, p, qs, a })
}

/// Coordinates of the geometric form: `x_1..x_n` and `y_1..y_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeoVar {
    X(usize),
    Y(usize),
}

impl fmt::Display for GeoVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoVar::X(i) => write!(f, "x{i}"),
            GeoVar::Y(i) => write!(f, "y{i}"),
        }
    }
}

/// `y_i = x_(i+1)` for `i < n`, together with the atom block in
/// `(x_1..x_n, y_n)`. Solutions `(x, y)` are the pairs `(c, delta c)` with
/// the jet of `c_1` in the original set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricSystem {
    pub n: usize,
    pub p: MultiPoly<GeoVar>,
    pub qs: Vec<MultiPoly<GeoVar>>,
}

impl GeometricSystem {
    /// Pairs `(i, i+1)` encoding `y_i = x_(i+1)`.
    pub fn chain(&self) -> Vec<(usize, usize)> {
        (1..self.n).map(|i| (i, i + 1)).collect()
    }

    /// Reads the system back in jet coordinates.
    pub fn to_singer(&self, a: Vec<Rational>) -> SingerInstance {
        let n = self.n;
        let back = |v: &GeoVar| match *v {
            GeoVar::X(i) => XVar(i - 1),
            GeoVar::Y(i) => XVar(i),
        };
        SingerInstance { n, p: self.p.map_vars(back), qs: self.qs.iter().map(|q| q.map_vars(back)).collect(), a }
    }
}

impl fmt::Display for GeometricSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.chain().into_iter().map(|(i, j)| format!("y{i} = x{j}")).collect();
        parts.push(format!("{} = 0", self.p));
        parts.extend(self.qs.iter().map(|q| format!("{q} > 0")));
        write!(f, "{}", parts.join(" & "))
    }
}

/// Geometric form in `2n` variables of the instance's set `A`.
pub fn singer_to_geometric(s: &SingerInstance) -> GeometricSystem {
    let n = s.n;
    assert!(n > 0, "the geometric form needs n >= 1");
    let to = |v: &XVar| if v.0 < n { GeoVar::X(v.0 + 1) } else { GeoVar::Y(n) };
    GeometricSystem { n, p: s.p.map_vars(to), qs: s.qs.iter().map(|q| q.map_vars(to)).collect() }
}

/// Rows indexed by base coordinates, columns by jet levels `0..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellTypeMatrix {
    pub rows: Vec<Vec<bool>>,
}

impl CellTypeMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, CodfError> {
        let Some(w) = rows.first().map(Vec::len) else {
            return Err(CodfError::BadMatrix("no rows".into()));
        };
        if w == 0 || rows.iter().any(|r| r.len() != w) {
            return Err(CodfError::BadMatrix("rows must be nonempty and of equal length".into()));
        }
        Ok(CellTypeMatrix { rows })
    }
}

impl FromStr for CellTypeMatrix {
    type Err = CodfError;

    /// Rows separated by `;`, entries by `,` or whitespace: `1,0; 1,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| match t {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(CodfError::BadMatrix(format!("entry `{t}` is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        CellTypeMatrix::new(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaType {
    pub bold: Vec<u8>,
    pub dim: usize,
}

impl fmt::Display for DeltaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.bold.iter().map(ToString::to_string).collect();
        write!(f, "type ({}), dim {}", t.join(","), self.dim)
    }
}

/// Row-wise conjunction; the dimension counts rows of ones.
pub fn delta_type(ct: &CellTypeMatrix) -> DeltaType {
    let bold: Vec<u8> = ct.rows.iter().map(|r| r.iter().all(|&b| b) as u8).collect();
    let dim = bold.iter().map(|&b| b as usize).sum();
    DeltaType { bold, dim }
}

/// A satisfying point: a rational, or a real algebraic number given by a
/// squarefree polynomial and an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatWitness {
    Point(Rational),
    Root { poly: UniPoly, lo: Rational, hi: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Sat(SatWitness),
    Unsat,
}

impl Decision {
    pub fn is_sat(&self) -> bool {
        matches!(self, Decision::Sat(_))
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Unsat => write!(f, "unsat"),
            Decision::Sat(SatWitness::Point(q)) => write!(f, "sat x = {}", fmt_rational(q)),
            Decision::Sat(SatWitness::Root { poly, lo, hi }) => {
                write!(f, "sat x = root of {poly} in ({}, {})", fmt_rational(lo), fmt_rational(hi))
            }
        }
    }
}

/// Converts a polynomial in at most one variable; `var` collects the name.
pub fn to_unipoly<V: Variable>(p: &MultiPoly<V>, var: &mut Option<V>) -> Result<UniPoly, CodfError> {
    let vars = p.variables();
    for v in &vars {
        match var {
            Some(w) if w != v => return Err(CodfError::NotUnivariate(format!("{w}, {v}"))),
            _ => *var = Some(v.clone()),
        }
    }
    let mut c = vec![Rational::zero(); p.total_degree() as usize + 1];
    for (m, k) in p.terms() {
        c[m.degree() as usize] = k.clone();
    }
    Ok(UniPoly::new(c))
}

/// Inverse of [`to_unipoly`].
pub fn from_unipoly<V: Variable>(u: &UniPoly, var: V) -> MultiPoly<V> {
    MultiPoly::from_terms(u.coeffs().iter().enumerate().map(|(k, c)| {
        let m = if k == 0 { Monomial::one() } else { Monomial::from_powers([(var.clone(), k as u32)]) };
        (m, c.clone())
    }))
}

/// Decides a conjunction of sign conditions `p_j cmp_j 0` in one real
/// variable. Cells of the common root set are visited in increasing order;
/// gap witnesses are the simplest rational of the gap.
pub fn sturm_decide<V: Variable>(constraints: &[(MultiPoly<V>, Cmp)]) -> Result<Decision, CodfError> {
    let mut var = None;
    let mut polys: Vec<(UniPoly, Cmp)> = Vec::new();
    for (j, (p, cmp)) in constraints.iter().enumerate() {
        let u = to_unipoly(p, &mut var)?;
        if u.is_zero() {
            match cmp {
                Cmp::Eq | Cmp::Le | Cmp::Ge => continue,
                _ => return Err(CodfError::ZeroPolynomialWithStrictSign(j)),
            }
        }
        if u.degree() == Some(0) {
            if !cmp.holds(u.leading().cmp(&Rational::zero())) {
                return Ok(Decision::Unsat);
            }
            continue;
        }
        polys.push((u, *cmp));
    }
    let holds_at = |x: &Rational| polys.iter().all(|(u, c)| c.holds(u.sign_at(x)));
    if polys.is_empty() {
        return Ok(Decision::Sat(SatWitness::Point(Rational::zero())));
    }
    let product = polys.iter().fold(UniPoly::new(vec![Rational::one()]), |acc, (u, _)| acc.mul(u));
    let solver = RootSolver::new(&product);
    let roots = solver.roots();
    let needs_roots = polys.iter().any(|(_, c)| matches!(c, Cmp::Eq | Cmp::Le | Cmp::Ge));
    for i in 0..=roots.len() {
        if i > 0 && needs_roots {
            if let Some(w) = root_cell(&solver, &roots[i - 1], &polys) {
                return Ok(Decision::Sat(w));
            }
        }
        let q = solver.simplest_in_gap(i);
        if holds_at(&q) {
            return Ok(Decision::Sat(SatWitness::Point(q)));
        }
    }
    Ok(Decision::Unsat)
}

/// Tests the constraints at a root of the squarefree product.
fn root_cell(solver: &RootSolver, root: &RealRoot, polys: &[(UniPoly, Cmp)]) -> Option<SatWitness> {
    let (mut lo, mut hi) = match root {
        RealRoot::Rational(q) => {
            return polys.iter().all(|(u, c)| c.holds(u.sign_at(q))).then(|| SatWitness::Point(q.clone()));
        }
        RealRoot::Isolated { lo, hi } => (lo.clone(), hi.clone()),
    };
    let mut defining = solver.poly.clone();
    for (u, c) in polys {
        let g = u.gcd(&solver.poly);
        let vanishes = g.degree().unwrap_or(0) > 0 && count_roots(&g, Some(&lo), Some(&hi)) == 1;
        let sign = if vanishes {
            defining = g;
            Ordering::Equal
        } else {
            // Shrink until u has no root near the target.
            let chain = SturmChain::new(&u.squarefree());
            while chain.count(Some(&lo), Some(&hi)) > 0 {
                match solver.bisect(&lo, &hi) {
                    RealRoot::Rational(q) => return root_cell(solver, &RealRoot::Rational(q), polys),
                    RealRoot::Isolated { lo: a, hi: b } => (lo, hi) = (a, b),
                }
            }
            u.sign_at(&hi)
        };
        if !c.holds(sign) {
            return None;
        }
    }
    Some(SatWitness::Root { poly: defining, lo, hi })
}

/// `a(t) = sum c_k t^k / k!` with `c_k` the midpoint of the `k`-th interval,
/// so that the `n`-jet of `a` at 0 lies in the box.
pub fn jet_box_witness(bx: &[(Rational, Rational)]) -> Result<MultiPoly<String>, CodfError> {
    let mut terms = Vec::new();
    for (k, (lo, hi)) in bx.iter().enumerate() {
        if lo >= hi {
            return Err(CodfError::EmptyInterval(k));
        }
        let c = (lo + hi) / Rational::from_integer(2.into()) / factorial(k);
        let m = if k == 0 { Monomial::one() } else { Monomial::from_powers([("t".to_string(), k as u32)]) };
        terms.push((m, c));
    }
    Ok(MultiPoly::from_terms(terms))
}

/// The jet `(a(0), a'(0), ..)` of a polynomial in `t`, up to `n`.
pub fn jet_at_zero(a: &MultiPoly<String>, n: usize) -> Vec<Rational> {
    let mut u = to_unipoly(a, &mut None).expect("a polynomial in t");
    (0..=n)
        .map(|_| {
            let v = u.eval(&Rational::zero());
            u = u.derivative();
            v
        })
        .collect()
}
