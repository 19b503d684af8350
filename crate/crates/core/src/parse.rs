//! Text syntax for terms, formulas, theta lists and series literals.
//!
//! ```text
//! term  := sum ; sum := prod (('+'|'-') prod)* ; prod := unary (('*'|'/') unary)*
//! unary := '-' unary | power ; power := atom ('^' nat)?
//! atom  := rational | ident jet? | "d" [nat] "(" term ")" | "(" term ")"
//! jet   := "'"+ | "[" nat ("," nat)* "]"
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{MultiPoly, Rational, TruncatedSeries, Variable};
use crate::diffpoly::DiffVar;
use crate::jet::{Cmp, DiffFormula, DiffTerm, Quantifier};
use crate::theta::Theta;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
    /// Byte range in the input.
    pub span: (usize, usize),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    pub fn at(src: &str, span: (usize, usize), message: impl Into<String>) -> Self {
        let before = &src[..span.0.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |k| before[k + 1..].chars().count()) + 1;
        ParseError { message: message.into(), line, column, span }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

const SYMBOLS: [&str; 21] = [
    "!=", "<=", ">=", ":=", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", "'", "=", "<", ">", "&", "|", "!",
];

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().unwrap();
            out.push(Token { tok: Tok::Num(n), start, end: i });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), start, end: i });
            continue;
        }
        let extra = [".", ";"];
        if let Some(s) = SYMBOLS.iter().chain(extra.iter()).find(|s| src[i..].starts_with(**s)) {
            i += s.len();
            out.push(Token { tok: Tok::Sym(s), start, end: i });
            continue;
        }
        let ch = src[i..].chars().next().unwrap();
        return Err(ParseError::at(src, (i, i + ch.len_utf8()), format!("unexpected character `{ch}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        Ok(Parser { src, toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let span = match self.toks.get(self.pos) {
            Some(t) => (t.start, t.end),
            None => (self.src.len(), self.src.len()),
        };
        let msg = msg.into();
        let found = match self.toks.get(self.pos) {
            Some(t) => format!(", found `{}`", &self.src[t.start..t.end]),
            None => ", found end of input".to_string(),
        };
        ParseError::at(self.src, span, format!("{msg}{found}"))
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected `{s}`")))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.err_here("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v = u32::try_from(n.clone()).map_err(|_| self.err_here("number too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err_here("expected a natural number")),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat_sym("-");
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(self.err_here("expected a rational number"));
        };
        self.pos += 1;
        let mut r = Rational::from_integer(n);
        if self.is_sym("/") && matches!(self.peek_at(1), Some(Tok::Num(_))) {
            self.pos += 1;
            let Some(Tok::Num(d)) = self.peek().cloned() else { unreachable!() };
            if d.is_zero() {
                return Err(self.err_here("zero denominator"));
            }
            self.pos += 1;
            r /= Rational::from_integer(d);
        }
        Ok(if neg { -r } else { r })
    }

    fn theta(&mut self) -> Result<Theta, ParseError> {
        self.expect_sym("[")?;
        let mut e = vec![self.nat()?];
        while self.eat_sym(",") {
            e.push(self.nat()?);
        }
        self.expect_sym("]")?;
        Ok(Theta::new(e))
    }

    fn term(&mut self) -> Result<DiffTerm, ParseError> {
        let mut acc = self.prod()?;
        loop {
            if self.eat_sym("+") {
                acc = DiffTerm::add(acc, self.prod()?);
            } else if self.eat_sym("-") {
                acc = DiffTerm::sub(acc, self.prod()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn prod(&mut self) -> Result<DiffTerm, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_sym("*") {
                acc = DiffTerm::mul(acc, self.unary()?);
            } else if self.eat_sym("/") {
                acc = DiffTerm::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<DiffTerm, ParseError> {
        if self.eat_sym("-") {
            return Ok(match self.unary()? {
                DiffTerm::Const(c) => DiffTerm::Const(-c),
                t => DiffTerm::Neg(Box::new(t)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<DiffTerm, ParseError> {
        let base = self.atom()?;
        if self.eat_sym("^") {
            let e = self.nat()?;
            return Ok(DiffTerm::pow(base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(DiffTerm::Const(self.rational()?)),
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.is_sym("(") {
                    if let Some(idx) = derivation_index(&name) {
                        if idx == 0 {
                            return Err(self.err_here("derivations are numbered from 1"));
                        }
                        self.pos += 1;
                        let t = self.term()?;
                        self.expect_sym(")")?;
                        return Ok(DiffTerm::d(idx - 1, t));
                    }
                    return Err(self.err_here(format!("unknown function `{name}`")));
                }
                if is_keyword(&name) {
                    self.pos -= 1;
                    return Err(self.err_here("keyword cannot be used as a variable"));
                }
                if self.is_sym("'") {
                    let mut k = 0;
                    while self.eat_sym("'") {
                        k += 1;
                    }
                    return Ok(DiffTerm::Jet(DiffVar::new(name, Theta::new(vec![k]))));
                }
                if self.is_sym("[") {
                    let th = self.theta()?;
                    return Ok(DiffTerm::Jet(DiffVar::new(name, th)));
                }
                Ok(DiffTerm::Var(name))
            }
            _ => Err(self.err_here("expected a term")),
        }
    }

    fn cmp(&mut self) -> Option<Cmp> {
        let c = match self.peek()? {
            Tok::Sym("=") => Cmp::Eq,
            Tok::Sym("!=") => Cmp::Ne,
            Tok::Sym("<") => Cmp::Lt,
            Tok::Sym("<=") => Cmp::Le,
            Tok::Sym(">") => Cmp::Gt,
            Tok::Sym(">=") => Cmp::Ge,
            _ => return None,
        };
        self.pos += 1;
        Some(c)
    }

    fn formula(&mut self) -> Result<DiffFormula, ParseError> {
        if let Some(Tok::Ident(kw)) = self.peek().cloned() {
            let q = match kw.as_str() {
                "exists" => Some(Quantifier::Exists),
                "forall" => Some(Quantifier::Forall),
                _ => None,
            };
            if let Some(q) = q {
                self.pos += 1;
                let var = match self.peek().cloned() {
                    Some(Tok::Ident(v)) if !is_keyword(&v) => v,
                    _ => return Err(self.err_here("expected a bound variable")),
                };
                self.pos += 1;
                self.expect_sym(".")?;
                let body = self.formula()?;
                return Ok(DiffFormula::Quant { q, var, body: Box::new(body) });
            }
        }
        let mut xs = vec![self.conj()?];
        while self.eat_sym("|") {
            xs.push(self.conj()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { DiffFormula::Or(xs) })
    }

    fn conj(&mut self) -> Result<DiffFormula, ParseError> {
        let mut xs = vec![self.neg()?];
        while self.eat_sym("&") {
            xs.push(self.neg()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { DiffFormula::And(xs) })
    }

    fn neg(&mut self) -> Result<DiffFormula, ParseError> {
        if self.eat_sym("!") {
            return Ok(DiffFormula::Not(Box::new(self.neg()?)));
        }
        match self.peek() {
            Some(Tok::Ident(k)) if k == "true" || k == "false" => {
                let b = k == "true";
                self.pos += 1;
                return Ok(DiffFormula::Bool(b));
            }
            Some(Tok::Ident(k)) if k == "exists" || k == "forall" => return self.formula(),
            _ => {}
        }
        let save = self.pos;
        match self.comparison() {
            Ok(f) => Ok(f),
            Err(e) if self.toks.get(save).is_some_and(|t| t.tok == Tok::Sym("(")) => {
                self.pos = save + 1;
                match self.formula().and_then(|f| self.expect_sym(")").map(|_| f)) {
                    Ok(f) => Ok(f),
                    Err(e2) => Err(if e2.span.0 >= e.span.0 { e2 } else { e }),
                }
            }
            Err(e) => Err(e),
        }
    }

    fn comparison(&mut self) -> Result<DiffFormula, ParseError> {
        let lhs = self.term()?;
        let cmp = self.cmp().ok_or_else(|| self.err_here("expected a comparison operator"))?;
        let rhs = self.term()?;
        Ok(DiffFormula::atom(lhs, cmp, rhs))
    }
}

fn derivation_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if rest.is_empty() {
        return Some(1);
    }
    if rest.bytes().all(|b| b.is_ascii_digit()) {
        return rest.parse().ok();
    }
    None
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "true" | "false" | "exists" | "forall")
}

pub fn parse_term(src: &str) -> Result<DiffTerm, ParseError> {
    let mut p = Parser::new(src)?;
    if p.toks.is_empty() {
        return Err(p.err_here("expected a term"));
    }
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<DiffFormula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a term if the input has no comparison, a formula otherwise.
pub fn parse_term_or_formula(src: &str) -> Result<Result<DiffTerm, DiffFormula>, ParseError> {
    match parse_term(src) {
        Ok(t) => Ok(Ok(t)),
        Err(term_err) => match parse_formula(src) {
            Ok(f) => Ok(Err(f)),
            Err(form_err) => Err(if form_err.span.0 >= term_err.span.0 { form_err } else { term_err }),
        },
    }
}

pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let mut p = Parser::new(src)?;
    let r = p.rational()?;
    p.expect_end()?;
    Ok(r)
}

pub fn parse_theta(src: &str) -> Result<Theta, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.theta()?;
    p.expect_end()?;
    Ok(t)
}

/// Whitespace-separated theta list such as `[2,0] [1,1]`.
pub fn parse_theta_list(src: &str) -> Result<Vec<Theta>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    while p.pos < p.toks.len() {
        out.push(p.theta()?);
        p.eat_sym(",");
    }
    Ok(out)
}

/// Comma-separated rationals, optionally parenthesized: `(1, -2/3)`.
pub fn parse_rational_list(src: &str) -> Result<Vec<Rational>, ParseError> {
    let mut p = Parser::new(src)?;
    let paren = p.eat_sym("(");
    let mut out = Vec::new();
    if !(paren && p.is_sym(")")) && p.pos < p.toks.len() {
        out.push(p.rational()?);
        while p.eat_sym(",") {
            out.push(p.rational()?);
        }
    }
    if paren {
        p.expect_sym(")")?;
    }
    p.expect_end()?;
    Ok(out)
}

/// `series(N; c0, c1, ...)` or `series2(N; [i,j]=c, ...)`.
pub fn parse_series(src: &str) -> Result<TruncatedSeries, ParseError> {
    let mut p = Parser::new(src)?;
    let kind = match p.peek().cloned() {
        Some(Tok::Ident(k)) if k == "series" || k == "series2" => k,
        _ => return Err(p.err_here("expected `series(` or `series2(`")),
    };
    p.pos += 1;
    p.expect_sym("(")?;
    let order = p.nat()? as i32;
    p.expect_sym(";")?;
    let mut terms = Vec::new();
    if kind == "series" {
        let mut k = 0u32;
        loop {
            terms.push((vec![k], p.rational()?));
            k += 1;
            if !p.eat_sym(",") {
                break;
            }
        }
        p.expect_sym(")")?;
        p.expect_end()?;
        return Ok(TruncatedSeries::from_terms(1, order, terms));
    }
    loop {
        let th = p.theta()?;
        if th.p() != 2 {
            return Err(p.err_here("series2 exponents need two entries"));
        }
        p.expect_sym("=")?;
        terms.push((th.exps().to_vec(), p.rational()?));
        if !p.eat_sym(",") {
            break;
        }
    }
    p.expect_sym(")")?;
    p.expect_end()?;
    Ok(TruncatedSeries::from_terms(2, order, terms))
}

/// Converts a term to a polynomial, mapping each plain variable with `var`.
/// Division is allowed only by nonzero constants; derivations are rejected.
pub fn term_to_poly<V: Variable>(
    t: &DiffTerm,
    var: &impl Fn(&DiffTerm) -> Option<V>,
) -> Result<MultiPoly<V>, String> {
    use DiffTerm::*;
    Ok(match t {
        Const(c) => MultiPoly::constant(c.clone()),
        Var(_) | Jet(_) => MultiPoly::var(var(t).ok_or_else(|| format!("unknown variable `{t}`"))?),
        Neg(a) => -term_to_poly(a, var)?,
        Add(a, b) => &term_to_poly(a, var)? + &term_to_poly(b, var)?,
        Sub(a, b) => &term_to_poly(a, var)? - &term_to_poly(b, var)?,
        Mul(a, b) => &term_to_poly(a, var)? * &term_to_poly(b, var)?,
        Div(a, b) => {
            let d = term_to_poly(b, var)?;
            match d.constant_value() {
                Some(c) if !c.is_zero() => term_to_poly(a, var)?.scale(&c.recip()),
                _ => return Err(format!("division by a non-constant or zero in `{t}`")),
            }
        }
        Pow(a, e) => term_to_poly(a, var)?.pow(*e),
        Apply(..) => return Err(format!("derivation not allowed here: `{t}`")),
    })
}

/// Byte offset of `sub` inside `src`; `sub` must be a subslice of `src`.
pub(crate) fn offset_in(src: &str, sub: &str) -> usize {
    sub.as_ptr() as usize - src.as_ptr() as usize
}

impl ParseError {
    /// Re-anchors an error produced on the slice `sub` of `src`.
    pub(crate) fn within(self, src: &str, sub: &str) -> Self {
        let off = offset_in(src, sub);
        ParseError::at(src, (self.span.0 + off, self.span.1 + off), self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use DiffTerm as T;

    #[test]
    fn terms() {
        assert_eq!(parse_term("d(x^2)").unwrap(), T::d(0, T::pow(T::var("x"), 2)));
        assert_eq!(
            parse_term("d(d(x)*x+3)").unwrap(),
            T::d(0, T::add(T::mul(T::d(0, T::var("x")), T::var("x")), T::int(3)))
        );
        assert_eq!(parse_term("d2(y)").unwrap(), T::d(1, T::var("y")));
        assert_eq!(parse_term("-3").unwrap(), T::int(-3));
        assert_eq!(parse_term("-2^2").unwrap(), T::Neg(Box::new(T::pow(T::int(2), 2))));
        assert_eq!(parse_term("x/2/3").unwrap(), T::div(T::var("x"), T::Const(rat(2, 3))));
        assert_eq!(parse_term("x''").unwrap(), T::Jet(DiffVar::new("x", Theta::new(vec![2]))));
        assert_eq!(parse_term("z[1,0]").unwrap(), T::Jet(DiffVar::new("z", Theta::new(vec![1, 0]))));
        assert_eq!(parse_term("a - b - c").unwrap(), T::sub(T::sub(T::var("a"), T::var("b")), T::var("c")));
    }

    #[test]
    fn term_errors_have_positions() {
        let e = parse_term("x + * y").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_term("1/0").unwrap_err();
        assert!(e.message.contains("zero denominator"));
        assert!(parse_term("f(x)").is_err());
        assert!(parse_term("x $ y").is_err());
        assert!(parse_term("").is_err());
    }

    #[test]
    fn formulas() {
        let f = parse_formula("x > 0 & d(x) > 0").unwrap();
        assert_eq!(
            f,
            DiffFormula::And(vec![
                DiffFormula::atom(T::var("x"), Cmp::Gt, T::int(0)),
                DiffFormula::atom(T::d(0, T::var("x")), Cmp::Gt, T::int(0)),
            ])
        );
        let f = parse_formula("(x + 1) > 0 | !(x = 2)").unwrap();
        assert!(matches!(f, DiffFormula::Or(ref v) if v.len() == 2));
        let f = parse_formula("((x > 0))").unwrap();
        assert_eq!(f, DiffFormula::atom(T::var("x"), Cmp::Gt, T::int(0)));
        assert!(matches!(parse_formula("exists y. y > x").unwrap(), DiffFormula::Quant { .. }));
        assert!(parse_formula("x >").is_err());
    }

    #[test]
    fn render_then_parse_is_stable() {
        for s in ["x - (x + 1)", "(1/2)^2", "-x*d2(x)", "x*-3", "(-2)^2", "--x", "d(1/x) - x'''", "x/(y*z)"] {
            let t = parse_term(s).unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }
        for s in ["x > 0 & (y < 1 | !(z = 0))", "d(x) >= x^2 | true"] {
            let f = parse_formula(s).unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn series_literals() {
        let s = parse_series("series(4; 1, -1, 0, 2)").unwrap();
        assert_eq!(s.to_string(), "1 - t + 2*t^3 + O(t^5)");
        let s = parse_series("series2(3; [0,0]=1, [1,1]=1/2)").unwrap();
        assert_eq!(s.coeff(&[1, 1]), rat(1, 2));
        assert!(parse_series("series(3 1)").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_theta_list("[2,0] [1,1]").unwrap().len(), 2);
        assert_eq!(parse_rational_list("(1, -2/3)").unwrap(), vec![rat(1, 1), rat(-2, 3)]);
        assert_eq!(parse_rational_list("1,0").unwrap().len(), 2);
    }
}
