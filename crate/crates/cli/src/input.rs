//! Small grammars that only the command line needs: derivations, lists of
//! functions and boxes of intervals. Spans point into the full input.

use std::path::PathBuf;

use tderiv::jet::DiffTerm;
use tderiv::parse::{parse_rational_list, parse_term, ParseError};
use tderiv::{Rational, RationalFunction};

use crate::error::CliError;

pub type Func = RationalFunction<String>;

#[derive(clap::Args, Debug, Clone)]
pub struct Input {
    /// Inline input; use `-f` to read a file instead.
    pub input: Option<String>,
    /// Read the input from a file.
    #[arg(short = 'f', long = "file", conflicts_with = "input")]
    pub file: Option<PathBuf>,
}

impl Input {
    pub fn read(&self) -> Result<Option<String>, CliError> {
        match (&self.input, &self.file) {
            (Some(s), _) => Ok(Some(s.clone())),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map(Some)
                .map_err(|e| CliError::input("io", format!("{}: {e}", path.display()))),
            (None, None) => Ok(None),
        }
    }

    pub fn require(&self) -> Result<String, CliError> {
        self.read()?.ok_or_else(|| CliError::input("missing_input", "expected an inline argument or -f <file>"))
    }
}

fn offset(src: &str, sub: &str) -> usize {
    sub.as_ptr() as usize - src.as_ptr() as usize
}

fn err_at(src: &str, sub: &str, msg: impl Into<String>) -> ParseError {
    let off = offset(src, sub);
    ParseError::at(src, (off, off + sub.len().max(1)), msg)
}

/// Parses `sub`, a slice of `src`, with errors located in `src`.
fn term_in(src: &str, sub: &str) -> Result<DiffTerm, ParseError> {
    parse_term(sub).map_err(|e| {
        let off = offset(src, sub);
        ParseError::at(src, (e.span.0 + off, e.span.1 + off), e.message)
    })
}

/// A derivation-free term in plain variables as a rational function.
pub fn term_to_func(t: &DiffTerm) -> Result<Func, String> {
    use DiffTerm::*;
    Ok(match t {
        Const(c) => Func::constant(c.clone()),
        Var(v) => Func::var(v.clone()),
        Jet(v) => return Err(format!("jet variable `{v}` not allowed here")),
        Neg(a) => -&term_to_func(a)?,
        Add(a, b) => &term_to_func(a)? + &term_to_func(b)?,
        Sub(a, b) => &term_to_func(a)? - &term_to_func(b)?,
        Mul(a, b) => &term_to_func(a)? * &term_to_func(b)?,
        Div(a, b) => term_to_func(a)?.checked_div(&term_to_func(b)?).map_err(|_| format!("division by zero in `{t}`"))?,
        Pow(a, e) => term_to_func(a)?.pow(*e),
        Apply(..) => return Err(format!("derivation not allowed here: `{t}`")),
    })
}

fn func_in(src: &str, sub: &str) -> Result<Func, ParseError> {
    let t = term_in(src, sub.trim())?;
    term_to_func(&t).map_err(|m| err_at(src, sub.trim(), m))
}

/// Comma-separated rational functions.
pub fn func_list(src: &str, sub: &str) -> Result<Vec<Func>, ParseError> {
    if sub.trim().is_empty() {
        return Ok(Vec::new());
    }
    sub.split(',').map(|s| func_in(src, s)).collect()
}

/// `x -> y, y -> -x`: images of the generators.
pub fn derivation(src: &str, sub: &str) -> Result<Vec<(String, Func)>, ParseError> {
    sub.split(',')
        .map(|part| {
            let Some((v, img)) = part.split_once("->") else {
                return Err(err_at(src, part.trim(), "expected `<variable> -> <image>`"));
            };
            let name = v.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(err_at(src, name, "expected a variable name"));
            }
            Ok((name.to_string(), func_in(src, img)?))
        })
        .collect()
}

/// `(lo, hi) (lo, hi) ...`.
pub fn intervals(src: &str) -> Result<Vec<(Rational, Rational)>, ParseError> {
    let mut out = Vec::new();
    let mut rest = src;
    while let Some(open) = rest.find('(') {
        if !rest[..open].trim().is_empty() {
            return Err(err_at(src, rest[..open].trim(), "expected `(`"));
        }
        let Some(close) = rest[open..].find(')') else {
            return Err(err_at(src, &rest[open..], "unclosed interval"));
        };
        let group = &rest[open..open + close + 1];
        let v = parse_rational_list(group).map_err(|e| {
            let off = offset(src, group);
            ParseError::at(src, (e.span.0 + off, e.span.1 + off), e.message)
        })?;
        let [lo, hi]: [Rational; 2] = v.try_into().map_err(|_| err_at(src, group, "an interval needs two endpoints"))?;
        out.push((lo, hi));
        rest = &rest[open + close + 1..];
    }
    if !rest.trim().is_empty() {
        return Err(err_at(src, rest.trim(), "expected `(`"));
    }
    if out.is_empty() {
        return Err(ParseError::at(src, (0, src.len()), "expected at least one interval"));
    }
    Ok(out)
}
