//! The free abelian monoid of derivative operators `d1^e1 ... dp^ep`.
//!
//! Elements are plain exponent vectors. The total order `<` compares the
//! tuple `(ord, e1, ..., ep)` lexicographically; the partial order `⪯` is
//! divisibility (componentwise `<=`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error("the identity cannot be a generator")]
    IdentityInGenerators,
    #[error("{0} and {1} are comparable under divisibility")]
    NotAntichain(Theta, Theta),
    #[error("arity mismatch: expected p = {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("malformed theta `{0}`")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Theta(Vec<u32>);

impl Theta {
    pub fn new(exps: Vec<u32>) -> Self {
        Theta(exps)
    }

    pub fn id(p: usize) -> Self {
        Theta(vec![0; p])
    }

    /// The generator `d_i` (0-based index).
    pub fn unit(p: usize, i: usize) -> Self {
        let mut e = vec![0; p];
        e[i] = 1;
        Theta(e)
    }

    pub fn p(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn ord(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_id(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Theta) -> Theta {
        debug_assert_eq!(self.p(), other.p());
        Theta(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `d_i * self`.
    pub fn shift(&self, i: usize) -> Theta {
        let mut e = self.0.clone();
        e[i] += 1;
        Theta(e)
    }

    /// `self ⪯ other`.
    pub fn divides(&self, other: &Theta) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self ⪯ other`.
    pub fn quotient(&self, other: &Theta) -> Option<Theta> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| b.checked_sub(*a))
            .collect::<Option<Vec<_>>>()
            .map(Theta)
    }

    pub fn join(&self, other: &Theta) -> Theta {
        Theta(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Theta) -> Theta {
        Theta(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Immediate divisibility predecessors, in increasing `<` order.
    pub fn predecessors(&self) -> Vec<Theta> {
        let mut out: Vec<Theta> = (0..self.p())
            .filter(|&i| self.0[i] > 0)
            .map(|i| {
                let mut e = self.0.clone();
                e[i] -= 1;
                Theta(e)
            })
            .collect();
        out.sort();
        out
    }

    /// Index `i` with `self = d_i * pred`, if `pred` is an immediate predecessor.
    pub fn step_from(&self, pred: &Theta) -> Option<usize> {
        let q = pred.quotient(self)?;
        (q.ord() == 1).then(|| q.0.iter().position(|&e| e == 1).unwrap())
    }

    /// `e1! * ... * ep!`.
    pub fn factorial(&self) -> num_bigint::BigInt {
        let mut f = num_bigint::BigInt::from(1);
        for &e in &self.0 {
            for k in 2..=e {
                f *= k;
            }
        }
        f
    }
}

impl Ord for Theta {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ord().cmp(&other.ord()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Theta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Theta {
    type Err = ThetaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ThetaError::Malformed(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Err(bad());
        }
        inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()
            .map(Theta)
    }
}

/// All `theta` with `ord(theta) <= max_ord`, strictly increasing in `<`.
pub fn enumerate(p: usize, max_ord: u32) -> Vec<Theta> {
    let mut out = Vec::new();
    for k in 0..=max_ord {
        out.extend(of_order(p, k));
    }
    out
}

/// All `theta` with `ord(theta) = k`, increasing.
pub fn of_order(p: usize, k: u32) -> Vec<Theta> {
    fn rec(p: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Theta>) {
        if prefix.len() + 1 == p {
            prefix.push(k);
            out.push(Theta(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=k {
            prefix.push(e);
            rec(p, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if p == 0 {
        if k == 0 {
            out.push(Theta(Vec::new()));
        }
        return out;
    }
    rec(p, k, &mut Vec::new(), &mut out);
    out
}

/// A finite set of pairwise divisibility-incomparable non-identity elements,
/// stored in increasing `<` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antichain {
    p: usize,
    elems: Vec<Theta>,
}

impl Antichain {
    pub fn new(p: usize, mut elems: Vec<Theta>) -> Result<Self, ThetaError> {
        check_arity(p, &elems)?;
        if elems.iter().any(Theta::is_id) {
            return Err(ThetaError::IdentityInGenerators);
        }
        elems.sort();
        elems.dedup();
        for (k, a) in elems.iter().enumerate() {
            for b in &elems[k + 1..] {
                if a.divides(b) || b.divides(a) {
                    return Err(ThetaError::NotAntichain(a.clone(), b.clone()));
                }
            }
        }
        Ok(Antichain { p, elems })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn elements(&self) -> &[Theta] {
        &self.elems
    }

    pub fn contains(&self, t: &Theta) -> bool {
        self.elems.binary_search(t).is_ok()
    }

    /// Membership in the upward closure `B`.
    pub fn covers(&self, t: &Theta) -> bool {
        self.elems.iter().any(|b| b.divides(t))
    }

    /// `⋁P`, or `None` when empty.
    pub fn join(&self) -> Option<Theta> {
        self.elems.iter().cloned().reduce(|a, b| a.join(&b))
    }
}

fn check_arity(p: usize, elems: &[Theta]) -> Result<(), ThetaError> {
    match elems.iter().find(|t| t.p() != p) {
        Some(t) => Err(ThetaError::ArityMismatch { expected: p, found: t.p() }),
        None => Ok(()),
    }
}

/// Divisibility-minimal elements of the upward closure of `generators`.
pub fn dickson_min(p: usize, generators: &[Theta]) -> Result<Antichain, ThetaError> {
    check_arity(p, generators)?;
    if generators.iter().any(Theta::is_id) {
        return Err(ThetaError::IdentityInGenerators);
    }
    let mut sorted = generators.to_vec();
    sorted.sort();
    sorted.dedup();
    // Divisors precede their multiples in `<`, so one sweep suffices.
    let mut min: Vec<Theta> = Vec::new();
    for g in sorted {
        if !min.iter().any(|m| m.divides(&g)) {
            min.push(g);
        }
    }
    Ok(Antichain { p, elems: min })
}

/// The partition `Theta = I ⊔ B` induced by an antichain `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPartition {
    pub antichain: Antichain,
}

impl ThetaPartition {
    pub fn new(antichain: Antichain) -> Self {
        ThetaPartition { antichain }
    }

    pub fn p(&self) -> usize {
        self.antichain.p()
    }

    pub fn in_b(&self, t: &Theta) -> bool {
        self.antichain.covers(t)
    }

    pub fn in_i(&self, t: &Theta) -> bool {
        !self.in_b(t)
    }

    pub fn in_p(&self, t: &Theta) -> bool {
        self.antichain.contains(t)
    }

    /// Elements of `I` with ord at most `max_ord`, increasing.
    pub fn i_slice(&self, max_ord: u32) -> Vec<Theta> {
        enumerate(self.p(), max_ord).into_iter().filter(|t| self.in_i(t)).collect()
    }
}
