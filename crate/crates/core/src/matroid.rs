//! Rank oracles, maps on their ground sets, and the jet-rank closure built
//! from a map: rank limits, closure membership and brute-force axiom checks.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{linalg, Rational, RationalFunction, Variable};
use crate::diffpoly::{DiffError, PolyDerivation};
use crate::theta::{self, Theta};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("element index {0} is not in the ground set")]
    UnknownElement(usize),
    #[error("rank increments increased at step {step}: {prev} then {next}")]
    MonotonicityViolation { step: usize, prev: usize, next: usize },
    #[error("derivations {0} and {1} do not commute on the generators")]
    NonCommutingDerivations(usize, usize),
    #[error("invalid rank oracle: {0}")]
    InvalidOracle(String),
    #[error("window must satisfy 1 <= window <= k_max + 1")]
    InvalidWindow,
    #[error(transparent)]
    Diff(#[from] DiffError),
}

/// Relative rank `rk(A | B)` on some universe of elements.
pub trait RankOracle: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn rank(&self, a: &[Self::Elem], b: &[Self::Elem]) -> usize;
}

/// A rank oracle together with a map on its universe.
pub trait EndoSystem: RankOracle {
    fn delta(&self, a: &Self::Elem) -> Self::Elem;
}

/// Vectors in `Q^dim`; rank is the dimension of the span.
#[derive(Debug, Clone)]
pub struct LinearMatroid {
    pub dim: usize,
}

impl LinearMatroid {
    pub fn span_rank(vs: &[Vec<Rational>]) -> usize {
        linalg::rank(vs)
    }
}

impl RankOracle for LinearMatroid {
    type Elem = Vec<Rational>;

    fn rank(&self, a: &[Self::Elem], b: &[Self::Elem]) -> usize {
        let all: Vec<_> = a.iter().chain(b).cloned().collect();
        Self::span_rank(&all) - Self::span_rank(b)
    }
}

/// A linear map `v -> M v` on `Q^dim`.
#[derive(Debug, Clone)]
pub struct LinearEndo {
    pub matroid: LinearMatroid,
    pub matrix: Vec<Vec<Rational>>,
}

impl LinearEndo {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Self {
        LinearEndo { matroid: LinearMatroid { dim: matrix.len() }, matrix }
    }

    /// `e_i -> e_(i+1)`, last basis vector to zero.
    pub fn shift(dim: usize) -> Self {
        let mut m = vec![vec![Rational::from_integer(0.into()); dim]; dim];
        for i in 0..dim.saturating_sub(1) {
            m[i + 1][i] = Rational::from_integer(1.into());
        }
        LinearEndo::new(m)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![vec![Rational::from_integer(0.into()); dim]; dim];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Rational::from_integer(1.into());
        }
        LinearEndo::new(m)
    }
}

impl RankOracle for LinearEndo {
    type Elem = Vec<Rational>;

    fn rank(&self, a: &[Self::Elem], b: &[Self::Elem]) -> usize {
        self.matroid.rank(a, b)
    }
}

impl EndoSystem for LinearEndo {
    fn delta(&self, a: &Self::Elem) -> Self::Elem {
        self.matrix.iter().map(|row| row.iter().zip(a).map(|(m, x)| m * x).sum()).collect()
    }
}

/// Rational functions in ambient indeterminates; rank is the rank of the
/// Jacobian over the function field.
#[derive(Debug, Clone)]
pub struct AlgebraicMatroid<V: Variable> {
    pub vars: Vec<V>,
    pub seed: u64,
    pub retries: usize,
    /// Exact elimination over the function field instead of sampling.
    pub exact: bool,
}

impl<V: Variable> AlgebraicMatroid<V> {
    pub fn new(vars: Vec<V>) -> Self {
        AlgebraicMatroid { vars, seed: 0x5eed, retries: 5, exact: false }
    }

    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    fn jacobian(&self, fs: &[RationalFunction<V>]) -> Vec<Vec<RationalFunction<V>>> {
        crate::diffpoly::jacobian(fs, &self.vars)
    }

    pub fn set_rank(&self, fs: &[RationalFunction<V>]) -> usize {
        if fs.is_empty() {
            return 0;
        }
        let jac = self.jacobian(fs);
        if self.exact {
            return linalg::rank(&jac);
        }
        let full = fs.len().min(self.vars.len());
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut best = 0;
        let mut attempts = 0;
        while attempts <= self.retries {
            let point: Vec<Rational> = self
                .vars
                .iter()
                .map(|_| Rational::new(rng.gen_range(-97i64..=97).into(), rng.gen_range(1i64..=13).into()))
                .collect();
            let lookup = |v: &V| self.vars.iter().position(|w| w == v).map(|k| point[k].clone());
            let evaluated: Option<Vec<Vec<Rational>>> = jac
                .iter()
                .map(|row| row.iter().map(|e| e.eval(&lookup).ok()).collect())
                .collect();
            attempts += 1;
            let Some(m) = evaluated else { continue };
            best = best.max(linalg::rank(&m));
            if best == full {
                break;
            }
        }
        best
    }
}

impl<V: Variable> RankOracle for AlgebraicMatroid<V> {
    type Elem = RationalFunction<V>;

    fn rank(&self, a: &[Self::Elem], b: &[Self::Elem]) -> usize {
        let all: Vec<_> = a.iter().chain(b).cloned().collect();
        self.set_rank(&all).saturating_sub(self.set_rank(b))
    }
}

/// An algebraic matroid with a derivation on the ambient field.
#[derive(Debug, Clone)]
pub struct AlgebraicEndo<V: Variable> {
    pub matroid: AlgebraicMatroid<V>,
    pub derivation: PolyDerivation<V>,
}

impl<V: Variable> AlgebraicEndo<V> {
    pub fn new(derivation: PolyDerivation<V>) -> Self {
        let vars = derivation.universe().into_iter().collect();
        AlgebraicEndo { matroid: AlgebraicMatroid::new(vars), derivation }
    }
}

impl<V: Variable> RankOracle for AlgebraicEndo<V> {
    type Elem = RationalFunction<V>;

    fn rank(&self, a: &[Self::Elem], b: &[Self::Elem]) -> usize {
        self.matroid.rank(a, b)
    }
}

impl<V: Variable> EndoSystem for AlgebraicEndo<V> {
    fn delta(&self, a: &Self::Elem) -> Self::Elem {
        self.derivation.apply(a).expect("element lies in the derivation's universe")
    }
}

/// Ground elements `0..n` carried by vectors, with an arbitrary lookup-table
/// map; used to exhibit maps that are not quasi-endomorphisms.
#[derive(Debug, Clone)]
pub struct TableEndo {
    pub vectors: Vec<Vec<Rational>>,
    pub table: Vec<usize>,
}

impl RankOracle for TableEndo {
    type Elem = usize;

    fn rank(&self, a: &[usize], b: &[usize]) -> usize {
        let pick = |s: &[usize]| s.iter().map(|&i| self.vectors[i].clone()).collect::<Vec<_>>();
        LinearMatroid { dim: 0 }.rank(&pick(a), &pick(b))
    }
}

impl EndoSystem for TableEndo {
    fn delta(&self, a: &usize) -> usize {
        self.table[*a]
    }
}

/// A finite, indexed ground set over a rank oracle.
#[derive(Debug, Clone)]
pub struct MatroidOracle<'a, R: RankOracle> {
    pub oracle: &'a R,
    pub ground: Vec<R::Elem>,
}

impl<'a, R: RankOracle> MatroidOracle<'a, R> {
    pub fn new(oracle: &'a R, ground: Vec<R::Elem>) -> Self {
        MatroidOracle { oracle, ground }
    }

    fn pick(&self, idx: &[usize]) -> Result<Vec<R::Elem>, MatroidError> {
        idx.iter()
            .map(|&i| self.ground.get(i).cloned().ok_or(MatroidError::UnknownElement(i)))
            .collect()
    }

    pub fn rank(&self, a: &[usize], b: &[usize]) -> Result<usize, MatroidError> {
        Ok(self.oracle.rank(&self.pick(a)?, &self.pick(b)?))
    }

    /// Exhaustive check of `rk(A|0) <= |A|`, monotonicity and submodularity
    /// (ground sets of at most 10 elements).
    pub fn validate(&self) -> Result<(), MatroidError> {
        let n = self.ground.len();
        if n > 10 {
            return Ok(());
        }
        let ranks: Vec<usize> = (0..1usize << n)
            .map(|m| self.oracle.rank(&subset(&self.ground, m), &[]))
            .collect();
        for a in 0..1usize << n {
            if ranks[a] > a.count_ones() as usize {
                return Err(MatroidError::InvalidOracle(format!("rank exceeds size on {:?}", bits(a))));
            }
            for b in 0..1usize << n {
                if a & b == a && ranks[a] > ranks[b] {
                    return Err(MatroidError::InvalidOracle(format!("not monotone on {:?}", bits(a))));
                }
                if ranks[a | b] + ranks[a & b] > ranks[a] + ranks[b] {
                    return Err(MatroidError::InvalidOracle(format!(
                        "not submodular on {:?}, {:?}",
                        bits(a),
                        bits(b)
                    )));
                }
            }
        }
        Ok(())
    }
}

fn bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

fn subset<T: Clone>(u: &[T], mask: usize) -> Vec<T> {
    u.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect()
}

/// A pair `(A, B)` of index sets violating `rk(dA | A B dB) <= rk(A | B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiViolation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

/// Exhaustively checks the quasi-endomorphism inequality over all pairs of
/// subsets of `universe` (at most 12 elements). `None` means it holds.
pub fn check_quasi_endomorphism<S: EndoSystem>(s: &S, universe: &[S::Elem]) -> Option<QuasiViolation> {
    let n = universe.len();
    assert!(n <= 12, "exhaustive check limited to 12 elements");
    let images: Vec<S::Elem> = universe.iter().map(|x| s.delta(x)).collect();
    (0..1usize << n).into_par_iter().find_map_first(|am| {
        let a = subset(universe, am);
        let da = subset(&images, am);
        for bm in 0..1usize << n {
            let b = subset(universe, bm);
            let rhs = s.rank(&a, &b);
            let mut base = a.clone();
            base.extend(b.iter().cloned());
            base.extend(subset(&images, bm));
            let lhs = s.rank(&da, &base);
            if lhs > rhs {
                return Some(QuasiViolation { a: bits(am), b: bits(bm), lhs, rhs });
            }
        }
        None
    })
}

/// `B, dB, ..., d^k B`.
pub fn jet_closure<S: EndoSystem>(s: &S, b: &[S::Elem], k: usize) -> Vec<S::Elem> {
    let mut out = b.to_vec();
    let mut layer = b.to_vec();
    for _ in 0..k {
        layer = layer.iter().map(|x| s.delta(x)).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaRank {
    pub value: usize,
    pub stabilized: bool,
    /// `rk(d^k A | J^(k-1)(A) B)` for `k = 0, 1, ...`.
    pub increments: Vec<usize>,
}

/// Jet-rank increments `rk(d^k A | J^(k-1)(A) B)` for `k = 0..=k_max`, with
/// `B` replaced by its jet closure to depth `k_max`. Stops once `window`
/// consecutive increments vanish; otherwise reports the increment at
/// `k_max`, flagged stable when the last `window` increments agree.
pub fn delta_rank<S: EndoSystem>(
    s: &S,
    a: &[S::Elem],
    b: &[S::Elem],
    k_max: usize,
    window: usize,
) -> Result<DeltaRank, MatroidError> {
    if window == 0 || window > k_max + 1 {
        return Err(MatroidError::InvalidWindow);
    }
    let mut base = jet_closure(s, b, k_max);
    let mut layer = a.to_vec();
    let mut increments: Vec<usize> = Vec::new();
    for k in 0..=k_max {
        let inc = s.rank(&layer, &base);
        if let Some(&prev) = increments.last() {
            if inc > prev {
                return Err(MatroidError::MonotonicityViolation { step: k, prev, next: inc });
            }
        }
        increments.push(inc);
        let n = increments.len();
        if n >= window && increments[n - window..].iter().all(|&x| x == 0) {
            break;
        }
        base.extend(layer.iter().cloned());
        layer = layer.iter().map(|x| s.delta(x)).collect();
    }
    let n = increments.len();
    let value = increments[n - 1];
    let stabilized = n >= window && increments[n - window..].iter().all(|&x| x == value);
    Ok(DeltaRank { value, stabilized, increments })
}

/// Smallest `n <= k_max` with `d^n a` in the closure of
/// `J^(n-1)(a) J^(k_max)(B)`; `None` means not detected up to `k_max`.
pub fn in_delta_closure<S: EndoSystem>(s: &S, a: &S::Elem, b: &[S::Elem], k_max: usize) -> Option<usize> {
    let mut base = jet_closure(s, b, k_max);
    let mut cur = a.clone();
    for n in 0..=k_max {
        if s.rank(std::slice::from_ref(&cur), &base) == 0 {
            return Some(n);
        }
        let next = s.delta(&cur);
        base.push(cur);
        cur = next;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeViolation {
    pub a: usize,
    pub b: usize,
    pub base: Vec<usize>,
}

fn closure_table(n: usize, cl: &(impl Fn(usize, &[usize]) -> bool + Sync)) -> Vec<Vec<bool>> {
    (0..1usize << n)
        .into_par_iter()
        .map(|m| {
            let base = bits(m);
            (0..n).map(|x| cl(x, &base)).collect()
        })
        .collect()
}

/// Exchange: `a in cl(Bb) \ cl(B)` implies `b in cl(Ba)`, over all `a, b, B`
/// drawn from `0..n` (at most 8 elements).
pub fn check_exchange(n: usize, cl: impl Fn(usize, &[usize]) -> bool + Sync) -> Option<ExchangeViolation> {
    assert!(n <= 8, "exhaustive check limited to 8 elements");
    let t = closure_table(n, &cl);
    for m in 0..1usize << n {
        for a in 0..n {
            for b in 0..n {
                let with_b = m | 1 << b;
                let with_a = m | 1 << a;
                if t[with_b][a] && !t[m][a] && !t[with_a][b] {
                    return Some(ExchangeViolation { a, b, base: bits(m) });
                }
            }
        }
    }
    None
}

/// Extensivity, monotonicity and idempotence of a closure on `0..n`.
/// Returns a description of the first failure.
pub fn check_closure_axioms(n: usize, cl: impl Fn(usize, &[usize]) -> bool + Sync) -> Option<String> {
    assert!(n <= 8, "exhaustive check limited to 8 elements");
    let t = closure_table(n, &cl);
    let closed = |m: usize| (0..n).filter(|&x| t[m][x]).fold(0usize, |acc, x| acc | 1 << x);
    for m in 0..1usize << n {
        for x in bits(m) {
            if !t[m][x] {
                return Some(format!("not extensive: {x} outside cl({:?})", bits(m)));
            }
        }
        let c = closed(m);
        if closed(c) != c {
            return Some(format!("not idempotent at {:?}", bits(m)));
        }
        for sup in 0..1usize << n {
            if sup & m == m && c & !closed(sup) != 0 {
                return Some(format!("not monotone: {:?} within {:?}", bits(m), bits(sup)));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndependence {
    pub independent: bool,
    /// A set `J` with `rk(a^J | B^Theta) < |J|`, when one was found.
    pub witness: Option<Vec<Theta>>,
}

/// Applies `theta = d_1^e1 ... d_p^ep` to `f`.
pub fn apply_theta<V: Variable>(
    ders: &[PolyDerivation<V>],
    theta: &Theta,
    f: &RationalFunction<V>,
) -> Result<RationalFunction<V>, DiffError> {
    let mut g = f.clone();
    for (i, &e) in theta.exps().iter().enumerate() {
        for _ in 0..e {
            g = ders[i].apply(&g)?;
        }
    }
    Ok(g)
}

/// Searches `J = {theta : theta <= theta_k}` (prefixes of Theta, ord at most
/// `ord_max`) for `rk(a^J | B^Theta) < |J|`, with `B^Theta` truncated at
/// ord `ord_max`. Independent means no such `J` was found.
pub fn multi_delta_independent<V: Variable>(
    ders: &[PolyDerivation<V>],
    a: &RationalFunction<V>,
    b: &[RationalFunction<V>],
    ord_max: u32,
) -> Result<MultiIndependence, MatroidError> {
    for i in 0..ders.len() {
        for j in i + 1..ders.len() {
            if !ders[i].commutes_with(&ders[j])? {
                return Err(MatroidError::NonCommutingDerivations(i, j));
            }
        }
    }
    let vars: Vec<V> = ders.first().map(|d| d.universe().into_iter().collect()).unwrap_or_default();
    let m = AlgebraicMatroid::new(vars);
    let thetas = theta::enumerate(ders.len(), ord_max);
    let mut b_theta = Vec::new();
    for t in &thetas {
        for x in b {
            b_theta.push(apply_theta(ders, t, x)?);
        }
    }
    let mut a_j = Vec::new();
    for (k, t) in thetas.iter().enumerate() {
        a_j.push(apply_theta(ders, t, a)?);
        if m.rank(&a_j, &b_theta) < a_j.len() {
            return Ok(MultiIndependence { independent: false, witness: Some(thetas[..=k].to_vec()) });
        }
    }
    Ok(MultiIndependence { independent: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::diffpoly::DiffVar;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x, 1)).collect()
    }

    fn e(dim: usize, i: usize) -> Vec<Rational> {
        let mut out = v(&vec![0; dim]);
        out[i] = rat(1, 1);
        out
    }

    #[test]
    fn linear_ranks() {
        let m = LinearMatroid { dim: 2 };
        let o = MatroidOracle::new(&m, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]);
        assert_eq!(o.rank(&[0, 1, 2], &[]).unwrap(), 2);
        assert_eq!(o.rank(&[0, 2], &[0, 2]).unwrap(), 0);
        assert_eq!(o.rank(&[5], &[]), Err(MatroidError::UnknownElement(5)));
        assert!(o.validate().is_ok());
    }

    #[test]
    fn algebraic_ranks() {
        type R = RationalFunction<&'static str>;
        let m = AlgebraicMatroid::new(vec!["t1", "t2"]);
        let (t1, t2) = (R::var("t1"), R::var("t2"));
        assert_eq!(m.rank(&[t1.pow(2)], &[t1.clone()]), 0);
        assert_eq!(m.rank(&[t2.clone()], &[t1.clone()]), 1);
        let o = MatroidOracle::new(&m, vec![t1.clone(), t1.pow(2), t2.clone()]);
        assert_eq!(o.rank(&[1], &[0]).unwrap(), 0);
        assert!(o.validate().is_ok());
        assert_eq!(m.clone().exact().rank(&[&t1 * &t2, t1.clone()], &[]), 2);
    }

    #[test]
    fn quasi_endomorphism_checks() {
        let s = LinearEndo::new(vec![v(&[1, 2, 0]), v(&[0, 1, 1]), v(&[3, 0, -1])]);
        let u = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 0]), v(&[0, 0, 2])];
        assert_eq!(check_quasi_endomorphism(&s, &u), None);
        assert_eq!(check_quasi_endomorphism(&s, &[]), None);
        // 0 and 1 share a span but are sent to independent elements.
        let t = TableEndo { vectors: vec![v(&[1, 0]), v(&[2, 0]), v(&[0, 1])], table: vec![0, 2, 2] };
        let bad = check_quasi_endomorphism(&t, &[0, 1, 2]).unwrap();
        assert!(bad.lhs > bad.rhs);
    }

    #[test]
    fn shift_delta_rank() {
        let s = LinearEndo::shift(4);
        let r = delta_rank(&s, &[e(4, 0)], &[], 8, 3).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.stabilized);
        assert_eq!(r.increments, vec![1, 1, 1, 1, 0, 0, 0]);
        let r = delta_rank(&LinearEndo::identity(4), &[e(4, 0)], &[], 4, 2).unwrap();
        assert_eq!(r.increments, vec![1, 0, 0]);
        assert_eq!(in_delta_closure(&s, &e(4, 0), &[], 6), Some(4));
        assert_eq!(in_delta_closure(&s, &e(4, 1), &[e(4, 1)], 6), Some(0));
    }

    #[test]
    fn algebraic_delta_rank_and_closure() {
        type R = RationalFunction<&'static str>;
        let d = PolyDerivation::from_pairs([("t", R::one())]);
        let s = AlgebraicEndo::new(d);
        let r = delta_rank(&s, &[R::var("t")], &[], 3, 2).unwrap();
        assert_eq!(r.increments, vec![1, 0, 0]);
        assert_eq!(r.value, 0);

        let k_max = 6;
        let ts: Vec<DiffVar> = (0..k_max + 2).map(|k| DiffVar::new("t", Theta::new(vec![k as u32]))).collect();
        let shift = PolyDerivation::from_pairs(ts.iter().enumerate().map(|(k, t)| {
            let img = ts.get(k + 1).map_or(RationalFunction::zero(), |n| RationalFunction::var(n.clone()));
            (t.clone(), img)
        }));
        let s = AlgebraicEndo::new(shift);
        assert_eq!(in_delta_closure(&s, &RationalFunction::var(ts[0].clone()), &[], k_max), None);
    }

    #[test]
    fn exchange_and_axioms() {
        let s = LinearEndo::shift(4);
        let u = vec![e(4, 0), e(4, 1), e(4, 2), e(4, 3), v(&[1, 1, 0, 0])];
        let cl = |x: usize, b: &[usize]| {
            let base: Vec<_> = b.iter().map(|&i| u[i].clone()).collect();
            in_delta_closure(&s, &u[x], &base, 6).is_some()
        };
        assert_eq!(check_exchange(5, cl), None);
        assert_eq!(check_closure_axioms(5, cl), None);
        let trivial = |x: usize, b: &[usize]| b.contains(&x);
        assert_eq!(check_exchange(4, trivial), None);
        // 0 in cl({1}) but 1 not in cl({0}).
        let bad = |x: usize, b: &[usize]| b.contains(&x) || (x == 0 && b.contains(&1));
        assert_eq!(check_exchange(3, bad), Some(ExchangeViolation { a: 0, b: 1, base: vec![] }));
    }

    #[test]
    fn multi_derivation_independence() {
        type R = RationalFunction<DiffVar>;
        let ord_max = 3;
        let ts = theta::enumerate(2, ord_max + 1);
        let tv = |t: &Theta| DiffVar::new("t", t.clone());
        let ders: Vec<_> = (0..2)
            .map(|i| {
                PolyDerivation::from_pairs(ts.iter().map(|t| {
                    let n = t.shift(i);
                    let img = if n.ord() <= ord_max + 1 { R::var(tv(&n)) } else { R::zero() };
                    (tv(t), img)
                }))
            })
            .collect();
        let a = R::var(tv(&Theta::id(2)));
        let r = multi_delta_independent(&ders, &a, &[], ord_max).unwrap();
        assert!(r.independent);
        let r = multi_delta_independent(&ders, &R::from_int(3), &[], ord_max).unwrap();
        assert_eq!(r.witness, Some(vec![Theta::id(2)]));

        type S = RationalFunction<&'static str>;
        let z = S::var("z");
        let d = PolyDerivation::from_pairs([("z", z.clone())]);
        let r = multi_delta_independent(&[d.clone(), d.clone()], &z, &[], 1).unwrap();
        assert!(!r.independent);
        assert_eq!(r.witness.unwrap().len(), 2);

        let e2 = PolyDerivation::from_pairs([("z", z.pow(2))]);
        assert_eq!(
            multi_delta_independent(&[PolyDerivation::from_pairs([("z", S::one())]), e2], &z, &[], 1),
            Err(MatroidError::NonCommutingDerivations(0, 1))
        );
    }
}
