//! Differential variables, derivations on rational-function rings, and the
//! chain-rule operators built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{gcd, linalg, AlgebraError, MultiPoly, RationalFunction, Variable};
use crate::theta::Theta;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffError {
    #[error("variable {0} is outside the derivation's universe")]
    OutsideUniverse(String),
    #[error("derivations are defined on different variable universes")]
    UniverseMismatch,
    #[error("the Jacobian with respect to the dependent variables is singular")]
    SingularJacobian,
    #[error("expected {expected} equations, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The differential variable `name^theta`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffVar {
    pub name: String,
    pub theta: Theta,
}

impl DiffVar {
    pub fn new(name: impl Into<String>, theta: Theta) -> Self {
        DiffVar { name: name.into(), theta }
    }

    pub fn base(name: impl Into<String>, p: usize) -> Self {
        DiffVar::new(name, Theta::id(p))
    }

    /// `d_i` applied to the variable.
    pub fn shift(&self, i: usize) -> DiffVar {
        DiffVar { name: self.name.clone(), theta: self.theta.shift(i) }
    }
}

impl fmt::Display for DiffVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.theta.exps();
        match e {
            [] => write!(f, "{}", self.name),
            [k] if *k <= 3 => write!(f, "{}{}", self.name, "'".repeat(*k as usize)),
            _ => write!(f, "{}{}", self.name, self.theta),
        }
    }
}

pub type DiffPoly = MultiPoly<DiffVar>;
pub type DiffRational = RationalFunction<DiffVar>;

/// Free action of `d_i` on a differential polynomial:
/// `y^theta -> y^(d_i theta)`, extended by linearity and Leibniz.
pub fn free_derive_poly(f: &DiffPoly, i: usize) -> DiffPoly {
    let mut out = MultiPoly::zero();
    for v in f.variables() {
        let d = f.partial(&v);
        out = &out + &(&d * &MultiPoly::var(v.shift(i)));
    }
    out
}

/// Free action of `d_i` on a differential rational function.
pub fn free_derive(f: &DiffRational, i: usize) -> DiffRational {
    derive_polynomial_images(f, &|v: &DiffVar| MultiPoly::var(v.shift(i)))
}

/// `f^delta = sum_k df/dy_k * y_k^delta` for the derivation with index `i`.
/// All coefficients are rational constants, so `f^[delta] = 0`.
pub fn f_delta(f: &DiffRational, i: usize) -> DiffRational {
    free_derive(f, i)
}

fn derive_polynomial_images<V: Variable>(
    f: &RationalFunction<V>,
    image: &impl Fn(&V) -> MultiPoly<V>,
) -> RationalFunction<V> {
    let d = |p: &MultiPoly<V>| {
        let mut out = MultiPoly::zero();
        for v in p.variables() {
            out = &out + &(&p.partial(&v) * &image(&v));
        }
        out
    };
    let dn = d(f.num());
    if f.is_polynomial() {
        return RationalFunction::from_poly(dn);
    }
    // With g = gcd(b, d(b)), any factor shared by a'(b/g) - a(d(b)/g) and
    // b(b/g) divides g; only those need cancelling.
    let (a, b) = (f.num(), f.den());
    let db = d(b);
    let g = gcd(b, &db);
    let h = b.div_exact(&g).expect("gcd divides");
    let k = db.div_exact(&g).expect("gcd divides");
    let mut num = &(&dn * &h) - &(a * &k);
    let mut den = b * &h;
    loop {
        let c = gcd(&num, &gcd(&den, &g));
        if c.is_constant() {
            break;
        }
        num = num.div_exact(&c).expect("gcd divides");
        den = den.div_exact(&c).expect("gcd divides");
    }
    RationalFunction::from_coprime(num, den)
}

/// A derivation on `Q(z_1..z_m)` given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDerivation<V: Variable> {
    images: BTreeMap<V, RationalFunction<V>>,
}

impl<V: Variable> PolyDerivation<V> {
    pub fn new(images: BTreeMap<V, RationalFunction<V>>) -> Self {
        PolyDerivation { images }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, RationalFunction<V>)>) -> Self {
        PolyDerivation { images: pairs.into_iter().collect() }
    }

    pub fn zero_on(universe: impl IntoIterator<Item = V>) -> Self {
        Self::from_pairs(universe.into_iter().map(|v| (v, RationalFunction::zero())))
    }

    pub fn universe(&self) -> BTreeSet<V> {
        self.images.keys().cloned().collect()
    }

    pub fn images(&self) -> &BTreeMap<V, RationalFunction<V>> {
        &self.images
    }

    pub fn image(&self, v: &V) -> Option<&RationalFunction<V>> {
        self.images.get(v)
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(RationalFunction::is_zero)
    }

    /// `d(f) = sum_k df/dz_k * d(z_k)`.
    pub fn apply(&self, f: &RationalFunction<V>) -> Result<RationalFunction<V>, DiffError> {
        let vars = f.variables();
        if let Some(v) = vars.iter().find(|v| !self.images.contains_key(v)) {
            return Err(DiffError::OutsideUniverse(v.to_string()));
        }
        if vars.iter().all(|v| self.images[v].is_polynomial()) {
            return Ok(derive_polynomial_images(f, &|v: &V| self.images[v].num().clone()));
        }
        let mut out = RationalFunction::zero();
        for v in &vars {
            out = &out + &(&f.partial(v) * &self.images[v]);
        }
        Ok(out)
    }

    fn check_universe(&self, other: &Self) -> Result<(), DiffError> {
        if self.images.keys().eq(other.images.keys()) {
            Ok(())
        } else {
            Err(DiffError::UniverseMismatch)
        }
    }

    /// `[d, e](z) = d(e(z)) - e(d(z))`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self, DiffError> {
        self.check_universe(other)?;
        let mut images = BTreeMap::new();
        for (v, dv) in &self.images {
            let ev = &other.images[v];
            images.insert(v.clone(), &self.apply(ev)? - &other.apply(dv)?);
        }
        Ok(PolyDerivation { images })
    }

    /// `a1 * d + a2 * e`.
    pub fn linear_combination(
        a1: &RationalFunction<V>,
        d: &Self,
        a2: &RationalFunction<V>,
        e: &Self,
    ) -> Result<Self, DiffError> {
        d.check_universe(e)?;
        let images = d
            .images
            .iter()
            .map(|(v, dv)| (v.clone(), &(a1 * dv) + &(a2 * &e.images[v])))
            .collect();
        Ok(PolyDerivation { images })
    }

    /// Whether `d` and `e` commute on every generator.
    pub fn commutes_with(&self, other: &Self) -> Result<bool, DiffError> {
        Ok(self.lie_bracket(other)?.is_zero())
    }
}

impl<V: Variable> fmt::Display for PolyDerivation<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|(v, r)| format!("{v} -> {r}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Jacobian matrix `df_r/dv_c`.
pub fn jacobian<V: Variable>(fs: &[RationalFunction<V>], vars: &[V]) -> Vec<Vec<RationalFunction<V>>> {
    fs.iter().map(|f| vars.iter().map(|v| f.partial(v)).collect()).collect()
}

/// For `f(x, y) = 0` with `|f| = |y|`, the Jacobian of the implicit function
/// `y = g(x)`: `J_g = -(df/dy)^-1 (df/dx)`, valid where `det(df/dy) != 0`.
pub fn implicit_delta<V: Variable>(
    fs: &[RationalFunction<V>],
    xs: &[V],
    ys: &[V],
) -> Result<Vec<Vec<RationalFunction<V>>>, DiffError> {
    if fs.len() != ys.len() {
        return Err(DiffError::DimensionMismatch { expected: ys.len(), found: fs.len() });
    }
    let fy = jacobian(fs, ys);
    let neg_fx: Vec<Vec<_>> = jacobian(fs, xs).into_iter().map(|row| row.into_iter().map(|e| -e).collect()).collect();
    linalg::solve(&fy, &neg_fx).ok_or(DiffError::SingularJacobian)
}
