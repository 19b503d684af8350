//! Dense Gaussian elimination over an exact field.

use num_traits::{One, Zero};

use super::{MultiPoly, Rational, RationalFunction, Variable};

/// Minimal field interface for elimination. `weight` guides pivot choice:
/// among nonzero candidates the lightest is used.
pub trait FieldElem: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn weight(&self) -> usize {
        0
    }
}

impl FieldElem for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl<V: Variable> FieldElem for RationalFunction<V> {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self.checked_div(o).expect("pivot is nonzero")
    }
    fn weight(&self) -> usize {
        let size = |p: &MultiPoly<V>| p.num_terms() * (1 + p.total_degree() as usize);
        size(self.num()) + size(self.den())
    }
}

/// Row-reduces `m` in place to echelon form; returns the pivot columns.
pub fn echelon<F: FieldElem>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(best) = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].weight()) else {
            continue;
        };
        m.swap(r, best);
        let inv = F::one().div(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let d = f.mul(&m[r][j]);
                        m[i][j] = m[i][j].sub(&d);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldElem>(m: &[Vec<F>]) -> usize {
    let mut m = m.to_vec();
    echelon(&mut m).len()
}

/// Solves `a * x = b` for square nonsingular `a` (`b` may have several
/// columns). Returns `None` when `a` is singular.
pub fn solve<F: FieldElem>(a: &[Vec<F>], b: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..n + k].to_vec()).collect())
}
