//! Multivariate polynomial gcd over the rationals.
//!
//! Coprimality is first tested on modular univariate images; otherwise the
//! gcd is computed by the modular algorithm.

use super::modgcd;
use super::poly::{Monomial, MultiPoly, Variable};
use super::Rational;

/// Greatest common divisor, normalized to coprime integer coefficients with
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd<V: Variable>(a: &MultiPoly<V>, b: &MultiPoly<V>) -> MultiPoly<V> {
    if a.is_zero() {
        return b.integer_normalized().1;
    }
    if b.is_zero() {
        return a.integer_normalized().1;
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let a = a.integer_normalized().1;
    let b = b.integer_normalized().1;
    if a == b {
        return a;
    }
    // Cheap divisibility shortcut; common for denominators built from powers.
    let (small, large) = if a.num_terms() <= b.num_terms() {
        (&a, &b)
    } else {
        (&b, &a)
    };
    if small.total_degree() <= large.total_degree() && large.div_exact(small).is_some() {
        return small.clone();
    }

    modular(&a, &b)
}

/// Hands off to the modular algorithm, with variables ordered by
/// decreasing degree so that the evaluated ones are the cheap ones.
fn modular<V: Variable>(a: &MultiPoly<V>, b: &MultiPoly<V>) -> MultiPoly<V> {
    let (va, vb) = (a.variables(), b.variables());
    let mut vars: Vec<V> = va.union(&vb).cloned().collect();
    vars.sort_by_key(|v| std::cmp::Reverse(a.degree_in(v).max(b.degree_in(v))));
    let to_int = |p: &MultiPoly<V>| -> modgcd::IntPoly {
        p.terms()
            .map(|(m, c)| (vars.iter().map(|v| m.degree_in(v)).collect(), c.numer().clone()))
            .collect()
    };
    let shared: Vec<usize> = (0..vars.len()).filter(|i| va.contains(&vars[*i]) && vb.contains(&vars[*i])).collect();
    let (ia, ib) = (to_int(a), to_int(b));
    if modgcd::coprime(&ia, &ib, &shared) {
        return MultiPoly::one();
    }
    let g = modgcd::gcd(&ia, &ib);
    MultiPoly::from_terms(g.into_iter().map(|(e, c)| {
        let powers = vars.iter().cloned().zip(e).filter(|(_, k)| *k > 0);
        (Monomial::from_powers(powers), Rational::from_integer(c))
    }))
    .integer_normalized()
    .1
}

/// Pairwise coprime nonconstant polynomials such that every input is a
/// constant times a product of their powers, together with those exponents.
pub(crate) fn gcd_free_basis<V: Variable>(polys: &[&MultiPoly<V>]) -> (Vec<MultiPoly<V>>, Vec<Vec<u32>>) {
    let mut basis: Vec<MultiPoly<V>> = Vec::new();
    for p in polys {
        let mut pending = vec![p.integer_normalized().1];
        while let Some(f) = pending.pop() {
            if f.is_constant() {
                continue;
            }
            let hit = basis.iter().enumerate().find_map(|(i, b)| {
                let g = gcd(&f, b);
                (!g.is_constant()).then_some((i, g))
            });
            match hit {
                None => basis.push(f),
                Some((i, g)) => {
                    let b = basis.swap_remove(i);
                    pending.push(b.div_exact(&g).expect("gcd divides"));
                    pending.push(f.div_exact(&g).expect("gcd divides"));
                    pending.push(g);
                }
            }
        }
    }
    let exps = polys
        .iter()
        .map(|p| {
            let mut rest = (*p).clone();
            basis
                .iter()
                .map(|b| {
                    let mut k = 0;
                    while let Some(q) = rest.div_exact(b) {
                        rest = q;
                        k += 1;
                    }
                    k
                })
                .collect()
        })
        .collect();
    (basis, exps)
}

/// Gcd of a list of polynomials.
pub fn gcd_all<'a, V: Variable + 'a>(polys: impl IntoIterator<Item = &'a MultiPoly<V>>) -> MultiPoly<V> {
    let mut acc = MultiPoly::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            return MultiPoly::one();
        }
    }
    acc
}

/// Content of `p` viewed as a polynomial in `v`.
pub fn content_in<V: Variable>(p: &MultiPoly<V>, v: &V) -> MultiPoly<V> {
    let coeffs = p.coefficients_in(v);
    // Fewest-term coefficients first tends to reach 1 quickly.
    let mut cs: Vec<&MultiPoly<V>> = coeffs.values().collect();
    cs.sort_by_key(|c| c.num_terms());
    gcd_all(cs)
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
pub fn pseudo_remainder<V: Variable>(a: &MultiPoly<V>, b: &MultiPoly<V>, v: &V) -> MultiPoly<V> {
    let db = b.degree_in(v);
    let bc = b.coefficients_in(v);
    let lb = bc.get(&db).cloned().unwrap_or_default();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v);
        if dr < db {
            return r;
        }
        let lr = r.coefficients_in(v).remove(&dr).unwrap_or_default();
        let shift = MultiPoly::from_coefficients_in(v, &[(dr - db, MultiPoly::one())].into_iter().collect());
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
        r = r.integer_normalized().1;
    }
}
