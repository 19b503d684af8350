//! Modular multivariate gcd over the integers.
//!
//! Images modulo word-sized primes are computed by evaluating variables one
//! at a time and interpolating back; images are combined by Chinese
//! remaindering until the candidate divides both inputs. Polynomials are
//! sparse maps from exponent vectors to coefficients, ordered
//! lexicographically with the first variable most significant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Exps = Vec<u32>;
/// Polynomial over `Z_p`.
type ModPoly = BTreeMap<Exps, u64>;
/// Polynomial over `Z`.
pub(crate) type IntPoly = BTreeMap<Exps, BigInt>;

#[derive(Clone, Copy)]
struct Field {
    p: u64,
}

impl Field {
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    fn reduce(self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    // Dense univariate polynomials, lowest degree first, no trailing zeros.

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn u_eval(self, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, c| self.add(self.mul(acc, x), *c))
    }

    fn u_mul(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(*x, *y));
            }
        }
        out
    }

    fn u_divrem(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv = self.inv(*b.last().unwrap());
        let mut q = vec![0; r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let c = self.mul(r[k + b.len() - 1], inv);
            q[k] = c;
            if c != 0 {
                for (j, bj) in b.iter().enumerate() {
                    r[k + j] = self.sub(r[k + j], self.mul(c, *bj));
                }
            }
        }
        Self::trim(&mut r);
        (q, r)
    }

    fn u_monic(self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let inv = self.inv(l);
                a.iter().map(|c| self.mul(*c, inv)).collect()
            }
        }
    }

    fn u_gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.u_divrem(&a, &b).1;
            a = b;
            b = r;
        }
        self.u_monic(&a)
    }

    // Sparse multivariate helpers.

    fn lc(a: &ModPoly) -> u64 {
        *a.values().next_back().unwrap()
    }

    fn scale(self, a: &ModPoly, c: u64) -> ModPoly {
        a.iter().map(|(e, v)| (e.clone(), self.mul(*v, c))).filter(|(_, v)| *v != 0).collect()
    }

    fn monic(self, a: &ModPoly) -> ModPoly {
        self.scale(a, self.inv(Self::lc(a)))
    }

    /// Exact quotient, or `None` if `b` does not divide `a`.
    fn div_exact(self, a: &ModPoly, b: &ModPoly) -> Option<ModPoly> {
        let (lm, lc) = b.iter().next_back().map(|(e, v)| (e.clone(), *v))?;
        let inv = self.inv(lc);
        let mut rem = a.clone();
        let mut quot = ModPoly::new();
        while let Some((rm, rc)) = rem.iter().next_back() {
            if rm.iter().zip(&lm).any(|(x, y)| x < y) {
                return None;
            }
            let qm: Exps = rm.iter().zip(&lm).map(|(x, y)| x - y).collect();
            let qc = self.mul(*rc, inv);
            for (m, c) in b {
                let key: Exps = m.iter().zip(&qm).map(|(x, y)| x + y).collect();
                let d = self.mul(*c, qc);
                let slot = rem.entry(key.clone()).or_insert(0);
                *slot = self.sub(*slot, d);
                if *slot == 0 {
                    rem.remove(&key);
                }
            }
            quot.insert(qm, qc);
        }
        Some(quot)
    }

    /// Groups by all exponents but the last: coefficients become dense
    /// univariate polynomials in the last variable.
    fn split_last(a: &ModPoly) -> BTreeMap<Exps, Vec<u64>> {
        let mut out: BTreeMap<Exps, Vec<u64>> = BTreeMap::new();
        for (e, v) in a {
            let (head, last) = e.split_at(e.len() - 1);
            let u = out.entry(head.to_vec()).or_default();
            let d = last[0] as usize;
            if u.len() <= d {
                u.resize(d + 1, 0);
            }
            u[d] = *v;
        }
        out
    }

    fn join_last(a: &BTreeMap<Exps, Vec<u64>>) -> ModPoly {
        let mut out = ModPoly::new();
        for (head, u) in a {
            for (d, v) in u.iter().enumerate() {
                if *v != 0 {
                    let mut e = head.clone();
                    e.push(d as u32);
                    out.insert(e, *v);
                }
            }
        }
        out
    }

    /// Monic gcd in `Z_p[x_1..x_k]`, `k >= 1`, both arguments nonzero.
    fn gcd(self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let k = a.keys().next().unwrap().len();
        let sa = Self::split_last(a);
        let sb = Self::split_last(b);
        if k == 1 {
            let g = self.u_gcd(&sa[&vec![]], &sb[&vec![]]);
            return Self::join_last(&BTreeMap::from([(vec![], g)]));
        }
        // Contents in Z_p[y], y the last variable.
        let content = |s: &BTreeMap<Exps, Vec<u64>>| {
            let mut g: Vec<u64> = Vec::new();
            for u in s.values() {
                g = self.u_gcd(&g, u);
                if g.len() == 1 {
                    break;
                }
            }
            g
        };
        let (ca, cb) = (content(&sa), content(&sb));
        let c = self.u_gcd(&ca, &cb);
        let prim = |s: BTreeMap<Exps, Vec<u64>>, cont: &[u64]| -> BTreeMap<Exps, Vec<u64>> {
            s.into_iter().map(|(h, u)| (h, self.u_divrem(&u, cont).0)).collect()
        };
        let sa = prim(sa, &ca);
        let sb = prim(sb, &cb);
        let la = sa.values().next_back().unwrap().clone();
        let lb = sb.values().next_back().unwrap().clone();
        let g = self.u_gcd(&la, &lb);
        let deg_y = |s: &BTreeMap<Exps, Vec<u64>>| s.values().map(|u| u.len() - 1).max().unwrap();
        let bound = g.len() - 1 + deg_y(&sa).min(deg_y(&sb));
        let (a, b) = (Self::join_last(&sa), Self::join_last(&sb));

        let with_content = |h: ModPoly| {
            let s: BTreeMap<Exps, Vec<u64>> = Self::split_last(&h).into_iter().map(|(hd, u)| (hd, self.u_mul(&u, &c))).collect();
            self.monic(&Self::join_last(&s))
        };

        let eval = |s: &BTreeMap<Exps, Vec<u64>>, x: u64| -> ModPoly {
            s.iter()
                .map(|(h, u)| (h.clone(), self.u_eval(u, x)))
                .filter(|(_, v)| *v != 0)
                .collect()
        };
        let mut interp: Option<(Exps, BTreeMap<Exps, Vec<u64>>, Vec<u64>)> = None;
        let mut points = 0usize;
        for alpha in 0..self.p {
            let galpha = self.u_eval(&g, alpha);
            if galpha == 0 {
                continue;
            }
            let (ea, eb) = (eval(&sa, alpha), eval(&sb, alpha));
            if ea.is_empty() || eb.is_empty() {
                continue;
            }
            let h = self.scale(&self.gcd(&ea, &eb), galpha);
            let lead = h.keys().next_back().unwrap().clone();
            if lead.iter().all(|e| *e == 0) {
                return with_content(BTreeMap::from([(vec![0; k], 1)]));
            }
            match &mut interp {
                Some((deg, _, _)) if lead > *deg => continue,
                Some((deg, acc, modulus)) if lead == *deg => {
                    // acc += (h - acc(alpha)) * modulus / modulus(alpha)
                    let w = self.inv(self.u_eval(modulus, alpha));
                    let mut heads: Vec<Exps> = acc.keys().cloned().collect();
                    heads.extend(h.keys().cloned());
                    heads.sort();
                    heads.dedup();
                    for head in heads {
                        let cur = acc.get(&head).map_or(0, |u| self.u_eval(u, alpha));
                        let want = h.get(&head).copied().unwrap_or(0);
                        let delta = self.mul(self.sub(want, cur), w);
                        if delta != 0 {
                            let corr: Vec<u64> = modulus.iter().map(|m| self.mul(*m, delta)).collect();
                            let u = acc.entry(head).or_default();
                            if u.len() < corr.len() {
                                u.resize(corr.len(), 0);
                            }
                            for (i, v) in corr.into_iter().enumerate() {
                                u[i] = self.add(u[i], v);
                            }
                            Self::trim(u);
                        }
                    }
                    acc.retain(|_, u| !u.is_empty());
                    *modulus = self.u_mul(modulus, &[self.p - alpha, 1]);
                    points += 1;
                }
                _ => {
                    let acc = h.iter().map(|(hd, v)| (hd.clone(), vec![*v])).collect();
                    interp = Some((lead, acc, vec![self.p - alpha, 1]));
                    points = 1;
                }
            }
            if points > bound {
                let (_, acc, _) = interp.as_ref().unwrap();
                let cont = content(acc);
                let cand = Self::join_last(&prim(acc.clone(), &cont));
                if self.div_exact(&a, &cand).is_some() && self.div_exact(&b, &cand).is_some() {
                    return with_content(cand);
                }
            }
        }
        unreachable!("ran out of evaluation points")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let f = Field { p: n };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes() -> impl Iterator<Item = u64> {
    (0..).map(|k| (1u64 << 61) - 1 - 2 * k).filter(|n| is_prime(*n))
}

/// Sufficient test for coprimality. A common factor of positive degree in
/// `x_i` survives specializing the other variables modulo `p` at a point
/// where the leading coefficient of `a` in `x_i` does not vanish, so
/// coprime univariate images for every shared variable certify `gcd = 1`.
pub(crate) fn coprime(a: &IntPoly, b: &IntPoly, shared: &[usize]) -> bool {
    if shared.is_empty() {
        return true;
    }
    let f = Field { p: (1 << 61) - 1 };
    let k = a.keys().next().unwrap().len();
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    'vars: for &i in shared {
        for _ in 0..3 {
            let point: Vec<u64> = (0..k)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (seed >> 3) % f.p
                })
                .collect();
            let image = |q: &IntPoly| {
                let mut u: Vec<u64> = Vec::new();
                for (e, c) in q {
                    let mut t = f.reduce(c);
                    for (j, d) in e.iter().enumerate() {
                        if j != i {
                            t = f.mul(t, f.pow(point[j], *d as u64));
                        }
                    }
                    let d = e[i] as usize;
                    if u.len() <= d {
                        u.resize(d + 1, 0);
                    }
                    u[d] = f.add(u[d], t);
                }
                u
            };
            let ia = image(a);
            if ia.last() == Some(&0) {
                continue;
            }
            let mut ib = image(b);
            Field::trim(&mut ib);
            if f.u_gcd(&ia, &ib).len() == 1 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

fn div_exact_int(a: &IntPoly, b: &IntPoly) -> bool {
    let Some((lm, lc)) = b.iter().next_back() else {
        return false;
    };
    let mut rem = a.clone();
    while let Some((rm, rc)) = rem.iter().next_back() {
        if rm.iter().zip(lm).any(|(x, y)| x < y) {
            return false;
        }
        let (qc, r) = rc.div_rem(lc);
        if !r.is_zero() {
            return false;
        }
        let qm: Exps = rm.iter().zip(lm).map(|(x, y)| x - y).collect();
        for (m, c) in b {
            let key: Exps = m.iter().zip(&qm).map(|(x, y)| x + y).collect();
            let d = c * &qc;
            let slot = rem.entry(key.clone()).or_insert_with(BigInt::zero);
            *slot -= d;
            if slot.is_zero() {
                rem.remove(&key);
            }
        }
    }
    true
}

/// Gcd of two nonzero integer polynomials with primitive integer content,
/// up to sign; the result has positive leading coefficient.
pub(crate) fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let k = a.keys().next().unwrap().len();
    if k == 0 {
        return IntPoly::from([(vec![], BigInt::one())]);
    }
    let la = a.values().next_back().unwrap();
    let lb = b.values().next_back().unwrap();
    let gamma = la.gcd(lb);
    let mut acc: Option<(Exps, IntPoly, BigInt)> = None;
    let mut last_sym: Option<IntPoly> = None;
    for p in primes() {
        let f = Field { p };
        if f.reduce(la) == 0 || f.reduce(lb) == 0 {
            continue;
        }
        let image = |q: &IntPoly| -> ModPoly {
            q.iter().map(|(e, c)| (e.clone(), f.reduce(c))).filter(|(_, v)| *v != 0).collect()
        };
        let h = f.scale(&f.gcd(&image(a), &image(b)), f.reduce(&gamma));
        let lead = h.keys().next_back().unwrap().clone();
        if lead.iter().all(|e| *e == 0) {
            return IntPoly::from([(vec![0; k], BigInt::one())]);
        }
        let pb = BigInt::from(p);
        match &mut acc {
            Some((deg, _, _)) if lead > *deg => continue,
            Some((deg, sum, m)) if lead == *deg => {
                // CRT: x = s (mod m), x = v (mod p).
                let minv = BigInt::from(f.inv(f.reduce(m)));
                let mut keys: Vec<Exps> = sum.keys().cloned().collect();
                keys.extend(h.keys().cloned());
                keys.sort();
                keys.dedup();
                for key in keys {
                    let s = sum.get(&key).cloned().unwrap_or_default();
                    let v = BigInt::from(h.get(&key).copied().unwrap_or(0));
                    let t = ((v - &s) * &minv).mod_floor(&pb);
                    let x = s + &*m * t;
                    if x.is_zero() {
                        sum.remove(&key);
                    } else {
                        sum.insert(key, x);
                    }
                }
                *m *= &pb;
            }
            _ => {
                let sum = h.iter().map(|(e, v)| (e.clone(), BigInt::from(*v))).collect();
                acc = Some((lead, sum, pb.clone()));
                last_sym = None;
                continue;
            }
        }
        let (_, sum, m) = acc.as_ref().unwrap();
        let half = m / 2;
        let sym: IntPoly = sum
            .iter()
            .map(|(e, c)| (e.clone(), if *c > half { c - m } else { c.clone() }))
            .collect();
        if last_sym.as_ref() == Some(&sym) {
            let content = sym.values().fold(BigInt::zero(), |g, c| g.gcd(c));
            let mut cand: IntPoly = sym.iter().map(|(e, c)| (e.clone(), c / &content)).collect();
            if cand.values().next_back().unwrap().is_negative() {
                cand.values_mut().for_each(|c| *c = -c.clone());
            }
            if div_exact_int(a, &cand) && div_exact_int(b, &cand) {
                return cand;
            }
        }
        last_sym = Some(sym);
    }
    unreachable!("primes are unbounded")
}
