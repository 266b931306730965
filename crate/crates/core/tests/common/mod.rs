//! Brute-force oracles, written without touching the production code paths.
#![allow(dead_code)]

use apsidon::epoly::{EPolynomial, Gaussian};
use apsidon::rational::{int, ratio, Rational};
use apsidon::FiniteSet;
use num::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Reduced form makes equality a field-by-field comparison.
fn same(a: &Rational, b: &Rational) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

/// `(i, j, e_i + e_j)` for every ordered pair.
fn pair_sums(e: &[Rational]) -> Vec<(usize, usize, Rational)> {
    let mut out = Vec::with_capacity(e.len() * e.len());
    for (i, a) in e.iter().enumerate() {
        for (j, b) in e.iter().enumerate() {
            out.push((i, j, a + b));
        }
    }
    out
}

/// Ordered quadruples `(a, b, c, d) ∈ E⁴` with `a + b = c + d`.
pub fn quadruples(e: &[Rational]) -> u64 {
    let sums = pair_sums(e);
    let mut n = 0;
    for (_, _, s) in &sums {
        for (_, _, t) in &sums {
            if same(s, t) {
                n += 1;
            }
        }
    }
    n
}

/// Any `a + b = c + d` with `{a, b} ≠ {c, d}`.
pub fn is_sidon(e: &[Rational]) -> bool {
    let sums = pair_sums(e);
    for (i, j, s) in &sums {
        for (k, l, t) in &sums {
            if same(s, t) && !((i == k && j == l) || (i == l && j == k)) {
                return false;
            }
        }
    }
    true
}

pub fn dirichlet(n: i64) -> u64 {
    let e: Vec<Rational> = (1..=n).map(int).collect();
    quadruples(&e)
}

/// `Σ c(a) c(b) conj(c(c)) conj(c(d))` over `a + b = c + d`.
pub fn bnorm4_pow4(f: &EPolynomial) -> Gaussian {
    let terms: Vec<(Rational, Gaussian)> = f.terms().map(|(l, c)| (l.clone(), c.clone())).collect();
    let mut acc = Gaussian::new(Rational::zero(), Rational::zero());
    for (a, ca) in &terms {
        for (b, cb) in &terms {
            for (c, cc) in &terms {
                for (d, cd) in &terms {
                    if a + b == c + d {
                        acc += ca.clone() * cb.clone() * cc.conj() * cd.conj();
                    }
                }
            }
        }
    }
    acc
}

pub fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Distinct rationals with numerators up to `num` and denominators up to `den`.
pub fn random_elements(rng: &mut ChaCha8Rng, max_len: usize, num: i64, den: i64) -> Vec<Rational> {
    let len = rng.gen_range(0..=max_len);
    let mut v: Vec<Rational> = Vec::new();
    while v.len() < len {
        let r = random_rational(rng, num, den);
        if !v.contains(&r) {
            v.push(r);
        }
    }
    v
}

/// A Sidon set of size `n` grown greedily from random candidates.
pub fn random_sidon(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = Vec::new();
    while v.len() < n {
        let r = random_rational(rng, 1000, 30);
        if v.contains(&r) {
            continue;
        }
        v.push(r);
        if !is_sidon(&v) {
            v.pop();
        }
    }
    v
}

pub fn set(v: &[Rational]) -> FiniteSet {
    v.iter().cloned().collect()
}

/// Bracket `[lo, lo + 2^-depth]` containing the Cantor staircase at `t ∈ [0, 1]`,
/// from the recursion `c(t) = c(3t)/2`, `1/2`, `1/2 + c(3t − 2)/2`.
pub fn cantor_bracket(t: &Rational, depth: u32) -> (Rational, Rational) {
    let third = ratio(1, 3);
    let two_thirds = ratio(2, 3);
    let half = ratio(1, 2);
    let mut t = t.clone();
    let mut lo = Rational::zero();
    let mut scale = Rational::one();
    for _ in 0..depth {
        if t <= third {
            if t.is_zero() {
                return (lo.clone(), lo);
            }
            t *= int(3);
        } else if t < two_thirds {
            lo += &scale * &half;
            return (lo.clone(), lo);
        } else {
            if t.is_one() {
                lo += &scale;
                return (lo.clone(), lo);
            }
            lo += &scale * &half;
            t = t * int(3) - int(2);
        }
        scale *= &half;
    }
    let hi = &lo + &scale;
    (lo, hi)
}
