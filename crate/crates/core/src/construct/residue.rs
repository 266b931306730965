//! Residues modulo the Mersenne prime `2⁶¹ − 1`.
//!
//! Equal rationals have equal residues, so a residue absent from the index
//! proves non-membership without touching big integers. Hits are confirmed
//! exactly by the caller.

use std::collections::HashSet;

use num::{BigInt, Integer, ToPrimitive};

use crate::rational::Rational;
use crate::sets::FiniteSet;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub(crate) fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

fn reduce(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below 2^61")
}

/// `None` when the denominator is divisible by `P`.
pub(crate) fn residue(r: &Rational) -> Option<u64> {
    let d = reduce(r.denom());
    if d == 0 {
        return None;
    }
    Some(mul(reduce(r.numer()), pow(d, P - 2)))
}

/// The integer `c` as a residue.
pub(crate) fn small(c: i64) -> u64 {
    if c >= 0 {
        c as u64 % P
    } else {
        P - ((-c) as u64 % P)
    }
}

pub(crate) fn scale(c: u64, r: u64) -> u64 {
    mul(c, r)
}

#[derive(Clone, Default)]
pub(crate) struct ResidueIndex {
    residues: HashSet<u64>,
    /// Some element had no residue; the index cannot rule anything out.
    incomplete: bool,
}

impl ResidueIndex {
    pub(crate) fn new(set: &FiniteSet) -> Self {
        let mut residues = HashSet::with_capacity(set.len());
        for r in set.iter() {
            match residue(r) {
                Some(x) => {
                    residues.insert(x);
                }
                None => return ResidueIndex { residues: HashSet::new(), incomplete: true },
            }
        }
        ResidueIndex { residues, incomplete: false }
    }

    /// `false` only if no element of the indexed set can have residue `x`.
    pub(crate) fn may_contain(&self, x: u64) -> bool {
        self.incomplete || self.residues.contains(&x)
    }
}
