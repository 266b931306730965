//! Progressions whose images avoid every forced linear relation, and the
//! inductive chain built from them.
//!
//! A progression `x + k·y`, `k = 1..N`, is *admissible* for a forbidden set
//! `S` when `Σ v_j φ(x + k_j y) ∉ S` for every `v` in the seven-vector family
//! and every `k` with pairwise-distinct entries in `[1, N]`. With `S = {0}`
//! this makes the image injective and Sidon; with `S = γ(M)` it also keeps
//! the image off `M` and keeps `M ∪ image` Sidon.

mod affine;
mod chain;
mod kernel;
mod progression;
mod residue;

use std::fmt;

use residue::ResidueIndex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mappings::Mapping;
use crate::rational::{self, Rational};
use crate::sets::FiniteSet;

pub use affine::{check_affine_copy, check_affine_copy_window, find_affine_copy, AffineCheck, AffineCopy};
pub use chain::{build_chain, extend_chain, ChainError, ChainState, Stage};
pub use kernel::{vandermonde_det, verify_kernel, KernelCounterexample, KernelMatrix, VerificationReport};
pub use progression::{find_progression, Found};

/// The seven coefficient vectors, in their fixed order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VFamily;

impl VFamily {
    pub const VECTORS: [[i64; 4]; 7] =
        [[1, 1, -1, -1], [1, 1, -2, 0], [1, -1, 0, 0], [1, 1, 0, 0], [2, 0, 0, 0], [1, 1, -1, 0], [1, 0, 0, 0]];

    pub fn vectors(&self) -> &'static [[i64; 4]; 7] {
        &Self::VECTORS
    }

    /// Positions where `v` is nonzero.
    pub fn support(v: &[i64; 4]) -> Vec<usize> {
        (0..4).filter(|&j| v[j] != 0).collect()
    }
}

/// `{x + k·y : k = 1..N}` with `y ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    #[serde(with = "rational::serde_str")]
    x: Rational,
    #[serde(with = "rational::serde_str")]
    y: Rational,
    n: usize,
}

impl Progression {
    pub fn new(x: Rational, y: Rational, n: usize) -> Result<Self> {
        if num::Zero::is_zero(&y) {
            return Err(Error::Precondition("progression step y must be nonzero".into()));
        }
        if n == 0 {
            return Err(Error::Precondition("progression length must be at least 1".into()));
        }
        Ok(Progression { x, y, n })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn term(&self, k: usize) -> Rational {
        &self.x + &self.y * rational::int(k as i64)
    }

    /// Terms for `k = 1..N`.
    pub fn terms(&self) -> Vec<Rational> {
        (1..=self.n).map(|k| self.term(k)).collect()
    }

    /// `φ(x + k·y)` for `k = 1..N`, in order.
    pub fn image_values(&self, phi: &Mapping) -> Vec<Rational> {
        self.terms().iter().map(|t| phi.eval(t)).collect()
    }

    pub fn as_set(&self) -> FiniteSet {
        self.terms().into_iter().collect()
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} + k*{} : k = 1..{}}}", self.x, self.y, self.n)
    }
}

/// Progression length and forbidden values for one admissibility check.
#[derive(Clone)]
pub struct ConstraintSpec {
    n: usize,
    forbidden: FiniteSet,
    index: ResidueIndex,
}

impl PartialEq for ConstraintSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.forbidden == other.forbidden
    }
}

impl Eq for ConstraintSpec {}

impl fmt::Debug for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintSpec").field("n", &self.n).field("forbidden", &self.forbidden).finish()
    }
}

impl ConstraintSpec {
    pub fn new(n: usize, forbidden: FiniteSet) -> Result<Self> {
        if n < 4 {
            return Err(Error::Precondition(format!("constraint length N must be at least 4, got {n}")));
        }
        let index = ResidueIndex::new(&forbidden);
        Ok(ConstraintSpec { n, forbidden, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forbidden(&self) -> &FiniteSet {
        &self.forbidden
    }
}

/// A constraint hit: `Σ v_j φ(x + k_j y) = value ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based position of `v` in the family.
    pub v_index: usize,
    pub v: [i64; 4],
    /// Support slots carry the offending indices; the remaining slots are
    /// filled with the smallest unused indices so that `k` has distinct entries.
    pub k: [usize; 4],
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

impl Violation {
    /// Recomputes the constraint value from scratch.
    pub fn recompute(&self, phi: &Mapping, x: &Rational, y: &Rational) -> Rational {
        (0..4)
            .filter(|&j| self.v[j] != 0)
            .map(|j| rational::int(self.v[j]) * phi.eval(&(x + y * rational::int(self.k[j] as i64))))
            .fold(Rational::from_integer(0.into()), |a, b| a + b)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{} = {:?} with k = {:?} gives {} (forbidden)", self.v_index, self.v, self.k, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    Violated(Violation),
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible)
    }
}

/// Calls `f` on every injective assignment of `slots` positions to `1..=n`,
/// in lexicographic order; stops early when `f` returns `true`.
fn for_each_injection(slots: usize, n: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        depth: usize,
        slots: usize,
        n: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == slots {
            return f(cur);
        }
        for k in 1..=n {
            if used[k] {
                continue;
            }
            used[k] = true;
            cur.push(k);
            let stop = rec(depth + 1, slots, n, used, cur, f);
            cur.pop();
            used[k] = false;
            if stop {
                return true;
            }
        }
        false
    }
    let mut used = vec![false; n + 1];
    let mut cur = Vec::with_capacity(slots);
    rec(0, slots, n, &mut used, &mut cur, &mut f)
}

fn fill_k(support: &[usize], chosen: &[usize]) -> [usize; 4] {
    let mut k = [0usize; 4];
    for (&pos, &val) in support.iter().zip(chosen) {
        k[pos] = val;
    }
    let mut spare = (1..).filter(|c| !chosen.contains(c));
    for slot in k.iter_mut() {
        if *slot == 0 {
            *slot = spare.next().expect("unbounded iterator");
        }
    }
    k
}

/// The `k` tuples the scan visits for `v`: distinct values on the support of
/// `v`, lexicographic, with the other slots filled by the smallest spare values.
pub fn support_tuples(v: &[i64; 4], n: usize) -> Vec<[usize; 4]> {
    let support = VFamily::support(v);
    let mut out = Vec::new();
    for_each_injection(support.len(), n, |chosen| {
        out.push(fill_k(&support, chosen));
        false
    });
    out
}

/// Scans the family in order (vector index major, then `k` lexicographic over
/// the vector's support) against precomputed image values `values[k-1]`.
pub(crate) fn scan_constraints(values: &[Rational], spec: &ConstraintSpec) -> Verdict {
    let residues: Option<Vec<u64>> = values.iter().map(residue::residue).collect();
    let n = values.len();
    let mut hit = None;
    for (idx, v) in VFamily::VECTORS.iter().enumerate() {
        let support = VFamily::support(v);
        let coeffs: Vec<Rational> = support.iter().map(|&j| rational::int(v[j])).collect();
        let small: Vec<u64> = support.iter().map(|&j| residue::small(v[j])).collect();
        let found = for_each_injection(support.len(), n, |chosen| {
            if let Some(res) = &residues {
                let r =
                    small.iter().zip(chosen).fold(0, |acc, (&c, &k)| residue::add(acc, residue::scale(c, res[k - 1])));
                if !spec.index.may_contain(r) {
                    return false;
                }
            }
            let mut sum = Rational::from_integer(0.into());
            for (c, &k) in coeffs.iter().zip(chosen) {
                sum += c * &values[k - 1];
            }
            if spec.forbidden.contains(&sum) {
                hit = Some(Violation { v_index: idx + 1, v: *v, k: fill_k(&support, chosen), value: sum });
                true
            } else {
                false
            }
        });
        if found {
            break;
        }
    }
    match hit {
        Some(v) => Verdict::Violated(v),
        None => Verdict::Admissible,
    }
}

/// Checks that no constraint value of `p` under `phi` lands in `spec`'s
/// forbidden set; returns the first violation in scan order otherwise.
pub fn check_progression(phi: &Mapping, p: &Progression, spec: &ConstraintSpec) -> Result<Verdict> {
    if p.len() != spec.n {
        return Err(Error::Precondition(format!(
            "progression length {} does not match constraint length {}",
            p.len(),
            spec.n
        )));
    }
    Ok(scan_constraints(&p.image_values(phi), spec))
}
