//! Finite unions of closed rational intervals, fat Cantor stages, and the
//! search for progressions whose terms fall in prescribed sets.
//!
//! Interior points of a canonical union are exactly the density points of
//! the union, so "term lies in the set's interior" is decided exactly.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::Found;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::search::{RationalSampler, Rejection, SearchConfig, SearchFailure};

/// Sorted, pairwise disjoint, non-touching closed intervals `[l, r]`, `l < r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "UnionWire", into = "UnionWire")]
pub struct IntervalUnion {
    intervals: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct UnionWire {
    intervals: Vec<[String; 2]>,
}

impl TryFrom<UnionWire> for IntervalUnion {
    type Error = Error;

    fn try_from(w: UnionWire) -> Result<Self> {
        let ivs = w
            .intervals
            .iter()
            .map(|[l, r]| Ok((rational::parse(l)?, rational::parse(r)?)))
            .collect::<Result<Vec<_>>>()?;
        IntervalUnion::new(ivs)
    }
}

impl From<IntervalUnion> for UnionWire {
    fn from(u: IntervalUnion) -> Self {
        UnionWire { intervals: u.intervals.iter().map(|(l, r)| [rational::format(l), rational::format(r)]).collect() }
    }
}

impl IntervalUnion {
    /// Canonicalizes arbitrary closed intervals: sorts, merges overlapping or
    /// touching ones and drops single points. `l > r` is an error.
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        if let Some((l, r)) = intervals.iter().find(|(l, r)| l > r) {
            return Err(Error::Malformed(format!("interval [{l}, {r}] has left > right")));
        }
        Ok(Self::canonical(intervals))
    }

    fn canonical(mut intervals: Vec<(Rational, Rational)>) -> Self {
        intervals.retain(|(l, r)| l < r);
        intervals.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(intervals.len());
        for (l, r) in intervals {
            match out.last_mut() {
                Some(last) if l <= last.1 => {
                    if r > last.1 {
                        last.1 = r;
                    }
                }
                _ => out.push((l, r)),
            }
        }
        IntervalUnion { intervals: out }
    }

    /// Parses `"l,r;l,r;..."`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut ivs = Vec::new();
        for part in s.split(';').filter(|p| !p.trim().is_empty()) {
            let v = rational::parse_list(part)?;
            if v.len() != 2 {
                return Err(Error::Malformed(format!("interval takes `l,r`, got `{part}`")));
            }
            ivs.push((v[0].clone(), v[1].clone()));
        }
        Self::new(ivs)
    }

    pub fn single(l: Rational, r: Rational) -> Result<Self> {
        Self::new(vec![(l, r)])
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().fold(Rational::zero(), |acc, (l, r)| acc + (r - l))
    }

    /// Index of the interval whose open interior contains `t`.
    pub fn interior_index(&self, t: &Rational) -> Option<usize> {
        let i = self.intervals.partition_point(|(l, _)| l < t);
        (i > 0 && t < &self.intervals[i - 1].1).then(|| i - 1)
    }

    pub fn contains_interior(&self, t: &Rational) -> bool {
        self.interior_index(t).is_some()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let i = self.intervals.partition_point(|(l, _)| l <= t);
        i > 0 && t <= &self.intervals[i - 1].1
    }

    /// Closed intersection with point components dropped.
    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let l = std::cmp::max(&a[i].0, &b[j].0);
            let r = std::cmp::min(&a[i].1, &b[j].1);
            if l < r {
                out.push((l.clone(), r.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::canonical(out)
    }

    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|(l, r)| {
            let i = other.intervals.partition_point(|(ol, _)| ol <= l);
            i > 0 && r <= &other.intervals[i - 1].1
        })
    }

    /// `[min, max]` over all intervals.
    pub fn hull(&self) -> Option<(Rational, Rational)> {
        Some((self.intervals.first()?.0.clone(), self.intervals.last()?.1.clone()))
    }

    /// Open gaps between consecutive intervals.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        self.intervals.windows(2).map(|w| (w[0].1.clone(), w[1].0.clone())).collect()
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.intervals.iter().map(|(l, r)| format!("[{l}, {r}]")).collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// Measure of `cl(E1°) ∩ cl(E2°)`; for canonical unions the closure of the
/// interior is the union itself.
pub fn closure_density_intersection(u1: &IntervalUnion, u2: &IntervalUnion) -> Rational {
    u1.intersection(u2).measure()
}

/// Stage `m` of the Smith–Volterra–Cantor set: step `k` removes an open
/// middle interval of length `4^-k` from each of the `2^(k-1)` intervals.
pub fn fat_cantor(stage: u32) -> IntervalUnion {
    let mut ivs = vec![(Rational::zero(), Rational::one())];
    for k in 1..=stage {
        let half = Rational::new(1.into(), num::BigInt::from(2) * num::pow(num::BigInt::from(4), k as usize));
        let mut next = Vec::with_capacity(ivs.len() * 2);
        for (l, r) in ivs {
            let mid = (&l + &r) / rational::int(2);
            next.push((l, &mid - &half));
            next.push((&mid + &half, r));
        }
        ivs = next;
    }
    IntervalUnion { intervals: ivs }
}

/// `1 − Σ_{k=1}^m 2^(k−1)/4^k`.
pub fn fat_cantor_measure(stage: u32) -> Rational {
    (1..=stage).fold(Rational::one(), |acc, k| {
        acc - Rational::new(num::pow(num::BigInt::from(2), k as usize - 1), num::pow(num::BigInt::from(4), k as usize))
    })
}

/// Intervals of length `4^-(m+2)` centred in each gap of `fat_cantor(m)`.
pub fn gap_probes(stage: u32) -> IntervalUnion {
    let half = Rational::new(1.into(), num::BigInt::from(2) * num::pow(num::BigInt::from(4), stage as usize + 2));
    let ivs = fat_cantor(stage)
        .gaps()
        .into_iter()
        .map(|(l, r)| {
            let c = (l + r) / rational::int(2);
            (&c - &half, &c + &half)
        })
        .collect();
    IntervalUnion::canonical(ivs)
}

/// Which of the two sets each term `k = 1..N` must fall in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    assignment: Vec<u8>,
}

impl Pattern {
    pub fn new(assignment: Vec<u8>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::Precondition("pattern needs N >= 1".into()));
        }
        if assignment.iter().any(|&a| a != 1 && a != 2) {
            return Err(Error::Malformed("pattern entries must be 1 or 2".into()));
        }
        Ok(Pattern { assignment })
    }

    /// Odd terms in set 1, even terms in set 2.
    pub fn alternating(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|k| if k % 2 == 1 { 1 } else { 2 }).collect())
    }

    /// Parses `"1,2,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| Error::Malformed(format!("bad pattern entry `{p}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Target set (1 or 2) of term `k`, 1-based.
    pub fn target(&self, k: usize) -> u8 {
        self.assignment[k - 1]
    }
}

/// Checks every term `x + k·y` against the interior of its assigned set.
pub fn verify_pattern(
    e1: &IntervalUnion,
    e2: &IntervalUnion,
    pattern: &Pattern,
    x: &Rational,
    y: &Rational,
) -> std::result::Result<(), Rejection> {
    if y.is_zero() {
        return Err(Rejection::Degenerate);
    }
    for k in 1..=pattern.n() {
        let term = x + y * rational::int(k as i64);
        let set = if pattern.target(k) == 1 { e1 } else { e2 };
        if !set.contains_interior(&term) {
            return Err(Rejection::PatternMiss { k, term });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternedAp {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

/// Candidate schedule: first the progression spreading `N` terms evenly over
/// the joint hull, then alternately
/// * a log-spaced step `y` with `x` placing term 1 inside a random interval
///   of its target set, and
/// * two random terms `a < b` pinned to random interior points of random
///   intervals of their target sets, which fixes `(x, y)`.
struct PatternCandidates<'a> {
    e1: &'a IntervalUnion,
    e2: &'a IntervalUnion,
    pattern: &'a Pattern,
    sampler: RationalSampler,
    hull: (Rational, Rational),
    min_len: Rational,
    issued: u64,
}

const LOG_GRID_LEVELS: u32 = 24;

impl<'a> PatternCandidates<'a> {
    fn target(&self, k: usize) -> &'a IntervalUnion {
        if self.pattern.target(k) == 1 {
            self.e1
        } else {
            self.e2
        }
    }

    fn random_point(&mut self, k: usize) -> Option<Rational> {
        let set = self.target(k);
        if set.is_empty() {
            return None;
        }
        let (l, r) = set.intervals()[self.sampler.below(set.len())].clone();
        Some(self.sampler.in_open(&l, &r))
    }

    fn log_grid(&mut self) -> Option<(Rational, Rational)> {
        let n = self.pattern.n() as i64;
        let width = &self.hull.1 - &self.hull.0;
        // from the hull width per term down to a fraction of the thinnest interval
        let top = width / rational::int(n.max(1));
        let level = self.sampler.below(LOG_GRID_LEVELS as usize + 1) as u32;
        let mut y = top * Rational::new(1.into(), num::pow(num::BigInt::from(2), level as usize));
        if y < self.min_len {
            y = self.min_len.clone() / rational::int(4);
        }
        // jitter within [y, 2y)
        y = self.sampler.in_open(&y, &(&y * rational::int(2)));
        if self.sampler.coin() {
            y = -y;
        }
        let p = self.random_point(1)?;
        Some((p - &y, y))
    }

    fn two_anchor(&mut self) -> Option<(Rational, Rational)> {
        let n = self.pattern.n();
        if n < 2 {
            return self.log_grid();
        }
        let a = 1 + self.sampler.below(n);
        let mut b = 1 + self.sampler.below(n - 1);
        if b >= a {
            b += 1;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let pa = self.random_point(a)?;
        let pb = self.random_point(b)?;
        let y = (pb - &pa) / rational::int((b - a) as i64);
        let x = pa - &y * rational::int(a as i64);
        Some((x, y))
    }
}

impl Iterator for PatternCandidates<'_> {
    type Item = (Rational, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        let i = self.issued;
        self.issued += 1;
        if i == 0 {
            let (lo, hi) = self.hull.clone();
            let y = (hi - &lo) / rational::int(self.pattern.n() as i64 + 1);
            return Some((lo, y));
        }
        let c = if i % 2 == 1 { self.log_grid() } else { self.two_anchor() };
        Some(c.unwrap_or((Rational::zero(), Rational::zero())))
    }
}

/// Searches `(x, y)`, `y ≠ 0`, with `x + k·y` interior to `E_{pattern(k)}`
/// for every `k`. Only `budget`, `seed` and `denom_bound` of `config` are used.
pub fn find_patterned_ap(
    e1: &IntervalUnion,
    e2: &IntervalUnion,
    pattern: &Pattern,
    config: &SearchConfig,
) -> std::result::Result<Found<PatternedAp>, SearchFailure> {
    let joint = IntervalUnion::canonical(e1.intervals().iter().chain(e2.intervals()).cloned().collect());
    let Some(hull) = joint.hull() else {
        return Err(SearchFailure { candidates_tried: 0, stage: None, last_rejection: None });
    };
    let min_len = joint
        .intervals()
        .iter()
        .chain(e1.intervals())
        .chain(e2.intervals())
        .map(|(l, r)| r - l)
        .min()
        .expect("nonempty");
    let candidates = PatternCandidates {
        e1,
        e2,
        pattern,
        sampler: RationalSampler::new(config.seed, config.denom_bound),
        hull,
        min_len,
        issued: 0,
    };
    let mut last = None;
    for (i, (x, y)) in candidates.take(config.budget as usize).enumerate() {
        match verify_pattern(e1, e2, pattern, &x, &y) {
            Ok(()) => {
                debug_assert!(y.abs() > Rational::zero());
                return Ok(Found { value: PatternedAp { x, y }, candidates_tried: i as u64 + 1 });
            }
            Err(r) => last = Some(r),
        }
    }
    Err(SearchFailure { candidates_tried: config.budget, stage: None, last_rejection: last })
}
