//! Seeded candidate schedules and search-failure diagnostics.
//!
//! Random mode draws from ChaCha8 seeded with `seed_from_u64`. Each rational
//! coordinate picks a denominator `q` uniformly in `1..=D`, then a numerator
//! uniformly among those placing `p/q` inside the target interval. Grid mode
//! walks dyadic refinements of the box level by level, skipping points already
//! visited at a coarser level.

use std::fmt;

use num::bigint::BigInt;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_DENOM_BOUND: u64 = 1 << 16;
pub const DEFAULT_BUDGET: u64 = 10_000;

/// A closed rational interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Precondition(format!("degenerate interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// The rectangle `x ∈ [x0, x1]`, `y ∈ [y0, y1]` candidates are drawn from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub x: Interval,
    pub y: Interval,
}

impl SearchBox {
    pub fn new(x: Interval, y: Interval) -> Self {
        SearchBox { x, y }
    }

    /// Parses `"x0,x1,y0,y1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let v = rational::parse_list(s)?;
        if v.len() != 4 {
            return Err(Error::Malformed(format!("box takes four rationals x0,x1,y0,y1, got `{s}`")));
        }
        Ok(SearchBox { x: Interval::new(v[0].clone(), v[1].clone())?, y: Interval::new(v[2].clone(), v[3].clone())? })
    }

    pub fn unit_strip() -> Self {
        SearchBox {
            x: Interval { lo: rational::int(0), hi: rational::int(1) },
            y: Interval { lo: rational::int(1), hi: rational::int(2) },
        }
    }
}

impl fmt::Display for SearchBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x.lo, self.x.hi, self.y.lo, self.y.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    Random,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: u64,
    pub seed: u64,
    pub denom_bound: u64,
    pub mode: SamplingMode,
    pub search_box: SearchBox,
}

impl SearchConfig {
    pub fn new(budget: u64, seed: u64) -> Self {
        SearchConfig {
            budget,
            seed,
            denom_bound: DEFAULT_DENOM_BOUND,
            mode: SamplingMode::Random,
            search_box: SearchBox::unit_strip(),
        }
    }

    pub fn with_box(mut self, b: SearchBox) -> Self {
        self.search_box = b;
        self
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_denom_bound(mut self, d: u64) -> Self {
        self.denom_bound = d;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Precondition("budget must be at least 1".into()));
        }
        if self.denom_bound < 2 {
            return Err(Error::Precondition("denominator bound must be at least 2".into()));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig::new(DEFAULT_BUDGET, 0)
    }
}

/// Mixes a seed with a stream index (SplitMix64 finalizer) so that related
/// searches, such as successive chain stages, draw independent streams.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws rationals with bounded denominators from a seeded stream.
pub struct RationalSampler {
    rng: ChaCha8Rng,
    denom_bound: u64,
}

impl RationalSampler {
    pub fn new(seed: u64, denom_bound: u64) -> Self {
        RationalSampler { rng: ChaCha8Rng::seed_from_u64(seed), denom_bound: denom_bound.max(1) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// A rational `p/q ∈ [lo, hi]` with `q ≤ D`; falls back to the midpoint
    /// when no small denominator lands inside a very narrow interval.
    pub fn in_closed(&mut self, iv: &Interval) -> Rational {
        for _ in 0..64 {
            let q = self.rng.gen_range(1..=self.denom_bound);
            let qr = Rational::from_integer(BigInt::from(q));
            let pmin = rational::ceil_int(&(&iv.lo * &qr));
            let pmax = rational::floor_int(&(&iv.hi * &qr));
            if pmin > pmax {
                continue;
            }
            let span = &pmax - &pmin;
            let offset = self.big_below(&(span + BigInt::one()));
            return Rational::new(pmin + offset, BigInt::from(q));
        }
        (&iv.lo + &iv.hi) / rational::int(2)
    }

    /// A rational strictly inside `(lo, hi)`: `lo + (hi − lo)·u/D` with `u ∈ 1..D`.
    pub fn in_open(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let d = self.denom_bound.max(2);
        let u = self.rng.gen_range(1..d);
        lo + (hi - lo) * rational::ratio(u as i64, d as i64)
    }

    fn big_below(&mut self, n: &BigInt) -> BigInt {
        match n.to_u64() {
            Some(m) => BigInt::from(self.rng.gen_range(0..m)),
            None => {
                // rejection sampling on 64-bit limbs
                let bits = n.bits();
                loop {
                    let mut acc = BigInt::zero();
                    let mut got = 0;
                    while got < bits {
                        acc = (acc << 64) + BigInt::from(self.rng.gen::<u64>());
                        got += 64;
                    }
                    acc >>= (got - bits) as usize;
                    if &acc < n {
                        return acc;
                    }
                }
            }
        }
    }
}

/// Dyadic grid schedule over a box: level `L` visits `x0 + i·w/2^L`,
/// `y0 + j·h/2^L` for `0 ≤ i, j ≤ 2^L` in `(i, j)` order, skipping points of
/// coarser levels.
pub struct GridSchedule {
    search_box: SearchBox,
    level: u32,
    i: u64,
    j: u64,
}

impl GridSchedule {
    pub fn new(search_box: SearchBox) -> Self {
        GridSchedule { search_box, level: 0, i: 0, j: 0 }
    }
}

impl Iterator for GridSchedule {
    type Item = (Rational, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.level > 62 {
                return None;
            }
            let side = 1u64 << self.level;
            if self.i > side {
                self.level += 1;
                self.i = 0;
                self.j = 0;
                continue;
            }
            let (i, j) = (self.i, self.j);
            self.j += 1;
            if self.j > side {
                self.j = 0;
                self.i += 1;
            }
            if self.level > 0 && i % 2 == 0 && j % 2 == 0 {
                continue;
            }
            let scale = Rational::new(BigInt::one(), BigInt::from(side));
            let b = &self.search_box;
            let x = &b.x.lo + b.x.width() * &scale * Rational::from_integer(BigInt::from(i));
            let y = &b.y.lo + b.y.width() * &scale * Rational::from_integer(BigInt::from(j));
            return Some((x, y));
        }
    }
}

/// Why the last candidate of a search was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    /// A linear constraint value landed in the forbidden set.
    Violation(crate::construct::Violation),
    /// `2·φ(t_i) − φ(t_j)` landed in the accumulated image set.
    DoubledDifference {
        i: usize,
        j: usize,
        #[serde(with = "rational::serde_str")]
        value: Rational,
    },
    /// Two window points share an image.
    Collision {
        k1: i64,
        k2: i64,
        #[serde(with = "rational::serde_str")]
        value: Rational,
    },
    /// The image is injective but not Sidon.
    NotSidon(crate::sets::Quadruple),
    /// Term `k` missed the interior of its assigned set.
    PatternMiss {
        k: usize,
        #[serde(with = "rational::serde_str")]
        term: Rational,
    },
    /// The candidate had `y = 0` or an otherwise unusable step.
    Degenerate,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Violation(v) => write!(f, "{v}"),
            Rejection::DoubledDifference { i, j, value } => {
                write!(f, "2·phi(t_{i}) - phi(t_{j}) = {value} lies in the accumulated set")
            }
            Rejection::Collision { k1, k2, value } => {
                write!(f, "collision phi(k={k1}) = phi(k={k2}) = {value}")
            }
            Rejection::NotSidon(q) => write!(f, "image not Sidon, witness {q}"),
            Rejection::PatternMiss { k, term } => write!(f, "term {k} = {term} misses its set"),
            Rejection::Degenerate => f.write_str("degenerate candidate"),
        }
    }
}

/// A budget-exhausted search. For mappings whose nonlinearity set is null
/// this is the expected outcome, so it is reported rather than raised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFailure {
    pub candidates_tried: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    pub last_rejection: Option<Rejection>,
}

impl fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "search failed after {} candidates", self.candidates_tried)?;
        if let Some(s) = self.stage {
            write!(f, " at stage n = {s}")?;
        }
        if let Some(r) = &self.last_rejection {
            write!(f, "; last rejection: {r}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SearchFailure {}

/// Runs `accept` over a candidate schedule in batches, evaluating each batch
/// in parallel and returning the earliest accepted candidate in schedule order.
pub(crate) fn first_accepted<C, T, F>(
    candidates: impl Iterator<Item = C>,
    budget: u64,
    accept: F,
) -> std::result::Result<(T, u64), SearchFailure>
where
    C: Send + Sync,
    T: Send,
    F: Fn(&C) -> std::result::Result<T, Rejection> + Sync,
{
    use rayon::prelude::*;
    const BATCH: usize = 32;
    let mut tried = 0u64;
    let mut last = None;
    let mut iter = candidates.take(budget as usize);
    loop {
        let batch: Vec<C> = iter.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return Err(SearchFailure { candidates_tried: tried, stage: None, last_rejection: last });
        }
        let results: Vec<std::result::Result<T, Rejection>> = batch.par_iter().map(&accept).collect();
        for r in results {
            tried += 1;
            match r {
                Ok(v) => return Ok((v, tried)),
                Err(rej) => last = Some(rej),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn sampler_stays_in_box_with_bounded_denominators() {
        let mut s = RationalSampler::new(11, 97);
        let iv = Interval::new(ratio(-1, 3), ratio(5, 2)).unwrap();
        for _ in 0..500 {
            let r = s.in_closed(&iv);
            assert!(iv.contains(&r));
            assert!(r.denom() <= &BigInt::from(97));
            let o = s.in_open(&iv.lo, &iv.hi);
            assert!(iv.lo < o && o < iv.hi);
        }
    }

    #[test]
    fn sampler_is_reproducible() {
        let iv = Interval::new(int(0), int(1)).unwrap();
        let a: Vec<Rational> = {
            let mut s = RationalSampler::new(5, DEFAULT_DENOM_BOUND);
            (0..20).map(|_| s.in_closed(&iv)).collect()
        };
        let b: Vec<Rational> = {
            let mut s = RationalSampler::new(5, DEFAULT_DENOM_BOUND);
            (0..20).map(|_| s.in_closed(&iv)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn grid_schedule_order() {
        let pts: Vec<_> = GridSchedule::new(SearchBox::unit_strip()).take(6).collect();
        assert_eq!(pts[0], (int(0), int(1)));
        assert_eq!(pts[1], (int(0), int(2)));
        assert_eq!(pts[2], (int(1), int(1)));
        assert_eq!(pts[3], (int(1), int(2)));
        // level 1 starts with (i, j) = (0, 1)
        assert_eq!(pts[4], (int(0), ratio(3, 2)));
        assert_eq!(pts[5], (ratio(1, 2), int(1)));
    }

    #[test]
    fn box_parsing() {
        let b = SearchBox::parse("0,1,1/2,2").unwrap();
        assert_eq!(b.y.lo, ratio(1, 2));
        assert!(SearchBox::parse("0,1,2").is_err());
        assert!(SearchBox::parse("1,0,1,2").is_err());
        assert_eq!(b.to_string(), "0,1,1/2,2");
    }

    #[test]
    fn earliest_acceptance_wins() {
        let found =
            first_accepted(
                0..1000u64,
                1000,
                |&c| {
                    if c % 7 == 6 && c > 40 {
                        Ok(c)
                    } else {
                        Err(Rejection::Degenerate)
                    }
                },
            )
            .unwrap();
        assert_eq!(found, (41, 42));
        let fail = first_accepted(0..1000u64, 10, |_| Err::<(), _>(Rejection::Degenerate)).unwrap_err();
        assert_eq!(fail.candidates_tried, 10);
    }
}
