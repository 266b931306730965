//! Finite sets of rationals: sumsets, the forbidden-value closure, Sidon
//! checks and additive energy.

use std::collections::HashMap;
use std::fmt;

use num::{BigUint, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A finite set of rationals stored as a strictly increasing sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FiniteSetWire", into = "FiniteSetWire")]
pub struct FiniteSet {
    elements: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct FiniteSetWire {
    #[serde(with = "rational::serde_str::vec")]
    elements: Vec<Rational>,
}

impl TryFrom<FiniteSetWire> for FiniteSet {
    type Error = Error;

    fn try_from(w: FiniteSetWire) -> Result<Self> {
        let set = FiniteSet::from_iter(w.elements.iter().cloned());
        if set.len() != w.elements.len() {
            return Err(Error::Malformed("set elements must be distinct".into()));
        }
        Ok(set)
    }
}

impl From<FiniteSet> for FiniteSetWire {
    fn from(s: FiniteSet) -> Self {
        FiniteSetWire { elements: s.elements }
    }
}

impl FromIterator<Rational> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        let mut elements: Vec<Rational> = iter.into_iter().collect();
        elements.sort();
        elements.dedup();
        FiniteSet { elements }
    }
}

impl FiniteSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses a comma-separated list such as `"0, 1/2, 3"`. Duplicates collapse.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(rational::parse_list(s)?.into_iter().collect())
    }

    pub fn from_ints(values: &[i64]) -> Self {
        values.iter().map(|&v| rational::int(v)).collect()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.elements.binary_search(r).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elements.iter()
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        self.iter().chain(other.iter()).cloned().collect()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.iter().all(|r| other.contains(r))
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().all(|r| !large.contains(r))
    }

    /// The image `a*E + b`.
    pub fn affine_image(&self, a: &Rational, b: &Rational) -> FiniteSet {
        self.iter().map(|r| a * r + b).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(rational::format).collect()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

/// A witness `l1 + l2 = l3 + l4` together with the element indices it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadruple {
    #[serde(with = "rational::serde_str::vec")]
    pub values: Vec<Rational>,
    pub indices: [usize; 4],
}

impl Quadruple {
    pub fn holds(&self) -> bool {
        self.values.len() == 4 && &self.values[0] + &self.values[1] == &self.values[2] + &self.values[3]
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(rational::format).collect();
        write!(f, "({})", v.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `{a + b}` or `{a - b}` over all pairs, sorted and deduplicated.
pub fn sumset(a: &FiniteSet, b: &FiniteSet, sign: Sign) -> FiniteSet {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(match sign {
                Sign::Plus => x + y,
                Sign::Minus => x - y,
            });
        }
    }
    out.into_iter().collect()
}

/// `{0} ∪ M ∪ (M+M) ∪ (M−M) ∪ (M+M−M)`: every value a linear relation between
/// a new point set and `M` could be forced onto.
pub fn gamma(m: &FiniteSet) -> FiniteSet {
    let two = sumset(m, m, Sign::Plus);
    let diff = sumset(m, m, Sign::Minus);
    let three = sumset(&two, m, Sign::Minus);
    let mut all = Vec::with_capacity(1 + m.len() + two.len() + diff.len() + three.len());
    all.push(Rational::zero());
    all.extend(m.iter().cloned());
    all.extend(two.elements);
    all.extend(diff.elements);
    all.extend(three.elements);
    all.into_iter().collect()
}

/// Groups ordered index pairs `(i, j)` by the exact sum `e_i + e_j`; each
/// group lists its pairs in lexicographic order.
fn pair_sums(e: &FiniteSet) -> HashMap<Rational, Vec<(usize, usize)>> {
    let n = e.len();
    let mut map: HashMap<Rational, Vec<(usize, usize)>> = HashMap::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            map.entry(&e.elements[i] + &e.elements[j]).or_default().push((i, j));
        }
    }
    map
}

/// True iff `l1 + l2 = l3 + l4` in `E` forces `{l1, l2} = {l3, l4}`.
pub fn is_sidon(e: &FiniteSet) -> bool {
    let n = e.len();
    let mut seen: HashMap<Rational, (usize, usize)> = HashMap::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            if seen.insert(&e.elements[i] + &e.elements[j], (i, j)).is_some() {
                return false;
            }
        }
    }
    true
}

/// First nontrivial solution in lexicographic order of the index tuple
/// `(i, j, k, l)`, or `None` when `E` is Sidon.
pub fn sidon_witness(e: &FiniteSet) -> Option<Quadruple> {
    let n = e.len();
    let sums = pair_sums(e);
    for i in 0..n {
        for j in 0..n {
            let s = &e.elements[i] + &e.elements[j];
            let hit = sums[&s].iter().find(|&&(k, l)| !((k == i && l == j) || (k == j && l == i)));
            if let Some(&(k, l)) = hit {
                let el = &e.elements;
                return Some(Quadruple {
                    values: vec![el[i].clone(), el[j].clone(), el[k].clone(), el[l].clone()],
                    indices: [i, j, k, l],
                });
            }
        }
    }
    None
}

/// Number of ordered `(l1, l2, l3, l4) ∈ E⁴` with `l1 + l2 = l3 + l4`,
/// computed as `Σ_s r(s)²` where `r(s)` counts ordered pairs summing to `s`.
pub fn count_quadruples(e: &FiniteSet) -> BigUint {
    let n = e.len();
    let mut hist: HashMap<Rational, u64> = HashMap::with_capacity(n * n);
    for x in e.iter() {
        for y in e.iter() {
            *hist.entry(x + y).or_insert(0) += 1;
        }
    }
    hist.values().map(|&r| BigUint::from(r) * BigUint::from(r)).sum()
}

/// The additive energy of a Sidon set of size `n`: `2n² − n`.
pub fn sidon_energy(n: usize) -> BigUint {
    let n = BigUint::from(n);
    if n.is_zero() {
        return n;
    }
    BigUint::from(2u32) * &n * &n - n
}

/// `γ₄(N)⁴`, the fourth power of the normalized `L⁴` norm of `Σ_{k=1}^N e^{ikt}`,
/// i.e. the additive energy of `{1, …, N}`: `(2N³ + N) / 3`.
pub fn dirichlet_gamma4_pow4(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let n = BigUint::from(n);
    let num = BigUint::from(2u32) * &n * &n * &n + &n;
    let (q, r) = (&num / 3u32, &num % 3u32);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// `dirichlet_gamma4_pow4(N) / N³` as an exact rational.
pub fn dirichlet_ratio_pow4(n: u64) -> Result<Rational> {
    let e = dirichlet_gamma4_pow4(n)?;
    let cube = BigUint::from(n).pow(3);
    Ok(Rational::new(e.into(), cube.into()))
}
