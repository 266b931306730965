use std::collections::HashMap;
use std::ops::RangeInclusive;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::progression::Found;
use crate::mappings::Mapping;
use crate::rational::{self, Rational};
use crate::search::{first_accepted, RationalSampler, Rejection, SearchConfig, SearchFailure};
use crate::sets::{sidon_witness, FiniteSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineCheck {
    /// `φ` is injective on the window and its image is Sidon.
    Holds,
    Fails(Rejection),
}

impl AffineCheck {
    pub fn holds(&self) -> bool {
        matches!(self, AffineCheck::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCopy {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    pub window: i64,
}

/// Checks `φ` on `{a·k + b : k ∈ window}`.
pub fn check_affine_copy_window(phi: &Mapping, a: &Rational, b: &Rational, window: RangeInclusive<i64>) -> AffineCheck {
    if a.is_zero() {
        return AffineCheck::Fails(Rejection::Degenerate);
    }
    let mut seen: HashMap<Rational, i64> = HashMap::new();
    let mut image = Vec::new();
    for k in window {
        let value = phi.eval(&(a * rational::int(k) + b));
        if let Some(&k1) = seen.get(&value) {
            return AffineCheck::Fails(Rejection::Collision { k1, k2: k, value });
        }
        seen.insert(value.clone(), k);
        image.push(value);
    }
    let set: FiniteSet = image.into_iter().collect();
    match sidon_witness(&set) {
        Some(q) => AffineCheck::Fails(Rejection::NotSidon(q)),
        None => AffineCheck::Holds,
    }
}

/// The window `k = −K..K`.
pub fn check_affine_copy(phi: &Mapping, a: &Rational, b: &Rational, k_max: i64) -> AffineCheck {
    check_affine_copy_window(phi, a, b, -k_max..=k_max)
}

/// Searches `(a, b)` with `a` drawn from the box's `y` interval and `b` from
/// its `x` interval; `a = 0` draws are skipped.
pub fn find_affine_copy(phi: &Mapping, k_max: i64, config: &SearchConfig) -> Result<Found<AffineCopy>, SearchFailure> {
    let mut sampler = RationalSampler::new(config.seed, config.denom_bound);
    let bx = config.search_box.clone();
    let candidates = std::iter::from_fn(move || {
        let b = sampler.in_closed(&bx.x);
        let a = sampler.in_closed(&bx.y);
        Some((a, b))
    });
    let accept = |(a, b): &(Rational, Rational)| match check_affine_copy(phi, a, b, k_max) {
        AffineCheck::Holds => Ok(AffineCopy { a: a.clone(), b: b.clone(), window: k_max }),
        AffineCheck::Fails(r) => Err(r),
    };
    let (value, tried) = first_accepted(candidates, config.budget, accept)?;
    debug_assert!(check_affine_copy(phi, &value.a, &value.b, k_max).holds());
    Ok(Found { value, candidates_tried: tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn window_examples() {
        let sq = Mapping::square();
        assert!(check_affine_copy_window(&sq, &int(1), &int(0), 1..=4).holds());
        let aff = Mapping::affine(int(2), int(1));
        assert!(matches!(check_affine_copy(&aff, &int(1), &int(0), 2), AffineCheck::Fails(Rejection::NotSidon(_))));
        assert_eq!(
            check_affine_copy(&sq, &int(1), &int(0), 2),
            AffineCheck::Fails(Rejection::Collision { k1: -1, k2: 1, value: int(1) })
        );
    }

    #[test]
    fn searches() {
        let sq = Mapping::square();
        let found = find_affine_copy(&sq, 3, &SearchConfig::new(500, 1)).unwrap();
        assert!(!found.value.b.is_zero());
        assert!(check_affine_copy(&sq, &found.value.a, &found.value.b, 3).holds());

        let cube = Mapping::parse_spec("poly:0,0,0,1").unwrap();
        let found = find_affine_copy(&cube, 2, &SearchConfig::new(500, 1)).unwrap();
        assert!(check_affine_copy(&cube, &found.value.a, &found.value.b, 2).holds());

        let fail = find_affine_copy(&Mapping::affine(int(1), int(0)), 2, &SearchConfig::new(100, 1)).unwrap_err();
        assert_eq!(fail.candidates_tried, 100);
    }
}
