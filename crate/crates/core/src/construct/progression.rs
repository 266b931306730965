use num::Zero;

use super::{scan_constraints, ConstraintSpec, Progression, Verdict};
use crate::mappings::Mapping;
use crate::rational::Rational;
use crate::search::{
    first_accepted, GridSchedule, RationalSampler, Rejection, SamplingMode, SearchConfig, SearchFailure,
};

/// A search result with the number of candidates consumed to reach it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found<T> {
    pub value: T,
    pub candidates_tried: u64,
}

/// The candidate `(x, y)` stream for `config`: seeded random draws or the
/// dyadic grid, depending on the sampling mode.
pub(crate) fn candidate_stream(config: &SearchConfig) -> Box<dyn Iterator<Item = (Rational, Rational)> + Send> {
    match config.mode {
        SamplingMode::Grid => Box::new(GridSchedule::new(config.search_box.clone())),
        SamplingMode::Random => {
            let mut sampler = RationalSampler::new(config.seed, config.denom_bound);
            let b = config.search_box.clone();
            Box::new(std::iter::from_fn(move || {
                let x = sampler.in_closed(&b.x);
                let y = sampler.in_closed(&b.y);
                Some((x, y))
            }))
        }
    }
}

/// Searches `config`'s box for an admissible progression of length `spec.n()`.
///
/// `extra` runs after the constraint scan on the image values and may reject
/// a candidate for reasons outside the family.
pub(crate) fn find_with<G>(
    phi: &Mapping,
    spec: &ConstraintSpec,
    config: &SearchConfig,
    extra: G,
) -> Result<Found<Progression>, SearchFailure>
where
    G: Fn(&[Rational]) -> Result<(), Rejection> + Sync,
{
    let n = spec.n();
    let accept = |(x, y): &(Rational, Rational)| -> Result<Progression, Rejection> {
        if y.is_zero() {
            return Err(Rejection::Degenerate);
        }
        let p = Progression::new(x.clone(), y.clone(), n).map_err(|_| Rejection::Degenerate)?;
        let values = p.image_values(phi);
        match scan_constraints(&values, spec) {
            Verdict::Violated(v) => Err(Rejection::Violation(v)),
            Verdict::Admissible => {
                extra(&values)?;
                Ok(p)
            }
        }
    };
    first_accepted(candidate_stream(config), config.budget, accept)
        .map(|(value, candidates_tried)| Found { value, candidates_tried })
}

/// Searches for `(x, y)` whose progression passes [`super::check_progression`].
///
/// Candidates with `y = 0` count against the budget and are skipped.
pub fn find_progression(
    phi: &Mapping,
    spec: &ConstraintSpec,
    config: &SearchConfig,
) -> Result<Found<Progression>, SearchFailure> {
    find_with(phi, spec, config, |_| Ok(()))
}
