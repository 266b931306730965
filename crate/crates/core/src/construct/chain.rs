use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::progression::find_with;
use super::{ConstraintSpec, Progression};
use crate::error::Error;
use crate::mappings::Mapping;
use crate::rational::{self, Rational};
use crate::search::{derive_seed, Rejection, SearchConfig, SearchFailure};
use crate::sets::{gamma, is_sidon, FiniteSet};

/// One link `(A_n, B_n)` of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub progression: Progression,
    pub image: FiniteSet,
}

impl Stage {
    pub fn n(&self) -> usize {
        self.progression.len()
    }
}

/// Progressions `A_4, A_5, …` with pairwise-disjoint images `B_n = φ(A_n)`
/// whose union `M` is Sidon; `forbidden` is `γ(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    phi: Mapping,
    seed: u64,
    stages: Vec<Stage>,
    union: FiniteSet,
    forbidden: FiniteSet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("{0}")]
    Search(SearchFailure),
    #[error(transparent)]
    Internal(#[from] Error),
}

impl ChainState {
    pub fn new(phi: Mapping, seed: u64) -> Self {
        ChainState { phi, seed, stages: Vec::new(), union: FiniteSet::empty(), forbidden: gamma(&FiniteSet::empty()) }
    }

    pub fn phi(&self) -> &Mapping {
        &self.phi
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// `M`, the union of all images so far.
    pub fn union(&self) -> &FiniteSet {
        &self.union
    }

    pub fn forbidden(&self) -> &FiniteSet {
        &self.forbidden
    }

    /// Length of the next progression to add.
    pub fn next_n(&self) -> usize {
        4 + self.stages.len()
    }

    /// Union of the progressions as point sets.
    pub fn domain(&self) -> FiniteSet {
        self.stages.iter().fold(FiniteSet::empty(), |acc, s| acc.union(&s.progression.as_set()))
    }

    /// Rechecks every invariant from the stored progressions alone.
    pub fn verify(&self) -> Result<(), Error> {
        let mut union = FiniteSet::empty();
        for (i, st) in self.stages.iter().enumerate() {
            let n = 4 + i;
            if st.n() != n {
                return Err(Error::Internal(format!("stage {i} has length {}, expected {n}", st.n())));
            }
            let image: FiniteSet = st.progression.image_values(&self.phi).into_iter().collect();
            if image != st.image {
                return Err(Error::Internal(format!("stored image for n = {n} does not match φ(A_n)")));
            }
            if image.len() != n {
                return Err(Error::Internal(format!("φ is not injective on A_{n}")));
            }
            if !image.is_disjoint(&union) {
                return Err(Error::Internal(format!("B_{n} meets an earlier image")));
            }
            union = union.union(&image);
        }
        if union != self.union {
            return Err(Error::Internal("stored union does not match the images".into()));
        }
        if !is_sidon(&union) {
            return Err(Error::Internal("union of images is not Sidon".into()));
        }
        if self.forbidden != gamma(&union) {
            return Err(Error::Internal("forbidden set is not γ of the union".into()));
        }
        Ok(())
    }
}

/// The family keeps `M ∪ B` Sidon except for one relation shape it does not
/// encode: `2·b_i = b_j + m`. Candidates producing it are rejected here.
fn doubled_difference_guard(m: &FiniteSet) -> impl Fn(&[Rational]) -> Result<(), Rejection> + Sync + '_ {
    move |values: &[Rational]| {
        if m.is_empty() {
            return Ok(());
        }
        let two = rational::int(2);
        for (i, bi) in values.iter().enumerate() {
            let doubled = &two * bi;
            for (j, bj) in values.iter().enumerate() {
                if i == j {
                    continue;
                }
                let value = &doubled - bj;
                if m.contains(&value) {
                    return Err(Rejection::DoubledDifference { i: i + 1, j: j + 1, value });
                }
            }
        }
        Ok(())
    }
}

/// Appends `(A_{n+1}, B_{n+1})`, searching with `S = γ(M)`, then re-verifies
/// bijectivity, disjointness from `M` and the Sidon property of `M ∪ B_{n+1}`.
///
/// `config.seed` is used as given; [`build_chain`] derives one seed per stage.
pub fn extend_chain(state: &mut ChainState, config: &SearchConfig) -> Result<(), ChainError> {
    let n = state.next_n();
    let spec = ConstraintSpec::new(n, state.forbidden.clone())?;
    let found = find_with(&state.phi, &spec, config, doubled_difference_guard(&state.union)).map_err(|mut f| {
        f.stage = Some(n);
        ChainError::Search(f)
    })?;
    let progression = found.value;

    let values = progression.image_values(&state.phi);
    let image: FiniteSet = values.iter().cloned().collect();
    if image.len() != n {
        return Err(Error::Internal(format!("stage {n}: φ is not injective on the new progression")).into());
    }
    if !image.is_disjoint(&state.union) {
        return Err(Error::Internal(format!("stage {n}: new image meets the accumulated set")).into());
    }
    let union = state.union.union(&image);
    if !is_sidon(&union) {
        return Err(Error::Internal(format!("stage {n}: accumulated set lost the Sidon property")).into());
    }
    state.forbidden = gamma(&union);
    state.union = union;
    state.stages.push(Stage { progression, image });
    Ok(())
}

/// Builds the chain `A_4, …, A_{n_max}` from scratch.
pub fn build_chain(phi: &Mapping, n_max: usize, config: &SearchConfig) -> Result<ChainState, ChainError> {
    if n_max < 4 {
        return Err(Error::Precondition(format!("n_max must be at least 4, got {n_max}")).into());
    }
    let mut state = ChainState::new(phi.clone(), config.seed);
    while state.next_n() <= n_max {
        let stage_cfg = SearchConfig { seed: derive_seed(config.seed, state.next_n() as u64), ..config.clone() };
        extend_chain(&mut state, &stage_cfg)?;
    }
    Ok(state)
}

#[derive(Serialize, Deserialize)]
struct StageWire {
    n: usize,
    #[serde(with = "rational::serde_str")]
    x: Rational,
    #[serde(with = "rational::serde_str")]
    y: Rational,
    #[serde(with = "rational::serde_str::vec")]
    image: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct ChainWire {
    phi: Mapping,
    chain: Vec<StageWire>,
    forbidden_size: usize,
    seed: u64,
}

impl Serialize for ChainState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChainWire {
            phi: self.phi.clone(),
            chain: self
                .stages
                .iter()
                .map(|st| StageWire {
                    n: st.n(),
                    x: st.progression.x().clone(),
                    y: st.progression.y().clone(),
                    // image in progression order k = 1..n
                    image: st.progression.image_values(&self.phi),
                })
                .collect(),
            forbidden_size: self.forbidden.len(),
            seed: self.seed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ChainWire::deserialize(d)?;
        w.phi.validate().map_err(D::Error::custom)?;
        let mut stages = Vec::with_capacity(w.chain.len());
        let mut union = FiniteSet::empty();
        for st in w.chain {
            let progression = Progression::new(st.x, st.y, st.n).map_err(D::Error::custom)?;
            let image: FiniteSet = st.image.into_iter().collect();
            union = union.union(&image);
            stages.push(Stage { progression, image });
        }
        let forbidden = gamma(&union);
        if forbidden.len() != w.forbidden_size {
            return Err(D::Error::custom("forbidden_size does not match γ of the images"));
        }
        let state = ChainState { phi: w.phi, seed: w.seed, stages, union, forbidden };
        state.verify().map_err(D::Error::custom)?;
        Ok(state)
    }
}
