//! Tree search over forward models.
//!
//! The baseline variant is plain UCT over mean rewards. The ordinal
//! variants replace the mean with a dominance measure: an action is rated
//! by the average probability that one of its sampled values beats a
//! sample of each sibling,
//!
//! ```text
//! B(a) = 1/(|A|-1) * sum_{b != a} Pr[a beats b]
//! ```
//!
//! with ties counting half. `Pr[a beats b]` is computed from the two
//! actions' empirical value distributions — exact tallies, or the bucketed
//! pmf of a sketch when the value stream is too rich to store.
//!
//! Selection maximises `exploitation + 2C * sqrt(2 ln n / n_a)`; the
//! exploitation term is `B(a)` for ordinal variants and the min-max
//! normalized mean for the baseline.

mod engine;
pub mod testing;

pub use engine::{MoveReport, Searcher, ENV_STREAM, NOISE_STREAM, SEARCH_STREAM};

use thiserror::Error;

use crate::bucketing::{Bucketing, GrowthPolicy};
use crate::env::EnvError;
use crate::pmf::Pmf;
use crate::Ordinal;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("cannot compare an empty distribution")]
    EmptyPmf,
    #[error("dominance needs at least two actions")]
    NeedTwoActions,
    #[error("state offers no actions")]
    NoActions,
    #[error("no action has been visited")]
    NoVisitedAction,
    #[error("numeric-mean statistics have no value distribution")]
    NotOrdinal,
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Tie-normalized probability that a draw from `a` beats a draw from `b`:
/// `Pr(a > b) + Pr(a = b) / 2`. One merge pass over the two value-sorted
/// pmfs with a running CDF; runs of equal values within a pmf are grouped,
/// so duplicate-valued entries are handled.
pub fn prob_beats<T: Ord>(a: &Pmf<T>, b: &Pmf<T>) -> Result<f64, SearchError> {
    if a.is_empty() || b.is_empty() {
        return Err(SearchError::EmptyPmf);
    }
    let (ea, eb) = (a.entries(), b.entries());
    let mut i = 0;
    let mut j = 0;
    let mut below = 0.0; // mass of b strictly below the current a-value
    let mut acc = 0.0;
    while i < ea.len() {
        let v = &ea[i].0;
        while j < eb.len() && eb[j].0 < *v {
            below += eb[j].1;
            j += 1;
        }
        let mut mass_a = 0.0;
        while i < ea.len() && ea[i].0 == *v {
            mass_a += ea[i].1;
            i += 1;
        }
        let mut tied_b = 0.0;
        while j < eb.len() && eb[j].0 == *v {
            tied_b += eb[j].1;
            j += 1;
        }
        acc += mass_a * (below + 0.5 * tied_b);
        below += tied_b;
    }
    Ok(acc)
}

/// Dominance of action `idx` among `pmfs`: the mean of `prob_beats`
/// against every other action.
pub fn dominance<T: Ord>(pmfs: &[Pmf<T>], idx: usize) -> Result<f64, SearchError> {
    if pmfs.len() < 2 {
        return Err(SearchError::NeedTwoActions);
    }
    let mut sum = 0.0;
    for (j, other) in pmfs.iter().enumerate() {
        if j != idx {
            sum += prob_beats(&pmfs[idx], other)?;
        }
    }
    Ok(sum / (pmfs.len() - 1) as f64)
}

/// Which agent to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Numeric UCT over min-max normalized means.
    Mcts,
    /// Dominance selection over exact value tallies.
    OmctsExact,
    /// Dominance selection over a First-2 sketch per action.
    OmctsFix2,
    /// Dominance selection over a 2-Log-Growing sketch (m = 3).
    Omcts2Log,
    /// Dominance selection over a 2-Log-Growing-First-3 sketch (m = 3).
    Omcts2Log3,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Mcts,
        Variant::OmctsExact,
        Variant::OmctsFix2,
        Variant::Omcts2Log,
        Variant::Omcts2Log3,
    ];

    pub fn is_ordinal(&self) -> bool {
        !matches!(self, Variant::Mcts)
    }

    /// The sketch policy backing this variant's action statistics, if any.
    pub fn sketch_policy(&self) -> Option<GrowthPolicy> {
        match self {
            Variant::Mcts | Variant::OmctsExact => None,
            Variant::OmctsFix2 => Some(GrowthPolicy::FirstN { n: 2 }),
            Variant::Omcts2Log => Some(GrowthPolicy::KLogGrowing { k: 2.0, m: 3 }),
            Variant::Omcts2Log3 => Some(GrowthPolicy::KLogGrowingFirstN {
                k: 2.0,
                n: 3,
                m: 3,
            }),
        }
    }
}

/// Knobs of one search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub variant: Variant,
    /// Exploration constant C in the bonus `2C * sqrt(2 ln n / n_a)`.
    pub exploration: f64,
    /// Iterations per move.
    pub budget: u32,
    /// Rollout length cap in ticks.
    pub rollout_depth: u32,
    /// Terminal offsets folded into observed values.
    pub win_bonus: f64,
    pub loss_penalty: f64,
    /// Standard deviation of per-observation Gaussian reward noise.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(variant: Variant) -> Self {
        SearchConfig {
            variant,
            exploration: 0.5,
            budget: 300,
            rollout_depth: 15,
            win_bonus: crate::env::DEFAULT_WIN_BONUS,
            loss_penalty: crate::env::DEFAULT_LOSS_PENALTY,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

/// Per-action value statistics: visit count plus a variant-specific record
/// of the observed values.
#[derive(Debug, Clone)]
pub struct ActionStats {
    visits: u64,
    backend: Backend,
}

#[derive(Debug, Clone)]
enum Backend {
    NumericMean { sum: f64 },
    /// Every observed value, kept sorted.
    ExactTally { samples: Vec<Ordinal> },
    Sketch(Bucketing<Ordinal>),
}

impl ActionStats {
    pub fn for_variant(variant: Variant) -> Self {
        let backend = match variant.sketch_policy() {
            Some(policy) => Backend::Sketch(Bucketing::new(policy)),
            None if variant == Variant::OmctsExact => Backend::ExactTally {
                samples: Vec::new(),
            },
            None => Backend::NumericMean { sum: 0.0 },
        };
        ActionStats { visits: 0, backend }
    }

    /// Visit count `n_a`.
    pub fn visits(&self) -> u64 {
        self.visits
    }

    pub fn record(&mut self, value: Ordinal) {
        self.visits += 1;
        match &mut self.backend {
            Backend::NumericMean { sum } => *sum += value.into_inner(),
            Backend::ExactTally { samples } => {
                let pos = samples.partition_point(|x| *x < value);
                samples.insert(pos, value);
            }
            Backend::Sketch(sketch) => sketch.add(value),
        }
    }

    /// Mean observed value; only the numeric backend has one.
    pub fn mean(&self) -> Option<f64> {
        match &self.backend {
            Backend::NumericMean { sum } if self.visits > 0 => {
                Some(sum / self.visits as f64)
            }
            _ => None,
        }
    }

    /// Empirical value distribution of this action.
    pub fn pmf(&self) -> Result<Pmf<Ordinal>, SearchError> {
        match &self.backend {
            Backend::NumericMean { .. } => Err(SearchError::NotOrdinal),
            Backend::ExactTally { samples } => {
                if samples.is_empty() {
                    return Err(SearchError::EmptyPmf);
                }
                let total = samples.len() as f64;
                let mut entries: Vec<(Ordinal, f64)> = Vec::new();
                let mut run_start = 0;
                for i in 1..=samples.len() {
                    if i == samples.len() || samples[i] != samples[run_start] {
                        entries.push((samples[run_start], (i - run_start) as f64 / total));
                        run_start = i;
                    }
                }
                Ok(Pmf::from_entries(entries))
            }
            Backend::Sketch(sketch) => sketch.pmf().map_err(|_| SearchError::EmptyPmf),
        }
    }

    /// `(strictly below, equal)` counts against the exact tally; used by
    /// the engine's incremental pairwise bookkeeping.
    pub(crate) fn tally_partition(&self, value: Ordinal) -> Option<(usize, usize)> {
        match &self.backend {
            Backend::ExactTally { samples } => {
                let below = samples.partition_point(|x| *x < value);
                let upto = samples.partition_point(|x| *x <= value);
                Some((below, upto - below))
            }
            _ => None,
        }
    }
}
