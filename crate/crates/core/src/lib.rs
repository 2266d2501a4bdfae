//! Bounded-memory bucketing sketches for ordinal data streams, plus a Monte
//! Carlo tree search engine whose action statistics are backed by those
//! sketches and compared through a pairwise dominance measure.
//!
//! The crate is organised around five modules:
//!
//! - [`bucketing`] — the on-line sketch: three insertion policies with a
//!   constant or logarithmically growing bucket budget.
//! - [`quantile`] — ground truth: exact quantile cut points of a recorded
//!   stream and the normalized rank-gap error of a sketch against them.
//! - [`distributions`] — the synthetic sample sources used by the sweeps and
//!   Gaussian observation noise.
//! - [`search`] — UCT search with either numeric means (baseline) or ordinal
//!   dominance selection backed by exact tallies or sketches.
//! - [`env`] — small grid-world forward models the agents are evaluated on.
//!
//! Values flowing through the sketch and the ordinal search are compared,
//! never averaged; any totally ordered type works. Game rewards are `f64`
//! wrapped in [`Ordinal`] to obtain a total order.

pub mod bucketing;
pub mod distributions;
pub mod env;
pub mod pmf;
pub mod quantile;
pub mod search;

pub use bucketing::{Bucket, Bucketing, GrowthPolicy};
pub use pmf::Pmf;

/// Total-ordered reward scalar used by the search engine.
pub type Ordinal = ordered_float::OrderedFloat<f64>;

/// Shorthand for wrapping an `f64` reward.
pub fn ord(x: f64) -> Ordinal {
    ordered_float::OrderedFloat(x)
}
