//! Ground truth and error measurement for a sketch.
//!
//! The sketch never looks back at the stream, but the evaluation does: a
//! [`RecordedStream`] keeps every sample in arrival order so that exact
//! quantile cut points and ranks can be computed after the fact. The quality
//! of a `q`-bucket sketch is the mean normalized rank gap between its finite
//! bounds and the exact `q`-quantile cut points:
//!
//! ```text
//! E(H) = (1/q) * sum_n |Rank(u_n) - Rank(q_n)| / t
//! ```
//!
//! where `Rank(o)` counts samples strictly below `o`. The unbounded top
//! bucket has no finite bound; its term is defined as zero while the
//! division stays by `q`.

use thiserror::Error;

use crate::bucketing::Bucketing;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuantileError {
    #[error("need at least 2 quantile parts (got q={0})")]
    DegenerateQ(usize),
    #[error("empty stream has no quantiles")]
    EmptyStream,
    #[error("more quantile parts than samples (q={q}, t={t})")]
    MoreQuantilesThanSamples { q: usize, t: usize },
    #[error("bucketing error needs >= 2 buckets (got {0})")]
    TooFewBuckets(usize),
}

/// A sample stream kept in arrival order for evaluation.
#[derive(Debug, Clone, Default)]
pub struct RecordedStream<T> {
    samples: Vec<T>,
}

impl<T: Ord + Clone> RecordedStream<T> {
    pub fn new(samples: Vec<T>) -> Self {
        RecordedStream { samples }
    }

    pub fn push(&mut self, o: T) {
        self.samples.push(o);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    /// Number of samples with a value strictly below `o`.
    pub fn rank(&self, o: &T) -> usize {
        self.samples.iter().filter(|x| *x < o).count()
    }

    /// The `q-1` exact quantile cut points: the `i`-th is the sorted
    /// stream's element at zero-based index `ceil(i*t/q) - 1` (lower-value
    /// convention; no interpolation exists on an ordinal scale).
    pub fn true_quantiles(&self, q: usize) -> Result<Vec<T>, QuantileError> {
        if q < 2 {
            return Err(QuantileError::DegenerateQ(q));
        }
        let t = self.samples.len();
        if t == 0 {
            return Err(QuantileError::EmptyStream);
        }
        if q > t {
            return Err(QuantileError::MoreQuantilesThanSamples { q, t });
        }
        let mut sorted = self.samples.clone();
        sorted.sort();
        Ok((1..q)
            .map(|i| sorted[(i * t).div_ceil(q) - 1].clone())
            .collect())
    }
}

/// The per-boundary gaps and their mean for one sketch against one stream.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Bucket count of the evaluated sketch (including the top bucket).
    pub q: usize,
    /// Normalized rank gap per boundary; the top bucket's entry is 0.
    pub per_boundary: Vec<f64>,
    /// Mean of `per_boundary`.
    pub e: f64,
}

/// Measures how far the sketch's cut points sit from the stream's exact
/// `q`-quantiles, `q` being the sketch's bucket count. The sketch must have
/// been fed exactly the samples of `stream`.
pub fn bucketing_error<T: Ord + Clone>(
    stream: &RecordedStream<T>,
    sketch: &Bucketing<T>,
) -> Result<ErrorReport, QuantileError> {
    let q = sketch.bucket_count();
    if q < 2 {
        return Err(QuantileError::TooFewBuckets(q));
    }
    let cuts = stream.true_quantiles(q)?;
    let bounds = sketch.quantile_estimates();
    debug_assert_eq!(bounds.len(), q - 1);

    let t = stream.len();
    let mut sorted = stream.samples().to_vec();
    sorted.sort();
    // Rank via binary search on the sorted copy; same strictly-less
    // definition as RecordedStream::rank.
    let rank = |o: &T| sorted.partition_point(|x| x < o);

    let mut per_boundary: Vec<f64> = bounds
        .iter()
        .zip(cuts.iter())
        .map(|(u, c)| (rank(u).abs_diff(rank(c))) as f64 / t as f64)
        .collect();
    per_boundary.push(0.0); // top bucket term
    let e = per_boundary.iter().sum::<f64>() / q as f64;
    Ok(ErrorReport { q, per_boundary, e })
}
