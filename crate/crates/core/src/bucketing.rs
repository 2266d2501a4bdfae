//! On-line ordinal bucketing.
//!
//! A [`Bucketing`] summarises a stream of totally ordered values with a short
//! sequence of buckets. Each bucket covers a half-open interval of the value
//! line `(previous upper, upper]`; an always-present unbounded top bucket
//! catches everything above the last finite bound, so every value has exactly
//! one home. Buckets count the samples stored into them and remember a small
//! ring of recent samples from which a split pivot (an approximate in-bucket
//! median) is estimated.
//!
//! Three insertion policies are provided:
//!
//! - [`GrowthPolicy::FirstN`]: the first `n` distinct values become bucket
//!   bounds, after which the structure is frozen.
//! - [`GrowthPolicy::KLogGrowing`]: buckets are created by splitting the
//!   fullest bucket at its pivot while the finite-bucket count is below
//!   `k * log(total)`.
//! - [`GrowthPolicy::KLogGrowingFirstN`]: the first `n` distinct values
//!   seed the bounds, then growth continues as in the log-growing policy.
//!
//! Only comparisons are ever applied to the values; feeding the sketch
//! through any strictly monotone transformation yields the same bucket
//! shape with mapped bounds.

use std::collections::VecDeque;
use std::fmt::{self, Display, Write as _};

use thiserror::Error;

/// Policy controlling when new buckets are created.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthPolicy {
    /// The first `n` distinct values become bucket upper bounds; no splits.
    FirstN { n: usize },
    /// Split the fullest bucket while the finite-bucket count is below
    /// `k * log(total)`; pivots come from a ring of the last `m` in-bucket
    /// samples (`m` odd).
    KLogGrowing { k: f64, m: usize },
    /// First-n seeding followed by log growth.
    KLogGrowingFirstN { k: f64, n: usize, m: usize },
}

/// Rejected policy parameters.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolicyError {
    #[error("k must be finite and > 0 (got {0})")]
    NonPositiveK(String),
    #[error("m must be odd and >= 1 (got {0})")]
    EvenM(usize),
}

impl GrowthPolicy {
    pub fn validate(&self) -> Result<(), PolicyError> {
        let check_k = |k: f64| {
            if k.is_finite() && k > 0.0 {
                Ok(())
            } else {
                Err(PolicyError::NonPositiveK(k.to_string()))
            }
        };
        let check_m = |m: usize| {
            if m >= 1 && m % 2 == 1 {
                Ok(())
            } else {
                Err(PolicyError::EvenM(m))
            }
        };
        match *self {
            GrowthPolicy::FirstN { .. } => Ok(()),
            GrowthPolicy::KLogGrowing { k, m } => check_k(k).and(check_m(m)),
            GrowthPolicy::KLogGrowingFirstN { k, m, .. } => check_k(k).and(check_m(m)),
        }
    }

    /// Capacity of the per-bucket sample ring. First-n keeps no samples.
    fn aux_capacity(&self) -> usize {
        match *self {
            GrowthPolicy::FirstN { .. } => 0,
            GrowthPolicy::KLogGrowing { m, .. } => m,
            GrowthPolicy::KLogGrowingFirstN { m, .. } => m,
        }
    }

    /// Upper bound on the number of finite buckets after `total` insertions
    /// with natural-log growth. This is the space invariant the property
    /// tests assert after every insertion.
    pub fn finite_bucket_bound(&self, total: u64) -> usize {
        let log_cap = |k: f64| {
            if total == 0 {
                0
            } else {
                (k * (total as f64).ln()).ceil() as usize
            }
        };
        match *self {
            GrowthPolicy::FirstN { n } => n,
            GrowthPolicy::KLogGrowing { k, .. } => log_cap(k).max(1),
            GrowthPolicy::KLogGrowingFirstN { k, n, .. } => log_cap(k).max(n),
        }
    }
}

/// One interval of the value line.
#[derive(Debug, Clone)]
pub struct Bucket<T> {
    /// Inclusive upper bound; `None` marks the unbounded top bucket.
    upper: Option<T>,
    /// Samples stored into this bucket (splits move counts between buckets).
    count: u64,
    /// Ring of the most recent in-bucket samples, oldest first.
    aux: VecDeque<T>,
    /// Largest sample stored into this bucket; the top bucket's
    /// representative value when a pmf is derived.
    max_seen: Option<T>,
}

impl<T: Ord + Clone> Bucket<T> {
    fn new(upper: Option<T>) -> Self {
        Bucket {
            upper,
            count: 0,
            aux: VecDeque::new(),
            max_seen: None,
        }
    }

    pub fn upper(&self) -> Option<&T> {
        self.upper.as_ref()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_top(&self) -> bool {
        self.upper.is_none()
    }

    /// Recent samples, oldest first.
    pub fn aux(&self) -> impl Iterator<Item = &T> {
        self.aux.iter()
    }

    pub fn max_seen(&self) -> Option<&T> {
        self.max_seen.as_ref()
    }

    /// Approximate in-bucket median from the sample ring: the middle order
    /// statistic of the last `m` samples. `None` while fewer than `m`
    /// samples have been seen, or when the median coincides with the finite
    /// upper bound (splitting there would create an empty-range bucket).
    pub fn pivot(&self, m: usize) -> Option<T> {
        if m == 0 || self.aux.len() < m {
            return None;
        }
        let mut sorted: Vec<&T> = self.aux.iter().collect();
        sorted.sort();
        let median = sorted[(m - 1) / 2].clone();
        match &self.upper {
            Some(u) if *u == median => None,
            _ => Some(median),
        }
    }
}

/// Errors from pmf derivation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SketchError {
    #[error("cannot derive a pmf from an empty sketch")]
    EmptySketch,
}

/// The on-line sketch: an ordered bucket sequence plus a growth policy.
#[derive(Debug, Clone)]
pub struct Bucketing<T: Ord + Clone> {
    /// Strictly increasing by upper bound; the last element is always the
    /// unbounded top bucket.
    buckets: Vec<Bucket<T>>,
    /// Number of values stored so far.
    total: u64,
    policy: GrowthPolicy,
    /// Natural log of the growth-bound base (1.0 = natural log).
    ln_base: f64,
}

impl<T: Ord + Clone> Bucketing<T> {
    /// Creates an empty sketch with the natural-log growth bound.
    ///
    /// Panics on invalid policy parameters; callers that take parameters
    /// from external input should run [`GrowthPolicy::validate`] first.
    pub fn new(policy: GrowthPolicy) -> Self {
        Self::with_log_base(policy, std::f64::consts::E)
    }

    /// Same as [`Bucketing::new`] with an explicit logarithm base for the
    /// `k * log(total)` growth bound.
    pub fn with_log_base(policy: GrowthPolicy, base: f64) -> Self {
        policy.validate().expect("invalid growth policy");
        assert!(base > 1.0, "log base must exceed 1");
        Bucketing {
            buckets: vec![Bucket::new(None)],
            total: 0,
            policy,
            ln_base: base.ln(),
        }
    }

    pub fn policy(&self) -> &GrowthPolicy {
        &self.policy
    }

    /// Number of values stored.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn buckets(&self) -> &[Bucket<T>] {
        &self.buckets
    }

    /// Bucket count including the top bucket.
    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    /// Buckets with a finite upper bound (everything but the top bucket).
    pub fn finite_bucket_count(&self) -> usize {
        self.buckets.len() - 1
    }

    /// Index of the bucket covering `o`: the first bucket whose upper bound
    /// is `>= o`. Bounds are inclusive from above; the top bucket covers
    /// everything beyond the last finite bound.
    pub fn find_bucket(&self, o: &T) -> usize {
        self.buckets.partition_point(|b| match &b.upper {
            Some(u) => u < o,
            None => false,
        })
    }

    /// Adds one value to the sketch under the configured policy.
    pub fn add(&mut self, o: T) {
        match self.policy.clone() {
            GrowthPolicy::FirstN { n } => {
                self.seed_bound(n, &o);
                self.store(o);
            }
            GrowthPolicy::KLogGrowing { k, m } => {
                self.store(o);
                while self.finite_bucket_count() < self.growth_allowance(k) {
                    if !self.split_largest(m) {
                        break;
                    }
                }
            }
            GrowthPolicy::KLogGrowingFirstN { k, n, m } => {
                self.seed_bound(n, &o);
                self.store(o);
                while self.finite_bucket_count() >= n
                    && self.finite_bucket_count() < self.growth_allowance(k)
                {
                    if !self.split_largest(m) {
                        break;
                    }
                }
            }
        }
    }

    /// First-n seeding: while fewer than `n` finite buckets exist and `o` is
    /// not already a bound, a fresh zero-count bucket with upper bound `o`
    /// is inserted.
    fn seed_bound(&mut self, n: usize, o: &T) {
        if self.finite_bucket_count() >= n {
            return;
        }
        let idx = self.find_bucket(o);
        if self.buckets[idx].upper.as_ref() == Some(o) {
            return;
        }
        self.buckets.insert(idx, Bucket::new(Some(o.clone())));
    }

    /// Number of finite buckets the growth bound currently permits.
    fn growth_allowance(&self, k: f64) -> usize {
        if self.total == 0 {
            return 0;
        }
        let bound = k * (self.total as f64).ln() / self.ln_base;
        // `count < bound` with integer count: the largest admissible count
        // is ceil(bound) - 1 (or bound - 1 if bound is itself integral).
        if bound <= 0.0 {
            0
        } else {
            bound.ceil() as usize
        }
    }

    /// Stores `o` into its bucket: count, sample ring and max tracking.
    fn store(&mut self, o: T) {
        let cap = self.policy.aux_capacity();
        let idx = self.find_bucket(&o);
        let b = &mut self.buckets[idx];
        b.count += 1;
        if cap > 0 {
            if b.aux.len() == cap {
                b.aux.pop_front();
            }
            b.aux.push_back(o.clone());
        }
        match &b.max_seen {
            Some(m) if *m >= o => {}
            _ => b.max_seen = Some(o),
        }
        self.total += 1;
    }

    /// Splits the fullest bucket at its pivot. Among buckets of maximal
    /// count that currently have a pivot, the one with the smallest upper
    /// bound is chosen. Returns `false` (and leaves the sketch unchanged)
    /// when no maximal-count bucket has a pivot yet.
    fn split_largest(&mut self, m: usize) -> bool {
        let max_count = match self.buckets.iter().map(|b| b.count).max() {
            Some(c) => c,
            None => return false,
        };
        // Buckets are sorted by upper bound with the top bucket last, so the
        // first qualifying index has the smallest upper bound.
        let target = self
            .buckets
            .iter()
            .position(|b| b.count == max_count && b.pivot(m).is_some());
        let idx = match target {
            Some(i) => i,
            None => return false,
        };
        let pivot = self.buckets[idx].pivot(m).expect("pivot checked above");

        let parent = &mut self.buckets[idx];
        let (lo_aux, hi_aux): (VecDeque<T>, VecDeque<T>) =
            parent.aux.drain(..).partition(|x| *x <= pivot);
        let lower = Bucket {
            upper: Some(pivot),
            count: parent.count.div_ceil(2),
            max_seen: lo_aux.iter().max().cloned(),
            aux: lo_aux,
        };
        parent.count /= 2;
        parent.aux = hi_aux;
        self.buckets.insert(idx, lower);
        true
    }

    /// The finite upper bounds in ascending order. With `q` buckets these
    /// `q - 1` cut points approximate the stream's `q`-quantiles.
    pub fn quantile_estimates(&self) -> Vec<T> {
        self.buckets
            .iter()
            .filter_map(|b| b.upper.clone())
            .collect()
    }

    /// Collapses the sketch to a pmf: one entry per non-empty bucket, valued
    /// at the bucket's upper bound (the largest sample seen for the top
    /// bucket) and weighted by its share of the stream.
    pub fn pmf(&self) -> Result<crate::Pmf<T>, SketchError> {
        if self.total == 0 {
            return Err(SketchError::EmptySketch);
        }
        let total = self.total as f64;
        let entries = self
            .buckets
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| {
                let value = match &b.upper {
                    Some(u) => u.clone(),
                    None => b
                        .max_seen
                        .clone()
                        .expect("top bucket with samples tracks max_seen"),
                };
                (value, b.count as f64 / total)
            })
            .collect();
        Ok(crate::Pmf::from_entries(entries))
    }
}

impl<T: Ord + Clone + Display> Bucketing<T> {
    /// Line-oriented text form used by the golden tests: one bucket per
    /// line, comma-separated as `upper,count,aux...` with the literal `TOP`
    /// for the unbounded bucket and aux samples oldest first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.buckets {
            match &b.upper {
                Some(u) => write!(out, "{u}").unwrap(),
                None => out.push_str("TOP"),
            }
            write!(out, ",{}", b.count).unwrap();
            for v in &b.aux {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

impl<T: Ord + Clone + Display> Display for Bucketing<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
