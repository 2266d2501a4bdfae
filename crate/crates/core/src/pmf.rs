//! Finite probability mass functions over ordered values.
//!
//! A [`Pmf`] is the common currency between the sketch and the search: an
//! exact tally, a bucketed sketch and a hand-written test fixture all
//! collapse to a list of `(value, probability)` pairs sorted by value.

/// A finite pmf with entries sorted ascending by value.
///
/// Entries may carry duplicate values (a sketch whose top-bucket
/// representative coincides with a finite bound produces one); consumers
/// treat equal-valued entries as one atom with summed mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    entries: Vec<(T, f64)>,
}

impl<T: Ord> Pmf<T> {
    /// Builds a pmf from `(value, probability)` pairs, sorting by value.
    /// Probabilities are taken as given; they are expected to be
    /// nonnegative and to sum to 1.
    pub fn from_entries(mut entries: Vec<(T, f64)>) -> Self {
        debug_assert!(entries.iter().all(|(_, p)| *p >= 0.0));
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Pmf { entries }
    }

    /// All mass on a single value.
    pub fn point_mass(value: T) -> Self {
        Pmf {
            entries: vec![(value, 1.0)],
        }
    }

    pub fn entries(&self) -> &[(T, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}
