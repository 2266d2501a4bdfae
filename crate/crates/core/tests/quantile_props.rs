//! Properties of the error measure, with an independent enumeration oracle
//! for the exact quantile cut points.

use ordsketch::bucketing::{Bucketing, GrowthPolicy};
use ordsketch::quantile::{bucketing_error, RecordedStream};
use proptest::prelude::*;

/// Independent cut-point oracle: the i-th of q cut points is the smallest
/// stream element v with #(x <= v) >= ceil(i*t/q). Pure enumeration and
/// counting; no sorting, no shared code with the implementation.
fn oracle_cuts(samples: &[i64], q: usize) -> Vec<i64> {
    let t = samples.len();
    (1..q)
        .map(|i| {
            let target = (i * t).div_ceil(q);
            samples
                .iter()
                .filter(|v| samples.iter().filter(|x| x <= v).count() >= target)
                .min()
                .copied()
                .expect("some element always reaches the target count")
        })
        .collect()
}

proptest! {
    #[test]
    fn true_quantiles_match_the_enumeration_oracle(
        stream in prop::collection::vec(-20i64..20, 1..60),
        q in 2usize..8,
    ) {
        prop_assume!(q <= stream.len());
        let s = RecordedStream::new(stream.clone());
        prop_assert_eq!(s.true_quantiles(q).unwrap(), oracle_cuts(&stream, q));
    }

    #[test]
    fn error_is_normalized_and_monotone_map_invariant(
        stream in prop::collection::vec(-40i64..40, 8..300),
        k10 in 10u32..35,
    ) {
        let policy = GrowthPolicy::KLogGrowing { k: k10 as f64 / 10.0, m: 3 };
        let map = |x: i64| x * x * x;

        let mut sketch = Bucketing::new(policy.clone());
        let mut mapped_sketch = Bucketing::new(policy);
        let mut s = RecordedStream::default();
        let mut mapped_s = RecordedStream::default();
        for v in &stream {
            sketch.add(*v);
            mapped_sketch.add(map(*v));
            s.push(*v);
            mapped_s.push(map(*v));
        }
        prop_assume!(sketch.bucket_count() >= 2);

        let report = bucketing_error(&s, &sketch).unwrap();
        prop_assert!((0.0..=1.0).contains(&report.e));
        prop_assert!(report.per_boundary.iter().all(|g| (0.0..=1.0).contains(g)));

        // Ranks are order statistics: the mapped instance produces the
        // identical report, bit for bit.
        let mapped_report = bucketing_error(&mapped_s, &mapped_sketch).unwrap();
        prop_assert_eq!(report.q, mapped_report.q);
        prop_assert_eq!(report.per_boundary, mapped_report.per_boundary);
        prop_assert_eq!(report.e, mapped_report.e);
    }
}
