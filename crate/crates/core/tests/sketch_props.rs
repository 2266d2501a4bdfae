//! Structural invariants of the sketch under random streams and policies.

use ordsketch::{Bucketing, GrowthPolicy};
use proptest::prelude::*;

fn policy_strategy() -> impl Strategy<Value = GrowthPolicy> {
    let m = prop_oneof![Just(1usize), Just(3), Just(5)];
    let m2 = m.clone();
    prop_oneof![
        (0usize..8).prop_map(|n| GrowthPolicy::FirstN { n }),
        (1u32..=40, m).prop_map(|(k10, m)| GrowthPolicy::KLogGrowing {
            k: k10 as f64 / 10.0,
            m,
        }),
        (1u32..=40, 0usize..8, m2).prop_map(|(k10, n, m)| GrowthPolicy::KLogGrowingFirstN {
            k: k10 as f64 / 10.0,
            n,
            m,
        }),
    ]
}

proptest! {
    /// Ordering, conservation and the space bound hold after every single
    /// insertion; the final boundaries partition the replayed stream.
    #[test]
    fn core_invariants_hold_along_any_stream(
        policy in policy_strategy(),
        stream in prop::collection::vec(-50i64..50, 0..400),
    ) {
        let mut b = Bucketing::new(policy.clone());
        for (i, v) in stream.iter().enumerate() {
            b.add(*v);
            let stored = (i + 1) as u64;
            prop_assert!(
                b.finite_bucket_count() <= policy.finite_bucket_bound(stored),
                "space bound violated at t={stored}: {} buckets",
                b.finite_bucket_count()
            );
            prop_assert_eq!(b.total(), stored);
            prop_assert_eq!(
                b.buckets().iter().map(|bk| bk.count()).sum::<u64>(),
                stored
            );
        }

        let uppers: Vec<Option<i64>> = b.buckets().iter().map(|bk| bk.upper().copied()).collect();
        let (top, finite) = uppers.split_last().unwrap();
        prop_assert!(top.is_none(), "last bucket must be the top bucket");
        prop_assert!(finite.iter().all(|u| u.is_some()));
        prop_assert!(
            finite.windows(2).all(|w| w[0] < w[1]),
            "bounds not strictly increasing: {finite:?}"
        );

        for v in &stream {
            let contains = |i: usize| {
                let hi_ok = match b.buckets()[i].upper() {
                    Some(u) => v <= u,
                    None => true,
                };
                let lo_ok = i == 0 || v > b.buckets()[i - 1].upper().unwrap();
                hi_ok && lo_ok
            };
            let homes = (0..b.bucket_count()).filter(|i| contains(*i)).count();
            prop_assert_eq!(homes, 1, "sample {} has {} homes", v, homes);
            prop_assert!(contains(b.find_bucket(v)));
        }
    }

    /// Feeding the stream through a strictly monotone map yields the
    /// identically shaped bucketing with mapped bounds.
    #[test]
    fn strictly_monotone_maps_preserve_the_shape(
        policy in policy_strategy(),
        stream in prop::collection::vec(-50i64..50, 1..300),
    ) {
        let map = |x: i64| x * x * x;
        let mut plain = Bucketing::new(policy.clone());
        let mut mapped = Bucketing::new(policy);
        for v in &stream {
            plain.add(*v);
            mapped.add(map(*v));
        }
        prop_assert_eq!(plain.bucket_count(), mapped.bucket_count());
        for (p, m) in plain.buckets().iter().zip(mapped.buckets()) {
            prop_assert_eq!(p.count(), m.count());
            prop_assert_eq!(m.upper().copied(), p.upper().map(|u| map(*u)));
            prop_assert_eq!(
                m.aux().copied().collect::<Vec<_>>(),
                p.aux().map(|a| map(*a)).collect::<Vec<_>>()
            );
        }
    }
}
