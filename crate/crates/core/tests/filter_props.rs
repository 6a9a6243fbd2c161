use linprobe::filter::{FilterError, FilterInsert};
use linprobe::{FilterMode, FilterParams, Key, SignatureFilter};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = FilterMode> {
    prop::sample::select(FilterMode::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn no_false_negatives_any_interleaving(
        mode in mode(),
        bits in 1u32..16,
        seed in any::<u64>(),
        ops in prop::collection::vec((any::<bool>(), 0u64..5000), 1..400),
    ) {
        let mut filter = SignatureFilter::new(FilterParams::new(mode, bits, 1024), seed).unwrap();
        let mut members: Vec<Key> = Vec::new();
        for (insert, key) in ops {
            if insert && members.len() < 600 {
                filter.insert(key).unwrap();
                members.push(key);
            }
            for &m in &members {
                prop_assert!(filter.contains(m));
            }
        }
    }

    #[test]
    fn inserts_are_monotone_and_idempotent(
        mode in mode(),
        seed in any::<u64>(),
        keys in prop::collection::vec(0u64..1 << 32, 1..300),
        probes in prop::collection::vec(0u64..1 << 32, 50),
    ) {
        let mut filter = SignatureFilter::new(FilterParams::new(mode, 6, 1024), seed).unwrap();
        let mut answers: Vec<bool> = probes.iter().map(|&q| filter.contains(q)).collect();
        for &k in &keys {
            filter.insert(k).unwrap();
            let now: Vec<bool> = probes.iter().map(|&q| filter.contains(q)).collect();
            // yes stays yes
            prop_assert!(answers.iter().zip(&now).all(|(&before, &after)| !before || after));
            answers = now;
            let len = filter.len();
            let again = filter.insert(k).unwrap();
            let repeated = matches!(again, FilterInsert::AlreadyPositive { .. });
            prop_assert!(repeated, "re-insert of {} stored again", k);
            prop_assert_eq!(filter.len(), len);
            prop_assert_eq!(probes.iter().map(|&q| filter.contains(q)).collect::<Vec<_>>(), answers.clone());
        }
    }
}

#[test]
fn full_filter_errors_instead_of_looping() {
    let mut filter = SignatureFilter::new(FilterParams::new(FilterMode::Independent, 32, 16), 3).unwrap();
    let mut stored = 0;
    let mut err = None;
    for k in 0..100 {
        match filter.insert(k) {
            Ok(FilterInsert::Inserted { .. }) => stored += 1,
            Ok(FilterInsert::AlreadyPositive { .. }) => {}
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    assert_eq!(stored, 15);
    assert_eq!(err, Some(FilterError::Full { capacity: 16 }));
}

#[test]
fn filters_move_between_threads() {
    let mut filter = SignatureFilter::new(FilterParams::new(FilterMode::Paired, 10, 256), 1).unwrap();
    for k in 0..100 {
        filter.insert(k).unwrap();
    }
    let filter = std::sync::Arc::new(filter);
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let f = filter.clone();
            std::thread::spawn(move || (i * 25..(i + 1) * 25).all(|k| f.contains(k)))
        })
        .collect();
    assert!(handles.into_iter().all(|h| h.join().unwrap()));
}
