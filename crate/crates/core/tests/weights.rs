use fermigraph::spectral::spectral_gap;
use fermigraph::weights::{
    box_weights, load_weights, random_weights, save_weights, uniform_weights, WeightSet, DEFAULT_RANDOM_RANGE,
};
use fermigraph::Provenance;
use proptest::prelude::*;

#[test]
fn same_seed_same_weights() {
    for seed in 0..20 {
        assert_eq!(
            random_weights(6, seed, DEFAULT_RANDOM_RANGE).unwrap(),
            random_weights(6, seed, DEFAULT_RANDOM_RANGE).unwrap()
        );
    }
    assert_ne!(
        random_weights(6, 1, DEFAULT_RANDOM_RANGE).unwrap().alphas(),
        random_weights(6, 2, DEFAULT_RANDOM_RANGE).unwrap().alphas()
    );
}

#[test]
fn decreasing_family_round_trips_and_gives_monotone_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let mut gaps = Vec::new();
    for n in 2..=12 {
        // exchange constants falling off with N, as for a softening trap
        let alphas: Vec<f64> = (1..n).map(|k| 1.0 / (n as f64 * (1.0 + 0.1 * k as f64))).collect();
        let w = WeightSet::explicit(alphas).unwrap();
        for ext in ["json", "csv"] {
            let path = dir.path().join(format!("w{n}.{ext}"));
            save_weights(&w, &path, "synthetic", "test fixture").unwrap();
            let back = load_weights(&path).unwrap();
            let bits: Vec<u64> = back.alphas().iter().map(|a| a.to_bits()).collect();
            let want: Vec<u64> = w.alphas().iter().map(|a| a.to_bits()).collect();
            assert_eq!(bits, want);
            assert!(matches!(back.provenance(), Provenance::File { .. }));
        }
        gaps.push(spectral_gap(&w).unwrap());
    }
    assert!(gaps.windows(2).all(|g| g[1] < g[0]));
}

proptest! {
    #[test]
    fn random_weights_stay_in_range(n in 2usize..40, seed in any::<u64>(), lo in 0.01f64..1.0, span in 1.0f64..100.0) {
        let w = random_weights(n, seed, (lo, lo * span)).unwrap();
        prop_assert_eq!(w.alphas().len(), n - 1);
        prop_assert!(w.alphas().iter().all(|&a| a >= lo && a <= lo * span));
    }

    #[test]
    fn producers_are_valid(n in 2usize..40, l in 0.1f64..10.0, a in 0.01f64..100.0) {
        for w in [box_weights(n, l).unwrap(), uniform_weights(n, a).unwrap()] {
            prop_assert_eq!(w.n(), n);
            prop_assert!(w.alphas().iter().all(|x| x.is_finite() && *x > 0.0));
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact(alphas in prop::collection::vec(1e-6f64..1e6, 1..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let w = WeightSet::explicit(alphas).unwrap();
        save_weights(&w, &path, "any", "proptest").unwrap();
        let back = load_weights(&path).unwrap();
        prop_assert_eq!(back.alphas(), w.alphas());
    }
}
