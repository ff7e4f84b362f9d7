mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rboxkit::anchor::{
    generate_anchors, iou_distance, kmeans_iou, label_anchors, read_priors, write_priors,
    AnchorLabel, LabelConfig, ShapePrior,
};
use rboxkit::geom::{rotated_iou, rrect_to_quad};

fn shapes(rng: &mut ChaCha8Rng, n: usize) -> Vec<ShapePrior> {
    (0..n)
        .map(|_| ShapePrior::new(rng.random_range(2.0..400.0), rng.random_range(2.0..400.0)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iou_distance_is_a_bounded_premetric(w in 0.1..1e4f64, h in 0.1..1e4f64, w2 in 0.1..1e4f64, h2 in 0.1..1e4f64) {
        let a = ShapePrior::new(w, h);
        let b = ShapePrior::new(w2, h2);
        prop_assert_eq!(iou_distance(&a, &a), 0.0);
        let d = iou_distance(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, iou_distance(&b, &a));
    }

    #[test]
    fn clustering_ignores_input_order(seed in any::<u64>(), k in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = shapes(&mut rng, 80);
        let a = kmeans_iou(&s, k, seed, 50).unwrap();
        s.shuffle(&mut rng);
        let b = kmeans_iou(&s, k, seed, 50).unwrap();
        prop_assert_eq!(write_priors(&a.priors), write_priors(&b.priors));
        prop_assert!(a.cost_history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(a.priors.len(), k);
    }

    #[test]
    fn priors_file_round_trips_exactly(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = shapes(&mut rng, 18);
        prop_assert_eq!(read_priors(&write_priors(&p)).unwrap(), p);
    }

    #[test]
    fn every_reachable_ground_truth_gets_a_positive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let priors = [ShapePrior::new(24.0, 12.0), ShapePrior::new(16.0, 16.0)];
        let anchors = generate_anchors(96, 96, &priors, &[2, 3]).unwrap();
        let gts: Vec<_> = (0..4).map(|_| random_convex_quad(&mut rng, 96.0, 3.0, 30.0)).collect();
        let labels = label_anchors(&anchors, &gts, &LabelConfig::default()).unwrap();
        prop_assert_eq!(labels.len(), anchors.len());
        for (gi, g) in gts.iter().enumerate() {
            let reachable = anchors.iter().any(|a| rotated_iou(&rrect_to_quad(&a.geometry).unwrap(), g) > 0.0);
            let covered = labels.iter().any(|l| matches!(l, AnchorLabel::Positive { gt, .. } if *gt == gi));
            prop_assert!(!reachable || covered, "ground truth {} has no positive", gi);
        }
        for (a, l) in anchors.iter().zip(&labels) {
            let best = gts
                .iter()
                .map(|g| rotated_iou(&rrect_to_quad(&a.geometry).unwrap(), g))
                .fold(0.0, f64::max);
            if matches!(l, AnchorLabel::Negative) {
                prop_assert!(best < 0.3);
            }
            if best >= 0.7 {
                prop_assert!(l.is_positive());
            }
        }
    }
}
