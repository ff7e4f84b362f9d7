mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rboxkit::eval::{evaluate, voc_ap, ApMode, DetGeometry, DetRecord, EvalConfig, GtRecord};

struct Fixture {
    gts: BTreeMap<String, Vec<GtRecord>>,
    dets: Vec<DetRecord>,
    /// Ground truths (image, index) without a detection.
    missed: Vec<(String, usize)>,
}

fn cell(i: usize) -> (f64, f64) {
    ((i % 8) as f64 * 40.0, (i / 8) as f64 * 40.0)
}

fn fixture(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gts = BTreeMap::new();
    let mut dets = Vec::new();
    let mut missed = Vec::new();
    for img in 0..3 {
        let id = format!("img{img}");
        let n = rng.random_range(1..12);
        let mut recs = Vec::new();
        for i in 0..n {
            let (x, y) = cell(i);
            let q = axis_square(x, y, 20.0, 20.0);
            recs.push(GtRecord {
                quad: q,
                category: "car".into(),
                difficult: false,
            });
            if rng.random_bool(0.6) {
                let dx = rng.random_range(-2.0..2.0);
                dets.push(DetRecord {
                    image_id: id.clone(),
                    score: rng.random_range(0.0..1.0),
                    geometry: DetGeometry::Obb(axis_square(x + dx, y, 20.0, 20.0)),
                });
            } else {
                missed.push((id.clone(), i));
            }
        }
        for _ in 0..rng.random_range(0..6) {
            let (x, y) = cell(rng.random_range(20..40));
            dets.push(DetRecord {
                image_id: id.clone(),
                score: rng.random_range(0.0..1.0),
                geometry: DetGeometry::Obb(axis_square(x, y, 20.0, 20.0)),
            });
        }
        gts.insert(id, recs);
    }
    Fixture { gts, dets, missed }
}

fn ap(f: &BTreeMap<String, Vec<GtRecord>>, dets: &[DetRecord], mode: ApMode) -> f64 {
    let d = BTreeMap::from([("car".to_string(), dets.to_vec())]);
    let cfg = EvalConfig {
        ap_mode: mode,
        ..EvalConfig::default()
    };
    let r = evaluate(&d, f, &cfg).unwrap();
    let c = &r.classes["car"];
    assert!(c.tp <= c.npos, "one-to-one matching violated");
    assert_eq!(c.tp + c.fp, c.ndet);
    c.ap
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ap_is_bounded_and_grid_close_to_all_point(seed in any::<u64>()) {
        let f = fixture(seed);
        let a11 = ap(&f.gts, &f.dets, ApMode::ElevenPoint);
        let all = ap(&f.gts, &f.dets, ApMode::AllPoint);
        prop_assert!((0.0..=1.0).contains(&a11) && (0.0..=1.0).contains(&all));
        prop_assert!(a11 <= all + 1.0 / 11.0 + 1e-12);
    }

    #[test]
    fn a_new_true_positive_never_lowers_ap(seed in any::<u64>(), score in 0.0..1.0f64) {
        let f = fixture(seed);
        prop_assume!(!f.missed.is_empty());
        let (img, i) = &f.missed[0];
        let (x, y) = cell(*i);
        let mut more = f.dets.clone();
        more.push(DetRecord { image_id: img.clone(), score, geometry: DetGeometry::Obb(axis_square(x, y, 20.0, 20.0)) });
        for mode in [ApMode::ElevenPoint, ApMode::AllPoint] {
            prop_assert!(ap(&f.gts, &more, mode) >= ap(&f.gts, &f.dets, mode) - 1e-12);
        }
    }

    #[test]
    fn a_top_false_positive_never_raises_ap(seed in any::<u64>()) {
        let f = fixture(seed);
        let mut more = f.dets.clone();
        more.push(DetRecord { image_id: "img0".into(), score: 1.0, geometry: DetGeometry::Obb(axis_square(5000.0, 5000.0, 20.0, 20.0)) });
        for mode in [ApMode::ElevenPoint, ApMode::AllPoint] {
            prop_assert!(ap(&f.gts, &more, mode) <= ap(&f.gts, &f.dets, mode) + 1e-12);
        }
    }

    #[test]
    fn detection_order_does_not_matter(seed in any::<u64>()) {
        let f = fixture(seed);
        let mut shuffled = f.dets.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        prop_assert_eq!(ap(&f.gts, &f.dets, ApMode::AllPoint), ap(&f.gts, &shuffled, ApMode::AllPoint));
    }
}

#[test]
fn voc_ap_rejects_bad_curves() {
    assert!(voc_ap(&[(0.5, 1.0), (0.4, 1.0)], ApMode::ElevenPoint).is_err());
    assert!(voc_ap(&[(0.5, 1.2)], ApMode::ElevenPoint).is_err());
    assert_eq!(voc_ap(&[], ApMode::AllPoint).unwrap(), 0.0);
}
