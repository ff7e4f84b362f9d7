//! Rotated NMS on oriented detections and Soft-NMS on horizontal ones.
//!
//! ```bash
//! cargo run --example nms
//! ```

use rboxkit::geom::rrect_to_quad;
use rboxkit::nms::{
    r_nms, soft_nms, HbbDetection, ScoredDetection, SoftNmsConfig, SoftNmsDecay, DEFAULT_RNMS_IOU,
};
use rboxkit::{Aabb, RRect};

fn main() -> Result<(), rboxkit::Error> {
    // Three ships moored side by side, each detected twice.
    let mut dets = Vec::new();
    for (i, cy) in [0.0, 12.0, 24.0].into_iter().enumerate() {
        for (j, jitter) in [0.0, 1.5].into_iter().enumerate() {
            dets.push(ScoredDetection {
                quad: rrect_to_quad(&RRect::new(50.0 + jitter, cy, 60.0, 10.0, 2.0 * jitter)?)?,
                class_id: 0,
                score: 0.9 - 0.1 * i as f64 - 0.3 * j as f64,
            });
        }
    }
    println!(
        "r_nms at {DEFAULT_RNMS_IOU}: kept {:?}",
        r_nms(&dets, DEFAULT_RNMS_IOU)
    );

    let boxes = [
        (Aabb::new(0.0, 0.0, 10.0, 10.0), 0.95),
        (Aabb::new(1.0, 1.0, 10.0, 10.0), 0.9),
        (Aabb::new(6.0, 0.0, 10.0, 10.0), 0.6),
        (Aabb::new(40.0, 40.0, 10.0, 10.0), 0.5),
    ];
    let hbb: Vec<HbbDetection> = boxes
        .iter()
        .map(|&(aabb, score)| HbbDetection {
            aabb,
            class_id: 0,
            score,
        })
        .collect();
    for decay in [SoftNmsDecay::Linear, SoftNmsDecay::Gaussian { sigma: 0.5 }] {
        let out = soft_nms(
            &hbb,
            &SoftNmsConfig {
                decay,
                ..SoftNmsConfig::default()
            },
        );
        let shown: Vec<String> = out
            .iter()
            .map(|(i, s)| format!("#{i}: {:.2} -> {s:.3}", hbb[*i].score))
            .collect();
        println!("soft_nms {decay:?}: {}", shown.join(", "));
    }
    Ok(())
}
