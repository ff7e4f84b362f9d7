//! Generate oriented anchors for a small image and label them against two
//! ground-truth boxes.
//!
//! ```bash
//! cargo run --example anchor_labeling
//! ```

use rboxkit::anchor::{generate_anchors, label_anchors, AnchorLabel, LabelConfig, ShapePrior};
use rboxkit::geom::rrect_to_quad;
use rboxkit::RRect;

fn main() -> Result<(), rboxkit::Error> {
    let priors = [ShapePrior::new(32.0, 16.0), ShapePrior::new(24.0, 24.0)];
    let anchors = generate_anchors(128, 128, &priors, &[2, 3])?;
    let gts = [
        rrect_to_quad(&RRect::new(40.0, 40.0, 34.0, 15.0, 45.0)?)?,
        rrect_to_quad(&RRect::new(90.0, 100.0, 20.0, 22.0, 0.0)?)?,
    ];
    let labels = label_anchors(&anchors, &gts, &LabelConfig::default())?;

    let neg = labels
        .iter()
        .filter(|l| matches!(l, AnchorLabel::Negative))
        .count();
    let ign = labels
        .iter()
        .filter(|l| matches!(l, AnchorLabel::Ignore))
        .count();
    println!("{} anchors: {neg} negative, {ign} ignored", anchors.len());
    for (a, l) in anchors.iter().zip(&labels) {
        if let AnchorLabel::Positive { gt, target } = l {
            let g = a.geometry;
            println!(
                "positive for gt {gt}: P{} anchor at ({:.0}, {:.0}) {:.0}x{:.0} @ {:>3} deg, targets {:+.3?}",
                a.level, g.cx, g.cy, g.w, g.h, a.orientation, target.t
            );
        }
    }
    Ok(())
}
