//! Rotated IoU between two oriented boxes, plus the polygon where they overlap.
//!
//! ```bash
//! cargo run --example rotated_iou
//! ```

use rboxkit::geom::{convex_intersect, polygon_area, rotated_iou, rrect_to_quad};
use rboxkit::RRect;

fn main() -> Result<(), rboxkit::Error> {
    let square = rrect_to_quad(&RRect::new(0.0, 0.0, 1.0, 1.0, 0.0)?)?;
    let diamond = rrect_to_quad(&RRect::new(0.0, 0.0, 1.0, 1.0, 45.0)?)?;

    let overlap = convex_intersect(&square, &diamond);
    println!(
        "overlap has {} vertices, area {:.6}",
        overlap.len(),
        polygon_area(&overlap)
    );
    println!(
        "iou(square, diamond) = {:.6}",
        rotated_iou(&square, &diamond)
    );

    // Turning a long thin box against a fixed copy: IoU falls off fast.
    let fixed = rrect_to_quad(&RRect::new(0.0, 0.0, 40.0, 8.0, 30.0)?)?;
    for turn in [0.0, 2.0, 5.0, 10.0, 30.0, 90.0] {
        let moving = rrect_to_quad(&RRect::new(0.0, 0.0, 40.0, 8.0, 30.0 + turn)?)?;
        println!(
            "turned {turn:>4} deg: iou = {:.6}",
            rotated_iou(&fixed, &moving)
        );
    }
    Ok(())
}
