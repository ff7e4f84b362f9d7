//! Refine an arbitrary quadrilateral to its minimum-area bounding rectangle,
//! and axis-align it.
//!
//! ```bash
//! cargo run --example min_area_rect
//! ```

use rboxkit::geom::{axis_align, interior_angles, min_area_rect};
use rboxkit::Quad;

fn main() -> Result<(), rboxkit::Error> {
    // A slightly skewed detection, the kind a corner regressor produces.
    let q = Quad::from_flat([10.0, 10.0, 52.0, 18.0, 47.0, 41.0, 6.0, 30.0]);
    let angles = interior_angles(&q)?;
    println!("interior angles: {:.2?}", angles);

    let r = min_area_rect(&q)?;
    println!(
        "min-area rect: center ({:.3}, {:.3}) size {:.3} x {:.3} angle {:.3} deg, area {:.3} (quad area {:.3})",
        r.cx,
        r.cy,
        r.w,
        r.h,
        r.angle,
        r.area(),
        q.signed_area().abs()
    );

    let (aabb, rotation) = axis_align(&q)?;
    println!(
        "rotate by {rotation:.3} deg about the center -> box at ({:.3}, {:.3}) size {:.3} x {:.3}",
        aabb.xmin, aabb.ymin, aabb.w, aabb.h
    );
    Ok(())
}
