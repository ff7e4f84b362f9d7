//! Encode a ground-truth quadrilateral as corner offsets relative to an
//! oriented anchor, then decode it back.
//!
//! ```bash
//! cargo run --example regression_codec
//! ```

use rboxkit::codec::{decode_obb, encode_obb, match_corners, CornerMatching};
use rboxkit::{Quad, RRect};

fn main() -> Result<(), rboxkit::Error> {
    let anchor = RRect::new(100.0, 80.0, 64.0, 32.0, 45.0)?;
    let gt = Quad::from_flat([70.0, 70.0, 120.0, 50.0, 132.0, 88.0, 80.0, 110.0]);

    for mode in [CornerMatching::KeepFront, CornerMatching::MinDisplacement] {
        let ordered = match_corners(&anchor, &gt, mode);
        let t = encode_obb(&anchor, &ordered)?;
        let back = decode_obb(&anchor, &t);
        let err = (0..4)
            .map(|k| back.corners[k].dist(ordered.corners[k]))
            .fold(0.0, f64::max);
        let tx: Vec<String> = (0..4).map(|k| format!("{:+.3}", t.tx(k))).collect();
        let ty: Vec<String> = (0..4).map(|k| format!("{:+.3}", t.ty(k))).collect();
        println!(
            "{mode:?}: tx [{}] ty [{}] round-trip error {err:.1e}",
            tx.join(" "),
            ty.join(" ")
        );
    }
    Ok(())
}
