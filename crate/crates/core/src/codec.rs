//! Corner-offset regression targets relative to a rotated anchor.
//!
//! Each corner is offset from the matching anchor corner and normalized by the
//! anchor size: `t_xi = (x_i - x_ai) / w_a`, `t_yi = (y_i - y_ai) / h_a`.

use crate::error::{Error, Result};
use crate::geom::{Point2, Quad, RRect};

/// Eight normalized offsets, ordered `[t_x1, t_x2, t_x3, t_x4, t_y1, t_y2, t_y3, t_y4]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegressionTarget {
    pub t: [f64; 8],
}

impl RegressionTarget {
    pub fn tx(&self, corner: usize) -> f64 {
        self.t[corner]
    }

    pub fn ty(&self, corner: usize) -> f64 {
        self.t[4 + corner]
    }

    pub fn is_finite(&self) -> bool {
        self.t.iter().all(|v| v.is_finite())
    }
}

fn check_anchor(anchor: &RRect) -> Result<()> {
    if !(anchor.w > 0.0 && anchor.h > 0.0) {
        return Err(Error::ZeroAnchorDim {
            w: anchor.w,
            h: anchor.h,
        });
    }
    Ok(())
}

/// Encodes `target` against the anchor's materialized corners, corner by
/// corner in the given order.
pub fn encode_obb(anchor: &RRect, target: &Quad) -> Result<RegressionTarget> {
    check_anchor(anchor)?;
    let ac = anchor.corners();
    let mut t = [0.0; 8];
    for i in 0..4 {
        t[i] = (target.corners[i].x - ac[i].x) / anchor.w;
        t[4 + i] = (target.corners[i].y - ac[i].y) / anchor.h;
    }
    let out = RegressionTarget { t };
    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

/// Inverse of [`encode_obb`]. The decoded quad is not validated: regression
/// outputs may be non-convex. Refine with [`crate::geom::min_area_rect`].
pub fn decode_obb(anchor: &RRect, t: &RegressionTarget) -> Quad {
    let ac = anchor.corners();
    let mut corners = [Point2::default(); 4];
    for (i, c) in corners.iter_mut().enumerate() {
        *c = Point2::new(t.tx(i) * anchor.w + ac[i].x, t.ty(i) * anchor.h + ac[i].y);
    }
    Quad::new(corners)
}

/// How ground-truth corners are put in correspondence with anchor corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CornerMatching {
    /// Cyclic rotation of the ground-truth corners minimizing the total
    /// squared distance to the anchor corners.
    #[default]
    MinDisplacement,
    /// Keep the annotated order so corner 0 stays the object front.
    KeepFront,
}

/// Reorders `gt` (counter-clockwise assumed) to correspond with the anchor
/// corners. Ties between rotations go to the smallest shift.
pub fn match_corners(anchor: &RRect, gt: &Quad, mode: CornerMatching) -> Quad {
    if mode == CornerMatching::KeepFront {
        return *gt;
    }
    let ac = anchor.corners();
    let cost = |shift: usize| -> f64 {
        (0..4)
            .map(|i| {
                let d = gt.corners[(i + shift) % 4].sub(ac[i]);
                d.dot(d)
            })
            .sum()
    };
    let best = (0..4)
        .min_by(|&a, &b| cost(a).total_cmp(&cost(b)))
        .unwrap_or(0);
    let mut corners = gt.corners;
    corners.rotate_left(best);
    Quad::new(corners)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anchor() -> RRect {
        RRect::new(50.0, 40.0, 100.0, 20.0, 0.0).unwrap()
    }

    #[test]
    fn identity_encodes_to_zero() {
        let a = anchor();
        let t = encode_obb(&a, &Quad::new(a.corners())).unwrap();
        assert_eq!(t.t, [0.0; 8]);
        assert_eq!(
            decode_obb(&a, &RegressionTarget::default()),
            Quad::new(a.corners())
        );
    }

    #[test]
    fn shift_scales_by_anchor_width() {
        let a = anchor();
        let mut q = Quad::new(a.corners());
        q.corners[0].x += 10.0;
        let t = encode_obb(&a, &q).unwrap();
        assert!((t.tx(0) - 0.1).abs() < 1e-15);
        let back = decode_obb(&a, &t);
        assert!((back.corners[0].x - q.corners[0].x).abs() < 1e-12);
    }

    #[test]
    fn zero_anchor_rejected() {
        let a = RRect {
            cx: 0.0,
            cy: 0.0,
            w: 0.0,
            h: 1.0,
            angle: 0.0,
        };
        assert!(matches!(
            encode_obb(&a, &Quad::default()),
            Err(Error::ZeroAnchorDim { .. })
        ));
    }

    #[test]
    fn matching_undoes_cyclic_shift() {
        let a = anchor();
        let mut c = a.corners();
        c.rotate_left(2);
        let m = match_corners(&a, &Quad::new(c), CornerMatching::MinDisplacement);
        assert_eq!(m, Quad::new(a.corners()));
        let kept = match_corners(&a, &Quad::new(c), CornerMatching::KeepFront);
        assert_eq!(kept, Quad::new(c));
    }
}
