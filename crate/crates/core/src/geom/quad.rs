use std::cmp::Ordering;

use super::{Point2, EPS_CONVEX};
use crate::error::{Error, Result};

/// Four ordered corners. Corner 0 marks the object front.
///
/// A `Quad` is unchecked: regression outputs may be non-convex or even
/// self-intersecting. Convert to [`ConvexQuad`] before any overlap computation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quad {
    pub corners: [Point2; 4],
}

impl Quad {
    pub const fn new(corners: [Point2; 4]) -> Self {
        Self { corners }
    }

    /// Builds a quad from `[x1, y1, x2, y2, x3, y3, x4, y4]`.
    pub fn from_flat(v: [f64; 8]) -> Self {
        let p = |i: usize| Point2::new(v[2 * i], v[2 * i + 1]);
        Self::new([p(0), p(1), p(2), p(3)])
    }

    /// Inverse of [`Quad::from_flat`].
    pub fn to_flat(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (i, p) in self.corners.iter().enumerate() {
            out[2 * i] = p.x;
            out[2 * i + 1] = p.y;
        }
        out
    }

    pub fn signed_area(&self) -> f64 {
        super::clip::signed_area(&self.corners)
    }

    pub fn centroid(&self) -> Point2 {
        let s = self
            .corners
            .iter()
            .fold(Point2::default(), |acc, p| acc.add(*p));
        s.scale(0.25)
    }

    /// Axis-aligned bounds `(xmin, ymin, xmax, ymax)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        bounds_of(&self.corners)
    }

    pub fn validate(&self) -> Result<ConvexQuad> {
        ConvexQuad::try_from(*self)
    }
}

impl From<ConvexQuad> for Quad {
    fn from(q: ConvexQuad) -> Self {
        Quad::new(q.corners)
    }
}

pub(crate) fn bounds_of(points: &[Point2]) -> (f64, f64, f64, f64) {
    points.iter().fold(
        (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ),
        |(x0, y0, x1, y1), p| (x0.min(p.x), y0.min(p.y), x1.max(p.x), y1.max(p.y)),
    )
}

/// A validated quadrilateral: finite, simple, convex and with positive area,
/// stored counter-clockwise with the original front corner at index 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexQuad {
    corners: [Point2; 4],
    area: f64,
}

impl ConvexQuad {
    pub fn corners(&self) -> &[Point2; 4] {
        &self.corners
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn as_quad(&self) -> Quad {
        Quad::new(self.corners)
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        bounds_of(&self.corners)
    }

    /// Lexicographic total order on the corner coordinates. Used to make
    /// pairwise operations independent of argument order.
    pub(crate) fn total_cmp(&self, other: &ConvexQuad) -> Ordering {
        for (a, b) in self.corners.iter().zip(other.corners.iter()) {
            let o = a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl TryFrom<Quad> for ConvexQuad {
    type Error = Error;

    fn try_from(q: Quad) -> Result<Self> {
        if !q.corners.iter().all(|p| p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let (x0, y0, x1, y1) = q.bounds();
        let diag2 = (x1 - x0).powi(2) + (y1 - y0).powi(2);
        let signed = q.signed_area();
        if diag2 == 0.0 || signed.abs() <= 1e-12 * diag2 {
            return Err(Error::DegenerateQuad("zero area"));
        }
        let [p0, p1, p2, p3] = q.corners;
        // Reverse orientation but keep corner 0 in front.
        let corners = if signed > 0.0 {
            [p0, p1, p2, p3]
        } else {
            [p0, p3, p2, p1]
        };
        for i in 0..4 {
            let prev = corners[(i + 3) % 4];
            let cur = corners[i];
            let next = corners[(i + 1) % 4];
            let e0 = cur.sub(prev);
            let e1 = next.sub(cur);
            let scale = e0.norm() * e1.norm();
            if scale > 0.0 && e0.cross(e1) / scale < -EPS_CONVEX {
                return Err(Error::NonConvex { corner: i });
            }
        }
        Ok(ConvexQuad {
            corners,
            area: signed.abs(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(v: [f64; 8]) -> Quad {
        Quad::from_flat(v)
    }

    #[test]
    fn clockwise_input_is_reordered_keeping_front() {
        let q = quad([0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
        let c = q.validate().unwrap();
        assert_eq!(c.corners()[0], Point2::new(0.0, 0.0));
        assert_eq!(c.corners()[1], Point2::new(1.0, 0.0));
        assert_eq!(c.area(), 1.0);
    }

    #[test]
    fn rejects_bowtie_and_dart() {
        let bowtie = quad([0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
        assert!(bowtie.validate().is_err());
        let dart = quad([0.0, 0.0, 4.0, 0.0, 1.0, 1.0, 0.0, 4.0]);
        assert!(matches!(dart.validate(), Err(Error::NonConvex { .. })));
    }

    #[test]
    fn rejects_degenerate_and_nan() {
        let line = quad([0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0]);
        assert!(matches!(line.validate(), Err(Error::DegenerateQuad(_))));
        let nan = quad([f64::NAN, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(nan.validate(), Err(Error::NonFinite)));
    }

    #[test]
    fn flat_round_trip() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        assert_eq!(Quad::from_flat(v).to_flat(), v);
    }
}
