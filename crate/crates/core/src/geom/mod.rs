//! Floating-point geometry for convex quadrilaterals and rotated rectangles.
//!
//! Conventions: coordinates are pixels, angles are degrees at every public
//! boundary. A positive shoelace area means counter-clockwise order in a
//! y-up frame; image coordinates are y-down, so the same vertex order appears
//! clockwise on screen. Nothing here depends on which way y points.

mod angles;
mod clip;
mod quad;
mod rect;

pub use angles::interior_angles;
pub(crate) use angles::interior_angles_with_grad;
pub use clip::{convex_intersect, polygon_area, rotated_iou};
pub use quad::{ConvexQuad, Quad};
pub use rect::{axis_align, hbb_iou, min_area_rect, rrect_to_quad, Aabb, RRect};

/// Tolerance for point-on-edge classification and vertex merging.
pub const EPS: f64 = 1e-9;

/// Tolerance of the convexity (turn sign) test, on the sine of the turn angle.
pub const EPS_CONVEX: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    // Inherent twins of the operators below, handy in method chains.
    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        self.sub(o).norm()
    }

    /// Rotates about `center` by `deg` degrees counter-clockwise.
    pub fn rotate_about(self, center: Point2, deg: f64) -> Point2 {
        let (s, c) = deg.to_radians().sin_cos();
        let d = self.sub(center);
        Point2::new(center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;

    fn add(self, o: Point2) -> Point2 {
        Point2::add(self, o)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;

    fn sub(self, o: Point2) -> Point2 {
        Point2::sub(self, o)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;

    fn mul(self, s: f64) -> Point2 {
        self.scale(s)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Normalizes an angle in degrees to `[0, 180)`.
pub(crate) fn normalize_half_turn(deg: f64) -> f64 {
    let a = deg.rem_euclid(180.0);
    if a >= 180.0 - EPS {
        0.0
    } else {
        a
    }
}
