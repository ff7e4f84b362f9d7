use super::quad::bounds_of;
use super::{normalize_half_turn, ConvexQuad, Point2, Quad, EPS};
use crate::error::{Error, Result};

/// Rotated rectangle.
///
/// `angle` is measured counter-clockwise from +x to the `w` edge, in degrees,
/// and lives in `[0, 180)`: front and back of an object are not told apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RRect {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
    pub angle: f64,
}

impl RRect {
    /// Creates a rectangle, normalizing the angle into `[0, 180)`.
    pub fn new(cx: f64, cy: f64, w: f64, h: f64, angle: f64) -> Result<Self> {
        if ![cx, cy, w, h, angle].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if w <= 0.0 || h <= 0.0 {
            return Err(Error::invalid(format!(
                "rectangle sides must be positive (got {w} x {h})"
            )));
        }
        Ok(Self {
            cx,
            cy,
            w,
            h,
            angle: normalize_half_turn(angle),
        })
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.cx, self.cy)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Corners counter-clockwise; corner 0 is the image of the local
    /// `(-w/2, -h/2)` corner.
    pub fn corners(&self) -> [Point2; 4] {
        let (s, c) = self.angle.to_radians().sin_cos();
        let (hw, hh) = (0.5 * self.w, 0.5 * self.h);
        [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)]
            .map(|(dx, dy)| Point2::new(self.cx + c * dx - s * dy, self.cy + s * dx + c * dy))
    }
}

/// Materializes a rotated rectangle as a validated quad.
pub fn rrect_to_quad(r: &RRect) -> Result<ConvexQuad> {
    Quad::new(r.corners()).validate()
}

/// Axis-aligned box as `{xmin, ymin, w, h}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Aabb {
    pub xmin: f64,
    pub ymin: f64,
    pub w: f64,
    pub h: f64,
}

impl Aabb {
    pub fn new(xmin: f64, ymin: f64, w: f64, h: f64) -> Self {
        Self { xmin, ymin, w, h }
    }

    pub fn from_corners(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Self::new(xmin, ymin, xmax - xmin, ymax - ymin)
    }

    /// Tight axis-aligned bounds of a quad.
    pub fn enclosing(q: &Quad) -> Self {
        let (x0, y0, x1, y1) = q.bounds();
        Self::from_corners(x0, y0, x1, y1)
    }

    pub fn xmax(&self) -> f64 {
        self.xmin + self.w
    }

    pub fn ymax(&self) -> f64 {
        self.ymin + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn to_quad(&self) -> Quad {
        let (x0, y0, x1, y1) = (self.xmin, self.ymin, self.xmax(), self.ymax());
        Quad::from_flat([x0, y0, x1, y0, x1, y1, x0, y1])
    }
}

/// Standard IoU of two axis-aligned boxes. Two empty boxes give 0.
pub fn hbb_iou(a: &Aabb, b: &Aabb) -> f64 {
    let iw = (a.xmax().min(b.xmax()) - a.xmin.max(b.xmin)).max(0.0);
    let ih = (a.ymax().min(b.ymax()) - a.ymin.max(b.ymin)).max(0.0);
    let inter = iw * ih;
    let union = a.area() + b.area() - inter;
    if union <= 0.0 || inter <= 0.0 {
        return 0.0;
    }
    (inter / union).clamp(0.0, 1.0)
}

/// Minimum-area rectangle enclosing the corners of `q`.
///
/// Rotating calipers over the convex hull: the optimum has one side collinear
/// with a hull edge. Non-convex quads are handled through their hull. When
/// several edges tie (a rectangle input), the edge leaving corner 0 wins, so
/// rectangles produced by [`RRect::corners`] map back to the same `RRect`.
pub fn min_area_rect(q: &Quad) -> Result<RRect> {
    if !q.corners.iter().all(|p| p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let ring = match q.validate() {
        Ok(c) => drop_collinear(c.corners().to_vec()),
        Err(Error::NonConvex { .. }) | Err(Error::DegenerateQuad(_)) => convex_hull(&q.corners),
        Err(e) => return Err(e),
    };
    if ring.len() < 3 {
        return Err(Error::DegenerateQuad("corners are collinear"));
    }
    min_area_rect_of_hull(&ring)
}

fn min_area_rect_of_hull(ring: &[Point2]) -> Result<RRect> {
    let origin = ring[0];
    let n = ring.len();
    let mut best: Option<(f64, RRect)> = None;
    let mut candidates = Vec::with_capacity(n);
    for i in 0..n {
        let edge = ring[(i + 1) % n].sub(ring[i]);
        let len = edge.norm();
        if len <= EPS {
            continue;
        }
        let u = edge.scale(1.0 / len);
        let nrm = Point2::new(-u.y, u.x);
        let (mut umin, mut umax, mut nmin, mut nmax) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in ring {
            let d = p.sub(origin);
            let pu = d.dot(u);
            let pn = d.dot(nrm);
            umin = umin.min(pu);
            umax = umax.max(pu);
            nmin = nmin.min(pn);
            nmax = nmax.max(pn);
        }
        let (w, h) = (umax - umin, nmax - nmin);
        let center = origin
            .add(u.scale(0.5 * (umin + umax)))
            .add(nrm.scale(0.5 * (nmin + nmax)));
        let rect = RRect {
            cx: center.x,
            cy: center.y,
            w,
            h,
            angle: normalize_half_turn(u.y.atan2(u.x).to_degrees()),
        };
        candidates.push((w * h, rect));
    }
    let min_area = candidates
        .iter()
        .map(|(a, _)| *a)
        .fold(f64::INFINITY, f64::min);
    for (area, rect) in candidates {
        if area <= min_area * (1.0 + 1e-10) {
            best = Some((area, rect));
            break;
        }
    }
    match best {
        Some((area, rect)) if area > 0.0 => Ok(rect),
        _ => Err(Error::DegenerateQuad("zero-area hull")),
    }
}

fn drop_collinear(ring: Vec<Point2>) -> Vec<Point2> {
    let n = ring.len();
    let keep: Vec<Point2> = (0..n)
        .filter(|&i| {
            let prev = ring[(i + n - 1) % n];
            let next = ring[(i + 1) % n];
            let e0 = ring[i].sub(prev);
            let e1 = next.sub(ring[i]);
            let scale = e0.norm() * e1.norm();
            scale > 0.0 && e0.cross(e1) / scale > EPS
        })
        .map(|i| ring[i])
        .collect();
    keep
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2, a: Point2, b: Point2| a.sub(o).cross(b.sub(o));
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Rotates `q` about the center of its minimum-area rectangle so that the
/// rectangle becomes axis-aligned. Returns the resulting bounds and the
/// applied rotation in degrees (counter-clockwise positive).
pub fn axis_align(q: &Quad) -> Result<(Aabb, f64)> {
    let rect = min_area_rect(q)?;
    // `+ 0.0` turns -0.0 into 0.0.
    let rotation = -rect.angle + 0.0;
    let rotated: Vec<Point2> = q
        .corners
        .iter()
        .map(|p| p.rotate_about(rect.center(), rotation))
        .collect();
    let (x0, y0, x1, y1) = bounds_of(&rotated);
    Ok((Aabb::from_corners(x0, y0, x1, y1), rotation))
}
