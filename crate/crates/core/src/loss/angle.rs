use std::fmt;
use std::str::FromStr;

use super::smooth_l1;
use crate::error::{Error, Result};
use crate::geom::{interior_angles_with_grad, Quad};

/// Deviations from 90° below this many degrees count as exactly right.
/// Float noise in the corners of a rotated rectangle stays far below it.
pub const RIGHT_ANGLE_TOLERANCE_DEG: f64 = 1e-9;

/// Penalty applied to each of the first three interior angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AngleVariant {
    /// `|tan(θ - 90°)|`
    TangentL1,
    /// `smooth_l1(|θ - 90°|)`, deviation in degrees
    SmoothL1,
    /// `(θ - 90°)²`, deviation in degrees
    #[default]
    L2,
}

impl AngleVariant {
    pub const ALL: [AngleVariant; 3] = [
        AngleVariant::TangentL1,
        AngleVariant::SmoothL1,
        AngleVariant::L2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AngleVariant::TangentL1 => "tangent_l1",
            AngleVariant::SmoothL1 => "smooth_l1",
            AngleVariant::L2 => "l2",
        }
    }

    /// Penalty and its derivative with respect to the deviation in degrees.
    fn penalty(self, dev_deg: f64, corner: usize) -> Result<(f64, f64)> {
        if dev_deg.abs() < RIGHT_ANGLE_TOLERANCE_DEG {
            return Ok((0.0, 0.0));
        }
        match self {
            AngleVariant::TangentL1 => {
                let r = dev_deg.to_radians();
                let c = r.cos();
                if c.abs() < 1e-9 {
                    return Err(Error::SingularAngle { corner });
                }
                let t = r.tan();
                let sec2 = 1.0 / (c * c);
                Ok((t.abs(), t.signum() * sec2 * 1f64.to_radians()))
            }
            AngleVariant::SmoothL1 => {
                let (v, d) = smooth_l1(dev_deg.abs());
                Ok((v, d * dev_deg.signum()))
            }
            AngleVariant::L2 => Ok((dev_deg * dev_deg, 2.0 * dev_deg)),
        }
    }
}

impl fmt::Display for AngleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AngleVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tangent_l1" | "tangent-l1" | "tan" => Ok(AngleVariant::TangentL1),
            "smooth_l1" | "smooth-l1" => Ok(AngleVariant::SmoothL1),
            "l2" => Ok(AngleVariant::L2),
            _ => Err(Error::invalid(format!("unknown angle loss variant '{s}'"))),
        }
    }
}

/// Rectangularity loss over the first three interior angles of `q`; the
/// fourth is determined by them. Returns the loss and its gradient with
/// respect to `[x1, y1, ..., x4, y4]`.
pub fn angle_loss(q: &Quad, variant: AngleVariant) -> Result<(f64, [f64; 8])> {
    let angles = interior_angles_with_grad(q)?;
    let mut loss = 0.0;
    let mut grad = [0.0; 8];
    for (l, (theta, dtheta)) in angles.iter().take(3).enumerate() {
        let (v, dv) = variant.penalty(theta - 90.0, l)?;
        loss += v;
        for (g, d) in grad.iter_mut().zip(dtheta) {
            *g += dv * d;
        }
    }
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point2, RRect};

    /// Right trapezoid with interior angles (80, 100, 90, 90).
    fn fixture() -> Quad {
        let y1 = 3.0 / 80f64.to_radians().tan();
        Quad::new([
            Point2::new(0.0, 0.0),
            Point2::new(3.0, y1),
            Point2::new(3.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
    }

    #[test]
    fn fixture_values() {
        let a = crate::geom::interior_angles(&fixture()).unwrap();
        for (got, want) in a.iter().zip([80.0, 100.0, 90.0, 90.0]) {
            assert!((got - want).abs() < 1e-9, "{a:?}");
        }
        let tan10 = 10f64.to_radians().tan();
        let cases = [
            (AngleVariant::TangentL1, 2.0 * tan10),
            (AngleVariant::SmoothL1, 19.0),
            (AngleVariant::L2, 200.0),
        ];
        for (v, want) in cases {
            let (l, _) = angle_loss(&fixture(), v).unwrap();
            assert!((l - want).abs() <= 1e-6 * want, "{v}: {l} vs {want}");
        }
    }

    #[test]
    fn rectangles_are_zero() {
        for angle in [0.0, 17.0, 45.0, 133.3] {
            let r = RRect::new(5.0, -2.0, 7.0, 3.0, angle).unwrap();
            for v in AngleVariant::ALL {
                let (l, g) = angle_loss(&Quad::new(r.corners()), v).unwrap();
                assert_eq!(l, 0.0, "{v} at {angle}");
                assert_eq!(g, [0.0; 8]);
            }
        }
    }

    #[test]
    fn variant_parsing() {
        for v in AngleVariant::ALL {
            assert_eq!(v.name().parse::<AngleVariant>().unwrap(), v);
        }
        assert!("cubic".parse::<AngleVariant>().is_err());
    }

    #[test]
    fn degenerate_side_propagates() {
        let q = Quad::from_flat([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        assert!(angle_loss(&q, AngleVariant::L2).is_err());
    }
}
