use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    angle_loss, roi_loss, rpn_loss, smooth_l1, AngleVariant, RoiMode, RoiSample, RpnBatch,
    RpnSample,
};
use crate::error::{Error, Result};
use crate::geom::{interior_angles, Quad, RRect};

/// Pass threshold on the maximum relative gradient error.
pub const GRAD_TOLERANCE: f64 = 1e-5;

/// Maximum over coordinates of `|analytic - numeric| / max(1, |analytic|)`,
/// with the numeric derivative from central differences of step `h`.
///
/// `f` returns the value and the analytic gradient at a point.
pub fn grad_check<F>(mut f: F, point: &[f64], h: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("step must be positive"));
    }
    let (v0, analytic) = f(point)?;
    if analytic.len() != point.len() {
        return Err(Error::invalid(format!(
            "gradient has {} entries for a {}-dimensional point",
            analytic.len(),
            point.len()
        )));
    }
    if !v0.is_finite() || analytic.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFiniteEvaluation("analytic gradient".into()));
    }
    let mut x = point.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..point.len() {
        x[i] = point[i] + h;
        let (fp, _) = f(&x)?;
        x[i] = point[i] - h;
        let (fm, _) = f(&x)?;
        x[i] = point[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFiniteEvaluation(format!("coordinate {i}")));
        }
        let numeric = (fp - fm) / (2.0 * h);
        let err = (analytic[i] - numeric).abs() / analytic[i].abs().max(1.0);
        worst = worst.max(err);
    }
    Ok(worst)
}

/// A loss covered by the seeded gradient suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    SmoothL1,
    Rpn,
    Roi,
    Angle(AngleVariant),
}

impl LossKind {
    pub const ALL: [LossKind; 6] = [
        LossKind::SmoothL1,
        LossKind::Rpn,
        LossKind::Roi,
        LossKind::Angle(AngleVariant::TangentL1),
        LossKind::Angle(AngleVariant::SmoothL1),
        LossKind::Angle(AngleVariant::L2),
    ];

    /// Parses `all`, `smooth_l1`, `rpn`, `roi` or `angle:<variant>`.
    pub fn parse_selection(s: &str) -> Result<Vec<LossKind>> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossKind::SmoothL1 => f.write_str("smooth_l1"),
            LossKind::Rpn => f.write_str("rpn"),
            LossKind::Roi => f.write_str("roi"),
            LossKind::Angle(v) => write!(f, "angle:{v}"),
        }
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth_l1" | "smooth-l1" => Ok(LossKind::SmoothL1),
            "rpn" => Ok(LossKind::Rpn),
            "roi" => Ok(LossKind::Roi),
            _ => match s.strip_prefix("angle:") {
                Some(v) => Ok(LossKind::Angle(v.parse()?)),
                None => Err(Error::invalid(format!("unknown loss '{s}'"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub kind: LossKind,
    pub trials: usize,
    pub max_rel_error: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error < GRAD_TOLERANCE
    }
}

const STEP: f64 = 1e-5;

/// Runs `trials` seeded gradient checks of `kind` at random points sampled
/// away from kinks (`|x| = 1` for smooth-L1, right angles for the tangent
/// penalty) and singularities.
pub fn run_suite(kind: LossKind, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let err = match kind {
            LossKind::SmoothL1 => {
                let x = [offset_away_from_kink(&mut rng, 3.0)];
                grad_check(
                    |p| Ok((smooth_l1(p[0]).0, vec![smooth_l1(p[0]).1])),
                    &x,
                    STEP,
                )?
            }
            LossKind::Rpn => check_rpn(&mut rng)?,
            LossKind::Roi => check_roi(&mut rng)?,
            LossKind::Angle(v) => {
                let q = near_rectangular_quad(&mut rng);
                grad_check(
                    |p| {
                        let (l, g) = angle_loss(&Quad::from_flat(to8(p)), v)?;
                        Ok((l, g.to_vec()))
                    },
                    &q.to_flat(),
                    STEP,
                )?
            }
        };
        worst = worst.max(err);
    }
    Ok(SuiteReport {
        kind,
        trials,
        max_rel_error: worst,
    })
}

fn to8(p: &[f64]) -> [f64; 8] {
    let mut a = [0.0; 8];
    a.copy_from_slice(&p[..8]);
    a
}

/// Uniform in `[-range, range]`, rejecting `||x| - 1| < 0.05`.
fn offset_away_from_kink(rng: &mut ChaCha8Rng, range: f64) -> f64 {
    loop {
        let x: f64 = rng.random_range(-range..range);
        if (x.abs() - 1.0).abs() >= 0.05 {
            return x;
        }
    }
}

/// Rotated rectangle with jittered corners. Every one of the first three
/// angles deviates from 90° by at least 0.05° and stays 0.05° away from the
/// smooth-L1 transition at 1°.
pub(crate) fn near_rectangular_quad(rng: &mut ChaCha8Rng) -> Quad {
    loop {
        let w = rng.random_range(10.0..100.0);
        let h = rng.random_range(10.0..100.0);
        let r = RRect {
            cx: rng.random_range(-100.0..100.0),
            cy: rng.random_range(-100.0..100.0),
            w,
            h,
            angle: rng.random_range(0.0..180.0),
        };
        let jitter = 0.05 * w.min(h);
        let mut q = Quad::new(r.corners());
        for c in q.corners.iter_mut() {
            c.x += rng.random_range(-jitter..jitter);
            c.y += rng.random_range(-jitter..jitter);
        }
        if q.validate().is_err() {
            continue;
        }
        let Ok(angles) = interior_angles(&q) else {
            continue;
        };
        let ok = angles[..3].iter().all(|a| {
            let d = (a - 90.0).abs();
            d >= 0.05 && (d - 1.0).abs() >= 0.05
        });
        if ok {
            return q;
        }
    }
}

fn check_rpn(rng: &mut ChaCha8Rng) -> Result<f64> {
    const N: usize = 6;
    let labels: Vec<bool> = (0..N).map(|_| rng.random_bool(0.5)).collect();
    let targets: Vec<[f64; 8]> = (0..N)
        .map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
        .collect();
    let mut point = Vec::with_capacity(N * 9);
    for _ in 0..N {
        point.push(rng.random_range(0.05..0.95));
    }
    for t in &targets {
        for v in t {
            point.push(v + offset_away_from_kink(rng, 2.5));
        }
    }
    let n_reg = 10;
    grad_check(
        |p| {
            let samples = (0..N)
                .map(|i| RpnSample {
                    prob: p[i],
                    positive: labels[i],
                    pred: to8(&p[N + 8 * i..]),
                    target: targets[i],
                })
                .collect();
            let batch = RpnBatch {
                samples,
                n_obj: N,
                n_reg,
                lambda: RpnBatch::DEFAULT_LAMBDA,
            };
            let (l, g) = rpn_loss(&batch)?;
            let mut flat = g.d_prob.clone();
            flat.extend(g.d_pred.iter().flatten());
            Ok((l, flat))
        },
        &point,
        STEP,
    )
}

fn check_roi(rng: &mut ChaCha8Rng) -> Result<f64> {
    const K: usize = 3;
    let u = rng.random_range(0..=K);
    let variant = AngleVariant::ALL[rng.random_range(0..3)];
    let hbb_target: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let obb_target: [f64; 8] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let quad = near_rectangular_quad(rng);

    // Layout: [p_u, hbb_pred(4), obb_pred(8), quad(8)].
    let mut point = vec![rng.random_range(0.05..0.95)];
    point.extend(
        hbb_target
            .iter()
            .map(|t| t + offset_away_from_kink(rng, 2.5)),
    );
    point.extend(
        obb_target
            .iter()
            .map(|t| t + offset_away_from_kink(rng, 2.5)),
    );
    point.extend(quad.to_flat());

    grad_check(
        |p| {
            // The loss reads only p_u; the rest of the mass is spread evenly.
            let rest = (1.0 - p[0]) / K as f64;
            let mut probs = vec![rest; K + 1];
            probs[u] = p[0];
            let s = RoiSample {
                class_probs: probs,
                true_class: u,
                hbb_pred: [p[1], p[2], p[3], p[4]],
                hbb_target,
                obb_pred: to8(&p[5..]),
                obb_target,
                quad: Quad::from_flat(to8(&p[13..])),
                lambda: RoiSample::DEFAULT_LAMBDA,
                angle_variant: variant,
                mode: RoiMode::Full,
            };
            let (l, g) = roi_loss(&s)?;
            let mut flat = vec![g.d_probs[u]];
            flat.extend(g.d_hbb);
            flat.extend(g.d_obb);
            flat.extend(g.d_quad);
            Ok((l, flat))
        },
        &point,
        STEP,
    )
}
