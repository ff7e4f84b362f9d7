//! Seeded synthetic scenes: non-overlapping rotated rectangles as ground
//! truth and detections derived from them by jitter, drop-out and spurious
//! boxes. Coordinates are rounded to 0.01 px and scores to 1e-6 so scenes
//! survive a text round trip unchanged.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::format::{DetGeometry, DetRecord, GtRecord};
use crate::error::{Error, Result};
use crate::geom::{Point2, Quad, RRect};

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseParams {
    /// Standard deviation of per-coordinate corner jitter, pixels.
    pub corner_jitter: f64,
    /// Probability that a ground truth gets no detection.
    pub drop_rate: f64,
    /// Probability, per ground truth, of adding one spurious detection.
    pub fp_rate: f64,
    /// Score range of detections derived from ground truths.
    pub tp_score: (f64, f64),
    /// Score range of spurious detections.
    pub fp_score: (f64, f64),
}

impl NoiseParams {
    /// Detections identical to the ground truth.
    pub fn none() -> Self {
        Self {
            corner_jitter: 0.0,
            drop_rate: 0.0,
            fp_rate: 0.0,
            tp_score: (0.5, 1.0),
            fp_score: (0.0, 0.6),
        }
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            corner_jitter: 1.0,
            drop_rate: 0.1,
            fp_rate: 0.2,
            ..Self::none()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_objects: usize,
    pub image_size: (u32, u32),
    pub classes: Vec<String>,
    /// Side length range of generated rectangles, pixels.
    pub side_range: (f64, f64),
    pub noise: NoiseParams,
    /// Placement attempts per object before giving up.
    pub max_attempts: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_objects: 20,
            image_size: (1024, 1024),
            classes: vec!["plane".into(), "ship".into(), "small-vehicle".into()],
            side_range: (12.0, 80.0),
            noise: NoiseParams::default(),
            max_attempts: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub image_id: String,
    pub gts: Vec<GtRecord>,
    /// `(category, detection)` pairs.
    pub dets: Vec<(String, DetRecord)>,
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

struct Placer<'a> {
    cfg: &'a SynthConfig,
    circles: Vec<(Point2, f64)>,
}

impl Placer<'_> {
    /// A rectangle whose bounding circle lies in the image and clears all
    /// previously placed circles.
    fn place(&mut self, rng: &mut ChaCha8Rng) -> Option<RRect> {
        let (lo, hi) = self.cfg.side_range;
        let (iw, ih) = (
            f64::from(self.cfg.image_size.0),
            f64::from(self.cfg.image_size.1),
        );
        for _ in 0..self.cfg.max_attempts {
            let w = rng.random_range(lo..=hi);
            let h = rng.random_range(lo..=hi);
            let angle = rng.random_range(0.0..180.0);
            let r = 0.5 * w.hypot(h) + 0.02;
            if 2.0 * r >= iw || 2.0 * r >= ih {
                continue;
            }
            let c = Point2::new(rng.random_range(r..iw - r), rng.random_range(r..ih - r));
            if self.circles.iter().all(|(o, ro)| o.dist(c) >= r + ro) {
                self.circles.push((c, r));
                return Some(RRect {
                    cx: c.x,
                    cy: c.y,
                    w,
                    h,
                    angle,
                });
            }
        }
        None
    }
}

fn rounded_quad(r: &RRect) -> Quad {
    let mut q = Quad::new(r.corners());
    for c in q.corners.iter_mut() {
        c.x = round2(c.x);
        c.y = round2(c.y);
    }
    q
}

/// One synthetic image.
pub fn synth_scene(seed: u64, image_id: &str, cfg: &SynthConfig) -> Result<SynthScene> {
    if cfg.classes.is_empty() {
        return Err(Error::invalid("no classes"));
    }
    let n = &cfg.noise;
    for (name, p) in [("drop_rate", n.drop_rate), ("fp_rate", n.fp_rate)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("{name} must be in [0, 1]")));
        }
    }
    if !(n.corner_jitter >= 0.0 && n.corner_jitter.is_finite()) {
        return Err(Error::invalid(
            "corner_jitter must be finite and non-negative",
        ));
    }
    let (lo, hi) = cfg.side_range;
    if !(lo > 0.0 && lo <= hi) {
        return Err(Error::invalid("side range must satisfy 0 < min <= max"));
    }
    let jitter = Normal::new(0.0, n.corner_jitter).map_err(|e| Error::invalid(e.to_string()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placer = Placer {
        cfg,
        circles: Vec::new(),
    };
    let mut gts = Vec::with_capacity(cfg.n_objects);
    for placed in 0..cfg.n_objects {
        let rect = placer.place(&mut rng).ok_or(Error::PackingFailed {
            placed,
            requested: cfg.n_objects,
        })?;
        let category = cfg.classes[rng.random_range(0..cfg.classes.len())].clone();
        gts.push(GtRecord {
            quad: rounded_quad(&rect),
            category,
            difficult: false,
        });
    }

    let mut dets = Vec::new();
    for g in &gts {
        let dropped = rng.random_bool(n.drop_rate);
        if !dropped {
            let mut q = g.quad;
            if n.corner_jitter > 0.0 {
                for c in q.corners.iter_mut() {
                    c.x = round2(c.x + jitter.sample(&mut rng));
                    c.y = round2(c.y + jitter.sample(&mut rng));
                }
            }
            let score = round6(rng.random_range(n.tp_score.0..=n.tp_score.1));
            dets.push((
                g.category.clone(),
                DetRecord {
                    image_id: image_id.to_string(),
                    score,
                    geometry: DetGeometry::Obb(q),
                },
            ));
        }
        if rng.random_bool(n.fp_rate) {
            // Spurious boxes clear every ground truth; skip if none fits.
            if let Some(rect) = placer.place(&mut rng) {
                let category = cfg.classes[rng.random_range(0..cfg.classes.len())].clone();
                let score = round6(rng.random_range(n.fp_score.0..=n.fp_score.1));
                dets.push((
                    category,
                    DetRecord {
                        image_id: image_id.to_string(),
                        score,
                        geometry: DetGeometry::Obb(rounded_quad(&rect)),
                    },
                ));
            }
        }
    }
    Ok(SynthScene {
        image_id: image_id.to_string(),
        gts,
        dets,
    })
}

/// `n_images` scenes named `img_0000`, `img_0001`, ..., each seeded from a
/// stream derived from `seed`.
pub fn synth_corpus(seed: u64, n_images: usize, cfg: &SynthConfig) -> Result<Vec<SynthScene>> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..n_images)
        .map(|i| {
            let s: u64 = master.random();
            synth_scene(s, &format!("img_{i:04}"), cfg)
        })
        .collect()
}
