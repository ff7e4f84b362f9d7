//! Annotation and detection text formats.
//!
//! Annotation file, one per image:
//!
//! ```text
//! imagesource:GoogleEarth
//! gsd:0.146
//! x1 y1 x2 y2 x3 y3 x4 y4 category difficult
//! ```
//!
//! Detection file, one per class, rows either
//! `image_id score x1 y1 x2 y2 x3 y3 x4 y4` (oriented) or
//! `image_id score xmin ymin xmax ymax` (horizontal).

use crate::error::{Error, Result};
use crate::geom::{Aabb, Quad};

#[derive(Debug, Clone, PartialEq)]
pub struct GtRecord {
    pub quad: Quad,
    pub category: String,
    pub difficult: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetGeometry {
    Obb(Quad),
    Hbb(Aabb),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetRecord {
    pub image_id: String,
    pub score: f64,
    pub geometry: DetGeometry,
}

impl DetRecord {
    pub fn is_obb(&self) -> bool {
        matches!(self.geometry, DetGeometry::Obb(_))
    }

    /// Corners of the detection; horizontal boxes become axis-aligned quads.
    pub fn quad(&self) -> Quad {
        match self.geometry {
            DetGeometry::Obb(q) => q,
            DetGeometry::Hbb(b) => b.to_quad(),
        }
    }

    pub fn aabb(&self) -> Aabb {
        match self.geometry {
            DetGeometry::Obb(q) => Aabb::enclosing(&q),
            DetGeometry::Hbb(b) => b,
        }
    }
}

/// Six significant digits, no exponent, trailing zeros trimmed.
pub fn fmt_coord(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // Rounding can carry into a new digit (9.999995 -> 10.00000).
    let rounded: f64 = s.parse().unwrap_or(x);
    if decimals > 0 && (rounded.abs().log10().floor() as i32) > mag {
        s = format!("{x:.prec$}", prec = decimals - 1);
    }
    trim_zeros(s)
}

/// Six decimals.
pub fn fmt_score(s: f64) -> String {
    format!("{s:.6}")
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return if s == "-0" { "0".into() } else { s };
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

fn is_metadata(line: &str) -> bool {
    line.split_whitespace()
        .next()
        .is_some_and(|tok| tok.contains(':'))
}

fn parse_f64(tok: &str, line: usize, what: &str) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("{what} '{tok}' is not a finite number"),
        }),
    }
}

fn parse_corners(tokens: &[&str], line: usize) -> Result<Quad> {
    let mut v = [0.0; 8];
    for (i, t) in tokens.iter().enumerate() {
        v[i] = parse_f64(t, line, "coordinate")?;
    }
    Ok(Quad::from_flat(v))
}

/// Parses an annotation file. Metadata lines (`key:value`) and blank lines
/// are skipped; line numbers in errors are 1-based.
pub fn parse_annotations(text: &str) -> Result<Vec<GtRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || is_metadata(line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 10 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected 10 fields (8 coordinates, category, difficult), got {}",
                    tokens.len()
                ),
            });
        }
        let quad = parse_corners(&tokens[..8], line_no)?;
        let difficult = match tokens[9] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("difficult flag must be 0 or 1, got '{other}'"),
                })
            }
        };
        out.push(GtRecord {
            quad,
            category: tokens[8].to_string(),
            difficult,
        });
    }
    Ok(out)
}

pub fn serialize_annotations(records: &[GtRecord]) -> String {
    let mut s = String::new();
    for r in records {
        for v in r.quad.to_flat() {
            s.push_str(&fmt_coord(v));
            s.push(' ');
        }
        s.push_str(&r.category);
        s.push_str(if r.difficult { " 1\n" } else { " 0\n" });
    }
    s
}

/// Parses one detection row; `line_no` is used in error messages.
pub fn parse_detection_line(line: &str, line_no: usize) -> Result<DetRecord> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 10 && tokens.len() != 6 {
        return Err(Error::Parse {
            line: line_no,
            message: format!(
                "expected 10 fields (oriented) or 6 fields (horizontal), got {}",
                tokens.len()
            ),
        });
    }
    let score = parse_f64(tokens[1], line_no, "score")?;
    if !(0.0..=1.0).contains(&score) {
        return Err(Error::Parse {
            line: line_no,
            message: format!("score {score} outside [0, 1]"),
        });
    }
    let geometry = if tokens.len() == 10 {
        DetGeometry::Obb(parse_corners(&tokens[2..], line_no)?)
    } else {
        let v: Vec<f64> = tokens[2..]
            .iter()
            .map(|t| parse_f64(t, line_no, "coordinate"))
            .collect::<Result<_>>()?;
        if v[2] < v[0] || v[3] < v[1] {
            return Err(Error::Parse {
                line: line_no,
                message: "xmax/ymax smaller than xmin/ymin".into(),
            });
        }
        DetGeometry::Hbb(Aabb::from_corners(v[0], v[1], v[2], v[3]))
    };
    Ok(DetRecord {
        image_id: tokens[0].to_string(),
        score,
        geometry,
    })
}

/// Parses a per-class detection file. Oriented and horizontal rows may not
/// be mixed.
pub fn parse_detections(text: &str) -> Result<Vec<DetRecord>> {
    let mut out: Vec<DetRecord> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let rec = parse_detection_line(line, i + 1)?;
        if let Some(first) = out.first() {
            if first.is_obb() != rec.is_obb() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "mixed oriented and horizontal rows".into(),
                });
            }
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn serialize_detection(d: &DetRecord) -> String {
    let coords: Vec<f64> = match d.geometry {
        DetGeometry::Obb(q) => q.to_flat().to_vec(),
        DetGeometry::Hbb(b) => vec![b.xmin, b.ymin, b.xmax(), b.ymax()],
    };
    let mut s = format!("{} {}", d.image_id, fmt_score(d.score));
    for v in coords {
        s.push(' ');
        s.push_str(&fmt_coord(v));
    }
    s
}

pub fn serialize_detections(dets: &[DetRecord]) -> String {
    let mut s = String::new();
    for d in dets {
        s.push_str(&serialize_detection(d));
        s.push('\n');
    }
    s
}
