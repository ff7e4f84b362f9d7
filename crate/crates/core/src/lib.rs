//! Algorithmic layer of a rotated-box object detector for aerial imagery.
//!
//! The crate is organized by pipeline stage:
//!
//! * [`geom`]: convex quadrilaterals, rotated IoU, interior angles, minimum-area
//!   rectangles and axis alignment.
//! * [`codec`]: corner-offset regression targets relative to rotated anchors.
//! * [`loss`]: smooth-L1, the proposal (RPN) and ROI multi-task losses and the
//!   rectangularity angle losses, all with analytic gradients, plus a
//!   finite-difference gradient checker.
//! * [`anchor`]: K-means++ shape clustering under IoU distance, multi-orientation
//!   anchor generation over pyramid levels and IoU-based anchor labeling.
//! * [`nms`]: rotated NMS and Soft-NMS.
//! * [`eval`]: DOTA-format annotation/detection I/O, VOC average precision,
//!   mAP, average recall and a synthetic scene generator.
//! * [`cli`]: the command-line front end behind the `rboxkit` binary.

pub mod anchor;
pub mod cli;
pub mod codec;
pub mod error;
pub mod eval;
pub mod geom;
pub mod loss;
pub mod nms;

pub use error::{Error, Result};
pub use geom::{Aabb, ConvexQuad, Point2, Quad, RRect};
