//! Anchor shapes, placement and labeling.

mod generate;
mod kmeans;
mod label;
mod priors_io;

pub use generate::{
    assign_priors_to_levels, generate_anchors, level_stride, Anchor, DEFAULT_PRIOR_COUNT, LEVELS,
    ORIENTATIONS,
};
pub use kmeans::{iou_distance, kmeans_iou, shape_iou, shapes_from_quads, Clustering, ShapePrior};
pub use label::{label_anchors, AnchorLabel, LabelConfig};
pub use priors_io::{read_priors, write_priors, PRIORS_HEADER};
