//! DOTA-style evaluation: file formats, VOC average precision, mAP, average
//! recall and synthetic fixtures.

mod ap;
mod evaluate;
mod format;
mod recall;
mod synth;

pub use ap::{voc_ap, ApMode};
pub use evaluate::{evaluate, ClassResult, EvalConfig, EvalResult, Task};
pub use format::{
    fmt_coord, fmt_score, parse_annotations, parse_detection_line, parse_detections,
    serialize_annotations, serialize_detection, serialize_detections, DetGeometry, DetRecord,
    GtRecord,
};
pub use recall::{average_recall, default_iou_grid, ArResult};
pub use synth::{synth_corpus, synth_scene, NoiseParams, SynthConfig, SynthScene};
