//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 failed check.
//! Reports go to stdout and diagnostics to stderr. Output files are written
//! to a temporary file in the target directory and renamed into place.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::anchor::{kmeans_iou, shapes_from_quads, write_priors, DEFAULT_PRIOR_COUNT};
use crate::error::Error;
use crate::eval::{
    evaluate, parse_annotations, parse_detection_line, parse_detections, serialize_annotations,
    serialize_detection, synth_corpus, ApMode, DetGeometry, DetRecord, EvalConfig, GtRecord,
    NoiseParams, SynthConfig, Task,
};
use crate::geom::{min_area_rect, rotated_iou, rrect_to_quad, ConvexQuad, Quad};
use crate::loss::{run_suite, LossKind, GRAD_TOLERANCE};
use crate::nms::{
    r_nms, soft_nms, HbbDetection, ScoredDetection, SoftNmsConfig, DEFAULT_RNMS_IOU,
    DEFAULT_SCORE_FLOOR, DEFAULT_SOFT_NMS_IOU,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rboxkit", version, about = "Rotated-box detection utilities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotated IoU of quad pairs, one pair of 8 coordinates each per line.
    Iou { input: PathBuf },
    /// Rotated NMS (default) or Soft-NMS over a per-class detection file.
    Nms(NmsArgs),
    /// Cluster ground-truth box shapes into anchor priors.
    Cluster(ClusterArgs),
    /// Evaluate detections against ground truth (AP, mAP, AR).
    Evaluate(EvaluateArgs),
    /// Check analytic loss gradients against finite differences.
    Gradcheck(GradcheckArgs),
    /// Write a synthetic annotation and detection corpus.
    Synth(SynthArgs),
}

#[derive(Debug, clap::Args)]
pub struct NmsArgs {
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Linear Soft-NMS over horizontal rows instead of rotated NMS.
    #[arg(long)]
    pub soft: bool,
    /// Defaults to 0.1 for rotated NMS and 0.3 for Soft-NMS.
    #[arg(long)]
    pub iou_thresh: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SCORE_FLOOR)]
    pub score_floor: f64,
}

#[derive(Debug, clap::Args)]
pub struct ClusterArgs {
    /// Directory of annotation files.
    pub annotations: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PRIOR_COUNT)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TaskArg {
    Obb,
    Hbb,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ApModeArg {
    #[value(name = "11pt")]
    ElevenPoint,
    All,
}

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub det_dir: PathBuf,
    #[arg(long)]
    pub gt_dir: PathBuf,
    #[arg(long, value_enum, default_value = "obb")]
    pub task: TaskArg,
    #[arg(long, default_value_t = 0.5)]
    pub iou: f64,
    #[arg(long, value_enum, default_value = "11pt")]
    pub ap_mode: ApModeArg,
    /// Write `category recall precision` lines here.
    #[arg(long)]
    pub pr_out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GradcheckArgs {
    /// all, smooth_l1, rpn, roi or angle:<tangent_l1|smooth_l1|l2>
    #[arg(long, default_value = "all")]
    pub loss: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub images: usize,
    #[arg(long, default_value_t = 20)]
    pub objects: usize,
    #[arg(long, default_value_t = 1024)]
    pub image_size: u32,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "plane,ship,small-vehicle"
    )]
    pub classes: Vec<String>,
    /// Corner jitter standard deviation, pixels.
    #[arg(long, default_value_t = 1.0)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0.1)]
    pub drop: f64,
    #[arg(long, default_value_t = 0.2)]
    pub fp_rate: f64,
    /// Write horizontal detections (xmin ymin xmax ymax).
    #[arg(long)]
    pub hbb: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::Iou { input } => cmd_iou(&input, out),
        Command::Nms(a) => cmd_nms(&a, out),
        Command::Cluster(a) => cmd_cluster(&a, out),
        Command::Evaluate(a) => cmd_evaluate(&a, out),
        Command::Gradcheck(a) => cmd_gradcheck(&a, out, err),
        Command::Synth(a) => cmd_synth(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DATA
        }
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "check failed: {m}");
            EXIT_CHECK_FAILED
        }
    }
}

fn require_file(p: &Path) -> CliResult {
    if !p.is_file() {
        return Err(Failure::Usage(format!(
            "{} is not a readable file",
            p.display()
        )));
    }
    Ok(())
}

fn require_dir(p: &Path) -> CliResult {
    if !p.is_dir() {
        return Err(Failure::Usage(format!(
            "{} is not a directory",
            p.display()
        )));
    }
    Ok(())
}

fn unit_interval(name: &str, v: f64) -> CliResult {
    if !(0.0..=1.0).contains(&v) {
        return Err(Failure::Usage(format!(
            "--{name} must be in [0, 1], got {v}"
        )));
    }
    Ok(())
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `*.txt` files of a directory, sorted by name.
fn txt_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn with_path(p: &Path, e: Error) -> Failure {
    Failure::Data(format!("{}: {e}", p.display()))
}

fn cmd_iou(input: &Path, out: &mut dyn Write) -> CliResult {
    require_file(input)?;
    let reader = BufReader::new(fs::File::open(input)?);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |m: String| Failure::Data(format!("{}: line {}: {m}", input.display(), i + 1));
        let v: Vec<f64> = t
            .split_whitespace()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| bad(format!("invalid number '{s}'")))
            })
            .collect::<CliResult<_>>()?;
        if v.len() != 16 {
            return Err(bad(format!(
                "expected 16 numbers (two quads), got {}",
                v.len()
            )));
        }
        let quad = |s: &[f64]| -> CliResult<ConvexQuad> {
            let mut a = [0.0; 8];
            a.copy_from_slice(s);
            Quad::from_flat(a)
                .validate()
                .map_err(|e| bad(e.to_string()))
        };
        let (a, b) = (quad(&v[..8])?, quad(&v[8..])?);
        writeln!(out, "{:.6}", rotated_iou(&a, &b))?;
    }
    Ok(())
}

/// Convex form of a detection quad; non-convex quads are replaced by their
/// minimum-area rectangle.
fn convex_or_refined(q: &Quad) -> Result<ConvexQuad, Error> {
    match q.validate() {
        Ok(c) => Ok(c),
        Err(Error::NonConvex { .. }) | Err(Error::DegenerateQuad(_)) => {
            rrect_to_quad(&min_area_rect(q)?)
        }
        Err(e) => Err(e),
    }
}

fn cmd_nms(a: &NmsArgs, out: &mut dyn Write) -> CliResult {
    require_file(&a.input)?;
    let thresh = a.iou_thresh.unwrap_or(if a.soft {
        DEFAULT_SOFT_NMS_IOU
    } else {
        DEFAULT_RNMS_IOU
    });
    unit_interval("iou-thresh", thresh)?;

    let reader = BufReader::new(fs::File::open(&a.input)?);
    let mut rows: Vec<DetRecord> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = parse_detection_line(&line, i + 1).map_err(|e| with_path(&a.input, e))?;
        if let Some(first) = rows.first() {
            if first.is_obb() != rec.is_obb() {
                return Err(Failure::Data(format!(
                    "{}: line {}: mixed oriented and horizontal rows",
                    a.input.display(),
                    i + 1
                )));
            }
        }
        rows.push(rec);
    }
    if a.soft && rows.first().is_some_and(|r| r.is_obb()) {
        return Err(Failure::Data(
            "Soft-NMS needs horizontal rows (image score xmin ymin xmax ymax)".into(),
        ));
    }

    let mut by_image: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        by_image.entry(r.image_id.as_str()).or_default().push(i);
    }
    // Surviving rows with their (possibly rescored) score.
    let mut survivors: Vec<(usize, f64)> = Vec::new();
    for idx in by_image.values() {
        if a.soft {
            let dets: Vec<HbbDetection> = idx
                .iter()
                .map(|&i| HbbDetection {
                    aabb: rows[i].aabb(),
                    class_id: 0,
                    score: rows[i].score,
                })
                .collect();
            let cfg = SoftNmsConfig {
                iou_thresh: thresh,
                score_floor: a.score_floor,
                ..SoftNmsConfig::default()
            };
            survivors.extend(soft_nms(&dets, &cfg).into_iter().map(|(k, s)| (idx[k], s)));
        } else {
            let dets: Vec<ScoredDetection> = idx
                .iter()
                .map(|&i| {
                    Ok(ScoredDetection {
                        quad: convex_or_refined(&rows[i].quad())
                            .map_err(|e| with_path(&a.input, e))?,
                        class_id: 0,
                        score: rows[i].score,
                    })
                })
                .collect::<CliResult<_>>()?;
            survivors.extend(
                r_nms(&dets, thresh)
                    .into_iter()
                    .map(|k| (idx[k], rows[idx[k]].score)),
            );
        }
    }
    survivors.sort_by_key(|(i, _)| *i);
    let mut text = String::new();
    for (i, score) in survivors {
        let mut r = rows[i].clone();
        r.score = score;
        text.push_str(&serialize_detection(&r));
        text.push('\n');
    }
    match &a.output {
        Some(p) => write_atomic(p, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_annotation_dir(dir: &Path) -> CliResult<BTreeMap<String, Vec<GtRecord>>> {
    let mut gts = BTreeMap::new();
    for f in txt_files(dir)? {
        let recs = parse_annotations(&fs::read_to_string(&f)?).map_err(|e| with_path(&f, e))?;
        gts.insert(stem(&f), recs);
    }
    Ok(gts)
}

fn cmd_cluster(a: &ClusterArgs, out: &mut dyn Write) -> CliResult {
    require_dir(&a.annotations)?;
    if a.k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let gts = read_annotation_dir(&a.annotations)?;
    let quads: Vec<Quad> = gts.values().flatten().map(|g| g.quad).collect();
    if quads.len() < a.k {
        return Err(Failure::Data(format!(
            "{} ground-truth boxes found, need at least k = {}",
            quads.len(),
            a.k
        )));
    }
    let shapes = shapes_from_quads(&quads)?;
    let c = kmeans_iou(&shapes, a.k, a.seed, a.max_iter)?;
    write_atomic(&a.output, &write_priors(&c.priors))?;
    writeln!(out, "seed: {}", a.seed)?;
    writeln!(out, "k: {}", a.k)?;
    writeln!(out, "shapes: {}", shapes.len())?;
    writeln!(out, "iterations: {}", c.cost_history.len())?;
    writeln!(out, "cost: {:.6}", c.cost)?;
    writeln!(out, "mean_iou: {:.6}", 1.0 - c.cost)?;
    Ok(())
}

/// Category of a per-class detection file: the file stem without a
/// `Task1_` / `Task2_` prefix.
fn det_category(p: &Path) -> String {
    let s = stem(p);
    for prefix in ["Task1_", "Task2_"] {
        if let Some(rest) = s.strip_prefix(prefix) {
            return rest.to_string();
        }
    }
    s
}

fn cmd_evaluate(a: &EvaluateArgs, out: &mut dyn Write) -> CliResult {
    require_dir(&a.det_dir)?;
    require_dir(&a.gt_dir)?;
    if !(a.iou > 0.0 && a.iou <= 1.0) {
        return Err(Failure::Usage(format!(
            "--iou must be in (0, 1], got {}",
            a.iou
        )));
    }
    let gts = read_annotation_dir(&a.gt_dir)?;
    let mut dets = BTreeMap::new();
    for f in txt_files(&a.det_dir)? {
        let d = parse_detections(&fs::read_to_string(&f)?).map_err(|e| with_path(&f, e))?;
        dets.entry(det_category(&f))
            .or_insert_with(Vec::new)
            .extend(d);
    }
    let cfg = EvalConfig {
        task: match a.task {
            TaskArg::Obb => Task::Obb,
            TaskArg::Hbb => Task::Hbb,
        },
        iou_thresh: a.iou,
        ap_mode: match a.ap_mode {
            ApModeArg::ElevenPoint => ApMode::ElevenPoint,
            ApModeArg::All => ApMode::AllPoint,
        },
        ..EvalConfig::default()
    };
    let result = evaluate(&dets, &gts, &cfg)?;
    if let Some(p) = &a.pr_out {
        write_atomic(p, &result.pr_curves_text())?;
    }
    writeln!(out, "{}", result.to_json())?;
    Ok(())
}

fn cmd_gradcheck(a: &GradcheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let kinds = LossKind::parse_selection(&a.loss).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "seed: {}", a.seed)?;
    writeln!(out, "tolerance: {GRAD_TOLERANCE:e}")?;
    if a.trials == 0 {
        writeln!(err, "warning: --trials 0 checks nothing")?;
    }
    let mut failed = Vec::new();
    for k in kinds {
        let r = run_suite(k, a.trials, a.seed)?;
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{k} trials={} max_rel_error={:.3e} {verdict}",
            r.trials, r.max_rel_error
        )?;
        if !r.passed() {
            failed.push(k.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "gradient mismatch in {}",
            failed.join(", ")
        )))
    }
}

fn cmd_synth(a: &SynthArgs, out: &mut dyn Write) -> CliResult {
    unit_interval("drop", a.drop)?;
    unit_interval("fp-rate", a.fp_rate)?;
    if !(a.jitter >= 0.0 && a.jitter.is_finite()) {
        return Err(Failure::Usage("--jitter must be non-negative".into()));
    }
    let classes: Vec<String> = a
        .classes
        .iter()
        .filter(|c| !c.is_empty())
        .cloned()
        .collect();
    if classes.is_empty() {
        return Err(Failure::Usage(
            "--classes must name at least one class".into(),
        ));
    }
    let cfg = SynthConfig {
        n_objects: a.objects,
        image_size: (a.image_size, a.image_size),
        classes: classes.clone(),
        noise: NoiseParams {
            corner_jitter: a.jitter,
            drop_rate: a.drop,
            fp_rate: a.fp_rate,
            ..NoiseParams::none()
        },
        ..SynthConfig::default()
    };
    let scenes = synth_corpus(a.seed, a.images, &cfg)?;

    let label_dir = a.out_dir.join("labelTxt");
    let det_dir = a.out_dir.join("det");
    fs::create_dir_all(&label_dir)?;
    fs::create_dir_all(&det_dir)?;
    let mut per_class: BTreeMap<&str, String> = classes
        .iter()
        .map(|c| (c.as_str(), String::new()))
        .collect();
    let mut n_gt = 0;
    let mut n_det = 0;
    for s in &scenes {
        n_gt += s.gts.len();
        let text = format!(
            "imagesource:synthetic\ngsd:null\n{}",
            serialize_annotations(&s.gts)
        );
        write_atomic(&label_dir.join(format!("{}.txt", s.image_id)), &text)?;
        for (c, d) in &s.dets {
            let mut d = d.clone();
            if a.hbb {
                d.geometry = DetGeometry::Hbb(d.aabb());
            }
            let buf = per_class.get_mut(c.as_str()).expect("class from config");
            buf.push_str(&serialize_detection(&d));
            buf.push('\n');
            n_det += 1;
        }
    }
    let prefix = if a.hbb { "Task2_" } else { "Task1_" };
    for (c, text) in &per_class {
        write_atomic(&det_dir.join(format!("{prefix}{c}.txt")), text)?;
    }
    writeln!(out, "seed: {}", a.seed)?;
    writeln!(out, "images: {}", scenes.len())?;
    writeln!(out, "ground_truths: {n_gt}")?;
    writeln!(out, "detections: {n_det}")?;
    writeln!(out, "annotations: {}", label_dir.display())?;
    writeln!(out, "detection_files: {}", det_dir.display())?;
    Ok(())
}
