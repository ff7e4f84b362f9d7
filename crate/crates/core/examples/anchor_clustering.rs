//! Cluster box shapes from a synthetic corpus into anchor priors under the
//! IoU distance, then spread them over pyramid levels.
//!
//! ```bash
//! cargo run --example anchor_clustering
//! ```

use rboxkit::anchor::{
    assign_priors_to_levels, kmeans_iou, shapes_from_quads, write_priors, DEFAULT_PRIOR_COUNT,
};
use rboxkit::eval::{synth_corpus, SynthConfig};
use rboxkit::Quad;

fn main() -> Result<(), rboxkit::Error> {
    let cfg = SynthConfig {
        image_size: (2048, 2048),
        side_range: (8.0, 300.0),
        n_objects: 40,
        ..SynthConfig::default()
    };
    let scenes = synth_corpus(0, 20, &cfg)?;
    let quads: Vec<Quad> = scenes
        .iter()
        .flat_map(|s| s.gts.iter().map(|g| g.quad))
        .collect();
    let shapes = shapes_from_quads(&quads)?;

    let c = kmeans_iou(&shapes, DEFAULT_PRIOR_COUNT, 0, 100)?;
    println!("{} shapes, k = {DEFAULT_PRIOR_COUNT}", shapes.len());
    println!("cost per iteration: {:.4?}", c.cost_history);
    print!("{}", write_priors(&c.priors));

    for (level, priors) in assign_priors_to_levels(&c.priors, &[2, 3, 4, 5, 6])? {
        let sizes: Vec<String> = priors
            .iter()
            .map(|p| format!("{:.0}x{:.0}", p.w, p.h))
            .collect();
        println!("P{level}: {}", sizes.join(" "));
    }
    Ok(())
}
