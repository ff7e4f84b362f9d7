//! Score a noisy synthetic detection corpus for both tasks and print the
//! JSON report.
//!
//! ```bash
//! cargo run --example evaluate_synthetic
//! ```

use std::collections::BTreeMap;

use rboxkit::eval::{evaluate, synth_corpus, ApMode, DetRecord, EvalConfig, SynthConfig, Task};

fn main() -> Result<(), rboxkit::Error> {
    let scenes = synth_corpus(42, 8, &SynthConfig::default())?;
    let mut gts = BTreeMap::new();
    let mut dets: BTreeMap<String, Vec<DetRecord>> = BTreeMap::new();
    for s in scenes {
        for (class, d) in s.dets {
            dets.entry(class).or_default().push(d);
        }
        gts.insert(s.image_id, s.gts);
    }

    for task in [Task::Obb, Task::Hbb] {
        for ap_mode in [ApMode::ElevenPoint, ApMode::AllPoint] {
            let r = evaluate(
                &dets,
                &gts,
                &EvalConfig {
                    task,
                    ap_mode,
                    ..EvalConfig::default()
                },
            )?;
            println!(
                "{} {:<4} mAP {:.4}  AR {:.4}",
                task.name(),
                ap_mode.name(),
                r.map,
                r.ar
            );
        }
    }
    let report = evaluate(&dets, &gts, &EvalConfig::default())?;
    println!("{}", report.to_json());
    Ok(())
}
