//! Average recall of a proposal set over IoU thresholds 0.5..0.95.
//!
//! ```bash
//! cargo run --example average_recall
//! ```

use std::collections::BTreeMap;

use rboxkit::eval::{average_recall, default_iou_grid};
use rboxkit::geom::rrect_to_quad;
use rboxkit::RRect;

fn main() -> Result<(), rboxkit::Error> {
    let gt = vec![
        rrect_to_quad(&RRect::new(50.0, 50.0, 40.0, 20.0, 30.0)?)?,
        rrect_to_quad(&RRect::new(150.0, 60.0, 30.0, 30.0, 0.0)?)?,
    ];
    let proposals = vec![
        rrect_to_quad(&RRect::new(51.0, 50.0, 40.0, 20.0, 32.0)?)?,
        rrect_to_quad(&RRect::new(150.0, 66.0, 30.0, 30.0, 0.0)?)?,
        rrect_to_quad(&RRect::new(300.0, 300.0, 30.0, 30.0, 0.0)?)?,
    ];
    let gts = BTreeMap::from([("scene".to_string(), gt)]);
    let props = BTreeMap::from([("scene".to_string(), proposals)]);

    let r = average_recall(&props, &gts, &default_iou_grid())?;
    for (t, recall) in &r.curve {
        println!("recall@{t:.2} = {recall:.2}");
    }
    println!("AR = {:.4}", r.ar);
    Ok(())
}
