//! The three rectangularity penalties on a rectangle and on a skewed quad.
//!
//! ```bash
//! cargo run --example angle_losses
//! ```

use rboxkit::geom::interior_angles;
use rboxkit::loss::{angle_loss, AngleVariant};
use rboxkit::{Quad, RRect};

fn main() -> Result<(), rboxkit::Error> {
    let rect = Quad::new(RRect::new(0.0, 0.0, 30.0, 10.0, 20.0)?.corners());
    let t = 3.0 / 80f64.to_radians().tan();
    let trapezoid = Quad::from_flat([0.0, 0.0, 3.0, t, 3.0, 1.0, 0.0, 1.0]);

    for (name, q) in [("rectangle", rect), ("trapezoid", trapezoid)] {
        println!("{name}: angles {:.3?}", interior_angles(&q)?);
        for v in AngleVariant::ALL {
            let (loss, grad) = angle_loss(&q, v)?;
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            println!("  {v:<10} loss {loss:>12.6}  |grad| {norm:.6}");
        }
    }
    Ok(())
}
