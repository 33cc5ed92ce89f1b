//! Scan the matching function, locate the waves and the jump at a velocity.
use kinwave::wave::default_dc;
use kinwave::{find_waves, upsilon_scan, FieldParams, KineticParams, VelocityMeasure};

fn main() -> kinwave::Result<()> {
    let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4])?;
    let p = KineticParams::new(0.48, 0.44)?;
    let f = FieldParams::new(50.0, 0.5)?;
    let scan = upsilon_scan(&m, &p, f.alpha, f.d_s, default_dc(&m))?;
    println!("{} samples on ({:.4}, {:.4})", scan.c_values.len(), scan.window.0, scan.window.1);
    for j in &scan.jumps {
        println!("jump at v = {}: {:+.4} (transferred {:.4} >= bound {:.4})", j.velocity, j.jump, j.transferred_below, j.transfer_bound);
    }
    for w in find_waves(&scan, &m, &p, &f)? {
        println!("wave at c = {:.6}, ansatz valid {}", w.c, w.ansatz_valid);
    }
    Ok(())
}
