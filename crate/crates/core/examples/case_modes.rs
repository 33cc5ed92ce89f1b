//! Case normal modes at a fixed speed and their interlacing with the velocities.
use kinwave::{dispersion_roots, KineticParams, VelocityMeasure};

fn main() -> kinwave::Result<()> {
    let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4])?;
    let p = KineticParams::new(0.48, 0.44)?;
    for c in [0.2, 0.6] {
        let basis = dispersion_roots(&m, &p, c)?;
        println!("c = {c}: {} left, {} right", basis.left.len(), basis.right.len());
        for mode in basis.modes() {
            println!(
                "  {:?} anchored at v = {:+.2}: lambda = {:.6}, zero flux {:.1e}",
                mode.side,
                m.velocities()[mode.anchor],
                mode.lambda,
                mode.flux(&m, c)
            );
        }
    }
    Ok(())
}
