//! Time marching to the steady state and comparison with the modal profile.
use kinwave::oracles::relax::relax_grid;
use kinwave::oracles::{relax_to_steady, RelaxOptions};
use kinwave::wave::wave_profile_at;
use kinwave::{KineticParams, VelocityMeasure};

fn main() -> kinwave::Result<()> {
    let m = VelocityMeasure::new(&[-1.0, 1.0], &[1.0, 1.0])?;
    let p = KineticParams::new(0.48, 0.44)?;
    let c = 0.4;
    let opts = RelaxOptions::default();
    let (z, _) = relax_grid(opts.half_width, opts.nz);
    let init: Vec<Vec<f64>> = (0..2).map(|i| z.iter().map(|x| (-(x - i as f64).powi(2) / 10.0).exp()).collect()).collect();
    let r = relax_to_steady(&m, &p, c, init, &opts)?;
    let reference = wave_profile_at(&m, &p, c)?;
    let flux = r.face_flux(&m).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    println!("converged {} at t = {:.1}", r.converged, r.t_final);
    println!("L1 distance {:.2e}, max face flux {:.1e}", r.l1_distance(&m, &reference), flux);
    Ok(())
}
