//! Match left and right modes at the origin and check the assembled profile.
use kinwave::wave::wave_profile_at;
use kinwave::{monotonicity_report, write_profile_csv, KineticParams, VelocityMeasure};

fn main() -> kinwave::Result<()> {
    let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4])?;
    let p = KineticParams::new(0.48, 0.44)?;
    let profile = wave_profile_at(&m, &p, 0.3)?;
    println!("mass {:.12}, continuity residual {:.1e}", profile.mass(), profile.continuity_residual());
    println!("left weights {:?}\nright weights {:?}", profile.a(), profile.b());
    for z in [-5.0, -1.0, 0.0, 1.0, 5.0] {
        println!("z = {z:+}: rho = {:.6}, flux = {:.1e}", profile.eval_rho(z), profile.eval_flux(z));
    }
    let report = monotonicity_report(&profile, &profile.sample_grid(200));
    println!("partial densities monotone: {}", report.is_clean());
    let mut head = Vec::new();
    write_profile_csv(&profile, &profile.sample_grid(2), &mut head)?;
    print!("{}", String::from_utf8_lossy(&head));
    Ok(())
}
