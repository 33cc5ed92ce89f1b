//! Attractant and nutrient fields generated by a matched profile.
use kinwave::fields::{centered_grid, nutrient_profile};
use kinwave::wave::wave_profile_at;
use kinwave::{ansatz_check, signal_profile, upsilon, KineticParams, VelocityMeasure};

fn main() -> kinwave::Result<()> {
    let m = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4])?;
    let p = KineticParams::new(0.48, 0.44)?;
    let profile = wave_profile_at(&m, &p, 0.35)?;
    println!("Upsilon(0.35) = {:.6e}", upsilon(&profile, 50.0, 0.5)?);
    let signal = signal_profile(&profile, 50.0, 0.5, &centered_grid(20.0, 20.0, 400))?;
    let nutrient = nutrient_profile(&profile, 1.0, 1.0, 1.0, None, 4096)?;
    println!("N(-L) = {:.4e}, N(L) = {:.4}", nutrient.n[0], nutrient.n[nutrient.n.len() - 1]);
    let report = ansatz_check(&signal, Some(&nutrient));
    println!("{report:#?}");
    Ok(())
}
