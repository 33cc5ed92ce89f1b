//! Symmetric cluster without nutrient bias, and its velocity overshoot.
use kinwave::oracles::overshoot_detect;
use kinwave::wave::symmetry_residual;
use kinwave::{quadrature, stationary_cluster, DensitySpec, Density, FieldParams, KineticParams, QuadratureRule};

fn main() -> kinwave::Result<()> {
    let m = quadrature(&DensitySpec::new(Density::Uniform), 64, QuadratureRule::Midpoint)?;
    let p = KineticParams::new(0.48, 0.0)?;
    let cluster = stationary_cluster(&m, &p, &FieldParams::new(50.0, 0.5)?)?;
    let grid = cluster.profile.sample_grid(400);
    println!("Upsilon(0) = {:.1e}, symmetry residual {:.1e}", cluster.upsilon, symmetry_residual(&cluster.profile, &grid));
    let o = overshoot_detect(&cluster.profile, &grid);
    println!("velocities peaking right of the origin: {:?} (threshold {:?})", o.right, o.threshold);
    println!("rho_+ decreasing on z > 0: {}", cluster.monotonicity.is_clean());
    Ok(())
}
