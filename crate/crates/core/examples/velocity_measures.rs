//! Discretize continuous velocity densities into weighted Dirac masses.
use kinwave::{quadrature, Density, DensitySpec, QuadratureRule};

fn main() -> kinwave::Result<()> {
    let shapes = [
        ("uniform", Density::Uniform),
        ("disk projection", Density::DiskProjection),
        ("ball projection", Density::Ball3dProjection),
        ("exp bump", Density::ExpBump { amplitude: 5.0, rate: 4.0 }),
    ];
    for (name, d) in shapes {
        for rule in [QuadratureRule::Midpoint, QuadratureRule::GaussLegendre] {
            let m = quadrature(&DensitySpec::new(d.clone()), 8, rule)?;
            let second: f64 = m.average(&m.velocities().iter().map(|v| v * v).collect::<Vec<_>>());
            println!("{name:>16} {rule:?}: symmetric {}, <v^2> = {second:.6}", m.is_symmetric());
        }
    }
    Ok(())
}
