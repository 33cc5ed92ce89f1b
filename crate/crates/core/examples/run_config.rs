//! Build a run from a TOML snippet layered over a preset.
use kinwave::config::{preset, RunConfig};
use kinwave::critical_speeds;

fn main() -> kinwave::Result<()> {
    let file = RunConfig::from_toml("chi_n = 0.3\ndc = 0.01\n[grid]\nl = 25.0\n")?;
    let cfg = preset("fig8")?.overlay(&file);
    cfg.validate()?;
    let w = critical_speeds(&cfg.measure()?, &cfg.kinetic()?)?;
    println!("chi_n = {:?}, window ({:.4}, {:.4}), relax half width {}", cfg.chi_n, w.c_lo, w.c_hi, cfg.relax_options().half_width);
    Ok(())
}
