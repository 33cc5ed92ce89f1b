//! Macroscopic wave speed and its matching function.
use kinwave::oracles::{macro_density, macro_speed, macro_upsilon, MacroParams};

fn main() -> kinwave::Result<()> {
    let m = MacroParams::new(0.48, 0.44, 50.0, 0.5, 1.0)?;
    let c = macro_speed(&m)?;
    let (lm, lp) = m.exponents(c);
    println!("c = {c:.12}, lambda- = {lm:.6}, lambda+ = {lp:.6}");
    for x in [0.1, 0.3, c, 0.43] {
        println!("Upsilon({x:.4}) = {:+.6e}", macro_upsilon(&m, x)?);
    }
    println!("rho(1 / lambda+) = {:.6}", macro_density(&m, c, 1.0 / lp)?);
    Ok(())
}
