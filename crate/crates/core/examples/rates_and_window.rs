//! Tumbling rates and the admissible speed window.
use kinwave::{critical_speeds, mean_run_length, KineticParams, Sign, VelocityMeasure};

fn main() -> kinwave::Result<()> {
    let params = KineticParams::new(0.48, 0.44)?;
    let r = params.rates();
    for z in [Sign::Minus, Sign::Plus] {
        for v in [Sign::Minus, Sign::Plus] {
            println!("T(z {z:?}, v - c {v:?}) = {:.2}", r.get(z, v));
        }
    }
    let two = VelocityMeasure::new(&[-1.0, 1.0], &[1.0, 1.0])?;
    let w = critical_speeds(&two, &params)?;
    println!("two velocities: window ({:.6}, {:.6}), expected ({:.6}, {:.6})", w.c_lo, w.c_hi, -params.chi_plus(), params.chi_minus());
    let four = VelocityMeasure::new(&[-1.0, -0.5, 0.5, 1.0], &[1.0; 4])?;
    let w = critical_speeds(&four, &params)?;
    println!("four velocities: window ({:.6}, {:.6}), R(0) = {:.4}", w.c_lo, w.c_hi, mean_run_length(&four, &params, 0.0));
    Ok(())
}
