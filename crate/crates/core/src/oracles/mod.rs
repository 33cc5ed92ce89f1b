//! Independent checks of the modal solver.

pub mod macroscopic;
pub mod overshoot;
pub mod relax;

pub use macroscopic::{macro_density, macro_speed, macro_upsilon, MacroParams};
pub use overshoot::{overshoot_detect, overshoot_detect_gridded, OvershootReport};
pub use relax::{relax_to_steady, RelaxOptions, RelaxResult};
