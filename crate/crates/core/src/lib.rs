//! Travelling waves and stationary clusters for kinetic run-and-tumble
//! chemotaxis with a finite set of velocities.
//!
//! The pipeline is: [`measure`] builds the velocity set, [`kinetics`] holds the
//! biases and the admissible speed window, [`modes`] computes Case normal modes
//! at a given speed, [`transfer`] matches them at the origin, [`fields`] turns
//! the resulting density into the attractant and nutrient fields, and [`wave`]
//! scans the matching function over the speed window.

pub mod cli;
pub mod config;
pub mod error;
pub mod fields;
pub mod kinetics;
pub mod linalg;
pub mod measure;
pub mod modes;
pub mod oracles;
pub mod roots;
pub mod transfer;
pub mod wave;

pub use error::{Error, Result};
pub use kinetics::{critical_speeds, mean_run_length, tumbling_rate, KineticParams, Rates, Sign, SpeedWindow};
pub use measure::{quadrature, Density, DensitySpec, QuadratureRule, VelocityMeasure};
pub use modes::{dispersion_roots, dispersion_value, mode_profile, CaseMode, ModeBasis, Side};
pub use transfer::{monotonicity_report, solve_weights, transfer_matrix, write_profile_csv, MonotonicityReport, WaveProfile};
pub use fields::{ansatz_check, green_exponents, nutrient_profile, signal_profile, upsilon, AnsatzReport, FieldParams, GreenExponents, NutrientSolution, SignalTable};
pub use wave::{find_waves, jump_at, stationary_cluster, upsilon_scan, JumpRecord, TravellingWave, UpsilonScan, WaveKind};
