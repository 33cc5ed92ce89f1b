//! Command-line front end for the `kinwave` binary.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{four_velocities, preset, RunConfig};
use crate::error::Error;
use crate::fields::{centered_grid, FieldParams};
use crate::kinetics::{critical_speeds, KineticParams, Sign};
use crate::measure::VelocityMeasure;
use crate::modes::dispersion_roots;
use crate::oracles::{
    macro_speed, macro_upsilon, overshoot_detect, relax_to_steady, MacroParams, OvershootReport,
};
use crate::oracles::relax::{relax_grid, RelaxResult};
use crate::transfer::write_profile_csv;
use crate::wave::{
    find_waves, jump_at, jump_crossings, stationary_cluster, symmetry_residual, upsilon_scan, wave_profile_at,
    waves_json, write_scan_csv, default_dc, JumpCrossing, JumpRecord, TravellingWave, UpsilonScan,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_WAVE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Points per side in written profile tables.
const PROFILE_POINTS: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "kinwave", version, about = "Kinetic chemotaxis travelling-wave solver")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML or JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named parameter set: fig3, fig5, fig7, fig8, fig9, fig10.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Wave speed.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Scan step.
    #[arg(long, global = true)]
    pub dc: Option<f64>,
    /// Worker threads for the scan.
    #[arg(long, global = true, env = "KINWAVE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// The four tumbling rates.
    Rates,
    /// The admissible speed window.
    CriticalSpeeds,
    /// Case modes at `--c`.
    Modes,
    /// Matching function over the speed window.
    Scan,
    /// Travelling waves.
    Wave,
    /// Stationary cluster at c = 0.
    Cluster,
    /// Macroscopic speed and matching function.
    Macro,
    /// Time-marching check of the profile at `--c`.
    Relax,
    /// Datasets for a preset.
    Reproduce,
}

/// A failed run, carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    NoWave(String),
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::NoWave(_) => EXIT_NO_WAVE,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::NoWave(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidInput(_)
            | Error::InvalidMeasure(_)
            | Error::InvalidParams(_)
            | Error::Collision { .. }
            | Error::OutsideWindow { .. }
            | Error::Cfl { .. }
            | Error::Io(_) => Failure::Config(msg),
            Error::NotBracketed(_)
            | Error::Pole(_)
            | Error::BadProfile(_)
            | Error::NullSpace(_)
            | Error::Ansatz(_)
            | Error::Numerical(_) => Failure::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::from(Error::from(e))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parse arguments, run, report on stderr; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("kinwave: {}", f.message());
            f.exit_code()
        }
    }
}

/// Run a parsed command, writing the report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.common.threads {
            if n == 0 {
                return Err(Failure::Config("--threads must be at least 1".into()));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| Failure::Config(format!("thread pool: {e}")))?
    };
    let cfg = resolve(&cli.common)?;
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &cfg, &mut buf));
    out.write_all(&buf)?;
    out.flush()?;
    result
}

/// Preset, then file, then command-line flags.
pub fn resolve(common: &Common) -> std::result::Result<RunConfig, Failure> {
    let file = common.config.as_deref().map(RunConfig::load).transpose()?;
    let name = common.preset.clone().or_else(|| file.as_ref().and_then(|f| f.preset.clone()));
    let mut cfg = match &name {
        Some(n) => preset(n)?,
        None => RunConfig::default(),
    };
    if let Some(f) = &file {
        cfg = cfg.overlay(f);
    }
    if name.is_none() && file.is_none() {
        return Err(Failure::Config("no parameters: give --config or --preset".into()));
    }
    let flags = RunConfig { preset: name, c: common.c, dc: common.dc, out: common.out.clone(), ..RunConfig::default() };
    let cfg = cfg.overlay(&flags);
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(command: Command, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Rates => cmd_rates(cfg, out),
        Command::CriticalSpeeds => cmd_critical(cfg, out),
        Command::Modes => cmd_modes(cfg, out),
        Command::Scan => cmd_scan(cfg, out),
        Command::Wave => cmd_wave(cfg, out),
        Command::Cluster => cmd_cluster(cfg, out),
        Command::Macro => cmd_macro(cfg, out),
        Command::Relax => cmd_relax(cfg, out),
        Command::Reproduce => cmd_reproduce(cfg, out),
    }
}

struct Setup {
    measure: VelocityMeasure,
    params: KineticParams,
    fields: FieldParams,
}

fn setup(cfg: &RunConfig) -> std::result::Result<Setup, Failure> {
    Ok(Setup { measure: cfg.measure()?, params: cfg.kinetic()?, fields: cfg.fields()? })
}

fn out_dir(cfg: &RunConfig) -> std::result::Result<Option<PathBuf>, Failure> {
    match &cfg.out {
        Some(d) => {
            fs::create_dir_all(d)?;
            Ok(Some(d.clone()))
        }
        None => Ok(None),
    }
}

fn create(dir: &Path, name: &str) -> std::result::Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Outcome {
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Numerical(format!("json: {e}")))
}

fn emit(out: &mut dyn Write, dir: Option<&Path>, name: &str, text: &str) -> Outcome {
    out.write_all(text.as_bytes())?;
    if let Some(d) = dir {
        write_text(d, name, text)?;
    }
    Ok(())
}

fn rates_csv(params: &KineticParams) -> String {
    let r = params.rates();
    let mut s = String::from("z_sign,v_minus_c_sign,rate\n");
    for (z, v) in [(Sign::Minus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Plus, Sign::Plus)] {
        s.push_str(&format!("{},{},{:.16e}\n", z.value(), v.value(), r.get(z, v)));
    }
    s
}

fn cmd_rates(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let params = cfg.kinetic()?;
    emit(out, out_dir(cfg)?.as_deref(), "rates.csv", &rates_csv(&params))
}

fn cmd_critical(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let s = setup(cfg)?;
    let w = critical_speeds(&s.measure, &s.params)?;
    let text = format!("c_lo,c_hi\n{:.16e},{:.16e}\n", w.c_lo, w.c_hi);
    emit(out, out_dir(cfg)?.as_deref(), "critical_speeds.csv", &text)
}

fn need_c(cfg: &RunConfig) -> std::result::Result<f64, Failure> {
    cfg.c.ok_or_else(|| Failure::Config("this command needs a speed: pass --c or set c".into()))
}

fn cmd_modes(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let s = setup(cfg)?;
    let c = need_c(cfg)?;
    let basis = dispersion_roots(&s.measure, &s.params, c)?;
    let mut text = String::from("side,anchor,lambda");
    for i in 1..=s.measure.len() {
        text.push_str(&format!(",F_v{i}"));
    }
    text.push('\n');
    for m in basis.modes() {
        let side = match m.side {
            crate::modes::Side::Left => "left",
            crate::modes::Side::Right => "right",
        };
        text.push_str(&format!("{side},{},{:.16e}", m.anchor, m.lambda));
        for f in &m.profile {
            text.push_str(&format!(",{f:.16e}"));
        }
        text.push('\n');
    }
    emit(out, out_dir(cfg)?.as_deref(), "modes.csv", &text)
}

#[derive(Serialize)]
struct ScanReport<'a> {
    window: (f64, f64),
    points: usize,
    boundaries: &'a [f64],
    jumps: &'a [JumpRecord],
    crossings: Vec<JumpCrossing>,
    failures: &'a [(f64, String)],
}

fn run_scan(s: &Setup, cfg: &RunConfig) -> std::result::Result<UpsilonScan, Failure> {
    let dc = cfg.dc.unwrap_or_else(|| default_dc(&s.measure));
    Ok(upsilon_scan(&s.measure, &s.params, s.fields.alpha, s.fields.d_s, dc)?)
}

fn write_scan(dir: &Path, scan: &UpsilonScan) -> Outcome {
    let mut f = create(dir, "scan.csv")?;
    write_scan_csv(scan, &mut f)?;
    f.flush()?;
    let report = ScanReport {
        window: scan.window,
        points: scan.c_values.len(),
        boundaries: &scan.boundaries,
        jumps: &scan.jumps,
        crossings: jump_crossings(scan),
        failures: &scan.failures,
    };
    write_text(dir, "jumps.json", &to_json(&report)?)
}

fn scan_summary(scan: &UpsilonScan) -> String {
    let max = scan.upsilon_values.iter().copied().filter(|u| u.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let min = scan.upsilon_values.iter().copied().filter(|u| u.is_finite()).fold(f64::INFINITY, f64::min);
    let mut s = format!(
        "window ({:.6}, {:.6}), {} points, upsilon in [{min:.6e}, {max:.6e}], {} failures\n",
        scan.window.0,
        scan.window.1,
        scan.c_values.len(),
        scan.failures.len()
    );
    for j in &scan.jumps {
        s.push_str(&format!("jump at v = {:.6}: {:+.6e}\n", j.velocity, j.jump));
    }
    s
}

fn cmd_scan(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let s = setup(cfg)?;
    let scan = run_scan(&s, cfg)?;
    if let Some(d) = out_dir(cfg)? {
        write_scan(&d, &scan)?;
    }
    out.write_all(scan_summary(&scan).as_bytes())?;
    Ok(())
}

fn write_table(dir: &Path, name: &str, header: &str, columns: &[&[f64]]) -> Outcome {
    let mut f = create(dir, name)?;
    writeln!(f, "{header}")?;
    let rows = columns.first().map_or(0, |c| c.len());
    for j in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| format!("{:.16e}", c[j])).collect();
        writeln!(f, "{}", line.join(","))?;
    }
    f.flush()?;
    Ok(())
}

fn write_wave(dir: &Path, prefix: &str, wave: &TravellingWave) -> Outcome {
    let mut f = create(dir, &format!("{prefix}_profile.csv"))?;
    write_profile_csv(&wave.profile, &wave.profile.sample_grid(PROFILE_POINTS), &mut f)?;
    f.flush()?;
    write_table(dir, &format!("{prefix}_signal.csv"), "z,S", &[&wave.signal.z, &wave.signal.s])?;
    if let Some(n) = &wave.nutrient {
        write_table(dir, &format!("{prefix}_nutrient.csv"), "z,u,N", &[&n.z, &n.u, &n.n])?;
    }
    Ok(())
}

fn write_waves(dir: &Path, waves: &[TravellingWave]) -> Outcome {
    write_text(dir, "waves.json", &waves_json(waves)?)?;
    for (k, w) in waves.iter().enumerate() {
        write_wave(dir, &format!("wave_{k}"), w)?;
    }
    Ok(())
}

fn wave_lines(waves: &[TravellingWave]) -> String {
    let mut s = format!("{} waves\n", waves.len());
    for w in waves {
        let (lm, lp) = w.profile.principal_exponents();
        s.push_str(&format!(
            "c = {:.10}, lambda- = {lm:.6}, lambda+ = {lp:.6}, ansatz {}\n",
            w.c,
            if w.ansatz_valid { "valid" } else { "violated" }
        ));
    }
    s
}

fn scan_and_waves(s: &Setup, cfg: &RunConfig) -> std::result::Result<(UpsilonScan, Vec<TravellingWave>), Failure> {
    let scan = run_scan(s, cfg)?;
    let waves = find_waves(&scan, &s.measure, &s.params, &s.fields)?;
    Ok((scan, waves))
}

fn cmd_wave(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let s = setup(cfg)?;
    let (scan, waves) = scan_and_waves(&s, cfg)?;
    if let Some(d) = out_dir(cfg)? {
        write_scan(&d, &scan)?;
        write_waves(&d, &waves)?;
    }
    out.write_all(wave_lines(&waves).as_bytes())?;
    if waves.iter().any(|w| w.ansatz_valid) {
        Ok(())
    } else {
        Err(Failure::NoWave("no ansatz-valid travelling wave in the speed window".into()))
    }
}

#[derive(Serialize)]
struct ClusterReport {
    upsilon: f64,
    symmetry_residual: f64,
    ansatz_valid: bool,
    monotonicity_clean: bool,
    overshoot: OvershootReport,
}

fn cluster_outputs(cfg: &RunConfig, dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let s = setup(cfg)?;
    let wave = stationary_cluster(&s.measure, &s.params, &s.fields)?;
    let grid = wave.profile.sample_grid(PROFILE_POINTS);
    let report = ClusterReport {
        upsilon: wave.upsilon,
        symmetry_residual: symmetry_residual(&wave.profile, &grid),
        ansatz_valid: wave.ansatz_valid,
        monotonicity_clean: wave.monotonicity.is_clean(),
        overshoot: overshoot_detect(&wave.profile, &grid),
    };
    if let Some(d) = dir {
        write_wave(d, "cluster", &wave)?;
        write_text(d, "cluster.json", &to_json(&report)?)?;
    }
    writeln!(
        out,
        "cluster: upsilon = {:.3e}, symmetry residual = {:.3e}, overshooting velocities = {}, ansatz {}",
        report.upsilon,
        report.symmetry_residual,
        report.overshoot.right.len(),
        if report.ansatz_valid { "valid" } else { "violated" }
    )?;
    if report.ansatz_valid {
        Ok(())
    } else {
        Err(Failure::NoWave("stationary cluster violates the ansatz".into()))
    }
}

fn cmd_cluster(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    cluster_outputs(cfg, out_dir(cfg)?.as_deref(), out)
}

#[derive(Serialize)]
struct MacroReport {
    c: f64,
    lambda_minus: f64,
    lambda_plus: f64,
    d_rho: f64,
}

fn cmd_macro(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let f = cfg.fields()?;
    let p = cfg.kinetic()?;
    let m = MacroParams::new(p.chi_s(), p.chi_n(), f.alpha, f.d_s, cfg.d_rho.unwrap_or(1.0))?;
    let c = macro_speed(&m)?;
    let (lambda_minus, lambda_plus) = m.exponents(c);
    let report = MacroReport { c, lambda_minus, lambda_plus, d_rho: m.d_rho };
    if let Some(d) = out_dir(cfg)? {
        write_text(&d, "macro.json", &to_json(&report)?)?;
        // Admissible speeds: chi_n - chi_s < c < chi_n + chi_s.
        let lo = (m.chi_n - m.chi_s).max(0.0);
        let hi = m.chi_n + m.chi_s;
        let cs: Vec<f64> = (1..200).map(|k| lo + (hi - lo) * k as f64 / 200.0).collect();
        let us = cs.iter().map(|&c| macro_upsilon(&m, c)).collect::<crate::error::Result<Vec<f64>>>()?;
        write_table(&d, "macro_upsilon.csv", "c,upsilon", &[&cs, &us])?;
    }
    writeln!(out, "macroscopic speed c = {c:.12}, lambda- = {lambda_minus:.6}, lambda+ = {lambda_plus:.6}")?;
    Ok(())
}

#[derive(Serialize)]
struct RelaxReport {
    c: f64,
    converged: bool,
    t_final: f64,
    final_residual: f64,
    l1_distance: f64,
    max_face_flux: f64,
    residual_history: Vec<(f64, f64)>,
}

/// Smooth positive start, different for every velocity.
fn relax_initial(n: usize, z: &[f64]) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let shift = 2.0 * i as f64 - n as f64;
            z.iter().map(|&x| (1.0 + 0.5 * (0.7 * x + i as f64).sin()) * (-(x - shift).powi(2) / 40.0).exp()).collect()
        })
        .collect()
}

fn cmd_relax(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let s = setup(cfg)?;
    let c = need_c(cfg)?;
    let opts = cfg.relax_options();
    let reference = wave_profile_at(&s.measure, &s.params, c)?;
    let (z, _) = relax_grid(opts.half_width, opts.nz);
    let r: RelaxResult = relax_to_steady(&s.measure, &s.params, c, relax_initial(s.measure.len(), &z), &opts)?;
    let report = RelaxReport {
        c,
        converged: r.converged,
        t_final: r.t_final,
        final_residual: r.final_residual(),
        l1_distance: r.l1_distance(&s.measure, &reference),
        max_face_flux: r.face_flux(&s.measure).iter().fold(0.0f64, |m, x| m.max(x.abs())),
        residual_history: r.residual_history.clone(),
    };
    if let Some(d) = out_dir(cfg)? {
        write_text(&d, "relax.json", &to_json(&report)?)?;
        let rho = r.rho(&s.measure);
        let mut cols: Vec<&[f64]> = vec![&r.z, &rho];
        cols.extend(r.f.iter().map(Vec::as_slice));
        let mut header = String::from("z,rho");
        for i in 1..=s.measure.len() {
            header.push_str(&format!(",f_v{i}"));
        }
        write_table(&d, "relax_profile.csv", &header, &cols)?;
    }
    writeln!(
        out,
        "relaxation at c = {c}: converged {} at t = {:.1}, residual {:.3e}, L1 distance {:.3e}, max face flux {:.3e}",
        report.converged, report.t_final, report.final_residual, report.l1_distance, report.max_face_flux
    )?;
    if report.converged {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("relaxation did not converge by t = {}", report.t_final)))
    }
}

/// Offsets from a critical speed for the exponent sweep.
const SWEEP_OFFSETS: usize = 25;

#[derive(Serialize)]
struct SweepRow {
    approach: &'static str,
    c: f64,
    lambda_minus: f64,
    lambda_plus: f64,
}

fn exponent_sweep(s: &Setup) -> std::result::Result<Vec<SweepRow>, Failure> {
    let w = critical_speeds(&s.measure, &s.params)?;
    let span = 0.1 * (w.c_hi - w.c_lo);
    let mut rows = Vec::new();
    for (approach, base, dir) in [("c_lo", w.c_lo, 1.0), ("c_hi", w.c_hi, -1.0)] {
        for k in 0..SWEEP_OFFSETS {
            let c = base + dir * span * 10f64.powf(-6.0 * k as f64 / (SWEEP_OFFSETS - 1) as f64);
            // Speeds on a velocity are skipped.
            if let Ok(p) = wave_profile_at(&s.measure, &s.params, c) {
                let (lambda_minus, lambda_plus) = p.principal_exponents();
                rows.push(SweepRow { approach, c, lambda_minus, lambda_plus });
            }
        }
    }
    Ok(rows)
}

fn reproduce_fig5(s: &Setup, dir: &Path, out: &mut dyn Write) -> Outcome {
    let rows = exponent_sweep(s)?;
    let mut f = create(dir, "exponent_sweep.csv")?;
    writeln!(f, "approach,c,lambda_minus,lambda_plus")?;
    for r in &rows {
        writeln!(f, "{},{:.16e},{:.16e},{:.16e}", r.approach, r.c, r.lambda_minus, r.lambda_plus)?;
    }
    f.flush()?;
    for side in ["c_lo", "c_hi"] {
        if let Some(r) = rows.iter().rev().find(|r| r.approach == side) {
            writeln!(out, "towards {side}: c = {:.10}, lambda- = {:.3e}, lambda+ = {:.3e}", r.c, r.lambda_minus, r.lambda_plus)?;
        }
    }
    Ok(())
}

/// Distance from a velocity at which the fig7 profiles are drawn.
const SWAP_OFFSET: f64 = 1e-3;

fn reproduce_fig7(s: &Setup, dir: &Path, out: &mut dyn Write) -> Outcome {
    let w = critical_speeds(&s.measure, &s.params)?;
    let mut jumps = Vec::new();
    for (i, &v) in s.measure.velocities().iter().enumerate() {
        if !(w.contains(v - SWAP_OFFSET) && w.contains(v + SWAP_OFFSET)) {
            continue;
        }
        let j = jump_at(&s.measure, &s.params, i, s.fields.alpha, s.fields.d_s)?;
        for (tag, c) in [("below", v - SWAP_OFFSET), ("above", v + SWAP_OFFSET)] {
            let p = wave_profile_at(&s.measure, &s.params, c)?;
            let (l, r) = p.extent();
            let mut f = create(dir, &format!("swap_v{}_{tag}.csv", i + 1))?;
            write_profile_csv(&p, &centered_grid(l, r, PROFILE_POINTS), &mut f)?;
            f.flush()?;
        }
        writeln!(
            out,
            "v = {v}: transferred amplitude {:.6e} (bound {:.6e}), upsilon jump {:+.6e}",
            j.transferred_below, j.transfer_bound, j.jump
        )?;
        jumps.push(j);
    }
    write_text(dir, "swaps.json", &to_json(&jumps)?)
}

fn reproduce_waves(s: &Setup, cfg: &RunConfig, dir: &Path, out: &mut dyn Write) -> Outcome {
    let (scan, waves) = scan_and_waves(s, cfg)?;
    write_scan(dir, &scan)?;
    write_waves(dir, &waves)?;
    out.write_all(scan_summary(&scan).as_bytes())?;
    out.write_all(wave_lines(&waves).as_bytes())?;
    Ok(())
}

/// Inner velocities swept for the fig9 dataset.
pub const FIG9_VMIN: [f64; 3] = [0.1, 0.5, 0.8];

fn cmd_reproduce(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let name = cfg.preset.clone().ok_or_else(|| Failure::Config("reproduce needs --preset".into()))?;
    let root = cfg.out.clone().unwrap_or_else(|| PathBuf::from("kinwave-data"));
    let dir = root.join(&name);
    fs::create_dir_all(&dir)?;
    let s = setup(cfg)?;
    match name.as_str() {
        "fig3" => cluster_outputs(cfg, Some(&dir), out)?,
        "fig5" => reproduce_fig5(&s, &dir, out)?,
        "fig7" => reproduce_fig7(&s, &dir, out)?,
        "fig8" | "fig10" => reproduce_waves(&s, cfg, &dir, out)?,
        "fig9" => {
            for vmin in FIG9_VMIN {
                let sub = dir.join(format!("vmin_{vmin}"));
                fs::create_dir_all(&sub)?;
                let c = RunConfig { velocities: Some(four_velocities(vmin)), ..cfg.clone() };
                writeln!(out, "vmin = {vmin}")?;
                reproduce_waves(&setup(&c)?, &c, &sub, out)?;
            }
        }
        other => return Err(Failure::Config(format!("no dataset defined for preset {other:?}"))),
    }
    writeln!(out, "wrote {}", dir.display())?;
    Ok(())
}
