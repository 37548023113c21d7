//! Command-line front end: configuration, batch runs, exports and the
//! invariant audit.

pub mod audit;
pub mod config;
pub mod export;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reinhardt_core::dynamics::{self, BangBangSchedule, ExtendedState, IntegratorConfig, Policy};
use reinhardt_core::extremals::{
    self, circle_extremal, octagon_shoot, reconstruct_boundary, smoothed_octagon_density,
};
use reinhardt_core::fuller::{self, FullerState, SpiralDirection};
use reinhardt_core::halfplane::{phi, star_membership, HalfPlanePoint};
use reinhardt_core::sl2::TracelessMatrix;
use reinhardt_core::Complex;
use serde::Serialize;

use config::{CostateInit, Format, FullerStart, PolicyKind, RunConfig};

const KEYS_HELP: &str =
    "Every flag is also a config key (dashes become underscores) and may be given in a \
`key = value` file passed with --config. Precedence: flags > --set KEY=VALUE > config file > defaults. \
Use --dump-config to print the effective configuration in that format.";

#[derive(Parser, Debug)]
#[command(name = "reinhardt", version, about = "Numerical experiments for the Reinhardt optimal control problem", after_help = KEYS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Config file with `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output path, `-` for stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// csv, json or svg.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Set any config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the lifted state/costate flow from a half-plane point.
    #[command(allow_negative_numbers = true)]
    #[command(
        after_help = "Keys: control_set policy u schedule x0 y0 costate t_end step method \
renormalize_every tol record_every seed format out.\n\
control_set: simplex | circumscribed | inscribed | center | disk:<r2>; policy: constant | schedule | closed-loop; \
u: three weights summing to 1; schedule: vertex:duration,...; costate: zero | singular | random.\n\n"
    )]
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        control_set: Option<String>,
        #[arg(long)]
        policy: Option<String>,
        #[arg(long, value_name = "U0,U1,U2")]
        u: Option<String>,
        #[arg(long, value_name = "V:D,...")]
        schedule: Option<String>,
        #[arg(long)]
        x0: Option<String>,
        #[arg(long)]
        y0: Option<String>,
        #[arg(long)]
        costate: Option<String>,
        #[arg(long)]
        t_end: Option<String>,
        #[arg(long)]
        step: Option<String>,
        /// rk4 or rk45.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        renormalize_every: Option<String>,
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        record_every: Option<String>,
    },
    /// The circle extremal from the singular locus.
    #[command(allow_negative_numbers = true)]
    #[command(
        after_help = "Keys: samples format out. csv/json write the trajectory, svg the boundary.\n\n"
    )]
    Extremal {
        #[command(flatten)]
        common: Common,
        /// Required: the circle is the only closed-form extremal.
        #[arg(long)]
        circle: bool,
        #[arg(long)]
        samples: Option<String>,
        /// Also write the boundary multi-curve CSV here.
        #[arg(long, value_name = "PATH")]
        boundary: Option<PathBuf>,
    },
    /// Shooting solver for the smoothed (6k+2)-gon.
    #[command(allow_negative_numbers = true)]
    #[command(after_help = "Keys: k samples format out. `samples` is per switching segment.\n\n")]
    Octagon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, value_name = "PATH")]
        boundary: Option<PathBuf>,
    },
    /// Integrate the truncated Fuller system.
    #[command(allow_negative_numbers = true)]
    #[command(after_help = "Keys: start t0 t_end step arrival seed format out.\n\
start: outward | inward | random. The inward spiral reaches 0 at time `arrival`.\n\n")]
    Fuller {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        t0: Option<String>,
        #[arg(long)]
        t_end: Option<String>,
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        arrival: Option<String>,
    },
    /// Run the invariant suite and print a pass/fail table.
    #[command(allow_negative_numbers = true)]
    #[command(after_help = "Keys: seed. Exit status 0 iff every criterion passes.\n\n")]
    Check {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion numbers.
        #[arg(long, value_name = "IDS")]
        only: Option<String>,
        /// Run criteria one after another.
        #[arg(long)]
        serial: bool,
        /// Print the reports as JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Sample a hypotrochoid multi-curve.
    #[command(allow_negative_numbers = true)]
    #[command(
        after_help = "Keys: big_r1 r1 d1 turns samples format out. `samples` is per turn.\n\n"
    )]
    ExportHypotrochoid {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        big_r1: Option<String>,
        #[arg(long)]
        r1: Option<String>,
        #[arg(long)]
        d1: Option<String>,
        #[arg(long)]
        turns: Option<String>,
        #[arg(long)]
        samples: Option<String>,
    },
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or config; exit status 2.
    Usage(anyhow::Error),
    /// Numerical or I/O failure; exit status 1.
    Run(anyhow::Error),
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    status: &'static str,
    command: &'a str,
    error: String,
    chain: Vec<String>,
}

/// Parses `argv` (including the program name), runs the command and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let name = command_name(&cli.command);
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            eprintln!("\nFor more information, try 'reinhardt {name} --help'.");
            2
        }
        Err(Failure::Run(e)) => {
            let d = Diagnostic {
                status: "error",
                command: name,
                error: e.to_string(),
                chain: e.chain().skip(1).map(|c| c.to_string()).collect(),
            };
            eprintln!(
                "{}",
                serde_json::to_string(&d).unwrap_or_else(|_| format!("{e:#}"))
            );
            1
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Simulate { .. } => "simulate",
        Command::Extremal { .. } => "extremal",
        Command::Octagon { .. } => "octagon",
        Command::Fuller { .. } => "fuller",
        Command::Check { .. } => "check",
        Command::ExportHypotrochoid { .. } => "export-hypotrochoid",
    }
}

/// Defaults, then the config file, then `--set` pairs, then dedicated flags.
fn build_config(common: &Common, flags: &[(&str, &Option<String>)]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &common.config {
        cfg.apply_file(p)?;
    }
    for kv in &common.sets {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects KEY=VALUE, got `{kv}`"))?;
        cfg.set(k.trim(), v)?;
    }
    let shared = [
        ("out", &common.out),
        ("format", &common.format),
        ("seed", &common.seed),
    ];
    for (k, v) in shared.iter().chain(flags) {
        if let Some(v) = v {
            cfg.set(k, v)
                .with_context(|| format!("--{}", k.replace('_', "-")))?;
        }
    }
    Ok(cfg)
}

fn execute(cmd: Command) -> Result<i32, Failure> {
    let usage = Failure::Usage;
    let runf = Failure::Run;
    match cmd {
        Command::Simulate {
            common,
            control_set,
            policy,
            u,
            schedule,
            x0,
            y0,
            costate,
            t_end,
            step,
            method,
            renormalize_every,
            tol,
            record_every,
        } => {
            let cfg = build_config(
                &common,
                &[
                    ("control_set", &control_set),
                    ("policy", &policy),
                    ("u", &u),
                    ("schedule", &schedule),
                    ("x0", &x0),
                    ("y0", &y0),
                    ("costate", &costate),
                    ("t_end", &t_end),
                    ("step", &step),
                    ("method", &method),
                    ("renormalize_every", &renormalize_every),
                    ("tol", &tol),
                    ("record_every", &record_every),
                ],
            )
            .map_err(usage)?;
            if common.dump_config {
                print!("{}", cfg.dump());
                return Ok(0);
            }
            simulate(&cfg).map_err(runf)
        }
        Command::Extremal {
            common,
            circle,
            samples,
            boundary,
        } => {
            let cfg = build_config(&common, &[("samples", &samples)]).map_err(usage)?;
            if common.dump_config {
                print!("{}", cfg.dump());
                return Ok(0);
            }
            if !circle {
                return Err(usage(anyhow!(
                    "only the circle extremal is available; pass --circle"
                )));
            }
            circle_command(&cfg, boundary.as_deref()).map_err(runf)
        }
        Command::Octagon {
            common,
            k,
            samples,
            boundary,
        } => {
            let cfg = build_config(&common, &[("k", &k), ("samples", &samples)]).map_err(usage)?;
            if common.dump_config {
                print!("{}", cfg.dump());
                return Ok(0);
            }
            octagon_command(&cfg, boundary.as_deref()).map_err(runf)
        }
        Command::Fuller {
            common,
            start,
            t0,
            t_end,
            step,
            arrival,
        } => {
            let cfg = build_config(
                &common,
                &[
                    ("start", &start),
                    ("t0", &t0),
                    ("t_end", &t_end),
                    ("step", &step),
                    ("arrival", &arrival),
                ],
            )
            .map_err(usage)?;
            if common.dump_config {
                print!("{}", cfg.dump());
                return Ok(0);
            }
            fuller_command(&cfg).map_err(runf)
        }
        Command::Check {
            common,
            only,
            serial,
            json,
        } => {
            let cfg = build_config(&common, &[]).map_err(usage)?;
            if common.dump_config {
                print!("{}", cfg.dump());
                return Ok(0);
            }
            let ids = match only {
                None => None,
                Some(s) => Some(parse_ids(&s).map_err(usage)?),
            };
            Ok(check_command(&cfg, ids, !serial, json))
        }
        Command::ExportHypotrochoid {
            common,
            big_r1,
            r1,
            d1,
            turns,
            samples,
        } => {
            let cfg = build_config(
                &common,
                &[
                    ("big_r1", &big_r1),
                    ("r1", &r1),
                    ("d1", &d1),
                    ("turns", &turns),
                    ("samples", &samples),
                ],
            )
            .map_err(usage)?;
            if common.dump_config {
                print!("{}", cfg.dump());
                return Ok(0);
            }
            hypotrochoid_command(&cfg).map_err(runf)
        }
    }
}

fn parse_ids(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|p| {
            let id: u8 = p
                .trim()
                .parse()
                .with_context(|| format!("bad criterion `{p}`"))?;
            if !(1..=11).contains(&id) {
                return Err(anyhow!("criteria are numbered 1 to 11, got {id}"));
            }
            Ok(id)
        })
        .collect()
}

/// Data goes to `out`; the summary goes to stdout unless the data already does.
struct Sink {
    data: Box<dyn Write>,
    to_stdout: bool,
}

impl Sink {
    fn open(path: &str) -> Result<Self> {
        if path == "-" {
            Ok(Sink {
                data: Box::new(io::stdout().lock()),
                to_stdout: true,
            })
        } else {
            let f = File::create(path).with_context(|| format!("creating {path}"))?;
            Ok(Sink {
                data: Box::new(BufWriter::new(f)),
                to_stdout: false,
            })
        }
    }

    fn summary(&self, lines: &[(String, String)]) {
        let text: String = lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
        if self.to_stdout {
            eprint!("{text}");
        } else {
            print!("{text}");
        }
    }
}

fn kv(k: &str, v: impl std::fmt::Display) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// Like [`kv`] but switches to exponent notation for small magnitudes.
fn kf(k: &str, v: f64) -> (String, String) {
    (k.to_string(), config::fmt_f64(v))
}

fn initial_state(cfg: &RunConfig) -> Result<ExtendedState> {
    let z = HalfPlanePoint::new(cfg.x0, cfg.y0).map_err(|e| anyhow!("{e}"))?;
    if !star_membership(z).inside {
        return Err(anyhow!(
            "start point ({}, {}) lies outside the star domain",
            cfg.x0,
            cfg.y0
        ));
    }
    let x = phi(z);
    let (l1, lr) = match cfg.costate {
        CostateInit::Zero => (TracelessMatrix::ZERO, TracelessMatrix::ZERO),
        CostateInit::Singular => (TracelessMatrix::J.scale(-1.5), TracelessMatrix::ZERO),
        CostateInit::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut m = |s: f64| {
                TracelessMatrix::new(
                    rng.gen_range(-s..s),
                    rng.gen_range(-s..s),
                    rng.gen_range(-s..s),
                )
            };
            let l1 = m(2.0);
            let lr = m(1.0);
            (l1, lr - x.scale(lr.trace_form(&x) / x.trace_form(&x)))
        }
    };
    Ok(ExtendedState::from_costates(x, l1, lr))
}

fn simulate(cfg: &RunConfig) -> Result<i32> {
    let s0 = initial_state(cfg)?;
    let policy = match cfg.policy {
        PolicyKind::Constant => Policy::Constant(cfg.control_point()),
        PolicyKind::Schedule => Policy::Schedule(
            BangBangSchedule::new(cfg.schedule.clone()).map_err(|e| anyhow!("{e}"))?,
        ),
        PolicyKind::ClosedLoop => Policy::ClosedLoop(cfg.spec()),
    };
    let icfg = IntegratorConfig {
        step: cfg.step,
        method: cfg.method,
        renormalize_every: cfg.renormalize_every,
        tol: cfg.tol,
        record_every: cfg.record_every,
    };
    info!("simulate: {:?} to t = {}", cfg.policy, cfg.t_end);
    let traj = dynamics::integrate(&s0, &policy, cfg.t_end, &icfg)
        .map_err(|e| anyhow!("{e}"))
        .context("integration failed")?;
    let exit = match traj.exit {
        dynamics::Exit::Completed => "completed".to_string(),
        dynamics::Exit::StarExit { t } => {
            warn!("trajectory left the star domain at t = {t}");
            format!("star-exit at t = {t}")
        }
    };
    let mut sink = Sink::open(&cfg.out)?;
    match cfg.format {
        Format::Csv => export::trajectory_csv(&mut sink.data, &traj)?,
        Format::Json => export::trajectory_json(&mut sink.data, &traj)?,
        Format::Svg => export::halfplane_svg(&mut sink.data, &[export::halfplane_path(&traj)])?,
    }
    sink.data.flush()?;
    let d = traj.drift;
    sink.summary(&[
        kv("exit", exit),
        kf("t_final", traj.final_time()),
        kf("cost", traj.cost()),
        kv("samples", traj.len()),
        kf("drift_det_x", d.det_x),
        kf("drift_det_l1", d.det_l1),
        kf("drift_lr_dot_x", d.lr_dot_x),
        kf("drift_hamiltonian", d.hamiltonian),
        kf("drift_angular_momentum", d.angular_momentum),
    ]);
    Ok(0)
}

fn write_boundary(path: &std::path::Path, samples: &[extremals::MultiCurveSample]) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(f);
    export::multicurve_csv(&mut w, samples)?;
    w.flush()?;
    Ok(())
}

fn circle_command(cfg: &RunConfig, boundary_path: Option<&std::path::Path>) -> Result<i32> {
    let c = circle_extremal(cfg.samples).map_err(|e| anyhow!("{e}"))?;
    let b = reconstruct_boundary(&c.trajectory, 0).map_err(|e| anyhow!("{e}"))?;
    let mut sink = Sink::open(&cfg.out)?;
    match cfg.format {
        Format::Csv => export::trajectory_csv(&mut sink.data, &c.trajectory)?,
        Format::Json => export::trajectory_json(&mut sink.data, &c.trajectory)?,
        Format::Svg => export::plane_svg(&mut sink.data, std::slice::from_ref(&b.polygon), true)?,
    }
    sink.data.flush()?;
    if let Some(p) = boundary_path {
        write_boundary(p, &b.samples)?;
    }
    let target = std::f64::consts::PI / 12f64.sqrt();
    sink.summary(&[
        kf("density", c.density),
        kf("target_pi_over_sqrt12", target),
        kf("abs_error", (c.density - target).abs()),
        kf("t_final", c.t_final),
        kf("transversality_g", c.transversality.g),
        kf("transversality_x", c.transversality.x),
        kf("transversality_lr", c.transversality.lr),
        kf("boundary_area", b.area),
    ]);
    Ok(0)
}

fn octagon_command(cfg: &RunConfig, boundary_path: Option<&std::path::Path>) -> Result<i32> {
    info!("octagon: shooting for k = {}", cfg.k);
    let sol = octagon_shoot(cfg.k, cfg.samples)
        .map_err(|e| anyhow!("{e}"))
        .context("shooting failed")?;
    let b = reconstruct_boundary(&sol.trajectory, 0).map_err(|e| anyhow!("{e}"))?;
    if !b.closed {
        warn!(
            "boundary closure residual {:e} above tolerance",
            b.closure_residual
        );
    }
    let mut sink = Sink::open(&cfg.out)?;
    match cfg.format {
        Format::Csv => export::trajectory_csv(&mut sink.data, &sol.trajectory)?,
        Format::Json => export::trajectory_json(&mut sink.data, &sol.trajectory)?,
        Format::Svg => {
            export::halfplane_svg(&mut sink.data, &[export::halfplane_path(&sol.trajectory)])?
        }
    }
    sink.data.flush()?;
    if let Some(p) = boundary_path {
        write_boundary(p, &b.samples)?;
    }
    let target = smoothed_octagon_density();
    let mut lines = vec![
        kv("k", sol.k),
        kf("y0", sol.y0),
        kf("side_time", sol.side_time),
        kf("density", sol.density),
    ];
    if sol.k == 1 {
        lines.push(kf("target", 0.902414));
        lines.push(kf("abs_error_vs_0.902414", (sol.density - 0.902414).abs()));
        lines.push(kf("abs_error_vs_closed_form", (sol.density - target).abs()));
    }
    lines.extend([
        kf("transversality", sol.transversality.max()),
        kf("max_abs_hamiltonian", sol.max_hamiltonian),
        kf("max_distance_to_i", sol.max_distance_to_i),
        kf("boundary_area", b.area),
        kf("boundary_closure", b.closure_residual),
    ]);
    sink.summary(&lines);
    Ok(0)
}

fn fuller_command(cfg: &RunConfig) -> Result<i32> {
    let f0 = match cfg.start {
        FullerStart::Outward => fuller::log_spiral(cfg.t0, SpiralDirection::Outward, 0.0),
        FullerStart::Inward => fuller::log_spiral(cfg.t0, SpiralDirection::Inward, cfg.arrival),
        FullerStart::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut z = || {
                Complex::from_polar(
                    rng.gen_range(0.1..1.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            };
            Ok(FullerState::reinhardt(z(), z(), z()))
        }
    }
    .map_err(|e| anyhow!("{e}"))?;
    if cfg.start == FullerStart::Inward && cfg.t_end.partial_cmp(&cfg.arrival) != Some(std::cmp::Ordering::Less) {
        return Err(anyhow!(
            "the inward spiral reaches 0 at t = {}; pick t_end below it",
            cfg.arrival
        ));
    }
    let path =
        fuller::integrate_fuller(&f0, cfg.t0, cfg.t_end, cfg.step).map_err(|e| anyhow!("{e}"))?;
    let mut sink = Sink::open(&cfg.out)?;
    match cfg.format {
        Format::Csv => export::fuller_csv(&mut sink.data, &path)?,
        Format::Json => export::fuller_json(&mut sink.data, &path)?,
        Format::Svg => {
            let curves: Vec<Vec<[f64; 2]>> = (0..3)
                .map(|k| path.iter().map(|(_, f)| [f.z[k].re, f.z[k].im]).collect())
                .collect();
            export::complex_svg(&mut sink.data, &curves)?
        }
    }
    sink.data.flush()?;
    let (h0, a0) = (
        fuller::hamiltonian_c(&f0.z),
        fuller::angular_momentum_c(&f0.z),
    );
    let (mut dh, mut da) = (0.0f64, 0.0f64);
    for (_, f) in &path {
        dh = dh.max((fuller::hamiltonian_c(&f.z) - h0).abs());
        da = da.max((fuller::angular_momentum_c(&f.z) - a0).abs());
    }
    sink.summary(&[
        kv("samples", path.len()),
        kf("H_c", h0),
        kf("A_c", a0),
        kf("drift_H_c", dh),
        kf("drift_A_c", da),
    ]);
    Ok(0)
}

fn check_command(cfg: &RunConfig, ids: Option<Vec<u8>>, parallel: bool, json: bool) -> i32 {
    let reports = match ids {
        None => audit::run_all(cfg.seed, parallel),
        Some(ids) => ids
            .into_iter()
            .map(|id| audit::run_criterion(id, cfg.seed))
            .collect(),
    };
    let ok = reports.iter().all(|r| r.passed());
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reports).expect("reports serialize")
        );
    } else {
        for r in &reports {
            println!("{}", r.line());
        }
        let passed = reports.iter().filter(|r| r.passed()).count();
        println!("{passed}/{} criteria passed", reports.len());
    }
    if !ok {
        let failed: Vec<&audit::Criterion> = reports.iter().filter(|r| !r.passed()).collect();
        eprintln!(
            "{}",
            serde_json::json!({"status": "error", "command": "check", "failed": failed})
        );
        return 1;
    }
    0
}

fn hypotrochoid_command(cfg: &RunConfig) -> Result<i32> {
    let (rr, r, rho) = extremals::hypotrochoid_from_standard(cfg.big_r1, cfg.r1, cfg.d1)
        .map_err(|e| anyhow!("{e}"))?;
    let n = ((cfg.samples as f64) * cfg.turns).ceil().max(2.0) as usize;
    let samples: Vec<extremals::MultiCurveSample> = (0..=n)
        .map(|i| {
            let t = std::f64::consts::TAU * cfg.turns * i as f64 / n as f64;
            extremals::hypotrochoid_multicurve(rr, r, rho, t)
        })
        .collect::<reinhardt_core::Result<_>>()
        .map_err(|e| anyhow!("{e}"))?;
    let mut sink = Sink::open(&cfg.out)?;
    match cfg.format {
        Format::Csv => export::multicurve_csv(&mut sink.data, &samples)?,
        Format::Json => export::multicurve_json(&mut sink.data, &samples)?,
        Format::Svg => {
            let c: Vec<[f64; 2]> = samples.iter().map(|s| s.points[0]).collect();
            export::complex_svg(&mut sink.data, &[c])?
        }
    }
    sink.data.flush()?;
    let worst = samples
        .iter()
        .map(|s| s.residuals().max())
        .fold(0.0f64, f64::max);
    let (a, b) = (samples[0].points[0], samples[n].points[0]);
    sink.summary(&[
        kf("R", rr),
        kf("r", r),
        kf("rho", rho),
        kv("samples", samples.len()),
        kf("max_multipoint_residual", worst),
        kf(
            "endpoint_gap",
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt(),
        ),
    ]);
    Ok(0)
}
