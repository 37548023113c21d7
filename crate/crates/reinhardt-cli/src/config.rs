//! Run configuration: defaults, a `key = value` file, then command-line flags.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use reinhardt_core::control::{ControlPoint, ControlSetSpec};
use reinhardt_core::dynamics::{BangBangSchedule, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => bail!("unknown format `{s}` (csv, json, svg)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// How `simulate` picks the control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    Constant,
    Schedule,
    ClosedLoop,
}

impl PolicyKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(PolicyKind::Constant),
            "schedule" => Ok(PolicyKind::Schedule),
            "closed-loop" => Ok(PolicyKind::ClosedLoop),
            _ => bail!("unknown policy `{s}` (constant, schedule, closed-loop)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Constant => "constant",
            PolicyKind::Schedule => "schedule",
            PolicyKind::ClosedLoop => "closed-loop",
        }
    }
}

/// Initial costates for `simulate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostateInit {
    Zero,
    Singular,
    Random,
}

impl CostateInit {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(CostateInit::Zero),
            "singular" => Ok(CostateInit::Singular),
            "random" => Ok(CostateInit::Random),
            _ => bail!("unknown costate `{s}` (zero, singular, random)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CostateInit::Zero => "zero",
            CostateInit::Singular => "singular",
            CostateInit::Random => "random",
        }
    }
}

/// Starting point of a `fuller` run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FullerStart {
    Outward,
    Inward,
    Random,
}

impl FullerStart {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "outward" => Ok(FullerStart::Outward),
            "inward" => Ok(FullerStart::Inward),
            "random" => Ok(FullerStart::Random),
            _ => bail!("unknown start `{s}` (outward, inward, random)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FullerStart::Outward => "outward",
            FullerStart::Inward => "inward",
            FullerStart::Random => "random",
        }
    }
}

/// Control set named in a config: `simplex`, `circumscribed`, `inscribed`, `center` or `disk:<r2>`.
pub fn parse_control_set(s: &str) -> Result<ControlSetSpec> {
    match s {
        "simplex" => Ok(ControlSetSpec::simplex()),
        "circumscribed" => Ok(ControlSetSpec::circumscribed()),
        "inscribed" => Ok(ControlSetSpec::inscribed()),
        "center" => Ok(ControlSetSpec::center()),
        _ => {
            let r2 = s
                .strip_prefix("disk:")
                .ok_or_else(|| anyhow!("unknown control set `{s}`"))?;
            let r2: f64 = r2
                .parse()
                .with_context(|| format!("bad disk radius in `{s}`"))?;
            ControlSetSpec::disk(r2).map_err(|e| anyhow!("{e}"))
        }
    }
}

/// Every tunable of every subcommand. Unused keys are ignored by a command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub control_set: String,
    pub policy: PolicyKind,
    pub u: [f64; 3],
    pub schedule: Vec<(usize, f64)>,
    pub x0: f64,
    pub y0: f64,
    pub costate: CostateInit,
    pub t_end: f64,
    pub step: f64,
    pub method: Method,
    pub renormalize_every: usize,
    pub tol: f64,
    pub record_every: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub start: FullerStart,
    pub t0: f64,
    pub arrival: f64,
    pub big_r1: f64,
    pub r1: f64,
    pub d1: f64,
    pub turns: f64,
    pub format: Format,
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            control_set: "circumscribed".into(),
            policy: PolicyKind::Constant,
            u: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            schedule: vec![(2, 0.1), (0, 0.1), (1, 0.1)],
            x0: 0.0,
            y0: 1.0,
            costate: CostateInit::Singular,
            t_end: 1.0,
            step: 1e-4,
            method: Method::Rk4,
            renormalize_every: 100,
            tol: 1e-10,
            record_every: 100,
            k: 1,
            samples: 200,
            seed: 0,
            start: FullerStart::Outward,
            t0: 0.1,
            arrival: 2.0,
            big_r1: 2.855,
            r1: 2.498,
            d1: -10.0,
            turns: 7.0,
            format: Format::Csv,
            out: "-".into(),
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| anyhow!("`{key}`: cannot parse `{v}`: {e}"))
}

/// Shortest round-trip text, in exponent form for small magnitudes.
pub fn fmt_f64(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        bail!("`{key}` must be positive, got {v}")
    }
}

pub const KEYS: &[&str] = &[
    "control_set",
    "policy",
    "u",
    "schedule",
    "x0",
    "y0",
    "costate",
    "t_end",
    "step",
    "method",
    "renormalize_every",
    "tol",
    "record_every",
    "k",
    "samples",
    "seed",
    "start",
    "t0",
    "arrival",
    "big_r1",
    "r1",
    "d1",
    "turns",
    "format",
    "out",
];

impl RunConfig {
    /// Applies one `key = value` setting, validating its range.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let v = v.trim();
        match key {
            "control_set" => {
                parse_control_set(v)?;
                self.control_set = v.to_string();
            }
            "policy" => self.policy = PolicyKind::parse(v)?,
            "u" => {
                let parts: Vec<f64> = v
                    .split(',')
                    .map(|p| num::<f64>(key, p.trim()))
                    .collect::<Result<_>>()?;
                let [a, b, c] = parts[..] else {
                    bail!("`u` needs three comma-separated weights")
                };
                ControlPoint::new(a, b, c).map_err(|e| anyhow!("`u`: {e}"))?;
                self.u = [a, b, c];
            }
            "schedule" => {
                let mut segs = Vec::new();
                for p in v.split(',').filter(|p| !p.trim().is_empty()) {
                    let (vx, d) = p
                        .split_once(':')
                        .ok_or_else(|| anyhow!("`schedule` entries are vertex:duration"))?;
                    segs.push((num::<usize>(key, vx.trim())?, num::<f64>(key, d.trim())?));
                }
                BangBangSchedule::new(segs.clone()).map_err(|e| anyhow!("`schedule`: {e}"))?;
                self.schedule = segs;
            }
            "x0" => self.x0 = num(key, v)?,
            "y0" => self.y0 = positive(key, num(key, v)?)?,
            "costate" => self.costate = CostateInit::parse(v)?,
            "t_end" => self.t_end = positive(key, num(key, v)?)?,
            "step" => self.step = positive(key, num(key, v)?)?,
            "method" => {
                self.method = match v {
                    "rk4" => Method::Rk4,
                    "rk45" => Method::Rk45,
                    _ => bail!("unknown method `{v}` (rk4, rk45)"),
                }
            }
            "renormalize_every" => self.renormalize_every = num::<usize>(key, v)?.max(1),
            "tol" => self.tol = positive(key, num(key, v)?)?,
            "record_every" => self.record_every = num::<usize>(key, v)?.max(1),
            "k" => {
                let k: usize = num(key, v)?;
                if k == 0 {
                    bail!("`k` must be at least 1");
                }
                self.k = k;
            }
            "samples" => {
                let n: usize = num(key, v)?;
                if n < 2 {
                    bail!("`samples` must be at least 2");
                }
                self.samples = n;
            }
            "seed" => self.seed = num(key, v)?,
            "start" => self.start = FullerStart::parse(v)?,
            "t0" => self.t0 = positive(key, num(key, v)?)?,
            "arrival" => self.arrival = positive(key, num(key, v)?)?,
            "big_r1" => self.big_r1 = num(key, v)?,
            "r1" => {
                let r: f64 = num(key, v)?;
                if r == 0.0 {
                    bail!("`r1` must be nonzero");
                }
                self.r1 = r;
            }
            "d1" => self.d1 = num(key, v)?,
            "turns" => self.turns = positive(key, num(key, v)?)?,
            "format" => self.format = Format::parse(v)?,
            "out" => self.out = v.to_string(),
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    /// Applies a config file in `key = value` form; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", n + 1))?;
            self.set(k.trim(), v)
                .with_context(|| format!("line {}", n + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.apply_text(&text)
            .with_context(|| format!("in {}", path.display()))
    }

    pub fn spec(&self) -> ControlSetSpec {
        parse_control_set(&self.control_set).expect("validated on set")
    }

    pub fn control_point(&self) -> ControlPoint {
        ControlPoint::new(self.u[0], self.u[1], self.u[2]).expect("validated on set")
    }

    /// The effective configuration in the file format; parses back to `self`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let sched: Vec<String> = self
            .schedule
            .iter()
            .map(|(v, d)| format!("{v}:{}", fmt_f64(*d)))
            .collect();
        let method = match self.method {
            Method::Rk4 => "rk4",
            Method::Rk45 => "rk45",
        };
        let rows: [(&str, String); 25] = [
            ("control_set", self.control_set.clone()),
            ("policy", self.policy.name().into()),
            ("u", self.u.map(fmt_f64).join(",")),
            ("schedule", sched.join(",")),
            ("x0", fmt_f64(self.x0)),
            ("y0", fmt_f64(self.y0)),
            ("costate", self.costate.name().into()),
            ("t_end", fmt_f64(self.t_end)),
            ("step", fmt_f64(self.step)),
            ("method", method.into()),
            ("renormalize_every", self.renormalize_every.to_string()),
            ("tol", fmt_f64(self.tol)),
            ("record_every", self.record_every.to_string()),
            ("k", self.k.to_string()),
            ("samples", self.samples.to_string()),
            ("seed", self.seed.to_string()),
            ("start", self.start.name().into()),
            ("t0", fmt_f64(self.t0)),
            ("arrival", fmt_f64(self.arrival)),
            ("big_r1", fmt_f64(self.big_r1)),
            ("r1", fmt_f64(self.r1)),
            ("d1", fmt_f64(self.d1)),
            ("turns", fmt_f64(self.turns)),
            ("format", self.format.name().into()),
            ("out", self.out.clone()),
        ];
        for (k, v) in rows {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}
