//! Flat `key = value` run configuration with exact rationals.

use std::fmt;
use std::path::PathBuf;

use num_traits::{Signed, ToPrimitive, Zero};

use super::CliError;
use crate::exponents::{int, parse_rational, rat, Exponent, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Gate,
    Scan,
    Verify,
    Simulate,
    Picard,
    Scatter,
    Depend,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Gate,
        Command::Scan,
        Command::Verify,
        Command::Simulate,
        Command::Picard,
        Command::Scatter,
        Command::Depend,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Gate => "gate",
            Command::Scan => "scan",
            Command::Verify => "verify",
            Command::Simulate => "simulate",
            Command::Picard => "picard",
            Command::Scatter => "scatter",
            Command::Depend => "depend",
        }
    }

    fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == text)
    }

    /// Keys without a default that the command reads.
    fn required(self) -> &'static [&'static str] {
        match self {
            Command::Gate | Command::Scan => &["n", "s"],
            Command::Verify => &["suite"],
            _ => &["n", "s", "alpha", "b"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Holder,
    Hls,
    Sobolev,
    Strichartz,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Holder,
        Suite::Hls,
        Suite::Sobolev,
        Suite::Strichartz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Holder => "holder",
            Suite::Hls => "hls",
            Suite::Sobolev => "sobolev",
            Suite::Strichartz => "strichartz",
        }
    }
}

/// `(key, default, meaning)`; an empty default means the key has none.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("command", "", "gate | scan | verify | simulate | picard | scatter | depend"),
    ("n", "", "space dimension"),
    ("s", "", "regularity index"),
    ("alpha", "", "Riesz order"),
    ("b", "", "weight exponent"),
    ("p", "", "nonlinear power; default is the critical power of (n, s, alpha, b)"),
    ("lambda", "1", "coupling: 1 defocusing, -1 focusing, 0 free flow"),
    ("grid", "32", "points per axis (power of two >= 8)"),
    ("box", "8", "half-width L of the box [-L, L)^n"),
    ("dt", "1/1000", "time step"),
    ("t_end", "1", "final time"),
    ("record_every", "10", "steps between trajectory rows"),
    ("snapshots", "false", "write a binary snapshot per trajectory row"),
    ("amplitude", "1", "peak of the Gaussian initial datum"),
    ("width", "1", "width w of exp(-|x|^2/(2w^2))"),
    ("momentum", "0", "phase gradient along the first axis"),
    ("q", "4", "time exponent (inf allowed)"),
    ("r", "3", "space exponent"),
    ("intervals", "50", "quadrature intervals of the Duhamel map (even)"),
    ("cap", "12", "Picard iteration cap (>= 3)"),
    ("sizes", "1/100, 1/1000, 1/10000", "perturbation sizes for depend"),
    ("checkpoints", "1/2, 1, 2, 4", "scattering checkpoints"),
    ("suite", "", "identities | holder | hls | sobolev | strichartz"),
    ("alpha_lo", "1/2", "scan: smallest alpha"),
    ("alpha_hi", "", "scan: largest alpha; default n - 1/2"),
    ("b_lo", "1/100", "scan: smallest b"),
    ("b_hi", "2", "scan: largest b"),
    ("steps", "100", "scan: samples per axis"),
    ("seed", "0", "random seed"),
    ("out", "out", "output directory"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub n: Option<u32>,
    pub s: Option<Rational>,
    pub alpha: Option<Rational>,
    pub b: Option<Rational>,
    pub p: Option<Rational>,
    pub lambda: Rational,
    pub grid: usize,
    pub half_width: Rational,
    pub dt: Rational,
    pub t_end: Rational,
    pub record_every: usize,
    pub snapshots: bool,
    pub amplitude: Rational,
    pub width: Rational,
    pub momentum: Rational,
    pub q: Exponent,
    pub r: Rational,
    pub intervals: usize,
    pub cap: usize,
    pub sizes: Vec<Rational>,
    pub checkpoints: Vec<Rational>,
    pub suite: Option<Suite>,
    pub alpha_lo: Rational,
    pub alpha_hi: Option<Rational>,
    pub b_lo: Rational,
    pub b_hi: Rational,
    pub steps: usize,
    pub seed: u64,
    pub out: PathBuf,
    lines: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            n: None,
            s: None,
            alpha: None,
            b: None,
            p: None,
            lambda: int(1),
            grid: 32,
            half_width: int(8),
            dt: rat(1, 1000),
            t_end: int(1),
            record_every: 10,
            snapshots: false,
            amplitude: int(1),
            width: int(1),
            momentum: int(0),
            q: Exponent::Finite(int(4)),
            r: int(3),
            intervals: 50,
            cap: 12,
            sizes: vec![rat(1, 100), rat(1, 1000), rat(1, 10000)],
            checkpoints: vec![rat(1, 2), int(1), int(2), int(4)],
            suite: None,
            alpha_lo: rat(1, 2),
            alpha_hi: None,
            b_lo: rat(1, 100),
            b_hi: int(2),
            steps: 100,
            seed: 0,
            out: PathBuf::from("out"),
            lines: 0,
        }
    }
}

fn rational(value: &str, line: usize) -> Result<Rational, CliError> {
    parse_rational(value).map_err(|_| CliError::config(line, format!("malformed rational `{value}`")))
}

fn positive(value: &str, line: usize) -> Result<Rational, CliError> {
    let v = rational(value, line)?;
    if !v.is_positive() {
        return Err(CliError::config(line, format!("`{value}` must be positive")));
    }
    Ok(v)
}

fn count(value: &str, line: usize) -> Result<usize, CliError> {
    value
        .parse()
        .map_err(|_| CliError::config(line, format!("expected a non-negative integer, got `{value}`")))
}

fn list(value: &str, line: usize) -> Result<Vec<Rational>, CliError> {
    value.split(',').map(|v| positive(v.trim(), line)).collect()
}

impl RunConfig {
    /// Applies one `key = value` pair; `line` is 0 for command-line flags.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "command" => {
                self.command = Some(
                    Command::parse(value)
                        .ok_or_else(|| CliError::config(line, format!("unknown command `{value}`")))?,
                )
            }
            "n" => {
                let n: u32 = value
                    .parse()
                    .map_err(|_| CliError::config(line, format!("dimension must be an integer, got `{value}`")))?;
                self.n = Some(n);
            }
            "s" => self.s = Some(rational(value, line)?),
            "alpha" => self.alpha = Some(rational(value, line)?),
            "b" => self.b = Some(rational(value, line)?),
            "p" => self.p = Some(rational(value, line)?),
            "lambda" => {
                let v = rational(value, line)?;
                if !(v.is_zero() || v.abs() == int(1)) {
                    return Err(CliError::config(line, format!("lambda must be -1, 0 or 1, got `{value}`")));
                }
                self.lambda = v;
            }
            "grid" => self.grid = count(value, line)?,
            "box" => self.half_width = positive(value, line)?,
            "dt" => self.dt = positive(value, line)?,
            "t_end" => self.t_end = positive(value, line)?,
            "record_every" => self.record_every = count(value, line)?.max(1),
            "snapshots" => {
                self.snapshots = match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => return Err(CliError::config(line, format!("expected true or false, got `{value}`"))),
                }
            }
            "amplitude" => self.amplitude = positive(value, line)?,
            "width" => self.width = positive(value, line)?,
            "momentum" => self.momentum = rational(value, line)?,
            "q" => {
                self.q = if value == "inf" {
                    Exponent::Infinite
                } else {
                    Exponent::Finite(positive(value, line)?)
                }
            }
            "r" => self.r = positive(value, line)?,
            "intervals" => self.intervals = count(value, line)?,
            "cap" => self.cap = count(value, line)?,
            "sizes" => self.sizes = list(value, line)?,
            "checkpoints" => self.checkpoints = list(value, line)?,
            "suite" => {
                self.suite = Some(
                    Suite::ALL
                        .into_iter()
                        .find(|s| s.name() == value)
                        .ok_or_else(|| CliError::config(line, format!("unknown suite `{value}`")))?,
                )
            }
            "alpha_lo" => self.alpha_lo = rational(value, line)?,
            "alpha_hi" => self.alpha_hi = Some(rational(value, line)?),
            "b_lo" => self.b_lo = rational(value, line)?,
            "b_hi" => self.b_hi = rational(value, line)?,
            "steps" => self.steps = count(value, line)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| CliError::config(line, format!("seed must be a u64, got `{value}`")))?
            }
            "out" => self.out = PathBuf::from(value),
            _ => return Err(CliError::config(line, format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Checks that `command` has every key it needs.
    pub fn require(&self, command: Command) -> Result<(), CliError> {
        let end = self.lines + 1;
        for &key in command.required() {
            let present = match key {
                "n" => self.n.is_some(),
                "s" => self.s.is_some(),
                "alpha" => self.alpha.is_some(),
                "b" => self.b.is_some(),
                "suite" => self.suite.is_some(),
                _ => true,
            };
            if !present {
                return Err(CliError::config(
                    end,
                    format!("missing required key `{key}` for {}", command.name()),
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn f64_of(x: &Rational) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }
}

/// Parses flat `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| CliError::config(line, format!("expected `key = value`, got `{body}`")))?;
        cfg.set(key.trim(), value, line)?;
    }
    cfg.lines = last;
    Ok(cfg)
}

impl fmt::Display for RunConfig {
    /// Canonical rendering: every set key with its effective value, in table order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: &Option<Rational>| v.as_ref().map_or(String::new(), |x| x.to_string());
        let join = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let entries: [(&str, String); 30] = [
            ("command", self.command.map_or(String::new(), |c| c.name().into())),
            ("n", self.n.map_or(String::new(), |n| n.to_string())),
            ("s", opt(&self.s)),
            ("alpha", opt(&self.alpha)),
            ("b", opt(&self.b)),
            ("p", opt(&self.p)),
            ("lambda", self.lambda.to_string()),
            ("grid", self.grid.to_string()),
            ("box", self.half_width.to_string()),
            ("dt", self.dt.to_string()),
            ("t_end", self.t_end.to_string()),
            ("record_every", self.record_every.to_string()),
            ("snapshots", self.snapshots.to_string()),
            ("amplitude", self.amplitude.to_string()),
            ("width", self.width.to_string()),
            ("momentum", self.momentum.to_string()),
            ("q", self.q.to_string()),
            ("r", self.r.to_string()),
            ("intervals", self.intervals.to_string()),
            ("cap", self.cap.to_string()),
            ("sizes", join(&self.sizes)),
            ("checkpoints", join(&self.checkpoints)),
            ("suite", self.suite.map_or(String::new(), |s| s.name().into())),
            ("alpha_lo", self.alpha_lo.to_string()),
            ("alpha_hi", opt(&self.alpha_hi)),
            ("b_lo", self.b_lo.to_string()),
            ("b_hi", self.b_hi.to_string()),
            ("steps", self.steps.to_string()),
            ("seed", self.seed.to_string()),
            ("out", self.out.display().to_string()),
        ];
        for (k, v) in entries.iter().filter(|(_, v)| !v.is_empty()) {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
