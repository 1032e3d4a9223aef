//! Run configuration: defaults, JSON config files, flag overrides.
//!
//! Precedence is defaults < config file < flags.  The fully resolved
//! [`RunConfig`] is echoed into every report header as one JSON line, and
//! feeding that line back through `--config` reproduces the run byte for
//! byte: every scalar is serialized in shortest round-trip form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraclap_core::laplace::Side;
use fraclap_core::params::{OperatorParams, TestFunction};
use fraclap_core::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// Complex scalar in the CLI's string form: `1.5`, `-2i`, `0.3-0.25i`.
///
/// Real and imaginary parts are ordinary f64 literals (scientific notation
/// allowed); the imaginary part, if present, comes last and ends in `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx(pub Complex64);

impl FromStr for Cx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let bad = || format!("invalid complex number {s:?} (expected forms: 1.5, -2i, 0.3-0.25i)");
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix(['i', 'I']) else {
            let re: f64 = t.parse().map_err(|_| bad())?;
            return Ok(Cx(Complex64::new(re, 0.0)));
        };
        // Split before the imaginary part: the last sign that neither leads
        // the string nor follows an exponent marker.
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, ch)| {
                (ch == '+' || ch == '-')
                    && i > 0
                    && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
            })
            .map(|(i, _)| i);
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re: f64 = if re_str.is_empty() {
            0.0
        } else {
            re_str.parse().map_err(|_| bad())?
        };
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => im_str.parse().map_err(|_| bad())?,
        };
        Ok(Cx(Complex64::new(re, im)))
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if re == 0.0 {
            write!(f, "{im}i")
        } else {
            write!(f, "{re}{im:+}i")
        }
    }
}

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SideArg {
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "J", alias = "j")]
    J,
}

impl SideArg {
    pub fn side(self) -> Side {
        match self {
            SideArg::I => Side::Lower,
            SideArg::J => Side::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum WhichArg {
    #[value(name = "KI", alias = "ki")]
    KI,
    #[value(name = "KJ", alias = "kj")]
    KJ,
}

impl WhichArg {
    /// Each kernel inherits the admissibility condition of its own theorem,
    /// so probes and index reports route through the matching side.
    pub fn side(self) -> Side {
        match self {
            WhichArg::KI => Side::Lower,
            WhichArg::KJ => Side::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    EvalPower,
    EvalOperator,
    Kernel,
    Verify,
    Indices,
    Asymptotics,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::EvalPower => "eval-power",
            CommandKind::EvalOperator => "eval-operator",
            CommandKind::Kernel => "kernel",
            CommandKind::Verify => "verify",
            CommandKind::Indices => "indices",
            CommandKind::Asymptotics => "asymptotics",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fraclap", version, about = "Generalized fractional integral operators: evaluation, Laplace kernels, and transform-identity verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form image of the power function x^λ under the chosen operator, on an x-grid
    EvalPower(Overrides),
    /// Quadrature evaluation of the chosen operator applied to φ(x) = C x^p e^{-qx}, on an x-grid
    EvalOperator(Overrides),
    /// Laplace kernel K_I or K_J at fixed s, on an x-grid
    Kernel(Overrides),
    /// Verify the transform identity L[x^λ (op φ)](s) = ∫ K(s,x) φ(x) dx for one query
    Verify(Overrides),
    /// Convergence indices of the kernel's Mellin-Barnes integrand, one row per series term
    Indices(Overrides),
    /// Fitted kernel decay rates at 0+ and ∞ against their predicted values
    Asymptotics(Overrides),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Overrides) {
        match self {
            Command::EvalPower(o) => (CommandKind::EvalPower, o),
            Command::EvalOperator(o) => (CommandKind::EvalOperator, o),
            Command::Kernel(o) => (CommandKind::Kernel, o),
            Command::Verify(o) => (CommandKind::Verify, o),
            Command::Indices(o) => (CommandKind::Indices, o),
            Command::Asymptotics(o) => (CommandKind::Asymptotics, o),
        }
    }
}

/// Per-field overrides, shared by the flag set and the JSON config format.
/// Unset fields fall back to the config file and then to the defaults.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    /// JSON config file; flags given alongside override its fields
    #[arg(long, value_name = "path")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Accepted from config files so a report header can be replayed as-is;
    /// must then match the invoked subcommand.
    #[arg(skip)]
    pub command: Option<String>,

    /// Operator order μ (complex, ℜμ > 0)
    #[arg(long)]
    pub mu: Option<Cx>,
    /// Upper numerator parameter a
    #[arg(long)]
    pub a: Option<Cx>,
    /// Upper numerator parameter b
    #[arg(long)]
    pub b: Option<Cx>,
    /// Kernel shift h ≥ 0
    #[arg(long)]
    pub h: Option<f64>,
    /// Kernel power ν > 0
    #[arg(long)]
    pub nu: Option<f64>,
    /// Outer weight exponent δ
    #[arg(long)]
    pub delta: Option<Cx>,
    /// Denominator shifts f_1..f_r, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub f: Option<Vec<Cx>>,
    /// Shift multiplicities m_1..m_r, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u32>>,
    /// Power-weight exponent λ
    #[arg(long)]
    pub lambda: Option<Cx>,
    /// Laplace variable s (ℜs > 0)
    #[arg(long)]
    pub s: Option<Cx>,
    /// Operator side: I (integral over (0,x)) or J (over (x,∞))
    #[arg(long)]
    pub side: Option<SideArg>,
    /// Kernel selector for `kernel`, `indices`, `asymptotics`
    #[arg(long)]
    pub which: Option<WhichArg>,
    /// First grid point (> 0)
    #[arg(long)]
    pub x_start: Option<f64>,
    /// Last grid point (> 0)
    #[arg(long)]
    pub x_stop: Option<f64>,
    /// Number of grid points (≥ 1)
    #[arg(long)]
    pub x_count: Option<u32>,
    /// Grid spacing: linear or geometric
    #[arg(long)]
    pub x_spacing: Option<Spacing>,
    /// Test-function scale C
    #[arg(long)]
    pub phi_c: Option<Cx>,
    /// Test-function power p
    #[arg(long)]
    pub phi_p: Option<Cx>,
    /// Test-function decay q ≥ 0
    #[arg(long)]
    pub phi_q: Option<f64>,
    /// Relative tolerance for quadrature-backed commands
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized sweeps (reserved; echoed into reports)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the CSV report here instead of stdout
    #[arg(long, value_name = "path")]
    pub out: Option<PathBuf>,
}

/// A fully resolved run: what gets executed and what the report header echoes.
/// The output path is deliberately not part of it, so the same computation
/// written to two places produces identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub mu: Cx,
    pub a: Cx,
    pub b: Cx,
    pub h: f64,
    pub nu: f64,
    pub delta: Cx,
    pub f: Vec<Cx>,
    pub m: Vec<u32>,
    pub lambda: Cx,
    pub s: Cx,
    pub side: SideArg,
    pub which: WhichArg,
    pub x_start: f64,
    pub x_stop: f64,
    pub x_count: u32,
    pub x_spacing: Spacing,
    pub phi_c: Cx,
    pub phi_p: Cx,
    pub phi_q: f64,
    pub tol: f64,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults describe one admissible reference query: the order-zero
    /// parameter set (μ=0.8, a=0.1, b=0.3, h=0.2, ν=1, δ=0.5) with weight
    /// λ=0.4, φ(x) = x^{1/2} e^{-x}, and s=2.  λ=0.4 keeps both side
    /// conditions satisfied with slack, so every subcommand runs as-is.
    fn defaults(command: CommandKind) -> Self {
        RunConfig {
            command,
            mu: Cx(Complex64::new(0.8, 0.0)),
            a: Cx(Complex64::new(0.1, 0.0)),
            b: Cx(Complex64::new(0.3, 0.0)),
            h: 0.2,
            nu: 1.0,
            delta: Cx(Complex64::new(0.5, 0.0)),
            f: Vec::new(),
            m: Vec::new(),
            lambda: Cx(Complex64::new(0.4, 0.0)),
            s: Cx(Complex64::new(2.0, 0.0)),
            side: SideArg::I,
            which: WhichArg::KI,
            x_start: 0.5,
            x_stop: 2.0,
            x_count: 4,
            x_spacing: Spacing::Linear,
            phi_c: Cx(Complex64::new(1.0, 0.0)),
            phi_p: Cx(Complex64::new(0.5, 0.0)),
            phi_q: 1.0,
            tol: 1e-8,
            seed: 42,
        }
    }

    fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &o.$field { self.$field = v.clone(); })*
            };
        }
        take!(mu, a, b, h, nu, delta, f, m, lambda, s, side, which);
        take!(x_start, x_stop, x_count, x_spacing, phi_c, phi_p, phi_q, tol, seed);
    }

    /// Re-validates everything a run depends on; every message names the
    /// offending field.
    pub fn validate(&self) -> Result<(), CliError> {
        self.operator_params()?;
        self.phi()?;
        if self.x_count < 1 {
            return Err(CliError::Validation(format!(
                "x_count must be at least 1, got {}",
                self.x_count
            )));
        }
        if !(self.x_start > 0.0) || !(self.x_stop > 0.0) {
            return Err(CliError::Validation(format!(
                "x_start and x_stop must be positive (operators and kernels live on x > 0), got {} and {}",
                self.x_start, self.x_stop
            )));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(CliError::Validation(format!(
                "tol must be a positive finite number, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub fn operator_params(&self) -> Result<OperatorParams, CliError> {
        if self.f.len() != self.m.len() {
            return Err(CliError::Validation(format!(
                "f and m must have the same length, got {} shifts and {} multiplicities",
                self.f.len(),
                self.m.len()
            )));
        }
        OperatorParams::new(
            self.mu.0,
            self.a.0,
            self.b.0,
            self.h,
            self.nu,
            self.delta.0,
            self.f.iter().map(|c| c.0).collect(),
            self.m.clone(),
        )
        .map_err(CliError::validation)
    }

    pub fn phi(&self) -> Result<TestFunction, CliError> {
        TestFunction::new(self.phi_c.0, self.phi_p.0, self.phi_q).map_err(CliError::validation)
    }

    /// Grid points in index order.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.x_count as usize;
        if n == 1 {
            return vec![self.x_start];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.x_spacing {
                    Spacing::Linear => self.x_start + (self.x_stop - self.x_start) * t,
                    Spacing::Geometric => {
                        (self.x_start.ln() + (self.x_stop.ln() - self.x_start.ln()) * t).exp()
                    }
                }
            })
            .collect()
    }
}

/// Defaults, then the config file, then the flags; then validation.
/// Returns the run description and where to write the report.
pub fn resolve(kind: CommandKind, flags: &Overrides) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let mut cfg = RunConfig::defaults(kind);
    let mut out = None;
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("config {}: {e}", path.display()))
        })?;
        let file: Overrides = serde_json::from_str(&text).map_err(|e| {
            CliError::Validation(format!("config {}: {e}", path.display()))
        })?;
        if let Some(cmd) = &file.command {
            if cmd != kind.name() {
                return Err(CliError::Validation(format!(
                    "config {} is for command {cmd}, but {} was invoked",
                    path.display(),
                    kind.name()
                )));
            }
        }
        cfg.apply(&file);
        out = file.out;
    }
    cfg.apply(flags);
    if flags.out.is_some() {
        out = flags.out.clone();
    }
    cfg.validate()?;
    Ok((cfg, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Complex64 {
        s.parse::<Cx>().unwrap().0
    }

    #[test]
    fn complex_forms_parse() {
        assert_eq!(p("1.5"), Complex64::new(1.5, 0.0));
        assert_eq!(p("-2"), Complex64::new(-2.0, 0.0));
        assert_eq!(p("3i"), Complex64::new(0.0, 3.0));
        assert_eq!(p("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(p("i"), Complex64::new(0.0, 1.0));
        assert_eq!(p("0.3-0.25i"), Complex64::new(0.3, -0.25));
        assert_eq!(p("1e-3+2.5e2i"), Complex64::new(1e-3, 250.0));
        assert_eq!(p("-1.5E+1-2E-2i"), Complex64::new(-15.0, -0.02));
        assert!("".parse::<Cx>().is_err());
        assert!("1+2".parse::<Cx>().is_err());
        assert!("abc".parse::<Cx>().is_err());
        assert!("1i+2".parse::<Cx>().is_err());
    }

    #[test]
    fn complex_display_round_trips() {
        for z in [
            Complex64::new(0.1, 0.0),
            Complex64::new(0.0, -2.7),
            Complex64::new(1.0 / 3.0, -1e-17),
            Complex64::new(-7.25e80, 3.5e-200),
            Complex64::new(0.0, 0.0),
        ] {
            let shown = Cx(z).to_string();
            assert_eq!(p(&shown), z, "{shown}");
        }
    }

    #[test]
    fn config_json_round_trips() {
        let cfg = RunConfig::defaults(CommandKind::Verify);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
        // And back through the Overrides (partial) format.
        let partial: Overrides = serde_json::from_str(&json).unwrap();
        let mut rebuilt = RunConfig::defaults(CommandKind::Verify);
        rebuilt.apply(&partial);
        assert_eq!(rebuilt, cfg);
    }

    #[test]
    fn flags_beat_file_which_beats_defaults() {
        let mut cfg = RunConfig::defaults(CommandKind::Kernel);
        let file: Overrides =
            serde_json::from_str(r#"{"lambda": "0.1", "x_count": 7}"#).unwrap();
        cfg.apply(&file);
        let flags = Overrides {
            lambda: Some(Cx(Complex64::new(0.25, 0.0))),
            ..Overrides::default()
        };
        cfg.apply(&flags);
        assert_eq!(cfg.lambda.0, Complex64::new(0.25, 0.0));
        assert_eq!(cfg.x_count, 7);
        assert_eq!(cfg.s.0, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn grids_are_monotone_and_sized() {
        let mut cfg = RunConfig::defaults(CommandKind::Kernel);
        cfg.x_start = 0.5;
        cfg.x_stop = 8.0;
        cfg.x_count = 5;
        cfg.x_spacing = Spacing::Geometric;
        let g = cfg.grid();
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.5).abs() < 1e-15);
        assert!((g[4] - 8.0).abs() < 1e-12);
        assert!((g[2] - 2.0).abs() < 1e-12);
        cfg.x_count = 1;
        assert_eq!(cfg.grid(), vec![0.5]);
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let r: Result<Overrides, _> = serde_json::from_str(r#"{"lambdaa": "1"}"#);
        assert!(r.is_err());
    }
}
