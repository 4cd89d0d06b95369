//! Reproducible scenario runs behind the `fracphase` binary: figure
//! traces, quantization and dynamical-phase audits, and single
//! evolutions. Every run writes flat files and returns a [`RunReport`]
//! whose checks decide the exit status.

mod runs;

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

pub use runs::{run, run_audit_quantization, run_dyn_vanishing, run_evolve, run_fig1, run_fig2, Fig2Variant};

use crate::evolution::{EvolutionError, MIN_SAMPLES};
use crate::sud::{check_dim, max_concurrence};
use crate::topology::TopologyError;

pub const FIG1_CONCURRENCES: [f64; 5] = [0.0, 0.4, 0.8, 0.95, 1.0];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("concurrence {concurrence} outside [0, {max}] for d = {d}")]
    BadConcurrence { concurrence: f64, d: usize, max: f64 },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

impl From<crate::qstate::StateError> for ScenarioError {
    fn from(e: crate::qstate::StateError) -> Self {
        Self::Evolution(e.into())
    }
}

impl From<crate::sud::SudError> for ScenarioError {
    fn from(e: crate::sud::SudError) -> Self {
        Self::Evolution(e.into())
    }
}

impl ScenarioError {
    /// Whether the error stems from the request rather than the run.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Self::UnknownScenario(_)
                | Self::UnknownKey(_)
                | Self::BadValue { .. }
                | Self::BadConcurrence { .. }
                | Self::Invalid(_)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioName {
    Fig1,
    Fig2a,
    Fig2b,
    AuditQuantization,
    DynVanishing,
    Evolve,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 6] =
        [Self::Fig1, Self::Fig2a, Self::Fig2b, Self::AuditQuantization, Self::DynVanishing, Self::Evolve];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2a => "fig2a",
            Self::Fig2b => "fig2b",
            Self::AuditQuantization => "audit-quantization",
            Self::DynVanishing => "dyn-vanishing",
            Self::Evolve => "evolve",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| ScenarioError::UnknownScenario(s.into()))
    }
}

/// Path family for the `evolve` scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Vn,
    Euler,
    Piecewise,
    Random,
}

impl FromStr for PathKind {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vn" => Ok(Self::Vn),
            "euler" => Ok(Self::Euler),
            "piecewise" => Ok(Self::Piecewise),
            "random" => Ok(Self::Random),
            _ => Err(ScenarioError::BadValue { key: "path".into(), value: s.into() }),
        }
    }
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Vn => "vn",
            Self::Euler => "euler",
            Self::Piecewise => "piecewise",
            Self::Random => "random",
        })
    }
}

/// All run parameters. Every field can be set from a flat `key=value`
/// file; see [`Scenario::set`] for the keys.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub dims: Vec<usize>,
    pub concurrences: Vec<f64>,
    pub theta: f64,
    pub phi: f64,
    pub zeta: f64,
    pub chi_start: f64,
    pub chi_end: f64,
    pub samples: usize,
    pub seed: u64,
    pub trials: usize,
    pub cycles: usize,
    pub path: PathKind,
    pub out: PathBuf,
}

impl Scenario {
    pub fn new(name: ScenarioName) -> Self {
        let (dims, concurrences, samples, trials) = match name {
            ScenarioName::Fig1 => (vec![2], FIG1_CONCURRENCES.to_vec(), 2001, 1),
            ScenarioName::Fig2a | ScenarioName::Fig2b => (vec![3], vec![max_concurrence(3)], 2001, 1),
            ScenarioName::AuditQuantization => (vec![2, 3, 5], vec![], 101, 100),
            ScenarioName::DynVanishing => (vec![2, 3, 4], vec![], 401, 50),
            ScenarioName::Evolve => (vec![3], vec![max_concurrence(3)], 2001, 1),
        };
        Self {
            name,
            dims,
            concurrences,
            theta: 0.0,
            phi: 0.0,
            zeta: 2.0 * PI,
            chi_start: 0.0,
            chi_end: 2.0 * PI,
            samples,
            seed: 0,
            trials,
            cycles: 2,
            path: PathKind::Vn,
            out: PathBuf::from("out"),
        }
    }

    /// Sets one field from its textual form.
    ///
    /// Keys: `d` (comma list), `concurrence` (comma list), `theta`, `phi`,
    /// `zeta`, `chi_start`, `chi_end`, `samples`, `seed`, `trials`,
    /// `cycles`, `path`, `out`. Angles accept a `pi` suffix (`2pi`, `0.5pi`).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ScenarioError> {
        let bad = || ScenarioError::BadValue { key: key.into(), value: value.into() };
        let value = value.trim();
        match key {
            "d" => self.dims = parse_list(value).map_err(|_| bad())?,
            "concurrence" => self.concurrences = parse_list(value).map_err(|_| bad())?,
            "theta" => self.theta = parse_angle(value).ok_or_else(bad)?,
            "phi" => self.phi = parse_angle(value).ok_or_else(bad)?,
            "zeta" => self.zeta = parse_angle(value).ok_or_else(bad)?,
            "chi_start" => self.chi_start = parse_angle(value).ok_or_else(bad)?,
            "chi_end" => self.chi_end = parse_angle(value).ok_or_else(bad)?,
            "samples" => self.samples = value.parse().map_err(|_| bad())?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "trials" => self.trials = value.parse().map_err(|_| bad())?,
            "cycles" => self.cycles = value.parse().map_err(|_| bad())?,
            "path" => self.path = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            _ => return Err(ScenarioError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Applies a flat `key=value` file. Blank lines and `#` comments are
    /// skipped; a `name` key must match this scenario if present.
    pub fn apply_config(&mut self, text: &str) -> Result<(), ScenarioError> {
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ScenarioError::BadValue { key: "line".into(), value: line.into() })?;
            let key = key.trim();
            if key == "name" {
                if value.trim().parse::<ScenarioName>()? != self.name {
                    return Err(ScenarioError::Invalid(format!("config is for {}", value.trim())));
                }
                continue;
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn load_config(&mut self, path: &Path) -> Result<(), ScenarioError> {
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.into(), source })?;
        self.apply_config(&text)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.samples < MIN_SAMPLES || self.samples.is_multiple_of(2) {
            return Err(ScenarioError::Invalid(format!(
                "samples must be odd and >= {MIN_SAMPLES}, got {}",
                self.samples
            )));
        }
        if self.dims.is_empty() {
            return Err(ScenarioError::Invalid("empty dimension list".into()));
        }
        for &d in &self.dims {
            check_dim(d).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        }
        let fixed = match self.name {
            ScenarioName::Fig1 => Some(2),
            ScenarioName::Fig2a | ScenarioName::Fig2b => Some(3),
            _ => None,
        };
        if let Some(d) = fixed {
            if self.dims != [d] {
                return Err(ScenarioError::Invalid(format!("{} runs at d = {d}", self.name)));
            }
        }
        let d0 = self.dims[0];
        for &c in &self.concurrences {
            let max = max_concurrence(d0);
            if !(0.0..=max + 1e-12).contains(&c) {
                return Err(ScenarioError::BadConcurrence { concurrence: c, d: d0, max });
            }
        }
        if matches!(self.name, ScenarioName::Fig1 | ScenarioName::Evolve) && self.concurrences.is_empty() {
            return Err(ScenarioError::Invalid("no concurrence given".into()));
        }
        if self.trials == 0 || self.cycles == 0 {
            return Err(ScenarioError::Invalid("trials and cycles must be positive".into()));
        }
        if self.name == ScenarioName::Evolve {
            match (self.path, d0) {
                (PathKind::Euler, 2) | (PathKind::Piecewise, 3) | (PathKind::Vn, _) | (PathKind::Random, _) => {}
                (p, d) => return Err(ScenarioError::Invalid(format!("path {p} is not defined at d = {d}"))),
            }
        }
        Ok(())
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, T::Err> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(str::parse).collect()
}

/// A real number with an optional `pi` factor: `1.5`, `2pi`, `-0.5pi`, `pi`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.strip_suffix("pi") {
        Some("") => Some(PI),
        Some("-") => Some(-PI),
        Some(k) => k.trim_end_matches('*').parse::<f64>().ok().map(|k| k * PI),
        None => s.parse().ok(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of one scenario: written files, report body and checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Report body followed by one `PASS`/`FAIL` line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        out
    }
}

pub(crate) fn write_file(report: &mut RunReport, dir: &Path, name: &str, body: &str) -> Result<(), ScenarioError> {
    fs::create_dir_all(dir).map_err(|source| ScenarioError::Io { path: dir.into(), source })?;
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| ScenarioError::Io { path: path.clone(), source })?;
    report.files.push(path);
    Ok(())
}
