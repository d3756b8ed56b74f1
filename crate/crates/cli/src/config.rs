//! Command-line configuration and tolerance overrides.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    DemoContour,
    DemoSurface,
    DemoClifford,
    MeasureDiagnose,
    PotentialSweep,
    PlanesCheck,
    FixtureGen,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::DemoContour,
        Command::DemoSurface,
        Command::DemoClifford,
        Command::MeasureDiagnose,
        Command::PotentialSweep,
        Command::PlanesCheck,
        Command::FixtureGen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::DemoContour => "demo-contour",
            Command::DemoSurface => "demo-surface",
            Command::DemoClifford => "demo-clifford",
            Command::MeasureDiagnose => "measure-diagnose",
            Command::PotentialSweep => "potential-sweep",
            Command::PlanesCheck => "planes-check",
            Command::FixtureGen => "fixture-gen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureKind {
    /// Equally spaced points on the unit segment.
    Line,
    Grid,
    Disc,
    Lipschitz,
    Cantor,
    Koch,
    Sphere,
}

impl FixtureKind {
    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::Line => "line",
            FixtureKind::Grid => "grid",
            FixtureKind::Disc => "disc",
            FixtureKind::Lipschitz => "lipschitz",
            FixtureKind::Cantor => "cantor",
            FixtureKind::Koch => "koch",
            FixtureKind::Sphere => "sphere",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cauchylab", version, about = "Reproducible checks for Cauchy-type integrals, Clifford analysis and singular-integral potentials")]
struct Args {
    /// Suite to run.
    #[arg(long = "cmd", value_enum)]
    cmd: Command,
    /// Input file: point-cloud CSV, contour/surface/plane JSON.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Report (or fixture) destination; standard output when absent.
    #[arg(long = "out")]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum)]
    fixture: Option<FixtureKind>,
    /// Recursion depth for cantor/koch, subdivision level for sphere.
    #[arg(long)]
    depth: Option<usize>,
    /// Lattice spacing for line/grid/disc/lipschitz.
    #[arg(long)]
    spacing: Option<f64>,
    /// Lipschitz constant of the graph fixture.
    #[arg(long = "lip-const")]
    lip_const: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub fixture: Option<FixtureKind>,
    pub depth: Option<usize>,
    pub spacing: Option<f64>,
    pub lip_const: Option<f64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            output: None,
            seed: 1,
            fixture: None,
            depth: None,
            spacing: None,
            lip_const: None,
            tolerances: BTreeMap::new(),
        }
    }

    /// Parses a full argument list (program name first). `--tol.<name>=<val>`
    /// arguments are pulled out before the remaining flags go to clap.
    pub fn from_args<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString>,
    {
        let mut rest = Vec::new();
        let mut tolerances = BTreeMap::new();
        for arg in args {
            let arg: OsString = arg.into();
            match arg.to_str().and_then(|s| s.strip_prefix("--tol.")) {
                Some(spec) => {
                    let (name, value) = spec
                        .split_once('=')
                        .ok_or_else(|| CliError::Usage(format!("expected --tol.<name>=<value>, got --tol.{spec}")))?;
                    let value: f64 = value
                        .parse()
                        .map_err(|_| CliError::Usage(format!("tolerance `{name}`: `{value}` is not a number")))?;
                    if name.is_empty() || !(value >= 0.0) {
                        return Err(CliError::Usage(format!("tolerance `{name}` must be a named non-negative number")));
                    }
                    tolerances.insert(name.to_string(), value);
                }
                None => rest.push(arg),
            }
        }
        let args = Args::try_parse_from(rest).map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(s) = args.spacing {
            if !(s > 0.0 && s < 1.0) {
                return Err(CliError::Usage(format!("--spacing must lie in (0, 1), got {s}")));
            }
        }
        if let Some(l) = args.lip_const {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(CliError::Usage(format!("--lip-const must be a non-negative number, got {l}")));
            }
        }
        Ok(Self {
            command: args.cmd,
            input: args.input,
            output: args.output,
            seed: args.seed,
            fixture: args.fixture,
            depth: args.depth,
            spacing: args.spacing,
            lip_const: args.lip_const,
            tolerances,
        })
    }
}

/// Default tolerances with user overrides; records which names were asked
/// for so that misspelled overrides can be reported.
#[derive(Debug)]
pub struct Tolerances {
    overrides: BTreeMap<String, f64>,
    used: RefCell<BTreeSet<String>>,
}

impl Tolerances {
    pub fn new(overrides: &BTreeMap<String, f64>) -> Self {
        Self {
            overrides: overrides.clone(),
            used: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn get(&self, name: &str, default: f64) -> f64 {
        self.used.borrow_mut().insert(name.to_string());
        self.overrides.get(name).copied().unwrap_or(default)
    }

    pub fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.overrides.keys().filter(|k| !used.contains(*k)).cloned().collect()
    }
}
