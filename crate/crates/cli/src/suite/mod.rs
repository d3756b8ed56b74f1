//! Demo suites: each command turns a [`RunConfig`] into a [`Report`].

pub mod clifford;
pub mod contour;
pub mod fixture;
pub mod measure;
pub mod planes;
pub mod potential;
pub mod surface;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, RunConfig, Tolerances};
use crate::error::CliError;
use crate::report::{Check, Comparison, Quantity, Report, Table};

pub use fixture::{build_cloud, fit_dimension, CloudPurpose};

/// A finished run: the report, plus the generated file for `fixture-gen`.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub artifact: Option<String>,
}

pub fn run_suite(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let tol = Tolerances::new(&cfg.tolerances);
    let mut ctx = Ctx {
        cfg,
        tol: &tol,
        report: Report::default(),
    };
    let artifact = match cfg.command {
        Command::DemoContour => contour::run(&mut ctx).map(|_| None),
        Command::DemoSurface => surface::run(&mut ctx).map(|_| None),
        Command::DemoClifford => clifford::run(&mut ctx).map(|_| None),
        Command::MeasureDiagnose => measure::run(&mut ctx).map(|_| None),
        Command::PotentialSweep => potential::run(&mut ctx).map(|_| None),
        Command::PlanesCheck => planes::run(&mut ctx).map(|_| None),
        Command::FixtureGen => fixture::run(&mut ctx).map(Some),
    }?;
    let unused = tol.unused();
    if !unused.is_empty() {
        return Err(CliError::UnusedTolerance(unused));
    }
    Ok(RunOutput {
        report: ctx.report,
        artifact,
    })
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub tol: &'a Tolerances,
    pub report: Report,
}

type Pair = (Quantity, Quantity);

impl Ctx<'_> {
    /// Evaluates one check; an error becomes a failed check carrying the
    /// message instead of aborting the suite.
    pub fn check<F>(&mut self, name: &str, anchor: &str, default_tol: f64, comparison: Comparison, eval: F)
    where
        F: FnOnce() -> Result<Pair, CliError>,
    {
        let tolerance = self.tol.get(name, default_tol);
        let check = match eval() {
            Ok((value, oracle)) => Check::new(name, anchor, value, oracle, tolerance, comparison),
            Err(e) => Check::failed(name, anchor, &e.to_string()),
        };
        self.report.checks.push(check);
    }

    pub fn table(&mut self, table: Table) {
        self.report.tables.push(table);
    }

    /// Independent deterministic stream per use site.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        rng
    }
}

pub(crate) fn pair(value: impl Into<Quantity>, oracle: impl Into<Quantity>) -> Result<Pair, CliError> {
    Ok((value.into(), oracle.into()))
}
