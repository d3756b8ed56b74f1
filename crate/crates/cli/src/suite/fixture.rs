use std::f64::consts::PI;

use cauchylab::fixtures::{self, PointCloud};
use cauchylab::measures::DiscreteMeasure;
use cauchylab::numeric::fit_slope;

use super::{pair, Ctx};
use crate::config::{FixtureKind, RunConfig};
use crate::error::CliError;
use crate::io::{pointcloud_csv, surface_json};
use crate::report::Comparison;

/// Which suite a generated cloud is for; sets the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudPurpose {
    Export,
    Measure,
    Potential,
}

fn count_from_spacing(spacing: f64) -> usize {
    (1.0 / spacing).round() as usize
}

/// Builds a point-cloud fixture from the configuration. In potential
/// sweeps `cantor` is the planar Cantor dust, elsewhere the linear set.
pub fn build_cloud(cfg: &RunConfig, kind: FixtureKind, purpose: CloudPurpose) -> Result<PointCloud, CliError> {
    let cloud = match kind {
        FixtureKind::Line => fixtures::segment(count_from_spacing(cfg.spacing.unwrap_or(1.0 / 256.0)) + 1)?,
        FixtureKind::Grid => {
            let default = if purpose == CloudPurpose::Export { 1.0 / 32.0 } else { 1.0 / 64.0 };
            fixtures::square_grid(count_from_spacing(cfg.spacing.unwrap_or(default)))?
        }
        FixtureKind::Disc => {
            let default = if purpose == CloudPurpose::Potential { 1.0 / 128.0 } else { 1.0 / 64.0 };
            fixtures::disc(cfg.spacing.unwrap_or(default), 1.0)?
        }
        FixtureKind::Lipschitz => {
            let default = if purpose == CloudPurpose::Potential { 1.0 / 64.0 } else { 1.0 / 32.0 };
            fixtures::lipschitz_graph(count_from_spacing(cfg.spacing.unwrap_or(default)), cfg.lip_const.unwrap_or(1.0))?
        }
        FixtureKind::Cantor => match purpose {
            CloudPurpose::Potential => fixtures::cantor(cfg.depth.unwrap_or(6), 2)?,
            CloudPurpose::Measure => fixtures::cantor(cfg.depth.unwrap_or(15), 1)?,
            CloudPurpose::Export => fixtures::cantor(cfg.depth.unwrap_or(8), 1)?,
        },
        FixtureKind::Koch => fixtures::koch(cfg.depth.unwrap_or(6))?,
        FixtureKind::Sphere => {
            return Err(CliError::Usage("the sphere fixture is a surface, not a point cloud".into()));
        }
    };
    Ok(cloud)
}

/// Box-counting style dimension estimate: slope of `log μ(B̄(x,t))`
/// (averaged over up to 64 atoms) against `log t` over
/// `[4 · median spacing, diam / 4]`.
pub fn fit_dimension(mu: &DiscreteMeasure) -> Result<f64, CliError> {
    let lo = 4.0 * mu.median_spacing();
    let hi = 0.25 * mu.diameter();
    if !(lo > 0.0 && hi > 2.0 * lo) {
        return Err(CliError::Validation("too few atoms to estimate a dimension".into()));
    }
    let stride = (mu.len() / 64).max(1);
    let centers: Vec<usize> = (0..mu.len()).step_by(stride).collect();
    let scales = 16;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for s in 0..scales {
        let t = lo * (hi / lo).powf(s as f64 / (scales - 1) as f64);
        let mean = centers.iter().map(|&i| mu.ball_mass(mu.point(i), t, true)).sum::<f64>() / centers.len() as f64;
        xs.push(t.ln());
        ys.push(mean.ln());
    }
    Ok(fit_slope(&xs, &ys))
}

pub(super) fn run(ctx: &mut Ctx) -> Result<String, CliError> {
    let kind = ctx
        .cfg
        .fixture
        .ok_or_else(|| CliError::Usage("fixture-gen needs --fixture".into()))?;
    if kind == FixtureKind::Sphere {
        let subdiv = ctx.cfg.depth.unwrap_or(5);
        let sphere = fixtures::icosphere(subdiv)?;
        let facets = sphere.len() as f64;
        ctx.check(
            "fixture-count",
            "a subdivided icosahedron has 20·4^k facets",
            0.0,
            Comparison::Absolute,
            || pair(facets, 20.0 * 4f64.powi(subdiv as i32)),
        );
        return Ok(surface_json(&sphere));
    }
    let cloud = build_cloud(ctx.cfg, kind, CloudPurpose::Export)?;
    let n = cloud.len() as f64;
    let mass: f64 = cloud.weights.iter().sum();
    match kind {
        FixtureKind::Koch => {
            let d = ctx.cfg.depth.unwrap_or(6) as i32;
            ctx.check("fixture-count", "the Koch curve at depth d has 4^d + 1 vertices", 0.0, Comparison::Absolute, || {
                pair(n, 4f64.powi(d) + 1.0)
            });
        }
        FixtureKind::Cantor => {
            let d = ctx.cfg.depth.unwrap_or(8) as i32;
            ctx.check("fixture-count", "the Cantor set at depth d has 2^d intervals", 0.0, Comparison::Absolute, || {
                pair(n, 2f64.powi(d))
            });
        }
        FixtureKind::Grid | FixtureKind::Line => {
            ctx.check("fixture-mass", "the fixture weights sum to the length or area of the set", 1e-12, Comparison::Relative, || {
                let expected = if kind == FixtureKind::Line { 1.0 + cloud.spacing } else { 1.0 };
                pair(mass, expected)
            });
        }
        FixtureKind::Disc => {
            ctx.check("fixture-mass", "the disc weights sum to its area", 0.02, Comparison::Relative, || pair(mass, PI));
        }
        FixtureKind::Lipschitz => {
            let lip = ctx.cfg.lip_const.unwrap_or(1.0);
            ctx.check(
                "fixture-mass",
                "the graph weights sum to its surface area",
                1e-9,
                Comparison::Relative,
                || pair(mass, (1.0 + 1.25 * lip * lip).sqrt()),
            );
        }
        FixtureKind::Sphere => unreachable!("handled above"),
    }
    Ok(pointcloud_csv(&cloud))
}
