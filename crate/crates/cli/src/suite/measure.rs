use cauchylab::measures::{ahlfors_constants, density_ratio, menger_curvature, symmetry_defect, DiscreteMeasure};
use rand::Rng;

use super::fixture::{build_cloud, fit_dimension, CloudPurpose};
use super::{pair, Ctx};
use crate::config::FixtureKind;
use crate::error::CliError;
use crate::io::parse_pointcloud;
use crate::report::{Cell, Comparison, Table};

const SYMMETRY_RADII: [f64; 3] = [1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0];
const AHLFORS_SAMPLES: usize = 64;

/// Centres for symmetry defects: atoms at least `margin` inside the
/// bounding box along every axis the set extends in, shifted by up to half
/// a spacing per coordinate.
pub fn interior_centers(mu: &DiscreteMeasure, margin: f64, spacing: f64, count: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let m = mu.m();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for p in mu.points() {
        for k in 0..m {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let eligible: Vec<usize> = (0..mu.len())
        .filter(|&i| {
            let p = mu.point(i);
            (0..m).all(|k| hi[k] - lo[k] <= 0.0 || (p[k] - lo[k] >= margin && hi[k] - p[k] >= margin))
        })
        .collect();
    if eligible.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let p = mu.point(eligible[rng.gen_range(0..eligible.len())]);
            p.iter().map(|c| c + rng.gen_range(-0.5..=0.5) * spacing).collect()
        })
        .collect()
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let (mu, n_dim, spacing, kind) = match (&ctx.cfg.input, ctx.cfg.fixture) {
        (Some(path), _) => {
            let file = parse_pointcloud(path)?;
            let mut summary = Table::new("input", &["rows", "atoms", "merged"]);
            summary.push(vec![
                Cell::Num(file.rows as f64),
                Cell::Num(file.measure.len() as f64),
                Cell::Num(file.merged as f64),
            ]);
            ctx.table(summary);
            let n = fit_dimension(&file.measure)?;
            let s = file.measure.median_spacing();
            (file.measure, n, s, None)
        }
        (None, kind) => {
            let kind = kind.unwrap_or(FixtureKind::Grid);
            let cloud = build_cloud(ctx.cfg, kind, CloudPurpose::Measure)?;
            let n = cloud.n_dim;
            let s = cloud.spacing;
            (cloud.measure()?, n, s, Some(kind))
        }
    };

    let diam = mu.diameter();
    let ahlfors = ahlfors_constants(&mu, n_dim, AHLFORS_SAMPLES, (0.0, diam))?;
    let mut band_table = Table::new("ahlfors", &["n_dim", "c_low", "c_high", "band", "t_min", "t_max"]);
    band_table.push(
        [n_dim, ahlfors.c_low, ahlfors.c_high, ahlfors.band(), ahlfors.t_min, ahlfors.t_max]
            .map(Cell::Num)
            .to_vec(),
    );
    ctx.check(
        "ahlfors-band",
        "an Ahlfors-regular set has μ(B(x,t)) comparable to t^n at its own dimension",
        10.0,
        Comparison::AtMost,
        || pair(ahlfors.band(), 1.0),
    );
    if kind == Some(FixtureKind::Cantor) {
        ctx.check(
            "ahlfors-band-wrong-dimension",
            "at a dimension other than log2/log3 the Cantor set has no Ahlfors-regularity constant",
            100.0,
            Comparison::AtLeast,
            || {
                let wrong = ahlfors_constants(&mu, 1.0, AHLFORS_SAMPLES, (0.0, diam))?;
                band_table.push(
                    [1.0, wrong.c_low, wrong.c_high, wrong.band(), wrong.t_min, wrong.t_max]
                        .map(Cell::Num)
                        .to_vec(),
                );
                pair(wrong.band(), f64::INFINITY)
            },
        );
    }
    ctx.table(band_table);

    let mut rng = ctx.rng(4);
    let centers = interior_centers(&mu, SYMMETRY_RADII[2], spacing, 16, &mut rng);
    let mut profile = Table::new("symmetry-profile", &["radius", "mean_defect", "max_defect", "max_defect_over_spacing_ratio", "mean_density_ratio"]);
    let mut worst_scaled = 0.0f64;
    for &r in &SYMMETRY_RADII {
        let (mut sum, mut max, mut density) = (0.0f64, 0.0f64, 0.0f64);
        let mut used = 0usize;
        for c in &centers {
            if !mu.in_support(c) {
                continue;
            }
            let d = symmetry_defect(&mu, c, r)?.normalized.unwrap_or(0.0);
            sum += d;
            max = max.max(d);
            density += density_ratio(&mu, c, r, n_dim)?;
            used += 1;
        }
        let used_f = used.max(1) as f64;
        let scaled = max / (spacing / r);
        worst_scaled = worst_scaled.max(scaled);
        profile.push([r, sum / used_f, max, scaled, density / used_f].map(Cell::Num).to_vec());
    }
    ctx.table(profile);
    if matches!(kind, Some(FixtureKind::Line | FixtureKind::Grid)) {
        ctx.check(
            "symmetry-defect",
            "flat sets are symmetric: the normalized first moment over a ball is at most 2·spacing/r",
            2.0,
            Comparison::AtMost,
            || {
                if centers.is_empty() {
                    return Err(CliError::Validation("no interior centres".into()));
                }
                pair(worst_scaled, 0.0)
            },
        );
    }

    let mut curvature = Table::new("menger-curvature", &["triples", "mean", "max"]);
    let (mut total, mut max, mut count) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..256 {
        let ids: Vec<usize> = (0..3).map(|_| rng.gen_range(0..mu.len())).collect();
        if let Ok(c) = menger_curvature(mu.point(ids[0]), mu.point(ids[1]), mu.point(ids[2])) {
            total += c;
            max = max.max(c);
            count += 1;
        }
    }
    curvature.push(vec![Cell::Num(count as f64), Cell::Num(total / count.max(1) as f64), Cell::Num(max)]);
    ctx.table(curvature);
    if kind == Some(FixtureKind::Line) {
        ctx.check(
            "menger-collinear",
            "Menger curvature vanishes on collinear triples",
            1e-9,
            Comparison::AtMost,
            || pair(max, 0.0),
        );
    }
    Ok(())
}
