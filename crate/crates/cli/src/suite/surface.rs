use std::path::Path;

use cauchylab::clifford_analysis::{
    surface_cauchy_integral, surface_derivative_integral, surface_derivative_scale, DiscreteSurface, SurfaceElement,
};
use cauchylab::fixtures::{flat_patch, hemisphere, icosphere};
use cauchylab::numeric::{fit_slope, norm};
use rand::Rng;

use super::{pair, Ctx};
use crate::error::CliError;
use crate::io::parse_surface;
use crate::report::{Cell, Comparison, Table};

const ORIGIN: [f64; 3] = [0.0, 0.0, 0.0];

fn random_point(rng: &mut impl Rng, r_lo: f64, r_hi: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = norm(&v);
        if len > 1e-3 && len <= 1.0 {
            let r = rng.gen_range(r_lo..r_hi);
            return v.iter().map(|x| x * r / len).collect();
        }
    }
}

fn closure_defect(s: &DiscreteSurface) -> f64 {
    norm(&s.vector_area()) / s.total_area()
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    if let Some(path) = ctx.cfg.input.clone() {
        return from_file(ctx, &path);
    }
    let subdiv = ctx.cfg.depth.unwrap_or(5);
    let sphere = icosphere(subdiv)?;
    let kappa = surface_cauchy_integral(&sphere, &ORIGIN)?;
    let kappa_norm = kappa.norm();

    let mut rng = ctx.rng(2);
    let mut interior = vec![vec![0.3, -0.2, 0.1]];
    interior.extend((0..8).map(|_| random_point(&mut rng, 0.05, 0.6)));
    let mut exterior = vec![vec![3.0, 0.0, 0.0]];
    exterior.extend((0..8).map(|_| random_point(&mut rng, 1.5, 4.0)));

    let mut values = Table::new(
        "sphere-cauchy-integral",
        &["x1", "x2", "x3", "region", "scalar", "norm", "derivative_ratio"],
    );
    let mut spread = 0.0f64;
    let mut outside = 0.0f64;
    let mut derivative = 0.0f64;
    let evaluated: Result<(), CliError> = (|| {
        for (region, points) in [("origin", std::slice::from_ref(&ORIGIN.to_vec())), ("inside", &interior[..]), ("outside", &exterior[..])] {
            for x in points {
                let v = surface_cauchy_integral(&sphere, x)?;
                let mut ratio = 0.0f64;
                for m in 0..3 {
                    let d = surface_derivative_integral(&sphere, x, m, SurfaceElement::NormalDy)?;
                    ratio = ratio.max(d.norm() / surface_derivative_scale(&sphere, x, m)?);
                }
                derivative = derivative.max(ratio);
                match region {
                    "inside" => spread = spread.max(v.try_sub(&kappa)?.norm() / kappa_norm),
                    "outside" => outside = outside.max(v.norm() / kappa_norm),
                    _ => {}
                }
                values.push(vec![
                    Cell::Num(x[0]),
                    Cell::Num(x[1]),
                    Cell::Num(x[2]),
                    Cell::from(region),
                    Cell::Num(v.scalar_part()),
                    Cell::Num(v.norm()),
                    Cell::Num(ratio),
                ]);
            }
        }
        Ok(())
    })();
    ctx.table(values);
    let failed = evaluated.err().map(|e| e.to_string());
    let guard = |value: f64| match &failed {
        Some(msg) => Err(CliError::Validation(msg.clone())),
        None => pair(value, 0.0),
    };

    ctx.check(
        "sphere-closure",
        "a closed surface has zero total vector area",
        1e-12,
        Comparison::AtMost,
        || pair(closure_defect(&sphere), 0.0),
    );
    ctx.check(
        "sphere-inside-constant",
        "the surface Cauchy integral of ℰ(x-y)N(y)dy is locally constant, equal to a nonzero κ inside",
        0.01,
        Comparison::AtMost,
        || guard(spread),
    );
    ctx.check(
        "sphere-outside-zero",
        "the surface Cauchy integral of ℰ(x-y)N(y)dy is zero outside the domain",
        0.01,
        Comparison::AtMost,
        || guard(outside),
    );
    ctx.check(
        "sphere-derivative-zero",
        "the differentiated integral of ∂ℰ(x-y)N(y)dy vanishes off a closed surface",
        0.01,
        Comparison::AtMost,
        || guard(derivative),
    );

    let mut conv = Table::new("inside-constant-convergence", &["subdivisions", "facets", "kappa_scalar", "kappa_norm"]);
    ctx.check(
        "inside-constant-convergence",
        "the inside constant κ converges under mesh refinement",
        2.0,
        Comparison::AtMost,
        || {
            let lo = subdiv.saturating_sub(2);
            let mut kappas = Vec::new();
            for k in lo..=subdiv.max(lo + 2) {
                let s = icosphere(k)?;
                let v = surface_cauchy_integral(&s, &ORIGIN)?;
                conv.push(vec![Cell::Num(k as f64), Cell::Num(s.len() as f64), Cell::Num(v.scalar_part()), Cell::Num(v.norm())]);
                kappas.push(v);
            }
            let d1 = kappas[1].try_sub(&kappas[0])?.norm();
            let d2 = kappas[2].try_sub(&kappas[1])?.norm();
            pair(d2 / d1, 0.0)
        },
    );
    ctx.table(conv);

    let mut decay = Table::new("flat-patch", &["half_width", "facets", "derivative_norm"]);
    ctx.check(
        "flat-patch-decay",
        "on a flat truncated plane with constant density the differentiated dα integral tends to zero as the truncation grows, like the inverse of its size",
        0.1,
        Comparison::Absolute,
        || {
            let x = [0.0, 0.0, 1.0];
            let mut logs = (Vec::new(), Vec::new());
            for half in [4.0, 8.0, 16.0] {
                let k = (10.0 * half) as usize;
                let patch = flat_patch(half, k, 1.0)?;
                let mut total = 0.0f64;
                for m in 0..3 {
                    total = total.max(surface_derivative_integral(&patch, &x, m, SurfaceElement::Weighted)?.norm());
                }
                decay.push(vec![Cell::Num(half), Cell::Num(patch.len() as f64), Cell::Num(total)]);
                logs.0.push(f64::ln(half));
                logs.1.push(total.ln());
            }
            pair(-fit_slope(&logs.0, &logs.1), 1.0)
        },
    );
    ctx.table(decay);

    let hemi = hemisphere(subdiv.min(4))?;
    let mut open = Table::new("hemisphere-derivative", &["distance", "derivative_norm"]);
    for d in [2.0, 4.0, 8.0, 16.0] {
        let v = surface_derivative_integral(&hemi, &[0.0, 0.0, d], 2, SurfaceElement::NormalDy)?;
        open.push(vec![Cell::Num(d), Cell::Num(v.norm())]);
    }
    ctx.table(open);
    Ok(())
}

fn from_file(ctx: &mut Ctx, path: &Path) -> Result<(), CliError> {
    let file = parse_surface(path)?;
    let s = &file.surface;
    let mut table = Table::new("surface-cauchy-integral", &["point", "scalar", "norm"]);
    for (k, x) in file.points.iter().enumerate() {
        let v = surface_cauchy_integral(s, x)?;
        table.push(vec![Cell::Num(k as f64), Cell::Num(v.scalar_part()), Cell::Num(v.norm())]);
    }
    ctx.table(table);
    if s.is_closed() {
        ctx.check(
            "surface-closure",
            "a closed surface has zero total vector area",
            1e-9,
            Comparison::AtMost,
            || pair(closure_defect(s), 0.0),
        );
    }
    Ok(())
}
