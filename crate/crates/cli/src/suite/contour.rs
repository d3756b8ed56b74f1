use std::f64::consts::PI;

use cauchylab::contours::{
    abs_kernel_integral, circle_closed_form, contour_integral, corner_closed_form, ray_star_coefficient,
    segment_closed_form, Contour, IntegrationElement, Kernel, QuadratureControl, RayLength,
};
use cauchylab::numeric::fit_slope;
use num_complex::Complex64;
use rand::Rng;
use std::path::Path;

use super::{pair, Ctx};
use crate::error::CliError;
use crate::io::parse_contour;
use crate::report::{Cell, Comparison, Table};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn zero() -> Complex64 {
    c(0.0, 0.0)
}

/// Star-shaped polygon about `center`: sorted random angles, radii in
/// `[0.5, 1.5]`.
pub fn random_polygon(rng: &mut impl Rng, center: Complex64) -> Result<Contour, CliError> {
    let k = rng.gen_range(3..=9);
    let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    let vertices: Vec<Complex64> = angles
        .iter()
        .map(|&t| center + Complex64::from_polar(rng.gen_range(0.5..1.5), t))
        .collect();
    Ok(Contour::polygon(&vertices, true)?)
}

/// Points in `[-3, 3]²` at distance at least `0.1 · diam` from the contour.
pub fn far_points(rng: &mut impl Rng, contour: &Contour, count: usize) -> Vec<Complex64> {
    let guard = 0.1 * contour.diameter();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if contour.distance(z) >= guard {
            out.push(z);
        }
    }
    out
}

/// `|c₁ - c₂|` for the corner `-1 → i·tan(θ/2) → 1`, whose bend angle is `θ`.
pub fn bend_coefficient(theta: f64) -> Result<f64, CliError> {
    let p = c(0.0, (0.5 * theta).tan());
    Ok(corner_closed_form(c(-1.0, 0.0), p, c(1.0, 0.0), c(0.3, -2.0))?.corner_coefficient.norm())
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    if let Some(path) = ctx.cfg.input.clone() {
        return from_file(ctx, &path);
    }
    let quad = QuadratureControl::default();
    let dz = IntegrationElement::Complex;

    ctx.check(
        "segment-closed-form",
        "integral of (z-ζ)^-2 dζ over a segment [a,b] equals 1/(z-b) - 1/(z-a)",
        1e-6,
        Comparison::Relative,
        || {
            let (a, b, z) = (zero(), c(1.0, 0.5), c(0.3, 0.8));
            let seg = Contour::polygon(&[a, b], false)?;
            let v = contour_integral(&seg, dz, Kernel::CauchySquared, z, &quad)?.value;
            pair(v, segment_closed_form(a, b, z)?)
        },
    );
    ctx.check(
        "corner-closed-form",
        "two segments meeting at a corner p give c1(1/(z-p) - 1/(z-a)) + c2(1/(z-b) - 1/(z-p)) against arclength",
        1e-6,
        Comparison::Relative,
        || {
            let (a, p, b, z) = (c(-1.0, 0.0), c(0.2, 0.6), c(1.0, 0.0), c(0.1, -0.5));
            let corner = Contour::polygon(&[a, p, b], false)?;
            let v = contour_integral(&corner, IntegrationElement::Arclength, Kernel::CauchySquared, z, &quad)?.value;
            pair(v, corner_closed_form(a, p, b, z)?.value)
        },
    );
    ctx.check(
        "circle-inside-zero",
        "integral of (z-ζ)^-2 dζ/ζ over the unit circle vanishes for z inside",
        1e-8,
        Comparison::Absolute,
        || {
            let z = c(0.3, 0.2);
            let circle = Contour::circle(zero(), 1.0)?;
            let v = contour_integral(&circle, dz, Kernel::CauchySquaredOverZeta, z, &quad)?.value;
            pair(v, circle_closed_form(z)?)
        },
    );
    ctx.check(
        "circle-outside",
        "integral of (z-ζ)^-2 dζ/ζ over the unit circle equals 2πi/z² for z outside",
        1e-6,
        Comparison::Relative,
        || {
            let z = c(1.5, 0.7);
            let circle = Contour::circle(zero(), 1.0)?;
            let v = contour_integral(&circle, dz, Kernel::CauchySquaredOverZeta, z, &quad)?.value;
            pair(v, circle_closed_form(z)?)
        },
    );
    let mut rng = ctx.rng(1);
    ctx.check(
        "closed-polygon-vanishing",
        "integral of (z-ζ)^-2 dζ over a closed curve vanishes off the curve",
        1e-8,
        Comparison::AtMost,
        || {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let center = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                let polygon = random_polygon(&mut rng, center)?;
                for z in far_points(&mut rng, &polygon, 50) {
                    let v = contour_integral(&polygon, dz, Kernel::CauchySquared, z, &quad)?.value;
                    worst = worst.max(v.norm());
                }
            }
            pair(worst, 0.0)
        },
    );

    let q = c(0.2, -0.1);
    let phase = 0.3;
    let balanced: Vec<(Complex64, f64)> = (0..3)
        .map(|k| (Complex64::from_polar(1.0, phase + 2.0 * PI * k as f64 / 3.0), 1.0))
        .collect();
    ctx.check(
        "ray-star-balanced",
        "three equal rays at 120 degrees satisfy the balancing condition, so the coefficient of 1/(z-q) vanishes",
        1e-12,
        Comparison::AtMost,
        || pair(ray_star_coefficient(&balanced)?, 0.0),
    );
    ctx.check(
        "ray-star-quadrature",
        "integral of (z-ζ)^-2 dα over a balanced star of infinite rays vanishes",
        1e-6,
        Comparison::AtMost,
        || {
            let star = Contour::star(q, &balanced, RayLength::Infinite)?;
            let v = contour_integral(&star, IntegrationElement::Weighted, Kernel::CauchySquared, c(0.9, 0.4), &quad)?.value;
            pair(v, 0.0)
        },
    );
    ctx.check(
        "ray-star-unbalanced",
        "integral of (z-ζ)^-2 dα over a star of rays equals K/(z-q) with K = -Σ d_k/u_k",
        1e-6,
        Comparison::Relative,
        || {
            let rays: Vec<(Complex64, f64)> = balanced.iter().zip([1.0, 2.0, 0.5]).map(|(&(u, _), d)| (u, d)).collect();
            let star = Contour::star(q, &rays, RayLength::Infinite)?;
            let z = c(0.9, 0.4);
            let v = contour_integral(&star, IntegrationElement::Weighted, Kernel::CauchySquared, z, &quad)?.value;
            pair(v, ray_star_coefficient(&rays)? / (z - q))
        },
    );
    ctx.check(
        "corner-flattened-zero",
        "a corner flattened onto the segment [a,b] has coefficient c1 - c2 = 0",
        1e-15,
        Comparison::AtMost,
        || {
            let cf = corner_closed_form(c(-1.0, 0.0), zero(), c(1.0, 0.0), c(0.3, -2.0))?;
            pair(cf.corner_coefficient, 0.0)
        },
    );
    let thetas = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let mut bend = Table::new("corner-flattening", &["bend_angle", "corner_coefficient"]);
    ctx.check(
        "corner-flattening-slope",
        "the corner coefficient c1 - c2 tends to zero linearly in the bend angle",
        0.1,
        Comparison::Relative,
        || {
            let coeffs = thetas.iter().map(|&t| bend_coefficient(t)).collect::<Result<Vec<_>, _>>()?;
            for (t, k) in thetas.iter().zip(&coeffs) {
                bend.push(vec![Cell::Num(*t), Cell::Num(*k)]);
            }
            pair(fit_slope(&thetas, &coeffs), 1.0)
        },
    );
    ctx.table(bend);
    ctx.check(
        "line-abs-kernel",
        "integral of |z-ζ|^-2 over a straight line is comparable to dist(z, line)^-1, with constant π",
        1e-6,
        Comparison::Relative,
        || {
            let line = Contour::star(zero(), &[(c(1.0, 0.0), 1.0), (c(-1.0, 0.0), 1.0)], RayLength::Infinite)?;
            pair(abs_kernel_integral(&line, c(0.3, 0.5), &quad)?.ratio, PI)
        },
    );
    Ok(())
}

fn from_file(ctx: &mut Ctx, path: &Path) -> Result<(), CliError> {
    let file = parse_contour(path)?;
    let quad = QuadratureControl::default();
    let mut table = Table::new(
        "contour-integrals",
        &["z_re", "z_im", "dz_re", "dz_im", "dalpha_re", "dalpha_im", "abs_kernel_ratio"],
    );
    let mut worst = 0.0f64;
    for &z in &file.points {
        let v = contour_integral(&file.contour, IntegrationElement::Complex, Kernel::CauchySquared, z, &quad)?.value;
        let w = contour_integral(&file.contour, IntegrationElement::Weighted, Kernel::CauchySquared, z, &quad)?.value;
        let ratio = abs_kernel_integral(&file.contour, z, &quad)?.ratio;
        worst = worst.max(v.norm());
        table.push([z.re, z.im, v.re, v.im, w.re, w.im, ratio].map(Cell::Num).to_vec());
    }
    ctx.table(table);
    if file.contour.is_closed() && !file.points.is_empty() {
        ctx.check(
            "closed-contour-vanishing",
            "integral of (z-ζ)^-2 dζ over a closed curve vanishes off the curve",
            1e-8,
            Comparison::AtMost,
            || pair(worst, 0.0),
        );
    }
    Ok(())
}
