use std::path::Path;

use cauchylab::complex_planes::{
    diagonal, random_special_unitary, random_unitary, special_lagrangian_test, symplectic_defect,
    totally_real_coefficient, PlaneBasis,
};
use num_complex::Complex64;
use rand::Rng;

use super::{pair, Ctx};
use crate::error::CliError;
use crate::io::parse_plane;
use crate::report::{Cell, Comparison, Table};

/// Entries uniform in the unit square.
fn random_vector(m: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Worst `|coefficient - 1|` and symplectic defect over `trials` random
/// unitary images of `R^m` for each `m` in `1..=5`.
pub fn unitary_images(trials: usize, rng: &mut impl Rng) -> Result<(f64, f64), CliError> {
    let (mut coef, mut defect) = (0.0f64, 0.0f64);
    for m in 1..=5 {
        let base = PlaneBasis::standard(m)?;
        for _ in 0..trials {
            let plane = base.mapped(&random_unitary(m, rng))?;
            coef = coef.max((totally_real_coefficient(&plane)? - 1.0).abs());
            defect = defect.max(symplectic_defect(&plane));
        }
    }
    Ok((coef, defect))
}

/// Largest coefficient over planes containing a complex line `{v, iv}`,
/// completed by random vectors, `m` in `2..=5`.
pub fn complex_line_coefficient(trials: usize, rng: &mut impl Rng) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for m in 2..=5 {
        for _ in 0..trials {
            let v = random_vector(m, rng);
            let iv: Vec<Complex64> = v.iter().map(|z| z * i()).collect();
            let mut vectors = vec![v, iv];
            vectors.extend((2..m).map(|_| random_vector(m, rng)));
            let plane = PlaneBasis::new(vectors)?;
            worst = worst.max(totally_real_coefficient(&plane)?);
        }
    }
    Ok(worst)
}

/// Worst `|det - 1|` over special-unitary images of `R^m`, `m` in `1..=5`.
pub fn special_unitary_images(trials: usize, rng: &mut impl Rng) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for m in 1..=5 {
        let base = PlaneBasis::standard(m)?;
        for _ in 0..trials {
            let plane = base.mapped(&random_special_unitary(m, rng))?;
            let t = special_lagrangian_test(&plane, 1e-10)?;
            let miss = if t.special && t.lagrangian { (t.determinant - 1.0).norm() } else { f64::INFINITY };
            worst = worst.max(miss);
        }
    }
    Ok(worst)
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    if let Some(path) = ctx.cfg.input.clone() {
        return from_file(ctx, &path);
    }
    let mut rng = ctx.rng(8);
    let images = unitary_images(100, &mut rng).map_err(|e| e.to_string());
    ctx.check(
        "lagrangian-coefficient",
        "unitary images of R^m are Lagrangian with totally-real coefficient 1",
        1e-10,
        Comparison::AtMost,
        || {
            let (c, _) = images.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            pair(*c, 0.0)
        },
    );
    ctx.check(
        "lagrangian-symplectic",
        "the symplectic form Im⟨v,w⟩ vanishes on unitary images of R^m",
        1e-10,
        Comparison::AtMost,
        || {
            let (_, d) = images.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            pair(*d, 0.0)
        },
    );
    ctx.check(
        "complex-line-rejected",
        "a real plane containing a complex line {v, iv} has coefficient 0 and is not totally real",
        1e-12,
        Comparison::AtMost,
        || pair(complex_line_coefficient(20, &mut rng)?, 0.0),
    );
    ctx.check(
        "special-lagrangian-su",
        "images of R^m under SU(m) are special Lagrangian",
        1e-10,
        Comparison::AtMost,
        || pair(special_unitary_images(20, &mut rng)?, 0.0),
    );
    let counter = PlaneBasis::standard(2)?.mapped(&diagonal(&[i(), Complex64::new(1.0, 0.0)]))?;
    ctx.check(
        "special-lagrangian-counterexample-lagrangian",
        "the image of R² under diag(i, 1) is Lagrangian",
        1e-12,
        Comparison::AtMost,
        || pair(symplectic_defect(&counter), 0.0),
    );
    ctx.check(
        "special-lagrangian-counterexample",
        "the image of R² under diag(i, 1) is not special Lagrangian: its determinant phase is π/2",
        0.5,
        Comparison::AtLeast,
        || {
            let t = special_lagrangian_test(&counter, 1e-10)?;
            let miss = (t.determinant - 1.0).norm().min((t.determinant + 1.0).norm());
            pair(if t.special { 0.0 } else { miss }, 2f64.sqrt())
        },
    );
    Ok(())
}

fn from_file(ctx: &mut Ctx, path: &Path) -> Result<(), CliError> {
    let plane = parse_plane(path)?;
    let coefficient = totally_real_coefficient(&plane)?;
    let t = special_lagrangian_test(&plane, 1e-10)?;
    let mut table = Table::new(
        "plane",
        &["m", "coefficient", "symplectic_defect", "lagrangian", "special", "det_re", "det_im"],
    );
    table.push(vec![
        Cell::Num(plane.m() as f64),
        Cell::Num(coefficient),
        Cell::Num(symplectic_defect(&plane)),
        Cell::from(if t.lagrangian { "yes" } else { "no" }),
        Cell::from(if t.special { "yes" } else { "no" }),
        Cell::Num(t.determinant.re),
        Cell::Num(t.determinant.im),
    ]);
    ctx.table(table);
    ctx.check(
        "coefficient-range",
        "the totally-real coefficient lies in [0, 1]",
        1.0 + 1e-12,
        Comparison::AtMost,
        || pair(coefficient, 1.0),
    );
    Ok(())
}
