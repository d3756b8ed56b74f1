use cauchylab::clifford::{Multivector, Paravector};
use cauchylab::clifford_analysis::{cauchy_kernel, dirac_apply_fd, dirac_square_residual, GridFunction};
use cauchylab::numeric::norm;
use rand::Rng;

use super::{pair, Ctx};
use crate::error::CliError;
use crate::report::{Cell, Comparison, Table};

type Field = fn(&[f64]) -> Multivector;

fn integer_multivector(rng: &mut impl Rng, n: usize) -> Result<Multivector, CliError> {
    Ok(Multivector::from_coeffs(n, (0..1usize << n).map(|_| rng.gen_range(-3..=3) as f64).collect())?)
}

/// Largest coefficient of `(ab)c - a(bc)` over `triples` random integer
/// triples in each dimension `1..=5`.
pub fn associativity_defect(rng: &mut impl Rng, triples: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        for _ in 0..triples {
            let (a, b, c) = (integer_multivector(rng, n)?, integer_multivector(rng, n)?, integer_multivector(rng, n)?);
            let left = a.try_mul(&b)?.try_mul(&c)?;
            let right = a.try_mul(&b.try_mul(&c)?)?;
            worst = worst.max(left.try_sub(&right)?.max_abs());
        }
    }
    Ok(worst)
}

/// Largest coefficient of `e_i e_j + e_j e_i + 2δ_ij` for `n ≤ 5`.
pub fn anticommutation_defect() -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        for i in 1..=n {
            for j in 1..=n {
                let (ei, ej) = (Multivector::basis_vector(n, i)?, Multivector::basis_vector(n, j)?);
                let mut s = ei.try_mul(&ej)?.try_add(&ej.try_mul(&ei)?)?;
                if i == j {
                    s = s.try_add(&Multivector::scalar(n, 2.0)?)?;
                }
                worst = worst.max(s.max_abs());
            }
        }
    }
    Ok(worst)
}

/// Deviation from Hamilton's table with `i = e1`, `j = e2`, `k = e1e2`.
pub fn quaternion_defect() -> Result<f64, CliError> {
    let i = Multivector::basis_vector(2, 1)?;
    let j = Multivector::basis_vector(2, 2)?;
    let k = i.try_mul(&j)?;
    let minus_one = Multivector::scalar(2, -1.0)?;
    let rules = [
        (i.try_mul(&i)?, minus_one.clone()),
        (j.try_mul(&j)?, minus_one.clone()),
        (k.try_mul(&k)?, minus_one.clone()),
        (i.try_mul(&j)?.try_mul(&k)?, minus_one),
        (j.try_mul(&k)?, i.clone()),
        (k.try_mul(&i)?, j.clone()),
        (j.try_mul(&i)?, k.scale(-1.0)),
    ];
    let mut worst = 0.0f64;
    for (got, want) in &rules {
        worst = worst.max(got.try_sub(want)?.max_abs());
    }
    Ok(worst)
}

/// Largest `|ββ⁻¹ - 1|` and `|β⁻¹β - 1|` over random paravectors, `n ≤ 5`.
pub fn paravector_inverse_defect(rng: &mut impl Rng, samples: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        let one = Multivector::scalar(n, 1.0)?;
        for _ in 0..samples {
            let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
            let b = Paravector::new(scale * rng.gen_range(-1.0..1.0), (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect());
            let (bm, inv) = (b.to_multivector()?, b.inverse()?.to_multivector()?);
            worst = worst.max(bm.try_mul(&inv)?.try_sub(&one)?.max_abs());
            worst = worst.max(inv.try_mul(&bm)?.try_sub(&one)?.max_abs());
        }
    }
    Ok(worst)
}

fn kernel_field(x: &[f64]) -> Multivector {
    cauchy_kernel(x, &[0.0, 0.0, 0.0]).expect("grid avoids the pole")
}

fn smooth_field(x: &[f64]) -> Multivector {
    let s = x[0].sin() * (2.0 * x[1]).cos() * (0.5 * x[2]).exp();
    let coeffs = (0..8).map(|k| s * (1.0 + 0.1 * k as f64) + if k == 3 { x[0] * x[1] * x[2] } else { 0.0 }).collect();
    Multivector::from_coeffs(3, coeffs).expect("eight coefficients")
}

/// Max residual over the inner half of the cube `[0.5, 1.5]³`, at spacing `h`.
fn residual(field: Field, h: f64, op: fn(&GridFunction) -> Result<GridFunction, cauchylab::Error>) -> Result<f64, CliError> {
    let f = GridFunction::sample_cube(3, 1.0, 0.5, h, field)?;
    Ok(op(&f)?.max_norm_where(|p| p.iter().all(|c| (c - 1.0).abs() <= 0.25 + 1e-12)))
}

/// Residuals at `h` and `h/2` and their ratio.
pub fn refinement_ratio(
    field: Field,
    h: f64,
    op: fn(&GridFunction) -> Result<GridFunction, cauchylab::Error>,
) -> Result<(f64, f64, f64), CliError> {
    let coarse = residual(field, h, op)?;
    let fine = residual(field, 0.5 * h, op)?;
    Ok((coarse, fine, coarse / fine))
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rng = ctx.rng(3);
    ctx.check(
        "clifford-anticommutation",
        "generators anticommute and square to -1",
        0.0,
        Comparison::AtMost,
        || pair(anticommutation_defect()?, 0.0),
    );
    ctx.check(
        "clifford-associativity",
        "the Clifford product is associative (exact on integer coefficients)",
        0.0,
        Comparison::AtMost,
        || pair(associativity_defect(&mut rng, 2000)?, 0.0),
    );
    ctx.check(
        "quaternion-table",
        "for n = 2 the algebra is the quaternions with i = e1, j = e2, k = e1e2",
        0.0,
        Comparison::AtMost,
        || pair(quaternion_defect()?, 0.0),
    );
    ctx.check(
        "paravector-inverse",
        "a nonzero paravector β has inverse β*/Σβ_j²",
        1e-12,
        Comparison::AtMost,
        || pair(paravector_inverse_defect(&mut rng, 2000)?, 0.0),
    );

    let mut orders = Table::new("refinement", &["quantity", "h", "residual_h", "residual_h_over_2", "ratio"]);
    let h = 1.0 / 16.0;
    let cases: [(&str, &str, Field, fn(&GridFunction) -> Result<GridFunction, cauchylab::Error>); 3] = [
        ("kernel-analytic-order", "ℰ is Clifford analytic away from its pole: the discrete 𝒟ℰ is O(h²)", kernel_field, dirac_apply_fd),
        ("dirac-square-smooth-order", "𝒟² = -Δ: the discrete residual 𝒟𝒟f + Δf is O(h²) on a smooth field", smooth_field, dirac_square_residual),
        ("dirac-square-kernel-order", "𝒟² = -Δ: the discrete residual is O(h²) on ℰ away from its pole", kernel_field, dirac_square_residual),
    ];
    for (name, anchor, field, op) in cases {
        ctx.check(name, anchor, 0.5, Comparison::Absolute, || {
            let (c, f, ratio) = refinement_ratio(field, h, op)?;
            orders.push(vec![Cell::from(name), Cell::Num(h), Cell::Num(c), Cell::Num(f), Cell::Num(ratio)]);
            pair(ratio, 4.0)
        });
    }
    ctx.table(orders);

    ctx.check(
        "dirac-square-quadratic",
        "the discrete 𝒟² + Δ residual vanishes on quadratic fields",
        1e-10,
        Comparison::AtMost,
        || {
            let f = GridFunction::sample_cube(3, 0.2, 0.6, 0.1, |x| {
                let c = (0..8)
                    .map(|k| {
                        let k = k as f64;
                        1.0 + k * x[0] - 0.5 * x[1] * x[2] + (k - 3.0) * x[1] * x[1]
                    })
                    .collect();
                Multivector::from_coeffs(3, c).expect("eight coefficients")
            })?;
            pair(dirac_square_residual(&f)?.max_norm(), 0.0)
        },
    );
    ctx.check(
        "kernel-from-inverse-distance",
        "ℰ is a constant multiple of 𝒟|x|^(2-n); in R³ 𝒟|x|^-1 = -ℰ",
        1e-3,
        Comparison::Relative,
        || {
            let f = GridFunction::sample_cube(3, 1.0, 0.2, 0.01, |x| Multivector::scalar(3, 1.0 / norm(x)).expect("n = 3"))?;
            let d = dirac_apply_fd(&f)?;
            let (mut num, mut den) = (0.0, 0.0);
            for i in (0..d.len()).filter(|&i| d.is_valid(i)) {
                let e = kernel_field(&d.point(i));
                let v = d.value(i);
                num += v.coeffs().iter().zip(e.coeffs()).map(|(a, b)| a * b).sum::<f64>();
                den += e.coeffs().iter().map(|b| b * b).sum::<f64>();
            }
            pair(num / den, -1.0)
        },
    );
    Ok(())
}
