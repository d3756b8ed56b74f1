use std::f64::consts::PI;

use cauchylab::numeric::{compensated_sum, dist, norm};
use cauchylab::potentials::{
    estimate_operator_norms, euclidean_majorant_exponent, kernel_difference_check, jr_difference, norm_band,
    potential, power_difference_bound, random_trial, snowflake_check, snowflake_remainder_terms,
    split_local_distant, taylor_remainder_terms, truncated_riesz, Metric, RegularSet, RemainderTerms,
    SampleFunction, SnowflakeSampling, SweepConfig, TrialFamily,
};
use rand::Rng;

use super::fixture::{build_cloud, fit_dimension, CloudPurpose};
use super::{pair, Ctx};
use crate::config::FixtureKind;
use crate::error::CliError;
use crate::io::parse_pointcloud;
use crate::report::{Cell, Comparison, Table};

/// Operator-norm tables are skipped above this many atoms (the estimate is
/// quadratic in the atom count per trial) and for snowflake metrics.
const MAX_SWEEP_ATOMS: usize = 5000;
const QS: [f64; 3] = [1.5, 2.0, 4.0];
const SNOWFLAKE_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRow {
    pub r: f64,
    /// Max over trials of the smallest constant valid for every `f`.
    pub c_hat: f64,
    /// Max over trials of `lhs/rhs` for random magnitudes carrying the
    /// sign of the remainder coefficients.
    pub aligned: f64,
    /// Max over trials of `lhs / (Ĉ · rhs)` for uniform random `f`; at most
    /// one when the bound holds.
    pub excess: f64,
}

/// Empirical remainder constant per radius. Euclidean sets use the
/// first-order Taylor remainder with `x` an atom in the inner half of the
/// set and `y` at distance `r/2` (so `y` stays near the set); snowflake
/// sets use any atom `x`, an atom `y` within distance `r`, and the
/// zeroth-order remainder.
pub fn remainder_calibration(set: &RegularSet, radii: &[f64], trials: usize, rng: &mut impl Rng) -> Result<Vec<CalibrationRow>, CliError> {
    let mu = &set.measure;
    let m = mu.m();
    let snowflake = matches!(set.metric, Metric::Snowflake { .. });
    let centre: Vec<f64> = (0..m).map(|k| compensated_sum(mu.points().map(|p| p[k])) / mu.len() as f64).collect();
    let reach = mu.points().map(|p| dist(p, &centre)).fold(0.0, f64::max);
    let inner: Vec<usize> = (0..mu.len())
        .filter(|&i| snowflake || dist(mu.point(i), &centre) <= 0.5 * reach)
        .collect();
    if inner.is_empty() {
        return Err(CliError::Validation("no atoms in the inner half of the set".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut setups: Vec<RemainderTerms> = Vec::with_capacity(trials);
        for _ in 0..trials {
            let x = inner[rng.gen_range(0..inner.len())];
            let terms = if snowflake {
                let near: Vec<usize> = mu.ball_indices(mu.point(x), r, true).into_iter().filter(|&j| j != x).collect();
                let y = if near.is_empty() { x } else { near[rng.gen_range(0..near.len())] };
                snowflake_remainder_terms(set, x, y, r)?
            } else {
                let px = mu.point(x).to_vec();
                let mut dir: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let len = norm(&dir).max(1e-12);
                dir.iter_mut().for_each(|d| *d *= 0.5 * r / len);
                let py: Vec<f64> = px.iter().zip(&dir).map(|(a, b)| a + b).collect();
                taylor_remainder_terms(set, &px, &py, r)?
            };
            setups.push(terms);
        }
        let c_hat = setups.iter().map(RemainderTerms::extremal_constant).fold(0.0, f64::max);
        let (mut aligned, mut excess) = (0.0f64, 0.0f64);
        for terms in &setups {
            aligned = aligned.max(terms.evaluate(&terms.aligned_trial(rng))?.ratio());
            let f = SampleFunction::random(mu.len(), rng);
            excess = excess.max(terms.evaluate(&f)?.ratio() / c_hat);
        }
        rows.push(CalibrationRow { r, c_hat, aligned, excess });
    }
    Ok(rows)
}

/// Max of `lhs / rhs_metric` and of `lhs / rhs_euclidean` over random atom
/// triples.
pub fn kernel_difference_constants(set: &RegularSet, triples: usize, rng: &mut impl Rng) -> Result<(f64, f64), CliError> {
    let n = set.len();
    let (mut metric, mut euclid) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < triples {
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        if x == y || z == x || z == y {
            continue;
        }
        let k = kernel_difference_check(set, x, y, z)?;
        metric = metric.max(k.lhs / k.rhs_metric);
        euclid = euclid.max(k.lhs / k.rhs_euclidean);
        done += 1;
    }
    Ok((metric, euclid))
}

/// Max of `lhs / rhs` for the reciprocal-power mean-value bound over random
/// `a, b, s ∈ (0, 5]`.
pub fn power_difference_max(samples: usize, rng: &mut impl Rng) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut draw = || 5.0 - rng.gen_range(0.0..5.0);
        let (a, b, s) = (draw(), draw(), draw());
        let p = power_difference_bound(a, b, s)?;
        if p.rhs > 0.0 {
            worst = worst.max(p.lhs / p.rhs);
        }
    }
    Ok(worst)
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), CliError> {
    let (set, kind) = match (&ctx.cfg.input, ctx.cfg.fixture) {
        (Some(path), _) => {
            let file = parse_pointcloud(path)?;
            let n = fit_dimension(&file.measure)?;
            if n <= 1.0 {
                return Err(CliError::Validation(format!("estimated dimension {n:.3} ≤ 1; potentials need n > 1")));
            }
            (RegularSet::new(file.measure, n)?, None)
        }
        (None, kind) => {
            let kind = kind.unwrap_or(FixtureKind::Grid);
            if matches!(kind, FixtureKind::Line | FixtureKind::Sphere) {
                return Err(CliError::Usage(format!(
                    "potential-sweep needs a set of dimension n > 1; `{}` is not supported",
                    kind.name()
                )));
            }
            let cloud = build_cloud(ctx.cfg, kind, CloudPurpose::Potential)?;
            let set = match kind {
                FixtureKind::Cantor => cloud.with_ultrametric(SNOWFLAKE_ALPHA)?,
                FixtureKind::Koch => cloud.with_parameter_metric()?,
                _ => cloud.regular_set()?,
            };
            (set, Some(kind))
        }
    };
    let mu = &set.measure;
    let diam = mu.diameter();
    let spacing = mu.median_spacing();

    let mut info = Table::new("set", &["atoms", "n_dim", "spacing", "diameter"]);
    info.push([mu.len() as f64, set.n_dim, spacing, diam].map(Cell::Num).to_vec());
    ctx.table(info);

    identities(ctx, &set, diam)?;

    let symmetric_centre = match kind {
        Some(FixtureKind::Grid | FixtureKind::Cantor) => Some(vec![0.5, 0.5]),
        Some(FixtureKind::Disc) => Some(vec![0.0, 0.0]),
        _ => None,
    };
    if let Some(c) = symmetric_centre {
        ctx.check(
            "riesz-odd-symmetric",
            "the odd kernel (x-z)/|x-z|^(n+1) integrates to zero about a centre of symmetry",
            1e-12,
            Comparison::AtMost,
            || {
                let r = diam / 8.0;
                let ones = SampleFunction::constant(mu.len(), 1.0);
                let t = truncated_riesz(&set, &ones, &c, r)?;
                let scale = compensated_sum((0..mu.len()).map(|i| {
                    let d = dist(&c, mu.point(i));
                    if d >= r {
                        mu.weight(i) * d.powf(-set.n_dim)
                    } else {
                        0.0
                    }
                }));
                pair(norm(&t) / scale, 0.0)
            },
        );
    }

    match kind {
        Some(FixtureKind::Disc) => {
            ctx.check(
                "disc-potential-constant",
                "the potential of the unit disc at its centre is ∫|z|^-1 dz = 2π",
                0.02,
                Comparison::Relative,
                || pair(potential(&set, &SampleFunction::constant(mu.len(), 1.0), &[0.0, 0.0])?, 2.0 * PI),
            );
            calibration(
                ctx,
                &set,
                "taylor-constant-band",
                "the Taylor remainder of J_r is bounded by C Σ|f| r/(|x-z|^(n+1) + r^(n+1)) with C uniform in r",
            );
        }
        Some(FixtureKind::Cantor) | Some(FixtureKind::Koch) => snowflake(ctx, &set, kind == Some(FixtureKind::Cantor))?,
        _ => {}
    }

    if mu.len() <= MAX_SWEEP_ATOMS && matches!(set.metric, Metric::Euclidean) {
        let radii = set.dyadic_radii();
        let cfg = SweepConfig {
            seed: ctx.cfg.seed,
            ..SweepConfig::default()
        };
        let estimates = estimate_operator_norms(&set, &radii, &QS, &cfg)?;
        let mut table = Table::new("operator-norms", &["operator", "q", "r", "norm"]);
        for e in &estimates {
            table.push(vec![Cell::from(e.operator), Cell::Num(e.q), Cell::Num(e.r), Cell::Num(e.norm)]);
        }
        ctx.table(table);
        if matches!(kind, Some(FixtureKind::Grid | FixtureKind::Lipschitz)) {
            for q in QS {
                let name = format!("riesz-norm-band-q{q}");
                ctx.check(
                    &name,
                    "on uniformly rectifiable sets the truncated Riesz transforms T_r are bounded on L^q uniformly in r",
                    3.0,
                    Comparison::AtMost,
                    || match norm_band(&estimates, "T_r", q, 4.0 * spacing, diam / 4.0) {
                        Some(b) => pair(b, 1.0),
                        None => Err(CliError::Validation("no radii in the asserted window".into())),
                    },
                );
            }
        }
    }
    Ok(())
}

fn identities(ctx: &mut Ctx, set: &RegularSet, diam: f64) -> Result<(), CliError> {
    let mu = &set.measure;
    let mut rng = ctx.rng(5);
    let f = random_trial(set, TrialFamily::Positive, &mut rng);
    let r = diam / 8.0;
    let pairs: Vec<(usize, usize)> = (0..4).map(|_| (rng.gen_range(0..mu.len()), rng.gen_range(0..mu.len()))).collect();
    ctx.check(
        "local-distant-sum",
        "the potential splits as P = L_r + J_r into local and distant parts",
        1e-12,
        Comparison::AtMost,
        || {
            let mut worst = 0.0f64;
            for &(i, _) in &pairs {
                let x = mu.point(i);
                let ld = split_local_distant(set, &f, x, r)?;
                let p = potential(set, &f, x)?;
                worst = worst.max((ld.local + ld.distant - p).abs() / p.abs());
            }
            pair(worst, 0.0)
        },
    );
    ctx.check(
        "jr-difference",
        "the combined-kernel sum equals J_r(x) - J_r(y)",
        1e-12,
        Comparison::AtMost,
        || {
            let mut worst = 0.0f64;
            for &(i, j) in &pairs {
                let (x, y) = (mu.point(i), mu.point(j));
                let jx = split_local_distant(set, &f, x, r)?.distant;
                let jy = split_local_distant(set, &f, y, r)?.distant;
                let d = jr_difference(set, &f, x, y, r)?;
                worst = worst.max((d - (jx - jy)).abs() / (jx.abs() + jy.abs()));
            }
            pair(worst, 0.0)
        },
    );
    Ok(())
}

fn calibration(ctx: &mut Ctx, set: &RegularSet, name: &str, anchor: &str) {
    let radii: Vec<f64> = (-6..=0).map(|k| 2f64.powi(k)).collect();
    let mut rng = ctx.rng(6);
    let result = remainder_calibration(set, &radii, 64, &mut rng);
    let mut table = Table::new("remainder-constant", &["r", "c_hat", "aligned_ratio", "random_excess"]);
    if let Ok(rows) = &result {
        for row in rows {
            table.push([row.r, row.c_hat, row.aligned, row.excess].map(Cell::Num).to_vec());
        }
    }
    ctx.table(table);
    let rows = result.map_err(|e| e.to_string());
    ctx.check(name, anchor, 2.0, Comparison::AtMost, || {
        let rows = rows.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
        let hi = rows.iter().map(|r| r.c_hat).fold(0.0, f64::max);
        let lo = rows.iter().map(|r| r.c_hat).fold(f64::INFINITY, f64::min);
        pair(hi / lo, 1.0)
    });
    let excess_name = format!("{name}-holds");
    ctx.check(
        &excess_name,
        "random functions satisfy the remainder bound with the calibrated constant",
        1.0 + 1e-9,
        Comparison::AtMost,
        || {
            let rows = rows.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            pair(rows.iter().map(|r| r.excess).fold(0.0, f64::max), 1.0)
        },
    );
}

fn snowflake(ctx: &mut Ctx, set: &RegularSet, cantor: bool) -> Result<(), CliError> {
    let Metric::Snowflake { alpha, .. } = set.metric else {
        return Err(CliError::Validation("snowflake checks need a metric".into()));
    };
    let sampling = SnowflakeSampling {
        seed: ctx.cfg.seed,
        ..SnowflakeSampling::default()
    };
    let band = snowflake_check(set, &sampling);
    let mut table = Table::new("snowflake", &["alpha", "c1_low", "c1_high", "c1"]);
    if let Ok(b) = &band {
        table.push([alpha, b.c1_low, b.c1_high, b.c1()].map(Cell::Num).to_vec());
    }
    ctx.table(table);
    let band = band.map_err(|e| e.to_string());
    ctx.check(
        "snowflake-band",
        "the metric's α-th power is comparable to Euclidean distance",
        10.0,
        Comparison::AtMost,
        || {
            let b = band.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            pair(b.c1(), 1.0)
        },
    );

    let s = alpha * (set.n_dim - 1.0);
    let mut rng = ctx.rng(7);
    let constants = kernel_difference_constants(set, 20_000, &mut rng).map_err(|e| e.to_string());
    ctx.check(
        "kernel-difference-constant",
        "|ρ(x,z)^-s - ρ(y,z)^-s| ≤ C ρ(x,y)/min(ρ(x,z), ρ(y,z))^(s+1) with C = α(n-1)",
        1.01,
        Comparison::AtMost,
        || {
            let (metric, _) = constants.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            pair(metric / s, 1.0)
        },
    );
    ctx.check(
        "kernel-difference-euclidean",
        "in Euclidean terms the kernel difference is bounded by |x-y|^(1/α)/min(|x-z|, |y-z|)^(n-1+1/α), an exponent larger than n",
        1.01,
        Comparison::AtMost,
        || {
            let (_, euclid) = constants.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            let b = band.as_ref().map_err(|e| CliError::Validation(e.clone()))?;
            // ρ(x,y) ≤ (c_high|x-y|)^{1/α} and ρ(·,z) ≥ (c_low|·-z|)^{1/α}.
            let p = euclidean_majorant_exponent(set.n_dim, alpha);
            let bound = s * b.c1_high.powf(1.0 / alpha) / b.c1_low.powf(p);
            pair(euclid / bound, 1.0)
        },
    );
    ctx.check(
        "power-difference",
        "|a^-s - b^-s| ≤ s|a-b|/min(a,b)^(s+1) for positive a, b, s",
        1.0 + 1e-12,
        Comparison::AtMost,
        || pair(power_difference_max(100_000, &mut rng)?, 1.0),
    );
    if cantor {
        calibration(
            ctx,
            set,
            "snowflake-constant-band",
            "on a snowflake the remainder of J_r needs no first-order term and is bounded with r^(1/α-1) and exponent n-1+1/α",
        );
    }
    Ok(())
}
