//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cauchylab::fixtures::{self, PointCloud};
use cauchylab::numeric::{compensated_sum, dist};
use cauchylab::potentials::{
    euclidean_majorant_exponent, jr_difference, potential, random_trial, snowflake_check, split_local_distant,
    truncated_riesz, Metric, RegularSet, SampleFunction, SnowflakeSampling, TrialFamily,
};
use cauchylab_cli::report::{Check, Comparison, Quantity, Report};
use cauchylab_cli::suite::clifford::{associativity_defect, paravector_inverse_defect};
use cauchylab_cli::suite::potential::{kernel_difference_constants, power_difference_max, remainder_calibration};
use cauchylab_cli::{run_suite, Command, FixtureKind, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn config(command: Command, fixture: Option<FixtureKind>) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.fixture = fixture;
    cfg
}

fn report(cfg: &RunConfig) -> Result<Report, String> {
    run_suite(cfg).map(|out| out.report).map_err(|e| e.to_string())
}

fn show(q: &Quantity) -> String {
    match q {
        Quantity::Real(x) => format!("{x:.3e}"),
        Quantity::Complex(z) => format!("{:.3e}", z.norm()),
    }
}

fn complex(q: &Quantity) -> num_complex::Complex64 {
    match q {
        Quantity::Real(x) => (*x).into(),
        Quantity::Complex(z) => *z,
    }
}

/// The checked quantity: the error for oracle comparisons, else the value.
fn measured(c: &Check) -> String {
    let gap = (complex(&c.value) - complex(&c.oracle)).norm();
    match c.comparison {
        Comparison::Relative => format!("{:.3e} rel", gap / complex(&c.oracle).norm()),
        Comparison::Absolute => format!("{gap:.3e} abs"),
        _ => show(&c.value),
    }
}

fn real(q: &Quantity) -> f64 {
    match q {
        Quantity::Real(x) => *x,
        Quantity::Complex(z) => z.norm(),
    }
}

/// Requires every named check to be present and passing.
fn require(report: &Report, names: &[&str]) -> Outcome {
    let mut parts = Vec::new();
    for name in names {
        let c = report.check(name).ok_or_else(|| format!("{name} missing"))?;
        if !c.pass {
            return Err(format!("{name}={} (tol {:.3e}) {}", measured(c), c.tolerance, c.anchor));
        }
        parts.push(format!("{name}={}", measured(c)));
    }
    Ok(parts.join(" "))
}

fn value(report: &Report, name: &str) -> Result<f64, String> {
    report.check(name).map(|c| real(&c.value)).ok_or_else(|| format!("{name} missing"))
}

fn closed_polygons() -> Outcome {
    require(&report(&config(Command::DemoContour, None))?, &["closed-polygon-vanishing"])
}

fn segment_corner_circle() -> Outcome {
    require(
        &report(&config(Command::DemoContour, None))?,
        &["segment-closed-form", "corner-closed-form", "circle-inside-zero", "circle-outside"],
    )
}

fn ray_star() -> Outcome {
    require(
        &report(&config(Command::DemoContour, None))?,
        &["ray-star-balanced", "ray-star-quadrature", "ray-star-unbalanced", "corner-flattened-zero", "corner-flattening-slope"],
    )
}

fn clifford_algebra() -> Outcome {
    let r = report(&config(Command::DemoClifford, None))?;
    let table = require(&r, &["clifford-anticommutation", "quaternion-table"])?;
    let mut g = rng(11);
    // 20 000 triples in each of n = 1..5.
    let assoc = associativity_defect(&mut g, 20_000).map_err(|e| e.to_string())?;
    if assoc != 0.0 {
        return Err(format!("associativity defect {assoc:e} on integer coefficients"));
    }
    let inv = paravector_inverse_defect(&mut g, 2000).map_err(|e| e.to_string())?;
    if inv > 1e-12 {
        return Err(format!("paravector inverse round trip {inv:e}"));
    }
    Ok(format!("{table} associativity=0 (1e5 triples) paravector-inverse={inv:.3e}"))
}

fn finite_difference_order() -> Outcome {
    let r = report(&config(Command::DemoClifford, None))?;
    let names = ["kernel-analytic-order", "dirac-square-smooth-order", "dirac-square-kernel-order"];
    let detail = require(&r, &names)?;
    for name in names {
        let ratio = value(&r, name)?;
        if !(3.5..=4.5).contains(&ratio) {
            return Err(format!("{name} ratio {ratio:.3} outside [3.5, 4.5]"));
        }
    }
    Ok(detail)
}

fn surface_integral() -> Outcome {
    let facets = fixtures::icosphere(5).map_err(|e| e.to_string())?.len();
    if facets < 20_000 {
        return Err(format!("sphere has only {facets} facets"));
    }
    let r = report(&config(Command::DemoSurface, None))?;
    let detail = require(&r, &["sphere-inside-constant", "sphere-outside-zero", "sphere-derivative-zero"])?;
    Ok(format!("facets={facets} {detail}"))
}

fn symmetric_density() -> Outcome {
    let line = require(&report(&config(Command::MeasureDiagnose, Some(FixtureKind::Line)))?, &["symmetry-defect"])?;
    let grid = require(&report(&config(Command::MeasureDiagnose, Some(FixtureKind::Grid)))?, &["symmetry-defect"])?;
    let cantor = require(
        &report(&config(Command::MeasureDiagnose, Some(FixtureKind::Cantor)))?,
        &["ahlfors-band", "ahlfors-band-wrong-dimension"],
    )?;
    Ok(format!("line {line}; square {grid}; cantor {cantor}"))
}

fn all_point_fixtures() -> Result<Vec<(&'static str, RegularSet)>, String> {
    let build = || -> cauchylab::Result<Vec<(&'static str, RegularSet)>> {
        let cloud = |c: PointCloud| c.regular_set();
        Ok(vec![
            ("line", cloud(fixtures::segment(257)?)?),
            ("grid", cloud(fixtures::square_grid(32)?)?),
            ("disc", cloud(fixtures::disc(1.0 / 64.0, 1.0)?)?),
            ("lipschitz", cloud(fixtures::lipschitz_graph(32, 1.0)?)?),
            ("cantor", cloud(fixtures::cantor(8, 1)?)?),
            ("cantor-dust", fixtures::cantor(6, 2)?.with_ultrametric(0.5)?),
            ("koch", fixtures::koch(6)?.with_parameter_metric()?),
        ])
    };
    build().map_err(|e| e.to_string())
}

fn potential_identities() -> Outcome {
    let mut g = rng(8);
    let mut worst_split = 0.0f64;
    let mut worst_diff = 0.0f64;
    for (name, set) in all_point_fixtures()? {
        let mu = &set.measure;
        let f = random_trial(&set, TrialFamily::Positive, &mut g);
        let r = mu.diameter() / 8.0;
        for _ in 0..8 {
            let (x, y) = (mu.point(g.gen_range(0..mu.len())), mu.point(g.gen_range(0..mu.len())));
            let eval = || -> cauchylab::Result<(f64, f64)> {
                let ld = split_local_distant(&set, &f, x, r)?;
                let p = potential(&set, &f, x)?;
                let jy = split_local_distant(&set, &f, y, r)?.distant;
                let d = jr_difference(&set, &f, x, y, r)?;
                Ok(((ld.local + ld.distant - p).abs() / p.abs(), (d - (ld.distant - jy)).abs() / (ld.distant.abs() + jy.abs())))
            };
            let (split, diff) = eval().map_err(|e| format!("{name}: {e}"))?;
            worst_split = worst_split.max(split);
            worst_diff = worst_diff.max(diff);
        }
    }
    if worst_split > 1e-12 || worst_diff > 1e-12 {
        return Err(format!("L+J-P {worst_split:.3e}, J difference {worst_diff:.3e}"));
    }

    let mut worst_odd = 0.0f64;
    let symmetric = [
        (fixtures::square_grid(32), vec![0.5, 0.5]),
        (fixtures::disc(1.0 / 64.0, 1.0), vec![0.0, 0.0]),
        (fixtures::cantor(6, 2), vec![0.5, 0.5]),
    ];
    for (cloud, centre) in symmetric {
        let set = cloud.and_then(|c| c.regular_set()).map_err(|e| e.to_string())?;
        let mu = &set.measure;
        let r = mu.diameter() / 8.0;
        let ones = SampleFunction::constant(mu.len(), 1.0);
        let t = truncated_riesz(&set, &ones, &centre, r).map_err(|e| e.to_string())?;
        let scale = compensated_sum((0..mu.len()).map(|i| {
            let d = dist(&centre, mu.point(i));
            if d >= r {
                mu.weight(i) * d.powf(-set.n_dim)
            } else {
                0.0
            }
        }));
        worst_odd = worst_odd.max(t.iter().map(|v| v.abs()).fold(0.0, f64::max) / scale);
    }
    if worst_odd > 1e-12 {
        return Err(format!("odd kernel about a centre of symmetry {worst_odd:.3e}"));
    }
    Ok(format!("L+J-P={worst_split:.3e} J-difference={worst_diff:.3e} odd-kernel={worst_odd:.3e}"))
}

fn calibration_band(set: &RegularSet, seed: u64) -> Result<(f64, f64), String> {
    let radii: Vec<f64> = (-6..=0).map(|k| 2f64.powi(k)).collect();
    let rows = remainder_calibration(set, &radii, 64, &mut rng(seed)).map_err(|e| e.to_string())?;
    let hi = rows.iter().map(|r| r.c_hat).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.c_hat).fold(f64::INFINITY, f64::min);
    let excess = rows.iter().map(|r| r.excess).fold(0.0, f64::max);
    Ok((hi / lo, excess))
}

fn taylor_remainder() -> Outcome {
    let disc = fixtures::disc(1.0 / 128.0, 1.0).and_then(|c| c.regular_set()).map_err(|e| e.to_string())?;
    let (band, excess) = calibration_band(&disc, 9)?;
    if !(band < 2.0 && excess <= 1.0 + 1e-9) {
        return Err(format!("disc: Ĉ band {band:.3}, random-f excess {excess:.3}"));
    }
    let dust = fixtures::cantor(6, 2).and_then(|c| c.with_ultrametric(0.5)).map_err(|e| e.to_string())?;
    let (sband, sexcess) = calibration_band(&dust, 10)?;
    if !(sband < 2.0 && sexcess <= 1.0 + 1e-9) {
        return Err(format!("snowflake: Ĉ band {sband:.3}, random-f excess {sexcess:.3}"));
    }
    Ok(format!("disc band={band:.3} snowflake band={sband:.3}"))
}

fn kernel_difference() -> Outcome {
    let worst_power = power_difference_max(1_000_000, &mut rng(12)).map_err(|e| e.to_string())?;
    if worst_power > 1.0 + 1e-12 {
        return Err(format!("reciprocal-power bound exceeded: ratio {worst_power}"));
    }
    let mut parts = vec![format!("power={worst_power:.6}")];
    let sets = [
        ("cantor-dust", fixtures::cantor(6, 2).and_then(|c| c.with_ultrametric(0.5))),
        ("koch", fixtures::koch(6).and_then(|c| c.with_parameter_metric())),
    ];
    for (name, set) in sets {
        let set = set.map_err(|e| e.to_string())?;
        let Metric::Snowflake { alpha, .. } = set.metric else {
            return Err(format!("{name} has no snowflake metric"));
        };
        let s = alpha * (set.n_dim - 1.0);
        let (metric, euclid) = kernel_difference_constants(&set, 20_000, &mut rng(13)).map_err(|e| e.to_string())?;
        let band = snowflake_check(&set, &SnowflakeSampling::default()).map_err(|e| e.to_string())?;
        let p = euclidean_majorant_exponent(set.n_dim, alpha);
        let euclid_bound = s * band.c1_high.powf(1.0 / alpha) / band.c1_low.powf(p);
        if metric > 1.01 * s || euclid > 1.01 * euclid_bound {
            return Err(format!("{name}: Ĉ/α(n-1) = {:.4}, euclidean ratio {:.4}", metric / s, euclid / euclid_bound));
        }
        parts.push(format!("{name} Ĉ/α(n-1)={:.4}", metric / s));
    }
    Ok(parts.join(" "))
}

fn planes() -> Outcome {
    require(
        &report(&config(Command::PlanesCheck, None))?,
        &[
            "lagrangian-coefficient",
            "complex-line-rejected",
            "special-lagrangian-su",
            "special-lagrangian-counterexample",
        ],
    )
}

fn determinism() -> Outcome {
    let mut runs = vec![
        config(Command::DemoContour, None),
        config(Command::DemoClifford, None),
        config(Command::DemoSurface, None),
        config(Command::PlanesCheck, None),
        config(Command::FixtureGen, Some(FixtureKind::Koch)),
        config(Command::FixtureGen, Some(FixtureKind::Sphere)),
    ];
    for kind in [FixtureKind::Line, FixtureKind::Grid, FixtureKind::Cantor] {
        runs.push(config(Command::MeasureDiagnose, Some(kind)));
    }
    for kind in [FixtureKind::Grid, FixtureKind::Disc, FixtureKind::Cantor, FixtureKind::Koch] {
        let mut cfg = config(Command::PotentialSweep, Some(kind));
        if kind == FixtureKind::Grid {
            cfg.spacing = Some(1.0 / 32.0);
        }
        runs.push(cfg);
    }
    for cfg in &runs {
        let a = run_suite(cfg).map_err(|e| e.to_string())?;
        let b = run_suite(cfg).map_err(|e| e.to_string())?;
        if a.report.to_canonical_json() != b.report.to_canonical_json() || a.artifact != b.artifact {
            return Err(format!("{} differs between runs", cfg.command.name()));
        }
    }
    Ok(format!("{} runs reproduced byte for byte", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("closed-curve vanishing", 5, closed_polygons),
        ("segment, corner and circle oracles", 10, segment_corner_circle),
        ("ray-star balancing and corner flattening", 10, ray_star),
        ("clifford algebra", 5, clifford_algebra),
        ("finite-difference order", 30, finite_difference_order),
        ("surface cauchy integral", 60, surface_integral),
        ("symmetry and density diagnostics", 20, symmetric_density),
        ("potential identities", 10, potential_identities),
        ("taylor-remainder calibration", 120, taylor_remainder),
        ("kernel-difference lemma", 10, kernel_difference),
        ("lagrangian planes", 5, planes),
        ("determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (k, (title, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail} (took {:.1}s, limit {limit}s)", elapsed.as_secs_f64()))
            }
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} {status} [{:.2}s] {title}: {detail}", k + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
