//! Potential operators on Ahlfors-regular point sets.
//!
//! A [`RegularSet`] is a weighted point cloud whose weights stand in for
//! `n`-dimensional Hausdorff measure. On it we evaluate
//!
//! * the potential `P(f)(x) = Σ w(z) f(z) |x-z|^{1-n}`,
//! * its local/distant split `L_r + J_r` at scale `r`,
//! * the truncated Riesz transform `T_r(f)(x) = Σ_{|x-z|≥r} w f (x-z)|x-z|^{-n-1}`,
//! * the averaged difference quotient of `P(f)` over `B(x, r)`,
//! * maximal functions over dyadic radius grids,
//!
//! and, when the set carries a snowflake metric `ρ` with
//! `C₁⁻¹|x-y| ≤ ρ(x,y)^α ≤ C₁|x-y|`, the potential with kernel
//! `ρ(x,z)^{-α(n-1)}` and the kernel-difference majorants it satisfies.
//!
//! An atom sitting exactly at the evaluation point contributes nothing.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::numeric::{compensated_sum, dist, norm, CompensatedSum};

/// Atoms closer than this to the evaluation point are the diagonal.
const SELF_TOL: f64 = 1e-12;

/// A metric on the atoms of a set, addressed by atom index.
pub trait AtomMetric: Send + Sync {
    fn rho(&self, i: usize, j: usize) -> f64;
    fn name(&self) -> &str;
}

/// `ρ(x,y) = 3^{-k/α}` where `k` is the first triadic level at which the
/// addresses of `x` and `y` differ.
#[derive(Debug, Clone)]
pub struct CantorUltrametric {
    codes: Vec<Vec<u8>>,
    alpha: f64,
}

impl CantorUltrametric {
    /// `codes[i]` is the address of atom `i`: one symbol per level.
    pub fn new(codes: Vec<Vec<u8>>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Precondition(format!("snowflake order must lie in (0,1), got {alpha}")));
        }
        Ok(Self { codes, alpha })
    }
}

impl AtomMetric for CantorUltrametric {
    fn rho(&self, i: usize, j: usize) -> f64 {
        match self.codes[i].iter().zip(&self.codes[j]).position(|(a, b)| a != b) {
            Some(level) => 3f64.powf(-((level + 1) as f64) / self.alpha),
            None => 0.0,
        }
    }

    fn name(&self) -> &str {
        "cantor-ultrametric"
    }
}

/// `ρ(x,y) = |s_x - s_y|^p` for a scalar parameter `s` per atom (for a
/// curve, its parameterization).
#[derive(Debug, Clone)]
pub struct ParameterMetric {
    params: Vec<f64>,
    power: f64,
}

impl ParameterMetric {
    pub fn new(params: Vec<f64>, power: f64) -> Self {
        Self { params, power }
    }
}

impl AtomMetric for ParameterMetric {
    fn rho(&self, i: usize, j: usize) -> f64 {
        (self.params[i] - self.params[j]).abs().powf(self.power)
    }

    fn name(&self) -> &str {
        "parameter"
    }
}

#[derive(Clone)]
pub enum Metric {
    Euclidean,
    Snowflake { rho: Arc<dyn AtomMetric>, alpha: f64 },
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => write!(f, "Euclidean"),
            Metric::Snowflake { rho, alpha } => write!(f, "Snowflake({}, α = {alpha})", rho.name()),
        }
    }
}

/// An Ahlfors-regular set of dimension `n_dim`, discretized.
#[derive(Debug, Clone)]
pub struct RegularSet {
    pub measure: DiscreteMeasure,
    pub n_dim: f64,
    pub metric: Metric,
}

impl RegularSet {
    pub fn new(measure: DiscreteMeasure, n_dim: f64) -> Result<Self> {
        if !(n_dim > 0.0) {
            return Err(Error::NonPositive(n_dim));
        }
        Ok(Self {
            measure,
            n_dim,
            metric: Metric::Euclidean,
        })
    }

    pub fn with_snowflake(mut self, rho: Arc<dyn AtomMetric>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Precondition(format!("snowflake order must lie in (0,1), got {alpha}")));
        }
        self.metric = Metric::Snowflake { rho, alpha };
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    fn snowflake(&self) -> Result<(&dyn AtomMetric, f64)> {
        match &self.metric {
            Metric::Snowflake { rho, alpha } => Ok((rho.as_ref(), *alpha)),
            Metric::Euclidean => Err(Error::MissingMetric),
        }
    }

    fn check_function(&self, f: &SampleFunction) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: f.len() });
        }
        Ok(())
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.measure.m() {
            return Err(Error::DimensionMismatch { left: self.measure.m(), right: x.len() });
        }
        Ok(())
    }

    /// Sums `term(z, |x-z|)` over atoms off the diagonal, in parallel with
    /// an order-independent reduction.
    fn sum_over_atoms<F>(&self, x: &[f64], term: F) -> f64
    where
        F: Fn(usize, f64) -> f64 + Sync + Send,
    {
        let mu = &self.measure;
        crate::numeric::par_sum(mu.len(), |i| {
            let d = dist(x, mu.point(i));
            if d <= SELF_TOL {
                0.0
            } else {
                term(i, d)
            }
        })
    }

    /// Radii `2^k`, `k = -10..=3`, clipped to `[4·spacing, diam]`.
    pub fn dyadic_radii(&self) -> Vec<f64> {
        let lo = 4.0 * self.measure.median_spacing();
        let hi = self.measure.diameter();
        (-10..=3).map(|k| 2f64.powi(k)).filter(|&r| r >= lo && r <= hi).collect()
    }
}

/// Values of a function at the atoms of a set.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFunction(pub Vec<f64>);

impl SampleFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGeometry("sample function has non-finite values".into()));
        }
        Ok(Self(values))
    }

    pub fn constant(len: usize, c: f64) -> Self {
        Self(vec![c; len])
    }

    /// Uniform values in `[-1, 1]`.
    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        Self((0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `(Σ w |f|^q)^{1/q}`.
    pub fn lq_norm(&self, set: &RegularSet, q: f64) -> f64 {
        lq_norm(&self.0, set.measure.weights(), q)
    }
}

pub fn lq_norm(values: &[f64], weights: &[f64], q: f64) -> f64 {
    compensated_sum(values.iter().zip(weights).map(|(v, w)| w * v.abs().powf(q))).powf(1.0 / q)
}

/// `P(f)(x) = Σ w(z) f(z) |x-z|^{1-n}`.
pub fn potential(set: &RegularSet, f: &SampleFunction, x: &[f64]) -> Result<f64> {
    set.check_function(f)?;
    set.check_point(x)?;
    let e = 1.0 - set.n_dim;
    let w = set.measure.weights();
    Ok(set.sum_over_atoms(x, |i, d| w[i] * f.0[i] * d.powf(e)))
}

/// Potential at every atom.
pub fn potential_at_atoms(set: &RegularSet, f: &SampleFunction) -> Result<Vec<f64>> {
    set.check_function(f)?;
    (0..set.len())
        .map(|i| potential(set, f, set.measure.point(i)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDistant {
    /// Atoms with `|z-x| < r`.
    pub local: f64,
    /// Atoms with `|z-x| ≥ r`.
    pub distant: f64,
}

pub fn split_local_distant(set: &RegularSet, f: &SampleFunction, x: &[f64], r: f64) -> Result<LocalDistant> {
    set.check_function(f)?;
    set.check_point(x)?;
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let e = 1.0 - set.n_dim;
    let w = set.measure.weights();
    let local = set.sum_over_atoms(x, |i, d| if d < r { w[i] * f.0[i] * d.powf(e) } else { 0.0 });
    let distant = set.sum_over_atoms(x, |i, d| if d >= r { w[i] * f.0[i] * d.powf(e) } else { 0.0 });
    Ok(LocalDistant { local, distant })
}

/// `J_r(f)(x) - J_r(f)(y)` as one sum of the combined kernel
/// `|x-z|^{1-n} 1[|x-z|≥r] - |y-z|^{1-n} 1[|y-z|≥r]`.
pub fn jr_difference(set: &RegularSet, f: &SampleFunction, x: &[f64], y: &[f64], r: f64) -> Result<f64> {
    set.check_function(f)?;
    set.check_point(x)?;
    set.check_point(y)?;
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let e = 1.0 - set.n_dim;
    let mu = &set.measure;
    Ok(crate::numeric::par_sum(mu.len(), |i| {
        let z = mu.point(i);
        let dx = dist(x, z);
        let dy = dist(y, z);
        let kx = if dx >= r && dx > SELF_TOL { dx.powf(e) } else { 0.0 };
        let ky = if dy >= r && dy > SELF_TOL { dy.powf(e) } else { 0.0 };
        (kx - ky) * f.0[i] * mu.weight(i)
    }))
}

/// `T_r(f)(x) = Σ_{|x-z|≥r} w f (x-z) |x-z|^{-(n+1)}`.
pub fn truncated_riesz(set: &RegularSet, f: &SampleFunction, x: &[f64], r: f64) -> Result<Vec<f64>> {
    set.check_function(f)?;
    set.check_point(x)?;
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let mu = &set.measure;
    let m = mu.m();
    let e = -(set.n_dim + 1.0);
    let rows: Vec<Option<Vec<f64>>> = (0..mu.len())
        .into_par_iter()
        .map(|i| {
            let z = mu.point(i);
            let d = dist(x, z);
            (d >= r && d > SELF_TOL).then(|| {
                let s = mu.weight(i) * f.0[i] * d.powf(e);
                x.iter().zip(z).map(|(a, b)| (a - b) * s).collect()
            })
        })
        .collect();
    let mut acc = vec![CompensatedSum::new(); m];
    for row in rows.iter().flatten() {
        for (a, v) in acc.iter_mut().zip(row) {
            a.add(*v);
        }
    }
    Ok(acc.iter().map(CompensatedSum::value).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl RemainderCheck {
    /// `lhs / rhs`, or 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.rhs
        }
    }
}

/// First-order Taylor remainder of `J_r` between `x` and `y`:
///
/// `lhs = r⁻¹ |J_r(x) - J_r(y) - (n-1)(y-x)·T_r(x)|`,
/// `rhs = Σ w |f| r / (|x-z|^{n+1} + r^{n+1})`.
pub fn taylor_remainder_check(set: &RegularSet, f: &SampleFunction, x: &[f64], y: &[f64], r: f64) -> Result<RemainderCheck> {
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let sep = dist(x, y);
    if sep > r {
        return Err(Error::Precondition(format!("|x - y| = {sep} exceeds r = {r}")));
    }
    let dj = jr_difference(set, f, x, y, r)?;
    let t = truncated_riesz(set, f, x, r)?;
    let n = set.n_dim;
    let drift: f64 = y.iter().zip(x).zip(&t).map(|((yi, xi), ti)| (yi - xi) * ti).sum();
    let lhs = (dj - (n - 1.0) * drift).abs() / r;
    let w = set.measure.weights();
    let rn1 = r.powf(n + 1.0);
    let rhs = set.sum_over_atoms(x, |i, d| w[i] * f.0[i].abs() * r / (d.powf(n + 1.0) + rn1));
    Ok(RemainderCheck { lhs, rhs })
}

/// The snowflake counterpart of [`taylor_remainder_check`] for atoms `x`,
/// `y` with `|x-y| ≤ r`, without a first-order term:
///
/// `lhs = r⁻¹ |J̃_r(x) - J̃_r(y)|` with kernel `ρ^{-α(n-1)}` cut at Euclidean
/// distance `r`, and
/// `rhs = Σ w |f| r^{1/α-1} / (|x-z|^{n-1+1/α} + r^{n-1+1/α})`.
pub fn snowflake_remainder_check(set: &RegularSet, f: &SampleFunction, x: usize, y: usize, r: f64) -> Result<RemainderCheck> {
    set.check_function(f)?;
    let (rho, alpha) = set.snowflake()?;
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let mu = &set.measure;
    let (px, py) = (mu.point(x), mu.point(y));
    let sep = dist(px, py);
    if sep > r {
        return Err(Error::Precondition(format!("|x - y| = {sep} exceeds r = {r}")));
    }
    let s = alpha * (set.n_dim - 1.0);
    let diff = crate::numeric::par_sum(mu.len(), |i| {
        let z = mu.point(i);
        let kx = if dist(px, z) >= r && i != x { rho.rho(x, i).powf(-s) } else { 0.0 };
        let ky = if dist(py, z) >= r && i != y { rho.rho(y, i).powf(-s) } else { 0.0 };
        (kx - ky) * f.0[i] * mu.weight(i)
    });
    let lhs = diff.abs() / r;
    let p = set.n_dim - 1.0 + 1.0 / alpha;
    let num = r.powf(1.0 / alpha - 1.0);
    let rp = r.powf(p);
    let w = mu.weights();
    let rhs = set.sum_over_atoms(px, |i, d| w[i] * f.0[i].abs() * num / (d.powf(p) + rp));
    Ok(RemainderCheck { lhs, rhs })
}

/// Per-atom coefficients of a remainder estimate: for every `f`,
/// `lhs = |Σ a f|` and `rhs = Σ b |f|`.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderTerms {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl RemainderTerms {
    pub fn evaluate(&self, f: &SampleFunction) -> Result<RemainderCheck> {
        if f.len() != self.a.len() {
            return Err(Error::DimensionMismatch { left: self.a.len(), right: f.len() });
        }
        Ok(RemainderCheck {
            lhs: compensated_sum(self.a.iter().zip(&f.0).map(|(a, v)| a * v)).abs(),
            rhs: compensated_sum(self.b.iter().zip(&f.0).map(|(b, v)| b * v.abs())),
        })
    }

    /// The smallest `C` with `lhs ≤ C·rhs` for every `f`: `max |a|/b`.
    pub fn extremal_constant(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .filter(|(_, &b)| b > 0.0)
            .map(|(a, b)| a.abs() / b)
            .fold(0.0, f64::max)
    }

    /// Random magnitudes in `[0, 1]` carrying the sign of `a`, so that the
    /// remainder sum does not cancel.
    pub fn aligned_trial(&self, rng: &mut impl Rng) -> SampleFunction {
        SampleFunction(
            self.a
                .iter()
                .map(|a| {
                    let u: f64 = rng.gen_range(0.0..=1.0);
                    if *a < 0.0 {
                        -u
                    } else {
                        u
                    }
                })
                .collect(),
        )
    }
}

/// Coefficients of [`taylor_remainder_check`].
pub fn taylor_remainder_terms(set: &RegularSet, x: &[f64], y: &[f64], r: f64) -> Result<RemainderTerms> {
    set.check_point(x)?;
    set.check_point(y)?;
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let sep = dist(x, y);
    if sep > r {
        return Err(Error::Precondition(format!("|x - y| = {sep} exceeds r = {r}")));
    }
    let n = set.n_dim;
    let mu = &set.measure;
    let rn1 = r.powf(n + 1.0);
    let (a, b) = (0..mu.len())
        .into_par_iter()
        .map(|i| {
            let z = mu.point(i);
            let dx = dist(x, z);
            let dy = dist(y, z);
            let w = mu.weight(i);
            if dx <= SELF_TOL {
                let ky = if dy >= r { dy.powf(1.0 - n) } else { 0.0 };
                return (-ky * w / r, 0.0);
            }
            let (kx, drift) = if dx >= r {
                let proj: f64 = y.iter().zip(x).zip(z).map(|((yi, xi), zi)| (yi - xi) * (xi - zi)).sum();
                (dx.powf(1.0 - n), (n - 1.0) * proj * dx.powf(-(n + 1.0)))
            } else {
                (0.0, 0.0)
            };
            let ky = if dy >= r && dy > SELF_TOL { dy.powf(1.0 - n) } else { 0.0 };
            ((kx - ky - drift) * w / r, w * r / (dx.powf(n + 1.0) + rn1))
        })
        .unzip();
    Ok(RemainderTerms { a, b })
}

/// Coefficients of [`snowflake_remainder_check`].
pub fn snowflake_remainder_terms(set: &RegularSet, x: usize, y: usize, r: f64) -> Result<RemainderTerms> {
    let (rho, alpha) = set.snowflake()?;
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    let mu = &set.measure;
    let (px, py) = (mu.point(x), mu.point(y));
    let sep = dist(px, py);
    if sep > r {
        return Err(Error::Precondition(format!("|x - y| = {sep} exceeds r = {r}")));
    }
    let s = alpha * (set.n_dim - 1.0);
    let p = set.n_dim - 1.0 + 1.0 / alpha;
    let num = r.powf(1.0 / alpha - 1.0);
    let rp = r.powf(p);
    let (a, b) = (0..mu.len())
        .into_par_iter()
        .map(|i| {
            let z = mu.point(i);
            let dx = dist(px, z);
            let kx = if dx >= r && i != x { rho.rho(x, i).powf(-s) } else { 0.0 };
            let ky = if dist(py, z) >= r && i != y { rho.rho(y, i).powf(-s) } else { 0.0 };
            let w = mu.weight(i);
            let b = if i == x { 0.0 } else { w * num / (dx.powf(p) + rp) };
            ((kx - ky) * w / r, b)
        })
        .unzip();
    Ok(RemainderTerms { a, b })
}

/// `μ(B(x,r))⁻¹ Σ_{y ∈ B(x,r)} w(y) |P(f)(x) - P(f)(y)| / r`.
pub fn oscillation_functional(set: &RegularSet, f: &SampleFunction, x: &[f64], r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    set.check_function(f)?;
    set.check_point(x)?;
    let ball = set.measure.ball_indices(x, r, false);
    if ball.is_empty() {
        return Err(Error::EmptyBall { radius: r });
    }
    let px = potential(set, f, x)?;
    let mu = &set.measure;
    let terms: Vec<(f64, f64)> = ball
        .par_iter()
        .map(|&i| {
            let py = potential(set, f, mu.point(i))?;
            Ok((mu.weight(i) * (px - py).abs() / r, mu.weight(i)))
        })
        .collect::<Result<_>>()?;
    let num = compensated_sum(terms.iter().map(|t| t.0));
    let mass = compensated_sum(terms.iter().map(|t| t.1));
    Ok(num / mass)
}

/// Same as [`oscillation_functional`] at atom `i`, reusing precomputed
/// potentials at every atom.
pub fn oscillation_at_atom(set: &RegularSet, potentials: &[f64], i: usize, r: f64) -> Result<f64> {
    let mu = &set.measure;
    let ball = mu.ball_indices(mu.point(i), r, false);
    if ball.is_empty() {
        return Err(Error::EmptyBall { radius: r });
    }
    let num = compensated_sum(ball.iter().map(|&j| mu.weight(j) * (potentials[i] - potentials[j]).abs() / r));
    let mass = compensated_sum(ball.iter().map(|&j| mu.weight(j)));
    Ok(num / mass)
}

/// Supremum of the oscillation functional over `radii` (empty balls skipped).
pub fn oscillation_sup(set: &RegularSet, f: &SampleFunction, x: &[f64], radii: &[f64]) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    let mut best = 0.0f64;
    for &r in radii {
        match oscillation_functional(set, f, x, r) {
            Ok(v) => best = best.max(v),
            Err(Error::EmptyBall { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Hardy–Littlewood maximal function over a radius grid:
/// `max_r μ(B(x,r))⁻¹ Σ_{B(x,r)} w |f|`. Empty balls are skipped.
pub fn hl_maximal(set: &RegularSet, f: &SampleFunction, x: &[f64], radii: &[f64]) -> Result<f64> {
    set.check_function(f)?;
    set.check_point(x)?;
    if radii.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    let mu = &set.measure;
    let mut best = 0.0f64;
    for &r in radii {
        let ball = mu.ball_indices(x, r, false);
        let mass = compensated_sum(ball.iter().map(|&i| mu.weight(i)));
        if mass > 0.0 {
            let avg = compensated_sum(ball.iter().map(|&i| mu.weight(i) * f.0[i].abs())) / mass;
            best = best.max(avg);
        }
    }
    Ok(best)
}

/// `max_r |T_r(f)(x)|` over a radius grid.
pub fn maximal_truncated(set: &RegularSet, f: &SampleFunction, x: &[f64], radii: &[f64]) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    let mut best = 0.0f64;
    for &r in radii {
        best = best.max(norm(&truncated_riesz(set, f, x, r)?));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnowflakeSampling {
    /// Pair budget; all pairs are used when there are at most this many.
    pub pairs: usize,
    pub triples: usize,
    pub seed: u64,
}

impl Default for SnowflakeSampling {
    fn default() -> Self {
        Self {
            pairs: 200_000,
            triples: 20_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnowflakeBand {
    /// `min ρ(x,y)^α / |x-y|` over the sampled pairs.
    pub c1_low: f64,
    /// `max ρ(x,y)^α / |x-y|`.
    pub c1_high: f64,
}

impl SnowflakeBand {
    /// The constant `C₁` in `C₁⁻¹|x-y| ≤ ρ^α ≤ C₁|x-y|`.
    pub fn c1(&self) -> f64 {
        self.c1_high.max(1.0 / self.c1_low)
    }
}

/// Measures the snowflake comparison band and spot-checks the triangle
/// inequality for `ρ`.
pub fn snowflake_check(set: &RegularSet, sampling: &SnowflakeSampling) -> Result<SnowflakeBand> {
    let (rho, alpha) = set.snowflake()?;
    let mu = &set.measure;
    let n = mu.len();
    if n < 2 {
        return Err(Error::Empty("need at least two atoms"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);

    let total_pairs = n * (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = if total_pairs <= sampling.pairs {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    } else {
        (0..sampling.pairs)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                (i, j)
            })
            .collect()
    };
    let (c1_low, c1_high) = pairs
        .par_iter()
        .map(|&(i, j)| rho.rho(i, j).powf(alpha) / dist(mu.point(i), mu.point(j)))
        .fold(|| (f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)))
        .reduce(|| (f64::INFINITY, 0.0f64), |a, b| (a.0.min(b.0), a.1.max(b.1)));

    if n >= 3 {
        for _ in 0..sampling.triples {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let k = rng.gen_range(0..n);
            if i == j || j == k || i == k {
                continue;
            }
            let (a, b, c) = (rho.rho(i, k), rho.rho(i, j), rho.rho(j, k));
            let excess = a - (b + c);
            if excess > 1e-9 * (b + c).max(f64::MIN_POSITIVE) {
                return Err(Error::TriangleViolation { i, j, k, excess });
            }
        }
    }
    Ok(SnowflakeBand { c1_low, c1_high })
}

/// `P̃(f)(x) = Σ w(z) f(z) ρ(x,z)^{-α(n-1)}` at atom `x`.
pub fn potential_snowflake(set: &RegularSet, f: &SampleFunction, x: usize) -> Result<f64> {
    set.check_function(f)?;
    let (rho, alpha) = set.snowflake()?;
    let s = alpha * (set.n_dim - 1.0);
    let mu = &set.measure;
    Ok(crate::numeric::par_sum(mu.len(), |i| {
        if i == x {
            return 0.0;
        }
        let d = rho.rho(x, i);
        if d <= 0.0 {
            0.0
        } else {
            mu.weight(i) * f.0[i] * d.powf(-s)
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerDifference {
    /// `|a^{-s} - b^{-s}|`.
    pub lhs: f64,
    /// `s |a-b| / min(a,b)^{s+1}`.
    pub rhs: f64,
}

/// Mean-value bound for reciprocal powers of positive numbers.
pub fn power_difference_bound(a: f64, b: f64, s: f64) -> Result<PowerDifference> {
    for v in [a, b, s] {
        if !(v > 0.0) {
            return Err(Error::NonPositive(v));
        }
    }
    let lhs = (a.powf(-s) - b.powf(-s)).abs();
    let rhs = s * (a - b).abs() / a.min(b).powf(s + 1.0);
    Ok(PowerDifference { lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDifference {
    /// `|ρ(x,z)^{-s} - ρ(y,z)^{-s}|`, `s = α(n-1)`.
    pub lhs: f64,
    /// `ρ(x,y) / min(ρ(x,z), ρ(y,z))^{s+1}`.
    pub rhs_metric: f64,
    /// `|x-y|^{1/α} / min(|x-z|, |y-z|)^{n-1+1/α}`.
    pub rhs_euclidean: f64,
}

/// Exponent `n - 1 + 1/α` of the Euclidean kernel-difference majorant.
pub fn euclidean_majorant_exponent(n_dim: f64, alpha: f64) -> f64 {
    n_dim - 1.0 + 1.0 / alpha
}

/// Kernel difference for atoms `x`, `y`, `z` with both majorants at unit
/// constant.
pub fn kernel_difference_check(set: &RegularSet, x: usize, y: usize, z: usize) -> Result<KernelDifference> {
    let (rho, alpha) = set.snowflake()?;
    if z == x || z == y {
        return Err(Error::Coincident);
    }
    let s = alpha * (set.n_dim - 1.0);
    let (rxz, ryz, rxy) = (rho.rho(x, z), rho.rho(y, z), rho.rho(x, y));
    if rxz <= 0.0 || ryz <= 0.0 {
        return Err(Error::Coincident);
    }
    let mu = &set.measure;
    let (px, py, pz) = (mu.point(x), mu.point(y), mu.point(z));
    let lhs = (rxz.powf(-s) - ryz.powf(-s)).abs();
    let rhs_metric = rxy / rxz.min(ryz).powf(s + 1.0);
    let p = euclidean_majorant_exponent(set.n_dim, alpha);
    let rhs_euclidean = dist(px, py).powf(1.0 / alpha) / dist(px, pz).min(dist(py, pz)).powf(p);
    Ok(KernelDifference {
        lhs,
        rhs_metric,
        rhs_euclidean,
    })
}

/// How random test functions for operator-norm estimates are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialFamily {
    /// Independent uniform values in `[-1, 1]`.
    Noise,
    /// Independent uniform values in `[0, 1]`.
    Positive,
    /// Signed indicator of a ball around a random atom, radius log-uniform
    /// between the atom spacing and the diameter.
    Bumps,
}

pub fn random_trial(set: &RegularSet, family: TrialFamily, rng: &mut impl Rng) -> SampleFunction {
    let mu = &set.measure;
    match family {
        TrialFamily::Noise => SampleFunction::random(mu.len(), rng),
        TrialFamily::Positive => SampleFunction((0..mu.len()).map(|_| rng.gen_range(0.0..=1.0)).collect()),
        TrialFamily::Bumps => {
            let lo = mu.median_spacing().max(f64::MIN_POSITIVE);
            let hi = mu.diameter().max(lo);
            let center = rng.gen_range(0..mu.len());
            let radius = lo * (hi / lo).powf(rng.gen_range(0.0..=1.0));
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let c = mu.point(center).to_vec();
            SampleFunction(
                mu.points()
                    .map(|p| if dist(p, &c) <= radius { sign } else { 0.0 })
                    .collect(),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub operator: &'static str,
    pub q: f64,
    pub r: f64,
    /// `max over trials of ‖Op f‖_q / ‖f‖_q`.
    pub norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub trials: usize,
    pub seed: u64,
    pub family: TrialFamily,
    /// Also estimate the `L^q` gain of the oscillation functional.
    pub oscillation: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            trials: 64,
            seed: 1,
            family: TrialFamily::Bumps,
            oscillation: false,
        }
    }
}

fn real_pow(d: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 64.0 {
        d.powi(e as i32)
    } else {
        d.powf(e)
    }
}

/// `|T_r f|` at every atom for every radius in the ascending list `radii`,
/// in one pass over atom pairs: each pair is binned by the largest radius
/// not exceeding its distance and the bins are suffix-summed.
/// Returned row-major by radius.
pub fn truncated_riesz_all(set: &RegularSet, f: &SampleFunction, radii: &[f64]) -> Result<Vec<Vec<f64>>> {
    set.check_function(f)?;
    if radii.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || !(radii[0] > 0.0) {
        return Err(Error::Precondition("radii must be positive and strictly increasing".into()));
    }
    let mu = &set.measure;
    let m = mu.m();
    let e = -(set.n_dim + 1.0);
    let nr = radii.len();
    let per_atom: Vec<Vec<f64>> = (0..mu.len())
        .into_par_iter()
        .map(|i| {
            let x = mu.point(i);
            let mut acc = vec![0.0; nr * m];
            for j in 0..mu.len() {
                let z = mu.point(j);
                let d = dist(x, z);
                if d < radii[0] || d <= SELF_TOL {
                    continue;
                }
                let b = radii.partition_point(|&r| r <= d) - 1;
                let s = mu.weight(j) * f.0[j] * real_pow(d, e);
                for k in 0..m {
                    acc[b * m + k] += (x[k] - z[k]) * s;
                }
            }
            for b in (0..nr - 1).rev() {
                for k in 0..m {
                    acc[b * m + k] += acc[(b + 1) * m + k];
                }
            }
            (0..nr).map(|b| norm(&acc[b * m..(b + 1) * m])).collect()
        })
        .collect();
    Ok((0..nr).map(|b| per_atom.iter().map(|row| row[b]).collect()).collect())
}

/// Randomized lower estimates of `‖T_r‖_{L^q→L^q}` (and optionally of the
/// oscillation functional's `L^q` gain) for each `(r, q)`: the maximum over
/// trial functions of `‖Op f‖_q / ‖f‖_q`.
pub fn estimate_operator_norms(set: &RegularSet, radii: &[f64], qs: &[f64], cfg: &SweepConfig) -> Result<Vec<NormEstimate>> {
    if radii.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let trials: Vec<SampleFunction> = (0..cfg.trials).map(|_| random_trial(set, cfg.family, &mut rng)).collect();
    let mu = &set.measure;
    let w = mu.weights();
    let cells = sorted.len() * qs.len();
    let mut t_best = vec![0.0f64; cells];
    let mut osc_best = vec![0.0f64; cells];
    for f in &trials {
        let fnorms: Vec<f64> = qs.iter().map(|&q| f.lq_norm(set, q)).collect();
        if fnorms.iter().any(|&v| v == 0.0) {
            continue;
        }
        let tvals = truncated_riesz_all(set, f, &sorted)?;
        let pot = if cfg.oscillation { Some(potential_at_atoms(set, f)?) } else { None };
        for (ri, &r) in sorted.iter().enumerate() {
            let ovals: Option<Vec<f64>> = match &pot {
                Some(pot) => Some(
                    (0..mu.len())
                        .into_par_iter()
                        .map(|i| match oscillation_at_atom(set, pot, i, r) {
                            Err(Error::EmptyBall { .. }) => Ok(0.0),
                            other => other,
                        })
                        .collect::<Result<_>>()?,
                ),
                None => None,
            };
            for (qi, &q) in qs.iter().enumerate() {
                let k = ri * qs.len() + qi;
                t_best[k] = t_best[k].max(lq_norm(&tvals[ri], w, q) / fnorms[qi]);
                if let Some(o) = &ovals {
                    osc_best[k] = osc_best[k].max(lq_norm(o, w, q) / fnorms[qi]);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(2 * cells);
    for (ri, &r) in sorted.iter().enumerate() {
        for (qi, &q) in qs.iter().enumerate() {
            let k = ri * qs.len() + qi;
            out.push(NormEstimate { operator: "T_r", q, r, norm: t_best[k] });
            if cfg.oscillation {
                out.push(NormEstimate { operator: "osc_r", q, r, norm: osc_best[k] });
            }
        }
    }
    Ok(out)
}

/// `max / min` of the estimates for one operator and exponent over the
/// radii in `[r_lo, r_hi]`.
pub fn norm_band(estimates: &[NormEstimate], operator: &str, q: f64, r_lo: f64, r_hi: f64) -> Option<f64> {
    let vals: Vec<f64> = estimates
        .iter()
        .filter(|e| e.operator == operator && e.q == q && e.r >= r_lo && e.r <= r_hi)
        .map(|e| e.norm)
        .collect();
    if vals.is_empty() {
        return None;
    }
    let hi = vals.iter().copied().fold(0.0, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    Some(hi / lo)
}
