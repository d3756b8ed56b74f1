//! Weighted point clouds standing in for Borel measures, with the
//! diagnostics used on them: first-moment symmetry defects, density ratios,
//! Menger curvature, and empirical Ahlfors-regularity constants.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, dist, fit_slope};

const DEDUP_TOL: f64 = 1e-12;

/// Uniform-grid hash over point indices.
#[derive(Debug, Clone)]
struct GridIndex {
    cell: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl GridIndex {
    fn build(m: usize, coords: &[f64], cell: f64) -> Self {
        let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in coords.chunks_exact(m).enumerate() {
            cells.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { cell, cells }
    }

    fn key(p: &[f64], cell: f64) -> Vec<i64> {
        p.iter().map(|x| (x / cell).floor() as i64).collect()
    }

    /// Number of cells a ball query of radius `r` would visit.
    fn scan_cost(&self, m: usize, r: f64) -> f64 {
        let span = 2.0 * (r / self.cell).ceil() + 1.0;
        span.powi(m as i32)
    }

    fn for_each_in_ball<F: FnMut(usize)>(&self, m: usize, center: &[f64], r: f64, mut visit: F) {
        let lo: Vec<i64> = center.iter().map(|x| ((x - r) / self.cell).floor() as i64).collect();
        let hi: Vec<i64> = center.iter().map(|x| ((x + r) / self.cell).floor() as i64).collect();
        let mut key = lo.clone();
        loop {
            if let Some(ids) = self.cells.get(&key) {
                ids.iter().for_each(|&i| visit(i));
            }
            // odometer increment
            let mut axis = 0;
            loop {
                if axis == m {
                    return;
                }
                key[axis] += 1;
                if key[axis] <= hi[axis] {
                    break;
                }
                key[axis] = lo[axis];
                axis += 1;
            }
        }
    }
}

/// A finite weighted point cloud in `R^m`.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    m: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    support_radius: f64,
    index: GridIndex,
    merged: usize,
    diameter: OnceLock<f64>,
    nn: OnceLock<Vec<f64>>,
}

impl DiscreteMeasure {
    /// Builds a measure, merging atoms closer than `1e-12` (masses summed).
    pub fn new(m: usize, points: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGeometry("ambient dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::Empty("measure has no atoms"));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { left: points.len(), right: weights.len() });
        }
        for (k, p) in points.iter().enumerate() {
            if p.len() != m {
                return Err(Error::DimensionMismatch { left: m, right: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidGeometry(format!("atom {k} has a non-finite coordinate")));
            }
            if !(weights[k] > 0.0) || !weights[k].is_finite() {
                return Err(Error::InvalidGeometry(format!("atom {k} has nonpositive weight {}", weights[k])));
            }
        }

        // Sort by first coordinate and merge within a sliding window; the
        // surviving atoms keep the order of their first appearance.
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
        let mut rep = vec![0usize; points.len()];
        let mut window: Vec<usize> = Vec::new();
        let mut window_start = 0usize;
        for &i in &order {
            let p = &points[i];
            while window_start < window.len() && points[window[window_start]][0] < p[0] - DEDUP_TOL {
                window_start += 1;
            }
            match window[window_start..].iter().find(|&&k| dist(&points[k], p) <= DEDUP_TOL) {
                Some(&k) => rep[i] = rep[k],
                None => {
                    rep[i] = i;
                    window.push(i);
                }
            }
        }
        let mut slot = vec![usize::MAX; points.len()];
        let mut coords: Vec<f64> = Vec::with_capacity(points.len() * m);
        let mut kept_w: Vec<f64> = Vec::with_capacity(points.len());
        for i in 0..points.len() {
            let r = rep[i];
            if slot[r] == usize::MAX {
                slot[r] = kept_w.len();
                coords.extend_from_slice(&points[r]);
                kept_w.push(0.0);
            }
            kept_w[slot[r]] += weights[i];
        }
        let merged = points.len() - kept_w.len();

        let extent = (0..m)
            .map(|a| {
                let (lo, hi) = coords
                    .iter()
                    .skip(a)
                    .step_by(m)
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                hi - lo
            })
            .fold(0.0, f64::max);
        let n = kept_w.len();
        let cell = if extent > 0.0 { extent / (n as f64).powf(1.0 / m as f64) } else { 1.0 };
        let index = GridIndex::build(m, &coords, cell);
        let mut mu = Self {
            m,
            coords,
            weights: kept_w,
            support_radius: 0.0,
            index,
            merged,
            diameter: OnceLock::new(),
            nn: OnceLock::new(),
        };
        let spacing = mu.median_spacing();
        if spacing > 0.0 && spacing.is_finite() {
            mu.index = GridIndex::build(m, &mu.coords, 2.0 * spacing);
            mu.support_radius = 2.0 * spacing;
        } else {
            mu.support_radius = DEDUP_TOL;
        }
        Ok(mu)
    }

    /// All atoms with unit weight.
    pub fn uniform(m: usize, points: &[Vec<f64>], weight: f64) -> Result<Self> {
        Self::new(m, points, &vec![weight; points.len()])
    }

    pub fn with_support_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::NonPositive(r));
        }
        self.support_radius = r;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Atoms removed by the deduplication rule.
    pub fn merged_count(&self) -> usize {
        self.merged
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.m..(i + 1) * self.m]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.m)
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Applies `f` to every atom position, keeping weights.
    pub fn map_points<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let pts: Vec<Vec<f64>> = self.points().map(f).collect();
        let m = pts[0].len();
        Self::new(m, &pts, &self.weights)
    }

    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        let pts: Vec<Vec<f64>> = self.points().map(<[f64]>::to_vec).collect();
        Self::new(self.m, &pts, weights)
    }

    /// Calls `visit(i)` for each atom in the ball `B(center, r)`, open or closed.
    pub fn for_each_in_ball<F: FnMut(usize)>(&self, center: &[f64], r: f64, closed: bool, mut visit: F) {
        let inside = |i: usize| {
            let d = dist(self.point(i), center);
            if closed {
                d <= r
            } else {
                d < r
            }
        };
        if self.index.scan_cost(self.m, r) > self.len() as f64 {
            for i in 0..self.len() {
                if inside(i) {
                    visit(i);
                }
            }
        } else {
            self.index.for_each_in_ball(self.m, center, r, |i| {
                if inside(i) {
                    visit(i)
                }
            });
        }
    }

    /// Atom indices in the ball, sorted.
    pub fn ball_indices(&self, center: &[f64], r: f64, closed: bool) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_in_ball(center, r, closed, |i| out.push(i));
        out.sort_unstable();
        out
    }

    pub fn ball_mass(&self, center: &[f64], r: f64, closed: bool) -> f64 {
        compensated_sum(self.ball_indices(center, r, closed).into_iter().map(|i| self.weights[i]))
    }

    /// Distance from `x` to the nearest atom, skipping atom `skip`.
    fn nearest_excluding(&self, x: &[f64], skip: Option<usize>) -> f64 {
        let mut r = self.index.cell;
        loop {
            let mut best = f64::INFINITY;
            self.for_each_in_ball(x, r, true, |i| {
                if Some(i) != skip {
                    best = best.min(dist(self.point(i), x));
                }
            });
            if best.is_finite() {
                return best;
            }
            if self.index.scan_cost(self.m, r) > self.len() as f64 {
                // The last query was a full scan; nothing else to find.
                return best;
            }
            r *= 2.0;
        }
    }

    pub fn nearest_distance(&self, x: &[f64]) -> f64 {
        self.nearest_excluding(x, None)
    }

    /// Nearest-neighbour distance of every atom.
    pub fn nn_distances(&self) -> &[f64] {
        self.nn.get_or_init(|| {
            if self.len() < 2 {
                return vec![0.0; self.len()];
            }
            (0..self.len())
                .into_par_iter()
                .map(|i| self.nearest_excluding(self.point(i), Some(i)))
                .collect()
        })
    }

    pub fn median_spacing(&self) -> f64 {
        let mut d = self.nn_distances().to_vec();
        if d.is_empty() {
            return 0.0;
        }
        d.sort_by(f64::total_cmp);
        d[d.len() / 2]
    }

    pub fn min_spacing(&self) -> f64 {
        self.nn_distances().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Exact diameter. A double sweep gives a lower bound `D`; only atoms
    /// farther than `D - R` from the bounding-box centre (`R` the largest
    /// such distance) can realize it, and those are compared pairwise.
    pub fn diameter(&self) -> f64 {
        *self.diameter.get_or_init(|| {
            let n = self.len();
            if n < 2 {
                return 0.0;
            }
            let farthest = |p: &[f64]| {
                (0..n)
                    .into_par_iter()
                    .map(|j| (dist(p, self.point(j)), j))
                    .reduce(|| (0.0, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
            };
            let (_, a) = farthest(self.point(0));
            let (lower, _) = farthest(self.point(a));
            let centre: Vec<f64> = (0..self.m)
                .map(|k| {
                    let (lo, hi) = (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
                        let x = self.point(i)[k];
                        (lo.min(x), hi.max(x))
                    });
                    0.5 * (lo + hi)
                })
                .collect();
            let radial: Vec<f64> = (0..n).map(|i| dist(self.point(i), &centre)).collect();
            let reach = radial.iter().copied().fold(0.0, f64::max);
            let candidates: Vec<usize> = (0..n).filter(|&i| radial[i] + reach >= lower).collect();
            let best = candidates
                .par_iter()
                .enumerate()
                .map(|(k, &i)| {
                    let p = self.point(i);
                    candidates[k + 1..].iter().map(|&j| dist(p, self.point(j))).fold(0.0, f64::max)
                })
                .reduce(|| 0.0, f64::max);
            best.max(lower)
        })
    }

    pub fn in_support(&self, a: &[f64]) -> bool {
        self.nearest_distance(a) <= self.support_radius
    }

    fn require_support(&self, a: &[f64]) -> Result<()> {
        if a.len() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: a.len() });
        }
        let d = self.nearest_distance(a);
        if d > self.support_radius {
            return Err(Error::NotInSupport { distance: d });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryDefect {
    /// `Σ_{|z-a|<r} w(z) (z - a)`.
    pub moment: Vec<f64>,
    /// `μ(B(a, r))`.
    pub mass: f64,
    /// `|moment| / (r μ(B(a,r)))`, when the ball has mass.
    pub normalized: Option<f64>,
}

/// First moment of `μ` over the open ball `B(a, r)` about `a`.
pub fn symmetry_defect(mu: &DiscreteMeasure, a: &[f64], r: f64) -> Result<SymmetryDefect> {
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    mu.require_support(a)?;
    let ids = mu.ball_indices(a, r, false);
    let mut moment = vec![0.0; mu.m];
    for (axis, out) in moment.iter_mut().enumerate() {
        *out = compensated_sum(ids.iter().map(|&i| mu.weight(i) * (mu.point(i)[axis] - a[axis])));
    }
    let mass = compensated_sum(ids.iter().map(|&i| mu.weight(i)));
    let normalized = (mass > 0.0).then(|| crate::numeric::norm(&moment) / (r * mass));
    Ok(SymmetryDefect { moment, mass, normalized })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub center: Vec<f64>,
    pub radius: f64,
    pub normalized_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryProfile {
    pub rows: Vec<ProfileRow>,
    /// Slope of log(mean defect) against log(r); `None` when fewer than
    /// three radii have a positive mean defect.
    pub alpha_hat: Option<f64>,
}

/// Normalized defects over a grid of centers and radii, with the fitted
/// flatness exponent `α̂` in `defect ≈ C r^α̂`.
pub fn symmetry_profile(mu: &DiscreteMeasure, centers: &[Vec<f64>], radii: &[f64]) -> Result<SymmetryProfile> {
    if radii.len() < 3 {
        return Err(Error::TooFewRadii { needed: 3, got: radii.len() });
    }
    let mut rows = Vec::with_capacity(centers.len() * radii.len());
    let mut log_r = Vec::new();
    let mut log_d = Vec::new();
    for &r in radii {
        let mut total = 0.0;
        for c in centers {
            let d = symmetry_defect(mu, c, r)?.normalized.unwrap_or(0.0);
            total += d;
            rows.push(ProfileRow {
                center: c.clone(),
                radius: r,
                normalized_defect: d,
            });
        }
        let mean = total / centers.len().max(1) as f64;
        if mean > 0.0 {
            log_r.push(r.ln());
            log_d.push(mean.ln());
        }
    }
    let alpha_hat = (log_r.len() >= 3).then(|| fit_slope(&log_r, &log_d));
    Ok(SymmetryProfile { rows, alpha_hat })
}

/// `μ(B(a, r)) / r^{m_dim}` over the open ball.
pub fn density_ratio(mu: &DiscreteMeasure, a: &[f64], r: f64, m_dim: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositive(r));
    }
    if !(m_dim > 0.0) {
        return Err(Error::NonPositive(m_dim));
    }
    mu.require_support(a)?;
    Ok(mu.ball_mass(a, r, false) / r.powf(m_dim))
}

/// Reciprocal circumradius `4·Area(xyz) / (|x-y| |y-z| |z-x|)`; zero for
/// collinear triples.
pub fn menger_curvature(x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() != z.len() {
        return Err(Error::DimensionMismatch { left: x.len(), right: y.len().max(z.len()) });
    }
    let a = dist(x, y);
    let b = dist(y, z);
    let c = dist(z, x);
    if a == 0.0 || b == 0.0 || c == 0.0 {
        return Err(Error::Coincident);
    }
    // Area from the wedge components of (y-x)∧(z-x); exact zero on collinear
    // triples, unlike Heron's formula.
    let u: Vec<f64> = y.iter().zip(x).map(|(p, q)| p - q).collect();
    let v: Vec<f64> = z.iter().zip(x).map(|(p, q)| p - q).collect();
    let mut wedge = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let w = u[i] * v[j] - u[j] * v[i];
            wedge += w * w;
        }
    }
    let area = 0.5 * wedge.sqrt();
    Ok(4.0 * area / (a * b * c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AhlforsConstants {
    /// `min μ(B̄(x,t)) / t^n` over the samples.
    pub c_low: f64,
    /// `max μ(B̄(x,t)) / t^n` over the samples.
    pub c_high: f64,
    /// `max(1/c_low, c_high)`.
    pub constant: f64,
    /// The scale window actually used after clipping.
    pub t_min: f64,
    pub t_max: f64,
}

impl AhlforsConstants {
    pub fn band(&self) -> f64 {
        self.c_high / self.c_low
    }
}

/// Number of log-spaced scales used by [`ahlfors_constants`].
pub const AHLFORS_SCALES: usize = 32;

/// Empirical Ahlfors-regularity constants over closed balls, sampling
/// `samples` atoms (evenly strided) and log-spaced `t` in `t_range`
/// clipped to `[10 · min spacing, diam]`.
pub fn ahlfors_constants(mu: &DiscreteMeasure, n_dim: f64, samples: usize, t_range: (f64, f64)) -> Result<AhlforsConstants> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    if !(n_dim > 0.0) {
        return Err(Error::NonPositive(n_dim));
    }
    let t_min = t_range.0.max(10.0 * mu.min_spacing());
    let t_max = t_range.1.min(mu.diameter());
    if !(t_min < t_max) {
        return Err(Error::Empty("scale range after clipping"));
    }
    let stride = (mu.len() / samples.min(mu.len())).max(1);
    let centers: Vec<usize> = (0..mu.len()).step_by(stride).take(samples).collect();
    let scales: Vec<f64> = (0..AHLFORS_SCALES)
        .map(|k| t_min * (t_max / t_min).powf(k as f64 / (AHLFORS_SCALES - 1) as f64))
        .collect();
    let ratios: Vec<(f64, f64)> = centers
        .par_iter()
        .map(|&i| {
            let x = mu.point(i);
            scales.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| {
                let ratio = mu.ball_mass(x, t, true) / t.powf(n_dim);
                (lo.min(ratio), hi.max(ratio))
            })
        })
        .collect();
    let c_low = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let c_high = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(AhlforsConstants {
        c_low,
        c_high,
        constant: (1.0 / c_low).max(c_high),
        t_min,
        t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn segment(n: usize, spacing: f64) -> DiscreteMeasure {
        let pts: Vec<Vec<f64>> = (0..n).map(|k| vec![k as f64 * spacing, 0.0]).collect();
        DiscreteMeasure::uniform(2, &pts, spacing).unwrap()
    }

    #[test]
    fn dedup_merges_masses() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![1e-14, 0.0]];
        let mu = DiscreteMeasure::new(2, &pts, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.merged_count(), 2);
        assert_abs_diff_eq!(mu.total_mass(), 10.0);
        assert_eq!(mu.point(1), &[1.0, 0.0]);
        assert_eq!(mu.weights(), &[8.0, 2.0]);
    }

    #[test]
    fn rejects_bad_weights_and_points() {
        assert!(DiscreteMeasure::new(1, &[vec![0.0]], &[0.0]).is_err());
        assert!(DiscreteMeasure::new(1, &[vec![f64::NAN]], &[1.0]).is_err());
        assert!(DiscreteMeasure::new(2, &[vec![0.0]], &[1.0]).is_err());
    }

    #[test]
    fn ball_queries_match_brute_force() {
        let pts: Vec<Vec<f64>> = (0..400)
            .map(|k| {
                let t = k as f64 * 0.731;
                vec![t.sin() * (1.0 + 0.3 * (3.0 * t).cos()), t.cos() * 0.7]
            })
            .collect();
        let mu = DiscreteMeasure::uniform(2, &pts, 1.0).unwrap();
        for r in [0.01, 0.1, 0.4, 3.0] {
            for c in [[0.0, 0.0], [0.5, -0.2]] {
                let fast = mu.ball_indices(&c, r, true);
                let slow: Vec<usize> = (0..mu.len()).filter(|&i| dist(mu.point(i), &c) <= r).collect();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn diameter_matches_brute_force() {
        let pts: Vec<Vec<f64>> = (0..300)
            .map(|k| {
                let t = k as f64 * 1.37;
                vec![t.sin() * (1.0 + 0.5 * (5.0 * t).cos()), 0.4 * t.cos(), (2.0 * t).sin() * 0.1]
            })
            .collect();
        let mu = DiscreteMeasure::uniform(3, &pts, 1.0).unwrap();
        let brute = pts
            .iter()
            .flat_map(|p| pts.iter().map(move |q| dist(p, q)))
            .fold(0.0, f64::max);
        assert_eq!(mu.diameter(), brute);
    }

    #[test]
    fn open_versus_closed_balls() {
        let mu = segment(3, 1.0);
        assert_abs_diff_eq!(mu.ball_mass(&[0.0, 0.0], 1.0, false), 1.0);
        assert_abs_diff_eq!(mu.ball_mass(&[0.0, 0.0], 1.0, true), 2.0);
    }

    #[test]
    fn defect_examples() {
        let single = DiscreteMeasure::uniform(2, &[vec![0.5, 0.5]], 1.0).unwrap();
        let d = symmetry_defect(&single, &[0.5, 0.5], 3.0).unwrap();
        assert_eq!(d.moment, vec![0.0, 0.0]);
        assert_eq!(d.normalized, Some(0.0));

        let two = DiscreteMeasure::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0]], &[0.5, 0.5]).unwrap();
        let d = symmetry_defect(&two, &[0.0, 0.0], 2.0).unwrap();
        assert_eq!(d.moment, vec![0.5, 0.0]);

        let far = symmetry_defect(&two, &[40.0, 0.0], 1.0);
        assert!(matches!(far, Err(Error::NotInSupport { .. })));
    }

    #[test]
    fn segment_midpoint_is_symmetric() {
        let mu = segment(1001, 1e-3);
        let d = symmetry_defect(&mu, &[0.5, 0.0], 0.2).unwrap();
        assert!(d.normalized.unwrap() <= 1e-3 / 0.2);
    }

    #[test]
    fn density_ratio_interior_and_endpoint() {
        let h = 1e-3;
        let mu = segment(1001, h);
        for r in [0.01, 0.03, 0.1] {
            let interior = density_ratio(&mu, &[0.5, 0.0], r, 1.0).unwrap();
            assert!((interior - 2.0).abs() <= 2.0 * h / r, "r = {r}: {interior}");
            let end = density_ratio(&mu, &[0.0, 0.0], r, 1.0).unwrap();
            assert!((end - 1.0).abs() <= 2.0 * h / r);
        }
    }

    #[test]
    fn menger_examples() {
        let r = 2.0;
        let on_circle = |t: f64| vec![r * t.cos(), r * t.sin()];
        let c = menger_curvature(&on_circle(0.1), &on_circle(1.3), &on_circle(4.0)).unwrap();
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-12);
        assert_eq!(menger_curvature(&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]).unwrap(), 0.0);
        let c = menger_curvature(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(c, 2f64.sqrt(), epsilon = 1e-14);
        assert_eq!(menger_curvature(&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]), Err(Error::Coincident));
    }

    #[test]
    fn ahlfors_on_segment() {
        let h = 1e-3;
        let mu = segment(1001, h);
        let c = ahlfors_constants(&mu, 1.0, 50, (0.0, f64::INFINITY)).unwrap();
        assert!((c.c_low - 1.0).abs() < 0.05, "{c:?}");
        assert!((c.c_high - 2.0).abs() < 0.05, "{c:?}");
        assert!(matches!(ahlfors_constants(&mu, 1.0, 5, (2.0, 3.0)), Err(Error::Empty(_))));
    }

    #[test]
    fn profile_needs_three_radii() {
        let mu = segment(11, 0.1);
        let err = symmetry_profile(&mu, &[vec![0.5, 0.0]], &[0.1, 0.2]);
        assert_eq!(err.unwrap_err(), Error::TooFewRadii { needed: 3, got: 2 });
    }
}
