//! Generators for the meshes and point sets used by the demos and tests.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::clifford_analysis::{DiscreteSurface, FacetSpec};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::numeric::{dist, norm};
use crate::potentials::{CantorUltrametric, ParameterMetric, RegularSet};

/// A weighted point set with the metadata its generator knows about it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub m: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Hausdorff dimension of the set being sampled.
    pub n_dim: f64,
    /// Nominal distance between neighbouring atoms.
    pub spacing: f64,
    /// Per-atom addresses for self-similar sets.
    pub codes: Option<Vec<Vec<u8>>>,
    /// Per-atom curve parameter.
    pub params: Option<Vec<f64>>,
}

impl PointCloud {
    fn plain(m: usize, points: Vec<Vec<f64>>, weight: f64, n_dim: f64, spacing: f64) -> Self {
        let weights = vec![weight; points.len()];
        Self {
            m,
            points,
            weights,
            n_dim,
            spacing,
            codes: None,
            params: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::new(self.m, &self.points, &self.weights)
    }

    pub fn regular_set(&self) -> Result<RegularSet> {
        RegularSet::new(self.measure()?, self.n_dim)
    }

    /// The set with the triadic ultrametric of order `alpha` (Cantor sets only).
    pub fn with_ultrametric(&self, alpha: f64) -> Result<RegularSet> {
        let codes = self
            .codes
            .clone()
            .ok_or_else(|| Error::Precondition("point cloud carries no triadic addresses".into()))?;
        let rho = CantorUltrametric::new(codes, alpha)?;
        self.regular_set()?.with_snowflake(Arc::new(rho), alpha)
    }

    /// The set with `ρ = |s - t|` for the curve parameter (Koch curve only),
    /// which is a snowflake metric of order `log 3 / log 4`.
    pub fn with_parameter_metric(&self) -> Result<RegularSet> {
        let params = self
            .params
            .clone()
            .ok_or_else(|| Error::Precondition("point cloud carries no curve parameter".into()))?;
        let alpha = 3f64.ln() / 4f64.ln();
        self.regular_set()?.with_snowflake(Arc::new(ParameterMetric::new(params, 1.0)), alpha)
    }
}

fn check_count(name: &'static str, k: usize, min: usize) -> Result<()> {
    if k < min {
        return Err(Error::Precondition(format!("{name} needs at least {min} points, got {k}")));
    }
    Ok(())
}

/// `k` equally spaced points on the segment `[0,1] × {0}` in `R²`.
pub fn segment(k: usize) -> Result<PointCloud> {
    check_count("segment", k, 2)?;
    let h = 1.0 / (k - 1) as f64;
    let pts = (0..k).map(|i| vec![i as f64 * h, 0.0]).collect();
    Ok(PointCloud::plain(2, pts, h, 1.0, h))
}

/// Cell centres of a `k × k` grid on the unit square.
pub fn square_grid(k: usize) -> Result<PointCloud> {
    check_count("square grid", k, 2)?;
    let h = 1.0 / k as f64;
    let pts = (0..k * k)
        .map(|i| vec![((i % k) as f64 + 0.5) * h, ((i / k) as f64 + 0.5) * h])
        .collect();
    Ok(PointCloud::plain(2, pts, h * h, 2.0, h))
}

/// Cell centres of the lattice `hZ² + (h/2, h/2)` inside the disc of the
/// given radius about the origin.
pub fn disc(h: f64, radius: f64) -> Result<PointCloud> {
    if !(h > 0.0) || !(radius > h) {
        return Err(Error::Precondition(format!("disc needs 0 < h < radius, got h = {h}, radius = {radius}")));
    }
    let k = (radius / h).ceil() as i64;
    let mut pts = Vec::new();
    for j in -k..k {
        for i in -k..k {
            let p = vec![(i as f64 + 0.5) * h, (j as f64 + 0.5) * h];
            if norm(&p) < radius {
                pts.push(p);
            }
        }
    }
    Ok(PointCloud::plain(2, pts, h * h, 2.0, h))
}

/// The graph `x₃ = L·tri(x₁) + (L/2)·tri(x₂)` over a `k × k` grid on the unit
/// square, where `tri` is the unit-slope triangle wave of period 1/2. The
/// graph map has Lipschitz constant `L·√5/2`; weights carry the area element.
pub fn lipschitz_graph(k: usize, lip: f64) -> Result<PointCloud> {
    check_count("Lipschitz graph", k, 2)?;
    if !(lip >= 0.0) {
        return Err(Error::NonPositive(lip));
    }
    let tri = |t: f64| {
        let u = (2.0 * t).rem_euclid(1.0);
        0.5 * u.min(1.0 - u)
    };
    let h = 1.0 / k as f64;
    let mut pts = Vec::with_capacity(k * k);
    let mut weights = Vec::with_capacity(k * k);
    for i in 0..k * k {
        let x = ((i % k) as f64 + 0.5) * h;
        let y = ((i / k) as f64 + 0.5) * h;
        pts.push(vec![x, y, lip * tri(x) + 0.5 * lip * tri(y)]);
        // |∇φ|² = L² + L²/4 away from the kinks.
        weights.push(h * h * (1.0 + 1.25 * lip * lip).sqrt());
    }
    Ok(PointCloud {
        m: 3,
        points: pts,
        weights,
        n_dim: 2.0,
        spacing: h,
        codes: None,
        params: None,
    })
}

/// Middle-thirds Cantor set at the given depth: in `R¹` (`m = 1`) the centres
/// of the `2^depth` surviving intervals, in `R²` (`m = 2`) their products
/// (Cantor dust). Each atom carries its triadic address and equal mass
/// summing to one.
pub fn cantor(depth: usize, m: usize) -> Result<PointCloud> {
    if depth == 0 || depth > 20 {
        return Err(Error::Precondition(format!("Cantor depth must lie in 1..=20, got {depth}")));
    }
    if !(1..=2).contains(&m) {
        return Err(Error::UnsupportedDimension(m));
    }
    let per_axis = 1usize << depth;
    let scale = 3f64.powi(-(depth as i32));
    let centres: Vec<f64> = (0..per_axis)
        .map(|idx| {
            let left: f64 = (0..depth)
                .map(|level| {
                    let bit = (idx >> (depth - 1 - level)) & 1;
                    2.0 * bit as f64 * 3f64.powi(-(level as i32 + 1))
                })
                .sum();
            left + 0.5 * scale
        })
        .collect();
    let bits = |idx: usize, level: usize| ((idx >> (depth - 1 - level)) & 1) as u8;
    let total = per_axis.pow(m as u32);
    let mut points = Vec::with_capacity(total);
    let mut codes = Vec::with_capacity(total);
    for t in 0..total {
        let ix = t % per_axis;
        let iy = t / per_axis;
        if m == 1 {
            points.push(vec![centres[ix]]);
            codes.push((0..depth).map(|l| bits(ix, l)).collect());
        } else {
            points.push(vec![centres[ix], centres[iy]]);
            codes.push((0..depth).map(|l| bits(ix, l) | (bits(iy, l) << 1)).collect());
        }
    }
    let weight = 1.0 / total as f64;
    Ok(PointCloud {
        m,
        points,
        weights: vec![weight; total],
        n_dim: m as f64 * 2f64.ln() / 3f64.ln(),
        spacing: scale,
        codes: Some(codes),
        params: None,
    })
}

/// Vertices of the Koch curve from `(0,0)` to `(1,0)` after `depth`
/// refinements: `4^depth + 1` points, parameter `t = k / 4^depth`, each of
/// mass `4^{-depth}`.
pub fn koch(depth: usize) -> Result<PointCloud> {
    if depth > 11 {
        return Err(Error::Precondition(format!("Koch depth must be at most 11, got {depth}")));
    }
    let mut pts: Vec<[f64; 2]> = vec![[0.0, 0.0], [1.0, 0.0]];
    let (s, c) = (PI / 3.0).sin_cos();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(4 * (pts.len() - 1) + 1);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = [(b[0] - a[0]) / 3.0, (b[1] - a[1]) / 3.0];
            let p1 = [a[0] + d[0], a[1] + d[1]];
            let p3 = [a[0] + 2.0 * d[0], a[1] + 2.0 * d[1]];
            let p2 = [p1[0] + c * d[0] - s * d[1], p1[1] + s * d[0] + c * d[1]];
            next.extend_from_slice(&[a, p1, p2, p3]);
        }
        next.push(*pts.last().expect("curve has an endpoint"));
        pts = next;
    }
    let count = pts.len();
    let segments = (count - 1) as f64;
    Ok(PointCloud {
        m: 2,
        points: pts.iter().map(|p| p.to_vec()).collect(),
        weights: vec![1.0 / segments.max(1.0); count],
        n_dim: 4f64.ln() / 3f64.ln(),
        spacing: 3f64.powi(-(depth as i32)),
        codes: None,
        params: Some((0..count).map(|k| k as f64 / segments.max(1.0)).collect()),
    })
}

fn facet(centroid: Vec<f64>, normal: Vec<f64>, area: f64, density: f64, diameter: f64) -> FacetSpec {
    FacetSpec {
        centroid,
        normal,
        area,
        density,
        diameter: Some(diameter),
    }
}

fn triangle_facet(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], density: f64) -> FacetSpec {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    let len = norm(&cross);
    let centroid = (0..3).map(|k| (a[k] + b[k] + c[k]) / 3.0).collect();
    let diameter = dist(a, b).max(dist(b, c)).max(dist(a, c));
    facet(centroid, cross.iter().map(|x| x / len).collect(), 0.5 * len, density, diameter)
}

/// Triangles of the unit icosphere after `subdivisions` midpoint refinements
/// (`20·4^subdivisions` faces), counter-clockwise seen from outside.
fn icosphere_triangles(subdivisions: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|v| {
        let l = norm(v);
        [v[0] / l, v[1] / l, v[2] / l]
    })
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let p = [
                    verts[a][0] + verts[b][0],
                    verts[a][1] + verts[b][1],
                    verts[a][2] + verts[b][2],
                ];
                let l = norm(&p);
                verts.push([p[0] / l, p[1] / l, p[2] / l]);
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

/// Closed unit sphere in `R³` from a subdivided icosahedron, outward normals,
/// unit density.
pub fn icosphere(subdivisions: usize) -> Result<DiscreteSurface> {
    if subdivisions > 7 {
        return Err(Error::Precondition(format!("icosphere subdivisions must be at most 7, got {subdivisions}")));
    }
    let (v, f) = icosphere_triangles(subdivisions);
    let facets = f.iter().map(|&[a, b, c]| triangle_facet(&v[a], &v[b], &v[c], 1.0)).collect();
    DiscreteSurface::new(3, facets, true)
}

/// The faces of [`icosphere`] whose centroid lies in the upper half-space.
pub fn hemisphere(subdivisions: usize) -> Result<DiscreteSurface> {
    if subdivisions > 7 {
        return Err(Error::Precondition(format!("hemisphere subdivisions must be at most 7, got {subdivisions}")));
    }
    let (v, f) = icosphere_triangles(subdivisions);
    let facets = f
        .iter()
        .map(|&[a, b, c]| triangle_facet(&v[a], &v[b], &v[c], 1.0))
        .filter(|s| s.centroid[2] > 0.0)
        .collect();
    DiscreteSurface::new(3, facets, false)
}

/// Regular `k`-gon inscribed in the unit circle of `R²`, one facet per edge.
pub fn circle_polygon(k: usize) -> Result<DiscreteSurface> {
    check_count("circle polygon", k, 3)?;
    let vertex = |j: usize| {
        let th = 2.0 * PI * j as f64 / k as f64;
        [th.cos(), th.sin()]
    };
    let facets = (0..k)
        .map(|j| {
            let (a, b) = (vertex(j), vertex(j + 1));
            let len = dist(&a, &b);
            let centroid = vec![0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
            // Outward normal of a counter-clockwise edge.
            let normal = vec![(b[1] - a[1]) / len, (a[0] - b[0]) / len];
            facet(centroid, normal, len, 1.0, len)
        })
        .collect();
    DiscreteSurface::new(2, facets, true)
}

/// The square `[-half, half]²` in the plane `x₃ = 0` of `R³`, split into
/// `k × k` square facets with normal `e₃` and the given density.
pub fn flat_patch(half: f64, k: usize, density: f64) -> Result<DiscreteSurface> {
    check_count("flat patch", k, 1)?;
    if !(half > 0.0) {
        return Err(Error::NonPositive(half));
    }
    let h = 2.0 * half / k as f64;
    let facets = (0..k * k)
        .map(|i| {
            let x = -half + ((i % k) as f64 + 0.5) * h;
            let y = -half + ((i / k) as f64 + 0.5) * h;
            facet(vec![x, y, 0.0], vec![0.0, 0.0, 1.0], h * h, density, h * 2f64.sqrt())
        })
        .collect();
    DiscreteSurface::new(3, facets, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn counts() {
        assert_eq!(koch(6).unwrap().len(), 4usize.pow(6) + 1);
        assert_eq!(koch(0).unwrap().len(), 2);
        assert_eq!(cantor(5, 1).unwrap().len(), 32);
        assert_eq!(cantor(3, 2).unwrap().len(), 64);
        assert_eq!(square_grid(7).unwrap().len(), 49);
        assert_eq!(icosphere(2).unwrap().len(), 320);
        assert_eq!(circle_polygon(12).unwrap().len(), 12);
    }

    #[test]
    fn masses() {
        assert_relative_eq!(square_grid(10).unwrap().weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(cantor(6, 2).unwrap().weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let d = disc(0.01, 1.0).unwrap();
        assert_relative_eq!(d.weights.iter().sum::<f64>(), PI, max_relative = 1e-3);
        let s = icosphere(4).unwrap();
        assert_relative_eq!(s.total_area(), 4.0 * PI, max_relative = 1e-2);
    }

    #[test]
    fn koch_endpoints_and_cantor_codes() {
        let k = koch(3).unwrap();
        assert_eq!(k.points[0], vec![0.0, 0.0]);
        assert_relative_eq!(k.points[64][0], 1.0, epsilon = 1e-12);
        let c = cantor(2, 1).unwrap();
        assert_eq!(c.codes.as_ref().unwrap()[3], vec![1, 1]);
        assert_relative_eq!(c.points[3][0], 2.0 / 3.0 + 2.0 / 9.0 + 1.0 / 18.0, epsilon = 1e-15);
    }

    #[test]
    fn lipschitz_graph_slope() {
        let g = lipschitz_graph(40, 2.0).unwrap();
        let max_slope = g
            .points
            .windows(2)
            .filter(|w| (w[0][1] - w[1][1]).abs() < 1e-12)
            .map(|w| (w[1][2] - w[0][2]).abs() / (w[1][0] - w[0][0]))
            .fold(0.0, f64::max);
        assert!(max_slope <= 2.0 + 1e-12);
    }
}
