//! The Clifford–Cauchy kernel `ℰ(v) = Σ v_j e_j / |v|^n`, the Dirac
//! operator `𝒟 = Σ e_j ∂_j` on uniform grids, and facet sums for the
//! surface integrals `∫ ℰ(x-y) N(y) dy` and `∫ ∂_m ℰ(x-y) N(y) dy`.

use rayon::prelude::*;

use crate::clifford::{blade_product, BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::numeric::{compensated_vec_sum, dist, norm};

/// `ℰ(x - y)`; grade 1.
pub fn cauchy_kernel(x: &[f64], y: &[f64]) -> Result<Multivector> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { left: x.len(), right: y.len() });
    }
    let v: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let r = norm(&v);
    if r == 0.0 {
        return Err(Error::Coincident);
    }
    let scale = r.powi(-(v.len() as i32));
    Multivector::vector(&v.iter().map(|c| c * scale).collect::<Vec<_>>())
}

/// `∂/∂x_m ℰ(x - y)` in closed form:
/// `∂_m[v_j |v|^{-n}] = δ_{jm} |v|^{-n} - n v_j v_m |v|^{-n-2}`.
/// `m` is zero-based.
pub fn cauchy_kernel_derivative(x: &[f64], y: &[f64], m: usize) -> Result<Multivector> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: y.len() });
    }
    if m >= n {
        return Err(Error::AxisOutOfRange { axis: m, n });
    }
    let v: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let r2: f64 = v.iter().map(|c| c * c).sum();
    if r2 == 0.0 {
        return Err(Error::Coincident);
    }
    let rn = r2.sqrt().powi(-(n as i32));
    let coeffs: Vec<f64> = (0..n)
        .map(|j| {
            let delta = if j == m { rn } else { 0.0 };
            delta - n as f64 * v[j] * v[m] * rn / r2
        })
        .collect();
    Multivector::vector(&coeffs)
}

/// Multivector samples on a uniform lattice `lower + h·k`, `k ∈ Π [0, counts_j)`.
///
/// Points near the boundary where a stencil could not be applied are
/// marked invalid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    n: usize,
    h: f64,
    lower: Vec<f64>,
    counts: Vec<usize>,
    // `2^n` coefficients per lattice point, row-major with axis 0 fastest.
    data: Vec<f64>,
    valid: Vec<bool>,
}

impl GridFunction {
    pub fn sample<F>(lower: &[f64], h: f64, counts: &[usize], f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Multivector + Sync,
    {
        let n = lower.len();
        if counts.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: counts.len() });
        }
        if !(h > 0.0) {
            return Err(Error::NonPositive(h));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::Empty("grid box"));
        }
        let blades = 1usize << n;
        let total: usize = counts.iter().product();
        let mut data = vec![0.0; total * blades];
        let mut grid = Self {
            n,
            h,
            lower: lower.to_vec(),
            counts: counts.to_vec(),
            data: Vec::new(),
            valid: vec![true; total],
        };
        let points: Vec<Vec<f64>> = (0..total).map(|i| grid.point(i)).collect();
        let rows: Vec<Multivector> = points.par_iter().map(|p| f(p)).collect();
        for (i, mv) in rows.iter().enumerate() {
            if mv.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: mv.n() });
            }
            data[i * blades..(i + 1) * blades].copy_from_slice(mv.coeffs());
        }
        grid.data = data;
        Ok(grid)
    }

    /// Samples on the cube `[center - half, center + half]^n` with spacing `h`.
    pub fn sample_cube<F>(n: usize, center: f64, half: f64, h: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Multivector + Sync,
    {
        let count = (2.0 * half / h).round() as usize + 1;
        Self::sample(&vec![center - half; n], h, &vec![count; n], f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.valid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valid.is_empty()
    }

    fn multi_index(&self, mut i: usize) -> Vec<usize> {
        self.counts
            .iter()
            .map(|&c| {
                let k = i % c;
                i /= c;
                k
            })
            .collect()
    }

    fn stride(&self, axis: usize) -> usize {
        self.counts[..axis].iter().product()
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.multi_index(i)
            .iter()
            .zip(&self.lower)
            .map(|(&k, &lo)| lo + self.h * k as f64)
            .collect()
    }

    pub fn is_valid(&self, i: usize) -> bool {
        self.valid[i]
    }

    pub fn value(&self, i: usize) -> Multivector {
        let b = 1 << self.n;
        Multivector::from_coeffs(self.n, self.data[i * b..(i + 1) * b].to_vec()).expect("grid dimension is valid")
    }

    fn coeffs(&self, i: usize) -> &[f64] {
        let b = 1 << self.n;
        &self.data[i * b..(i + 1) * b]
    }

    fn check_min_points(&self, needed: usize) -> Result<()> {
        let got = *self.counts.iter().min().unwrap_or(&0);
        if got < needed {
            return Err(Error::GridTooSmall { needed, got });
        }
        Ok(())
    }

    /// Whether the `±1` neighbours along every axis exist and are valid.
    fn stencil_ok(&self, i: usize) -> bool {
        if !self.valid[i] {
            return false;
        }
        let idx = self.multi_index(i);
        (0..self.n).all(|a| {
            let s = self.stride(a);
            idx[a] >= 1 && idx[a] + 1 < self.counts[a] && self.valid[i - s] && self.valid[i + s]
        })
    }

    fn map_stencil<F>(&self, f: F) -> Self
    where
        F: Fn(usize, &mut [f64]) + Sync,
    {
        let b = 1 << self.n;
        let results: Vec<Option<Vec<f64>>> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                self.stencil_ok(i).then(|| {
                    let mut out = vec![0.0; b];
                    f(i, &mut out);
                    out
                })
            })
            .collect();
        let mut data = vec![0.0; self.data.len()];
        let mut valid = vec![false; self.len()];
        for (i, r) in results.into_iter().enumerate() {
            if let Some(r) = r {
                data[i * b..(i + 1) * b].copy_from_slice(&r);
                valid[i] = true;
            }
        }
        Self {
            n: self.n,
            h: self.h,
            lower: self.lower.clone(),
            counts: self.counts.clone(),
            data,
            valid,
        }
    }

    /// Largest coefficient norm over valid points accepted by `keep`.
    pub fn max_norm_where<P>(&self, keep: P) -> f64
    where
        P: Fn(&[f64]) -> bool,
    {
        (0..self.len())
            .filter(|&i| self.valid[i] && keep(&self.point(i)))
            .map(|i| norm(self.coeffs(i)))
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.max_norm_where(|_| true)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.counts != other.counts || self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        let valid = self.valid.iter().zip(&other.valid).map(|(a, b)| *a && *b).collect();
        Ok(Self {
            data,
            valid,
            ..self.clone()
        })
    }
}

/// `𝒟 f = Σ_j e_j ∂_j f` with central differences; the outer layer of the
/// grid becomes invalid.
pub fn dirac_apply_fd(f: &GridFunction) -> Result<GridFunction> {
    f.check_min_points(3)?;
    let n = f.n;
    let inv = 0.5 / f.h;
    let strides: Vec<usize> = (0..n).map(|a| f.stride(a)).collect();
    Ok(f.map_stencil(|i, out| {
        for (axis, &s) in strides.iter().enumerate() {
            let ej = BladeIndex::generator(axis + 1);
            let plus = f.coeffs(i + s);
            let minus = f.coeffs(i - s);
            for (blade, (p, m)) in plus.iter().zip(minus).enumerate() {
                let d = (p - m) * inv;
                if d == 0.0 {
                    continue;
                }
                let (sign, out_blade) = blade_product(ej, BladeIndex(blade as u32), n).expect("blade in range");
                out[out_blade.0 as usize] += sign * d;
            }
        }
    }))
}

/// Standard `2n+1`-point discrete Laplacian, coefficientwise.
pub fn laplacian_fd(f: &GridFunction) -> Result<GridFunction> {
    f.check_min_points(3)?;
    let inv = 1.0 / (f.h * f.h);
    let strides: Vec<usize> = (0..f.n).map(|a| f.stride(a)).collect();
    Ok(f.map_stencil(|i, out| {
        let center = f.coeffs(i);
        for &s in &strides {
            for (k, o) in out.iter_mut().enumerate() {
                *o += (f.coeffs(i + s)[k] - 2.0 * center[k] + f.coeffs(i - s)[k]) * inv;
            }
        }
    }))
}

/// Max interior norm of `𝒟(𝒟 f) + Δ_h f`.
pub fn dirac_square_check(f: &GridFunction) -> Result<f64> {
    Ok(dirac_square_residual(f)?.max_norm())
}

/// The grid function `𝒟(𝒟 f) + Δ_h f`, valid two layers in from the edge.
pub fn dirac_square_residual(f: &GridFunction) -> Result<GridFunction> {
    f.check_min_points(5)?;
    let dd = dirac_apply_fd(&dirac_apply_fd(f)?)?;
    dd.try_add(&laplacian_fd(f)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet<'a> {
    pub centroid: &'a [f64],
    pub normal: &'a [f64],
    pub area: f64,
    pub density: f64,
}

/// Oriented facets discretizing a hypersurface in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSurface {
    n: usize,
    centroids: Vec<f64>,
    normals: Vec<f64>,
    areas: Vec<f64>,
    densities: Vec<f64>,
    max_diameter: f64,
    closed: bool,
}

/// One facet as supplied by a mesh generator or a file.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetSpec {
    pub centroid: Vec<f64>,
    pub normal: Vec<f64>,
    pub area: f64,
    pub density: f64,
    /// Largest extent of the facet; used for the near-surface guard.
    pub diameter: Option<f64>,
}

impl DiscreteSurface {
    pub fn new(n: usize, facets: Vec<FacetSpec>, closed: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGeometry(format!("ambient dimension must be at least 2, got {n}")));
        }
        if facets.is_empty() {
            return Err(Error::Empty("surface has no facets"));
        }
        let mut s = Self {
            n,
            centroids: Vec::with_capacity(n * facets.len()),
            normals: Vec::with_capacity(n * facets.len()),
            areas: Vec::with_capacity(facets.len()),
            densities: Vec::with_capacity(facets.len()),
            max_diameter: 0.0,
            closed,
        };
        for (k, f) in facets.iter().enumerate() {
            if f.centroid.len() != n || f.normal.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: f.centroid.len().min(f.normal.len()) });
            }
            if (norm(&f.normal) - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidGeometry(format!("facet {k}: normal is not unit length")));
            }
            if !(f.area > 0.0) {
                return Err(Error::InvalidGeometry(format!("facet {k}: area must be positive")));
            }
            if !(f.density > 0.0) {
                return Err(Error::InvalidGeometry(format!("facet {k}: density must be positive")));
            }
            let diameter = f.diameter.unwrap_or_else(|| 2.0 * f.area.powf(1.0 / (n as f64 - 1.0)));
            s.max_diameter = s.max_diameter.max(diameter);
            s.centroids.extend_from_slice(&f.centroid);
            s.normals.extend_from_slice(&f.normal);
            s.areas.push(f.area);
            s.densities.push(f.density);
        }
        if closed {
            let total: f64 = s.areas.iter().sum();
            let va = s.vector_area();
            if norm(&va) > 1e-8 * total {
                return Err(Error::InvalidGeometry(format!(
                    "closed surface has net vector area {:e}",
                    norm(&va)
                )));
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn max_facet_diameter(&self) -> f64 {
        self.max_diameter
    }

    pub fn facet(&self, k: usize) -> Facet<'_> {
        let n = self.n;
        Facet {
            centroid: &self.centroids[k * n..(k + 1) * n],
            normal: &self.normals[k * n..(k + 1) * n],
            area: self.areas[k],
            density: self.densities[k],
        }
    }

    pub fn facets(&self) -> impl Iterator<Item = Facet<'_>> {
        (0..self.len()).map(|k| self.facet(k))
    }

    /// `Σ area · normal`.
    pub fn vector_area(&self) -> Vec<f64> {
        let rows: Vec<Vec<f64>> = self.facets().map(|f| f.normal.iter().map(|c| c * f.area).collect()).collect();
        compensated_vec_sum(self.n, rows.iter().map(Vec::as_slice))
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Same facets with every density multiplied by `factor`.
    pub fn with_density_scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::NonPositive(factor));
        }
        let mut s = self.clone();
        s.densities.iter_mut().for_each(|d| *d *= factor);
        Ok(s)
    }

    /// Near-surface guard: three facet diameters.
    pub fn guard_distance(&self) -> f64 {
        3.0 * self.max_diameter
    }

    fn check_clearance(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: x.len() });
        }
        let guard = self.guard_distance();
        let nearest = self.facets().map(|f| dist(f.centroid, x)).fold(f64::INFINITY, f64::min);
        if nearest <= guard {
            return Err(Error::TooClose { distance: nearest });
        }
        Ok(())
    }

    /// Facet-parallel sum of multivector terms, reduced in facet order.
    fn facet_sum<F>(&self, term: F) -> Result<Multivector>
    where
        F: Fn(Facet<'_>) -> Result<Multivector> + Sync,
    {
        let rows: Vec<Multivector> = (0..self.len())
            .into_par_iter()
            .map(|k| term(self.facet(k)))
            .collect::<Result<_>>()?;
        let coeffs = compensated_vec_sum(1 << self.n, rows.iter().map(Multivector::coeffs));
        Multivector::from_coeffs(self.n, coeffs)
    }
}

/// `Σ_facets ℰ(x - c) N(c) · area`, the Clifford product taken with the
/// grade-1 normal on the right.
pub fn surface_cauchy_integral(s: &DiscreteSurface, x: &[f64]) -> Result<Multivector> {
    s.check_clearance(x)?;
    s.facet_sum(|f| {
        let e = cauchy_kernel(x, f.centroid)?;
        let normal = Multivector::vector(f.normal)?;
        Ok(e.try_mul(&normal)?.scale(f.area))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceElement {
    /// `N(y) dy`.
    NormalDy,
    /// `dα(y)`: density times surface measure, scalar valued.
    Weighted,
}

/// Facet sum of `∂_m ℰ(x - y)` against the chosen element; `m` is zero-based.
pub fn surface_derivative_integral(
    s: &DiscreteSurface,
    x: &[f64],
    m: usize,
    element: SurfaceElement,
) -> Result<Multivector> {
    if m >= s.n {
        return Err(Error::AxisOutOfRange { axis: m, n: s.n });
    }
    s.check_clearance(x)?;
    s.facet_sum(|f| {
        let de = cauchy_kernel_derivative(x, f.centroid, m)?;
        match element {
            SurfaceElement::NormalDy => Ok(de.try_mul(&Multivector::vector(f.normal)?)?.scale(f.area)),
            SurfaceElement::Weighted => Ok(de.scale(f.area * f.density)),
        }
    })
}

/// Sum of facet magnitudes `Σ |∂_m ℰ(x - c)| · area`, the size the
/// differentiated integral would have without any cancellation.
pub fn surface_derivative_scale(s: &DiscreteSurface, x: &[f64], m: usize) -> Result<f64> {
    if m >= s.n {
        return Err(Error::AxisOutOfRange { axis: m, n: s.n });
    }
    s.check_clearance(x)?;
    let terms: Vec<f64> = (0..s.len())
        .into_par_iter()
        .map(|k| {
            let f = s.facet(k);
            cauchy_kernel_derivative(x, f.centroid, m).map(|d| d.norm() * f.area)
        })
        .collect::<Result<_>>()?;
    Ok(crate::numeric::compensated_sum(terms))
}
