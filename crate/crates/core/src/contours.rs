//! Contours in the complex plane and quadrature of Cauchy-type kernels
//! against `dζ`, arclength `|dζ|`, or a weighted arclength `dα`.
//!
//! Also hosts the closed forms the quadrature is checked against: the
//! segment and corner formulas for `∫ (z-ζ)^{-2}`, the unit circle with the
//! `dζ/ζ` element, and the coefficient of `1/(z-q)` for a star of rays.
//!
//! Orientation conventions pin the otherwise anonymous constants: segments
//! run from `a` to `b` with unit tangent `(b-a)/|b-a|`, arcs run from `θ0`
//! to `θ1` (counterclockwise when `θ1 > θ0`), rays run outward.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

const I: Complex64 = Complex64::new(0.0, 1.0);
const CLOSURE_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RayLength {
    Finite(f64),
    /// Integrated to infinity, with the far part done in closed form.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Line {
        a: Complex64,
        b: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    Ray {
        origin: Complex64,
        direction: Complex64,
        length: RayLength,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSegment {
    pub kind: SegmentKind,
    /// Constant weight multiplying arclength in the `dα` element.
    pub density: f64,
}

impl ContourSegment {
    pub fn line(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(SegmentKind::Line { a, b }, 1.0)
    }

    pub fn arc(center: Complex64, radius: f64, theta0: f64, theta1: f64) -> Result<Self> {
        Self::new(
            SegmentKind::Arc {
                center,
                radius,
                theta0,
                theta1,
            },
            1.0,
        )
    }

    pub fn ray(origin: Complex64, direction: Complex64, length: RayLength) -> Result<Self> {
        Self::new(
            SegmentKind::Ray {
                origin,
                direction,
                length,
            },
            1.0,
        )
    }

    pub fn new(kind: SegmentKind, density: f64) -> Result<Self> {
        if !(density > 0.0) || !density.is_finite() {
            return Err(Error::InvalidGeometry(format!("density must be positive, got {density}")));
        }
        match kind {
            SegmentKind::Line { a, b } => {
                if a == b {
                    return Err(Error::InvalidGeometry("segment endpoints coincide".into()));
                }
            }
            SegmentKind::Arc { radius, theta0, theta1, .. } => {
                if !(radius > 0.0) {
                    return Err(Error::InvalidGeometry(format!("arc radius must be positive, got {radius}")));
                }
                if theta0 == theta1 {
                    return Err(Error::InvalidGeometry("arc has zero sweep".into()));
                }
            }
            SegmentKind::Ray { direction, length, .. } => {
                if (direction.norm() - 1.0).abs() > UNIT_TOL {
                    return Err(Error::InvalidGeometry(format!(
                        "ray direction must have unit modulus, got {}",
                        direction.norm()
                    )));
                }
                if let RayLength::Finite(len) = length {
                    if !(len > 0.0) {
                        return Err(Error::InvalidGeometry(format!("ray length must be positive, got {len}")));
                    }
                }
            }
        }
        Ok(Self { kind, density })
    }

    pub fn with_density(mut self, density: f64) -> Result<Self> {
        Self::new(self.kind, density).map(|s| {
            self.density = s.density;
            self
        })
    }

    /// Arclength, `None` for infinite rays.
    pub fn length(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Line { a, b } => Some((b - a).norm()),
            SegmentKind::Arc { radius, theta0, theta1, .. } => Some(radius * (theta1 - theta0).abs()),
            SegmentKind::Ray { length, .. } => match length {
                RayLength::Finite(l) => Some(l),
                RayLength::Infinite => None,
            },
        }
    }

    /// Point at arclength `s` from the start.
    pub fn point(&self, s: f64) -> Complex64 {
        match self.kind {
            SegmentKind::Line { a, b } => a + (b - a) / (b - a).norm() * s,
            SegmentKind::Arc { center, radius, theta0, theta1 } => {
                let theta = theta0 + (theta1 - theta0).signum() * s / radius;
                center + Complex64::from_polar(radius, theta)
            }
            SegmentKind::Ray { origin, direction, .. } => origin + direction * s,
        }
    }

    /// Unit tangent at arclength `s`.
    pub fn tangent(&self, s: f64) -> Complex64 {
        match self.kind {
            SegmentKind::Line { a, b } => (b - a) / (b - a).norm(),
            SegmentKind::Arc { radius, theta0, theta1, .. } => {
                let sigma = (theta1 - theta0).signum();
                let theta = theta0 + sigma * s / radius;
                I * sigma * Complex64::from_polar(1.0, theta)
            }
            SegmentKind::Ray { direction, .. } => direction,
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Option<Complex64> {
        self.length().map(|l| self.point(l))
    }

    /// Euclidean distance from `z` to the segment.
    pub fn distance(&self, z: Complex64) -> f64 {
        match self.kind {
            SegmentKind::Line { a, b } => point_to_segment(z, a, b),
            SegmentKind::Arc { center, radius, theta0, theta1 } => {
                let w = z - center;
                let (lo, hi) = if theta0 < theta1 { (theta0, theta1) } else { (theta1, theta0) };
                if hi - lo >= 2.0 * PI {
                    return (w.norm() - radius).abs();
                }
                // Is the direction of w inside the swept angle range?
                let phi = w.arg();
                let k = ((lo - phi) / (2.0 * PI)).ceil();
                let phi = phi + 2.0 * PI * k;
                let endpoints = [
                    (z - center - Complex64::from_polar(radius, theta0)).norm(),
                    (z - center - Complex64::from_polar(radius, theta1)).norm(),
                ];
                let end_dist = endpoints[0].min(endpoints[1]);
                if w.norm() > 0.0 && phi <= hi {
                    (w.norm() - radius).abs().min(end_dist)
                } else {
                    end_dist
                }
            }
            SegmentKind::Ray { origin, direction, length } => {
                let along = ((z - origin) * direction.conj()).re;
                let t = match length {
                    RayLength::Finite(l) => along.clamp(0.0, l),
                    RayLength::Infinite => along.max(0.0),
                };
                (z - origin - direction * t).norm()
            }
        }
    }

    /// Points used for extent estimates.
    fn sample_points(&self) -> Vec<Complex64> {
        match self.kind {
            SegmentKind::Line { a, b } => vec![a, b],
            SegmentKind::Arc { .. } => {
                let len = self.length().unwrap_or(0.0);
                (0..=64).map(|k| self.point(len * k as f64 / 64.0)).collect()
            }
            SegmentKind::Ray { origin, direction, length } => match length {
                RayLength::Finite(l) => vec![origin, origin + direction * l],
                RayLength::Infinite => vec![origin, origin + direction],
            },
        }
    }
}

fn point_to_segment(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (z - a - d * t).norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    segments: Vec<ContourSegment>,
    closed: bool,
}

impl Contour {
    pub fn new(segments: Vec<ContourSegment>, closed: bool) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Empty("contour has no segments"));
        }
        for pair in segments.windows(2) {
            let end = pair[0]
                .end()
                .ok_or_else(|| Error::InvalidGeometry("infinite ray must be the last piece of a chain".into()))?;
            if closed && (end - pair[1].start()).norm() > CLOSURE_TOL {
                return Err(Error::InvalidGeometry(format!(
                    "closed contour has a gap of {:e} between consecutive pieces",
                    (end - pair[1].start()).norm()
                )));
            }
        }
        if closed {
            let last = segments[segments.len() - 1]
                .end()
                .ok_or_else(|| Error::InvalidGeometry("closed contour cannot contain an infinite ray".into()))?;
            let gap = (last - segments[0].start()).norm();
            if gap > CLOSURE_TOL {
                return Err(Error::InvalidGeometry(format!("contour does not close: gap {gap:e}")));
            }
        }
        Ok(Self { segments, closed })
    }

    /// Polyline through `vertices`; closed polygons join the last vertex
    /// back to the first.
    pub fn polygon(vertices: &[Complex64], closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Empty("polyline needs at least two vertices"));
        }
        let mut segments: Vec<ContourSegment> = vertices
            .windows(2)
            .map(|w| ContourSegment::line(w[0], w[1]))
            .collect::<Result<_>>()?;
        if closed {
            segments.push(ContourSegment::line(vertices[vertices.len() - 1], vertices[0])?);
        }
        Self::new(segments, closed)
    }

    /// Counterclockwise circle.
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(vec![ContourSegment::arc(center, radius, 0.0, 2.0 * PI)?], true)
    }

    /// Rays from `q` with the given unit directions and densities.
    pub fn star(q: Complex64, rays: &[(Complex64, f64)], length: RayLength) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::Empty("star has no rays"));
        }
        let segments = rays
            .iter()
            .map(|&(u, d)| ContourSegment::new(SegmentKind::Ray { origin: q, direction: u, length }, d))
            .collect::<Result<_>>()?;
        Ok(Self { segments, closed: false })
    }

    /// A contour made of independent pieces, e.g. disjoint segments.
    pub fn union(segments: Vec<ContourSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Empty("contour has no segments"));
        }
        Ok(Self { segments, closed: false })
    }

    pub fn segments(&self) -> &[ContourSegment] {
        &self.segments
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.segments.iter().map(|s| s.distance(z)).fold(f64::INFINITY, f64::min)
    }

    /// Diameter of the finite part (infinite rays contribute a unit stub).
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Complex64> = self.segments.iter().flat_map(|s| s.sample_points()).collect();
        let mut d: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                d = d.max((p - q).norm());
            }
        }
        d
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let kind = match s.kind {
                    SegmentKind::Line { a, b } => SegmentKind::Line { a: a * lambda, b: b * lambda },
                    SegmentKind::Arc { center, radius, theta0, theta1 } => SegmentKind::Arc {
                        center: center * lambda,
                        radius: radius * lambda,
                        theta0,
                        theta1,
                    },
                    SegmentKind::Ray { origin, direction, length } => SegmentKind::Ray {
                        origin: origin * lambda,
                        direction,
                        length: match length {
                            RayLength::Finite(l) => RayLength::Finite(l * lambda),
                            RayLength::Infinite => RayLength::Infinite,
                        },
                    },
                };
                ContourSegment::new(kind, s.density)
            })
            .collect::<Result<_>>()?;
        Ok(Self { segments, closed: self.closed })
    }

    pub fn with_density(&self, density: f64) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| ContourSegment::new(s.kind, density))
            .collect::<Result<_>>()?;
        Ok(Self { segments, closed: self.closed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationElement {
    /// `dζ`: arclength times the unit tangent.
    Complex,
    /// `|dζ|`.
    Arclength,
    /// `dα`: arclength times the segment density.
    Weighted,
}

impl IntegrationElement {
    fn factor(self, seg: &ContourSegment, s: f64) -> Complex64 {
        match self {
            IntegrationElement::Complex => seg.tangent(s),
            IntegrationElement::Arclength => Complex64::new(1.0, 0.0),
            IntegrationElement::Weighted => Complex64::new(seg.density, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `(z-ζ)^{-1}`
    Cauchy,
    /// `(z-ζ)^{-2}`
    CauchySquared,
    /// `|z-ζ|^{-2}`
    AbsSquared,
    /// `(z-ζ)^{-2} ζ^{-1}`, which turns `dζ` into the `dζ/ζ` element.
    CauchySquaredOverZeta,
}

impl Kernel {
    pub fn eval(self, z: Complex64, zeta: Complex64) -> Complex64 {
        let w = z - zeta;
        match self {
            Kernel::Cauchy => w.inv(),
            Kernel::CauchySquared => (w * w).inv(),
            Kernel::AbsSquared => Complex64::new(1.0 / w.norm_sqr(), 0.0),
            Kernel::CauchySquaredOverZeta => (w * w * zeta).inv(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kernel::Cauchy => "(z-ζ)^-1",
            Kernel::CauchySquared => "(z-ζ)^-2",
            Kernel::AbsSquared => "|z-ζ|^-2",
            Kernel::CauchySquaredOverZeta => "(z-ζ)^-2 ζ^-1",
        }
    }

    /// `∫_{R0}^{∞}` along the ray `ζ = ζ1 + t u` of the kernel against `dt`,
    /// with `ζ1` the truncation point.
    fn ray_tail(self, z: Complex64, zeta1: Complex64, u: Complex64) -> Result<Complex64> {
        match self {
            // ∫ (z-ζ)^{-2} dζ = 1/(z-ζ); dt = dζ/u.
            Kernel::CauchySquared => Ok(-(u * (z - zeta1)).inv()),
            Kernel::AbsSquared => {
                let w = (z - zeta1) * u.conj();
                let (a, b) = (w.re, w.im.abs());
                let v = if b > 0.0 {
                    (FRAC_PI_2 + (a / b).atan()) / b
                } else {
                    -1.0 / a
                };
                Ok(Complex64::new(v, 0.0))
            }
            _ => Err(Error::UnsupportedTail(self.name())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub max_panels: usize,
    /// Absolute target for the summed error estimate.
    pub tolerance: f64,
    /// Proximity guard; `None` means `1e-6 · diam`.
    pub min_distance: Option<f64>,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            max_panels: 10_000,
            tolerance: 1e-10,
            min_distance: None,
        }
    }
}

impl QuadratureControl {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourIntegral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Truncation radius for infinite rays, measured from the ray origin.
pub fn ray_truncation_radius(z: Complex64, origin: Complex64) -> f64 {
    10f64.max(10.0 * (z - origin).norm())
}

/// Adaptive quadrature of `∫_c kernel(z, ζ) · element`.
pub fn contour_integral(
    c: &Contour,
    element: IntegrationElement,
    kernel: Kernel,
    z: Complex64,
    quad: &QuadratureControl,
) -> Result<ContourIntegral> {
    let guard = quad.min_distance.unwrap_or(1e-6 * c.diameter());
    let distance = c.distance(z);
    if distance <= guard {
        return Err(Error::TooClose { distance });
    }

    let mut tail = Complex64::new(0.0, 0.0);
    let mut initial = Vec::new();
    for (k, seg) in c.segments().iter().enumerate() {
        let len = match seg.length() {
            Some(len) => len,
            None => {
                let (origin, u) = match seg.kind {
                    SegmentKind::Ray { origin, direction, .. } => (origin, direction),
                    _ => unreachable!("only rays are infinite"),
                };
                let r0 = ray_truncation_radius(z, origin);
                let zeta1 = origin + u * r0;
                tail += kernel.ray_tail(z, zeta1, u)? * element.factor(seg, r0);
                r0
            }
        };
        seed_panels(seg, k, 0.0, len, z, &mut initial);
    }

    let segments = c.segments();
    let outcome = integrate_adaptive(
        |k, s| {
            let seg = &segments[k];
            kernel.eval(z, seg.point(s)) * element.factor(seg, s)
        },
        &initial,
        quad.tolerance,
        quad.max_panels,
    );
    let value = outcome.value + tail;
    if !outcome.converged {
        return Err(Error::NoConvergence {
            estimate: value,
            error: outcome.error,
            tolerance: quad.tolerance,
            panels: outcome.panels,
        });
    }
    Ok(ContourIntegral {
        value,
        error_estimate: outcome.error,
        panels: outcome.panels,
    })
}

/// Splits `[lo, hi]` until every panel is no longer than the distance from
/// `z` to its midpoint, so the first Kronrod pass already resolves the
/// kernel's peak.
fn seed_panels(seg: &ContourSegment, k: usize, lo: f64, hi: f64, z: Complex64, out: &mut Vec<(usize, f64, f64)>) {
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let mid = 0.5 * (a + b);
        if b - a > (z - seg.point(mid)).norm() && mid > a && mid < b {
            stack.push((mid, b));
            stack.push((a, mid));
        } else {
            out.push((k, a, b));
        }
    }
}

/// `∫_γ (z-ζ)^{-2} dζ = 1/(z-b) - 1/(z-a)` for any path from `a` to `b`.
pub fn segment_closed_form(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if z == a || z == b {
        return Err(Error::Pole);
    }
    Ok((z - b).inv() - (z - a).inv())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerClosedForm {
    /// `∫ (z-ζ)^{-2} |dζ|` over `[a,p] ∪ [p,b]`.
    pub value: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    /// Coefficient `c1 - c2` of `(z-p)^{-1}`.
    pub corner_coefficient: Complex64,
    /// Set when `p` lies on `[a,b]`, so the two pieces are collinear.
    pub degenerate: bool,
}

/// The two-segment path `a → p → b` against `|dζ|`: on each piece
/// `|dζ| = dζ / u` with `u` the unit tangent, so `c_k = 1/u_k`.
pub fn corner_closed_form(a: Complex64, p: Complex64, b: Complex64, z: Complex64) -> Result<CornerClosedForm> {
    if p == a || p == b || a == b {
        return Err(Error::InvalidGeometry("corner vertices must be distinct".into()));
    }
    if z == a || z == b || z == p {
        return Err(Error::Pole);
    }
    let u1 = (p - a) / (p - a).norm();
    let u2 = (b - p) / (b - p).norm();
    let c1 = u1.inv();
    let c2 = u2.inv();
    let value = c1 * ((z - p).inv() - (z - a).inv()) + c2 * ((z - b).inv() - (z - p).inv());
    let corner_coefficient = c1 - c2;
    let scale = (p - a).norm().max((b - p).norm());
    let degenerate = point_to_segment(p, a, b) <= 1e-12 * scale;
    Ok(CornerClosedForm {
        value,
        c1,
        c2,
        corner_coefficient,
        degenerate,
    })
}

/// `∫_{|ζ|=1} (z-ζ)^{-2} dζ/ζ` (counterclockwise): `0` inside the disc,
/// `2πi / z²` outside.
pub fn circle_closed_form(z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if (r - 1.0).abs() <= 1e-12 {
        return Err(Error::OnContour);
    }
    if r < 1.0 {
        Ok(Complex64::new(0.0, 0.0))
    } else {
        Ok(2.0 * PI * I / (z * z))
    }
}

/// Coefficient `K` in `∫_star (z-ζ)^{-2} dα = K / (z-q)` for rays from `q`
/// with unit directions `u_k` and densities `d_k`: `K = -Σ d_k / u_k`.
pub fn ray_star_coefficient(rays: &[(Complex64, f64)]) -> Result<Complex64> {
    if rays.is_empty() {
        return Err(Error::Empty("star has no rays"));
    }
    let mut k = Complex64::new(0.0, 0.0);
    for &(u, d) in rays {
        if (u.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidGeometry(format!("ray direction must have unit modulus, got {}", u.norm())));
        }
        if !(d > 0.0) {
            return Err(Error::InvalidGeometry(format!("ray density must be positive, got {d}")));
        }
        k -= d / u;
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsKernelIntegral {
    /// `∫ |z-ζ|^{-2} dα(ζ)`.
    pub value: f64,
    pub distance: f64,
    /// `value / dist(z, Γ)^{-1}`.
    pub ratio: f64,
    pub error_estimate: f64,
}

pub fn abs_kernel_integral(c: &Contour, z: Complex64, quad: &QuadratureControl) -> Result<AbsKernelIntegral> {
    let out = contour_integral(c, IntegrationElement::Weighted, Kernel::AbsSquared, z, quad)?;
    let distance = c.distance(z);
    Ok(AbsKernelIntegral {
        value: out.value.re,
        distance,
        ratio: out.value.re * distance,
        error_estimate: out.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn segment_closed_form_examples() {
        let v = segment_closed_form(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)).unwrap();
        assert_abs_diff_eq!(v.re, -0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.1, epsilon = 1e-15);
        let v = segment_closed_form(c(0.3, 0.1), c(0.3, 0.1), c(5.0, 0.0)).unwrap();
        assert_eq!(v, c(0.0, 0.0));
        let v = segment_closed_form(c(0.0, 0.0), c(1.0, 0.0), c(0.5, 1.0)).unwrap();
        assert_abs_diff_eq!(v.re, -0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        assert_eq!(segment_closed_form(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)), Err(Error::Pole));
    }

    #[test]
    fn straight_corner_has_equal_constants() {
        let out = corner_closed_form(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 2.0), c(3.0, 0.0)).unwrap();
        assert_abs_diff_eq!((out.c1 - out.c2).norm(), 0.0, epsilon = 1e-15);
        assert!(out.degenerate);
        let bent = corner_closed_form(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(5.0, 0.0)).unwrap();
        assert!(!bent.degenerate);
        assert_abs_diff_eq!(bent.c1.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bent.c2.im, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn circle_closed_form_cases() {
        assert_eq!(circle_closed_form(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(circle_closed_form(c(0.5, 0.1)).unwrap(), c(0.0, 0.0));
        let v = circle_closed_form(c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, PI / 2.0, epsilon = 1e-15);
        assert_eq!(circle_closed_form(c(0.0, 1.0)), Err(Error::OnContour));
    }

    #[test]
    fn ray_star_examples() {
        let opposite = [(c(1.0, 0.0), 1.0), (c(-1.0, 0.0), 1.0)];
        assert_eq!(ray_star_coefficient(&opposite).unwrap(), c(0.0, 0.0));
        let k = ray_star_coefficient(&[(c(1.0, 0.0), 1.0), (c(0.0, 1.0), 1.0)]).unwrap();
        assert_abs_diff_eq!(k.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.im, 1.0, epsilon = 1e-15);
        assert!(matches!(ray_star_coefficient(&[]), Err(Error::Empty(_))));
        assert!(ray_star_coefficient(&[(c(2.0, 0.0), 1.0)]).is_err());
    }

    #[test]
    fn segment_validation() {
        assert!(ContourSegment::line(c(1.0, 1.0), c(1.0, 1.0)).is_err());
        assert!(ContourSegment::arc(c(0.0, 0.0), 0.0, 0.0, 1.0).is_err());
        assert!(ContourSegment::ray(c(0.0, 0.0), c(0.5, 0.0), RayLength::Infinite).is_err());
        assert!(ContourSegment::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap().with_density(-1.0).is_err());
    }

    #[test]
    fn closed_contour_must_close() {
        let segs = vec![
            ContourSegment::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap(),
            ContourSegment::line(c(1.0, 0.0), c(1.0, 1.0)).unwrap(),
        ];
        assert!(Contour::new(segs.clone(), true).is_err());
        assert!(Contour::new(segs, false).is_ok());
    }

    #[test]
    fn arc_distance() {
        let upper = ContourSegment::arc(c(0.0, 0.0), 1.0, 0.0, PI).unwrap();
        assert_abs_diff_eq!(upper.distance(c(0.0, 2.0)), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(upper.distance(c(0.0, -2.0)), 5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(upper.distance(c(0.0, 0.0)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn proximity_guard() {
        let seg = Contour::polygon(&[c(0.0, 0.0), c(1.0, 0.0)], false).unwrap();
        let err = contour_integral(
            &seg,
            IntegrationElement::Complex,
            Kernel::CauchySquared,
            c(0.5, 1e-9),
            &QuadratureControl::default(),
        );
        assert!(matches!(err, Err(Error::TooClose { .. })));
    }

    #[test]
    fn segment_quadrature_matches_closed_form() {
        let seg = Contour::polygon(&[c(0.0, 0.0), c(1.0, 0.0)], false).unwrap();
        let out = contour_integral(
            &seg,
            IntegrationElement::Complex,
            Kernel::CauchySquared,
            c(0.0, 2.0),
            &QuadratureControl::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(out.value.re, -0.2, epsilon = 1e-10);
        assert_abs_diff_eq!(out.value.im, 0.1, epsilon = 1e-10);
    }

    #[test]
    fn circle_with_arclength_element() {
        // |dζ| = dζ/(iζ) on the unit circle, so the integral is 2π/z².
        let circle = Contour::circle(c(0.0, 0.0), 1.0).unwrap();
        let out = contour_integral(
            &circle,
            IntegrationElement::Arclength,
            Kernel::CauchySquared,
            c(2.0, 0.0),
            &QuadratureControl::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(out.value.re, PI / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.value.im, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn infinite_cauchy_tail_is_rejected() {
        let star = Contour::star(c(0.0, 0.0), &[(c(1.0, 0.0), 1.0)], RayLength::Infinite).unwrap();
        let err = contour_integral(
            &star,
            IntegrationElement::Weighted,
            Kernel::Cauchy,
            c(0.0, 1.0),
            &QuadratureControl::default(),
        );
        assert!(matches!(err, Err(Error::UnsupportedTail(_))));
    }

    #[test]
    fn non_convergence_carries_estimate() {
        let seg = Contour::polygon(&[c(-1.0, 0.0), c(1.0, 0.0)], false).unwrap();
        let quad = QuadratureControl {
            max_panels: 4,
            tolerance: 1e-15,
            min_distance: Some(1e-9),
        };
        let err = contour_integral(&seg, IntegrationElement::Arclength, Kernel::AbsSquared, c(0.0, 1e-4), &quad);
        match err {
            Err(Error::NoConvergence { estimate, panels, .. }) => {
                assert!(estimate.re > 0.0);
                assert!(panels >= 4);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
