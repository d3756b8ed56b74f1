//! Real `m`-planes in `C^m`: Hermitian, real and symplectic forms, the
//! totally-real coefficient and (special) Lagrangian tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forms {
    /// `⟨v,w⟩ = Σ v_j conj(w_j)`.
    pub hermitian: Complex64,
    /// `(v,w) = Re ⟨v,w⟩`.
    pub real: f64,
    /// `[v,w] = Im ⟨v,w⟩`.
    pub symplectic: f64,
}

pub fn hermitian(v: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch { left: v.len(), right: w.len() });
    }
    Ok(v.iter().zip(w).map(|(a, b)| a * b.conj()).sum())
}

pub fn forms(v: &[Complex64], w: &[Complex64]) -> Result<Forms> {
    let h = hermitian(v, w)?;
    Ok(Forms {
        hermitian: h,
        real: h.re,
        symplectic: h.im,
    })
}

/// A real-linear basis `b₁ … b_m` of a real `m`-plane in `C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneBasis {
    m: usize,
    vectors: Vec<Vec<Complex64>>,
}

/// Real-rank tolerance for basis validation, relative to the largest
/// singular value.
const RANK_TOL: f64 = 1e-10;

impl PlaneBasis {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = vectors.len();
        if m == 0 {
            return Err(Error::Empty("plane basis"));
        }
        for v in &vectors {
            if v.len() != m {
                return Err(Error::DimensionMismatch { left: m, right: v.len() });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::DegenerateBasis("non-finite entry".into()));
            }
        }
        let basis = Self { m, vectors };
        let sv = basis.real_matrix().singular_values();
        let top = sv.max();
        let bottom = sv.min();
        if !(top > 0.0) || bottom <= RANK_TOL * top {
            return Err(Error::DegenerateBasis(format!(
                "vectors are not real-linearly independent (singular values {bottom:e} / {top:e})"
            )));
        }
        Ok(basis)
    }

    /// The plane spanned over `R` by the columns of `a` (the image of `R^m`).
    pub fn from_columns(a: &DMatrix<Complex64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch { left: a.nrows(), right: a.ncols() });
        }
        Self::new(a.column_iter().map(|c| c.iter().copied().collect()).collect())
    }

    pub fn standard(m: usize) -> Result<Self> {
        Self::from_columns(&DMatrix::identity(m, m))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// Columns are the basis vectors.
    pub fn complex_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.m, self.m, |i, j| self.vectors[j][i])
    }

    /// The `2m × m` real matrix with real parts stacked over imaginary parts.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let m = self.m;
        DMatrix::from_fn(2 * m, m, |i, j| if i < m { self.vectors[j][i].re } else { self.vectors[j][i - m].im })
    }

    /// The same plane under the complex-linear map `a`.
    pub fn mapped(&self, a: &DMatrix<Complex64>) -> Result<Self> {
        Self::from_columns(&(a * self.complex_matrix()))
    }

    /// The same plane with basis `B·c` for a real invertible `c`.
    pub fn rebased(&self, c: &DMatrix<f64>) -> Result<Self> {
        Self::from_columns(&(self.complex_matrix() * c.map(|x| Complex64::new(x, 0.0))))
    }
}

/// `|det_C B| / √det(Gram)` with `Gram_ij = (b_i, b_j)`: the modulus of the
/// complex volume form on the plane relative to its real volume.
pub fn totally_real_coefficient(plane: &PlaneBasis) -> Result<f64> {
    let b = plane.real_matrix();
    let gram_det = (b.transpose() * &b).determinant();
    if !(gram_det > 0.0) {
        return Err(Error::DegenerateBasis(format!("Gram determinant {gram_det:e}")));
    }
    Ok(plane.complex_matrix().determinant().norm() / gram_det.sqrt())
}

pub fn is_totally_real(plane: &PlaneBasis, tol: f64) -> Result<bool> {
    Ok(totally_real_coefficient(plane)? > tol)
}

/// `max_{i,j} |[b_i, b_j]|`.
pub fn symplectic_defect(plane: &PlaneBasis) -> f64 {
    let v = plane.vectors();
    let mut worst = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let h: Complex64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b.conj()).sum();
            worst = worst.max(h.im.abs());
        }
    }
    worst
}

pub fn is_lagrangian(plane: &PlaneBasis, tol: f64) -> bool {
    symplectic_defect(plane) <= tol
}

/// Gram–Schmidt in the real inner product `(·,·)`, keeping orientation.
pub fn real_orthonormalize(plane: &PlaneBasis) -> Result<PlaneBasis> {
    let m = plane.m();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(m);
    let b = plane.real_matrix();
    for j in 0..m {
        let mut v = b.column(j).into_owned();
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for u in &cols {
                let c = u.dot(&v);
                v.axpy(-c, u, 1.0);
            }
        }
        let n = v.norm();
        if !(n > RANK_TOL) {
            return Err(Error::DegenerateBasis("orthonormalization collapsed".into()));
        }
        cols.push(v / n);
    }
    PlaneBasis::new(
        cols.iter()
            .map(|c| (0..m).map(|i| Complex64::new(c[i], c[i + m])).collect())
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialLagrangian {
    pub lagrangian: bool,
    /// `det_C` of the real-orthonormalized basis.
    pub determinant: Complex64,
    /// Lagrangian with determinant `±1` within the tolerance.
    pub special: bool,
    /// The determinant is `-1`: special Lagrangian once the basis
    /// orientation is reversed.
    pub reversed: bool,
}

pub fn special_lagrangian_test(plane: &PlaneBasis, tol: f64) -> Result<SpecialLagrangian> {
    let lagrangian = is_lagrangian(plane, tol);
    let det = real_orthonormalize(plane)?.complex_matrix().determinant();
    let one = Complex64::new(1.0, 0.0);
    let plus = (det - one).norm() <= tol;
    let minus = (det + one).norm() <= tol;
    Ok(SpecialLagrangian {
        lagrangian,
        determinant: det,
        special: lagrangian && (plus || minus),
        reversed: lagrangian && minus && !plus,
    })
}

pub fn is_special_lagrangian(plane: &PlaneBasis, tol: f64) -> Result<bool> {
    Ok(special_lagrangian_test(plane, tol)?.special)
}

/// Haar-distributed unitary matrix: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary(m: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// A Haar unitary rescaled to determinant one.
pub fn random_special_unitary(m: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let u = random_unitary(m, rng);
    let det = u.determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / m as f64);
    u * root
}

pub fn diagonal(entries: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn form_examples() {
        let v = [c(1.0, 0.0), c(0.0, 0.0)];
        let f = forms(&v, &v).unwrap();
        assert_eq!((f.hermitian, f.real, f.symplectic), (c(1.0, 0.0), 1.0, 0.0));
        let w = [c(0.0, 1.0), c(0.0, 0.0)];
        let f = forms(&v, &w).unwrap();
        assert_eq!((f.hermitian, f.real, f.symplectic), (c(0.0, -1.0), 0.0, -1.0));
        assert_eq!(forms(&w, &v).unwrap().symplectic, 1.0);
        let v = [c(0.3, -1.2), c(2.0, 0.5)];
        let iv: Vec<Complex64> = v.iter().map(|z| z * c(0.0, 1.0)).collect();
        let sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(forms(&v, &iv).unwrap().symplectic, -sq, epsilon = 1e-15);
        assert!(forms(&v, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn coefficient_examples() {
        for m in 1..=5 {
            let std = PlaneBasis::standard(m).unwrap();
            assert_abs_diff_eq!(totally_real_coefficient(&std).unwrap(), 1.0, epsilon = 1e-15);
            assert!(is_lagrangian(&std, 1e-12));
            assert!(is_special_lagrangian(&std, 1e-12).unwrap());
        }
        let tilted = PlaneBasis::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 1.0), c(1.0, 0.0)]]).unwrap();
        assert_abs_diff_eq!(totally_real_coefficient(&tilted).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(!is_lagrangian(&tilted, 1e-10));
        let v = vec![c(0.6, 0.2), c(-0.1, 0.9)];
        let iv = v.iter().map(|z| z * c(0.0, 1.0)).collect();
        let complex_line = PlaneBasis::new(vec![v, iv]).unwrap();
        assert!(totally_real_coefficient(&complex_line).unwrap() < 1e-15);
        assert!(!is_totally_real(&complex_line, 1e-10).unwrap());
    }

    #[test]
    fn dependent_basis_rejected() {
        let v = vec![c(1.0, 2.0), c(3.0, -1.0)];
        let w: Vec<Complex64> = v.iter().map(|z| z * 2.0).collect();
        assert!(matches!(PlaneBasis::new(vec![v, w]), Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn special_lagrangian_examples() {
        let std = PlaneBasis::standard(2).unwrap();
        let su = diagonal(&[Complex64::from_polar(1.0, FRAC_PI_4), Complex64::from_polar(1.0, -FRAC_PI_4)]);
        assert!(is_special_lagrangian(&std.mapped(&su).unwrap(), 1e-12).unwrap());
        let t = special_lagrangian_test(&std.mapped(&diagonal(&[c(0.0, 1.0), c(1.0, 0.0)])).unwrap(), 1e-12).unwrap();
        assert!(t.lagrangian && !t.special);
        assert_abs_diff_eq!((t.determinant - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        let flipped = PlaneBasis::new(vec![std.vectors()[1].clone(), std.vectors()[0].clone()]).unwrap();
        let t = special_lagrangian_test(&flipped, 1e-12).unwrap();
        assert!(t.special && t.reversed);
    }
}
