//! The real Clifford algebra generated by `e_1 … e_n` with
//! `e_j e_k = -e_k e_j` for `j != k` and `e_j^2 = -1`.
//!
//! Elements are stored densely: coefficient `k` multiplies the basis blade
//! whose generator set is the bit pattern of `k` (bit `j` set means
//! `e_{j+1}` is present, generators in ascending order).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported generator count.
pub const MAX_GENERATORS: usize = 16;
/// Generator counts up to this use a precomputed sign table in products.
const SIGN_TABLE_MAX: usize = 8;

/// A basis blade `e_{j_1} e_{j_2} ⋯ e_{j_l}`, `j_1 < ⋯ < j_l`, as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const ONE: BladeIndex = BladeIndex(0);

    /// The generator `e_j`, with `j` counted from 1.
    pub fn generator(j: usize) -> Self {
        debug_assert!(j >= 1);
        BladeIndex(1 << (j - 1))
    }

    pub fn from_generators(gens: &[usize]) -> Self {
        BladeIndex(gens.iter().fold(0, |m, &j| m | (1 << (j - 1))))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n < 32 && self.0 >> n != 0 {
            let index = 32 - self.0.leading_zeros();
            return Err(Error::BladeOutOfRange { index, n });
        }
        Ok(())
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut bits = self.0;
        while bits != 0 {
            write!(f, "e{}", bits.trailing_zeros() + 1)?;
            bits &= bits - 1;
        }
        Ok(())
    }
}

/// Sign picked up when multiplying blade `a` by blade `b`.
///
/// Each generator of `b` is moved left past the generators of `a` with a
/// larger index (one transposition each), then every repeated generator
/// collapses through `e_j^2 = -1`.
fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut bits = b;
    while bits != 0 {
        let j = bits.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bits &= bits - 1;
    }
    let squares = (a & b).count_ones();
    if (swaps + squares) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn sign_table(n: usize) -> &'static [i8] {
    static TABLES: [OnceLock<Vec<i8>>; SIGN_TABLE_MAX + 1] = [const { OnceLock::new() }; SIGN_TABLE_MAX + 1];
    TABLES[n].get_or_init(|| {
        let dim = 1usize << n;
        let mut table = vec![0i8; dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                table[a * dim + b] = reorder_sign(a as u32, b as u32) as i8;
            }
        }
        table
    })
}

/// Product of two basis blades: `a b = sign · out`.
pub fn blade_product(a: BladeIndex, b: BladeIndex, n: usize) -> Result<(f64, BladeIndex)> {
    a.check(n)?;
    b.check(n)?;
    Ok((reorder_sign(a.0, b.0), BladeIndex(a.0 ^ b.0)))
}

/// A general element of the algebra with `n` generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    n: usize,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(Self {
            n,
            coeffs: vec![0.0; 1 << n],
        })
    }

    pub fn scalar(n: usize, value: f64) -> Result<Self> {
        let mut mv = Self::zero(n)?;
        mv.coeffs[0] = value;
        Ok(mv)
    }

    /// `e_j` with `j` counted from 1.
    pub fn basis_vector(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::BladeOutOfRange { index: j as u32, n });
        }
        Self::blade(n, BladeIndex::generator(j), 1.0)
    }

    pub fn blade(n: usize, blade: BladeIndex, coeff: f64) -> Result<Self> {
        blade.check(n)?;
        let mut mv = Self::zero(n)?;
        mv.coeffs[blade.0 as usize] = coeff;
        Ok(mv)
    }

    /// `Σ v_j e_j`.
    pub fn vector(v: &[f64]) -> Result<Self> {
        let mut mv = Self::zero(v.len())?;
        for (j, &x) in v.iter().enumerate() {
            mv.coeffs[1 << j] = x;
        }
        Ok(mv)
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(Error::UnsupportedDimension(n));
        }
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: 1 << n,
                right: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: BladeIndex) -> f64 {
        self.coeffs.get(blade.0 as usize).copied().unwrap_or(0.0)
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficients of `e_1 … e_n`.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coeffs[1 << j]).collect()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Keeps only the blades of the given grade.
    pub fn grade_part(&self, grade: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| if (k as u32).count_ones() == grade { c } else { 0.0 })
            .collect();
        Self { n: self.n, coeffs }
    }

    pub fn is_grade(&self, grade: u32, tol: f64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| (k as u32).count_ones() == grade || c.abs() <= tol)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        self.same_n(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        Ok(())
    }

    /// Clifford product, the bilinear extension of [`blade_product`].
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        let dim = self.coeffs.len();
        let mut out = vec![0.0; dim];
        let table = (self.n <= SIGN_TABLE_MAX).then(|| sign_table(self.n));
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let sign = match table {
                    Some(t) => t[a * dim + b] as f64,
                    None => reorder_sign(a as u32, b as u32),
                };
                out[a ^ b] += sign * ca * cb;
            }
        }
        Ok(Self { n: self.n, coeffs: out })
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·{}", BladeIndex(k as u32))?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator forms panic on mismatched generator counts; use the `try_*`
// methods where the counts are not known to agree.
impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("generator count mismatch")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_sub(rhs).expect("generator count mismatch")
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.try_mul(rhs).expect("generator count mismatch")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

/// `β = β₀ + Σ β_j e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Paravector {
    pub beta0: f64,
    pub betas: Vec<f64>,
}

impl Paravector {
    pub fn new(beta0: f64, betas: Vec<f64>) -> Self {
        Self { beta0, betas }
    }

    pub fn n(&self) -> usize {
        self.betas.len()
    }

    /// `Σ_{j=0}^n β_j²`.
    pub fn norm_sq(&self) -> f64 {
        self.beta0 * self.beta0 + self.betas.iter().map(|b| b * b).sum::<f64>()
    }

    /// `β* = β₀ − Σ β_j e_j`.
    pub fn conj(&self) -> Self {
        Self {
            beta0: self.beta0,
            betas: self.betas.iter().map(|b| -b).collect(),
        }
    }

    /// `β* / Σ β_j²`, defined iff `β ≠ 0`.
    pub fn inverse(&self) -> Result<Self> {
        let q = self.norm_sq();
        if q == 0.0 {
            return Err(Error::Singular);
        }
        let c = self.conj();
        Ok(Self {
            beta0: c.beta0 / q,
            betas: c.betas.iter().map(|b| b / q).collect(),
        })
    }

    pub fn to_multivector(&self) -> Result<Multivector> {
        let mut mv = Multivector::vector(&self.betas)?;
        mv.coeffs[0] = self.beta0;
        Ok(mv)
    }
}

pub fn paravector_conj(b: &Paravector) -> Paravector {
    b.conj()
}

pub fn paravector_inverse(b: &Paravector) -> Result<Paravector> {
    b.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, j: usize) -> Multivector {
        Multivector::basis_vector(n, j).unwrap()
    }

    #[test]
    fn blade_relations() {
        let e1 = BladeIndex::generator(1);
        let e2 = BladeIndex::generator(2);
        let e12 = BladeIndex::from_generators(&[1, 2]);
        assert_eq!(blade_product(e1, e2, 3).unwrap(), (1.0, e12));
        assert_eq!(blade_product(e2, e1, 3).unwrap(), (-1.0, e12));
        assert_eq!(blade_product(e1, e1, 3).unwrap(), (-1.0, BladeIndex::ONE));
        let e3 = BladeIndex::generator(3);
        assert_eq!(blade_product(BladeIndex::ONE, e3, 3).unwrap(), (1.0, e3));
    }

    #[test]
    fn blade_out_of_range() {
        let e4 = BladeIndex::generator(4);
        assert!(matches!(
            blade_product(e4, BladeIndex::ONE, 3),
            Err(Error::BladeOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn table_and_counting_agree() {
        for n in 1..=5 {
            let table = sign_table(n);
            let dim = 1 << n;
            for a in 0..dim {
                for b in 0..dim {
                    assert_eq!(table[a * dim + b] as f64, reorder_sign(a as u32, b as u32));
                }
            }
        }
    }

    #[test]
    fn bivector_squares_to_minus_one() {
        let e12 = Multivector::blade(2, BladeIndex::from_generators(&[1, 2]), 1.0).unwrap();
        assert_eq!(&e12 * &e12, Multivector::scalar(2, -1.0).unwrap());
    }

    #[test]
    fn one_plus_e1_times_one_minus_e1() {
        let one = Multivector::scalar(1, 1.0).unwrap();
        let a = &one + &e(1, 1);
        let b = &one - &e(1, 1);
        assert_eq!(&a * &b, Multivector::scalar(1, 2.0).unwrap());
    }

    #[test]
    fn addition_examples() {
        let two_e1 = &e(2, 1) + &e(2, 1);
        assert_eq!(two_e1, e(2, 1).scale(2.0));
        let zero = Multivector::zero(2).unwrap();
        assert_eq!(&two_e1 + &zero, two_e1);
        let one = Multivector::scalar(2, 1.0).unwrap();
        let s = &(&one + &e(2, 1)) + &(&one - &e(2, 1));
        assert_eq!(s, Multivector::scalar(2, 2.0).unwrap());
    }

    #[test]
    fn mismatched_generator_counts() {
        assert!(matches!(
            e(2, 1).try_mul(&e(3, 1)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(e(2, 1).try_add(&e(3, 1)).is_err());
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(Multivector::zero(17), Err(Error::UnsupportedDimension(17))));
        assert!(matches!(Multivector::zero(0), Err(Error::UnsupportedDimension(0))));
        assert!(Multivector::zero(16).is_ok());
    }

    #[test]
    fn conjugation_examples() {
        let b = Paravector::new(1.0, vec![1.0, 0.0]);
        assert_eq!(b.conj(), Paravector::new(1.0, vec![-1.0, 0.0]));
        let s = Paravector::new(5.0, vec![0.0, 0.0]);
        assert_eq!(s.conj().to_multivector().unwrap(), s.to_multivector().unwrap());
        let e2 = Paravector::new(0.0, vec![0.0, 1.0]);
        assert_eq!(e2.conj().betas, vec![0.0, -1.0]);
    }

    #[test]
    fn inverse_examples() {
        let b = Paravector::new(1.0, vec![1.0]);
        assert_eq!(b.inverse().unwrap(), Paravector::new(0.5, vec![-0.5]));
        let e1 = Paravector::new(0.0, vec![1.0, 0.0]);
        assert_eq!(e1.inverse().unwrap(), Paravector::new(0.0, vec![-1.0, -0.0]));
        assert_eq!(Paravector::new(0.0, vec![0.0; 3]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn pure_vector_squares_to_minus_norm() {
        let v = Multivector::vector(&[1.0, -2.0, 3.0]).unwrap();
        assert_eq!(&v * &v, Multivector::scalar(3, -14.0).unwrap());
    }

    #[test]
    fn display() {
        let mv = &Multivector::scalar(2, 2.0).unwrap()
            + &Multivector::blade(2, BladeIndex::from_generators(&[1, 2]), -1.0).unwrap();
        assert_eq!(mv.to_string(), "2 + -1·e1e2");
    }
}
