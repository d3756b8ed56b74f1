//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued
//! integrands on real intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::numeric::complex_sum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and `|K15 - G7|` on `[lo, hi]`.
pub fn gauss_kronrod<F>(f: &F, lo: f64, hi: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[k];
        if k % 2 == 1 {
            gauss += pair * WG[k / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm())
}

/// A subinterval of piece `piece` with its local estimate.
#[derive(Debug, Clone, Copy)]
struct Panel {
    piece: usize,
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOutcome {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Integrates a family of integrands `f(piece, s)` over their intervals,
/// bisecting the panel with the largest error estimate until the summed
/// estimate drops below `tolerance` or `max_panels` is reached.
///
/// `initial` lists `(piece, lo, hi)` panels to start from.
pub fn integrate_adaptive<F>(
    f: F,
    initial: &[(usize, f64, f64)],
    tolerance: f64,
    max_panels: usize,
) -> AdaptiveOutcome
where
    F: Fn(usize, f64) -> Complex64,
{
    let eval = |piece: usize, lo: f64, hi: f64| {
        let g = |s: f64| f(piece, s);
        let (value, error) = gauss_kronrod(&g, lo, hi);
        Panel {
            piece,
            lo,
            hi,
            value,
            error,
        }
    };
    let mut heap: BinaryHeap<Panel> = initial.iter().map(|&(p, lo, hi)| eval(p, lo, hi)).collect();
    let mut total_error: f64 = heap.iter().map(|p| p.error).sum();
    while total_error > tolerance && heap.len() < max_panels {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Interval exhausted at machine precision.
            heap.push(worst);
            break;
        }
        let left = eval(worst.piece, worst.lo, mid);
        let right = eval(worst.piece, mid, worst.hi);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Recompute from scratch so that running-sum drift does not leak in.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|a, b| (a.piece, a.lo).partial_cmp(&(b.piece, b.lo)).unwrap_or(Ordering::Equal));
    let error: f64 = panels.iter().map(|p| p.error).sum();
    AdaptiveOutcome {
        value: complex_sum(panels.iter().map(|p| p.value)),
        error,
        panels: panels.len(),
        converged: error <= tolerance,
    }
}
