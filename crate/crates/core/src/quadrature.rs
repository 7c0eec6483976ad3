//! Adaptive Gauss–Kronrod quadrature in one dimension and nested tensor
//! integration over boxes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Limits for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureLimits {
    pub max_intervals: usize,
}

impl Default for QuadratureLimits {
    fn default() -> Self {
        Self { max_intervals: 2_000 }
    }
}

/// 15-point Kronrod estimate and its embedded 7-point Gauss difference.
fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Interval {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration of `f` over `[lo, hi]` to absolute tolerance
/// `abs_tol` or relative tolerance `rel_tol`, whichever is looser.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    limits: QuadratureLimits,
) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let (value, error) = kronrod15(&mut f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { lo, hi, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut count = 1;
    loop {
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if count >= limits.max_intervals {
            return Err(Error::Quadrature(format!(
                "interval cap {} reached on [{lo}, {hi}] with error {total_err:e}",
                limits.max_intervals
            )));
        }
        let worst = heap.pop().expect("heap holds at least one interval");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval no longer splittable in floating point.
            return Ok(total);
        }
        let (lv, le) = kronrod15(&mut f, worst.lo, mid);
        let (rv, re) = kronrod15(&mut f, mid, worst.hi);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Interval { lo: worst.lo, hi: mid, value: lv, error: le });
        heap.push(Interval { lo: mid, hi: worst.hi, value: rv, error: re });
        count += 1;
    }
}

/// Nested adaptive integration over the axis-aligned box `[lo, hi]`
/// (up to three dimensions).
pub fn integrate_box<F: Fn(&[f64]) -> f64>(f: &F, lo: &[f64], hi: &[f64], rel_tol: f64) -> Result<f64> {
    integrate_box_with_breaks(f, lo, hi, rel_tol, &|_, _| Vec::new())
}

/// As [`integrate_box`], with known non-smooth points. `breaks(axis, point)`
/// returns positions along `axis` where the integrand (after integrating out
/// the later axes) jumps or kinks, given the earlier coordinates of `point`.
/// A jump that falls between the last Kronrod node and an interval end is
/// invisible to the error estimate, so discontinuous integrands need these.
pub fn integrate_box_with_breaks<F, B>(f: &F, lo: &[f64], hi: &[f64], rel_tol: f64, breaks: &B) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    B: Fn(usize, &[f64]) -> Vec<f64>,
{
    assert_eq!(lo.len(), hi.len());
    let mut point = vec![0.0; lo.len()];
    nested(f, breaks, lo, hi, 0, &mut point, rel_tol)
}

fn nested<F, B>(f: &F, breaks: &B, lo: &[f64], hi: &[f64], axis: usize, point: &mut [f64], rel_tol: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    B: Fn(usize, &[f64]) -> Vec<f64>,
{
    let dim = lo.len();
    let limits = QuadratureLimits::default();
    let mut cuts: Vec<f64> = breaks(axis, point).into_iter().filter(|&b| b > lo[axis] && b < hi[axis]).collect();
    cuts.push(lo[axis]);
    cuts.push(hi[axis]);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    let mut total = 0.0;
    for piece in cuts.windows(2) {
        let mut p = point.to_vec();
        if axis + 1 == dim {
            total += integrate_1d(
                |x| {
                    p[axis] = x;
                    f(&p)
                },
                piece[0],
                piece[1],
                0.0,
                rel_tol,
                limits,
            )?;
            continue;
        }
        // Inner integrals run tighter so the outer integrand looks smooth to
        // the Kronrod error estimate.
        let inner_tol = rel_tol * 0.05;
        let mut failure = None;
        let value = integrate_1d(
            |x| {
                p[axis] = x;
                match nested(f, breaks, lo, hi, axis + 1, &mut p, inner_tol) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            piece[0],
            piece[1],
            0.0,
            rel_tol,
            limits,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        total += value;
    }
    Ok(total)
}
