//! Globally adaptive Gauss–Kronrod (7/15) integration over a set of seed panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use nalgebra::SMatrix;
use num_complex::Complex64;

use super::gauss::{GAUSS7_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS};
use crate::error::{Error, Result};

/// Values that can be integrated: real scalars, complex scalars and small
/// real vectors/matrices (several integrals sharing one set of evaluations).
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    /// Norm used for error control.
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<const R: usize, const C: usize> QuadValue for SMatrix<f64, R, C> {
    fn zero() -> Self {
        SMatrix::zeros()
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
    fn is_finite_value(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

/// Outcome of a quadrature: value, error estimate and whether the requested
/// tolerance was reached.
#[derive(Debug, Clone, Copy)]
pub struct Integration<T> {
    pub value: T,
    pub error: f64,
    /// `false` when the panel budget ran out before the tolerance was met.
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

struct Ranked {
    error: f64,
    index: usize,
}

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

fn checked<T: QuadValue>(x: f64, v: T) -> Result<T> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::NonFinite { node: x })
    }
}

/// One 15-point Kronrod panel; the error estimate is |K15 - G7|.
pub(crate) fn kronrod_panel<T, F>(f: &mut F, a: f64, b: f64) -> Result<(T, f64)>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(centre, f(centre))?;
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * GAUSS7_WEIGHTS[3];
    for j in 0..7 {
        let dx = half * KRONROD_NODES[j];
        let (x1, x2) = (centre - dx, centre + dx);
        let f1 = checked(x1, f(x1))?;
        let f2 = checked(x2, f(x2))?;
        let pair = f1 + f2;
        kronrod = kronrod + pair * KRONROD_WEIGHTS[j];
        if j % 2 == 1 {
            gauss = gauss + pair * GAUSS7_WEIGHTS[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    Ok((kronrod, (kronrod - gauss).magnitude()))
}

/// Adaptive integration over `[breakpoints[0], breakpoints[last]]`.
///
/// Every interval between consecutive breakpoints starts as one panel; the
/// panel with the largest error is bisected until the summed error is at most
/// `max(rel_tol * |value|, abs_tol)` or `max_panels` is reached. The final sum
/// runs over panels in left-to-right order, so the result does not depend on
/// the refinement history beyond the panel set itself.
pub fn integrate_adaptive<T, F>(
    mut f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Integration<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if breakpoints.len() < 2 {
        return Err(Error::Argument("need at least two breakpoints".into()));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Argument(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Argument("breakpoints must be strictly increasing".into()));
    }

    let mut panels: Vec<Panel<T>> = Vec::with_capacity(breakpoints.len() * 2);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in breakpoints.windows(2) {
        let (value, error) = kronrod_panel(&mut f, w[0], w[1])?;
        evaluations += 15;
        heap.push(Ranked { error, index: panels.len() });
        panels.push(Panel { a: w[0], b: w[1], value, error });
    }

    let total = |panels: &[Panel<T>]| {
        let mut v = T::zero();
        let mut e = 0.0;
        for p in panels {
            v = v + p.value;
            e += p.error;
        }
        (v, e)
    };

    let (mut value, mut error) = total(&panels);
    let mut converged = error <= (rel_tol * value.magnitude()).max(abs_tol);
    let mut since_resum = 0usize;
    while !converged {
        if panels.len() >= max_panels {
            break;
        }
        let Some(Ranked { index, .. }) = heap.pop() else { break };
        let p = panels[index];
        let mid = 0.5 * (p.a + p.b);
        if !(p.a < mid && mid < p.b) {
            // Panel cannot be split further in floating point; keep its error.
            continue;
        }
        let (v1, e1) = kronrod_panel(&mut f, p.a, mid)?;
        let (v2, e2) = kronrod_panel(&mut f, mid, p.b)?;
        evaluations += 30;
        value = value - p.value + v1 + v2;
        error += e1 + e2 - p.error;
        panels[index] = Panel { a: p.a, b: mid, value: v1, error: e1 };
        heap.push(Ranked { error: e1, index });
        heap.push(Ranked { error: e2, index: panels.len() });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });

        since_resum += 1;
        if since_resum >= 64 {
            (value, error) = total(&panels);
            since_resum = 0;
        }
        converged = error <= (rel_tol * value.magnitude()).max(abs_tol);
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (value, error) = total(&panels);
    let converged = error <= (rel_tol * value.magnitude()).max(abs_tol);
    Ok(Integration { value, error, converged, evaluations })
}

/// Integrate over a finite interval with a handful of seed panels.
pub fn integrate_interval<T, F>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Integration<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let seeds = 8;
    let bp: Vec<f64> = (0..=seeds)
        .map(|i| a + (b - a) * i as f64 / seeds as f64)
        .collect();
    integrate_adaptive(f, &bp, rel_tol, abs_tol, 20_000)
}
