//! Frequency grids and spectral integration.

use super::adaptive::{integrate_adaptive, kronrod_panel, Integration, QuadValue};
use super::gauss::gauss_legendre;
use crate::error::{Error, Result};

/// How a [`FrequencyGrid`] may be refined during integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementPolicy {
    /// Bisect the worst panels until the tolerance is met or the budget is spent.
    Adaptive { max_panels: usize },
    /// One Gauss–Kronrod panel per grid interval; no refinement.
    Fixed,
}

impl Default for RefinementPolicy {
    fn default() -> Self {
        RefinementPolicy::Adaptive { max_panels: 400_000 }
    }
}

/// Tolerance and refinement policy for spectral integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSettings {
    pub rel_tol: f64,
    pub policy: RefinementPolicy,
}

impl Default for SpectralSettings {
    fn default() -> Self {
        SpectralSettings { rel_tol: 1e-10, policy: RefinementPolicy::default() }
    }
}

impl SpectralSettings {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        SpectralSettings { rel_tol, ..Default::default() }
    }
}

/// Strictly increasing, positive angular-frequency nodes [rad/s]. Intervals
/// between nodes are the seed panels of the spectral quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    nodes: Vec<f64>,
    policy: RefinementPolicy,
}

impl FrequencyGrid {
    pub fn new(nodes: Vec<f64>, policy: RefinementPolicy) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Argument("frequency grid needs at least two nodes".into()));
        }
        if nodes.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Argument("frequency nodes must be finite and positive".into()));
        }
        if nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(Error::Argument("frequency nodes must be strictly increasing".into()));
        }
        Ok(FrequencyGrid { nodes, policy })
    }

    /// `panels` logarithmically spaced panels between `lo` and `hi`.
    pub fn log_spaced(lo: f64, hi: f64, panels: usize, policy: RefinementPolicy) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) || panels == 0 {
            return Err(Error::Argument(format!("invalid log grid [{lo:e}, {hi:e}] with {panels} panels")));
        }
        let ratio = (hi / lo).ln();
        let mut nodes: Vec<f64> = (0..=panels)
            .map(|i| lo * (ratio * i as f64 / panels as f64).exp())
            .collect();
        nodes[0] = lo;
        nodes[panels] = hi;
        FrequencyGrid::new(nodes, policy)
    }

    /// Nodes of `base` that fall strictly inside `(lo, hi)`, plus the two
    /// endpoints. Used to align panels with the nodes of a tabulated material.
    pub fn clipped(base: &[f64], lo: f64, hi: f64, policy: RefinementPolicy) -> Result<Self> {
        let mut nodes = Vec::with_capacity(base.len() + 2);
        nodes.push(lo);
        nodes.extend(base.iter().copied().filter(|w| *w > lo && *w < hi));
        nodes.push(hi);
        FrequencyGrid::new(nodes, policy)
    }

    /// Split intervals whose ratio `w[i+1]/w[i]` exceeds `max_ratio` into
    /// logarithmically equal pieces.
    pub fn with_max_ratio(&self, max_ratio: f64) -> Self {
        assert!(max_ratio > 1.0);
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            let r = w[1] / w[0];
            if r > max_ratio {
                let pieces = (r.ln() / max_ratio.ln()).ceil() as usize;
                for k in 1..pieces {
                    nodes.push(w[0] * (r.ln() * k as f64 / pieces as f64).exp());
                }
            }
        }
        nodes.push(*self.nodes.last().unwrap());
        FrequencyGrid { nodes, policy: self.policy }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn policy(&self) -> RefinementPolicy {
        self.policy
    }

    pub fn support(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// Fixed Gauss–Legendre rule with `points` nodes per grid interval, as
    /// `(omega, weight)` pairs in increasing frequency.
    pub fn gauss_rule(&self, points: usize) -> Vec<(f64, f64)> {
        let (x, w) = gauss_legendre(points);
        let mut rule = Vec::with_capacity(points * (self.nodes.len() - 1));
        for p in self.nodes.windows(2) {
            let c = 0.5 * (p[0] + p[1]);
            let h = 0.5 * (p[1] - p[0]);
            for (xi, wi) in x.iter().zip(&w) {
                rule.push((c + h * xi, h * wi));
            }
        }
        rule
    }
}

/// Integrate `integrand` over the support of `grid`.
///
/// The result carries an error estimate; `converged == false` is the warning
/// flag for an estimate above `rel_tol * |value|`.
pub fn integrate_frequency<T, F>(integrand: F, grid: &FrequencyGrid, rel_tol: f64) -> Result<Integration<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    match grid.policy {
        RefinementPolicy::Adaptive { max_panels } => {
            integrate_adaptive(integrand, &grid.nodes, rel_tol, 0.0, max_panels.max(grid.nodes.len()))
        }
        RefinementPolicy::Fixed => {
            if !(rel_tol > 0.0 && rel_tol < 1.0) {
                return Err(Error::Argument(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
            }
            let mut f = integrand;
            let mut value = T::zero();
            let mut error = 0.0;
            for p in grid.nodes.windows(2) {
                let (v, e) = kronrod_panel(&mut f, p[0], p[1])?;
                value = value + v;
                error += e;
            }
            let converged = error <= rel_tol * value.magnitude();
            Ok(Integration { value, error, converged, evaluations: 15 * (grid.nodes.len() - 1) })
        }
    }
}
