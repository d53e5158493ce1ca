//! Gauss–Legendre quadrature over the truncated fundamental domain of Γ₀(N).

use crate::error::{Error, Result};
use crate::lattice::{gamma0_coset_reps, Mat2, UpperHalfPoint};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n and P_n' by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// The rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    x.iter().zip(&w).map(|(x, w)| (0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w)).collect()
}

/// Grid sizes and truncation for integrals over X₀(N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Height Y splitting the domain; above it the variable t = 1/y is used.
    pub y_split: f64,
    pub nx: usize,
    pub ny: usize,
    pub n_tail: usize,
    /// Panels for u-averages in Fourier-coefficient extraction.
    pub n_u: usize,
    /// Truncation budget for lattice sums inside integrands.
    pub budget: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { y_split: 8.0, nx: 24, ny: 24, n_tail: 16, n_u: 32, budget: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.y_split < 2.0 || self.nx == 0 || self.ny == 0 || self.n_tail == 0 || self.n_u == 0 || self.budget <= 0.0 {
            return Err(Error::InvalidParameter(format!("invalid quadrature spec {self:?}")));
        }
        Ok(())
    }

    /// Halved spacing and Y raised by 2.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            y_split: self.y_split + 2.0,
            nx: 2 * self.nx,
            ny: 2 * self.ny,
            n_tail: 2 * self.n_tail,
            ..*self
        }
    }

    /// A smaller grid for quick runs.
    pub fn coarse() -> Self {
        QuadratureSpec { nx: 12, ny: 12, n_tail: 8, ..Self::default() }
    }
}

/// A node of the rule on ∪_j γ_j F with its weight for dμ = dx dy/y².
#[derive(Debug, Clone, Copy)]
pub struct QuadraturePoint {
    pub z: UpperHalfPoint,
    /// The same point in the standard domain F.
    pub z_reduced: UpperHalfPoint,
    pub weight: f64,
    /// Whether the node lies above the split height (t = 1/y substitution).
    pub tail: bool,
    pub coset: usize,
}

/// Nodes for the standard domain F.
pub fn fundamental_domain_rule(spec: &QuadratureSpec) -> Vec<(UpperHalfPoint, f64, bool)> {
    let mut out = Vec::with_capacity(spec.nx * (2 * spec.ny + spec.n_tail));
    for (x, wx) in gauss_legendre_on(spec.nx, -0.5, 0.5) {
        let y0 = (1.0 - x * x).sqrt();
        for (y, wy) in gauss_legendre_on(spec.ny, y0, 1.0).into_iter().chain(gauss_legendre_on(spec.ny, 1.0, spec.y_split)) {
            out.push((UpperHalfPoint { x, y }, wx * wy / (y * y), false));
        }
        // dμ = dx dt with t = 1/y
        for (t, wt) in gauss_legendre_on(spec.n_tail, 0.0, 1.0 / spec.y_split) {
            out.push((UpperHalfPoint { x, y: 1.0 / t }, wx * wt, true));
        }
    }
    out
}

/// Nodes for X₀(N) = ∪_j γ_j F over right coset representatives of Γ₀(N) in SL₂(ℤ).
pub fn x0n_rule(level: i64, spec: &QuadratureSpec) -> Vec<QuadraturePoint> {
    let base = fundamental_domain_rule(spec);
    let reps: Vec<Mat2> = gamma0_coset_reps(level);
    let mut out = Vec::with_capacity(base.len() * reps.len());
    for (j, g) in reps.iter().enumerate() {
        for &(z, w, tail) in &base {
            out.push(QuadraturePoint { z: z.act(g), z_reduced: z, weight: w, tail, coset: j });
        }
    }
    out
}

/// ∫_{X₀(N)} f dμ with the tail part reported separately.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralReport {
    pub value: f64,
    pub tail: f64,
    pub nodes: usize,
}

pub fn integrate_over_x0n<F>(f: F, level: i64, spec: &QuadratureSpec) -> Result<IntegralReport>
where
    F: Fn(UpperHalfPoint) -> f64,
{
    spec.validate()?;
    let rule = x0n_rule(level, spec);
    let (mut value, mut tail) = (0.0, 0.0);
    for p in &rule {
        let fz = f(p.z);
        if !fz.is_finite() {
            return Err(Error::NonFinite { x: p.z.x, y: p.z.y });
        }
        value += p.weight * fz;
        if p.tail {
            tail += p.weight * fz;
        }
    }
    Ok(IntegralReport { value, tail, nodes: rule.len() })
}

/// vol X₀(N) = (π/3)·[SL₂(ℤ) : Γ₀(N)].
pub fn x0n_volume(level: i64) -> f64 {
    PI / 3.0 * gamma0_coset_reps(level).len() as f64
}
