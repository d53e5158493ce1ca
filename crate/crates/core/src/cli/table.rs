//! CSV tables for plotting.

use crate::error::Result;
use crate::genus::TwistData;
use crate::greens::{green_profile_csv, GreenEvaluator};
use crate::lattice::UpperHalfPoint;
use crate::series::{normalized_el, theta_kernel};
use num_complex::Complex64;
use num_rational::Rational64;
use std::fmt::Write;

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| a + step * i as f64)
}

/// Normalized E_L(τ, s) on a grid u ∈ [−1/2, 1/2], v ∈ [v_min, v_max]:
/// rows `u,v,mu,re,im`.
pub fn eisenstein_table(level: i64, s: f64, v_range: (f64, f64), grid: usize, c_max: i64) -> Result<String> {
    let mut out = String::from("u,v,mu,re,im\n");
    for v in linspace(v_range.0, v_range.1, grid) {
        for u in linspace(-0.5, 0.5, grid) {
            let e = normalized_el(level, Complex64::new(u, v), s, c_max)?;
            for (mu, z) in e.values.iter().enumerate() {
                writeln!(out, "{u},{v},{mu},{},{}", z.re, z.im).expect("writing to a String");
            }
        }
    }
    Ok(out)
}

/// |Θ_L(τ, z)| and its e₀ component over the standard fundamental domain,
/// x ∈ [−1/2, 1/2], y ∈ [√3/2, y_max]: rows `x,y,abs_max,re0,im0`.
/// Points outside the domain are skipped.
pub fn theta_heatmap(twist: TwistData, tau: Complex64, y_max: f64, grid: usize, budget: f64) -> Result<String> {
    let mut out = String::from("x,y,abs_max,re0,im0\n");
    for y in linspace(3f64.sqrt() / 2.0, y_max, grid) {
        for x in linspace(-0.5, 0.5, grid) {
            if x * x + y * y < 1.0 - 1e-12 {
                continue;
            }
            let th = theta_kernel(twist, tau, UpperHalfPoint::new(x, y)?, budget)?;
            let c0 = th.component(0);
            writeln!(out, "{x},{y},{},{},{}", th.max_abs(), c0.re, c0.im).expect("writing to a String");
        }
    }
    Ok(out)
}

/// Ξ along the imaginary axis z = x + iy, y ∈ [y_min, y_max].
#[allow(clippy::too_many_arguments)]
pub fn green_profile(
    twist: TwistData,
    n: Rational64,
    mu: i64,
    v: f64,
    x: f64,
    y_range: (f64, f64),
    samples: usize,
    budget: f64,
) -> Result<String> {
    let g = GreenEvaluator::new(twist, n, mu, v, budget)?;
    let points = linspace(y_range.0, y_range.1, samples)
        .map(|y| UpperHalfPoint::new(x, y))
        .collect::<Result<Vec<_>>>()?;
    green_profile_csv(&g, &points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_expected_rows() {
        let t = eisenstein_table(1, 2.5, (1.0, 2.0), 2, 40).unwrap();
        assert_eq!(t.lines().count(), 1 + 2 * 2 * 2);
        let tw = TwistData::new(1, 5, 1).unwrap();
        let h = theta_heatmap(tw, Complex64::new(0.1, 1.2), 2.0, 3, 1e-10).unwrap();
        assert!(h.lines().count() > 1);
        let g = green_profile(tw, Rational64::new(-1, 4), 1, 1.0, 0.1, (1.0, 4.0), 4, 1e-10).unwrap();
        assert_eq!(g.lines().count(), 5);
        assert!(g.lines().skip(1).all(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap().is_finite()));
    }
}
