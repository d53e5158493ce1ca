//! The weight-3/2 vector-valued Eisenstein series E_L(τ, s) seeded at e₀.

use crate::error::{Error, Result};
use crate::heegner::eisenstein_coeff;
use crate::lattice::{Level, Mat2};
use crate::ntheory::arith::{ext_gcd, gcd};
use crate::ntheory::special::{gamma, zeta_level};
use crate::weilrep::{e, MetaplecticElement, WeilRep};
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use serde::Serialize;
use std::f64::consts::PI;

/// Components indexed by μ = 0, …, 2N − 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorValuedFunction {
    pub level: i64,
    pub values: Vec<Complex64>,
}

impl VectorValuedFunction {
    pub fn zeros(level: i64) -> Self {
        VectorValuedFunction { level, values: vec![Complex64::new(0.0, 0.0); (2 * level) as usize] }
    }

    pub fn component(&self, mu: i64) -> Complex64 {
        self.values[mu.rem_euclid(2 * self.level) as usize]
    }

    pub fn scale(&self, c: f64) -> Self {
        VectorValuedFunction { level: self.level, values: self.values.iter().map(|x| x * c).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        self.values.iter().zip(&o.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// JSON rows {mu, re, im}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.values
                .iter()
                .enumerate()
                .map(|(mu, z)| serde_json::json!({"mu": mu, "re": z.re, "im": z.im}))
                .collect(),
        )
    }
}

/// Seed coset of the Eisenstein series.
pub const SEED_COSET: usize = 0;

fn check_s(s: f64) -> Result<()> {
    if s <= 1.5 {
        return Err(Error::Divergent(format!("direct E_L summation needs s > 3/2, got {s}")));
    }
    Ok(())
}

/// Σ over d ≡ d₀ (mod c) of φ(τ)^{−3} (Im γτ)^{(s−1)/2} ρ(γ)^{−1}e₀, for one c > 0
/// and one residue d₀, with tail corrections past |d| > reach.
#[allow(clippy::too_many_arguments)]
fn residue_class_sum(
    level: i64,
    column: &[Complex64],
    c: i64,
    d0: i64,
    tau: Complex64,
    s: f64,
    reach: f64,
    acc: &mut [Complex64],
) {
    let v = tau.im;
    let g = |k: f64| -> Complex64 {
        let z = tau * c as f64 + (d0 as f64 + k * c as f64);
        z.sqrt().powi(-3) * (v / z.norm_sqr()).powf((s - 1.0) / 2.0)
    };
    let kmax = ((reach / c as f64).ceil() as i64).max(50);
    let four_n = 4 * level;
    for (mu, col) in column.iter().enumerate() {
        if col.norm() == 0.0 {
            continue;
        }
        // ρ(T)^{−k} on e_μ is e(kμ²/4N)
        let theta = ((mu * mu) as i64 % four_n) as f64 / four_n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in -kmax..=kmax {
            sum += e(theta * k as f64) * g(k as f64);
        }
        let periodic = ((mu * mu) as i64 % four_n) == 0;
        for (edge, dir) in [(kmax, 1i64), (-kmax, -1)] {
            let next = edge + dir;
            if periodic {
                // ∫ past the half-step boundary, in dk = dd/c
                let b = tau.re * c as f64 + d0 as f64 + (edge as f64 + 0.5 * dir as f64) * c as f64;
                sum += tail_integral(b.abs(), c as f64 * v, s, dir > 0) * v.powf((s - 1.0) / 2.0) / c as f64;
            } else {
                // Abel summation of the oscillating tail to second order
                let w = e(theta * dir as f64);
                let one = Complex64::new(1.0, 0.0);
                let g0 = g(next as f64);
                let dg = g((next + dir) as f64) - g0;
                sum += e(theta * next as f64) * (g0 / (one - w) + w * dg / ((one - w) * (one - w)));
            }
        }
        acc[mu] += sum * col;
    }
}

/// ∫ |z|^{1−s} z^{−3/2} dt over the half-line beyond |Re z| = edge on the
/// horizontal line Im z = height, to the right (Re z → +∞) or left.
fn tail_integral(edge: f64, height: f64, s: f64, right: bool) -> Complex64 {
    // with z = height·csc φ·e^{iφ} the integral is height^{1−α} ∫ sin^{α−2}φ e^{∓3iφ/2} dφ
    let alpha = s + 0.5;
    let phi = (height / edge).atan();
    let sg = if right { 1.0 } else { -1.0 };
    let c2 = 9.0 / 8.0 + (alpha - 2.0) / 6.0;
    let series = Complex64::new(phi.powf(alpha - 1.0) / (alpha - 1.0) - c2 * phi.powf(alpha + 1.0) / (alpha + 1.0), -sg * 1.5 * phi.powf(alpha) / alpha);
    let pre = if right { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
    pre * series * height.powf(1.0 - alpha)
}

/// Partial sum over all coprime (c, d) with 0 < c ≤ c_max plus the identity,
/// doubled to run over all pairs ±(c, d).
pub fn eisenstein_el_partial(level: i64, tau: Complex64, s: f64, c_max: i64) -> Result<VectorValuedFunction> {
    check_s(s)?;
    if tau.im <= 0.0 {
        return Err(Error::InvalidParameter(format!("τ = {tau} is not in the upper half-plane")));
    }
    let rep = WeilRep::new(level);
    let dim = rep.dim();
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    acc[SEED_COSET] += tau.im.powf((s - 1.0) / 2.0);
    let reach = 2000.0;
    for c in 1..=c_max {
        for d0 in 0..c {
            if gcd(c, d0) != 1 {
                continue;
            }
            let (_, x, _) = ext_gcd(d0, c);
            // a·d₀ ≡ 1 (mod c)
            let a = if c == 1 { 1 } else { x.rem_euclid(c) };
            let b = (a * d0 - 1) / c;
            let g = MetaplecticElement::principal(Mat2::new(a, b, c, d0));
            let column = rep.rho(&g).adjoint().apply(&unit(dim));
            residue_class_sum(level, &column, c, d0, tau, s, reach, &mut acc);
        }
    }
    Ok(VectorValuedFunction { level, values: acc.into_iter().map(|x| x * 2.0).collect() })
}

fn unit(dim: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[SEED_COSET] = Complex64::new(1.0, 0.0);
    v
}

/// Convergence order in c_max of the partial sums.
pub fn truncation_order(s: f64) -> f64 {
    s - 1.0
}

/// E_L(τ, s) from the partial sums at c_max/2 and c_max, Richardson-extrapolated.
pub fn eisenstein_el(level: i64, tau: Complex64, s: f64, c_max: i64) -> Result<VectorValuedFunction> {
    if c_max < 2 {
        return eisenstein_el_partial(level, tau, s, c_max);
    }
    let coarse = eisenstein_el_partial(level, tau, s, c_max / 2)?;
    let fine = eisenstein_el_partial(level, tau, s, c_max)?;
    let ratio = (c_max as f64 / (c_max / 2) as f64).powf(truncation_order(s));
    let values = fine.values.iter().zip(&coarse.values).map(|(f, c)| f + (f - c) / (ratio - 1.0)).collect();
    Ok(VectorValuedFunction { level, values })
}

/// −(s/4) π^{−s−1} Γ(s) ζ^{(N)}(2s) N^{1/2 + 3s/2}.
pub fn normalization_factor(level: i64, s: f64) -> Result<f64> {
    let n = level as f64;
    Ok(-(s / 4.0) * PI.powf(-s - 1.0) * gamma(s) * zeta_level(level as u64, 2.0 * s)? * n.powf(0.5 + 1.5 * s))
}

/// ℰ_L(τ, s).
pub fn normalized_el(level: i64, tau: Complex64, s: f64, c_max: i64) -> Result<VectorValuedFunction> {
    Ok(eisenstein_el(level, tau, s, c_max)?.scale(normalization_factor(level, s)?))
}

/// Holomorphic coefficient of q^n e_μ in ℰ_L(τ, 1), from the degree of the untwisted divisor.
pub fn eisenstein_coefficients_at_1(level: Level, n: Rational64, mu: i64) -> Result<BigRational> {
    eisenstein_coeff(level, n, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::hurwitz_class_number;

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn identity_term_only() {
        let t = Complex64::new(0.2, 1.7);
        let e = eisenstein_el_partial(6, t, 2.5, 0).unwrap();
        assert!((e.values[0] - 2.0 * 1.7f64.powf(0.75)).norm() < 1e-15);
        assert!(e.values[1..].iter().all(|x| x.norm() == 0.0));
        assert!(eisenstein_el_partial(1, t, 1.5, 3).is_err());
    }

    #[test]
    fn tail_corrections_are_consistent() {
        // a wider d-range changes nothing beyond the correction error
        let rep = WeilRep::new(1);
        let col = rep.rho(&MetaplecticElement::principal(Mat2::new(0, -1, 1, 0))).adjoint().apply(&unit(2));
        let mut a = vec![Complex64::new(0.0, 0.0); 2];
        let mut b = a.clone();
        residue_class_sum(1, &col, 1, 0, i(), 2.5, 200.0, &mut a);
        residue_class_sum(1, &col, 1, 0, i(), 2.5, 5000.0, &mut b);
        assert!((a[0] - b[0]).norm() < 1e-9 && (a[1] - b[1]).norm() < 1e-9, "{a:?} {b:?}");
    }

    #[test]
    fn converges_in_c_max() {
        // the raw partial sums fluctuate arithmetically around a c_max^{1−s} trend
        let e160 = eisenstein_el(1, i(), 2.5, 160).unwrap();
        let e80 = eisenstein_el(1, i(), 2.5, 320).unwrap();
        assert!(e160.max_diff(&e80) < 1e-4, "{e160:?} {e80:?}");
        // twice the seeded half-sum
        assert!((e80.values[0] - Complex64::new(0.24230, 0.0)).norm() < 3e-5, "{:?}", e80.values);
        assert!((e80.values[1] - Complex64::new(-0.58498, 0.0)).norm() < 3e-5, "{:?}", e80.values);
    }

    #[test]
    fn components_symmetric_under_negation() {
        let t = Complex64::new(0.25, 1.0);
        let e = eisenstein_el(6, t, 2.5, 24).unwrap();
        for mu in 1..6 {
            assert!((e.component(mu) - e.component(-mu)).norm() < 1e-9);
        }
    }

    #[test]
    fn weight_three_halves() {
        let rep = WeilRep::new(1);
        let t = Complex64::new(0.1, 0.9);
        let f = |x: Complex64| eisenstein_el(1, x, 2.5, 60).unwrap().values;
        for g in [MetaplecticElement::s(), MetaplecticElement::t()] {
            let lhs = rep.slash_weight_threehalf(f, &g, t);
            let rhs = f(t);
            for (a, b) in lhs.iter().zip(&rhs) {
                assert!((a - b).norm() < 5e-4, "{lhs:?} vs {rhs:?}");
            }
        }
    }

    #[test]
    fn prefactor_values() {
        let z4 = PI.powi(4) / 90.0;
        assert!((normalization_factor(1, 2.0).unwrap() + z4 / (2.0 * PI.powi(3))).abs() < 1e-14);
        assert!((normalization_factor(1, 1.0).unwrap() + 1.0 / 24.0).abs() < 1e-14);
    }

    #[test]
    fn coefficients_at_one() {
        let l1 = Level::new(1).unwrap();
        assert_eq!(eisenstein_coefficients_at_1(l1, Rational64::from_integer(1), 0).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(eisenstein_coefficients_at_1(l1, Rational64::new(3, 4), 1).unwrap(), BigRational::new(1.into(), 3.into()));
        for m in 1..=10u64 {
            let got = eisenstein_coefficients_at_1(l1, Rational64::from_integer(m as i64), 0).unwrap();
            assert_eq!(got, hurwitz_class_number(4 * m));
        }
    }
}
