//! The scalar level-N Eisenstein series ℰ(N, z, s), the eta product Δ_N and
//! its normalized Petersson metric.

use crate::error::{Error, Result};
use crate::lattice::{reduce_to_fundamental_domain, UpperHalfPoint};
use crate::ntheory::arith::{divisors, euler_phi, gcd, moebius, prime_divisors, sigma_real};
use crate::ntheory::special::{bessel_k, gamma, zeta_completed, zeta_level, EULER_GAMMA};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Evaluation routes for ℰ(N, z, s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EisensteinRoute {
    /// Truncated sum over coprime (c, d) with N | c, for s ≥ 2.
    Direct { c_max: i64 },
    /// Level-one Fourier–Bessel expansions combined over M | N.
    Fourier,
}

/// Relative size below which Bessel terms are dropped.
const FOURIER_BUDGET: f64 = 1e-17;

/// E*(z, s) = ξ(2s)E(z, s) for SL₂(ℤ), with ξ(s) = π^{−s/2}Γ(s/2)ζ(s).
pub fn completed_level_one(z: UpperHalfPoint, s: f64) -> Result<f64> {
    let (z, _) = reduce_to_fundamental_domain(z);
    let (x, y) = (z.x, z.y);
    let mut tot = zeta_completed(2.0 * s)? * y.powf(s) + zeta_completed(2.0 * s - 1.0)? * y.powf(1.0 - s);
    let nu = (s - 0.5).abs();
    let scale = tot.abs().max(1.0);
    for n in 1.. {
        let nf = n as f64;
        let arg = 2.0 * PI * nf * y;
        let k = bessel_k(nu, arg)?;
        let term = 4.0 * y.sqrt() * nf.powf(s - 0.5) * sigma_real(n, 1.0 - 2.0 * s) * k * (2.0 * PI * nf * x).cos();
        tot += term;
        if n > 2 && 4.0 * y.sqrt() * nf.powf(s.abs() + 0.5) * k < FOURIER_BUDGET * scale {
            break;
        }
    }
    Ok(tot)
}

/// E_N(z, s) = Σ_{Γ_∞\Γ₀(N)} (Im γz)^s by Möbius inversion over M | N.
pub fn level_eisenstein_fourier(level: i64, z: UpperHalfPoint, s: f64) -> Result<f64> {
    let xi2s = zeta_completed(2.0 * s)?;
    let euler = |m: i64| -> f64 {
        prime_divisors(m as u64).into_iter().map(|p| 1.0 - (p as f64).powf(-2.0 * s)).product()
    };
    let mut solved: Vec<(i64, f64)> = Vec::new();
    for m in divisors(level as u64).into_iter().map(|m| m as i64) {
        let mz = UpperHalfPoint { x: m as f64 * z.x, y: m as f64 * z.y };
        // G_M/ζ(2s) = M^{−s} E(Mz, s)
        let mut acc = (m as f64).powf(-s) * completed_level_one(mz, s)? / xi2s;
        for &(mp, em) in &solved {
            if m % mp == 0 {
                acc -= ((m / mp) as f64).powf(-2.0 * s) * euler(mp) * em;
            }
        }
        solved.push((m, acc / euler(m)));
    }
    Ok(solved.last().expect("divisors are nonempty").1)
}

/// Direct coprime-pair sum with density-based tail corrections.
pub fn level_eisenstein_direct(level: i64, z: UpperHalfPoint, s: f64, c_max: i64) -> Result<f64> {
    if s < 2.0 {
        return Err(Error::InvalidParameter(format!("direct route needs s ≥ 2, got {s}")));
    }
    let (x, y) = (z.x, z.y);
    let b = PI.sqrt() * gamma(s - 0.5) / gamma(s);
    let c_max = c_max - c_max % level;
    let mut tot = y.powf(s);
    for c in (level..=c_max).step_by(level as usize) {
        let cf = c as f64;
        let center = -cf * x;
        let half = 40.0 * cf * y + 20.0;
        let (lo, hi) = ((center - half).ceil() as i64, (center + half).floor() as i64);
        let mut sum = 0.0;
        for d in lo..=hi {
            if gcd(c, d) == 1 {
                let df = d as f64 + cf * x;
                sum += (df * df + cf * cf * y * y).powf(-s);
            }
        }
        // ∫_{|t| > half} (t² + c²y²)^{−s} dt ≈ 2 half^{1−2s}/(2s − 1), at coprime density
        let density = euler_phi(c as u64) as f64 / cf;
        let edge = (half + 0.5).max(1.0);
        sum += density * 2.0 * edge.powf(1.0 - 2.0 * s) / (2.0 * s - 1.0);
        tot += y.powf(s) * sum;
    }
    // c > c_max at the mean coprime density over multiples of N
    let density: f64 = 6.0 / (PI * PI) * prime_divisors(level as u64).into_iter().map(|p| p as f64 / (p as f64 + 1.0)).product::<f64>();
    let j = (c_max / level) as f64 + 0.5;
    let nf = level as f64;
    tot += density * b * y.powf(1.0 - s) * nf.powf(1.0 - 2.0 * s) * j.powf(2.0 - 2.0 * s) / (2.0 * s - 2.0);
    Ok(tot)
}

/// N^{2s} π^{−s} Γ(s) ζ^{(N)}(2s).
pub fn scalar_normalization(level: i64, s: f64) -> Result<f64> {
    Ok((level as f64).powf(2.0 * s) * PI.powf(-s) * gamma(s) * zeta_level(level as u64, 2.0 * s)?)
}

/// ℰ(N, z, s).
pub fn scalar_eisenstein(level: i64, z: UpperHalfPoint, s: f64, route: EisensteinRoute) -> Result<f64> {
    let raw = match route {
        EisensteinRoute::Direct { c_max } => level_eisenstein_direct(level, z, s, c_max)?,
        EisensteinRoute::Fourier => {
            if !(0.5 < s && s <= 3.0) || (s - 1.0).abs() < 1e-12 {
                return Err(Error::InvalidParameter(format!("Fourier route needs s in (1/2, 3] minus 1, got {s}")));
            }
            level_eisenstein_fourier(level, z, s)?
        }
    };
    Ok(scalar_normalization(level, s)? * raw)
}

/// lim_{s→1} (ℰ(N, z, s) − φ(N)ζ*(2s − 1)), from symmetric differences at
/// s = 1 ± h and 1 ± h/2 combined by Richardson extrapolation.
pub fn kronecker_limit(level: i64, z: UpperHalfPoint, h: f64) -> Result<f64> {
    let phi = euler_phi(level as u64) as f64;
    let f = |s: f64| -> Result<f64> {
        Ok(scalar_eisenstein(level, z, s, EisensteinRoute::Fourier)? - phi * zeta_completed(2.0 * s - 1.0)?)
    };
    let sym = |h: f64| -> Result<f64> { Ok(0.5 * (f(1.0 + h)? + f(1.0 - h)?)) };
    let (a, b) = (sym(h)?, sym(h / 2.0)?);
    Ok((4.0 * b - a) / 3.0)
}

/// −(1/12) log(y^{6φ(N)} |Δ_N(z)|).
pub fn kronecker_limit_closed_form(level: i64, z: UpperHalfPoint) -> f64 {
    let eta = EtaProduct::new(level);
    let phi = euler_phi(level as u64) as f64;
    -(6.0 * phi * z.y.ln() + eta.log_abs(z)) / 12.0
}

/// Δ_N(z) = Π_{t|N} Δ(tz)^{a(t)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaProduct {
    pub level: i64,
    /// (t, a(t)) for t | N.
    pub exponents: Vec<(i64, i64)>,
    pub weight: i64,
}

impl EtaProduct {
    /// a(t) = Σ_{r|t} μ(t/r) μ(N/r) φ(N)/φ(N/r).
    pub fn new(level: i64) -> Self {
        let n = level as u64;
        let phi_n = euler_phi(n) as i64;
        let exponents = divisors(n)
            .into_iter()
            .map(|t| {
                let a: i64 = divisors(t)
                    .into_iter()
                    .map(|r| moebius(t / r) * moebius(n / r) * phi_n / euler_phi(n / r) as i64)
                    .sum();
                (t as i64, a)
            })
            .collect();
        EtaProduct { level, exponents, weight: 12 * phi_n }
    }

    /// log|Δ_N(z)| through reduced η values.
    pub fn log_abs(&self, z: UpperHalfPoint) -> f64 {
        self.exponents
            .iter()
            .map(|&(t, a)| 24.0 * a as f64 * log_abs_eta(UpperHalfPoint { x: t as f64 * z.x, y: t as f64 * z.y }))
            .sum()
    }

    pub fn value(&self, z: UpperHalfPoint) -> Complex64 {
        self.exponents
            .iter()
            .map(|&(t, a)| eta(UpperHalfPoint { x: t as f64 * z.x, y: t as f64 * z.y }).powi(24 * a as i32))
            .product()
    }

    /// Order of vanishing at ∞, Σ t·a(t).
    pub fn order_at_infinity(&self) -> i64 {
        self.exponents.iter().map(|&(t, a)| t * a).sum()
    }
}

pub fn eta_product(level: i64) -> EtaProduct {
    EtaProduct::new(level)
}

/// η(z) = q^{1/24} Π (1 − qⁿ) by its product.
pub fn eta(z: UpperHalfPoint) -> Complex64 {
    let tau = z.to_complex();
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut p = (Complex64::new(0.0, 2.0 * PI / 24.0) * tau).exp();
    let mut qn = q;
    while qn.norm() > 1e-18 {
        p *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
    }
    p
}

/// log|η(z)|, reducing z first: |η(γz)| = |cz + d|^{1/2} |η(z)|.
pub fn log_abs_eta(z: UpperHalfPoint) -> f64 {
    let (z0, g) = reduce_to_fundamental_domain(z);
    let j = g.automorphy(z.to_complex()).norm();
    eta(z0).norm().ln() - 0.5 * j.ln()
}

pub fn delta_n_value(level: i64, z: UpperHalfPoint) -> Complex64 {
    EtaProduct::new(level).value(z)
}

/// C = (log 4π + γ)/2.
pub fn metric_constant() -> f64 {
    ((4.0 * PI).ln() + EULER_GAMMA) / 2.0
}

/// log‖Δ_N(z)‖ = log|Δ_N(z)| + (k/2) log(4π e^{−C} y).
pub fn petersson_norm_log(level: i64, z: UpperHalfPoint) -> f64 {
    let eta = EtaProduct::new(level);
    eta.log_abs(z) + eta.weight as f64 / 2.0 * (4.0 * PI * (-metric_constant()).exp() * z.y).ln()
}

/// Precomputed evaluator of log‖Δ_N‖.
#[derive(Debug, Clone)]
pub struct PeterssonLog {
    eta: EtaProduct,
    offset: f64,
}

impl PeterssonLog {
    pub fn new(level: i64) -> Self {
        let eta = EtaProduct::new(level);
        let offset = eta.weight as f64 / 2.0 * (4.0 * PI * (-metric_constant()).exp()).ln();
        PeterssonLog { eta, offset }
    }

    pub fn weight(&self) -> i64 {
        self.eta.weight
    }

    pub fn eval(&self, z: UpperHalfPoint) -> f64 {
        self.eta.log_abs(z) + self.offset + self.eta.weight as f64 / 2.0 * z.y.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Mat2;
    use crate::ntheory::special::zeta;

    fn z(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint { x, y }
    }

    #[test]
    fn eta_exponents() {
        let e6 = EtaProduct::new(6);
        assert_eq!(e6.exponents, vec![(1, 1), (2, -2), (3, -3), (6, 6)]);
        assert_eq!(e6.weight, 24);
        assert_eq!(e6.exponents.iter().map(|p| p.1).sum::<i64>(), 2);
        let e1 = EtaProduct::new(1);
        assert_eq!(e1.exponents, vec![(1, 1)]);
        assert_eq!(e1.weight, 12);
    }

    #[test]
    fn eta_transformation() {
        // |η(−1/z)| = |z|^{1/2} |η(z)|, via the unreduced product at moderate heights
        let p = z(0.1, 1.3);
        let lhs = eta(p.act(&Mat2::S)).norm();
        let rhs = p.to_complex().norm().sqrt() * eta(p).norm();
        assert!((lhs / rhs - 1.0).abs() < 1e-12);
        let low = z(0.3, 0.02);
        assert!((log_abs_eta(low) - eta(low).norm().ln()).abs() < 1e-8);
    }

    #[test]
    fn petersson_log_invariance() {
        for n in [1, 6] {
            let f = PeterssonLog::new(n);
            for p in [z(0.13, 0.41), z(-0.2, 1.1), z(0.44, 0.08)] {
                let third = if n == 1 { Mat2::new(5, 2, 2, 1) } else { Mat2::new(5, 2, 12, 5) };
                for g in [Mat2::new(1, 1, 0, 1), Mat2::new(1, 0, n, 1), third] {
                    assert!(g.in_gamma0(n));
                    let a = f.eval(p);
                    let b = f.eval(p.act(&g));
                    assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "N={n} {a} {b}");
                    assert!((a - petersson_norm_log(n, p)).abs() < 1e-12 * a.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn delta_n_modular() {
        // Δ_N has weight k under Γ₀(N)
        let p = z(0.11, 0.37);
        let g = Mat2::new(1, 0, 6, 1);
        let lhs = delta_n_value(6, p.act(&g));
        let rhs = g.automorphy(p.to_complex()).powi(24) * delta_n_value(6, p);
        assert!((lhs / rhs - 1.0).norm() < 1e-8);
    }

    #[test]
    fn cusp_order() {
        for n in [1, 6] {
            let f = PeterssonLog::new(n);
            let k = f.weight() as f64;
            let ord = EtaProduct::new(n).order_at_infinity() as f64;
            let g = |y: f64| f.eval(z(0.0, y)) - k / 2.0 * (4.0 * PI * y).ln();
            // slope in log|q| = −2πy
            let slope = (g(8.0) - g(7.0)) / (-2.0 * PI);
            assert!((slope - ord).abs() < 1e-6, "{slope} vs {ord}");
        }
    }

    #[test]
    fn routes_agree() {
        for (n, p) in [(6, z(0.3, 0.5)), (1, z(0.1, 0.9)), (2, z(-0.2, 0.7))] {
            let a = scalar_eisenstein(n, p, 2.0, EisensteinRoute::Fourier).unwrap();
            let b = scalar_eisenstein(n, p, 2.0, EisensteinRoute::Direct { c_max: 600 }).unwrap();
            assert!((a - b).abs() < 1e-6 * a.abs(), "N={n}: {a} vs {b}");
        }
    }

    #[test]
    fn fourier_route_invariant() {
        let p = z(0.23, 0.31);
        for (n, g) in [(6, Mat2::new(1, 0, 6, 1)), (6, Mat2::new(7, 1, 48, 7)), (1, Mat2::S)] {
            let a = scalar_eisenstein(n, p, 1.3, EisensteinRoute::Fourier).unwrap();
            let b = scalar_eisenstein(n, p.act(&g), 1.3, EisensteinRoute::Fourier).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs());
        }
    }

    #[test]
    fn constant_term_asymptotics() {
        let s = 1.7;
        let y = 30.0;
        let e = scalar_eisenstein(1, z(0.2, y), s, EisensteinRoute::Fourier).unwrap();
        let lead = PI.powf(-s) * gamma(s) * zeta(2.0 * s).unwrap() * y.powf(s);
        assert!((e / lead - 1.0).abs() < 1e-3);
    }

    #[test]
    fn kronecker_limit_formula() {
        for n in [1, 6] {
            for p in [z(0.1, 0.9), z(-0.3, 1.7), z(0.45, 0.6)] {
                let lim = kronecker_limit(n, p, 1e-3).unwrap();
                let rhs = kronecker_limit_closed_form(n, p);
                assert!((lim - rhs).abs() < 1e-4 * rhs.abs(), "N={n}: {lim} vs {rhs}");
            }
        }
    }
}
