//! Twisted Kudla Green functions Ξ_{Δ,r}(n, μ, v), the Kudla–Millson form
//! coefficients ω_{Δ,r}(n, μ, v), and checks of the current equation and of
//! the behaviour at the cusps.

use crate::error::{Error, Result};
use crate::genus::{GenusCharacter, TwistData};
use crate::lattice::{norm_matches_coset, Cusp, LatticeVector, Majorant, Mat2, ReducedEnumerator, UpperHalfPoint, REDUCED_HEIGHT};
use crate::ntheory::exp_integral_e1;
use num_rational::Rational64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

/// Default hyperbolic radius around divisor points where evaluation is refused.
pub const DEFAULT_GUARD: f64 = 1e-4;

/// ((w, w(z))_Δ, R(w, z)_Δ) with R = ½(w, w(z))²_Δ − 2Q(w)/Δ.
pub fn majorant_pair(w: &LatticeVector, z: UpperHalfPoint, level: i64, delta: i64) -> (f64, f64) {
    let maj = Majorant::new(level, z);
    let p = maj.pairing(w) / (delta as f64).sqrt();
    let r = 0.5 * p * p - 2.0 * w.quad_value_f64(level) / delta as f64;
    (p, r)
}

/// ξ_Δ(√v w, z) = β₁(2πv R(w, z)_Δ).
pub fn xi_kernel(w: &LatticeVector, z: UpperHalfPoint, level: i64, delta: i64, v: f64) -> Result<f64> {
    let (_, r) = majorant_pair(w, z, level, delta);
    if r <= 0.0 {
        return Err(Error::Singularity { x: z.x, y: z.y, dist: 0.0 });
    }
    Ok(exp_integral_e1(2.0 * PI * v * r))
}

/// Hyperbolic distance from z to z(w) for Q(w) > 0, from cosh d = |(w, w(z))|/(2√Q).
fn distance_to_point(pairing: f64, q: f64) -> f64 {
    (pairing.abs() / (2.0 * q.sqrt())).max(1.0).acosh()
}

/// The Green function and ω-coefficient of one twisted stratum at fixed v.
#[derive(Debug, Clone)]
pub struct GreenEvaluator {
    chi: Arc<GenusCharacter>,
    pub n: Rational64,
    pub mu: i64,
    pub v: f64,
    /// Target absolute truncation error.
    pub budget: f64,
    pub guard: f64,
    /// Truncation argument X: terms with 2πvR > X are dropped.
    cutoff: f64,
}

/// Value of a lattice sum with the bookkeeping needed by the guards.
#[derive(Debug, Clone, Copy)]
pub struct GreenSample {
    pub value: f64,
    /// Hyperbolic distance to the nearest point of the divisor (∞ if none met).
    pub divisor_distance: f64,
    pub terms: usize,
}

impl GreenEvaluator {
    pub fn new(twist: TwistData, n: Rational64, mu: i64, v: f64, budget: f64) -> Result<Self> {
        Self::with_character(Arc::new(GenusCharacter::new(twist)), n, mu, v, budget)
    }

    pub fn with_character(chi: Arc<GenusCharacter>, n: Rational64, mu: i64, v: f64, budget: f64) -> Result<Self> {
        if v <= 0.0 || budget <= 0.0 {
            return Err(Error::InvalidParameter(format!("need v > 0 and budget > 0, got v = {v}, budget = {budget}")));
        }
        let level = chi.twist.level;
        let mu = mu.rem_euclid(2 * level.get());
        if !norm_matches_coset(n, mu, level) {
            return Err(Error::InvalidParameter(format!("norm {n} does not match coset {mu} mod 1")));
        }
        // e^{−X}/X per term with a margin for the shell size
        let cutoff = (1.0 / budget).ln() + 8.0;
        Ok(GreenEvaluator { chi, n, mu, v, budget, guard: DEFAULT_GUARD, cutoff })
    }

    pub fn twist(&self) -> &TwistData {
        &self.chi.twist
    }

    fn level(&self) -> i64 {
        self.chi.twist.n()
    }

    fn delta(&self) -> i64 {
        self.chi.twist.delta()
    }

    /// D_w = −4NΔn of the vectors in the stratum.
    pub fn vector_disc(&self) -> i64 {
        let d = -self.n * Rational64::from_integer(4 * self.level() * self.delta());
        d.to_integer()
    }

    fn shell<F: FnMut(LatticeVector, f64, f64)>(&self, z: UpperHalfPoint, cutoff: f64, mut f: F) -> Result<()> {
        let (nn, delta) = (self.level(), self.delta() as f64);
        let nf = *self.n.numer() as f64 / *self.n.denom() as f64;
        // 2πvR ≤ X  ⇔  M ≤ 2Δ(n + X/(2πv))
        let bound = 2.0 * delta * (nf + cutoff / (2.0 * PI * self.v));
        if !bound.is_finite() || bound > 1e9 {
            return Err(Error::BudgetInfeasible(format!("majorant radius {bound:e} at z = {} + {}i", z.x, z.y)));
        }
        let residue = self.chi.twist.twisted_coset(self.mu);
        let mut err = None;
        let mut visit = |w: LatticeVector, p: f64| {
            if err.is_some() {
                return;
            }
            match self.chi.value(&w) {
                Ok(0) => {}
                Ok(s) => f(w, s as f64, p),
                Err(e) => err = Some(e),
            }
        };
        if z.y >= REDUCED_HEIGHT {
            let maj = Majorant::new(nn, z);
            maj.for_each_with_disc(bound, residue, 2 * nn, self.vector_disc(), |w, _| visit(w, maj.pairing(&w)));
        } else {
            ReducedEnumerator::new(nn, z)
                .for_each_with_disc(bound, residue, 2 * nn, self.vector_disc(), |w, p, _| visit(w, p));
        }
        err.map_or(Ok(()), Err)
    }

    /// Ξ at z together with the distance to the divisor.
    pub fn sample(&self, z: UpperHalfPoint) -> Result<GreenSample> {
        let delta = self.delta() as f64;
        let q = self.n.to_integer_f64() * delta;
        let mut value = 0.0;
        let mut terms = 0;
        let mut dist = f64::INFINITY;
        self.shell(z, self.cutoff, |w, sign, p| {
            if w.is_zero() {
                return;
            }
            if q > 0.0 {
                dist = dist.min(distance_to_point(p, q));
            }
            let r = 0.5 * p * p / delta - 2.0 * q / delta;
            if r > 0.0 {
                value += sign * exp_integral_e1(2.0 * PI * self.v * r);
                terms += 1;
            }
        })?;
        if dist < self.guard {
            return Err(Error::Singularity { x: z.x, y: z.y, dist });
        }
        Ok(GreenSample { value, divisor_distance: dist, terms })
    }

    pub fn green_value(&self, z: UpperHalfPoint) -> Result<f64> {
        Ok(self.sample(z)?.value)
    }

    /// The coefficient of μ(z) in ω_{Δ,r}(n, μ, v).
    pub fn km_form_coefficient(&self, z: UpperHalfPoint) -> Result<f64> {
        let delta = self.delta() as f64;
        let q = self.n.to_integer_f64() * delta;
        let mut value = 0.0;
        // polynomial prefactor grows like X, so keep a few more shells
        self.shell(z, self.cutoff + 4.0, |_, sign, p| {
            let pd2 = p * p / delta;
            let r = 0.5 * pd2 - 2.0 * q / delta;
            value += sign * (self.v * pd2 - 1.0 / (2.0 * PI)) * (-2.0 * PI * self.v * r).exp();
        })?;
        Ok(value)
    }
}

trait RationalF64 {
    fn to_integer_f64(&self) -> f64;
}

impl RationalF64 for Rational64 {
    fn to_integer_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

pub fn green_value(g: &GreenEvaluator, z: UpperHalfPoint) -> Result<f64> {
    g.green_value(z)
}

pub fn km_form_coefficient(twist: TwistData, n: Rational64, mu: i64, v: f64, z: UpperHalfPoint) -> Result<f64> {
    GreenEvaluator::new(twist, n, mu, v, 1e-12)?.km_form_coefficient(z)
}

/// Finite-difference check of dd^c Ξ = ω away from the divisor, with
/// dd^c f = (1/4π) y² (f_xx + f_yy) μ(z).
#[derive(Debug, Clone, Serialize)]
pub struct CurrentEquationReport {
    pub x: f64,
    pub y: f64,
    pub h: f64,
    pub laplacian_side: f64,
    pub form_side: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

pub fn current_equation_check(g: &GreenEvaluator, z0: UpperHalfPoint, h: f64) -> Result<CurrentEquationReport> {
    let center = g.sample(z0)?;
    // the stencil must stay well inside the smooth region
    let reach = (h / z0.y).asinh() * 2.0;
    if center.divisor_distance < 10.0 * reach {
        return Err(Error::StepTooLarge { h, dist: center.divisor_distance });
    }
    let at = |dx: f64, dy: f64| g.green_value(UpperHalfPoint { x: z0.x + dx, y: z0.y + dy });
    let lap = (at(h, 0.0)? + at(-h, 0.0)? + at(0.0, h)? + at(0.0, -h)? - 4.0 * center.value) / (h * h);
    let laplacian_side = z0.y * z0.y * lap / (4.0 * PI);
    let form_side = g.km_form_coefficient(z0)?;
    let abs_err = (laplacian_side - form_side).abs();
    let scale = form_side.abs().max(laplacian_side.abs());
    Ok(CurrentEquationReport {
        x: z0.x,
        y: z0.y,
        h,
        laplacian_side,
        form_side,
        abs_err,
        rel_err: if scale > 0.0 { abs_err / scale } else { 0.0 },
    })
}

/// Values of Ξ along σ⁻¹(x + iy) approaching a cusp.
#[derive(Debug, Clone, Serialize)]
pub struct CuspLimitReport {
    pub cusp: Cusp,
    pub heights: Vec<f64>,
    /// max over the sampled x of |Ξ| at each height.
    pub max_abs: Vec<f64>,
    pub monotone: bool,
    pub final_value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub const CUSP_HEIGHTS: [f64; 4] = [5.0, 10.0, 20.0, 40.0];

pub fn cusp_limit_check(g: &GreenEvaluator, cusp: Cusp, tolerance: f64) -> Result<CuspLimitReport> {
    let nn = g.level();
    let sigma = cusp.to_infinity();
    let sigma_inv = sigma.inverse();
    // width of the cusp: least m with σ⁻¹T^mσ ∈ Γ₀(N)
    let width = (1..=nn).find(|&m| (sigma_inv * Mat2::t_pow(m) * sigma).in_gamma0(nn)).unwrap_or(nn) as f64;
    let mut max_abs = Vec::new();
    for &y in &CUSP_HEIGHTS {
        let mut worst: f64 = 0.0;
        for k in 0..5 {
            let x = width * (k as f64 / 5.0 + 0.0731);
            let z = UpperHalfPoint { x, y }.act(&sigma_inv);
            worst = worst.max(g.green_value(z)?.abs());
        }
        max_abs.push(worst);
    }
    // below the tolerance the profile counts as settled
    let monotone = max_abs.windows(2).all(|p| p[1] <= p[0].max(tolerance) + g.budget);
    let final_value = *max_abs.last().expect("heights are nonempty");
    Ok(CuspLimitReport {
        cusp,
        heights: CUSP_HEIGHTS.to_vec(),
        max_abs,
        monotone,
        final_value,
        tolerance,
        passed: monotone && final_value <= tolerance,
    })
}

/// CSV rows `x,y,value` for plotting a profile.
pub fn green_profile_csv(g: &GreenEvaluator, points: &[UpperHalfPoint]) -> Result<String> {
    let mut out = String::from("x,y,value\n");
    for z in points {
        let v = g.green_value(*z)?;
        writeln!(out, "{},{},{}", z.x, z.y, v).expect("writing to a String");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::point_of_vector;

    fn tw(n: i64, d: i64, r: i64) -> TwistData {
        TwistData::new(n, d, r).unwrap()
    }

    fn z(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint { x, y }
    }

    #[test]
    fn majorant_pair_examples() {
        let w = LatticeVector::new(1, 0, 1);
        let (p, r) = majorant_pair(&w, z(0.0, 1.0), 1, 1);
        assert!((p + 2.0).abs() < 1e-14 && r.abs() < 1e-14);
        let (p, r) = majorant_pair(&w, z(0.0, 2.0), 1, 1);
        assert!((p + 2.5).abs() < 1e-14 && (r - 9.0 / 8.0).abs() < 1e-14);
        let w3 = LatticeVector::new(3, 0, 3);
        let (p3, r3) = majorant_pair(&w3, z(0.3, 0.7), 1, 5);
        let (p1, r1) = majorant_pair(&w, z(0.3, 0.7), 1, 5);
        assert!((p3 - 3.0 * p1).abs() < 1e-12 && (r3 - 9.0 * r1).abs() < 1e-12);
        // R ≥ −2Q/Δ for Q ≤ 0
        let wn = LatticeVector::new(1, 3, -2);
        let (_, rn) = majorant_pair(&wn, z(0.1, 0.4), 1, 1);
        assert!(rn >= -2.0 * wn.quad_value_f64(1));
    }

    #[test]
    fn xi_examples() {
        let w = LatticeVector::new(1, 0, 1);
        let val = xi_kernel(&w, z(0.0, 2.0), 1, 1, 1.0).unwrap();
        assert!((val - exp_integral_e1(9.0 * PI / 4.0)).abs() < 1e-16);
        assert!((val - 1.068_884_756_257_473_5e-4).abs() < 1e-15);
        assert!(xi_kernel(&w, z(0.0, 1.0), 1, 1, 1.0).is_err());
        assert!(xi_kernel(&w, z(0.0, 2.0), 1, 1, 2.0).unwrap() < val);
    }

    #[test]
    fn distance_formula() {
        let w = LatticeVector::new(2, 3, 5);
        let zw = point_of_vector(&w, 2).unwrap();
        for p in [z(0.1, 0.3), z(-0.7, 2.0), z(0.3, 0.31)] {
            let maj = Majorant::new(2, p);
            let d = distance_to_point(maj.pairing(&w), w.quad_value_f64(2));
            assert!((d - p.distance(zw)).abs() < 1e-10);
        }
    }

    #[test]
    fn invariance_and_singularity() {
        let g = GreenEvaluator::new(tw(6, 73, 1), Rational64::new(23, 24), 1, 1.0, 1e-12).unwrap();
        let p = z(0.137, 0.41);
        let base = g.green_value(p).unwrap();
        for m in [Mat2::new(1, 0, 6, 1), Mat2::new(7, 1, 6, 1), Mat2::new(5, 2, 12, 5)] {
            assert!((g.green_value(p.act(&m)).unwrap() - base).abs() < 1e-8);
            let om = g.km_form_coefficient(p).unwrap();
            assert!((g.km_form_coefficient(p.act(&m)).unwrap() - om).abs() < 1e-8);
        }
        let g1 = GreenEvaluator::new(tw(1, 5, 1), Rational64::from_integer(1), 0, 1.0, 1e-12).unwrap();
        let zw = point_of_vector(&LatticeVector::new(1, 0, 5), 1).unwrap();
        assert!(matches!(g1.green_value(zw), Err(Error::Singularity { .. })));
        // n ≤ 0 is smooth
        let g0 = GreenEvaluator::new(tw(1, 5, 1), Rational64::from_integer(-1), 0, 1.0, 1e-12).unwrap();
        assert!(g0.green_value(zw).unwrap().is_finite());
        assert!(g1.green_value(z(0.0, 10.0)).unwrap().abs() < 1e-6);
    }

    #[test]
    fn truncation_is_sound() {
        let g = GreenEvaluator::new(tw(1, 5, 1), Rational64::from_integer(1), 0, 1.0, 1e-10).unwrap();
        let mut wide = g.clone();
        wide.cutoff *= 2.0;
        for p in [z(0.2, 0.9), z(-0.4, 1.7), z(0.05, 3.0)] {
            assert!((g.green_value(p).unwrap() - wide.green_value(p).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn current_equation_holds() {
        let g = GreenEvaluator::new(tw(1, 5, 1), Rational64::from_integer(1), 0, 1.0, 1e-14).unwrap();
        let rep = current_equation_check(&g, z(0.0, 2.0), 1e-3).unwrap();
        assert!(rep.rel_err < 1e-3, "{rep:?}");
        let g0 = GreenEvaluator::new(tw(1, 5, 1), Rational64::new(-5, 4), 1, 1.0, 1e-14).unwrap();
        let rep = current_equation_check(&g0, z(0.3, 1.2), 1e-3).unwrap();
        assert!(rep.rel_err < 1e-3, "{rep:?}");
        let zw = point_of_vector(&LatticeVector::new(1, 0, 5), 1).unwrap();
        let near = z(zw.x + 2e-3, zw.y);
        assert!(matches!(current_equation_check(&g, near, 1e-3), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn coset_mismatch_rejected() {
        assert!(GreenEvaluator::new(tw(1, 1, 1), Rational64::new(3, 4), 0, 1.0, 1e-12).is_err());
        assert!(GreenEvaluator::new(tw(1, 1, 1), Rational64::new(3, 4), 1, 1.0, 1e-12).is_ok());
    }

    #[test]
    fn profile_csv_has_header() {
        let g = GreenEvaluator::new(tw(1, 5, 1), Rational64::from_integer(1), 0, 1.0, 1e-10).unwrap();
        let csv = green_profile_csv(&g, &[z(0.0, 2.0), z(0.0, 3.0)]).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("x,y,value\n"));
    }
}
