//! The twisted Kudla–Millson theta kernel Θ_{Δ,r}(τ, z).

use crate::error::{Error, Result};
use crate::genus::{GenusCharacter, TwistData};
use crate::lattice::{Majorant, ReducedEnumerator, UpperHalfPoint, REDUCED_HEIGHT};
use crate::series::vector::VectorValuedFunction;
use crate::weilrep::e;
use num_complex::Complex64;
use num_rational::Rational64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

/// Coefficient profiles indexed by k = 4Nn ∈ [−radius, radius], for the
/// components μ = 0..=N; component 2N − μ equals component μ.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseProfiles {
    pub level: i64,
    pub delta: i64,
    pub radius: i64,
    rows: Vec<Vec<f64>>,
}

impl DenseProfiles {
    pub fn new(twist: TwistData, radius: i64) -> Self {
        let n = twist.n();
        DenseProfiles {
            level: n,
            delta: twist.delta(),
            radius,
            rows: vec![vec![0.0; (2 * radius + 1) as usize]; (n + 1) as usize],
        }
    }

    fn fold(&self, mu: i64) -> usize {
        let m = mu.rem_euclid(2 * self.level);
        m.min(2 * self.level - m) as usize
    }

    /// Coefficient of e(nu) with n = k/4N in component μ.
    pub fn get(&self, mu: i64, k: i64) -> f64 {
        if k.abs() > self.radius {
            return 0.0;
        }
        self.rows[self.fold(mu)][(k + self.radius) as usize]
    }

    pub fn add_assign(&mut self, other: &DenseProfiles) {
        assert_eq!(self.radius, other.radius, "profiles at different radii");
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    /// Σ_k a(k) e(ku/4N) per component.
    pub fn at(&self, u: f64) -> VectorValuedFunction {
        let den = 4.0 * self.level as f64;
        let folded: Vec<Complex64> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, a)| **a != 0.0)
                    .map(|(i, &a)| e((i as i64 - self.radius) as f64 / den * u) * a)
                    .sum()
            })
            .collect();
        let values = (0..2 * self.level).map(|mu| folded[self.fold(mu)]).collect();
        VectorValuedFunction { level: self.level, values }
    }

    /// Sparse form keyed by −disc = Δk.
    pub fn to_profiles(&self) -> Vec<CoefficientProfile> {
        (0..2 * self.level)
            .map(|mu| {
                self.rows[self.fold(mu)]
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != 0.0)
                    .map(|(i, &a)| (self.delta * (i as i64 - self.radius), a))
                    .collect()
            })
            .collect()
    }
}

/// Θ_{Δ,r} with a shared χ memo.
#[derive(Debug, Clone)]
pub struct ThetaKernel {
    chi: Arc<GenusCharacter>,
    pub budget: f64,
}

/// Fourier coefficients in τ of one component at fixed (v, z): the map
/// 4NΔn ↦ a(n), with Θ_μ(u + iv, z) = Σ a(n) e(nu).
pub type CoefficientProfile = BTreeMap<i64, f64>;

impl ThetaKernel {
    pub fn new(twist: TwistData, budget: f64) -> Self {
        Self::with_character(Arc::new(GenusCharacter::new(twist)), budget)
    }

    pub fn with_character(chi: Arc<GenusCharacter>, budget: f64) -> Self {
        ThetaKernel { chi, budget }
    }

    pub fn twist(&self) -> &TwistData {
        &self.chi.twist
    }

    pub fn character(&self) -> Arc<GenusCharacter> {
        self.chi.clone()
    }

    /// Denominator 4NΔ of the profile keys.
    pub fn key_denominator(&self) -> i64 {
        4 * self.twist().n() * self.twist().delta()
    }

    pub fn key_to_index(&self, key: i64) -> Rational64 {
        Rational64::new(key, self.key_denominator())
    }

    /// Per-component coefficient profiles at (v, z).
    pub fn profiles(&self, v: f64, z: UpperHalfPoint) -> Result<Vec<CoefficientProfile>> {
        let dense = self.dense_profiles(v, z)?;
        Ok(dense.to_profiles())
    }

    /// The same profiles stored densely in k = 4Nn: key −disc = Δk.
    pub fn dense_profiles(&self, v: f64, z: UpperHalfPoint) -> Result<DenseProfiles> {
        let mut out = DenseProfiles::new(*self.twist(), self.key_radius(v));
        self.accumulate(v, z, 1.0, &mut out)?;
        Ok(out)
    }

    fn majorant_bound(&self, v: f64) -> f64 {
        // each term is bounded by exp(−πvM/Δ) times a polynomial factor
        let cutoff = (1.0 / self.budget).ln() + 10.0;
        cutoff * self.twist().delta() as f64 / (PI * v)
    }

    /// Largest |k| that can occur at height v, from |disc| ≤ 2N·M.
    pub fn key_radius(&self, v: f64) -> i64 {
        let tw = self.twist();
        (2.0 * tw.n() as f64 * self.majorant_bound(v) / tw.delta() as f64).ceil() as i64 + 1
    }

    /// Adds weight·Θ-profiles at (v, z) into `out`.
    pub fn accumulate(&self, v: f64, z: UpperHalfPoint, weight: f64, out: &mut DenseProfiles) -> Result<()> {
        let radius = out.radius;
        if radius < self.key_radius(v) {
            return Err(Error::InvalidParameter(format!(
                "profile radius {radius} is below the key radius {} at v = {v}",
                self.key_radius(v)
            )));
        }
        if z.y >= REDUCED_HEIGHT {
            self.accumulate_direct(v, z, weight, out)
        } else {
            self.accumulate_reduced(v, z, weight, out)
        }
    }

    /// Enumeration through the reduced point, all components at once.
    fn accumulate_reduced(&self, v: f64, z: UpperHalfPoint, weight: f64, out: &mut DenseProfiles) -> Result<()> {
        let tw = self.twist();
        let (nn, delta) = (tw.n(), tw.delta());
        let df = delta as f64;
        let radius = out.radius;
        let bound = self.majorant_bound(v);
        // components μ ∈ 0..=N fed by b mod 2N
        let mut feeds: Vec<Vec<i64>> = vec![Vec::new(); (2 * nn) as usize];
        for mu in 0..=nn {
            feeds[tw.twisted_coset(mu) as usize].push(mu);
        }
        let mut err = None;
        ReducedEnumerator::new(nn, z).for_each_vector_disc_divisible(bound, delta, |w, p, m| {
            if err.is_some() {
                return;
            }
            let mus = &feeds[w.coset(nn) as usize];
            let k = -w.disc(nn) / delta;
            let mut sign = None;
            for &mu in mus {
                if (k + mu * mu).rem_euclid(4 * nn) != 0 {
                    continue;
                }
                let s = match sign {
                    Some(s) => s,
                    None => match self.chi.value(&w) {
                        Ok(s) => {
                            sign = Some(s);
                            s
                        }
                        Err(e) => {
                            err = Some(e);
                            return;
                        }
                    },
                };
                if s == 0 {
                    return;
                }
                // R + Q/Δ = M/(2Δ)
                let term = s as f64 * (v * p * p / df - 1.0 / (2.0 * PI)) * (-PI * v * m / df).exp();
                out.rows[mu as usize][(k + radius) as usize] += weight * term;
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Enumeration in the coordinates of L♯ itself, one coset at a time.
    fn accumulate_direct(&self, v: f64, z: UpperHalfPoint, weight: f64, out: &mut DenseProfiles) -> Result<()> {
        let tw = self.twist();
        let (nn, delta) = (tw.n(), tw.delta());
        let df = delta as f64;
        let maj = Majorant::new(nn, z);
        let bound = self.majorant_bound(v);
        let radius = out.radius;
        // Θ_{−μ} = Θ_μ: w ↦ −w preserves the kernel term and χ
        for mu in 0..=nn {
            let row = &mut out.rows[mu as usize];
            let mut err = None;
            maj.for_each_vector_disc_divisible(bound, tw.twisted_coset(mu), 2 * nn, delta, |w, m| {
                if err.is_some() {
                    return;
                }
                let k = -w.disc(nn) / delta;
                if (k + mu * mu).rem_euclid(4 * nn) != 0 {
                    return;
                }
                let sign = match self.chi.value(&w) {
                    Ok(0) => return,
                    Ok(s) => s as f64,
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                };
                let p = maj.pairing(&w);
                let term = sign * (v * p * p / df - 1.0 / (2.0 * PI)) * (-PI * v * m / df).exp();
                row[(k + radius) as usize] += weight * term;
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(())
    }

    /// Evaluate profiles at u.
    pub fn assemble(&self, profiles: &[CoefficientProfile], u: f64) -> VectorValuedFunction {
        let den = self.key_denominator() as f64;
        let values = profiles
            .iter()
            .map(|p| p.iter().map(|(&k, &a)| e(k as f64 / den * u) * a).sum::<Complex64>())
            .collect();
        VectorValuedFunction { level: self.twist().n(), values }
    }

    /// Θ_{Δ,r}(τ, z): the scalar multiplying μ(z) in each component.
    pub fn eval(&self, tau: Complex64, z: UpperHalfPoint) -> Result<VectorValuedFunction> {
        let prof = self.profiles(tau.im, z)?;
        Ok(self.assemble(&prof, tau.re))
    }
}

pub fn theta_kernel(twist: TwistData, tau: Complex64, z: UpperHalfPoint, budget: f64) -> Result<VectorValuedFunction> {
    ThetaKernel::new(twist, budget).eval(tau, z)
}
