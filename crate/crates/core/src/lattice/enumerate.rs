//! Enumeration of lattice vectors under the majorant at a point z.
//!
//! The majorant M_z(w) = (w, w(z))² − 2Q(w) is positive definite with
//! determinant 1/(2N), so the number of vectors with M_z ≤ T does not depend
//! on z. Enumeration is Fincke–Pohst on an LDLᵀ factorization with `a`
//! innermost, which also gives the (b, c)-projection used for fixed-norm
//! shells.

use crate::lattice::gamma0::reduce_to_fundamental_domain;
use crate::lattice::matrix::Mat2;
use crate::lattice::vector::{LatticeVector, UpperHalfPoint};
use crate::ntheory::arith::ext_gcd;

/// The majorant at z in (a, b, c) coordinates, factored as
/// d0(a + u01 b + u02 c)² + d1(b + u12 c)² + d2 c².
#[derive(Debug, Clone, Copy)]
pub struct Majorant {
    pub level: i64,
    pub z: UpperHalfPoint,
    ell: [f64; 3],
    d0: f64,
    u01: f64,
    u02: f64,
    d1: f64,
    u12: f64,
    d2: f64,
}

impl Majorant {
    pub fn new(level: i64, z: UpperHalfPoint) -> Self {
        let nf = level as f64;
        let s = nf.sqrt() / z.y;
        let ell = [s / nf, -s * z.x / nf, s * z.norm_sqr()];
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = ell[i] * ell[j];
            }
        }
        g[0][2] -= 1.0;
        g[2][0] -= 1.0;
        g[1][1] += 1.0 / (2.0 * nf);
        let d0 = g[0][0];
        let u01 = g[0][1] / d0;
        let u02 = g[0][2] / d0;
        let g11 = g[1][1] - g[0][1] * u01;
        let g12 = g[1][2] - g[0][1] * u02;
        let g22 = g[2][2] - g[0][2] * u02;
        let d1 = g11;
        let u12 = g12 / d1;
        let d2 = g22 - g12 * u12;
        Majorant { level, z, ell, d0, u01, u02, d1, u12, d2 }
    }

    /// The pairing (w, w(z)) = −(√N/y)(c|z|² − bx/N + a/N).
    pub fn pairing(&self, w: &LatticeVector) -> f64 {
        -(self.ell[0] * w.a as f64 + self.ell[1] * w.b as f64 + self.ell[2] * w.c as f64)
    }

    /// M_z(w) = (w, w(z))² − 2Q(w).
    pub fn value(&self, w: &LatticeVector) -> f64 {
        let p = self.pairing(w);
        p * p + w.disc(self.level) as f64 / (2.0 * self.level as f64)
    }

    fn b_range(&self, c: i64, rest: f64) -> (f64, f64) {
        let r = (rest.max(0.0) / self.d1).sqrt();
        let center = -self.u12 * c as f64;
        (center - r, center + r)
    }

    fn for_each_bc<F: FnMut(i64, i64, f64)>(&self, bound: f64, residue: i64, modulus: i64, mut f: F) {
        let cmax = (bound / self.d2).sqrt().floor() as i64;
        for c in -cmax..=cmax {
            let rest = bound - self.d2 * (c * c) as f64;
            if rest < 0.0 {
                continue;
            }
            let (lo, hi) = self.b_range(c, rest);
            let mut b = first_in_class(lo.ceil() as i64, residue, modulus);
            while (b as f64) <= hi {
                let t = b as f64 + self.u12 * c as f64;
                let rest2 = rest - self.d1 * t * t;
                if rest2 >= 0.0 {
                    f(b, c, rest2);
                }
                b += modulus;
            }
        }
    }

    /// Every w with b ≡ residue (mod modulus) and M_z(w) ≤ bound; the callback
    /// receives w and M_z(w).
    pub fn for_each_vector<F: FnMut(LatticeVector, f64)>(
        &self,
        bound: f64,
        residue: i64,
        modulus: i64,
        mut f: F,
    ) {
        let slack = 1e-9 * (1.0 + bound);
        self.for_each_bc(bound + slack, residue, modulus, |b, c, rest| {
            let r = (rest / self.d0).sqrt();
            let center = -self.u01 * b as f64 - self.u02 * c as f64;
            let (lo, hi) = ((center - r).ceil() as i64, (center + r).floor() as i64);
            for a in lo..=hi {
                let w = LatticeVector::new(a, b, c);
                let m = self.value(&w);
                if m <= bound {
                    f(w, m);
                }
            }
        });
    }

    /// Every w with b ≡ residue (mod modulus), Δ | b² − 4Nac and M_z(w) ≤ bound;
    /// only the admissible residue class of a is visited.
    pub fn for_each_vector_disc_divisible<F: FnMut(LatticeVector, f64)>(
        &self,
        bound: f64,
        residue: i64,
        modulus: i64,
        delta: i64,
        mut f: F,
    ) {
        let n = self.level;
        let slack = 1e-9 * (1.0 + bound);
        self.for_each_bc(bound + slack, residue, modulus, |b, c, rest| {
            // 4Nc·a ≡ b² (mod Δ)
            let coef = (4 * n * c).rem_euclid(delta);
            let rhs = (b * b).rem_euclid(delta);
            let (g, inv, _) = ext_gcd(coef, delta);
            if rhs % g != 0 {
                return;
            }
            let step = delta / g;
            let a0 = if step == 1 { 0 } else { ((rhs / g) % step * inv.rem_euclid(step)).rem_euclid(step) };
            let r = (rest / self.d0).sqrt();
            let center = -self.u01 * b as f64 - self.u02 * c as f64;
            let lo = first_in_class((center - r).ceil() as i64, a0, step);
            let hi = (center + r).floor() as i64;
            let mut a = lo;
            while a <= hi {
                let w = LatticeVector::new(a, b, c);
                let m = self.value(&w);
                if m <= bound {
                    f(w, m);
                }
                a += step;
            }
        });
    }

    /// Every w with b ≡ residue (mod modulus), b² − 4Nac = disc and M_z(w) ≤ bound.
    pub fn for_each_with_disc<F: FnMut(LatticeVector, f64)>(
        &self,
        bound: f64,
        residue: i64,
        modulus: i64,
        disc: i64,
        mut f: F,
    ) {
        let n = self.level;
        let slack = 1e-9 * (1.0 + bound);
        self.for_each_bc(bound + slack, residue, modulus, |b, c, rest| {
            if c != 0 {
                let num = b * b - disc;
                if num % (4 * n * c) != 0 {
                    return;
                }
                let w = LatticeVector::new(num / (4 * n * c), b, c);
                let m = self.value(&w);
                if m <= bound {
                    f(w, m);
                }
            } else if b * b == disc {
                let r = (rest / self.d0).sqrt();
                let center = -self.u01 * b as f64;
                for a in (center - r).ceil() as i64..=(center + r).floor() as i64 {
                    let w = LatticeVector::new(a, b, 0);
                    let m = self.value(&w);
                    if m <= bound {
                        f(w, m);
                    }
                }
            }
        });
    }

    /// Number of vectors with M_z ≤ bound in one coset, by the volume estimate.
    pub fn volume_estimate(&self, bound: f64, modulus: i64) -> f64 {
        // vol{M ≤ T} = (4π/3) T^{3/2} / √det, det = 1/(2N)
        4.0 * std::f64::consts::PI / 3.0 * bound.powf(1.5) * (2.0 * self.level as f64).sqrt() / modulus as f64
    }
}

/// Below this height enumeration moves to the reduced point.
pub const REDUCED_HEIGHT: f64 = 0.5;

/// Enumeration of level-N vectors near z, done at the reduced point.
///
/// With z₀ = gz in the standard domain, w ↦ gwg⁻¹ carries L♯ into the binary
/// forms [a, b, Nc], and M_z(w) = M¹_{z₀}(gwg⁻¹)/N with M¹ the level-one
/// majorant. Near a cusp the majorant at z is badly conditioned in the
/// (a, b, c) coordinates while the one at z₀ is not.
#[derive(Debug, Clone, Copy)]
pub struct ReducedEnumerator {
    pub level: i64,
    form_majorant: Majorant,
    back: Mat2,
}

impl ReducedEnumerator {
    pub fn new(level: i64, z: UpperHalfPoint) -> Self {
        let (z0, g) = reduce_to_fundamental_domain(z);
        ReducedEnumerator { level, form_majorant: Majorant::new(1, z0), back: g.inverse() }
    }

    fn pull_back(&self, f: &LatticeVector) -> Option<LatticeVector> {
        let w = f.conjugate(&self.back, 1)?;
        (w.c % self.level == 0).then(|| LatticeVector::new(w.a, w.b, w.c / self.level))
    }

    /// (w, w(z)) and M_z(w) from the form f = gwg⁻¹.
    fn values(&self, f: &LatticeVector, m1: f64) -> (f64, f64) {
        let nf = self.level as f64;
        (self.form_majorant.pairing(f) / nf.sqrt(), m1 / nf)
    }

    /// Every w with Δ | disc and M_z(w) ≤ bound; the callback receives w,
    /// (w, w(z)) and M_z(w).
    pub fn for_each_vector_disc_divisible<F: FnMut(LatticeVector, f64, f64)>(&self, bound: f64, delta: i64, mut f: F) {
        let nf = self.level as f64;
        self.form_majorant.for_each_vector_disc_divisible(nf * bound, 0, 1, delta, |form, m1| {
            if let Some(w) = self.pull_back(&form) {
                let (p, m) = self.values(&form, m1);
                f(w, p, m);
            }
        });
    }

    /// Every w with b ≡ residue (mod modulus), disc(w) = disc and M_z(w) ≤ bound.
    pub fn for_each_with_disc<F: FnMut(LatticeVector, f64, f64)>(
        &self,
        bound: f64,
        residue: i64,
        modulus: i64,
        disc: i64,
        mut f: F,
    ) {
        let nf = self.level as f64;
        self.form_majorant.for_each_with_disc(nf * bound, 0, 1, disc, |form, m1| {
            if let Some(w) = self.pull_back(&form) {
                if (w.b - residue).rem_euclid(modulus) == 0 {
                    let (p, m) = self.values(&form, m1);
                    f(w, p, m);
                }
            }
        });
    }
}

fn first_in_class(start: i64, residue: i64, modulus: i64) -> i64 {
    start + (residue - start).rem_euclid(modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(level: i64, z: UpperHalfPoint, bound: f64, residue: i64) -> Vec<LatticeVector> {
        let maj = Majorant::new(level, z);
        let mut out = Vec::new();
        for a in -60..=60 {
            for b in -60..=60 {
                if (b - residue).rem_euclid(2 * level) != 0 {
                    continue;
                }
                for c in -60..=60 {
                    let w = LatticeVector::new(a, b, c);
                    if maj.value(&w) <= bound {
                        out.push(w);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_brute_force() {
        for (level, x, y) in [(1, 0.0, 1.0), (1, 0.3, 0.7), (2, -0.4, 1.9), (6, 0.17, 0.35), (3, 2.5, 3.0)] {
            let z = UpperHalfPoint { x, y };
            let maj = Majorant::new(level, z);
            for residue in 0..2 * level {
                let mut got = Vec::new();
                maj.for_each_vector(12.0, residue, 2 * level, |w, _| got.push(w));
                got.sort();
                assert_eq!(got, brute(level, z, 12.0, residue), "N={level} z={x}+{y}i μ={residue}");
            }
        }
    }

    #[test]
    fn fixed_disc_matches_full() {
        let z = UpperHalfPoint { x: 0.21, y: 0.8 };
        for level in [1, 6] {
            let maj = Majorant::new(level, z);
            for disc in [-20i64, -23, 0, 25, 1, 24] {
                for residue in 0..2 * level {
                    let mut full = Vec::new();
                    maj.for_each_vector(30.0, residue, 2 * level, |w, _| {
                        if w.disc(level) == disc {
                            full.push(w)
                        }
                    });
                    let mut shell = Vec::new();
                    maj.for_each_with_disc(30.0, residue, 2 * level, disc, |w, _| shell.push(w));
                    full.sort();
                    shell.sort();
                    assert_eq!(full, shell);
                }
            }
        }
    }

    #[test]
    fn disc_divisible_matches_filter() {
        let z = UpperHalfPoint { x: -0.31, y: 0.6 };
        for (level, delta) in [(1, 5), (6, 73), (6, 12), (2, 8)] {
            let maj = Majorant::new(level, z);
            for residue in 0..2 * level {
                let mut full = Vec::new();
                maj.for_each_vector(300.0, residue, 2 * level, |w, _| {
                    if w.disc(level) % delta == 0 {
                        full.push(w)
                    }
                });
                let mut fast = Vec::new();
                maj.for_each_vector_disc_divisible(300.0, residue, 2 * level, delta, |w, _| fast.push(w));
                full.sort();
                fast.sort();
                assert_eq!(full, fast, "N={level} Δ={delta} μ={residue}");
            }
        }
    }

    #[test]
    fn reduced_enumeration_matches_direct() {
        for (level, x, y) in [(6, 0.013, 0.02), (6, 0.49, 0.004), (2, -0.3, 0.1), (1, 0.2, 0.05), (3, 0.1, 1.5)] {
            let z = UpperHalfPoint { x, y };
            let maj = Majorant::new(level, z);
            let red = ReducedEnumerator::new(level, z);
            for delta in [1, 5, 12] {
                let mut direct = Vec::new();
                for residue in 0..2 * level {
                    maj.for_each_vector_disc_divisible(60.0, residue, 2 * level, delta, |w, m| {
                        direct.push((w, maj.pairing(&w), m))
                    });
                }
                let mut reduced = Vec::new();
                red.for_each_vector_disc_divisible(60.0, delta, |w, p, m| reduced.push((w, p, m)));
                direct.sort_by_key(|t| t.0);
                reduced.sort_by_key(|t| t.0);
                assert_eq!(direct.len(), reduced.len(), "N={level} z={x}+{y}i Δ={delta}");
                for (a, b) in direct.iter().zip(&reduced) {
                    assert_eq!(a.0, b.0);
                    assert!((a.1 - b.1).abs() < 1e-7 * (1.0 + a.1.abs()) && (a.2 - b.2).abs() < 1e-7 * (1.0 + a.2));
                }
            }
            for disc in [-23i64, -20, 1] {
                for residue in 0..2 * level {
                    let mut direct = Vec::new();
                    maj.for_each_with_disc(60.0, residue, 2 * level, disc, |w, _| direct.push(w));
                    let mut reduced = Vec::new();
                    red.for_each_with_disc(60.0, residue, 2 * level, disc, |w, _, _| reduced.push(w));
                    direct.sort();
                    reduced.sort();
                    assert_eq!(direct, reduced);
                }
            }
        }
    }

    #[test]
    fn majorant_at_heegner_point() {
        // at z(w), (w, w(z)) = −2√Q and M = 2Q
        let w = LatticeVector::new(1, 0, 1);
        let maj = Majorant::new(1, UpperHalfPoint { x: 0.0, y: 1.0 });
        assert!((maj.pairing(&w) + 2.0).abs() < 1e-14);
        assert!((maj.value(&w) - 2.0).abs() < 1e-14);
    }
}
