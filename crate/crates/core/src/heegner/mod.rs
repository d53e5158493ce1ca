//! Γ₀(N)-orbits of lattice vectors of fixed norm and coset, and the twisted
//! Heegner divisors built from them.
//!
//! Orbits are classified exactly: a vector w is SL₂(ℤ)-conjugate to a unique
//! reduced vector f, and the Γ₀(N)-orbits over f correspond to orbits of the
//! finite group Stab(f) on the cosets Γ₀(N)\SL₂(ℤ).

pub mod square;

use crate::error::{Error, Result};
use crate::genus::{GenusCharacter, TwistData};
use crate::lattice::gamma0::{p1_canonical, stabilizer_of_reduced};
use crate::lattice::{gamma0_coset_reps, norm_matches_coset, point_of_vector, LatticeVector, Level, Mat2, UpperHalfPoint};
use crate::ntheory::arith::isqrt;
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;

/// Coset representatives with a lookup from ℙ¹(ℤ/N) classes to indices.
pub(crate) struct CosetTable {
    pub level: i64,
    pub reps: Vec<Mat2>,
    index: HashMap<(i64, i64), usize>,
}

impl CosetTable {
    pub fn new(level: i64) -> Self {
        let reps = gamma0_coset_reps(level);
        let index = reps
            .iter()
            .enumerate()
            .map(|(j, g)| (p1_canonical(g.c, g.d, level), j))
            .collect();
        CosetTable { level, reps, index }
    }

    /// Index j with Γ₀(N) g = Γ₀(N) γ_j.
    pub fn index_of(&self, g: &Mat2) -> usize {
        self.index[&p1_canonical(g.c, g.d, self.level)]
    }

    /// Orbits of a finite subgroup of SL₂(ℤ) acting on the cosets from the right.
    pub fn orbits(&self, group: &[Mat2]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.reps.len()];
        let mut out = Vec::new();
        for j in 0..self.reps.len() {
            if seen[j] {
                continue;
            }
            let mut orbit: Vec<usize> = group.iter().map(|s| self.index_of(&(self.reps[j] * *s))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &k in &orbit {
                seen[k] = true;
            }
            out.push(orbit);
        }
        out
    }
}

/// Level-one vectors (A, B, C) of discriminant D < 0 whose point lies in the
/// standard fundamental domain, for both signs.
fn reduced_level_one(disc: i64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let cmax = isqrt(-disc / 3) + 1;
    for c in 1..=cmax {
        for b in -c..c {
            let num = b * b - disc;
            if num % (4 * c) != 0 {
                continue;
            }
            let a = num / (4 * c);
            if a < c || (a == c && b > 0) {
                continue;
            }
            out.push(LatticeVector::new(a, b, c));
            out.push(LatticeVector::new(-a, -b, -c));
        }
    }
    out
}

/// Γ₀(N)-orbit representatives of L_μ[n] for n > 0.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitList {
    pub level: i64,
    pub coset: i64,
    pub norm: Rational64,
    pub representatives: Vec<LatticeVector>,
    pub stabilizer_orders: Vec<usize>,
}

pub fn enumerate_orbits(level: Level, mu: i64, n: Rational64) -> Result<OrbitList> {
    let nn = level.get();
    let mu = mu.rem_euclid(2 * nn);
    if !norm_matches_coset(n, mu, level) {
        return Err(Error::InvalidParameter(format!("norm {n} does not match coset {mu} mod 1")));
    }
    let disc_r = -n * Rational64::from_integer(4 * nn);
    if !disc_r.is_integer() || disc_r.to_integer() >= 0 {
        return Err(Error::InvalidParameter(format!(
            "orbit enumeration needs a positive norm, got {n}"
        )));
    }
    let disc = disc_r.to_integer();
    let table = CosetTable::new(nn);
    let mut found: Vec<(LatticeVector, usize)> = Vec::new();
    for f in reduced_level_one(disc) {
        let z = point_of_vector(&f, 1)?;
        let stab: Vec<Mat2> = stabilizer_of_reduced(z)
            .into_iter()
            .filter(|s| f.conjugate(s, 1) == Some(f))
            .collect();
        for orbit in table.orbits(&stab) {
            let g = table.reps[orbit[0]];
            let fj = f.conjugate(&g, 1).expect("level one conjugation is closed");
            if fj.c % nn != 0 || (fj.b - mu).rem_euclid(2 * nn) != 0 {
                continue;
            }
            found.push((LatticeVector::new(fj.a, fj.b, fj.c / nn), stab.len() / orbit.len()));
        }
    }
    found.sort_by_key(|(w, _)| (w.c, w.b, w.a));
    Ok(OrbitList {
        level: nn,
        coset: mu,
        norm: n,
        representatives: found.iter().map(|p| p.0).collect(),
        stabilizer_orders: found.iter().map(|p| p.1).collect(),
    })
}

/// One signed, weighted CM point of a twisted divisor.
#[derive(Debug, Clone, Serialize)]
pub struct DivisorPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub disc: i64,
    #[serde(serialize_with = "serialize_big_rational")]
    pub mult: BigRational,
    pub sign: i32,
}

impl DivisorPoint {
    pub fn vector(&self) -> LatticeVector {
        LatticeVector::new(self.a, self.b, self.c)
    }

    pub fn point(&self, level: i64) -> UpperHalfPoint {
        point_of_vector(&self.vector(), level).expect("divisor points have positive norm")
    }
}

fn serialize_big_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Z_{Δ,r}(n, μ) = Σ χ_Δ(w) Z(w) over Γ₀(N)\L_{rμ}[Δn].
#[derive(Debug, Clone, Serialize)]
pub struct TwistedDivisor {
    pub level: i64,
    pub delta: i64,
    pub r: i64,
    pub n: Rational64,
    pub mu: i64,
    pub points: Vec<DivisorPoint>,
}

impl TwistedDivisor {
    pub fn degree(&self) -> BigRational {
        degree(self)
    }

    /// JSON table {level, delta, r, n, mu, points, degree}.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("divisor serializes");
        v["n"] = serde_json::Value::String(self.n.to_string());
        v["degree"] = serde_json::Value::String(self.degree().to_string());
        v
    }
}

pub fn degree(d: &TwistedDivisor) -> BigRational {
    d.points
        .iter()
        .fold(BigRational::zero(), |acc, p| acc + p.mult.clone() * BigInt::from(p.sign))
}

pub fn twisted_divisor(twist: &TwistData, n: Rational64, mu: i64) -> Result<TwistedDivisor> {
    let chi = GenusCharacter::new(*twist);
    twisted_divisor_with(&chi, n, mu)
}

pub(crate) fn twisted_divisor_with(chi: &GenusCharacter, n: Rational64, mu: i64) -> Result<TwistedDivisor> {
    let twist = chi.twist;
    let level = twist.level;
    let nn = level.get();
    let mu = mu.rem_euclid(2 * nn);
    if !norm_matches_coset(n, mu, level) {
        return Err(Error::InvalidParameter(format!("norm {n} does not match coset {mu} mod 1")));
    }
    let delta = twist.delta();
    let orbits = enumerate_orbits(level, twist.twisted_coset(mu), n * delta)?;
    let mut points = Vec::new();
    for (w, order) in orbits.representatives.iter().zip(&orbits.stabilizer_orders) {
        let sign = chi.value(w)?;
        if sign == 0 {
            continue;
        }
        points.push(DivisorPoint {
            a: w.a,
            b: w.b,
            c: w.c,
            disc: w.disc(nn),
            mult: BigRational::new(BigInt::from(2), BigInt::from(*order as i64)),
            sign,
        });
    }
    Ok(TwistedDivisor { level: nn, delta, r: twist.twist_r, n, mu, points })
}

/// Degree of the untwisted divisor Z(n, μ).
pub fn untwisted_degree(level: Level, n: Rational64, mu: i64) -> Result<BigRational> {
    let twist = TwistData::new(level.get(), 1, 1)?;
    Ok(degree(&twisted_divisor(&twist, n, mu)?))
}

/// (φ(N)/2)·deg Z(n, μ), the holomorphic coefficient of ℰ_L(τ, 1) at q^n e_μ.
pub fn eisenstein_coeff(level: Level, n: Rational64, mu: i64) -> Result<BigRational> {
    let phi = crate::ntheory::euler_phi(level.get() as u64) as i64;
    Ok(untwisted_degree(level, n, mu)? * BigRational::new(BigInt::from(phi), BigInt::from(2)))
}

/// All (n, μ) with 0 < n ≤ nmax and n ≡ Q(μ) mod 1, ordered by μ then n.
pub fn strata_up_to(level: Level, nmax: Rational64) -> Vec<(Rational64, i64)> {
    let nn = level.get();
    let mut out = Vec::new();
    for mu in 0..2 * nn {
        let q = Rational64::new(-mu * mu, 4 * nn);
        let mut n = q - q.floor();
        if n.is_zero() {
            n += 1;
        }
        while n <= nmax {
            out.push((n, mu));
            n += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{gamma0_equivalent, stabilizer_order};
    use crate::ntheory::hurwitz_class_number;

    fn lv(n: i64) -> Level {
        Level::new(n).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn big(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn orbit_examples() {
        let o = enumerate_orbits(lv(1), 0, q(1, 1)).unwrap();
        assert_eq!(o.representatives.len(), 2);
        assert_eq!(o.stabilizer_orders, vec![4, 4]);
        assert!(o.representatives.contains(&LatticeVector::new(1, 0, 1)));
        assert!(o.representatives.contains(&LatticeVector::new(-1, 0, -1)));
        let o = enumerate_orbits(lv(1), 1, q(3, 4)).unwrap();
        assert_eq!(o.stabilizer_orders, vec![6, 6]);
        let o = enumerate_orbits(lv(1), 0, q(5, 1)).unwrap();
        assert_eq!(o.representatives.len(), 4);
        assert!(enumerate_orbits(lv(1), 0, q(-1, 1)).is_err());
        assert!(enumerate_orbits(lv(1), 1, q(1, 1)).is_err());
    }

    /// Brute-force oracle: vectors in a box, grouped by `gamma0_equivalent`.
    fn brute_orbits(n: i64, mu: i64, norm: Rational64, bound: i64) -> Vec<LatticeVector> {
        let mut classes: Vec<LatticeVector> = Vec::new();
        for c in -bound..=bound {
            for b in -2 * n * bound..=2 * n * bound {
                if c == 0 || (b - mu).rem_euclid(2 * n) != 0 {
                    continue;
                }
                let disc = -(norm * 4 * n).to_integer();
                if (b * b - disc) % (4 * n * c) != 0 {
                    continue;
                }
                let w = LatticeVector::new((b * b - disc) / (4 * n * c), b, c);
                if w.a.abs() > bound * 4 {
                    continue;
                }
                if !classes.iter().any(|u| gamma0_equivalent(u, &w, n).unwrap().is_some()) {
                    classes.push(w);
                }
            }
        }
        classes
    }

    #[test]
    fn matches_brute_force_classes() {
        for (n, mu, norm) in [(1, 0, q(5, 1)), (2, 1, q(7, 8)), (2, 0, q(3, 1)), (6, 1, q(23, 24)), (6, 5, q(47, 24)), (3, 3, q(9, 4))] {
            let o = enumerate_orbits(lv(n), mu, norm).unwrap();
            let brute = brute_orbits(n, mu, norm, 12);
            assert_eq!(o.representatives.len(), brute.len(), "N={n} μ={mu} n={norm}");
            for (w, &k) in o.representatives.iter().zip(&o.stabilizer_orders) {
                assert!(brute.iter().any(|u| gamma0_equivalent(u, w, n).unwrap().is_some()));
                assert_eq!(stabilizer_order(w, n).unwrap(), k);
                assert_eq!(w.quad_value(n), norm);
            }
            for i in 0..o.representatives.len() {
                for j in 0..i {
                    assert!(gamma0_equivalent(&o.representatives[i], &o.representatives[j], n).unwrap().is_none());
                }
            }
        }
    }

    #[test]
    fn divisor_examples() {
        let t = TwistData::new(1, 5, 1).unwrap();
        let d = twisted_divisor(&t, q(1, 1), 0).unwrap();
        assert_eq!(d.points.len(), 4);
        assert!(d.degree().is_zero());
        let mut signs: Vec<i32> = d.points.iter().map(|p| p.sign).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, -1, 1, 1]);
        assert_eq!(untwisted_degree(lv(1), q(1, 1), 0).unwrap(), big(1, 1));
        assert_eq!(untwisted_degree(lv(1), q(3, 4), 1).unwrap(), big(2, 3));
        assert_eq!(eisenstein_coeff(lv(1), q(1, 1), 0).unwrap(), big(1, 2));
        let json = d.to_json();
        assert_eq!(json["degree"], "0");
        assert_eq!(json["points"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn hurwitz_pattern_at_level_one() {
        for m in 1..=25i64 {
            assert_eq!(eisenstein_coeff(lv(1), q(m, 1), 0).unwrap(), hurwitz_class_number(4 * m as u64));
            assert_eq!(
                eisenstein_coeff(lv(1), q(4 * m - 1, 4), 1).unwrap(),
                hurwitz_class_number(4 * m as u64 - 1)
            );
        }
    }

    #[test]
    fn degree_zero_for_real_twists() {
        for (n, d, r) in [(1, 5, 1), (6, 73, 1), (6, 12, 6), (2, 17, 1), (1, 8, 0)] {
            let t = TwistData::new(n, d, r).unwrap();
            for (norm, mu) in strata_up_to(lv(n), q(3, 1)) {
                let div = twisted_divisor(&t, norm, mu).unwrap();
                assert!(div.degree().is_zero(), "N={n} Δ={d} n={norm} μ={mu}");
            }
        }
    }

    #[test]
    fn negation_pairs_cosets() {
        let t = TwistData::new(6, 73, 1).unwrap();
        for (norm, mu) in strata_up_to(lv(6), q(2, 1)) {
            let d1 = twisted_divisor(&t, norm, mu).unwrap();
            let d2 = twisted_divisor(&t, norm, -mu).unwrap();
            let mut s1: Vec<(i64, i64, i64, i32)> = d1.points.iter().map(|p| (-p.a, -p.b, -p.c, p.sign)).collect();
            let mut s2: Vec<(i64, i64, i64, i32)> = d2.points.iter().map(|p| (p.a, p.b, p.c, p.sign)).collect();
            assert_eq!(s1.len(), s2.len());
            // negatives of representatives are equivalent to representatives of −μ, same sign
            for (a, b, c, s) in s1.drain(..) {
                let w = LatticeVector::new(a, b, c);
                let k = s2
                    .iter()
                    .position(|&(a2, b2, c2, _)| gamma0_equivalent(&w, &LatticeVector::new(a2, b2, c2), 6).unwrap().is_some())
                    .unwrap();
                assert_eq!(s2.remove(k).3, s);
            }
        }
    }
}
