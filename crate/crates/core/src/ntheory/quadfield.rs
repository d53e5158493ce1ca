//! Real quadratic fields: fundamental unit by continued fractions, class
//! numbers by cycles of reduced indefinite forms, Hurwitz class numbers.

use crate::error::{Error, Result};
use crate::ntheory::arith::{gcd, is_fundamental_discriminant, isqrt};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::collections::HashSet;

/// A positive fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(value: i64) -> Result<Self> {
        if is_fundamental_discriminant(value) {
            Ok(Self(value))
        } else {
            Err(Error::NotFundamental(value))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

/// Class number and fundamental unit of ℚ(√Δ).
///
/// `class_number` and `fundamental_unit_log` follow the wide convention
/// (ideal classes, smallest unit > 1). The narrow data (SL₂(ℤ)-classes of
/// forms, smallest totally positive unit > 1) are kept alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealQuadraticData {
    pub discriminant: FundamentalDiscriminant,
    pub class_number: u64,
    pub fundamental_unit_log: f64,
    pub unit_norm: i8,
    pub narrow_class_number: u64,
    pub totally_positive_unit_log: f64,
}

impl RealQuadraticData {
    /// h⁺/h, which is 1 or 2.
    pub fn narrow_wide_ratio(&self) -> u64 {
        self.narrow_class_number / self.class_number
    }

    /// h · log u in the wide convention.
    pub fn wide_regulator_product(&self) -> f64 {
        self.class_number as f64 * self.fundamental_unit_log
    }

    /// h⁺ · log ε⁺, always equal to 2 h log u.
    pub fn narrow_regulator_product(&self) -> f64 {
        self.narrow_class_number as f64 * self.totally_positive_unit_log
    }
}

/// Continued-fraction period of x₀ = (b + √Δ)/2, with b the largest integer
/// below √Δ of the parity of Δ. Returns (log ε, period length).
fn unit_from_continued_fraction(delta: i64) -> (f64, usize) {
    let r = isqrt(delta);
    let mut b = if (r - delta) % 2 == 0 { r } else { r - 1 };
    if b * b == delta {
        b -= 2;
    }
    let sq = (delta as f64).sqrt();
    let (p0, q0) = (b, 2i64);
    let (mut p, mut q) = (p0, q0);
    let mut log_eps = 0.0;
    let mut len = 0usize;
    loop {
        let a = (p + r).div_euclid(q);
        log_eps += ((p as f64 + sq) / q as f64).ln();
        len += 1;
        let p_next = a * q - p;
        let q_next = (delta - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        if p == p0 && q == q0 {
            break;
        }
    }
    (log_eps, len)
}

/// Gauss-reduced primitive indefinite forms [a,b,c] of discriminant Δ.
fn reduced_forms(delta: i64) -> Vec<(i64, i64, i64)> {
    let sq = (delta as f64).sqrt();
    let mut out = Vec::new();
    let bmax = isqrt(delta);
    for b in 1..=bmax {
        if (b * b - delta) % 4 != 0 {
            continue;
        }
        let ac = (b * b - delta) / 4; // negative
        for a_abs in 1..=(-ac) {
            if (-ac) % a_abs != 0 {
                continue;
            }
            let two_a = 2.0 * a_abs as f64;
            if !((sq - b as f64).abs() < two_a && two_a < sq + b as f64) {
                continue;
            }
            for a in [a_abs, -a_abs] {
                let c = ac / a;
                if gcd(gcd(a, b), c) == 1 && (b as f64) < sq {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// The reduced neighbour of a reduced indefinite form.
fn rho_step(delta: i64, f: (i64, i64, i64)) -> (i64, i64, i64) {
    let (_, b, c) = f;
    let sq = (delta as f64).sqrt();
    let m = 2 * c.abs();
    // b' ≡ -b mod 2|c| with √Δ - 2|c| < b' < √Δ
    let mut bp = (-b).rem_euclid(m);
    while (bp as f64) < sq - m as f64 {
        bp += m;
    }
    while (bp as f64) > sq {
        bp -= m;
    }
    let cp = (bp * bp - delta) / (4 * c);
    (c, bp, cp)
}

/// Number of SL₂(ℤ)-classes of primitive forms of discriminant Δ (narrow class number).
pub fn narrow_class_number(delta: i64) -> u64 {
    let forms = reduced_forms(delta);
    let mut seen: HashSet<(i64, i64, i64)> = HashSet::new();
    let mut cycles = 0;
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho_step(delta, g);
            if g == f {
                break;
            }
        }
    }
    cycles
}

pub fn real_quadratic_data(delta: FundamentalDiscriminant) -> Result<RealQuadraticData> {
    let d = delta.value();
    if d == 1 {
        return Err(Error::NoRealField);
    }
    let (log_eps, len) = unit_from_continued_fraction(d);
    let unit_norm: i8 = if len % 2 == 0 { 1 } else { -1 };
    let narrow = narrow_class_number(d);
    let (wide, log_plus) = if unit_norm == -1 {
        (narrow, 2.0 * log_eps)
    } else {
        (narrow / 2, log_eps)
    };
    Ok(RealQuadraticData {
        discriminant: delta,
        class_number: wide,
        fundamental_unit_log: log_eps,
        unit_norm,
        narrow_class_number: narrow,
        totally_positive_unit_log: log_plus,
    })
}

/// Hurwitz class number H(n) as an exact rational; H(0) = -1/12.
pub fn hurwitz_class_number(n: u64) -> BigRational {
    let n = n as i64;
    if n == 0 {
        return BigRational::new(BigInt::from(-1), BigInt::from(12));
    }
    if !matches!(n % 4, 0 | 3) {
        return BigRational::from_integer(BigInt::from(0));
    }
    // reduced forms |b| <= a <= c, b >= 0 if |b| = a or a = c, b^2 - 4ac = -n
    let mut twelfths = 0i64;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a..=a {
            if (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            twelfths += if a == b && b == c {
                4
            } else if b == 0 && a == c {
                6
            } else {
                12
            };
        }
        a += 1;
    }
    BigRational::new(BigInt::from(twelfths), BigInt::from(12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::special::dirichlet_l;

    fn rq(d: i64) -> RealQuadraticData {
        real_quadratic_data(FundamentalDiscriminant::new(d).unwrap()).unwrap()
    }

    fn pell_oracle(d: i64) -> f64 {
        // smallest (t,u) with t^2 - d u^2 = ±4, u >= 1
        for u in 1..100_000i64 {
            for sign in [-4i64, 4] {
                let t2 = d * u * u + sign;
                if t2 > 0 {
                    let t = isqrt(t2);
                    if t * t == t2 {
                        return ((t as f64 + u as f64 * (d as f64).sqrt()) / 2.0).ln();
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn examples() {
        let d5 = rq(5);
        assert_eq!(d5.class_number, 1);
        assert!((d5.fundamental_unit_log - 0.481_211_825_059_603_4).abs() < 1e-12);
        let d12 = rq(12);
        assert_eq!(d12.class_number, 1);
        assert!((d12.fundamental_unit_log - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        assert_eq!(d12.narrow_class_number, 2);
        assert_eq!(
            real_quadratic_data(FundamentalDiscriminant::new(1).unwrap()),
            Err(Error::NoRealField)
        );
    }

    #[test]
    fn units_match_pell() {
        for d in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 56, 57, 60, 61, 65, 69, 73, 76, 77, 85, 88] {
            let r = rq(d);
            assert!((r.fundamental_unit_log - pell_oracle(d)).abs() < 1e-9, "Δ = {d}");
        }
    }

    #[test]
    fn class_number_formula() {
        for d in [5i64, 8, 12, 13, 73, 40, 60, 65, 85, 104, 136, 145, 229] {
            let r = rq(d);
            let lhs = (d as f64).sqrt() * dirichlet_l(d, 1.0).unwrap();
            let rhs = 2.0 * r.wide_regulator_product();
            assert!(((lhs - rhs) / rhs).abs() < 1e-9, "Δ = {d}: {lhs} vs {rhs}");
            assert!((r.narrow_regulator_product() - rhs).abs() < 1e-9);
        }
        // known wide class numbers
        assert_eq!(rq(40).class_number, 2);
        assert_eq!(rq(60).class_number, 2);
        assert_eq!(rq(229).class_number, 3);
    }

    #[test]
    fn hurwitz_values() {
        let h = |n| hurwitz_class_number(n);
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(h(0), q(-1, 12));
        assert_eq!(h(3), q(1, 3));
        assert_eq!(h(4), q(1, 2));
        assert_eq!(h(7), q(1, 1));
        assert_eq!(h(8), q(1, 1));
        assert_eq!(h(11), q(1, 1));
        assert_eq!(h(12), q(4, 3));
        assert_eq!(h(15), q(2, 1));
        assert_eq!(h(16), q(3, 2));
        assert_eq!(h(20), q(2, 1));
        assert_eq!(h(23), q(3, 1));
        assert_eq!(h(5), q(0, 1));
    }
}
