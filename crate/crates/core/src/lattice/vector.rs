//! The level, lattice vectors (a,b,c) and the ℍ ↔ positive-line dictionary.

use crate::error::{Error, Result};
use crate::lattice::matrix::Mat2;
use crate::ntheory::arith::is_squarefree;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A squarefree level N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level(i64);

impl Level {
    pub fn new(n: i64) -> Result<Self> {
        if n >= 1 && is_squarefree(n as u64) {
            Ok(Level(n))
        } else {
            Err(Error::InvalidParameter(format!("level {n} is not a positive squarefree integer")))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// Size 2N of the discriminant group.
    pub fn disc_order(self) -> i64 {
        2 * self.0
    }
}

/// A residue μ mod 2N indexing the coset L_μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetIndex {
    pub residue: i64,
    pub level: Level,
}

impl CosetIndex {
    pub fn new(residue: i64, level: Level) -> Self {
        CosetIndex { residue: residue.rem_euclid(level.disc_order()), level }
    }

    /// Q(μ) mod 1 as a rational in [0, 1).
    pub fn norm_mod_one(&self) -> Rational64 {
        let n = self.level.get();
        let q = Rational64::new(-self.residue * self.residue, 4 * n);
        q - q.floor()
    }

    pub fn neg(&self) -> Self {
        CosetIndex::new(-self.residue, self.level)
    }
}

/// Whether `n` ≡ Q(μ) (mod 1).
pub fn norm_matches_coset(n: Rational64, mu: i64, level: Level) -> bool {
    let diff = n - Rational64::new(-mu * mu, 4 * level.get());
    diff.is_integer()
}

/// A vector of L♯, w = [[b/2N, −a/N], [c, −b/2N]]; its binary form is [a, b, Nc].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl LatticeVector {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        LatticeVector { a, b, c }
    }

    pub fn neg(&self) -> Self {
        LatticeVector::new(-self.a, -self.b, -self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0
    }

    /// b² − 4Nac = −4N·Q(w)
    pub fn disc(&self, n: i64) -> i64 {
        self.b * self.b - 4 * n * self.a * self.c
    }

    /// Q(w) = (4Nac − b²)/(4N), exact.
    pub fn quad_value(&self, n: i64) -> Rational64 {
        Rational64::new(4 * n * self.a * self.c - self.b * self.b, 4 * n)
    }

    pub fn quad_value_f64(&self, n: i64) -> f64 {
        -(self.disc(n) as f64) / (4.0 * n as f64)
    }

    pub fn coset(&self, n: i64) -> i64 {
        self.b.rem_euclid(2 * n)
    }

    pub fn in_lattice(&self, n: i64) -> bool {
        self.b.rem_euclid(2 * n) == 0
    }

    /// Integer matrix 2N·w = [[b, −2a], [2Nc, −b]].
    pub fn scaled_matrix(&self, n: i64) -> Mat2 {
        Mat2::new(self.b, -2 * self.a, 2 * n * self.c, -self.b)
    }

    /// Inverse of [`scaled_matrix`]; `None` if the matrix is not of that shape.
    pub fn from_scaled_matrix(m: &Mat2, n: i64) -> Option<Self> {
        if m.a != -m.d || m.b % 2 != 0 || m.c % (2 * n) != 0 {
            return None;
        }
        Some(LatticeVector::new(-m.b / 2, m.a, m.c / (2 * n)))
    }

    /// γ·w·γ⁻¹ for γ ∈ SL₂(ℤ); `None` when the result leaves L♯ (possible outside Γ₀(N)).
    pub fn conjugate(&self, g: &Mat2, n: i64) -> Option<Self> {
        let m = *g * self.scaled_matrix(n) * g.adj();
        Self::from_scaled_matrix(&m, n)
    }

    /// Bilinear form (w, w') with Q(w) = (w, w)/2.
    pub fn pairing(&self, o: &LatticeVector, n: i64) -> Rational64 {
        Rational64::new(2 * n * (self.a * o.c + o.a * self.c) - self.b * o.b, 2 * n)
    }
}

/// A point x + iy of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if y > 0.0 && x.is_finite() && y.is_finite() {
            Ok(UpperHalfPoint { x, y })
        } else {
            Err(Error::InvalidParameter(format!("point {x} + {y}i is not in the upper half-plane")))
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn act(self, g: &Mat2) -> Self {
        let w = g.act(self.to_complex());
        UpperHalfPoint { x: w.re, y: w.im }
    }

    /// Hyperbolic distance.
    pub fn distance(self, o: UpperHalfPoint) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * self.y * o.y);
        arg.max(1.0).acosh()
    }
}

/// z(w) = (b + i√(4N Q(w)))/(2Nc), after replacing w by −w when c < 0.
pub fn point_of_vector(w: &LatticeVector, n: i64) -> Result<UpperHalfPoint> {
    let d = w.disc(n);
    if d >= 0 {
        return Err(Error::NotPositiveLine { a: w.a, b: w.b, c: w.c, q: w.quad_value_f64(n) });
    }
    let w = if w.c < 0 { w.neg() } else { *w };
    if w.c == 0 {
        return Err(Error::Degenerate { a: w.a, b: w.b, c: w.c });
    }
    let den = 2.0 * n as f64 * w.c as f64;
    Ok(UpperHalfPoint { x: w.b as f64 / den, y: ((-d) as f64).sqrt() / den })
}

/// Coordinates (a, b, c) of the unit positive vector w(z) = (1/(√N y))[[−x, |z|²], [−1, x]].
pub fn vector_of_point(z: UpperHalfPoint, n: i64) -> [f64; 3] {
    let s = (n as f64).sqrt() / z.y;
    [-s * z.norm_sqr(), -2.0 * s * z.x, -s / n as f64]
}

/// Q of a real vector in (a, b, c) coordinates.
pub fn quad_value_real(v: [f64; 3], n: i64) -> f64 {
    v[0] * v[2] - v[1] * v[1] / (4.0 * n as f64)
}
