//! Integer 2×2 matrices and the Möbius action on the upper half-plane.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::ops::Mul;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Mat2 = Mat2 { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Mat2 = Mat2 { a: 1, b: 1, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn t_pow(k: i64) -> Self {
        Mat2::new(1, k, 0, 1)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Adjugate; equals the inverse when det = 1.
    pub fn adj(&self) -> Self {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(&self) -> Self {
        debug_assert_eq!(self.det(), 1);
        self.adj()
    }

    pub fn neg(&self) -> Self {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn in_gamma0(&self, level: i64) -> bool {
        self.det() == 1 && self.c.rem_euclid(level) == 0
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        let num = z * self.a as f64 + self.b as f64;
        let den = z * self.c as f64 + self.d as f64;
        num / den
    }

    /// cτ + d
    pub fn automorphy(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
