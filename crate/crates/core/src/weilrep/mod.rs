//! The metaplectic double cover of SL₂(ℤ) and the Weil representation ρ_L on
//! ℂ[L♯/L] = ℂ^{2N}.

use crate::lattice::Mat2;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::Mul;

/// e(x) = exp(2πix).
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Reference point for comparing square-root branches; chosen off every
/// branch cut of √(cτ + d).
const TAU0: Complex64 = Complex64 { re: 0.1234, im: 1.0 };

/// (g, φ) with φ(τ) = branch·√(cτ + d) (principal root).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetaplecticElement {
    pub matrix: Mat2,
    pub branch: i8,
}

impl MetaplecticElement {
    pub fn new(matrix: Mat2, branch: i8) -> Self {
        debug_assert_eq!(matrix.det(), 1);
        MetaplecticElement { matrix, branch: if branch < 0 { -1 } else { 1 } }
    }

    /// The principal lift (g, +√(cτ + d)).
    pub fn principal(matrix: Mat2) -> Self {
        Self::new(matrix, 1)
    }

    pub fn identity() -> Self {
        Self::principal(Mat2::IDENTITY)
    }

    pub fn s() -> Self {
        Self::principal(Mat2::S)
    }

    pub fn t() -> Self {
        Self::principal(Mat2::T)
    }

    /// The central element (I, −1).
    pub fn center() -> Self {
        Self::new(Mat2::IDENTITY, -1)
    }

    pub fn phi(&self, tau: Complex64) -> Complex64 {
        self.matrix.automorphy(tau).sqrt() * self.branch as f64
    }

    pub fn act(&self, tau: Complex64) -> Complex64 {
        self.matrix.act(tau)
    }

    fn branch_of(matrix: Mat2, value_at_tau0: Complex64) -> i8 {
        let principal = matrix.automorphy(TAU0).sqrt();
        if (value_at_tau0 - principal).norm() < (value_at_tau0 + principal).norm() {
            1
        } else {
            -1
        }
    }
}

impl Mul for MetaplecticElement {
    type Output = MetaplecticElement;
    /// (g₁, φ₁)(g₂, φ₂) = (g₁g₂, φ₁(g₂τ)φ₂(τ)).
    fn mul(self, o: MetaplecticElement) -> MetaplecticElement {
        let matrix = self.matrix * o.matrix;
        let value = self.phi(o.act(TAU0)) * o.phi(TAU0);
        MetaplecticElement { matrix, branch: MetaplecticElement::branch_of(matrix, value) }
    }
}

/// A dense n × n complex matrix acting on coset vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

impl RepMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        RepMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.entries[i * d.len() + i] = x;
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        m
    }

    pub fn scale(&self, c: Complex64) -> Self {
        RepMatrix { dim: self.dim, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// max |entry| of A − B.
    pub fn max_diff(&self, o: &RepMatrix) -> f64 {
        self.entries.iter().zip(&o.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |(A*A − I)_{ij}|.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_diff(&RepMatrix::identity(self.dim))
    }
}

impl Mul for &RepMatrix {
    type Output = RepMatrix;
    fn mul(self, o: &RepMatrix) -> RepMatrix {
        let n = self.dim;
        let mut m = RepMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.entries[i * n + j] += a * o.get(k, j);
                }
            }
        }
        m
    }
}

/// ρ(T) = diag e(Q(μ)), Q(μ) = −μ²/4N.
pub fn rho_t(level: i64) -> RepMatrix {
    rho_t_pow(level, 1)
}

pub fn rho_t_pow(level: i64, k: i64) -> RepMatrix {
    let d: Vec<Complex64> = (0..2 * level).map(|m| e(t_phase(level, m, k))).collect();
    RepMatrix::diagonal(&d)
}

/// k·Q(μ) mod 1, reduced exactly before conversion.
fn t_phase(level: i64, mu: i64, k: i64) -> f64 {
    let num = (-(mu * mu) as i128 * k as i128).rem_euclid(4 * level as i128);
    num as f64 / (4 * level) as f64
}

/// ρ(S)e_μ = e(1/8)/√(2N) Σ_{μ'} e(−(μ, μ')) e_{μ'} with (μ, μ') = −μμ'/2N.
pub fn rho_s(level: i64) -> RepMatrix {
    let n = (2 * level) as usize;
    let pref = e(0.125) / (n as f64).sqrt();
    let mut m = RepMatrix::zeros(n);
    for mu in 0..n {
        for mup in 0..n {
            let ph = ((mu * mup) as i64).rem_euclid(2 * level) as f64 / (2 * level) as f64;
            m.entries[mup * n + mu] = pref * e(ph);
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Letter {
    S,
    T(i64),
}

/// Word in S, T with product equal to g (as matrices), from the Euclidean
/// algorithm on the bottom row.
fn word_of(g: &Mat2) -> Vec<Letter> {
    let (mut a, mut b, mut c, mut d) = (g.a, g.b, g.c, g.d);
    let mut word = Vec::new();
    while c != 0 {
        // g = T^q S g'' with g'' = S⁻¹T^{−q} g
        let q = (a as f64 / c as f64).round() as i64;
        word.push(Letter::T(q));
        word.push(Letter::S);
        let (a1, b1) = (a - q * c, b - q * d);
        (a, b, c, d) = (c, d, -a1, -b1);
    }
    if a == 1 {
        word.push(Letter::T(b));
    } else {
        // −[[1, −b], [0, 1]] = S² T^{−b}
        word.extend([Letter::S, Letter::S, Letter::T(-b)]);
    }
    word
}

/// The Weil representation of one level with memoized generators.
#[derive(Debug, Clone)]
pub struct WeilRep {
    pub level: i64,
    s: RepMatrix,
    /// Scalar by which (I, −1) acts, computed as ρ(S)⁴.
    center_scalar: Complex64,
}

impl WeilRep {
    pub fn new(level: i64) -> Self {
        let s = rho_s(level);
        let s2 = &s * &s;
        let s4 = &s2 * &s2;
        let center_scalar = s4.get(0, 0);
        WeilRep { level, s, center_scalar }
    }

    pub fn dim(&self) -> usize {
        (2 * self.level) as usize
    }

    pub fn center_scalar(&self) -> Complex64 {
        self.center_scalar
    }

    pub fn rho_s(&self) -> &RepMatrix {
        &self.s
    }

    /// ρ(γ') for a metaplectic element.
    pub fn rho(&self, g: &MetaplecticElement) -> RepMatrix {
        let word = word_of(&g.matrix);
        let mut m = RepMatrix::identity(self.dim());
        let mut tau = TAU0;
        let mut phi = Complex64::new(1.0, 0.0);
        for letter in word.iter().rev() {
            match *letter {
                Letter::T(k) => {
                    m = &rho_t_pow(self.level, k) * &m;
                    tau += k as f64;
                }
                Letter::S => {
                    m = &self.s * &m;
                    phi *= tau.sqrt();
                    tau = -1.0 / tau;
                }
            }
        }
        if MetaplecticElement::branch_of(g.matrix, phi) != g.branch {
            m = m.scale(self.center_scalar);
        }
        m
    }

    /// (f|_{3/2,ρ}γ')(τ) = φ(τ)^{−3} ρ(γ')^{−1} f(γτ).
    pub fn slash_weight_threehalf<F>(&self, f: F, g: &MetaplecticElement, tau: Complex64) -> Vec<Complex64>
    where
        F: Fn(Complex64) -> Vec<Complex64>,
    {
        let fv = f(g.act(tau));
        let factor = g.phi(tau).powi(-3);
        self.rho(g).adjoint().apply(&fv).into_iter().map(|x| x * factor).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_word(rng: &mut rand::rngs::StdRng, len: usize) -> MetaplecticElement {
        let mut g = MetaplecticElement::identity();
        for _ in 0..len {
            let k = rng.gen_range(-3..=3);
            let step = if rng.gen_bool(0.5) {
                MetaplecticElement::s()
            } else {
                MetaplecticElement::principal(Mat2::t_pow(k))
            };
            g = g * step;
        }
        g
    }

    #[test]
    fn generators_level_one() {
        let t = rho_t(1);
        assert!((t.get(0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((t.get(1, 1) - e(-0.25)).norm() < 1e-15);
        let s = rho_s(1);
        let p = e(0.125) / 2f64.sqrt();
        assert!((s.get(0, 0) - p).norm() < 1e-15 && (s.get(1, 1) + p).norm() < 1e-15);
        assert!((s.get(0, 1) - p).norm() < 1e-15);
        for n in [1, 2, 6] {
            assert!(rho_t(n).unitarity_defect() < 1e-13);
            assert!(rho_s(n).unitarity_defect() < 1e-13);
        }
    }

    #[test]
    fn relations() {
        for n in [1, 2, 6] {
            let w = WeilRep::new(n);
            let s = w.rho(&MetaplecticElement::s());
            assert!(s.max_diff(w.rho_s()) < 1e-14);
            let st = &s * &rho_t(n);
            let st3 = &(&st * &st) * &st;
            let s2 = &s * &s;
            assert!(st3.max_diff(&s2) < 1e-12);
            // S² sends e_μ to a scalar multiple of e_{−μ}
            for mu in 0..2 * n as usize {
                let neg = (2 * n as usize - mu) % (2 * n as usize);
                let col: Vec<Complex64> = (0..2 * n as usize).map(|i| s2.get(i, mu)).collect();
                for (i, x) in col.iter().enumerate() {
                    if i != neg {
                        assert!(x.norm() < 1e-12);
                    }
                }
                assert!((col[neg].norm() - 1.0).abs() < 1e-12);
            }
            let c = w.center_scalar();
            assert!((c + 1.0).norm() < 1e-12, "center acts by {c}");
            assert!(w.rho(&MetaplecticElement::center()).max_diff(&RepMatrix::identity(2 * n as usize).scale(c)) < 1e-12);
            assert!(w.rho(&MetaplecticElement::identity()).max_diff(&RepMatrix::identity(2 * n as usize)) < 1e-15);
            // ρ(T) has order dividing 4N
            let t4n = rho_t_pow(n, 4 * n);
            assert!(t4n.max_diff(&RepMatrix::identity(2 * n as usize)) < 1e-15);
        }
    }

    #[test]
    fn two_factorizations_agree() {
        // [[1,0],[1,1]] = S⁻¹ T⁻¹ S as matrices; compare with the word algorithm up to the center
        let w = WeilRep::new(6);
        let g = MetaplecticElement::principal(Mat2::new(1, 0, 1, 1));
        let sinv = MetaplecticElement::s() * MetaplecticElement::s() * MetaplecticElement::s();
        let prod = sinv * MetaplecticElement::principal(Mat2::t_pow(-1)) * MetaplecticElement::s();
        assert_eq!(prod.matrix, g.matrix);
        let direct = &(&w.rho(&sinv) * &rho_t_pow(6, -1)) * w.rho_s();
        let expect = if prod.branch == g.branch { w.rho(&g) } else { w.rho(&g).scale(w.center_scalar()) };
        assert!(direct.max_diff(&expect) < 1e-12);
    }

    #[test]
    fn homomorphism_and_unitarity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [1, 6] {
            let w = WeilRep::new(n);
            for _ in 0..50 {
                let g1 = random_word(&mut rng, 5);
                let g2 = random_word(&mut rng, 5);
                assert!(w.rho(&g1).unitarity_defect() < 1e-11);
                let lhs = w.rho(&(g1 * g2));
                let rhs = &w.rho(&g1) * &w.rho(&g2);
                assert!(lhs.max_diff(&rhs) < 1e-11);
            }
        }
    }

    #[test]
    fn slash_is_right_action() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let w = WeilRep::new(6);
        let f = |tau: Complex64| -> Vec<Complex64> {
            (0..12).map(|m| (tau * (m as f64 + 1.0)).exp() * Complex64::new(0.3, m as f64) + tau.powi(2)).collect()
        };
        let tau = Complex64::new(0.0, 1.0);
        for _ in 0..20 {
            let g1 = random_word(&mut rng, 5);
            let g2 = random_word(&mut rng, 5);
            let lhs = w.slash_weight_threehalf(|t| w.slash_weight_threehalf(f, &g1, t), &g2, tau);
            let rhs = w.slash_weight_threehalf(f, &(g1 * g2), tau);
            let err = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm() / (1.0 + b.norm())).fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
        }
        // T acts by ρ(T)⁻¹ f(τ + 1); identity leaves a constant unchanged
        let ft = w.slash_weight_threehalf(f, &MetaplecticElement::t(), tau);
        let shifted = rho_t(6).adjoint().apply(&f(tau + 1.0));
        assert!(ft.iter().zip(&shifted).all(|(a, b)| (a - b).norm() < 1e-12));
        let e0 = |_: Complex64| {
            let mut v = vec![Complex64::new(0.0, 0.0); 12];
            v[0] = Complex64::new(1.0, 0.0);
            v
        };
        assert_eq!(w.slash_weight_threehalf(e0, &MetaplecticElement::identity(), tau), e0(tau));
    }
}
