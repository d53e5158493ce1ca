//! Γ₀(N): coset representatives, reduction to the standard fundamental
//! domain, equivalence of lattice vectors, stabilizers, cusps and
//! Atkin–Lehner matrices.

use crate::error::{Error, Result};
use crate::lattice::matrix::Mat2;
use crate::lattice::vector::{point_of_vector, LatticeVector, UpperHalfPoint};
use crate::ntheory::arith::{divisors, ext_gcd, gcd, prime_divisors};
use num_rational::Rational64;
use serde::Serialize;

const TIE: f64 = 1e-11;

/// Index [SL₂(ℤ) : Γ₀(N)] = N Π_{p|N}(1 + 1/p).
pub fn index_r(n: i64) -> i64 {
    prime_divisors(n as u64)
        .into_iter()
        .fold(n, |acc, p| acc / p as i64 * (p as i64 + 1))
}

/// Complete a coprime bottom row (c, d) to a matrix of SL₂(ℤ).
pub fn complete_bottom_row(c: i64, d: i64) -> Mat2 {
    let (g, x, y) = ext_gcd(d, c);
    debug_assert_eq!(g, 1);
    // a d − b c = 1 with a = x, b = −y
    Mat2::new(x, -y, c, d)
}

/// Canonical representative of (c : d) in ℙ¹(ℤ/N).
pub fn p1_canonical(c: i64, d: i64, n: i64) -> (i64, i64) {
    let mut best = (n, n);
    for u in 1..n.max(2) {
        if gcd(u, n) != 1 {
            continue;
        }
        let cand = ((u * c).rem_euclid(n), (u * d).rem_euclid(n));
        if cand < best {
            best = cand;
        }
    }
    if n == 1 {
        (0, 0)
    } else {
        best
    }
}

/// Right coset representatives γ_j with SL₂(ℤ) = ⊔ Γ₀(N) γ_j, indexed by ℙ¹(ℤ/N).
pub fn gamma0_coset_reps(n: i64) -> Vec<Mat2> {
    if n == 1 {
        return vec![Mat2::IDENTITY];
    }
    let mut classes: Vec<(i64, i64)> = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c, d), n) != 1 {
                continue;
            }
            let k = p1_canonical(c, d, n);
            if !classes.contains(&k) {
                classes.push(k);
            }
        }
    }
    classes.sort();
    classes
        .into_iter()
        .map(|(c, d)| {
            if c == 0 {
                // the class of (0 : 1) is Γ₀(N) itself
                return Mat2::IDENTITY;
            }
            // lift to a coprime pair congruent mod N
            let mut d0 = d;
            while gcd(c, d0) != 1 {
                d0 += n;
            }
            complete_bottom_row(c, d0)
        })
        .collect()
}

/// Reduce z into the standard fundamental domain: returns (z₀, g) with g z = z₀,
/// |Re z₀| ≤ 1/2, |z₀| ≥ 1, preferring Re z₀ = −1/2 and Re z₀ ≤ 0 on |z₀| = 1.
pub fn reduce_to_fundamental_domain(z: UpperHalfPoint) -> (UpperHalfPoint, Mat2) {
    let mut g = Mat2::IDENTITY;
    let mut w = z;
    for _ in 0..10_000 {
        let k = (w.x + 0.5 - TIE).floor();
        if k != 0.0 {
            let t = Mat2::t_pow(-(k as i64));
            w = w.act(&t);
            g = t * g;
        }
        let r2 = w.norm_sqr();
        if r2 < 1.0 - TIE {
            w = w.act(&Mat2::S);
            g = Mat2::S * g;
            continue;
        }
        if (r2 - 1.0).abs() <= TIE && w.x > TIE {
            w = w.act(&Mat2::S);
            g = Mat2::S * g;
        }
        break;
    }
    // snap the real part to the closed boundary choice
    if (w.x - 0.5).abs() <= TIE {
        let t = Mat2::t_pow(-1);
        w = w.act(&t);
        g = t * g;
    }
    (w, g)
}

/// Elements of SL₂(ℤ) fixing a reduced point (±I always; ±S at i; six at ρ).
pub fn stabilizer_of_reduced(z: UpperHalfPoint) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let m = Mat2::new(a, b, c, d);
                    if m.det() != 1 {
                        continue;
                    }
                    let w = z.act(&m);
                    if (w.x - z.x).abs() < 1e-9 && (w.y - z.y).abs() < 1e-9 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Some γ ∈ Γ₀(N) with γ w₁ γ⁻¹ = w₂, or `None`.
pub fn gamma0_equivalent(w1: &LatticeVector, w2: &LatticeVector, n: i64) -> Result<Option<Mat2>> {
    let (q1, q2) = (w1.quad_value(n), w2.quad_value(n));
    if q1 != q2 {
        return Err(Error::NormMismatch(q1.to_string(), q2.to_string()));
    }
    let z1 = point_of_vector(w1, n)?;
    let z2 = point_of_vector(w2, n)?;
    let (r1, g1) = reduce_to_fundamental_domain(z1);
    let (r2, g2) = reduce_to_fundamental_domain(z2);
    if (r1.x - r2.x).abs() > 1e-8 || (r1.y - r2.y).abs() > 1e-8 {
        return Ok(None);
    }
    for s in stabilizer_of_reduced(r1) {
        let gamma = g2.inverse() * s * g1;
        if !gamma.in_gamma0(n) {
            continue;
        }
        if w1.conjugate(&gamma, n) == Some(*w2) {
            return Ok(Some(gamma));
        }
    }
    Ok(None)
}

/// |Γ_w| for the stabilizer of w in Γ₀(N) (including ±I).
pub fn stabilizer_order(w: &LatticeVector, n: i64) -> Result<usize> {
    let z = point_of_vector(w, n)?;
    let (r, g) = reduce_to_fundamental_domain(z);
    Ok(stabilizer_of_reduced(r)
        .into_iter()
        .map(|s| g.inverse() * s * g)
        .filter(|m| m.in_gamma0(n) && w.conjugate(m, n) == Some(*w))
        .count())
}

/// Cusp P = p/q of Γ₀(N) in lowest terms, with q ≥ 0 and ∞ = 1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cusp {
    pub p: i64,
    pub q: i64,
}

impl Cusp {
    pub const INFINITY: Cusp = Cusp { p: 1, q: 0 };
    pub const ZERO: Cusp = Cusp { p: 0, q: 1 };

    pub fn new(p: i64, q: i64) -> Self {
        let g = gcd(p, q).max(1);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Cusp { p, q }
    }

    /// The divisor gcd(q, N) labelling the Γ₀(N)-class of the cusp (N squarefree).
    pub fn label(&self, n: i64) -> i64 {
        gcd(self.q, n)
    }

    /// Some σ ∈ SL₂(ℤ) with σ(P) = ∞.
    pub fn to_infinity(&self) -> Mat2 {
        if self.q == 0 {
            return Mat2::IDENTITY;
        }
        // bottom row (q, −p), completed
        complete_bottom_row(self.q, -self.p)
    }
}

/// An isotropic line, given by a primitive direction with Q = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsotropicLine {
    pub direction: LatticeVector,
    pub cusp: Cusp,
    pub cusp_label: i64,
    pub width: Rational64,
    pub beta: Rational64,
    pub funke_epsilon: Rational64,
}

/// Cusp of an isotropic vector: the image of its nilpotent matrix.
pub fn cusp_of_isotropic(w: &LatticeVector, n: i64) -> Result<Cusp> {
    if w.disc(n) != 0 || w.is_zero() {
        return Err(Error::NotIsotropic { a: w.a, b: w.b, c: w.c });
    }
    // first column (b/2N, c), else second column (−a/N, −b/2N)
    if w.c != 0 {
        Ok(Cusp::new(w.b, 2 * n * w.c))
    } else if w.b != 0 {
        Ok(Cusp::new(2 * w.a, w.b))
    } else {
        Ok(Cusp::INFINITY)
    }
}

/// Isotropic direction attached to a cusp p/q: the nilpotent [[pq, −p²], [q², −pq]].
pub fn isotropic_of_cusp(cusp: Cusp, n: i64) -> LatticeVector {
    // matrix entries: b/2N = pq, −a/N = −p², c = q² (scaled to integers)
    let (p, q) = (cusp.p, cusp.q);
    let v = LatticeVector::new(n * p * p, 2 * n * p * q, q * q);
    let g = gcd(gcd(v.a, v.b), v.c).max(1);
    LatticeVector::new(v.a / g, v.b / g, v.c / g)
}

/// (κ_ℓ, β_ℓ, ε_ℓ = κ_ℓ/β_ℓ) for the isotropic line through `direction`.
pub fn cusp_constants(n: i64, direction: &LatticeVector) -> Result<IsotropicLine> {
    let cusp = cusp_of_isotropic(direction, n)?;
    let sigma = cusp.to_infinity();
    // width: least m with σ⁻¹ T^m σ ∈ Γ₀(N)
    let mut width = 0;
    for m in 1..=n {
        if (sigma.inverse() * Mat2::t_pow(m) * sigma).in_gamma0(n) {
            width = m;
            break;
        }
    }
    // primitive vector of L on the line: t·direction with t·b ≡ 0 mod 2N
    let g = gcd(gcd(direction.a, direction.b), direction.c).max(1);
    let prim = LatticeVector::new(direction.a / g, direction.b / g, direction.c / g);
    let mut t = 1;
    while (t * prim.b).rem_euclid(2 * n) != 0 {
        t += 1;
    }
    let x0 = LatticeVector::new(t * prim.a, t * prim.b, t * prim.c);
    // σ X σ⁻¹ = [[0, β], [0, 0]]; in scaled coordinates the (1,2) entry is −2a'
    let m = sigma * x0.scaled_matrix(n) * sigma.adj();
    debug_assert!(m.a == 0 && m.c == 0 && m.d == 0);
    let beta = Rational64::new(m.b.abs(), 2 * n);
    let width = Rational64::from_integer(width);
    Ok(IsotropicLine {
        direction: prim,
        cusp,
        cusp_label: cusp.label(n),
        width,
        beta,
        funke_epsilon: width / beta,
    })
}

/// Atkin–Lehner matrix W_M = [[M x, y], [N z, M w]] of determinant M, for M ∥ N.
pub fn atkin_lehner(m: i64, n: i64) -> Result<Mat2> {
    if n % m != 0 || gcd(m, n / m) != 1 {
        return Err(Error::InvalidParameter(format!("{m} is not a Hall divisor of {n}")));
    }
    // M w − (N/M) y = 1 with x = z = 1
    let (g, w, y) = ext_gcd(m, n / m);
    debug_assert_eq!(g, 1);
    let mat = Mat2::new(m, -y, n, m * w);
    debug_assert_eq!(mat.det(), m);
    Ok(mat)
}

/// W w W⁻¹ for an Atkin–Lehner matrix, rescaled to L♯ coordinates.
pub fn atkin_lehner_conjugate(w: &LatticeVector, wm: &Mat2, n: i64) -> Option<LatticeVector> {
    let m = *wm * w.scaled_matrix(n) * wm.adj();
    let det = wm.det();
    if m.a % det != 0 || m.b % det != 0 || m.c % det != 0 {
        return None;
    }
    LatticeVector::from_scaled_matrix(&Mat2::new(m.a / det, m.b / det, m.c / det, m.d / det), n)
}

/// Hall divisors M ∥ N (all divisors, N squarefree).
pub fn hall_divisors(n: i64) -> Vec<i64> {
    divisors(n as u64).into_iter().map(|d| d as i64).collect()
}

/// Minimal height over the closure of ∪ γ_j F for the coset representatives.
pub fn min_height(n: i64) -> f64 {
    let reps = gamma0_coset_reps(n);
    let mut ymin = f64::INFINITY;
    // sample the lower boundary arc of F
    let k = 400;
    for g in &reps {
        for i in 0..=k {
            let theta = std::f64::consts::PI / 3.0 + (std::f64::consts::PI / 3.0) * i as f64 / k as f64;
            let z = UpperHalfPoint { x: theta.cos(), y: theta.sin() };
            ymin = ymin.min(z.act(g).y);
        }
    }
    ymin
}
