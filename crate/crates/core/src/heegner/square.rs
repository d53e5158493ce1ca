//! Strata of negative norm with square discriminant: orbits, the boundary
//! counts δ_w at ∞, and the character sums over Γ_∞-orbits that make the
//! Green function vanish at the cusps.

use super::CosetTable;
use crate::error::{Error, Result};
use crate::genus::{GenusCharacter, TwistData};
use crate::lattice::{norm_matches_coset, Cusp, LatticeVector, Level};
use crate::ntheory::arith::exact_sqrt;
use num_rational::Rational64;
use serde::Serialize;

/// √D for D = −4Nn, if n < 0 and D is a perfect square.
pub fn square_root_disc(level: i64, n: Rational64) -> Option<i64> {
    let d = -n * Rational64::from_integer(4 * level);
    if !d.is_integer() || d.to_integer() <= 0 {
        return None;
    }
    exact_sqrt(d.to_integer())
}

fn checked_root(level: Level, mu: i64, n: Rational64) -> Result<i64> {
    if !norm_matches_coset(n, mu, level) {
        return Err(Error::InvalidParameter(format!("norm {n} does not match coset {mu} mod 1")));
    }
    square_root_disc(level.get(), n)
        .ok_or_else(|| Error::InvalidParameter(format!("−4Nn is not a positive square for n = {n}")))
}

/// Γ₀(N)-orbit representatives of L_μ[n] when −4Nn = s² > 0.
///
/// Every level-one vector of discriminant s² is SL₂(ℤ)-conjugate to exactly
/// one (A, s, 0) with 0 ≤ A < s, whose stabilizer is ±I.
pub fn square_orbits(level: Level, mu: i64, n: Rational64) -> Result<Vec<LatticeVector>> {
    let nn = level.get();
    let mu = mu.rem_euclid(2 * nn);
    let s = checked_root(level, mu, n)?;
    let table = CosetTable::new(nn);
    let mut out = Vec::new();
    for a in 0..s {
        let f = LatticeVector::new(a, s, 0);
        for g in &table.reps {
            let fj = f.conjugate(g, 1).expect("level one conjugation is closed");
            if fj.c % nn == 0 && (fj.b - mu).rem_euclid(2 * nn) == 0 {
                out.push(LatticeVector::new(fj.a, fj.b, fj.c / nn));
            }
        }
    }
    out.sort_by_key(|w| (w.c, w.b, w.a));
    Ok(out)
}

/// The cusps p/q with N c p² − b p q + a q² = 0, i.e. the isotropic lines orthogonal to w.
pub fn orthogonal_cusps(w: &LatticeVector, level: i64) -> Vec<Cusp> {
    let d = w.disc(level);
    let s = match exact_sqrt(d) {
        Some(s) if d > 0 => s,
        _ => return Vec::new(),
    };
    if w.c == 0 {
        return vec![Cusp::INFINITY, Cusp::new(w.a, w.b)];
    }
    vec![Cusp::new(w.b + s, 2 * level * w.c), Cusp::new(w.b - s, 2 * level * w.c)]
}

/// δ_w: the number of isotropic lines in w^⊥ that are Γ₀(N)-equivalent to ℓ_∞.
pub fn delta_w(w: &LatticeVector, level: i64) -> usize {
    orthogonal_cusps(w, level).iter().filter(|c| c.q % level == 0).count()
}

/// Γ_{ℓ∞}\L_{μ,ℓ∞}[n]: the oriented vectors (a, s, 0) of L_μ orthogonal to
/// ℓ_∞, with a mod s. Empty unless s ≡ μ (mod 2N).
pub fn boundary_reps(level: Level, mu: i64, n: Rational64) -> Result<Vec<LatticeVector>> {
    let nn = level.get();
    let s = checked_root(level, mu.rem_euclid(2 * nn), n)?;
    if (s - mu).rem_euclid(2 * nn) != 0 {
        return Ok(Vec::new());
    }
    Ok((0..s).map(|a| LatticeVector::new(a, s, 0)).collect())
}

/// Both sides of the orbit-counting identity for one square stratum.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaCosetReport {
    pub level: i64,
    pub mu: i64,
    pub n: Rational64,
    pub sqrt_disc: i64,
    pub orbit_count: usize,
    /// Σ δ_w over Γ₀(N)\L_μ[n].
    pub delta_sum: usize,
    /// |Γ_∞\L_{μ,ℓ∞}[n]| + |Γ_∞\L_{−μ,ℓ∞}[n]|.
    pub boundary_count: usize,
    pub two_mu_in_lattice: bool,
    /// Whether Σ δ_w = √D (the closed form claimed when 2μ ∉ L).
    pub closed_form_holds: bool,
    pub identity_holds: bool,
}

pub fn lemmacoset_check(level: Level, mu: i64, n: Rational64) -> Result<LemmaCosetReport> {
    let nn = level.get();
    let mu = mu.rem_euclid(2 * nn);
    let orbits = square_orbits(level, mu, n)?;
    let s = checked_root(level, mu, n)?;
    let delta_sum = orbits.iter().map(|w| delta_w(w, nn)).sum();
    let boundary_count = boundary_reps(level, mu, n)?.len() + boundary_reps(level, -mu, n)?.len();
    Ok(LemmaCosetReport {
        level: nn,
        mu,
        n,
        sqrt_disc: s,
        orbit_count: orbits.len(),
        delta_sum,
        boundary_count,
        two_mu_in_lattice: (2 * mu).rem_euclid(2 * nn) == 0,
        closed_form_holds: delta_sum as i64 == s,
        identity_holds: delta_sum == boundary_count,
    })
}

/// Σ χ_Δ(w) over Γ_{ℓ∞}\L_{rμ,ℓ∞}[Δn].
pub fn charsum(twist: &TwistData, n: Rational64, mu: i64) -> Result<i64> {
    let chi = GenusCharacter::new(*twist);
    let reps = boundary_reps(twist.level, twist.twisted_coset(mu), n * twist.delta())?;
    reps.iter().try_fold(0i64, |acc, w| Ok(acc + chi.value(w)? as i64))
}

/// α_{Δ,r}(n, μ, ∞) = Σ χ_Δ(w) δ_w over Γ₀(N)\L_{rμ}[Δn].
pub fn alpha_coefficient(twist: &TwistData, n: Rational64, mu: i64) -> Result<i64> {
    let chi = GenusCharacter::new(*twist);
    let nn = twist.n();
    let orbits = square_orbits(twist.level, twist.twisted_coset(mu), n * twist.delta())?;
    orbits
        .iter()
        .try_fold(0i64, |acc, w| Ok(acc + chi.value(w)? as i64 * delta_w(w, nn) as i64))
}

/// Strata (n, μ) with n < 0, 4N|n| ≤ dmax and −4NΔn a perfect square.
pub fn twisted_square_strata(twist: &TwistData, dmax: i64) -> Vec<(Rational64, i64)> {
    let nn = twist.n();
    let delta = twist.delta();
    let mut out = Vec::new();
    for s in 1..=crate::ntheory::arith::isqrt(dmax * delta) {
        // −4N·Δn = s²
        let n = Rational64::new(-s * s, 4 * nn * delta);
        for mu in 0..2 * nn {
            if norm_matches_coset(n, mu, twist.level) && norm_matches_coset(n * delta, twist.twisted_coset(mu), twist.level) {
                out.push((n, mu));
            }
        }
    }
    out
}

/// Untwisted square strata (n, μ) with 0 < −4Nn ≤ dmax.
pub fn square_strata(level: Level, dmax: i64) -> Vec<(Rational64, i64)> {
    let nn = level.get();
    let mut out = Vec::new();
    for s in 1..=crate::ntheory::arith::isqrt(dmax) {
        let n = Rational64::new(-s * s, 4 * nn);
        for mu in 0..2 * nn {
            if norm_matches_coset(n, mu, level) {
                out.push((n, mu));
            }
        }
    }
    out
}
