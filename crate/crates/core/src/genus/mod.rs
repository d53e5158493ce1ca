//! The genus character χ_Δ on lattice vectors of level N.

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Level};
use crate::ntheory::arith::{divisors, gcd, gcd4, is_square_mod, kronecker};
use crate::ntheory::FundamentalDiscriminant;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::RwLock;

/// A twist (Δ, r) at level N with r² ≡ Δ (mod 4N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TwistData {
    pub delta: FundamentalDiscriminant,
    pub twist_r: i64,
    pub level: Level,
}

impl TwistData {
    pub fn new(level: i64, delta: i64, twist_r: i64) -> Result<Self> {
        let level = Level::new(level)?;
        let delta_fd = FundamentalDiscriminant::new(delta)?;
        let n = level.get();
        if (twist_r * twist_r - delta).rem_euclid(4 * n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "r² ≢ Δ (mod 4N): {twist_r}² − {delta} is not divisible by {}",
                4 * n
            )));
        }
        Ok(TwistData { delta: delta_fd, twist_r: twist_r.rem_euclid(2 * n), level })
    }

    pub fn n(&self) -> i64 {
        self.level.get()
    }

    pub fn delta(&self) -> i64 {
        self.delta.value()
    }

    /// The coset r·μ of L♯/L carrying the twisted vectors for μ.
    pub fn twisted_coset(&self, mu: i64) -> i64 {
        (self.twist_r * mu).rem_euclid(2 * self.n())
    }
}

fn support_ok(w: &LatticeVector, n: i64, delta: i64) -> bool {
    let d = w.disc(n);
    d % delta == 0 && gcd4(w.a, w.b, w.c, delta) == 1 && is_square_mod(d / delta, 4 * n)
}

/// Values N₁a x² + b xy + N₂c y² over the splittings N = N₁N₂ and the box
/// |x|, |y| ≤ Δ, in shells of growing max(|x|, |y|).
fn represented_values(w: &LatticeVector, n: i64, delta: i64) -> impl Iterator<Item = i64> + '_ {
    let splits: Vec<(i64, i64)> = divisors(n as u64).into_iter().map(|d| (d as i64, n / d as i64)).collect();
    splits.into_iter().flat_map(move |(n1, n2)| {
        (0..=delta).flat_map(move |s| {
            (-s..=s).flat_map(move |x| {
                let ys: Vec<i64> = if x.abs() == s { (-s..=s).collect() } else { vec![-s, s] };
                ys.into_iter().map(move |y| n1 * w.a * x * x + w.b * x * y + n2 * w.c * y * y)
            })
        })
    })
}

/// χ_Δ(w): the Kronecker symbol (Δ/m) at a represented value m prime to Δ,
/// or 0 off the support.
pub fn chi_delta(w: &LatticeVector, twist: &TwistData) -> Result<i32> {
    let (n, delta) = (twist.n(), twist.delta());
    if delta == 1 {
        return Ok(1);
    }
    if !support_ok(w, n, delta) {
        return Ok(0);
    }
    represented_values(w, n, delta)
        .find(|&m| m != 0 && gcd(m, delta) == 1)
        .map(|m| kronecker(delta, m))
        .ok_or(Error::RepresentationSearch { a: w.a, b: w.b, c: w.c, delta })
}

/// All distinct Kronecker values over every coprime value found in the search box.
pub fn chi_delta_all_values(w: &LatticeVector, twist: &TwistData) -> Vec<i32> {
    let (n, delta) = (twist.n(), twist.delta());
    if delta == 1 || !support_ok(w, n, delta) {
        return Vec::new();
    }
    let mut vals: Vec<i32> = represented_values(w, n, delta)
        .filter(|&m| m != 0 && gcd(m, delta) == 1)
        .map(|m| kronecker(delta, m))
        .collect();
    vals.sort();
    vals.dedup();
    vals
}

/// Canonical representative of w + ΔL: (a mod Δ, b mod 2NΔ, c mod Δ).
pub fn coset_key(w: &LatticeVector, twist: &TwistData) -> (i64, i64, i64) {
    let (n, delta) = (twist.n(), twist.delta());
    (w.a.rem_euclid(delta), w.b.rem_euclid(2 * n * delta), w.c.rem_euclid(delta))
}

/// χ_Δ on L^{Δ,♯}/L^Δ, evaluated at the canonical representative.
pub fn chi_delta_coset(w: &LatticeVector, twist: &TwistData) -> Result<i32> {
    let (a, b, c) = coset_key(w, twist);
    chi_delta(&LatticeVector::new(a, b, c), twist)
}

/// χ_Δ with a shared memo on cosets of ΔL.
#[derive(Debug)]
pub struct GenusCharacter {
    pub twist: TwistData,
    memo: RwLock<HashMap<(i64, i64, i64), i32>>,
}

impl GenusCharacter {
    pub fn new(twist: TwistData) -> Self {
        GenusCharacter { twist, memo: RwLock::new(HashMap::new()) }
    }

    pub fn value(&self, w: &LatticeVector) -> Result<i32> {
        if self.twist.delta() == 1 {
            return Ok(1);
        }
        let key = coset_key(w, &self.twist);
        if let Some(&v) = self.memo.read().expect("memo poisoned").get(&key) {
            return Ok(v);
        }
        let v = chi_delta(&LatticeVector::new(key.0, key.1, key.2), &self.twist)?;
        self.memo.write().expect("memo poisoned").insert(key, v);
        Ok(v)
    }
}
