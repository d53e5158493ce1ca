//! Integer arithmetic: Kronecker symbol, Möbius, Euler phi, divisors,
//! fundamental discriminants.

use num_integer::Integer;

/// Kronecker symbol `(a/n)` for arbitrary integers, including `n <= 0` and even `n`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut res = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            res = -res;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        if matches!(a.rem_euclid(8), 3 | 5) {
            res = -res;
        }
    }
    // Jacobi symbol for odd positive n.
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn moebius(n: u64) -> i64 {
    assert!(n >= 1, "moebius needs n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi needs n >= 1");
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors needs n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d <= 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let u = d as u64;
    match d % 4 {
        1 => is_squarefree(u),
        0 => {
            let q = u / 4;
            matches!(q % 4, 2 | 3) && is_squarefree(q)
        }
        _ => false,
    }
}

pub fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `Some(s)` with `s >= 0` and `s*s == n`, if `n` is a perfect square.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    let r = isqrt(n);
    (r >= 0 && r * r == n).then_some(r)
}

/// Whether `m` is a square modulo `modulus`, by brute force over residues.
pub fn is_square_mod(m: i64, modulus: i64) -> bool {
    (0..modulus).any(|t| (t * t - m).rem_euclid(modulus) == 0)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd4(a: i64, b: i64, c: i64, d: i64) -> i64 {
    a.gcd(&b).gcd(&c).gcd(&d)
}

/// Extended Euclid: returns (g, x, y) with a x + b y = g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// σ_k(n) = Σ_{d|n} d^k for real k.
pub fn sigma_real(n: u64, k: f64) -> f64 {
    divisors(n).into_iter().map(|d| (d as f64).powf(k)).sum()
}
