//! Modular and elementary number-theoretic utilities.
//!
//! Everything here is exact integer arithmetic on `u64`/`i128`; the moduli
//! used throughout the crate stay below ~10^7, so intermediate products fit
//! comfortably.

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A residue class value mod q, kept reduced to `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduce an arbitrary signed integer mod q.
    pub fn new(x: i64, q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        Residue {
            value: x.rem_euclid(q as i64) as u64,
            modulus: q,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The sign-normalized representative min(v, q - v) of the pair {v, -v}.
    pub fn normalized(&self) -> u64 {
        normalize_sign(self.value as i64, self.modulus)
    }
}

/// Euler's totient phi(q) = |Z_q^x|, by trial-division factorization.
pub fn totient(q: u64) -> u64 {
    assert!(q >= 1);
    let mut n = q;
    let mut phi = q;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// The representative set t(q) of Z_q^x under negation: one element per pair
/// {t, -t}, each taken in `[1, q/2]` and listed in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRepresentatives {
    pub q: u64,
    pub reps: Vec<u64>,
}

/// Compute t(q). Errors for q < 3, where phi(q) is odd and no negation-free
/// representative set exists.
pub fn unit_representatives(q: u64) -> Result<UnitRepresentatives> {
    if q < 3 {
        return Err(Error::UnitRepresentativesUndefined(q));
    }
    let reps: Vec<u64> = (1..=q / 2).filter(|&t| t.gcd(&q) == 1).collect();
    debug_assert_eq!(2 * reps.len() as u64, totient(q));
    Ok(UnitRepresentatives { q, reps })
}

/// min(x mod q, q - x mod q): the canonical representative of {x, -x} mod q,
/// always in `[0, floor(q/2)]`.
pub fn normalize_sign(x: i64, q: u64) -> u64 {
    assert!(q >= 1);
    let r = x.rem_euclid(q as i64) as u64;
    r.min(q - r)
}

/// All divisors of q in increasing order.
pub fn divisors(q: u64) -> Vec<u64> {
    assert!(q >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= q {
        if q % d == 0 {
            small.push(d);
            if d != q / d {
                large.push(q / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a >= 0 {
            (a, 1, 0)
        } else {
            (-a, -1, 0)
        }
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Inverse of a mod m, if gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Deterministic primality by trial division; fine for the magnitudes here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_values() {
        // counted by brute force over residues coprime to q
        let brute = |q: u64| (1..=q).filter(|x| x.gcd(&q) == 1).count() as u64;
        assert_eq!(totient(1), 1);
        assert_eq!(totient(7), 6);
        assert_eq!(totient(12), 4);
        for q in 1..200 {
            assert_eq!(totient(q), brute(q), "phi({q})");
        }
    }

    #[test]
    fn unit_reps_examples() {
        assert_eq!(unit_representatives(7).unwrap().reps, vec![1, 2, 3]);
        assert_eq!(unit_representatives(12).unwrap().reps, vec![1, 5]);
        assert_eq!(unit_representatives(3).unwrap().reps, vec![1]);
        assert!(unit_representatives(2).is_err());
        assert!(unit_representatives(1).is_err());
    }

    #[test]
    fn unit_reps_cover_units_exactly_once() {
        for q in 3..120u64 {
            let reps = unit_representatives(q).unwrap().reps;
            assert_eq!(2 * reps.len() as u64, totient(q));
            // every unit lands on exactly one representative after sign normalization
            for m in 1..q {
                if m.gcd(&q) == 1 {
                    let nm = normalize_sign(m as i64, q);
                    assert!(reps.binary_search(&nm).is_ok(), "q={q} m={m}");
                }
            }
            assert!(reps.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn normalize_sign_examples() {
        assert_eq!(normalize_sign(9, 11), 2);
        assert_eq!(normalize_sign(0, 5), 0);
        assert_eq!(normalize_sign(6, 12), 6);
        for q in 1..40u64 {
            for x in -50i64..50 {
                let n = normalize_sign(x, q);
                assert_eq!(n, normalize_sign(-x, q));
                assert_eq!(n, normalize_sign(x + q as i64, q));
                assert!(n <= q / 2);
            }
        }
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(11), vec![1, 11]);
    }

    #[test]
    fn extended_gcd_bezout() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, x, y) = extended_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, (a.unsigned_abs() as i128).gcd(&(b.unsigned_abs() as i128)));
            }
        }
    }

    #[test]
    fn mod_inverse_works() {
        assert_eq!(mod_inverse(3, 11), Some(4));
        assert_eq!(mod_inverse(2, 4), None);
        for m in 2..60u64 {
            for a in 1..m {
                if let Some(inv) = mod_inverse(a, m) {
                    assert_eq!(a * inv % m, 1);
                }
            }
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }
}
