//! Exact counting of congruence-lattice vectors by one-norm.
//!
//! For a modulus q and weights s = (s_1, ..., s_n), the quantity of interest
//! is
//!
//!   N(k) = #{ a in Z^n : |a_1| + ... + |a_n| = k,  a_1 s_1 + ... + a_n s_n ≡ 0 (mod q) }
//!
//! computed for all k up to a cutoff K at once. Naive per-k enumeration is
//! O(k^{n-1}) and hopeless at the cutoffs the isospectrality decision needs,
//! so this module runs a dynamic program over coordinates with state
//! (one-norm, residue class mod q). One coordinate with weight s maps
//!
//!   new(k, m) = sum_{j >= 0} [ old(k-j, m - j s) + old(k-j, m + j s) ] - old(k, m)
//!
//! and the two sums telescope along diagonals, giving O(K q) per coordinate.
//!
//! Integer width is selected up front from a proven bound on every
//! intermediate value (twice the cross-polytope ball count |{a : |a|_1 <= K}|),
//! so the u64 and u128 fast paths are exact wherever they are chosen, with
//! BigUint as the general fallback.

use num_bigint::BigUint;
use num_traits::{One, Zero};

trait DpCell: Clone + PartialEq + Send + Sync {
    fn dp_zero() -> Self;
    fn dp_one() -> Self;
    fn set_sum(&mut self, a: &Self, b: &Self);
    fn dp_sub(&mut self, other: &Self);
    fn to_biguint(&self) -> BigUint;
}

macro_rules! impl_dpcell_prim {
    ($t:ty) => {
        impl DpCell for $t {
            fn dp_zero() -> Self {
                0
            }
            fn dp_one() -> Self {
                1
            }
            fn set_sum(&mut self, a: &Self, b: &Self) {
                *self = a + b;
            }
            fn dp_sub(&mut self, other: &Self) {
                *self -= other;
            }
            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }
        }
    };
}

impl_dpcell_prim!(u64);
impl_dpcell_prim!(u128);

impl DpCell for BigUint {
    fn dp_zero() -> Self {
        BigUint::zero()
    }
    fn dp_one() -> Self {
        BigUint::one()
    }
    fn set_sum(&mut self, a: &Self, b: &Self) {
        self.clone_from(a);
        *self += b;
    }
    fn dp_sub(&mut self, other: &Self) {
        *self -= other;
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

fn counts_dp<T: DpCell>(q: u64, steps: &[u64], kmax: usize) -> Vec<BigUint> {
    let qs = q as usize;
    let rows = kmax + 1;
    let mut old = vec![T::dp_zero(); rows * qs];
    old[0] = T::dp_one();
    let mut new = vec![T::dp_zero(); rows * qs];
    // running diagonal sums for the -s and +s directions, one k-row each
    let mut a_prev = vec![T::dp_zero(); qs];
    let mut b_prev = vec![T::dp_zero(); qs];
    let mut a_cur = vec![T::dp_zero(); qs];
    let mut b_cur = vec![T::dp_zero(); qs];

    for &s in steps {
        let d = (s % q) as usize;
        for v in a_prev.iter_mut() {
            *v = T::dp_zero();
        }
        for v in b_prev.iter_mut() {
            *v = T::dp_zero();
        }
        for k in 0..rows {
            let row = &old[k * qs..(k + 1) * qs];
            for m in 0..qs {
                // A(k, m) = old(k, m) + A(k-1, (m - d) mod q)
                a_cur[m].set_sum(&row[m], &a_prev[(m + qs - d) % qs]);
                // B(k, m) = old(k, m) + B(k-1, (m + d) mod q)
                b_cur[m].set_sum(&row[m], &b_prev[(m + d) % qs]);
            }
            let out = &mut new[k * qs..(k + 1) * qs];
            for m in 0..qs {
                out[m].set_sum(&a_cur[m], &b_cur[m]);
                out[m].dp_sub(&row[m]);
            }
            std::mem::swap(&mut a_prev, &mut a_cur);
            std::mem::swap(&mut b_prev, &mut b_cur);
        }
        std::mem::swap(&mut old, &mut new);
    }

    (0..rows).map(|k| old[k * qs].to_biguint()).collect()
}

/// Number of lattice points of the cross-polytope ball {a in Z^n : |a|_1 <= radius}.
pub fn crosspolytope_ball(n: usize, radius: usize) -> BigUint {
    // sum over the number j of nonzero coordinates
    let mut total = BigUint::zero();
    for j in 0..=n.min(radius) {
        total += binomial(n as u64, j as u64)
            * binomial(radius as u64, j as u64)
            * BigUint::from(2u32).pow(j as u32);
    }
    total
}

/// N(k) for k = 0..=kmax on the lattice {a : sum a_i s_i ≡ 0 mod q}.
pub fn lattice_counts_upto(q: u64, s: &[u64], kmax: usize) -> Vec<BigUint> {
    assert!(q >= 1);
    assert!(!s.is_empty());
    // every intermediate is at most twice the ball count, so pick the
    // narrowest width that provably cannot overflow
    let bound = crosspolytope_ball(s.len(), kmax) * 2u32;
    if bound <= BigUint::from(u64::MAX) {
        counts_dp::<u64>(q, s, kmax)
    } else if bound <= BigUint::from(u128::MAX) {
        counts_dp::<u128>(q, s, kmax)
    } else {
        counts_dp::<BigUint>(q, s, kmax)
    }
}

/// Binomial coefficient C(n, k) as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    for i in 0..k {
        num *= n - i;
        num /= i + 1; // exact at every step: product of j consecutive integers is divisible by j!
    }
    num
}

/// Turn one-norm counts into eigenspace multiplicities:
///
///   mult(k) = sum_{r=0}^{floor(k/2)} C(r + n - 2, n - 2) * N(k - 2r)
pub fn multiplicities_from_counts(counts: &[BigUint], n: usize) -> Vec<BigUint> {
    assert!(n >= 2);
    let weights: Vec<BigUint> = (0..counts.len())
        .map(|r| binomial((r + n - 2) as u64, (n - 2) as u64))
        .collect();
    (0..counts.len())
        .map(|k| {
            let mut acc = BigUint::zero();
            for r in 0..=k / 2 {
                acc += &weights[r] * &counts[k - 2 * r];
            }
            acc
        })
        .collect()
}

/// dim of the degree-k harmonic polynomials on S^{2n-1}: the full-sphere
/// multiplicity, against which every quotient is bounded.
pub fn sphere_multiplicity(n: usize, k: usize) -> BigUint {
    let vars = 2 * n as u64;
    let homog = |deg: i64| -> BigUint {
        if deg < 0 {
            BigUint::zero()
        } else {
            binomial(deg as u64 + vars - 1, vars - 1)
        }
    };
    homog(k as i64) - homog(k as i64 - 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    // slow but independent: direct recursive enumeration of lattice vectors
    fn brute_counts(q: u64, s: &[u64], kmax: usize) -> Vec<BigUint> {
        fn rec(q: u64, s: &[u64], i: usize, norm_left: i64, res: u64, out: &mut u64) {
            if i == s.len() {
                if norm_left == 0 && res == 0 {
                    *out += 1;
                }
                return;
            }
            if i + 1 == s.len() {
                // last coordinate must absorb exactly norm_left
                for a in [-norm_left, norm_left] {
                    let r = (res as i64 + a * s[i] as i64).rem_euclid(q as i64) as u64;
                    if r == 0 {
                        *out += 1;
                    }
                    if norm_left == 0 {
                        break;
                    }
                }
                return;
            }
            for a in -norm_left..=norm_left {
                let r = (res as i64 + a * s[i] as i64).rem_euclid(q as i64) as u64;
                rec(q, s, i + 1, norm_left - a.abs(), r, out);
            }
        }
        (0..=kmax)
            .map(|k| {
                let mut out = 0u64;
                rec(q, s, 0, k as i64, 0, &mut out);
                BigUint::from(out)
            })
            .collect()
    }

    #[test]
    fn dp_matches_brute_force() {
        let cases: Vec<(u64, Vec<u64>)> = vec![
            (1, vec![0, 0]),
            (5, vec![1, 1]),
            (11, vec![1, 2, 3]),
            (11, vec![1, 2, 4]),
            (12, vec![0, 2]),
            (6, vec![1, 2, 3]),
            (9, vec![1, 4, 7, 2]),
        ];
        for (q, s) in cases {
            assert_eq!(
                lattice_counts_upto(q, &s, 12),
                brute_counts(q, &s, 12),
                "q={q} s={s:?}"
            );
        }
    }

    #[test]
    fn full_lattice_z2() {
        // Z^2: N(0) = 1, N(k) = 4k
        let counts = lattice_counts_upto(1, &[0, 0], 10);
        assert_eq!(counts[0], BigUint::from(1u32));
        for k in 1..=10usize {
            assert_eq!(counts[k], BigUint::from(4 * k as u32));
        }
    }

    #[test]
    fn tier_consistency() {
        // force all three widths on the same input and compare
        let q = 7;
        let s = [1, 2, 3];
        let a = counts_dp::<u64>(q, &s, 25);
        let b = counts_dp::<u128>(q, &s, 25);
        let c = counts_dp::<BigUint>(q, &s, 25);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn ball_counts() {
        // row of Delannoy-style ball sizes for Z^2: 1, 5, 13, 25, ...
        assert_eq!(crosspolytope_ball(2, 0), BigUint::from(1u32));
        assert_eq!(crosspolytope_ball(2, 1), BigUint::from(5u32));
        assert_eq!(crosspolytope_ball(2, 2), BigUint::from(13u32));
        assert_eq!(crosspolytope_ball(2, 3), BigUint::from(25u32));
        // consistency with summed counts
        let counts = lattice_counts_upto(1, &[0, 0, 0], 9);
        let summed: BigUint = counts.iter().sum();
        assert_eq!(summed, crosspolytope_ball(3, 9));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 10), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
    }

    #[test]
    fn sphere_multiplicities_s3() {
        // on S^3 the k-th eigenspace has dimension (k+1)^2
        for k in 0..25usize {
            assert_eq!(sphere_multiplicity(2, k), BigUint::from(((k + 1) * (k + 1)) as u64));
        }
    }
}
