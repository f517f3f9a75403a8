//! Lens spaces and lens orbifolds L(q; s_1, ..., s_n): construction, isometry
//! classification, exact Laplace spectra, and the finite-cutoff
//! isospectrality decision.
//!
//! L(q; s) is the quotient of S^{2n-1} by the cyclic group generated by the
//! block rotation with angles 2*pi*s_i/q. When gcd(q, s_i) = 1 for every i
//! the action is free and the quotient is a manifold; under the weaker
//! condition that the rotation have order q it is a (good) orbifold. Both are
//! accepted here; inputs whose parameters generate a smaller cyclic group are
//! kept as given with the reduction recorded in `effective_order`.
//!
//! The spectrum is encoded by the congruence lattice
//!   L(q; s) = { a in Z^n : a_1 s_1 + ... + a_n s_n ≡ 0 (mod q) }
//! through its one-norm counting function N(k); the multiplicity of the
//! eigenvalue k(k + 2n - 2) is
//!   dim H_k = sum_{r=0}^{floor(k/2)} C(r + n - 2, n - 2) N(k - 2r).
//!
//! Because this transform is triangular with unit diagonal in N(k), two
//! quotients share all multiplicities up to a cutoff K exactly when their
//! N-vectors agree up to K; the decision procedures compare N-vectors.

use crate::counting::{binomial, lattice_counts_upto, multiplicities_from_counts};
use crate::error::{Error, Result};
use crate::modarith::{normalize_sign, unit_representatives};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Parameters (q; s_1, ..., s_n) of a lens quotient of S^{2n-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LensParams {
    q: u64,
    s: Vec<u64>,
    manifold: bool,
    effective_order: u64,
}

impl LensParams {
    /// Build L(q; s). Entries are reduced mod q; any integer input is
    /// accepted as long as there are at least two entries (dimension >= 3).
    /// Inputs that fail even the orbifold condition gcd(q, s_1, .., s_n) = 1
    /// are kept, with the cyclic group they actually generate recorded in
    /// `effective_order`.
    pub fn new(q: u64, s: &[i64]) -> Result<LensParams> {
        assert!(q >= 1, "q must be positive");
        if s.len() < 2 {
            return Err(Error::DimensionTooSmall);
        }
        let reduced: Vec<u64> = s.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect();
        let manifold = reduced.iter().all(|&si| si.gcd(&q) == 1);
        let g = reduced.iter().fold(q, |acc, &si| acc.gcd(&si));
        Ok(LensParams {
            q,
            s: reduced,
            manifold,
            effective_order: q / g,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn s(&self) -> &[u64] {
        &self.s
    }

    /// Number of rotation planes; the quotient has dimension 2n - 1.
    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn dimension(&self) -> usize {
        2 * self.s.len() - 1
    }

    /// True when every gcd(q, s_i) = 1, i.e. the action is free.
    pub fn is_manifold(&self) -> bool {
        self.manifold
    }

    /// Order of the cyclic group the parameters actually generate:
    /// q / gcd(q, s_1, ..., s_n).
    pub fn effective_order(&self) -> u64 {
        self.effective_order
    }

    /// The same quotient re-expressed with modulus equal to the effective
    /// order. The generator angles are unchanged: 2 pi s_i / q = 2 pi (s_i/g) / (q/g).
    pub fn reduced(&self) -> LensParams {
        let g = self.q / self.effective_order;
        if g == 1 {
            return self.clone();
        }
        let s: Vec<i64> = self.s.iter().map(|&si| (si / g) as i64).collect();
        LensParams::new(self.effective_order, &s).expect("reduction preserves length")
    }
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({};", self.q)?;
        for (i, si) in self.s.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{si}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for LensParams {
    type Err = Error;

    /// Parse the literal `L(q;s1,s2,...,sn)`. Whitespace is permitted
    /// anywhere; entries may be negative and are reduced mod q.
    fn from_str(input: &str) -> Result<LensParams> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| Error::ParseLens(format!("{msg} in {input:?}"));
        let body = compact
            .strip_prefix("L(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err("expected L(q;s1,...,sn)"))?;
        let (q_str, s_str) = body.split_once(';').ok_or_else(|| err("missing ';'"))?;
        let q: u64 = q_str.parse().map_err(|_| err("bad modulus"))?;
        if q == 0 {
            return Err(err("modulus must be positive"));
        }
        let s: Vec<i64> = s_str
            .split(',')
            .map(|tok| tok.parse::<i64>().map_err(|_| err("bad entry")))
            .collect::<Result<_>>()?;
        LensParams::new(q, &s)
    }
}

impl Serialize for LensParams {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LensParams {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical representative of an isometry class of lens quotients.
///
/// Two quotients are isometric exactly when their parameters agree after
/// some combination of entry permutation, entry-wise sign flips, and a
/// common unit scaling mod q. The key stores the modulus of the effectively
/// generated group together with the lexicographically least sorted
/// sign-normalized scaling of the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsometryClassKey {
    pub q: u64,
    pub canonical_s: Vec<u64>,
}

/// Canonical key of the isometry class of L.
pub fn canonical_key(lens: &LensParams) -> IsometryClassKey {
    let reduced = lens.reduced();
    let q = reduced.q;
    let units: Vec<u64> = if q >= 3 {
        unit_representatives(q).expect("q >= 3").reps
    } else {
        vec![1]
    };
    let mut best: Option<Vec<u64>> = None;
    let mut scaled = vec![0u64; reduced.s.len()];
    for &t in &units {
        for (dst, &si) in scaled.iter_mut().zip(&reduced.s) {
            *dst = normalize_sign((t * si % q) as i64, q);
        }
        scaled.sort_unstable();
        if best.as_ref().map_or(true, |b| scaled < *b) {
            best = Some(scaled.clone());
        }
    }
    IsometryClassKey {
        q,
        canonical_s: best.expect("at least one unit"),
    }
}

/// Isometry decision: equal dimension and equal canonical keys.
pub fn are_isometric(a: &LensParams, b: &LensParams) -> bool {
    a.n() == b.n() && canonical_key(a) == canonical_key(b)
}

/// N(k): the number of congruence-lattice vectors of one-norm exactly k.
pub fn lattice_count(lens: &LensParams, k: usize) -> BigUint {
    lattice_counts(lens, k).pop().expect("kmax included")
}

/// N(0..=kmax) in one dynamic-programming pass.
pub fn lattice_counts(lens: &LensParams, kmax: usize) -> Vec<BigUint> {
    let r = lens.reduced();
    lattice_counts_upto(r.q, &r.s, kmax)
}

/// dim H_k of the quotient: the multiplicity of the eigenvalue k(k + 2n - 2).
pub fn harmonic_invariant_dim(lens: &LensParams, k: usize) -> BigUint {
    let counts = lattice_counts(lens, k);
    let n = lens.n();
    let mut acc = BigUint::zero();
    for r in 0..=k / 2 {
        acc += binomial((r + n - 2) as u64, (n - 2) as u64) * &counts[k - 2 * r];
    }
    acc
}

/// The spectral determination cutoff K = q (n(n-1) + 1) - 1 for quotients of
/// S^{2n-1} by groups of order dividing q: agreement of all multiplicities
/// for k <= K forces agreement for every k. This is the strong
/// multiplicity-one bound for SO(2n), whose positive-root count is n(n-1):
/// the window {0, ..., K} meets every residue class mod q at least
/// n(n-1) + 1 times, enough to pin down the numerator polynomial of the
/// generating function over (1 - z^q)^{n(n-1)+1}.
pub fn isospectral_cutoff(q: u64, n: usize) -> usize {
    assert!(q >= 1 && n >= 2);
    (q as usize) * (n * (n - 1) + 1) - 1
}

/// Exact spectrum data of a lens quotient up to degree k_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumSlice {
    pub q: u64,
    pub n: usize,
    pub k_max: usize,
    /// N(k) for k = 0..=k_max.
    pub lattice_counts: Vec<BigUint>,
    /// dim H_k for k = 0..=k_max.
    pub multiplicities: Vec<BigUint>,
    /// lambda_k = k (k + 2n - 2) for k = 0..=k_max.
    pub eigenvalues: Vec<u64>,
}

impl SpectrumSlice {
    /// JSON form `{q, n, K, counts:[..], mults:[..]}`. Counts are decimal
    /// strings so that values beyond 64 bits survive any JSON parser.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "n": self.n,
            "K": self.k_max,
            "counts": self.lattice_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "mults": self.multiplicities.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Compute the exact spectrum slice of L up to degree k_max.
pub fn spectrum_slice(lens: &LensParams, k_max: usize) -> SpectrumSlice {
    let counts = lattice_counts(lens, k_max);
    let mults = multiplicities_from_counts(&counts, lens.n());
    let n = lens.n() as u64;
    let eigenvalues = (0..=k_max as u64).map(|k| k * (k + 2 * n - 2)).collect();
    SpectrumSlice {
        q: lens.q,
        n: lens.n(),
        k_max,
        lattice_counts: counts,
        multiplicities: mults,
        eigenvalues,
    }
}

/// Outcome of an isospectrality comparison, carrying the cutoff that was
/// actually used and whether it was the theorem-backed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsospectralityDecision {
    pub isospectral: bool,
    pub cutoff: usize,
    /// False when a caller-supplied cutoff below the certified bound was
    /// used, in which case a `true` answer is only a heuristic.
    pub certified: bool,
}

/// Decide isospectrality rigorously. Quotients of different dimension or
/// different (effective) group order are never isospectral; otherwise both
/// are reduced to the common effective modulus and their multiplicity
/// vectors are compared up to the determination cutoff.
pub fn are_isospectral(a: &LensParams, b: &LensParams) -> bool {
    decide_isospectral(a, b, None).isospectral
}

/// Isospectrality with an optional cutoff override. An override below the
/// certified cutoff downgrades the result (`certified = false`); an override
/// above it is harmless.
pub fn decide_isospectral(
    a: &LensParams,
    b: &LensParams,
    cutoff_override: Option<usize>,
) -> IsospectralityDecision {
    let certified_cutoff = if a.n() == b.n() && a.effective_order() == b.effective_order() {
        isospectral_cutoff(a.effective_order(), a.n())
    } else {
        0
    };
    let cutoff = cutoff_override.unwrap_or(certified_cutoff);
    let certified = cutoff >= certified_cutoff;
    if a.n() != b.n() || a.effective_order() != b.effective_order() {
        // dimension and volume are spectral invariants
        return IsospectralityDecision {
            isospectral: false,
            cutoff,
            certified: true,
        };
    }
    let ra = a.reduced();
    let rb = b.reduced();
    // equal multiplicities for k <= cutoff <=> equal N-vectors for k <= cutoff
    let isospectral = lattice_counts_upto(ra.q, &ra.s, cutoff) == lattice_counts_upto(rb.q, &rb.s, cutoff);
    IsospectralityDecision {
        isospectral,
        cutoff,
        certified,
    }
}

/// Independent brute-force oracle for dim H_k: counts invariant monomials
/// z^alpha zbar^beta of total degree k directly and subtracts the degree
/// k - 2 layer. Exponentially slower than the lattice route and entirely
/// separate from it.
pub fn monomial_oracle_dim(lens: &LensParams, k: usize) -> Result<BigUint> {
    let candidates = binomial((k + 2 * lens.n() - 1) as u64, (2 * lens.n() - 1) as u64);
    if candidates > BigUint::from(200_000_000u64) {
        let approx = u128::try_from(candidates).unwrap_or(u128::MAX);
        return Err(Error::OracleBudget(approx));
    }
    let p_k = invariant_monomial_count(lens, k as i64);
    let p_k2 = invariant_monomial_count(lens, k as i64 - 2);
    Ok(BigUint::from(p_k - p_k2))
}

/// #{(alpha, beta) in N_0^n x N_0^n : |alpha| + |beta| = deg,
///   sum (alpha_i - beta_i) s_i ≡ 0 mod q}
fn invariant_monomial_count(lens: &LensParams, deg: i64) -> u64 {
    if deg < 0 {
        return 0;
    }
    let q = lens.q as i64;
    // weights: +s_i for the alpha block, -s_i for the beta block
    let mut weights: Vec<i64> = lens.s.iter().map(|&si| si as i64).collect();
    weights.extend(lens.s.iter().map(|&si| -(si as i64)));

    fn rec(weights: &[i64], q: i64, slot: usize, left: i64, residue: i64, count: &mut u64) {
        if slot + 1 == weights.len() {
            if (residue + left * weights[slot]).rem_euclid(q) == 0 {
                *count += 1;
            }
            return;
        }
        for e in 0..=left {
            rec(
                weights,
                q,
                slot + 1,
                left - e,
                (residue + e * weights[slot]).rem_euclid(q),
                count,
            );
        }
    }

    let mut count = 0u64;
    rec(&weights, q, 0, deg, 0, &mut count);
    count
}
