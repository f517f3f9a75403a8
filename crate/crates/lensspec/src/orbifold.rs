//! Finite subgroups of the orthogonal group given by exact signed
//! permutation matrices, and spherical-orbifold spectra computed from them.
//!
//! For a finite group G of isometries of S^{d} (matrices of size m = d + 1),
//! the dimensions of the G-invariant harmonic polynomials are generated by
//!
//!   F(z) = (1 - z^2) / |G| * sum_{g in G} 1 / det(I - g z),
//!
//! and det(I - g z) has integer coefficients for every signed permutation
//! (and for rotation blocks through integer cyclotomic factors), so the
//! whole computation runs in exact integer power series. Coefficient
//! integrality and nonnegativity of the result act as built-in consistency
//! oracles.
//!
//! Eigenvalue multisets of orthogonal matrices are conjugation invariants,
//! so equality of the characteristic-polynomial multisets of two groups
//! realizes an eigenvalue-preserving bijection: the almost-conjugacy test.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// An m x m matrix with exactly one entry of +1 or -1 in every row and
/// column. Column j holds `sign[j]` in row `img[j]`: M e_j = sign[j] e_{img[j]}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPermMatrix {
    img: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPermMatrix {
    pub fn identity(m: usize) -> Self {
        SignedPermMatrix {
            img: (0..m).collect(),
            sign: vec![1; m],
        }
    }

    /// Build from signed 1-based images: entry j maps e_{j+1} to
    /// sign(v_j) * e_{|v_j|}. This is the on-disk format.
    pub fn from_signed_images(v: &[i64]) -> Result<Self> {
        let m = v.len();
        let mut img = vec![0usize; m];
        let mut sign = vec![0i8; m];
        let mut seen = vec![false; m];
        for (j, &x) in v.iter().enumerate() {
            let idx = x.unsigned_abs() as usize;
            if x == 0 || idx > m {
                return Err(Error::ParseGroup(format!(
                    "image {x} out of range for size {m}"
                )));
            }
            if seen[idx - 1] {
                return Err(Error::ParseGroup(format!("row {idx} hit twice")));
            }
            seen[idx - 1] = true;
            img[j] = idx - 1;
            sign[j] = if x > 0 { 1 } else { -1 };
        }
        Ok(SignedPermMatrix { img, sign })
    }

    /// The permutation that is a product of disjoint transpositions,
    /// all signs +1, padded to size m.
    pub fn from_transpositions(m: usize, swaps: &[(usize, usize)]) -> Self {
        let mut e = Self::identity(m);
        for &(a, b) in swaps {
            e.img.swap(a - 1, b - 1);
        }
        e
    }

    pub fn size(&self) -> usize {
        self.img.len()
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(j, &i)| i == j) && self.sign.iter().all(|&s| s == 1)
    }

    /// Matrix entry at (row, col) in {-1, 0, 1}.
    pub fn entry(&self, row: usize, col: usize) -> i64 {
        if self.img[col] == row {
            self.sign[col] as i64
        } else {
            0
        }
    }

    pub fn mul(&self, rhs: &SignedPermMatrix) -> SignedPermMatrix {
        assert_eq!(self.size(), rhs.size());
        let m = self.size();
        let mut img = vec![0usize; m];
        let mut sign = vec![0i8; m];
        for j in 0..m {
            img[j] = self.img[rhs.img[j]];
            sign[j] = rhs.sign[j] * self.sign[rhs.img[j]];
        }
        SignedPermMatrix { img, sign }
    }

    pub fn inverse(&self) -> SignedPermMatrix {
        let m = self.size();
        let mut img = vec![0usize; m];
        let mut sign = vec![0i8; m];
        for j in 0..m {
            img[self.img[j]] = j;
            sign[self.img[j]] = self.sign[j];
        }
        SignedPermMatrix { img, sign }
    }

    /// Cycle structure as (length, product of signs around the cycle).
    fn cycles(&self) -> Vec<(usize, i8)> {
        let m = self.size();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut sgn = 1i8;
            let mut j = start;
            loop {
                seen[j] = true;
                len += 1;
                sgn *= self.sign[j];
                j = self.img[j];
                if j == start {
                    break;
                }
            }
            out.push((len, sgn));
        }
        out
    }

    /// Characteristic polynomial det(xI - M), coefficients ascending in x.
    /// A cycle of length L with sign product e contributes x^L - e.
    pub fn char_poly(&self) -> Vec<BigInt> {
        let mut acc = vec![BigInt::one()];
        for (len, sgn) in self.cycles() {
            let mut factor = vec![BigInt::zero(); len + 1];
            factor[0] = BigInt::from(-(sgn as i64));
            factor[len] = BigInt::one();
            acc = poly_mul(&acc, &factor);
        }
        acc
    }

    /// det(I - M z), ascending in z; the reciprocal-root form of the
    /// characteristic polynomial. A cycle contributes 1 - e z^L.
    pub fn det_one_minus_z(&self) -> Vec<i64> {
        let mut acc = vec![1i64];
        for (len, sgn) in self.cycles() {
            let mut factor = vec![0i64; len + 1];
            factor[0] = 1;
            factor[len] = -(sgn as i64);
            acc = poly_mul_i64(&acc, &factor);
        }
        acc
    }

    pub fn determinant(&self) -> i64 {
        self.cycles()
            .into_iter()
            .map(|(len, sgn)| sgn as i64 * if len % 2 == 0 { -1 } else { 1 })
            .product()
    }
}

impl fmt::Display for SignedPermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for j in 0..self.size() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", (self.img[j] as i64 + 1) * self.sign[j] as i64)?;
        }
        write!(f, ")")
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// A finite group of signed permutation matrices: duplicate-free, closed
/// under product and inverse, stored in a deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrthogonalGroup {
    elements: Vec<SignedPermMatrix>,
}

impl FiniteOrthogonalGroup {
    pub fn elements(&self) -> &[SignedPermMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.elements[0].size()
    }
}

/// Close a generating set under multiplication. Errors once the closure
/// exceeds `max_order`.
pub fn generate_group(
    generators: &[SignedPermMatrix],
    max_order: usize,
) -> Result<FiniteOrthogonalGroup> {
    assert!(!generators.is_empty(), "need at least one generator");
    let m = generators[0].size();
    assert!(
        generators.iter().all(|g| g.size() == m),
        "generators must share one size"
    );
    let mut set: BTreeSet<SignedPermMatrix> = BTreeSet::new();
    set.insert(SignedPermMatrix::identity(m));
    let mut frontier: Vec<SignedPermMatrix> = vec![SignedPermMatrix::identity(m)];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.mul(g);
            if set.insert(y.clone()) {
                if set.len() > max_order {
                    return Err(Error::GroupTooLarge(max_order));
                }
                frontier.push(y);
            }
        }
    }
    Ok(FiniteOrthogonalGroup {
        elements: set.into_iter().collect(),
    })
}

/// The multiset of characteristic polynomials over a group: a conjugation
/// invariant (eigenvalues with multiplicity, element by element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyFingerprint {
    /// Sorted characteristic polynomials, coefficients ascending.
    pub polys: Vec<Vec<BigInt>>,
}

pub fn char_fingerprint(group: &FiniteOrthogonalGroup) -> ConjugacyFingerprint {
    let mut polys: Vec<Vec<BigInt>> = group.elements.iter().map(|g| g.char_poly()).collect();
    polys.sort();
    ConjugacyFingerprint { polys }
}

/// Almost conjugacy: a bijection matching every element to one with the
/// same eigenvalue multiset, here decided by multiset equality of
/// characteristic polynomials.
pub fn almost_conjugate(g1: &FiniteOrthogonalGroup, g2: &FiniteOrthogonalGroup) -> bool {
    g1.matrix_size() == g2.matrix_size() && char_fingerprint(g1) == char_fingerprint(g2)
}

/// Dimension of the joint fixed space, the intersection of ker(g - I) over
/// the group, computed exactly over the integers.
pub fn fixed_space_dim(group: &FiniteOrthogonalGroup) -> usize {
    let m = group.matrix_size();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for g in &group.elements {
        if g.is_identity() {
            continue;
        }
        for i in 0..m {
            let row: Vec<i128> = (0..m)
                .map(|j| g.entry(i, j) as i128 - i128::from(i == j))
                .collect();
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    m - integer_rank(rows, m)
}

/// Number of standard basis vectors fixed by every element: the dimension
/// of the largest coordinate subspace on which the group acts as the
/// identity blockwise. Unlike `fixed_space_dim` this is not a conjugation
/// invariant; it describes how the given matrices sit in coordinates.
pub fn fixed_coordinate_dim(group: &FiniteOrthogonalGroup) -> usize {
    let m = group.matrix_size();
    (0..m)
        .filter(|&j| {
            group
                .elements
                .iter()
                .all(|g| g.img[j] == j && g.sign[j] == 1)
        })
        .count()
}

// fraction-free Gaussian elimination; entries stay far inside i128 for the
// matrix sizes used here (m <= 16, entries in {-2,...,2})
fn integer_rank(mut rows: Vec<Vec<i128>>, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail {
            if row[col] != 0 {
                let a = prow[col];
                let b = row[col];
                let g = gcd_i128(a, b);
                let (fa, fb) = (b / g, a / g);
                for (x, &p) in row.iter_mut().zip(prow) {
                    *x = *x * fb - p * fa;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Two order-4 subgroups of SO(d+1), built from double transpositions on the
/// first four (resp. six) coordinates, whose nontrivial elements all have
/// eigenvalue -1 with multiplicity 2 and +1 with multiplicity d-1. They are
/// almost conjugate, so the orbifold quotients are isospectral; the two
/// groups occupy coordinates differently (4 vs 6 moved coordinates).
pub fn gassmann_pair(d: usize) -> Result<(FiniteOrthogonalGroup, FiniteOrthogonalGroup)> {
    if d < 5 {
        return Err(Error::Precondition(format!(
            "need dimension d >= 5, got {d}"
        )));
    }
    let m = d + 1;
    let perm = |swaps: &[(usize, usize)]| SignedPermMatrix::from_transpositions(m, swaps);
    let g1 = FiniteOrthogonalGroup {
        elements: sorted_elements(vec![
            SignedPermMatrix::identity(m),
            perm(&[(1, 2), (3, 4)]),
            perm(&[(1, 3), (2, 4)]),
            perm(&[(1, 4), (2, 3)]),
        ]),
    };
    let g2 = FiniteOrthogonalGroup {
        elements: sorted_elements(vec![
            SignedPermMatrix::identity(m),
            perm(&[(1, 2), (3, 4)]),
            perm(&[(1, 2), (5, 6)]),
            perm(&[(3, 4), (5, 6)]),
        ]),
    };
    debug_assert!(is_closed(&g1) && is_closed(&g2));
    Ok((g1, g2))
}

fn sorted_elements(mut v: Vec<SignedPermMatrix>) -> Vec<SignedPermMatrix> {
    v.sort();
    v.dedup();
    v
}

fn is_closed(g: &FiniteOrthogonalGroup) -> bool {
    g.elements.iter().all(|a| {
        g.elements
            .iter()
            .all(|b| g.elements.binary_search(&a.mul(b)).is_ok())
    })
}

/// Invariant-dimension series from a list of det(I - g z) denominators.
///
/// Computes (1 - z^2) / order * sum_g 1/det_g as an exact integer series and
/// checks that every coefficient is a nonnegative integer; a failure of
/// either check would mean the denominators do not come from a group of the
/// claimed order and is reported as an internal error.
pub fn series_from_denominators(
    denominators: &[Vec<i64>],
    order: u64,
    k_max: usize,
) -> Result<Vec<BigUint>> {
    let mut total = vec![BigInt::zero(); k_max + 3];
    for det in denominators {
        debug_assert_eq!(det[0], 1, "det(I - gz) has constant term 1");
        // series inverse of an integer polynomial with unit constant term
        let mut inv = vec![BigInt::zero(); k_max + 3];
        inv[0] = BigInt::one();
        for k in 1..inv.len() {
            let mut acc = BigInt::zero();
            for j in 1..det.len().min(k + 1) {
                if det[j] != 0 {
                    acc += det[j] * &inv[k - j];
                }
            }
            inv[k] = -acc;
        }
        for (t, i) in total.iter_mut().zip(&inv) {
            *t += i;
        }
    }
    // multiply by (1 - z^2), then divide by the group order
    let mut out = Vec::with_capacity(k_max + 1);
    let order_big = BigInt::from(order);
    for k in 0..=k_max {
        let mut c = total[k].clone();
        if k >= 2 {
            c -= &total[k - 2];
        }
        let (quot, rem) = num_integer::Integer::div_rem(&c, &order_big);
        if !rem.is_zero() || quot.is_negative() {
            return Err(Error::Internal(format!(
                "series coefficient {c} at degree {k} is not a nonnegative multiple of {order}"
            )));
        }
        out.push(quot.to_biguint().expect("nonnegative"));
    }
    Ok(out)
}

/// dim H_k^G for k = 0..=k_max via the exact generating-function series.
pub fn orbifold_spectrum_slice(group: &FiniteOrthogonalGroup, k_max: usize) -> Vec<BigUint> {
    let dets: Vec<Vec<i64>> = group.elements.iter().map(|g| g.det_one_minus_z()).collect();
    series_from_denominators(&dets, group.order() as u64, k_max)
        .expect("a genuine group always yields integer nonnegative coefficients")
}

/// Spectral uniqueness of the order-2 or order-3 quotients of S^d.
///
/// Order-2 subgroups are classified up to conjugacy by the multiplicity m of
/// the eigenvalue -1 of the involution (m = 1..=d+1); order-3 subgroups by
/// the multiplicity m of the conjugate pair of primitive cube roots
/// (m = 1..=(d+1)/2), the generator contributing (1+z+z^2)^m to the
/// denominator. Returns true when the spectrum slices up to k_max are
/// pairwise distinct, i.e. the first k_max+1 multiplicities already separate
/// every class.
pub fn small_order_uniqueness(d: usize, order: u32, k_max: usize) -> Result<bool> {
    let m_amb = d + 1;
    let det_id = poly_pow(&[1, -1], m_amb);
    let slices: Vec<Vec<BigUint>> = match order {
        2 => (1..=m_amb)
            .map(|m| {
                let det_g = poly_mul_i64(&poly_pow(&[1, 1], m), &poly_pow(&[1, -1], m_amb - m));
                series_from_denominators(&[det_id.clone(), det_g], 2, k_max)
            })
            .collect::<Result<_>>()?,
        3 => (1..=m_amb / 2)
            .map(|m| {
                let det_g =
                    poly_mul_i64(&poly_pow(&[1, 1, 1], m), &poly_pow(&[1, -1], m_amb - 2 * m));
                series_from_denominators(&[det_id.clone(), det_g.clone(), det_g], 3, k_max)
            })
            .collect::<Result<_>>()?,
        other => {
            return Err(Error::Precondition(format!(
                "small-order uniqueness covers orders 2 and 3, got {other}"
            )))
        }
    };
    for (i, a) in slices.iter().enumerate() {
        for b in slices.iter().skip(i + 1) {
            if a == b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn poly_pow(base: &[i64], exp: usize) -> Vec<i64> {
    let mut acc = vec![1i64];
    for _ in 0..exp {
        acc = poly_mul_i64(&acc, base);
    }
    acc
}

/// Outcome of trying to tell two groups apart by computable conjugation
/// invariants. `Undecided` does not assert conjugacy; it only says none of
/// the implemented invariants separates them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GroupDistinction {
    Distinguished { invariant: String },
    Undecided,
}

pub fn distinguish(g1: &FiniteOrthogonalGroup, g2: &FiniteOrthogonalGroup) -> GroupDistinction {
    if g1.order() != g2.order() {
        return GroupDistinction::Distinguished {
            invariant: format!("group order: {} vs {}", g1.order(), g2.order()),
        };
    }
    if char_fingerprint(g1) != char_fingerprint(g2) {
        return GroupDistinction::Distinguished {
            invariant: "characteristic-polynomial multiset".to_string(),
        };
    }
    let f1 = fixed_space_dim(g1);
    let f2 = fixed_space_dim(g2);
    if f1 != f2 {
        return GroupDistinction::Distinguished {
            invariant: format!("fixed-space dimension: {f1} vs {f2}"),
        };
    }
    GroupDistinction::Undecided
}

/// Parse a group file: one signed permutation per line in the
/// `(2 -1 | 4 -3 | 5 6)` style (parentheses and `|` separators optional),
/// `#` starts a comment. The listed matrices are taken as generators.
pub fn parse_group_file(text: &str) -> Result<Vec<SignedPermMatrix>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cleaned: String = line
            .chars()
            .map(|c| if c == '(' || c == ')' || c == '|' || c == ',' { ' ' } else { c })
            .collect();
        let entries: Vec<i64> = cleaned
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| {
                    Error::ParseGroup(format!("line {}: bad token {tok:?}", lineno + 1))
                })
            })
            .collect::<Result<_>>()?;
        if entries.is_empty() {
            continue;
        }
        out.push(SignedPermMatrix::from_signed_images(&entries)?);
    }
    if out.is_empty() {
        return Err(Error::ParseGroup("no matrices found".to_string()));
    }
    let size = out[0].size();
    if out.iter().any(|m| m.size() != size) {
        return Err(Error::ParseGroup("matrices of mixed sizes".to_string()));
    }
    Ok(out)
}
