//! Eigenvalue spectra with multiplicities disregarded.
//!
//! For a lens quotient L of S^{2n-1} the set of Laplace eigenvalues is
//! determined by a single odd integer k0(L): every even-degree eigenvalue
//! lambda_{2k} occurs, and the odd-degree ones are exactly
//! lambda_{k0 + 2k}. Here k0 is the least odd one-norm of a nonzero
//! congruence-lattice vector: odd-degree invariants exist exactly from that
//! degree upward. For some orbifolds (all parameters odd, q even) the
//! lattice has no odd-norm vector at all and the odd family is empty;
//! absence is a first-class result, not an error.

use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::lens::{are_isometric, lattice_counts, spectrum_slice, LensParams};
use crate::modarith::extended_gcd;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// A basis of the congruence lattice {a in Z^n : sum a_i s_i ≡ 0 mod q},
/// built from a kernel basis of the row (s_1, ..., s_n, q).
pub fn congruence_lattice_basis(lens: &LensParams) -> Vec<Vec<i128>> {
    let r = lens.reduced();
    let q = r.q() as i128;
    let mut v: Vec<i128> = r.s().iter().map(|&si| si as i128).collect();
    v.push(q);

    // iterative kernel basis for a 1 x (n+1) integer row: maintain the gcd g
    // of the prefix together with Bezout coefficients c (sum c_j v_j = g)
    let mut basis: Vec<Vec<i128>> = Vec::new();
    let mut coeff = vec![0i128; v.len()];
    coeff[0] = 1;
    let mut g = v[0];
    for i in 1..v.len() {
        let (g2, alpha, beta) = extended_gcd(g, v[i]);
        let mut w = vec![0i128; v.len()];
        if g2 != 0 {
            for (wj, cj) in w.iter_mut().zip(&coeff) {
                *wj = (v[i] / g2) * cj;
            }
            w[i] -= g / g2;
        } else {
            // entire prefix is zero: e_i itself is in the kernel
            w[i] = 1;
        }
        basis.push(w);
        for cj in coeff.iter_mut() {
            *cj *= alpha;
        }
        coeff[i] += beta;
        g = g2;
    }
    // the reduced parameters satisfy gcd(s_1, ..., s_n, q) = 1
    debug_assert_eq!(g, 1);
    // drop the auxiliary coordinate
    basis
        .into_iter()
        .map(|w| {
            debug_assert_eq!(
                w.iter().zip(&v).map(|(a, b)| a * b).sum::<i128>(),
                0,
                "kernel vector check"
            );
            w[..v.len() - 1].to_vec()
        })
        .collect()
}

/// k0(L): the least odd one-norm of a nonzero congruence-lattice vector, or
/// `None` when every lattice vector has even one-norm.
///
/// Existence is decided first from a lattice basis: the one-norm parity of a
/// vector equals the parity of its coordinate sum, a linear functional mod 2,
/// so odd vectors exist iff some basis vector has odd coordinate sum — and
/// then the least such basis norm bounds the search, guaranteeing
/// termination.
pub fn k0(lens: &LensParams) -> Option<u64> {
    let basis = congruence_lattice_basis(lens);
    let odd_norms: Vec<u128> = basis
        .iter()
        .filter(|b| b.iter().map(|x| x.unsigned_abs()).sum::<u128>() % 2 == 1)
        .map(|b| b.iter().map(|x| x.unsigned_abs()).sum::<u128>())
        .collect();
    let bound = *odd_norms.iter().min()? as usize;

    // grow the search window geometrically; the basis bound caps it
    let mut window = 15usize.min(bound);
    loop {
        let counts = lattice_counts(lens, window);
        for k in (1..=window).step_by(2) {
            if !counts[k].is_zero() {
                return Some(k as u64);
            }
        }
        if window == bound {
            unreachable!("a basis vector of odd norm {bound} is in the lattice");
        }
        window = (window * 2).min(bound);
    }
}

/// The eigenvalue set of a lens quotient: {lambda_{2k}} together with
/// {lambda_{k0 + 2k}} when k0 exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenvalueSpectrumDescriptor {
    pub n: usize,
    pub k0: Option<u64>,
}

pub fn eigenvalue_spectrum(lens: &LensParams) -> EigenvalueSpectrumDescriptor {
    EigenvalueSpectrumDescriptor {
        n: lens.n(),
        k0: k0(lens),
    }
}

/// Equal eigenvalue sets: same dimension and same k0.
pub fn are_eigenvalue_equivalent(a: &LensParams, b: &LensParams) -> bool {
    eigenvalue_spectrum(a) == eigenvalue_spectrum(b)
}

/// The family {L(q; 1, ..., 1, 2) : 3 <= q <= qmax}: pairwise non-isometric,
/// mutually eigenvalue equivalent (k0 = 3 throughout), with volume ratio
/// qmax/3 between the extremes.
pub fn eigenvalue_equivalent_family(n: usize, qmax: u64) -> Vec<LensParams> {
    assert!(n >= 2 && qmax >= 3);
    (3..=qmax)
        .map(|q| {
            let mut s = vec![1i64; n];
            s[n - 1] = 2;
            LensParams::new(q, &s).expect("n >= 2")
        })
        .collect()
}

/// The round 2-sphere scaled to curvature 4 and real projective 3-space have
/// the same eigenvalue set: {4k(k+1)} = {m(m+2) : m even}. Checks the two
/// sets agree up to `bound`.
pub fn sphere_quarter_vs_projective_check(bound: u64) -> bool {
    let mut a = Vec::new();
    let mut k = 0u64;
    while 4 * k * (k + 1) <= bound {
        a.push(4 * k * (k + 1));
        k += 1;
    }
    let mut b = Vec::new();
    let mut m = 0u64;
    while m * (m + 2) <= bound {
        b.push(m * (m + 2));
        m += 2;
    }
    a == b
}

/// Certificate that the first N eigenvalues determine the whole spectrum
/// among quotients X/Gamma with vol(X/Gamma)/vol(X) > epsilon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitePartCertificate {
    /// epsilon as (numerator, denominator).
    pub epsilon: (u64, u64),
    /// q = floor(1/epsilon)!, a common multiple of all admissible group orders.
    pub q: u64,
    /// Multiplicities for k <= K pin down the full spectrum.
    pub k_cap: u64,
    /// N = 1 + sum_{k <= K} dim H_k(S^{2n-1}).
    #[serde(serialize_with = "crate::report::serialize_biguint")]
    pub n_eigenvalues: BigUint,
}

/// The finite-part bound for quotients of S^{2n-1}: given epsilon, the first
/// N eigenvalues (with multiplicity) of two quotients with normalized volume
/// above epsilon agree iff the full spectra agree. Guarded at
/// floor(1/epsilon) <= 8: the factorial makes larger values astronomically
/// expensive, and the bound is an existence statement, not a practical one.
pub fn finite_part_bound(n: usize, eps_num: u64, eps_den: u64) -> Result<FinitePartCertificate> {
    assert!(n >= 2 && eps_num > 0 && eps_den > 0);
    let inv_floor = eps_den / eps_num;
    if inv_floor > 8 {
        return Err(Error::BoundTooLarge(inv_floor));
    }
    let q: u64 = (1..=inv_floor).product::<u64>().max(1);
    let positive_roots = (n * (n - 1)) as u64;
    let k_cap = q * (positive_roots + 1);
    // sum_{k=0}^{K} dim H_k(S^{2n-1}) telescopes to P(K) + P(K-1) with
    // P(k) = C(k + 2n - 1, 2n - 1)
    let vars = 2 * n as u64 - 1;
    let total = binomial(k_cap + vars, vars) + binomial(k_cap - 1 + vars, vars);
    Ok(FinitePartCertificate {
        epsilon: (eps_num, eps_den),
        q,
        k_cap,
        n_eigenvalues: total + BigUint::one(),
    })
}

/// The first `count` Laplace eigenvalues of L, sorted, with multiplicity.
pub fn first_eigenvalues(lens: &LensParams, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut window = 8usize;
    loop {
        out.clear();
        let slice = spectrum_slice(lens, window);
        for k in 0..=window {
            let lambda = slice.eigenvalues[k];
            let take = slice.multiplicities[k]
                .to_usize()
                .unwrap_or(usize::MAX)
                .min(count - out.len());
            out.extend(std::iter::repeat(lambda).take(take));
            if out.len() == count {
                return out;
            }
        }
        window *= 2;
    }
}

/// Two lens orbifolds built to share an arbitrarily long initial eigenvalue
/// run while remaining non-isospectral.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceAgreementReport {
    pub q: u64,
    pub l1: LensParams,
    pub l2: LensParams,
    /// Length of the exact common prefix of the two sorted eigenvalue
    /// sequences (with multiplicity).
    pub agree_count: usize,
    /// Guaranteed lower bound q(q+4)/16 on the agreement length.
    pub predicted_agreement: u64,
    pub isospectral: bool,
    pub isometric: bool,
}

/// For a requested agreement length N, pick q the least multiple of 4 with
/// N <= q(q+4)/16 and compare L(q; 0, 1) against L(q; 0, 2): their congruence
/// lattices are Z x qZ and Z x (q/2)Z, which first differ at one-norm q/2,
/// so all multiplicities below degree q/2 coincide while the quotients are
/// neither isometric nor isospectral.
pub fn example_sequence_agreement(n_terms: u64) -> SequenceAgreementReport {
    assert!(n_terms >= 1);
    let mut q = 4u64;
    while q * (q + 4) / 16 < n_terms {
        q += 4;
    }
    let l1 = LensParams::new(q, &[0, 1]).expect("two entries");
    let l2 = LensParams::new(q, &[0, 2]).expect("two entries");

    let predicted = q * (q + 4) / 16;
    // enough terms to reach past the guaranteed divergence at degree q/2
    let half = (q / 2) as usize;
    let safe_len: usize = (half + 2) * (half + 3) / 2 + 4;
    let e1 = first_eigenvalues(&l1, safe_len);
    let e2 = first_eigenvalues(&l2, safe_len);
    let agree_count = e1
        .iter()
        .zip(&e2)
        .take_while(|(a, b)| a == b)
        .count();
    debug_assert!(agree_count < safe_len, "divergence must appear in-window");

    SequenceAgreementReport {
        q,
        predicted_agreement: predicted,
        isospectral: crate::lens::are_isospectral(&l1, &l2),
        isometric: are_isometric(&l1, &l2),
        agree_count,
        l1,
        l2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn lens(q: u64, s: &[i64]) -> LensParams {
        LensParams::new(q, s).unwrap()
    }

    #[test]
    fn basis_spans_the_lattice() {
        // determinant of the basis must equal the lattice index (= effective order)
        for (q, s) in [
            (5u64, vec![1i64, 1]),
            (11, vec![1, 2, 3]),
            (12, vec![0, 2]),
            (7, vec![2, 3]),
        ] {
            let l = lens(q, &s);
            let basis = congruence_lattice_basis(&l);
            assert_eq!(basis.len(), l.n());
            for b in &basis {
                let dot: i128 = b
                    .iter()
                    .zip(l.s())
                    .map(|(bi, &si)| bi * si as i128)
                    .sum();
                assert_eq!(dot.rem_euclid(l.q() as i128), 0);
            }
            if l.n() == 2 {
                let det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
                assert_eq!(det.unsigned_abs(), l.effective_order() as u128);
            }
        }
    }

    #[test]
    fn k0_examples() {
        // the (1, ..., 1, 2) family pins k0 = 3 via the vector (2, 0, ..., 0, -1)
        for q in 3..30u64 {
            assert_eq!(k0(&lens(q, &[1, 1, 2])), Some(3), "q={q}");
            assert_eq!(k0(&lens(q, &[1, 1, 1, 1, 2])), Some(3), "q={q}");
        }
        assert_eq!(k0(&lens(1, &[1, 1])), Some(1));
        // real projective space: all lattice norms even
        assert_eq!(k0(&lens(2, &[1, 1])), None);
        assert_eq!(k0(&lens(11, &[1, 2, 3])), Some(3));
        // singular orbifolds from the doubled-modulus family
        for q in 3..12u64 {
            assert_eq!(k0(&lens(2 * q, &[1, 2, q as i64])), Some(3), "q={q}");
        }
    }

    #[test]
    fn k0_matches_direct_scan() {
        // compare against a plain scan of lattice counts
        for q in 1..=16u64 {
            for s1 in 0..q.min(8) {
                for s2 in 0..q.min(8) {
                    let l = lens(q, &[s1 as i64, s2 as i64, 1]);
                    let counts = lattice_counts(&l, 9);
                    let direct = (1..=9usize)
                        .step_by(2)
                        .find(|&k| !counts[k].is_zero())
                        .map(|k| k as u64);
                    let computed = k0(&l);
                    match direct {
                        Some(k) => assert_eq!(computed, Some(k), "{l}"),
                        None => assert!(
                            computed.is_none() || computed.unwrap() > 9,
                            "{l}: {computed:?}"
                        ),
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvalue_equivalence_examples() {
        assert!(are_eigenvalue_equivalent(
            &lens(6, &[1, 2, 3]),
            &lens(5, &[1, 1, 2])
        ));
        for q in 3..=20u64 {
            assert!(are_eigenvalue_equivalent(
                &lens(3, &[1, 1, 2]),
                &lens(q, &[1, 1, 2])
            ));
        }
        assert!(!are_eigenvalue_equivalent(
            &lens(1, &[1, 1, 1]),
            &lens(3, &[1, 1, 2])
        ));
    }

    #[test]
    fn family_properties() {
        let family = eigenvalue_equivalent_family(3, 5);
        assert_eq!(family.len(), 3);
        assert_eq!(family[0].to_string(), "L(3;1,1,2)");
        assert_eq!(family[2].to_string(), "L(5;1,1,2)");
        for a in &family {
            for b in &family {
                assert!(are_eigenvalue_equivalent(a, b));
                if a.q() != b.q() {
                    assert!(!are_isometric(a, b));
                    assert!(!crate::lens::are_isospectral(a, b));
                }
            }
        }
    }

    #[test]
    fn quarter_sphere_vs_projective() {
        assert!(sphere_quarter_vs_projective_check(1));
        assert!(sphere_quarter_vs_projective_check(100));
        assert!(sphere_quarter_vs_projective_check(100_000));
    }

    #[test]
    fn finite_part_examples() {
        let c = finite_part_bound(2, 3, 10).unwrap();
        assert_eq!(c.q, 6);
        assert_eq!(c.k_cap, 18);
        assert_eq!(c.n_eigenvalues, BigUint::from(2471u32));

        let c1 = finite_part_bound(2, 1, 1).unwrap();
        assert_eq!(c1.q, 1);
        assert_eq!(c1.k_cap, 3);
        assert_eq!(c1.n_eigenvalues, BigUint::from(31u32));

        // smaller epsilon, larger N
        let tighter = finite_part_bound(2, 1, 4).unwrap();
        assert!(tighter.n_eigenvalues > c.n_eigenvalues);

        assert!(matches!(
            finite_part_bound(2, 1, 9),
            Err(Error::BoundTooLarge(9))
        ));
    }

    #[test]
    fn finite_part_sum_matches_direct_summation() {
        use crate::lens::harmonic_invariant_dim;
        let c = finite_part_bound(2, 3, 10).unwrap();
        let sphere = lens(1, &[1, 1]);
        let direct: BigUint = (0..=c.k_cap as usize)
            .map(|k| harmonic_invariant_dim(&sphere, k))
            .sum();
        assert_eq!(c.n_eigenvalues, direct + BigUint::one());
    }

    #[test]
    fn first_eigenvalue_examples() {
        assert_eq!(first_eigenvalues(&lens(1, &[1, 1]), 5), vec![0, 3, 3, 3, 3]);
        assert_eq!(first_eigenvalues(&lens(2, &[1, 1]), 3), vec![0, 8, 8]);
        assert_eq!(first_eigenvalues(&lens(9, &[1, 2, 4]), 1), vec![0]);
    }

    #[test]
    fn sequence_agreement_examples() {
        let r = example_sequence_agreement(10);
        assert_eq!(r.q, 12);
        assert_eq!(r.predicted_agreement, 12);
        assert!(r.agree_count >= 12);
        assert!(!r.isospectral);
        assert!(!r.isometric);

        assert_eq!(example_sequence_agreement(1).q, 4);
        // once the common multiplicities stop at degree q/2, agreement ends
        // exactly at the shared-prefix length plus the overlap at q/2
        let slice1 = spectrum_slice(&r.l1, 7);
        let slice2 = spectrum_slice(&r.l2, 7);
        assert_eq!(slice1.multiplicities[..6], slice2.multiplicities[..6]);
        assert_ne!(slice1.multiplicities[6], slice2.multiplicities[6]);
    }

    #[test]
    fn example_lattices_are_rectangular() {
        // the lattice of L(q; 0, d) is Z x (q/d)Z
        for q in [8u64, 12, 16, 20, 24] {
            for d in crate::modarith::divisors(q) {
                let l = lens(q, &[0, d as i64]);
                let counts = lattice_counts(&l, 50);
                let step = q / d.gcd(&q);
                for (k, c) in counts.iter().enumerate() {
                    let k = k as u64;
                    let mut expect = 0u64;
                    if k == 0 {
                        expect = 1;
                    } else {
                        // (±k, 0), and (±a, ±b) with b a positive multiple of `step`
                        expect += 2; // b = 0
                        let mut b = step;
                        while b < k {
                            expect += 4;
                            b += step;
                        }
                        if b == k && step > 0 {
                            expect += 2;
                        }
                    }
                    assert_eq!(*c, BigUint::from(expect), "q={q} d={d} k={k}");
                }
            }
        }
    }
}
