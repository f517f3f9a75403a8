//! Enumeration of lens isometry classes and the isospectrality search.
//!
//! Classes are enumerated as non-decreasing tuples over the sign-normalized
//! residue alphabet, keeping exactly the tuples that equal their own
//! canonical key: one representative per isometry class, in lexicographic
//! order, with constant memory. The search then buckets classes by a short
//! prefix of the lattice counting function (two classes in different
//! buckets already differ in some multiplicity, hence are non-isospectral)
//! and fully certifies only the buckets that collide, at the theorem-backed
//! cutoff q(n(n-1)+1) - 1.

use crate::counting::lattice_counts_upto;
use crate::error::{Error, Result};
use crate::lens::{isospectral_cutoff, IsometryClassKey, LensParams};
use crate::modarith::{normalize_sign, unit_representatives};
use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationMode {
    /// Free actions only: every parameter coprime to q.
    Manifold,
    /// Effective orbifolds: gcd(q, s_1, ..., s_n) = 1, entries arbitrary.
    Orbifold,
}

fn unit_alphabet(q: u64) -> Vec<u64> {
    match q {
        1 => vec![0],
        2 => vec![1],
        _ => unit_representatives(q).expect("q >= 3").reps,
    }
}

fn scaling_units(q: u64) -> Vec<u64> {
    if q <= 2 {
        vec![1]
    } else {
        unit_representatives(q).expect("q >= 3").reps
    }
}

/// Visit every isometry class of (2n-1)-dimensional lens quotients with
/// group order exactly q, in lexicographic order of canonical keys.
pub fn for_each_class(n: usize, q: u64, mode: EnumerationMode, mut f: impl FnMut(&[u64])) {
    assert!(n >= 2 && q >= 1);
    let alphabet: Vec<u64> = match mode {
        EnumerationMode::Manifold => unit_alphabet(q),
        EnumerationMode::Orbifold => (0..=q / 2).collect(),
    };
    let units = scaling_units(q);
    let mut tuple_idx = vec![0usize; n];
    let mut tuple = vec![alphabet[0]; n];
    let mut scaled = vec![0u64; n];

    'outer: loop {
        for (t, &i) in tuple.iter_mut().zip(&tuple_idx) {
            *t = alphabet[i];
        }
        if accept(&tuple, q, &units, &mut scaled, mode) {
            f(&tuple);
        }
        // next non-decreasing index tuple
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            if tuple_idx[pos] + 1 < alphabet.len() {
                let v = tuple_idx[pos] + 1;
                for slot in &mut tuple_idx[pos..] {
                    *slot = v;
                }
                break;
            }
        }
    }
}

fn accept(tuple: &[u64], q: u64, units: &[u64], scaled: &mut [u64], mode: EnumerationMode) -> bool {
    if mode == EnumerationMode::Orbifold {
        let g = tuple.iter().fold(q, |acc, &s| acc.gcd(&s));
        if g != 1 {
            return false;
        }
    }
    // keep the tuple iff it is the least among its own unit scalings,
    // i.e. equals its canonical key
    for &t in units {
        if t == 1 {
            continue;
        }
        for (dst, &s) in scaled.iter_mut().zip(tuple) {
            *dst = normalize_sign((t * s % q) as i64, q);
        }
        scaled.sort_unstable();
        if scaled[..] < *tuple {
            return false;
        }
    }
    true
}

/// All isometry classes at (n, q) as canonical keys, lexicographically.
pub fn enumerate_classes(n: usize, q: u64, mode: EnumerationMode) -> Vec<IsometryClassKey> {
    let mut out = Vec::new();
    for_each_class(n, q, mode, |s| {
        out.push(IsometryClassKey {
            q,
            canonical_s: s.to_vec(),
        });
    });
    out
}

/// Search configuration. `prefix_len` controls only the bucketing prefix
/// (correct for any value); `cutoff_override` below the certified cutoff
/// downgrades the whole report to heuristic.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub prefix_len: Option<usize>,
    pub cutoff_override: Option<usize>,
}

/// Isospectral families within the isometry classes at (n, q).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyReport {
    pub n: usize,
    pub q: u64,
    pub mode: EnumerationMode,
    /// Total number of isometry classes.
    pub classes: usize,
    /// Isospectrality classes of size >= 2, each sorted, sorted by smallest
    /// member. Members are distinct canonical keys, hence pairwise
    /// non-isometric.
    pub families: Vec<Vec<IsometryClassKey>>,
    /// Least key participating in any family, with its least partner.
    pub minimal_pair: Option<(IsometryClassKey, IsometryClassKey)>,
    pub cutoff: usize,
    pub certified: bool,
}

impl FamilyReport {
    /// Classes that are isospectral to some non-isometric class.
    pub fn non_unique_count(&self) -> usize {
        self.families.iter().map(|f| f.len()).sum()
    }
}

fn prefix_hash(counts: &[BigUint]) -> u64 {
    let mut h = DefaultHasher::new();
    counts.hash(&mut h);
    h.finish()
}

/// Find all isospectral families among the classes at (n, q): bucket by a
/// short spectrum prefix, then certify colliding buckets at the full cutoff.
pub fn find_isospectral_families(
    n: usize,
    q: u64,
    mode: EnumerationMode,
    opts: &SearchOptions,
) -> FamilyReport {
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for_each_class(n, q, mode, |s| classes.push(s.to_vec()));

    let certified_cutoff = isospectral_cutoff(q, n);
    let cutoff = opts.cutoff_override.unwrap_or(certified_cutoff);
    let certified = cutoff >= certified_cutoff;
    let prefix_len = opts.prefix_len.unwrap_or(2 * n + 10).min(cutoff);

    // pass 1: group by hashed count prefix
    let hashes: Vec<u64> = classes
        .par_iter()
        .map(|s| prefix_hash(&lattice_counts_upto(q, s, prefix_len)))
        .collect();
    let mut buckets: HashMap<u64, Vec<u32>> = HashMap::new();
    for (i, &h) in hashes.iter().enumerate() {
        buckets.entry(h).or_default().push(i as u32);
    }
    let mut candidate_groups: Vec<Vec<u32>> = buckets.into_values().filter(|v| v.len() >= 2).collect();
    candidate_groups.sort();

    // pass 2: hash collisions are possible, so regroup candidates by the
    // exact prefix vectors before paying for full certification
    let mut exact_groups: Vec<Vec<u32>> = Vec::new();
    for group in candidate_groups {
        let prefixes: Vec<Vec<BigUint>> = group
            .par_iter()
            .map(|&i| lattice_counts_upto(q, &classes[i as usize], prefix_len))
            .collect();
        let mut by_prefix: HashMap<&[BigUint], Vec<u32>> = HashMap::new();
        for (&i, p) in group.iter().zip(&prefixes) {
            by_prefix.entry(p.as_slice()).or_default().push(i);
        }
        exact_groups.extend(by_prefix.into_values().filter(|v| v.len() >= 2));
    }
    exact_groups.sort();

    // pass 3: full-cutoff certification within each surviving group
    let mut families: Vec<Vec<u32>> = Vec::new();
    for group in exact_groups {
        let vectors: Vec<Vec<BigUint>> = group
            .par_iter()
            .map(|&i| lattice_counts_upto(q, &classes[i as usize], cutoff))
            .collect();
        let mut by_vector: HashMap<&[BigUint], Vec<u32>> = HashMap::new();
        for (&i, v) in group.iter().zip(&vectors) {
            by_vector.entry(v.as_slice()).or_default().push(i);
        }
        families.extend(by_vector.into_values().filter(|v| v.len() >= 2));
    }
    for f in &mut families {
        f.sort();
    }
    families.sort();

    let key = |i: u32| IsometryClassKey {
        q,
        canonical_s: classes[i as usize].clone(),
    };
    let families: Vec<Vec<IsometryClassKey>> = families
        .into_iter()
        .map(|f| f.into_iter().map(key).collect())
        .collect();
    let minimal_pair = families
        .iter()
        .min_by(|a, b| a[0].cmp(&b[0]))
        .map(|f| (f[0].clone(), f[1].clone()));

    FamilyReport {
        n,
        q,
        mode,
        classes: classes.len(),
        families,
        minimal_pair,
        cutoff,
        certified,
    }
}

/// One cell of the existence grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExistenceCell {
    /// No isospectral non-isometric pair at this (n, q).
    None,
    /// At least one pair exists.
    Pair,
    /// A pair exists and no smaller q (hence larger volume) admits one in
    /// this dimension, within the swept range.
    PairHighest,
}

impl ExistenceCell {
    pub fn symbol(&self) -> &'static str {
        match self {
            ExistenceCell::None => "none",
            ExistenceCell::Pair => "pair",
            ExistenceCell::PairHighest => "pair_highest",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceTable {
    pub n_min: usize,
    pub n_max: usize,
    pub q_min: u64,
    pub q_max: u64,
    /// rows[i] = cells for n = n_min + i, columns q = q_min..=q_max.
    pub rows: Vec<Vec<ExistenceCell>>,
}

impl ExistenceTable {
    pub fn cell(&self, n: usize, q: u64) -> ExistenceCell {
        self.rows[n - self.n_min][(q - self.q_min) as usize]
    }
}

/// Existence of isospectral non-isometric pairs over a rectangle of (n, q).
/// The highest-volume marking always sweeps q from 3 regardless of `q_min`,
/// so that "no smaller q admits a pair" is meaningful.
pub fn existence_table(
    n_min: usize,
    n_max: usize,
    q_min: u64,
    q_max: u64,
    mode: EnumerationMode,
) -> ExistenceTable {
    assert!(n_min >= 2 && n_min <= n_max && q_min <= q_max);
    let rows: Vec<Vec<ExistenceCell>> = (n_min..=n_max)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let mut first_pair_q: Option<u64> = None;
            let mut cells = Vec::new();
            for q in 3..=q_max {
                let has_pair =
                    !find_isospectral_families(n, q, mode, &SearchOptions::default())
                        .families
                        .is_empty();
                if has_pair && first_pair_q.is_none() {
                    first_pair_q = Some(q);
                }
                if q >= q_min {
                    cells.push(if !has_pair {
                        ExistenceCell::None
                    } else if first_pair_q == Some(q) {
                        ExistenceCell::PairHighest
                    } else {
                        ExistenceCell::Pair
                    });
                }
            }
            // q = 1, 2 have a single class each, so no pairs; pad if requested
            let mut row = Vec::new();
            for q in q_min..3.min(q_max + 1) {
                let _ = q;
                row.push(ExistenceCell::None);
            }
            row.extend(cells);
            row
        })
        .collect();
    ExistenceTable {
        n_min,
        n_max,
        q_min,
        q_max,
        rows,
    }
}

/// A lens space is irreducible when it is not an extension of a lower
/// dimensional one by the full representative set t(q): equivalently, some
/// unit class of t(q) is missed by the parameters.
pub fn is_irreducible(lens: &LensParams) -> Result<bool> {
    let q = lens.q();
    if q < 3 {
        return Err(Error::IrreducibilityUndefined(q));
    }
    let covered: std::collections::HashSet<u64> = lens
        .s()
        .iter()
        .map(|&si| normalize_sign(si as i64, q))
        .collect();
    Ok(unit_representatives(q)?
        .reps
        .iter()
        .any(|u| !covered.contains(u)))
}

/// Append r copies of t(q) to the parameters: a dimension-raising map that
/// preserves isospectrality and non-isometry of pairs.
pub fn extend_params(lens: &LensParams, r: usize) -> Result<LensParams> {
    let q = lens.q();
    if q < 3 {
        return Err(Error::UnitRepresentativesUndefined(q));
    }
    let reps = unit_representatives(q)?.reps;
    let mut s: Vec<i64> = lens.s().iter().map(|&x| x as i64).collect();
    for _ in 0..r {
        s.extend(reps.iter().map(|&x| x as i64));
    }
    LensParams::new(q, &s)
}

/// The six congruence families of dimensions n in which the
/// highest-volume isospectral pairs are known to be lens spaces.
pub fn congruence_condition(n: u64) -> bool {
    assert!(n >= 3);
    n % 4 == 1
        || matches!(n % 5, 1..=3)
        || matches!(n % 6, 1..=4)
        || matches!(n % 8, 2..=6)
        || matches!(n % 9, 2..=7)
        || matches!(n % 11, 2..=9)
}

/// Spectral-uniqueness statistics over all group orders q <= x.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub x: u64,
    /// Classes isospectral to some non-isometric class (the published
    /// tables tabulate this column).
    pub non_unique_count: u64,
    /// Spectrally unique classes: total - non_unique.
    pub unique_count: u64,
    pub total_count: u64,
    /// Exact density of spectrally unique classes, unique/total.
    pub density: (u64, u64),
}

impl DensityReport {
    /// The density rounded half-up to five decimal places.
    pub fn density_5dp(&self) -> String {
        let (num, den) = self.density;
        let scaled = num as u128 * 100_000;
        let rounded = (2 * scaled + den as u128) / (2 * den as u128);
        format!("{}.{:05}", rounded / 100_000, rounded % 100_000)
    }
}

/// Count spectrally unique lens spaces of dimension 2n-1 over all
/// fundamental group orders q = 1..=x (q = 1 and q = 2 contribute the
/// sphere and real projective space, one spectrally unique class each).
pub fn density(n: usize, x: u64) -> DensityReport {
    assert!(n >= 2 && x >= 1);
    let per_q: Vec<(u64, u64)> = (1..=x)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&q| {
            let report =
                find_isospectral_families(n, q, EnumerationMode::Manifold, &SearchOptions::default());
            (report.classes as u64, report.non_unique_count() as u64)
        })
        .collect();
    let total: u64 = per_q.iter().map(|p| p.0).sum();
    let non_unique: u64 = per_q.iter().map(|p| p.1).sum();
    let unique = total - non_unique;
    DensityReport {
        n,
        x,
        non_unique_count: non_unique,
        unique_count: unique,
        total_count: total,
        density: (unique, total),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::{are_isometric, are_isospectral, canonical_key};

    #[test]
    fn enumerate_examples() {
        let classes = enumerate_classes(2, 7, EnumerationMode::Manifold);
        let keys: Vec<Vec<u64>> = classes.into_iter().map(|k| k.canonical_s).collect();
        assert_eq!(keys, vec![vec![1, 1], vec![1, 2]]);

        assert_eq!(enumerate_classes(3, 1, EnumerationMode::Manifold).len(), 1);

        let keys11: Vec<Vec<u64>> = enumerate_classes(3, 11, EnumerationMode::Manifold)
            .into_iter()
            .map(|k| k.canonical_s)
            .collect();
        assert!(keys11.contains(&vec![1, 2, 3]));
        assert!(keys11.contains(&vec![1, 2, 4]));
    }

    #[test]
    fn enumeration_matches_orbit_count() {
        // brute force: count orbits of valid tuples under scaling, signs,
        // and permutation, by canonicalizing every raw tuple
        for q in 1..=20u64 {
            for n in 2..=3usize {
                let mut raw: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
                let total = (q as usize).pow(n as u32);
                for code in 0..total {
                    let mut tuple = Vec::with_capacity(n);
                    let mut rest = code as u64;
                    for _ in 0..n {
                        tuple.push((rest % q) as i64);
                        rest /= q;
                    }
                    if tuple.iter().all(|&s| (s as u64).gcd(&q) == 1) {
                        let lens = LensParams::new(q, &tuple).unwrap();
                        raw.insert(canonical_key(&lens).canonical_s);
                    }
                }
                let streamed = enumerate_classes(n, q, EnumerationMode::Manifold).len();
                assert_eq!(streamed, raw.len(), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn orbifold_mode_includes_singular_classes() {
        let orb = enumerate_classes(2, 6, EnumerationMode::Orbifold);
        // contains e.g. (0, 1) and (1, 2)-type singular quotients,
        // and every manifold class as well
        let man = enumerate_classes(2, 6, EnumerationMode::Manifold);
        for k in &man {
            assert!(orb.contains(k));
        }
        assert!(orb.iter().any(|k| k.canonical_s.contains(&0)));
        // effective order is q throughout
        for k in &orb {
            let lens =
                LensParams::new(6, &k.canonical_s.iter().map(|&x| x as i64).collect::<Vec<_>>())
                    .unwrap();
            assert_eq!(lens.effective_order(), 6);
        }
    }

    #[test]
    fn flagship_family_found() {
        let report =
            find_isospectral_families(3, 11, EnumerationMode::Manifold, &SearchOptions::default());
        assert_eq!(report.families.len(), 1);
        let family: Vec<&[u64]> = report.families[0]
            .iter()
            .map(|k| k.canonical_s.as_slice())
            .collect();
        assert_eq!(family, vec![&[1, 2, 3][..], &[1, 2, 4][..]]);
        let (a, b) = report.minimal_pair.unwrap();
        assert_eq!(a.canonical_s, vec![1, 2, 3]);
        assert_eq!(b.canonical_s, vec![1, 2, 4]);
        assert!(report.certified);
        assert_eq!(report.cutoff, 76);
    }

    #[test]
    fn no_families_at_small_q() {
        let report =
            find_isospectral_families(3, 10, EnumerationMode::Manifold, &SearchOptions::default());
        assert!(report.families.is_empty());
        assert!(report.minimal_pair.is_none());
    }

    #[test]
    fn families_are_certified_and_non_isometric() {
        for (n, q) in [(3usize, 11u64), (5, 16), (4, 13)] {
            let report =
                find_isospectral_families(n, q, EnumerationMode::Manifold, &SearchOptions::default());
            for family in &report.families {
                for i in 0..family.len() {
                    for j in i + 1..family.len() {
                        let to_lens = |k: &IsometryClassKey| {
                            LensParams::new(
                                q,
                                &k.canonical_s.iter().map(|&x| x as i64).collect::<Vec<_>>(),
                            )
                            .unwrap()
                        };
                        let a = to_lens(&family[i]);
                        let b = to_lens(&family[j]);
                        assert!(are_isospectral(&a, &b));
                        assert!(!are_isometric(&a, &b));
                    }
                }
            }
        }
    }

    #[test]
    fn sixteen_five_family() {
        let report =
            find_isospectral_families(5, 16, EnumerationMode::Manifold, &SearchOptions::default());
        let (a, b) = report.minimal_pair.unwrap();
        assert_eq!(a.canonical_s, vec![1, 1, 3, 3, 5]);
        assert_eq!(b.canonical_s, vec![1, 1, 3, 3, 7]);
    }

    #[test]
    fn existence_small_grid() {
        let table = existence_table(3, 4, 10, 13, EnumerationMode::Manifold);
        assert_eq!(table.cell(3, 11), ExistenceCell::PairHighest);
        assert_eq!(table.cell(3, 13), ExistenceCell::Pair);
        assert_eq!(table.cell(3, 10), ExistenceCell::None);
        assert_eq!(table.cell(3, 12), ExistenceCell::None);
        assert_eq!(table.cell(4, 13), ExistenceCell::PairHighest);
        assert_eq!(table.cell(4, 11), ExistenceCell::None);
    }

    #[test]
    fn irreducibility_examples() {
        let lens = |q: u64, s: &[i64]| LensParams::new(q, s).unwrap();
        assert!(is_irreducible(&lens(11, &[1, 2, 3])).unwrap());
        assert!(!is_irreducible(&lens(7, &[1, 2, 3])).unwrap());
        // a tuple covering all of t(q) is reducible by definition
        assert!(!is_irreducible(&lens(11, &[1, 2, 3, 4, 5])).unwrap());
        assert!(is_irreducible(&lens(2, &[1, 1])).is_err());
    }

    #[test]
    fn extension_examples() {
        let lens = LensParams::new(11, &[1, 2, 3]).unwrap();
        let ext = extend_params(&lens, 1).unwrap();
        assert_eq!(ext.to_string(), "L(11;1,2,3,1,2,3,4,5)");
        assert_eq!(ext.n(), 8);

        let pair = (
            extend_params(&LensParams::new(11, &[1, 2, 3]).unwrap(), 1).unwrap(),
            extend_params(&LensParams::new(11, &[1, 2, 4]).unwrap(), 1).unwrap(),
        );
        assert!(are_isospectral(&pair.0, &pair.1));
        assert!(!are_isometric(&pair.0, &pair.1));
    }

    #[test]
    fn congruence_examples() {
        assert!(!congruence_condition(144));
        assert!(!congruence_condition(935));
        for n in [3u64, 4, 5, 10, 100, 143, 145, 934, 936] {
            assert!(congruence_condition(n), "n={n}");
        }
    }

    #[test]
    fn density_small() {
        let report = density(5, 10);
        assert_eq!(report.total_count, 28);
        assert_eq!(report.non_unique_count, 0);
        assert_eq!(report.density_5dp(), "1.00000");
    }

    #[test]
    fn density_rounding() {
        let r = DensityReport {
            n: 3,
            x: 50,
            non_unique_count: 40,
            unique_count: 950,
            total_count: 990,
            density: (950, 990),
        };
        assert_eq!(r.density_5dp(), "0.95960");
    }
}
