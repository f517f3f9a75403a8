//! Tuple predicates mod r and descending isospectral towers.
//!
//! For r > 2, t >= 1 and a tuple a in Z^n, the lens space
//!
//!   L(r, t, a) = L(r^2 t; r t a_1 + 1, ..., r t a_n + 1)
//!
//! pairs with L(r, t, -a). The combinatorics of a mod r decide the geometry:
//! when a is hereditarily good the pair is isospectral for every t, and it is
//! isometric exactly when a is reversible. A tuple that is hereditarily good
//! and irreversible ("useful") therefore produces isospectral non-isometric
//! pairs, and scaling t by powers of any k ≡ 1 (mod r) stacks those pairs
//! into a pair of descending towers of covers.

use crate::error::{Error, Result};
use crate::lens::{are_isometric, are_isospectral, LensParams};
use crate::modarith::{divisors, is_prime, mod_inverse};
use serde::Serialize;

fn reduced_sorted(a: &[i64], r: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().map(|&x| x.rem_euclid(r as i64) as u64).collect();
    v.sort_unstable();
    v
}

/// Entries pairwise distinct mod r.
pub fn is_univalent(a: &[i64], r: u64) -> bool {
    let v = reduced_sorted(a, r);
    v.windows(2).all(|w| w[0] != w[1])
}

/// a and -a equal as multisets mod r.
pub fn is_self_reversing(a: &[i64], r: u64) -> bool {
    let neg: Vec<i64> = a.iter().map(|&x| -x).collect();
    reduced_sorted(a, r) == reduced_sorted(&neg, r)
}

/// The shift c (if any) with a + c ≡ -a as multisets mod r.
pub fn reversing_shift(a: &[i64], r: u64) -> Option<u64> {
    let neg: Vec<i64> = a.iter().map(|&x| -x).collect();
    let target = reduced_sorted(&neg, r);
    (0..r).find(|&c| {
        let shifted: Vec<i64> = a.iter().map(|&x| x + c as i64).collect();
        reduced_sorted(&shifted, r) == target
    })
}

/// Some shift of a equals -a as multisets mod r.
pub fn is_reversible(a: &[i64], r: u64) -> bool {
    reversing_shift(a, r).is_some()
}

/// Univalent or reversible mod r.
pub fn is_good(a: &[i64], r: u64) -> bool {
    is_univalent(a, r) || is_reversible(a, r)
}

/// Good mod every divisor of r. (Everything is reversible mod 1 and 2, so
/// only divisors above 2 can fail.)
pub fn is_hereditarily_good(a: &[i64], r: u64) -> bool {
    divisors(r).into_iter().all(|d| is_good(a, d))
}

/// Hereditarily good and irreversible mod r: exactly the tuples whose lens
/// pair is isospectral but not isometric.
pub fn is_useful(a: &[i64], r: u64) -> bool {
    is_hereditarily_good(a, r) && !is_reversible(a, r)
}

/// The lens space L(r, t, a) = L(r^2 t; r t a_1 + 1, ..., r t a_n + 1).
/// Every parameter r t a_i + 1 is a unit mod r^2 t, so the quotient is
/// always a manifold; the constructor records that.
pub fn build_dd_lens(r: u64, t: u64, a: &[i64]) -> Result<LensParams> {
    if r <= 2 || t == 0 {
        return Err(Error::Precondition(format!(
            "build_dd_lens needs r > 2 and t >= 1, got r = {r}, t = {t}"
        )));
    }
    let q = (r as i128) * (r as i128) * (t as i128);
    let q_u64 = u64::try_from(q)
        .map_err(|_| Error::Precondition(format!("modulus r^2 t = {q} exceeds u64")))?;
    let s: Vec<i64> = a
        .iter()
        .map(|&ai| {
            let v = ((r as i128) * (t as i128) * (ai as i128) + 1).rem_euclid(q);
            v as i64
        })
        .collect();
    let lens = LensParams::new(q_u64, &s)?;
    debug_assert!(lens.is_manifold(), "r t a_i + 1 must be a unit mod r^2 t");
    Ok(lens)
}

fn negated(a: &[i64], r: u64) -> Vec<i64> {
    a.iter().map(|&x| (-x).rem_euclid(r as i64)).collect()
}

/// Predicates of a mod r together with the verdict on the pair
/// (L(r,t,a), L(r,t,-a)), cross-checked against what the predicates predict.
#[derive(Debug, Clone, Serialize)]
pub struct DdPairReport {
    pub r: u64,
    pub t: u64,
    pub a: Vec<i64>,
    pub univalent: bool,
    pub self_reversing: bool,
    pub reversible: bool,
    pub good: bool,
    pub hereditarily_good: bool,
    pub useful: bool,
    pub lens_a: LensParams,
    pub lens_neg_a: LensParams,
    pub isospectral: bool,
    pub isometric: bool,
    /// true when the computed geometry matches the predicate predictions:
    /// hereditarily good forces isospectral, and reversible <=> isometric.
    pub consistent: bool,
}

/// Build the pair for (r, t, a), decide isospectrality at the certified
/// cutoff and isometry by canonical keys, and confront the outcome with the
/// tuple predicates.
pub fn dd_pair_check(r: u64, t: u64, a: &[i64]) -> Result<DdPairReport> {
    let lens_a = build_dd_lens(r, t, a)?;
    let lens_neg_a = build_dd_lens(r, t, &negated(a, r))?;
    let isospectral = are_isospectral(&lens_a, &lens_neg_a);
    let isometric = are_isometric(&lens_a, &lens_neg_a);
    let hereditarily_good = is_hereditarily_good(a, r);
    let reversible = is_reversible(a, r);
    let consistent = (!hereditarily_good || isospectral) && (reversible == isometric);
    Ok(DdPairReport {
        r,
        t,
        a: a.to_vec(),
        univalent: is_univalent(a, r),
        self_reversing: is_self_reversing(a, r),
        reversible,
        good: is_good(a, r),
        hereditarily_good,
        useful: is_useful(a, r),
        lens_a,
        lens_neg_a,
        isospectral,
        isometric,
        consistent,
    })
}

/// The tuple (1, 2, ..., n-1, r - n(n-1)/2) for prime r > n^2: its entries
/// sum to exactly r, it is univalent and not self-reversing mod r, hence
/// useful mod r.
pub fn useful_tuple(n: usize, r: u64) -> Result<Vec<i64>> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    if !is_prime(r) || r <= (n * n) as u64 {
        return Err(Error::Precondition(format!(
            "need a prime r > n^2 = {}, got r = {r}",
            n * n
        )));
    }
    let mut a: Vec<i64> = (1..n as i64).collect();
    a.push(r as i64 - (n as i64 * (n as i64 - 1)) / 2);
    debug_assert_eq!(a.iter().sum::<i64>(), r as i64);
    debug_assert!(!is_self_reversing(&a, r));
    debug_assert!(is_useful(&a, r));
    Ok(a)
}

/// Shift a useful tuple to one with zero entry sum mod r defining an
/// isometric lens pair: b = a + c with c ≡ -(n^{-1}) * (sum a_i) mod r.
pub fn shift_to_zero_sum(a: &[i64], r: u64) -> Result<Vec<i64>> {
    let n = a.len() as u64;
    let m = mod_inverse(n % r, r).ok_or_else(|| {
        Error::Precondition(format!("gcd(n, r) must be 1, got n = {n}, r = {r}"))
    })?;
    if !is_useful(a, r) {
        return Err(Error::Precondition(format!(
            "tuple {a:?} is not useful mod {r}"
        )));
    }
    let s: i64 = a.iter().map(|&x| x.rem_euclid(r as i64)).sum();
    let c = (-(m as i128) * (s as i128)).rem_euclid(r as i128) as i64;
    let b: Vec<i64> = a.iter().map(|&x| (x + c).rem_euclid(r as i64)).collect();
    debug_assert_eq!(b.iter().sum::<i64>() % r as i64, 0);
    debug_assert!(is_useful(&b, r));
    Ok(b)
}

/// A pair of descending towers: level j holds the pair
/// (L(r, t k^j, a), L(r, t k^j, -a)).
#[derive(Debug, Clone, Serialize)]
pub struct TowerSpec {
    pub r: u64,
    pub t: u64,
    pub k: u64,
    pub a: Vec<i64>,
    pub depth: usize,
    pub levels: Vec<TowerLevel>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub j: usize,
    pub t_j: u64,
    pub q: u64,
    pub m: LensParams,
    pub n: LensParams,
}

/// Build the tower for a useful tuple a mod a prime r > n^2, with cover
/// ratios k ≡ 1 (mod r).
pub fn build_tower(r: u64, t: u64, k: u64, a: &[i64], depth: usize) -> Result<TowerSpec> {
    if k <= 1 || k % r != 1 {
        return Err(Error::Precondition(format!(
            "need k > 1 with k ≡ 1 mod r, got k = {k}, r = {r}"
        )));
    }
    if !is_prime(r) || r <= (a.len() * a.len()) as u64 {
        return Err(Error::Precondition(format!(
            "need a prime r > n^2, got r = {r}, n = {}",
            a.len()
        )));
    }
    if !is_useful(a, r) {
        return Err(Error::Precondition(format!(
            "tuple {a:?} is not useful mod {r}"
        )));
    }
    let neg = negated(a, r);
    let mut levels = Vec::with_capacity(depth + 1);
    let mut t_j = t;
    for j in 0..=depth {
        let m = build_dd_lens(r, t_j, a)?;
        let n = build_dd_lens(r, t_j, &neg)?;
        levels.push(TowerLevel {
            j,
            t_j,
            q: m.q(),
            m,
            n,
        });
        if j < depth {
            t_j = t_j.checked_mul(k).ok_or_else(|| {
                Error::Precondition("tower modulus exceeds u64".to_string())
            })?;
        }
    }
    Ok(TowerSpec {
        r,
        t,
        k,
        a: a.to_vec(),
        depth,
        levels,
    })
}

/// Per-level verification outcome.
#[derive(Debug, Clone, Serialize)]
pub struct TowerLevelChecks {
    pub j: usize,
    pub t_j: u64,
    pub q: u64,
    /// a is hereditarily good and irreversible mod r, which certifies the
    /// level pair isospectral and non-isometric at any t.
    pub predicate: bool,
    /// Every deeper level's parameters reduce to this level's mod r^2 t_j,
    /// witnessing the covering maps between levels.
    pub congruence: bool,
    /// Direct cutoff-certified isospectrality plus key-based non-isometry;
    /// only run up to the requested depth (cost grows linearly in t_j).
    pub full: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub r: u64,
    pub t: u64,
    pub k: u64,
    pub a: Vec<i64>,
    pub levels: Vec<TowerLevelChecks>,
    pub all_passed: bool,
}

/// A named failing check inside a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerCheckFailure {
    pub level: usize,
    pub check: &'static str,
    pub witness: String,
}

impl std::fmt::Display for TowerCheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "tower check '{}' failed at level {}: {}",
            self.check, self.level, self.witness
        )
    }
}

impl std::error::Error for TowerCheckFailure {}

/// Verify a tower level by level. Levels 0..=full_check_depth get the full
/// cutoff-certified isospectrality test; every level gets the predicate
/// certificate and the covering congruences against all deeper levels.
pub fn verify_tower(
    spec: &TowerSpec,
    full_check_depth: usize,
) -> std::result::Result<TowerReport, TowerCheckFailure> {
    let r = spec.r;
    let predicate_holds = is_useful(&spec.a, r);
    let mut levels = Vec::with_capacity(spec.levels.len());
    for level in &spec.levels {
        let j = level.j;
        if !predicate_holds {
            return Err(TowerCheckFailure {
                level: j,
                check: "predicate",
                witness: format!("tuple {:?} is not useful mod {r}", spec.a),
            });
        }

        // covering congruence: r t_i a_s + 1 ≡ r t_j a_s + 1 (mod r^2 t_j)
        // for every deeper level i, and the reduced deeper parameters name an
        // isometric copy of this level
        let q_j = (r as i128) * (r as i128) * (level.t_j as i128);
        for deeper in &spec.levels[j + 1..] {
            for (idx, &a_s) in spec.a.iter().enumerate() {
                let hi = (r as i128) * (deeper.t_j as i128) * (a_s as i128) + 1;
                let lo = (r as i128) * (level.t_j as i128) * (a_s as i128) + 1;
                if (hi - lo).rem_euclid(q_j) != 0 {
                    return Err(TowerCheckFailure {
                        level: j,
                        check: "congruence",
                        witness: format!(
                            "entry {idx}: {hi} ≢ {lo} mod {q_j} (deeper level {})",
                            deeper.j
                        ),
                    });
                }
            }
            let folded: Vec<i64> = spec
                .a
                .iter()
                .map(|&a_s| {
                    ((r as i128) * (deeper.t_j as i128) * (a_s as i128) + 1).rem_euclid(q_j) as i64
                })
                .collect();
            let folded_lens = LensParams::new(level.q, &folded).expect("n >= 2");
            if !are_isometric(&folded_lens, &level.m) {
                return Err(TowerCheckFailure {
                    level: j,
                    check: "congruence",
                    witness: format!(
                        "parameters of level {} do not fold onto level {j} mod {}",
                        deeper.j, level.q
                    ),
                });
            }
        }

        // full spectral certification on the shallow levels
        let full = if j <= full_check_depth {
            let iso = are_isospectral(&level.m, &level.n);
            let isom = are_isometric(&level.m, &level.n);
            if !iso {
                return Err(TowerCheckFailure {
                    level: j,
                    check: "full-isospectral",
                    witness: format!("{} vs {}", level.m, level.n),
                });
            }
            if isom {
                return Err(TowerCheckFailure {
                    level: j,
                    check: "full-non-isometric",
                    witness: format!("{} vs {}", level.m, level.n),
                });
            }
            Some(true)
        } else {
            None
        };

        levels.push(TowerLevelChecks {
            j,
            t_j: level.t_j,
            q: level.q,
            predicate: true,
            congruence: true,
            full,
        });
    }
    Ok(TowerReport {
        r,
        t: spec.t,
        k: spec.k,
        a: spec.a.clone(),
        levels,
        all_passed: true,
    })
}
