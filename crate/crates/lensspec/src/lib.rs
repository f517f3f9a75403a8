//! Exact spectral geometry of lens spaces and spherical orbifolds.
//!
//! Everything is integer arithmetic: Laplace eigenvalue multiplicities of a
//! lens quotient L(q; s_1, ..., s_n) of S^{2n-1} come from one-norm counts
//! on the congruence lattice {a : sum a_i s_i ≡ 0 mod q}, and agreement of
//! the first q(n(n-1)+1) multiplicities provably determines the whole
//! spectrum, so isospectrality, isometry, and eigenvalue equivalence are all
//! decided rigorously in finite time.
//!
//! The crate covers:
//!
//! - [`lens`]: parameters, isometry classification by canonical keys, exact
//!   spectra, and the certified isospectrality decision;
//! - [`eigen`]: eigenvalue sets ignoring multiplicity (k0, equivalence,
//!   finite-part-of-spectrum bounds, long shared eigenvalue runs);
//! - [`enumeration`]: isometry-class enumeration, isospectral-family search,
//!   existence grids, and spectral-uniqueness densities;
//! - [`towers`]: tuple predicates mod r and descending isospectral towers;
//! - [`orbifold`]: signed-permutation isometry groups, almost-conjugacy
//!   (matching eigenvalue multisets element by element), and orbifold
//!   spectra via exact generating-function series;
//! - [`modarith`], [`counting`]: the shared arithmetic and the
//!   residue-class dynamic programming engine.
//!
//! The `examples/` directory holds one runnable program per capability;
//! the `lensspec` binary exposes the same operations as subcommands.

pub mod config;
pub mod counting;
pub mod eigen;
pub mod enumeration;
pub mod error;
pub mod lens;
pub mod modarith;
pub mod orbifold;
pub mod report;
pub mod towers;

pub use error::{Error, Result};
pub use lens::{
    are_isometric, are_isospectral, canonical_key, decide_isospectral, harmonic_invariant_dim,
    isospectral_cutoff, lattice_count, lattice_counts, monomial_oracle_dim, spectrum_slice,
    IsometryClassKey, LensParams, SpectrumSlice,
};
