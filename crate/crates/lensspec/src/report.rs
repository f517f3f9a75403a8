//! Table emitters (CSV and JSON) and the command output envelope.
//!
//! The CSV schemas are stable:
//!
//! - isospectral-family table: `q,q0,n,pair_a,pair_b` with parameters
//!   space-separated inside each pair column;
//! - existence grid: first column `n`, one column per q, cells
//!   `none` / `pair` / `pair_highest`;
//! - density table: `n,x,non_unique,total,density` with the density of
//!   spectrally unique classes printed to five decimal places.
//!
//! Integers that can exceed 64 bits (multiplicities, lattice counts) are
//! serialized as decimal strings in JSON.

use crate::config::RunConfig;
use crate::enumeration::{
    find_isospectral_families, DensityReport, EnumerationMode, ExistenceTable, FamilyReport,
    SearchOptions,
};
use crate::error::Result;
use crate::lens::IsometryClassKey;
use crate::modarith::totient;
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::Path;

pub fn serialize_biguint<S: serde::Serializer>(
    v: &BigUint,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&v.to_string())
}

/// One row of the isospectral-family table: one irreducible family at
/// (q, n), listing its irreducible members in increasing order. Published
/// versions of this table print only the least pair of one family per
/// (q, n); this emitter keeps every family, so those tables are row subsets.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyTableRow {
    pub q: u64,
    pub q0: u64,
    pub n: usize,
    pub members: Vec<Vec<u64>>,
}

/// The irreducible members of each family at (q, n); families retaining
/// fewer than two irreducible members (pure extension families) drop out.
pub fn irreducible_families(report: &FamilyReport) -> Vec<Vec<IsometryClassKey>> {
    let is_irr = |key: &IsometryClassKey| {
        let s: Vec<i64> = key.canonical_s.iter().map(|&x| x as i64).collect();
        let lens = crate::lens::LensParams::new(report.q, &s).expect("n >= 2");
        crate::enumeration::is_irreducible(&lens).unwrap_or(false)
    };
    report
        .families
        .iter()
        .map(|family| family.iter().filter(|k| is_irr(k)).cloned().collect::<Vec<_>>())
        .filter(|irr| irr.len() >= 2)
        .collect()
}

/// Compute the family-table rows for 3 <= n <= nmax, 3 <= q <= qmax,
/// optionally checkpointing each (n, q) cell under `work_dir`.
pub fn family_table(
    nmax: usize,
    qmax: u64,
    opts: &SearchOptions,
    work_dir: Option<&Path>,
) -> Result<Vec<FamilyTableRow>> {
    let mut rows = Vec::new();
    for q in 3..=qmax {
        for n in 3..=nmax {
            let report = families_with_checkpoint(n, q, EnumerationMode::Manifold, opts, work_dir)?;
            for family in irreducible_families(&report) {
                rows.push(FamilyTableRow {
                    q,
                    q0: totient(q) / 2,
                    n,
                    members: family.into_iter().map(|k| k.canonical_s).collect(),
                });
            }
        }
    }
    Ok(rows)
}

/// Run the family search, replaying a prior result from the work directory
/// when one exists and recording the outcome otherwise. Resume is keyed on
/// (n, q, mode, cutoff), so changing options invalidates nothing silently.
pub fn families_with_checkpoint(
    n: usize,
    q: u64,
    mode: EnumerationMode,
    opts: &SearchOptions,
    work_dir: Option<&Path>,
) -> Result<FamilyReport> {
    let Some(dir) = work_dir else {
        return Ok(find_isospectral_families(n, q, mode, opts));
    };
    let mode_tag = match mode {
        EnumerationMode::Manifold => "m",
        EnumerationMode::Orbifold => "o",
    };
    let cutoff_tag = opts
        .cutoff_override
        .map(|c| c.to_string())
        .unwrap_or_else(|| "full".to_string());
    let path = dir.join(format!("cell_n{n}_q{q}_{mode_tag}_{cutoff_tag}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(report) = serde_json::from_str::<FamilyReport>(&text) {
            return Ok(report);
        }
        // unreadable checkpoint: fall through and recompute
    }
    let report = find_isospectral_families(n, q, mode, opts);
    std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::write(&path, serde_json::to_string(&report).expect("serializable")))
        .map_err(|e| crate::error::Error::Internal(format!("checkpoint write failed: {e}")))?;
    Ok(report)
}

fn join_params(s: &[u64]) -> String {
    s.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn family_table_csv(rows: &[FamilyTableRow]) -> String {
    let mut out = String::from("q,q0,n,members\n");
    for r in rows {
        let members = r
            .members
            .iter()
            .map(|m| join_params(m))
            .collect::<Vec<_>>()
            .join(" | ");
        out.push_str(&format!("{},{},{},{}\n", r.q, r.q0, r.n, members));
    }
    out
}

pub fn existence_csv(table: &ExistenceTable) -> String {
    let mut out = String::from("n");
    for q in table.q_min..=table.q_max {
        out.push_str(&format!(",{q}"));
    }
    out.push('\n');
    for (i, row) in table.rows.iter().enumerate() {
        out.push_str(&(table.n_min + i).to_string());
        for cell in row {
            out.push(',');
            out.push_str(cell.symbol());
        }
        out.push('\n');
    }
    out
}

pub fn density_csv(reports: &[DensityReport]) -> String {
    let mut out = String::from("n,x,non_unique,total,density\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.x,
            r.non_unique_count,
            r.total_count,
            r.density_5dp()
        ));
    }
    out
}

/// The JSON envelope every subcommand emits in `--format json`.
pub fn envelope(command: &str, config: &RunConfig, result: Value, certificates: Value) -> Value {
    json!({
        "command": command,
        "config": config,
        "result": result,
        "certificates": certificates,
    })
}
