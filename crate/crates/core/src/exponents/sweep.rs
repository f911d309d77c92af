//! One row of estimates per `(k, ℓ)` family.

use serde::{Deserialize, Serialize};

use super::brute::{lambda_records, omega_records};
use super::candidate::{candidate_slopes, xi_for_slopes};
use super::{jarnik_residual, uniform_slope, ExponentKind, Method};
use crate::error::{Error, Result};
use crate::families::{family_sequence, target_interval, TargetParams};

/// The `(k, ℓ)` grid used when none is given.
pub const DEFAULT_GRID: [(u32, u32); 6] = [(3, 1), (4, 1), (5, 1), (5, 2), (7, 2), (8, 3)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub i_max: usize,
    /// Brute-force height for `ω̂`; skipped when absent.
    pub x_omega: Option<u64>,
    /// Brute-force height for `λ̂`; skipped when absent.
    pub x_lambda: Option<u64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            i_max: 14,
            x_omega: None,
            x_lambda: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u32,
    pub l: u32,
    pub a: String,
    pub b: String,
    pub c: String,
    pub depth: usize,
    pub target_lo: f64,
    pub target_hi: f64,
    pub omega_candidate: f64,
    pub omega_brute: Option<f64>,
    pub lambda_brute: Option<f64>,
    pub jarnik_residual: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record([
                "k", "l", "a", "b", "c", "depth", "target_lo", "target_hi", "omega_candidate",
                "omega_brute", "lambda_brute", "jarnik_residual",
            ])
            .map_err(|e| Error::Serialize(e.to_string()))?;
        }
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Serialize(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    /// `max target_hi − min target_lo` over the rows.
    pub fn target_span(&self) -> f64 {
        let lo = self.rows.iter().map(|r| r.target_lo).fold(f64::INFINITY, f64::min);
        let hi = self.rows.iter().map(|r| r.target_hi).fold(f64::NEG_INFINITY, f64::max);
        (hi - lo).max(0.0)
    }
}

/// Estimates for one family.
pub fn sweep_row(p: &TargetParams, opts: &SweepOptions) -> Result<SweepRow> {
    let mut seq = family_sequence(&p.family)?;
    let (xi, y) = xi_for_slopes(&mut seq, opts.i_max)?;
    let cand = candidate_slopes(&seq, &y, 3..=opts.i_max)?;
    let omega_brute = opts
        .x_omega
        .map(|x| uniform_slope(&omega_records(&y, x)?, ExponentKind::OmegaHat, Method::Bruteforce))
        .transpose()?
        .map(|e| e.estimate);
    let lambda_brute = opts
        .x_lambda
        .map(|x| uniform_slope(&lambda_records(&y, x)?, ExponentKind::LambdaHat, Method::Bruteforce))
        .transpose()?
        .map(|e| e.estimate);
    let (target_lo, target_hi) = target_interval(p);
    Ok(SweepRow {
        k: p.k,
        l: p.l,
        a: p.family.a.to_string(),
        b: p.family.b.to_string(),
        c: p.family.c.to_string(),
        depth: xi.depth,
        target_lo,
        target_hi,
        omega_candidate: cand.omega.estimate,
        omega_brute,
        lambda_brute,
        jarnik_residual: lambda_brute.map(|l| jarnik_residual(l, cand.omega.estimate)),
    })
}

/// One row per grid entry, in grid order.
pub fn density_sweep(grid: &[TargetParams], opts: &SweepOptions) -> Result<SweepTable> {
    let rows = grid.iter().map(|p| sweep_row(p, opts)).collect::<Result<_>>()?;
    Ok(SweepTable { rows })
}

/// [`DEFAULT_GRID`] as parameters.
pub fn default_grid() -> Vec<TargetParams> {
    DEFAULT_GRID
        .iter()
        .map(|&(k, l)| TargetParams::from_kl(k, l).expect("grid entries satisfy 0 < ℓ < k"))
        .collect()
}
