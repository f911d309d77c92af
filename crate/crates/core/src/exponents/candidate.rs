//! Slopes read off the sequence itself: `z_i` for the linear form and `y_i`
//! for simultaneous approximation.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{slope_estimate, ExponentEstimate, ExponentKind, Method, RecordPoint, SlopeSample};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::numeric::ln_abs;
use crate::sequence::{effective_beta, FibSequence};
use crate::xi::{digits_for_residuals, scalar_with, wedge_norm_with, xi_approx_with, y_vector, DEFAULT_MAX_DEPTH};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateSlopes {
    pub omega: ExponentEstimate,
    /// `−ln‖y_i ∧ y‖ / ln‖y_{i+1}‖`; reported, not an estimate of `λ̂₂`.
    pub lambda_diagnostic: ExponentEstimate,
    /// `ln|det w_i| / ln‖w_i‖` at the deepest index.
    pub beta_star: Option<f64>,
}

fn certified(v: BigReal, what: &str, i: usize) -> Result<BigReal> {
    if v.dominates_err(4) {
        Ok(v.abs())
    } else {
        Err(Error::InsufficientPrecision(format!(
            "{what} at i = {i} is below its error bound {}; compute xi with more digits",
            v.err_string()
        )))
    }
}

/// The content-reduced points `z_i` with their values `|⟨z_i, y⟩|`.
pub fn candidate_records(seq: &FibSequence, y: &[BigReal; 3], range: RangeInclusive<usize>) -> Result<Vec<RecordPoint>> {
    range
        .map(|i| {
            let z = seq.reduced_z(i);
            let v = certified(scalar_with(&z, y), "<z_i, y>", i)?;
            let height = z.norm();
            let ln_value = v.ln_abs();
            Ok(RecordPoint {
                ln_height: ln_abs(&height),
                height,
                point: z,
                value: ln_value.exp(),
                ln_value,
            })
        })
        .collect()
}

/// Slope samples over `range`: `s_i = −ln|⟨z_i, y⟩| / ln‖z_{i+1}‖` with reduced
/// `z`, and the `y_i` diagnostic. Needs `ẑ` through `range.end() + 1`.
pub fn candidate_slopes(seq: &FibSequence, y: &[BigReal; 3], range: RangeInclusive<usize>) -> Result<CandidateSlopes> {
    let (lo, hi) = (*range.start(), *range.end());
    if seq.depth() < hi + 1 {
        return Err(Error::InvalidParams(format!(
            "sequence extended to z_{}, need z_{}",
            seq.depth(),
            hi + 1
        )));
    }
    let records = candidate_records(seq, y, lo..=hi + 1)?;
    let omega_samples = records
        .windows(2)
        .zip(lo..)
        .filter(|(w, _)| w[1].ln_height > 0.0)
        .map(|(w, i)| SlopeSample {
            at: i as f64,
            slope: -w[0].ln_value / w[1].ln_height,
        })
        .collect();
    let lambda_samples = (lo..=hi)
        .filter(|&i| ln_abs(&seq.y(i + 1).norm()) > 0.0)
        .map(|i| {
            let v = certified(wedge_norm_with(seq.y(i), y), "|y_i ^ y|", i)?;
            Ok(SlopeSample {
                at: i as f64,
                slope: -v.ln_abs() / ln_abs(&seq.y(i + 1).norm()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CandidateSlopes {
        omega: slope_estimate(omega_samples, ExponentKind::OmegaHat, Method::Candidate)?,
        lambda_diagnostic: slope_estimate(lambda_samples, ExponentKind::LambdaHat, Method::Candidate)?,
        beta_star: effective_beta(seq),
    })
}

/// `ξ` precise enough for slopes through `i_max` (residuals through
/// `i_max + 1`), together with `y`.
pub fn xi_for_slopes(seq: &mut FibSequence, i_max: usize) -> Result<(BigReal, [BigReal; 3])> {
    seq.extend(i_max + 4);
    let digits = digits_for_residuals(seq, i_max + 1);
    let xi = xi_approx_with(seq, digits, DEFAULT_MAX_DEPTH.max(i_max + 12))?;
    let y = y_vector(&xi);
    Ok((xi, y))
}
