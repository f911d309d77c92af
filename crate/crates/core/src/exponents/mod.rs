//! Estimates of the uniform exponents `ω̂₂(ξ)` and `λ̂₂(ξ)`.
//!
//! Two independent sources feed the same slope extraction:
//! the candidate points `z_i` of the sequence ([`candidate`]) and exhaustive
//! minima over all integer points of bounded height ([`brute`]).

pub mod brute;
pub mod candidate;
pub mod sweep;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymPoint;
use crate::GAMMA;

pub use brute::{lambda_bruteforce, lambda_records, omega_bruteforce, omega_records};
pub use candidate::{candidate_records, candidate_slopes, CandidateSlopes};
pub use sweep::{density_sweep, SweepOptions, SweepRow, SweepTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentKind {
    OmegaHat,
    LambdaHat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Candidate,
    Bruteforce,
}

/// One slope sample, taken at a sequence index or a record height.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeSample {
    pub at: f64,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub kind: ExponentKind,
    pub method: Method,
    pub slope_samples: Vec<SlopeSample>,
    pub estimate: f64,
    pub target_lo: Option<f64>,
    pub target_hi: Option<f64>,
}

impl ExponentEstimate {
    pub fn with_target(mut self, (lo, hi): (f64, f64)) -> Self {
        self.target_lo = Some(lo);
        self.target_hi = Some(hi);
        self
    }

    /// Whether the estimate lies in the target interval widened by `tol`.
    pub fn within_target(&self, tol: f64) -> Option<bool> {
        Some(self.target_lo? - tol <= self.estimate && self.estimate <= self.target_hi? + tol)
    }

    /// Whether the estimate respects the a priori bounds `[2, γ²]` or `[1/2, 1/γ]`.
    pub fn within_a_priori_bounds(&self, tol: f64) -> bool {
        let (lo, hi) = match self.kind {
            ExponentKind::OmegaHat => (2.0, GAMMA * GAMMA),
            ExponentKind::LambdaHat => (0.5, 1.0 / GAMMA),
        };
        lo - tol <= self.estimate && self.estimate <= hi + tol
    }
}

/// A best approximation: no point of smaller or equal height does better.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordPoint {
    pub point: SymPoint,
    pub height: BigInt,
    pub ln_height: f64,
    /// `|⟨x, y⟩|` or the simultaneous residual; `0` underflows are kept in `ln_value`.
    pub value: f64,
    pub ln_value: f64,
}

/// Uniform exponent from records `(X_j, v_j)`: samples `−ln v_j / ln X_{j+1}`,
/// estimate is the minimum over the last quarter of the samples.
pub fn uniform_slope(records: &[RecordPoint], kind: ExponentKind, method: Method) -> Result<ExponentEstimate> {
    if records.len() < 3 {
        return Err(Error::TooFewRecords(records.len()));
    }
    let slope_samples: Vec<SlopeSample> = records
        .windows(2)
        .filter(|w| w[1].ln_height > 0.0)
        .map(|w| SlopeSample {
            at: w[1].ln_height.exp(),
            slope: -w[0].ln_value / w[1].ln_height,
        })
        .collect();
    slope_estimate(slope_samples, kind, method)
}

pub(crate) fn slope_estimate(
    slope_samples: Vec<SlopeSample>,
    kind: ExponentKind,
    method: Method,
) -> Result<ExponentEstimate> {
    if slope_samples.len() < 2 {
        return Err(Error::TooFewRecords(slope_samples.len() + 1));
    }
    let tail = slope_samples.len().div_ceil(4);
    let estimate = slope_samples[slope_samples.len() - tail..]
        .iter()
        .map(|s| s.slope)
        .fold(f64::INFINITY, f64::min);
    Ok(ExponentEstimate {
        kind,
        method,
        slope_samples,
        estimate,
        target_lo: None,
        target_hi: None,
    })
}

/// `λ − (1 − 1/ω)`
pub fn jarnik_residual(lambda: f64, omega: f64) -> f64 {
    lambda - (1.0 - 1.0 / omega)
}

/// Jarník's relation `λ̂ = 1 − 1/ω̂` up to `tol`.
pub fn jarnik_check(lambda: f64, omega: f64, tol: f64) -> bool {
    jarnik_residual(lambda, omega).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(h: u128, v: f64) -> RecordPoint {
        RecordPoint {
            point: SymPoint::zero(),
            height: h.into(),
            ln_height: (h as f64).ln(),
            value: v,
            ln_value: v.ln(),
        }
    }

    #[test]
    fn synthetic_slope_two() {
        let heights = [2u128, 5, 11, 30, 77, 200, 512, 1500, 3000];
        let records: Vec<_> = heights
            .windows(2)
            .map(|w| rec(w[0], (w[1] as f64).powi(-2)))
            .chain(std::iter::once(rec(3000, 1e-9)))
            .collect();
        let est = uniform_slope(&records, ExponentKind::OmegaHat, Method::Bruteforce).unwrap();
        assert!((est.estimate - 2.0).abs() < 1e-12, "{}", est.estimate);
    }

    #[test]
    fn too_few_records() {
        let r = [rec(1, 0.5), rec(2, 0.1)];
        assert_eq!(
            uniform_slope(&r, ExponentKind::OmegaHat, Method::Bruteforce),
            Err(Error::TooFewRecords(2))
        );
    }

    #[test]
    fn jarnik_anchors() {
        assert!(jarnik_check(0.5, 2.0, 0.0));
        assert!(jarnik_check(1.0 / GAMMA, GAMMA * GAMMA, 1e-9));
        assert!(!jarnik_check(0.55, 2.1, 0.01));
    }

    #[test]
    fn target_check() {
        let est = slope_estimate(
            vec![SlopeSample { at: 1.0, slope: 2.1 }, SlopeSample { at: 2.0, slope: 2.2 }],
            ExponentKind::OmegaHat,
            Method::Candidate,
        )
        .unwrap()
        .with_target((2.15, 2.3));
        assert_eq!(est.estimate, 2.2);
        assert_eq!(est.within_target(0.0), Some(true));
        assert!(est.within_a_priori_bounds(0.0));
    }
}
