//! The limit point `[y] = lim [y_i]` of an admissible sequence, normalized as
//! `y = (1, ξ, ξ²)`, and the residuals of the sequence points against it.
//!
//! Certification is semi-rigorous: once the contraction `δ_{i+1} ≤ δ_i/4`
//! has been observed, the tail of `ξ_j = y_{j,1}/y_{j,0}` is dominated by a
//! geometric series, and the error bound is [`SAFETY_FACTOR`] times the gap
//! between two consecutive approximants.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{Rat, SymPoint};
use crate::numeric::ln_abs;
use crate::sequence::{effective_beta, FibSequence};

/// Multiplier applied to the consecutive-approximant gap.
pub const SAFETY_FACTOR: u32 = 5;

/// Depth budget used by [`xi_approx`].
pub const DEFAULT_MAX_DEPTH: usize = 30;

/// Guard bits added on top of the requested decimal precision.
const GUARD_BITS: u32 = 32;

/// `δ_i = |det w_i| / ‖w_i‖²` for the computed indices.
#[derive(Clone, Debug)]
pub struct DeltaSeq {
    pub deltas: Vec<Rat>,
    /// First index of the final run where `δ_{i+1} ≤ δ_i/4` holds throughout.
    pub i0: Option<usize>,
}

impl DeltaSeq {
    pub fn new(seq: &FibSequence, up_to: usize) -> Self {
        let up_to = up_to.min(seq.w_depth());
        let deltas: Vec<Rat> = (0..=up_to)
            .map(|i| {
                let n = seq.w(i).norm();
                Rat::new(seq.det(i).abs(), &n * &n)
            })
            .collect();
        let contracts = |k: usize| &deltas[k + 1] * Rat::from_integer(4.into()) <= deltas[k];
        let mut i0 = None;
        for k in (0..deltas.len().saturating_sub(1)).rev() {
            if contracts(k) {
                i0 = Some(k);
            } else {
                break;
            }
        }
        DeltaSeq { deltas, i0 }
    }

    /// Whether the contraction run covers every pair `(k, k+1)` with `k ≥ from`.
    pub fn contracting_from(&self, from: usize) -> bool {
        self.i0.is_some_and(|i0| i0 <= from)
    }

    pub fn ln_delta(&self, i: usize) -> f64 {
        ln_abs(self.deltas[i].numer()) - ln_abs(self.deltas[i].denom())
    }
}

/// `y_{i,1} / y_{i,0}`, or `None` when the first coordinate vanishes.
pub fn ratio_at(seq: &FibSequence, i: usize) -> Option<Rat> {
    let y = seq.y(i);
    (!y.x0.is_zero()).then(|| Rat::new(y.x1.clone(), y.x0.clone()))
}

/// `y_{i,2} / y_{i,0}`, which tends to `ξ²`.
pub fn square_ratio_at(seq: &FibSequence, i: usize) -> Option<Rat> {
    let y = seq.y(i);
    (!y.x0.is_zero()).then(|| Rat::new(y.x2.clone(), y.x0.clone()))
}

/// Working precision for `digits` decimal places at the given depth.
pub fn working_bits(digits: u32, depth: usize) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 2 * depth as u32 + GUARD_BITS
}

fn gap_after(seq: &FibSequence, i: usize) -> Option<(Rat, usize)> {
    let here = ratio_at(seq, i)?;
    let (j, next) = (i + 1..=seq.w_depth()).find_map(|j| ratio_at(seq, j).map(|r| (j, r)))?;
    Some(((here - next).abs(), j))
}

fn check_hypotheses(seq: &FibSequence) -> Result<()> {
    if seq.d3().is_zero() {
        return Err(Error::Degenerate("det(y0,y1,y2)=0".into()));
    }
    Ok(())
}

/// `ξ` to `digits` decimal places, using at most [`DEFAULT_MAX_DEPTH`] terms.
pub fn xi_approx(seq: &mut FibSequence, digits: u32) -> Result<BigReal> {
    xi_approx_with(seq, digits, DEFAULT_MAX_DEPTH)
}

/// `ξ ≈ y_{i,1}/y_{i,0}` at the smallest depth `i ≤ max_depth` where the
/// error model certifies `digits` decimal places.
pub fn xi_approx_with(seq: &mut FibSequence, digits: u32, max_depth: usize) -> Result<BigReal> {
    check_hypotheses(seq)?;
    let target = Rat::new(1.into(), num_traits::pow(BigInt::from(10), digits as usize));
    let mut best: Option<(f64, usize)> = None;
    for i in 2..=max_depth {
        seq.extend(i + 1);
        let Some((gap, j)) = gap_after(seq, i) else {
            continue;
        };
        let deltas = DeltaSeq::new(seq, j);
        if !deltas.contracting_from(i) {
            continue;
        }
        let err = gap * Rat::from_integer(SAFETY_FACTOR.into());
        let err_log10 = if err.is_zero() {
            f64::NEG_INFINITY
        } else {
            (ln_abs(err.numer()) - ln_abs(err.denom())) / std::f64::consts::LN_10
        };
        if best.map_or(true, |(b, _)| err_log10 < b) {
            best = Some((err_log10, i));
        }
        if err < target {
            if let Some(beta) = effective_beta(seq) {
                if beta >= 1.0 {
                    return Err(Error::Degenerate(format!("effective beta {beta:.4} >= 1")));
                }
            }
            let ratio = ratio_at(seq, i).expect("gap_after found a ratio at i");
            let bits = working_bits(digits, i);
            return Ok(BigReal::from_rat(&ratio, bits).with_extra_err(&err).with_depth(i));
        }
    }
    if let Some(beta) = effective_beta(seq) {
        if beta >= 1.0 {
            return Err(Error::Degenerate(format!("effective beta {beta:.4} >= 1")));
        }
    }
    let (best_log10, depth) = best.unwrap_or((f64::INFINITY, max_depth));
    Err(Error::PrecisionUnreachable {
        wanted: format!("{digits} digits"),
        best_log10,
        depth,
    })
}

/// Recomputes the approximant `extra` levels deeper and checks it lies
/// inside the certified interval of `xi`.
pub fn cross_check(seq: &mut FibSequence, xi: &BigReal, extra: usize) -> bool {
    let deeper = xi.depth + extra;
    seq.extend(deeper + 1);
    match ratio_at(seq, deeper) {
        Some(r) => (r - xi.to_rat()).abs() <= xi.err_rat(),
        None => false,
    }
}

/// `(1, ξ, ξ²)` at the precision of `xi`.
pub fn y_vector(xi: &BigReal) -> [BigReal; 3] {
    let one = BigReal::from_integer(1, xi.bits()).with_depth(xi.depth);
    [one, xi.clone(), xi.square()]
}

/// Decimal places of `ξ` needed so that residuals up to index `i_max` keep
/// 20 significant digits. Needs the sequence extended through `i_max + 2`.
pub fn digits_for_residuals(seq: &FibSequence, i_max: usize) -> u32 {
    let ln_big = ln_abs(&seq.w(i_max + 2).norm()) + ln_abs(&seq.w(i_max + 1).norm());
    (ln_big / std::f64::consts::LN_10).ceil() as u32 + 30
}

/// `⟨x, y⟩` for an integer point and the high-precision `y`.
pub fn scalar_with(x: &SymPoint, y: &[BigReal; 3]) -> BigReal {
    BigReal::combination(&x.coords(), y)
}

/// `‖x ∧ y‖` for an integer point and the high-precision `y`.
pub fn wedge_norm_with(x: &SymPoint, y: &[BigReal; 3]) -> BigReal {
    let [x0, x1, x2] = x.coords();
    let (n0, n1, n2) = (-x0, -x1, -x2);
    let zero = BigInt::zero();
    let comps = [
        BigReal::combination(&[&zero, &n2, x1], y),
        BigReal::combination(&[x2, &zero, &n0], y),
        BigReal::combination(&[&n1, x0, &zero], y),
    ];
    BigReal::max_abs(&comps)
}

#[derive(Clone, Debug)]
pub struct Residuals {
    /// `‖y_i ∧ y‖`
    pub wedge_norm: BigReal,
    /// `|⟨z_i, y⟩|`
    pub z_scalar: BigReal,
}

/// Residuals of `y_i` and `z_i` against `y`; both must dominate their error
/// bounds by a factor 4, otherwise `ξ` needs more digits.
pub fn residuals(seq: &FibSequence, y: &[BigReal; 3], i: usize) -> Result<Residuals> {
    let wedge_norm = wedge_norm_with(seq.y(i), y);
    let z_scalar = scalar_with(seq.zhat(i), y).div_int(seq.det(2)).abs();
    for (name, v) in [("|y_i ^ y|", &wedge_norm), ("<z_i, y>", &z_scalar)] {
        if !v.dominates_err(4) {
            return Err(Error::InsufficientPrecision(format!(
                "{name} at i = {i} is below its error bound {}; compute xi with more digits",
                v.err_string()
            )));
        }
    }
    Ok(Residuals { wedge_norm, z_scalar })
}
