//! Exhaustive minima over integer points of bounded height.
//!
//! `ξ` and `ξ²` are rounded once to `i128` fixed point; each scan then runs on
//! machine integers. Chunks of the search range are processed in parallel and
//! each returns its local records; merging them under a total order keeps the
//! output independent of the thread count.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::RecordPoint;
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::SymPoint;

/// Heights searched over the full cube, `x₀` included.
const SMALL_CUBE: u64 = 40;
const MAX_FRAC_BITS: u32 = 100;
const MIN_FRAC_BITS: u32 = 48;
const OMEGA_ROWS_PER_CHUNK: u64 = 32;
const LAMBDA_CHUNK: u64 = 1 << 16;

struct Fixed {
    xi: i128,
    xi2: i128,
    /// Fractional parts of `ξ`, `ξ²` scaled by `2^128`, for wrapping arithmetic.
    xi_w: u128,
    xi2_w: u128,
    frac: u32,
    /// Values at or below this many ulps are indistinguishable from zero.
    zero_tol: u128,
}

fn to_fixed(v: &BigReal, frac: u32) -> Result<(i128, u128)> {
    let m = v.mantissa();
    let (fixed, err) = if v.bits() >= frac {
        let s = v.bits() - frac;
        let rounded = if s == 0 {
            m.clone()
        } else {
            (m + (BigInt::one() << (s - 1))) >> s
        };
        let err = (v.err_units() >> s) + 1u32;
        (rounded, err)
    } else {
        let s = frac - v.bits();
        (m << s, (v.err_units() << s) + 1u32)
    };
    let fixed = fixed
        .to_i128()
        .ok_or_else(|| Error::InsufficientPrecision("ξ does not fit the fixed-point range".into()))?;
    let err = err.to_u128().unwrap_or(u128::MAX);
    Ok((fixed, err))
}

fn wrapping_fraction(v: &BigReal) -> u128 {
    let modulus = BigInt::one() << 128u32;
    let scaled = (v.mantissa() << 128u32) >> v.bits();
    scaled.mod_floor(&modulus).to_u128().expect("reduced modulo 2^128")
}

impl Fixed {
    fn new(y: &[BigReal; 3], x_max: u64) -> Result<Self> {
        if x_max == 0 {
            return Err(Error::InvalidParams("X must be at least 1".into()));
        }
        let one = &y[0];
        if !one.is_exact() || one.mantissa() != &(BigInt::one() << one.bits()) {
            return Err(Error::InvalidParams("y must be normalized as (1, ξ, ξ²)".into()));
        }
        let x4 = BigUint::from(x_max).pow(4);
        for v in &y[1..] {
            if v.err_units() * &x4 >= BigUint::one() << v.bits() {
                return Err(Error::InsufficientPrecision(format!(
                    "error bound {} of y is not below X^-4 for X = {x_max}",
                    v.err_string()
                )));
            }
        }
        let bound = x_max as f64 * (1.0 + y[1].to_f64().abs() + y[2].to_f64().abs()) + 2.0;
        let needed = bound.log2().ceil() as u32 + 1;
        let frac = 126u32.saturating_sub(needed).min(MAX_FRAC_BITS);
        if frac < MIN_FRAC_BITS {
            return Err(Error::InsufficientPrecision(format!(
                "X = {x_max} leaves only {frac} fractional bits for ξ = {:.3e}",
                y[1].to_f64()
            )));
        }
        let (xi, e1) = to_fixed(&y[1], frac)?;
        let (xi2, e2) = to_fixed(&y[2], frac)?;
        let (xi_w, xi2_w) = (wrapping_fraction(&y[1]), wrapping_fraction(&y[2]));
        let zero_tol = u128::from(x_max)
            .saturating_mul(e1.saturating_add(e2))
            .saturating_add(1);
        Ok(Fixed {
            xi,
            xi2,
            xi_w,
            xi2_w,
            frac,
            zero_tol,
        })
    }

    /// The `x₁` in `[−X, X]` for which `|x₁ξ + x₂ξ²| ≤ X + 1` is possible,
    /// widened by a margin for the floating-point bounds.
    fn x1_window(&self, x2: i64, x_max: u64) -> Option<(i64, i64)> {
        let x = x_max as i64;
        let xi = self.xi as f64 / (self.frac as f64).exp2();
        let s = x2 as f64 * (self.xi2 as f64 / (self.frac as f64).exp2());
        let reach = x_max as f64 + 1.0;
        if xi.abs() < 1e-9 {
            return (s.abs() <= reach + 1.0).then_some((-x, x));
        }
        let (a, b) = ((-reach - s) / xi, (reach - s) / xi);
        let (lo, hi) = (a.min(b).floor() - 2.0, a.max(b).ceil() + 2.0);
        let lo = lo.max(-(x as f64)) as i64;
        let hi = hi.min(x as f64) as i64;
        (lo <= hi).then_some((lo, hi))
    }

    fn half(&self) -> i128 {
        1i128 << (self.frac - 1)
    }

    fn clamp_zero(&self, v: u128) -> u128 {
        if v <= self.zero_tol {
            0
        } else {
            v
        }
    }

    fn record(&self, key: &Key) -> RecordPoint {
        let [x0, x1, x2] = key.p;
        let ln_value = if key.v == 0 {
            f64::NEG_INFINITY
        } else {
            (key.v as f64).ln() - f64::from(self.frac) * std::f64::consts::LN_2
        };
        RecordPoint {
            point: SymPoint::new(x0, x1, x2),
            height: BigInt::from(key.h),
            ln_height: (key.h as f64).ln(),
            value: ln_value.exp(),
            ln_value,
        }
    }
}

/// Total order used for every comparison: value, height, `|x₂|`, `|x₁|`, point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    v: u128,
    h: u64,
    ax2: u64,
    ax1: u64,
    p: [i64; 3],
}

impl Key {
    fn new(v: u128, x0: i64, x1: i64, x2: i64) -> Self {
        let first = [x0, x1, x2].into_iter().find(|&c| c != 0).unwrap_or(0);
        let p = if first < 0 { [-x0, -x1, -x2] } else { [x0, x1, x2] };
        Key {
            v,
            h: x0.unsigned_abs().max(x1.unsigned_abs()).max(x2.unsigned_abs()),
            ax2: x2.unsigned_abs(),
            ax1: x1.unsigned_abs(),
            p,
        }
    }
}

/// Per-height minima of one chunk.
struct HeightMins {
    vals: Vec<u128>,
    keys: Vec<Option<Key>>,
}

impl HeightMins {
    fn new(x_max: u64) -> Self {
        let n = x_max as usize + 1;
        HeightMins {
            vals: vec![u128::MAX; n],
            keys: vec![None; n],
        }
    }

    #[inline]
    fn offer(&mut self, v: u128, x0: i64, x1: i64, x2: i64) {
        let h = x0.unsigned_abs().max(x1.unsigned_abs()).max(x2.unsigned_abs()) as usize;
        if v > self.vals[h] {
            return;
        }
        let key = Key::new(v, x0, x1, x2);
        if self.keys[h].map_or(true, |k| key < k) {
            self.vals[h] = v;
            self.keys[h] = Some(key);
        }
    }

    /// Entries that beat every entry of smaller height.
    fn local_records(self) -> Vec<Key> {
        let mut out = Vec::new();
        let mut best = u128::MAX;
        for k in self.keys.into_iter().flatten() {
            if k.v < best {
                best = k.v;
                out.push(k);
            }
        }
        out
    }
}

/// Records of a merged candidate list: sort by height then key, keep strict
/// improvements in value.
fn merge_records(mut keys: Vec<Key>) -> Vec<Key> {
    keys.sort_by(|a, b| a.h.cmp(&b.h).then(a.cmp(b)));
    let mut out: Vec<Key> = Vec::new();
    for k in keys {
        if out.last().map_or(true, |last| k.v < last.v) {
            out.push(k);
        }
    }
    out
}

fn small_cube(f: &Fixed, h0: u64) -> HeightMins {
    let mut mins = HeightMins::new(h0);
    let h = h0 as i64;
    let one = 1i128 << f.frac;
    for x2 in 0..=h {
        for x1 in -h..=h {
            for x0 in -h..=h {
                if x2 == 0 && (x1 < 0 || (x1 == 0 && x0 <= 0)) {
                    continue;
                }
                let r = i128::from(x0) * one + i128::from(x1) * f.xi + i128::from(x2) * f.xi2;
                mins.offer(f.clamp_zero(r.unsigned_abs()), x0, x1, x2);
            }
        }
    }
    mins
}

fn omega_rows(f: &Fixed, x_max: u64, rows: std::ops::Range<u64>) -> Vec<Key> {
    let mut mins = HeightMins::new(x_max);
    let x = x_max as i64;
    let xm = i128::from(x);
    let half = f.half();
    let frac = f.frac;
    let one = 1i128 << frac;
    for x2 in rows {
        let x2 = x2 as i64;
        let Some((lo, hi)) = f.x1_window(x2, x_max) else {
            continue;
        };
        let mut t = i128::from(x2) * f.xi2 + i128::from(lo) * f.xi;
        for x1 in lo..=hi {
            if x2 > 0 || x1 > 0 {
                let n = (t + half) >> frac;
                let x0 = (-n).clamp(-xm, xm);
                let r = t + (x0 << frac);
                mins.offer(f.clamp_zero(r.unsigned_abs()), x0 as i64, x1, x2);
                if r == -half && x0 < xm {
                    mins.offer(f.clamp_zero((r + one).unsigned_abs()), x0 as i64 + 1, x1, x2);
                }
            }
            t += f.xi;
        }
    }
    mins.local_records()
}

fn omega_keys(y: &[BigReal; 3], x_max: u64) -> Result<(Fixed, Vec<Key>)> {
    let f = Fixed::new(y, x_max)?;
    let h0 = x_max.min(SMALL_CUBE);
    let mut keys = small_cube(&f, h0).local_records();
    if h0 < x_max {
        let half = f.half() as u128;
        if keys.last().map_or(true, |k| k.v >= half) {
            return Err(Error::InvalidParams(format!(
                "no point of height ≤ {h0} comes within 1/2 of the linear form; ξ is out of range for the scan"
            )));
        }
        let chunks: Vec<std::ops::Range<u64>> = (0..=x_max)
            .step_by(OMEGA_ROWS_PER_CHUNK as usize)
            .map(|s| s..(s + OMEGA_ROWS_PER_CHUNK).min(x_max + 1))
            .collect();
        let scanned: Vec<Key> = chunks
            .into_par_iter()
            .flat_map_iter(|rows| omega_rows(&f, x_max, rows))
            .collect();
        keys.extend(scanned);
    }
    Ok((f, merge_records(keys)))
}

/// Record points of `|x₀ + x₁ξ + x₂ξ²|` over non-zero `x` with `‖x‖ ≤ X`,
/// in increasing height.
pub fn omega_records(y: &[BigReal; 3], x_max: u64) -> Result<Vec<RecordPoint>> {
    let (f, keys) = omega_keys(y, x_max)?;
    Ok(keys.iter().map(|k| f.record(k)).collect())
}

fn omega_min_rows(f: &Fixed, x_max: u64, rows: std::ops::Range<u64>) -> Option<Key> {
    let x = x_max as i64;
    let xm = i128::from(x);
    let half = f.half();
    let frac = f.frac;
    let one = 1i128 << frac;
    // The prefilter works on 64-bit fractions; truncating ξ, ξ² costs at most
    // one unit per step, covered by `slack`.
    let (xi_w, xi2_w) = ((f.xi_w >> 64) as u64, (f.xi2_w >> 64) as u64);
    let slack = 4 * x_max + 8 + (f.zero_tol >> frac.saturating_sub(64)).min(u128::from(u64::MAX / 2)) as u64;
    let to_64 = |v: u128| -> u64 {
        let scaled = if frac >= 64 { v >> (frac - 64) } else { v << (64 - frac) };
        scaled.min(u128::from(u64::MAX / 2)) as u64
    };
    let mut best = RunningMin::default();
    best.offer(f.clamp_zero(one as u128), 1, 0, 0);
    let mut threshold = to_64(best.v) + slack;
    for x2 in rows {
        let x2 = x2 as i64;
        let Some((lo, hi)) = f.x1_window(x2, x_max) else {
            continue;
        };
        let mut w = (x2 as u64)
            .wrapping_mul(xi2_w)
            .wrapping_add((lo as u64).wrapping_mul(xi_w));
        for x1 in lo..=hi {
            // Distance to the nearest integer, modulo 1.
            let d = w.min(w.wrapping_neg());
            if d <= threshold && (x2 > 0 || x1 > 0) {
                let t = i128::from(x2) * f.xi2 + i128::from(x1) * f.xi;
                let n = (t + half) >> frac;
                let x0 = (-n).clamp(-xm, xm);
                let r = t + (x0 << frac);
                best.offer(f.clamp_zero(r.unsigned_abs()), x0 as i64, x1, x2);
                if r == -half && x0 < xm {
                    best.offer(f.clamp_zero((r + one).unsigned_abs()), x0 as i64 + 1, x1, x2);
                }
                threshold = to_64(best.v) + slack;
            }
            w = w.wrapping_add(xi_w);
        }
    }
    best.key
}

struct RunningMin {
    v: u128,
    key: Option<Key>,
}

impl Default for RunningMin {
    fn default() -> Self {
        RunningMin { v: u128::MAX, key: None }
    }
}

impl RunningMin {
    #[inline]
    fn offer(&mut self, v: u128, x0: i64, x1: i64, x2: i64) {
        if v > self.v {
            return;
        }
        let key = Key::new(v, x0, x1, x2);
        if self.key.map_or(true, |b| key < b) {
            self.v = v;
            self.key = Some(key);
        }
    }
}

/// The minimizer of `|x₀ + x₁ξ + x₂ξ²|` over `0 < ‖x‖ ≤ X`, sign-canonical.
///
/// Unlike [`omega_records`] this keeps a single running minimum, which makes
/// it several times faster at large `X`.
pub fn omega_bruteforce(y: &[BigReal; 3], x_max: u64) -> Result<RecordPoint> {
    let f = Fixed::new(y, x_max)?;
    let best = (0..=x_max)
        .step_by(OMEGA_ROWS_PER_CHUNK as usize)
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|s| omega_min_rows(&f, x_max, s..(s + OMEGA_ROWS_PER_CHUNK).min(x_max + 1)))
        .min()
        .expect("the scan visits (1, 0, 0)");
    Ok(f.record(&best))
}

/// [`omega_bruteforce`] at each height.
pub fn omega_argmins(y: &[BigReal; 3], heights: &[u64]) -> Result<Vec<RecordPoint>> {
    heights.iter().map(|&h| omega_bruteforce(y, h)).collect()
}

fn lambda_chunk(f: &Fixed, range: std::ops::Range<u64>) -> Vec<Key> {
    let half = f.half();
    let frac = f.frac;
    let mut out = Vec::new();
    let mut best = u128::MAX;
    for x0 in range {
        let x = i128::from(x0);
        let t1 = x * f.xi;
        let t2 = x * f.xi2;
        let n1 = (t1 + half) >> frac;
        let n2 = (t2 + half) >> frac;
        let d1 = (t1 - (n1 << frac)).unsigned_abs();
        let d2 = (t2 - (n2 << frac)).unsigned_abs();
        let v = f.clamp_zero(d1.max(d2));
        if v < best {
            best = v;
            out.push(Key {
                v,
                h: x0,
                ax2: n2.unsigned_abs() as u64,
                ax1: n1.unsigned_abs() as u64,
                p: [x0 as i64, n1 as i64, n2 as i64],
            });
        }
    }
    out
}

/// Record denominators `x₀ ≤ X` of `max(|x₀ξ − x₁|, |x₀ξ² − x₂|)`; the
/// height of a record is `x₀`.
pub fn lambda_records(y: &[BigReal; 3], x_max: u64) -> Result<Vec<RecordPoint>> {
    let f = Fixed::new(y, x_max)?;
    let chunks: Vec<std::ops::Range<u64>> = (1..=x_max)
        .step_by(LAMBDA_CHUNK as usize)
        .map(|s| s..(s + LAMBDA_CHUNK).min(x_max + 1))
        .collect();
    let keys: Vec<Key> = chunks
        .into_par_iter()
        .flat_map_iter(|r| lambda_chunk(&f, r))
        .collect();
    let mut out: Vec<Key> = Vec::new();
    for k in keys {
        if out.last().map_or(true, |last| k.v < last.v) {
            out.push(k);
        }
    }
    Ok(out.iter().map(|k| f.record(k)).collect())
}

/// The best simultaneous approximation with denominator `1 ≤ x₀ ≤ X`.
pub fn lambda_bruteforce(y: &[BigReal; 3], x_max: u64) -> Result<RecordPoint> {
    Ok(lambda_records(y, x_max)?.pop().expect("x₀ = 1 is always a record"))
}

/// `y = (1, ξ, ξ²)` for a rational `ξ = p/q`, at `bits` fractional bits.
pub fn rational_y(p: i64, q: i64, bits: u32) -> [BigReal; 3] {
    let xi = BigReal::from_rat(&crate::linalg::Rat::new(p.into(), q.into()), bits);
    crate::xi::y_vector(&xi)
}
