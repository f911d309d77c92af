//! Fixed-point arbitrary-precision reals with an explicit error bound.
//!
//! A [`BigReal`] stores `mantissa / 2^bits` together with an error bound
//! `err / 2^bits`; the true value lies within that bound. Arithmetic
//! propagates the bound and adds one unit for every rounding.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Rat;
use crate::numeric::ln_abs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigReal {
    mantissa: BigInt,
    bits: u32,
    err: BigUint,
    /// Index of the deepest sequence term the value was derived from.
    pub depth: usize,
}

/// `round(num / den)` with ties away from zero; `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if (r << 1u32) >= *den {
        q + 1u32
    } else {
        q
    }
}

fn ceil_div(num: &BigUint, den: &BigUint) -> BigUint {
    num.div_ceil(den)
}

impl BigReal {
    /// Exact value `n`.
    pub fn from_integer(n: impl Into<BigInt>, bits: u32) -> Self {
        BigReal {
            mantissa: n.into() << bits,
            bits,
            err: BigUint::zero(),
            depth: 0,
        }
    }

    /// `q` rounded to `bits` fractional bits; exact when `q` is dyadic.
    pub fn from_rat(q: &Rat, bits: u32) -> Self {
        let num = q.numer() << bits;
        let den = q.denom();
        let exact = num.is_multiple_of(den);
        BigReal {
            mantissa: round_div(&num, den),
            bits,
            err: if exact { BigUint::zero() } else { BigUint::one() },
            depth: 0,
        }
    }

    /// Widens the error bound by a non-negative rational amount.
    pub fn with_extra_err(mut self, extra: &Rat) -> Self {
        let scaled = extra.abs() * Rat::from_integer(BigInt::one() << self.bits);
        let units = scaled.ceil().to_integer();
        self.err += units.to_biguint().expect("non-negative");
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Error bound in units of `2^-bits`.
    pub fn err_units(&self) -> &BigUint {
        &self.err
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.mantissa.clone(), BigInt::one() << self.bits)
    }

    pub fn err_rat(&self) -> Rat {
        Rat::new(BigInt::from(self.err.clone()), BigInt::one() << self.bits)
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// `log10` of the error bound, `-inf` when exact.
    pub fn err_log10(&self) -> f64 {
        if self.err.is_zero() {
            return f64::NEG_INFINITY;
        }
        (ln_abs(&BigInt::from(self.err.clone())) - f64::from(self.bits) * std::f64::consts::LN_2)
            / std::f64::consts::LN_10
    }

    /// `ln |value|` of the centre value.
    pub fn ln_abs(&self) -> f64 {
        ln_abs(&self.mantissa) - f64::from(self.bits) * std::f64::consts::LN_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.mantissa.is_zero() {
            return 0.0;
        }
        let sign = if self.mantissa.is_negative() { -1.0 } else { 1.0 };
        sign * self.ln_abs().exp()
    }

    /// The sign of the value is certain: `|mantissa| > err`.
    pub fn is_certified_nonzero(&self) -> bool {
        self.mantissa.magnitude() > &self.err
    }

    /// `|mantissa| > factor·err`
    pub fn dominates_err(&self, factor: u32) -> bool {
        self.mantissa.magnitude() > &(&self.err * factor)
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// Product with error `|a|e_b + |b|e_a + e_a e_b`, plus one rounding unit.
    pub fn mul(&self, other: &BigReal) -> Self {
        assert_eq!(self.bits, other.bits, "operands must share precision");
        let bits = self.bits;
        let scale = BigInt::one() << bits;
        let mantissa = round_div(&(&self.mantissa * &other.mantissa), &scale);
        let ea = &self.err;
        let eb = &other.err;
        let cross = self.mantissa.magnitude() * eb + other.mantissa.magnitude() * ea + ea * eb;
        let mut err = ceil_div(&cross, scale.magnitude());
        if !(self.is_exact() && other.is_exact() && (&self.mantissa * &other.mantissa).is_multiple_of(&scale)) {
            err += 1u32;
        }
        BigReal {
            mantissa,
            bits,
            err,
            depth: self.depth.max(other.depth),
        }
    }

    /// `x²`, error `2|x|e + e²` plus one rounding unit.
    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Exact division by a non-zero integer, plus one rounding unit.
    pub fn div_int(&self, d: &BigInt) -> Self {
        assert!(!d.is_zero(), "division by zero");
        let (num, den) = if d.is_negative() {
            (-&self.mantissa, -d)
        } else {
            (self.mantissa.clone(), d.clone())
        };
        let mantissa = round_div(&num, &den);
        let mut err = ceil_div(&self.err, den.magnitude());
        if !num.is_multiple_of(&den) {
            err += 1u32;
        }
        BigReal {
            mantissa,
            bits: self.bits,
            err,
            depth: self.depth,
        }
    }

    /// `Σ c_k·v_k` with exact integer coefficients; error `Σ |c_k|·e_k`.
    pub fn combination(coeffs: &[&BigInt], values: &[BigReal]) -> Self {
        assert_eq!(coeffs.len(), values.len());
        assert!(!values.is_empty());
        let bits = values[0].bits;
        let mut mantissa = BigInt::zero();
        let mut err = BigUint::zero();
        let mut depth = 0;
        for (c, v) in coeffs.iter().zip(values) {
            assert_eq!(v.bits, bits, "operands must share precision");
            mantissa += *c * &v.mantissa;
            err += c.magnitude() * &v.err;
            depth = depth.max(v.depth);
        }
        BigReal {
            mantissa,
            bits,
            err,
            depth,
        }
    }

    /// Largest absolute value among the entries; error is the largest entry error.
    pub fn max_abs(values: &[BigReal]) -> Self {
        let best = values
            .iter()
            .max_by(|a, b| a.mantissa.magnitude().cmp(b.mantissa.magnitude()))
            .expect("non-empty");
        let err = values.iter().map(|v| &v.err).max().expect("non-empty").clone();
        BigReal {
            mantissa: best.mantissa.abs(),
            bits: best.bits,
            err,
            depth: values.iter().map(|v| v.depth).max().unwrap_or(0),
        }
    }

    /// Re-rounds to fewer fractional bits.
    pub fn truncate_bits(&self, bits: u32) -> Self {
        if bits >= self.bits {
            return self.clone();
        }
        let shift = self.bits - bits;
        let den = BigInt::one() << shift;
        let mantissa = round_div(&self.mantissa, &den);
        let mut err = ceil_div(&self.err, den.magnitude());
        if !self.mantissa.is_multiple_of(&den) {
            err += 1u32;
        }
        BigReal {
            mantissa,
            bits,
            err,
            depth: self.depth,
        }
    }

    /// Decimal rendering rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = round_div(
            &(&self.mantissa * num_traits::pow(BigInt::from(10), digits)),
            &(BigInt::one() << self.bits),
        );
        let negative = scaled.sign() == Sign::Minus;
        let s = scaled.magnitude().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Scientific rendering of the error bound, e.g. `3.1e-1002`.
    pub fn err_string(&self) -> String {
        let l = self.err_log10();
        if l == f64::NEG_INFINITY {
            return "0".into();
        }
        let exp = l.floor();
        let mant = 10f64.powf(l - exp);
        format!("{mant:.1}e{exp}")
    }

    /// Number of decimal places the error bound supports.
    pub fn certified_digits(&self) -> usize {
        let l = self.err_log10();
        if l == f64::NEG_INFINITY {
            return (f64::from(self.bits) * std::f64::consts::LOG10_2) as usize;
        }
        (-l).floor().max(0.0) as usize
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.certified_digits());
        write!(f, "{} ± {}", self.to_decimal(digits), self.err_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent enclosure check: the exact product of the two rational
    /// centres must lie within the propagated bound.
    fn encloses(approx: &BigReal, exact: &Rat) -> bool {
        (approx.to_rat() - exact).abs() <= approx.err_rat()
    }

    #[test]
    fn dyadic_is_exact() {
        let x = BigReal::from_rat(&rat(1, 2), 64);
        assert!(x.is_exact());
        assert!(x.square().is_exact());
        assert_eq!(x.square().to_rat(), rat(1, 4));
    }

    #[test]
    fn thirds_round() {
        let x = BigReal::from_rat(&rat(1, 3), 80);
        assert!(encloses(&x, &rat(1, 3)));
        let x2 = x.square();
        assert!(encloses(&x2, &rat(1, 9)));
        assert_eq!(x.to_decimal(5), "0.33333");
        assert_eq!(BigReal::from_rat(&rat(-2, 3), 80).to_decimal(3), "-0.667");
    }

    #[test]
    fn square_error_bound() {
        // ξ = 2.8744 ± 1e-4 → ξ² = 8.2622 ± about 5.75e-4.
        let xi = BigReal::from_rat(&rat(28744, 10000), 64).with_extra_err(&rat(1, 10000));
        let sq = xi.square();
        let e = sq.err_rat();
        let expected = rat(2 * 28744, 10000) * rat(1, 10000) + rat(1, 100_000_000);
        assert!(e >= expected && e <= expected + rat(1, 1_000_000_000));
        assert_eq!(sq.to_decimal(4), "8.2622");
        for k in [-1i64, 1] {
            let edge = rat(28744, 10000) + rat(k, 10000);
            assert!(encloses(&sq, &(&edge * &edge)));
        }
    }

    #[test]
    fn zero_and_one() {
        let z = BigReal::from_integer(0, 32);
        assert_eq!(z.to_decimal(3), "0.000");
        assert!(!z.is_certified_nonzero());
        let one = BigReal::from_integer(1, 32);
        assert_eq!(one.mul(&one), one);
    }

    #[test]
    fn combination_and_division() {
        let third = BigReal::from_rat(&rat(1, 3), 100);
        let vals = [BigReal::from_integer(1, 100), third.clone(), third.square()];
        let c = [BigInt::from(9), BigInt::from(-3), BigInt::from(-18)];
        let refs: Vec<&BigInt> = c.iter().collect();
        // 9 − 1 − 2 = 6
        let v = BigReal::combination(&refs, &vals);
        assert!(encloses(&v, &rat(6, 1)));
        let q = v.div_int(&BigInt::from(-4));
        assert!(encloses(&q, &rat(-3, 2)));
    }

    #[test]
    fn display_and_digits() {
        let x = BigReal::from_rat(&rat(22, 7), 200).with_extra_err(&rat(2, 1_000_000));
        assert_eq!(x.certified_digits(), 5);
        let s = format!("{x}");
        assert!(s.starts_with("3.14286 ± 2.0e-6"), "{s}");
    }
}
