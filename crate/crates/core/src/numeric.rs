//! Floating-point views of huge integers.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// `ln |x|`, `-inf` for zero. Accurate to about 1e-15 relative for any size.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = x.abs();
    let bits = a.bits();
    let shift = bits.saturating_sub(64);
    let top = (a >> shift).to_u64().expect("at most 64 bits remain");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Abbreviated decimal rendering for report witnesses.
pub fn brief(x: &BigInt) -> String {
    let s = x.to_string();
    if s.len() <= 40 {
        s
    } else {
        let digits = s.trim_start_matches('-').len();
        format!("{}…{} ({digits} digits)", &s[..12], &s[s.len() - 6..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_powers_of_ten() {
        let x = BigInt::from(10).pow(500);
        let expected = 500.0 * 10f64.ln();
        assert!((ln_abs(&x) - expected).abs() < 1e-9 * expected);
        assert!((ln_abs(&BigInt::from(-7)) - 7f64.ln()).abs() < 1e-15);
        assert_eq!(ln_abs(&BigInt::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn brief_shortens() {
        assert_eq!(brief(&BigInt::from(-12345)), "-12345");
        let long = brief(&BigInt::from(10).pow(60));
        assert!(long.contains("(61 digits)"));
    }
}
