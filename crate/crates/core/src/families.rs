//! The explicit three-parameter family of admissible seeds and the map from a
//! target exponent `t` (with slack `ε`) to family parameters.
//!
//! For integers `a ≥ 2`, `c ≥ b ≥ 1`:
//!
//! ```text
//! w0 = [[1, b], [a, a(b+1)]]      w1 = [[1, c], [a, a(c+1)]]
//! N  = [[-1 + a(b+1)(c+1), -a(b+1)], [-a(c+1), a]]
//! ```
//!
//! with `det w0 = det w1 = a` and `det N = -a`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{wedge, Mat2};
use crate::numeric::{brief, ln_abs};
use crate::report::Report;
use crate::sequence::{det_magnitude_formula, DetExponents, FibSequence};
use crate::symmetrizer::{solve_n, SeedPair, SymmetrizerError};
use crate::GAMMA;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl FamilyParams {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        if a < BigInt::from(2) || b < BigInt::one() || c < b {
            return Err(Error::InvalidParams(format!(
                "family needs a ≥ 2 and c ≥ b ≥ 1, got ({a}, {b}, {c})"
            )));
        }
        Ok(FamilyParams { a, b, c })
    }

    pub fn w0(&self) -> Mat2 {
        let (a, b) = (&self.a, &self.b);
        Mat2::new(1, b.clone(), a.clone(), a * (b + 1u32))
    }

    pub fn w1(&self) -> Mat2 {
        let (a, c) = (&self.a, &self.c);
        Mat2::new(1, c.clone(), a.clone(), a * (c + 1u32))
    }

    pub fn closed_form_n(&self) -> Mat2 {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let b1 = b + 1u32;
        let c1 = c + 1u32;
        Mat2::new(a * &b1 * &c1 - 1u32, -(a * &b1), -(a * &c1), a.clone())
    }

    /// `c = b` forces `y0 = y1` and `det(y0, y1, y2) = 0`.
    pub fn is_degenerate(&self) -> bool {
        self.b == self.c
    }

    /// Lower determinant-growth exponent `log a / log(2a(c+1))`.
    pub fn alpha(&self) -> f64 {
        let denom = &self.a * (&self.c + 1u32) * 2u32;
        ln_abs(&self.a) / ln_abs(&denom)
    }

    /// Upper determinant-growth exponent `log a / log(a(b+1))`.
    pub fn beta(&self) -> f64 {
        let denom = &self.a * (&self.b + 1u32);
        ln_abs(&self.a) / ln_abs(&denom)
    }

    pub fn det_exponents(&self) -> DetExponents {
        DetExponents {
            alpha: self.alpha(),
            beta: self.beta(),
        }
    }

    /// `det(y0, y1, y2) = a⁴(c − b)`
    pub fn expected_d3(&self) -> BigInt {
        num_traits::pow(self.a.clone(), 4) * (&self.c - &self.b)
    }
}

impl std::fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Seeds and closed-form symmetrizer of the family, cross-checked against the
/// minor-based solver.
pub fn family_seed(p: &FamilyParams) -> Result<SeedPair> {
    let (w0, w1, n) = (p.w0(), p.w1(), p.closed_form_n());
    assert_eq!(w0.det(), p.a, "det w0 = a");
    assert_eq!(w1.det(), p.a, "det w1 = a");
    assert_eq!(n.det(), -&p.a, "det N = -a");
    let seed = SeedPair::with_symmetrizer(w0.clone(), w1.clone(), n.clone())?;
    match solve_n(&w0, &w1) {
        Ok(solved) if solved.proportionality(&n).is_some() => Ok(seed),
        Ok(solved) => Err(Error::InvalidParams(format!(
            "solver symmetrizer {solved} is not proportional to {n}"
        ))),
        // c = b: the symmetry system has rank 2 and the closed form is one
        // of several solutions.
        Err(SymmetrizerError::NotInV { .. }) if p.is_degenerate() => Ok(seed),
        Err(e) => Err(Error::NotAdmissible(e)),
    }
}

/// The sequence generated by the family seeds.
pub fn family_sequence(p: &FamilyParams) -> Result<FibSequence> {
    FibSequence::new(family_seed(p)?)
}

/// Family-specific facts for `0 ≤ i ≤ i_max`: `det(y0,y1,y2) = a⁴(c−b)`,
/// `det N = −a`, `|det w_i| = a^{F_i}`, `a⁻¹z_i` integral (primitive when
/// `c = b + 1`) and `z_i ∧ z_{i+1} = (−1)^i a²(c−b) y_{i+1}`.
pub fn family_checks(seq: &FibSequence, p: &FamilyParams, i_max: usize) -> Report {
    let mut report = Report::new();
    let d3 = p.expected_d3();
    report.check("family.d3", 0, *seq.d3() == d3, format!("det(y0,y1,y2) = {}", seq.d3()));
    let det_n = seq.symmetrizer().det();
    report.check("family.detN", 0, det_n == -&p.a, format!("det N = {det_n}"));

    // a⁻¹ z_i = ẑ_i / (a·det w_2) with det w_2 = a².
    let scale = &p.a * seq.det(2);
    let primitive_expected = &p.c == &(&p.b + 1u32);
    let cross = num_traits::pow(p.a.clone(), 2) * (&p.c - &p.b);
    for i in 0..=i_max.min(seq.depth()) {
        let fib_pow = det_magnitude_formula(seq, i);
        report.check(
            "family.det-power",
            i,
            seq.det(i).abs() == fib_pow,
            format!("|det w_{i}| = {}", brief(seq.det(i))),
        );

        let reduced = seq.zhat(i).div_exact(&scale);
        let ok = match &reduced {
            Some(z) => !primitive_expected || z.is_primitive(),
            None => false,
        };
        report.check(
            "family.z-over-a",
            i,
            ok,
            format!(
                "a⁻¹z_{i} integral{}",
                if primitive_expected { " and primitive" } else { "" }
            ),
        );

        if i < seq.depth() {
            if let (Some(z0), Some(z1)) = (reduced, seq.zhat(i + 1).div_exact(&scale)) {
                // a⁻¹z_i ∧ a⁻¹z_{i+1} = a⁻² z_i∧z_{i+1} = ±(c−b) y_{i+1}
                let lhs = wedge(&z0, &z1).scale(&num_traits::pow(p.a.clone(), 2));
                let s = if i % 2 == 0 { cross.clone() } else { -cross.clone() };
                report.check(
                    "family.z-wedge",
                    i,
                    lhs == seq.y(i + 1).scale(&s),
                    format!("z_{i}∧z_{} = {}·y_{}", i + 1, s, i + 1),
                );
            }
        }
    }
    report
}

/// `(γ² − γβ, γ² − γα)`
pub fn target_interval_for(alpha: f64, beta: f64) -> (f64, f64) {
    let g2 = GAMMA * GAMMA;
    (g2 - GAMMA * beta, g2 - GAMMA * alpha)
}

/// Parameters realizing a target `ω̂₂` near `γ² − γt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetParams {
    /// Absent when built directly from `(k, ℓ)`.
    pub t: Option<f64>,
    pub eps: Option<f64>,
    pub k: u32,
    pub l: u32,
    pub family: FamilyParams,
    /// Sharper lower exponent `log a / log(2a(c+1))`.
    pub alpha: f64,
    /// `ℓ/(k+2)`, the coarser lower exponent.
    pub alpha_coarse: f64,
    /// `ℓ/k`
    pub beta: f64,
}

impl TargetParams {
    /// Family `a = 2^ℓ`, `b = 2^{k−ℓ} − 1`, `c = 2^{k−ℓ}`.
    pub fn from_kl(k: u32, l: u32) -> Result<Self> {
        if l == 0 || l >= k {
            return Err(Error::InvalidParams(format!("need 0 < ℓ < k, got k = {k}, ℓ = {l}")));
        }
        let a = BigInt::one() << l;
        let c = BigInt::one() << (k - l);
        let b = &c - 1u32;
        let family = FamilyParams::new(a, b, c)?;
        Ok(TargetParams {
            t: None,
            eps: None,
            k,
            l,
            alpha: family.alpha(),
            alpha_coarse: f64::from(l) / f64::from(k + 2),
            beta: f64::from(l) / f64::from(k),
            family,
        })
    }

    /// Whether `β < γ⁻²`, the hypothesis under which the target interval is proven.
    pub fn in_proven_range(&self) -> bool {
        self.beta < 1.0 / (GAMMA * GAMMA)
    }
}

/// Upper limit on `k` in the parameter scan; far beyond anything `t < γ⁻²`,
/// `ε ≥ 1e-9` requires.
const MAX_K: u32 = 1 << 24;

/// Smallest `k` (then smallest `ℓ`) with `0 < ℓ < k` and
/// `t − ε ≤ ℓ/(k+2) ≤ ℓ/k < t`.
pub fn params_for_target(t: f64, eps: f64) -> Result<TargetParams> {
    let upper = 1.0 / (GAMMA * GAMMA);
    if !(t > 0.0 && t < upper) || !(eps > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need 0 < t < γ⁻² ≈ {upper:.6} and ε > 0, got t = {t}, ε = {eps}"
        )));
    }
    for k in 2..MAX_K {
        let kf = f64::from(k);
        // ℓ/k < t and ℓ/(k+2) ≥ t − ε bound ℓ from both sides.
        let l_max = ((t * kf).ceil() as u32).saturating_sub(1).min(k - 1);
        let l_min = (((t - eps) * (kf + 2.0)).ceil().max(1.0)) as u32;
        for l in l_min..=l_max {
            let lf = f64::from(l);
            if t - eps <= lf / (kf + 2.0) && lf / kf < t {
                let mut p = TargetParams::from_kl(k, l)?;
                p.t = Some(t);
                p.eps = Some(eps);
                return Ok(p);
            }
        }
    }
    Err(Error::InvalidParams(format!("no (k, ℓ) with k < {MAX_K} for t = {t}, ε = {eps}")))
}

/// `(γ² − γβ, γ² − γα)` using the sharper `α`.
pub fn target_interval(p: &TargetParams) -> (f64, f64) {
    target_interval_for(p.alpha, p.beta)
}

/// `k` and `ℓ` as small integers when the family comes from them.
pub fn kl_of(p: &FamilyParams) -> Option<(u32, u32)> {
    let a = &p.a;
    if !(a & (a - 1u32)).is_zero() || &p.c != &(&p.b + 1u32) {
        return None;
    }
    let c = &p.c;
    if !(c & (c - 1u32)).is_zero() {
        return None;
    }
    let l = a.bits().checked_sub(1)?.to_u32()?;
    let kl = c.bits().checked_sub(1)?.to_u32()?;
    (l > 0 && kl > 0).then_some((l + kl, l))
}

/// `gcd(a, tr w)`-style sanity: each family seed has coprime trace and determinant.
pub fn seeds_coprime(p: &FamilyParams) -> bool {
    [p.w0(), p.w1()].iter().all(|w| w.trace().gcd(&w.det()).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_212() {
        let p = FamilyParams::new(2, 1, 2).unwrap();
        let seed = family_seed(&p).unwrap();
        assert_eq!(seed.w0, Mat2::from_rows([[1, 1], [2, 4]]));
        assert_eq!(seed.w1, Mat2::from_rows([[1, 2], [2, 6]]));
        assert_eq!(seed.n.unwrap(), Mat2::from_rows([[11, -4], [-6, 2]]));
    }

    #[test]
    fn solver_matches_closed_form_exactly() {
        for (a, b, c) in [(2, 1, 2), (4, 1, 2), (2, 3, 4), (3, 2, 7), (8, 31, 32)] {
            let p = FamilyParams::new(a, b, c).unwrap();
            assert_eq!(solve_n(&p.w0(), &p.w1()).unwrap(), p.closed_form_n());
        }
    }

    #[test]
    fn degenerate_family() {
        let p = FamilyParams::new(2, 1, 1).unwrap();
        assert!(p.is_degenerate());
        let seq = family_sequence(&p);
        if let Ok(seq) = seq {
            assert_eq!(seq.y(0), seq.y(1));
            assert!(seq.d3().is_zero());
        }
    }

    #[test]
    fn d3_formula() {
        let p = FamilyParams::new(4, 1, 2).unwrap();
        let seq = family_sequence(&p).unwrap();
        assert_eq!(*seq.d3(), BigInt::from(256));
    }

    #[test]
    fn invalid_family() {
        assert!(FamilyParams::new(1, 1, 1).is_err());
        assert!(FamilyParams::new(2, 3, 2).is_err());
        assert!(FamilyParams::new(2, 0, 2).is_err());
    }

    #[test]
    fn target_example() {
        let p = params_for_target(0.35, 0.2).unwrap();
        assert_eq!((p.k, p.l), (3, 1));
        assert_eq!(p.family, FamilyParams::new(2, 3, 4).unwrap());
        assert!((p.beta - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.family.beta() - p.beta).abs() < 1e-12);
        assert_eq!(kl_of(&p.family), Some((3, 1)));
    }

    /// Brute-force scan over `k ≤ 1000`, written independently of the
    /// bounded search in `params_for_target`.
    fn scan(t: f64, eps: f64) -> Option<(u32, u32)> {
        (2..=1000u32).find_map(|k| {
            (1..k).find_map(|l| {
                let (lf, kf) = (f64::from(l), f64::from(k));
                (t - eps <= lf / (kf + 2.0) && lf / kf < t).then_some((k, l))
            })
        })
    }

    #[test]
    fn target_matches_scan() {
        for (t, eps) in [(0.30, 0.05), (0.35, 0.2), (0.1, 0.01), (0.2, 0.03), (0.381, 0.002)] {
            let p = params_for_target(t, eps).unwrap();
            assert_eq!(Some((p.k, p.l)), scan(t, eps), "t = {t}, eps = {eps}");
            let (lf, kf) = (f64::from(p.l), f64::from(p.k));
            assert!(t - eps <= lf / (kf + 2.0) && lf / kf < t);
        }
    }

    #[test]
    fn target_near_upper_end() {
        let t = 1.0 / (GAMMA * GAMMA) - 1e-6;
        let p = params_for_target(t, 1e-3).unwrap();
        assert!(p.beta < t);
        let (lo, hi) = target_interval(&p);
        assert!(lo > 2.0 && lo < 2.0 + 0.01, "lo = {lo}");
        assert!(hi >= lo);
    }

    #[test]
    fn target_rejects_out_of_range() {
        assert!(params_for_target(0.0, 0.1).is_err());
        assert!(params_for_target(0.39, 0.1).is_err());
        assert!(params_for_target(0.2, 0.0).is_err());
    }

    #[test]
    fn target_intervals() {
        let (lo, hi) = target_interval_for(2f64.ln() / 20f64.ln(), 1.0 / 3.0);
        assert!((lo - 2.078_689_325_833_263).abs() < 1e-12);
        assert!((hi - 2.243_656_175_601_187).abs() < 1e-12);
        let (lo, hi) = target_interval_for(0.0, 0.0);
        assert!((lo - GAMMA * GAMMA).abs() < 1e-15 && (hi - GAMMA * GAMMA).abs() < 1e-15);

        let p = TargetParams::from_kl(3, 1).unwrap();
        let (lo, hi) = target_interval(&p);
        assert!((lo - 2.078_689_325_833_263).abs() < 1e-12);
        assert!((hi - 2.243_656_175_601_187).abs() < 1e-12);
    }

    #[test]
    fn seeds_have_coprime_trace_and_det() {
        for (a, b, c) in [(2, 1, 2), (4, 1, 2), (2, 3, 4), (6, 5, 9)] {
            assert!(seeds_coprime(&FamilyParams::new(a, b, c).unwrap()));
        }
    }
}
