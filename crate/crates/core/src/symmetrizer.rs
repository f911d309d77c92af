//! Integer symmetrizers for a pair of seed matrices.
//!
//! For seeds `(w0, w1)` we look for `N` such that `w0·N`, `w1·Nᵗ` and
//! `w1·w0·N` are all symmetric. Each condition is one linear equation in the
//! four entries of `N`; when the resulting 3×4 system has rank 3 its kernel
//! is spanned by the vector of signed 3×3 minors. Symmetry of those three
//! products forces symmetry of every `y_i` of the Fibonacci sequence built
//! on the seeds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, SymPoint};

/// Coefficient rows over the unknowns `(n11, n12, n21, n22)`.
pub type SymmetrySystem = [[BigInt; 4]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetrizerError {
    /// The linear system has rank below 3.
    NotInV { rank: usize },
    /// The minor vector gives a singular `N`.
    NotInU,
}

impl fmt::Display for SymmetrizerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetrizerError::NotInV { rank } => {
                write!(f, "NotInV: symmetry system has rank {rank} < 3")
            }
            SymmetrizerError::NotInU => write!(f, "NotInU: symmetrizer from minors has det 0"),
        }
    }
}

impl std::error::Error for SymmetrizerError {}

/// Seeds of a Fibonacci sequence together with a symmetrizer when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPair {
    pub w0: Mat2,
    pub w1: Mat2,
    pub n: Option<Mat2>,
    pub admissible: bool,
    pub reason: Option<SymmetrizerError>,
}

impl SeedPair {
    /// Seeds with a caller-supplied symmetrizer, checked exactly.
    pub fn with_symmetrizer(w0: Mat2, w1: Mat2, n: Mat2) -> Result<Self> {
        check_members(&w0, &w1)?;
        if !n.is_member() {
            return Err(Error::NotAdmissible(SymmetrizerError::NotInU));
        }
        if !symmetrizes(&w0, &w1, &n) {
            return Err(Error::InvalidParams(format!(
                "{n} does not symmetrize w0 = {w0}, w1 = {w1}"
            )));
        }
        Ok(SeedPair {
            w0,
            w1,
            n: Some(n),
            admissible: true,
            reason: None,
        })
    }

    pub fn symmetrizer(&self) -> Result<&Mat2> {
        match (&self.n, self.reason) {
            (Some(n), _) if self.admissible => Ok(n),
            (_, Some(reason)) => Err(Error::NotAdmissible(reason)),
            _ => Err(Error::NotAdmissible(SymmetrizerError::NotInU)),
        }
    }

    /// `w·N` for even `i`, `w·Nᵗ` for odd `i`.
    pub fn symmetric_product(&self, i: usize, w: &Mat2) -> Result<Mat2> {
        let n = self.symmetrizer()?;
        Ok(if i % 2 == 0 { w * n } else { w * &n.transpose() })
    }
}

/// Row expressing `P₁₂ = P₂₁` for `P = a·N`.
fn right_row(a: &Mat2) -> [BigInt; 4] {
    [-&a.e21, a.e11.clone(), -&a.e22, a.e12.clone()]
}

/// Row expressing `P₁₂ = P₂₁` for `P = a·Nᵗ`.
fn right_transposed_row(a: &Mat2) -> [BigInt; 4] {
    [-&a.e21, -&a.e22, a.e11.clone(), a.e12.clone()]
}

pub fn build_system(w0: &Mat2, w1: &Mat2) -> SymmetrySystem {
    let w10 = w1 * w0;
    [right_row(w0), right_transposed_row(w1), right_row(&w10)]
}

/// Rank by fraction-free elimination.
pub fn rank(system: &SymmetrySystem) -> usize {
    let mut rows: Vec<Vec<BigInt>> = system.iter().map(|r| r.to_vec()).collect();
    let ncols = 4;
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let g = prow[col].gcd(&row[col]);
            let mp = &row[col] / &g;
            let mr = &prow[col] / &g;
            for (dst, src) in row.iter_mut().zip(prow.iter()) {
                *dst = &*dst * &mr - src * &mp;
            }
            let c = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            if c > BigInt::from(1) {
                row.iter_mut().for_each(|v| *v = &*v / &c);
            }
        }
        r += 1;
    }
    r
}

fn det3x3(m: [[&BigInt; 3]; 3]) -> BigInt {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Signed 3×3 minors `(-1)^j · det(system without column j)`.
pub fn minor_vector(system: &SymmetrySystem) -> [BigInt; 4] {
    std::array::from_fn(|j| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let sub: [[&BigInt; 3]; 3] =
            std::array::from_fn(|r| std::array::from_fn(|k| &system[r][cols[k]]));
        let d = det3x3(sub);
        if j % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

fn symmetrizes(w0: &Mat2, w1: &Mat2, n: &Mat2) -> bool {
    (w0 * n).is_symmetric() && (w1 * &n.transpose()).is_symmetric() && (&(w1 * w0) * n).is_symmetric()
}

fn check_members(w0: &Mat2, w1: &Mat2) -> Result<()> {
    if w0.is_member() && w1.is_member() {
        Ok(())
    } else {
        Err(Error::Singular)
    }
}

/// Canonical symmetrizer from the signed minors: primitive, first non-zero
/// entry positive.
pub fn solve_n(w0: &Mat2, w1: &Mat2) -> std::result::Result<Mat2, SymmetrizerError> {
    let system = build_system(w0, w1);
    let r = rank(&system);
    if r < 3 {
        return Err(SymmetrizerError::NotInV { rank: r });
    }
    let v = minor_vector(&system);
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    debug_assert!(!g.is_zero(), "rank 3 implies a non-zero minor");
    let sign_flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if sign_flip { -g } else { g };
    let n = Mat2::new(&v[0] / &g, &v[1] / &g, &v[2] / &g, &v[3] / &g);
    if !n.is_member() {
        return Err(SymmetrizerError::NotInU);
    }
    assert!(symmetrizes(w0, w1, &n), "kernel vector must symmetrize the seeds");
    Ok(n)
}

/// Decides admissibility of the Fibonacci sequence built on `(w0, w1)`.
pub fn is_admissible(w0: &Mat2, w1: &Mat2) -> Result<SeedPair> {
    check_members(w0, w1)?;
    let (n, reason) = match solve_n(w0, w1) {
        Ok(n) => (Some(n), None),
        Err(e) => (None, Some(e)),
    };
    Ok(SeedPair {
        w0: w0.clone(),
        w1: w1.clone(),
        admissible: n.is_some(),
        n,
        reason,
    })
}

/// `y_i` for the first `count` indices, computed from the definition.
pub fn symmetric_points(seed: &SeedPair, count: usize) -> Result<Vec<SymPoint>> {
    let mut ws = vec![seed.w0.clone(), seed.w1.clone()];
    while ws.len() < count {
        let next = &ws[ws.len() - 1] * &ws[ws.len() - 2];
        ws.push(next);
    }
    ws.iter()
        .take(count)
        .enumerate()
        .map(|(i, w)| {
            seed.symmetric_product(i, w)?
                .to_sym()
                .ok_or_else(|| Error::Degenerate(format!("y_{i} is not symmetric")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_seeds() -> (Mat2, Mat2) {
        (Mat2::from_rows([[1, 1], [2, 4]]), Mat2::from_rows([[1, 2], [2, 6]]))
    }

    #[test]
    fn closed_form_satisfies_system() {
        let (w0, w1) = sample_seeds();
        let system = build_system(&w0, &w1);
        let n = [11, -4, -6, 2].map(BigInt::from);
        for row in &system {
            let s: BigInt = row.iter().zip(&n).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        assert_eq!(rank(&system), 3);
    }

    #[test]
    fn solves_example_family() {
        let (w0, w1) = sample_seeds();
        assert_eq!(solve_n(&w0, &w1).unwrap(), Mat2::from_rows([[11, -4], [-6, 2]]));
    }

    #[test]
    fn identity_seeds_are_rank_deficient() {
        let i = Mat2::identity();
        let system = build_system(&i, &i);
        assert_eq!(rank(&system), 1);
        assert_eq!(solve_n(&i, &i), Err(SymmetrizerError::NotInV { rank: 1 }));
        let seed = is_admissible(&i, &i).unwrap();
        assert!(!seed.admissible);
        assert_eq!(seed.reason, Some(SymmetrizerError::NotInV { rank: 1 }));
    }

    #[test]
    fn unimodular_witness_point() {
        let w0 = Mat2::from_rows([[1, 1], [1, 0]]);
        let w1 = Mat2::from_rows([[0, 1], [1, 0]]);
        assert_eq!(rank(&build_system(&w0, &w1)), 3);
        let n = solve_n(&w0, &w1).unwrap();
        assert!(n.is_member());
        assert_eq!(n, Mat2::from_rows([[1, 0], [-1, 1]]));
    }

    #[test]
    fn alternation_keeps_symmetry() {
        let (w0, w1) = sample_seeds();
        let seed = is_admissible(&w0, &w1).unwrap();
        let ys = symmetric_points(&seed, 16).unwrap();
        assert_eq!(ys[2], SymPoint::new(1, -2, -4));
    }

    #[test]
    fn singular_seed_rejected() {
        let s = Mat2::from_rows([[1, 2], [2, 4]]);
        assert_eq!(is_admissible(&s, &Mat2::identity()), Err(Error::Singular));
    }
}
