//! Exact arithmetic on 2×2 integer matrices and integer triples.
//!
//! An integer triple `(x0, x1, x2)` doubles as the symmetric matrix
//! `[[x0, x1], [x1, x2]]`. All norms are sup norms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact reduced rational with positive denominator.
pub type Rat = BigRational;

/// A 2×2 matrix with arbitrary-precision integer entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub e11: BigInt,
    pub e12: BigInt,
    pub e21: BigInt,
    pub e22: BigInt,
}

impl Mat2 {
    pub fn new(
        e11: impl Into<BigInt>,
        e12: impl Into<BigInt>,
        e21: impl Into<BigInt>,
        e22: impl Into<BigInt>,
    ) -> Self {
        Mat2 {
            e11: e11.into(),
            e12: e12.into(),
            e21: e21.into(),
            e22: e22.into(),
        }
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// `[[0, 1], [-1, 0]]`
    pub fn j() -> Self {
        Mat2::new(0, 1, -1, 0)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn det(&self) -> BigInt {
        &self.e11 * &self.e22 - &self.e12 * &self.e21
    }

    pub fn trace(&self) -> BigInt {
        &self.e11 + &self.e22
    }

    /// Member of the monoid of integer matrices with non-zero determinant.
    pub fn is_member(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn transpose(&self) -> Self {
        Mat2 {
            e11: self.e11.clone(),
            e12: self.e21.clone(),
            e21: self.e12.clone(),
            e22: self.e22.clone(),
        }
    }

    /// Classical adjoint: `self * adj = det * I`.
    pub fn adjugate(&self) -> Self {
        Mat2 {
            e11: self.e22.clone(),
            e12: -&self.e12,
            e21: -&self.e21,
            e22: self.e11.clone(),
        }
    }

    /// Largest absolute value of the four entries.
    pub fn norm(&self) -> BigInt {
        sup_abs(self.entries())
    }

    pub fn content(&self) -> Result<BigInt> {
        gcd_all(self.entries())
    }

    pub fn is_primitive(&self) -> bool {
        self.content().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.e12 == self.e21
    }

    /// The triple `(e11, e12, e22)` when the matrix is symmetric.
    pub fn to_sym(&self) -> Option<SymPoint> {
        self.is_symmetric().then(|| SymPoint {
            x0: self.e11.clone(),
            x1: self.e12.clone(),
            x2: self.e22.clone(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Mat2 {
            e11: &self.e11 * k,
            e12: &self.e12 * k,
            e21: &self.e21 * k,
            e22: &self.e22 * k,
        }
    }

    /// `a/b` entrywise when `self = (a/b)·other` for some non-zero rational,
    /// `None` otherwise (including when either matrix is zero).
    pub fn proportionality(&self, other: &Mat2) -> Option<Rat> {
        let mine = self.entries();
        let pivot = mine
            .iter()
            .zip(other.entries())
            .find(|(a, b)| !a.is_zero() || !b.is_zero())?;
        if pivot.0.is_zero() || pivot.1.is_zero() {
            return None;
        }
        let ratio = Rat::new((*pivot.0).clone(), pivot.1.clone());
        let scaled_ok = self
            .entries()
            .iter()
            .zip(other.entries())
            .all(|(a, b)| Rat::from_integer((*a).clone()) == &ratio * Rat::from_integer(b.clone()));
        scaled_ok.then_some(ratio)
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            e11: &self.e11 * &rhs.e11 + &self.e12 * &rhs.e21,
            e12: &self.e11 * &rhs.e12 + &self.e12 * &rhs.e22,
            e21: &self.e21 * &rhs.e11 + &self.e22 * &rhs.e21,
            e22: &self.e21 * &rhs.e12 + &self.e22 * &rhs.e22,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e11, self.e12, self.e21, self.e22)
    }
}

/// Exact product `a·b`.
pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    a * b
}

/// An integer triple, identified with the symmetric matrix `[[x0, x1], [x1, x2]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymPoint {
    pub x0: BigInt,
    pub x1: BigInt,
    pub x2: BigInt,
}

impl SymPoint {
    pub fn new(x0: impl Into<BigInt>, x1: impl Into<BigInt>, x2: impl Into<BigInt>) -> Self {
        SymPoint {
            x0: x0.into(),
            x1: x1.into(),
            x2: x2.into(),
        }
    }

    pub fn zero() -> Self {
        SymPoint::new(0, 0, 0)
    }

    pub fn coords(&self) -> [&BigInt; 3] {
        [&self.x0, &self.x1, &self.x2]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    /// `x0·x2 − x1²`
    pub fn det(&self) -> BigInt {
        &self.x0 * &self.x2 - &self.x1 * &self.x1
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2 {
            e11: self.x0.clone(),
            e12: self.x1.clone(),
            e21: self.x1.clone(),
            e22: self.x2.clone(),
        }
    }

    pub fn norm(&self) -> BigInt {
        sup_abs(self.coords())
    }

    pub fn content(&self) -> Result<BigInt> {
        gcd_all(self.coords())
    }

    pub fn is_primitive(&self) -> bool {
        self.content().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        SymPoint {
            x0: &self.x0 * k,
            x1: &self.x1 * k,
            x2: &self.x2 * k,
        }
    }

    /// Exact division of every coordinate; `None` if `k` does not divide them all.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (slot, c) in out.iter_mut().zip(self.coords()) {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            *slot = q;
        }
        let [x0, x1, x2] = out;
        Some(SymPoint { x0, x1, x2 })
    }

    /// Sign-normalized so that the first non-zero coordinate is positive.
    pub fn canonical(&self) -> Self {
        match self.coords().into_iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Divided by its content and sign-normalized.
    pub fn reduced(&self) -> Result<Self> {
        let g = self.content()?;
        Ok(self.div_exact(&g).expect("content divides every coordinate").canonical())
    }
}

impl Add for &SymPoint {
    type Output = SymPoint;

    fn add(self, rhs: &SymPoint) -> SymPoint {
        SymPoint {
            x0: &self.x0 + &rhs.x0,
            x1: &self.x1 + &rhs.x1,
            x2: &self.x2 + &rhs.x2,
        }
    }
}

impl Sub for &SymPoint {
    type Output = SymPoint;

    fn sub(self, rhs: &SymPoint) -> SymPoint {
        SymPoint {
            x0: &self.x0 - &rhs.x0,
            x1: &self.x1 - &rhs.x1,
            x2: &self.x2 - &rhs.x2,
        }
    }
}

impl Neg for &SymPoint {
    type Output = SymPoint;

    fn neg(self) -> SymPoint {
        SymPoint {
            x0: -&self.x0,
            x1: -&self.x1,
            x2: -&self.x2,
        }
    }
}

impl fmt::Display for SymPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x0, self.x1, self.x2)
    }
}

/// Standard vector product.
pub fn wedge(x: &SymPoint, y: &SymPoint) -> SymPoint {
    SymPoint {
        x0: &x.x1 * &y.x2 - &x.x2 * &y.x1,
        x1: &x.x2 * &y.x0 - &x.x0 * &y.x2,
        x2: &x.x0 * &y.x1 - &x.x1 * &y.x0,
    }
}

/// Standard scalar product.
pub fn scalar(x: &SymPoint, y: &SymPoint) -> BigInt {
    &x.x0 * &y.x0 + &x.x1 * &y.x1 + &x.x2 * &y.x2
}

/// Determinant of the 3×3 matrix with rows `x`, `y`, `z`.
pub fn det3(x: &SymPoint, y: &SymPoint, z: &SymPoint) -> BigInt {
    scalar(x, &wedge(y, z))
}

pub fn content(x: &SymPoint) -> Result<BigInt> {
    x.content()
}

pub fn is_primitive(x: &SymPoint) -> bool {
    x.is_primitive()
}

/// `‖x∧y‖ / (‖x‖·‖y‖)`, exact.
pub fn proj_dist(x: &SymPoint, y: &SymPoint) -> Result<Rat> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroPoint);
    }
    Ok(Rat::new(wedge(x, y).norm(), x.norm() * y.norm()))
}

fn sup_abs<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> Result<BigInt> {
    let g = values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        Err(Error::ZeroContent)
    } else {
        Ok(g)
    }
}
