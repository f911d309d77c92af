//! Exact construction of real numbers of "Fibonacci type" and numerical
//! verification of their uniform approximation exponents.
//!
//! The pipeline runs seeds → symmetrizer → Fibonacci sequence of integer
//! matrices → limit number `ξ` → exponent estimates:
//!
//! * [`linalg`]: exact 2×2 matrices and integer triples.
//! * [`symmetrizer`]: integer `N` making every `w_i·N` / `w_i·Nᵗ` symmetric.
//! * [`sequence`]: the sequences `w_i`, `y_i`, `ẑ_i` and exact identity checks.
//! * [`families`]: the explicit three-parameter family and the `(t, ε)` parameter map.
//! * [`xi`]: `ξ` to any precision, with an error bound.
//! * [`exponents`]: candidate and brute-force estimates of `ω̂₂(ξ)` and `λ̂₂(ξ)`.
//!
//! The guide under `book/` walks through the same pipeline; its code
//! listings are compiled and run as doc-tests of this crate.

pub mod bigreal;
pub mod error;
pub mod exponents;
pub mod families;
pub mod linalg;
pub mod numeric;
pub mod report;
pub mod sequence;
pub mod symmetrizer;
pub mod xi;

pub use bigreal::BigReal;
pub use error::{Error, Result};
pub use families::{TargetParams, FamilyParams};
pub use linalg::{det3, mat_mul, proj_dist, scalar, wedge, Mat2, Rat, SymPoint};
pub use report::{CheckRecord, Report, Status};
pub use sequence::FibSequence;
pub use symmetrizer::{is_admissible, solve_n, SeedPair, SymmetrizerError};

/// The golden ratio `(1 + √5)/2`.
pub const GAMMA: f64 = 1.618_033_988_749_895;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/seeds.md")]
    mod seeds {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/limit.md")]
    mod limit {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
